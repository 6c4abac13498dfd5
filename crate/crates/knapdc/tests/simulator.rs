use knapdc::simulator::*;
use knapdc_core::analytics::ExpectationReport;

fn small_campaign(threads: usize) -> (EmpiricalSummary, Vec<u8>, Vec<u8>) {
    let mut cfg = CampaignConfig::new(15, 9, vec![1, 2]);
    cfg.trials = Some(300);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    let summary = pool.install(|| run_campaign(&cfg)).unwrap();
    let verdicts = compare(&ExpectationReport::new(15), &summary);
    let mut a = Vec::new();
    write_summary_csv(&mut a, &summary, &verdicts).unwrap();
    let mut b = Vec::new();
    write_trees_csv(&mut b, &summary).unwrap();
    (summary, a, b)
}

#[test]
fn trial_plans() {
    let got: Vec<u64> = [63, 127, 255, 511, 1023]
        .map(|d| plan_trials(d).trials)
        .to_vec();
    assert_eq!(got, vec![1127, 1152, 1165, 1171, 1174]);
    let one = plan_trials(1);
    assert_eq!((one.variance, one.trials), (0.0, 1));
}

#[test]
fn stats_from_samples() {
    let s = Stat::from_samples(&[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(s.mean, 2.5);
    assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
    assert!((s.half_width - 1.96 * (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    assert_eq!(Stat::from_samples(&[7.0]).variance, 0.0);
}

#[test]
fn thread_count_does_not_change_output() {
    let (s1, a1, b1) = small_campaign(1);
    let (s4, a4, b4) = small_campaign(4);
    assert_eq!(s1, s4);
    assert_eq!(a1, a4);
    assert_eq!(b1, b4);
    assert_eq!(s1.trials, 300);
    for row in &s1.trees {
        assert_eq!(row.structure_violations, 0);
        assert_eq!(row.pair_violations, 0);
        assert_eq!(row.below_half_with_root_gate, 0);
    }
}

#[test]
fn csv_headers_are_stable() {
    let (_, a, b) = small_campaign(2);
    let a = String::from_utf8(a).unwrap();
    let b = String::from_utf8(b).unwrap();
    assert_eq!(
        a.lines().next().unwrap(),
        "variable,mean,variance,half_width,n,analytic,inside,gating"
    );
    assert_eq!(a.lines().count(), 1 + VARIABLES.len());
    assert_eq!(
        b.lines().next().unwrap(),
        "height,rho,rho_ef,rho_lp,lb_gr,lb_ef,rho_trial_mean,rho_ef_trial_mean,rho_lp_trial_mean,\
lb_gr_trial_mean,lb_ef_trial_mean,gated_rho,below_half,below_half_with_root_gate,root_refusals,\
gated_trials,structure_violations,pair_violations"
    );
}

#[test]
fn height_zero_is_exact() {
    let mut cfg = CampaignConfig::new(15, 3, vec![0]);
    cfg.trials = Some(50);
    let s = run_campaign(&cfg).unwrap();
    assert_eq!(s.trees[0].ratio_of_means[..3], [100.0; 3]);
    assert_eq!(s.trees[0].gated_rho, 100.0);
}

#[test]
fn corrupted_closed_form_is_flagged() {
    let (summary, _, _) = small_campaign(2);
    let mut report = ExpectationReport::new(15);
    let sd = summary.stat("S").unwrap().half_width / 1.96;
    report.e_split += 10.0 * sd;
    let verdicts = compare(&report, &summary);
    let s = verdicts.iter().find(|v| v.variable == "S").unwrap();
    assert!(!s.inside && s.gating);
    assert!(!verdicts_pass(&verdicts));
}

#[test]
fn capacity_one_is_degenerate() {
    let mut cfg = CampaignConfig::new(1, 4, vec![]);
    cfg.trials = Some(20);
    let summary = run_campaign(&cfg).unwrap();
    let verdicts = compare(&ExpectationReport::new(1), &summary);
    assert!(verdicts.iter().all(|v| v.inside), "{verdicts:#?}");
    for name in ["S", "K", "C_lt", "C_rt"] {
        let st = summary.stat(name).unwrap();
        assert_eq!(st.variance, 0.0, "{name}");
        assert_eq!(st.half_width, 0.0);
    }
    assert_eq!(summary.stat("S").unwrap().mean, 2.0);
}
