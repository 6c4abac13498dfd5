use knapdc_core::analytics::exact;
use knapdc_core::analytics::*;
use knapdc_core::dnc::Side;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn enumeration_agrees_exactly() {
    for delta in 1..=5 {
        let mismatches = exact::cross_check(delta).unwrap();
        assert!(mismatches.is_empty(), "delta={delta}: {mismatches:?}");
    }
}

#[test]
fn hand_checked_small_laws() {
    assert!((split_probability(2, 2) - 0.75).abs() < 1e-15);
    assert!((split_probability(2, 3) - 0.25).abs() < 1e-15);
    assert!((split_mean(2) - 2.25).abs() < 1e-15);
    assert_eq!(split_mean(1), 2.0);
    assert!((slack_probability(2, 0) - 0.75).abs() < 1e-15);
    assert!(slack_mean(1).abs() < 1e-12);
    assert!((joint_slack_split(2, 0, 2) - 0.5).abs() < 1e-15);
    assert_eq!(slack_mean_given_split(7, 3), 1.25);
    assert_eq!(weight_mean_given_split(7, 3), 2.875);
    assert!((weight_mean_given_split(2, 2) - 5.0 / 3.0).abs() < 1e-15);
    assert!((greedy_mean(1) - 1.0).abs() < 1e-12);
    assert!(matches!(
        joint_checked(7, 6, 3),
        Err(AnalyticsError::OutOfRange { .. })
    ));
    assert!(joint_checked(7, 2, 3).is_ok());
}

#[test]
fn exact_laws_normalize() {
    for delta in 1..=12u64 {
        let split: BigRational = (0..=delta + 1)
            .map(|s| exact::split_probability(delta, s))
            .sum();
        let slack: BigRational = (0..=delta)
            .map(|k| exact::slack_probability(delta, k))
            .sum();
        let mut joint = BigRational::from_integer(0.into());
        for s in 2..=delta + 1 {
            for k in 0..=delta {
                joint += exact::joint_slack_split(delta, k, s);
            }
        }
        assert!(
            split.is_one() && slack.is_one() && joint.is_one(),
            "delta={delta}"
        );
    }
}

#[test]
fn float_laws_normalize() {
    for delta in [1u64, 2, 7, 12, 31, 63, 200, 1000] {
        let split: f64 = split_distribution(delta).iter().sum();
        let slack: f64 = slack_distribution(delta).iter().sum();
        assert!(
            (split - 1.0).abs() < 1e-9 && (slack - 1.0).abs() < 1e-9,
            "delta={delta}"
        );
        if delta <= 200 {
            assert!((joint_mass(delta) - 1.0).abs() < 1e-9);
        }
    }
    let report = ExpectationReport::new(63);
    assert!(report.joint_marginal_gap < 1e-9);
}

#[test]
fn total_expectation_consistency() {
    for delta in 1..=200u64 {
        let p = split_distribution(delta);
        let es: f64 = p.iter().enumerate().map(|(s, q)| s as f64 * q).sum();
        assert!(rel(es, split_mean(delta)) < 1e-6);
        let ek: f64 = (2..=delta + 1)
            .map(|s| slack_mean_given_split(delta, s) * p[s as usize])
            .sum();
        assert!((ek - slack_mean(delta)).abs() < 1e-6 * delta as f64);
        let ek_pmf: f64 = slack_distribution(delta)
            .iter()
            .enumerate()
            .map(|(k, q)| k as f64 * q)
            .sum();
        assert!((ek_pmf - slack_mean(delta)).abs() < 1e-6 * delta as f64);
        assert!(rel(greedy_mean_sum(delta), greedy_mean(delta)) < 1e-6);
        assert!(rel(greedy_mean(delta) + lp_gain_sum(delta), lp_mean(delta)) < 1e-6);
        let var: f64 = p
            .iter()
            .enumerate()
            .map(|(s, q)| (s as f64 - es).powi(2) * q)
            .sum();
        assert!((var - split_var(delta)).abs() < 1e-6);
    }
}

#[test]
fn ordering_of_means() {
    for delta in 1..=1000u64 {
        assert!(lp_mean(delta) >= greedy_mean(delta));
    }
    for delta in (1..=300u64).step_by(7) {
        assert!(ef_mean_exact(delta) >= greedy_mean(delta));
    }
}

#[test]
fn eligible_first_conditional_by_direct_summation() {
    assert_eq!(ef_conditional(6, 0, 3), 0.0);
    assert_eq!(ef_conditional(6, 2, 7), 0.0);
    for delta in [6u64, 10, 25, 63] {
        for s in 2..=delta + 1 {
            for k in 1..=delta + 1 - s {
                let closed = ef_conditional(delta, k, s);
                let direct = ef_conditional_sum(delta, k, s);
                assert!(
                    (closed - direct).abs() < 1e-9 * direct.max(1.0),
                    "{delta} {k} {s}"
                );
            }
        }
    }
}

#[test]
fn ceil_and_floor_halves() {
    for delta in [1u64, 2, 9, 63, 500] {
        let (c, f) = ceil_floor_half_slack(delta);
        assert!((c + f - slack_mean(delta)).abs() < 1e-12);
        assert!(c >= f);
    }
}

#[test]
fn exact_capacity_mean_matches_enumeration() {
    for delta in [1u64, 3, 5, 7] {
        let e = exact::enumerate_model(delta).unwrap();
        assert_eq!(
            e.cap_left_mean(),
            exact::cap_left_mean(delta).unwrap(),
            "delta={delta}"
        );
        let (l, r) = capacities_mean(delta, CapacityForm::Exact).unwrap();
        assert!((l - e.cap_left_mean().to_f64().unwrap()).abs() < 1e-12);
        assert!((l + r - delta as f64).abs() < 1e-12);
    }
    assert!(matches!(
        capacities_mean(8, CapacityForm::Exact),
        Err(AnalyticsError::OddItemCount { delta: 8 })
    ));
}

#[test]
fn capacities_partition() {
    for delta in (1..=999u64).step_by(2) {
        for form in [CapacityForm::Exact, CapacityForm::Tabulated] {
            let (l, r) = capacities_mean(delta, form).unwrap();
            assert!((l + r - delta as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn side_split_and_slack() {
    let (s, k) = side_split_slack_approx(1.0);
    assert_eq!(s, 2.0);
    assert!(k.abs() < 1e-12);
    assert_eq!(side_split_slack_approx(0.0), (1.0, 0.0));
    assert_eq!(side_greedy_mean(0.0, 2, Half::Right), 0.0);
    let mut last = 0.0;
    for c in [1.0, 2.5, 10.0, 43.5, 300.0] {
        let (s, _) = side_split_slack_approx(c);
        assert!(s > last && s < std::f64::consts::E);
        last = s;
    }
}

#[test]
fn side_greedy_closed_form_matches_its_sum() {
    for c in [3u64, 10, 31, 50, 149] {
        for items in [64u64, 300] {
            for half in [Half::Left, Half::Right] {
                let closed = side_greedy_mean(c as f64, items, half);
                let sum = side_greedy_mean_sum(c, items, half);
                assert!(rel(closed, sum) < 1e-9, "c={c} items={items} {half:?}");
            }
        }
    }
}

#[test]
fn left_beats_right() {
    for delta in (49..=999u64).step_by(50) {
        let sides = SideExpectations::new(delta, CapacityForm::Tabulated).unwrap();
        assert!(sides.e_greedy_left > sides.e_greedy_right);
        assert!(sides.ef_left > sides.ef_right);
        let p = performance_params(delta, CapacityForm::Tabulated).unwrap();
        assert!(p.lb_gr <= p.lb_ef);
        assert!((p.lb_gr - p.lb_gr_lt - p.lb_gr_rt).abs() < 1e-9);
    }
}

#[test]
fn lower_bound_greedy_at_299() {
    let p = performance_params(299, CapacityForm::Tabulated).unwrap();
    assert!((p.lb_gr - 71.98).abs() < 0.01);
    assert!((p.lb_gr_lt - 49.23).abs() < 0.01);
    assert!((p.lb_gr_rt - 22.75).abs() < 0.01);
    let p = performance_params(49, CapacityForm::Tabulated).unwrap();
    assert!((p.lb_gr_lt - 49.75).abs() < 0.01 && (p.lb_gr_rt - 22.99).abs() < 0.01);
}

#[test]
fn table_ten_variances() {
    let want = [
        (63, 0.7329),
        (127, 0.7493),
        (255, 0.7575),
        (511, 0.7616),
        (1023, 0.7637),
    ];
    for (delta, var) in want {
        assert!((split_var(delta) - var).abs() < 5e-5);
    }
}

#[test]
fn asymptotic_limits() {
    let a = asymptotics(10_000);
    let lim = Asymptotics::limits();
    assert!((a.e_split - lim.e_split).abs() < 1e-3);
    assert!((a.slack_ratio - lim.slack_ratio).abs() < 1e-2);
    assert!((a.greedy_lp_ratio - lim.greedy_lp_ratio).abs() < 1e-2);
    assert!((a.lp_approx_ratio - 1.0).abs() < 1e-2);
    assert!((a.var_split - lim.var_split).abs() < 1e-3);
    let grid = [63u64, 127, 255, 511, 1023];
    for field in 0..6 {
        let gaps: Vec<f64> = grid
            .iter()
            .map(|&d| (asymptotics(d).as_array()[field] - lim.as_array()[field]).abs())
            .collect();
        assert!(
            gaps.windows(2).all(|w| w[1] <= w[0]),
            "field {field}: {gaps:?}"
        );
    }
}

fn reference_means() -> PerformanceParams {
    PerformanceParams::from_sides(
        [68.39, 31.54],
        [64.64, 27.95],
        [49.23, 22.75],
        [55.65, 24.07],
    )
}

#[test]
fn full_tree_estimates() {
    let p = reference_means();
    let h2 = tree_performance(&full_tree_markers(2), &p);
    assert!((h2.rho_ef - 99.86).abs() < 0.05);
    assert!((h2.rho_lp - 85.73).abs() < 0.05);
    assert!((h2.lb_gr - 51.81).abs() < 0.05);
    assert!((h2.lb_ef - 63.55).abs() < 0.05);
    for h in [3, 4] {
        assert_eq!(tree_performance(&full_tree_markers(h), &p).lb_gr, 50.0);
    }
    assert_eq!(tree_performance(&full_tree_markers(4), &p).lb_ef, 50.0);
    let root = tree_performance(&full_tree_markers(0), &p);
    assert_eq!(root.as_array(), [100.0; 4]);
}

#[test]
fn asymmetric_tree_estimate() {
    let p = reference_means();
    let ll = vertex_factors(&[Side::Left, Side::Left], &p);
    let lr = vertex_factors(&[Side::Left, Side::Right], &p);
    assert!((ll.rho_ef - 46.77).abs() < 0.005);
    assert!((lr.rho_ef - 21.57).abs() < 0.005);
    let leaves = vec![
        vec![Side::Left, Side::Left],
        vec![Side::Left, Side::Right],
        vec![Side::Right],
    ];
    let t = tree_performance(&leaves, &p);
    assert!((t.rho_ef - 99.88).abs() < 0.01);
    assert!((t.lb_gr - 58.16).abs() < 0.05);
}

proptest! {
    #[test]
    fn deeper_full_trees_never_estimate_higher(h in 1usize..7) {
        let p = reference_means();
        let a = tree_performance(&full_tree_markers(h), &p).as_array();
        let b = tree_performance(&full_tree_markers(h + 1), &p).as_array();
        for (x, y) in a.iter().zip(b) {
            prop_assert!(y <= *x + 1e-12);
            prop_assert!(y >= 50.0);
        }
    }

    #[test]
    fn split_pmf_sums_to_one(delta in 1u64..3000) {
        let total: f64 = split_distribution(delta).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}
