//! Monte Carlo campaigns over the uniform random model.
//!
//! Trials run in parallel; results are collected in trial order and every
//! sum is taken in that order, so output does not depend on the thread count.

use std::io::Write;

use knapdc_core::analytics::{split_var, ExpectationReport};
use knapdc_core::dnc::{self, DncError};
use knapdc_core::randmodel::{sample_trial, ModelParams};
use knapdc_core::solve::{self, Algorithm};
use knapdc_core::{Instance, Subproblem};
use rayon::prelude::*;
use serde::Serialize;

/// Normal quantile of a two-sided 95% interval.
pub const Z95: f64 = 1.96;
/// Target interval half-width used to size campaigns.
pub const TARGET_HALF_WIDTH: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialPlan {
    pub delta: u64,
    pub variance: f64,
    pub trials: u64,
}

/// Trials needed for the split position's interval to reach the target
/// half-width; at least one.
pub fn plan_trials(delta: u64) -> TrialPlan {
    let variance = split_var(delta);
    let raw = (Z95 / TARGET_HALF_WIDTH).powi(2) * variance;
    TrialPlan {
        delta,
        variance,
        trials: (raw.ceil() as u64).max(1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub delta: u64,
    pub seed: u64,
    /// Defaults to [`plan_trials`].
    pub trials: Option<u64>,
    pub heights: Vec<usize>,
    pub leaf_solver: Algorithm,
    pub min_size: usize,
}

impl CampaignConfig {
    pub fn new(delta: u64, seed: u64, heights: Vec<usize>) -> Self {
        CampaignConfig {
            delta,
            seed,
            trials: None,
            heights,
            leaf_solver: Algorithm::Dp,
            min_size: dnc::DEFAULT_MIN_SIZE,
        }
    }

    pub fn trial_count(&self) -> u64 {
        self.trials
            .unwrap_or_else(|| plan_trials(self.delta).trials)
    }
}

/// Per-trial scalar variables, in this order.
pub const VARIABLES: [&str; 22] = [
    "S", "K", "C_lt", "C_rt", "S_lt", "S_rt", "K_lt", "K_rt", "Z_gr", "Z_eg", "Z_ef", "Z_fg",
    "Z_lp", "Z_dp", "Z_gr_lt", "Z_gr_rt", "Z_ef_lt", "Z_ef_rt", "Z_lp_lt", "Z_lp_rt", "Z_dp_lt",
    "Z_dp_rt",
];

#[derive(Debug, Clone, PartialEq)]
struct TreeTrial {
    leaf: f64,
    dp: f64,
    gated_dp: f64,
    ef: f64,
    lp: f64,
    gr: f64,
    refusals: usize,
    structure_ok: bool,
    pair_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
struct TrialRecord {
    values: [f64; VARIABLES.len()],
    root_gate: bool,
    trees: Vec<TreeTrial>,
}

fn objective(inst: &Instance, sub: &Subproblem, alg: Algorithm) -> Result<f64, DncError> {
    Ok(solve::solve(inst, sub, alg)?.objective)
}

fn run_trial(cfg: &CampaignConfig, trial: u64) -> Result<TrialRecord, DncError> {
    let inst = sample_trial(ModelParams::new(cfg.delta, cfg.seed), trial).instance;
    let root = inst.root();
    let g = solve::greedy(&inst, &root);
    let (left, right) = dnc::split_pair(&inst, &root);
    let gl = solve::greedy(&inst, &left);
    let gr = solve::greedy(&inst, &right);
    let z = |sub: &Subproblem, alg| objective(&inst, sub, alg);
    let values = [
        g.split as f64,
        g.slack as f64,
        left.capacity as f64,
        right.capacity as f64,
        gl.split as f64,
        gr.split as f64,
        gl.slack as f64,
        gr.slack as f64,
        g.objective,
        z(&root, Algorithm::ExtendedGreedy)?,
        z(&root, Algorithm::EligibleFirst)?,
        z(&root, Algorithm::FullGreedy)?,
        z(&root, Algorithm::LpRelaxation)?,
        z(&root, Algorithm::Dp)?,
        gl.objective,
        gr.objective,
        z(&left, Algorithm::EligibleFirst)?,
        z(&right, Algorithm::EligibleFirst)?,
        z(&left, Algorithm::LpRelaxation)?,
        z(&right, Algorithm::LpRelaxation)?,
        z(&left, Algorithm::Dp)?,
        z(&right, Algorithm::Dp)?,
    ];
    let mut trees = Vec::with_capacity(cfg.heights.len());
    for &h in &cfg.heights {
        let tree = dnc::build_full_tree(&inst, h, cfg.min_size)?;
        let total = |alg| dnc::tree_solve(&inst, &tree, alg).map(|s| s.objective);
        let dp = total(Algorithm::Dp)?;
        let gated = dnc::build_gated_tree(&inst, h, cfg.min_size)?;
        let gated_dp = dnc::tree_solve(&inst, &gated, Algorithm::Dp)?.objective;
        trees.push(TreeTrial {
            leaf: if cfg.leaf_solver == Algorithm::Dp {
                dp
            } else {
                total(cfg.leaf_solver)?
            },
            dp,
            gated_dp,
            ef: total(Algorithm::EligibleFirst)?,
            lp: total(Algorithm::LpRelaxation)?,
            gr: total(Algorithm::Greedy)?,
            refusals: dnc::gate_refusals(&inst, &tree),
            structure_ok: dnc::structure_holds(&inst, &tree),
            pair_ok: dnc::pair_greedy_holds(&inst, &tree),
        });
    }
    Ok(TrialRecord {
        values,
        root_gate: dnc::branching_gate(&inst, &root),
        trees,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    /// Sample variance (n - 1 denominator; zero for one sample).
    pub variance: f64,
    pub half_width: f64,
    pub n: u64,
}

impl Stat {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let variance = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Stat {
            mean,
            variance,
            half_width: Z95 * (variance / n).sqrt(),
            n: xs.len() as u64,
        }
    }
}

/// Ratios of one tree height, percentages. `ratio_of_means` divides the
/// mean tree objective by the mean whole objective; `mean_of_ratios`
/// averages the per-trial ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeRow {
    pub height: usize,
    /// `[rho, rho_ef, rho_lp, lb_gr, lb_ef]`.
    pub ratio_of_means: [f64; 5],
    pub mean_of_ratios: [f64; 5],
    /// `rho` with dp leaves on trees grown under the gate up to this height.
    pub gated_rho: f64,
    /// Trials whose dp tree falls under half the optimum.
    pub below_half: u64,
    /// Trials with at least one internal node the gate would have refused.
    pub gated_trials: u64,
    /// Trials whose root fails the gate.
    pub root_refusals: u64,
    /// Below-half trials whose root passes the gate.
    pub below_half_with_root_gate: u64,
    pub structure_violations: u64,
    pub pair_violations: u64,
}

pub const TREE_COLUMNS: [&str; 5] = ["rho", "rho_ef", "rho_lp", "lb_gr", "lb_ef"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalSummary {
    pub delta: u64,
    pub seed: u64,
    pub trials: u64,
    pub leaf_solver: String,
    pub variables: Vec<(String, Stat)>,
    pub trees: Vec<TreeRow>,
}

impl EmpiricalSummary {
    pub fn stat(&self, name: &str) -> Option<&Stat> {
        self.variables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<EmpiricalSummary, DncError> {
    let n = cfg.trial_count();
    let records: Vec<TrialRecord> = (1..=n)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<_, _>>()?;

    let column = |i: usize| records.iter().map(|r| r.values[i]).collect::<Vec<_>>();
    let variables = VARIABLES
        .iter()
        .enumerate()
        .map(|(i, name)| (name.to_string(), Stat::from_samples(&column(i))))
        .collect();
    let idx = |name: &str| VARIABLES.iter().position(|v| *v == name).unwrap();
    let (i_ef, i_lp, i_dp) = (idx("Z_ef"), idx("Z_lp"), idx("Z_dp"));

    let mut trees = Vec::new();
    for (hi, &height) in cfg.heights.iter().enumerate() {
        let mut sums = [0.0; 5];
        let mut whole = [0.0; 5];
        let mut ratio_sums = [0.0; 5];
        let (mut gated_sum, mut dp_sum) = (0.0, 0.0);
        let mut row = TreeRow {
            height,
            ratio_of_means: [0.0; 5],
            mean_of_ratios: [0.0; 5],
            gated_rho: 0.0,
            below_half: 0,
            gated_trials: 0,
            root_refusals: 0,
            below_half_with_root_gate: 0,
            structure_violations: 0,
            pair_violations: 0,
        };
        for r in &records {
            let t = &r.trees[hi];
            let v = &r.values;
            let num = [t.leaf, t.ef, t.lp, t.gr, t.ef];
            let den = [v[i_dp], v[i_ef], v[i_lp], v[i_lp], v[i_lp]];
            for j in 0..5 {
                sums[j] += num[j];
                whole[j] += den[j];
                ratio_sums[j] += num[j] / den[j];
            }
            gated_sum += t.gated_dp;
            dp_sum += v[i_dp];
            let root_ok = r.root_gate;
            if t.dp < 0.5 * v[i_dp] {
                row.below_half += 1;
                if root_ok {
                    row.below_half_with_root_gate += 1;
                }
            }
            if !root_ok {
                row.root_refusals += 1;
            }
            row.gated_trials += u64::from(t.refusals > 0);
            row.structure_violations += u64::from(!t.structure_ok);
            row.pair_violations += u64::from(!t.pair_ok);
        }
        for j in 0..5 {
            row.ratio_of_means[j] = sums[j] / whole[j] * 100.0;
            row.mean_of_ratios[j] = 100.0 * ratio_sums[j] / n as f64;
        }
        row.gated_rho = gated_sum / dp_sum * 100.0;
        trees.push(row);
    }
    Ok(EmpiricalSummary {
        delta: cfg.delta,
        seed: cfg.seed,
        trials: n,
        leaf_solver: cfg.leaf_solver.tag().to_string(),
        variables,
        trees,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub variable: String,
    pub analytic: f64,
    pub mean: f64,
    pub half_width: f64,
    pub inside: bool,
    /// Gating verdicts decide the exit status; the rest only warn.
    pub gating: bool,
}

/// `(variable, analytic value, gating)` pairs for one capacity.
pub fn analytic_values(report: &ExpectationReport) -> Vec<(&'static str, f64, bool)> {
    let mut out = vec![
        ("S", report.e_split, true),
        ("K", report.e_slack, true),
        ("Z_gr", report.e_greedy, true),
        ("Z_ef", report.e_ef_exact, true),
        ("Z_lp", report.e_lp, true),
    ];
    if let Some(s) = &report.sides {
        out.extend([
            ("C_lt", s.e_cap_left, true),
            ("C_rt", s.e_cap_right, true),
            ("S_lt", s.e_split_left, false),
            ("S_rt", s.e_split_right, false),
            ("K_lt", s.e_slack_left, false),
            ("K_rt", s.e_slack_right, false),
            ("Z_gr_lt", s.e_greedy_left, false),
            ("Z_gr_rt", s.e_greedy_right, false),
            ("Z_ef_lt", s.ef_left, false),
            ("Z_ef_rt", s.ef_right, false),
            ("Z_lp_lt", s.lp_left, false),
            ("Z_lp_rt", s.lp_right, false),
        ]);
    }
    out
}

pub fn compare(report: &ExpectationReport, summary: &EmpiricalSummary) -> Vec<Verdict> {
    analytic_values(report)
        .into_iter()
        .filter_map(|(name, analytic, gating)| {
            let stat = summary.stat(name)?;
            let slack = 1e-9 * analytic.abs().max(1.0);
            Some(Verdict {
                variable: name.to_string(),
                analytic,
                mean: stat.mean,
                half_width: stat.half_width,
                inside: (stat.mean - analytic).abs() <= stat.half_width + slack,
                gating,
            })
        })
        .collect()
}

pub fn verdicts_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.inside || !v.gating)
}

pub fn write_summary_csv<W: Write>(
    out: W,
    summary: &EmpiricalSummary,
    verdicts: &[Verdict],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "variable",
        "mean",
        "variance",
        "half_width",
        "n",
        "analytic",
        "inside",
        "gating",
    ])?;
    for (name, s) in &summary.variables {
        let v = verdicts.iter().find(|v| &v.variable == name);
        w.write_record([
            name.clone(),
            format!("{:.6}", s.mean),
            format!("{:.6}", s.variance),
            format!("{:.6}", s.half_width),
            s.n.to_string(),
            v.map(|v| format!("{:.6}", v.analytic)).unwrap_or_default(),
            v.map(|v| v.inside.to_string()).unwrap_or_default(),
            v.map(|v| v.gating.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trees_csv<W: Write>(out: W, summary: &EmpiricalSummary) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["height".to_string()];
    header.extend(TREE_COLUMNS.iter().map(|c| c.to_string()));
    header.extend(TREE_COLUMNS.iter().map(|c| format!("{c}_trial_mean")));
    header.push("gated_rho".to_string());
    header.extend(
        [
            "below_half",
            "below_half_with_root_gate",
            "root_refusals",
            "gated_trials",
            "structure_violations",
            "pair_violations",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    for row in &summary.trees {
        let mut rec = vec![row.height.to_string()];
        rec.extend(row.ratio_of_means.iter().map(|x| format!("{x:.2}")));
        rec.extend(row.mean_of_ratios.iter().map(|x| format!("{x:.2}")));
        rec.push(format!("{:.2}", row.gated_rho));
        rec.extend(
            [
                row.below_half,
                row.below_half_with_root_gate,
                row.root_refusals,
                row.gated_trials,
                row.structure_violations,
                row.pair_violations,
            ]
            .map(|x| x.to_string()),
        );
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
