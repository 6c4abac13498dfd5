//! Regeneration of the published tables with a diff against the printed
//! values.

use std::io::Write;

use knapdc_core::analytics::{
    ef_approx_deviation, ef_mean_approx, ef_mean_exact, full_tree_markers, performance_params,
    split_var, tree_performance, CapacityForm, PerformanceParams,
};
use knapdc_core::dnc::DncError;
use rayon::prelude::*;
use serde::Serialize;

use crate::simulator::{plan_trials, run_campaign, CampaignConfig};

/// Printed values.
pub mod reference {
    pub const TABLE4_DELTAS: [u64; 12] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120];
    pub const TABLE4: [f64; 12] = [
        2.66, 0.75, 0.45, 0.34, 0.28, 0.24, 0.21, 0.19, 0.17, 0.15, 0.14, 0.13,
    ];

    pub const GRID: [u64; 13] = [
        49, 99, 149, 199, 249, 299, 399, 499, 599, 699, 799, 899, 999,
    ];

    /// `rho_ef, lt, rt, rho_lp, lt, rt` per grid row.
    pub const TABLE5: [[f64; 6]; 13] = [
        [99.59, 68.35, 31.24, 91.05, 63.62, 27.43],
        [99.78, 68.37, 31.41, 91.97, 64.23, 27.74],
        [99.85, 68.38, 31.48, 92.28, 64.44, 27.84],
        [99.89, 68.38, 31.51, 92.44, 64.54, 27.90],
        [99.91, 68.38, 31.53, 92.53, 64.60, 27.93],
        [99.93, 68.39, 31.54, 92.59, 64.64, 27.95],
        [99.94, 68.39, 31.56, 92.67, 64.69, 27.98],
        [99.96, 68.39, 31.57, 92.72, 64.72, 28.00],
        [99.96, 68.39, 31.57, 92.75, 64.75, 28.01],
        [99.97, 68.39, 31.58, 92.77, 64.76, 28.01],
        [99.97, 68.39, 31.58, 92.79, 64.77, 28.02],
        [99.97, 68.39, 31.58, 92.81, 64.78, 28.03],
        [99.98, 68.39, 31.59, 92.82, 64.79, 28.03],
    ];

    /// `lb_gr, lt, rt, lb_ef, lt, rt` per grid row.
    pub const TABLE6: [[f64; 6]; 13] = [
        [72.74, 49.75, 22.99, 79.19, 55.34, 23.85],
        [72.28, 49.44, 22.84, 79.51, 55.53, 23.98],
        [72.13, 49.33, 22.79, 79.62, 55.59, 24.02],
        [72.05, 49.28, 22.77, 79.67, 55.62, 24.04],
        [72.01, 49.25, 22.76, 79.70, 55.64, 24.06],
        [71.98, 49.23, 22.75, 79.72, 55.66, 24.07],
        [71.94, 49.20, 22.74, 79.75, 55.67, 24.08],
        [71.92, 49.19, 22.73, 79.76, 55.68, 24.08],
        [71.90, 49.18, 22.72, 79.77, 55.69, 24.09],
        [71.89, 49.17, 22.72, 79.78, 55.69, 24.09],
        [71.88, 49.16, 22.72, 79.79, 55.69, 24.09],
        [71.88, 49.16, 22.72, 79.79, 55.70, 24.09],
        [71.87, 49.16, 22.72, 79.79, 55.70, 24.10],
    ];

    /// Mean row, in `PerformanceParams` field order.
    pub const TABLE7_MEAN: [f64; 12] = [
        99.93, 68.39, 31.54, 92.59, 64.64, 27.95, 71.98, 49.23, 22.75, 79.72, 55.65, 24.07,
    ];
    pub const TABLE7_VARIANCE: [f64; 12] = [
        0.01, 0.00, 0.00, 0.12, 0.05, 0.01, 0.03, 0.01, 0.00, 0.01, 0.00, 0.00,
    ];

    pub const TABLE8_DELTA: u64 = 63;
    /// `rho, rho_ef, rho_lp, lb_gr, lb_ef` for heights 1 to 4.
    pub const TABLE8: [[f64; 5]; 4] = [
        [97.66, 99.83, 98.82, 92.78, 94.99],
        [95.45, 99.46, 97.63, 92.91, 93.87],
        [94.75, 96.40, 97.00, 92.96, 93.29],
        [94.55, 94.30, 96.81, 93.00, 93.12],
    ];

    /// `rho_ef, rho_lp, lb_gr, lb_ef` for heights 1 to 4.
    pub const TABLE9: [[f64; 4]; 4] = [
        [99.93, 92.59, 71.98, 79.72],
        [99.86, 85.73, 51.81, 63.55],
        [99.79, 79.38, 50.00, 50.66],
        [99.72, 73.49, 50.00, 50.00],
    ];

    pub const TABLE10_DELTAS: [u64; 5] = [63, 127, 255, 511, 1023];
    pub const TABLE10_VARIANCE: [f64; 5] = [0.7329, 0.7493, 0.7575, 0.7616, 0.7637];
    pub const TABLE10_TRIALS: [u64; 5] = [1127, 1152, 1165, 1171, 1174];

    pub fn table7_means() -> knapdc_core::analytics::PerformanceParams {
        knapdc_core::analytics::PerformanceParams::from_sides(
            [TABLE7_MEAN[1], TABLE7_MEAN[2]],
            [TABLE7_MEAN[4], TABLE7_MEAN[5]],
            [TABLE7_MEAN[7], TABLE7_MEAN[8]],
            [TABLE7_MEAN[10], TABLE7_MEAN[11]],
        )
    }
}

pub const TABLE4_TOL: f64 = 0.02;
pub const PERF_TOL: f64 = 0.1;
pub const RHO_LP_TOL: f64 = 0.5;
pub const TABLE8_RHO_TOL: f64 = 0.7;
pub const TABLE9_TOL: f64 = 0.05;
pub const VARIANCE_TOL: f64 = 5e-5;

/// Where the published performance parameters are evaluated.
pub const TABLE7_DELTA: u64 = 299;
pub const TABLE8_HEIGHTS: [usize; 4] = [1, 2, 3, 4];

pub const PARAM_COLUMNS: [&str; 12] = [
    "rho_ef",
    "rho_ef_lt",
    "rho_ef_rt",
    "rho_lp",
    "rho_lp_lt",
    "rho_lp_rt",
    "lb_gr",
    "lb_gr_lt",
    "lb_gr_rt",
    "lb_ef",
    "lb_ef_lt",
    "lb_ef_rt",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    /// Printed for comparison only.
    Info,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub table: String,
    pub row: String,
    pub column: String,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn status(&self) -> Status {
        match self.tolerance {
            None => Status::Info,
            // rounding guard for values printed to two decimals
            Some(tol) if (self.computed - self.reference).abs() <= tol + 1e-9 => Status::Pass,
            Some(_) => Status::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub key: Vec<String>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableOutput {
    pub name: String,
    pub key_columns: Vec<String>,
    pub columns: Vec<String>,
    /// CSV decimals per value column.
    #[serde(skip)]
    pub decimals: Vec<usize>,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
}

impl TableOutput {
    fn new(name: &str, keys: &[&str], columns: &[&str], decimals: &[usize]) -> Self {
        assert_eq!(columns.len(), decimals.len());
        TableOutput {
            name: name.to_string(),
            key_columns: keys.iter().map(|s| s.to_string()).collect(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            decimals: decimals.to_vec(),
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, row: &str, column: &str, computed: f64, reference: f64, tol: Option<f64>) {
        self.checks.push(Check {
            table: self.name.clone(),
            row: row.to_string(),
            column: column.to_string(),
            computed,
            reference,
            tolerance: tol,
        });
    }

    pub fn value(&self, key: &[&str], column: &str) -> Option<f64> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows
            .iter()
            .find(|r| r.key.iter().map(String::as_str).eq(key.iter().copied()))
            .map(|r| r.values[c])
    }

    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status() == Status::Fail)
            .count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.key_columns.iter().chain(&self.columns))?;
        for row in &self.rows {
            let mut rec = row.key.clone();
            rec.extend(
                row.values
                    .iter()
                    .zip(&self.decimals)
                    .map(|(v, &d)| format!("{v:.d$}")),
            );
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn write_diff_csv<W: Write>(out: W, checks: &[Check]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "table",
        "row",
        "column",
        "computed",
        "reference",
        "tolerance",
        "status",
    ])?;
    for c in checks {
        w.write_record([
            c.table.clone(),
            c.row.clone(),
            c.column.clone(),
            format!("{:.4}", c.computed),
            format!("{}", c.reference),
            c.tolerance.map(|t| t.to_string()).unwrap_or_default(),
            c.status().label().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableOptions {
    pub seed: u64,
    /// Overrides the planned trial count of the empirical table.
    pub trials: Option<u64>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            seed: 1,
            trials: None,
        }
    }
}

pub const TABLE_IDS: [u8; 7] = [4, 5, 6, 7, 8, 9, 10];

pub fn generate(which: u8, opts: &TableOptions) -> Result<TableOutput, DncError> {
    Ok(match which {
        4 => table4(),
        5 => table5(),
        6 => table6(),
        7 => table7(),
        8 => table8(opts)?,
        9 => table9(),
        10 => table10(),
        _ => panic!("no table {which}"),
    })
}

fn params_on(grid: &[u64]) -> Vec<PerformanceParams> {
    grid.par_iter()
        .map(|&d| performance_params(d, CapacityForm::Tabulated).expect("odd grid"))
        .collect()
}

fn param_array(p: &PerformanceParams) -> [f64; 12] {
    [
        p.rho_ef,
        p.rho_ef_lt,
        p.rho_ef_rt,
        p.rho_lp,
        p.rho_lp_lt,
        p.rho_lp_rt,
        p.lb_gr,
        p.lb_gr_lt,
        p.lb_gr_rt,
        p.lb_ef,
        p.lb_ef_lt,
        p.lb_ef_rt,
    ]
}

fn param_tol(column: &str) -> f64 {
    if column.starts_with("rho_lp") {
        RHO_LP_TOL
    } else {
        PERF_TOL
    }
}

pub fn table4() -> TableOutput {
    let mut t = TableOutput::new(
        "table4",
        &["delta"],
        &["deviation_pct", "ef_exact", "ef_approx"],
        &[2, 4, 4],
    );
    let rows: Vec<_> = reference::TABLE4_DELTAS
        .par_iter()
        .map(|&d| (ef_approx_deviation(d), ef_mean_exact(d), ef_mean_approx(d)))
        .collect();
    for ((&d, (dev, exact, approx)), &want) in reference::TABLE4_DELTAS
        .iter()
        .zip(rows)
        .zip(&reference::TABLE4)
    {
        t.rows.push(Row {
            key: vec![d.to_string()],
            values: vec![dev, exact, approx],
        });
        t.check(&d.to_string(), "deviation_pct", dev, want, Some(TABLE4_TOL));
    }
    t
}

fn grid_table(name: &str, cols: std::ops::Range<usize>, printed: &[[f64; 6]; 13]) -> TableOutput {
    let columns = &PARAM_COLUMNS[cols.clone()];
    let mut all = vec!["mu"];
    all.extend(columns);
    let mut t = TableOutput::new(name, &["delta"], &all, &[0, 2, 2, 2, 2, 2, 2]);
    for ((&d, p), want) in reference::GRID
        .iter()
        .zip(params_on(&reference::GRID))
        .zip(printed)
    {
        let values = &param_array(&p)[cols.clone()];
        let mut row = vec![(d + 1) as f64];
        row.extend(values);
        t.rows.push(Row {
            key: vec![d.to_string()],
            values: row,
        });
        for ((col, &got), &w) in columns.iter().zip(values).zip(want) {
            t.check(&d.to_string(), col, got, w, Some(param_tol(col)));
        }
    }
    t
}

pub fn table5() -> TableOutput {
    grid_table("table5", 0..6, &reference::TABLE5)
}

pub fn table6() -> TableOutput {
    grid_table("table6", 6..12, &reference::TABLE6)
}

/// Mean row: the parameters at [`TABLE7_DELTA`]. Variance row: population
/// variance of each parameter over the grid, shown for comparison only.
pub fn table7() -> TableOutput {
    let mut t = TableOutput::new("table7", &["stat"], &PARAM_COLUMNS, &[2; 12]);
    let at = param_array(&performance_params(TABLE7_DELTA, CapacityForm::Tabulated).expect("odd"));
    let grid: Vec<[f64; 12]> = params_on(&reference::GRID)
        .iter()
        .map(param_array)
        .collect();
    let n = grid.len() as f64;
    let variance: Vec<f64> = (0..12)
        .map(|j| {
            let m = grid.iter().map(|r| r[j]).sum::<f64>() / n;
            grid.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / n
        })
        .collect();
    for (j, col) in PARAM_COLUMNS.iter().enumerate() {
        t.check(
            "mean",
            col,
            at[j],
            reference::TABLE7_MEAN[j],
            Some(param_tol(col)),
        );
        t.check(
            "variance",
            col,
            variance[j],
            reference::TABLE7_VARIANCE[j],
            None,
        );
    }
    t.rows.push(Row {
        key: vec!["mean".into()],
        values: at.to_vec(),
    });
    t.rows.push(Row {
        key: vec!["variance".into()],
        values: variance,
    });
    t
}

pub const TABLE8_COLUMNS: [&str; 11] = [
    "rho",
    "rho_ef",
    "rho_lp",
    "lb_gr",
    "lb_ef",
    "rho_trial_mean",
    "rho_ef_trial_mean",
    "rho_lp_trial_mean",
    "lb_gr_trial_mean",
    "lb_ef_trial_mean",
    "gated_rho",
];

/// Forced complete trees with dp leaves. Only `rho` is held to a
/// tolerance; the other columns are compared for information.
pub fn table8(opts: &TableOptions) -> Result<TableOutput, DncError> {
    let mut cfg = CampaignConfig::new(reference::TABLE8_DELTA, opts.seed, TABLE8_HEIGHTS.to_vec());
    cfg.trials = opts.trials;
    let summary = run_campaign(&cfg)?;
    let mut t = TableOutput::new("table8", &["height"], &TABLE8_COLUMNS, &[2; 11]);
    for (row, want) in summary.trees.iter().zip(&reference::TABLE8) {
        let h = row.height.to_string();
        let mut values = row.ratio_of_means.to_vec();
        values.extend(row.mean_of_ratios);
        values.push(row.gated_rho);
        for j in 0..5 {
            let tol = (j == 0).then_some(TABLE8_RHO_TOL);
            t.check(&h, TABLE8_COLUMNS[j], values[j], want[j], tol);
            t.check(&h, TABLE8_COLUMNS[j + 5], values[j + 5], want[j], None);
        }
        t.check(&h, "gated_rho", row.gated_rho, want[0], None);
        t.rows.push(Row {
            key: vec![h],
            values,
        });
    }
    Ok(t)
}

/// Rows from the printed parameter means are checked; rows from the
/// parameters computed here are shown alongside.
pub fn table9() -> TableOutput {
    let mut t = TableOutput::new(
        "table9",
        &["params", "height"],
        &["rho_ef", "rho_lp", "lb_gr", "lb_ef"],
        &[2; 4],
    );
    let computed = performance_params(TABLE7_DELTA, CapacityForm::Tabulated).expect("odd");
    for (source, params) in [
        ("printed", reference::table7_means()),
        ("computed", computed),
    ] {
        for (i, want) in reference::TABLE9.iter().enumerate() {
            let h = i + 1;
            let est = tree_performance(&full_tree_markers(h), &params).as_array();
            if source == "printed" {
                for (j, col) in ["rho_ef", "rho_lp", "lb_gr", "lb_ef"].iter().enumerate() {
                    t.check(&h.to_string(), col, est[j], want[j], Some(TABLE9_TOL));
                }
            }
            t.rows.push(Row {
                key: vec![source.into(), h.to_string()],
                values: est.to_vec(),
            });
        }
    }
    t
}

pub fn table10() -> TableOutput {
    let mut t = TableOutput::new(
        "table10",
        &["delta"],
        &["mu", "variance", "trials"],
        &[0, 4, 0],
    );
    for (i, &d) in reference::TABLE10_DELTAS.iter().enumerate() {
        let plan = plan_trials(d);
        let key = d.to_string();
        t.check(
            &key,
            "variance",
            split_var(d),
            reference::TABLE10_VARIANCE[i],
            Some(VARIANCE_TOL),
        );
        t.check(
            &key,
            "trials",
            plan.trials as f64,
            reference::TABLE10_TRIALS[i] as f64,
            Some(0.0),
        );
        t.rows.push(Row {
            key: vec![key],
            values: vec![(d + 1) as f64, plan.variance, plan.trials as f64],
        });
    }
    t
}

/// Performance parameters against capacity, for plotting.
pub fn plot_series(deltas: &[u64]) -> TableOutput {
    let mut t = TableOutput::new(
        "plot_performance",
        &["delta"],
        &["rho_ef", "rho_lp", "lb_gr", "lb_ef"],
        &[4; 4],
    );
    for (&d, p) in deltas.iter().zip(params_on(deltas)) {
        t.rows.push(Row {
            key: vec![d.to_string()],
            values: vec![p.rho_ef, p.rho_lp, p.lb_gr, p.lb_ef],
        });
    }
    t
}

pub fn plot_grid() -> Vec<u64> {
    (49..=999).step_by(10).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub seed: u64,
    pub tables: Vec<String>,
    pub delta_grid: Vec<u64>,
    pub empirical_delta: u64,
    pub heights: Vec<usize>,
    pub wall_time_s: f64,
    pub passed: usize,
    pub failed: usize,
    pub info: usize,
}

impl Manifest {
    pub fn new(opts: &TableOptions, outputs: &[TableOutput], wall_time_s: f64) -> Self {
        let count = |s| {
            outputs
                .iter()
                .flat_map(|t| &t.checks)
                .filter(|c| c.status() == s)
                .count()
        };
        Manifest {
            seed: opts.seed,
            tables: outputs.iter().map(|t| t.name.clone()).collect(),
            delta_grid: reference::GRID.to_vec(),
            empirical_delta: reference::TABLE8_DELTA,
            heights: TABLE8_HEIGHTS.to_vec(),
            wall_time_s,
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            info: count(Status::Info),
        }
    }
}
