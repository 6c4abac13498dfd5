use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use knapdc::io::{read_instance, SolutionRecord, TreeRecord};
use knapdc::simulator::{self, CampaignConfig};
use knapdc::tables::{self, Manifest, TableOptions, TableOutput};
use knapdc_core::analytics::{exact, ExpectationReport};
use knapdc_core::combinatorics::odd_difference_report;
use knapdc_core::dnc;
use knapdc_core::solve::{self, Algorithm};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "knapdc",
    version,
    about = "0-1 knapsack bounds and divide-and-conquer trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Gr,
    Eg,
    Ef,
    Fg,
    Lp,
    Dp,
    All,
}

impl AlgArg {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgArg::Gr => vec![Algorithm::Greedy],
            AlgArg::Eg => vec![Algorithm::ExtendedGreedy],
            AlgArg::Ef => vec![Algorithm::EligibleFirst],
            AlgArg::Fg => vec![Algorithm::FullGreedy],
            AlgArg::Lp => vec![Algorithm::LpRelaxation],
            AlgArg::Dp => vec![Algorithm::Dp],
            AlgArg::All => Algorithm::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LeafArg {
    Gr,
    Eg,
    Ef,
    Fg,
    Lp,
    Dp,
}

impl From<LeafArg> for Algorithm {
    fn from(a: LeafArg) -> Self {
        match a {
            LeafArg::Gr => Algorithm::Greedy,
            LeafArg::Eg => Algorithm::ExtendedGreedy,
            LeafArg::Ef => Algorithm::EligibleFirst,
            LeafArg::Fg => Algorithm::FullGreedy,
            LeafArg::Lp => Algorithm::LpRelaxation,
            LeafArg::Dp => Algorithm::Dp,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file with one or all algorithms.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        alg: AlgArg,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a divide-and-conquer tree and solve its leaves.
    Tree {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = dnc::DEFAULT_MIN_SIZE)]
        min_size: usize,
        /// Complete tree of this height, ignoring the greedy gate.
        #[arg(long)]
        force_height: Option<usize>,
        #[arg(long, value_enum, default_value = "dp")]
        leaf_alg: LeafArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form expectations over a list of capacities.
    Analyze {
        #[arg(long, value_delimiter = ',', default_value = "63,127,255,511,1023")]
        delta_grid: Vec<u64>,
        #[arg(long, env = "KNAPDC_OUT_DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Monte Carlo campaign compared against the closed forms.
    Simulate {
        #[arg(long)]
        delta: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Tree heights; pass the flag without values for none.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "1,2,3,4")]
        heights: Vec<usize>,
        /// Overrides the planned trial count.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, value_enum, default_value = "dp")]
        leaf_alg: LeafArg,
        #[arg(long, default_value_t = dnc::DEFAULT_MIN_SIZE)]
        min_size: usize,
        #[arg(long, env = "KNAPDC_OUT_DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Regenerate tables 4 to 10 with a diff against the printed values.
    Tables {
        /// Table numbers, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        which: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        emit_plot_data: bool,
        #[arg(long, env = "KNAPDC_OUT_DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Exhaustive checks of the closed forms.
    Oracle {
        #[arg(long, default_value_t = 3)]
        delta: u64,
        /// Largest composition size for the odd-part report.
        #[arg(long, default_value_t = 14)]
        max_n: u64,
        #[arg(long, env = "KNAPDC_OUT_DIR", default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    Ok(BufWriter::new(
        File::create(&path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Solve { instance, alg, out } => solve_cmd(&instance, alg, &out),
        Command::Tree {
            instance,
            min_size,
            force_height,
            leaf_alg,
            out,
        } => tree_cmd(&instance, min_size, force_height, leaf_alg.into(), &out),
        Command::Analyze { delta_grid, out } => analyze_cmd(&delta_grid, &out),
        Command::Simulate {
            delta,
            seed,
            heights,
            trials,
            leaf_alg,
            min_size,
            out,
        } => {
            let cfg = CampaignConfig {
                delta,
                seed,
                trials,
                heights,
                leaf_solver: leaf_alg.into(),
                min_size,
            };
            simulate_cmd(&cfg, &out)
        }
        Command::Tables {
            which,
            seed,
            trials,
            emit_plot_data,
            out,
        } => tables_cmd(&which, &TableOptions { seed, trials }, emit_plot_data, &out),
        Command::Oracle { delta, max_n, out } => oracle_cmd(delta, max_n, &out),
    }
}

fn solve_cmd(path: &Path, alg: AlgArg, out: &Option<PathBuf>) -> Result<bool> {
    let inst = read_instance(path)?;
    let root = inst.root();
    let mut records = Vec::new();
    for a in alg.algorithms() {
        records.push(SolutionRecord::from(&solve::solve(&inst, &root, a)?));
    }
    let mut ok = true;
    if matches!(alg, AlgArg::All) {
        let z = |tag: &str| {
            records
                .iter()
                .find(|r| r.algorithm == tag)
                .unwrap()
                .objective
        };
        let tol = 1e-9 * z("lp").abs().max(1.0);
        let chain = [
            ("gr", "eg"),
            ("gr", "ef"),
            ("ef", "fg"),
            ("eg", "dp"),
            ("fg", "dp"),
            ("dp", "lp"),
        ];
        for (lo, hi) in chain {
            if z(lo) > z(hi) + tol {
                eprintln!("chain violated: z_{lo} = {} > z_{hi} = {}", z(lo), z(hi));
                ok = false;
            }
        }
    }
    write_json(out, &records)?;
    Ok(ok)
}

#[derive(Serialize)]
struct TreeReport {
    leaf_solver: String,
    forced: bool,
    tree: TreeRecord,
    leaf_markers: Vec<String>,
    objective: f64,
    decisions: Vec<f64>,
    optimum: f64,
    ratio: f64,
    gate_refusals: usize,
    structure_holds: bool,
    pair_greedy_holds: bool,
    control_holds: bool,
}

fn tree_cmd(
    path: &Path,
    min_size: usize,
    force_height: Option<usize>,
    leaf: Algorithm,
    out: &Option<PathBuf>,
) -> Result<bool> {
    let inst = read_instance(path)?;
    let tree = match force_height {
        Some(h) => dnc::build_full_tree(&inst, h, min_size)?,
        None => dnc::build_tree(&inst, min_size)?,
    };
    let sol = dnc::tree_solve(&inst, &tree, leaf)?;
    let optimum = solve::dp_optimal(&inst, &inst.root())?.objective;
    let control = solve::greedy_solution(&inst, &inst.root());
    let record = TreeRecord::from(&tree);
    let report = TreeReport {
        leaf_solver: leaf.tag().to_string(),
        forced: force_height.is_some(),
        leaf_markers: record.leaf_markers(),
        tree: record,
        objective: sol.objective,
        decisions: sol.decisions,
        optimum,
        ratio: if optimum > 0.0 {
            sol.objective / optimum
        } else {
            1.0
        },
        gate_refusals: dnc::gate_refusals(&inst, &tree),
        structure_holds: dnc::structure_holds(&inst, &tree),
        pair_greedy_holds: dnc::pair_greedy_holds(&inst, &tree),
        control_holds: dnc::verify_control(&inst, &tree, &control.decisions)?.holds,
    };
    write_json(out, &report)?;
    let mut ok = report.structure_holds && report.pair_greedy_holds && report.control_holds;
    if force_height.is_none() && leaf == Algorithm::Dp && report.ratio < 0.5 {
        eprintln!(
            "tree optimum below half the instance optimum: {}",
            report.ratio
        );
        ok = false;
    }
    Ok(ok)
}

const ANALYZE_COLUMNS: [&str; 20] = [
    "delta",
    "e_split",
    "var_split",
    "e_slack",
    "e_greedy",
    "e_lp",
    "e_ef_exact",
    "ef_approx",
    "e_ceil_half_slack",
    "e_floor_half_slack",
    "e_cap_lt",
    "e_cap_rt",
    "e_split_lt",
    "e_split_rt",
    "e_slack_lt",
    "e_slack_rt",
    "e_greedy_lt",
    "e_greedy_rt",
    "ef_lt",
    "ef_rt",
];

fn analyze_cmd(grid: &[u64], dir: &Path) -> Result<bool> {
    if grid.contains(&0) {
        bail!("capacities must be positive");
    }
    let reports: Vec<ExpectationReport> = grid.iter().map(|&d| ExpectationReport::new(d)).collect();
    let mut w = csv::Writer::from_writer(create(dir, "analyze.csv")?);
    w.write_record(ANALYZE_COLUMNS)?;
    for r in &reports {
        let mut rec = vec![
            r.delta.to_string(),
            format!("{:.6}", r.e_split),
            format!("{:.6}", r.var_split),
            format!("{:.6}", r.e_slack),
            format!("{:.6}", r.e_greedy),
            format!("{:.6}", r.e_lp),
            format!("{:.6}", r.e_ef_exact),
            format!("{:.6}", r.ef_approx),
            format!("{:.6}", r.e_ceil_half_slack),
            format!("{:.6}", r.e_floor_half_slack),
        ];
        match &r.sides {
            Some(s) => rec.extend(
                [
                    s.e_cap_left,
                    s.e_cap_right,
                    s.e_split_left,
                    s.e_split_right,
                    s.e_slack_left,
                    s.e_slack_right,
                    s.e_greedy_left,
                    s.e_greedy_right,
                    s.ef_left,
                    s.ef_right,
                ]
                .map(|x| format!("{x:.6}")),
            ),
            None => rec.extend(std::iter::repeat_n(String::new(), 10)),
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    let mut j = create(dir, "analyze.json")?;
    serde_json::to_writer_pretty(&mut j, &reports)?;
    j.flush()?;
    println!(
        "wrote {} rows to {}",
        reports.len(),
        dir.join("analyze.csv").display()
    );
    Ok(true)
}

#[derive(Serialize)]
struct SimulationOutput<'a> {
    summary: &'a simulator::EmpiricalSummary,
    verdicts: &'a [simulator::Verdict],
    wall_time_s: f64,
}

fn simulate_cmd(cfg: &CampaignConfig, dir: &Path) -> Result<bool> {
    if cfg.delta == 0 {
        bail!("capacity must be positive");
    }
    if !cfg.heights.is_empty() && cfg.delta.is_multiple_of(2) {
        bail!("tree experiments need an odd capacity, got {}", cfg.delta);
    }
    let start = Instant::now();
    let summary = simulator::run_campaign(cfg)?;
    let verdicts = simulator::compare(&ExpectationReport::new(cfg.delta), &summary);
    simulator::write_summary_csv(create(dir, "simulate_summary.csv")?, &summary, &verdicts)?;
    simulator::write_trees_csv(create(dir, "simulate_trees.csv")?, &summary)?;
    let mut j = create(dir, "simulate.json")?;
    serde_json::to_writer_pretty(
        &mut j,
        &SimulationOutput {
            summary: &summary,
            verdicts: &verdicts,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    )?;
    j.flush()?;
    for v in &verdicts {
        if !v.inside {
            let kind = if v.gating {
                "outside CI"
            } else {
                "warning: outside CI"
            };
            eprintln!(
                "{kind}: {} mean {:.4} +- {:.4}, closed form {:.4}",
                v.variable, v.mean, v.half_width, v.analytic
            );
        }
    }
    let structural = summary
        .trees
        .iter()
        .all(|t| t.structure_violations == 0 && t.pair_violations == 0);
    if !structural {
        eprintln!("tree structure violated");
    }
    println!("{} trials, results in {}", summary.trials, dir.display());
    Ok(simulator::verdicts_pass(&verdicts) && structural)
}

fn parse_which(which: &[String]) -> Result<Vec<u8>> {
    if which.iter().any(|w| w == "all") {
        return Ok(tables::TABLE_IDS.to_vec());
    }
    which
        .iter()
        .map(|w| match w.parse::<u8>() {
            Ok(id) if tables::TABLE_IDS.contains(&id) => Ok(id),
            _ => bail!("unknown table {w:?}, expected 4 to 10 or all"),
        })
        .collect()
}

fn tables_cmd(which: &[String], opts: &TableOptions, plot: bool, dir: &Path) -> Result<bool> {
    let ids = parse_which(which)?;
    let start = Instant::now();
    let mut outputs: Vec<TableOutput> = Vec::new();
    for id in ids {
        let t = tables::generate(id, opts)?;
        t.write_csv(create(dir, &format!("{}.csv", t.name))?)?;
        let mut j = create(dir, &format!("{}.json", t.name))?;
        serde_json::to_writer_pretty(&mut j, &t)?;
        j.flush()?;
        outputs.push(t);
    }
    if plot {
        let t = tables::plot_series(&tables::plot_grid());
        t.write_csv(create(dir, "plot_performance.csv")?)?;
    }
    let checks: Vec<_> = outputs.iter().flat_map(|t| t.checks.clone()).collect();
    tables::write_diff_csv(create(dir, "diff.csv")?, &checks)?;
    let manifest = Manifest::new(opts, &outputs, start.elapsed().as_secs_f64());
    let mut j = create(dir, "manifest.json")?;
    serde_json::to_writer_pretty(&mut j, &manifest)?;
    j.flush()?;
    for t in &outputs {
        println!("{}: {} failing checks", t.name, t.failures());
    }
    Ok(manifest.failed == 0)
}

fn oracle_cmd(delta: u64, max_n: u64, dir: &Path) -> Result<bool> {
    if delta == 0 {
        bail!("capacity must be positive");
    }
    let mismatches = exact::cross_check(delta)?;
    for m in &mismatches {
        eprintln!(
            "mismatch in {}: enumerated {} closed form {}",
            m.quantity, m.enumerated, m.closed_form
        );
    }
    let rows = odd_difference_report(max_n)?;
    let mut w = csv::Writer::from_writer(create(dir, "odd_difference.csv")?);
    w.write_record([
        "n",
        "m",
        "count",
        "printed_count",
        "difference",
        "shipped",
        "shipped_ok",
        "printed",
        "printed_ok",
    ])?;
    for r in &rows {
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            r.count.to_string(),
            r.printed_count.to_string(),
            r.difference.to_string(),
            r.shipped.to_string(),
            r.shipped_matches().to_string(),
            r.printed.to_string(),
            r.printed_matches().to_string(),
        ])?;
    }
    w.flush()?;
    let shipped_ok = rows.iter().all(|r| r.shipped_matches());
    let printed_bad = rows.iter().filter(|r| !r.printed_matches()).count();
    println!(
        "delta {delta}: {} mismatches; odd-part report n <= {max_n}: shipped form {}, printed form off in {printed_bad} rows",
        mismatches.len(),
        if shipped_ok { "exact" } else { "WRONG" },
    );
    Ok(mismatches.is_empty() && shipped_ok)
}
