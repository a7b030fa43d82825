//! `multiweight` command line tool.
//!
//! Exit codes: 0 when the command succeeds or the answer is yes, 1 when a
//! family is not treelike or a check fails, 2 on bad input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use multiweight::classical::FourPointWitness;
use multiweight::family::binomial;
use multiweight::generate::{max_n, DEFAULT_MAX_N, MAX_N_ENV};
use multiweight::hierarchy::HierarchyJson;
use multiweight::roundtrip::{roundtrip, RoundTripReport};
use multiweight::{
    aggregate_pairwise, check_condition_i, check_condition_ii, classify_positivity, decide_treelike,
    family_from_tree, four_point_check, infer_hierarchy, parse_newick, to_newick, ConditionII, Error, Family,
    GeneratorConfig, Rational, Scalar, SignMode, Tree,
};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "multiweight", version, about = "Decide whether k-subset weights come from a weighted tree")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the k-weights of a Newick tree.
    Weights {
        tree: PathBuf,
        #[arg(long)]
        k: usize,
        /// Output file; `.csv` writes CSV, anything else JSON. Default: stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether a family is treelike and rebuild the tree.
    Reconstruct {
        family: PathBuf,
        /// Write the reconstructed tree here as Newick.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the full decision report here as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Diagnostics: inferred hierarchy, conditions (i) and (ii), or the
    /// four-point condition when k = 2.
    Check {
        family: PathBuf,
        /// Longest tuple length for condition (ii). Default: n - 1.
        #[arg(long = "condition-ii-qmax")]
        q_max: Option<usize>,
        /// Tuples examined per (W, W', q) for q >= 2; 0 means no limit.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Round-trip random pseudostars through their k-weights.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Shift one family value per trial by this amount (default 1).
        #[arg(long, num_args = 0..=1, default_missing_value = "1")]
        perturb: Option<String>,
        #[arg(long, value_enum, default_value_t = Signs::InternalNonzero)]
        signs: Signs,
    },
    /// Aggregate a k-weight family into pairwise values S(i,j).
    Aggregate {
        family: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Signs {
    Positive,
    InternalNonzero,
    Unrestricted,
}

impl From<Signs> for SignMode {
    fn from(s: Signs) -> Self {
        match s {
            Signs::Positive => SignMode::Positive,
            Signs::InternalNonzero => SignMode::InternalNonzero,
            Signs::Unrestricted => SignMode::Unrestricted,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Weights { tree, k, output } => weights(cli.json, tree, *k, output.as_deref()),
        Command::Reconstruct { family, output, report } => {
            reconstruct(cli.json, family, output.as_deref(), report.as_deref())
        }
        Command::Check { family, q_max, budget } => check(cli.json, family, *q_max, *budget),
        Command::Simulate {
            n,
            k,
            trials,
            seed,
            perturb,
            signs,
        } => simulate(cli.json, *n, *k, *trials, *seed, perturb.as_deref(), *signs),
        Command::Aggregate { family, output } => aggregate(cli.json, family, output.as_deref()),
    }
}

fn check_size(n: usize, k: usize) -> Result<()> {
    let cap = max_n();
    if n > cap {
        bail!("n = {n} exceeds the cap {cap}; set {MAX_N_ENV} to raise it");
    }
    if n > DEFAULT_MAX_N {
        eprintln!(
            "warning: n = {n} is above {DEFAULT_MAX_N}; the family has C({n},{k}) = {} values",
            binomial(n, k)
        );
    }
    Ok(())
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read_family(path: &Path) -> Result<Family> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let family = if is_csv(path) {
        Family::read_csv(file)
    } else {
        Family::read_json(file)
    }
    .with_context(|| format!("cannot read family from {}", path.display()))?;
    check_size(family.n(), family.k())?;
    Ok(family)
}

fn write_family(family: &Family, path: &Path) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut writer = io::BufWriter::new(file);
    if is_csv(path) {
        family.write_csv(&mut writer)?;
    } else {
        family.write_json(&mut writer)?;
        writeln!(writer)?;
    }
    writer.flush()?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_json_file<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Serialize)]
struct Written<'a> {
    n: usize,
    k: usize,
    values: usize,
    output: &'a Path,
}

fn emit_family(json: bool, family: &Family, output: Option<&Path>) -> Result<u8> {
    match output {
        Some(path) => {
            write_family(family, path)?;
            if json {
                print_json(&Written {
                    n: family.n(),
                    k: family.k(),
                    values: family.len(),
                    output: path,
                })?;
            } else {
                println!("wrote {} values (n = {}, k = {}) to {}", family.len(), family.n(), family.k(), path.display());
            }
        }
        None => print_json(&family.to_json())?,
    }
    Ok(0)
}

fn weights(json: bool, path: &Path, k: usize, output: Option<&Path>) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let tree: Tree = parse_newick(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    let n = tree.require_standard_labels()?;
    if k == 0 || k > n {
        bail!("k = {k} must lie in 1..={n}");
    }
    check_size(n, k)?;
    emit_family(json, &family_from_tree(&tree, k)?, output)
}

fn reconstruct(json: bool, path: &Path, output: Option<&Path>, report_path: Option<&Path>) -> Result<u8> {
    let family = read_family(path)?;
    let report = decide_treelike(&family)?;
    let wire = report.to_json();
    if let (Some(out), Some(tree)) = (output, report.tree()) {
        fs::write(out, format!("{}\n", to_newick(tree))).with_context(|| format!("cannot write {}", out.display()))?;
    }
    if let Some(p) = report_path {
        write_json_file(&wire, p)?;
    }
    if json {
        print_json(&wire)?;
    } else {
        match (report.tree(), report.rejection()) {
            (Some(tree), _) => {
                println!("{}", classify_positivity(&report));
                println!("{}", to_newick(tree));
            }
            (None, Some(rejection)) => {
                println!("not treelike");
                println!("{}", serde_json::to_string(rejection)?);
            }
            (None, None) => unreachable!("a report is either realized or rejected"),
        }
    }
    Ok(if report.is_realized() { 0 } else { 1 })
}

#[derive(Serialize)]
struct CheckReport {
    n: usize,
    k: usize,
    verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    four_point_witness: Option<FourPointWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hierarchy: Option<HierarchyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    condition_i: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    condition_ii: Option<ConditionII>,
}

fn check(json: bool, path: &Path, q_max: Option<usize>, budget: u64) -> Result<u8> {
    let family = read_family(path)?;
    let (n, k) = (family.n(), family.k());
    let mut report = CheckReport {
        n,
        k,
        verdict: false,
        note: None,
        four_point_witness: None,
        hierarchy: None,
        condition_i: None,
        condition_ii: None,
    };
    if k == 2 {
        report.four_point_witness = four_point_check(&family)?;
        report.verdict = report.four_point_witness.is_none();
        report.note = Some("four-point condition".into());
    } else if k + 1 == n && k >= 5 {
        report.verdict = true;
        report.note = Some("every family with k = n-1 is realized by a star".into());
    } else if (5..=n.saturating_sub(2)).contains(&k) {
        let q_max = q_max.unwrap_or(n - 1);
        if q_max == 0 || q_max > n - 1 {
            bail!("--condition-ii-qmax must lie in 1..={}", n - 1);
        }
        match infer_hierarchy(&family) {
            Ok(inferred) => {
                let h = inferred.hierarchy;
                let condition_i = check_condition_i(&h);
                let budget = (budget > 0).then_some(budget);
                let condition_ii = check_condition_ii(&family, &h, q_max, budget);
                report.verdict = condition_i && !condition_ii.is_violated();
                if let ConditionII::Exhausted { truncated } = condition_ii {
                    report.note = Some(format!("condition (ii) budget cut off {truncated} enumerations"));
                }
                report.hierarchy = Some(h.to_json());
                report.condition_i = Some(condition_i);
                report.condition_ii = Some(condition_ii);
            }
            Err(Error::NotLaminar(detail)) => {
                report.note = Some(format!("neighbour classes are not laminar: {detail}"));
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        report.note = Some(format!("no diagnostics for k = {k} with n = {n}; need k = 2 or 5 <= k <= n-1"));
    }
    if json {
        print_json(&report)?;
    } else {
        println!("{}", if report.verdict { "pass" } else { "fail" });
        if let Some(note) = &report.note {
            println!("{note}");
        }
        if let Some(w) = &report.four_point_witness {
            println!("four-point violation at {:?}: sums {:?}", w.quadruple, w.sums);
        }
        if let Some(h) = &report.hierarchy {
            println!("hierarchy: {}", serde_json::to_string(&h.clusters)?);
        }
        if let Some(ci) = report.condition_i {
            println!("condition (i): {}", if ci { "holds" } else { "fails" });
        }
        if let Some(cii) = &report.condition_ii {
            println!("condition (ii): {}", serde_json::to_string(cii)?);
        }
    }
    Ok(if report.verdict { 0 } else { 1 })
}

#[derive(Serialize)]
struct SimulationSummary {
    n: usize,
    k: usize,
    seed: u64,
    trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturb: Option<String>,
    passed: usize,
    failed: usize,
    rejected: usize,
    realized: usize,
    reports: Vec<RoundTripReport>,
}

fn simulate(
    json: bool,
    n: usize,
    k: usize,
    trials: u64,
    seed: u64,
    perturb: Option<&str>,
    signs: Signs,
) -> Result<u8> {
    if !(5..n).contains(&k) {
        bail!("simulate needs 5 <= k <= n-1, got n = {n}, k = {k}");
    }
    check_size(n, k)?;
    let delta = perturb
        .map(|text| Rational::parse_value(text).with_context(|| format!("bad --perturb value {text:?}")))
        .transpose()?;
    let configs: Vec<GeneratorConfig> = (0..trials)
        .map(|t| GeneratorConfig::new(n, k, seed.wrapping_add(t)).with_sign_mode(signs.into()))
        .collect();
    let reports = configs
        .par_iter()
        .map(|c| roundtrip(c, delta.clone()))
        .collect::<multiweight::Result<Vec<_>>>()?;
    let passed = reports.iter().filter(|r| r.passed).count();
    let summary = SimulationSummary {
        n,
        k,
        seed,
        trials,
        perturb: delta.as_ref().map(|d| d.render()),
        passed,
        failed: reports.len() - passed,
        rejected: reports.iter().filter(|r| r.rejection.is_some()).count(),
        realized: reports.iter().filter(|r| r.recovered.is_some()).count(),
        reports,
    };
    if json {
        print_json(&summary)?;
    } else {
        println!(
            "{} of {} trials passed ({} realized, {} rejected)",
            summary.passed, summary.trials, summary.realized, summary.rejected
        );
        for r in summary.reports.iter().filter(|r| !r.passed) {
            println!("seed {}: {} (source {})", r.seed, r.detail, r.source);
        }
    }
    Ok(if summary.failed == 0 { 0 } else { 1 })
}

fn aggregate(json: bool, path: &Path, output: Option<&Path>) -> Result<u8> {
    let family = read_family(path)?;
    emit_family(json, &aggregate_pairwise(&family)?, output)
}
