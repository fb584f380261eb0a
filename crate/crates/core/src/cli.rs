//! Command-line front end.
//!
//! Every subcommand writes into `--out` and leaves a `manifest.txt` there.
//! Grid subcommands (`enumerate`, `global`, `local`) write one subdirectory
//! per (λ, β) cell named `l<λ>_b<β>`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 search budget
//! exhausted without an optimality certificate (`learn`/`enumerate` with
//! `--strict`).

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::antecedent::{mine_antecedents_with, AntecedentSet, MiningConfig};
use crate::audit::{flip_influence, LookupOracle, RuleListOracle};
use crate::data::{split_dataset, Dataset, RawTable, Recipe, SplitSpec, DEFAULT_CATEGORY_CAP};
use crate::enumerate::{enumerate_models_with, EnumeratedModel, EnumerationOptions};
use crate::error::{Error, Result};
use crate::fairness::{MetricKind, RateMode};
use crate::rationalize::{
    default_k, evaluate_on_test, laundryml_global_with, local_cohort_with, BlackBoxPredictions, CohortSpec,
    RationalizeOptions,
};
use crate::report::{self, Manifest};
use crate::rule_list::RuleList;
use crate::search::{corels_optimize, SearchConfig};
use crate::synthetic;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fairwash",
    version,
    about = "Fairness-regularized rule lists that mimic a black box"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Binarize a raw CSV with a recipe (or draw synthetic data) and optionally split it.
    Prep(PrepArgs),
    /// List the mined antecedents.
    Mine(MineArgs),
    /// Learn one optimal rule list for the dataset labels.
    Learn(LearnArgs),
    /// Enumerate rule lists in objective order for every grid cell.
    Enumerate(EnumerateArgs),
    /// Model rationalization of a black box on a suing group.
    Global(GlobalArgs),
    /// Outcome rationalization for rejected minority subjects.
    Local(LocalArgs),
    /// Flip-influence ranking of a black box and/or a stored rule list.
    Audit(AuditArgs),
    /// Rebuild top-level tables from the cell directories of a grid run.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Seed for every random choice (splits, synthetic data).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// Binary CSV dataset.
    #[arg(long, conflicts_with = "synthetic")]
    data: Option<PathBuf>,
    /// Draw this many rows from the built-in synthetic generator instead.
    #[arg(long)]
    synthetic: Option<usize>,
    /// Sensitive column of `--data`.
    #[arg(long)]
    sensitive: Option<String>,
    /// Label column of `--data`.
    #[arg(long)]
    label: Option<String>,
    /// Black-box predictions, one 0/1 per dataset row.
    #[arg(long)]
    blackbox: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct MiningArgs {
    /// Minimum support of an antecedent and of its complement.
    #[arg(long, default_value_t = 0.05)]
    min_support: f64,
    /// Mine positive literals only.
    #[arg(long)]
    no_negations: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Strict,
    Lenient,
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Length penalty; repeat for a grid.
    #[arg(long = "lambda", default_values_t = [0.005])]
    lambdas: Vec<f64>,
    /// Unfairness weight; repeat for a grid.
    #[arg(long = "beta", default_values_t = [0.0])]
    betas: Vec<f64>,
    /// Unfairness metric: dp, sp, oae or cpa.
    #[arg(long, default_value = "dp")]
    metric: String,
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    rate_mode: Mode,
    #[arg(long, default_value_t = 5)]
    max_length: usize,
    /// Nodes evaluated per search before giving up the certificate.
    #[arg(long, default_value_t = 10_000_000)]
    node_budget: u64,
}

#[derive(Args, Debug)]
struct PrepArgs {
    #[command(flatten)]
    common: Common,
    /// Raw CSV with arbitrary values.
    #[arg(long, conflicts_with = "synthetic", requires = "recipe")]
    raw: Option<PathBuf>,
    /// Preprocessing recipe (`column: directive` lines).
    #[arg(long)]
    recipe: Option<PathBuf>,
    /// Draw this many synthetic rows instead.
    #[arg(long)]
    synthetic: Option<usize>,
    /// Split fractions `train,suing,test`.
    #[arg(long)]
    split: Option<String>,
}

#[derive(Args, Debug)]
struct MineArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
}

#[derive(Args, Debug)]
struct LearnArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    search: SearchArgs,
    /// Exit 3 when the node budget runs out before optimality is certified.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = 50)]
    max_models: usize,
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = 50)]
    max_models: usize,
    /// Held-out dataset for test fidelity and unfairness.
    #[arg(long, requires = "test_blackbox")]
    test: Option<PathBuf>,
    /// Black-box predictions for `--test`.
    #[arg(long)]
    test_blackbox: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LocalArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, default_value_t = 50)]
    max_models: usize,
    /// Neighborhood size; defaults to `ceil(k_fraction · n)`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    k_fraction: f64,
    /// Sensitive value of the minority group.
    #[arg(long, default_value_t = 0)]
    minority: u8,
    /// Black-box outcome counted as a rejection.
    #[arg(long, default_value_t = 0)]
    negative: u8,
    /// Neighborhood unfairness a subject must exceed to enter the cohort.
    #[arg(long, default_value_t = 0.05)]
    threshold: f64,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    /// Models file to audit a rule list from.
    #[arg(long)]
    models: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    model_id: usize,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Output directory of an earlier grid run.
    #[arg(long)]
    dir: PathBuf,
}

/// A failure of one run, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
    Uncertified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::BudgetZero | Error::InvalidSplit(_) => Failure::Usage(e.to_string()),
            e => Failure::Data(e),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let threads = match &cli.command {
        Command::Prep(a) => a.common.threads,
        Command::Mine(a) => a.common.threads,
        Command::Learn(a) => a.common.threads,
        Command::Enumerate(a) => a.common.threads,
        Command::Global(a) => a.common.threads,
        Command::Local(a) => a.common.threads,
        Command::Audit(a) => a.common.threads,
        Command::Report(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(cli.command, &args)) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
        Err(Failure::Uncertified(m)) => {
            eprintln!("uncertified: {m}");
            EXIT_UNCERTIFIED
        }
    }
}

/// Command-line arguments recorded in a manifest, program name excluded.
pub fn manifest_args(manifest: &str) -> Result<Vec<String>> {
    let m = Manifest::parse(manifest)?;
    Ok(m.entries
        .iter()
        .filter(|(k, _)| k.starts_with("arg."))
        .map(|(_, v)| v.clone())
        .collect())
}

fn dispatch(cmd: Command, args: &[String]) -> Outcome {
    match cmd {
        Command::Prep(a) => prep(a, args),
        Command::Mine(a) => mine(a, args),
        Command::Learn(a) => learn(a, args),
        Command::Enumerate(a) => enumerate(a, args),
        Command::Global(a) => global(a, args),
        Command::Local(a) => local(a, args),
        Command::Audit(a) => audit(a, args),
        Command::Report(a) => rebuild(&a.dir).map(|_| ()),
    }
}

fn manifest(subcommand: &str, args: &[String], common: &Common) -> Manifest {
    let mut m = Manifest::default();
    m.push("tool", "fairwash");
    m.push("version", env!("CARGO_PKG_VERSION"));
    m.push("subcommand", subcommand);
    for (i, a) in args.iter().enumerate() {
        m.push(format!("arg.{i}"), a);
    }
    m.push("seed", common.seed);
    m.push("threads", common.threads);
    m
}

fn push_data(m: &mut Manifest, d: &DataArgs) {
    if let Some(p) = &d.data {
        m.push("data", p.display());
    }
    if let Some(n) = d.synthetic {
        m.push("synthetic_rows", n);
    }
    if let Some(s) = &d.sensitive {
        m.push("sensitive", s);
    }
    if let Some(l) = &d.label {
        m.push("label", l);
    }
    if let Some(b) = &d.blackbox {
        m.push("blackbox", b.display());
    }
}

fn push_search(m: &mut Manifest, s: &SearchArgs, mining: &MiningConfig) {
    let join = |v: &[f64]| v.iter().map(|x| report::num(*x)).collect::<Vec<_>>().join(",");
    m.push("lambda", join(&s.lambdas));
    m.push("beta", join(&s.betas));
    m.push("metric", &s.metric);
    m.push("rate_mode", format!("{:?}", s.rate_mode).to_lowercase());
    m.push("max_length", s.max_length);
    m.push("node_budget", s.node_budget);
    m.push("min_support", mining.min_support);
    m.push("negations", mining.include_negations);
}

struct Loaded {
    data: Dataset,
    blackbox: Option<BlackBoxPredictions>,
}

fn load(d: &DataArgs, seed: u64) -> std::result::Result<Loaded, Failure> {
    match (&d.data, d.synthetic) {
        (Some(path), None) => {
            let (Some(s), Some(l)) = (&d.sensitive, &d.label) else {
                return Err(Failure::Usage("--data needs --sensitive and --label".into()));
            };
            let data = crate::data::load_csv(path, s, l)?;
            let blackbox = d.blackbox.as_ref().map(BlackBoxPredictions::read).transpose()?;
            if let Some(b) = &blackbox {
                b.check_aligned(&data)?;
            }
            Ok(Loaded { data, blackbox })
        }
        (None, Some(n)) => {
            let data = synthetic::generate(n, seed);
            let blackbox = match &d.blackbox {
                Some(p) => BlackBoxPredictions::read(p)?,
                None => BlackBoxPredictions::new(synthetic::blackbox_predictions(&data).0, "synthetic-rule")?,
            };
            blackbox.check_aligned(&data)?;
            Ok(Loaded {
                data,
                blackbox: Some(blackbox),
            })
        }
        _ => Err(Failure::Usage("give exactly one of --data or --synthetic".into())),
    }
}

fn require_blackbox(l: &Loaded) -> std::result::Result<&BlackBoxPredictions, Failure> {
    l.blackbox
        .as_ref()
        .ok_or_else(|| Failure::Usage("this subcommand needs --blackbox".into()))
}

fn mining_config(m: &MiningArgs) -> MiningConfig {
    MiningConfig {
        min_support: m.min_support,
        include_negations: !m.no_negations,
        include_sensitive: false,
    }
}

fn grid(s: &SearchArgs) -> std::result::Result<Vec<SearchConfig>, Failure> {
    let metric: MetricKind = s.metric.parse()?;
    let rate_mode = match s.rate_mode {
        Mode::Strict => RateMode::Strict,
        Mode::Lenient => RateMode::Lenient,
    };
    let mut cells = Vec::new();
    for &lambda in &s.lambdas {
        for &beta in &s.betas {
            let cfg = SearchConfig {
                lambda,
                beta,
                metric,
                rate_mode,
                max_length: s.max_length,
                node_budget: s.node_budget,
                ..Default::default()
            };
            cfg.validate()?;
            cells.push(cfg);
        }
    }
    Ok(cells)
}

fn finish(out: &Path, m: &Manifest) -> Outcome {
    report::write(out, report::MANIFEST, &m.render())?;
    Ok(())
}

fn prep(a: PrepArgs, args: &[String]) -> Outcome {
    let out = &a.common.out;
    let mut m = manifest("prep", args, &a.common);
    let (data, label, blackbox) = match (&a.raw, a.synthetic) {
        (Some(raw), None) => {
            let recipe_path = a.recipe.as_ref().expect("clap enforces --recipe");
            let recipe = Recipe::read(recipe_path)?;
            let table = recipe.apply(&RawTable::read(raw)?, DEFAULT_CATEGORY_CAP)?;
            let text = table_to_csv(&table);
            let d = crate::data::parse_csv("data", &text, recipe.sensitive_column(), recipe.label_column())?;
            m.push("raw", raw.display());
            m.push("recipe", recipe_path.display());
            (d, recipe.label_column().to_string(), None)
        }
        (None, Some(n)) => {
            let d = synthetic::generate(n, a.common.seed);
            let b = synthetic::blackbox_predictions(&d);
            m.push("synthetic_rows", n);
            (d, synthetic::LABEL.to_string(), Some(b))
        }
        _ => return Err(Failure::Usage("give exactly one of --raw or --synthetic".into())),
    };
    let write_part = |name: &str, d: &Dataset, positions: Option<&[usize]>| -> Result<()> {
        report::write(out, &format!("{name}.csv"), &d.to_csv_string(&label))?;
        if let Some(b) = &blackbox {
            let preds: Vec<u8> = match positions {
                Some(p) => p.iter().map(|&r| b[r]).collect(),
                None => b.0.clone(),
            };
            let text: String = std::iter::once("prediction\n".to_string())
                .chain(preds.iter().map(|p| format!("{p}\n")))
                .collect();
            report::write(out, &format!("{name}_blackbox.csv"), &text)?;
        }
        Ok(())
    };
    write_part("data", &data, None)?;
    if let Some(split) = &a.split {
        let f: Vec<f64> = split
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Failure::Usage(format!("bad --split `{split}`")))?;
        if f.len() != 3 {
            return Err(Failure::Usage("--split takes train,suing,test".into()));
        }
        let spec = SplitSpec::new(f[0], f[1], f[2], a.common.seed)?;
        let (train, suing, test) = split_dataset(&data, &spec)?;
        for (name, part) in [("train", &train), ("suing", &suing), ("test", &test)] {
            write_part(name, part, Some(part.row_ids()))?;
        }
        m.push("split", split);
    }
    m.push("rows", data.n_rows());
    m.push("columns", data.n_cols());
    finish(out, &m)
}

fn table_to_csv(t: &RawTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.headers).expect("in-memory write");
    for r in &t.rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn mine(a: MineArgs, args: &[String]) -> Outcome {
    let l = load(&a.data, a.common.seed)?;
    let mining = mining_config(&a.mining);
    let ants = mine_antecedents_with(&l.data, &mining)?;
    report::write(&a.common.out, report::ANTECEDENTS, &report::antecedents_txt(&ants))?;
    let mut m = manifest("mine", args, &a.common);
    push_data(&mut m, &a.data);
    m.push("min_support", mining.min_support);
    m.push("negations", mining.include_negations);
    m.push("antecedents", ants.len());
    finish(&a.common.out, &m)
}

/// The training target: black-box predictions when given, labels otherwise.
fn target(l: &Loaded, explicit_blackbox: bool) -> Result<Dataset> {
    match (&l.blackbox, explicit_blackbox) {
        (Some(b), true) => l.data.with_labels(&b.preds),
        _ => Ok(l.data.clone()),
    }
}

fn learn(a: LearnArgs, args: &[String]) -> Outcome {
    let cells = grid(&a.search)?;
    if cells.len() != 1 {
        return Err(Failure::Usage("learn takes a single --lambda and --beta".into()));
    }
    let cfg = cells[0];
    let l = load(&a.data, a.common.seed)?;
    let t = target(&l, a.data.blackbox.is_some())?;
    let mining = mining_config(&a.mining);
    let ants = mine_antecedents_with(&t, &mining)?;
    let all: BTreeSet<usize> = ants.ids().collect();
    let r = corels_optimize(&ants, &t, &cfg, &all, &BTreeSet::new())?;
    let m = EnumeratedModel {
        model: r.best.clone(),
        objective: r.objective,
        misc: r.misc,
        unfairness: r.unfairness,
        fidelity: 1.0 - r.misc,
        certified_optimal: r.certified_optimal,
    };
    let out = &a.common.out;
    write_models(out, &ants, std::slice::from_ref(&m), &cfg)?;
    println!("{}", r.best.render(&ants)?);
    let mut man = manifest("learn", args, &a.common);
    push_data(&mut man, &a.data);
    push_search(&mut man, &a.search, &mining);
    man.push("nodes_evaluated", r.nodes_evaluated);
    man.push("certified_optimal", r.certified_optimal);
    finish(out, &man)?;
    if a.strict && !r.certified_optimal {
        return Err(Failure::Uncertified(format!(
            "node budget {} exhausted before optimality was certified",
            cfg.node_budget
        )));
    }
    Ok(())
}

fn write_models(dir: &Path, ants: &AntecedentSet, models: &[EnumeratedModel], cfg: &SearchConfig) -> Result<()> {
    report::write(dir, report::ANTECEDENTS, &report::antecedents_txt(ants))?;
    report::write(dir, report::MODELS, &report::models_txt(models))?;
    report::write(
        dir,
        report::TRADEOFF,
        &report::tradeoff_csv(report::tradeoff_rows(models, cfg.lambda, cfg.beta)),
    )
}

fn enumerate(a: EnumerateArgs, args: &[String]) -> Outcome {
    let cells = grid(&a.search)?;
    let l = load(&a.data, a.common.seed)?;
    let t = target(&l, a.data.blackbox.is_some())?;
    let mining = mining_config(&a.mining);
    let ants = mine_antecedents_with(&t, &mining)?;
    let opts = EnumerationOptions::models(a.max_models);
    let out = &a.common.out;
    let runs = cells
        .par_iter()
        .map(|cfg| enumerate_models_with(&ants, &t, cfg, &opts))
        .collect::<Result<Vec<_>>>()?;
    let mut uncertified = 0;
    for (cfg, models) in cells.iter().zip(&runs) {
        write_models(&out.join(report::cell_dir(cfg.lambda, cfg.beta)), &ants, models, cfg)?;
        uncertified += models.iter().filter(|m| !m.certified_optimal).count();
    }
    rebuild(out)?;
    let mut man = manifest("enumerate", args, &a.common);
    push_data(&mut man, &a.data);
    push_search(&mut man, &a.search, &mining);
    man.push("max_models", a.max_models);
    man.push("uncertified_models", uncertified);
    finish(out, &man)?;
    if a.strict && uncertified > 0 {
        return Err(Failure::Uncertified(format!(
            "{uncertified} models without certificate"
        )));
    }
    Ok(())
}

fn global(a: GlobalArgs, args: &[String]) -> Outcome {
    let cells = grid(&a.search)?;
    let l = load(&a.data, a.common.seed)?;
    let b = require_blackbox(&l)?;
    let test = match (&a.test, &a.test_blackbox) {
        (Some(tp), Some(bp)) => {
            let (Some(s), Some(lab)) = (&a.data.sensitive, &a.data.label) else {
                return Err(Failure::Usage("--test needs --sensitive and --label".into()));
            };
            Some((crate::data::load_csv(tp, s, lab)?, BlackBoxPredictions::read(bp)?))
        }
        _ => None,
    };
    let opts = RationalizeOptions {
        mining: mining_config(&a.mining),
        enumeration: EnumerationOptions::models(a.max_models),
    };
    let reports = cells
        .par_iter()
        .map(|cfg| {
            let mut r = laundryml_global_with(&l.data, b, cfg, &opts)?;
            if let Some((td, tb)) = &test {
                evaluate_on_test(&mut r, td, tb)?;
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = &a.common.out;
    let t = l.data.with_labels(&b.preds)?;
    for r in &reports {
        let dir = out.join(report::cell_dir(r.config.lambda, r.config.beta));
        let models: Vec<EnumeratedModel> = r.models.iter().map(|m| m.model.clone()).collect();
        write_models(&dir, &r.antecedents, &models, &r.config)?;
        if let Some(sel) = r.selected_model() {
            let bb = flip_influence(&LookupOracle::new(&t, &b.preds)?, &t, "blackbox")?;
            let oracle = RuleListOracle {
                list: &sel.model.model,
                ants: &r.antecedents,
            };
            let sur = flip_influence(&oracle, &t, format!("model{}", sel.index))?;
            report::write(&dir, report::AUDIT, &report::audit_csv(&[&bb, &sur]))?;
        }
    }
    report::write(
        out,
        report::SELECTION,
        &report::selection_csv(reports.iter().map(report::selection_row)),
    )?;
    rebuild(out)?;
    for r in &reports {
        match r.selected_model() {
            Some(m) => println!(
                "{}: baseline {:.3}, selected model {} fidelity {:.3} unfairness {:.3}",
                report::cell_dir(r.config.lambda, r.config.beta),
                r.baseline_unfairness,
                m.index,
                m.fidelity(),
                m.unfairness()
            ),
            None => println!(
                "{}: baseline {:.3}, no model passes selection",
                report::cell_dir(r.config.lambda, r.config.beta),
                r.baseline_unfairness
            ),
        }
    }
    let mut man = manifest("global", args, &a.common);
    push_data(&mut man, &a.data);
    push_search(&mut man, &a.search, &opts.mining);
    man.push("max_models", a.max_models);
    finish(out, &man)
}

fn local(a: LocalArgs, args: &[String]) -> Outcome {
    let cells = grid(&a.search)?;
    if a.search.lambdas.len() != 1 {
        return Err(Failure::Usage(
            "local takes a single --lambda (repeat --beta for a grid)".into(),
        ));
    }
    let l = load(&a.data, a.common.seed)?;
    let b = require_blackbox(&l)?;
    let k = match a.k {
        Some(k) => k,
        None if a.k_fraction == 0.1 => default_k(l.data.n_rows()),
        None if a.k_fraction > 0.0 && a.k_fraction <= 1.0 => {
            ((a.k_fraction * l.data.n_rows() as f64).ceil() as usize).max(1)
        }
        None => return Err(Failure::Usage("--k-fraction must lie in (0, 1]".into())),
    };
    let spec = CohortSpec {
        minority: a.minority,
        negative: a.negative,
        threshold: a.threshold,
    };
    let opts = RationalizeOptions {
        mining: mining_config(&a.mining),
        enumeration: EnumerationOptions::models(a.max_models),
    };
    let out = &a.common.out;
    let mut coverage = Vec::new();
    for cfg in &cells {
        let r = local_cohort_with(&l.data, b, cfg, k, &opts, &spec)?;
        let dir = out.join(report::cell_dir(cfg.lambda, cfg.beta));
        report::write(&dir, report::SUBJECTS, &report::subjects_csv(&r))?;
        report::write(&dir, report::CDF, &report::cdf_csv(&r))?;
        println!(
            "{}: cohort {} coverage {:.4}",
            report::cell_dir(cfg.lambda, cfg.beta),
            r.subjects.len(),
            r.coverage
        );
        coverage.push((cfg.beta, r.coverage));
    }
    report::write(out, report::COVERAGE, &report::coverage_csv(&coverage))?;
    let mut man = manifest("local", args, &a.common);
    push_data(&mut man, &a.data);
    push_search(&mut man, &a.search, &opts.mining);
    man.push("max_models", a.max_models);
    man.push("k", k);
    man.push("minority", a.minority);
    man.push("negative", a.negative);
    man.push("threshold", a.threshold);
    finish(out, &man)
}

fn audit(a: AuditArgs, args: &[String]) -> Outcome {
    let l = load(&a.data, a.common.seed)?;
    let mut rankings = Vec::new();
    if a.data.blackbox.is_some() || (a.data.synthetic.is_some() && a.models.is_none()) {
        let b = require_blackbox(&l)?;
        let t = l.data.with_labels(&b.preds)?;
        rankings.push(flip_influence(&LookupOracle::new(&t, &b.preds)?, &t, "blackbox")?);
    }
    let mining = mining_config(&a.mining);
    if let Some(path) = &a.models {
        let lines = report::parse_models_txt(&report::read(path)?)?;
        let line = lines
            .iter()
            .find(|m| m.model_id == a.model_id)
            .ok_or_else(|| Failure::Usage(format!("no model {} in {}", a.model_id, path.display())))?;
        let list = RuleList::parse(&line.canonical)?;
        let ants = mine_antecedents_with(&l.data, &mining)?;
        let oracle = RuleListOracle {
            list: &list,
            ants: &ants,
        };
        rankings.push(flip_influence(&oracle, &l.data, format!("model{}", a.model_id))?);
    }
    if rankings.is_empty() {
        return Err(Failure::Usage("audit needs --blackbox and/or --models".into()));
    }
    let refs: Vec<_> = rankings.iter().collect();
    report::write(&a.common.out, report::AUDIT, &report::audit_csv(&refs))?;
    let s = l.data.sensitive_col();
    for r in &rankings {
        println!(
            "{}: `{}` ranks {} of {}",
            r.model_tag,
            l.data.feature_names()[s],
            r.rank_of(s),
            r.entries.len()
        );
    }
    let mut man = manifest("audit", args, &a.common);
    push_data(&mut man, &a.data);
    man.push("estimator", crate::audit::ESTIMATOR);
    finish(&a.common.out, &man)
}

/// Cell directories of a grid run, ordered by (λ, β).
fn cells_in(dir: &Path) -> Result<Vec<(f64, f64, PathBuf)>> {
    let mut cells = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    for e in entries.flatten() {
        let name = e.file_name().to_string_lossy().into_owned();
        let parsed = name
            .strip_prefix('l')
            .and_then(|r| r.split_once("_b"))
            .and_then(|(l, b)| Some((l.parse::<f64>().ok()?, b.parse::<f64>().ok()?)));
        if let (Some((l, b)), true) = (parsed, e.path().is_dir()) {
            cells.push((l, b, e.path()));
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(cells)
}

/// Rewrites the top-level `tradeoff.csv` (and `coverage.csv` for local runs)
/// from the cell directories. Returns the number of cells found.
fn rebuild(dir: &Path) -> std::result::Result<usize, Failure> {
    let cells = cells_in(dir)?;
    if cells.is_empty() {
        return Err(Failure::Usage(format!(
            "no l<lambda>_b<beta> cells in {}",
            dir.display()
        )));
    }
    let mut tradeoff = Vec::new();
    let mut coverage = Vec::new();
    for (_, beta, path) in &cells {
        let t = path.join(report::TRADEOFF);
        if t.exists() {
            let text = report::read(&t)?;
            let mut r = csv::Reader::from_reader(text.as_bytes());
            for rec in r.records() {
                let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
                tradeoff.push(rec.iter().map(str::to_string).collect::<Vec<_>>());
            }
        }
        let s = path.join(report::SUBJECTS);
        if s.exists() {
            coverage.push((*beta, report::coverage_from_subjects(&report::read(&s)?)?));
        }
    }
    if !tradeoff.is_empty() {
        report::write(dir, report::TRADEOFF, &report::tradeoff_csv(tradeoff))?;
    }
    if !coverage.is_empty() {
        report::write(dir, report::COVERAGE, &report::coverage_csv(&coverage))?;
    }
    Ok(cells.len())
}
