//! Configuration, pipeline and report writing for the `kummer` binary.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::binomial;
use serde::Serialize;
use serde_json::{json, Value};

use kummer_core::assembler::{assemble, CrossedProductReport};
use kummer_core::homology::{
    random_twisted_cycle, reduce_twisted_cycle, twisted_result, untwisted_homology, untwisted_result, HochschildResult,
    HomologyError,
};
use kummer_core::koszul::{block_matrix, BlockKey, WedgeIndex};
use kummer_core::les_solver::{cyclic_from_hochschild, expected_hc, expected_hp_even, CyclicReport};
use kummer_core::linalg::{derive_seed, exact_rank, rank, Backend, RankOptions};
use kummer_core::scalars::Scalar;
use kummer_core::transport::invariance_sign;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_NOT_STABILIZED: i32 = 3;
pub const EXIT_INVALID_CONFIG: i32 = 4;

/// Worker-count override for the rayon pool.
pub const WORKERS_ENV: &str = "KUMMER_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "kummer", version, about = "Exact homology of the flip orbifold of the quantum n-torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Hochschild homology: untwisted, twisted, and the crossed product.
    Hochschild(CommonArgs),
    /// Cyclic homology of the crossed product via the Connes sequence.
    Cyclic(CommonArgs),
    /// Periodic cyclic homology of the crossed product.
    Periodic(CommonArgs),
    /// Flip action on the homology generators.
    Invariance(CommonArgs),
    /// Reduce seeded random twisted cycles to explicit boundaries.
    ReduceCycle(CommonArgs),
    /// Every check above for one n.
    VerifyAll(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Torus dimension (2..=4).
    #[arg(long)]
    pub n: usize,
    /// Support window L: multidegrees in [-L, L]^n.
    #[arg(long, default_value_t = 3)]
    pub window: i32,
    /// Extra window for boundaries in the twisted estimate.
    #[arg(long, default_value_t = 2)]
    pub margin: i32,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Largest cyclic degree reported.
    #[arg(long, default_value_t = 8)]
    pub max_degree: usize,
    /// Cycle degree for reduce-cycle.
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// Number of cycles for reduce-cycle.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Exact,
    Modular,
    Auto,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Hochschild,
    Cyclic,
    Periodic,
    Invariance,
    ReduceCycle,
    VerifyAll,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Hochschild => "hochschild",
            Self::Cyclic => "cyclic",
            Self::Periodic => "periodic",
            Self::Invariance => "invariance",
            Self::ReduceCycle => "reduce-cycle",
            Self::VerifyAll => "verify-all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub window: i32,
    pub margin: i32,
    pub backend: BackendArg,
    pub seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub format: Format,
    pub max_degree: usize,
    pub degree: usize,
    pub count: usize,
}

impl RunConfig {
    pub fn from_command(cmd: Command) -> Self {
        let (command, a) = match cmd {
            Command::Hochschild(a) => (CommandKind::Hochschild, a),
            Command::Cyclic(a) => (CommandKind::Cyclic, a),
            Command::Periodic(a) => (CommandKind::Periodic, a),
            Command::Invariance(a) => (CommandKind::Invariance, a),
            Command::ReduceCycle(a) => (CommandKind::ReduceCycle, a),
            Command::VerifyAll(a) => (CommandKind::VerifyAll, a),
        };
        Self {
            command,
            n: a.n,
            window: a.window,
            margin: a.margin,
            backend: a.backend,
            seed: a.seed,
            output: a.output,
            format: a.format,
            max_degree: a.max_degree,
            degree: a.degree,
            count: a.count,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(2..=4).contains(&self.n) {
            return Err(format!("--n must be in 2..=4, got {}", self.n));
        }
        if self.window < 2 {
            return Err(format!("--window must be at least 2, got {}", self.window));
        }
        if self.margin < 2 {
            return Err(format!("--margin must be at least 2, got {}", self.margin));
        }
        if self.command == CommandKind::ReduceCycle {
            if !(1..self.n).contains(&self.degree) {
                return Err(format!("--degree must be in 1..{} for reduce-cycle, got {}", self.n, self.degree));
            }
            if self.count == 0 {
                return Err("--count must be positive".into());
            }
        }
        Ok(())
    }

    pub fn rank_options(&self) -> RankOptions {
        let backend = match self.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Modular => Backend::Modular,
            BackendArg::Auto => Backend::Auto,
        };
        RankOptions { backend, seed: self.seed, ..RankOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub degree: Option<usize>,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, degree: Option<usize>, expected: impl Serialize, computed: impl Serialize) -> Self {
        let expected = serde_json::to_value(expected).expect("serializable");
        let computed = serde_json::to_value(computed).expect("serializable");
        let pass = expected == computed;
        Self { name: name.into(), degree, expected, computed, pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(config: RunConfig) -> Self {
        Self { config, results: BTreeMap::new(), checks: Vec::new(), notes: Vec::new() }
    }

    fn put(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Flat `(command, n, degree, dimension, expected, pass)` rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["command", "check", "n", "degree", "dimension", "expected", "pass"]).expect("in-memory write");
        let show = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        for c in &self.checks {
            w.write_record([
                self.config.command.name().to_string(),
                c.name.clone(),
                self.config.n.to_string(),
                c.degree.map(|d| d.to_string()).unwrap_or_default(),
                show(&c.computed),
                show(&c.expected),
                c.pass.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
    }
}

/// Result of one run: the report and the process exit code.
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

enum Halt {
    NotStabilized,
    Failed,
}

fn halt(report: &mut Report, err: HomologyError) -> Halt {
    report.notes.push(format!("error: {err}"));
    match err {
        HomologyError::NotStabilized { degree, class, trajectory } => {
            report.put("stabilization_failure", json!({ "degree": degree, "class": class, "trajectory": trajectory }));
            Halt::NotStabilized
        }
        _ => Halt::Failed,
    }
}

struct Hochschild {
    crossed: CrossedProductReport,
}

fn hochschild_stage(cfg: &RunConfig, report: &mut Report) -> Result<Hochschild, Halt> {
    let n = cfg.n;
    let opts = cfg.rank_options();
    let untwisted = untwisted_result(n, cfg.window, &opts.for_job("untwisted")).map_err(|e| halt(report, e))?;
    let twisted = twisted_result(n, cfg.window, cfg.margin, &opts.for_job("twisted")).map_err(|e| halt(report, e))?;
    for s in 0..=n {
        report.checks.push(Check::new("untwisted_hh", Some(s), binomial(n, s), untwisted.dims[&s]));
        let expected_inv = if s % 2 == 0 { binomial(n, s) } else { 0 };
        report.checks.push(Check::new("untwisted_invariants", Some(s), expected_inv, untwisted.invariant_dims[&s]));
    }
    report.checks.push(Check::new("twisted_h0", Some(0), 1usize << n, twisted.dims[&0]));
    report.checks.push(Check::new("twisted_h0_invariants", Some(0), 1usize << n, twisted.invariant_dims[&0]));
    for s in 1..=n {
        report.checks.push(Check::new("twisted_vanishing", Some(s), json!({"dim": 0, "stabilized": true}), json!({
            "dim": twisted.dims[&s],
            "stabilized": twisted.stabilized[&s],
        })));
    }
    let crossed = assemble(n, &untwisted, &twisted).map_err(|e| {
        report.notes.push(format!("error: {e}"));
        Halt::Failed
    })?;
    for c in &crossed.theorem_check {
        report.checks.push(Check::new("crossed_product_hh", Some(c.degree), c.expected, c.computed));
    }
    let h0_inv = twisted.invariant_dims[&0];
    report.notes.push(format!(
        "twisted H_0 flip invariants computed as {h0_inv} (2^n = {}); a count of n = {n} would contradict the crossed-product H_0 dimension 2^n + 1 = {}",
        1usize << n,
        (1usize << n) + 1
    ));
    report.notes.extend(untwisted.notes.iter().cloned());
    report.notes.extend(twisted.notes.iter().cloned());
    report.put("untwisted", summarize(&untwisted));
    report.put("twisted", summarize(&twisted));
    report.put("crossed_product", &crossed);
    Ok(Hochschild { crossed })
}

/// The result minus per-generator records, which `invariance` reports.
fn summarize(r: &HochschildResult) -> Value {
    let mut v = serde_json::to_value(r).expect("serializable");
    if let Value::Object(map) = &mut v {
        map.remove("invariance");
    }
    v
}

fn cyclic_stage(cfg: &RunConfig, hh: &Hochschild, report: &mut Report) -> Result<CyclicReport, Halt> {
    let cyclic = cyclic_from_hochschild(&hh.crossed.hh_dims, cfg.max_degree).map_err(|e| {
        report.notes.push(format!("error: {e}"));
        Halt::Failed
    })?;
    for (k, d) in &cyclic.hc_dims {
        report.checks.push(Check::new("crossed_product_hc", Some(*k), expected_hc(cfg.n, *k), d));
    }
    report.put("cyclic", &cyclic);
    Ok(cyclic)
}

fn periodic_stage(cfg: &RunConfig, cyclic: &CyclicReport, report: &mut Report) -> Result<(), Halt> {
    let (even, odd) = kummer_core::les_solver::periodic_from_cyclic(cyclic).map_err(|e| {
        report.notes.push(format!("error: {e}; raise --max-degree"));
        Halt::NotStabilized
    })?;
    report.checks.push(Check::new("crossed_product_hp_even", None, expected_hp_even(cfg.n), even));
    report.checks.push(Check::new("crossed_product_hp_odd", None, 0, odd));
    report.put("periodic", json!({ "hp_even": even, "hp_odd": odd }));
    Ok(())
}

fn invariance_stage(cfg: &RunConfig, report: &mut Report) -> Result<(), Halt> {
    let n = cfg.n;
    let mut records = Vec::new();
    for s in 0..=n {
        for w in WedgeIndex::all(n, s) {
            let eps = invariance_sign(n, w).map_err(|e| {
                report.notes.push(format!("error: {e}"));
                Halt::Failed
            })?;
            let expected = Scalar::from_int(if s % 2 == 0 { 1 } else { -1 });
            let mut check = Check::new("sign_law", Some(s), expected.to_string(), eps.to_string());
            check.pass = eps == expected;
            report.checks.push(check);
            records.push(json!({ "degree": s, "wedge": w.to_string(), "scalar": eps.to_string() }));
        }
    }
    let twisted = kummer_core::homology::twisted_h0_invariants(n);
    for r in &twisted {
        report.checks.push(Check::new("twisted_h0_flip", Some(0), "1", r.scalar.clone()));
    }
    report.put("invariance", json!({ "untwisted": records, "twisted_h0": twisted }));
    Ok(())
}

fn reduce_stage(cfg: &RunConfig, degree: usize, count: usize, report: &mut Report) -> Result<(), Halt> {
    let mut certs = Vec::new();
    let mut failures = 0;
    for k in 0..count {
        let seed = derive_seed(cfg.seed, &format!("reduce n={} s={degree} #{k}", cfg.n));
        let gamma = random_twisted_cycle(cfg.n, degree, 2, seed);
        match reduce_twisted_cycle(&gamma) {
            Ok(cert) => {
                let ok = cert.verify();
                failures += usize::from(!ok);
                certs.push(json!({
                    "seed": seed,
                    "degree": degree,
                    "input": cert.input.to_string(),
                    "preimage": cert.preimage.to_string(),
                    "residual": cert.residual.to_string(),
                    "sweep_trace": cert.sweep_trace,
                    "round_trip": ok,
                }));
            }
            Err(e) => {
                failures += 1;
                certs.push(json!({ "seed": seed, "degree": degree, "input": gamma.to_string(), "error": e.to_string() }));
            }
        }
    }
    report.checks.push(Check::new("reduction_failures", Some(degree), 0, failures));
    report.put("reductions", certs);
    Ok(())
}

/// Exact and modular ranks on a sample of block matrices.
fn rank_agreement_stage(cfg: &RunConfig, report: &mut Report) {
    let n = cfg.n.min(3);
    let mut rows = Vec::new();
    let mut disagreements = 0;
    let classes = BlockKey::twisted_classes(n);
    let mut k = 0;
    'outer: for window in 1..=2 {
        for key in &classes {
            for s in 1..=n {
                if rows.len() == 50 {
                    break 'outer;
                }
                let m = block_matrix(n, s, key, window).matrix;
                let exact = exact_rank(&m);
                let seed = derive_seed(cfg.seed, &format!("agreement #{k}"));
                k += 1;
                let modular = rank(&m, &RankOptions::modular(seed)).map(|c| c.rank).ok();
                disagreements += usize::from(modular != Some(exact));
                rows.push(json!({ "block": key.to_string(), "degree": s, "window": window, "exact": exact, "modular": modular, "seed": seed }));
            }
        }
    }
    report.checks.push(Check::new("rank_agreement_mismatches", None, 0, disagreements));
    report.put("rank_agreement", rows);
}

/// Every untwisted block with `β ≠ 0` in `[-3, 3]^n` is exact.
fn concentration_stage(cfg: &RunConfig, report: &mut Report) -> Result<(), Halt> {
    let r = untwisted_homology(cfg.n, cfg.n, 3, &RankOptions::exact()).map_err(|e| halt(report, e))?;
    let checked: usize = r.blocks_checked.first().map(|b| b.nonzero_blocks_exact).unwrap_or(0);
    report.checks.push(Check::new("untwisted_nonzero_blocks_exact", None, 7usize.pow(cfg.n as u32) - 1, checked));
    report.put("untwisted_concentration", &r.blocks_checked);
    Ok(())
}

fn execute(cfg: &RunConfig, report: &mut Report) -> Result<(), Halt> {
    match cfg.command {
        CommandKind::Hochschild => {
            hochschild_stage(cfg, report)?;
        }
        CommandKind::Cyclic => {
            let hh = hochschild_stage(cfg, report)?;
            cyclic_stage(cfg, &hh, report)?;
        }
        CommandKind::Periodic => {
            let hh = hochschild_stage(cfg, report)?;
            let cyclic = cyclic_stage(cfg, &hh, report)?;
            periodic_stage(cfg, &cyclic, report)?;
        }
        CommandKind::Invariance => invariance_stage(cfg, report)?,
        CommandKind::ReduceCycle => reduce_stage(cfg, cfg.degree, cfg.count, report)?,
        CommandKind::VerifyAll => {
            let hh = hochschild_stage(cfg, report)?;
            let cyclic = cyclic_stage(cfg, &hh, report)?;
            periodic_stage(cfg, &cyclic, report)?;
            invariance_stage(cfg, report)?;
            reduce_stage(cfg, 1, 100, report)?;
            rank_agreement_stage(cfg, report);
            concentration_stage(cfg, report)?;
        }
    }
    Ok(())
}

/// Runs a validated configuration.
pub fn run(cfg: RunConfig) -> Outcome {
    let mut report = Report::new(cfg.clone());
    let exit_code = match execute(&cfg, &mut report) {
        Ok(()) if report.all_pass() => EXIT_OK,
        Ok(()) => EXIT_CHECK_FAILED,
        Err(Halt::NotStabilized) => EXIT_NOT_STABILIZED,
        Err(Halt::Failed) => EXIT_CHECK_FAILED,
    };
    Outcome { report, exit_code }
}

/// Writes the report in the configured format to the configured sink.
pub fn write_report(cfg: &RunConfig, report: &Report) -> std::io::Result<()> {
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Configures the global worker pool from the environment.
pub fn init_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let k: usize = raw.parse().map_err(|_| format!("{WORKERS_ENV} must be a positive integer, got {raw:?}"))?;
    if k == 0 {
        return Err(format!("{WORKERS_ENV} must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| e.to_string())
}
