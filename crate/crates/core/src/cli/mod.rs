//! Command-line front end: `vertices`, `decompose`, `simulate` and `verify`.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage or
//! input error, 3 state outside the polytope. Every error is reported as a
//! single `error: <kind>: <reason>` line on stderr.

pub mod suites;

pub use suites::{compare_circuit, run_suite, t_state_circuit, Check, Suite, SuiteConfig, SuiteReport};

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::hvm::{
    chi_square, decompose_state, oracle_simulate, parse_circuit, run_shots, HvmError, Mode, Model,
    State, Weights, PRESETS,
};
use crate::pauli::{clifford_generators, PauliError, PhaseSpace};
use crate::polytope::{
    clifford_w_map, cnc_type, enumerate_vertices, lambda_hrep, read_vertices, write_vertices,
    LambdaHRep, PolytopeError, VertexSet,
};
use crate::stabilizer::StabilizerError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("failure: {0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<HvmError> for CliError {
    fn from(e: HvmError) -> Self {
        match e {
            HvmError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            HvmError::Circuit(_) | HvmError::Preset(_) | HvmError::Dimension(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Failure(e.to_string())
            }
        }
    )*};
}
failure_from!(PolytopeError, StabilizerError, PauliError, serde_json::Error);

fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "lambda-hvm", version, about = "Hidden-variable simulation of qudit magic-state circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Local dimension
    #[arg(short = 'd', global = true)]
    pub d: Option<u32>,
    /// Number of qudits
    #[arg(short = 'n', global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate and certify the vertices of Lambda
    Vertices {
        #[command(flatten)]
        common: Common,
    },
    /// Decompose a state over the vertices of Lambda
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Preset name or a JSON file holding {"preset": ...} or {"matrix": [[...]]}
        state: String,
        #[arg(long)]
        vertices: Option<PathBuf>,
        /// exact or numeric; exact states default to exact
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Sample a circuit and compare against the quantum oracle
    Simulate {
        #[command(flatten)]
        common: Common,
        circuit: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long)]
        vertices: Option<PathBuf>,
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Run a verification suite and print a JSON report
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: Suite,
        /// Shots for the sampling checks of the hvm suite
        #[arg(long)]
        shots: Option<u64>,
    },
}

/// Resolved settings of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub d: u32,
    pub n: usize,
    pub seed: u64,
    pub shots: u64,
    pub mode: Option<Mode>,
    pub vertices: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn from_common(c: &Common) -> Result<Self, CliError> {
        let cfg = RunConfig {
            d: c.d.unwrap_or(2),
            n: c.n.unwrap_or(1),
            seed: c.seed,
            shots: 0,
            mode: None,
            vertices: None,
            out: c.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.d < 2 {
            return Err(CliError::Usage(format!("d must be at least 2, got {}", self.d)));
        }
        if self.n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        Ok(())
    }
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("bad arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error: usage: {line}");
            return 2;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error: {msg}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Vertices { common } => cmd_vertices(&RunConfig::from_common(&common)?, out),
        Command::Decompose {
            common,
            state,
            vertices,
            mode,
        } => {
            let mut cfg = RunConfig::from_common(&common)?;
            cfg.vertices = vertices;
            cfg.mode = mode;
            cmd_decompose(&cfg, &state, out)
        }
        Command::Simulate {
            common,
            circuit,
            shots,
            vertices,
            mode,
        } => {
            let text = std::fs::read_to_string(&circuit).map_err(|e| io_err(&circuit, e))?;
            let c = parse_circuit(&text)?;
            if common.d.is_some_and(|d| d != c.space.d()) || common.n.is_some_and(|n| n != c.space.n()) {
                return Err(CliError::Usage(format!(
                    "circuit is for d={} n={}, flags disagree",
                    c.space.d(),
                    c.space.n()
                )));
            }
            let cfg = RunConfig {
                d: c.space.d(),
                n: c.space.n(),
                seed: common.seed,
                shots,
                mode,
                vertices,
                out: common.out.clone(),
            };
            cmd_simulate(&cfg, &c, out, err)
        }
        Command::Verify { common, suite, shots } => {
            let mut cfg = RunConfig::from_common(&common)?;
            if let Some(s) = shots {
                cfg.shots = s;
            }
            cmd_verify(&cfg, suite, shots.is_some(), out, err)
        }
    }
}

fn write_out(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn load_vertices(cfg: &RunConfig, h: &LambdaHRep) -> Result<VertexSet, CliError> {
    match &cfg.vertices {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            read_vertices(&text, h).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
        None => Ok(enumerate_vertices(h)?),
    }
}

fn load_model(cfg: &RunConfig) -> Result<Model, CliError> {
    let h = lambda_hrep(cfg.d, cfg.n)?;
    let v = load_vertices(cfg, &h)?;
    Ok(Model::from_parts(Arc::new(h), Arc::new(v)))
}

/// Enumerates, certifies and summarizes the vertex set.
pub fn cmd_vertices(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let h = lambda_hrep(cfg.d, cfg.n)?;
    let v = enumerate_vertices(&h)?;
    let maps = clifford_generators(cfg.d, cfg.n)?
        .iter()
        .map(|u| clifford_w_map(h.space(), u))
        .collect::<Result<Vec<_>, _>>()?;
    let orbits = v.orbits(&maps)?;
    let mut sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let cnc: Vec<usize> = orbits
        .iter()
        .map(|o| o.iter().filter(|&&a| cnc_type(&v.operator(a)).is_some()).count())
        .collect();
    let cnc_orbits = cnc.iter().filter(|&&k| k > 0).count();
    let cnc_total: usize = cnc.iter().sum();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| CliError::Failure(e.to_string()));
    w(out, format!("d {} n {}", cfg.d, cfg.n))?;
    w(out, format!("facets {}", h.len()))?;
    w(out, format!("vertices {} certified, {} rejected", v.len(), v.rejected().len()))?;
    w(out, format!("clifford orbits {}", orbits.len()))?;
    w(out, format!("orbit sizes {sizes:?}"))?;
    w(out, format!("cnc-type vertices {cnc_total} of {} in {cnc_orbits} orbits", v.len()))?;
    for (ray, why) in v.rejected() {
        w(out, format!("rejected {ray:?}: {why}"))?;
    }
    if let Some(p) = &cfg.out {
        write_out(p, &write_vertices(&v))?;
    }
    Ok(if v.rejected().is_empty() { 0 } else { 1 })
}

fn load_state(space: &PhaseSpace, spec: &str) -> Result<State, CliError> {
    if PRESETS.contains(&spec) {
        return Ok(State::preset(space, spec)?);
    }
    let path = PathBuf::from(spec);
    let text = std::fs::read_to_string(&path).map_err(|_| {
        CliError::Usage(format!(
            "{spec:?} is neither a preset ({}) nor a readable file",
            PRESETS.join(", ")
        ))
    })?;
    let obj: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{spec}: line {} column {}: {e}", e.line(), e.column())))?;
    let wrapped = serde_json::json!({"d": space.d(), "n": space.n(), "state": obj});
    Ok(parse_circuit(&wrapped.to_string())
        .map_err(|e| CliError::Usage(format!("{spec}: {e}")))?
        .state)
}

fn auto_mode(cfg: &RunConfig, st: &State) -> Mode {
    cfg.mode.unwrap_or(if st.exact().is_some() && st.w_exact().is_some() {
        Mode::Exact
    } else {
        Mode::Numeric
    })
}

/// Writes `vertex,weight` rows for the decomposition of a state.
pub fn cmd_decompose(cfg: &RunConfig, state: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let space = PhaseSpace::new(cfg.d, cfg.n)?;
    let st = load_state(&space, state)?;
    let model = load_model(cfg)?;
    let mode = auto_mode(cfg, &st);
    let p = decompose_state(&model, &st, mode)?;
    let mut csv = String::from("vertex,weight\n");
    match &p.weights {
        Weights::Exact(w) => {
            for (a, x) in w {
                csv.push_str(&format!("{a},{x}\n"));
            }
        }
        Weights::Numeric(w) => {
            for (a, x) in w {
                csv.push_str(&format!("{a},{x}\n"));
            }
        }
    }
    let summary = format!(
        "# state {} mode {} support {} of {} residual {:e}",
        st.name(),
        if mode == Mode::Exact { "exact" } else { "numeric" },
        p.support_f64().len(),
        model.vertices().len(),
        p.residual
    );
    let res = match &cfg.out {
        Some(path) => {
            write_out(path, &csv)?;
            writeln!(out, "{summary}")
        }
        None => write!(out, "{summary}\n{csv}"),
    };
    res.map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(0)
}

fn outcome_key(o: &[u32]) -> String {
    if o.is_empty() {
        "-".into()
    } else {
        o.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// Samples `cfg.shots` runs and prints empirical against oracle frequencies.
pub fn cmd_simulate(
    cfg: &RunConfig,
    circuit: &crate::hvm::Circuit,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Failure(e.to_string());
    let m = circuit.measurement_count();
    if m == 0 {
        if let Some(p) = &cfg.out {
            write_out(p, "")?;
        }
        writeln!(out, "# circuit has no measurements; nothing to sample").map_err(io)?;
        return Ok(0);
    }
    let model = load_model(cfg)?;
    let mode = auto_mode(cfg, &circuit.state);
    let p = decompose_state(&model, &circuit.state, mode)?;
    let support = p.support_f64();
    let t0 = std::time::Instant::now();
    let recs = run_shots(&model, circuit, &support, cfg.seed, cfg.shots)?;
    let _ = writeln!(
        err,
        "sampled {} shots in {:.2?} on {} threads",
        cfg.shots,
        t0.elapsed(),
        crate::hvm::thread_count()
    );

    let mut csv = String::from("shot");
    for k in 0..m {
        csv.push_str(&format!(",m{k}"));
    }
    csv.push_str(",final_vertex\n");
    for r in &recs {
        csv.push_str(&r.shot.to_string());
        for o in &r.outcomes {
            csv.push_str(&format!(",{o}"));
        }
        csv.push_str(&format!(",{}\n", r.final_vertex));
    }

    let oracle = oracle_simulate(circuit)?;
    let expected: Vec<(Vec<u32>, f64)> = oracle.iter().map(|o| (o.outcomes.clone(), o.prob)).collect();
    let mut table: BTreeMap<Vec<u32>, (u64, f64)> = BTreeMap::new();
    for (k, pr) in &expected {
        table.entry(k.clone()).or_default().1 = *pr;
    }
    for r in &recs {
        table.entry(r.outcomes.clone()).or_default().0 += 1;
    }
    let (stat, df, pv) = chi_square(&recs, &expected);
    let n = cfg.shots.max(1) as f64;
    let mut report = String::from("# outcomes count empirical oracle\n");
    for (k, (count, pr)) in &table {
        report.push_str(&format!("# {} {count} {:.6} {:.6}\n", outcome_key(k), *count as f64 / n, pr));
    }
    report.push_str(&format!("# chi-square {stat:.4} df {df} p-value {pv:.6}\n"));
    match &cfg.out {
        Some(path) => {
            write_out(path, &csv)?;
            write!(out, "{report}").map_err(io)?;
        }
        None => write!(out, "{csv}{report}").map_err(io)?,
    }
    Ok(0)
}

/// Runs one suite and prints its JSON report.
pub fn cmd_verify(
    cfg: &RunConfig,
    suite: Suite,
    shots_given: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut sc = SuiteConfig::new(cfg.d, cfg.n, cfg.seed);
    if shots_given {
        sc.shots = cfg.shots;
    }
    let t0 = std::time::Instant::now();
    let rep = run_suite(suite, &sc)?;
    for c in &rep.checks {
        let _ = writeln!(err, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(err, "suite finished in {:.2?}", t0.elapsed());
    let json = serde_json::to_string_pretty(&rep)?;
    if let Some(p) = &cfg.out {
        write_out(p, &format!("{json}\n"))?;
    }
    writeln!(out, "{json}").map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(if rep.passed { 0 } else { 1 })
}
