//! Command-line front end. Exit status is 0 on success, 1 when a check
//! fails and 2 on usage, parse or runtime errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::entanglement::ckw_check;
use crate::error::{Error, Result};
use crate::functional::BellFunctional;
use crate::localpoly::local_decomposition;
use crate::lp::DEFAULT_LP_TOL;
use crate::model::{Behavior, DEFAULT_TOL};
use crate::monogamy::{
    self, cg_double_violation_search, pb_probe, quantum_point, support_trace, SearchOptions,
    SupportClass, TradeoffPoint, CHECK_TOL,
};
use crate::quantum::{born_behavior, named_state, DensityMatrix, NamedState, Observable};
use crate::sharing::{Extension, ExtensionSpec, ShareMode};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "MONOGAMY_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "monogamy",
    version,
    about = "Shareability and monogamy of correlations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Numerical tolerance; each command has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks positivity and normalization of a behavior.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Checks the no-signalling conditions of a behavior.
    Nstest {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Searches a local hidden-variable decomposition.
    Localtest {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Tests N-shareability of a two-party behavior.
    Share {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Ns)]
        mode: ModeArg,
    },
    /// CHSH values of a behavior or a measured state.
    Chsh(ValueArgs),
    /// Collins-Gisin values of a behavior or a measured state.
    Cg(ValueArgs),
    /// Tangle report of a pure three- or four-qubit state.
    Ckw {
        #[arg(long = "in", conflicts_with = "state")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        state: Option<StateArg>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long, default_value_t = 0)]
        pivot: usize,
    },
    /// Support-function trace of one correlation class as CSV.
    Sweep {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long, default_value_t = 360)]
        grid: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Searches states and settings with both Collins-Gisin pairs above 4.
    Cgsearch {
        /// Number of evenly spaced `mu` values in `[0, 1]`.
        #[arg(long, default_value_t = 21, conflicts_with = "mu")]
        grid: usize,
        /// A single `mu` instead of a grid.
        #[arg(long)]
        mu: Option<f64>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Four-party no-signalling probe of a two-party functional.
    Pbprobe {
        #[arg(long, value_enum, default_value_t = FunctionalArg::Cg)]
        functional: FunctionalArg,
    },
}

#[derive(Debug, clap::Args)]
pub struct ValueArgs {
    /// Behavior JSON (object) or state JSON (array of `[re, im]`).
    #[arg(long = "in", conflicts_with = "state")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub state: Option<StateArg>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Planar angles in radians, party by party.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub angles: Option<Vec<f64>>,
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            restarts: self.restarts,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Unrestricted,
    Ns,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Singlet,
    #[value(name = "phi_plus")]
    PhiPlus,
    Ghz,
    W,
    Cg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Local,
    Quantum,
    Ns,
    SeparableOrthogonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctionalArg {
    Chsh,
    Cg,
}

/// Bytes to emit and the exit status.
struct Output {
    body: Vec<u8>,
    status: i32,
}

impl Output {
    fn json<T: Serialize>(value: &T, status: i32) -> Self {
        let mut body = serde_json::to_vec_pretty(value).expect("output serializes");
        body.push(b'\n');
        Self { body, status }
    }
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `--out` or `stdout` and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
                return 0;
            }
            let _ = stderr.write_all(text.as_bytes());
            return 2;
        }
    };
    let result = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| execute(&cli)),
        Ok(None) => execute(&cli),
        Err(e) => Err(e),
    };
    match result {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.body),
                None => stdout.write_all(&out.body),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            out.status
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::Validation(report) = &e {
                if let Ok(text) = serde_json::to_string_pretty(report) {
                    let _ = writeln!(stderr, "{text}");
                }
            }
            2
        }
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("{THREADS_ENV}={value:?} is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_behavior(path: &Path, tol: f64) -> Result<Behavior> {
    parse_json::<Behavior>(path)?.validated(tol)
}

enum Input {
    Behavior(Behavior),
    State(DensityMatrix),
}

/// A JSON object is a behavior, an array a density matrix.
fn load_input(path: &Path, tol: f64) -> Result<Input> {
    let value: serde_json::Value = parse_json(path)?;
    if value.is_array() {
        let pairs: Vec<[f64; 2]> = serde_json::from_value(value)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Ok(Input::State(DensityMatrix::from_pairs(&pairs)?))
    } else {
        load_behavior(path, tol).map(Input::Behavior)
    }
}

fn state_from_args(state: Option<StateArg>, mu: Option<f64>) -> Result<DensityMatrix> {
    let kind = match state {
        Some(StateArg::Singlet) => NamedState::Singlet,
        Some(StateArg::PhiPlus) => NamedState::PhiPlus,
        Some(StateArg::Ghz) => NamedState::Ghz,
        Some(StateArg::W) => NamedState::W,
        Some(StateArg::Cg) => NamedState::Cg(
            mu.ok_or_else(|| Error::InvalidArgument("--state cg needs --mu".into()))?,
        ),
        None => {
            return Err(Error::InvalidArgument(
                "either --in or --state is required".into(),
            ))
        }
    };
    named_state(&kind)
}

fn value_input(args: &ValueArgs, tol: f64) -> Result<Input> {
    match &args.input {
        Some(path) => load_input(path, tol),
        None => state_from_args(args.state, args.mu).map(Input::State),
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let tol = |default: f64| cli.tol.unwrap_or(default);
    match &cli.command {
        Command::Validate { input } => {
            let report = parse_json::<Behavior>(input)?.validate(tol(DEFAULT_TOL));
            let status = if report.passes { 0 } else { 1 };
            Ok(Output::json(&report, status))
        }
        Command::Nstest { input } => {
            let t = tol(DEFAULT_TOL);
            let report = load_behavior(input, t)?.no_signalling_report(t);
            let status = if report.is_no_signalling { 0 } else { 1 };
            Ok(Output::json(&report, status))
        }
        Command::Localtest { input } => {
            let b = load_behavior(input, DEFAULT_TOL)?;
            let verdict = local_decomposition(&b, tol(DEFAULT_LP_TOL))?;
            let status = if verdict.is_local() { 0 } else { 1 };
            Ok(Output::json(&verdict, status))
        }
        Command::Share { input, n, mode } => {
            let b = load_behavior(input, DEFAULT_TOL)?;
            let mode = match mode {
                ModeArg::Unrestricted => ShareMode::Unrestricted,
                ModeArg::Ns => ShareMode::Ns,
            };
            let mut spec = ExtensionSpec::new(b, *n, mode);
            spec.tol = tol(DEFAULT_LP_TOL);
            Ok(match spec.run()? {
                Extension::Feasible(cert) => Output::json(
                    &json!({"verdict": "Feasible", "clones": n, "mode": mode, "score": 0.0, "certificate": cert}),
                    0,
                ),
                Extension::Infeasible { score } => Output::json(
                    &json!({"verdict": "Infeasible", "clones": n, "mode": mode, "score": score, "certificate": null}),
                    1,
                ),
            })
        }
        Command::Chsh(args) => bell_command(BellFunctional::chsh(), args, tol(CHECK_TOL)),
        Command::Cg(args) => bell_command(BellFunctional::collins_gisin(), args, tol(CHECK_TOL)),
        Command::Ckw {
            input,
            state,
            mu,
            pivot,
        } => {
            let rho = match input {
                Some(path) => match load_input(path, DEFAULT_TOL)? {
                    Input::State(rho) => rho,
                    Input::Behavior(_) => {
                        return Err(Error::InvalidArgument(
                            "ckw needs a state, not a behavior".into(),
                        ))
                    }
                },
                None => state_from_args(*state, *mu)?,
            };
            let report = ckw_check(&rho, *pivot)?;
            let status = if report.passes { 0 } else { 1 };
            Ok(Output::json(&report, status))
        }
        Command::Sweep {
            class,
            grid,
            search,
        } => {
            let class = match class {
                ClassArg::Local => SupportClass::Local,
                ClassArg::Quantum => SupportClass::Quantum,
                ClassArg::Ns => SupportClass::Ns,
                ClassArg::SeparableOrthogonal => SupportClass::SeparableOrthogonal,
            };
            let points = support_trace(class, *grid, &search.options())?;
            let mut body = Vec::new();
            monogamy::write_csv(&mut body, class, &points)?;
            Ok(Output { body, status: 0 })
        }
        Command::Cgsearch { grid, mu, search } => {
            let mus: Vec<f64> = match mu {
                Some(m) => vec![*m],
                None if *grid >= 2 => (0..*grid).map(|i| i as f64 / (*grid - 1) as f64).collect(),
                None => return Err(Error::InvalidArgument("--grid must be at least 2".into())),
            };
            let points = cg_double_violation_search(&mus, &search.options())?;
            let best = points
                .iter()
                .max_by(|a, b| a.value.total_cmp(&b.value))
                .expect("nonempty grid");
            let found = best.value > 4.0;
            Ok(Output::json(
                &json!({"local_bound": 4.0, "double_violation": found, "best": best, "points": points}),
                if found { 0 } else { 1 },
            ))
        }
        Command::Pbprobe { functional } => {
            let f = match functional {
                FunctionalArg::Chsh => BellFunctional::chsh(),
                FunctionalArg::Cg => BellFunctional::collins_gisin(),
            };
            Ok(Output::json(&pb_probe(&f, tol(CHECK_TOL))?, 0))
        }
    }
}

/// Default angles: Tsirelson settings for the first pair, the second pair's
/// settings for every further party.
fn default_angles(f: &BellFunctional, qubits: usize) -> Result<Vec<f64>> {
    if f.settings() != (2, 2) {
        return Err(Error::InvalidArgument(
            "--angles is required for this functional".into(),
        ));
    }
    let (a, b) = (
        [0.0, std::f64::consts::FRAC_PI_2],
        [std::f64::consts::FRAC_PI_4, -std::f64::consts::FRAC_PI_4],
    );
    let mut out = a.to_vec();
    for _ in 1..qubits {
        out.extend(b);
    }
    Ok(out)
}

fn bell_command(f: BellFunctional, args: &ValueArgs, tol: f64) -> Result<Output> {
    let b = match value_input(args, DEFAULT_TOL)? {
        Input::Behavior(b) => {
            if args.angles.is_some() {
                return Err(Error::InvalidArgument(
                    "--angles applies only to states".into(),
                ));
            }
            return behavior_values(&f, &b, tol);
        }
        Input::State(rho) => rho,
    };
    let qubits = b.qubits();
    if !(2..=3).contains(&qubits) {
        return Err(Error::InvalidArgument(format!(
            "expected 2 or 3 qubits, got {qubits}"
        )));
    }
    let (x, y) = f.settings();
    let angles = match &args.angles {
        Some(a) => a.clone(),
        None => default_angles(&f, qubits)?,
    };
    let expected = x + y * (qubits - 1);
    if angles.len() != expected {
        return Err(Error::InvalidArgument(format!(
            "expected {expected} angles, got {}",
            angles.len()
        )));
    }
    let mut obs = vec![angles[..x]
        .iter()
        .map(|&t| Observable::planar(t))
        .collect::<Vec<_>>()];
    for chunk in angles[x..].chunks(y) {
        obs.push(chunk.iter().map(|&t| Observable::planar(t)).collect());
    }
    if qubits == 2 {
        let value = f.evaluate(&born_behavior(&b, &obs)?)?;
        return Ok(Output::json(
            &json!({"functional": f.name, "value": value, "local_bound": f.local_bound}),
            0,
        ));
    }
    if f.settings() == (2, 2) {
        let pairs: Vec<[f64; 2]> = angles.chunks(2).map(|c| [c[0], c[1]]).collect();
        let point = quantum_point(&b, &pairs)?;
        return tradeoff_output(&f, point, monogamy::check_all, tol);
    }
    let behavior = born_behavior(&b, &obs)?;
    behavior_values(&f, &behavior, tol)
}

fn tradeoff_output(
    f: &BellFunctional,
    point: TradeoffPoint,
    checks: fn(&TradeoffPoint, f64) -> Result<Vec<monogamy::CheckReport>>,
    tol: f64,
) -> Result<Output> {
    let reports = checks(&point, tol)?;
    let failed = reports.iter().any(|r| r.id.is_theorem() && !r.passes);
    Ok(Output::json(
        &json!({"functional": f.name, "point": point, "checks": reports}),
        if failed { 1 } else { 0 },
    ))
}

fn behavior_values(f: &BellFunctional, b: &Behavior, tol: f64) -> Result<Output> {
    match b.scenario().parties() {
        2 => {
            let value = f.evaluate(b)?;
            Ok(Output::json(
                &json!({"functional": f.name, "value": value, "local_bound": f.local_bound}),
                0,
            ))
        }
        3 if f.settings() == (2, 2) => {
            let point = monogamy::triple_values(b)?;
            tradeoff_output(
                f,
                point,
                |p, t| Ok(vec![monogamy::check_ns_tradeoff(p, t)]),
                tol,
            )
        }
        3 => {
            let ab = f.evaluate_pair(b, 0, 1)?;
            let ac = f.evaluate_pair(b, 0, 2)?;
            Ok(Output::json(
                &json!({"functional": f.name, "pairs": {"ab": ab, "ac": ac}, "local_bound": f.local_bound,
                        "double_violation": ab > f.local_bound && ac > f.local_bound}),
                0,
            ))
        }
        n => Err(Error::InvalidArgument(format!(
            "expected 2 or 3 parties, got {n}"
        ))),
    }
}
