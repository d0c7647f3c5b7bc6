use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qstab_core::chain::{ChainParams, WindowConstraint};
use qstab_core::metrics::{thm1_exponent, BoundParams};
use qstab_core::states::{
    build_iid_state, build_markov_state, build_tensored_source_state, stationary_power,
    DensityMatrixDump, MarkovStateSpec,
};
use qstab_core::verification::{
    discrimination_report, simulate_discrimination, sweep_fidelity_decay, sweep_sparsity_surface,
    sweep_trace_distance, unit_grid, HypothesisPair, MAX_VERIFY_QUBITS,
};

use crate::angle::qubit_pair;
use crate::format::Csv;
use crate::svg::{heatmap, line_plot, Series};
use crate::{DumpArgs, FidelityArgs, SparsityArgs, TraceArgs, VerifyArgs, Which};

/// Dump entries are rounded to this many decimals so that equal states
/// built by different routes serialize identically.
pub const DUMP_DIGITS: i32 = 12;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io(..) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "{msg}"),
            CliError::Io(path, e) => write!(f, "cannot write {}: {e}", path.display()),
        }
    }
}

impl From<qstab_core::Error> for CliError {
    fn from(e: qstab_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Invalid(msg)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn output_path(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn write(prefix: &Path, suffix: &str, contents: &str) -> Result<()> {
    let path = output_path(prefix, suffix);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn sparsity_surface(a: &SparsityArgs) -> Result<()> {
    let window = WindowConstraint::new(a.k, a.l)?;
    let grid = unit_grid(a.grid)?;
    let points = sweep_sparsity_surface(a.n, &window, a.p0, &grid, &grid)?;
    // The series column keeps its established name.
    let mut csv = Csv::new(&["epsilon", "delta", "s_exact", "s_paper"]);
    for p in &points {
        csv.row(&[Some(p.epsilon), Some(p.delta), Some(p.s_exact), p.s_series]);
    }
    let m = grid.len();
    // Points run over delta fastest; the map puts delta across, epsilon up.
    let svg = heatmap(
        &format!("Window probability, N={}, k={}, l={}", a.n, a.k, a.l),
        "delta",
        "epsilon",
        &grid,
        &grid,
        |i, j| points[j * m + i].s_exact,
    );
    write(&a.output.out, "_sparsity.csv", &csv.into_string())?;
    write(&a.output.out, "_sparsity.svg", &svg)
}

pub fn fidelity_decay(a: &FidelityArgs) -> Result<()> {
    let chain = ChainParams::new(a.epsilon, a.delta, a.p0)?;
    let pair = qubit_pair(a.theta)?;
    let exponent = thm1_exponent(&chain, &BoundParams::new(a.tau)?)?;
    let points = sweep_fidelity_decay(&chain, &pair, a.n_max)?;
    let mut csv = Csv::new(&["n", "fidelity", "log2_fidelity", "thm1_bound_rhs"]);
    let (mut measured, mut bound) = (Vec::new(), Vec::new());
    for p in &points {
        let n = p.n as f64;
        let rhs = -n * exponent;
        csv.row(&[
            Some(n),
            Some(p.fidelity),
            Some(p.fidelity.log2()),
            Some(rhs),
        ]);
        measured.push((n, p.fidelity.log2()));
        bound.push((n, rhs));
    }
    let svg = line_plot(
        "Fidelity to the stationary product state",
        "n",
        "log2 F",
        &[
            Series {
                name: "log2 F",
                points: measured,
            },
            Series {
                name: "-n E",
                points: bound,
            },
        ],
    );
    write(&a.output.out, "_fidelity.csv", &csv.into_string())?;
    write(&a.output.out, "_fidelity.svg", &svg)
}

pub fn trace_distance(a: &TraceArgs) -> Result<()> {
    let pair = qubit_pair(a.theta)?;
    let grid = unit_grid(a.grid)?;
    let points = sweep_trace_distance(
        a.epsilon,
        a.p0,
        &pair,
        a.n,
        &grid,
        &BoundParams::new(a.tau)?,
    )?;
    let mut csv = Csv::new(&["delta", "trace_distance", "helstrom_success", "thm3_lower"]);
    for p in &points {
        csv.row(&[
            Some(p.delta),
            Some(p.trace_distance),
            Some(p.helstrom_success),
            Some(p.thm3_lower),
        ]);
    }
    let column = |f: fn(&qstab_core::verification::TracePoint) -> f64| {
        points.iter().map(|p| (p.delta, f(p))).collect::<Vec<_>>()
    };
    let svg = line_plot(
        &format!("Hypotheses 1-delta vs delta, n={}", a.n),
        "delta",
        "",
        &[
            Series {
                name: "trace distance",
                points: column(|p| p.trace_distance),
            },
            Series {
                name: "Helstrom success",
                points: column(|p| p.helstrom_success),
            },
            Series {
                name: "lower bound",
                points: column(|p| p.thm3_lower),
            },
        ],
    );
    write(&a.output.out, "_trace.csv", &csv.into_string())?;
    write(&a.output.out, "_trace.svg", &svg)
}

pub fn verify(a: &VerifyArgs) -> Result<()> {
    let pair = qubit_pair(a.theta)?;
    let h = HypothesisPair::new(a.epsilon0, a.delta0, a.delta1, pair, a.p0, a.n, (0.5, 0.5))?;
    let mut report = discrimination_report(&h, &BoundParams::new(a.tau)?)?;
    let empirical = simulate_discrimination(&h, a.trials, a.seed)?;
    report.empirical = Some(empirical);
    write(&a.output.out, "_verify.json", &to_json(&report))?;
    println!(
        "helstrom_success={:.6} empirical={:.6}±{:.6} thm3_lower={:.6}",
        report.helstrom_success, empirical.success, empirical.std_error, report.thm3.trace_lower
    );
    Ok(())
}

#[derive(Serialize)]
struct StateDumpFile {
    which: Which,
    epsilon: f64,
    delta: f64,
    p0: f64,
    theta: f64,
    n: usize,
    #[serde(flatten)]
    state: DensityMatrixDump,
}

pub fn state_dump(a: &DumpArgs) -> Result<()> {
    if a.n > MAX_VERIFY_QUBITS {
        return Err(CliError::Invalid(format!(
            "n = {} exceeds the dump limit {MAX_VERIFY_QUBITS}",
            a.n
        )));
    }
    let chain = ChainParams::new(a.epsilon, a.delta, a.p0)?;
    let pair = qubit_pair(a.theta)?;
    let rho = match a.which {
        Which::Markov => build_markov_state(&MarkovStateSpec::new(chain, pair, a.n)?)?,
        Which::Tensored => build_tensored_source_state(&chain, &pair, a.n)?,
        Which::StationaryPower => stationary_power(&chain, &pair, a.n)?,
        Which::Iid => build_iid_state(a.p0, &pair, a.n)?,
    };
    let file = StateDumpFile {
        which: a.which,
        epsilon: a.epsilon,
        delta: a.delta,
        p0: a.p0,
        theta: pair.theta(),
        n: a.n,
        state: rho.to_dump(Some(DUMP_DIGITS))?,
    };
    write(&a.output.out, "_state.json", &to_json(&file))
}
