//! Density matrices emitted by i.i.d. and Markov sources.
//!
//! A source emits `|0⟩ = (1, 0)` for `Good` and `|φ⟩ = (cos θ, sin θ)` for
//! `Err`, so `⟨0|φ⟩ = c = cos θ` is real and nonnegative.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{
    all_string_probabilities, evolve, stationary_distribution, ChainParams, DistributionVector,
    Symbol, SymbolString,
};
use crate::error::{check_cap, check_probability, Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, tensor_all, ComplexMatrix, PureStateVector, TensorProduct,
};

/// Largest number of qubits realized as a dense density matrix.
pub const MAX_STATE_QUBITS: usize = 12;
/// Largest number of qubits realized as a pure state vector.
pub const MAX_VECTOR_QUBITS: usize = 13;

pub const TRACE_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-10;

/// The two emitted pure states, parameterized by the angle between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitPair {
    theta: f64,
}

impl QubitPair {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta = {theta} is outside [0, pi/2]"
            )));
        }
        Ok(Self { theta })
    }

    pub fn from_overlap(c: f64) -> Result<Self> {
        Self::new(check_probability("overlap c", c)?.acos())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `c = ⟨0|φ⟩ = cos θ`.
    pub fn overlap(&self) -> f64 {
        self.theta.cos()
    }

    pub fn good(&self) -> PureStateVector {
        PureStateVector::from_real(&[1.0, 0.0]).expect("unit vector")
    }

    pub fn err(&self) -> PureStateVector {
        PureStateVector::from_real(&[self.theta.cos(), self.theta.sin()]).expect("unit vector")
    }

    fn state(&self, s: Symbol) -> PureStateVector {
        match s {
            Symbol::Good => self.good(),
            Symbol::Err => self.err(),
        }
    }

    fn projector(&self, s: Symbol) -> ComplexMatrix {
        ComplexMatrix::outer(&self.state(s))
    }
}

/// An `n`-emission Markov state of a given source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovStateSpec {
    pub chain: ChainParams,
    pub pair: QubitPair,
    pub n: usize,
}

impl MarkovStateSpec {
    pub fn new(chain: ChainParams, pair: QubitPair, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        Ok(Self { chain, pair, n })
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Constructions in this crate are correct by construction; only the
    /// cheap checks run, and only in debug builds.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.hermitian_deviation() <= 1e-10);
        debug_assert!((matrix.trace().re - 1.0).abs() <= TRACE_TOL);
        Self { matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let dev = self.matrix.hermitian_deviation();
        if dev > 1e-10 {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!("trace {tr} is not 1")));
        }
        let min = self.min_eigenvalue()?;
        if min < -EIGEN_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.tensor(&other.matrix)?,
        })
    }

    /// Serializable snapshot; entries are rounded to multiples of
    /// `10^-round_digits` when `round_digits` is given.
    pub fn to_dump(&self, round_digits: Option<i32>) -> Result<DensityMatrixDump> {
        let round = |x: f64| match round_digits {
            Some(d) => {
                let scale = 10f64.powi(d);
                let r = (x * scale).round() / scale;
                // Normalize -0.0 so equal matrices serialize identically.
                if r == 0.0 {
                    0.0
                } else {
                    r
                }
            }
            None => x,
        };
        Ok(DensityMatrixDump {
            header: DumpHeader {
                trace: self.trace(),
                min_eigenvalue: self.min_eigenvalue()?,
            },
            dim: self.dim(),
            entries: self
                .matrix
                .row_major()
                .iter()
                .map(|z| [round(z.re), round(z.im)])
                .collect(),
        })
    }
}

/// Unrounded diagnostics stored alongside a dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DumpHeader {
    pub trace: f64,
    pub min_eigenvalue: f64,
}

/// Text form of a density matrix: `entries` holds `[re, im]` pairs in
/// row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixDump {
    pub header: DumpHeader,
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl DensityMatrixDump {
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let entries: Vec<Complex64> = self
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        DensityMatrix::new(ComplexMatrix::from_row_major(self.dim, &entries)?)
    }
}

/// Product state `|s_1⟩ ⊗ … ⊗ |s_n⟩`.
pub fn pure_string_state(s: &SymbolString, pair: &QubitPair) -> Result<PureStateVector> {
    check_cap("string length", s.len(), MAX_VECTOR_QUBITS)?;
    let factors: Vec<PureStateVector> = s.symbols().iter().map(|&x| pair.state(x)).collect();
    tensor_all(&factors)
}

/// Real amplitudes of the product state for the string with canonical
/// `index`, without allocating per-site vectors.
pub(crate) fn string_amplitudes(index: u64, n: usize, pair: &QubitPair) -> Vec<f64> {
    let (c, s) = (pair.theta.cos(), pair.theta.sin());
    let mut amps = vec![1.0];
    for i in 0..n {
        let site = if (index >> (n - 1 - i)) & 1 == 0 {
            [1.0, 0.0]
        } else {
            [c, s]
        };
        amps = amps
            .iter()
            .flat_map(|&a| [a * site[0], a * site[1]])
            .collect();
    }
    amps
}

/// `Σ_s weights[s] |s⟩⟨s|` over all canonical strings of length `n`, by
/// direct accumulation of outer products.
pub fn string_mixture(weights: &[f64], pair: &QubitPair, n: usize) -> Result<DensityMatrix> {
    check_cap("qubits", n, MAX_STATE_QUBITS)?;
    if weights.len() != 1 << n {
        return Err(Error::InvalidParameter(format!(
            "{} weights for {} strings",
            weights.len(),
            1u64 << n
        )));
    }
    let dim = 1usize << n;
    let mut acc = DMatrix::<f64>::zeros(dim, dim);
    for (idx, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = nalgebra::DVector::from_vec(string_amplitudes(idx as u64, n, pair));
        acc.ger(w, &v, &v, 1.0);
    }
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_inner(
        acc.map(|x| Complex64::new(x, 0.0)),
    )))
}

fn single_qubit(weights: DistributionVector, pair: &QubitPair) -> DensityMatrix {
    let m = pair
        .projector(Symbol::Good)
        .scale(weights.p_good())
        .add(&pair.projector(Symbol::Err).scale(weights.p_err()))
        .expect("2x2");
    DensityMatrix::from_trusted(m)
}

/// `Σ_s P(s) |s⟩⟨s|` with `P` the chain's string law.
///
/// Built one emission at a time: tracking the partial sums split by the
/// last symbol, appending a symbol is a transition-weighted combination
/// followed by a Kronecker product with that symbol's projector.
pub fn build_markov_state(spec: &MarkovStateSpec) -> Result<DensityMatrix> {
    check_cap("qubits", spec.n, MAX_STATE_QUBITS)?;
    let chain = &spec.chain;
    let good = spec.pair.projector(Symbol::Good);
    let err = spec.pair.projector(Symbol::Err);
    let (e, d) = (chain.epsilon(), chain.delta());

    let mut ends_good = good.scale(chain.p0());
    let mut ends_err = err.scale(1.0 - chain.p0());
    for _ in 1..spec.n {
        let to_good = ends_good.scale(1.0 - e).add(&ends_err.scale(d))?;
        let to_err = ends_good.scale(e).add(&ends_err.scale(1.0 - d))?;
        ends_good = to_good.tensor(&good)?;
        ends_err = to_err.tensor(&err)?;
    }
    Ok(DensityMatrix::from_trusted(ends_good.add(&ends_err)?))
}

/// Markov state assembled string by string from [`all_string_probabilities`].
pub fn build_markov_state_by_strings(spec: &MarkovStateSpec) -> Result<DensityMatrix> {
    check_cap("qubits", spec.n, MAX_STATE_QUBITS)?;
    let weights = all_string_probabilities(&spec.chain, spec.n)?;
    string_mixture(&weights, &spec.pair, spec.n)
}

/// `(p|0⟩⟨0| + (1-p)|φ⟩⟨φ|)^{⊗n}` by repeated tensor product.
pub fn build_iid_state(p: f64, pair: &QubitPair, n: usize) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    check_cap("qubits", n, MAX_STATE_QUBITS)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let rho = single_qubit(DistributionVector::new(p, 1.0 - p)?, pair);
    tensor_power(&rho, n)
}

/// The same i.i.d. state as a mixture of string projectors with weights
/// `p^(#Good) (1-p)^(#Err)`.
pub fn build_iid_mixture(p: f64, pair: &QubitPair, n: usize) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    check_cap("qubits", n, MAX_STATE_QUBITS)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let weights: Vec<f64> = (0..1u64 << n)
        .map(|idx| {
            let errs = idx.count_ones() as i32;
            p.powi(n as i32 - errs) * (1.0 - p).powi(errs)
        })
        .collect();
    string_mixture(&weights, pair, n)
}

/// Single-emission state `ρ_k` with weights `μ P^(k-1)`; `ρ_1` is the
/// initial mixture.
pub fn mu_k(chain: &ChainParams, pair: &QubitPair, k: usize) -> Result<DensityMatrix> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let weights = evolve(DistributionVector::initial(chain), chain, k - 1);
    Ok(single_qubit(weights, pair))
}

/// `ρ_1 ⊗ ρ_2 ⊗ … ⊗ ρ_n`, which drops the correlations between emissions.
pub fn build_tensored_source_state(
    chain: &ChainParams,
    pair: &QubitPair,
    n: usize,
) -> Result<DensityMatrix> {
    check_cap("qubits", n, MAX_STATE_QUBITS)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let factors = (1..=n)
        .map(|k| mu_k(chain, pair, k).map(|rho| rho.matrix))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityMatrix::from_trusted(tensor_all(&factors)?))
}

pub fn stationary_state(chain: &ChainParams, pair: &QubitPair) -> Result<DensityMatrix> {
    Ok(single_qubit(stationary_distribution(chain)?, pair))
}

/// `ρ_st^{⊗n}`.
pub fn stationary_power(chain: &ChainParams, pair: &QubitPair, n: usize) -> Result<DensityMatrix> {
    check_cap("qubits", n, MAX_STATE_QUBITS)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    tensor_power(&stationary_state(chain, pair)?, n)
}

fn tensor_power(rho: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    let factors = vec![rho.matrix.clone(); n];
    Ok(DensityMatrix::from_trusted(tensor_all(&factors)?))
}
