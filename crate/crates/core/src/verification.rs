//! Stability verification: deciding between two Markov-source hypotheses
//! that share `ε` but differ in `δ`, and the parameter sweeps behind the
//! fidelity, trace-distance and sparsity plots.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{
    sample_index, sparsity_probability_exact, sparsity_series_estimate, ChainParams,
    WindowConstraint,
};
use crate::error::{check_cap, check_probability, Error, Result};
use crate::linalg::{hermitian_eigendecomposition, ComplexMatrix};
use crate::metrics::{
    check_priors, fidelity, helstrom_operator, helstrom_success, thm3_bound, trace_distance,
    BoundParams, Thm3Bound,
};
use crate::states::{
    build_markov_state, stationary_power, string_amplitudes, DensityMatrix, MarkovStateSpec,
    QubitPair,
};

/// Largest `n` for discrimination and sweeps.
pub const MAX_VERIFY_QUBITS: usize = 10;
/// Eigenvalues of the Helstrom operator below this magnitude are treated as
/// zero and left out of the acceptance projector.
pub const HELSTROM_ZERO_TOL: f64 = 1e-12;

/// Two boundary hypotheses `δ0` and `δ1` about a source with known `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisPair {
    pub epsilon0: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub pair: QubitPair,
    pub p0: f64,
    pub n: usize,
    pub priors: (f64, f64),
}

impl HypothesisPair {
    /// Requires `0 <= δ0 < δ1 <= 1`.
    pub fn new(
        epsilon0: f64,
        delta0: f64,
        delta1: f64,
        pair: QubitPair,
        p0: f64,
        n: usize,
        priors: (f64, f64),
    ) -> Result<Self> {
        let h = Self::unordered(epsilon0, delta0, delta1, pair, p0, n, priors)?;
        if delta0 >= delta1 {
            return Err(Error::InvalidParameter(format!(
                "delta0 = {delta0} must be below delta1 = {delta1}"
            )));
        }
        Ok(h)
    }

    /// Like [`HypothesisPair::new`] but accepts any order of `δ0`, `δ1`,
    /// including equality. Sweeps cross `δ0 = δ1`.
    pub fn unordered(
        epsilon0: f64,
        delta0: f64,
        delta1: f64,
        pair: QubitPair,
        p0: f64,
        n: usize,
        priors: (f64, f64),
    ) -> Result<Self> {
        ChainParams::new(epsilon0, delta0, p0)?;
        check_probability("delta1", delta1)?;
        check_priors(priors.0, priors.1)?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        Ok(Self {
            epsilon0,
            delta0,
            delta1,
            pair,
            p0,
            n,
            priors,
        })
    }

    pub fn spec0(&self) -> Result<MarkovStateSpec> {
        MarkovStateSpec::new(
            ChainParams::new(self.epsilon0, self.delta0, self.p0)?,
            self.pair,
            self.n,
        )
    }

    pub fn spec1(&self) -> Result<MarkovStateSpec> {
        MarkovStateSpec::new(
            ChainParams::new(self.epsilon0, self.delta1, self.p0)?,
            self.pair,
            self.n,
        )
    }

    fn states(&self) -> Result<(DensityMatrix, DensityMatrix)> {
        check_cap("qubits", self.n, MAX_VERIFY_QUBITS)?;
        Ok((
            build_markov_state(&self.spec0()?)?,
            build_markov_state(&self.spec1()?)?,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSuccess {
    pub success: f64,
    pub std_error: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub hypotheses: HypothesisPair,
    pub tau: f64,
    pub helstrom_success: f64,
    pub trace_distance: f64,
    pub fidelity: f64,
    pub thm3: Thm3Bound,
    pub empirical: Option<EmpiricalSuccess>,
}

/// Exact discrimination quantities for the two boundary Markov states.
///
/// The bound fields are always filled; when either chain is frozen
/// (`ε = δ = 0`) they hold the vacuous bound with a NaN exponent.
pub fn discrimination_report(
    h: &HypothesisPair,
    bounds: &BoundParams,
) -> Result<VerificationReport> {
    let (m0, m1) = h.states()?;
    let (q0, q1) = h.priors;
    Ok(VerificationReport {
        hypotheses: *h,
        tau: bounds.tau(),
        helstrom_success: helstrom_success(&m0, &m1, q0, q1)?,
        trace_distance: trace_distance(&m0, &m1)?,
        fidelity: fidelity(&m0, &m1)?,
        thm3: match thm3_bound(&h.spec0()?, &h.spec1()?, bounds) {
            // A frozen chain has no entropy rate; report the bound as vacuous.
            Err(Error::DegenerateChain) => Thm3Bound {
                exponent: f64::NAN,
                b: 1.0,
                trace_lower: 0.0,
            },
            other => other?,
        },
        empirical: None,
    })
}

/// Projector onto the strictly positive eigenspace of `q0 𝔐0 − q1 𝔐1`.
/// Outcome `P` means "guess hypothesis 0". Identical hypotheses give the
/// zero projector.
pub fn optimal_projector(h: &HypothesisPair) -> Result<ComplexMatrix> {
    let (m0, m1) = h.states()?;
    let gamma = helstrom_operator(&m0, &m1, h.priors.0, h.priors.1)?;
    let eig = hermitian_eigendecomposition(&gamma)?;
    Ok(eig.reconstruct_with(|x| if x > HELSTROM_ZERO_TOL { 1.0 } else { 0.0 }))
}

/// Monte Carlo run of the Helstrom measurement on sampled source outputs.
///
/// One ChaCha8 stream seeded with `seed` drives all trials in order; each
/// trial draws the hypothesis, then the string, then the measurement
/// outcome.
pub fn simulate_discrimination(
    h: &HypothesisPair,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalSuccess> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let projector = optimal_projector(h)?;
    let n = h.n;
    let p = projector.inner();
    // ⟨s|P|s⟩ for every string s; amplitudes are real.
    let accept: Vec<f64> = (0..1u64 << n)
        .map(|idx| {
            let v = string_amplitudes(idx, n, &h.pair);
            let mut acc = 0.0;
            for (i, vi) in v.iter().enumerate() {
                if *vi == 0.0 {
                    continue;
                }
                for (j, vj) in v.iter().enumerate() {
                    acc += vi * p[(i, j)].re * vj;
                }
            }
            acc.clamp(0.0, 1.0)
        })
        .collect();
    let chains = [
        ChainParams::new(h.epsilon0, h.delta0, h.p0)?,
        ChainParams::new(h.epsilon0, h.delta1, h.p0)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0u64;
    for _ in 0..trials {
        let truth = if rng.gen::<f64>() < h.priors.0 { 0 } else { 1 };
        let idx = sample_index(&chains[truth], n, &mut rng);
        let guess = if rng.gen::<f64>() < accept[idx as usize] {
            0
        } else {
            1
        };
        successes += u64::from(guess == truth);
    }
    let success = successes as f64 / trials as f64;
    Ok(EmpiricalSuccess {
        success,
        std_error: (success * (1.0 - success) / trials as f64).sqrt(),
        trials,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub n: usize,
    pub fidelity: f64,
}

/// `F(𝔐_n, ρ_st^{⊗n})` for `n = 1..=n_max`.
pub fn sweep_fidelity_decay(
    chain: &ChainParams,
    pair: &QubitPair,
    n_max: usize,
) -> Result<Vec<FidelityPoint>> {
    check_cap("n_max", n_max, MAX_VERIFY_QUBITS)?;
    (1..=n_max)
        .map(|n| {
            let m = build_markov_state(&MarkovStateSpec::new(*chain, *pair, n)?)?;
            let st = stationary_power(chain, pair, n)?;
            Ok(FidelityPoint {
                n,
                fidelity: fidelity(&m, &st)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub delta: f64,
    pub trace_distance: f64,
    pub helstrom_success: f64,
    pub thm3_lower: f64,
}

/// Trace distance between `𝔐[ε, 1−δ]` and `𝔐[ε, δ]` for each `δ` in
/// `delta_grid`, with the equal-prior Helstrom success and the asymptotic
/// lower bound.
pub fn sweep_trace_distance(
    epsilon: f64,
    p0: f64,
    pair: &QubitPair,
    n: usize,
    delta_grid: &[f64],
    bounds: &BoundParams,
) -> Result<Vec<TracePoint>> {
    check_cap("qubits", n, MAX_VERIFY_QUBITS)?;
    delta_grid
        .iter()
        .map(|&delta| {
            let h =
                HypothesisPair::unordered(epsilon, 1.0 - delta, delta, *pair, p0, n, (0.5, 0.5))?;
            let (m0, m1) = h.states()?;
            Ok(TracePoint {
                delta,
                trace_distance: trace_distance(&m0, &m1)?,
                helstrom_success: helstrom_success(&m0, &m1, 0.5, 0.5)?,
                thm3_lower: thm3_bound(&h.spec0()?, &h.spec1()?, bounds)?.trace_lower,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub epsilon: f64,
    pub delta: f64,
    pub s_exact: f64,
    /// Series estimate; `None` below `n = 4`.
    pub s_series: Option<f64>,
}

/// Exact window probability and series estimate over an `(ε, δ)` lattice,
/// `ε` in the outer loop.
pub fn sweep_sparsity_surface(
    n: usize,
    w: &WindowConstraint,
    p0: f64,
    epsilons: &[f64],
    deltas: &[f64],
) -> Result<Vec<SurfacePoint>> {
    check_cap("n", n, crate::chain::MAX_ENUMERATION_LEN)?;
    let mut out = Vec::with_capacity(epsilons.len() * deltas.len());
    for &epsilon in epsilons {
        for &delta in deltas {
            let chain = ChainParams::new(epsilon, delta, p0)?;
            out.push(SurfacePoint {
                epsilon,
                delta,
                s_exact: sparsity_probability_exact(&chain, n, w)?,
                s_series: if n >= 4 {
                    Some(sparsity_series_estimate(&chain, n)?)
                } else {
                    None
                },
            });
        }
    }
    Ok(out)
}

/// `points` evenly spaced values from 0 to 1 inclusive, with exact
/// endpoints.
pub fn unit_grid(points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(Error::InvalidParameter(
            "grid needs at least 1 point".into(),
        )),
        1 => Ok(vec![0.0]),
        _ => {
            let last = (points - 1) as f64;
            Ok((0..points).map(|i| i as f64 / last).collect())
        }
    }
}
