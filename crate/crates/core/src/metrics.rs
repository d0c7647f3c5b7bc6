//! Distances between states, the fidelity decay exponents for Markov
//! states, and typical-set enumeration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{
    binary_entropy, entropy_rate, stationary_distribution, ChainParams, SymbolString,
    MAX_ENUMERATION_LEN,
};
use crate::error::{check_cap, Error, Result};
use crate::linalg::{hermitian_eigenvalues, psd_sqrt, trace_norm, ComplexMatrix, PureStateVector};
use crate::numeric::pairwise_sum;
use crate::states::{DensityMatrix, MarkovStateSpec, MAX_STATE_QUBITS};

/// Tolerance on `Σ Γ_m = I`.
pub const POVM_TOL: f64 = 1e-8;
/// Largest `n` for typical-set enumeration.
pub const MAX_TYPICAL_LEN: usize = 20;

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() == sigma.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(rho.dim(), sigma.dim()))
    }
}

/// Uhlmann fidelity `(tr √(√σ ρ √σ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let root = psd_sqrt(sigma.matrix())?;
    let inner = root.matmul(rho.matrix())?.matmul(&root)?;
    let root_trace: f64 = hermitian_eigenvalues(&inner)?
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    Ok(0.5 * trace_norm(&rho.matrix().sub(sigma.matrix())?)?)
}

pub(crate) fn check_priors(q0: f64, q1: f64) -> Result<()> {
    if q0 < 0.0 || q1 < 0.0 || (q0 + q1 - 1.0).abs() > 1e-12 || !q0.is_finite() {
        return Err(Error::InvalidPriors(q0, q1));
    }
    Ok(())
}

/// `q0 ρ0 − q1 ρ1`, whose positive part decides optimal discrimination.
pub fn helstrom_operator(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    q0: f64,
    q1: f64,
) -> Result<ComplexMatrix> {
    same_dim(rho0, rho1)?;
    check_priors(q0, q1)?;
    rho0.matrix().scale(q0).sub(&rho1.matrix().scale(q1))
}

/// Optimal probability of identifying which of two states was prepared,
/// `½ (1 + ‖q0 ρ0 − q1 ρ1‖₁)`.
pub fn helstrom_success(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    q0: f64,
    q1: f64,
) -> Result<f64> {
    let gamma = helstrom_operator(rho0, rho1, q0, q1)?;
    Ok(0.5 * (1.0 + trace_norm(&gamma)?))
}

/// One outcome of a measurement.
#[derive(Debug, Clone, PartialEq)]
pub enum PovmElement {
    /// `|x⟩⟨x|` for computational basis index `x`.
    BasisProjector(usize),
    /// `|v⟩⟨v|`.
    Projector(PureStateVector),
    Operator(ComplexMatrix),
}

impl PovmElement {
    pub fn to_matrix(&self, dim: usize) -> ComplexMatrix {
        match self {
            PovmElement::BasisProjector(x) => {
                let mut diag = vec![0.0; dim];
                diag[*x] = 1.0;
                ComplexMatrix::from_real_diagonal(&diag).expect("dim within cap")
            }
            PovmElement::Projector(v) => ComplexMatrix::outer(v),
            PovmElement::Operator(m) => m.clone(),
        }
    }

    /// `tr(Γ ρ)`.
    pub fn probability(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            PovmElement::BasisProjector(x) => {
                if *x >= rho.dim() {
                    return Err(Error::DimensionMismatch(*x + 1, rho.dim()));
                }
                Ok(rho.matrix().get(*x, *x).re)
            }
            PovmElement::Projector(v) => Ok(v.expectation(rho.matrix())?.re),
            PovmElement::Operator(m) => {
                if m.dim() != rho.dim() {
                    return Err(Error::DimensionMismatch(m.dim(), rho.dim()));
                }
                let (a, b) = (m.inner(), rho.matrix().inner());
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..m.dim() {
                    for j in 0..m.dim() {
                        acc += a[(i, j)] * b[(j, i)];
                    }
                }
                Ok(acc.re)
            }
        }
    }
}

/// A complete measurement on a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<PovmElement>,
}

impl Povm {
    /// Checks that the elements sum to the identity within [`POVM_TOL`].
    pub fn new(dim: usize, elements: Vec<PovmElement>) -> Result<Self> {
        let povm = Self { dim, elements };
        let dev = povm.completeness_deviation();
        if dev > POVM_TOL {
            return Err(Error::IncompletePovm(dev));
        }
        Ok(povm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    /// Largest entry of `|Σ Γ_m − I|`.
    pub fn completeness_deviation(&self) -> f64 {
        if self
            .elements
            .iter()
            .all(|e| matches!(e, PovmElement::BasisProjector(_)))
        {
            let mut hits = vec![0usize; self.dim];
            for e in &self.elements {
                if let PovmElement::BasisProjector(x) = e {
                    match hits.get_mut(*x) {
                        Some(h) => *h += 1,
                        None => return f64::INFINITY,
                    }
                }
            }
            return hits
                .iter()
                .map(|&h| (h as f64 - 1.0).abs())
                .fold(0.0, f64::max);
        }
        let mut sum = ComplexMatrix::zeros(self.dim);
        for e in &self.elements {
            let m = e.to_matrix(self.dim);
            if m.dim() != self.dim {
                return f64::INFINITY;
            }
            sum = sum.add(&m).expect("same dim");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }
}

/// The projectors `|x⟩⟨x|` onto the computational product basis of `n`
/// qubits, in canonical string order.
pub fn computational_basis_povm(n: usize) -> Result<Povm> {
    check_cap("qubits", n, MAX_STATE_QUBITS)?;
    let dim = 1usize << n;
    Ok(Povm {
        dim,
        elements: (0..dim).map(PovmElement::BasisProjector).collect(),
    })
}

/// `(Σ_m √(tr(Γ_m ρ) tr(Γ_m σ)))²` for the measurement `povm`; never below
/// the fidelity.
pub fn measured_bhattacharyya(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    povm: &Povm,
) -> Result<f64> {
    same_dim(rho, sigma)?;
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(povm.dim(), rho.dim()));
    }
    let terms = povm
        .elements()
        .iter()
        .map(|e| Ok((e.probability(rho)?.max(0.0) * e.probability(sigma)?.max(0.0)).sqrt()))
        .collect::<Result<Vec<f64>>>()?;
    let overlap = pairwise_sum(&terms);
    Ok((overlap * overlap).min(1.0))
}

/// Both sides of `1 − √F ≤ T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityTraceCheck {
    pub lower: f64,
    pub distance: f64,
}

impl FidelityTraceCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower <= self.distance + tol
    }
}

pub fn fuchs_van_de_graaf_check(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<FidelityTraceCheck> {
    Ok(FidelityTraceCheck {
        lower: 1.0 - fidelity(rho, sigma)?.sqrt(),
        distance: trace_distance(rho, sigma)?,
    })
}

/// Typicality slack `τ` in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    tau: f64,
}

impl BoundParams {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau = {tau} must be > 0")));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl Default for BoundParams {
    fn default() -> Self {
        Self { tau: 0.01 }
    }
}

/// `h_a + h_b − 2τ − 2|h_a − h_b + 2τ|`, the per-symbol exponent of both
/// fidelity bounds.
pub fn decay_exponent(h_a: f64, h_b: f64, tau: f64) -> f64 {
    h_a + h_b - 2.0 * tau - 2.0 * (h_a - h_b + 2.0 * tau).abs()
}

/// Exponent `E` such that, asymptotically,
/// `log₂ F(𝔐_n, ρ_st^{⊗n}) ≤ −n E`.
///
/// Uses the binary entropy of the stationary `Good` weight and the chain's
/// entropy rate. A nonpositive `E` makes the bound vacuous; it is returned
/// as is.
pub fn thm1_exponent(chain: &ChainParams, bounds: &BoundParams) -> Result<f64> {
    let h_b = binary_entropy(stationary_distribution(chain)?.p_good());
    let h_m = entropy_rate(chain)?;
    Ok(decay_exponent(h_b, h_m, bounds.tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thm3Bound {
    /// Per-symbol exponent built from the two entropy rates.
    pub exponent: f64,
    /// `B = 2^(−n · exponent)`.
    pub b: f64,
    /// `max(0, 1 − √B)`, the asymptotic lower bound on the trace distance.
    pub trace_lower: f64,
}

/// Fidelity envelope `B` and trace-distance lower bound for two Markov
/// states sharing `n` and `ε`.
pub fn thm3_bound(
    spec0: &MarkovStateSpec,
    spec1: &MarkovStateSpec,
    bounds: &BoundParams,
) -> Result<Thm3Bound> {
    if spec0.n != spec1.n {
        return Err(Error::InvalidParameter(format!(
            "hypotheses have different lengths {} and {}",
            spec0.n, spec1.n
        )));
    }
    if spec0.chain.epsilon() != spec1.chain.epsilon() {
        return Err(Error::InvalidParameter(
            "hypotheses must share epsilon".into(),
        ));
    }
    let h0 = entropy_rate(&spec0.chain)?;
    let h1 = entropy_rate(&spec1.chain)?;
    let exponent = decay_exponent(h0, h1, bounds.tau);
    let b = (-(spec0.n as f64) * exponent).exp2();
    let trace_lower = if b >= 1.0 { 0.0 } else { 1.0 - b.sqrt() };
    Ok(Thm3Bound {
        exponent,
        b,
        trace_lower,
    })
}

/// Strings whose probability lies in `[2^(−n(H+τ)), 2^(−n(H−τ))]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSetReport {
    /// Canonical order.
    pub members: Vec<SymbolString>,
    pub lower: f64,
    pub upper: f64,
    pub captured_probability: f64,
}

impl TypicalSetReport {
    pub fn cardinality(&self) -> usize {
        self.members.len()
    }

    /// Number of strings typical in both reports.
    pub fn intersection_cardinality(&self, other: &Self) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

/// Exhaustive typical-set enumeration for an arbitrary string law `prob`.
pub fn typical_set(
    prob: impl Fn(&SymbolString) -> f64,
    entropy: f64,
    bounds: &BoundParams,
    n: usize,
) -> Result<TypicalSetReport> {
    check_cap("string length", n, MAX_TYPICAL_LEN.min(MAX_ENUMERATION_LEN))?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let nf = n as f64;
    let lower = (-nf * (entropy + bounds.tau)).exp2();
    let upper = (-nf * (entropy - bounds.tau)).exp2();
    let mut members = Vec::new();
    let mut captured = Vec::new();
    for idx in 0..1u64 << n {
        let s = SymbolString::from_index(idx, n)?;
        let p = prob(&s);
        if p >= lower && p <= upper {
            captured.push(p);
            members.push(s);
        }
    }
    Ok(TypicalSetReport {
        members,
        lower,
        upper,
        captured_probability: pairwise_sum(&captured),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{string_probability, Symbol};
    use crate::linalg::testing::random_psd;
    use crate::states::{build_markov_state, stationary_power, QubitPair};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn qubit(weights: [f64; 2], theta: f64) -> DensityMatrix {
        let pair = QubitPair::new(theta).unwrap();
        let m = ComplexMatrix::outer(&pair.good())
            .scale(weights[0])
            .add(&ComplexMatrix::outer(&pair.err()).scale(weights[1]))
            .unwrap();
        DensityMatrix::new(m).unwrap()
    }

    fn diag(d: &[f64]) -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_real_diagonal(d).unwrap()).unwrap()
    }

    fn random_state(dim: usize, seed: u64) -> DensityMatrix {
        let m = random_psd(dim, seed);
        let tr = m.trace().re;
        DensityMatrix::new(m.scale(1.0 / tr)).unwrap()
    }

    #[test]
    fn fidelity_examples() {
        for seed in 0..5 {
            let rho = random_state(4, seed);
            assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-8);
        }
        let zero = qubit([1.0, 0.0], FRAC_PI_3);
        let phi = qubit([0.0, 1.0], FRAC_PI_3);
        assert!((fidelity(&zero, &phi).unwrap() - 0.25).abs() < 1e-8);

        // Classical Bhattacharyya form for commuting states.
        let oracle = (0.35f64.sqrt() + 0.15f64.sqrt()).powi(2);
        let f = fidelity(&diag(&[0.7, 0.3]), &diag(&[0.5, 0.5])).unwrap();
        assert!((f - oracle).abs() < 1e-12);
        assert!((oracle - 0.958258).abs() < 1e-6);

        assert!(matches!(
            fidelity(&diag(&[1.0, 0.0]), &diag(&[0.25; 4])),
            Err(Error::DimensionMismatch(2, 4))
        ));
    }

    #[test]
    fn fidelity_is_symmetric() {
        for seed in 0..6 {
            let a = random_state(8, seed);
            let b = random_state(8, seed + 100);
            let ab = fidelity(&a, &b).unwrap();
            let ba = fidelity(&b, &a).unwrap();
            assert!((ab - ba).abs() < 1e-8);
            assert!((0.0..=1.0).contains(&ab));
        }
    }

    #[test]
    fn trace_distance_examples() {
        let rho = random_state(4, 9);
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-14);
        let zero = qubit([1.0, 0.0], FRAC_PI_2);
        let one = qubit([0.0, 1.0], FRAC_PI_2);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        let t = trace_distance(&diag(&[0.7, 0.3]), &diag(&[0.5, 0.5])).unwrap();
        assert!((t - 0.2).abs() < 1e-14);
    }

    #[test]
    fn helstrom_examples() {
        let rho = random_state(4, 2);
        assert!((helstrom_success(&rho, &rho, 0.5, 0.5).unwrap() - 0.5).abs() < 1e-14);
        let zero = qubit([1.0, 0.0], FRAC_PI_2);
        let one = qubit([0.0, 1.0], FRAC_PI_2);
        assert!((helstrom_success(&zero, &one, 0.5, 0.5).unwrap() - 1.0).abs() < 1e-12);

        let zero = qubit([1.0, 0.0], FRAC_PI_3);
        let phi = qubit([0.0, 1.0], FRAC_PI_3);
        let c: f64 = 0.5;
        let oracle = 0.5 * (1.0 + (1.0 - c * c).sqrt());
        assert!((oracle - 0.933013).abs() < 1e-6);
        assert!((helstrom_success(&zero, &phi, 0.5, 0.5).unwrap() - oracle).abs() < 1e-12);

        assert!(matches!(
            helstrom_success(&zero, &phi, 0.6, 0.6),
            Err(Error::InvalidPriors(..))
        ));
        assert!(helstrom_success(&zero, &phi, -0.1, 1.1).is_err());
    }

    #[test]
    fn helstrom_unequal_priors_bounds() {
        let a = random_state(4, 20);
        let b = random_state(4, 21);
        let p = helstrom_success(&a, &b, 0.8, 0.2).unwrap();
        assert!((0.8 - 1e-12..=1.0).contains(&p));
    }

    #[test]
    fn computational_basis_examples() {
        let povm = computational_basis_povm(1).unwrap();
        let mats: Vec<ComplexMatrix> = povm.elements().iter().map(|e| e.to_matrix(2)).collect();
        assert_eq!(
            mats[0],
            ComplexMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap()
        );
        assert_eq!(
            mats[1],
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap()
        );

        let povm = computational_basis_povm(3).unwrap();
        assert_eq!(povm.completeness_deviation(), 0.0);
        let mats: Vec<ComplexMatrix> = povm.elements().iter().map(|e| e.to_matrix(8)).collect();
        let total = mats
            .iter()
            .skip(1)
            .fold(mats[0].clone(), |acc, m| acc.add(m).unwrap());
        assert_eq!(total, ComplexMatrix::identity(8));
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(mats[i].matmul(&mats[j]).unwrap(), ComplexMatrix::zeros(8));
                }
            }
        }
        assert!(computational_basis_povm(13).is_err());
    }

    #[test]
    fn incomplete_povm_rejected() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(matches!(
            Povm::new(2, vec![PovmElement::Operator(half.clone())]),
            Err(Error::IncompletePovm(_))
        ));
        assert!(Povm::new(
            2,
            vec![
                PovmElement::Operator(half.clone()),
                PovmElement::Operator(half)
            ]
        )
        .is_ok());
        assert!(Povm::new(2, vec![PovmElement::BasisProjector(0)]).is_err());
    }

    #[test]
    fn bhattacharyya_examples() {
        let rho = random_state(4, 31);
        let povm = computational_basis_povm(2).unwrap();
        assert!((measured_bhattacharyya(&rho, &rho, &povm).unwrap() - 1.0).abs() < 1e-12);

        let a = diag(&[0.1, 0.2, 0.3, 0.4]);
        let b = diag(&[0.4, 0.3, 0.2, 0.1]);
        let f = fidelity(&a, &b).unwrap();
        assert!((measured_bhattacharyya(&a, &b, &povm).unwrap() - f).abs() < 1e-10);
    }

    #[test]
    fn bhattacharyya_bounds_fidelity_for_general_povms() {
        let pair = QubitPair::new(0.9).unwrap();
        let trine: Vec<PovmElement> = (0..3)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                let v = PureStateVector::from_real(&[(a / 2.0).cos(), (a / 2.0).sin()]).unwrap();
                PovmElement::Operator(ComplexMatrix::outer(&v).scale(2.0 / 3.0))
            })
            .collect();
        let trine = Povm::new(2, trine).unwrap();
        let rotated = Povm::new(
            2,
            vec![
                PovmElement::Projector(pair.err()),
                PovmElement::Projector(
                    PureStateVector::from_real(&[-pair.theta().sin(), pair.theta().cos()]).unwrap(),
                ),
            ],
        )
        .unwrap();
        for seed in 0..10 {
            let a = random_state(2, seed);
            let b = random_state(2, seed + 50);
            let f = fidelity(&a, &b).unwrap();
            for povm in [&trine, &rotated, &computational_basis_povm(1).unwrap()] {
                assert!(f <= measured_bhattacharyya(&a, &b, povm).unwrap() + 1e-8);
            }
        }
    }

    #[test]
    fn fvdg_examples() {
        let rho = random_state(4, 1);
        let check = fuchs_van_de_graaf_check(&rho, &rho).unwrap();
        assert!(check.lower.abs() < 1e-7 && check.distance.abs() < 1e-12);
        let zero = qubit([1.0, 0.0], FRAC_PI_2);
        let one = qubit([0.0, 1.0], FRAC_PI_2);
        let check = fuchs_van_de_graaf_check(&zero, &one).unwrap();
        assert!((check.lower - 1.0).abs() < 1e-8 && (check.distance - 1.0).abs() < 1e-12);
        assert!(check.holds(1e-8));
    }

    #[test]
    fn bound_params_validation() {
        assert!(BoundParams::new(0.0).is_err());
        assert!(BoundParams::new(-1.0).is_err());
        assert_eq!(BoundParams::default().tau(), 0.01);
    }

    #[test]
    fn thm1_exponent_examples() {
        let chain = ChainParams::new(0.3, 0.5, 0.5).unwrap();
        // Independent evaluation of the printed formula.
        let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let h_b = h(0.625);
        let h_m = 0.625 * h(0.3) + 0.375 * h(0.5);
        let oracle = h_b + h_m - 0.02 - 2.0 * (h_b - h_m + 0.02).abs();
        let e = thm1_exponent(&chain, &BoundParams::new(0.01).unwrap()).unwrap();
        assert!((e - oracle).abs() < 1e-12);
        assert!((e - 1.762987).abs() < 1e-5);

        let half = ChainParams::new(0.5, 0.5, 0.5).unwrap();
        let e = thm1_exponent(&half, &BoundParams::new(1e-9).unwrap()).unwrap();
        assert!((e - 2.0).abs() < 1e-8);

        let vacuous = thm1_exponent(&chain, &BoundParams::new(2.0).unwrap()).unwrap();
        assert!(vacuous <= 0.0);

        assert!(thm1_exponent(
            &ChainParams::new(0.0, 0.0, 0.5).unwrap(),
            &BoundParams::default()
        )
        .is_err());
    }

    fn spec(e: f64, d: f64, n: usize) -> MarkovStateSpec {
        MarkovStateSpec::new(
            ChainParams::new(e, d, 0.5).unwrap(),
            QubitPair::new(FRAC_PI_3).unwrap(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn thm3_equal_hypotheses() {
        let tau = 0.01;
        let b = thm3_bound(
            &spec(0.3, 0.4, 5),
            &spec(0.3, 0.4, 5),
            &BoundParams::new(tau).unwrap(),
        )
        .unwrap();
        let h = entropy_rate(&ChainParams::new(0.3, 0.4, 0.5).unwrap()).unwrap();
        assert!((b.exponent - (2.0 * h - 6.0 * tau)).abs() < 1e-14);
        assert!((b.b - (-5.0 * (2.0 * h - 6.0 * tau)).exp2()).abs() < 1e-14);
    }

    #[test]
    fn thm3_fixture() {
        let b = thm3_bound(
            &spec(0.3, 0.2, 7),
            &spec(0.3, 0.8, 7),
            &BoundParams::new(0.01).unwrap(),
        )
        .unwrap();
        let again = thm3_bound(
            &spec(0.3, 0.2, 7),
            &spec(0.3, 0.8, 7),
            &BoundParams::new(0.01).unwrap(),
        )
        .unwrap();
        assert_eq!(b, again);
        let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let h0 = (0.2 / 0.5) * h(0.3) + (0.3 / 0.5) * h(0.2);
        let h1 = (0.8 / 1.1) * h(0.3) + (0.3 / 1.1) * h(0.8);
        let e = h0 + h1 - 0.02 - 2.0 * (h0 - h1 + 0.02).abs();
        assert!((b.exponent - e).abs() < 1e-12);
        assert!((b.b - (-7.0 * e).exp2()).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&b.trace_lower));
    }

    #[test]
    fn thm3_vacuous_and_errors() {
        let b = thm3_bound(
            &spec(0.3, 0.2, 4),
            &spec(0.3, 0.8, 4),
            &BoundParams::new(5.0).unwrap(),
        )
        .unwrap();
        assert!(b.b >= 1.0);
        assert_eq!(b.trace_lower, 0.0);
        assert!(thm3_bound(
            &spec(0.3, 0.2, 4),
            &spec(0.3, 0.8, 5),
            &BoundParams::default()
        )
        .is_err());
        assert!(thm3_bound(
            &spec(0.3, 0.2, 4),
            &spec(0.4, 0.8, 4),
            &BoundParams::default()
        )
        .is_err());
    }

    #[test]
    fn typical_set_fair_coin() {
        for n in [1, 5, 10] {
            let report = typical_set(
                |_| (-(n as f64)).exp2(),
                1.0,
                &BoundParams::new(0.01).unwrap(),
                n,
            )
            .unwrap();
            assert_eq!(report.cardinality(), 1 << n);
            assert!((report.captured_probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn typical_set_members_respect_band() {
        let chain = ChainParams::new(0.3, 0.5, 0.5).unwrap();
        let h = entropy_rate(&chain).unwrap();
        let report = typical_set(
            |s| string_probability(&chain, s),
            h,
            &BoundParams::new(0.1).unwrap(),
            12,
        )
        .unwrap();
        for s in &report.members {
            let p = string_probability(&chain, s);
            assert!(p >= report.lower && p <= report.upper);
        }
        assert!(report.members.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn typical_set_monotone_in_tau() {
        let chain = ChainParams::new(0.3, 0.5, 0.5).unwrap();
        let h = entropy_rate(&chain).unwrap();
        let mut last = 0.0;
        for tau in [0.02, 0.05, 0.1, 0.2, 0.4] {
            let r = typical_set(
                |s| string_probability(&chain, s),
                h,
                &BoundParams::new(tau).unwrap(),
                16,
            )
            .unwrap();
            assert!(r.captured_probability >= last);
            last = r.captured_probability;
        }
    }

    #[test]
    fn typical_set_degenerate_chain() {
        let chain = ChainParams::new(0.0, 0.5, 1.0).unwrap();
        let prob = |s: &SymbolString| string_probability(&chain, s);
        let typ = typical_set(prob, 0.0, &BoundParams::new(0.01).unwrap(), 6).unwrap();
        assert_eq!(typ.cardinality(), 1);
        assert!(typ.members[0].symbols().iter().all(|&x| x == Symbol::Good));
        let atypical = typical_set(prob, 0.5, &BoundParams::new(0.01).unwrap(), 6).unwrap();
        assert_eq!(atypical.cardinality(), 0);
        assert!(typical_set(prob, 0.0, &BoundParams::default(), 21).is_err());
    }

    #[test]
    fn measured_overlap_bounds_fidelity_on_markov_states() {
        let chain = ChainParams::new(0.3, 0.5, 0.5).unwrap();
        let pair = QubitPair::new(FRAC_PI_3).unwrap();
        for n in 1..=5 {
            let m = build_markov_state(&MarkovStateSpec::new(chain, pair, n).unwrap()).unwrap();
            let st = stationary_power(&chain, &pair, n).unwrap();
            let povm = computational_basis_povm(n).unwrap();
            assert!(
                fidelity(&m, &st).unwrap()
                    <= measured_bhattacharyya(&m, &st, &povm).unwrap() + 1e-8
            );
        }
    }
}
