//! Classical two-state Markov chain underlying a Markov source.
//!
//! The source emits `Good` (the target state) or `Err` (the deviating
//! state). From `Good` it moves to `Err` with probability `epsilon`, from
//! `Err` back to `Good` with probability `delta`; the first emission is
//! `Good` with probability `p0`.
//!
//! Strings of length `n` are indexed by the integer whose binary expansion,
//! most significant bit first, spells the string with `Good = 0` and
//! `Err = 1`. That index is also the computational-basis index of the
//! corresponding product state, and integer order is the canonical
//! (lexicographic, `Good < Err`) enumeration order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, check_probability, Error, Result};
use crate::numeric::pairwise_sum;

/// Largest string length that may be enumerated exhaustively.
pub const MAX_ENUMERATION_LEN: usize = 24;
/// Largest window length accepted by the sparsity dynamic program.
pub const MAX_WINDOW_LEN: usize = 20;

const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Good,
    Err,
}

impl Symbol {
    fn from_bit(bit: u64) -> Self {
        if bit == 0 {
            Symbol::Good
        } else {
            Symbol::Err
        }
    }

    fn bit(self) -> u64 {
        match self {
            Symbol::Good => 0,
            Symbol::Err => 1,
        }
    }
}

/// Parameters of the classical source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    epsilon: f64,
    delta: f64,
    p0: f64,
}

impl ChainParams {
    pub fn new(epsilon: f64, delta: f64, p0: f64) -> Result<Self> {
        Ok(Self {
            epsilon: check_probability("epsilon", epsilon)?,
            delta: check_probability("delta", delta)?,
            p0: check_probability("p0", p0)?,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn is_degenerate(&self) -> bool {
        self.epsilon + self.delta == 0.0
    }

    fn initial(&self, s: Symbol) -> f64 {
        match s {
            Symbol::Good => self.p0,
            Symbol::Err => 1.0 - self.p0,
        }
    }

    fn step(&self, from: Symbol, to: Symbol) -> f64 {
        match (from, to) {
            (Symbol::Good, Symbol::Good) => 1.0 - self.epsilon,
            (Symbol::Good, Symbol::Err) => self.epsilon,
            (Symbol::Err, Symbol::Good) => self.delta,
            (Symbol::Err, Symbol::Err) => 1.0 - self.delta,
        }
    }
}

/// A nonempty word over `{Good, Err}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolString(Vec<Symbol>);

impl SymbolString {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidParameter(
                "symbol string must have length >= 1".into(),
            ));
        }
        Ok(Self(symbols))
    }

    /// String of length `n` spelled by the low `n` bits of `index`, most
    /// significant first.
    pub fn from_index(index: u64, n: usize) -> Result<Self> {
        check_cap("string length for indexing", n, 63)?;
        if n == 0 || index >> n != 0 {
            return Err(Error::InvalidParameter(format!(
                "index {index} does not name a string of length {n}"
            )));
        }
        Ok(Self(
            (0..n)
                .map(|i| Symbol::from_bit((index >> (n - 1 - i)) & 1))
                .collect(),
        ))
    }

    /// Inverse of [`SymbolString::from_index`]; `None` above 63 symbols.
    pub fn index(&self) -> Option<u64> {
        if self.0.len() > 63 {
            return None;
        }
        Some(self.0.iter().fold(0, |acc, s| (acc << 1) | s.bit()))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl std::fmt::Display for SymbolString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Symbol::Good => "0",
                Symbol::Err => "φ",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionVector {
    p_good: f64,
    p_err: f64,
}

impl DistributionVector {
    pub fn new(p_good: f64, p_err: f64) -> Result<Self> {
        if p_good < 0.0 || p_err < 0.0 || (p_good + p_err - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "({p_good}, {p_err}) is not a distribution"
            )));
        }
        Ok(Self { p_good, p_err })
    }

    /// Distribution of the first emission, `(p0, 1 - p0)`.
    pub fn initial(params: &ChainParams) -> Self {
        Self {
            p_good: params.p0,
            p_err: 1.0 - params.p0,
        }
    }

    pub fn p_good(&self) -> f64 {
        self.p_good
    }

    pub fn p_err(&self) -> f64 {
        self.p_err
    }
}

/// Row-stochastic 2×2 matrix, rows indexed by the current symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    rows: [[f64; 2]; 2],
}

impl TransitionMatrix {
    pub fn new(rows: [[f64; 2]; 2]) -> Result<Self> {
        for row in &rows {
            if row.iter().any(|p| !(0.0..=1.0).contains(p))
                || (row[0] + row[1] - 1.0).abs() > ROW_SUM_TOL
            {
                return Err(Error::InvalidParameter(format!(
                    "row {row:?} is not a probability distribution"
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        self.rows
    }

    /// Row vector times matrix.
    pub fn apply(&self, mu: DistributionVector) -> DistributionVector {
        let [[a, b], [c, d]] = self.rows;
        DistributionVector {
            p_good: mu.p_good * a + mu.p_err * c,
            p_err: mu.p_good * b + mu.p_err * d,
        }
    }
}

/// Sliding-window sparsity requirement: at most `l` errors in any `k`
/// consecutive emissions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowConstraint {
    k: usize,
    l: usize,
}

impl WindowConstraint {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k == 0 || l > k {
            return Err(Error::InvalidParameter(format!(
                "window (k = {k}, l = {l}) needs 1 <= k and l <= k"
            )));
        }
        Ok(Self { k, l })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }
}

pub fn transition_matrix(params: &ChainParams) -> TransitionMatrix {
    let (e, d) = (params.epsilon, params.delta);
    TransitionMatrix {
        rows: [[1.0 - e, e], [d, 1.0 - d]],
    }
}

/// `mu · P^steps`.
pub fn evolve(mu: DistributionVector, params: &ChainParams, steps: usize) -> DistributionVector {
    let p = transition_matrix(params);
    (0..steps).fold(mu, |acc, _| p.apply(acc))
}

/// `(delta, epsilon) / (epsilon + delta)`.
pub fn stationary_distribution(params: &ChainParams) -> Result<DistributionVector> {
    if params.is_degenerate() {
        return Err(Error::DegenerateChain);
    }
    let total = params.epsilon + params.delta;
    Ok(DistributionVector {
        p_good: params.delta / total,
        p_err: params.epsilon / total,
    })
}

/// Probability that the source emits exactly `s`.
pub fn string_probability(params: &ChainParams, s: &SymbolString) -> f64 {
    let symbols = s.symbols();
    let mut p = params.initial(symbols[0]);
    for pair in symbols.windows(2) {
        p *= params.step(pair[0], pair[1]);
    }
    p
}

/// Probabilities of all `2^n` strings, indexed canonically.
///
/// Each entry is the same left-to-right product as [`string_probability`],
/// so the two agree bit for bit.
pub fn all_string_probabilities(params: &ChainParams, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    check_cap("string length", n, MAX_ENUMERATION_LEN)?;
    let mut probs = vec![params.initial(Symbol::Good), params.initial(Symbol::Err)];
    for _ in 1..n {
        let mut next = Vec::with_capacity(probs.len() * 2);
        for (idx, &p) in probs.iter().enumerate() {
            let last = Symbol::from_bit(idx as u64 & 1);
            next.push(p * params.step(last, Symbol::Good));
            next.push(p * params.step(last, Symbol::Err));
        }
        probs = next;
    }
    Ok(probs)
}

/// All `2^n` strings in lexicographic order with `Good < Err`.
pub fn enumerate_strings(n: usize) -> Result<Vec<SymbolString>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    check_cap("string length", n, MAX_ENUMERATION_LEN)?;
    (0..1u64 << n)
        .map(|idx| SymbolString::from_index(idx, n))
        .collect()
}

/// Draws one string from the chain using `rng`; returns its canonical index.
pub(crate) fn sample_index<R: Rng>(params: &ChainParams, n: usize, rng: &mut R) -> u64 {
    debug_assert!((1..=63).contains(&n));
    let mut current = if rng.gen::<f64>() < params.p0 {
        Symbol::Good
    } else {
        Symbol::Err
    };
    let mut index = current.bit();
    for _ in 1..n {
        let u: f64 = rng.gen();
        current = match current {
            Symbol::Good if u < params.epsilon => Symbol::Err,
            Symbol::Err if u < params.delta => Symbol::Good,
            s => s,
        };
        index = (index << 1) | current.bit();
    }
    index
}

/// Draws a string of length `n`; a fixed seed always gives the same string.
pub fn sample_string(params: &ChainParams, n: usize, seed: u64) -> Result<SymbolString> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = Vec::with_capacity(n);
    let mut current = if rng.gen::<f64>() < params.p0 {
        Symbol::Good
    } else {
        Symbol::Err
    };
    symbols.push(current);
    for _ in 1..n {
        let u: f64 = rng.gen();
        current = match current {
            Symbol::Good if u < params.epsilon => Symbol::Err,
            Symbol::Err if u < params.delta => Symbol::Good,
            s => s,
        };
        symbols.push(current);
    }
    SymbolString::new(symbols)
}

/// Number of `Err` symbols.
pub fn error_count(s: &SymbolString) -> usize {
    s.symbols().iter().filter(|&&x| x == Symbol::Err).count()
}

/// Shannon entropy in bits of a Bernoulli(p) variable, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Entropy rate of the stationary chain in bits per symbol.
pub fn entropy_rate(params: &ChainParams) -> Result<f64> {
    let st = stationary_distribution(params)?;
    Ok(st.p_good * binary_entropy(params.epsilon) + st.p_err * binary_entropy(params.delta))
}

/// Whether every run of `min(k, n)` consecutive symbols holds at most `l`
/// errors. Windows overlap; a string shorter than `k` is one window.
pub fn window_admissible(s: &SymbolString, w: &WindowConstraint) -> bool {
    let width = w.k.min(s.len());
    s.symbols()
        .windows(width)
        .all(|win| win.iter().filter(|&&x| x == Symbol::Err).count() <= w.l)
}

/// Exact probability that an `n`-string satisfies the window constraint.
///
/// Dynamic program over the last `max(k - 1, 1)` symbols; cost is
/// `O(n · 2^k)`.
pub fn sparsity_probability_exact(
    params: &ChainParams,
    n: usize,
    w: &WindowConstraint,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    check_cap("window length k", w.k, MAX_WINDOW_LEN)?;
    let hist = (w.k - 1).max(1);
    let hist_mask = (1usize << hist) - 1;
    let window_mask = (1usize << (w.k - 1)) - 1;

    let mut dp = vec![0.0; 1 << hist];
    dp[0] = params.initial(Symbol::Good);
    // With k == 1 the first symbol already fills a window.
    if w.k > 1 || w.l >= 1 {
        dp[1] = params.initial(Symbol::Err);
    }
    let mut next = vec![0.0; 1 << hist];
    for len in 1..n {
        next.iter_mut().for_each(|x| *x = 0.0);
        let checks_window = len + 1 >= w.k;
        for (mask, &p) in dp.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let last = Symbol::from_bit(mask as u64 & 1);
            for new in [Symbol::Good, Symbol::Err] {
                let bit = new.bit() as usize;
                if checks_window && (mask & window_mask).count_ones() as usize + bit > w.l {
                    continue;
                }
                next[((mask << 1) | bit) & hist_mask] += p * params.step(last, new);
            }
        }
        std::mem::swap(&mut dp, &mut next);
    }
    if n < w.k {
        // The history holds the whole string; it is a single window.
        Ok(dp
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask.count_ones() as usize <= w.l)
            .map(|(_, p)| p)
            .sum())
    } else {
        Ok(dp.iter().sum())
    }
}

/// Window-constraint probability by direct enumeration of all `2^n` strings.
pub fn sparsity_probability_enumerated(
    params: &ChainParams,
    n: usize,
    w: &WindowConstraint,
) -> Result<f64> {
    let probs = all_string_probabilities(params, n)?;
    let admissible: Vec<f64> = probs
        .iter()
        .enumerate()
        .map(|(idx, &p)| {
            let s = SymbolString::from_index(idx as u64, n).expect("index in range");
            if window_admissible(&s, w) {
                p
            } else {
                0.0
            }
        })
        .collect();
    Ok(pairwise_sum(&admissible))
}

fn binomial(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Closed-form series estimate for the `(k, l) = (3, 1)` window probability
/// of strings starting with `Good`:
///
/// `S = Σ_{j=0}^{m} C(m, m-j) p0 (εδ)^(m-j) (1-ε)^(m+2j)`, `m = ⌊(n-1)/3⌋`.
///
/// This is an estimate, not the exact probability; see
/// [`sparsity_probability_exact`].
pub fn sparsity_series_estimate(params: &ChainParams, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "series needs n >= 4, got {n}"
        )));
    }
    let m = ((n - 1) / 3) as u64;
    let (e, d) = (params.epsilon, params.delta);
    let terms: Vec<f64> = (0..=m)
        .map(|j| {
            binomial(m, m - j)
                * params.p0
                * (e * d).powi((m - j) as i32)
                * (1.0 - e).powi((m + 2 * j) as i32)
        })
        .collect();
    Ok(terms.iter().sum())
}
