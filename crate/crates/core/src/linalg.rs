//! Dense complex kernels: Kronecker products, Hermitian eigendecomposition,
//! PSD square roots and the trace norm.
//!
//! Storage is `nalgebra`; products and Hermitian eigensolves run in `faer`.
//! Dimensions are capped at [`MAX_DIM`].

use faer::complex_native::c64;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_cap, Error, Result};

/// Largest matrix or vector dimension any kernel will build.
pub const MAX_DIM: usize = 1 << 13;

/// Absolute tolerance for Hermiticity, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues down to this value are treated as roundoff and clamped to 0.
pub const PSD_CLAMP: f64 = -1e-10;

/// Square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        check_cap("matrix dimension", dim, MAX_DIM)?;
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "{} entries do not fill a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "matrix has non-finite entries".into(),
            ));
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        check_cap("matrix dimension", diag.len(), MAX_DIM)?;
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Ok(Self(DMatrix::from_diagonal(&d)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &PureStateVector) -> Self {
        Self(&v.0 * v.0.adjoint())
    }

    pub(crate) fn from_inner(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    pub(crate) fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(&self.0 * Complex64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self::from_faer(&(to_faer(&self.0) * to_faer(&other.0))))
    }

    fn from_faer(m: &faer::Mat<c64>) -> Self {
        Self(DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            let z = m.read(i, j);
            Complex64::new(z.re, z.im)
        }))
    }

    /// Largest `|a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†) / 2`, after checking `m` is Hermitian within tolerance.
    fn symmetrized(&self) -> Result<DMatrix<Complex64>> {
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_TOL * self.max_abs_entry().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }
}

fn to_faer(m: &DMatrix<Complex64>) -> faer::Mat<c64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        c64::new(z.re, z.im)
    })
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector(DVector<Complex64>);

impl PureStateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_cap("vector dimension", amplitudes.len(), MAX_DIM)?;
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if v.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "state vector has norm {norm}, expected 1"
            )));
        }
        Ok(Self(v))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self.0.dotc(&other.0))
    }

    /// `⟨v|m|v⟩`.
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<Complex64> {
        same_dim(self.dim(), m.dim())?;
        Ok(self.0.dotc(&(&m.0 * &self.0)))
    }
}

/// Kronecker product, `a ⊗ b`; chains compose left to right.
pub trait TensorProduct: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl TensorProduct for ComplexMatrix {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_cap(
            "tensor product dimension",
            self.dim() * other.dim(),
            MAX_DIM,
        )?;
        Ok(Self(self.0.kronecker(&other.0)))
    }
}

impl TensorProduct for PureStateVector {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_cap(
            "tensor product dimension",
            self.dim() * other.dim(),
            MAX_DIM,
        )?;
        Ok(Self(self.0.kronecker(&other.0)))
    }
}

pub fn tensor_product<T: TensorProduct>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

/// `factors[0] ⊗ factors[1] ⊗ …`.
pub fn tensor_all<T: TensorProduct + Clone>(factors: &[T]) -> Result<T> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("empty tensor product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.tensor(f))
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors.0;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = Complex64::new(f(lambda), 0.0);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= w);
        }
        ComplexMatrix::from_faer(&(to_faer(&scaled) * to_faer(v).adjoint()))
    }
}

pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let eig = to_faer(&m.symmetrized()?).selfadjoint_eigendecomposition(faer::Side::Lower);
    let (values, vectors) = (eig.s().column_vector(), eig.u());
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by(|&a, &b| values.read(a).re.total_cmp(&values.read(b).re));
    let eigenvalues = order.iter().map(|&i| values.read(i).re).collect();
    let eigenvectors = DMatrix::from_fn(m.dim(), m.dim(), |r, c| {
        let z = vectors.read(r, order[c]);
        Complex64::new(z.re, z.im)
    });
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: ComplexMatrix(eigenvectors),
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut values = to_faer(&m.symmetrized()?).selfadjoint_eigenvalues(faer::Side::Lower);
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecomposition(m)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < PSD_CLAMP {
        return Err(Error::NotPsd(min));
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(a, b))
    }
}
