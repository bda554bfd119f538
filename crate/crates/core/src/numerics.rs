//! Dense complex linear algebra shared by every other module: Hermitian
//! operators, projections, normalized kets, clustered spectral
//! decomposition and the tolerance policy.
//!
//! All values are immutable after construction. Validation happens once, in
//! the constructors, so downstream code can rely on the invariants.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{QlatError, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Numerical equality thresholds used repo-wide.
///
/// `op` bounds Frobenius distances between operators, `eig` is the gap below
/// which eigenvalues are merged into one cluster, `norm` bounds the deviation
/// of a ket's squared norm from one, and `prob` is the slack for probability
/// comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub op: f64,
    pub eig: f64,
    pub norm: f64,
    pub prob: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            op: 1e-9,
            eig: 1e-7,
            norm: 1e-12,
            prob: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("op", self.op),
            ("eig", self.eig),
            ("norm", self.norm),
            ("prob", self.prob),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(QlatError::InvalidTolerance(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.eig <= self.op {
            return Err(QlatError::InvalidTolerance(format!(
                "eig ({}) must exceed op ({})",
                self.eig, self.op
            )));
        }
        Ok(())
    }
}

pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

fn check_square(m: &CMatrix) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(QlatError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(QlatError::EmptyDimension);
    }
    Ok(rows)
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(QlatError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Largest entrywise deviation from Hermiticity, with its location.
fn max_asymmetry(m: &CMatrix) -> (usize, usize, f64) {
    let n = m.nrows();
    let mut worst = (0, 0, 0.0);
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst.2 {
                worst = (i, j, d);
            }
        }
    }
    worst
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// A unit vector of a finite-dimensional complex Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket(CVector);

impl Ket {
    /// Wraps `amplitudes`, rejecting vectors whose squared norm is not one
    /// within `tol.norm`.
    pub fn new(amplitudes: CVector, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QlatError::EmptyDimension);
        }
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > tol.norm {
            return Err(QlatError::NotNormalized { norm_sqr });
        }
        Ok(Self(amplitudes))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalize(v: CVector) -> Result<Self> {
        if v.is_empty() {
            return Err(QlatError::EmptyDimension);
        }
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(QlatError::NotNormalized { norm_sqr: n * n });
        }
        Ok(Self(v.unscale(n)))
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalize(CVector::from_iterator(
            amps.len(),
            amps.iter().map(|&x| c64(x, 0.0)),
        ))
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = c64(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_vector(self) -> CVector {
        self.0
    }

    /// `|ψ⟩⟨ψ|` as a raw matrix.
    pub fn outer(&self) -> CMatrix {
        &self.0 * self.0.adjoint()
    }
}

/// A self-adjoint matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian(CMatrix);

impl Hermitian {
    /// Validates Hermiticity entrywise within `tol.op` and stores the exactly
    /// symmetrized matrix.
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_square(&m)?;
        let (row, col, asymmetry) = max_asymmetry(&m);
        if asymmetry > tol.op {
            return Err(QlatError::NotHermitian {
                row,
                col,
                asymmetry,
            });
        }
        Ok(Self(symmetrize(&m)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = CVector::from_iterator(diag.len(), diag.iter().map(|&x| c64(x, 0.0)));
        Self(CMatrix::from_diagonal(&v))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
}

/// An orthogonal projection: Hermitian and idempotent.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection(CMatrix);

impl Projection {
    /// Validates Hermiticity and idempotence (`‖P² − P‖_F < tol.op`).
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        let h = Hermitian::new(m, tol)?;
        let m = h.0;
        let residual = frobenius_distance(&(&m * &m), &m);
        if residual >= tol.op {
            return Err(QlatError::NotProjection { residual });
        }
        Ok(Self(m))
    }

    /// `V V†` for a matrix `V` with orthonormal columns. The caller vouches
    /// for orthonormality.
    pub fn from_orthonormal_columns(dim: usize, columns: &[CVector]) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        for v in columns {
            m += v * v.adjoint();
        }
        Self(symmetrize(&m))
    }

    /// Orthogonal projection onto the span of arbitrary (nonzero, possibly
    /// dependent) vectors.
    pub fn onto_span(dim: usize, vectors: &[CVector], tol: &Tolerances) -> Self {
        let mut gram = CMatrix::zeros(dim, dim);
        for v in vectors {
            gram += v * v.adjoint();
        }
        let basis = eigen_subspace(&gram, |lambda| lambda > tol.eig);
        Self::from_orthonormal_columns(dim, &basis)
    }

    pub fn zero(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    /// Rank-one projection `|ψ⟩⟨ψ|`.
    pub fn from_ket(ket: &Ket) -> Self {
        Self(symmetrize(&ket.outer()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Trace rounded to the nearest integer.
    pub fn rank(&self) -> usize {
        self.trace().round().max(0.0) as usize
    }

    /// `I − P`.
    pub fn complement(&self) -> Self {
        let d = self.dim();
        Self(CMatrix::identity(d, d) - &self.0)
    }

    pub fn as_hermitian(&self) -> Hermitian {
        Hermitian(self.0.clone())
    }

    pub fn distance(&self, other: &Projection) -> f64 {
        frobenius_distance(&self.0, &other.0)
    }

    /// Frobenius distance below `tol.op`.
    pub fn approx_eq(&self, other: &Projection, tol: &Tolerances) -> bool {
        self.dim() == other.dim() && self.distance(other) < tol.op
    }

    /// Orthonormal basis of the range.
    pub fn range_basis(&self) -> Vec<CVector> {
        eigen_subspace(&self.0, |lambda| lambda > 0.5)
    }
}

/// Eigenvectors of a Hermitian matrix whose eigenvalue satisfies `keep`,
/// ordered by ascending eigenvalue.
pub(crate) fn eigen_subspace(m: &CMatrix, keep: impl Fn(f64) -> bool) -> Vec<CVector> {
    let eig = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    idx.into_iter()
        .filter(|&i| keep(eig.eigenvalues[i]))
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect()
}

/// One cluster of the spectrum: an eigenvalue and its eigenprojection.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralComponent {
    pub eigenvalue: f64,
    pub projection: Projection,
}

/// Spectral decomposition with eigenvalue clustering.
///
/// Eigenvalues are sorted ascending; neighbours closer than `tol.eig` are
/// merged into one cluster (chained), reported at the cluster mean, with the
/// summed eigenprojection.
pub fn spectral_decompose(b: &Hermitian, tol: &Tolerances) -> Vec<SpectralComponent> {
    let d = b.dim();
    let eig = SymmetricEigen::new(b.matrix().clone());
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for i in idx {
        let lambda = eig.eigenvalues[i];
        match clusters.last_mut() {
            Some(c) if lambda - last < tol.eig => c.push(i),
            _ => clusters.push(vec![i]),
        }
        last = lambda;
    }

    clusters
        .into_iter()
        .map(|members| {
            let eigenvalue =
                members.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / members.len() as f64;
            let cols: Vec<CVector> = members
                .iter()
                .map(|&i| eig.eigenvectors.column(i).into_owned())
                .collect();
            SpectralComponent {
                eigenvalue,
                projection: Projection::from_orthonormal_columns(d, &cols),
            }
        })
        .collect()
}

/// `‖BC − CB‖_F`.
pub fn commutator_norm(b: &CMatrix, c: &CMatrix) -> Result<f64> {
    check_dims(b.nrows(), c.nrows())?;
    check_dims(b.ncols(), c.ncols())?;
    Ok((b * c - c * b).norm())
}

/// True iff `m` is square, Hermitian and idempotent within `tol.op`.
pub fn is_projection(m: &CMatrix, tol: &Tolerances) -> bool {
    Projection::new(m.clone(), tol).is_ok()
}
