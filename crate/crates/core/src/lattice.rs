//! The lattice of projections: order, meet, join, orthocomplement, atoms,
//! and checkers for orthomodularity, covering and atomicity. Also the finite
//! property families the domain and semantics modules work over.

use serde::{Deserialize, Serialize};

use crate::error::{QlatError, Result};
use crate::numerics::{
    c64, check_dims, eigen_subspace, frobenius_distance, CMatrix, Projection, Tolerances,
};

pub const ZERO_LABEL: &str = "0";
pub const IDENTITY_LABEL: &str = "I";

/// `P ≤ Q` iff `QP = P` (range inclusion).
pub fn leq(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<bool> {
    check_dims(p.dim(), q.dim())?;
    Ok(frobenius_distance(&(q.matrix() * p.matrix()), p.matrix()) < tol.op)
}

/// Projection onto `range(P) ∩ range(Q)`, read off the null space of
/// `(I − P) + (I − Q)`.
pub fn meet(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<Projection> {
    check_dims(p.dim(), q.dim())?;
    let d = p.dim();
    let m = CMatrix::identity(d, d).scale(2.0) - p.matrix() - q.matrix();
    let basis = eigen_subspace(&m, |lambda| lambda < tol.eig);
    Ok(Projection::from_orthonormal_columns(d, &basis))
}

/// Projection onto `span(range(P) ∪ range(Q))`, read off the range of `P + Q`.
pub fn join(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<Projection> {
    check_dims(p.dim(), q.dim())?;
    let d = p.dim();
    let m = p.matrix() + q.matrix();
    let basis = eigen_subspace(&m, |lambda| lambda >= tol.eig);
    Ok(Projection::from_orthonormal_columns(d, &basis))
}

pub fn orthocomplement(p: &Projection) -> Projection {
    p.complement()
}

pub fn is_atom(p: &Projection) -> bool {
    p.rank() == 1
}

/// `P ≤ Q ⇒ Q = P ∨ (Q ∧ P⊥)`; vacuously true when `P ≰ Q`.
pub fn check_orthomodular(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<bool> {
    Ok(orthomodular_residual(p, q, tol)?.is_none_or(|r| r < tol.op))
}

/// `‖Q − (P ∨ (Q ∧ P⊥))‖_F` when `P ≤ Q`, otherwise `None`.
pub fn orthomodular_residual(
    p: &Projection,
    q: &Projection,
    tol: &Tolerances,
) -> Result<Option<f64>> {
    if !leq(p, q, tol)? {
        return Ok(None);
    }
    let rebuilt = join(p, &meet(q, &p.complement(), tol)?, tol)?;
    Ok(Some(rebuilt.distance(q)))
}

/// Covering law for an atom `A`: either `A ≤ P`, or `P ∨ A` covers `P`,
/// certified by `rank(P ∨ A) = rank(P) + 1` together with `P ≤ P ∨ A`.
pub fn check_covering(atom: &Projection, p: &Projection, tol: &Tolerances) -> Result<bool> {
    if !is_atom(atom) {
        return Err(QlatError::NotAtom { rank: atom.rank() });
    }
    if leq(atom, p, tol)? {
        return Ok(true);
    }
    let j = join(p, atom, tol)?;
    Ok(j.rank() == p.rank() + 1 && leq(p, &j, tol)?)
}

/// Atomicity: every nonzero `P` lies above an atom, and is the join of the
/// atoms spanned by its range basis.
pub fn check_atomic(p: &Projection, tol: &Tolerances) -> Result<bool> {
    let basis = p.range_basis();
    if basis.is_empty() {
        return Ok(true);
    }
    let mut acc = Projection::zero(p.dim());
    for v in &basis {
        let atom = Projection::from_orthonormal_columns(p.dim(), std::slice::from_ref(v));
        if !is_atom(&atom) || !leq(&atom, p, tol)? {
            return Ok(false);
        }
        acc = join(&acc, &atom, tol)?;
    }
    Ok(acc.approx_eq(p, tol))
}

/// A pair of same-dimension projections.
#[derive(Clone, Debug)]
pub struct PropertyPair {
    pub first: Projection,
    pub second: Projection,
}

impl PropertyPair {
    pub fn new(first: Projection, second: Projection) -> Result<Self> {
        check_dims(first.dim(), second.dim())?;
        Ok(Self { first, second })
    }
}

/// A finite, labelled fragment of the property lattice. Always contains the
/// zero projection and the identity; members are pairwise distinct within
/// `tol.op`.
#[derive(Clone, Debug)]
pub struct PropertyFamily {
    dim: usize,
    members: Vec<(String, Projection)>,
}

impl PropertyFamily {
    /// Builds a family, dropping members within `tol.op` of an earlier one
    /// and adjoining `0` (front) and `I` (back) when absent.
    pub fn new(
        dim: usize,
        members: impl IntoIterator<Item = (String, Projection)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(QlatError::EmptyDimension);
        }
        let mut kept: Vec<(String, Projection)> = Vec::new();
        for (label, p) in members {
            check_dims(dim, p.dim())?;
            if kept.iter().any(|(l, _)| *l == label) {
                return Err(QlatError::DuplicateLabel(label));
            }
            if kept.iter().any(|(_, q)| q.approx_eq(&p, tol)) {
                continue;
            }
            kept.push((label, p));
        }
        let zero = Projection::zero(dim);
        if !kept.iter().any(|(_, q)| q.approx_eq(&zero, tol)) {
            if kept.iter().any(|(l, _)| l == ZERO_LABEL) {
                return Err(QlatError::DuplicateLabel(ZERO_LABEL.into()));
            }
            kept.insert(0, (ZERO_LABEL.into(), zero));
        }
        let id = Projection::identity(dim);
        if !kept.iter().any(|(_, q)| q.approx_eq(&id, tol)) {
            if kept.iter().any(|(l, _)| l == IDENTITY_LABEL) {
                return Err(QlatError::DuplicateLabel(IDENTITY_LABEL.into()));
            }
            kept.push((IDENTITY_LABEL.into(), id));
        }
        Ok(Self { dim, members: kept })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Projection)> {
        self.members.iter().map(|(l, p)| (l.as_str(), p))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|(l, _)| l.as_str())
    }

    pub fn get(&self, label: &str) -> Result<&Projection> {
        self.members
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| p)
            .ok_or_else(|| QlatError::UnknownLabel(label.to_string()))
    }

    pub fn to_document(&self) -> FamilyDocument {
        FamilyDocument {
            dim: self.dim,
            members: self
                .members
                .iter()
                .map(|(label, p)| MemberDocument {
                    label: label.clone(),
                    matrix: matrix_to_pairs(p.matrix()),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &FamilyDocument, tol: &Tolerances) -> Result<Self> {
        let mut members = Vec::with_capacity(doc.members.len());
        for m in &doc.members {
            let mat = matrix_from_pairs(&m.matrix)?;
            check_dims(doc.dim, mat.nrows())?;
            members.push((m.label.clone(), Projection::new(mat, tol)?));
        }
        Self::new(doc.dim, members, tol)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str, tol: &Tolerances) -> Result<Self> {
        let doc: FamilyDocument = serde_json::from_str(text)?;
        Self::from_document(&doc, tol)
    }
}

/// On-disk form of a [`PropertyFamily`]: row-major matrices of `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub dim: usize,
    pub members: Vec<MemberDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberDocument {
    pub label: String,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(QlatError::EmptyDimension);
    }
    for r in rows {
        if r.len() != n {
            return Err(QlatError::NotSquare {
                rows: n,
                cols: r.len(),
            });
        }
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        c64(rows[i][j][0], rows[i][j][1])
    }))
}
