//! The split exact category of finite-dimensional vector spaces.
//!
//! Objects are dimensions over a fixed field; morphisms are [`FieldMatrix`]
//! values acting on column vectors, so `f: k^m -> k^n` is an `n x m` matrix.

use serde::Serialize;

use crate::kernel::Field;
use crate::linalg::FieldMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VectObject {
    pub dim: usize,
    #[serde(skip)]
    pub field: Field,
}

impl VectObject {
    pub fn new(field: &Field, dim: usize) -> Self {
        VectObject { dim, field: field.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("map is not injective")]
    NotMonic,
    #[error("map is not surjective")]
    NotEpic,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub fn is_monic(f: &FieldMatrix) -> bool {
    f.rank() == f.cols()
}

pub fn is_epic(f: &FieldMatrix) -> bool {
    f.rank() == f.rows()
}

/// The kernel object and its inclusion (columns form a basis of `ker f`).
pub fn kernel(f: &FieldMatrix) -> (VectObject, FieldMatrix) {
    let k = f.kernel();
    (VectObject::new(f.field(), k.cols()), k)
}

/// The cokernel object and the projection onto it.
pub fn cokernel(f: &FieldMatrix) -> (VectObject, FieldMatrix) {
    let p = f.cokernel_projection();
    (VectObject::new(f.field(), p.rows()), p)
}

/// Pushout of `i: X -> Y` (monic) along `f: X -> Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub object: VectObject,
    /// `Y -> P`.
    pub from_target: FieldMatrix,
    /// `Z -> P`, the pushed-out monic.
    pub from_other: FieldMatrix,
    /// `Y (+) Z -> P`.
    pub quotient: FieldMatrix,
}

pub fn pushout_along_monic(i: &FieldMatrix, f: &FieldMatrix) -> Result<Pushout, ExactError> {
    if i.cols() != f.cols() {
        return Err(ExactError::Shape(format!("sources differ: {} vs {}", i.cols(), f.cols())));
    }
    if !is_monic(i) {
        return Err(ExactError::NotMonic);
    }
    let rel = i.vstack(&f.neg());
    let (object, q) = cokernel(&rel);
    Ok(Pushout {
        object,
        from_target: q.submatrix(0..q.rows(), 0..i.rows()),
        from_other: q.submatrix(0..q.rows(), i.rows()..q.cols()),
        quotient: q,
    })
}

impl Pushout {
    /// The unique `u: P -> W` with `u g = a` and `u j = b`, when `a i = b f`.
    pub fn factor(&self, a: &FieldMatrix, b: &FieldMatrix) -> Option<FieldMatrix> {
        let ab = a.hstack(b);
        Some(self.quotient.transpose().solve(&ab.transpose())?.transpose())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSequence {
    /// `X -> Y`.
    pub i: FieldMatrix,
    /// `Y -> Z`.
    pub p: FieldMatrix,
}

/// True iff `i` is injective, `p` surjective and `im i = ker p`.
pub fn check_exact(s: &ShortExactSequence) -> bool {
    if s.i.rows() != s.p.cols() {
        return false;
    }
    is_monic(&s.i) && is_epic(&s.p) && s.p.mul(&s.i).is_zero() && s.i.cols() + s.p.rows() == s.i.rows()
}

/// A splitting `Y = X (+) Z` of a short exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    /// `r: Y -> X` with `r i = 1`.
    pub retraction: FieldMatrix,
    /// `s: Z -> Y` with `p s = 1`.
    pub section: FieldMatrix,
}

pub fn split(s: &ShortExactSequence) -> Result<Splitting, ExactError> {
    if !check_exact(s) {
        return Err(if !is_monic(&s.i) { ExactError::NotMonic } else { ExactError::NotEpic });
    }
    let section = s.p.right_inverse().ok_or(ExactError::NotEpic)?;
    let left = s.i.left_inverse().ok_or(ExactError::NotMonic)?;
    let n = s.i.rows();
    let complement = FieldMatrix::identity(s.i.field(), n).sub(&section.mul(&s.p));
    Ok(Splitting { retraction: left.mul(&complement), section })
}

impl Splitting {
    /// `r i = 1`, `p s = 1`, `r s = 0` and `i r + s p = 1`.
    pub fn verify(&self, s: &ShortExactSequence) -> bool {
        let f = s.i.field();
        let ri = self.retraction.mul(&s.i);
        let ps = s.p.mul(&self.section);
        let rs = self.retraction.mul(&self.section);
        let sum = s.i.mul(&self.retraction).add(&self.section.mul(&s.p));
        ri.is_identity() && ps.is_identity() && rs.is_zero() && sum == FieldMatrix::identity(f, s.i.rows())
    }
}
