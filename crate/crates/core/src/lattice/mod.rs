//! Lattices in `V = k((t))^n`: full-rank `k[[t]]`-submodules commensurable with
//! the standard lattice `k[[t]]^n`.
//!
//! A [`Lattice`] stores its exact canonical basis (see [`crate::linalg::hermite`]),
//! so two lattices are equal iff their bases are. Join is the canonical form of the
//! concatenated bases; meet is computed through the dual lattice
//! `L* = {y : y^T x in k[[t]] for all x in L}`, whose basis is `(B^-1)^T`.

pub mod random;
pub mod split;

use serde::Serialize;

pub use split::{split_tate, TateSplitting};

use crate::kernel::{Fe, Field, LaurentPoly};
use crate::linalg::{canonical_form, hermite_exact, Hermite, LaurentMatrix, LaurentMatrixJson, LaurentPolyMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("lattice basis must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("lattices live in spaces of rank {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("lattices live over different fields")]
    FieldMismatch,
    #[error("the first lattice is not contained in the second")]
    NotNested,
    #[error("window {window} is too small; the lattice needs {needed}")]
    WindowTooSmall { window: i64, needed: i64 },
}

impl LatticeError {
    pub fn is_precision(&self) -> bool {
        matches!(self, LatticeError::Linalg(e) if e.is_precision())
    }
}

#[derive(Clone, Debug)]
pub struct Lattice {
    h: Hermite,
    conductor: i64,
    /// Working precision carried for serialization.
    prec: i64,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}

impl Eq for Lattice {}

impl std::hash::Hash for Lattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.h.hash(state);
    }
}

/// The graded pair `(L0/N, L1/N)` for `N = L0 meet L1`, by dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexBundle {
    pub pos: u64,
    pub neg: u64,
    pub net: i64,
}

impl Lattice {
    fn from_hermite(h: Hermite, prec: i64) -> Self {
        let conductor = h.conductor();
        let floor = h.pivots.iter().copied().max().map_or(prec, |a| a.max(conductor) + 2);
        Lattice { h, conductor, prec: prec.max(floor) }
    }

    /// `t^shift k[[t]]^n`.
    pub fn standard(field: &Field, n: usize, shift: i64, prec: i64) -> Self {
        let h = Hermite { basis: LaurentPolyMatrix::diagonal(field, &vec![shift; n]), pivots: vec![shift; n] };
        Self::from_hermite(h, prec)
    }

    /// The canonical lattice spanned by the columns of a square matrix.
    pub fn from_matrix(m: &LaurentMatrix) -> Result<Self, LatticeError> {
        if m.rows() != m.cols() {
            return Err(LatticeError::NotSquare(m.rows(), m.cols()));
        }
        let h = canonical_form(m)?;
        Ok(Self::from_hermite(h, m.prec()))
    }

    /// The lattice spanned by exact generators, given a conductor bound for their span.
    fn from_generators(field: &Field, n: usize, gens: &[Vec<LaurentPoly>], bound: i64, prec: i64) -> Self {
        Self::from_hermite(hermite_exact(field, n, gens, bound), prec)
    }

    pub fn field(&self) -> &Field {
        self.h.field()
    }

    pub fn rank(&self) -> usize {
        self.h.rank()
    }

    pub fn pivots(&self) -> &[i64] {
        &self.h.pivots
    }

    pub fn basis(&self) -> &LaurentPolyMatrix {
        &self.h.basis
    }

    pub fn hermite(&self) -> &Hermite {
        &self.h
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// The least `c` with `t^c k[[t]]^n` inside the lattice.
    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    /// The greatest `s` with the lattice inside `t^s k[[t]]^n`.
    pub fn floor(&self) -> i64 {
        self.h.basis.min_val().unwrap_or(-crate::linalg::hermite::EMPTY_CONDUCTOR)
    }

    /// Valuation of the determinant of the basis.
    pub fn det_val(&self) -> i64 {
        self.h.det_val()
    }

    pub fn basis_series(&self) -> LaurentMatrix {
        LaurentMatrix::from_polys(&self.h.basis, self.prec)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LatticeError> {
        if self.rank() != other.rank() {
            return Err(LatticeError::RankMismatch(self.rank(), other.rank()));
        }
        if self.field() != other.field() {
            return Err(LatticeError::FieldMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, x: &[LaurentPoly]) -> bool {
        self.h.contains(x)
    }

    pub fn leq(&self, other: &Self) -> Result<bool, LatticeError> {
        self.check_compatible(other)?;
        Ok(self.h.basis.columns().iter().all(|c| other.contains(c)))
    }

    pub fn join(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_compatible(other)?;
        let gens = self.h.basis.hstack(&other.h.basis);
        let bound = self.conductor.min(other.conductor);
        Ok(Self::from_generators(self.field(), self.rank(), gens.columns(), bound, self.prec.max(other.prec)))
    }

    /// The dual lattice, with basis `(B^-1)^T`.
    pub fn dual(&self) -> Self {
        let inv_t = self.h.inverse().transpose();
        let bound = -self.floor();
        Self::from_generators(self.field(), self.rank(), inv_t.columns(), bound, self.prec)
    }

    pub fn meet(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_compatible(other)?;
        let mut m = self.dual().join(&other.dual())?.dual();
        m.prec = m.prec.max(self.prec.max(other.prec));
        Ok(m)
    }

    /// `t^s L`.
    pub fn shift(&self, s: i64) -> Self {
        let columns: Vec<Vec<LaurentPoly>> =
            self.h.basis.columns().iter().map(|c| c.iter().map(|e| e.shift(s)).collect()).collect();
        let h = Hermite {
            basis: LaurentPolyMatrix::from_columns(self.field(), self.rank(), columns),
            pivots: self.h.pivots.iter().map(|a| a + s).collect(),
        };
        Self::from_hermite(h, self.prec + s.max(0))
    }

    /// Entrywise image under a field embedding; canonical forms are preserved.
    pub fn map_field(&self, target: &Field, embed: impl Fn(&Fe) -> Fe) -> Self {
        let h = Hermite { basis: self.h.basis.map_field(target, embed), pivots: self.h.pivots.clone() };
        Self::from_hermite(h, self.prec)
    }

    pub fn to_json(&self) -> LaurentMatrixJson {
        let mut j = self.basis_series().to_json();
        j.canonical = Some(true);
        j
    }
}

/// Smith exponents of the torsion module `sup / sub`, ascending, one per coordinate.
pub fn quotient_dims(sub: &Lattice, sup: &Lattice) -> Result<Vec<u64>, LatticeError> {
    if !sub.leq(sup)? {
        return Err(LatticeError::NotNested);
    }
    let x = sup.h.inverse().mul(&sub.h.basis);
    let e = sub.det_val() - sup.det_val();
    Ok(smith_exponents(&x, e))
}

/// Elementary divisor exponents of an integral square matrix with `val det = e`.
fn smith_exponents(x: &LaurentPolyMatrix, e: i64) -> Vec<u64> {
    let n = x.rows();
    let bound = e + 1;
    let mut m: Vec<Vec<LaurentPoly>> = (0..n).map(|i| (0..n).map(|j| x.get(i, j).below(bound)).collect()).collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if let Some(v) = v.val() {
                    if best.is_none_or(|(_, _, b)| v < b) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, a)) = best else {
            // cannot happen for nonsingular input; the remaining exponents exceed e
            out.extend(std::iter::repeat_n(bound as u64, n - k));
            break;
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let unit = m[k][k].shift(-a);
        let inv = unit.unit_inverse_below(bound - a).expect("unit");
        for v in m[k].iter_mut().skip(k) {
            *v = v.mul_below(&inv, bound);
        }
        let pivot_row = m[k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let s = m[i][k].shift(-a);
            for j in k..n {
                m[i][j] = m[i][j].sub(&pivot_row[j].mul_below(&s, bound));
            }
        }
        // row k is now (t^a, *, ...); clear it with column operations
        for j in k + 1..n {
            m[k][j] = LaurentPoly::zero(x.field());
        }
        out.push(a as u64);
    }
    out.sort_unstable();
    out
}

pub fn index_bundle(l0: &Lattice, l1: &Lattice) -> Result<IndexBundle, LatticeError> {
    let n = l0.meet(l1)?;
    let pos: u64 = quotient_dims(&n, l0)?.iter().sum();
    let neg: u64 = quotient_dims(&n, l1)?.iter().sum();
    Ok(IndexBundle { pos, neg, net: pos as i64 - neg as i64 })
}

/// `t^-N k[[t]]^n` with `N = max(0, -(lowest valuation in a))`, which contains the columns of `a`.
pub fn enveloping_lattice_for_map(a: &LaurentMatrix) -> Lattice {
    let n = a.min_val().map_or(0, |v| (-v).max(0));
    let prec = if a.prec() == i64::MAX { 2 } else { a.prec() };
    Lattice::standard(a.field(), a.rows(), -n, prec)
}

/// `dim (t^-k L) / L` for `k = 0..=kmax`.
pub fn ind_quotient_dims(l: &Lattice, kmax: u64) -> Vec<u64> {
    (0..=kmax as i64)
        .map(|k| quotient_dims(l, &l.shift(-k)).expect("t^-k L contains L").iter().sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::LaurentSeries;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn diag(f: &Field, exps: &[i64]) -> Lattice {
        Lattice::from_matrix(&LaurentMatrix::diagonal(f, exps, 16)).unwrap()
    }

    #[test]
    fn standard_lattices() {
        let f = f2();
        let l = Lattice::standard(&f, 2, -1, 8);
        assert_eq!(l.pivots(), &[-1, -1]);
        assert_eq!(Lattice::standard(&f, 0, 5, 8).rank(), 0);
        assert_eq!(diag(&f, &[0, 0]), Lattice::standard(&f, 2, 0, 3));
    }

    #[test]
    fn diagonal_join_and_meet() {
        let f = f2();
        let a = Lattice::standard(&f, 2, 0, 16);
        let b = diag(&f, &[-1, 1]);
        assert_eq!(a.join(&b).unwrap(), diag(&f, &[-1, 0]));
        assert_eq!(a.meet(&b).unwrap(), diag(&f, &[0, 1]));
        let t = Lattice::standard(&f, 1, 1, 16);
        let one = Lattice::standard(&f, 1, 0, 16);
        assert_eq!(one.join(&t).unwrap(), one);
        assert_eq!(one.meet(&Lattice::standard(&f, 1, 2, 16)).unwrap(), Lattice::standard(&f, 1, 2, 16));
    }

    #[test]
    fn order_and_quotients() {
        let f = f2();
        let one = Lattice::standard(&f, 1, 0, 16);
        assert!(Lattice::standard(&f, 1, 2, 16).leq(&one).unwrap());
        assert!(!Lattice::standard(&f, 1, -1, 16).leq(&one).unwrap());
        assert_eq!(quotient_dims(&Lattice::standard(&f, 1, 2, 16), &one).unwrap(), vec![2]);
        assert_eq!(quotient_dims(&diag(&f, &[1, 2]), &Lattice::standard(&f, 2, 0, 16)).unwrap(), vec![1, 2]);
        assert_eq!(quotient_dims(&one, &one).unwrap(), vec![0]);
        assert!(matches!(quotient_dims(&one, &Lattice::standard(&f, 1, 1, 16)), Err(LatticeError::NotNested)));
    }

    #[test]
    fn index_examples() {
        let f = f2();
        let one = Lattice::standard(&f, 1, 0, 16);
        let t2 = Lattice::standard(&f, 1, 2, 16);
        assert_eq!(index_bundle(&one, &t2).unwrap(), IndexBundle { pos: 2, neg: 0, net: 2 });
        assert_eq!(index_bundle(&one, &one).unwrap(), IndexBundle { pos: 0, neg: 0, net: 0 });
        let std2 = Lattice::standard(&f, 2, 0, 16);
        assert_eq!(index_bundle(&std2, &diag(&f, &[-1, 1])).unwrap(), IndexBundle { pos: 1, neg: 1, net: 0 });
    }

    #[test]
    fn non_diagonal_join_is_reduced() {
        let f = f2();
        let z = LaurentSeries::zero(&f, 16);
        let one = LaurentSeries::one(&f, 16);
        let tinv = LaurentSeries::monomial(&f, f.one(), -1, 16);
        let m = LaurentMatrix::new(&f, 2, 2, vec![one.clone(), z, tinv, one]).unwrap();
        let l = Lattice::from_matrix(&m).unwrap();
        let j = l.join(&Lattice::standard(&f, 2, 0, 16)).unwrap();
        assert!(l.leq(&j).unwrap());
        assert_eq!(j.pivots(), &[0, -1]);
    }

    #[test]
    fn enveloping_and_ind_quotients() {
        let f = f2();
        let a = LaurentMatrix::diagonal(&f, &[-3, 2], 8);
        assert_eq!(enveloping_lattice_for_map(&a), Lattice::standard(&f, 2, -3, 8));
        assert_eq!(enveloping_lattice_for_map(&LaurentMatrix::identity(&f, 2, 8)), Lattice::standard(&f, 2, 0, 8));
        assert_eq!(ind_quotient_dims(&Lattice::standard(&f, 1, 0, 8), 3), vec![0, 1, 2, 3]);
        assert_eq!(ind_quotient_dims(&diag(&f, &[1, -2]), 2), vec![0, 2, 4]);
    }
}
