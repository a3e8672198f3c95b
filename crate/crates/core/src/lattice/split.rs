//! Splitting `V = L (+) V/L` on a finite window.
//!
//! The window of size `w` is `W = t^-w k[[t]]^n / t^w k[[t]]^n`, with coordinates
//! ordered by component and then by exponent `-w..w`. When `t^w k[[t]]^n ⊆ L ⊆
//! t^-w k[[t]]^n`, the image of `L` in `W` determines `L`.

use super::{Lattice, LatticeError};
use crate::kernel::Fe;
use crate::linalg::FieldMatrix;

/// Window matrices realizing `W = L_w (+) W/L_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateSplitting {
    pub window: i64,
    /// `i: L_w -> W`.
    pub inclusion: FieldMatrix,
    /// `p: W -> W/L_w`.
    pub projection: FieldMatrix,
    /// `s: W/L_w -> W`, spanned by coordinate vectors.
    pub section: FieldMatrix,
    /// `r: W -> L_w` with `r i = 1` and `r s = 0`.
    pub retraction: FieldMatrix,
}

impl TateSplitting {
    /// The idempotent `i r` projecting `W` onto the lattice along the complement.
    pub fn projector(&self) -> FieldMatrix {
        self.inclusion.mul(&self.retraction)
    }

    pub fn verify(&self) -> bool {
        let n = self.inclusion.rows();
        let f = self.inclusion.field();
        self.retraction.mul(&self.inclusion).is_identity()
            && self.projection.mul(&self.section).is_identity()
            && self.retraction.mul(&self.section).is_zero()
            && self.projection.mul(&self.inclusion).is_zero()
            && self.projector().add(&self.section.mul(&self.projection)) == FieldMatrix::identity(f, n)
    }
}

/// Index of the coordinate `(component, exponent)` in the window of size `w`.
pub fn window_index(w: i64, component: usize, exponent: i64) -> usize {
    component * (2 * w as usize) + (exponent + w) as usize
}

/// Basis (as columns) of the image of `l` in the window of size `w`.
pub fn window_basis(l: &Lattice, w: i64) -> Result<FieldMatrix, LatticeError> {
    let needed = l.conductor().max(-l.floor()).max(0);
    if l.rank() > 0 && needed > w {
        return Err(LatticeError::WindowTooSmall { window: w, needed });
    }
    let f = l.field();
    let n = l.rank();
    let dim = 2 * w as usize * n;
    let mut cols: Vec<Vec<Fe>> = Vec::new();
    for (i, col) in l.basis().columns().iter().enumerate() {
        for k in 0..(w - l.pivots()[i]).max(0) {
            let mut v = vec![f.zero(); dim];
            for (r, e) in col.iter().enumerate() {
                for (x, c) in e.shift(k).terms() {
                    if x < w {
                        v[window_index(w, r, x)] = c.clone();
                    }
                }
            }
            cols.push(v);
        }
    }
    Ok(FieldMatrix::from_columns(f, dim, &cols))
}

/// The splitting of the window `W` along `l`, with the complement spanned by the
/// first coordinate vectors independent of the lattice.
pub fn split_tate(l: &Lattice, w: i64) -> Result<TateSplitting, LatticeError> {
    let inclusion = window_basis(l, w)?;
    let f = l.field();
    let dim = inclusion.rows();
    let mut span = inclusion.clone();
    let mut chosen: Vec<Vec<Fe>> = Vec::new();
    for k in 0..dim {
        if span.cols() == dim {
            break;
        }
        let mut e = vec![f.zero(); dim];
        e[k] = f.one();
        let candidate = span.hstack(&FieldMatrix::from_columns(f, dim, &[e.clone()]));
        if candidate.rank() > span.rank() {
            span = candidate;
            chosen.push(e);
        }
    }
    let section = FieldMatrix::from_columns(f, dim, &chosen);
    let inv = inclusion.hstack(&section).inverse().expect("lattice and complement span the window");
    let d = inclusion.cols();
    Ok(TateSplitting {
        window: w,
        retraction: inv.submatrix(0..d, 0..dim),
        projection: inv.submatrix(d..dim, 0..dim),
        inclusion,
        section,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Field;

    #[test]
    fn standard_lattice_projects_onto_nonnegative_powers() {
        let f = Field::prime(2).unwrap();
        let s = split_tate(&Lattice::standard(&f, 1, 0, 8), 2).unwrap();
        assert!(s.verify());
        let p = s.projector();
        for k in 0..4 {
            for j in 0..4 {
                let expected = if k == j && k >= 2 { f.one() } else { f.zero() };
                assert_eq!(*p.get(k, j), expected);
            }
        }
    }

    #[test]
    fn shifted_lattice_shifts_the_projector() {
        let f = Field::prime(2).unwrap();
        let s = split_tate(&Lattice::standard(&f, 1, 1, 8), 2).unwrap();
        assert!(s.verify());
        assert_eq!(s.inclusion.cols(), 1);
        assert_eq!(s.projector().get(3, 3), &f.one());
        assert!(split_tate(&Lattice::standard(&f, 1, 3, 8), 2).is_err());
    }
}
