//! Canonical column-Hermite form over `k[[t]]`.
//!
//! The canonical basis `B` of a full-rank submodule `M` of `k((t))^n` is lower
//! triangular, `B[i][i] = t^(a_i)`, and `B[i][j]` (for `j < i`) only has exponents
//! `< a_i`. Rows are processed top to bottom; the pivot of a row is the remaining
//! column with the lowest valuation in that row, ties going to the lowest index.
//!
//! All arithmetic is exact. When `M` is known to contain `t^c k[[t]]^n`, every
//! entry may be reduced below `t^(c+1)` without changing `M`, which bounds the
//! size of the intermediate polynomials.

use super::laurent_matrix::LaurentPolyMatrix;
use crate::kernel::{Field, LaurentPoly};

/// Sentinel conductor of the rank-zero module.
pub const EMPTY_CONDUCTOR: i64 = i64::MIN / 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hermite {
    pub basis: LaurentPolyMatrix,
    pub pivots: Vec<i64>,
}

/// Canonical form of `span(gens) + t^c k[[t]]^n`.
pub fn hermite_exact(field: &Field, n: usize, gens: &[Vec<LaurentPoly>], c: i64) -> Hermite {
    let bound = c.saturating_add(1);
    let mut cols: Vec<Vec<LaurentPoly>> =
        gens.iter().map(|g| g.iter().map(|e| e.below(bound)).collect()).collect();
    for i in 0..n {
        let mut e = vec![LaurentPoly::zero(field); n];
        e[i] = LaurentPoly::t_pow(field, c);
        cols.push(e);
    }
    let mut pivots = Vec::with_capacity(n);
    for r in 0..n {
        let mut best: Option<(usize, i64)> = None;
        for (k, col) in cols.iter().enumerate().skip(r) {
            if let Some(v) = col[r].val() {
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((k, v));
                }
            }
        }
        let (k, a) = best.expect("the added t^c e_r keeps every row nonzero");
        cols.swap(r, k);
        let unit = cols[r][r].shift(-a);
        if !is_one(&unit) {
            let inv = unit.unit_inverse_below(bound - a).expect("unit");
            for e in cols[r].iter_mut().skip(r) {
                *e = e.mul_below(&inv, bound);
            }
        }
        debug_assert!(is_one(&cols[r][r].shift(-a)));
        let pivot = cols[r].clone();
        for col in cols.iter_mut().skip(r + 1) {
            if col[r].is_zero() {
                continue;
            }
            let s = col[r].shift(-a);
            for i in r..n {
                col[i] = col[i].sub(&pivot[i].mul_below(&s, bound));
            }
        }
        pivots.push(a);
    }
    debug_assert!(cols[n..].iter().all(|c| c.iter().all(LaurentPoly::is_zero)));
    cols.truncate(n);
    for i in 1..n {
        let a = pivots[i];
        for j in 0..i {
            let high = cols[j][i].at_or_above(a);
            if high.is_zero() {
                continue;
            }
            let s = high.shift(-a);
            let pivot = cols[i].clone();
            for r in i..n {
                cols[j][r] = cols[j][r].sub(&pivot[r].mul_below(&s, bound));
            }
        }
    }
    Hermite { basis: LaurentPolyMatrix::from_columns(field, n, cols), pivots }
}

fn is_one(p: &LaurentPoly) -> bool {
    p.val() == Some(0) && p.top() == Some(0) && p.field().is_one(&p.coeff(0))
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    /// `y` with `B y = x`, exact.
    pub fn solve(&self, x: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let n = self.rank();
        let mut y: Vec<LaurentPoly> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = x[i].clone();
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc = acc.sub(&self.basis.get(i, j).mul(yj));
                }
            }
            y.push(acc.shift(-self.pivots[i]));
        }
        y
    }

    /// Whether `x` lies in the `k[[t]]`-span of the basis.
    pub fn contains(&self, x: &[LaurentPoly]) -> bool {
        self.solve(x).iter().all(|y| y.val().is_none_or(|v| v >= 0))
    }

    pub fn inverse(&self) -> LaurentPolyMatrix {
        let n = self.rank();
        let f = self.field();
        let columns = (0..n)
            .map(|k| {
                let mut e = vec![LaurentPoly::zero(f); n];
                e[k] = LaurentPoly::one(f);
                self.solve(&e)
            })
            .collect();
        LaurentPolyMatrix::from_columns(f, n, columns)
    }

    /// The least `c` with `t^c k[[t]]^n` inside the module.
    pub fn conductor(&self) -> i64 {
        match self.inverse().min_val() {
            Some(v) => -v,
            None => EMPTY_CONDUCTOR,
        }
    }

    /// Sum of the pivot exponents, the valuation of the determinant.
    pub fn det_val(&self) -> i64 {
        self.pivots.iter().sum()
    }
}
