//! Seeded random lattices.
//!
//! `B = P T` with `T = diag(t^a_i)`, `a_i` uniform in `[-3, 3]`; `P` has diagonal
//! entries `1 + O(t)` and off-diagonal entries with exponents in `[-2, 3]`. The
//! product is canonicalized at precision 16, doubling up to 64; a matrix that is
//! still singular is resampled.

use rand::Rng;

use super::Lattice;
use crate::kernel::{Field, LaurentPoly, LaurentSeries};
use crate::linalg::LaurentMatrix;

const MIN_EXP: i64 = -3;
const MAX_EXP: i64 = 3;

fn random_poly<R: Rng + ?Sized>(rng: &mut R, field: &Field, lo: i64, hi: i64) -> LaurentPoly {
    let coeffs = (lo..=hi).map(|_| field.random(rng)).collect();
    LaurentPoly::new(field, lo, coeffs)
}

/// A random matrix `P T` (exact).
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, field: &Field, n: usize) -> Vec<Vec<LaurentPoly>> {
    let a: Vec<i64> = (0..n).map(|_| rng.gen_range(MIN_EXP..=MAX_EXP)).collect();
    let p: Vec<Vec<LaurentPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one(field).add(&random_poly(rng, field, 1, 3))
                    } else {
                        random_poly(rng, field, -2, 3)
                    }
                })
                .collect()
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| p[i][j].shift(a[j])).collect()).collect()
}

pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, field: &Field, n: usize) -> Lattice {
    loop {
        let rows = random_basis(rng, field, n);
        let mut prec = 16;
        while prec <= 64 {
            let entries = rows.iter().flatten().map(|e| LaurentSeries::from_poly(e, prec)).collect();
            let m = LaurentMatrix::new(field, n, n, entries).expect("square");
            match Lattice::from_matrix(&m) {
                Ok(l) => return l,
                Err(e) if e.is_precision() => prec *= 2,
                Err(e) => panic!("random lattice: {e}"),
            }
        }
    }
}

/// `t^s r` for the least `s` making it a lower bound of every lattice in `of`.
pub fn lower_bound_candidate(r: &Lattice, of: &[&Lattice]) -> Lattice {
    let s = of.iter().map(|l| l.conductor() - r.floor()).max().unwrap_or(0);
    let mut s = s;
    // shrink while the bound still holds
    while of.iter().all(|l| r.shift(s - 1).leq(l).unwrap()) {
        s -= 1;
    }
    r.shift(s)
}

/// `t^s r` for the greatest `s` making it an upper bound of every lattice in `of`.
pub fn upper_bound_candidate(r: &Lattice, of: &[&Lattice]) -> Lattice {
    let mut s = of.iter().map(|l| l.floor() - r.conductor()).min().unwrap_or(0);
    while of.iter().all(|l| l.leq(&r.shift(s + 1)).unwrap()) {
        s += 1;
    }
    r.shift(s)
}
