//! Exact linear algebra over fields and over `k((t))`.
//!
//! Inputs over `k((t))` are truncated series. A reduction only succeeds when the
//! result is certified to be independent of the unknown digits: if the computed
//! module contains `t^(P-2) k[[t]]^n` for input precision `P`, Nakayama's lemma
//! shows every completion of the inputs spans the same module.

pub mod field_matrix;
pub mod hermite;
pub mod laurent_matrix;

pub use field_matrix::{FieldMatrix, FieldMatrixJson};
pub use hermite::{hermite_exact, Hermite};
pub use laurent_matrix::{LaurentMatrix, LaurentMatrixJson, LaurentPolyMatrix};

use crate::kernel::{KernelError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is rank deficient at precision {prec}")]
    RankDeficient { prec: i64 },
    #[error("precision {prec} exhausted before the canonical form was certified")]
    PrecisionExhausted { prec: i64 },
    #[error("precision {prec} is insufficient to decide membership")]
    PrecisionInsufficient { prec: i64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

impl LinalgError {
    /// Whether more input precision could make the computation succeed.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            LinalgError::RankDeficient { .. }
                | LinalgError::PrecisionExhausted { .. }
                | LinalgError::PrecisionInsufficient { .. }
        )
    }
}

/// Certified canonical form of the column span of `m` (which must have rank `m.rows()`).
pub fn canonical_form(m: &LaurentMatrix) -> Result<Hermite, LinalgError> {
    let n = m.rows();
    if m.cols() < n {
        return Err(LinalgError::RankDeficient { prec: m.prec() });
    }
    if n == 0 {
        return Ok(hermite_exact(m.field(), 0, &[], 0));
    }
    let p = m.prec();
    let known = m.known_part();
    let h = hermite_exact(m.field(), n, known.columns(), p - 1);
    if h.conductor() <= p - 2 {
        return Ok(h);
    }
    if h.pivots.iter().any(|&a| a >= p - 1) {
        Err(LinalgError::RankDeficient { prec: p })
    } else {
        Err(LinalgError::PrecisionExhausted { prec: p })
    }
}

/// Canonical basis (at the input precision) and pivot exponents, in row order.
pub fn dvr_hermite_reduce(m: &LaurentMatrix) -> Result<(LaurentMatrix, Vec<i64>), LinalgError> {
    let h = canonical_form(m)?;
    Ok((LaurentMatrix::from_polys(&h.basis, m.prec()), h.pivots))
}

/// Valuation of the determinant of a square matrix.
pub fn det_val(m: &LaurentMatrix) -> Result<i64, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::Shape(format!("det_val of a {}x{} matrix", m.rows(), m.cols())));
    }
    Ok(canonical_form(m)?.det_val())
}

/// Whether the column `x` lies in the `k[[t]]`-column span of `m`.
pub fn in_dvr_span(m: &LaurentMatrix, x: &LaurentMatrix) -> Result<bool, LinalgError> {
    if x.cols() != 1 || x.rows() != m.rows() {
        return Err(LinalgError::Shape(format!("{}x{} is not a column of length {}", x.rows(), x.cols(), m.rows())));
    }
    let h = canonical_form(m)?;
    let px = x.prec();
    let xs: Vec<LaurentPoly> = x.known_part().column(0).to_vec();
    let c = h.conductor();
    if c <= px && h.contains(&xs) {
        return Ok(true);
    }
    let widened = hermite_exact(m.field(), m.rows(), h.basis.columns(), c.min(px));
    if !widened.contains(&xs) {
        return Ok(false);
    }
    Err(LinalgError::PrecisionInsufficient { prec: px })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Field, LaurentSeries};

    fn series(f: &Field, v: i64, bits: &[i64], prec: i64) -> LaurentSeries {
        LaurentSeries::new(f, v, bits.iter().map(|&b| f.from_i64(b)).collect(), prec).unwrap()
    }

    fn example(f: &Field, prec: i64) -> LaurentMatrix {
        let entries = vec![
            series(f, 0, &[1], prec),
            series(f, 0, &[1], prec),
            series(f, 1, &[1], prec),
            series(f, 1, &[1, 1], prec),
        ];
        LaurentMatrix::new(f, 2, 2, entries).unwrap()
    }

    #[test]
    fn reduce_two_by_two() {
        let f = Field::prime(2).unwrap();
        let (b, pivots) = dvr_hermite_reduce(&example(&f, 8)).unwrap();
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(b.get(0, 1).val(), crate::kernel::Valuation::ZeroToPrecision);
        assert_eq!(det_val(&example(&f, 8)).unwrap(), 2);
    }

    #[test]
    fn diagonal_and_identity() {
        let f = Field::prime(5).unwrap();
        assert_eq!(det_val(&LaurentMatrix::diagonal(&f, &[2, -1], 8)).unwrap(), 1);
        assert_eq!(det_val(&LaurentMatrix::identity(&f, 3, 8)).unwrap(), 0);
        let (b, pivots) = dvr_hermite_reduce(&LaurentMatrix::identity(&f, 3, 8)).unwrap();
        assert_eq!(pivots, vec![0, 0, 0]);
        assert_eq!(b, LaurentMatrix::identity(&f, 3, 8));
    }

    #[test]
    fn span_membership() {
        let f = Field::prime(2).unwrap();
        let col = |a: LaurentSeries, b: LaurentSeries| LaurentMatrix::new(&f, 2, 1, vec![a, b]).unwrap();
        let x = col(series(&f, 1, &[1], 8), series(&f, 3, &[1], 8));
        assert!(in_dvr_span(&LaurentMatrix::identity(&f, 2, 8), &x).unwrap());
        let y = col(series(&f, 0, &[1], 8), LaurentSeries::zero(&f, 8));
        assert!(!in_dvr_span(&LaurentMatrix::scalar_power(&f, 2, 1, 8), &y).unwrap());
        let z = col(LaurentSeries::zero(&f, 8), series(&f, 2, &[1], 8));
        assert!(in_dvr_span(&example(&f, 8), &z).unwrap());
    }

    #[test]
    fn undecidable_membership_is_an_error() {
        let f = Field::prime(2).unwrap();
        let m = LaurentMatrix::scalar_power(&f, 1, 3, 10);
        let x = LaurentMatrix::new(&f, 1, 1, vec![LaurentSeries::zero(&f, 2)]).unwrap();
        assert!(matches!(in_dvr_span(&m, &x), Err(LinalgError::PrecisionInsufficient { .. })));
    }

    #[test]
    fn singular_input_is_rank_deficient() {
        let f = Field::prime(3).unwrap();
        let one = series(&f, 0, &[1], 6);
        let m = LaurentMatrix::new(&f, 2, 2, vec![one.clone(), one.clone(), one.clone(), one]).unwrap();
        assert!(matches!(det_val(&m), Err(LinalgError::RankDeficient { .. })));
    }
}
