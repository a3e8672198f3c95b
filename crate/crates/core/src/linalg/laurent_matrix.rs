//! Matrices of truncated Laurent series and of exact Laurent polynomials.

use serde::{Deserialize, Serialize};

use super::LinalgError;
use crate::kernel::wire::SeriesJson;
use crate::kernel::{Fe, Field, KernelError, LaurentPoly, LaurentSeries};

/// A matrix of [`LaurentSeries`] sharing one field and variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentSeries>,
}

impl LaurentMatrix {
    /// Row-major entries.
    pub fn new(field: &Field, rows: usize, cols: usize, entries: Vec<LaurentSeries>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(first) = entries.first() {
            for e in &entries {
                if e.field() != field {
                    return Err(KernelError::FieldMismatch.into());
                }
                if e.var() != first.var() {
                    return Err(KernelError::VariableMismatch(first.var().into(), e.var().into()).into());
                }
            }
        }
        Ok(LaurentMatrix { field: field.clone(), rows, cols, entries })
    }

    pub fn identity(field: &Field, n: usize, prec: i64) -> Self {
        Self::scalar_power(field, n, 0, prec)
    }

    /// `t^shift` times the identity.
    pub fn scalar_power(field: &Field, n: usize, shift: i64, prec: i64) -> Self {
        Self::diagonal(field, &vec![shift; n], prec)
    }

    /// `diag(t^e_0, ..., t^e_{n-1})`.
    pub fn diagonal(field: &Field, exps: &[i64], prec: i64) -> Self {
        let n = exps.len();
        let mut entries = vec![LaurentSeries::zero(field, prec); n * n];
        for (i, &e) in exps.iter().enumerate() {
            entries[i * n + i] = LaurentSeries::monomial(field, field.one(), e, prec);
        }
        LaurentMatrix { field: field.clone(), rows: n, cols: n, entries }
    }

    pub fn from_polys(m: &LaurentPolyMatrix, prec: i64) -> Self {
        let entries = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| LaurentSeries::from_poly(m.get(i, j), prec))
            .collect();
        LaurentMatrix { field: m.field().clone(), rows: m.rows(), cols: m.cols(), entries }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[LaurentSeries] {
        &self.entries
    }

    /// Common precision floor; `i64::MAX` for an empty matrix.
    pub fn prec(&self) -> i64 {
        self.entries.iter().map(LaurentSeries::prec).min().unwrap_or(i64::MAX)
    }

    /// Lowest known exponent over all entries that are not zero to precision.
    pub fn min_val(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.val().finite()).min()
    }

    /// Entries reduced below the common precision floor, as exact polynomials.
    pub fn known_part(&self) -> LaurentPolyMatrix {
        let p = self.prec();
        let columns = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).known_part().below(p)).collect())
            .collect();
        LaurentPolyMatrix::from_columns(&self.field, self.rows, columns)
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        LaurentMatrix { field: self.field.clone(), rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<LaurentSeries> = None;
                for k in 0..self.cols {
                    let term = self.get(i, k).checked_mul(other.get(k, j))?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.checked_add(&term)?,
                    });
                }
                entries.push(acc.unwrap_or_else(|| LaurentSeries::zero(&self.field, i64::MAX / 4)));
            }
        }
        Ok(LaurentMatrix { field: self.field.clone(), rows: self.rows, cols: other.cols, entries })
    }

    pub fn column(&self, j: usize) -> Self {
        let entries = (0..self.rows).map(|i| self.get(i, j).clone()).collect();
        LaurentMatrix { field: self.field.clone(), rows: self.rows, cols: 1, entries }
    }

    /// Image under a field embedding, entrywise.
    pub fn map_field(&self, target: &Field, embed: impl Fn(&Fe) -> Fe) -> Self {
        let entries = self.entries.iter().map(|e| e.map_field(target, &embed)).collect();
        LaurentMatrix { field: target.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn to_json(&self) -> LaurentMatrixJson {
        LaurentMatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| SeriesJson::encode(self.get(i, j))).collect())
                .collect(),
            canonical: None,
        }
    }
}

/// `{"rows": n, "cols": m, "entries": [[series, ...], ...]}`; lattices add `"canonical": true`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<SeriesJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<bool>,
}

impl LaurentMatrixJson {
    pub fn decode(&self, field: &Field, default_prec: i64) -> Result<LaurentMatrix, LinalgError> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(LinalgError::Shape(format!("entries do not form a {}x{} grid", self.rows, self.cols)));
        }
        let entries = self
            .entries
            .iter()
            .flatten()
            .map(|s| s.decode(field, default_prec))
            .collect::<Result<Vec<_>, _>>()?;
        LaurentMatrix::new(field, self.rows, self.cols, entries)
    }
}

/// An exact matrix of Laurent polynomials, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolyMatrix {
    field: Field,
    rows: usize,
    columns: Vec<Vec<LaurentPoly>>,
}

impl LaurentPolyMatrix {
    pub fn from_columns(field: &Field, rows: usize, columns: Vec<Vec<LaurentPoly>>) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length");
        LaurentPolyMatrix { field: field.clone(), rows, columns }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self::from_columns(field, rows, vec![vec![LaurentPoly::zero(field); rows]; cols])
    }

    /// `diag(t^e_0, ...)`.
    pub fn diagonal(field: &Field, exps: &[i64]) -> Self {
        let mut m = Self::zeros(field, exps.len(), exps.len());
        for (i, &e) in exps.iter().enumerate() {
            m.columns[i][i] = LaurentPoly::t_pow(field, e);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.columns[j][i]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentPoly) {
        self.columns[j][i] = x;
    }

    pub fn column(&self, j: usize) -> &[LaurentPoly] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<LaurentPoly>] {
        &self.columns
    }

    pub fn min_val(&self) -> Option<i64> {
        self.columns.iter().flatten().filter_map(LaurentPoly::val).min()
    }

    pub fn max_top(&self) -> Option<i64> {
        self.columns.iter().flatten().filter_map(LaurentPoly::top).max()
    }

    pub fn transpose(&self) -> Self {
        let columns = (0..self.rows).map(|i| self.columns.iter().map(|c| c[i].clone()).collect()).collect();
        LaurentPolyMatrix { field: self.field.clone(), rows: self.cols(), columns }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        LaurentPolyMatrix { field: self.field.clone(), rows: self.rows, columns }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols(), other.rows, "shape mismatch");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        LaurentPolyMatrix { field: self.field.clone(), rows: self.rows, columns }
    }

    pub fn apply(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(&self.field); self.rows];
        for (col, x) in self.columns.iter().zip(v) {
            if x.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(col) {
                *o = o.add(&e.mul(x));
            }
        }
        out
    }

    pub fn map_field(&self, target: &Field, embed: impl Fn(&Fe) -> Fe) -> Self {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|e| e.map_field(target, &embed)).collect())
            .collect();
        LaurentPolyMatrix { field: target.clone(), rows: self.rows, columns }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let f = Field::prime(2).unwrap();
        let m = LaurentMatrix::diagonal(&f, &[1, -1], 6);
        let text = serde_json::to_string(&m.to_json()).unwrap();
        assert!(text.starts_with(r#"{"rows":2,"cols":2,"entries":[[{"v":1,"prec":6,"coeffs":["1"]}"#));
        let back: LaurentMatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.decode(&f, 6).unwrap(), m);
    }

    #[test]
    fn ragged_json_is_rejected() {
        let f = Field::prime(2).unwrap();
        let j: LaurentMatrixJson =
            serde_json::from_str(r#"{"rows":2,"cols":1,"entries":[[{"v":0,"coeffs":[1]}]]}"#).unwrap();
        assert!(j.decode(&f, 4).is_err());
    }

    #[test]
    fn product_tracks_precision() {
        let f = Field::prime(3).unwrap();
        let a = LaurentMatrix::diagonal(&f, &[1, 0], 5);
        let b = LaurentMatrix::diagonal(&f, &[-1, 2], 5);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.get(0, 0).val().finite(), Some(0));
        assert_eq!(c.get(1, 1).val().finite(), Some(2));
        assert_eq!(c.get(0, 0).prec(), 4);
    }
}
