//! Dense matrices over a [`Field`] with exact row reduction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::wire::ScalarJson;
use crate::kernel::{Fe, Field, KernelError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl FieldMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        FieldMatrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Fe>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        FieldMatrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Rows of small integers, reduced into `field`. An empty `rows` gives a `0 x cols` matrix.
    pub fn from_i64(field: &Field, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: entries.iter().map(|&x| field.from_i64(x)).collect(),
        }
    }

    pub fn from_columns(field: &Field, rows: usize, columns: &[Vec<Fe>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
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
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Fe {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Fe> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(&self.field, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows || self.field != other.field {
            return None;
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, j)));
                }
            }
        }
        Some(out)
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).unwrap_or_else(|| {
            panic!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)
        })
    }

    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        let col = Self::from_columns(&self.field, v.len(), &[v.to_vec()]);
        self.mul(&col).column(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let f = &self.field;
        FieldMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        FieldMatrix { data: self.data.iter().map(|a| f.neg(a)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Fe) -> Self {
        let f = &self.field;
        FieldMatrix { data: self.data.iter().map(|a| f.mul(a, c)).collect(), ..self.clone() }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zeros(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        FieldMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let top = self.hstack(&Self::zeros(&self.field, self.rows, other.cols));
        let bottom = Self::zeros(&self.field, other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(&self.field, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let columns: Vec<Vec<Fe>> = cols.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(&self.field, self.rows, &columns)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        if let Some(p) = self.field.prime_modulus() {
            return self.rref_prime(p);
        }
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else { continue };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn rref_prime(&self, p: u64) -> (Self, Vec<usize>) {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<u64> = self
            .data
            .iter()
            .map(|x| match x {
                Fe::Mod(v) => *v,
                _ => unreachable!("prime field element"),
            })
            .collect();
        let inv = |x: u64| -> u64 {
            let (mut b, mut e, mut r) = (x % p, p - 2, 1u64);
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            r
        };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
            if piv != r {
                for j in 0..cols {
                    a.swap(r * cols + j, piv * cols + j);
                }
            }
            let s = inv(a[r * cols + c]);
            for j in c..cols {
                a[r * cols + j] = a[r * cols + j] * s % p;
            }
            for i in 0..rows {
                let factor = a[i * cols + c];
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = factor * a[r * cols + j] % p;
                    let cur = a[i * cols + j];
                    a[i * cols + j] = if cur >= sub { cur - sub } else { cur + p - sub };
                }
            }
            pivots.push(c);
            r += 1;
        }
        let data = a.into_iter().map(Fe::Mod).collect();
        (FieldMatrix { field: self.field.clone(), rows, cols, data }, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per column, in free-variable order.
    pub fn kernel(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (b, &fc) in free.iter().enumerate() {
            k.set(fc, b, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, b, f.neg(r.get(i, fc)));
            }
        }
        k
    }

    /// A surjection onto `rows - rank` coordinates whose kernel is the column space.
    pub fn cokernel_projection(&self) -> Self {
        self.transpose().kernel().transpose()
    }

    /// Some `X` with `self * X = rhs`, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "right-hand side rows");
        let f = &self.field;
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// `X` with `X * self = I`; requires full column rank.
    pub fn left_inverse(&self) -> Option<Self> {
        Some(self.transpose().solve(&Self::identity(&self.field, self.cols))?.transpose())
    }

    /// `X` with `self * X = I`; requires full row rank.
    pub fn right_inverse(&self) -> Option<Self> {
        self.solve(&Self::identity(&self.field, self.rows))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        self.right_inverse()
    }

    /// Whether every column of `other` lies in the column space of `self`.
    pub fn column_space_contains(&self, other: &Self) -> bool {
        self.solve(other).is_some()
    }

    /// Column spaces coincide.
    pub fn same_column_space(&self, other: &Self) -> bool {
        self.column_space_contains(other) && other.column_space_contains(self)
    }

    pub fn to_json(&self) -> FieldMatrixJson {
        FieldMatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(|x| ScalarJson::encode(&self.field, x)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format(x)).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `{"rows": n, "cols": m, "entries": [[scalar, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ScalarJson>>,
}

impl FieldMatrixJson {
    pub fn decode(&self, field: &Field) -> Result<FieldMatrix, KernelError> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(KernelError::Malformed(format!(
                "matrix entries do not match {}x{}",
                self.rows, self.cols
            )));
        }
        let mut m = FieldMatrix::zeros(field, self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.decode(field)?);
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel_over_q() {
        let q = Field::rationals();
        let m = FieldMatrix::from_i64(&q, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let expected = FieldMatrix::from_i64(&q, 2, 1, &[2, -1]);
        assert!(k.same_column_space(&expected));
    }

    #[test]
    fn prime_fast_path_matches_generic_path() {
        let f4 = Field::gf(4).unwrap();
        let f2 = Field::prime(2).unwrap();
        let bits = [1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1];
        let a2 = FieldMatrix::from_i64(&f2, 3, 4, &bits);
        let a4 = FieldMatrix::from_i64(&f4, 3, 4, &bits);
        let (r2, p2) = a2.rref();
        let (r4, p4) = a4.rref();
        assert_eq!(p2, p4);
        for i in 0..3 {
            for j in 0..4 {
                assert_eq!(f4.embed(r2.get(i, j)), *r4.get(i, j));
            }
        }
    }

    #[test]
    fn solve_and_inverses() {
        let f5 = Field::prime(5).unwrap();
        let a = FieldMatrix::from_i64(&f5, 2, 2, &[1, 2, 3, 4]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let i = FieldMatrix::from_i64(&f5, 3, 1, &[1, 2, 0]);
        assert!(i.left_inverse().unwrap().mul(&i).is_identity());
        let p = FieldMatrix::from_i64(&f5, 1, 3, &[0, 1, 1]);
        assert!(p.mul(&p.right_inverse().unwrap()).is_identity());
        let singular = FieldMatrix::from_i64(&f5, 2, 2, &[1, 2, 2, 4]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn cokernel_kills_image() {
        let f2 = Field::prime(2).unwrap();
        let a = FieldMatrix::from_i64(&f2, 3, 2, &[1, 0, 1, 1, 0, 1]);
        let p = a.cokernel_projection();
        assert_eq!(p.rows(), 1);
        assert!(p.mul(&a).is_zero());
    }
}
