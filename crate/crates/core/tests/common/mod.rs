//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use tate::diagram::{Diagram, FinitePoset};
use tate::kernel::{Fe, Field, LaurentPoly, LaurentSeries};
use tate::lattice::Lattice;
use tate::linalg::{FieldMatrix, LaurentMatrix, LaurentPolyMatrix};

// ---------------------------------------------------------------- GF(2) bit vectors

/// Row-echelon basis of a subspace of `F_2^64`.
#[derive(Clone, Debug, Default)]
pub struct Span2 {
    rows: Vec<u64>,
}

impl Span2 {
    pub fn of(vs: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Span2::default();
        for v in vs {
            s.insert(v);
        }
        s
    }

    fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            v = v.min(v ^ r);
        }
        v
    }

    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn vectors(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains_span(&self, other: &Span2) -> bool {
        other.rows.iter().all(|&v| self.contains(v))
    }

    pub fn same(&self, other: &Span2) -> bool {
        self.dim() == other.dim() && self.contains_span(other)
    }

    pub fn sum(&self, other: &Span2) -> Span2 {
        Span2::of(self.rows.iter().chain(&other.rows).copied())
    }

    pub fn intersection_dim(&self, other: &Span2) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

// ---------------------------------------------------------------- generic linear algebra

/// Rank of a list of vectors over any field, by plain Gaussian elimination.
pub fn rank(f: &Field, vs: &[Vec<Fe>]) -> usize {
    let mut m: Vec<Vec<Fe>> = vs.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).unwrap();
        let pivot: Vec<Fe> = m[r].iter().map(|x| f.mul(x, &inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !f.is_zero(&row[c]) {
                let k = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(x, &f.mul(&k, p));
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}

/// Product of matrices given as row lists.
pub fn matmul(f: &Field, a: &FieldMatrix, b: &FieldMatrix) -> Vec<Vec<Fe>> {
    assert_eq!(a.cols(), b.rows());
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).fold(f.zero(), |s, k| f.add(&s, &f.mul(a.get(i, k), b.get(k, j)))))
                .collect()
        })
        .collect()
}

pub fn is_identity(f: &Field, m: &[Vec<Fe>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.len() == m.len() && row.iter().enumerate().all(|(j, x)| if i == j { f.is_one(x) } else { f.is_zero(x) })
    })
}

pub fn is_zero(f: &Field, m: &[Vec<Fe>]) -> bool {
    m.iter().flatten().all(|x| f.is_zero(x))
}

// ---------------------------------------------------------------- Laurent matrices

/// `det` of a square matrix of Laurent polynomials by the Leibniz formula.
pub fn leibniz_det(f: &Field, m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = LaurentPoly::zero(f);
    permutations(&mut perm, 0, &mut |p| {
        let mut term = LaurentPoly::one(f);
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&m[i][j]);
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        total = if inversions % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    });
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// `val det` of a lattice basis, from the basis entries alone.
pub fn lattice_det_val(l: &Lattice) -> i64 {
    let b = l.basis();
    let rows: Vec<Vec<LaurentPoly>> = (0..b.rows()).map(|i| (0..b.cols()).map(|j| b.get(i, j).clone()).collect()).collect();
    leibniz_det(l.field(), &rows).val().expect("nonsingular")
}

fn random_lpoly<R: Rng>(rng: &mut R, f: &Field, lo: i64, hi: i64) -> LaurentPoly {
    LaurentPoly::new(f, lo, (lo..=hi).map(|_| f.random(rng)).collect())
}

/// A raw generator matrix `P T` (rows of entries): `T = diag(t^a_i)` with `a_i` in
/// `[-a, a]`, `P` with diagonal `1 + O(t)` and off-diagonal exponents in `[off_lo, off_hi]`.
pub fn raw_basis<R: Rng>(rng: &mut R, f: &Field, n: usize, a: i64, off_lo: i64, off_hi: i64) -> Vec<Vec<LaurentPoly>> {
    let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-a..=a)).collect();
    let p: Vec<Vec<LaurentPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one(f).add(&random_lpoly(rng, f, 1, 3))
                    } else {
                        random_lpoly(rng, f, off_lo, off_hi)
                    }
                })
                .collect()
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| p[i][j].shift(exps[j])).collect()).collect()
}

/// The lattice spanned by the columns of `rows`, raising the precision until canonicalization succeeds.
pub fn lattice_of(f: &Field, rows: &[Vec<LaurentPoly>]) -> Option<Lattice> {
    let n = rows.len();
    let mut prec = 16;
    while prec <= 256 {
        let entries = rows.iter().flatten().map(|e| LaurentSeries::from_poly(e, prec)).collect();
        let m = LaurentMatrix::new(f, n, n, entries).unwrap();
        match Lattice::from_matrix(&m) {
            Ok(l) => return Some(l),
            Err(e) if e.is_precision() => prec *= 2,
            Err(e) => panic!("{e}"),
        }
    }
    None
}

pub fn columns_of(rows: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    let n = rows.len();
    (0..n).map(|j| (0..n).map(|i| rows[i][j].clone()).collect()).collect()
}

/// Whether `x` lies in the lattice, by back-substitution in its lower-triangular basis.
pub fn contains_oracle(l: &Lattice, x: &[LaurentPoly]) -> bool {
    let b: &LaurentPolyMatrix = l.basis();
    let a = l.pivots();
    let f = l.field();
    let n = x.len();
    let mut y: Vec<LaurentPoly> = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = x[i].clone();
        for (j, yj) in y.iter().enumerate() {
            r = r.sub(&b.get(i, j).mul(yj));
        }
        // the diagonal entry is exactly t^a_i
        assert_eq!(b.get(i, i), &LaurentPoly::t_pow(f, a[i]), "basis is not in canonical form");
        y.push(r.shift(-a[i]));
    }
    y.iter().all(|e| e.val().is_none_or(|v| v >= 0))
}

pub fn leq_oracle(l: &Lattice, m: &Lattice) -> bool {
    l.basis().columns().iter().all(|c| contains_oracle(m, c))
}

// ---------------------------------------------------------------- window images over F_2

/// Bit of the coordinate `(component, exponent)` in the window `t^-w k[[t]]^n / t^w k[[t]]^n`.
pub fn window_bit(w: i64, component: usize, exponent: i64) -> u32 {
    (component as i64 * 2 * w + exponent + w) as u32
}

/// Image of the `k[[t]]`-span of `columns` in the window, or `None` if a generator
/// reaches below `t^-w`.
pub fn window_image(w: i64, columns: &[Vec<LaurentPoly>]) -> Option<Span2> {
    let mut span = Span2::default();
    for col in columns {
        let v = col.iter().filter_map(|e| e.val()).min()?;
        if v < -w {
            return None;
        }
        for k in 0..(w - v).max(0) {
            let mut bits = 0u64;
            for (c, e) in col.iter().enumerate() {
                for (x, coeff) in e.shift(k).terms() {
                    if x < w && coeff != &Fe::Mod(0) {
                        bits |= 1 << window_bit(w, c, x);
                    }
                }
            }
            span.insert(bits);
        }
    }
    Some(span)
}

/// Multiplication by `t` on the window.
pub fn times_t(w: i64, n: usize, v: u64) -> u64 {
    let mut top = 0u64;
    for c in 0..n {
        top |= 1 << window_bit(w, c, w - 1);
    }
    (v & !top) << 1
}

/// Jordan type of `t` on `sup / sub`, padded with zeros to `n` entries and sorted.
pub fn quotient_type(w: i64, n: usize, sub: &Span2, sup: &Span2) -> Vec<u64> {
    let mut dims = Vec::new();
    let mut cur: Vec<u64> = sup.vectors().to_vec();
    loop {
        let d = sub.sum(&Span2::of(cur.iter().copied())).dim() - sub.dim();
        dims.push(d);
        if d == 0 {
            break;
        }
        cur = cur.iter().map(|&v| times_t(w, n, v)).collect();
    }
    // dims[k] = sum max(s - k, 0); blocks larger than k: dims[k] - dims[k + 1]
    let mut sizes = Vec::new();
    for k in 1..dims.len() {
        let larger_than_k_minus_1 = dims[k - 1] - dims[k];
        let larger_than_k = if k + 1 < dims.len() { dims[k] - dims[k + 1] } else { 0 };
        for _ in 0..(larger_than_k_minus_1 - larger_than_k) {
            sizes.push(k as u64);
        }
    }
    while sizes.len() < n {
        sizes.push(0);
    }
    sizes.sort_unstable();
    sizes
}

// ---------------------------------------------------------------- Ind diagrams over F_2

/// An admissible Ind diagram of subspaces of `F_2^ambient` ordered by inclusion,
/// together with the image of each object (as bit vectors).
pub struct SubspaceDiagram {
    pub diagram: Diagram,
    pub images: Vec<Vec<u64>>,
    pub ambient: usize,
}

impl SubspaceDiagram {
    /// Dimension of the union of all objects, i.e. of the colimit.
    pub fn colimit_dim(&self) -> usize {
        Span2::of(self.images.iter().flatten().copied()).dim()
    }
}

fn coords_in(basis: &[u64], v: u64) -> Vec<bool> {
    for mask in 0u32..(1 << basis.len()) {
        let s = basis.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |a, (_, b)| a ^ b);
        if s == v {
            return (0..basis.len()).map(|i| mask >> i & 1 == 1).collect();
        }
    }
    panic!("vector outside the span");
}

/// A random poset on `n` elements (the last one is a maximum) with nested subspaces.
pub fn random_subspace_diagram<R: Rng>(rng: &mut R, n: usize, ambient: usize) -> SubspaceDiagram {
    let f = Field::prime(2).unwrap();
    let mut pairs = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if b == n - 1 || rng.gen_bool(0.35) {
                pairs.push((a, b));
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("i{i}")).collect();
    let poset = FinitePoset::new(names, &pairs).unwrap();
    let mut images: Vec<Vec<u64>> = Vec::with_capacity(n);
    for b in 0..n {
        let mut span = Span2::default();
        for a in 0..b {
            if poset.leq(a, b) {
                for &v in &images[a] {
                    span.insert(v);
                }
            }
        }
        let extra = rng.gen_range(0..=1);
        for _ in 0..extra {
            span.insert(rng.gen_range(1..(1u64 << ambient)));
        }
        images.push(span.vectors().to_vec());
    }
    let mut edges = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && poset.leq(a, b) {
                let cols: Vec<Vec<Fe>> = images[a]
                    .iter()
                    .map(|&v| coords_in(&images[b], v).into_iter().map(|x| f.from_i64(x as i64)).collect())
                    .collect();
                edges.insert((a, b), FieldMatrix::from_columns(&f, images[b].len(), &cols));
            }
        }
    }
    let dims = images.iter().map(Vec::len).collect();
    let diagram = Diagram::ind(&f, poset, dims, edges).unwrap();
    SubspaceDiagram { diagram, images, ambient }
}
