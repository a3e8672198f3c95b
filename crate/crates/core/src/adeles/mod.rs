//! Truncated adèles of the projective line over `F_q`.
//!
//! Places of degree `<= D` (and infinity) carry the window `u^-N K[[u]] / u^N K[[u]]`,
//! flattened to `F_q` coordinates. For a divisor `E = sum m_p p` supported there:
//!
//! - `A_full` is the sum of the windows;
//! - `A_int` is the coordinate subspace `u^-m_p O_p`;
//! - `A_gen` consists of the functions regular away from the listed places, with pole
//!   order at most `N` at each of them, spanned by `x^k` (`k <= N`) and `x^i / pi^j`
//!   (`1 <= j <= N`, `i < deg pi`).
//!
//! `H^0(O(E))` and `H^1(O(E))` are the kernel and cokernel of `(f, a) -> f - a`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{check_exact, ShortExactSequence};
use crate::kernel::{Fe, Field, Poly};
use crate::linalg::FieldMatrix;
use crate::places::{enumerate_places, finite_support, Completion, Place, PlacesError, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdeleError {
    #[error(transparent)]
    Places(#[from] PlacesError),
    #[error("truncation is inadequate: need D >= 1 and N >= {needed}, got D = {max_degree}, N = {window}")]
    Inadequate { max_degree: usize, window: usize, needed: usize },
    #[error("the divisor involves {0}, a place of degree above D")]
    DivisorOutsideWindow(String),
    #[error("{0} is not a rational point")]
    NotRational(String),
    #[error("the function has a pole of degree above D or of order above N")]
    FunctionOutsideWindow,
    #[error("cohomology changed under refinement: ({h0}, {h1}) became ({h0_refined}, {h1_refined})")]
    Unstable { h0: usize, h1: usize, h0_refined: usize, h1_refined: usize },
}

/// `sum m_p p`, zero coefficients omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor(BTreeMap<Place, i64>);

impl Divisor {
    /// `d * inf`, the divisor of `O(d)`.
    pub fn twist(d: i64) -> Self {
        let mut m = Divisor::default();
        m.add(&Place::Infinity, d);
        m
    }

    pub fn add(&mut self, p: &Place, k: i64) {
        let e = self.0.entry(p.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(p);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(p, m)| m * p.degree() as i64).sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.0.values().map(|m| m.abs()).max().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.0.keys()
    }
}

/// Least admissible `N` for a divisor.
pub fn required_window(divisor: &Divisor) -> usize {
    divisor.max_abs() as usize + 2
}

#[derive(Clone, Debug)]
pub struct AdelicComplex {
    field: Field,
    divisor: Divisor,
    max_degree: usize,
    window: usize,
    places: Vec<Place>,
    offsets: Vec<usize>,
    full_dim: usize,
    gen_basis: Vec<RatFunc>,
    /// Columns: windows of the `A_gen` basis.
    gen: FieldMatrix,
    /// Coordinates of `A_full` spanning `A_int`, increasing.
    int_coords: Vec<usize>,
}

impl AdelicComplex {
    pub fn new(field: &Field, divisor: &Divisor, max_degree: usize, window: usize) -> Result<Self, AdeleError> {
        let needed = required_window(divisor);
        if max_degree < 1 || window < needed {
            return Err(AdeleError::Inadequate { max_degree, window, needed });
        }
        if let Some(p) = divisor.support().find(|p| p.degree() > max_degree) {
            return Err(AdeleError::DivisorOutsideWindow(p.to_string()));
        }
        let places = enumerate_places(field, max_degree)?;
        let n = window as i64;
        let mut offsets = Vec::with_capacity(places.len());
        let mut full_dim = 0;
        let mut int_coords = Vec::new();
        for p in &places {
            offsets.push(full_dim);
            let e = p.degree();
            let m = divisor.coeff(p);
            for k in -n..n {
                if k >= -m {
                    let base = full_dim + ((k + n) as usize) * e;
                    int_coords.extend(base..base + e);
                }
            }
            full_dim += 2 * window * e;
        }
        let gen_basis = gen_basis(field, &places, window);
        let mut c = AdelicComplex {
            field: field.clone(),
            divisor: divisor.clone(),
            max_degree,
            window,
            places,
            offsets,
            full_dim,
            gen_basis,
            gen: FieldMatrix::zeros(field, 0, 0),
            int_coords,
        };
        let columns = c.windows(&c.gen_basis)?;
        c.gen = FieldMatrix::from_columns(field, full_dim, &columns);
        Ok(c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn full_dim(&self) -> usize {
        self.full_dim
    }

    pub fn gen_dim(&self) -> usize {
        self.gen_basis.len()
    }

    pub fn int_dim(&self) -> usize {
        self.int_coords.len()
    }

    pub fn gen_basis(&self) -> &[RatFunc] {
        &self.gen_basis
    }

    /// Window coordinates of the place `p` in `A_full`, as `(offset, size)`.
    pub fn place_block(&self, p: &Place) -> Option<(usize, usize)> {
        let i = self.places.iter().position(|q| q == p)?;
        Some((self.offsets[i], 2 * self.window * p.degree()))
    }

    /// Windows of several functions, computed place by place.
    fn windows(&self, fs: &[RatFunc]) -> Result<Vec<Vec<Fe>>, AdeleError> {
        let n = self.window as i64;
        let blocks: Vec<Vec<Vec<Fe>>> = self
            .places
            .par_iter()
            .map(|p| -> Result<Vec<Vec<Fe>>, AdeleError> {
                let mut c = Completion::new(&self.field, p)?;
                let e = p.degree();
                fs.iter()
                    .map(|f| {
                        let mut block = vec![self.field.zero(); 2 * self.window * e];
                        let Some(v) = c.order(f) else { return Ok(block) };
                        if v < -n {
                            return Err(AdeleError::FunctionOutsideWindow);
                        }
                        if v >= n {
                            return Ok(block);
                        }
                        let s = c.expand(f, (n - v) as usize)?;
                        let k = c.residue_field().clone();
                        for exp in v..n {
                            let coeff = s.coeff(exp).expect("expanded through the window");
                            for (j, x) in k.coords(&coeff).into_iter().enumerate() {
                                block[((exp + n) as usize) * e + j] = x;
                            }
                        }
                        Ok(block)
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok((0..fs.len())
            .map(|i| blocks.iter().flat_map(|b| b[i].iter().cloned()).collect())
            .collect())
    }

    /// Window of a function; fails if it has poles the window cannot see.
    pub fn window_of(&self, f: &RatFunc) -> Result<Vec<Fe>, AdeleError> {
        let (_, deg) = finite_support(f.den(), f.den().degree().unwrap_or(0).max(1))?;
        if deg > self.max_degree {
            return Err(AdeleError::FunctionOutsideWindow);
        }
        Ok(self.windows(std::slice::from_ref(f))?.remove(0))
    }

    /// Whether a window lies in `A_int`.
    pub fn is_integral(&self, w: &[Fe]) -> bool {
        let mut int = self.int_coords.iter().peekable();
        w.iter().enumerate().all(|(k, x)| {
            while int.next_if(|&&c| c < k).is_some() {}
            int.peek() == Some(&&k) || self.field.is_zero(x)
        })
    }

    /// `A_int -> A_full`.
    pub fn int_inclusion(&self) -> FieldMatrix {
        let f = &self.field;
        let cols: Vec<Vec<Fe>> = self
            .int_coords
            .iter()
            .map(|&k| {
                let mut v = vec![f.zero(); self.full_dim];
                v[k] = f.one();
                v
            })
            .collect();
        FieldMatrix::from_columns(f, self.full_dim, &cols)
    }

    /// `A_gen (+) A_int -> A_full`, `(f, a) -> f - a`.
    pub fn difference_map(&self) -> FieldMatrix {
        self.gen.hstack(&self.int_inclusion().neg())
    }

    /// `(h0, h1)` at this truncation.
    pub fn cohomology_raw(&self) -> (usize, usize) {
        let m = self.difference_map();
        let r = m.rank();
        (m.cols() - r, m.rows() - r)
    }

    pub fn structure(&self) -> TateStructure {
        let per_place = self
            .places
            .iter()
            .zip(&self.offsets)
            .map(|(p, &off)| {
                let size = 2 * self.window * p.degree();
                let pro = self.int_coords.iter().filter(|&&k| k >= off && k < off + size).count();
                PlaceSplit { place: p.to_string(), pro, ind: size - pro }
            })
            .collect::<Vec<_>>();
        let pro = per_place.iter().map(|s| s.pro).sum();
        let ind = per_place.iter().map(|s| s.ind).sum();
        TateStructure { pro, ind, total: self.full_dim, per_place }
    }
}

fn gen_basis(field: &Field, places: &[Place], window: usize) -> Vec<RatFunc> {
    let x = Poly::x(field);
    let mut out: Vec<RatFunc> = (0..=window as u32).map(|k| RatFunc::from_poly(x.pow(k))).collect();
    for p in places {
        if let Place::Finite(pi) = p {
            for j in 1..=window as u32 {
                let den = pi.pow(j);
                for i in 0..p.degree() as u32 {
                    out.push(RatFunc::new(x.pow(i), den.clone()).expect("nonzero denominator"));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub h0: usize,
    pub h1: usize,
    pub stable: bool,
}

/// `(h0, h1)` of `O(E)`, recomputed at `(D + 1, N + 2)`; a disagreement is an error.
pub fn divisor_cohomology(field: &Field, e: &Divisor, max_degree: usize, window: usize) -> Result<Cohomology, AdeleError> {
    let (h0, h1) = AdelicComplex::new(field, e, max_degree, window)?.cohomology_raw();
    let (h0_refined, h1_refined) = AdelicComplex::new(field, e, max_degree + 1, window + 2)?.cohomology_raw();
    if (h0, h1) != (h0_refined, h1_refined) {
        return Err(AdeleError::Unstable { h0, h1, h0_refined, h1_refined });
    }
    Ok(Cohomology { h0, h1, stable: true })
}

pub fn adelic_cohomology(field: &Field, d: i64, max_degree: usize, window: usize) -> Result<Cohomology, AdeleError> {
    divisor_cohomology(field, &Divisor::twist(d), max_degree, window)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceSplit {
    pub place: String,
    pub pro: usize,
    pub ind: usize,
}

/// Window dimensions of the integral (Pro) part and of the principal parts (Ind).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TateStructure {
    pub pro: usize,
    pub ind: usize,
    pub total: usize,
    pub per_place: Vec<PlaceSplit>,
}

/// Structure of the truncated adèles of `O(d)^rank`.
pub fn adele_tate_structure(
    field: &Field,
    d: i64,
    rank: usize,
    max_degree: usize,
    window: usize,
) -> Result<TateStructure, AdeleError> {
    let mut s = AdelicComplex::new(field, &Divisor::twist(d), max_degree, window)?.structure();
    s.pro *= rank;
    s.ind *= rank;
    s.total *= rank;
    for p in &mut s.per_place {
        p.pro *= rank;
        p.ind *= rank;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesReport {
    /// `0 -> A_int(E - p) -> A_int(E) -> k(p) -> 0` is exact on windows.
    pub exact: bool,
    pub chi_sub: i64,
    pub chi: i64,
    pub chi_difference: i64,
    pub ok: bool,
}

/// Checks `0 -> O(d - 1) -> O(d) -> O_p -> 0` with `O(d - 1) = O(d inf - p)` for a rational point `p`.
pub fn ses_adeles_check(field: &Field, d: i64, p: &Place, max_degree: usize, window: usize) -> Result<SesReport, AdeleError> {
    if p.degree() != 1 {
        return Err(AdeleError::NotRational(p.to_string()));
    }
    let e = Divisor::twist(d);
    let mut sub = e.clone();
    sub.add(p, -1);
    let window = window.max(required_window(&sub));
    let big = AdelicComplex::new(field, &e, max_degree, window)?;
    let small = AdelicComplex::new(field, &sub, max_degree, window)?;

    let f = field;
    let position = |k: usize| big.int_coords.binary_search(&k).ok();
    let inc_cols: Vec<Vec<Fe>> = small
        .int_coords
        .iter()
        .map(|&k| {
            let mut v = vec![f.zero(); big.int_dim()];
            if let Some(i) = position(k) {
                v[i] = f.one();
            }
            v
        })
        .collect();
    let inclusion = FieldMatrix::from_columns(f, big.int_dim(), &inc_cols);
    // the coefficient of u^-m_p at p
    let (off, _) = big.place_block(p).expect("rational points are listed");
    let lowest = off + (window as i64 - e.coeff(p)) as usize;
    let mut row = vec![f.zero(); big.int_dim()];
    if let Some(i) = position(lowest) {
        row[i] = f.one();
    }
    let projection = FieldMatrix::from_rows(f, vec![row]);
    let exact = check_exact(&ShortExactSequence { i: inclusion, p: projection });

    let chi = |c: Cohomology| c.h0 as i64 - c.h1 as i64;
    let chi_big = chi(divisor_cohomology(f, &e, max_degree, window)?);
    let chi_sub = chi(divisor_cohomology(f, &sub, max_degree, window)?);
    let chi_difference = chi_big - chi_sub;
    Ok(SesReport { exact, chi_sub, chi: chi_big, chi_difference, ok: exact && chi_difference == 1 })
}

/// A function's components at the listed places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedAdele {
    pub components: Vec<(Place, crate::kernel::LaurentSeries)>,
    /// Places where the function has a pole; it is integral everywhere else.
    pub poles: Vec<Place>,
}

/// The diagonal image of `f`, each component to `N` digits past its valuation.
pub fn adele_of_function(f: &RatFunc, max_degree: usize, window: usize) -> Result<TruncatedAdele, AdeleError> {
    let field = f.field();
    let (_, deg) = finite_support(f.den(), f.den().degree().unwrap_or(0).max(1))?;
    if deg > max_degree {
        return Err(AdeleError::FunctionOutsideWindow);
    }
    let places = enumerate_places(field, max_degree)?;
    let components: Vec<(Place, crate::kernel::LaurentSeries)> = places
        .par_iter()
        .map(|p| Ok((p.clone(), Completion::new(field, p)?.expand(f, window)?)))
        .collect::<Result<_, PlacesError>>()?;
    let poles = components
        .iter()
        .filter(|(_, s)| s.val().finite().is_some_and(|v| v < 0))
        .map(|(p, _)| p.clone())
        .collect();
    Ok(TruncatedAdele { components, poles })
}
