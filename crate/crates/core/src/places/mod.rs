//! Places of `F_q(x)` (closed points of the projective line), local expansions
//! in a uniformizer, and residues of differentials `f dg`.

pub mod expand;
pub mod ratfunc;
pub mod residue;

use std::cmp::Ordering;
use std::fmt;

pub use expand::{local_expand, Completion, LocalExpansion};
pub use ratfunc::{RatFunc, RatFuncJson};
pub use residue::{residue, residue_sum, ResidueSum};

use crate::kernel::{Field, KernelError, Poly};

/// Enumeration refuses to test more than this many candidate polynomials.
pub const MAX_CANDIDATES: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlacesError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("enumerating places of degree <= {degree} over F_{q} needs {candidates} candidates (limit {MAX_CANDIDATES})")]
    TooManyPlaces { q: u128, degree: usize, candidates: u128 },
    #[error("{0} is not a monic irreducible polynomial")]
    NotIrreducible(String),
    #[error("the denominator has a factor of degree above {0}")]
    FactorTooLarge(usize),
    #[error("coefficients must lie in a finite field")]
    InfiniteField,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn finite(p: Poly) -> Result<Self, PlacesError> {
        if !p.is_monic() || !p.is_irreducible() {
            return Err(PlacesError::NotIrreducible(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    /// Order of vanishing of `f` at this place (`f` nonzero).
    pub fn order(&self, f: &RatFunc) -> i64 {
        match self {
            Place::Finite(pi) => {
                let (a, _) = f.num().split_power(pi);
                let (b, _) = f.den().split_power(pi);
                a as i64 - b as i64
            }
            Place::Infinity => f.den().degree().unwrap_or(0) as i64 - f.num().degree().unwrap_or(0) as i64,
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Less,
            (_, Place::Infinity) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.cmp_deglex(b),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// `inf`, then the monic irreducibles of degree `<= max_degree` by degree and coefficient code.
pub fn enumerate_places(field: &Field, max_degree: usize) -> Result<Vec<Place>, PlacesError> {
    let q = field.order().ok_or(PlacesError::InfiniteField)?;
    let mut candidates: u128 = 0;
    for d in 1..=max_degree {
        let count = q.checked_pow(d as u32).unwrap_or(u128::MAX);
        candidates = candidates.saturating_add(count);
    }
    if candidates > MAX_CANDIDATES {
        return Err(PlacesError::TooManyPlaces { q, degree: max_degree, candidates });
    }
    let mut out = vec![Place::Infinity];
    for d in 1..=max_degree {
        out.extend(irreducibles_of_degree(field, d).into_iter().map(Place::Finite));
    }
    Ok(out)
}

fn irreducibles_of_degree(field: &Field, d: usize) -> Vec<Poly> {
    let q = field.order().expect("finite field");
    (0..q.pow(d as u32))
        .filter_map(|code| {
            let mut coeffs = crate::kernel::poly::raw::from_code(field, code, d);
            coeffs.push(field.one());
            let p = Poly::new(field, coeffs);
            p.is_irreducible().then_some(p)
        })
        .collect()
}

/// Number of monic irreducibles of degree `d` over `F_q`, by the necklace formula.
pub fn necklace_count(q: u128, d: u32) -> u128 {
    let mut total: i128 = 0;
    for k in 1..=d {
        if d.is_multiple_of(k) {
            total += mobius(k) as i128 * (q.pow(d / k) as i128);
        }
    }
    (total / d as i128) as u128
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The finite places dividing `p` (sorted) and the largest of their degrees, by trial
/// division; fails if a factor has degree above `limit`.
pub fn finite_support(p: &Poly, limit: usize) -> Result<(Vec<Place>, usize), PlacesError> {
    let f = p.field();
    if !f.is_finite() {
        return Err(PlacesError::InfiniteField);
    }
    let deg = |r: &Poly| r.degree().unwrap_or(0);
    let mut rest = if p.is_zero() { Poly::one(f) } else { p.monic() };
    let mut found = Vec::new();
    let mut d = 1;
    while deg(&rest) > 0 {
        // every factor of degree < d is gone, so a remainder of degree < 2d is irreducible
        if deg(&rest) < 2 * d {
            if deg(&rest) > limit {
                return Err(PlacesError::FactorTooLarge(limit));
            }
            found.push(Place::Finite(rest));
            break;
        }
        if d > limit {
            return Err(PlacesError::FactorTooLarge(limit));
        }
        let q = f.order().unwrap();
        if q.checked_pow(d as u32).is_none_or(|c| c > MAX_CANDIDATES) {
            return Err(PlacesError::TooManyPlaces { q, degree: d, candidates: q.saturating_pow(d as u32) });
        }
        for pi in irreducibles_of_degree(f, d) {
            let (k, cof) = rest.split_power(&pi);
            if k > 0 {
                rest = cof;
                found.push(Place::Finite(pi));
            }
        }
        d += 1;
    }
    found.sort();
    let max_deg = found.iter().map(Place::degree).max().unwrap_or(0);
    Ok((found, max_deg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ps: &[Place]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn small_enumerations() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(names(&enumerate_places(&f2, 1).unwrap()), ["inf", "x", "x+1"]);
        assert_eq!(names(&enumerate_places(&f2, 2).unwrap()), ["inf", "x", "x+1", "x^2+x+1"]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(names(&enumerate_places(&f3, 1).unwrap()), ["inf", "x", "x+1", "x+2"]);
    }

    #[test]
    fn counts_follow_necklace_formula() {
        for q in [2u64, 3, 4, 5] {
            let f = Field::gf(q).unwrap();
            let places = enumerate_places(&f, 3).unwrap();
            for d in 1..=3usize {
                let got = places.iter().filter(|p| !p.is_infinity() && p.degree() == d).count() as u128;
                assert_eq!(got, necklace_count(q as u128, d as u32), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn oversized_enumeration_is_refused() {
        let f = Field::prime(65521).unwrap();
        assert!(matches!(enumerate_places(&f, 3), Err(PlacesError::TooManyPlaces { .. })));
    }

    #[test]
    fn support_of_denominator() {
        let f2 = Field::prime(2).unwrap();
        let p = Poly::parse(&f2, "x^2+x").unwrap();
        let (s, d) = finite_support(&p, 4).unwrap();
        assert_eq!(names(&s), ["x", "x+1"]);
        assert_eq!(d, 1);
        let (s, d) = finite_support(&Poly::parse(&f2, "x^3+x^2+x").unwrap(), 4).unwrap();
        assert_eq!(names(&s), ["x", "x^2+x+1"]);
        assert_eq!(d, 2);
    }
}
