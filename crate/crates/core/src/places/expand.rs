//! Expansions of rational functions in a uniformizer.
//!
//! At a finite place `pi` of degree `d` the completion is `K((u))` with
//! `K = F_q[y]/pi` and `u = pi`; the image of `x` is the root `theta(u)` of
//! `pi(theta) = u` lifting `y`. At infinity `u = 1/x` and `K = F_q`.

use super::{Place, PlacesError, RatFunc};
use crate::kernel::{Fe, Field, LaurentSeries, Poly};

/// Power series `c_0 + c_1 u + ...` truncated to a fixed length.
type Trunc = Vec<Fe>;

fn trunc_mul(k: &Field, a: &[Fe], b: &[Fe], n: usize) -> Trunc {
    let mut out = vec![k.zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    out
}

fn trunc_inv(k: &Field, a: &[Fe], n: usize) -> Option<Trunc> {
    let c0 = k.inv(a.first()?)?;
    let mut out = vec![k.zero(); n];
    if n == 0 {
        return Some(out);
    }
    out[0] = c0.clone();
    for m in 1..n {
        let mut s = k.zero();
        for i in 1..=m.min(a.len() - 1) {
            s = k.add(&s, &k.mul(&a[i], &out[m - i]));
        }
        out[m] = k.neg(&k.mul(&s, &c0));
    }
    Some(out)
}

/// The completion of `F_q(x)` at one place.
#[derive(Clone, Debug)]
pub struct Completion {
    place: Place,
    base: Field,
    residue_field: Field,
    /// Image of `x` in `K[[u]]`, to the length computed so far.
    theta: Trunc,
}

impl Completion {
    pub fn new(base: &Field, place: &Place) -> Result<Self, PlacesError> {
        if !base.is_finite() {
            return Err(PlacesError::InfiniteField);
        }
        let (residue_field, y) = match place {
            Place::Infinity => (base.clone(), base.zero()),
            Place::Finite(pi) if pi.degree() == Some(1) => (base.clone(), base.neg(&pi.coeff(0))),
            Place::Finite(pi) => {
                let k = Field::extension(base, pi.coeffs().to_vec())?;
                let y = k.generator().expect("extension field");
                (k, y)
            }
        };
        Ok(Completion { place: place.clone(), base: base.clone(), residue_field, theta: vec![y] })
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn residue_field(&self) -> &Field {
        &self.residue_field
    }

    /// A constant of `F_q` as an element of `K` (`K` may be `F_q` itself).
    fn to_k(&self, c: &Fe) -> Fe {
        if self.residue_field == self.base { c.clone() } else { self.residue_field.embed(c) }
    }

    /// `pi` with coefficients in `K`.
    fn pi_in_k(&self) -> Vec<Fe> {
        match &self.place {
            Place::Finite(pi) => pi.coeffs().iter().map(|c| self.to_k(c)).collect(),
            Place::Infinity => unreachable!("no finite uniformizer at infinity"),
        }
    }

    fn eval_in_k(&self, p: &Poly, at: &[Fe], n: usize) -> Trunc {
        let k = &self.residue_field;
        let mut acc = vec![k.zero(); n];
        for c in p.coeffs().iter().rev() {
            acc = trunc_mul(k, &acc, at, n);
            if n > 0 {
                acc[0] = k.add(&acc[0], &self.to_k(c));
            }
        }
        acc
    }

    /// Extends `theta` so that it is known modulo `u^n`.
    fn lift(&mut self, n: usize) {
        if self.place.is_infinity() || self.theta.len() >= n {
            return;
        }
        let k = self.residue_field.clone();
        let pi = self.pi_in_k();
        let dpi: Vec<Fe> = pi.iter().enumerate().skip(1).map(|(i, c)| k.mul(c, &k.from_i64(i as i64))).collect();
        let y = self.theta[0].clone();
        let dpi_y = dpi.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, &y), c));
        let inv = k.inv(&dpi_y).expect("irreducible polynomials over finite fields are separable");
        while self.theta.len() < n {
            let m = self.theta.len();
            self.theta.push(k.zero());
            // pi(theta) - u, needed only at u^m
            let mut acc = vec![k.zero(); m + 1];
            for c in pi.iter().rev() {
                acc = trunc_mul(&k, &acc, &self.theta, m + 1);
                acc[0] = k.add(&acc[0], c);
            }
            let mut r = acc[m].clone();
            if m == 1 {
                r = k.sub(&r, &k.one());
            }
            self.theta[m] = k.neg(&k.mul(&r, &inv));
        }
    }

    /// Order of `f` at this place.
    pub fn order(&self, f: &RatFunc) -> Option<i64> {
        (!f.is_zero()).then(|| self.place.order(f))
    }

    /// Laurent expansion of `f` with `prec` digits from its valuation on.
    pub fn expand(&mut self, f: &RatFunc, prec: usize) -> Result<LaurentSeries, PlacesError> {
        if f.field() != &self.base {
            return Err(PlacesError::Kernel(crate::kernel::KernelError::FieldMismatch));
        }
        let k = self.residue_field.clone();
        if f.is_zero() {
            return Ok(LaurentSeries::zero(&k, prec as i64).with_var("u"));
        }
        let (v, num, den) = match &self.place {
            Place::Infinity => {
                let m = f.num().degree().unwrap_or(0);
                let n = f.den().degree().unwrap_or(0);
                let v = n as i64 - m as i64;
                let num: Trunc = f.num().reversed(m).coeffs().to_vec();
                let den: Trunc = f.den().reversed(n).coeffs().to_vec();
                (v, num, den)
            }
            Place::Finite(pi) => {
                let (a, n_unit) = f.num().split_power(pi);
                let (b, d_unit) = f.den().split_power(pi);
                self.lift(prec.max(1));
                let theta = self.theta[..prec.max(1)].to_vec();
                let num = self.eval_in_k(&n_unit, &theta, prec);
                let den = self.eval_in_k(&d_unit, &theta, prec.max(1));
                (a as i64 - b as i64, num, den)
            }
        };
        let inv = trunc_inv(&k, &den, prec).expect("unit part has nonzero constant term");
        let coeffs = trunc_mul(&k, &num, &inv, prec);
        Ok(LaurentSeries::truncated(&k, v, coeffs, v + prec as i64).with_var("u"))
    }

    /// `Tr_{K/F_q}` of a residue-field element.
    pub fn trace(&self, a: &Fe) -> Fe {
        if self.residue_field == self.base {
            a.clone()
        } else {
            self.residue_field.trace_to_base(a)
        }
    }
}

/// A local expansion together with the place it was taken at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub place: Place,
    pub series: LaurentSeries,
}

impl LocalExpansion {
    /// The uniformizer in terms of `x`.
    pub fn uniformizer(&self) -> String {
        match &self.place {
            Place::Finite(pi) => pi.to_string(),
            Place::Infinity => "1/x".to_string(),
        }
    }
}

pub fn local_expand(f: &RatFunc, place: &Place, prec: usize) -> Result<LocalExpansion, PlacesError> {
    let series = Completion::new(f.field(), place)?.expand(f, prec)?;
    Ok(LocalExpansion { place: place.clone(), series })
}
