//! Laurent series known modulo `t^prec`.
//!
//! A [`LaurentSeries`] records only the digits it actually knows. Every operation
//! computes the tightest output precision that is sound for its inputs, so a
//! coefficient at or beyond `prec` is never reported.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{Fe, Field};
use super::laurent_poly::{fmt_terms, LaurentPoly};
use super::KernelError;

/// Valuation of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    /// Every known coefficient vanishes; the true valuation is at least `prec`.
    ZeroToPrecision,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::ZeroToPrecision => None,
        }
    }
}

/// Invariant: either `coeffs` is empty and `v == prec` (zero to precision), or
/// `coeffs[0]` and the last coefficient are nonzero and `v + len(coeffs) <= prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    field: Field,
    var: Arc<str>,
    v: i64,
    coeffs: Vec<Fe>,
    prec: i64,
}

fn default_var() -> Arc<str> {
    Arc::from("t")
}

impl LaurentSeries {
    /// Builds `sum coeffs[i] t^(v+i) + O(t^prec)`; fails if a coefficient sits at or beyond `prec`.
    pub fn new(field: &Field, v: i64, coeffs: Vec<Fe>, prec: i64) -> Result<Self, KernelError> {
        let last_nonzero = coeffs.iter().rposition(|c| !field.is_zero(c));
        if let Some(i) = last_nonzero {
            if v + i as i64 >= prec {
                return Err(KernelError::BeyondPrecision { exponent: v + i as i64, prec });
            }
        }
        Ok(Self::truncated(field, v, coeffs, prec))
    }

    /// Like [`LaurentSeries::new`] but silently drops digits at or beyond `prec`.
    pub fn truncated(field: &Field, v: i64, mut coeffs: Vec<Fe>, prec: i64) -> Self {
        let keep = (prec - v).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        let mut s = LaurentSeries { field: field.clone(), var: default_var(), v, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero(field: &Field, prec: i64) -> Self {
        LaurentSeries { field: field.clone(), var: default_var(), v: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(field: &Field, prec: i64) -> Self {
        Self::truncated(field, 0, vec![field.one()], prec)
    }

    pub fn monomial(field: &Field, c: Fe, e: i64, prec: i64) -> Self {
        Self::truncated(field, e, vec![c], prec)
    }

    pub fn from_poly(p: &LaurentPoly, prec: i64) -> Self {
        let (v, coeffs) = p.raw();
        Self::truncated(p.field(), v, coeffs.to_vec(), prec)
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = Arc::from(var);
        self
    }

    fn normalize(&mut self) {
        let f = &self.field;
        while self.coeffs.last().is_some_and(|c| f.is_zero(c)) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| f.is_zero(c)).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.v += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.v = self.prec;
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn val(&self) -> Valuation {
        if self.coeffs.is_empty() {
            Valuation::ZeroToPrecision
        } else {
            Valuation::Finite(self.v)
        }
    }

    /// Lower bound on the true valuation: the valuation, or `prec` when zero to precision.
    pub fn val_bound(&self) -> i64 {
        self.v
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of known digits past the valuation.
    pub fn relative_prec(&self) -> i64 {
        self.prec - self.v
    }

    /// Coefficient of `t^e`, `None` if `e >= prec`.
    pub fn coeff(&self, e: i64) -> Option<Fe> {
        if e >= self.prec {
            return None;
        }
        let i = e - self.v;
        Some(if i < 0 {
            self.field.zero()
        } else {
            self.coeffs.get(i as usize).cloned().unwrap_or_else(|| self.field.zero())
        })
    }

    /// Stored coefficients starting at the valuation.
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// The known digits as an exact Laurent polynomial.
    pub fn known_part(&self) -> LaurentPoly {
        LaurentPoly::new(&self.field, self.v, self.coeffs.clone())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let p = prec.min(self.prec);
        Self::truncated(&self.field, self.v, self.coeffs.clone(), p).with_var(&self.var)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.v += k;
        s.prec += k;
        s
    }

    pub fn scale(&self, c: &Fe) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|a| f.mul(a, c)).collect();
        Self::truncated(f, self.v, coeffs, self.prec).with_var(&self.var)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), KernelError> {
        if self.field != other.field {
            return Err(KernelError::FieldMismatch);
        }
        if self.var != other.var {
            return Err(KernelError::VariableMismatch(self.var.to_string(), other.var.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, KernelError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let prec = self.prec.min(other.prec);
        let lo = self.v.min(other.v).min(prec);
        let end = |x: &Self| x.v + x.coeffs.len() as i64;
        let hi = end(self).max(end(other)).min(prec);
        let coeffs = (lo..hi)
            .map(|e| {
                let a = self.coeff(e).unwrap();
                let b = other.coeff(e).unwrap();
                f.add(&a, &b)
            })
            .collect::<Vec<_>>();
        Ok(Self::truncated(f, lo, coeffs, prec).with_var(&self.var))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, KernelError> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let f = &self.field;
        let mut s = self.clone();
        s.coeffs = self.coeffs.iter().map(|c| f.neg(c)).collect();
        s
    }

    /// Product with precision `min(a.prec + b.v, b.prec + a.v)`, where a series that is
    /// zero to precision contributes `v = prec`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, KernelError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let prec = (self.prec.saturating_add(other.v)).min(other.prec.saturating_add(self.v));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero(f, prec).with_var(&self.var));
        }
        let v = self.v + other.v;
        let len = (prec - v).clamp(0, (self.coeffs.len() + other.coeffs.len() - 1) as i64) as usize;
        let mut out = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Ok(Self::truncated(f, v, out, prec).with_var(&self.var))
    }

    /// Inverse with valuation `-v` and precision `prec - 2v`.
    pub fn inv(&self) -> Result<Self, KernelError> {
        let f = &self.field;
        if self.coeffs.is_empty() {
            return Err(KernelError::ZeroSeries);
        }
        let r = self.relative_prec();
        if r <= 0 {
            return Err(KernelError::EmptyPrecisionWindow);
        }
        let unit = LaurentPoly::new(f, 0, self.coeffs.clone());
        let inv = unit.unit_inverse_below(r).ok_or(KernelError::ZeroSeries)?;
        let (_, digits) = inv.raw();
        Ok(Self::truncated(f, -self.v, digits.to_vec(), self.prec - 2 * self.v).with_var(&self.var))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, KernelError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Result<Self, KernelError> {
        let mut acc = Self::one(&self.field, i64::MAX / 4).with_var(&self.var);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Applies `embed` to every coefficient, landing in `target`.
    pub fn map_field(&self, target: &Field, embed: impl Fn(&Fe) -> Fe) -> Self {
        Self::truncated(target, self.v, self.coeffs.iter().map(embed).collect(), self.prec)
            .with_var(&self.var)
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: Self) -> LaurentSeries {
        self.checked_add(rhs).expect("incompatible series")
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: Self) -> LaurentSeries {
        self.checked_sub(rhs).expect("incompatible series")
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: Self) -> LaurentSeries {
        self.checked_mul(rhs).expect("incompatible series")
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.neg_ref()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| (self.v + i as i64, c.clone()));
        if !self.coeffs.is_empty() {
            fmt_terms(f, &self.field, &self.var, terms)?;
            write!(f, "+")?;
        }
        write!(f, "O({}^{})", self.var, self.prec)
    }
}
