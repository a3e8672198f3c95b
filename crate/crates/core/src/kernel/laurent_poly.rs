//! Exact Laurent polynomials `sum c_i t^i` with finitely many terms.

use std::fmt;

use super::field::{Fe, Field};

/// Invariant: `coeffs` is empty (the zero polynomial) or has nonzero first and last entries;
/// `coeffs[i]` is the coefficient of `t^(v + i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: Field,
    v: i64,
    coeffs: Vec<Fe>,
}

impl LaurentPoly {
    pub fn new(field: &Field, v: i64, coeffs: Vec<Fe>) -> Self {
        let mut p = LaurentPoly { field: field.clone(), v, coeffs };
        p.normalize();
        p
    }

    pub fn zero(field: &Field) -> Self {
        LaurentPoly { field: field.clone(), v: 0, coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::monomial(field, field.one(), 0)
    }

    pub fn monomial(field: &Field, c: Fe, e: i64) -> Self {
        LaurentPoly::new(field, e, vec![c])
    }

    /// `t^e`.
    pub fn t_pow(field: &Field, e: i64) -> Self {
        Self::monomial(field, field.one(), e)
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
            self.v = 0;
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn val(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.v)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn top(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.v + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> Fe {
        let i = e - self.v;
        if i < 0 {
            return self.field.zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Fe)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| (self.v + i as i64, c))
    }

    /// Raw coefficient window `(offset, coefficients)`.
    pub fn raw(&self) -> (i64, &[Fe]) {
        (self.v, &self.coeffs)
    }

    pub fn is_unit_power_series(&self) -> bool {
        self.val() == Some(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let f = &self.field;
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { other.neg() } else { other.clone() };
        }
        let lo = self.v.min(other.v);
        let hi = self.top().unwrap().max(other.top().unwrap());
        let coeffs = (lo..=hi)
            .map(|e| {
                let (a, b) = (self.coeff(e), other.coeff(e));
                if subtract { f.sub(&a, &b) } else { f.add(&a, &b) }
            })
            .collect();
        LaurentPoly::new(f, lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        LaurentPoly { field: f.clone(), v: self.v, coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn scale(&self, c: &Fe) -> Self {
        let f = &self.field;
        LaurentPoly::new(f, self.v, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut p = self.clone();
        if !p.is_zero() {
            p.v += k;
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_below(other, i64::MAX)
    }

    /// Product with every exponent `>= bound` discarded.
    pub fn mul_below(&self, other: &Self, bound: i64) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero(f);
        }
        let v = self.v + other.v;
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = if bound == i64::MAX { full } else { (bound - v).clamp(0, full as i64) as usize };
        let mut out = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        LaurentPoly::new(f, v, out)
    }

    /// The part with exponents `< e` ("reduction modulo `t^e k[[t]]`").
    pub fn below(&self, e: i64) -> Self {
        if self.is_zero() || e <= self.v {
            return LaurentPoly::zero(&self.field);
        }
        let keep = ((e - self.v) as usize).min(self.coeffs.len());
        LaurentPoly::new(&self.field, self.v, self.coeffs[..keep].to_vec())
    }

    /// The part with exponents `>= e`.
    pub fn at_or_above(&self, e: i64) -> Self {
        self.sub(&self.below(e))
    }

    /// Inverse of a unit power series modulo `t^n` (requires `val == 0`).
    pub fn unit_inverse_below(&self, n: i64) -> Option<Self> {
        let f = &self.field;
        if self.val() != Some(0) {
            return None;
        }
        let n = n.max(0) as usize;
        let b0 = f.inv(&self.coeffs[0])?;
        let mut out: Vec<Fe> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(b0.clone());
                continue;
            }
            let mut acc = f.zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc = f.add(&acc, &f.mul(&self.coeffs[i], &out[k - i]));
            }
            out.push(f.neg(&f.mul(&b0, &acc)));
        }
        Some(LaurentPoly::new(f, 0, out))
    }

    /// Entrywise image under a field embedding `sub -> self.field`.
    pub fn map_field(&self, target: &Field, embed: impl Fn(&Fe) -> Fe) -> Self {
        LaurentPoly::new(target, self.v, self.coeffs.iter().map(embed).collect())
    }
}

pub(crate) fn fmt_terms(
    f: &mut fmt::Formatter<'_>,
    field: &Field,
    var: &str,
    terms: impl Iterator<Item = (i64, Fe)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if !first {
            write!(f, "+")?;
        }
        first = false;
        let cs = field.format(&c);
        let one = field.is_one(&c);
        match (e, one) {
            (0, _) => write!(f, "{cs}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{cs}*{var}")?,
            (_, true) => write!(f, "{var}^{e}")?,
            (_, false) => write!(f, "{cs}*{var}^{e}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.field, "t", self.terms().map(|(e, c)| (e, c.clone())))
    }
}
