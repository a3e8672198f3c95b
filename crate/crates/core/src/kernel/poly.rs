//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;

use super::field::{Fe, Field};
use super::KernelError;

/// Coefficient-vector routines shared by [`Poly`] and the extension-field arithmetic.
/// Vectors are low-to-high and callers keep them trimmed where noted.
pub(crate) mod raw {
    use super::{Fe, Field};

    pub fn trim(f: &Field, mut v: Vec<Fe>) -> Vec<Fe> {
        while v.last().is_some_and(|c| f.is_zero(c)) {
            v.pop();
        }
        v
    }

    /// Base-`|f|` digits of `code`, exactly `len` of them.
    pub fn from_code(f: &Field, mut code: u128, len: usize) -> Vec<Fe> {
        let size = f.order().expect("finite field");
        (0..len)
            .map(|_| {
                let digit = code % size;
                code /= size;
                f.element_from_code(digit).unwrap()
            })
            .collect()
    }

    pub fn add(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let n = a.len().max(b.len());
        let z = f.zero();
        let out = (0..n)
            .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        trim(f, out)
    }

    pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let n = a.len().max(b.len());
        let z = f.zero();
        let out = (0..n)
            .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        trim(f, out)
    }

    pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        trim(f, out)
    }

    /// Quotient and remainder; `b` must be trimmed and nonzero.
    pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> (Vec<Fe>, Vec<Fe>) {
        let mut r = trim(f, a.to_vec());
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
        let mut q = vec![f.zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = f.mul(r.last().unwrap(), &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                r[k + i] = f.sub(&r[k + i], &f.mul(&c, bi));
            }
            q[k] = c;
            r.pop();
            r = trim(f, r);
        }
        (trim(f, q), r)
    }

    /// Product modulo a monic modulus; result has length `deg(modulus)`.
    pub fn mul_mod(f: &Field, x: &[Fe], y: &[Fe], modulus: &[Fe]) -> Vec<Fe> {
        let d = modulus.len() - 1;
        let mut prod = vec![f.zero(); (x.len() + y.len()).max(1)];
        for (i, a) in x.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(a, b));
            }
        }
        for k in (d..prod.len()).rev() {
            let c = prod[k].clone();
            if f.is_zero(&c) {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] = f.sub(&prod[k - d + i], &f.mul(&c, &modulus[i]));
            }
            prod[k] = f.zero();
        }
        prod.truncate(d);
        prod.resize(d, f.zero());
        prod
    }

    /// Inverse modulo `modulus` by the extended Euclidean algorithm.
    pub fn inv_mod(f: &Field, x: &[Fe], modulus: &[Fe]) -> Option<Vec<Fe>> {
        let (g, s, _) = xgcd(f, &trim(f, x.to_vec()), modulus);
        if g.len() != 1 {
            return None;
        }
        let c = f.inv(&g[0])?;
        let s: Vec<Fe> = s.iter().map(|t| f.mul(t, &c)).collect();
        Some(divrem(f, &s, &trim(f, modulus.to_vec())).1)
    }

    /// Returns `(g, s, t)` with `s a + t b = g` and `g` monic (or zero).
    pub fn xgcd(f: &Field, a: &[Fe], b: &[Fe]) -> (Vec<Fe>, Vec<Fe>, Vec<Fe>) {
        let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
        let (mut s0, mut s1) = (vec![f.one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(f, &r0, &r1);
            let s2 = sub(f, &s0, &mul(f, &q, &s1));
            let t2 = sub(f, &t0, &mul(f, &q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if let Some(lead) = r0.last().cloned() {
            let inv = f.inv(&lead).unwrap();
            let scale = |v: Vec<Fe>| trim(f, v.iter().map(|c| f.mul(c, &inv)).collect());
            (scale(r0), scale(s0), scale(t0))
        } else {
            (r0, s0, t0)
        }
    }

    pub fn pow_mod(f: &Field, a: &[Fe], mut e: u128, modulus: &[Fe]) -> Vec<Fe> {
        let d = modulus.len() - 1;
        let mut result = vec![f.zero(); d];
        result[0] = f.one();
        let mut base = divrem(f, a, modulus).1;
        base.resize(d, f.zero());
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(f, &result, &base, modulus);
            }
            base = mul_mod(f, &base, &base, modulus);
            e >>= 1;
        }
        trim(f, result)
    }

    fn prime_divisors(mut n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin's irreducibility test over a finite field; `m` monic, trimmed.
    pub fn is_irreducible(f: &Field, m: &[Fe]) -> bool {
        let d = m.len() - 1;
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let q = f.order().expect("finite field");
        let x = vec![f.zero(), f.one()];
        // frob[k] = x^(q^k) mod m
        let mut frob = vec![trim(f, divrem(f, &x, m).1)];
        for _ in 0..d {
            let next = pow_mod(f, frob.last().unwrap(), q, m);
            frob.push(next);
        }
        if !sub(f, &frob[d], &x).is_empty() {
            return false;
        }
        prime_divisors(d).into_iter().all(|r| {
            let h = sub(f, &frob[d / r], &x);
            let (g, _, _) = xgcd(f, &h, m);
            g.len() == 1
        })
    }
}

/// A polynomial with coefficients in `field`, stored low-to-high without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(field: &Field, coeffs: Vec<Fe>) -> Self {
        Poly { coeffs: raw::trim(field, coeffs), field: field.clone() }
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: Fe) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn one(field: &Field) -> Self {
        Poly::constant(field, field.one())
    }

    /// The indeterminate `x`.
    pub fn x(field: &Field) -> Self {
        Poly::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &Field, c: Fe, k: usize) -> Self {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Poly::new(field, v)
    }

    pub fn from_i64s(field: &Field, cs: &[i64]) -> Self {
        Poly::new(field, cs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Fe> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Fe) -> Self {
        Poly::new(&self.field, self.coeffs.iter().map(|a| self.field.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Self {
        Poly { field: self.field.clone(), coeffs: raw::add(&self.field, &self.coeffs, &other.coeffs) }
    }

    pub fn sub(&self, other: &Poly) -> Self {
        Poly { field: self.field.clone(), coeffs: raw::sub(&self.field, &self.coeffs, &other.coeffs) }
    }

    pub fn neg(&self) -> Self {
        Poly::zero(&self.field).sub(self)
    }

    pub fn mul(&self, other: &Poly) -> Self {
        Poly { field: self.field.clone(), coeffs: raw::mul(&self.field, &self.coeffs, &other.coeffs) }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(&self.field), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), KernelError> {
        if d.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        let (q, r) = raw::divrem(&self.field, &self.coeffs, &d.coeffs);
        Ok((Poly::new(&self.field, q), Poly::new(&self.field, r)))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (g, _, _) = raw::xgcd(&self.field, &self.coeffs, &other.coeffs);
        Poly::new(&self.field, g)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| f.mul(c, &f.from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, at: &Fe) -> Fe {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, at), c))
    }

    /// `x^n p(1/x)` for `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut v = self.coeffs.clone();
        v.resize(n + 1, self.field.zero());
        v.reverse();
        Poly::new(&self.field, v)
    }

    /// Multiplicity of `factor` in `self` together with the cofactor. `self` nonzero.
    pub fn split_power(&self, factor: &Poly) -> (u32, Poly) {
        let mut rest = self.clone();
        let mut k = 0;
        while let Some(q) = rest.div_exact(factor) {
            if rest.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        (k, rest)
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            _ => raw::is_irreducible(&self.field, &self.monic().coeffs),
        }
    }

    /// Integer code of the coefficient list, used for the lexicographic place order.
    pub fn code(&self) -> Option<u128> {
        let size = self.field.order()?;
        let mut code = 0u128;
        for c in self.coeffs.iter().rev() {
            code = code.checked_mul(size)?.checked_add(self.field.element_code(c)?)?;
        }
        Some(code)
    }

    /// Degree first, then coefficient code.
    pub fn cmp_deglex(&self, other: &Poly) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.code().cmp(&other.code()))
    }

    /// Parses expressions like `x^2+x+1`, `3x - 2`, `2*x^3`.
    pub fn parse(field: &Field, s: &str) -> Result<Poly, KernelError> {
        let bad = || KernelError::BadPolynomial(s.to_string());
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in cleaned.chars().enumerate() {
            let after_slash = current.ends_with('/');
            if (ch == '+' || ch == '-') && i > 0 && !after_slash {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if ch == '-' && i == 0 {
                negative = true;
            } else if ch == '+' && i == 0 {
            } else {
                current.push(ch);
            }
        }
        terms.push((negative, current));
        let mut result = Poly::zero(field);
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(bad());
            }
            let (coef_str, power) = match term.find('x') {
                None => (term.as_str(), 0usize),
                Some(pos) => {
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                    };
                    (term[..pos].trim_end_matches('*'), power)
                }
            };
            let coef = if coef_str.is_empty() { field.one() } else { field.parse(coef_str)? };
            let coef = if neg { field.neg(&coef) } else { coef };
            result = result.add(&Poly::monomial(field, coef, power));
        }
        Ok(result)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = &self.field;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let (neg, c) = if field.is_negative(c) { (true, field.neg(c)) } else { (false, c.clone()) };
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = field.format(&c);
            match (k, field.is_one(&c)) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{cs}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{cs}x^{k}")?,
            }
        }
        Ok(())
    }
}
