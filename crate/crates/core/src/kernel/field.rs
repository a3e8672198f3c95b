//! Exact scalar fields: prime fields, towers of finite extensions, and the rationals.
//!
//! A [`Field`] is a cheap-to-clone handle describing the arithmetic; elements are
//! plain [`Fe`] values and every operation goes through the field that owns them.
//! Mixing elements of different fields is a programming error and panics.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::poly::raw;
use super::KernelError;

/// An element of some [`Field`].
///
/// Prime-field elements are residues in `[0, p)`, rationals are reduced fractions
/// and extension elements are coefficient vectors of length exactly `d` over the
/// base field (the residue of a polynomial modulo the defining modulus).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fe {
    Mod(u64),
    Rat(Box<BigRational>),
    Ext(Vec<Fe>),
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Kind {
    Prime(u64),
    Rational,
    Ext {
        base: Field,
        /// Monic modulus, low-to-high coefficients, length `degree + 1`.
        modulus: Vec<Fe>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Field(Arc<Kind>);

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut e) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, KernelError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(KernelError::NotPrime(p));
        }
        Ok(Field(Arc::new(Kind::Prime(p))))
    }

    pub fn rationals() -> Self {
        Field(Arc::new(Kind::Rational))
    }

    /// The field `base[y]/(modulus)`; the modulus must be monic and irreducible.
    pub fn extension(base: &Field, modulus: Vec<Fe>) -> Result<Self, KernelError> {
        let modulus = raw::trim(base, modulus);
        if modulus.len() < 2 {
            return Err(KernelError::BadModulus("degree must be at least 1".into()));
        }
        if !base.is_one(modulus.last().unwrap()) {
            return Err(KernelError::BadModulus("modulus must be monic".into()));
        }
        if base.order().is_none() {
            return Err(KernelError::BadModulus(
                "extensions are only supported over finite fields".into(),
            ));
        }
        if !raw::is_irreducible(base, &modulus) {
            return Err(KernelError::BadModulus("modulus is reducible".into()));
        }
        Ok(Field(Arc::new(Kind::Ext { base: base.clone(), modulus })))
    }

    /// Degree `d` extension of a finite `base`, using the least monic irreducible
    /// modulus in the order of [`Field::element_code`]-encoded coefficient lists.
    pub fn least_extension(base: &Field, d: usize) -> Result<Self, KernelError> {
        let size = base.order().ok_or_else(|| {
            KernelError::BadModulus("extensions are only supported over finite fields".into())
        })?;
        let total = size
            .checked_pow(d as u32)
            .ok_or(KernelError::FieldTooLarge)?;
        for code in 0..total {
            let mut modulus = raw::from_code(base, code, d);
            modulus.push(base.one());
            if raw::is_irreducible(base, &modulus) {
                return Ok(Field(Arc::new(Kind::Ext { base: base.clone(), modulus })));
            }
        }
        Err(KernelError::BadModulus(format!("no irreducible polynomial of degree {d}")))
    }

    /// `F_q` for a prime power `q`; non-prime `q = p^e` is built as the least degree-`e`
    /// extension of `F_p`.
    pub fn gf(q: u64) -> Result<Self, KernelError> {
        let (p, e) = prime_power(q).ok_or(KernelError::NotPrimePower(q))?;
        let fp = Field::prime(p)?;
        if e == 1 {
            Ok(fp)
        } else {
            Field::least_extension(&fp, e as usize)
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::Prime(p) => *p,
            Kind::Rational => 0,
            Kind::Ext { base, .. } => base.characteristic(),
        }
    }

    /// Number of elements, `None` for the rationals or when it exceeds `u128`.
    pub fn order(&self) -> Option<u128> {
        match &*self.0 {
            Kind::Prime(p) => Some(*p as u128),
            Kind::Rational => None,
            Kind::Ext { base, modulus } => base.order()?.checked_pow(modulus.len() as u32 - 1),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(&*self.0, Kind::Rational)
    }

    /// Returns `p` when this is a prime field.
    pub fn prime_modulus(&self) -> Option<u64> {
        match &*self.0 {
            Kind::Prime(p) => Some(*p),
            _ => None,
        }
    }

    /// Degree over the immediate base field (1 for prime fields and `Q`).
    pub fn degree(&self) -> usize {
        match &*self.0 {
            Kind::Ext { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            Kind::Ext { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&[Fe]> {
        match &*self.0 {
            Kind::Ext { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn zero(&self) -> Fe {
        match &*self.0 {
            Kind::Prime(_) => Fe::Mod(0),
            Kind::Rational => Fe::Rat(Box::new(BigRational::zero())),
            Kind::Ext { base, modulus } => Fe::Ext(vec![base.zero(); modulus.len() - 1]),
        }
    }

    pub fn one(&self) -> Fe {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Fe {
        match &*self.0 {
            Kind::Prime(p) => Fe::Mod(n.rem_euclid(*p as i64) as u64),
            Kind::Rational => Fe::Rat(Box::new(BigRational::from_integer(BigInt::from(n)))),
            Kind::Ext { base, modulus } => {
                let mut v = vec![base.zero(); modulus.len() - 1];
                v[0] = base.from_i64(n);
                Fe::Ext(v)
            }
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Fe, KernelError> {
        match &*self.0 {
            Kind::Rational => Ok(Fe::Rat(Box::new(r.clone()))),
            _ => {
                let c = self.characteristic() as i64;
                let reduce = |n: &BigInt| -> i64 {
                    n.mod_floor(&BigInt::from(c)).to_i64().expect("residue fits in i64")
                };
                let den = self.from_i64(reduce(r.denom()));
                let inv = self.inv(&den).ok_or(KernelError::DivisionByZero)?;
                Ok(self.mul(&self.from_i64(reduce(r.numer())), &inv))
            }
        }
    }

    /// Embeds an element of the immediate base field as a constant.
    pub fn embed(&self, a: &Fe) -> Fe {
        match &*self.0 {
            Kind::Ext { base, modulus } => {
                let mut v = vec![base.zero(); modulus.len() - 1];
                v[0] = a.clone();
                Fe::Ext(v)
            }
            _ => a.clone(),
        }
    }

    /// Embeds an element of any subfield in this field's tower (including itself).
    pub fn embed_from(&self, sub: &Field, a: &Fe) -> Option<Fe> {
        if sub == self {
            return Some(a.clone());
        }
        let base = self.base()?;
        Some(self.embed(&base.embed_from(sub, a)?))
    }

    /// Class of the adjoined root `y` in `base[y]/(modulus)`.
    pub fn generator(&self) -> Option<Fe> {
        match &*self.0 {
            Kind::Ext { base, modulus } => {
                let d = modulus.len() - 1;
                if d == 1 {
                    return Some(Fe::Ext(vec![base.neg(&modulus[0])]));
                }
                let mut v = vec![base.zero(); d];
                v[1] = base.one();
                Some(Fe::Ext(v))
            }
            _ => None,
        }
    }

    /// Coordinates over the immediate base field in the power basis `1, y, ..., y^(d-1)`.
    pub fn coords(&self, a: &Fe) -> Vec<Fe> {
        match a {
            Fe::Ext(v) => v.clone(),
            other => vec![other.clone()],
        }
    }

    pub fn from_coords(&self, coords: Vec<Fe>) -> Fe {
        match &*self.0 {
            Kind::Ext { modulus, .. } => {
                assert_eq!(coords.len(), modulus.len() - 1, "wrong coordinate count");
                Fe::Ext(coords)
            }
            _ => {
                assert_eq!(coords.len(), 1, "wrong coordinate count");
                coords.into_iter().next().unwrap()
            }
        }
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        match a {
            Fe::Mod(x) => *x == 0,
            Fe::Rat(r) => r.is_zero(),
            Fe::Ext(v) => {
                let base = self.base().expect("extension element in non-extension field");
                v.iter().all(|c| base.is_zero(c))
            }
        }
    }

    pub fn is_one(&self, a: &Fe) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        match (&*self.0, a, b) {
            (Kind::Prime(p), Fe::Mod(x), Fe::Mod(y)) => {
                let s = x + y;
                Fe::Mod(if s >= *p { s - p } else { s })
            }
            (Kind::Rational, Fe::Rat(x), Fe::Rat(y)) => Fe::Rat(Box::new(&**x + &**y)),
            (Kind::Ext { base, .. }, Fe::Ext(x), Fe::Ext(y)) => {
                Fe::Ext(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            _ => panic!("operands do not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        match (&*self.0, a) {
            (Kind::Prime(p), Fe::Mod(x)) => Fe::Mod(if *x == 0 { 0 } else { p - x }),
            (Kind::Rational, Fe::Rat(x)) => Fe::Rat(Box::new(-&**x)),
            (Kind::Ext { base, .. }, Fe::Ext(x)) => Fe::Ext(x.iter().map(|u| base.neg(u)).collect()),
            _ => panic!("operand does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        match (&*self.0, a, b) {
            (Kind::Prime(p), Fe::Mod(x), Fe::Mod(y)) => Fe::Mod(if x >= y { x - y } else { x + p - y }),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        match (&*self.0, a, b) {
            (Kind::Prime(p), Fe::Mod(x), Fe::Mod(y)) => Fe::Mod(x * y % p),
            (Kind::Rational, Fe::Rat(x), Fe::Rat(y)) => Fe::Rat(Box::new(&**x * &**y)),
            (Kind::Ext { base, modulus }, Fe::Ext(x), Fe::Ext(y)) => {
                Fe::Ext(raw::mul_mod(base, x, y, modulus))
            }
            _ => panic!("operands do not belong to {self}"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Fe) -> Option<Fe> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (&*self.0, a) {
            (Kind::Prime(p), Fe::Mod(x)) => Fe::Mod(pow_mod(*x, p - 2, *p)),
            (Kind::Rational, Fe::Rat(x)) => Fe::Rat(Box::new(x.recip())),
            (Kind::Ext { base, modulus }, Fe::Ext(x)) => {
                let d = modulus.len() - 1;
                let mut inv = raw::inv_mod(base, x, modulus)?;
                inv.resize(d, base.zero());
                Fe::Ext(inv)
            }
            _ => panic!("operand does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &Fe, b: &Fe) -> Option<Fe> {
        Some(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Fe, mut e: u128) -> Fe {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Trace down to the immediate base field, computed as the trace of the
    /// multiplication-by-`a` matrix in the power basis.
    pub fn trace_to_base(&self, a: &Fe) -> Fe {
        match &*self.0 {
            Kind::Ext { base, modulus } => {
                let d = modulus.len() - 1;
                let mut basis_vec = vec![base.zero(); d];
                let mut tr = base.zero();
                let x = match a {
                    Fe::Ext(x) => x,
                    _ => panic!("operand does not belong to {self}"),
                };
                for i in 0..d {
                    basis_vec.iter_mut().for_each(|c| *c = base.zero());
                    basis_vec[i] = base.one();
                    let col = raw::mul_mod(base, x, &basis_vec, modulus);
                    tr = base.add(&tr, &col[i]);
                }
                tr
            }
            _ => a.clone(),
        }
    }

    /// Integer code of a finite-field element: the residue itself for prime fields,
    /// `sum code(c_i) * |base|^i` for extensions.
    pub fn element_code(&self, a: &Fe) -> Option<u128> {
        match (&*self.0, a) {
            (Kind::Prime(_), Fe::Mod(x)) => Some(*x as u128),
            (Kind::Ext { base, .. }, Fe::Ext(v)) => {
                let size = base.order()?;
                let mut code = 0u128;
                for c in v.iter().rev() {
                    code = code.checked_mul(size)?.checked_add(base.element_code(c)?)?;
                }
                Some(code)
            }
            _ => None,
        }
    }

    pub fn element_from_code(&self, code: u128) -> Option<Fe> {
        match &*self.0 {
            Kind::Prime(p) => (code < *p as u128).then_some(Fe::Mod(code as u64)),
            Kind::Rational => None,
            Kind::Ext { base, modulus } => {
                if code >= self.order()? {
                    return None;
                }
                Some(Fe::Ext(raw::from_code(base, code, modulus.len() - 1)))
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        match &*self.0 {
            Kind::Prime(p) => Fe::Mod(rng.gen_range(0..*p)),
            Kind::Rational => {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=9);
                Fe::Rat(Box::new(BigRational::new(n.into(), d.into())))
            }
            Kind::Ext { base, modulus } => {
                Fe::Ext((0..modulus.len() - 1).map(|_| base.random(rng)).collect())
            }
        }
    }

    /// All elements of a finite field in code order. Panics for infinite fields.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let order = self.order().expect("enumerating an infinite field");
        (0..order).map(move |c| self.element_from_code(c).unwrap())
    }

    /// Decimal rendering: residues for `F_p`, `a/b` for `Q`, element codes for extensions.
    pub fn format(&self, a: &Fe) -> String {
        match (&*self.0, a) {
            (Kind::Rational, Fe::Rat(r)) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            _ => self
                .element_code(a)
                .map(|c| c.to_string())
                .unwrap_or_else(|| format!("{a:?}")),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Fe, KernelError> {
        let s = s.trim();
        let bad = || KernelError::BadScalar(s.to_string());
        match &*self.0 {
            Kind::Ext { .. } => {
                let code: u128 = s.parse().map_err(|_| bad())?;
                self.element_from_code(code).ok_or_else(bad)
            }
            _ => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                let r = BigRational::new(num, den);
                self.from_rational(&r).map_err(|_| bad())
            }
        }
    }

    /// Sign-aware small integer view, used when printing polynomials over `Q`.
    pub(crate) fn is_negative(&self, a: &Fe) -> bool {
        matches!(a, Fe::Rat(r) if r.is_negative())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Prime(p) => write!(f, "F_{p}"),
            Kind::Rational => write!(f, "Q"),
            Kind::Ext { base, modulus } => {
                let d = modulus.len() - 1;
                write!(f, "{base}[y]/(deg {d} modulus ")?;
                let codes: Vec<String> = modulus.iter().map(|c| base.format(c)).collect();
                write!(f, "[{}])", codes.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.add(&Fe::Mod(5), &Fe::Mod(4)), Fe::Mod(2));
        assert_eq!(f.inv(&Fe::Mod(3)), Some(Fe::Mod(5)));
        assert_eq!(f.inv(&Fe::Mod(0)), None);
        assert_eq!(f.from_i64(-1), Fe::Mod(6));
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn gf_conventions() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(12), None);
        let f8 = Field::gf(8).unwrap();
        let codes: Vec<String> = f8.modulus().unwrap().iter().map(|c| format!("{c:?}")).collect();
        // x^3 + x + 1 precedes x^3 + x^2 + 1
        assert_eq!(codes, ["Mod(1)", "Mod(1)", "Mod(0)", "Mod(1)"]);
        assert_eq!(f8.order(), Some(8));
        let f4 = Field::gf(4).unwrap();
        let y = f4.generator().unwrap();
        // y^2 = y + 1
        assert_eq!(f4.mul(&y, &y), f4.add(&y, &f4.one()));
    }

    #[test]
    fn every_nonzero_element_inverts() {
        for q in [2, 3, 4, 8, 9, 25] {
            let f = Field::gf(q).unwrap();
            for a in f.elements().filter(|a| !f.is_zero(a)) {
                let inv = f.inv(&a).unwrap();
                assert!(f.is_one(&f.mul(&a, &inv)), "q={q}");
            }
        }
    }

    #[test]
    fn trace_of_f4_generator_is_one() {
        let f4 = Field::gf(4).unwrap();
        let y = f4.generator().unwrap();
        assert_eq!(f4.trace_to_base(&y), Fe::Mod(1));
        assert_eq!(f4.trace_to_base(&f4.one()), Fe::Mod(0));
    }

    #[test]
    fn scalar_parsing() {
        let q = Field::rationals();
        assert_eq!(q.format(&q.parse("-4/6").unwrap()), "-2/3");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("1/2").unwrap(), Fe::Mod(3));
        assert_eq!(f5.parse("-1").unwrap(), Fe::Mod(4));
        let f9 = Field::gf(9).unwrap();
        assert_eq!(f9.format(&f9.parse("7").unwrap()), "7");
        assert!(f9.parse("9").is_err());
    }
}
