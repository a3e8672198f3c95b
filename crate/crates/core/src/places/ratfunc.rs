//! Rational functions in `F_q(x)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::wire::ScalarJson;
use crate::kernel::{Field, KernelError, Poly};

/// `num / den` in lowest terms with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, KernelError> {
        if den.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        let f = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one(&f) });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lead = f.inv(den.leading().unwrap()).unwrap();
        Ok(RatFunc { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_poly(p: Poly) -> Self {
        let f = p.field().clone();
        RatFunc { num: p, den: Poly::one(&f) }
    }

    pub fn x(field: &Field) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field().neg(&self.field().one())))
    }

    pub fn scale(&self, c: &crate::kernel::Fe) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self, KernelError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, KernelError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `d/dx`.
    pub fn derivative(&self) -> Self {
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn to_json(&self) -> RatFuncJson {
        let f = self.field();
        let enc = |p: &Poly| p.coeffs().iter().map(|c| ScalarJson::encode(f, c)).collect();
        RatFuncJson { num: enc(&self.num), den: enc(&self.den) }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `{"num": [c0, c1, ...], "den": [...]}`, coefficients low to high.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub num: Vec<ScalarJson>,
    #[serde(default = "one_coeffs")]
    pub den: Vec<ScalarJson>,
}

fn one_coeffs() -> Vec<ScalarJson> {
    vec![ScalarJson::Int(1)]
}

impl RatFuncJson {
    pub fn decode(&self, field: &Field) -> Result<RatFunc, KernelError> {
        let dec = |v: &[ScalarJson]| -> Result<Poly, KernelError> {
            Ok(Poly::new(field, v.iter().map(|c| c.decode(field)).collect::<Result<Vec<_>, _>>()?))
        };
        RatFunc::new(dec(&self.num)?, dec(&self.den)?)
    }
}
