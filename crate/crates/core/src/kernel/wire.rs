//! JSON encodings of scalars and series.
//!
//! Scalars are decimal strings (`"a/b"` over `Q`, element codes over extension
//! fields); bare JSON integers are accepted on input. A series is
//! `{"v": int, "prec": int, "coeffs": [scalar, ...]}`.

use serde::{Deserialize, Serialize};

use super::{Fe, Field, KernelError, LaurentSeries};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Text(String),
    Int(i64),
}

impl ScalarJson {
    pub fn encode(field: &Field, a: &Fe) -> Self {
        ScalarJson::Text(field.format(a))
    }

    pub fn decode(&self, field: &Field) -> Result<Fe, KernelError> {
        match self {
            ScalarJson::Text(s) => field.parse(s),
            ScalarJson::Int(n) => Ok(field.from_i64(*n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub v: i64,
    /// Missing precision is the caller's working precision, raised if needed so the listed digits are known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<i64>,
    pub coeffs: Vec<ScalarJson>,
}

impl SeriesJson {
    pub fn encode(s: &LaurentSeries) -> Self {
        let f = s.field();
        SeriesJson {
            v: s.val_bound(),
            prec: Some(s.prec()),
            coeffs: s.coeffs().iter().map(|c| ScalarJson::encode(f, c)).collect(),
        }
    }

    pub fn decode(&self, field: &Field, default_prec: i64) -> Result<LaurentSeries, KernelError> {
        let coeffs = self.coeffs.iter().map(|c| c.decode(field)).collect::<Result<Vec<_>, _>>()?;
        let prec = self.prec.unwrap_or_else(|| default_prec.max(self.v + coeffs.len() as i64));
        LaurentSeries::new(field, self.v, coeffs, prec)
    }
}
