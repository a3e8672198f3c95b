//! Residues of differentials `f dg` on the projective line.

use super::{enumerate_places, finite_support, Completion, Place, PlacesError, RatFunc};
use serde_json::{json, Map, Value};

use crate::kernel::{Fe, Field, Poly};

/// The function `h` with `f dg = h du` up to the change of variable to `u`:
/// `f g' / pi'` at a finite place, `-x^2 f g'` at infinity.
fn differential_coefficient(f: &RatFunc, g: &RatFunc, place: &Place) -> RatFunc {
    let field = f.field();
    let h = f.mul(&g.derivative());
    match place {
        Place::Finite(pi) => h.div(&RatFunc::from_poly(pi.derivative())).expect("separable"),
        Place::Infinity => {
            let x2 = Poly::parse(field, "x^2").unwrap();
            h.mul(&RatFunc::from_poly(x2.neg()))
        }
    }
}

pub(crate) fn residue_in(c: &mut Completion, f: &RatFunc, g: &RatFunc) -> Result<Fe, PlacesError> {
    let base = f.field().clone();
    let h = differential_coefficient(f, g, c.place());
    let Some(v) = c.order(&h) else {
        return Ok(base.zero());
    };
    if v >= 0 {
        return Ok(base.zero());
    }
    let s = c.expand(&h, (-v) as usize)?;
    let top = s.coeff(-1).expect("expanded through u^-1");
    Ok(c.trace(&top))
}

/// `res_p(f dg)` in `F_q`.
pub fn residue(f: &RatFunc, g: &RatFunc, place: &Place) -> Result<Fe, PlacesError> {
    residue_in(&mut Completion::new(f.field(), place)?, f, g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSum {
    /// Every place of degree `<= degree` and infinity, finite places first.
    pub per_place: Vec<(Place, Fe)>,
    pub sum: Fe,
    /// Largest degree of a pole of `f` or `g`.
    pub degree: usize,
}

impl ResidueSum {
    /// `{"sum": c, "per_place": {"<place>": c, ...}}` with elements as their integer codes.
    pub fn to_json(&self, field: &Field) -> Value {
        let code = |x: &Fe| match field.element_code(x) {
            Some(c) => json!(c as u64),
            None => json!(field.format(x)),
        };
        let per_place: Map<String, Value> = self.per_place.iter().map(|(p, x)| (p.to_string(), code(x))).collect();
        json!({"sum": code(&self.sum), "per_place": per_place})
    }
}

/// Residues of `f dg` at every place of degree up to the largest pole degree, and their sum.
pub fn residue_sum(f: &RatFunc, g: &RatFunc) -> Result<ResidueSum, PlacesError> {
    let field = f.field().clone();
    let den = f.den().mul(g.den());
    let limit = den.degree().unwrap_or(0).max(1);
    let (_, degree) = finite_support(&den, limit)?;
    let degree = degree.max(1);
    let mut places = enumerate_places(&field, degree)?;
    places.rotate_left(1);
    let mut per_place = Vec::with_capacity(places.len());
    let mut sum = field.zero();
    for p in places {
        let r = residue(f, g, &p)?;
        sum = field.add(&sum, &r);
        per_place.push((p, r));
    }
    Ok(ResidueSum { per_place, sum, degree })
}
