//! Monomial lattices in the 2-Tate space `k((t1))((t2))`.
//!
//! A staircase lattice is `L = (+)_j t2^j M_j` with each layer `M_j` one of `0`,
//! `t1^a k[[t1]]` or `k((t1))`. Stability under `t2` forces the layers to grow
//! with `j`; below `j0` they vanish and from `j1` on they are everything.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layer {
    Zero,
    /// `t1^a k[[t1]]`.
    Lat(i64),
    Full,
}

impl Layer {
    fn cmp_key(self) -> (u8, i64) {
        match self {
            Layer::Zero => (0, 0),
            Layer::Lat(a) => (1, -a),
            Layer::Full => (2, 0),
        }
    }

    /// Inclusion order of subspaces of `k((t1))`.
    pub fn leq(self, other: Layer) -> bool {
        self.cmp_key() <= other.cmp_key()
    }

    pub fn join(self, other: Layer) -> Layer {
        if self.leq(other) { other } else { self }
    }

    pub fn meet(self, other: Layer) -> Layer {
        if self.leq(other) { self } else { other }
    }
}

impl PartialOrd for Layer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Layer {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key().cmp(&other.cmp_key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Tate2Error {
    #[error("layers must grow with j: layer {0} exceeds layer {1}")]
    NotMonotone(i64, i64),
    #[error("j0 = {0} exceeds j1 = {1}")]
    BadBounds(i64, i64),
    #[error("layer {0} is missing")]
    MissingLayer(i64),
    #[error("layer {0} contradicts the bounds j0/j1")]
    LayerOutsideBounds(i64),
    #[error("bad layer key {0:?}")]
    BadKey(String),
    #[error("the first staircase is not contained in the second")]
    NotNested,
}

/// Invariant: `layers` covers exactly `j0..j1`, `layers[j0]` is not `Zero`,
/// the last layer is not `Full`, and the layers are nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Staircase2 {
    j0: i64,
    layers: Vec<Layer>,
}

impl Staircase2 {
    /// `k((t1))[[t2]]`.
    pub fn standard() -> Self {
        Staircase2 { j0: 0, layers: Vec::new() }
    }

    /// `t2^s k((t1))[[t2]]`.
    pub fn standard_shift(s: i64) -> Self {
        Staircase2 { j0: s, layers: Vec::new() }
    }

    /// Layers for `j = start, start+1, ...`; `Zero` before and `Full` after.
    pub fn from_layers(start: i64, layers: &[Layer]) -> Result<Self, Tate2Error> {
        for (k, w) in layers.windows(2).enumerate() {
            if !w[0].leq(w[1]) {
                return Err(Tate2Error::NotMonotone(start + k as i64, start + k as i64 + 1));
            }
        }
        let lead = layers.iter().take_while(|l| **l == Layer::Zero).count();
        let tail = layers.iter().rev().take_while(|l| **l == Layer::Full).count();
        let end = layers.len().saturating_sub(tail).max(lead);
        Ok(Staircase2 { j0: start + lead as i64, layers: layers[lead..end].to_vec() })
    }

    pub fn j0(&self) -> i64 {
        self.j0
    }

    pub fn j1(&self) -> i64 {
        self.j0 + self.layers.len() as i64
    }

    pub fn layer(&self, j: i64) -> Layer {
        if j < self.j0 {
            Layer::Zero
        } else if j >= self.j1() {
            Layer::Full
        } else {
            self.layers[(j - self.j0) as usize]
        }
    }

    pub fn shift(&self, s: i64) -> Self {
        Staircase2 { j0: self.j0 + s, layers: self.layers.clone() }
    }

    fn span(&self, other: &Self) -> (i64, i64) {
        (self.j0.min(other.j0), self.j1().max(other.j1()))
    }

    fn pointwise(&self, other: &Self, op: impl Fn(Layer, Layer) -> Layer) -> Self {
        let (lo, hi) = self.span(other);
        let layers: Vec<Layer> = (lo..hi).map(|j| op(self.layer(j), other.layer(j))).collect();
        Self::from_layers(lo, &layers).expect("pointwise operations preserve monotonicity")
    }

    pub fn join(&self, other: &Self) -> Self {
        self.pointwise(other, Layer::join)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.pointwise(other, Layer::meet)
    }

    pub fn leq(&self, other: &Self) -> bool {
        let (lo, hi) = self.span(other);
        (lo..hi).all(|j| self.layer(j).leq(other.layer(j)))
    }

    /// `A = max |a|` over the lattice layers.
    pub fn max_exponent(&self) -> i64 {
        self.layers
            .iter()
            .filter_map(|l| match l {
                Layer::Lat(a) => Some(a.abs()),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Staircase2Json {
        Staircase2Json {
            j0: self.j0,
            j1: self.j1(),
            profile: (self.j0..self.j1()).map(|j| (j.to_string(), self.layer(j))).collect(),
        }
    }
}

/// The layer `M_j / M'_j` of a quotient of staircases, as a 1-Tate object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OneTateDescriptor {
    pub finite_dim: u64,
    pub pro: bool,
    pub ind: bool,
}

impl OneTateDescriptor {
    pub fn kind(&self) -> &'static str {
        match (self.finite_dim > 0, self.pro, self.ind) {
            (false, false, false) => "zero",
            (true, false, false) => "finite",
            (_, true, false) => "pro",
            (_, false, true) => "ind",
            (_, true, true) => "tate",
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind() == "zero"
    }

    /// Layer quotient `sup / sub`; `None` unless `sub <= sup`.
    pub fn of_layers(sub: Layer, sup: Layer) -> Option<Self> {
        if !sub.leq(sup) {
            return None;
        }
        let d = |finite_dim, pro, ind| Some(OneTateDescriptor { finite_dim, pro, ind });
        match (sub, sup) {
            (Layer::Lat(a), Layer::Lat(b)) => d((a - b) as u64, false, false),
            (Layer::Zero, Layer::Lat(_)) => d(0, true, false),
            (Layer::Lat(_), Layer::Full) => d(0, false, true),
            (Layer::Zero, Layer::Full) => d(0, true, true),
            _ => d(0, false, false),
        }
    }
}

/// Nonzero layers of `sup / sub`, by increasing `j`.
pub fn quotient2_descriptor(sub: &Staircase2, sup: &Staircase2) -> Result<Vec<(i64, OneTateDescriptor)>, Tate2Error> {
    if !sub.leq(sup) {
        return Err(Tate2Error::NotNested);
    }
    let (lo, hi) = sub.span(sup);
    Ok((lo..hi)
        .map(|j| (j, OneTateDescriptor::of_layers(sub.layer(j), sup.layer(j)).expect("nested")))
        .filter(|(_, d)| !d.is_zero())
        .collect())
}

/// `{"j0": int, "j1": int, "profile": {"0": "Full", "-1": {"Lat": 2}, ...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Staircase2Json {
    pub j0: i64,
    pub j1: i64,
    pub profile: BTreeMap<String, Layer>,
}

impl Staircase2Json {
    pub fn decode(&self) -> Result<Staircase2, Tate2Error> {
        if self.j0 > self.j1 {
            return Err(Tate2Error::BadBounds(self.j0, self.j1));
        }
        let mut given = BTreeMap::new();
        for (k, l) in &self.profile {
            let j: i64 = k.trim().parse().map_err(|_| Tate2Error::BadKey(k.clone()))?;
            let outside = (j < self.j0 && *l != Layer::Zero) || (j >= self.j1 && *l != Layer::Full);
            if outside {
                return Err(Tate2Error::LayerOutsideBounds(j));
            }
            given.insert(j, *l);
        }
        let layers = (self.j0..self.j1)
            .map(|j| given.get(&j).copied().ok_or(Tate2Error::MissingLayer(j)))
            .collect::<Result<Vec<_>, _>>()?;
        Staircase2::from_layers(self.j0, &layers)
    }
}
