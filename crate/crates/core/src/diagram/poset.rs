//! Finite posets with named elements.

use serde::{Deserialize, Serialize};

use super::DiagramError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    elems: Vec<String>,
    /// `leq[a][b]` iff `a <= b`; reflexive and transitive.
    leq: Vec<Vec<bool>>,
    order: Vec<usize>,
}

impl FinitePoset {
    /// The order generated by `pairs` (each `(a, b)` meaning `a <= b`).
    pub fn new(elems: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, DiagramError> {
        let n = elems.len();
        for (i, e) in elems.iter().enumerate() {
            if elems[..i].contains(e) {
                return Err(DiagramError::Poset(format!("duplicate element {e:?}")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(DiagramError::Poset(format!("pair ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(DiagramError::Poset(format!(
                        "{:?} and {:?} are distinct but equivalent",
                        elems[i], elems[j]
                    )));
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| ((0..n).filter(|&j| leq[j][i]).count(), i));
        Ok(FinitePoset { elems, leq, order })
    }

    pub fn from_names(elems: &[&str], pairs: &[(&str, &str)]) -> Result<Self, DiagramError> {
        let names: Vec<String> = elems.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            names.iter().position(|e| e == s).ok_or_else(|| DiagramError::UnknownElement(s.to_string()))
        };
        let pairs = pairs.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>, DiagramError>>()?;
        Self::new(names, &pairs)
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new((0..n).map(|i| i.to_string()).collect(), &pairs).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn names(&self) -> &[String] {
        &self.elems
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elems.iter().position(|e| e == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// A fixed linear extension: by number of elements below, then by index.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// All pairs `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.lt(a, b)).collect()
    }

    /// Covering relations `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.len()).any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    pub fn is_directed(&self) -> bool {
        let n = self.len();
        n > 0 && (0..n).all(|a| (0..n).all(|b| (0..n).any(|c| self.leq[a][c] && self.leq[b][c])))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|a| self.leq[a][m]))
    }

    /// Whether `phi: self -> target` is order preserving.
    pub fn is_monotone(&self, target: &FinitePoset, phi: &[usize]) -> bool {
        self.strict_pairs().iter().all(|&(a, b)| target.leq(phi[a], phi[b]))
    }

    /// Finality of `phi: self -> target`: for every `b`, the elements `a` with
    /// `b <= phi(a)` form a nonempty connected subposet.
    pub fn is_final_map(&self, target: &FinitePoset, phi: &[usize]) -> bool {
        if !self.is_monotone(target, phi) {
            return false;
        }
        (0..target.len()).all(|b| {
            let comma: Vec<usize> = (0..self.len()).filter(|&a| target.leq(b, phi[a])).collect();
            self.is_connected_subset(&comma)
        })
    }

    fn is_connected_subset(&self, subset: &[usize]) -> bool {
        let Some(&start) = subset.first() else { return false };
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for &c in subset {
                if !seen.contains(&c) && (self.leq(a, c) || self.leq(c, a)) {
                    seen.push(c);
                    stack.push(c);
                }
            }
        }
        seen.len() == subset.len()
    }

    /// The induced subposet on `keep` (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let elems = keep.iter().map(|&i| self.elems[i].clone()).collect();
        let mut pairs = Vec::new();
        for (x, &a) in keep.iter().enumerate() {
            for (y, &b) in keep.iter().enumerate() {
                if self.leq(a, b) {
                    pairs.push((x, y));
                }
            }
        }
        Self::new(elems, &pairs).expect("restriction of a poset")
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elems: self.elems.clone(),
            leq: self.covers().into_iter().map(|(a, b)| [self.elems[a].clone(), self.elems[b].clone()]).collect(),
        }
    }
}

/// `{"elems": [...], "leq": [[a, b], ...]}`; `leq` generates the order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elems: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
}

impl PosetJson {
    pub fn decode(&self) -> Result<FinitePoset, DiagramError> {
        let elems: Vec<&str> = self.elems.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = self.leq.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        FinitePoset::from_names(&elems, &pairs)
    }
}
