//! Admissible Ind and Pro diagrams of finite-dimensional vector spaces over
//! finite posets, their (co)limits, the lim-colim hom spaces between Ind
//! diagrams and straightening of hom elements into strict morphisms.

pub mod hom;
pub mod poset;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use hom::{hom_ind, realize_strict, reconstruct, straighten, HomElement, HomSpace, Straightening, Triple};
pub use poset::{FinitePoset, PosetJson};

use crate::exact::{cokernel, is_epic, is_monic, kernel, VectObject};
use crate::kernel::{Field, KernelError};
use crate::linalg::{FieldMatrix, FieldMatrixJson};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("invalid poset: {0}")]
    Poset(String),
    #[error("unknown poset element {0:?}")]
    UnknownElement(String),
    #[error("invalid transition: {0}")]
    Transition(String),
    #[error("no transition connects {0:?} to {1:?}")]
    MissingTransition(String, String),
    #[error("transitions from {0:?} to {1:?} disagree")]
    NotFunctorial(String, String),
    #[error("expected an {0} diagram")]
    WrongVariance(&'static str),
    #[error("diagram is not admissible: {0}")]
    NotAdmissible(String),
    #[error("incompatible hom element: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    /// `a <= b` gives `X_a -> X_b`, expected injective.
    Ind,
    /// `a <= b` gives `X_b -> X_a`, expected surjective.
    Pro,
}

impl Variance {
    fn name(self) -> &'static str {
        match self {
            Variance::Ind => "ind",
            Variance::Pro => "pro",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    variance: Variance,
    field: Field,
    poset: FinitePoset,
    dims: Vec<usize>,
    edges: BTreeMap<(usize, usize), FieldMatrix>,
}

/// All transition maps of a functorial diagram, including identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transitions {
    maps: BTreeMap<(usize, usize), FieldMatrix>,
}

impl Transitions {
    /// The map attached to `a <= b`.
    pub fn get(&self, a: usize, b: usize) -> &FieldMatrix {
        &self.maps[&(a, b)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub directed: bool,
    pub functorial: bool,
    pub admissible_maps: bool,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
}

impl Diagram {
    /// `edges[(a, b)]` for `a < b` is `X_a -> X_b` (Ind) or `X_b -> X_a` (Pro).
    pub fn new(
        variance: Variance,
        field: &Field,
        poset: FinitePoset,
        dims: Vec<usize>,
        edges: BTreeMap<(usize, usize), FieldMatrix>,
    ) -> Result<Self, DiagramError> {
        if dims.len() != poset.len() {
            return Err(DiagramError::Transition(format!("{} objects for {} elements", dims.len(), poset.len())));
        }
        for (&(a, b), m) in &edges {
            let (na, nb) = (poset.name(a), poset.name(b));
            if !poset.lt(a, b) {
                return Err(DiagramError::Transition(format!("{na:?} is not below {nb:?}")));
            }
            let (rows, cols) = match variance {
                Variance::Ind => (dims[b], dims[a]),
                Variance::Pro => (dims[a], dims[b]),
            };
            if (m.rows(), m.cols()) != (rows, cols) || m.field() != field {
                return Err(DiagramError::Transition(format!(
                    "{na}->{nb} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Diagram { variance, field: field.clone(), poset, dims, edges })
    }

    pub fn ind(field: &Field, poset: FinitePoset, dims: Vec<usize>, edges: BTreeMap<(usize, usize), FieldMatrix>) -> Result<Self, DiagramError> {
        Self::new(Variance::Ind, field, poset, dims, edges)
    }

    pub fn pro(field: &Field, poset: FinitePoset, dims: Vec<usize>, edges: BTreeMap<(usize, usize), FieldMatrix>) -> Result<Self, DiagramError> {
        Self::new(Variance::Pro, field, poset, dims, edges)
    }

    /// The Ind chain `k^(d_0) -> k^(d_1) -> ...` of coordinate inclusions.
    pub fn coordinate_chain(field: &Field, dims: &[usize]) -> Self {
        let poset = FinitePoset::chain(dims.len());
        let mut edges = BTreeMap::new();
        for i in 1..dims.len() {
            let mut m = FieldMatrix::zeros(field, dims[i], dims[i - 1]);
            for k in 0..dims[i - 1].min(dims[i]) {
                m.set(k, k, field.one());
            }
            edges.insert((i - 1, i), m);
        }
        Self::ind(field, poset, dims.to_vec(), edges).expect("chain diagram")
    }

    /// The constant Ind diagram with value `k^dim` and identity transitions.
    pub fn constant(field: &Field, poset: FinitePoset, dim: usize) -> Self {
        let edges = poset.covers().into_iter().map(|e| (e, FieldMatrix::identity(field, dim))).collect();
        let dims = vec![dim; poset.len()];
        Self::ind(field, poset, dims, edges).expect("constant diagram")
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn dim(&self, a: usize) -> usize {
        self.dims[a]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), FieldMatrix> {
        &self.edges
    }

    /// Composites of the given edges; fails if two paths disagree or a relation has no path.
    pub fn transitions(&self) -> Result<Transitions, DiagramError> {
        let p = &self.poset;
        let mut maps: BTreeMap<(usize, usize), FieldMatrix> = BTreeMap::new();
        for a in 0..p.len() {
            maps.insert((a, a), FieldMatrix::identity(&self.field, self.dims[a]));
            for &b in p.topological_order() {
                if !p.lt(a, b) {
                    continue;
                }
                let mut found: Option<FieldMatrix> = None;
                for (&(k, b2), e) in &self.edges {
                    if b2 != b || !p.leq(a, k) {
                        continue;
                    }
                    let first = &maps[&(a, k)];
                    let candidate = match self.variance {
                        Variance::Ind => e.mul(first),
                        Variance::Pro => first.mul(e),
                    };
                    match &found {
                        Some(prev) if *prev != candidate => {
                            return Err(DiagramError::NotFunctorial(p.name(a).into(), p.name(b).into()));
                        }
                        Some(_) => {}
                        None => found = Some(candidate),
                    }
                }
                let m = found.ok_or_else(|| DiagramError::MissingTransition(p.name(a).into(), p.name(b).into()))?;
                maps.insert((a, b), m);
            }
        }
        Ok(Transitions { maps })
    }

    pub fn check_admissible(&self) -> AdmissibilityReport {
        let directed = self.poset.is_directed();
        let (functorial, mut problem) = match self.transitions() {
            Ok(_) => (true, None),
            Err(e) => (false, Some(e.to_string())),
        };
        let bad = self.edges.iter().find(|(_, m)| match self.variance {
            Variance::Ind => !is_monic(m),
            Variance::Pro => !is_epic(m),
        });
        let admissible_maps = bad.is_none();
        if let Some((&(a, b), _)) = bad {
            let kind = if self.variance == Variance::Ind { "injective" } else { "surjective" };
            problem.get_or_insert(format!("{}->{} is not {kind}", self.poset.name(a), self.poset.name(b)));
        }
        if !directed {
            problem.get_or_insert_with(|| "poset is not directed".to_string());
        }
        AdmissibilityReport { directed, functorial, admissible_maps, admissible: directed && functorial && admissible_maps, problem }
    }

    pub fn require_admissible(&self, variance: Variance) -> Result<Transitions, DiagramError> {
        if self.variance != variance {
            return Err(DiagramError::WrongVariance(variance.name()));
        }
        let report = self.check_admissible();
        if !report.admissible {
            return Err(DiagramError::NotAdmissible(report.problem.unwrap_or_default()));
        }
        self.transitions()
    }

    /// Transposed transitions: an Ind diagram becomes a Pro diagram on the same poset and back.
    pub fn dual(&self) -> Self {
        let variance = match self.variance {
            Variance::Ind => Variance::Pro,
            Variance::Pro => Variance::Ind,
        };
        let edges = self.edges.iter().map(|(&k, m)| (k, m.transpose())).collect();
        Diagram { variance, field: self.field.clone(), poset: self.poset.clone(), dims: self.dims.clone(), edges }
    }

    /// The diagram restricted to the subposet `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self, DiagramError> {
        let t = self.transitions()?;
        let poset = self.poset.restrict(keep);
        let dims = keep.iter().map(|&a| self.dims[a]).collect();
        let edges = poset
            .covers()
            .into_iter()
            .map(|(x, y)| ((x, y), t.get(keep[x], keep[y]).clone()))
            .collect();
        Self::new(self.variance, &self.field, poset, dims, edges)
    }

    /// Direct sum `(+)_a X_a` and the offset of each summand.
    fn offsets(&self) -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(self.dims.len());
        let mut total = 0;
        for &d in &self.dims {
            offs.push(total);
            total += d;
        }
        (offs, total)
    }

    pub fn to_json(&self) -> DiagramJson {
        let p = &self.poset;
        DiagramJson {
            kind: Some(self.variance),
            poset: p.to_json(),
            objects: (0..p.len()).map(|a| (p.name(a).to_string(), self.dims[a])).collect(),
            transitions: self
                .edges
                .iter()
                .map(|(&(a, b), m)| (format!("{}->{}", p.name(a), p.name(b)), m.to_json()))
                .collect(),
        }
    }
}

/// A realized colimit: the object and one cocone map per poset element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colimit {
    pub object: VectObject,
    pub cocone: Vec<FieldMatrix>,
}

/// The colimit of an Ind diagram as the quotient of the direct sum by the transition relations.
pub fn realize_colim(d: &Diagram) -> Result<Colimit, DiagramError> {
    if d.variance != Variance::Ind {
        return Err(DiagramError::WrongVariance("ind"));
    }
    let f = &d.field;
    let (offs, total) = d.offsets();
    let mut relations: Vec<Vec<crate::kernel::Fe>> = Vec::new();
    for (&(a, b), m) in &d.edges {
        for k in 0..d.dims[a] {
            let mut v = vec![f.zero(); total];
            v[offs[a] + k] = f.one();
            for r in 0..d.dims[b] {
                v[offs[b] + r] = f.sub(&v[offs[b] + r], m.get(r, k));
            }
            relations.push(v);
        }
    }
    let rel = FieldMatrix::from_columns(f, total, &relations);
    let (object, q) = cokernel(&rel);
    let cocone = (0..d.dims.len()).map(|a| q.submatrix(0..q.rows(), offs[a]..offs[a] + d.dims[a])).collect();
    Ok(Colimit { object, cocone })
}

/// A realized limit: the object and one projection per poset element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limit {
    pub object: VectObject,
    pub cone: Vec<FieldMatrix>,
}

/// The limit of a Pro diagram as the compatible families inside the direct product.
pub fn realize_lim(d: &Diagram) -> Result<Limit, DiagramError> {
    if d.variance != Variance::Pro {
        return Err(DiagramError::WrongVariance("pro"));
    }
    let f = &d.field;
    let (offs, total) = d.offsets();
    let mut blocks: Option<FieldMatrix> = None;
    for (&(a, b), m) in &d.edges {
        // x_a - m x_b = 0
        let mut row = FieldMatrix::zeros(f, d.dims[a], total);
        for r in 0..d.dims[a] {
            row.set(r, offs[a] + r, f.one());
            for c in 0..d.dims[b] {
                row.set(r, offs[b] + c, f.neg(m.get(r, c)));
            }
        }
        blocks = Some(match blocks {
            None => row,
            Some(prev) => prev.vstack(&row),
        });
    }
    let constraints = blocks.unwrap_or_else(|| FieldMatrix::zeros(f, 0, total));
    let (object, inc) = kernel(&constraints);
    let cone = (0..d.dims.len()).map(|a| inc.submatrix(offs[a]..offs[a] + d.dims[a], 0..inc.cols())).collect();
    Ok(Limit { object, cone })
}

/// `{"kind": "ind"|"pro", "poset": {...}, "objects": {"a": dim}, "transitions": {"a->b": matrix}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Variance>,
    pub poset: PosetJson,
    pub objects: BTreeMap<String, usize>,
    #[serde(default)]
    pub transitions: BTreeMap<String, FieldMatrixJson>,
}

impl DiagramJson {
    pub fn decode(&self, field: &Field) -> Result<Diagram, DiagramError> {
        let poset = self.poset.decode()?;
        let mut dims = Vec::with_capacity(poset.len());
        for name in poset.names() {
            dims.push(*self.objects.get(name).ok_or_else(|| DiagramError::UnknownElement(name.clone()))?);
        }
        if let Some(extra) = self.objects.keys().find(|k| poset.index(k).is_none()) {
            return Err(DiagramError::UnknownElement(extra.clone()));
        }
        let mut edges = BTreeMap::new();
        for (key, m) in &self.transitions {
            let (a, b) = key
                .split_once("->")
                .ok_or_else(|| DiagramError::Transition(format!("key {key:?} is not of the form a->b")))?;
            let ia = poset.index(a.trim()).ok_or_else(|| DiagramError::UnknownElement(a.trim().into()))?;
            let ib = poset.index(b.trim()).ok_or_else(|| DiagramError::UnknownElement(b.trim().into()))?;
            edges.insert((ia, ib), m.decode(field)?);
        }
        Diagram::new(self.kind.unwrap_or(Variance::Ind), field, poset, dims, edges)
    }
}
