//! `Hom(X, Y) = lim_I colim_J Hom(X_i, Y_j)` for Ind diagrams, and straightening.
//!
//! A map `a: X_i -> Y_j` (`dim Y_j x dim X_i`) is flattened column by column.

use serde::Serialize;

use super::{realize_colim, Colimit, Diagram, DiagramError, FinitePoset, Transitions, Variance};
use crate::kernel::Fe;
use crate::linalg::{FieldMatrix, FieldMatrixJson};

fn flatten(m: &FieldMatrix) -> Vec<Fe> {
    (0..m.cols()).flat_map(|c| m.column(c)).collect()
}

fn unflatten(field: &crate::kernel::Field, v: &[Fe], rows: usize, cols: usize) -> FieldMatrix {
    let columns: Vec<Vec<Fe>> = (0..cols).map(|c| v[c * rows..(c + 1) * rows].to_vec()).collect();
    FieldMatrix::from_columns(field, rows, &columns)
}

/// `colim_J Hom(X_i, Y_j)` for one `i`, presented as a quotient of `(+)_j Hom(X_i, Y_j)`.
#[derive(Clone, Debug)]
struct Block {
    offs: Vec<usize>,
    total: usize,
    /// Quotient map onto the colimit.
    q: FieldMatrix,
    /// A right inverse of `q`.
    s: FieldMatrix,
}

impl Block {
    fn dim(&self) -> usize {
        self.q.rows()
    }

    /// The part of `q` reading the summand `j`.
    fn summand(&self, j: usize, len: usize) -> FieldMatrix {
        self.q.submatrix(0..self.q.rows(), self.offs[j]..self.offs[j] + len)
    }
}

#[derive(Clone, Debug)]
pub struct HomSpace {
    x: Diagram,
    y: Diagram,
    tx: Transitions,
    ty: Transitions,
    blocks: Vec<Block>,
    c_offs: Vec<usize>,
    /// Columns: a basis of the limit, in the coordinates of `(+)_i C_i`.
    basis: FieldMatrix,
    cx: Colimit,
    cy: Colimit,
}

/// A hom element: its coordinates in the basis of the hom space, its family
/// `(h_i)` in the colimits `C_i`, and the canonical section (for each `i`, the
/// first `j` in the topological order carrying a representative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    pub coords: Vec<Fe>,
    pub family: Vec<Vec<Fe>>,
    pub section: Vec<(usize, FieldMatrix)>,
}

pub fn hom_ind(x: &Diagram, y: &Diagram) -> Result<HomSpace, DiagramError> {
    let tx = x.require_admissible(Variance::Ind)?;
    let ty = y.require_admissible(Variance::Ind)?;
    let f = x.field().clone();
    if y.field() != &f {
        return Err(DiagramError::Kernel(crate::kernel::KernelError::FieldMismatch));
    }
    let (pi, pj) = (x.poset(), y.poset());
    let mut blocks = Vec::with_capacity(pi.len());
    for i in 0..pi.len() {
        let dx = x.dim(i);
        let mut offs = Vec::with_capacity(pj.len());
        let mut total = 0;
        for j in 0..pj.len() {
            offs.push(total);
            total += dx * y.dim(j);
        }
        let mut rels: Vec<Vec<Fe>> = Vec::new();
        for (j, j2) in pj.strict_pairs() {
            let t = ty.get(j, j2);
            for k in 0..dx * y.dim(j) {
                let mut a = vec![f.zero(); dx * y.dim(j)];
                a[k] = f.one();
                let pushed = flatten(&t.mul(&unflatten(&f, &a, y.dim(j), dx)));
                let mut v = vec![f.zero(); total];
                v[offs[j] + k] = f.one();
                for (r, p) in pushed.iter().enumerate() {
                    v[offs[j2] + r] = f.neg(p);
                }
                rels.push(v);
            }
        }
        let q = FieldMatrix::from_columns(&f, total, &rels).cokernel_projection();
        let s = q.right_inverse().expect("quotient maps are surjective");
        blocks.push(Block { offs, total, q, s });
    }
    let mut c_offs = Vec::with_capacity(blocks.len());
    let mut c_total = 0;
    for b in &blocks {
        c_offs.push(c_total);
        c_total += b.dim();
    }
    // h_i = (restriction along X_i -> X_i2)(h_i2) for every i < i2
    let mut constraints = FieldMatrix::zeros(&f, 0, c_total);
    for (i, i2) in pi.strict_pairs() {
        let t = tx.get(i, i2);
        let (bi, bi2) = (&blocks[i], &blocks[i2]);
        let mut pre_cols: Vec<Vec<Fe>> = Vec::with_capacity(bi2.total);
        for j in 0..pj.len() {
            let (rows, cols) = (y.dim(j), x.dim(i2));
            for k in 0..rows * cols {
                let mut a = vec![f.zero(); rows * cols];
                a[k] = f.one();
                let restricted = flatten(&unflatten(&f, &a, rows, cols).mul(t));
                let mut v = vec![f.zero(); bi.total];
                v[bi.offs[j]..bi.offs[j] + restricted.len()].clone_from_slice(&restricted);
                pre_cols.push(v);
            }
        }
        let pre = FieldMatrix::from_columns(&f, bi.total, &pre_cols);
        let m = bi.q.mul(&pre).mul(&bi2.s);
        let mut row = FieldMatrix::zeros(&f, bi.dim(), c_total);
        for r in 0..bi.dim() {
            row.set(r, c_offs[i] + r, f.neg(&f.one()));
            for c in 0..bi2.dim() {
                row.set(r, c_offs[i2] + c, m.get(r, c).clone());
            }
        }
        constraints = constraints.vstack(&row);
    }
    let basis = constraints.kernel();
    let cx = realize_colim(x)?;
    let cy = realize_colim(y)?;
    Ok(HomSpace { x: x.clone(), y: y.clone(), tx, ty, blocks, c_offs, basis, cx, cy })
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn source(&self) -> &Diagram {
        &self.x
    }

    pub fn target(&self) -> &Diagram {
        &self.y
    }

    pub fn source_colimit(&self) -> &Colimit {
        &self.cx
    }

    pub fn target_colimit(&self) -> &Colimit {
        &self.cy
    }

    pub fn element(&self, coords: &[Fe]) -> Result<HomElement, DiagramError> {
        if coords.len() != self.dim() {
            return Err(DiagramError::Incompatible(format!("{} coordinates for a {}-dimensional space", coords.len(), self.dim())));
        }
        let h = self.basis.apply(coords);
        let family: Vec<Vec<Fe>> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| h[self.c_offs[i]..self.c_offs[i] + b.dim()].to_vec())
            .collect();
        let section = family
            .iter()
            .enumerate()
            .map(|(i, hi)| self.section_at(i, hi))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HomElement { coords: coords.to_vec(), family, section })
    }

    pub fn basis_elements(&self) -> Vec<HomElement> {
        let f = self.x.field();
        (0..self.dim())
            .map(|k| {
                let mut c = vec![f.zero(); self.dim()];
                c[k] = f.one();
                self.element(&c).expect("basis element")
            })
            .collect()
    }

    pub fn zero(&self) -> HomElement {
        self.element(&vec![self.x.field().zero(); self.dim()]).expect("zero element")
    }

    /// A representative `a: X_i -> Y_j` of `h_i`, if one lives at `j`.
    fn representative(&self, i: usize, j: usize, hi: &[Fe]) -> Option<FieldMatrix> {
        let f = self.x.field();
        let (rows, cols) = (self.y.dim(j), self.x.dim(i));
        let a = self.blocks[i].summand(j, rows * cols);
        let rhs = FieldMatrix::from_columns(f, hi.len(), &[hi.to_vec()]);
        let sol = a.solve(&rhs)?;
        Some(unflatten(f, &sol.column(0), rows, cols))
    }

    fn section_at(&self, i: usize, hi: &[Fe]) -> Result<(usize, FieldMatrix), DiagramError> {
        for &j in self.y.poset().topological_order() {
            if let Some(a) = self.representative(i, j, hi) {
                return Ok((j, a));
            }
        }
        Err(DiagramError::Incompatible(format!("no representative at {:?}", self.x.poset().name(i))))
    }

    /// The class of `a: X_i -> Y_j` in `C_i`.
    fn class_of(&self, i: usize, j: usize, a: &FieldMatrix) -> Vec<Fe> {
        let b = &self.blocks[i];
        b.summand(j, a.rows() * a.cols()).apply(&flatten(a))
    }

    /// The element with the given family, if the family is compatible.
    pub fn from_family(&self, family: &[Vec<Fe>]) -> Result<HomElement, DiagramError> {
        let h: Vec<Fe> = family.iter().flatten().cloned().collect();
        if family.len() != self.blocks.len() || h.len() != self.basis.rows() {
            return Err(DiagramError::Incompatible("family has the wrong shape".into()));
        }
        let rhs = FieldMatrix::from_columns(self.x.field(), h.len(), &[h]);
        let coords = self
            .basis
            .solve(&rhs)
            .ok_or_else(|| DiagramError::Incompatible("family is not compatible".into()))?;
        self.element(&coords.column(0))
    }

    /// The induced map of realizations `colim X -> colim Y`.
    pub fn realize(&self, h: &HomElement) -> FieldMatrix {
        let comps: Vec<(usize, usize, FieldMatrix)> =
            h.section.iter().enumerate().map(|(i, (j, a))| (i, *j, a.clone())).collect();
        solve_realization(&self.cx, &self.cy, &comps).expect("sections of hom elements are compatible")
    }

    /// Matrix whose columns are the flattened realizations of the basis elements.
    pub fn realization_matrix(&self) -> FieldMatrix {
        let cols: Vec<Vec<Fe>> = self.basis_elements().iter().map(|h| flatten(&self.realize(h))).collect();
        FieldMatrix::from_columns(self.x.field(), self.cx.object.dim * self.cy.object.dim, &cols)
    }

    /// The hom element inducing `u: colim X -> colim Y`, if any.
    pub fn from_realization(&self, u: &FieldMatrix) -> Option<HomElement> {
        let r = self.realization_matrix();
        let rhs = FieldMatrix::from_columns(self.x.field(), r.rows(), &[flatten(u)]);
        self.element(&r.solve(&rhs)?.column(0)).ok()
    }

    pub fn element_json(&self, h: &HomElement) -> HomElementJson {
        let (px, py) = (self.x.poset(), self.y.poset());
        HomElementJson {
            coords: h.coords.iter().map(|c| self.x.field().format(c)).collect(),
            section: h
                .section
                .iter()
                .enumerate()
                .map(|(i, (j, a))| SectionJson { i: px.name(i).into(), j: py.name(*j).into(), matrix: a.to_json() })
                .collect(),
        }
    }
}

/// `u` with `u c_X(i) = c_Y(j) a` for every component `(i, j, a)`.
fn solve_realization(cx: &Colimit, cy: &Colimit, comps: &[(usize, usize, FieldMatrix)]) -> Option<FieldMatrix> {
    let f = cx.object.field.clone();
    let mut lhs = FieldMatrix::zeros(&f, cx.object.dim, 0);
    let mut rhs = FieldMatrix::zeros(&f, cy.object.dim, 0);
    for (i, j, a) in comps {
        lhs = lhs.hstack(&cx.cocone[*i]);
        rhs = rhs.hstack(&cy.cocone[*j].mul(a));
    }
    Some(lhs.transpose().solve(&rhs.transpose())?.transpose())
}

/// Realization of a strict morphism `X -> Y` given by a monotone `phi` and components `X_i -> Y_phi(i)`.
pub fn realize_strict(x: &Diagram, y: &Diagram, phi: &[usize], comps: &[FieldMatrix]) -> Result<FieldMatrix, DiagramError> {
    let tx = x.require_admissible(Variance::Ind)?;
    let ty = y.require_admissible(Variance::Ind)?;
    if phi.len() != x.poset().len() || comps.len() != phi.len() || !x.poset().is_monotone(y.poset(), phi) {
        return Err(DiagramError::Incompatible("index map is not a monotone map of posets".into()));
    }
    for (a, b) in x.poset().strict_pairs() {
        if ty.get(phi[a], phi[b]).mul(&comps[a]) != comps[b].mul(tx.get(a, b)) {
            return Err(DiagramError::Incompatible(format!("naturality fails on {:?}", x.poset().name(a))));
        }
    }
    let (cx, cy) = (realize_colim(x)?, realize_colim(y)?);
    let list: Vec<(usize, usize, FieldMatrix)> =
        comps.iter().enumerate().map(|(i, a)| (i, phi[i], a.clone())).collect();
    solve_realization(&cx, &cy, &list).ok_or_else(|| DiagramError::Incompatible("components do not descend".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub i: usize,
    pub j: usize,
    pub alpha: FieldMatrix,
}

/// The poset of triples `(i, j, a)` with `a: X_i -> Y_j` representing `h_i`,
/// ordered by commuting squares, with its two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Straightening {
    pub triples: Vec<Triple>,
    pub poset: FinitePoset,
    pub final_to_source: bool,
    pub final_to_target: bool,
    pub directed: bool,
}

pub fn straighten(space: &HomSpace, h: &HomElement) -> Result<Straightening, DiagramError> {
    let canonical = space.element(&h.coords)?;
    if canonical.family != h.family {
        return Err(DiagramError::Incompatible("family does not match its coordinates".into()));
    }
    let (pi, pj) = (space.x.poset(), space.y.poset());
    let mut triples = Vec::new();
    for &i in pi.topological_order() {
        for &j in pj.topological_order() {
            if let Some(alpha) = space.representative(i, j, &h.family[i]) {
                triples.push(Triple { i, j, alpha });
            }
        }
    }
    let mut pairs = Vec::new();
    for (a, s) in triples.iter().enumerate() {
        for (b, t) in triples.iter().enumerate() {
            if a != b
                && pi.leq(s.i, t.i)
                && pj.leq(s.j, t.j)
                && space.ty.get(s.j, t.j).mul(&s.alpha) == t.alpha.mul(space.tx.get(s.i, t.i))
            {
                pairs.push((a, b));
            }
        }
    }
    let names = triples.iter().map(|t| format!("({},{})", pi.name(t.i), pj.name(t.j))).collect();
    let poset = FinitePoset::new(names, &pairs)?;
    let to_i: Vec<usize> = triples.iter().map(|t| t.i).collect();
    let to_j: Vec<usize> = triples.iter().map(|t| t.j).collect();
    Ok(Straightening {
        final_to_source: poset.is_final_map(pi, &to_i),
        final_to_target: poset.is_final_map(pj, &to_j),
        directed: poset.is_directed(),
        triples,
        poset,
    })
}

/// The hom element a straightening represents.
pub fn reconstruct(space: &HomSpace, s: &Straightening) -> Result<HomElement, DiagramError> {
    let mut family: Vec<Option<Vec<Fe>>> = vec![None; space.x.poset().len()];
    for t in &s.triples {
        let class = space.class_of(t.i, t.j, &t.alpha);
        match &family[t.i] {
            Some(prev) if *prev != class => {
                return Err(DiagramError::Incompatible(format!("triples over {:?} disagree", space.x.poset().name(t.i))));
            }
            _ => family[t.i] = Some(class),
        }
    }
    let family = family
        .into_iter()
        .enumerate()
        .map(|(i, h)| h.ok_or_else(|| DiagramError::Incompatible(format!("no triple over {:?}", space.x.poset().name(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    space.from_family(&family)
}

impl Straightening {
    /// The map of realizations induced by the strict family of components.
    pub fn realize(&self, space: &HomSpace) -> Option<FieldMatrix> {
        let comps: Vec<(usize, usize, FieldMatrix)> = self.triples.iter().map(|t| (t.i, t.j, t.alpha.clone())).collect();
        solve_realization(&space.cx, &space.cy, &comps)
    }

    pub fn to_json(&self, space: &HomSpace) -> StraighteningJson {
        let (pi, pj) = (space.x.poset(), space.y.poset());
        StraighteningJson {
            triples: self
                .triples
                .iter()
                .map(|t| SectionJson { i: pi.name(t.i).into(), j: pj.name(t.j).into(), matrix: t.alpha.to_json() })
                .collect(),
            order: self.poset.to_json().leq,
            final_to_source: self.final_to_source,
            final_to_target: self.final_to_target,
            directed: self.directed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionJson {
    pub i: String,
    pub j: String,
    pub matrix: FieldMatrixJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomElementJson {
    pub coords: Vec<String>,
    pub section: Vec<SectionJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StraighteningJson {
    pub triples: Vec<SectionJson>,
    pub order: Vec<[String; 2]>,
    pub final_to_source: bool,
    pub final_to_target: bool,
    pub directed: bool,
}
