//! Weighted rational polyhedral cycles in `R^n`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{self, primitive_generator, Int, QuotientFrame, Rat};
use crate::lp::{Constraint, LpResult};
use crate::polyhedron::{normalize_eq, Polyhedron};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cell {cell} has dimension {found}, expected {expected}")]
    NotPureDimensional { cell: usize, expected: usize, found: isize },
    #[error("cell {cell} has weight zero")]
    ZeroWeight { cell: usize },
    #[error("point is not on the support of the cycle")]
    PointNotOnSupport,
    #[error("the given support splits a connected component of the cycle")]
    NotAComponentUnion,
    #[error("the face through the point has weight {weight}, not one")]
    NotMultiplicityOneFace { weight: i64 },
    #[error("point is not in the relative interior of a maximal face")]
    PointNotInterior,
    #[error("cycle is not contained in the ambient face near the point")]
    NotContainedInFace,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub poly: Polyhedron,
    pub weight: i64,
}

impl Cell {
    pub fn new(poly: Polyhedron, weight: i64) -> Self {
        Cell { poly, weight }
    }
}

/// A pure `dim`-dimensional formal sum of weighted polyhedra in `R^ambient`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalCycle {
    ambient: usize,
    dim: usize,
    cells: Vec<Cell>,
}

/// A failure of the balancing condition around a codimension-one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub face: Polyhedron,
    /// Weighted sum of primitive normal vectors, in the quotient frame of the face.
    pub residual: Vec<Int>,
}

/// A support: a finite union of polyhedra.
pub type Support = Vec<Polyhedron>;

impl TropicalCycle {
    pub fn new(ambient: usize, dim: usize, cells: Vec<Cell>) -> Result<Self, CycleError> {
        for (i, c) in cells.iter().enumerate() {
            if c.poly.ambient_dim() != ambient {
                return Err(CycleError::DimensionMismatch { expected: ambient, found: c.poly.ambient_dim() });
            }
            if c.poly.dim() != dim as isize {
                return Err(CycleError::NotPureDimensional { cell: i, expected: dim, found: c.poly.dim() });
            }
            if c.weight == 0 {
                return Err(CycleError::ZeroWeight { cell: i });
            }
        }
        Ok(TropicalCycle { ambient, dim, cells })
    }

    pub(crate) fn from_parts(ambient: usize, dim: usize, cells: Vec<Cell>) -> Self {
        TropicalCycle { ambient, dim, cells }
    }

    pub fn empty(ambient: usize, dim: usize) -> Self {
        TropicalCycle { ambient, dim, cells: Vec::new() }
    }

    /// `R^n` with weight one.
    pub fn whole_space(n: usize) -> Self {
        TropicalCycle { ambient: n, dim: n, cells: vec![Cell::new(Polyhedron::whole(n), 1)] }
    }

    /// A one-dimensional fan cycle: rays from `apex` with the given weights.
    pub fn star_of_rays(apex: &[Rat], rays: &[(Vec<i64>, i64)]) -> Self {
        let n = apex.len();
        let cells = rays
            .iter()
            .map(|(r, w)| {
                let cone = crate::polyhedron::Cone::from_rays(n, &[linalg::ints(r)]);
                Cell::new(cone.into_polyhedron().translate(apex), *w)
            })
            .collect();
        TropicalCycle { ambient: n, dim: 1, cells }.aggregate()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn support(&self) -> Support {
        self.cells.iter().map(|c| c.poly.clone()).collect()
    }

    pub fn translate(&self, v: &[Rat]) -> Self {
        let cells = self.cells.iter().map(|c| Cell::new(c.poly.translate(v), c.weight)).collect();
        TropicalCycle { cells, ..self.clone() }
    }

    pub fn scale_weights(&self, k: i64) -> Self {
        if k == 0 {
            return TropicalCycle::empty(self.ambient, self.dim);
        }
        let cells = self.cells.iter().map(|c| Cell::new(c.poly.clone(), c.weight * k)).collect();
        TropicalCycle { cells, ..self.clone() }
    }

    /// Formal sum (cells concatenated, then aggregated).
    pub fn plus(&self, other: &TropicalCycle) -> Result<Self, CycleError> {
        self.check_same_space(other)?;
        let cells = self.cells.iter().chain(&other.cells).cloned().collect();
        Ok(TropicalCycle { cells, ..self.clone() }.aggregate())
    }

    pub fn minus(&self, other: &TropicalCycle) -> Result<Self, CycleError> {
        self.plus(&other.scale_weights(-1))
    }

    fn check_same_space(&self, other: &TropicalCycle) -> Result<(), CycleError> {
        if self.ambient != other.ambient {
            return Err(CycleError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        if self.dim != other.dim && !self.is_empty() && !other.is_empty() {
            return Err(CycleError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Equality of weighted supports: the difference aggregates to nothing.
    pub fn equals(&self, other: &TropicalCycle) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        if self.is_empty() || other.is_empty() {
            return self.aggregate().is_empty() && other.aggregate().is_empty();
        }
        self.dim == other.dim && self.minus(other).map(|d| d.is_empty()).unwrap_or(false)
    }

    /// Sum weights on overlapping cells and drop zero weights.
    ///
    /// Only cells that overlap in full dimension are subdivided; other cells
    /// keep their shape. Cells are returned sorted by their canonical form.
    pub fn aggregate(&self) -> TropicalCycle {
        let mut groups: BTreeMap<Vec<Constraint>, BTreeMap<Polyhedron, i64>> = BTreeMap::new();
        for c in &self.cells {
            let hull = c.poly.eqs().to_vec();
            *groups.entry(hull).or_default().entry(c.poly.clone()).or_insert(0) += c.weight;
        }
        let mut out: BTreeMap<Polyhedron, i64> = BTreeMap::new();
        for (_, group) in groups {
            let cells: Vec<(Polyhedron, i64)> = group.into_iter().filter(|(_, w)| *w != 0).collect();
            let overlapping = cells.len() > 1
                && cells.iter().enumerate().any(|(i, (p, _))| {
                    cells[i + 1..].iter().any(|(q, _)| p.meet(q).dim() == self.dim as isize)
                });
            if !overlapping {
                for (p, w) in cells {
                    *out.entry(p).or_insert(0) += w;
                }
                continue;
            }
            let hyperplanes: BTreeSet<Constraint> =
                cells.iter().flat_map(|(p, _)| p.ineqs().iter().map(sign_normalize)).collect();
            for (p, w) in &cells {
                for piece in split_by(p, &hyperplanes) {
                    *out.entry(piece).or_insert(0) += w;
                }
            }
        }
        let cells = out.into_iter().filter(|(_, w)| *w != 0).map(|(p, w)| Cell::new(p, w)).collect();
        TropicalCycle { ambient: self.ambient, dim: self.dim, cells }
    }

    /// Subdivide into a polyhedral complex: every pair of cells meets in a
    /// common face. Weights are summed on coinciding pieces.
    pub fn refine(&self) -> TropicalCycle {
        self.refine_with(&[])
    }

    /// Like [`TropicalCycle::refine`], additionally cutting by the given hyperplanes.
    pub fn refine_with(&self, extra: &[Constraint]) -> TropicalCycle {
        let mut hyperplanes: BTreeSet<Constraint> = self
            .cells
            .iter()
            .flat_map(|c| {
                let ineqs = c.poly.ineqs().iter().map(sign_normalize);
                let eqs = c.poly.eqs().iter().map(normalize_eq);
                ineqs.chain(eqs).collect::<Vec<_>>()
            })
            .collect();
        hyperplanes.extend(extra.iter().filter(|h| !linalg::is_zero_vec(&h.normal)).map(normalize_eq));
        let mut out: BTreeMap<Polyhedron, i64> = BTreeMap::new();
        for c in &self.cells {
            for piece in split_by(&c.poly, &hyperplanes) {
                *out.entry(piece).or_insert(0) += c.weight;
            }
        }
        let cells = out.into_iter().filter(|(_, w)| *w != 0).map(|(p, w)| Cell::new(p, w)).collect();
        TropicalCycle { ambient: self.ambient, dim: self.dim, cells }
    }

    /// Balancing check on the refined complex; empty iff balanced.
    pub fn balancing_check(&self) -> Vec<Violation> {
        if self.dim == 0 {
            return Vec::new();
        }
        let refined = self.refine();
        let mut around: BTreeMap<Polyhedron, Vec<(usize, i64)>> = BTreeMap::new();
        for (i, c) in refined.cells.iter().enumerate() {
            for f in c.poly.facets() {
                around.entry(f).or_default().push((i, c.weight));
            }
        }
        let mut violations = Vec::new();
        for (face, adjacent) in around {
            let frame = QuotientFrame::new(self.ambient, &face.direction_space());
            let q = face.relative_interior_point().expect("face is nonempty");
            let mut sum = vec![Int::zero(); frame.target_dim()];
            for (i, w) in adjacent {
                let p = refined.cells[i].poly.relative_interior_point().expect("cell is nonempty");
                let v = primitive_generator(&frame.apply(&linalg::sub_vec(&p, &q))).expect("cell leaves its facet");
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x * w;
                }
            }
            if sum.iter().any(|x| !x.is_zero()) {
                violations.push(Violation { face, residual: sum });
            }
        }
        violations
    }

    pub fn is_balanced(&self) -> bool {
        self.balancing_check().is_empty()
    }

    pub fn contains_point(&self, u: &[Rat]) -> bool {
        self.cells.iter().any(|c| c.poly.contains(u))
    }

    /// The fan cycle obtained by coning the cells through `u` at `u`.
    pub fn star(&self, u: &[Rat]) -> Result<TropicalCycle, CycleError> {
        if u.len() != self.ambient {
            return Err(CycleError::DimensionMismatch { expected: self.ambient, found: u.len() });
        }
        let cells: Vec<Cell> = self
            .cells
            .iter()
            .filter(|c| c.poly.contains(u))
            .map(|c| Cell::new(c.poly.tangent_cone(u).into_polyhedron(), c.weight))
            .collect();
        if cells.is_empty() {
            return Err(CycleError::PointNotOnSupport);
        }
        Ok(TropicalCycle { ambient: self.ambient, dim: self.dim, cells }.aggregate())
    }

    /// Sum of weights of a zero-dimensional cycle.
    pub fn degree(&self) -> i64 {
        self.cells.iter().map(|c| c.weight).sum()
    }

    pub fn to_zero_cycle(&self) -> ZeroCycle {
        let agg = self.aggregate();
        ZeroCycle::new(
            agg.cells.iter().map(|c| (c.poly.relative_interior_point().unwrap(), c.weight)).collect(),
        )
    }

    /// Weight of the cycle at a point in the relative interior of a top cell.
    pub fn weight_at(&self, u: &[Rat]) -> i64 {
        self.cells.iter().filter(|c| c.poly.contains(u)).map(|c| c.weight).sum()
    }

    /// The recession fan with induced weights `m(τ) = Σ_{ρ(σ) = τ} m(σ)`.
    pub fn recession_fan(&self) -> TropicalCycle {
        let cells = self
            .cells
            .iter()
            .filter_map(|c| {
                let r = c.poly.recession_cone();
                (r.dim() == self.dim).then(|| Cell::new(r.into_polyhedron(), c.weight))
            })
            .collect();
        TropicalCycle { ambient: self.ambient, dim: self.dim, cells }.aggregate()
    }

    pub fn is_fan_cycle(&self) -> bool {
        self.cells.iter().all(|c| c.poly.ineqs().iter().chain(c.poly.eqs()).all(|k| k.rhs.is_zero()))
    }

    /// Connected components of the support.
    pub fn connected_components(&self) -> Vec<Support> {
        connected_components(&self.support())
    }

    /// The sub-cycle of cells lying in `c`, which must be a union of
    /// connected components of the support.
    pub fn restrict_to_component(&self, c: &[Polyhedron]) -> Result<TropicalCycle, CycleError> {
        let inside = |p: &Polyhedron| {
            let x = p.relative_interior_point().expect("cell is nonempty");
            c.iter().any(|q| q.contains(&x))
        };
        let flags: Vec<bool> = self.cells.iter().map(|cell| inside(&cell.poly)).collect();
        for comp in component_indices(&self.support()) {
            let first = flags[comp[0]];
            if comp.iter().any(|&i| flags[i] != first) {
                return Err(CycleError::NotAComponentUnion);
            }
        }
        let cells = self.cells.iter().zip(flags).filter(|(_, f)| *f).map(|(c, _)| c.clone()).collect();
        Ok(TropicalCycle { ambient: self.ambient, dim: self.dim, cells })
    }

    /// Pull back along an injective linear map `y ↦ B^T y` onto a subspace,
    /// where the rows of `B` are a lattice basis of that subspace.
    pub(crate) fn pullback_to_subspace(&self, basis: &[Vec<Int>]) -> TropicalCycle {
        let d = basis.len();
        let bt = linalg::transpose(basis, self.ambient);
        let cells = self.cells.iter().map(|c| Cell::new(c.poly.preimage(&bt, d), c.weight)).collect();
        TropicalCycle { ambient: d, dim: self.dim, cells }
    }
}

fn sign_normalize(c: &Constraint) -> Constraint {
    normalize_eq(c)
}

/// Split a polyhedron by every hyperplane that cuts through its relative interior.
fn split_by(p: &Polyhedron, hyperplanes: &BTreeSet<Constraint>) -> Vec<Polyhedron> {
    let mut pieces = vec![p.clone()];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for piece in pieces {
            let below = matches!(piece.minimize(&h.normal), LpResult::Optimal { ref value, .. } if *value >= h.rhs);
            let above = !below
                && matches!(piece.maximize(&h.normal), LpResult::Optimal { ref value, .. } if *value <= h.rhs);
            if below || above {
                next.push(piece);
                continue;
            }
            let neg = Constraint::new(h.normal.iter().map(|x| -x).collect(), -&h.rhs);
            next.push(piece.with(std::slice::from_ref(h), &[]));
            next.push(piece.with(&[neg], &[]));
        }
        pieces = next;
    }
    pieces
}

fn component_indices(polys: &[Polyhedron]) -> Vec<Vec<usize>> {
    let n = polys.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) != find(&mut parent, j) && polys[i].meets(&polys[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    comps.into_values().collect()
}

/// Partition a collection of polyhedra into connected pieces of their union.
pub fn connected_components(polys: &[Polyhedron]) -> Vec<Support> {
    component_indices(polys)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| polys[i].clone()).collect())
        .collect()
}

/// A finite formal sum of points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZeroCycle {
    points: Vec<(Vec<Rat>, i64)>,
}

impl ZeroCycle {
    /// Merge repeated points and drop zero weights.
    pub fn new(points: Vec<(Vec<Rat>, i64)>) -> Self {
        let mut merged: BTreeMap<Vec<Rat>, i64> = BTreeMap::new();
        for (p, w) in points {
            *merged.entry(p).or_insert(0) += w;
        }
        ZeroCycle { points: merged.into_iter().filter(|(_, w)| *w != 0).collect() }
    }

    pub fn points(&self) -> &[(Vec<Rat>, i64)] {
        &self.points
    }

    pub fn degree(&self) -> i64 {
        self.points.iter().map(|(_, w)| w).sum()
    }

    pub fn weight_at(&self, p: &[Rat]) -> i64 {
        self.points.iter().find(|(q, _)| q == p).map_or(0, |(_, w)| *w)
    }
}

pub fn degree(z: &ZeroCycle) -> i64 {
    z.degree()
}
