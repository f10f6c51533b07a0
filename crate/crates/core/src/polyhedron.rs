//! Rational polyhedra in H-representation and cones.
//!
//! A [`Polyhedron`] is always kept in canonical form: equalities in reduced
//! row echelon form, inequalities reduced modulo the equalities, scaled to
//! primitive integer normals, irredundant and sorted. Two polyhedra are equal
//! as sets exactly when their canonical forms are equal, so the derived
//! `Eq`/`Ord`/`Hash` impls are set-level comparisons.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{
    self, clear_denominators, dot, int_to_rat, invert, nullspace, primitive_generator, rref, Int,
    Lattice, QuotientFrame, Rat,
};
use crate::lp::{self, Constraint, LpResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedronError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation needs a nonempty polyhedron")]
    EmptyPolyhedron,
    #[error("polyhedron is not a cone")]
    NotACone,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyhedron {
    ambient: usize,
    empty: bool,
    eqs: Vec<Constraint>,
    ineqs: Vec<Constraint>,
}

/// Vertices, extreme rays and a lineality basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Int>>,
    pub lineality: Vec<Vec<Rat>>,
}

fn row(v: &[i64]) -> Constraint {
    let (a, b) = v.split_at(v.len() - 1);
    Constraint::new(linalg::rats(a), linalg::rat(b[0]))
}

/// Scale `a x >= b` to a primitive integer normal (positive factor).
fn normalize_ineq(c: &Constraint) -> Constraint {
    let a = clear_denominators(&c.normal);
    let first = c.normal.iter().zip(&a).find(|(x, _)| !x.is_zero());
    let Some((orig, scaled)) = first else { return c.clone() };
    let factor = Rat::from_integer(scaled.clone()) / orig;
    Constraint::new(int_to_rat(&a), &c.rhs * factor)
}

/// Scale an equality to a primitive integer normal with positive leading entry.
pub(crate) fn normalize_eq(c: &Constraint) -> Constraint {
    let n = normalize_ineq(c);
    match n.normal.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => Constraint::new(n.normal.iter().map(|x| -x).collect(), -n.rhs),
        _ => n,
    }
}

fn reduce_modulo(c: &Constraint, eqs: &[Constraint], pivots: &[usize]) -> Constraint {
    let mut out = c.clone();
    for (e, &p) in eqs.iter().zip(pivots) {
        if out.normal[p].is_zero() {
            continue;
        }
        let f = out.normal[p].clone();
        for (x, y) in out.normal.iter_mut().zip(&e.normal) {
            *x -= &f * y;
        }
        out.rhs -= &f * &e.rhs;
    }
    out
}

/// Equalities as RREF of `[A | b]`; `None` if inconsistent.
fn echelon_equalities(n: usize, eqs: &[Constraint]) -> Option<(Vec<Constraint>, Vec<usize>)> {
    if eqs.is_empty() {
        return Some((Vec::new(), Vec::new()));
    }
    let aug: Vec<Vec<Rat>> = eqs
        .iter()
        .map(|c| {
            let mut r = c.normal.clone();
            r.push(c.rhs.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let rows = r
        .into_iter()
        .map(|mut v| {
            let b = v.pop().unwrap();
            Constraint::new(v, b)
        })
        .collect();
    Some((rows, pivots))
}

impl Polyhedron {
    /// Canonical polyhedron `{x : ineqs >=, eqs =}`.
    pub fn new(ambient: usize, ineqs: Vec<Constraint>, eqs: Vec<Constraint>) -> Self {
        canonicalize_constraints(ambient, ineqs, eqs)
    }

    /// Build from integer rows `[a_1, ..., a_n, b]`.
    pub fn from_rows(ambient: usize, ineqs: &[Vec<i64>], eqs: &[Vec<i64>]) -> Self {
        Polyhedron::new(ambient, ineqs.iter().map(|r| row(r)).collect(), eqs.iter().map(|r| row(r)).collect())
    }

    pub fn whole(ambient: usize) -> Self {
        Polyhedron { ambient, empty: false, eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub fn empty(ambient: usize) -> Self {
        Polyhedron { ambient, empty: true, eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub fn point(p: &[Rat]) -> Self {
        let n = p.len();
        let eqs = (0..n)
            .map(|i| {
                let mut a = vec![Rat::zero(); n];
                a[i] = Rat::one();
                Constraint::new(a, p[i].clone())
            })
            .collect();
        Polyhedron { ambient: n, empty: false, eqs, ineqs: Vec::new() }
    }

    /// Affine span of a point set plus a cone: `conv(points) + cone(rays) + span(lines)`.
    pub fn from_generators(ambient: usize, points: &[Vec<Rat>], rays: &[Vec<Rat>], lines: &[Vec<Rat>]) -> Self {
        if points.is_empty() {
            return Polyhedron::empty(ambient);
        }
        // Variables: x (ambient), mu (points), lambda (rays), nu (lines).
        let k = points.len();
        let r = rays.len();
        let l = lines.len();
        let total = ambient + k + r + l;
        let mut eqs = Vec::new();
        for i in 0..ambient {
            let mut a = vec![Rat::zero(); total];
            a[i] = Rat::one();
            for (j, p) in points.iter().enumerate() {
                a[ambient + j] = -p[i].clone();
            }
            for (j, ray) in rays.iter().enumerate() {
                a[ambient + k + j] = -ray[i].clone();
            }
            for (j, line) in lines.iter().enumerate() {
                a[ambient + k + r + j] = -line[i].clone();
            }
            eqs.push(Constraint::new(a, Rat::zero()));
        }
        let mut convex = vec![Rat::zero(); total];
        for x in &mut convex[ambient..ambient + k] {
            *x = Rat::one();
        }
        eqs.push(Constraint::new(convex, Rat::one()));
        let ineqs = (ambient..ambient + k + r)
            .map(|j| {
                let mut a = vec![Rat::zero(); total];
                a[j] = Rat::one();
                Constraint::new(a, Rat::zero())
            })
            .collect();
        let mut p = Polyhedron::new(total, ineqs, eqs);
        for _ in ambient..total {
            p = p.eliminate_last();
        }
        p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Affine dimension; `-1` for the empty set.
    pub fn dim(&self) -> isize {
        if self.empty {
            -1
        } else {
            (self.ambient - self.eqs.len()) as isize
        }
    }

    pub fn ineqs(&self) -> &[Constraint] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Constraint] {
        &self.eqs
    }

    /// Equalities scaled to primitive integer normals.
    pub fn eqs_primitive(&self) -> Vec<Constraint> {
        self.eqs.iter().map(normalize_eq).collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.empty || self.recession_cone().dim() == 0
    }

    /// Re-run canonicalization on the stored constraints.
    pub fn canonicalize(&self) -> Polyhedron {
        if self.empty {
            return self.clone();
        }
        Polyhedron::new(self.ambient, self.ineqs.clone(), self.eqs.clone())
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.empty
            && self.eqs.iter().all(|c| c.eval(x) == c.rhs)
            && self.ineqs.iter().all(|c| c.eval(x) >= c.rhs)
    }

    pub fn relint_contains(&self, x: &[Rat]) -> bool {
        !self.empty
            && self.eqs.iter().all(|c| c.eval(x) == c.rhs)
            && self.ineqs.iter().all(|c| c.eval(x) > c.rhs)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, PolyhedronError> {
        if self.ambient != other.ambient {
            return Err(PolyhedronError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(self.meet(other))
    }

    /// Intersection without the dimension check.
    pub fn meet(&self, other: &Polyhedron) -> Polyhedron {
        if self.empty || other.empty {
            return Polyhedron::empty(self.ambient);
        }
        let ineqs = self.ineqs.iter().chain(&other.ineqs).cloned().collect();
        let eqs = self.eqs.iter().chain(&other.eqs).cloned().collect();
        Polyhedron::new(self.ambient, ineqs, eqs)
    }

    /// Add constraints and canonicalize.
    pub fn with(&self, ineqs: &[Constraint], eqs: &[Constraint]) -> Polyhedron {
        if self.empty {
            return self.clone();
        }
        let i = self.ineqs.iter().chain(ineqs).cloned().collect();
        let e = self.eqs.iter().chain(eqs).cloned().collect();
        Polyhedron::new(self.ambient, i, e)
    }

    /// Cheap nonemptiness test of `self ∩ other` (one LP, no canonicalization).
    pub fn meets(&self, other: &Polyhedron) -> bool {
        if self.empty || other.empty {
            return false;
        }
        let ineqs: Vec<Constraint> = self.ineqs.iter().chain(&other.ineqs).cloned().collect();
        let eqs: Vec<Constraint> = self.eqs.iter().chain(&other.eqs).cloned().collect();
        lp::feasible_point(self.ambient, &ineqs, &eqs).is_some()
    }

    pub fn maximize(&self, c: &[Rat]) -> LpResult {
        if self.empty {
            return LpResult::Infeasible;
        }
        lp::maximize(self.ambient, c, &self.ineqs, &self.eqs)
    }

    pub fn minimize(&self, c: &[Rat]) -> LpResult {
        if self.empty {
            return LpResult::Infeasible;
        }
        lp::minimize(self.ambient, c, &self.ineqs, &self.eqs)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        if self.empty {
            return true;
        }
        if other.empty {
            return false;
        }
        other.ineqs.iter().all(|c| match self.minimize(&c.normal) {
            LpResult::Optimal { value, .. } => value >= c.rhs,
            _ => false,
        }) && other.eqs.iter().all(|c| {
            matches!(self.minimize(&c.normal), LpResult::Optimal { ref value, .. } if *value == c.rhs)
                && matches!(self.maximize(&c.normal), LpResult::Optimal { ref value, .. } if *value == c.rhs)
        })
    }

    pub fn recession_cone(&self) -> Cone {
        let zero = |c: &Constraint| Constraint::new(c.normal.clone(), Rat::zero());
        Cone(Polyhedron::new(
            self.ambient,
            self.ineqs.iter().map(zero).collect(),
            self.eqs.iter().map(zero).collect(),
        ))
    }

    /// Rational basis of the direction space of the affine hull.
    pub fn direction_space(&self) -> Vec<Vec<Rat>> {
        let a: Vec<Vec<Rat>> = self.eqs.iter().map(|c| c.normal.clone()).collect();
        nullspace(&a, self.ambient)
    }

    /// Saturated lattice of integer directions of the affine hull.
    pub fn direction_lattice(&self) -> Lattice {
        Lattice::of_subspace(self.ambient, &self.direction_space())
    }

    /// Basis of the lineality space.
    pub fn lineality_space(&self) -> Vec<Vec<Rat>> {
        let a: Vec<Vec<Rat>> = self.eqs.iter().chain(&self.ineqs).map(|c| c.normal.clone()).collect();
        nullspace(&a, self.ambient)
    }

    pub fn affine_hull(&self) -> Polyhedron {
        Polyhedron { ambient: self.ambient, empty: self.empty, eqs: self.eqs.clone(), ineqs: Vec::new() }
    }

    pub fn translate(&self, v: &[Rat]) -> Polyhedron {
        if self.empty {
            return self.clone();
        }
        let shift = |c: &Constraint| Constraint::new(c.normal.clone(), &c.rhs + dot(&c.normal, v));
        Polyhedron::new(self.ambient, self.ineqs.iter().map(shift).collect(), self.eqs.iter().map(shift).collect())
    }

    /// A deterministic point of the relative interior: the optimum of
    /// `max t` subject to `<a_i, x> - t >= b_i`, `t <= 1`.
    pub fn relative_interior_point(&self) -> Result<Vec<Rat>, PolyhedronError> {
        if self.empty {
            return Err(PolyhedronError::EmptyPolyhedron);
        }
        let n = self.ambient;
        if self.ineqs.is_empty() {
            let a: Vec<Vec<Rat>> = self.eqs.iter().map(|c| c.normal.clone()).collect();
            let b: Vec<Rat> = self.eqs.iter().map(|c| c.rhs.clone()).collect();
            return Ok(linalg::solve_rational(&a, &b, n).expect("canonical equalities are consistent"));
        }
        let lift = |c: &Constraint, t: Rat| {
            let mut a = c.normal.clone();
            a.push(t);
            Constraint::new(a, c.rhs.clone())
        };
        let mut ge: Vec<Constraint> = self.ineqs.iter().map(|c| lift(c, -Rat::one())).collect();
        let mut cap = vec![Rat::zero(); n + 1];
        cap[n] = -Rat::one();
        ge.push(Constraint::new(cap, -Rat::one()));
        let eq: Vec<Constraint> = self.eqs.iter().map(|c| lift(c, Rat::zero())).collect();
        let mut obj = vec![Rat::zero(); n + 1];
        obj[n] = Rat::one();
        match lp::maximize(n + 1, &obj, &ge, &eq) {
            LpResult::Optimal { mut point, .. } => {
                point.pop();
                Ok(point)
            }
            _ => unreachable!("canonical nonempty polyhedron has an interior point"),
        }
    }

    /// The facets (for a polyhedron of dimension `d`, its `(d-1)`-faces).
    pub fn facets(&self) -> Vec<Polyhedron> {
        if self.empty {
            return Vec::new();
        }
        (0..self.ineqs.len())
            .map(|i| {
                let ineqs = self.ineqs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect();
                let mut eqs = self.eqs.clone();
                eqs.push(self.ineqs[i].clone());
                Polyhedron::new(self.ambient, ineqs, eqs)
            })
            .collect()
    }

    /// All nonempty faces of dimension `k`, sorted.
    pub fn faces(&self, k: usize) -> Vec<Polyhedron> {
        let d = self.dim();
        if d < k as isize {
            return Vec::new();
        }
        let mut level: BTreeSet<Polyhedron> = BTreeSet::from([self.clone()]);
        for _ in (k as isize..d).rev() {
            level = level.iter().flat_map(Polyhedron::facets).collect();
        }
        level.into_iter().collect()
    }

    /// The smallest face containing `x` (which must lie in the polyhedron).
    pub fn face_containing(&self, x: &[Rat]) -> Polyhedron {
        let (tight, loose): (Vec<_>, Vec<_>) = self.ineqs.iter().cloned().partition(|c| c.eval(x) == c.rhs);
        let mut eqs = self.eqs.clone();
        eqs.extend(tight);
        Polyhedron::new(self.ambient, loose, eqs)
    }

    /// Tangent cone at a point `u` of the polyhedron, as a cone at the origin.
    pub fn tangent_cone(&self, u: &[Rat]) -> Cone {
        let zero = |c: &Constraint| Constraint::new(c.normal.clone(), Rat::zero());
        let ineqs = self.ineqs.iter().filter(|c| c.eval(u) == c.rhs).map(zero).collect();
        let eqs = self.eqs.iter().map(zero).collect();
        Cone(Polyhedron::new(self.ambient, ineqs, eqs))
    }

    /// Relax every inequality by `eps`; every equality becomes a pair of
    /// relaxed inequalities (with a primitive integer normal).
    pub fn thicken(&self, eps: &Rat) -> Polyhedron {
        if self.empty {
            return self.clone();
        }
        let mut ineqs: Vec<Constraint> =
            self.ineqs.iter().map(|c| Constraint::new(c.normal.clone(), &c.rhs - eps)).collect();
        for e in self.eqs_primitive() {
            ineqs.push(Constraint::new(e.normal.clone(), &e.rhs - eps));
            ineqs.push(Constraint::new(e.normal.iter().map(|x| -x).collect(), -&e.rhs - eps));
        }
        Polyhedron::new(self.ambient, ineqs, Vec::new())
    }

    /// Fourier–Motzkin elimination of the last coordinate.
    fn eliminate_last(&self) -> Polyhedron {
        let n = self.ambient;
        let v = n - 1;
        if self.empty {
            return Polyhedron::empty(v);
        }
        let drop = |c: &Constraint| Constraint::new(c.normal[..v].to_vec(), c.rhs.clone());
        if let Some(pivot) = self.eqs.iter().find(|c| !c.normal[v].is_zero()) {
            let sub = |c: &Constraint| {
                if c.normal[v].is_zero() {
                    return drop(c);
                }
                let f = &c.normal[v] / &pivot.normal[v];
                let normal = (0..v).map(|j| &c.normal[j] - &f * &pivot.normal[j]).collect();
                Constraint::new(normal, &c.rhs - &f * &pivot.rhs)
            };
            let ineqs = self.ineqs.iter().map(sub).collect();
            let eqs = self.eqs.iter().filter(|c| !std::ptr::eq(*c, pivot)).map(sub).collect();
            return Polyhedron::new(v, ineqs, eqs);
        }
        let mut ineqs = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for c in &self.ineqs {
            match c.normal[v].cmp(&Rat::zero()) {
                std::cmp::Ordering::Equal => ineqs.push(drop(c)),
                std::cmp::Ordering::Greater => pos.push(c),
                std::cmp::Ordering::Less => neg.push(c),
            }
        }
        for p in &pos {
            for q in &neg {
                let fp = -&q.normal[v];
                let fq = p.normal[v].clone();
                let normal = (0..v).map(|j| &p.normal[j] * &fp + &q.normal[j] * &fq).collect();
                ineqs.push(Constraint::new(normal, &p.rhs * &fp + &q.rhs * &fq));
            }
        }
        let eqs = self.eqs.iter().map(drop).collect();
        Polyhedron::new(v, ineqs, eqs)
    }

    /// Image under the linear map `x ↦ A x` for an integer matrix `A` of full row rank.
    pub fn linear_image(&self, a: &[Vec<Int>]) -> Polyhedron {
        let p = a.len();
        let n = self.ambient;
        if self.empty {
            return Polyhedron::empty(p);
        }
        let ar: Vec<Vec<Rat>> = a.iter().map(|r| int_to_rat(r)).collect();
        let mut t = ar.clone();
        t.extend(nullspace(&ar, n));
        let tinv = invert(&t).expect("frame matrix must have full row rank");
        let pull = |c: &Constraint| {
            let normal = (0..n).map(|j| (0..n).fold(Rat::zero(), |acc, i| acc + &c.normal[i] * &tinv[i][j])).collect();
            Constraint::new(normal, c.rhs.clone())
        };
        let mut q = Polyhedron::new(n, self.ineqs.iter().map(pull).collect(), self.eqs.iter().map(pull).collect());
        for _ in p..n {
            q = q.eliminate_last();
        }
        q
    }

    /// Preimage under `x ↦ A x` where `A` is `p × n` and `self` lives in `R^p`.
    pub fn preimage(&self, a: &[Vec<Int>], n: usize) -> Polyhedron {
        if self.empty {
            return Polyhedron::empty(n);
        }
        let pull = |c: &Constraint| {
            let normal = (0..n)
                .map(|j| c.normal.iter().zip(a).fold(Rat::zero(), |acc, (x, r)| acc + x * &r[j]))
                .collect();
            Constraint::new(normal, c.rhs.clone())
        };
        Polyhedron::new(n, self.ineqs.iter().map(pull).collect(), self.eqs.iter().map(pull).collect())
    }

    /// Image in the quotient `R^n / span(τ)` in the deterministic frame.
    pub fn project(&self, tau: &Cone) -> Polyhedron {
        let frame = tau.quotient_frame();
        self.linear_image(frame.matrix())
    }

    pub fn project_frame(&self, frame: &QuotientFrame) -> Polyhedron {
        self.linear_image(frame.matrix())
    }

    /// `P + span(gens)`.
    pub fn add_span(&self, gens: &[Vec<Rat>]) -> Polyhedron {
        let frame = QuotientFrame::new(self.ambient, gens);
        self.project_frame(&frame).preimage(frame.matrix(), self.ambient)
    }

    /// Vertices, extreme rays and lineality of the polyhedron.
    pub fn vrep(&self) -> VRep {
        if self.empty {
            return VRep { vertices: Vec::new(), rays: Vec::new(), lineality: Vec::new() };
        }
        let lineality = self.lineality_space();
        let pointed = if lineality.is_empty() {
            self.clone()
        } else {
            let extra: Vec<Constraint> = lineality.iter().map(|l| Constraint::new(l.clone(), Rat::zero())).collect();
            self.with(&[], &extra)
        };
        let vertices = pointed
            .faces(0)
            .into_iter()
            .map(|f| f.relative_interior_point().expect("face is nonempty"))
            .collect();
        let rays = pointed
            .recession_cone()
            .0
            .faces(1)
            .into_iter()
            .map(|f| primitive_generator(&f.relative_interior_point().unwrap()).expect("ray is nonzero"))
            .collect();
        VRep { vertices, rays, lineality }
    }
}

fn canonicalize_constraints(n: usize, ineqs: Vec<Constraint>, eqs: Vec<Constraint>) -> Polyhedron {
    debug_assert!(ineqs.iter().chain(&eqs).all(|c| c.normal.len() == n));
    let mut eqs = eqs;
    let mut ineqs = ineqs;
    loop {
        let Some((e, pivots)) = echelon_equalities(n, &eqs) else {
            return Polyhedron::empty(n);
        };
        eqs = e;
        let mut reduced: Vec<Constraint> = Vec::with_capacity(ineqs.len());
        for c in &ineqs {
            let r = reduce_modulo(c, &eqs, &pivots);
            if linalg::is_zero_vec(&r.normal) {
                if r.rhs.is_positive() {
                    return Polyhedron::empty(n);
                }
                continue;
            }
            reduced.push(normalize_ineq(&r));
        }
        // Keep only the strongest bound per normal.
        reduced.sort();
        let mut strongest: Vec<Constraint> = Vec::with_capacity(reduced.len());
        for c in reduced {
            match strongest.last_mut() {
                Some(last) if last.normal == c.normal => last.rhs = c.rhs,
                _ => strongest.push(c),
            }
        }
        ineqs = strongest;
        if ineqs.is_empty() {
            return Polyhedron { ambient: n, empty: false, eqs, ineqs };
        }
        // Opposite pairs give equalities or infeasibility directly.
        let mut found_pair = false;
        for i in 0..ineqs.len() {
            let neg: Vec<Rat> = ineqs[i].normal.iter().map(|x| -x).collect();
            if let Ok(j) = ineqs.binary_search_by(|c| c.normal.cmp(&neg)) {
                let sum = &ineqs[i].rhs + &ineqs[j].rhs;
                if sum.is_positive() {
                    return Polyhedron::empty(n);
                }
                if sum.is_zero() {
                    eqs.push(ineqs[i].clone());
                    found_pair = true;
                }
            }
        }
        if found_pair {
            continue;
        }
        // max t s.t. a_i x - t >= b_i, t <= 1.
        let lift = |c: &Constraint, t: Rat| {
            let mut a = c.normal.clone();
            a.push(t);
            Constraint::new(a, c.rhs.clone())
        };
        let mut ge: Vec<Constraint> = ineqs.iter().map(|c| lift(c, -Rat::one())).collect();
        let mut cap = vec![Rat::zero(); n + 1];
        cap[n] = -Rat::one();
        ge.push(Constraint::new(cap, -Rat::one()));
        let eqs_lift: Vec<Constraint> = eqs.iter().map(|c| lift(c, Rat::zero())).collect();
        let mut obj = vec![Rat::zero(); n + 1];
        obj[n] = Rat::one();
        let (t, x) = match lp::maximize(n + 1, &obj, &ge, &eqs_lift) {
            LpResult::Optimal { value, mut point } => {
                point.pop();
                (value, point)
            }
            LpResult::Infeasible => return Polyhedron::empty(n),
            LpResult::Unbounded => unreachable!("t is capped"),
        };
        if t.is_negative() {
            return Polyhedron::empty(n);
        }
        if t.is_positive() {
            break;
        }
        let mut implicit = Vec::new();
        for (i, c) in ineqs.iter().enumerate() {
            if c.eval(&x) != c.rhs {
                continue;
            }
            if let LpResult::Optimal { value, .. } = lp::maximize(n, &c.normal, &ineqs, &eqs) {
                if value == c.rhs {
                    implicit.push(i);
                }
            }
        }
        debug_assert!(!implicit.is_empty());
        for &i in &implicit {
            eqs.push(ineqs[i].clone());
        }
        ineqs = ineqs
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !implicit.contains(i))
            .map(|(_, c)| c)
            .collect();
    }
    // Remove redundant inequalities one at a time.
    let mut i = 0;
    while i < ineqs.len() {
        let others: Vec<Constraint> =
            ineqs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect();
        let redundant = match lp::minimize(n, &ineqs[i].normal, &others, &eqs) {
            LpResult::Optimal { value, .. } => value >= ineqs[i].rhs,
            _ => false,
        };
        if redundant {
            ineqs.remove(i);
        } else {
            i += 1;
        }
    }
    Polyhedron { ambient: n, empty: false, eqs, ineqs }
}

/// A polyhedral cone `{x : <a,x> >= 0, <c,x> = 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(pub(crate) Polyhedron);

impl Cone {
    pub fn from_polyhedron(p: Polyhedron) -> Result<Cone, PolyhedronError> {
        if p.empty || p.ineqs.iter().chain(&p.eqs).any(|c| !c.rhs.is_zero()) {
            return Err(PolyhedronError::NotACone);
        }
        Ok(Cone(p))
    }

    pub fn zero(n: usize) -> Cone {
        Cone(Polyhedron::point(&vec![Rat::zero(); n]))
    }

    pub fn whole(n: usize) -> Cone {
        Cone(Polyhedron::whole(n))
    }

    /// Conic hull of integer rays.
    pub fn from_rays(n: usize, rays: &[Vec<Int>]) -> Cone {
        let r: Vec<Vec<Rat>> = rays.iter().map(|v| int_to_rat(v)).collect();
        Cone::simplicial(n, &r).unwrap_or_else(|| Cone::from_generators(n, &r, &[]))
    }

    /// Direct H-representation when the rays are linearly independent: the
    /// dual basis gives the facets and the orthogonal complement the equations.
    fn simplicial(n: usize, rays: &[Vec<Rat>]) -> Option<Cone> {
        if n == 0 || linalg::rank(rays) != rays.len() {
            return None;
        }
        let complement = nullspace(rays, n);
        let basis: Vec<Vec<Rat>> = rays.iter().chain(&complement).cloned().collect();
        let inv = invert(&basis)?;
        let ineqs = (0..rays.len())
            .map(|i| Constraint::new(inv.iter().map(|row| row[i].clone()).collect(), Rat::zero()))
            .collect();
        let eqs = complement.into_iter().map(|c| Constraint::new(c, Rat::zero())).collect();
        Some(Cone(Polyhedron::new(n, ineqs, eqs)))
    }

    pub fn from_generators(n: usize, rays: &[Vec<Rat>], lines: &[Vec<Rat>]) -> Cone {
        Cone(Polyhedron::from_generators(n, &[vec![Rat::zero(); n]], rays, lines))
    }

    pub fn polyhedron(&self) -> &Polyhedron {
        &self.0
    }

    pub fn into_polyhedron(self) -> Polyhedron {
        self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.ambient
    }

    pub fn dim(&self) -> usize {
        self.0.dim() as usize
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.0.contains(v)
    }

    pub fn contains_int(&self, v: &[Int]) -> bool {
        self.0.contains(&int_to_rat(v))
    }

    pub fn relint_contains(&self, v: &[Rat]) -> bool {
        self.0.relint_contains(v)
    }

    pub fn is_pointed(&self) -> bool {
        self.0.lineality_space().is_empty()
    }

    pub fn span(&self) -> Vec<Vec<Rat>> {
        self.0.direction_space()
    }

    pub fn quotient_frame(&self) -> QuotientFrame {
        QuotientFrame::new(self.ambient_dim(), &self.span())
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        Cone(self.0.meet(&other.0))
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        let v = self.0.vrep();
        v.rays.iter().all(|r| other.contains_int(r))
            && v.lineality.iter().all(|l| other.contains(l) && other.contains(&l.iter().map(|x| -x).collect::<Vec<_>>()))
    }

    /// Primitive generators of the extreme rays (for a pointed cone).
    pub fn extreme_rays(&self) -> Vec<Vec<Int>> {
        self.0.recession_cone().0.faces(1).into_iter().map(|f| {
            primitive_generator(&f.relative_interior_point().unwrap()).expect("ray is nonzero")
        }).collect()
    }
}
