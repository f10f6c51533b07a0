//! Rational polyhedral fans and the strata of the associated tropical toric variety.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cycle::{Cell, CycleError, TropicalCycle};
use crate::linalg::{self, dot_mixed, int_to_rat, primitive_int, Int, Lattice, QuotientFrame, Rat};
use crate::lp::{self, Constraint, LpResult};
use crate::polyhedron::{Cone, Polyhedron};
use crate::stable::stable_intersect;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {ray} is not a primitive nonzero vector of length {ambient}")]
    BadRay { ray: usize, ambient: usize },
    #[error("cone {cone:?} refers to a ray that does not exist")]
    RayIndexOutOfRange { cone: Vec<usize> },
    #[error("cone {cone:?} is not pointed")]
    NotPointed { cone: Vec<usize> },
    #[error("the listed rays of cone {cone:?} are not exactly its extreme rays")]
    RaysNotExtreme { cone: Vec<usize> },
    #[error("face {face:?} of cone {cone:?} is not listed")]
    MissingFace { cone: Vec<usize>, face: Vec<usize> },
    #[error("cones {a:?} and {b:?} do not meet in a common face")]
    BadIntersection { a: Vec<usize>, b: Vec<usize> },
    #[error("cone {cone:?} is not in the fan")]
    ConeNotInFan { cone: Vec<usize> },
    #[error("cone {cone:?} violates compatibility with polyhedron {polyhedron}")]
    NotCompatible { cone: Vec<usize>, polyhedron: usize },
    #[error("fan does not tile the recession cone of polyhedron {polyhedron}")]
    NotCompactifying { polyhedron: usize },
    #[error("no strictly convex support function exists on the cones inside a recession cone")]
    NoFanStructure,
    #[error("direction lies outside the support of the fan")]
    DirectionOutsideSupport,
    #[error("fan is not complete")]
    NotComplete,
    #[error("cycle lives in dimension {found}, the stratum has dimension {expected}")]
    FrameMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

/// A fan given by primitive rays and the ray sets of all its cones
/// (including the empty set for the zero cone).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    ambient: usize,
    rays: Vec<Vec<Int>>,
    cones: Vec<Vec<usize>>,
    polys: Vec<Cone>,
    lookup: BTreeMap<Vec<usize>, usize>,
}

impl Fan {
    /// Build and validate a fan; every face of every cone must be listed.
    pub fn new(ambient: usize, rays: Vec<Vec<Int>>, cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        let fan = Fan::unchecked(ambient, rays, cones)?;
        match fan.issues().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(fan),
        }
    }

    /// Normalize the cone list and build the cones, checking only ray indices.
    pub fn unchecked(ambient: usize, rays: Vec<Vec<Int>>, cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut c in cones {
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(FanError::RayIndexOutOfRange { cone: c });
            }
            c.sort_unstable();
            c.dedup();
            set.insert(c);
        }
        let mut cones: Vec<Vec<usize>> = set.into_iter().collect();
        cones.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let polys = cones
            .iter()
            .map(|c| Cone::from_rays(ambient, &c.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>()))
            .collect();
        let lookup = cones.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(Fan { ambient, rays, cones, polys, lookup })
    }

    /// Build from maximal cones, adding all their faces.
    pub fn from_maximal(ambient: usize, rays: Vec<Vec<Int>>, maximal: &[Vec<usize>]) -> Result<Fan, FanError> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::from([Vec::new()]);
        for m in maximal {
            if m.iter().any(|&i| i >= rays.len()) {
                return Err(FanError::RayIndexOutOfRange { cone: m.clone() });
            }
            let cone = Cone::from_rays(ambient, &m.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>());
            for d in 0..=cone.dim() {
                for face in cone.polyhedron().faces(d) {
                    let inside: Vec<usize> =
                        m.iter().copied().filter(|&i| face.contains(&int_to_rat(&rays[i]))).sorted().collect();
                    all.insert(inside);
                }
            }
        }
        Fan::new(ambient, rays, all.into_iter().collect())
    }

    pub fn from_i64(ambient: usize, rays: &[Vec<i64>], maximal: &[Vec<usize>]) -> Result<Fan, FanError> {
        Fan::from_maximal(ambient, rays.iter().map(|r| linalg::ints(r)).collect(), maximal)
    }

    /// The fan with only the zero cone.
    pub fn trivial(n: usize) -> Fan {
        Fan::new(n, Vec::new(), vec![Vec::new()]).expect("zero fan is valid")
    }

    /// The fan of projective `n`-space: rays `e_1..e_n, -(e_1+..+e_n)`.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        rays.push(vec![-1; n]);
        let maximal: Vec<Vec<usize>> = (0..=n).combinations(n).collect();
        Fan::from_i64(n, &rays, &maximal).expect("projective fan is valid")
    }

    /// The fan of `(P^1)^n`: rays `±e_i`, cones the orthants.
    pub fn product_of_lines(n: usize) -> Fan {
        let mut rays = Vec::new();
        for i in 0..n {
            for s in [1, -1] {
                rays.push((0..n).map(|j| if i == j { s } else { 0 }).collect::<Vec<i64>>());
            }
        }
        let maximal: Vec<Vec<usize>> =
            (0..1usize << n).map(|mask| (0..n).map(|i| 2 * i + (mask >> i & 1)).collect()).collect();
        Fan::from_i64(n, &rays, &maximal).expect("product fan is valid")
    }

    /// The Hirzebruch fan with rays `(1,0), (0,1), (-1,-a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Fan {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, -a], vec![0, -1]];
        Fan::from_i64(2, &rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).expect("Hirzebruch fan is valid")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.polys[i]
    }

    pub fn cone_rays(&self, i: usize) -> &[usize] {
        &self.cones[i]
    }

    pub fn cone_dim(&self, i: usize) -> usize {
        self.polys[i].dim()
    }

    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        key.dedup();
        self.lookup.get(&key).copied()
    }

    pub fn require_cone(&self, rays: &[usize]) -> Result<usize, FanError> {
        self.cone_index(rays).ok_or_else(|| FanError::ConeNotInFan { cone: rays.to_vec() })
    }

    pub fn zero_cone(&self) -> usize {
        self.lookup[&Vec::new()]
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.cone_dim(i) == d).collect()
    }

    /// Cones not properly contained in another cone.
    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| {
                !self.cones.iter().any(|c| c.len() > self.cones[i].len() && self.cones[i].iter().all(|r| c.contains(r)))
            })
            .collect()
    }

    /// Cones `σ ⊋ τ` with `dim σ = dim τ + 1`.
    pub fn cofaces_of_codim_one(&self, tau: usize) -> Vec<usize> {
        let d = self.cone_dim(tau);
        (0..self.cones.len())
            .filter(|&s| self.cone_dim(s) == d + 1 && self.is_face(tau, s))
            .collect()
    }

    /// `τ ≼ σ` (by ray sets).
    pub fn is_face(&self, tau: usize, sigma: usize) -> bool {
        self.cones[tau].iter().all(|r| self.cones[sigma].contains(r))
    }

    /// Every problem with the fan structure (empty for a valid fan).
    pub fn issues(&self) -> Vec<FanError> {
        let mut out = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.ambient || r.iter().all(Zero::is_zero) || primitive_int(r) != *r {
                out.push(FanError::BadRay { ray: i, ambient: self.ambient });
            }
        }
        if !out.is_empty() {
            return out;
        }
        if !self.lookup.contains_key(&Vec::new()) {
            out.push(FanError::MissingFace { cone: Vec::new(), face: Vec::new() });
        }
        for (i, c) in self.cones.iter().enumerate() {
            let cone = &self.polys[i];
            if !cone.is_pointed() {
                out.push(FanError::NotPointed { cone: c.clone() });
                continue;
            }
            let extreme: BTreeSet<Vec<Int>> = cone.extreme_rays().into_iter().collect();
            let listed: BTreeSet<Vec<Int>> = c.iter().map(|&r| self.rays[r].clone()).collect();
            if extreme != listed {
                out.push(FanError::RaysNotExtreme { cone: c.clone() });
                continue;
            }
            for d in 0..cone.dim() {
                for face in cone.polyhedron().faces(d) {
                    let inside: Vec<usize> =
                        c.iter().copied().filter(|&r| face.contains(&int_to_rat(&self.rays[r]))).collect();
                    if !self.lookup.contains_key(&inside) {
                        out.push(FanError::MissingFace { cone: c.clone(), face: inside });
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                let common: Vec<usize> = self.cones[i].iter().copied().filter(|r| self.cones[j].contains(r)).collect();
                let meet = self.polys[i].intersect(&self.polys[j]);
                let ok = match self.lookup.get(&common) {
                    Some(&k) => self.polys[k] == meet,
                    None => false,
                };
                if !ok {
                    out.push(FanError::BadIntersection { a: self.cones[i].clone(), b: self.cones[j].clone() });
                }
            }
        }
        out
    }

    /// Every cone's rays extend to a lattice basis.
    pub fn is_unimodular(&self) -> bool {
        self.cones.iter().all(|c| {
            let gens: Vec<Vec<Int>> = c.iter().map(|&r| self.rays[r].clone()).collect();
            let l = Lattice::new(self.ambient, &gens);
            l.rank() == gens.len() && l.is_saturated()
        })
    }

    /// `|D| = R^n`: maximal cones are full-dimensional and every
    /// codimension-one cone lies in exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient;
        if n == 0 {
            return true;
        }
        let maximal = self.maximal_cones();
        if maximal.is_empty() || maximal.iter().any(|&m| self.cone_dim(m) != n) {
            return false;
        }
        self.cones_of_dim(n - 1)
            .into_iter()
            .all(|f| maximal.iter().filter(|&&m| self.is_face(f, m)).count() == 2)
    }

    /// Whether the relative interior of cone `i` meets the cone `c`.
    fn relint_meets(&self, i: usize, c: &Cone) -> bool {
        let k = self.cones[i].len();
        if k == 0 {
            return true;
        }
        let image = |a: &[Rat]| -> Vec<Rat> { self.cones[i].iter().map(|&r| dot_mixed(&self.rays[r], a)).collect() };
        let p = c.polyhedron();
        let mut ge: Vec<Constraint> = p.ineqs().iter().map(|a| Constraint::new(image(&a.normal), Rat::zero())).collect();
        for j in 0..k {
            let mut e = vec![Rat::zero(); k];
            e[j] = Rat::one();
            ge.push(Constraint::new(e, Rat::one()));
        }
        let eq: Vec<Constraint> = p.eqs().iter().map(|a| Constraint::new(image(&a.normal), Rat::zero())).collect();
        lp::feasible_point(k, &ge, &eq).is_some()
    }

    fn cone_inside(&self, i: usize, c: &Cone) -> bool {
        self.cones[i].iter().all(|&r| c.contains_int(&self.rays[r]))
    }

    /// First `(cone, polyhedron)` pair violating compatibility.
    pub fn compatibility_violation(&self, polys: &[Polyhedron]) -> Option<(usize, usize)> {
        for (pi, p) in polys.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            let rec = p.recession_cone();
            if rec.dim() == 0 {
                continue;
            }
            for i in 0..self.cones.len() {
                if !self.cone_inside(i, &rec) && self.relint_meets(i, &rec) {
                    return Some((i, pi));
                }
            }
        }
        None
    }

    /// Every cone either lies in `ρ(P)` or its relative interior misses `ρ(P)`.
    pub fn is_compatible(&self, polys: &[Polyhedron]) -> bool {
        self.compatibility_violation(polys).is_none()
    }

    pub fn check_compatible(&self, polys: &[Polyhedron]) -> Result<(), FanError> {
        match self.compatibility_violation(polys) {
            Some((c, p)) => Err(FanError::NotCompatible { cone: self.cones[c].clone(), polyhedron: p }),
            None => Ok(()),
        }
    }

    /// Top-dimensional cones of the fan inside a cone `rec`, if they tile it.
    fn tiling_of(&self, rec: &Cone) -> Option<Vec<usize>> {
        let d = rec.dim();
        if d == 0 {
            return Some(vec![self.zero_cone()]);
        }
        let inside: Vec<usize> =
            (0..self.cones.len()).filter(|&i| self.cone_dim(i) == d && self.cone_inside(i, rec)).collect();
        if inside.is_empty() {
            return None;
        }
        let boundary = |f: usize| {
            rec.polyhedron().ineqs().iter().any(|a| {
                self.cones[f].iter().all(|&r| dot_mixed(&self.rays[r], &a.normal).is_zero())
            })
        };
        for f in self.cones_of_dim(d - 1) {
            let around = inside.iter().filter(|&&m| self.is_face(f, m)).count();
            if around == 1 && !boundary(f) {
                return None;
            }
        }
        Some(inside)
    }

    /// Each recession cone is a union of cones of the fan.
    pub fn is_compactifying(&self, polys: &[Polyhedron]) -> bool {
        polys.iter().all(|p| p.is_empty() || self.tiling_of(&p.recession_cone()).is_some())
    }

    /// Cone of the fan whose relative interior contains `v`.
    pub fn cone_containing_in_relint(&self, v: &[Rat]) -> Option<usize> {
        (0..self.cones.len()).find(|&i| self.polys[i].relint_contains(v))
    }

    /// Deterministic coordinates on the orbit `O(τ)`.
    pub fn orbit_frame(&self, tau: usize) -> QuotientFrame {
        let gens: Vec<Vec<Int>> = self.cones[tau].iter().map(|&r| self.rays[r].clone()).collect();
        QuotientFrame::from_int_generators(self.ambient, &gens)
    }

    pub fn orbit_dim(&self, tau: usize) -> usize {
        self.ambient - self.cone_dim(tau)
    }

    /// Integer matrix `A` with `K_σ = A K_τ` for `τ ≼ σ`, mapping orbit
    /// coordinates of `O(τ)` to those of `O(σ)`.
    pub fn transition(&self, tau: usize, sigma: usize) -> Vec<Vec<Int>> {
        let kt = self.orbit_frame(tau);
        let ks = self.orbit_frame(sigma);
        let m = kt.target_dim();
        let ktt = linalg::transpose(kt.matrix(), self.ambient);
        ks.matrix()
            .iter()
            .map(|row| linalg::solve_integer(&ktt, row, m).expect("quotient frames are nested"))
            .collect()
    }

    /// The star of `τ` as a fan in the quotient frame of `O(τ)`.
    pub fn star_fan_quotient(&self, tau: usize) -> Fan {
        let frame = self.orbit_frame(tau);
        let around: Vec<usize> = (0..self.cones.len()).filter(|&s| self.is_face(tau, s)).collect();
        let mut ray_index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut rays = Vec::new();
        for &s in &around {
            for &r in &self.cones[s] {
                if !self.cones[tau].contains(&r) && !ray_index.contains_key(&r) {
                    let img = primitive_int(&frame.apply_int(&self.rays[r]));
                    ray_index.insert(r, rays.len());
                    rays.push(img);
                }
            }
        }
        let cones = around
            .iter()
            .map(|&s| self.cones[s].iter().filter(|r| !self.cones[tau].contains(r)).map(|r| ray_index[r]).collect())
            .collect();
        Fan::new(frame.target_dim(), rays, cones).expect("star of a cone is a fan")
    }

    /// The cones `σ + span(τ)` for `σ ⊇ τ`. They contain a linear subspace,
    /// so they are returned as cones rather than as a pointed fan.
    pub fn star_fan_ambient(&self, tau: usize) -> Vec<Cone> {
        let lines: Vec<Vec<Rat>> = self.cones[tau].iter().map(|&r| int_to_rat(&self.rays[r])).collect();
        (0..self.cones.len())
            .filter(|&s| self.is_face(tau, s))
            .map(|s| {
                let rays: Vec<Vec<Rat>> = self.cones[s].iter().map(|&r| int_to_rat(&self.rays[r])).collect();
                Cone::from_generators(self.ambient, &rays, &lines)
            })
            .collect()
    }

    /// Limit of `x + λ v` for `λ → ∞`: the cone with `v` in its relative
    /// interior and the image of `x` in the orbit coordinates.
    pub fn limit_point(&self, x: &[Rat], v: &[Rat]) -> Result<(usize, Vec<Rat>), FanError> {
        let tau = self.cone_containing_in_relint(v).ok_or(FanError::DirectionOutsideSupport)?;
        Ok((tau, self.orbit_frame(tau).apply(x)))
    }

    /// Same rays and cones, up to ordering.
    pub fn equivalent(&self, other: &Fan) -> bool {
        let key = |f: &Fan| -> BTreeSet<BTreeSet<Vec<Int>>> {
            f.cones.iter().map(|c| c.iter().map(|&r| f.rays[r].clone()).collect()).collect()
        };
        self.ambient == other.ambient && key(self) == key(other)
    }

    /// Refine a collection so that every piece has a single cone of the fan
    /// as recession cone.
    pub fn delta_decomposition(&self, polys: &[Polyhedron]) -> Result<Vec<Polyhedron>, FanError> {
        let mut out = Vec::new();
        for (pi, p) in polys.iter().enumerate() {
            out.extend(self.decompose_one(pi, p)?);
        }
        Ok(out)
    }

    fn decompose_one(&self, pi: usize, p: &Polyhedron) -> Result<Vec<Polyhedron>, FanError> {
        if p.is_empty() {
            return Ok(Vec::new());
        }
        let rec = p.recession_cone();
        let tiles = self.tiling_of(&rec).ok_or(FanError::NotCompactifying { polyhedron: pi })?;
        if tiles.len() == 1 {
            return Ok(vec![p.clone()]);
        }
        let regions: Vec<Polyhedron> = if self.is_complete() {
            self.maximal_cones().into_iter().map(|m| self.polys[m].polyhedron().clone()).collect()
        } else {
            self.convexity_regions(&tiles)?
        };
        let mut pieces = BTreeSet::new();
        for r in regions {
            let piece = p.meet(&r);
            if piece.dim() == p.dim() {
                pieces.insert(piece);
            }
        }
        for piece in &pieces {
            let r = piece.recession_cone();
            if !self.polys.contains(&r) {
                return Err(FanError::NoFanStructure);
            }
        }
        Ok(pieces.into_iter().collect())
    }

    /// Domains of linearity `{x : <m_j, x> >= <m_i, x> for all i}` of a
    /// strictly convex piecewise linear function on the given cones.
    fn convexity_regions(&self, tiles: &[usize]) -> Result<Vec<Polyhedron>, FanError> {
        let n = self.ambient;
        let t = tiles.len();
        let var = |j: usize, c: usize| j * n + c;
        let covec = |j: usize, r: &[Int], sign: i64| {
            let mut a = vec![Rat::zero(); t * n];
            for (c, x) in r.iter().enumerate() {
                a[var(j, c)] += Rat::from_integer(x * sign);
            }
            a
        };
        let mut ge = Vec::new();
        let mut eq = Vec::new();
        for (i, &si) in tiles.iter().enumerate() {
            for (j, &sj) in tiles.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &r in &self.cones[sj] {
                    let ray = &self.rays[r];
                    let mut a = covec(j, ray, 1);
                    for (x, y) in a.iter_mut().zip(covec(i, ray, -1)) {
                        *x += y;
                    }
                    if self.cones[si].contains(&r) {
                        eq.push(Constraint::new(a, Rat::zero()));
                    } else {
                        ge.push(Constraint::new(a, Rat::one()));
                    }
                }
            }
        }
        let m = lp::feasible_point(t * n, &ge, &eq).ok_or(FanError::NoFanStructure)?;
        let ms: Vec<Vec<Rat>> = (0..t).map(|j| m[j * n..(j + 1) * n].to_vec()).collect();
        Ok((0..t)
            .map(|j| {
                let ineqs = (0..t)
                    .filter(|&i| i != j)
                    .map(|i| Constraint::new(linalg::sub_vec(&ms[j], &ms[i]), Rat::zero()))
                    .collect();
                Polyhedron::new(n, ineqs, Vec::new())
            })
            .collect())
    }

    /// Thicken each piece of a Δ-decomposition by `eps`.
    pub fn delta_thickening(&self, polys: &[Polyhedron], eps: &Rat) -> Result<Vec<(Polyhedron, Polyhedron)>, FanError> {
        Ok(self.delta_decomposition(polys)?.into_iter().map(|p| {
            let t = p.thicken(eps);
            (p, t)
        }).collect())
    }

    /// For every stratum `O(τ)` met by the closure of a piece, the image of
    /// the piece lies in the interior of the image of its thickening.
    pub fn thickening_contains(&self, pairs: &[(Polyhedron, Polyhedron)]) -> bool {
        pairs.iter().all(|(p, t)| {
            let rec = p.recession_cone();
            (0..self.cones.len()).filter(|&i| self.cone_inside(i, &rec)).all(|tau| {
                let frame = self.orbit_frame(tau);
                let small = p.project_frame(&frame);
                let big = t.project_frame(&frame);
                big.eqs().is_empty()
                    && big.ineqs().iter().all(|c| match small.minimize(&c.normal) {
                        LpResult::Optimal { value, .. } => value > c.rhs,
                        _ => false,
                    })
            })
        })
    }

    /// The induced cycle on the orbit `O(τ)`: project every cell whose
    /// recession cone contains `τ`, keeping its weight.
    pub fn boundary_cycle(&self, s: &TropicalCycle, tau: usize) -> Result<TropicalCycle, FanError> {
        if s.ambient_dim() != self.ambient {
            return Err(CycleError::DimensionMismatch { expected: self.ambient, found: s.ambient_dim() }.into());
        }
        if self.cones[tau].is_empty() {
            return Ok(s.clone());
        }
        self.check_compatible(&s.support())?;
        let frame = self.orbit_frame(tau);
        let d = self.cone_dim(tau);
        let cells: Vec<Cell> = s
            .cells()
            .iter()
            .filter(|c| self.cone_inside(tau, &c.poly.recession_cone()))
            .map(|c| Cell::new(c.poly.project_frame(&frame), c.weight))
            .collect();
        if s.dim() < d {
            return Ok(TropicalCycle::empty(frame.target_dim(), 0));
        }
        Ok(TropicalCycle::new(frame.target_dim(), s.dim() - d, cells)?.aggregate())
    }

    /// Boundary cycle computed from an explicit Δ-decomposition of the cells.
    pub fn boundary_cycle_decomposed(&self, s: &TropicalCycle, tau: usize) -> Result<TropicalCycle, FanError> {
        self.check_compatible(&s.support())?;
        let frame = self.orbit_frame(tau);
        let d = self.cone_dim(tau);
        let mut cells = Vec::new();
        for c in s.cells() {
            for piece in self.delta_decomposition(std::slice::from_ref(&c.poly))? {
                let rec = piece.recession_cone();
                if self.cone_inside(tau, &rec) {
                    cells.push(Cell::new(piece.project_frame(&frame), c.weight));
                }
            }
        }
        if s.dim() < d {
            return Ok(TropicalCycle::empty(frame.target_dim(), 0));
        }
        Ok(TropicalCycle::new(frame.target_dim(), s.dim() - d, cells)?.aggregate())
    }

    /// `γ ·_c S` in `O(τ)`. For `τ = {0}` this is the ordinary stable
    /// intersection and no compatibility is required.
    pub fn compactified_stable_intersect(
        &self,
        gamma: &TropicalCycle,
        s: &TropicalCycle,
        tau: usize,
    ) -> Result<TropicalCycle, FanError> {
        let od = self.orbit_dim(tau);
        if gamma.ambient_dim() != od {
            return Err(FanError::FrameMismatch { expected: od, found: gamma.ambient_dim() });
        }
        let boundary = self.boundary_cycle(s, tau)?;
        Ok(stable_intersect(gamma, &boundary)?)
    }

    /// `(deg(γ ·_c S), deg(γ ·_c ρ(S)))`.
    pub fn recession_degree_check(
        &self,
        gamma: &TropicalCycle,
        s: &TropicalCycle,
        tau: usize,
    ) -> Result<(i64, i64), FanError> {
        let a = self.compactified_stable_intersect(gamma, s, tau)?.degree();
        let b = self.compactified_stable_intersect(gamma, &s.recession_fan(), tau)?.degree();
        Ok((a, b))
    }

    /// All boundary cycles of `S`.
    pub fn stratify(&self, s: &TropicalCycle) -> Result<StratifiedCycle, FanError> {
        let mut components = BTreeMap::new();
        for tau in 0..self.cones.len() {
            let b = self.boundary_cycle(s, tau)?;
            if !b.is_empty() {
                components.insert(self.cones[tau].clone(), b);
            }
        }
        Ok(StratifiedCycle { components })
    }
}

/// A cycle on the tropical toric variety: one cycle per orbit `O(τ)`,
/// keyed by the ray set of `τ`, each in the orbit's quotient frame.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StratifiedCycle {
    pub components: BTreeMap<Vec<usize>, TropicalCycle>,
}

impl StratifiedCycle {
    pub fn from_cycle(s: TropicalCycle) -> Self {
        StratifiedCycle { components: BTreeMap::from([(Vec::new(), s)]) }
    }

    pub fn component(&self, tau: &[usize]) -> Option<&TropicalCycle> {
        self.components.get(tau)
    }

    /// Add a cycle to the component of `τ`.
    pub fn add(&mut self, tau: Vec<usize>, c: TropicalCycle) -> Result<(), CycleError> {
        let merged = match self.components.remove(&tau) {
            Some(old) => old.plus(&c)?,
            None => c.aggregate(),
        };
        if !merged.is_empty() {
            self.components.insert(tau, merged);
        }
        Ok(())
    }

    pub fn is_balanced(&self) -> bool {
        self.components.values().all(TropicalCycle::is_balanced)
    }

    pub fn equals(&self, other: &StratifiedCycle) -> bool {
        let keys: BTreeSet<&Vec<usize>> = self.components.keys().chain(other.components.keys()).collect();
        keys.into_iter().all(|k| match (self.components.get(k), other.components.get(k)) {
            (Some(a), Some(b)) => a.equals(b),
            (Some(a), None) | (None, Some(a)) => a.aggregate().is_empty(),
            (None, None) => true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rats};

    fn quadrants() -> Fan {
        Fan::product_of_lines(2)
    }

    #[test]
    fn standard_fans_are_valid() {
        for f in [Fan::projective_space(2), Fan::projective_space(3), quadrants(), Fan::hirzebruch(3)] {
            assert!(f.issues().is_empty());
            assert!(f.is_complete());
            assert!(f.is_unimodular());
        }
        assert!(Fan::trivial(2).is_unimodular());
        assert!(!Fan::trivial(2).is_complete());
    }

    #[test]
    fn unimodularity_and_completeness() {
        let f = Fan::from_i64(2, &[vec![1, 0], vec![1, 2]], &[vec![0, 1]]).unwrap();
        assert!(!f.is_unimodular());
        let q = Fan::from_i64(2, &[vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap();
        assert!(!q.is_complete());
    }

    #[test]
    fn missing_face_is_reported() {
        let rays = vec![ints(&[1, 0]), ints(&[0, 1])];
        let err = Fan::new(2, rays, vec![vec![], vec![0, 1], vec![0]]).unwrap_err();
        assert!(matches!(err, FanError::MissingFace { .. }));
    }

    #[test]
    fn compatibility_examples() {
        let q = quadrants();
        let bounded = Polyhedron::point(&rats(&[1, 1]));
        assert!(q.is_compatible(std::slice::from_ref(&bounded)));
        let diag = Cone::from_rays(2, &[ints(&[1, 1])]).into_polyhedron();
        assert!(!q.is_compatible(std::slice::from_ref(&diag)));
        let f = Fan::from_i64(2, &[vec![1, 1]], &[vec![0]]).unwrap();
        assert!(f.is_compatible(&[diag]));
        let first = Cone::from_rays(2, &[ints(&[1, 0]), ints(&[0, 1])]).into_polyhedron();
        assert!(q.is_compactifying(&[first, bounded.clone()]));
        let narrow = Cone::from_rays(2, &[ints(&[1, 0]), ints(&[1, 1])]).into_polyhedron();
        assert!(!q.is_compactifying(&[narrow]));
    }

    #[test]
    fn decomposition_of_half_plane() {
        let q = quadrants();
        let upper = Polyhedron::from_rows(2, &[vec![0, 1, 0]], &[]);
        let pieces = q.delta_decomposition(&[upper]).unwrap();
        assert_eq!(pieces.len(), 2);
        for p in &pieces {
            assert_eq!(p.recession_cone().dim(), 2);
        }
        let bounded = Polyhedron::point(&rats(&[3, 3]));
        assert_eq!(q.delta_decomposition(std::slice::from_ref(&bounded)).unwrap(), vec![bounded]);
    }

    #[test]
    fn decomposition_for_incomplete_fan() {
        // Upper half plane with the fan of the two upper quadrants only.
        let f = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, 0]], &[vec![0, 1], vec![1, 2]]).unwrap();
        let upper = Polyhedron::from_rows(2, &[vec![0, 1, -1]], &[]);
        let pieces = f.delta_decomposition(&[upper]).unwrap();
        assert_eq!(pieces.len(), 2);
        let recs: BTreeSet<Cone> = pieces.iter().map(Polyhedron::recession_cone).collect();
        assert_eq!(recs.len(), 2);
    }

    #[test]
    fn star_fans() {
        let q = quadrants();
        let zero = q.zero_cone();
        assert!(q.star_fan_quotient(zero).equivalent(&q));
        let e1 = q.require_cone(&[0]).unwrap();
        let s = q.star_fan_quotient(e1);
        assert_eq!(s.ambient_dim(), 1);
        assert_eq!(s.cones().len(), 3);
        assert!(s.is_complete());
        let top = q.require_cone(&[0, 2]).unwrap();
        let s = q.star_fan_quotient(top);
        assert_eq!(s.ambient_dim(), 0);
        assert_eq!(s.cones().len(), 1);
        let amb = q.star_fan_ambient(e1);
        assert_eq!(amb.len(), 3);
        for c in &amb {
            assert!(c.contains(&rats(&[-5, 0])));
        }
    }

    #[test]
    fn limit_points() {
        let q = quadrants();
        let (tau, p) = q.limit_point(&rats(&[3, 5]), &rats(&[0, 0])).unwrap();
        assert_eq!(tau, q.zero_cone());
        assert_eq!(p, rats(&[3, 5]));
        let (tau, p) = q.limit_point(&rats(&[3, 5]), &rats(&[1, 0])).unwrap();
        assert_eq!(q.cone_rays(tau), &[0]);
        assert_eq!(p, rats(&[5]));
        let (tau, p) = q.limit_point(&rats(&[3, 5]), &rats(&[1, 2])).unwrap();
        assert_eq!(q.cone_dim(tau), 2);
        assert!(p.is_empty());
        assert_eq!(Fan::trivial(2).limit_point(&rats(&[0, 0]), &rats(&[1, 0])), Err(FanError::DirectionOutsideSupport));
    }

    #[test]
    fn boundary_of_standard_line() {
        let line = TropicalCycle::star_of_rays(&rats(&[0, 0]), &[(vec![-1, 0], 1), (vec![0, -1], 1), (vec![1, 1], 1)]);
        let f = Fan::from_i64(2, &[vec![-1, 0], vec![0, -1], vec![1, 1]], &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let tau = f.require_cone(&[2]).unwrap();
        let b = f.boundary_cycle(&line, tau).unwrap();
        assert_eq!(b.dim(), 0);
        assert_eq!(b.degree(), 1);
        assert!(f.boundary_cycle(&line, f.zero_cone()).unwrap().equals(&line));
        let top = f.require_cone(&[0, 2]).unwrap();
        assert!(f.boundary_cycle(&line, top).unwrap().is_empty());
        assert!(b.equals(&f.boundary_cycle_decomposed(&line, tau).unwrap()));
    }

    #[test]
    fn transition_matrices_compose_frames() {
        let f = Fan::projective_space(3);
        let tau = f.require_cone(&[0]).unwrap();
        let sigma = f.require_cone(&[0, 3]).unwrap();
        let a = f.transition(tau, sigma);
        let kt = f.orbit_frame(tau);
        let ks = f.orbit_frame(sigma);
        assert_eq!(linalg::mat_mul_int(&a, kt.matrix(), 3), ks.matrix().to_vec());
    }
}
