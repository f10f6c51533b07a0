//! Stable intersection of tropical cycles by fan displacement.
//!
//! Two cells `σ1`, `σ2` with transverse direction spaces contribute
//! `w(σ1) w(σ2) [Z^n : L_σ1 + L_σ2]` on `σ1 ∩ σ2` when `σ1 ∩ (σ2 + εv)` is
//! nonempty for all small `ε > 0`. The displacement `v` is drawn from a
//! seeded rational sequence and certified generic for the given input.

use std::sync::OnceLock;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycle::{Cell, CycleError, TropicalCycle};
use crate::linalg::{self, lattice_index, Lattice, Rat};
use crate::lp::{self, Constraint, LpResult};
use crate::polyhedron::Polyhedron;

const DEFAULT_SEED: u64 = 0x7109_c4c1e;

/// Seed of the displacement sequence; `TROPCYCLE_SEED` overrides the default.
pub fn default_seed() -> u64 {
    static SEED: OnceLock<u64> = OnceLock::new();
    *SEED.get_or_init(|| {
        std::env::var("TROPCYCLE_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
    })
}

/// Deterministic source of candidate displacement vectors.
pub struct DisplacementSequence {
    rng: ChaCha8Rng,
    n: usize,
}

impl DisplacementSequence {
    pub fn new(seed: u64, n: usize) -> Self {
        DisplacementSequence { rng: ChaCha8Rng::seed_from_u64(seed), n }
    }

    pub fn next_vector(&mut self) -> Vec<Rat> {
        (0..self.n)
            .map(|_| {
                let num: i64 = self.rng.gen_range(-100_000..=100_000);
                let den: i64 = self.rng.gen_range(1..=997);
                linalg::ratio(num, den)
            })
            .collect()
    }
}

/// A subspace to be avoided, stored by a spanning set.
struct Avoid(Vec<Vec<Rat>>);

impl Avoid {
    fn contains(&self, v: &[Rat]) -> bool {
        let r = linalg::rank(&self.0);
        let mut with = self.0.clone();
        with.push(v.to_vec());
        linalg::rank(&with) == r
    }
}

fn direction_space_with(p: &Polyhedron, extra: &[&Constraint]) -> Vec<Vec<Rat>> {
    let a: Vec<Vec<Rat>> = p.eqs().iter().chain(extra.iter().copied()).map(|c| c.normal.clone()).collect();
    linalg::nullspace(&a, p.ambient_dim())
}

/// Directions of faces of `p` through the relative interior point `x` of a
/// subset of `p`, one space per subset of the constraints tight at `x`.
fn face_directions(p: &Polyhedron, x: &[Rat]) -> Vec<Vec<Vec<Rat>>> {
    let tight: Vec<&Constraint> = p.ineqs().iter().filter(|c| c.eval(x) == c.rhs).collect();
    let limit = tight.len().min(12);
    (0u32..1 << limit)
        .map(|mask| {
            let chosen: Vec<&Constraint> =
                tight.iter().take(limit).enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| *c).collect();
            direction_space_with(p, &chosen)
        })
        .collect()
}

struct Candidate {
    i: usize,
    j: usize,
    region: Polyhedron,
    index: i64,
}

/// Stable intersection with the default seed.
pub fn stable_intersect(a: &TropicalCycle, b: &TropicalCycle) -> Result<TropicalCycle, CycleError> {
    stable_intersect_seeded(a, b, default_seed())
}

pub fn stable_intersect_seeded(a: &TropicalCycle, b: &TropicalCycle, seed: u64) -> Result<TropicalCycle, CycleError> {
    let n = a.ambient_dim();
    if b.ambient_dim() != n {
        return Err(CycleError::DimensionMismatch { expected: n, found: b.ambient_dim() });
    }
    if a.dim() + b.dim() < n {
        return Ok(TropicalCycle::empty(n, 0));
    }
    let k = a.dim() + b.dim() - n;
    let pairs: Vec<(usize, usize)> =
        (0..a.cells().len()).flat_map(|i| (0..b.cells().len()).map(move |j| (i, j))).collect();
    let analysed: Vec<(Vec<Avoid>, Option<Candidate>)> = pairs
        .par_iter()
        .map(|&(i, j)| analyse_pair(&a.cells()[i], &b.cells()[j], i, j, k))
        .collect();
    let mut avoid = Vec::new();
    let mut candidates = Vec::new();
    for (av, cand) in analysed {
        avoid.extend(av);
        candidates.extend(cand);
    }
    let mut seq = DisplacementSequence::new(seed, n);
    let v = loop {
        let v = seq.next_vector();
        if avoid.iter().all(|s| !s.contains(&v)) {
            break v;
        }
    };
    let cells: Vec<Cell> = candidates
        .par_iter()
        .filter(|c| survives_displacement(&a.cells()[c.i].poly, &b.cells()[c.j].poly, &v))
        .map(|c| Cell::new(c.region.clone(), a.cells()[c.i].weight * b.cells()[c.j].weight * c.index))
        .collect();
    Ok(TropicalCycle::from_parts(n, k, cells).aggregate())
}

fn analyse_pair(c1: &Cell, c2: &Cell, i: usize, j: usize, k: usize) -> (Vec<Avoid>, Option<Candidate>) {
    let (p, q) = (&c1.poly, &c2.poly);
    let n = p.ambient_dim();
    let mut span = p.direction_space();
    span.extend(q.direction_space());
    let transverse = linalg::rank(&span) == n;
    if !transverse {
        if p.meets(q) {
            return (vec![Avoid(span)], None);
        }
        return (Vec::new(), None);
    }
    if !p.meets(q) {
        return (Vec::new(), None);
    }
    let region = p.meet(q);
    if region.dim() != k as isize {
        return (Vec::new(), None);
    }
    let x = region.relative_interior_point().expect("nonempty");
    let mut avoid = Vec::new();
    for d1 in face_directions(p, &x) {
        for d2 in face_directions(q, &x) {
            let mut s = d1.clone();
            s.extend(d2);
            if linalg::rank(&s) < n {
                avoid.push(Avoid(s));
            }
        }
    }
    let sum = p.direction_lattice().sum(&q.direction_lattice());
    let index = lattice_index(&sum, &Lattice::standard(n))
        .expect("transverse direction lattices span a full-rank sublattice")
        .to_i64()
        .expect("lattice index fits in i64");
    (avoid, Some(Candidate { i, j, region, index }))
}

/// Decide `p ∩ (q + εv) ≠ ∅` for all small `ε > 0` with one LP in `(x, ε)`.
fn survives_displacement(p: &Polyhedron, q: &Polyhedron, v: &[Rat]) -> bool {
    let n = p.ambient_dim();
    let lift_p = |c: &Constraint| {
        let mut a = c.normal.clone();
        a.push(Rat::zero());
        Constraint::new(a, c.rhs.clone())
    };
    // x - εv ∈ q:  <a, x> - ε <a, v> (>= or =) b.
    let lift_q = |c: &Constraint| {
        let mut a = c.normal.clone();
        a.push(-linalg::dot(&c.normal, v));
        Constraint::new(a, c.rhs.clone())
    };
    let mut ge: Vec<Constraint> = p.ineqs().iter().map(lift_p).chain(q.ineqs().iter().map(lift_q)).collect();
    let mut eps = vec![Rat::zero(); n + 1];
    eps[n] = Rat::one();
    ge.push(Constraint::new(eps.clone(), Rat::zero()));
    let mut cap = vec![Rat::zero(); n + 1];
    cap[n] = -Rat::one();
    ge.push(Constraint::new(cap, -Rat::one()));
    let eq: Vec<Constraint> = p.eqs().iter().map(lift_p).chain(q.eqs().iter().map(lift_q)).collect();
    match lp::maximize(n + 1, &eps, &ge, &eq) {
        LpResult::Optimal { value, .. } => value > Rat::zero(),
        _ => false,
    }
}

/// Left-associated iterated stable intersection.
pub fn multi_stable_intersect(cycles: &[TropicalCycle]) -> Result<TropicalCycle, CycleError> {
    let Some(first) = cycles.first() else {
        return Err(CycleError::DimensionMismatch { expected: 1, found: 0 });
    };
    let n = first.ambient_dim();
    let mut acc = first.clone();
    let mut codim = n - first.dim();
    for c in &cycles[1..] {
        if c.ambient_dim() != n {
            return Err(CycleError::DimensionMismatch { expected: n, found: c.ambient_dim() });
        }
        codim += n - c.dim();
        if codim > n {
            return Ok(TropicalCycle::empty(n, 0));
        }
        acc = stable_intersect(&acc, c)?;
    }
    Ok(acc)
}

/// Connected component containing `u` of the set-theoretic intersection of
/// the supports of `cycles`.
pub fn intersection_component(cycles: &[TropicalCycle], u: &[Rat]) -> Option<Vec<Polyhedron>> {
    let (first, rest) = cycles.split_first()?;
    let mut meet = first.support();
    for c in rest {
        meet = meet
            .iter()
            .flat_map(|a| c.cells().iter().map(move |b| a.meet(&b.poly)))
            .filter(|p| !p.is_empty())
            .collect();
    }
    crate::cycle::connected_components(&meet).into_iter().find(|comp| comp.iter().any(|p| p.contains(u)))
}

/// Stable intersection restricted to the component of the intersection of
/// supports that contains `u`.
pub fn stable_intersect_on_component(cycles: &[TropicalCycle], u: &[Rat]) -> Result<TropicalCycle, CycleError> {
    let product = multi_stable_intersect(cycles)?;
    match intersection_component(cycles, u) {
        Some(component) => product.restrict_to_component(&component),
        None => Ok(TropicalCycle::empty(product.ambient_dim(), product.dim())),
    }
}

/// Intersection multiplicity at `u` for cycles of complementary dimension.
pub fn local_multiplicity(a: &TropicalCycle, b: &TropicalCycle, u: &[Rat]) -> Result<i64, CycleError> {
    let n = a.ambient_dim();
    if b.ambient_dim() != n || u.len() != n {
        return Err(CycleError::DimensionMismatch { expected: n, found: b.ambient_dim() });
    }
    if a.dim() + b.dim() != n {
        return Err(CycleError::DimensionMismatch { expected: n, found: a.dim() + b.dim() });
    }
    let (Ok(sa), Ok(sb)) = (a.star(u), b.star(u)) else { return Ok(0) };
    let product = stable_intersect(&sa, &sb)?;
    Ok(product.weight_at(&vec![Rat::zero(); n]))
}

/// Intersection multiplicity at `u` computed inside the lattice of a
/// weight-one maximal face of an ambient cycle `y` through `u`.
pub fn relative_multiplicity_in_smooth_face(
    a: &TropicalCycle,
    b: &TropicalCycle,
    y: &TropicalCycle,
    u: &[Rat],
) -> Result<i64, CycleError> {
    let y = y.aggregate();
    let face = y.cells().iter().find(|c| c.poly.relint_contains(u)).ok_or(CycleError::PointNotInterior)?;
    if face.weight != 1 {
        return Err(CycleError::NotMultiplicityOneFace { weight: face.weight });
    }
    let w = face.poly.direction_lattice();
    let basis = w.basis().to_vec();
    let sa = a.star(u)?;
    let sb = b.star(u)?;
    let inside = |s: &TropicalCycle| {
        s.cells().iter().all(|c| c.poly.direction_space().iter().all(|d| w.contains(&linalg::clear_denominators(d))))
    };
    if !inside(&sa) || !inside(&sb) {
        return Err(CycleError::NotContainedInFace);
    }
    let ra = sa.pullback_to_subspace(&basis);
    let rb = sb.pullback_to_subspace(&basis);
    local_multiplicity(&ra, &rb, &vec![Rat::zero(); basis.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rats;
    use crate::polyhedron::Cone;

    fn line(dir: &[i64], w: i64) -> TropicalCycle {
        let p = Cone::from_generators(dir.len(), &[], &[rats(dir)]).into_polyhedron();
        TropicalCycle::new(dir.len(), 1, vec![Cell::new(p, w)]).unwrap()
    }

    fn standard_line(apex: &[i64]) -> TropicalCycle {
        TropicalCycle::star_of_rays(&rats(apex), &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, -1], 1)])
    }

    #[test]
    fn axes_with_weights() {
        let p = stable_intersect(&line(&[1, 0], 2), &line(&[0, 1], 3)).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.cells().len(), 1);
        assert_eq!(p.weight_at(&rats(&[0, 0])), 6);
    }

    #[test]
    fn self_intersection_of_star() {
        for n in 1..=5 {
            let s = TropicalCycle::star_of_rays(&rats(&[0, 0]), &[(vec![1, 0], 1), (vec![0, 1], n), (vec![-1, -n], 1)]);
            assert_eq!(local_multiplicity(&s, &s, &rats(&[0, 0])).unwrap(), n);
        }
    }

    #[test]
    fn two_generic_lines() {
        let p = stable_intersect(&standard_line(&[0, 0]), &standard_line(&[1, 3])).unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.cells().len(), 1);
        assert_eq!(p.weight_at(&rats(&[0, 2])), 1);
    }

    #[test]
    fn self_intersection_of_line_is_its_vertex() {
        let l = standard_line(&[2, 5]);
        let p = stable_intersect(&l, &l).unwrap();
        assert_eq!(p.weight_at(&rats(&[2, 5])), 1);
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn local_multiplicity_off_support() {
        let l = standard_line(&[0, 0]);
        assert_eq!(local_multiplicity(&l, &l, &rats(&[3, -4])).unwrap(), 0);
        assert_eq!(local_multiplicity(&line(&[1, 0], 1), &line(&[0, 1], 1), &rats(&[0, 0])).unwrap(), 1);
    }

    #[test]
    fn identity_and_dimension_count() {
        let l = standard_line(&[0, 0]);
        let r = multi_stable_intersect(&[l.clone(), TropicalCycle::whole_space(2)]).unwrap();
        assert!(r.equals(&l));
        let r = multi_stable_intersect(&[l.clone(), l.clone(), l]).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn coordinate_hyperplanes_in_space() {
        let plane = |i: usize| {
            let mut row = vec![0i64; 4];
            row[i] = 1;
            TropicalCycle::new(3, 2, vec![Cell::new(Polyhedron::from_rows(3, &[], &[row]), 1)]).unwrap()
        };
        let r = multi_stable_intersect(&[plane(0), plane(1), plane(2)]).unwrap();
        assert_eq!(r.degree(), 1);
        assert_eq!(r.weight_at(&rats(&[0, 0, 0])), 1);
    }

    #[test]
    fn multiplicity_inside_a_plane() {
        let plane = TropicalCycle::new(3, 2, vec![Cell::new(Polyhedron::from_rows(3, &[], &[vec![0, 0, 1, 0]]), 1)])
            .unwrap();
        let l1 = line(&[1, 0, 0], 1);
        let l2 = line(&[0, 1, 0], 1);
        let u = rats(&[0, 0, 0]);
        assert_eq!(relative_multiplicity_in_smooth_face(&l1, &l2, &plane, &u).unwrap(), 1);
        let space = TropicalCycle::whole_space(2);
        let a = line(&[1, 0], 2);
        let b = line(&[1, 1], 1);
        let u2 = rats(&[0, 0]);
        assert_eq!(
            relative_multiplicity_in_smooth_face(&a, &b, &space, &u2).unwrap(),
            local_multiplicity(&a, &b, &u2).unwrap()
        );
        assert_eq!(
            relative_multiplicity_in_smooth_face(&l1, &l2, &plane, &rats(&[0, 0, 1])),
            Err(CycleError::PointNotInterior)
        );
    }
}
