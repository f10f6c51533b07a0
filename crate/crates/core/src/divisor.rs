//! Torus-invariant divisors on toric varieties given by fans.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cycle::TropicalCycle;
use crate::fan::{Fan, FanError};
use crate::hypersurface::{tropical_hypersurface, HypersurfaceError, TropicalPolynomial};
use crate::linalg::{self, clear_denominators, dot_int, int, int_to_rat, primitive_int, Int, Rat};
use crate::lp::Constraint;
use crate::polyhedron::Polyhedron;
use crate::rational::{AffinePiece, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("fan is not complete")]
    NotComplete,
    #[error("fan is not unimodular")]
    NotUnimodular,
    #[error("divisor is not Cartier")]
    NotCartier,
    #[error("divisor is not ample")]
    NotAmple,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polytope has a non-lattice vertex")]
    NotLatticePolytope,
    #[error("corner locus differs from the codimension-one skeleton")]
    SkeletonMismatch,
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Hypersurface(#[from] HypersurfaceError),
}

/// `D = Σ a_ρ D_ρ`, coefficients listed in the order of the fan's rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDivisor {
    fan: Fan,
    coeffs: Vec<i64>,
}

/// Cartier data `m_σ` per maximal cone, keyed by the cone's ray set.
pub type CartierData = BTreeMap<Vec<usize>, Vec<Int>>;

impl ToricDivisor {
    pub fn new(fan: Fan, coeffs: Vec<i64>) -> Result<Self, DivisorError> {
        if coeffs.len() != fan.rays().len() {
            return Err(DivisorError::CoefficientCount { expected: fan.rays().len(), found: coeffs.len() });
        }
        Ok(ToricDivisor { fan, coeffs })
    }

    /// The prime divisor `D_ρ`.
    pub fn prime(fan: Fan, ray: usize) -> Self {
        let coeffs = (0..fan.rays().len()).map(|i| i64::from(i == ray)).collect();
        ToricDivisor { fan, coeffs }
    }

    /// `Σ_ρ D_ρ`.
    pub fn anticanonical(fan: Fan) -> Self {
        let coeffs = vec![1; fan.rays().len()];
        ToricDivisor { fan, coeffs }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
}

/// `div(χ^m) = Σ <m, u_ρ> D_ρ`.
pub fn principal_divisor(m: &[i64], fan: &Fan) -> ToricDivisor {
    let m = linalg::ints(m);
    let coeffs = fan.rays().iter().map(|u| dot_int(&m, u).to_i64().expect("coefficient fits in i64")).collect();
    ToricDivisor { fan: fan.clone(), coeffs }
}

/// Integral `m_σ` with `<m_σ, u_ρ> = -a_ρ` for the rays of every maximal
/// cone, if they exist.
pub fn is_cartier(d: &ToricDivisor) -> Option<CartierData> {
    let n = d.fan.ambient_dim();
    let mut out = BTreeMap::new();
    for sigma in d.fan.maximal_cones() {
        let rays = d.fan.cone_rays(sigma);
        let a: Vec<Vec<Int>> = rays.iter().map(|&r| d.fan.rays()[r].clone()).collect();
        let b: Vec<Int> = rays.iter().map(|&r| int(-d.coeffs[r])).collect();
        let m = linalg::solve_integer(&a, &b, n)?;
        out.insert(rays.to_vec(), m);
    }
    Some(out)
}

/// `<m_σ, u_ρ> > -a_ρ` for every maximal cone `σ` and ray `ρ ∉ σ`.
pub fn is_ample(d: &ToricDivisor) -> Result<bool, DivisorError> {
    if !d.fan.is_complete() {
        return Err(DivisorError::NotComplete);
    }
    let data = is_cartier(d).ok_or(DivisorError::NotCartier)?;
    Ok(data.iter().all(|(rays, m)| {
        (0..d.fan.rays().len())
            .filter(|r| !rays.contains(r))
            .all(|r| dot_int(m, &d.fan.rays()[r]) > int(-d.coeffs[r]))
    }))
}

/// `P_D = {m : <m, u_ρ> >= -a_ρ for all ρ}`.
pub fn divisor_polytope(d: &ToricDivisor) -> Polyhedron {
    let n = d.fan.ambient_dim();
    let ineqs = d
        .fan
        .rays()
        .iter()
        .zip(&d.coeffs)
        .map(|(u, a)| Constraint::new(int_to_rat(u), Rat::from_integer(int(-a))))
        .collect();
    Polyhedron::new(n, ineqs, Vec::new())
}

/// Lattice points of a bounded polyhedron.
pub fn lattice_points(p: &Polyhedron) -> Result<Vec<Vec<Int>>, DivisorError> {
    if p.is_empty() {
        return Ok(Vec::new());
    }
    if !p.is_bounded() {
        return Err(DivisorError::Unbounded);
    }
    let n = p.ambient_dim();
    let mut ranges = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::from_integer(int(1));
        let lo = p.minimize(&e).value().expect("bounded").ceil().to_integer();
        let hi = p.maximize(&e).value().expect("bounded").floor().to_integer();
        ranges.push((lo.to_i64().expect("small polytope"), hi.to_i64().expect("small polytope")));
    }
    let mut out = Vec::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(out);
    }
    loop {
        let x = linalg::rats(&cur);
        if p.contains(&x) {
            out.push(linalg::ints(&cur));
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// Inner normal fan of a full-dimensional lattice polytope.
pub fn normal_fan(p: &Polyhedron) -> Result<Fan, DivisorError> {
    let n = p.ambient_dim();
    if p.dim() != n as isize {
        return Err(DivisorError::NotFullDimensional);
    }
    if !p.is_bounded() {
        return Err(DivisorError::Unbounded);
    }
    let vrep = p.vrep();
    if vrep.vertices.iter().flatten().any(|x| !x.is_integer()) {
        return Err(DivisorError::NotLatticePolytope);
    }
    let rays: Vec<Vec<Int>> = p.ineqs().iter().map(|c| primitive_int(&clear_denominators(&c.normal))).collect();
    let tight: Vec<BTreeSet<usize>> = vrep
        .vertices
        .iter()
        .map(|v| (0..rays.len()).filter(|&i| p.ineqs()[i].eval(v) == p.ineqs()[i].rhs).collect())
        .collect();
    // The cone of a face is the set of facets containing it. Every face
    // through a vertex is the closure of a subset of the facets at that vertex.
    let closure = |s: &BTreeSet<usize>| -> Vec<usize> {
        let mut on_face = tight.iter().filter(|t| s.is_subset(t));
        let first = on_face.next().expect("a subset of tight facets is attained at its vertex").clone();
        on_face.fold(first, |acc, t| acc.intersection(t).copied().collect()).into_iter().collect()
    };
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::from([Vec::new()]);
    for t in &tight {
        for subset in t.iter().copied().powerset() {
            cones.insert(closure(&subset.into_iter().collect()));
        }
    }
    Ok(Fan::unchecked(n, rays, cones.into_iter().collect())?)
}

/// The piecewise linear `f` with `f(u_ρ) = a_ρ`, equal to `<-m_σ, ·>` on `σ`.
pub fn support_function(d: &ToricDivisor) -> Result<RationalFunction, DivisorError> {
    if !d.fan.is_complete() {
        return Err(DivisorError::NotComplete);
    }
    let data = is_cartier(d).ok_or(DivisorError::NotCartier)?;
    let n = d.fan.ambient_dim();
    let pieces = data
        .iter()
        .map(|(rays, m)| {
            let sigma = d.fan.cone_index(rays).expect("maximal cone of the fan");
            AffinePiece::new(d.fan.cone(sigma).polyhedron().clone(), m.iter().map(|x| -x).collect(), Rat::zero())
        })
        .collect();
    Ok(RationalFunction::new(n, pieces).expect("Cartier data glue continuously"))
}

/// Corner locus of `min_σ <m_σ, x>` for an ample divisor on a complete
/// unimodular fan; its support must be the codimension-one skeleton.
pub fn skeleton_divisor_check(d: &ToricDivisor) -> Result<TropicalCycle, DivisorError> {
    if !d.fan.is_unimodular() {
        return Err(DivisorError::NotUnimodular);
    }
    if !is_ample(d)? {
        return Err(DivisorError::NotAmple);
    }
    let n = d.fan.ambient_dim();
    let data = is_cartier(d).expect("ample divisors are Cartier");
    let terms = data.values().map(|m| (m.iter().map(|x| x.to_i64().expect("small exponent")).collect(), Rat::zero()));
    let f = TropicalPolynomial::new(n, terms)?;
    let h = tropical_hypersurface(&f)?;
    let walls: BTreeSet<&Polyhedron> =
        d.fan.cones_of_dim(n - 1).into_iter().map(|c| d.fan.cone(c).polyhedron()).collect();
    let cells: BTreeSet<&Polyhedron> = h.cells().iter().map(|c| &c.poly).collect();
    if walls != cells || h.cells().iter().any(|c| !c.weight.is_positive()) {
        return Err(DivisorError::SkeletonMismatch);
    }
    Ok(h)
}

/// Lattice length of the edge of `P_D` dual to a wall of the fan.
pub fn edge_length(d: &ToricDivisor, wall: usize) -> Option<i64> {
    let data = is_cartier(d)?;
    let around: Vec<&Vec<Int>> = data.iter().filter(|(rays, _)| d.fan.cone_rays(wall).iter().all(|r| rays.contains(r))).map(|(_, m)| m).collect();
    if around.len() != 2 {
        return None;
    }
    let diff: Vec<Int> = around[0].iter().zip(around[1]).map(|(a, b)| a - b).collect();
    let g = diff.iter().fold(Int::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    g.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ints, rats};

    #[test]
    fn principal_divisors() {
        let p2 = Fan::projective_space(2);
        assert_eq!(principal_divisor(&[0, 0], &p2).coeffs(), &[0, 0, 0]);
        assert_eq!(principal_divisor(&[1, 0], &p2).coeffs(), &[1, 0, -1]);
        assert_eq!(principal_divisor(&[1, 1], &p2).coeffs(), &[1, 1, -2]);
        let data = is_cartier(&principal_divisor(&[2, -3], &p2)).unwrap();
        assert!(data.values().all(|m| *m == ints(&[-2, 3])));
    }

    #[test]
    fn cartier_on_non_unimodular_fan() {
        // Complete fan with the cone <(1,0),(1,2)>, which has index two.
        let f = Fan::from_i64(
            2,
            &[vec![1, 0], vec![1, 2], vec![-1, 0], vec![0, -1]],
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap();
        assert!(f.is_complete());
        assert!(!f.is_unimodular());
        assert!(is_cartier(&ToricDivisor::new(f.clone(), vec![1, 0, 0, 0]).unwrap()).is_none());
        assert!(is_cartier(&ToricDivisor::new(f, vec![2, 0, 0, 0]).unwrap()).is_some());
        let smooth = Fan::hirzebruch(2);
        for r in 0..4 {
            assert!(is_cartier(&ToricDivisor::prime(smooth.clone(), r)).is_some());
        }
    }

    #[test]
    fn ampleness_on_projective_plane() {
        let p2 = Fan::projective_space(2);
        assert!(is_ample(&ToricDivisor::prime(p2.clone(), 2)).unwrap());
        assert!(!is_ample(&ToricDivisor::new(p2.clone(), vec![0, 0, 0]).unwrap()).unwrap());
        assert!(is_ample(&ToricDivisor::anticanonical(p2.clone())).unwrap());
        assert_eq!(is_ample(&ToricDivisor::new(Fan::trivial(2), vec![]).unwrap()), Err(DivisorError::NotComplete));
    }

    #[test]
    fn polytopes_and_normal_fans() {
        let p2 = Fan::projective_space(2);
        assert_eq!(divisor_polytope(&ToricDivisor::new(p2.clone(), vec![0, 0, 0]).unwrap()), Polyhedron::point(&rats(&[0, 0])));
        let d = ToricDivisor::anticanonical(p2.clone());
        let p = divisor_polytope(&d);
        let vertices: BTreeSet<Vec<Rat>> = p.vrep().vertices.into_iter().collect();
        let expect: BTreeSet<Vec<Rat>> = [rats(&[-1, -1]), rats(&[2, -1]), rats(&[-1, 2])].into_iter().collect();
        assert_eq!(vertices, expect);
        let certs: BTreeSet<Vec<Rat>> = is_cartier(&d).unwrap().values().map(|m| int_to_rat(m)).collect();
        assert_eq!(vertices, certs);
        assert!(normal_fan(&p).unwrap().equivalent(&p2));
        assert_eq!(lattice_points(&p).unwrap().len(), 10);

        let square = Polyhedron::from_generators(2, &[rats(&[0, 0]), rats(&[1, 0]), rats(&[0, 1]), rats(&[1, 1])], &[], &[]);
        assert!(normal_fan(&square).unwrap().equivalent(&Fan::product_of_lines(2)));
        let simplex = Polyhedron::from_generators(2, &[rats(&[0, 0]), rats(&[1, 0]), rats(&[0, 1])], &[], &[]);
        assert!(normal_fan(&simplex).unwrap().equivalent(&p2));
        let segment = Polyhedron::from_generators(2, &[rats(&[0, 0]), rats(&[1, 0])], &[], &[]);
        assert_eq!(normal_fan(&segment), Err(DivisorError::NotFullDimensional));
        let half = Polyhedron::from_generators(2, &[rats(&[0, 0]), rats(&[1, 0]), rats(&[0, 1])], &[rats(&[1, 1])], &[]);
        assert_eq!(normal_fan(&half), Err(DivisorError::Unbounded));
    }

    #[test]
    fn support_functions() {
        let p2 = Fan::projective_space(2);
        let zero = support_function(&ToricDivisor::new(p2.clone(), vec![0, 0, 0]).unwrap()).unwrap();
        assert!(zero.pieces().iter().all(|p| p.linear.iter().all(Zero::is_zero)));
        let f = support_function(&ToricDivisor::prime(p2.clone(), 2)).unwrap();
        assert_eq!(f.eval(&rats(&[1, 0])).unwrap(), Rat::zero());
        assert_eq!(f.eval(&rats(&[0, 1])).unwrap(), Rat::zero());
        assert_eq!(f.eval(&rats(&[-1, -1])).unwrap(), Rat::from_integer(int(1)));
        let g = support_function(&principal_divisor(&[2, 1], &p2)).unwrap();
        assert_eq!(g.as_affine(), Some((ints(&[2, 1]), Rat::zero())));
    }

    #[test]
    fn skeleton_checks() {
        let p2 = Fan::projective_space(2);
        let h = skeleton_divisor_check(&ToricDivisor::anticanonical(p2.clone())).unwrap();
        assert_eq!(h.cells().len(), 3);
        assert!(h.cells().iter().all(|c| c.weight == 3));
        let q = Fan::product_of_lines(2);
        let h = skeleton_divisor_check(&ToricDivisor::new(q, vec![1, 0, 1, 0]).unwrap()).unwrap();
        assert_eq!(h.cells().len(), 4);
        assert!(h.cells().iter().all(|c| c.weight == 1));
        let hz = Fan::hirzebruch(2);
        let d = ToricDivisor::new(hz.clone(), vec![0, 1, 1, 0]).unwrap();
        assert!(is_ample(&d).unwrap());
        let h = skeleton_divisor_check(&d).unwrap();
        assert_eq!(h.cells().len(), 4);
        for wall in hz.cones_of_dim(1) {
            let w = h.weight_at(&hz.cone(wall).polyhedron().relative_interior_point().unwrap());
            assert_eq!(Some(w), edge_length(&d, wall));
        }
    }
}
