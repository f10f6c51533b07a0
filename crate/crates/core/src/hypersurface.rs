//! Tropical polynomials (min-plus) and their hypersurfaces.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_integer::Integer;
use thiserror::Error;

use crate::cycle::{Cell, TropicalCycle};
use crate::linalg::{int, Int, Rat};
use crate::lp::Constraint;
use crate::polyhedron::Polyhedron;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypersurfaceError {
    #[error("a tropical polynomial needs at least one term")]
    NoTerms,
    #[error("a single term has no corner locus")]
    SingleTerm,
    #[error("exponent has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// `f(x) = min_m (val_m + <m, x>)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    ambient: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl TropicalPolynomial {
    /// Repeated exponents keep the smallest valuation.
    pub fn new(ambient: usize, terms: impl IntoIterator<Item = (Vec<i64>, Rat)>) -> Result<Self, HypersurfaceError> {
        let mut map: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (e, v) in terms {
            if e.len() != ambient {
                return Err(HypersurfaceError::DimensionMismatch { expected: ambient, found: e.len() });
            }
            map.entry(e).and_modify(|old| *old = old.clone().min(v.clone())).or_insert(v);
        }
        if map.is_empty() {
            return Err(HypersurfaceError::NoTerms);
        }
        Ok(TropicalPolynomial { ambient, terms: map })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rat> {
        &self.terms
    }

    fn term_value(e: &[i64], v: &Rat, x: &[Rat]) -> Rat {
        e.iter().zip(x).fold(v.clone(), |acc, (a, b)| acc + b * Rat::from_integer(int(*a)))
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.terms
            .iter()
            .map(|(e, v)| Self::term_value(e, v, x))
            .min()
            .expect("at least one term")
    }

    /// Terms attaining the minimum at `x`.
    pub fn active_terms(&self, x: &[Rat]) -> Vec<&Vec<i64>> {
        let m = self.eval(x);
        self.terms.iter().filter(|(e, v)| Self::term_value(e, v, x) == m).map(|(e, _)| e).collect()
    }

    /// Convex hull of the exponents.
    pub fn newton_polytope(&self) -> Polyhedron {
        let pts: Vec<Vec<Rat>> = self.terms.keys().map(|e| crate::linalg::rats(e)).collect();
        Polyhedron::from_generators(self.ambient, &pts, &[], &[])
    }
}

fn lattice_length(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).fold(0i64, |g, (x, y)| g.gcd(&(x - y)))
}

/// Region where the terms `i` and `j` tie for the minimum.
fn tie_region(terms: &[(&Vec<i64>, &Rat)], i: usize, j: usize, n: usize) -> Polyhedron {
    let diff = |a: usize, b: usize| -> Vec<Rat> {
        terms[a].0.iter().zip(terms[b].0).map(|(x, y)| Rat::from_integer(Int::from(x - y))).collect()
    };
    let eq = Constraint::new(diff(i, j), terms[j].1 - terms[i].1);
    let ineqs = (0..terms.len())
        .filter(|&k| k != i && k != j)
        .map(|k| Constraint::new(diff(k, i), terms[i].1 - terms[k].1))
        .collect();
    Polyhedron::new(n, ineqs, vec![eq])
}

/// Corner locus of `f`, each facet weighted by the lattice length of the
/// dual edge of the regular subdivision of the Newton polytope.
pub fn tropical_hypersurface(f: &TropicalPolynomial) -> Result<TropicalCycle, HypersurfaceError> {
    let n = f.ambient;
    if f.terms.len() < 2 {
        return Err(HypersurfaceError::SingleTerm);
    }
    let terms: Vec<(&Vec<i64>, &Rat)> = f.terms.iter().collect();
    let mut cells: BTreeSet<Polyhedron> = BTreeSet::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let region = tie_region(&terms, i, j, n);
            if region.dim() == n as isize - 1 {
                cells.insert(region);
            }
        }
    }
    let cells = cells
        .into_iter()
        .map(|p| {
            let x = p.relative_interior_point().expect("region is nonempty");
            let w = f
                .active_terms(&x)
                .into_iter()
                .tuple_combinations()
                .map(|(a, b)| lattice_length(a, b))
                .max()
                .expect("two terms tie on the region");
            Cell::new(p, w)
        })
        .collect();
    Ok(TropicalCycle::new(n, n - 1, cells).expect("tie regions have codimension one").aggregate())
}
