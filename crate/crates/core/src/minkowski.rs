//! Minkowski weights on complete fans and their product.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cycle::{CycleError, TropicalCycle};
use crate::divisor::{support_function, DivisorError, ToricDivisor};
use crate::fan::{Fan, FanError};
use crate::linalg::{self, int_to_rat, lattice_index, primitive_int, Int, Lattice, Rat};
use crate::lp::{self, Constraint};
use crate::rational::{rational_intersect, FunctionError};
use crate::stable::{default_seed, DisplacementSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinkowskiError {
    #[error("fan is not complete")]
    NotComplete,
    #[error("fan is not unimodular")]
    NotUnimodular,
    #[error("cone {cone:?} is not in the fan")]
    NotACone { cone: Vec<usize> },
    #[error("cone {cone:?} does not have codimension {codim}")]
    WrongConeDimension { cone: Vec<usize>, codim: usize },
    #[error("balancing fails around cone {cone:?}")]
    NotBalanced { cone: Vec<usize> },
    #[error("weights live on different fans")]
    FanMismatch,
    #[error("expected codimension {expected}, found {found}")]
    WrongCodim { expected: usize, found: usize },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

/// An integer function on the cones of codimension `codim` of a complete
/// fan satisfying the balancing condition. Zero values are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiWeight {
    fan: Fan,
    codim: usize,
    values: BTreeMap<Vec<usize>, i64>,
}

impl MinkowskiWeight {
    pub fn new(fan: Fan, codim: usize, values: BTreeMap<Vec<usize>, i64>) -> Result<Self, MinkowskiError> {
        let w = Self::unchecked(fan, codim, values)?;
        if let Some(cone) = w.balancing_violations().into_iter().next() {
            return Err(MinkowskiError::NotBalanced { cone });
        }
        Ok(w)
    }

    /// Checks completeness and cone dimensions but not balancing.
    pub fn unchecked(fan: Fan, codim: usize, values: BTreeMap<Vec<usize>, i64>) -> Result<Self, MinkowskiError> {
        if !fan.is_complete() {
            return Err(MinkowskiError::NotComplete);
        }
        let n = fan.ambient_dim();
        let mut clean = BTreeMap::new();
        for (mut cone, w) in values {
            cone.sort_unstable();
            let i = fan.cone_index(&cone).ok_or_else(|| MinkowskiError::NotACone { cone: cone.clone() })?;
            if codim > n || fan.cone_dim(i) != n - codim {
                return Err(MinkowskiError::WrongConeDimension { cone, codim });
            }
            if w != 0 {
                *clean.entry(cone).or_insert(0) += w;
            }
        }
        clean.retain(|_, w| *w != 0);
        Ok(MinkowskiWeight { fan, codim, values: clean })
    }

    /// The zero weight of the given codimension.
    pub fn zero(fan: Fan, codim: usize) -> Self {
        MinkowskiWeight { fan, codim, values: BTreeMap::new() }
    }

    /// Weight one on every maximal cone: the unit of the product.
    pub fn fundamental(fan: Fan) -> Result<Self, MinkowskiError> {
        let values = fan.cones_of_dim(fan.ambient_dim()).into_iter().map(|c| (fan.cone_rays(c).to_vec(), 1)).collect();
        Self::new(fan, 0, values)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, i64> {
        &self.values
    }

    pub fn value(&self, cone: &[usize]) -> i64 {
        let mut key = cone.to_vec();
        key.sort_unstable();
        self.values.get(&key).copied().unwrap_or(0)
    }

    /// Cones of dimension `n - codim - 1` around which balancing fails.
    pub fn balancing_violations(&self) -> Vec<Vec<usize>> {
        let n = self.fan.ambient_dim();
        if self.codim >= n {
            return Vec::new();
        }
        let d = n - self.codim;
        let mut out = Vec::new();
        for tau in self.fan.cones_of_dim(d - 1) {
            let frame = self.fan.orbit_frame(tau);
            let mut sum = vec![Int::zero(); frame.target_dim()];
            for sigma in self.fan.cofaces_of_codim_one(tau) {
                let w = self.value(self.fan.cone_rays(sigma));
                if w == 0 {
                    continue;
                }
                let r = self
                    .fan
                    .cone_rays(sigma)
                    .iter()
                    .map(|&r| frame.apply_int(&self.fan.rays()[r]))
                    .find(|img| img.iter().any(|x| !x.is_zero()))
                    .expect("σ leaves the span of τ");
                for (s, x) in sum.iter_mut().zip(primitive_int(&r)) {
                    *s += x * w;
                }
            }
            if sum.iter().any(|x| !x.is_zero()) {
                out.push(self.fan.cone_rays(tau).to_vec());
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        let values = self.values.iter().map(|(c, w)| (c.clone(), w * k)).filter(|(_, w)| *w != 0).collect();
        MinkowskiWeight { values, ..self.clone() }
    }

    pub fn plus(&self, other: &MinkowskiWeight) -> Result<Self, MinkowskiError> {
        if self.fan != other.fan || self.codim != other.codim {
            return Err(MinkowskiError::FanMismatch);
        }
        let mut values = self.values.clone();
        for (c, w) in &other.values {
            *values.entry(c.clone()).or_insert(0) += w;
        }
        values.retain(|_, w| *w != 0);
        Ok(MinkowskiWeight { values, ..self.clone() })
    }
}

fn span_of(fan: &Fan, cone: usize) -> Vec<Vec<Rat>> {
    fan.cone_rays(cone).iter().map(|&r| int_to_rat(&fan.rays()[r])).collect()
}

/// A displacement vector outside every proper subspace `span σ + span τ`.
fn generic_displacement(fan: &Fan) -> Vec<Rat> {
    let n = fan.ambient_dim();
    let cones = fan.cones().len();
    let mut avoid = Vec::new();
    for a in 0..cones {
        for b in a..cones {
            let mut s = span_of(fan, a);
            s.extend(span_of(fan, b));
            let r = linalg::rank(&s);
            if r < n {
                avoid.push((s, r));
            }
        }
    }
    let mut seq = DisplacementSequence::new(default_seed(), n);
    loop {
        let v = seq.next_vector();
        let generic = avoid.iter().all(|(s, r)| {
            let mut with = s.clone();
            with.push(v.clone());
            linalg::rank(&with) > *r
        });
        if generic {
            return v;
        }
    }
}

/// `v ∈ σ - τ`.
fn displaced_meet(fan: &Fan, sigma: usize, tau: usize, v: &[Rat]) -> bool {
    let n = fan.ambient_dim();
    let gens: Vec<Vec<Rat>> = fan
        .cone_rays(sigma)
        .iter()
        .map(|&r| int_to_rat(&fan.rays()[r]))
        .chain(fan.cone_rays(tau).iter().map(|&r| fan.rays()[r].iter().map(|x| Rat::from_integer(-x)).collect()))
        .collect();
    let k = gens.len();
    let eq: Vec<Constraint> = (0..n)
        .map(|i| Constraint::new(gens.iter().map(|g| g[i].clone()).collect(), v[i].clone()))
        .collect();
    let ge: Vec<Constraint> = (0..k)
        .map(|j| {
            let mut e = vec![Rat::zero(); k];
            e[j] = Rat::from_integer(Int::from(1));
            Constraint::new(e, Rat::zero())
        })
        .collect();
    lp::feasible_point(k, &ge, &eq).is_some()
}

/// Product by the fan displacement rule:
/// `(c1 c2)(γ) = Σ [N : N_σ + N_τ] c1(σ) c2(τ)` over `σ, τ ⊇ γ` with
/// `σ ∩ (τ + v) ≠ ∅` for a generic `v`.
pub fn mw_product(c1: &MinkowskiWeight, c2: &MinkowskiWeight) -> Result<MinkowskiWeight, MinkowskiError> {
    if c1.fan != c2.fan {
        return Err(MinkowskiError::FanMismatch);
    }
    let fan = &c1.fan;
    let n = fan.ambient_dim();
    let k = c1.codim + c2.codim;
    if k > n {
        return Ok(MinkowskiWeight::zero(fan.clone(), k));
    }
    let v = generic_displacement(fan);
    let index = |a: &[usize], b: &[usize]| -> Option<i64> {
        let gens: Vec<Vec<Int>> = a.iter().chain(b).map(|&r| fan.rays()[r].clone()).collect();
        let l = Lattice::new(n, &gens);
        (l.rank() == n).then(|| lattice_index(&l, &Lattice::standard(n)).ok()?.to_i64()).flatten()
    };
    let mut values = BTreeMap::new();
    for gamma in fan.cones_of_dim(n - k) {
        let mut total = 0i64;
        for (s, w1) in &c1.values {
            let sigma = fan.cone_index(s).expect("validated cone");
            if !fan.is_face(gamma, sigma) {
                continue;
            }
            for (t, w2) in &c2.values {
                let tau = fan.cone_index(t).expect("validated cone");
                if !fan.is_face(gamma, tau) {
                    continue;
                }
                let Some(m) = index(s, t) else { continue };
                if displaced_meet(fan, sigma, tau, &v) {
                    total += m * w1 * w2;
                }
            }
        }
        if total != 0 {
            values.insert(fan.cone_rays(gamma).to_vec(), total);
        }
    }
    Ok(MinkowskiWeight { fan: fan.clone(), codim: k, values })
}

/// Value on the zero cone of a weight of codimension `n`.
pub fn mw_degree(c: &MinkowskiWeight) -> Result<i64, MinkowskiError> {
    let n = c.fan.ambient_dim();
    if c.codim != n {
        return Err(MinkowskiError::WrongCodim { expected: n, found: c.codim });
    }
    Ok(c.value(&[]))
}

/// The weight read off the recession fan of a cycle compatible with the fan.
pub fn mw_from_cycle(s: &TropicalCycle, fan: &Fan) -> Result<MinkowskiWeight, MinkowskiError> {
    if !fan.is_complete() {
        return Err(MinkowskiError::NotComplete);
    }
    let n = fan.ambient_dim();
    if s.ambient_dim() != n {
        return Err(CycleError::DimensionMismatch { expected: n, found: s.ambient_dim() }.into());
    }
    fan.check_compatible(&s.support())?;
    let rec = s.recession_fan();
    let values = fan
        .cones_of_dim(s.dim())
        .into_iter()
        .map(|c| {
            let x = fan.cone(c).polyhedron().relative_interior_point().expect("cone is nonempty");
            (fan.cone_rays(c).to_vec(), rec.weight_at(&x))
        })
        .collect();
    MinkowskiWeight::new(fan.clone(), n - s.dim(), values)
}

/// The class of any cycle in `R^n` on a complete unimodular fan:
/// `c(σ) = deg(ψ_{ρ_1} ··· ψ_{ρ_k} · S)` for `σ = ⟨ρ_1, …, ρ_k⟩`, where
/// `ψ_ρ` is the support function of `D_ρ`.
pub fn mw_class_of_cycle(s: &TropicalCycle, fan: &Fan) -> Result<MinkowskiWeight, MinkowskiError> {
    if !fan.is_complete() {
        return Err(MinkowskiError::NotComplete);
    }
    if !fan.is_unimodular() {
        return Err(MinkowskiError::NotUnimodular);
    }
    let n = fan.ambient_dim();
    if s.ambient_dim() != n {
        return Err(CycleError::DimensionMismatch { expected: n, found: s.ambient_dim() }.into());
    }
    let psi = (0..fan.rays().len())
        .map(|r| support_function(&ToricDivisor::prime(fan.clone(), r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cache: BTreeMap<Vec<usize>, TropicalCycle> = BTreeMap::from([(Vec::new(), s.aggregate())]);
    let mut values = BTreeMap::new();
    for sigma in fan.cones_of_dim(s.dim()) {
        let rays = fan.cone_rays(sigma).to_vec();
        for len in 1..=rays.len() {
            let key = rays[..len].to_vec();
            if !cache.contains_key(&key) {
                let prev = &cache[&rays[..len - 1]];
                let next = rational_intersect(&psi[rays[len - 1]], prev)?;
                cache.insert(key, next);
            }
        }
        values.insert(rays.clone(), cache[&rays].degree());
    }
    MinkowskiWeight::new(fan.clone(), n - s.dim(), values)
}

/// The class of a Cartier divisor, read from the finite part of the
/// intersection of its support function with `R^n`.
pub fn mw_of_divisor(d: &ToricDivisor) -> Result<MinkowskiWeight, MinkowskiError> {
    let fan = d.fan();
    let n = fan.ambient_dim();
    if n == 0 {
        return Ok(MinkowskiWeight::zero(fan.clone(), 1));
    }
    let f = support_function(d)?;
    let skeleton = rational_intersect(&f, &TropicalCycle::whole_space(n))?;
    // The corner locus lies on the walls but its cells may be coarser than
    // the fan, so read the weights at interior points of the walls.
    let values = fan
        .cones_of_dim(n - 1)
        .into_iter()
        .map(|c| {
            let x = fan.cone(c).polyhedron().relative_interior_point().expect("cone is nonempty");
            (fan.cone_rays(c).to_vec(), skeleton.weight_at(&x))
        })
        .collect();
    MinkowskiWeight::new(fan.clone(), 1, values)
}

/// Degree of the product of all given weights, whose codimensions must sum to `n`.
pub fn degree_pairing_check(
    c1: &MinkowskiWeight,
    c2: &MinkowskiWeight,
    pairing: &[MinkowskiWeight],
) -> Result<i64, MinkowskiError> {
    let mut acc = mw_product(c1, c2)?;
    for p in pairing {
        acc = mw_product(&acc, p)?;
    }
    mw_degree(&acc)
}
