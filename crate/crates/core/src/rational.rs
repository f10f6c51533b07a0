//! Tropical rational functions, their intersection with cycles, and Cartier
//! divisors on cycles of a tropical toric variety.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cycle::{Cell, CycleError, TropicalCycle};
use crate::fan::{Fan, FanError, StratifiedCycle};
use crate::hypersurface::TropicalPolynomial;
use crate::linalg::{self, dot_int, dot_mixed, primitive_generator, primitive_int, Int, Lattice, QuotientFrame, Rat};
use crate::lp::Constraint;
use crate::polyhedron::Polyhedron;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a rational function needs at least one piece")]
    NoPieces,
    #[error("pieces {a} and {b} disagree on their overlap")]
    Discontinuous { a: usize, b: usize },
    #[error("point is outside every piece")]
    PointOutsideDomain,
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

/// An integral affine function `x ↦ <linear, x> + constant` on a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffinePiece {
    pub domain: Polyhedron,
    pub linear: Vec<Int>,
    pub constant: Rat,
}

impl AffinePiece {
    pub fn new(domain: Polyhedron, linear: Vec<Int>, constant: Rat) -> Self {
        AffinePiece { domain, linear, constant }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot_mixed(&self.linear, x) + &self.constant
    }
}

/// A continuous piecewise integral affine function on `R^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    ambient: usize,
    pieces: Vec<AffinePiece>,
}

impl RationalFunction {
    /// Validates dimensions and continuity; empty pieces are dropped.
    pub fn new(ambient: usize, pieces: Vec<AffinePiece>) -> Result<Self, FunctionError> {
        for p in &pieces {
            for found in [p.domain.ambient_dim(), p.linear.len()] {
                if found != ambient {
                    return Err(FunctionError::DimensionMismatch { expected: ambient, found });
                }
            }
        }
        let pieces: Vec<AffinePiece> = pieces.into_iter().filter(|p| !p.domain.is_empty()).collect();
        if pieces.is_empty() {
            return Err(FunctionError::NoPieces);
        }
        for (i, j) in (0..pieces.len()).tuple_combinations() {
            let (a, b) = (&pieces[i], &pieces[j]);
            if a.linear == b.linear && a.constant == b.constant {
                continue;
            }
            let overlap = a.domain.meet(&b.domain);
            if overlap.is_empty() {
                continue;
            }
            let diff: Vec<Int> = a.linear.iter().zip(&b.linear).map(|(x, y)| x - y).collect();
            let flat = overlap.direction_space().iter().all(|d| dot_mixed(&diff, d).is_zero());
            let x = overlap.relative_interior_point().expect("overlap is nonempty");
            if !flat || a.eval(&x) != b.eval(&x) {
                return Err(FunctionError::Discontinuous { a: i, b: j });
            }
        }
        Ok(RationalFunction { ambient, pieces })
    }

    /// A globally affine function.
    pub fn linear(ambient: usize, linear: Vec<Int>, constant: Rat) -> Self {
        RationalFunction { ambient, pieces: vec![AffinePiece::new(Polyhedron::whole(ambient), linear, constant)] }
    }

    fn extremum_of(ambient: usize, terms: &[(Vec<Int>, Rat)], sign: i64) -> Result<Self, FunctionError> {
        let terms: Vec<&(Vec<Int>, Rat)> = terms.iter().unique().collect();
        let s = Rat::from_integer(Int::from(sign));
        let pieces = terms
            .iter()
            .enumerate()
            .filter_map(|(i, (li, ci))| {
                let ineqs = terms
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, (lj, cj))| {
                        let normal: Vec<Rat> = lj.iter().zip(li).map(|(a, b)| Rat::from_integer(a - b) * &s).collect();
                        Constraint::new(normal, (ci - cj) * &s)
                    })
                    .collect();
                let domain = Polyhedron::new(ambient, ineqs, Vec::new());
                (domain.dim() == ambient as isize).then(|| AffinePiece::new(domain, li.clone(), ci.clone()))
            })
            .collect();
        RationalFunction::new(ambient, pieces)
    }

    /// `min_i (<l_i, x> + c_i)`.
    pub fn min_of(ambient: usize, terms: &[(Vec<Int>, Rat)]) -> Result<Self, FunctionError> {
        Self::extremum_of(ambient, terms, 1)
    }

    /// `max_i (<l_i, x> + c_i)`.
    pub fn max_of(ambient: usize, terms: &[(Vec<Int>, Rat)]) -> Result<Self, FunctionError> {
        Self::extremum_of(ambient, terms, -1)
    }

    /// The min-plus evaluation of a tropical polynomial.
    pub fn from_polynomial(f: &TropicalPolynomial) -> Self {
        let terms: Vec<(Vec<Int>, Rat)> = f.terms().iter().map(|(e, v)| (linalg::ints(e), v.clone())).collect();
        Self::min_of(f.ambient_dim(), &terms).expect("a polynomial has at least one term")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat, FunctionError> {
        self.piece_at(x).map(|p| p.eval(x)).ok_or(FunctionError::PointOutsideDomain)
    }

    pub fn piece_at(&self, x: &[Rat]) -> Option<&AffinePiece> {
        self.pieces.iter().find(|p| p.domain.contains(x))
    }

    pub fn neg(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffinePiece::new(p.domain.clone(), p.linear.iter().map(|x| -x).collect(), -&p.constant))
            .collect();
        RationalFunction { ambient: self.ambient, pieces }
    }

    /// `self - other` on the common refinement of the pieces.
    pub fn sub(&self, other: &RationalFunction) -> Result<Self, FunctionError> {
        if other.ambient != self.ambient {
            return Err(FunctionError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let d = a.domain.meet(&b.domain);
                if d.dim() == self.ambient as isize {
                    let l = a.linear.iter().zip(&b.linear).map(|(x, y)| x - y).collect();
                    pieces.push(AffinePiece::new(d, l, &a.constant - &b.constant));
                }
            }
        }
        RationalFunction::new(self.ambient, pieces)
    }

    /// The affine data if the function is globally affine.
    pub fn as_affine(&self) -> Option<(Vec<Int>, Rat)> {
        let full: Vec<&AffinePiece> =
            self.pieces.iter().filter(|p| p.domain.dim() == self.ambient as isize).collect();
        let first = full.first()?;
        full.iter()
            .all(|p| p.linear == first.linear && p.constant == first.constant)
            .then(|| (first.linear.clone(), first.constant.clone()))
    }

    /// All hyperplanes bounding some piece.
    pub fn hyperplanes(&self) -> Vec<Constraint> {
        self.pieces.iter().flat_map(|p| p.domain.ineqs().iter().chain(p.domain.eqs()).cloned()).collect()
    }

    /// Whether the pieces cover `R^n`, tested on every chamber of the
    /// arrangement of their bounding hyperplanes.
    pub fn covers_space(&self) -> bool {
        TropicalCycle::whole_space(self.ambient)
            .refine_with(&self.hyperplanes())
            .cells()
            .iter()
            .all(|c| self.piece_at(&c.poly.relative_interior_point().expect("chamber is nonempty")).is_some())
    }
}

/// The intersection product `r · S` of a rational function with a cycle in `R^n`.
///
/// `S` is refined so that `r` is affine on each cell; a codimension-one face
/// `Q` gets weight `Σ w(P) r'_P(v_{P/Q}) - r'_Q(Σ w(P) v_{P/Q})`, where
/// `v_{P/Q} ∈ L_P` represents the primitive normal of `Q` in `P`.
pub fn rational_intersect(r: &RationalFunction, s: &TropicalCycle) -> Result<TropicalCycle, FunctionError> {
    let n = s.ambient_dim();
    if r.ambient != n {
        return Err(FunctionError::DimensionMismatch { expected: n, found: r.ambient });
    }
    if s.dim() == 0 {
        return Ok(TropicalCycle::empty(n, 0));
    }
    let refined = s.refine_with(&r.hyperplanes());
    let cells = refined.cells();
    let linear: Vec<Vec<Int>> = cells
        .iter()
        .map(|c| {
            let x = c.poly.relative_interior_point().expect("cell is nonempty");
            r.piece_at(&x).map(|p| p.linear.clone()).ok_or(FunctionError::PointOutsideDomain)
        })
        .collect::<Result<_, _>>()?;
    let mut around: BTreeMap<Polyhedron, Vec<usize>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for f in c.poly.facets() {
            around.entry(f).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    for (face, adjacent) in around {
        let frame = QuotientFrame::new(n, &face.direction_space());
        let q = face.relative_interior_point().expect("face is nonempty");
        let lq = r.piece_at(&q).ok_or(FunctionError::PointOutsideDomain)?.linear.clone();
        let mut total = Int::zero();
        let mut sum_v = vec![Int::zero(); n];
        for i in adjacent {
            let v = lattice_normal(&cells[i].poly, &frame, &q);
            let w = Int::from(cells[i].weight);
            total += &w * dot_int(&linear[i], &v);
            for (s, x) in sum_v.iter_mut().zip(&v) {
                *s += &w * x;
            }
        }
        total -= dot_int(&lq, &sum_v);
        let w = total.to_i64().expect("weight fits in i64");
        if w != 0 {
            out.push(Cell::new(face, w));
        }
    }
    Ok(TropicalCycle::new(n, s.dim() - 1, out)?.aggregate())
}

/// A lattice vector of `L_P` mapping to the primitive normal of the face
/// through `q` in the quotient `frame`.
fn lattice_normal(p: &Polyhedron, frame: &QuotientFrame, q: &[Rat]) -> Vec<Int> {
    let x = p.relative_interior_point().expect("cell is nonempty");
    let g = primitive_generator(&frame.apply(&linalg::sub_vec(&x, q))).expect("cell leaves its face");
    let basis = p.direction_lattice().basis().to_vec();
    let image: Vec<Vec<Int>> = basis.iter().map(|b| frame.apply_int(b)).collect();
    let a = linalg::transpose(&image, frame.target_dim());
    let y = linalg::solve_integer(&a, &g, basis.len()).expect("primitive normal lifts to the cell lattice");
    let mut v = vec![Int::zero(); p.ambient_dim()];
    for (c, b) in y.iter().zip(&basis) {
        for (s, t) in v.iter_mut().zip(b) {
            *s += c * t;
        }
    }
    v
}

/// `r^τ`, the function induced on the orbit `O(τ)` in its quotient frame,
/// when the limits along `τ` exist. Requires the pieces to be compatible
/// with the fan; otherwise the answer is `None`.
pub fn restrict_function_to_orbit(r: &RationalFunction, tau: usize, fan: &Fan) -> Option<RationalFunction> {
    if fan.cone_rays(tau).is_empty() {
        return Some(r.clone());
    }
    let domains: Vec<Polyhedron> = r.pieces.iter().map(|p| p.domain.clone()).collect();
    if !fan.is_compatible(&domains) {
        return None;
    }
    let frame = fan.orbit_frame(tau);
    let m = frame.target_dim();
    let kt = linalg::transpose(frame.matrix(), r.ambient);
    let rays: Vec<&Vec<Int>> = fan.cone_rays(tau).iter().map(|&i| &fan.rays()[i]).collect();
    let mut pieces = Vec::new();
    for p in &r.pieces {
        let rec = p.domain.recession_cone();
        if !rays.iter().all(|u| rec.contains_int(u)) {
            continue;
        }
        if rays.iter().any(|u| !dot_int(&p.linear, u).is_zero()) {
            return None;
        }
        let domain = p.domain.project_frame(&frame);
        if domain.dim() != m as isize {
            continue;
        }
        let linear = linalg::solve_integer(&kt, &p.linear, m)?;
        pieces.push(AffinePiece::new(domain, linear, p.constant.clone()));
    }
    RationalFunction::new(m, pieces).ok()
}

/// The open set of a chart: the whole tropical toric variety or the affine
/// chart `U_σ`, the union of the orbits of the faces of `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartRegion {
    Everywhere,
    AffineChart(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub region: ChartRegion,
    pub function: RationalFunction,
}

/// Which lattice vector along the collapsed ray feeds the linear part on
/// an infinite cell: minus the ray generator (default) or the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InfiniteCellSign {
    #[default]
    AgainstRecession,
    AlongRecession,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartierError {
    #[error("a Cartier divisor needs at least one chart")]
    NoCharts,
    #[error("no chart covers the orbit of cone {stratum:?}")]
    ChartCoverGap { stratum: Vec<usize> },
    #[error("chart {chart} fails on the orbit of cone {stratum:?}: {reason}")]
    NotCartierOnCycle { stratum: Vec<usize>, chart: usize, reason: &'static str },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierDivisor {
    charts: Vec<Chart>,
}

impl CartierDivisor {
    pub fn new(charts: Vec<Chart>) -> Result<Self, CartierError> {
        let first = charts.first().ok_or(CartierError::NoCharts)?;
        let n = first.function.ambient;
        if let Some(c) = charts.iter().find(|c| c.function.ambient != n) {
            return Err(FunctionError::DimensionMismatch { expected: n, found: c.function.ambient }.into());
        }
        Ok(CartierDivisor { charts })
    }

    /// A single rational function used everywhere.
    pub fn global(r: RationalFunction) -> Self {
        CartierDivisor { charts: vec![Chart { region: ChartRegion::Everywhere, function: r }] }
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    fn covers(&self, i: usize, fan: &Fan, tau: usize) -> Result<bool, CartierError> {
        Ok(match &self.charts[i].region {
            ChartRegion::Everywhere => true,
            ChartRegion::AffineChart(rays) => fan.is_face(tau, fan.require_cone(rays)?),
        })
    }

    fn covering(&self, fan: &Fan, tau: usize) -> Result<Vec<usize>, CartierError> {
        let mut out = Vec::new();
        for i in 0..self.charts.len() {
            if self.covers(i, fan, tau)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Check covering, restriction and agreement on overlaps against `alpha`.
    /// Overlaps are compared on the whole orbit.
    pub fn check_against(&self, alpha: &StratifiedCycle, fan: &Fan) -> Result<(), CartierError> {
        for (tau_rays, cycle) in &alpha.components {
            if cycle.is_empty() {
                continue;
            }
            let tau = fan.require_cone(tau_rays)?;
            let charts = self.covering(fan, tau)?;
            if charts.is_empty() {
                return Err(CartierError::ChartCoverGap { stratum: tau_rays.clone() });
            }
            let restricted = charts
                .iter()
                .map(|&i| {
                    restrict_function_to_orbit(&self.charts[i].function, tau, fan).ok_or(
                        CartierError::NotCartierOnCycle {
                            stratum: tau_rays.clone(),
                            chart: i,
                            reason: "function does not restrict to the orbit",
                        },
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            let frame = fan.orbit_frame(tau);
            for (a, b) in (0..charts.len()).tuple_combinations() {
                let not_affine = CartierError::NotCartierOnCycle {
                    stratum: tau_rays.clone(),
                    chart: charts[b],
                    reason: "difference of chart functions is not affine",
                };
                let (d, _) = restricted[a].sub(&restricted[b])?.as_affine().ok_or(not_affine)?;
                for sigma in 0..fan.cones().len() {
                    if !fan.is_face(tau, sigma) || !self.covers(charts[a], fan, sigma)? || !self.covers(charts[b], fan, sigma)? {
                        continue;
                    }
                    let bends = fan.cone_rays(sigma).iter().any(|&r| !dot_int(&d, &frame.apply_int(&fan.rays()[r])).is_zero());
                    if bends {
                        return Err(CartierError::NotCartierOnCycle {
                            stratum: tau_rays.clone(),
                            chart: charts[b],
                            reason: "difference of chart functions does not extend to the overlap",
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `φ · α` with the default sign convention on infinite cells.
pub fn cartier_intersect(phi: &CartierDivisor, alpha: &StratifiedCycle, fan: &Fan) -> Result<StratifiedCycle, CartierError> {
    cartier_intersect_with_sign(phi, alpha, fan, InfiniteCellSign::default())
}

/// `φ · α = Σ_{τ ⊆ σ} E_{τ,σ}`: finite parts from [`rational_intersect`] in
/// each orbit, and boundary parts on the codimension-one infinite cells.
pub fn cartier_intersect_with_sign(
    phi: &CartierDivisor,
    alpha: &StratifiedCycle,
    fan: &Fan,
    sign: InfiniteCellSign,
) -> Result<StratifiedCycle, CartierError> {
    phi.check_against(alpha, fan)?;
    let mut out = StratifiedCycle::default();
    for (tau_rays, cycle) in &alpha.components {
        if cycle.is_empty() {
            continue;
        }
        let tau = fan.require_cone(tau_rays)?;
        let m = fan.orbit_dim(tau);
        if cycle.ambient_dim() != m {
            return Err(FanError::FrameMismatch { expected: m, found: cycle.ambient_dim() }.into());
        }
        let restrict = |i: usize| {
            restrict_function_to_orbit(&phi.charts[i].function, tau, fan).expect("checked against the cycle")
        };
        let main = phi.covering(fan, tau)?[0];
        let finite = rational_intersect(&restrict(main), cycle)?;
        if !finite.is_empty() {
            out.add(tau_rays.clone(), finite)?;
        }
        if cycle.dim() == 0 {
            continue;
        }
        let frame = fan.orbit_frame(tau);
        let mut refined_by: BTreeMap<usize, (RationalFunction, TropicalCycle)> = BTreeMap::new();
        for sigma in fan.cofaces_of_codim_one(tau) {
            let new_ray = fan.cone_rays(sigma).iter().copied().find(|r| !tau_rays.contains(r)).expect("σ has one more ray");
            let u = primitive_int(&frame.apply_int(&fan.rays()[new_ray]));
            let v: Vec<Int> = match sign {
                InfiniteCellSign::AgainstRecession => u.iter().map(|x| -x).collect(),
                InfiniteCellSign::AlongRecession => u.clone(),
            };
            let charts = phi.covering(fan, sigma)?;
            let reaching: Vec<&Cell> = cycle.cells().iter().filter(|c| c.poly.recession_cone().contains_int(&u)).collect();
            if reaching.is_empty() {
                continue;
            }
            let Some(&chart) = charts.first() else {
                return Err(CartierError::ChartCoverGap { stratum: fan.cone_rays(sigma).to_vec() });
            };
            let (r, refined) = refined_by.entry(chart).or_insert_with(|| {
                let r = restrict(chart);
                let refined = cycle.refine_with(&r.hyperplanes());
                (r, refined)
            });
            let a = fan.transition(tau, sigma);
            let mut cells = Vec::new();
            for c in refined.cells() {
                if !c.poly.recession_cone().contains_int(&u) {
                    continue;
                }
                let x = c.poly.relative_interior_point().expect("cell is nonempty");
                let l = &r.piece_at(&x).ok_or(FunctionError::PointOutsideDomain)?.linear;
                let slope = dot_int(l, &v);
                if slope.is_zero() {
                    continue;
                }
                let images: Vec<Vec<Int>> =
                    c.poly.direction_lattice().basis().iter().map(|b| linalg::mat_vec_int(&a, b)).collect();
                let sub = Lattice::new(a.len(), &images);
                let index = linalg::lattice_index(&sub, &sub.saturate()).expect("finite index in the saturation");
                let w = Int::from(c.weight) * index * slope;
                cells.push(Cell::new(c.poly.linear_image(&a), w.to_i64().expect("weight fits in i64")));
            }
            let e = TropicalCycle::new(a.len(), cycle.dim() - 1, cells)?.aggregate();
            if !e.is_empty() {
                out.add(fan.cone_rays(sigma).to_vec(), e)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::tropical_hypersurface;
    use crate::linalg::{ints, rat, rats};

    fn terms(t: &[(&[i64], i64)]) -> Vec<(Vec<Int>, Rat)> {
        t.iter().map(|(l, c)| (ints(l), rat(*c))).collect()
    }

    fn standard_line() -> TropicalCycle {
        TropicalCycle::star_of_rays(&rats(&[0, 0]), &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, -1], 1)])
    }

    #[test]
    fn min_and_max_functions() {
        let r = RationalFunction::min_of(2, &terms(&[(&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 0)])).unwrap();
        assert_eq!(r.pieces().len(), 3);
        assert!(r.covers_space());
        assert_eq!(r.eval(&rats(&[3, -2])).unwrap(), rat(-2));
        let s = RationalFunction::max_of(1, &terms(&[(&[1], 0), (&[0], 0)])).unwrap();
        assert_eq!(s.eval(&rats(&[4])).unwrap(), rat(4));
        assert_eq!(s.eval(&rats(&[-4])).unwrap(), rat(0));
    }

    #[test]
    fn discontinuity_is_detected() {
        let left = Polyhedron::from_rows(1, &[vec![-1, 0]], &[]);
        let right = Polyhedron::from_rows(1, &[vec![1, 0]], &[]);
        let pieces = vec![
            AffinePiece::new(left, ints(&[0]), rat(0)),
            AffinePiece::new(right, ints(&[1]), rat(1)),
        ];
        assert_eq!(RationalFunction::new(1, pieces), Err(FunctionError::Discontinuous { a: 0, b: 1 }));
        let half = vec![AffinePiece::new(Polyhedron::from_rows(1, &[vec![1, 0]], &[]), ints(&[1]), rat(0))];
        assert!(!RationalFunction::new(1, half).unwrap().covers_space());
    }

    #[test]
    fn convex_function_cuts_positive_weights() {
        let r = RationalFunction::max_of(2, &terms(&[(&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 0)])).unwrap();
        let e = rational_intersect(&r, &TropicalCycle::whole_space(2)).unwrap();
        let line = TropicalCycle::star_of_rays(&rats(&[0, 0]), &[(vec![-1, 0], 1), (vec![0, -1], 1), (vec![1, 1], 1)]);
        assert!(e.equals(&line));
    }

    #[test]
    fn concave_function_gives_negative_line() {
        let f = TropicalPolynomial::new(2, [(vec![1, 0], rat(0)), (vec![0, 1], rat(0)), (vec![0, 0], rat(0))]).unwrap();
        let r = RationalFunction::from_polynomial(&f);
        let e = rational_intersect(&r, &TropicalCycle::whole_space(2)).unwrap();
        assert!(e.equals(&standard_line().scale_weights(-1)));
        let h = tropical_hypersurface(&f).unwrap();
        assert!(rational_intersect(&r.neg(), &TropicalCycle::whole_space(2)).unwrap().equals(&h));
    }

    #[test]
    fn function_on_a_curve() {
        // max(x, 0) restricted to the standard line: a point of degree one
        // at the vertex, since only the ray e1 sees the slope.
        let r = RationalFunction::max_of(2, &terms(&[(&[1, 0], 0), (&[0, 0], 0)])).unwrap();
        let p = rational_intersect(&r, &standard_line()).unwrap();
        assert_eq!(p.degree(), 1);
        let affine = RationalFunction::linear(2, ints(&[3, -1]), rat(7));
        assert!(rational_intersect(&affine, &standard_line()).unwrap().is_empty());
    }

    #[test]
    fn restriction_to_orbits() {
        let fan = Fan::from_i64(2, &[vec![1, 1]], &[vec![0]]).unwrap();
        let tau = fan.require_cone(&[0]).unwrap();
        let r = RationalFunction::min_of(2, &terms(&[(&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 0)])).unwrap();
        let rt = restrict_function_to_orbit(&r, tau, &fan).unwrap();
        assert_eq!(rt.ambient_dim(), 1);
        assert_eq!(rt.as_affine(), Some((ints(&[0]), rat(0))));
        let lin = RationalFunction::linear(2, ints(&[1, -1]), rat(2));
        let lt = restrict_function_to_orbit(&lin, tau, &fan).unwrap();
        assert!(lt.as_affine().is_some_and(|(l, c)| l.iter().any(|x| !x.is_zero()) && c == rat(2)));
        let e1 = Fan::from_i64(2, &[vec![1, 0]], &[vec![0]]).unwrap();
        let x = RationalFunction::linear(2, ints(&[1, 0]), rat(0));
        assert!(restrict_function_to_orbit(&x, e1.require_cone(&[0]).unwrap(), &e1).is_none());
    }

    #[test]
    fn global_chart_on_trivial_fan() {
        let fan = Fan::trivial(2);
        let r = RationalFunction::min_of(2, &terms(&[(&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 0)])).unwrap();
        let alpha = StratifiedCycle::from_cycle(TropicalCycle::whole_space(2));
        let out = cartier_intersect(&CartierDivisor::global(r), &alpha, &fan).unwrap();
        assert_eq!(out.components.len(), 1);
        assert!(out.component(&[]).unwrap().equals(&standard_line().scale_weights(-1)));
        let affine = CartierDivisor::global(RationalFunction::linear(2, ints(&[2, 5]), rat(1)));
        assert!(cartier_intersect(&affine, &alpha, &fan).unwrap().components.is_empty());
    }

    #[test]
    fn chart_gap_and_overlap_checks() {
        let fan = Fan::product_of_lines(1);
        let zero = RationalFunction::linear(1, ints(&[0]), rat(0));
        let alpha = StratifiedCycle::from_cycle(TropicalCycle::whole_space(1));
        let only_plus = CartierDivisor::new(vec![Chart { region: ChartRegion::AffineChart(vec![0]), function: zero.clone() }]).unwrap();
        // U_{e1} covers the open orbit, but the infinite cell towards -e1 is uncovered.
        assert_eq!(
            cartier_intersect(&only_plus, &alpha, &fan),
            Err(CartierError::ChartCoverGap { stratum: vec![1] })
        );
        let slope = RationalFunction::linear(1, ints(&[1]), rat(0));
        let mixed = CartierDivisor::new(vec![
            Chart { region: ChartRegion::AffineChart(vec![0]), function: zero.clone() },
            Chart { region: ChartRegion::AffineChart(vec![1]), function: slope },
        ])
        .unwrap();
        let out = cartier_intersect(&mixed, &alpha, &fan).unwrap();
        assert!(out.component(&[]).is_none());
        assert_eq!(out.component(&[1]).unwrap().degree(), 1);
        let two = CartierDivisor::new(vec![
            Chart { region: ChartRegion::AffineChart(vec![0]), function: zero.clone() },
            Chart { region: ChartRegion::AffineChart(vec![1]), function: zero },
        ])
        .unwrap();
        assert!(cartier_intersect(&two, &alpha, &fan).unwrap().components.is_empty());
    }

    #[test]
    fn local_charts_give_boundary_points() {
        // On P^1, the charts (U_{+}, 0) and (U_{-}, x) describe the divisor
        // of the point at -∞ with multiplicity one.
        let fan = Fan::product_of_lines(1);
        let alpha = StratifiedCycle::from_cycle(TropicalCycle::whole_space(1));
        let phi = CartierDivisor::new(vec![
            Chart { region: ChartRegion::AffineChart(vec![0]), function: RationalFunction::linear(1, ints(&[0]), rat(0)) },
            Chart {
                region: ChartRegion::AffineChart(vec![1]),
                function: RationalFunction::max_of(1, &terms(&[(&[1], 0), (&[0], 0)])).unwrap(),
            },
        ]);
        // The second chart is not affinely related to the first on the open orbit.
        assert!(cartier_intersect(&phi.unwrap(), &alpha, &fan).is_err());
        let psi = CartierDivisor::global(RationalFunction::max_of(1, &terms(&[(&[-1], 0), (&[0], 0)])).unwrap());
        let out = cartier_intersect(&psi, &alpha, &fan).unwrap();
        assert_eq!(out.component(&[]).unwrap().degree(), 1);
        assert_eq!(out.component(&[1]).unwrap().degree(), -1);
        assert!(out.component(&[0]).is_none());
    }
}
