//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tropcycle::cycle::{Cell, TropicalCycle};
use tropcycle::fan::Fan;
use tropcycle::hypersurface::{tropical_hypersurface, TropicalPolynomial};
use tropcycle::linalg::{int, rat, Int, Rat};
use tropcycle::polyhedron::Polyhedron;

/// Exponents of all monomials of degree at most `d` in `n` variables.
pub fn monomials(n: usize, d: i64) -> Vec<Vec<i64>> {
    (0..n)
        .map(|_| 0..=d)
        .multi_cartesian_product()
        .filter(|e| e.iter().sum::<i64>() <= d)
        .collect()
}

/// Polynomial with Newton polytope the full simplex `d Δ`: the vertices are
/// always present, the other monomials only when `mask` says so.
pub fn simplex_polynomial(n: usize, d: i64, vals: &[i64], mask: &[bool]) -> TropicalPolynomial {
    let terms = monomials(n, d).into_iter().enumerate().filter_map(|(i, e)| {
        let vertex = e.iter().all(|&x| x == 0) || e.contains(&d);
        (vertex || mask[i % mask.len()]).then(|| (e, rat(vals[i % vals.len()])))
    });
    TropicalPolynomial::new(n, terms).unwrap()
}

pub fn simplex_hypersurface(n: usize, d: i64, vals: &[i64], mask: &[bool]) -> TropicalCycle {
    tropical_hypersurface(&simplex_polynomial(n, d, vals, mask)).unwrap()
}

/// Random hypersurface with Newton polytope `d Δ` for `d` in `1..=max_d`.
pub fn arb_simplex_hypersurface(n: usize, max_d: i64) -> impl Strategy<Value = (i64, TropicalCycle)> {
    (1..=max_d, prop::collection::vec(-3i64..=3, 20), prop::collection::vec(any::<bool>(), 20))
        .prop_map(move |(d, vals, mask)| (d, simplex_hypersurface(n, d, &vals, &mask)))
}

/// A tropical line in R^3 through `apex` with the four standard directions.
pub fn line_in_space(apex: &[i64]) -> TropicalCycle {
    let apex: Vec<Rat> = apex.iter().map(|&x| rat(x)).collect();
    TropicalCycle::star_of_rays(&apex, &[(vec![1, 0, 0], 1), (vec![0, 1, 0], 1), (vec![0, 0, 1], 1), (vec![-1, -1, -1], 1)])
}

/// A linear space `{x : <a, x> = b}` of codimension one with weight `w`.
pub fn hyperplane(a: &[i64], b: i64, w: i64) -> TropicalCycle {
    let n = a.len();
    let mut row = a.to_vec();
    row.push(b);
    TropicalCycle::new(n, n - 1, vec![Cell::new(Polyhedron::from_rows(n, &[], &[row]), w)]).unwrap()
}

/// Fraction-free determinant, written independently of the library.
pub fn det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return int(1);
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = int(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return int(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * int(sign)
}

/// Index of the lattice spanned by `gens` in `Z^n`: the gcd of the maximal
/// minors, or 0 when the span is not full.
pub fn index_in_standard(gens: &[Vec<Int>], n: usize) -> Int {
    gens.iter()
        .combinations(n)
        .map(|rows| det(&rows.into_iter().cloned().collect::<Vec<_>>()).abs())
        .fold(Int::zero(), |g, d| g.gcd(&d))
}

/// Solve a square rational system by Gauss-Jordan elimination.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Vertices of the bounded polyhedron `{A x >= b, E x = f}` by trying every
/// choice of `n` tight constraints.
pub fn brute_force_vertices(n: usize, ineqs: &[(Vec<Rat>, Rat)], eqs: &[(Vec<Rat>, Rat)]) -> Vec<Vec<Rat>> {
    let rows: Vec<&(Vec<Rat>, Rat)> = eqs.iter().chain(ineqs).collect();
    let feasible = |x: &[Rat]| {
        let dot = |a: &[Rat]| a.iter().zip(x).map(|(p, q)| p * q).sum::<Rat>();
        ineqs.iter().all(|(a, b)| dot(a) >= *b) && eqs.iter().all(|(a, b)| dot(a) == *b)
    };
    let mut out: Vec<Vec<Rat>> = rows
        .iter()
        .combinations(n)
        .filter_map(|sel| {
            let a: Vec<Vec<Rat>> = sel.iter().map(|r| r.0.clone()).collect();
            let b: Vec<Rat> = sel.iter().map(|r| r.1.clone()).collect();
            solve(&a, &b)
        })
        .filter(|x| feasible(x))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `σ1 ∩ (σ2 + t v)`.
fn displaced(p: &Polyhedron, q: &Polyhedron, v: &[Rat], t: &Rat) -> Polyhedron {
    let shift: Vec<Rat> = v.iter().map(|x| x * t).collect();
    p.meet(&q.translate(&shift))
}

/// Direction spaces `L(F) + L(G)` over all faces of all cell pairs that are
/// not the whole space; a generic displacement must avoid them.
fn degenerate_spans(a: &TropicalCycle, b: &TropicalCycle) -> Vec<Vec<Vec<Rat>>> {
    let n = a.ambient_dim();
    let faces = |c: &TropicalCycle| -> Vec<Polyhedron> {
        c.cells()
            .iter()
            .flat_map(|cell| (0..=cell.poly.dim().max(0) as usize).flat_map(move |k| cell.poly.faces(k)))
            .collect()
    };
    let (fa, fb) = (faces(a), faces(b));
    let mut spans = Vec::new();
    for f in &fa {
        for g in &fb {
            let gens: Vec<Vec<Rat>> = f.direction_space().into_iter().chain(g.direction_space()).collect();
            if rank(&gens) < n {
                spans.push(gens);
            }
        }
    }
    spans
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    let mut r = 0;
    let cols = m.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let f = &m[i][c] / &m[r][c];
            let row = m[r].clone();
            for (x, y) in m[i].iter_mut().zip(&row) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

fn in_span(v: &[Rat], gens: &[Vec<Rat>]) -> bool {
    let mut with = gens.to_vec();
    with.push(v.to_vec());
    rank(&with) == rank(gens)
}

/// Stable intersection by explicit displacement: for each generic `v` in
/// `vs` and each `t` in `ts`, collect the transverse cell pairs that still
/// meet after shifting `b` by `t v`, weight them by `w w' [Z^n : L + L']`,
/// and place the contribution on `σ1 ∩ σ2`. Returns one cycle per `(v, t)`.
pub fn displacement_oracle(a: &TropicalCycle, b: &TropicalCycle, vs: &[Vec<i64>], ts: &[Rat]) -> Vec<TropicalCycle> {
    let n = a.ambient_dim();
    if a.dim() + b.dim() < n {
        return vec![TropicalCycle::empty(n, 0); vs.len() * ts.len()];
    }
    let k = a.dim() + b.dim() - n;
    let spans = degenerate_spans(a, b);
    let mut out = Vec::new();
    for v in vs {
        let v: Vec<Rat> = v.iter().map(|&x| rat(x)).collect();
        assert!(spans.iter().all(|s| !in_span(&v, s)), "displacement {v:?} is not generic");
        for t in ts {
            let mut cells: BTreeMap<Polyhedron, i64> = BTreeMap::new();
            for ca in a.cells() {
                for cb in b.cells() {
                    let meet = ca.poly.meet(&cb.poly);
                    if meet.is_empty() || meet.dim() != k as isize {
                        continue;
                    }
                    let gens: Vec<Vec<Int>> = ca
                        .poly
                        .direction_lattice()
                        .basis()
                        .iter()
                        .chain(cb.poly.direction_lattice().basis())
                        .cloned()
                        .collect();
                    let index = index_in_standard(&gens, n);
                    if index.is_zero() || displaced(&ca.poly, &cb.poly, &v, t).is_empty() {
                        continue;
                    }
                    let idx: i64 = index.try_into().unwrap();
                    *cells.entry(meet).or_default() += ca.weight * cb.weight * idx;
                }
            }
            let cells = cells.into_iter().filter(|(_, w)| *w != 0).map(|(p, w)| Cell::new(p, w)).collect();
            out.push(TropicalCycle::new(n, k, cells).unwrap());
        }
    }
    out
}

/// Lattice length of the segment between two integer points.
pub fn lattice_length(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |g, (x, y)| g.gcd(&(x - y)))
}

pub fn standard_fans() -> Vec<(&'static str, Fan)> {
    vec![
        ("P2", Fan::projective_space(2)),
        ("P1xP1", Fan::product_of_lines(2)),
        ("P3", Fan::projective_space(3)),
    ]
}
