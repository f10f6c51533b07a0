//! Exact integer and rational linear algebra.
//!
//! Everything here works on dense row-major matrices stored as `Vec<Vec<_>>`.
//! Integer matrices use [`Int`] (arbitrary precision), rational ones [`Rat`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("lattice is not contained in the claimed superlattice")]
    NotSublattice,
    #[error("lattices of rank {sub} and {sup} have infinite index")]
    InfiniteIndex { sub: usize, sup: usize },
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn int_to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

/// `<a, x>` with an integer covector and a rational point.
pub fn dot_mixed(a: &[Int], x: &[Rat]) -> Rat {
    a.iter()
        .zip(x)
        .fold(Rat::zero(), |acc, (c, v)| acc + v * c)
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[Vec<Int>], x: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| dot_mixed(row, x)).collect()
}

pub fn mat_vec_int(m: &[Vec<Int>], x: &[Int]) -> Vec<Int> {
    m.iter().map(|row| dot_int(row, x)).collect()
}

pub fn mat_mul_int(a: &[Vec<Int>], b: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(Int::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

fn row_axpy(target: &mut [Int], q: &Int, source: &[Int]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U * M = H`, `U` unimodular, the nonzero rows of `H`
/// on top with strictly increasing pivot columns, positive pivots, and the
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &[Vec<Int>]) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h = m.to_vec();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                let (hr, hi) = (h[r].clone(), &mut h[i]);
                row_axpy(hi, &q, &hr);
                let ur = u[r].clone();
                row_axpy(&mut u[i], &q, &ur);
                if !h[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        let hr = h[r].clone();
        let ur = u[r].clone();
        for i in 0..r {
            let q = h[i][c].div_floor(&hr[c]);
            if !q.is_zero() {
                row_axpy(&mut h[i], &q, &hr);
                row_axpy(&mut u[i], &q, &ur);
            }
        }
        r += 1;
    }
    (h, u)
}

fn pivot_col(row: &[Int]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Basis (in HNF) of the integer kernel `{x in Z^n : A x = 0}`.
pub fn integer_kernel(a: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    if a.is_empty() {
        return identity(n);
    }
    let at = transpose(a, n);
    let (h, u) = hermite_normal_form(&at);
    let kernel: Vec<Vec<Int>> = h
        .iter()
        .zip(u)
        .filter(|(row, _)| row.iter().all(Zero::is_zero))
        .map(|(_, urow)| urow)
        .collect();
    hnf_basis(&kernel)
}

/// Nonzero rows of the HNF: the canonical basis of the generated lattice.
pub fn hnf_basis(gens: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let (h, _) = hermite_normal_form(gens);
    h.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())).collect()
}

/// Coefficients of `v` in an HNF basis, if `v` lies in the lattice it spans.
fn hnf_coordinates(basis: &[Vec<Int>], v: &[Int]) -> Option<Vec<Int>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for row in basis {
        let p = pivot_col(row)?;
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        row_axpy(&mut rest, &q, row);
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

/// Solve `A x = b` over the integers. `n` is the number of unknowns.
pub fn solve_integer(a: &[Vec<Int>], b: &[Int], n: usize) -> Option<Vec<Int>> {
    if a.is_empty() {
        return Some(vec![Int::zero(); n]);
    }
    let at = transpose(a, n);
    let (h, u) = hermite_normal_form(&at);
    let mut rest = b.to_vec();
    let mut x = vec![Int::zero(); n];
    for (row, urow) in h.iter().zip(&u) {
        let Some(p) = pivot_col(row) else { break };
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        row_axpy(&mut rest, &q, row);
        for (xi, ui) in x.iter_mut().zip(urow) {
            *xi += &q * ui;
        }
    }
    rest.iter().all(Zero::is_zero).then_some(x)
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det_int(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive_int(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Positive integer multiple of a rational vector with coprime entries.
/// The zero vector maps to itself.
pub fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<Int> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive_int(&scaled)
}

/// The primitive lattice vector on the ray spanned by `v`.
pub fn primitive_generator(v: &[Rat]) -> Result<Vec<Int>, LinalgError> {
    if v.iter().all(Zero::is_zero) {
        return Err(LinalgError::ZeroVector);
    }
    Ok(clear_denominators(v))
}

/// A sublattice of `Z^n`, stored by its row-HNF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<Int>>,
}

impl Lattice {
    pub fn new(ambient: usize, generators: &[Vec<Int>]) -> Self {
        debug_assert!(generators.iter().all(|g| g.len() == ambient));
        Lattice { ambient, basis: hnf_basis(generators) }
    }

    pub fn standard(n: usize) -> Self {
        Lattice { ambient: n, basis: identity(n) }
    }

    pub fn zero(n: usize) -> Self {
        Lattice { ambient: n, basis: Vec::new() }
    }

    /// The saturated lattice `span(generators) ∩ Z^n` of a rational subspace.
    pub fn of_subspace(ambient: usize, generators: &[Vec<Rat>]) -> Self {
        let ints: Vec<Vec<Int>> = generators.iter().map(|g| clear_denominators(g)).collect();
        Lattice::new(ambient, &ints).saturate()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        hnf_coordinates(&self.basis, v).is_some()
    }

    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        hnf_coordinates(&self.basis, v)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let gens: Vec<Vec<Int>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::new(self.ambient, &gens)
    }

    /// `(L ⊗ Q) ∩ Z^n`.
    pub fn saturate(&self) -> Lattice {
        let orth = integer_kernel(&self.basis, self.ambient);
        Lattice { ambient: self.ambient, basis: integer_kernel(&orth, self.ambient) }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// Index `[sup : self]`.
    pub fn index_in(&self, sup: &Lattice) -> Result<Int, LinalgError> {
        lattice_index(self, sup)
    }
}

/// The group index `[sup : sub]`.
pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<Int, LinalgError> {
    if sub.ambient != sup.ambient {
        return Err(LinalgError::DimensionMismatch { expected: sup.ambient, found: sub.ambient });
    }
    let coords: Option<Vec<Vec<Int>>> = sub.basis.iter().map(|v| sup.coordinates(v)).collect();
    let coords = coords.ok_or(LinalgError::NotSublattice)?;
    if sub.rank() != sup.rank() {
        return Err(LinalgError::InfiniteIndex { sub: sub.rank(), sup: sup.rank() });
    }
    Ok(det_int(&coords).abs())
}

/// Deterministic coordinates on `R^n / span(τ)`.
///
/// The frame matrix `K` has as rows the HNF basis of the integer vectors
/// orthogonal to `span(τ)`; the projection is `x ↦ K x`. Since that lattice is
/// saturated, `K` maps `Z^n` onto `Z^(n - dim τ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientFrame {
    ambient: usize,
    matrix: Vec<Vec<Int>>,
}

impl QuotientFrame {
    pub fn new(ambient: usize, span_generators: &[Vec<Rat>]) -> Self {
        let gens: Vec<Vec<Int>> = span_generators.iter().map(|g| clear_denominators(g)).collect();
        QuotientFrame { ambient, matrix: integer_kernel(&gens, ambient) }
    }

    pub fn from_int_generators(ambient: usize, span_generators: &[Vec<Int>]) -> Self {
        QuotientFrame { ambient, matrix: integer_kernel(span_generators, ambient) }
    }

    pub fn identity(n: usize) -> Self {
        QuotientFrame { ambient: n, matrix: identity(n) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Int>] {
        &self.matrix
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        mat_vec(&self.matrix, x)
    }

    pub fn apply_int(&self, x: &[Int]) -> Vec<Int> {
        mat_vec_int(&self.matrix, x)
    }

    /// Basis of the collapsed lattice `span(τ) ∩ Z^n`.
    pub fn kernel(&self) -> Lattice {
        Lattice { ambient: self.ambient, basis: integer_kernel(&self.matrix, self.ambient) }
    }
}

/// Image of `L` under the projection to the quotient frame of `span(tau_span)`.
pub fn project_lattice(l: &Lattice, tau_span: &[Vec<Rat>]) -> Lattice {
    let frame = QuotientFrame::new(l.ambient, tau_span);
    let images: Vec<Vec<Int>> = l.basis.iter().map(|v| frame.apply_int(v)).collect();
    Lattice::new(frame.target_dim(), &images)
}

/// Reduced row echelon form over the rationals: nonzero rows and pivot columns.
pub fn rref(m: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : M x = 0}` in `Q^n`.
pub fn nullspace(m: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square rational matrix, if it exists.
pub fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Some solution of `M x = b` over the rationals.
pub fn solve_rational(m: &[Vec<Rat>], b: &[Rat], n: usize) -> Option<Vec<Rat>> {
    let aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}
