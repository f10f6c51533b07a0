//! Exact linear programming: a dense two-phase simplex over the rationals
//! with Bland's anti-cycling rule.

use num_traits::{One, Signed, Zero};

use crate::linalg::Rat;

/// A linear constraint `<normal, x> (>= or =) rhs`; the relation is decided by
/// the list it is stored in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub normal: Vec<Rat>,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(normal: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { normal, rhs }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        crate::linalg::dot(&self.normal, x)
    }

    /// `<normal, x> - rhs`.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        self.eval(x) - &self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

impl LpResult {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    cost: Vec<Rat>,
    value: Rat,
    allowed: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.value += &f * &prhs;
        }
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    fn run(&mut self) -> Step {
        loop {
            let entering = (0..self.cost.len()).find(|&j| self.allowed[j] && self.cost[j].is_positive());
            let Some(c) = entering else { return Step::Optimal };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Step::Unbounded,
            }
        }
    }

    fn set_objective(&mut self, c: &[Rat]) {
        self.cost = c.to_vec();
        self.value = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            let cb = c[b].clone();
            for (x, a) in self.cost.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *x -= &cb * a;
                }
            }
            self.value += &cb * &self.rhs[i];
        }
    }
}

/// Maximize `<objective, x>` over `{x : ge rows >=, eq rows =}` with `x` free.
pub fn maximize(n: usize, objective: &[Rat], ge: &[Constraint], eq: &[Constraint]) -> LpResult {
    let m1 = ge.len();
    let m = m1 + eq.len();
    // Columns: x+ (n), x- (n), slacks (m1), artificials (one per row that needs one).
    let base_cols = 2 * n + m1;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut needs_artificial = Vec::with_capacity(m);
    for (k, c) in ge.iter().chain(eq).enumerate() {
        let mut row = vec![Rat::zero(); base_cols];
        for (j, a) in c.normal.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a;
        }
        if k < m1 {
            row[2 * n + k] = -Rat::one();
        }
        let mut b = c.rhs.clone();
        let flip = b.is_negative() || (k < m1 && b.is_zero());
        if flip {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            b = -b;
        }
        needs_artificial.push(k >= m1 || !flip);
        rows.push(row);
        rhs.push(b);
    }
    let n_art = needs_artificial.iter().filter(|&&a| a).count();
    let total = base_cols + n_art;
    let mut basis = Vec::with_capacity(m);
    let mut next_art = base_cols;
    for (k, row) in rows.iter_mut().enumerate() {
        row.resize(total, Rat::zero());
        if needs_artificial[k] {
            row[next_art] = Rat::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(2 * n + k);
        }
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis,
        cost: Vec::new(),
        value: Rat::zero(),
        allowed: vec![true; total],
    };

    if n_art > 0 {
        let mut c1 = vec![Rat::zero(); total];
        for x in &mut c1[base_cols..] {
            *x = -Rat::one();
        }
        t.set_objective(&c1);
        t.run();
        if t.value.is_negative() {
            return LpResult::Infeasible;
        }
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= base_cols {
                match (0..base_cols).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for a in &mut t.allowed[base_cols..] {
            *a = false;
        }
    }

    let mut c2 = vec![Rat::zero(); total];
    for (j, c) in objective.iter().enumerate() {
        c2[j] = c.clone();
        c2[n + j] = -c;
    }
    t.set_objective(&c2);
    match t.run() {
        Step::Unbounded => LpResult::Unbounded,
        Step::Optimal => {
            let mut y = vec![Rat::zero(); total];
            for (i, &b) in t.basis.iter().enumerate() {
                y[b] = t.rhs[i].clone();
            }
            let point: Vec<Rat> = (0..n).map(|j| &y[j] - &y[n + j]).collect();
            let value = crate::linalg::dot(objective, &point);
            LpResult::Optimal { value, point }
        }
    }
}

pub fn minimize(n: usize, objective: &[Rat], ge: &[Constraint], eq: &[Constraint]) -> LpResult {
    let neg: Vec<Rat> = objective.iter().map(|c| -c).collect();
    match maximize(n, &neg, ge, eq) {
        LpResult::Optimal { value, point } => LpResult::Optimal { value: -value, point },
        other => other,
    }
}

/// Some point satisfying all constraints.
pub fn feasible_point(n: usize, ge: &[Constraint], eq: &[Constraint]) -> Option<Vec<Rat>> {
    match maximize(n, &vec![Rat::zero(); n], ge, eq) {
        LpResult::Optimal { point, .. } => Some(point),
        _ => None,
    }
}
