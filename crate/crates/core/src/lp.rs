//! Small dense linear programs over exact rationals.
//!
//! Two-phase simplex; Dantzig pricing with Bland's rule (smallest entering
//! index, smallest leaving basic variable on ratio ties) while pivots are
//! degenerate, which cannot cycle. All variables
//! are nonnegative; the objective is minimized. Problem sizes here are a few
//! dozen columns, so a dense tableau is adequate.

use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub sense: Sense,
    pub rhs: Rat,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rat>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `duals[i]` prices constraint `i`: `value = Σ rhs_i duals_i`, with
    /// `duals_i ≤ 0` on `≤` rows and `≥ 0` on `≥` rows.
    Optimal {
        x: Vec<Rat>,
        value: Rat,
        duals: Vec<Rat>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// Minimize `objective · x` over `x ≥ 0`.
    pub fn minimize(objective: Vec<Rat>) -> LinearProgram {
        LinearProgram {
            num_vars: objective.len(),
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rat>, sense: Sense, rhs: Rat) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, sense, rhs });
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Whether `x` satisfies every constraint and `x ≥ 0`.
    pub fn is_feasible(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                match c.sense {
                    Sense::Le => lhs <= c.rhs,
                    Sense::Ge => lhs >= c.rhs,
                    Sense::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn objective_at(&self, x: &[Rat]) -> Rat {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    // original constraint of each row, and whether it was negated
    origin: Vec<usize>,
    negated: Vec<bool>,
    // columns: structural, then slack/surplus, then artificial
    n_struct: usize,
    first_artificial: usize,
    n_cols: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.constraints.len();
        let n_slack = lp.constraints.iter().filter(|c| c.sense != Sense::Eq).count();
        let first_artificial = lp.num_vars + n_slack;
        let n_cols = first_artificial + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut slack = lp.num_vars;
        let mut negated = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rat::zero(); n_cols];
            row[..lp.num_vars].clone_from_slice(&c.coeffs);
            match c.sense {
                Sense::Le => {
                    row[slack] = Rat::one();
                    slack += 1;
                }
                Sense::Ge => {
                    row[slack] = -Rat::one();
                    slack += 1;
                }
                Sense::Eq => {}
            }
            let mut b = c.rhs.clone();
            negated.push(b.is_negative());
            if b.is_negative() {
                for a in row.iter_mut() {
                    *a = -&*a;
                }
                b = -b;
            }
            row[first_artificial + i] = Rat::one();
            rows.push(row);
            rhs.push(b);
        }
        Tableau {
            rows,
            rhs,
            basis: (first_artificial..n_cols).collect(),
            origin: (0..m).collect(),
            negated,
            n_struct: lp.num_vars,
            first_artificial,
            n_cols,
        }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rat], obj_val: &mut Rat) {
        let p = self.rows[r][c].recip();
        for a in self.rows[r].iter_mut() {
            *a = &*a * &p;
        }
        self.rhs[r] = &self.rhs[r] * &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (a, b) in self.rows[i].iter_mut().zip(&prow) {
                if !b.is_zero() {
                    *a -= &(&f * b);
                }
            }
            self.rhs[i] -= &(&f * &prhs);
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (a, b) in obj.iter_mut().zip(&prow) {
                if !b.is_zero() {
                    *a -= &(&f * b);
                }
            }
            // obj_val tracks -z so that reduced costs and value share one update
            *obj_val -= &(&f * &prhs);
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row and `-value` for the cost vector `cost` (full width).
    fn price(&self, cost: &[Rat]) -> (Vec<Rat>, Rat) {
        let mut obj = cost.to_vec();
        let mut val = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let f = cost[b].clone();
            for (a, x) in obj.iter_mut().zip(&self.rows[i]) {
                if !x.is_zero() {
                    *a -= &(&f * x);
                }
            }
            val -= &(&f * &self.rhs[i]);
        }
        (obj, val)
    }

    /// Pivots until optimal; false means unbounded. Entering columns follow
    /// Dantzig's rule, switching to Bland's rule for as long as pivots are
    /// degenerate, so the method cannot cycle.
    fn optimize(&mut self, obj: &mut [Rat], obj_val: &mut Rat, allowed: usize) -> bool {
        let mut degenerate = false;
        loop {
            let entering = if degenerate {
                (0..allowed).find(|&j| obj[j].is_negative())
            } else {
                (0..allowed)
                    .filter(|&j| obj[j].is_negative())
                    .min_by(|&a, &b| obj[a].cmp(&obj[b]).then(a.cmp(&b)))
            };
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][c];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return false;
            };
            degenerate = ratio.is_zero();
            self.pivot(r, c, obj, obj_val);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let mut phase1 = vec![Rat::zero(); self.n_cols];
        for a in phase1[self.first_artificial..].iter_mut() {
            *a = Rat::one();
        }
        let (mut obj, mut val) = self.price(&phase1);
        let bounded = self.optimize(&mut obj, &mut val, self.n_cols);
        debug_assert!(bounded, "phase one is bounded below by zero");
        if !val.is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![Rat::zero(); self.n_cols];
                    let mut dv = Rat::zero();
                    self.pivot(i, j, &mut dummy, &mut dv);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                    self.origin.remove(i);
                }
            }
        }
        let mut cost = vec![Rat::zero(); self.n_cols];
        cost[..self.n_struct].clone_from_slice(&lp.objective);
        let (mut obj, mut val) = self.price(&cost);
        if !self.optimize(&mut obj, &mut val, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rat::zero(); self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                x[b] = self.rhs[i].clone();
            }
        }
        let value = lp.objective_at(&x);
        debug_assert_eq!(value, -val);
        // the artificial column of a row is its unit vector, so its reduced
        // cost is minus the row price; redundant rows are priced at zero
        let mut duals = vec![Rat::zero(); self.negated.len()];
        for &i in &self.origin {
            let price = -&obj[self.first_artificial + i];
            duals[i] = if self.negated[i] { -price } else { price };
        }
        LpOutcome::Optimal { x, value, duals }
    }
}
