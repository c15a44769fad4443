//! Log canonical thresholds of non-degenerate functions on a toric germ, read
//! off the Newton polyhedron `□ = conv(∪ (m_α + σ^∨))`.
//!
//! The ray `R_{≥0}·w`, `w = (1 - b_1, …, 1 - b_d)`, first meets `□` at `μ·w`;
//! for general coefficients the threshold is `min(1, 1/μ)`. `μ` is the value
//! of a small exact linear program, and the optimum is certified by a dual
//! vector `u ≥ 0` with `<u, w> = 1` and `<u, m_α> ≥ μ` for every exponent.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{log_discrepancy_of_valuation, ToricGerm};
use crate::lp::{LinearProgram, LpOutcome, Sense};
use crate::rat::{ExtRat, QVec, Rat};

/// Minimal generating set of the monoid `M ∩ σ^∨`, sorted lexicographically.
///
/// Every irreducible element lies in the box `Π [0, c_i]`, where `c_i e_i` is
/// the primitive `M`-vector on ray `i`; the box points are visited by degree
/// and kept unless some earlier basis element lies below them.
pub fn dual_hilbert_basis(g: &ToricGerm) -> Vec<QVec> {
    dual_hilbert_basis_ints(g)
        .into_iter()
        .map(|m| QVec::from_ints(&m))
        .collect()
}

/// `c_i` with `c_i e_i` primitive in `M`.
pub fn dual_axis_scales(g: &ToricGerm) -> Vec<i64> {
    let (denom, rows) = g.lattice().integer_form().expect("desk-scale lattice");
    (0..g.dim())
        .map(|i| denom / rows.iter().fold(denom, |acc, r| acc.gcd(&r[i])))
        .collect()
}

/// Integral points of `M` inside the box `Π [0, c_i]`.
pub fn dual_box_points(g: &ToricGerm) -> Vec<Vec<i64>> {
    let d = g.dim();
    let caps = dual_axis_scales(g);
    let m = g.lattice().dual();
    let basis: Vec<Vec<i64>> = m
        .basis()
        .iter()
        .map(|row| row.iter().map(|x| x.to_i64().expect("integral dual basis")).collect())
        .collect();
    let mut out = Vec::new();
    let mut point = vec![0i64; d];
    walk(&basis, &caps, 0, &mut point, &mut out);
    return out;

    // the dual basis is upper triangular: choose coefficients column by column
    fn walk(basis: &[Vec<i64>], caps: &[i64], j: usize, point: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if j == caps.len() {
            out.push(point.clone());
            return;
        }
        let piv = basis[j][j];
        let partial = point[j];
        let lo = Integer::div_ceil(&(-partial), &piv);
        let hi = Integer::div_floor(&(caps[j] - partial), &piv);
        for a in lo..=hi {
            for k in j..caps.len() {
                point[k] += a * basis[j][k];
            }
            walk(basis, caps, j + 1, point, out);
            for k in j..caps.len() {
                point[k] -= a * basis[j][k];
            }
        }
    }
}

pub(crate) fn dual_hilbert_basis_ints(g: &ToricGerm) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = dual_box_points(g)
        .into_iter()
        .filter(|p| p.iter().any(|&x| x != 0))
        .collect();
    pts.sort_by(|a, b| {
        let (sa, sb): (i64, i64) = (a.iter().sum(), b.iter().sum());
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        let reducible = basis.iter().any(|h| h.iter().zip(&p).all(|(a, b)| a <= b) && *h != p);
        if !reducible {
            basis.push(p);
        }
    }
    basis.sort();
    basis
}

/// A finite exponent set in `M ∩ σ^∨ \ 0` standing for `□`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPoly {
    germ: ToricGerm,
    exponents: Vec<QVec>,
}

impl NewtonPoly {
    pub fn germ(&self) -> &ToricGerm {
        &self.germ
    }

    pub fn exponents(&self) -> &[QVec] {
        &self.exponents
    }

    /// Drops exponents that dominate another one componentwise; `□` is unchanged.
    /// Returns the pruned polyhedron and how many exponents were removed.
    pub fn prune_dominated(&self) -> (NewtonPoly, usize) {
        let keep: Vec<QVec> = self
            .exponents
            .iter()
            .filter(|m| {
                !self
                    .exponents
                    .iter()
                    .any(|o| o != *m && o.iter().zip(m.iter()).all(|(a, b)| a <= b))
            })
            .cloned()
            .collect();
        let removed = self.exponents.len() - keep.len();
        (
            NewtonPoly {
                germ: self.germ.clone(),
                exponents: keep,
            },
            removed,
        )
    }

    /// `v(x) = min_α <m_α, x>`.
    pub fn order_along(&self, x: &QVec) -> Rat {
        self.exponents
            .iter()
            .map(|m| m.dot(x))
            .min()
            .expect("nonempty exponent list")
    }
}

fn check_exponent(g: &ToricGerm, m: &QVec) -> Result<()> {
    if m.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: m.dim(),
        });
    }
    if m.is_zero() {
        return Err(Error::ZeroExponent);
    }
    if !m.is_nonnegative() {
        return Err(Error::NegativeExponent(m.clone()));
    }
    let in_dual = g.lattice().basis().iter().all(|row| row.dot(m).is_integer());
    if !in_dual {
        return Err(Error::ExponentNotInDual(m.clone()));
    }
    Ok(())
}

/// Validated, deduplicated and sorted exponent set.
pub fn newton_poly_from_exponents(g: &ToricGerm, exps: &[QVec]) -> Result<NewtonPoly> {
    if exps.is_empty() {
        return Err(Error::NoExponents);
    }
    for m in exps {
        check_exponent(g, m)?;
    }
    let mut exponents = exps.to_vec();
    exponents.sort();
    exponents.dedup();
    Ok(NewtonPoly {
        germ: g.clone(),
        exponents,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuSolution {
    pub mu: ExtRat,
    /// Convex weights on the exponents (in `exponents()` order) with
    /// `Σ λ_α m_α ≤ μ w`.
    pub lambda: Option<Vec<Rat>>,
    /// Dual certificate `u ≥ 0`, `<u,w> = 1`, `<u, m_α> ≥ μ` for all `α`.
    pub dual: Option<QVec>,
}

impl MuSolution {
    /// Checks both certificates against the polyhedron; together they prove
    /// optimality by weak duality.
    pub fn verify(&self, p: &NewtonPoly) -> bool {
        let w = p.germ.weights();
        let (mu, lambda, u) = match (&self.mu, &self.lambda, &self.dual) {
            (ExtRat::Finite(mu), Some(l), Some(u)) => (mu, l, u),
            (ExtRat::Infinite, None, None) => {
                // no exponent avoids every zero-weight coordinate
                return p
                    .exponents
                    .iter()
                    .all(|m| (0..w.dim()).any(|i| w[i].is_zero() && !m[i].is_zero()));
            }
            _ => return false,
        };
        if lambda.len() != p.exponents.len()
            || lambda.iter().any(Rat::is_negative)
            || lambda.iter().sum::<Rat>() != Rat::one()
        {
            return false;
        }
        let point = (0..w.dim())
            .map(|i| lambda.iter().zip(&p.exponents).map(|(l, m)| l * &m[i]).sum::<Rat>())
            .collect::<QVec>();
        let primal_ok = (0..w.dim()).all(|i| point[i] <= mu * &w[i]);
        let dual_ok = u.is_nonnegative() && u.dot(w) == Rat::one() && p.exponents.iter().all(|m| u.dot(m) >= *mu);
        primal_ok && dual_ok
    }
}

const COLUMN_BATCH: usize = 8;

/// The μ program over the exponents `active`; returns `(λ ++ [t], μ, duals)`.
fn solve_mu_restricted(p: &NewtonPoly, active: &[usize], pos_coords: &[usize]) -> (Vec<Rat>, Rat, Vec<Rat>) {
    let w = p.germ.weights();
    let k = active.len();
    let mut cost = vec![Rat::zero(); k + 1];
    cost[k] = Rat::one();
    let mut primal = LinearProgram::minimize(cost);
    let mut sum_row = vec![Rat::one(); k + 1];
    sum_row[k] = Rat::zero();
    primal.constrain(sum_row, Sense::Eq, Rat::one());
    for &i in pos_coords {
        let mut row: Vec<Rat> = active.iter().map(|&a| p.exponents[a][i].clone()).collect();
        row.push(-w[i].clone());
        primal.constrain(row, Sense::Le, Rat::zero());
    }
    let LpOutcome::Optimal { x, value, duals } = primal.solve() else {
        unreachable!("eligible exponents make the ray problem feasible and bounded");
    };
    (x, value, duals)
}

/// `μ = min { t : Σ λ_α m_α ≤ t·w, λ ≥ 0, Σ λ_α = 1 }`, `+∞` if infeasible.
pub fn first_intersection_mu(p: &NewtonPoly) -> MuSolution {
    let w = p.germ.weights();
    let d = w.dim();
    let zero_coords: Vec<usize> = (0..d).filter(|&i| w[i].is_zero()).collect();
    let pos_coords: Vec<usize> = (0..d).filter(|&i| !w[i].is_zero()).collect();
    let eligible: Vec<usize> = (0..p.exponents.len())
        .filter(|&a| zero_coords.iter().all(|&i| p.exponents[a][i].is_zero()))
        .collect();
    if eligible.is_empty() {
        return MuSolution {
            mu: ExtRat::Infinite,
            lambda: None,
            dual: None,
        };
    }

    // column generation: solve over a few exponents, then add those whose
    // dual slack is negative until the prices are feasible for all of them
    let single_bound = |a: usize| {
        pos_coords
            .iter()
            .map(|&i| &p.exponents[a][i] / &w[i])
            .max()
            .unwrap_or_else(Rat::zero)
    };
    let mut active: Vec<usize> = vec![*eligible
        .iter()
        .min_by(|&&a, &&b| single_bound(a).cmp(&single_bound(b)).then(a.cmp(&b)))
        .expect("nonempty")];
    let (x, mu, duals) = loop {
        let (x, mu, duals) = solve_mu_restricted(p, &active, &pos_coords);
        let price = |a: usize| -> Rat {
            pos_coords
                .iter()
                .enumerate()
                .map(|(j, &i)| -&duals[j + 1] * &p.exponents[a][i])
                .sum()
        };
        let mut violated: Vec<(Rat, usize)> = eligible
            .iter()
            .filter(|a| !active.contains(a))
            .map(|&a| (price(a), a))
            .filter(|(v, _)| *v < mu)
            .collect();
        if violated.is_empty() {
            break (x, mu, duals);
        }
        violated.sort();
        active.extend(violated.iter().take(COLUMN_BATCH).map(|&(_, a)| a));
    };
    assert!(mu.is_positive(), "nonzero nonnegative exponents force μ > 0");

    // witness: a single exponent below μ·w if one exists, else the simplex vertex
    let mut lambda = vec![Rat::zero(); p.exponents.len()];
    let single = eligible
        .iter()
        .copied()
        .find(|&a| (0..d).all(|i| p.exponents[a][i] <= &mu * &w[i]));
    match single {
        Some(a) => lambda[a] = Rat::one(),
        None => {
            for (j, &a) in active.iter().enumerate() {
                lambda[a] = x[j].clone();
            }
        }
    }

    // dual prices of the coordinate rows: <u, w> = 1 (t is basic) and
    // <u, m_α> ≥ price of the convexity row = μ
    let mut u = QVec::zeros(d);
    for (j, &i) in pos_coords.iter().enumerate() {
        u[i] = -&duals[j + 1];
    }
    debug_assert_eq!(duals[0], mu);
    // zero-weight directions cost nothing and push other exponents above μ
    for &i in &zero_coords {
        u[i] = mu.clone();
    }
    MuSolution {
        mu: ExtRat::Finite(mu),
        lambda: Some(lambda),
        dual: Some(u),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Binding {
    CapOne,
    Ray,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LctWitness {
    /// Nonzero convex weights `(m_α, λ_α)` realizing `μ·w ∈ □`.
    Lambda(Vec<(QVec, Rat)>),
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LctReport {
    pub mu: ExtRat,
    pub lct: Rat,
    pub binding: Binding,
    pub witness: LctWitness,
}

/// `min(1, 1/μ)`, the threshold for general coefficients.
pub fn lct_newton(p: &NewtonPoly) -> LctReport {
    lct_from_solution(p, &first_intersection_mu(p))
}

/// As [`lct_newton`], reusing an already computed solution.
pub fn lct_from_solution(p: &NewtonPoly, sol: &MuSolution) -> LctReport {
    match &sol.mu {
        ExtRat::Infinite => LctReport {
            mu: ExtRat::Infinite,
            lct: Rat::zero(),
            binding: Binding::Ray,
            witness: LctWitness::Infeasible,
        },
        ExtRat::Finite(mu) => {
            let lambda = sol.lambda.as_ref().expect("finite μ has a witness");
            let support = p
                .exponents
                .iter()
                .zip(lambda)
                .filter(|(_, l)| !l.is_zero())
                .map(|(m, l)| (m.clone(), l.clone()))
                .collect();
            let ray = mu.recip();
            let (lct, binding) = if ray <= Rat::one() {
                (ray, Binding::Ray)
            } else {
                (Rat::one(), Binding::CapOne)
            };
            LctReport {
                mu: sol.mu.clone(),
                lct,
                binding,
                witness: LctWitness::Lambda(support),
            }
        }
    }
}

/// `min_i (1 - b_i)/n_i` over `n_i > 0`; the divisor is invariant so no cap applies.
pub fn lct_monomial(g: &ToricGerm, n: &QVec) -> Result<Rat> {
    check_exponent(g, n)?;
    let w = g.weights();
    Ok((0..g.dim())
        .filter(|&i| n[i].is_positive())
        .map(|i| &w[i] / &n[i])
        .min()
        .expect("nonzero exponent"))
}

/// `min(1, Σ (1 - b_i)/n_i)` for `x_1^{n_1} + … + x_d^{n_d}` on `C^d`.
pub fn lct_fermat(g: &ToricGerm, n: &[u64]) -> Result<Rat> {
    if !g.is_smooth() {
        return Err(Error::NotSmoothLattice);
    }
    if n.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: n.len(),
        });
    }
    if n.contains(&0) {
        return Err(Error::ZeroExponent);
    }
    let s: Rat = g
        .weights()
        .iter()
        .zip(n)
        .map(|(w, &k)| w / Rat::from_int(k as i64))
        .sum();
    Ok(s.min(Rat::one()))
}

/// Exponents `{n_i e_i}` of the Fermat polynomial.
pub fn fermat_exponents(n: &[u64]) -> Vec<QVec> {
    let d = n.len();
    (0..d)
        .map(|i| QVec::unit(d, i).scale(&Rat::from_int(n[i] as i64)))
        .collect()
}

/// The polyhedron of a general member of the maximal ideal.
pub fn general_member_poly(g: &ToricGerm) -> NewtonPoly {
    NewtonPoly {
        germ: g.clone(),
        exponents: dual_hilbert_basis(g),
    }
}

pub fn lct_general_member(g: &ToricGerm) -> LctReport {
    lct_newton(&general_member_poly(g))
}

/// `A(x) / v(x)` for a primitive `x ∈ N ∩ σ`; `+∞` when `v(x) = 0`.
pub fn lct_upper_bound_from_valuation(p: &NewtonPoly, x: &QVec) -> Result<ExtRat> {
    let a = log_discrepancy_of_valuation(&p.germ, x)?;
    let v = p.order_along(x);
    Ok(if v.is_zero() {
        ExtRat::Infinite
    } else {
        ExtRat::Finite(a / v)
    })
}

/// Primitive lattice point on the ray of the dual certificate; when the
/// threshold binds on the ray it attains `A(x)/v(x) = 1/μ`.
pub fn optimal_valuation(p: &NewtonPoly) -> Option<QVec> {
    valuation_from_solution(p, &first_intersection_mu(p))
}

/// As [`optimal_valuation`], reusing an already computed solution.
pub fn valuation_from_solution(p: &NewtonPoly, sol: &MuSolution) -> Option<QVec> {
    let u = sol.dual.clone()?;
    let coords = p.germ.lattice().coordinates(&u);
    let denom = coords
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = coords.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, c| acc.gcd(c));
    let s = Rat::from_big(denom, g);
    Some(u.scale(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::germ_cyclic_quotient;

    fn v(xs: &[i64]) -> QVec {
        QVec::from_ints(xs)
    }

    fn cusp() -> NewtonPoly {
        newton_poly_from_exponents(&ToricGerm::smooth_zero(2), &[v(&[2, 0]), v(&[0, 3])]).unwrap()
    }

    #[test]
    fn hilbert_basis_examples() {
        assert_eq!(
            dual_hilbert_basis(&ToricGerm::smooth_zero(3)),
            vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]
        );
        let g = germ_cyclic_quotient(2, &[1, 1]).unwrap();
        assert_eq!(dual_hilbert_basis(&g), vec![v(&[0, 2]), v(&[1, 1]), v(&[2, 0])]);
        let g = germ_cyclic_quotient(3, &[1, 2]).unwrap();
        assert_eq!(dual_hilbert_basis(&g), vec![v(&[0, 3]), v(&[1, 1]), v(&[3, 0])]);
    }

    #[test]
    fn exponent_validation() {
        let c2 = ToricGerm::smooth_zero(2);
        assert_eq!(cusp().exponents(), &[v(&[0, 3]), v(&[2, 0])]);
        assert!(newton_poly_from_exponents(&c2, &[v(&[1, 0]), v(&[0, 1]), v(&[1, 0])]).is_ok());
        let half = germ_cyclic_quotient(2, &[1, 1]).unwrap();
        assert!(matches!(
            newton_poly_from_exponents(&half, &[v(&[1, 0])]),
            Err(Error::ExponentNotInDual(_))
        ));
        assert_eq!(newton_poly_from_exponents(&c2, &[v(&[0, 0])]), Err(Error::ZeroExponent));
        assert!(matches!(
            newton_poly_from_exponents(&c2, &[v(&[-1, 2])]),
            Err(Error::NegativeExponent(_))
        ));
        assert_eq!(newton_poly_from_exponents(&c2, &[]), Err(Error::NoExponents));
    }

    #[test]
    fn mu_examples() {
        let p = cusp();
        let sol = first_intersection_mu(&p);
        assert_eq!(sol.mu, ExtRat::Finite(Rat::new(6, 5)));
        // exponents are sorted: (0,3), (2,0)
        assert_eq!(sol.lambda.clone().unwrap(), vec![Rat::new(2, 5), Rat::new(3, 5)]);
        assert!(sol.verify(&p));

        let lines = newton_poly_from_exponents(&ToricGerm::smooth_zero(2), &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let sol = first_intersection_mu(&lines);
        assert_eq!(sol.mu, ExtRat::Finite(Rat::new(1, 2)));
        assert!(sol.verify(&lines));

        let g = ToricGerm::smooth(&[Rat::one(), Rat::zero()]).unwrap();
        let p = newton_poly_from_exponents(&g, &[v(&[1, 0])]).unwrap();
        let sol = first_intersection_mu(&p);
        assert_eq!(sol.mu, ExtRat::Infinite);
        assert!(sol.verify(&p));
    }

    #[test]
    fn lct_examples() {
        let rep = lct_newton(&cusp());
        assert_eq!(rep.lct, Rat::new(5, 6));
        assert_eq!(rep.binding, Binding::Ray);

        let lines = newton_poly_from_exponents(&ToricGerm::smooth_zero(2), &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        let rep = lct_newton(&lines);
        assert_eq!(rep.lct, Rat::one());
        assert_eq!(rep.binding, Binding::CapOne);

        let g = ToricGerm::smooth(&[Rat::zero(), Rat::one()]).unwrap();
        let p = newton_poly_from_exponents(&g, &[v(&[1, 0])]).unwrap();
        assert_eq!(lct_newton(&p).lct, Rat::one());
        let p = newton_poly_from_exponents(&g, &[v(&[0, 1])]).unwrap();
        let rep = lct_newton(&p);
        assert_eq!(rep.lct, Rat::zero());
        assert_eq!(rep.witness, LctWitness::Infeasible);
    }

    #[test]
    fn monomial_and_fermat_examples() {
        assert_eq!(
            lct_monomial(&ToricGerm::smooth_zero(3), &v(&[1, 2, 3])).unwrap(),
            Rat::new(1, 3)
        );
        let g = ToricGerm::smooth(&[Rat::new(1, 2), Rat::zero()]).unwrap();
        assert_eq!(lct_monomial(&g, &v(&[1, 1])).unwrap(), Rat::new(1, 2));
        for k in 1..6 {
            assert_eq!(
                lct_monomial(&ToricGerm::smooth_zero(1), &v(&[k])).unwrap(),
                Rat::new(1, k)
            );
        }
        let c2 = ToricGerm::smooth_zero(2);
        assert_eq!(lct_fermat(&c2, &[2, 3]).unwrap(), Rat::new(5, 6));
        assert_eq!(lct_fermat(&c2, &[2, 2]).unwrap(), Rat::one());
        let g = ToricGerm::smooth(&[Rat::one(), Rat::zero()]).unwrap();
        assert_eq!(lct_fermat(&g, &[1, 1]).unwrap(), Rat::one());
        let half = germ_cyclic_quotient(2, &[1, 1]).unwrap();
        assert_eq!(lct_fermat(&half, &[2, 2]), Err(Error::NotSmoothLattice));
    }

    #[test]
    fn general_member_examples() {
        let rep = lct_general_member(&ToricGerm::smooth_zero(3));
        assert_eq!(rep.mu, ExtRat::Finite(Rat::new(1, 3)));
        assert_eq!(rep.lct, Rat::one());
        let rep = lct_general_member(&germ_cyclic_quotient(2, &[1, 1]).unwrap());
        assert_eq!(rep.lct, Rat::one());
        assert_eq!(rep.binding, Binding::Ray);
        assert_eq!(rep.witness, LctWitness::Lambda(vec![(v(&[1, 1]), Rat::one())]));
        for k in 1..=9 {
            let rep = lct_general_member(&germ_cyclic_quotient(k, &[1, 1]).unwrap());
            assert_eq!(rep.lct, Rat::new(2, k as i64).min(Rat::one()), "k={k}");
        }
    }

    #[test]
    fn valuation_bound_examples() {
        let p = cusp();
        assert_eq!(
            lct_upper_bound_from_valuation(&p, &v(&[3, 2])).unwrap(),
            ExtRat::Finite(Rat::new(5, 6))
        );
        assert_eq!(
            lct_upper_bound_from_valuation(&p, &v(&[1, 1])).unwrap(),
            ExtRat::Finite(Rat::one())
        );
        assert_eq!(
            lct_upper_bound_from_valuation(&p, &v(&[1, 0])).unwrap(),
            ExtRat::Infinite
        );
        assert_eq!(optimal_valuation(&p), Some(v(&[3, 2])));
    }

    #[test]
    fn pruning_keeps_minimal_exponents() {
        let c2 = ToricGerm::smooth_zero(2);
        let p = newton_poly_from_exponents(&c2, &[v(&[2, 0]), v(&[0, 3]), v(&[2, 3]), v(&[3, 1])]).unwrap();
        let (q, removed) = p.prune_dominated();
        assert_eq!(removed, 2);
        assert_eq!(lct_newton(&q), lct_newton(&p));
    }
}
