//! Full-rank rational lattices in canonical (Hermite) form.
//!
//! A [`Lattice`] is stored through its row-style Hermite normal form: the
//! basis rows are upper triangular with positive pivots, and every entry
//! above a pivot is reduced into `[0, pivot)`. The form is computed on the
//! integer lattice obtained by clearing denominators and scaled back, so two
//! presentations of the same lattice always give identical bases.
//!
//! Most lattices here contain `Z^d` (the lattices of toric germs). Their
//! duals are sublattices of `Z^d`; both are represented by the same type.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::{QVec, Rat};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<QVec>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice{:?}", self.basis)
    }
}

/// Full set of representatives of `N / Z^d` inside `[0,1)^d`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    reps: Vec<QVec>,
}

impl CosetTable {
    pub fn reps(&self) -> &[QVec] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn contains(&self, x: &QVec) -> bool {
        self.reps.binary_search(&x.mod_one()).is_ok()
    }
}

/// Row-style Hermite normal form of an integer matrix of full column rank.
fn integer_hnf(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut r = 0;
    for col in 0..ncols {
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(p) = pivot else {
                return Err(Error::RankDeficient);
            };
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[r][col];
                let (head, tail) = rows.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[r]) {
                    *a -= &q * b;
                }
                if !rows[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][col].is_negative() {
            for a in rows[r].iter_mut() {
                *a = -&*a;
            }
        }
        for i in 0..r {
            let q = rows[i][col].div_floor(&rows[r][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(r);
            for (a, b) in head[i].iter_mut().zip(&tail[0]) {
                *a -= &q * b;
            }
        }
        r += 1;
    }
    rows.truncate(ncols);
    Ok(rows)
}

fn check_dims(dim: usize, vs: &[QVec]) -> Result<()> {
    match vs.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            got: v.dim(),
        }),
        None => Ok(()),
    }
}

impl Lattice {
    /// The lattice spanned by `gens`, which must have full rank.
    pub fn span(dim: usize, gens: &[QVec]) -> Result<Lattice> {
        assert!(dim > 0, "lattices need positive dimension");
        check_dims(dim, gens)?;
        let denom = gens
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(&g.common_denominator()));
        let rows = gens
            .iter()
            .map(|g| g.iter().map(|x| x.numer() * (&denom / x.denom())).collect::<Vec<_>>())
            .collect();
        let hnf = integer_hnf(rows, dim)?;
        let basis = hnf
            .into_iter()
            .map(|row| row.into_iter().map(|a| Rat::from_big(a, denom.clone())).collect())
            .collect();
        Ok(Lattice { dim, basis })
    }

    /// `Z^d + Σ Z·gens` in canonical form.
    pub fn from_generators(dim: usize, gens: &[QVec]) -> Result<Lattice> {
        check_dims(dim, gens)?;
        let mut all: Vec<QVec> = (0..dim).map(|i| QVec::unit(dim, i)).collect();
        all.extend(gens.iter().cloned());
        Lattice::span(dim, &all)
    }

    pub fn integer(dim: usize) -> Lattice {
        Lattice::from_generators(dim, &[]).expect("Z^d has full rank")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    /// `|det|` of the basis.
    pub fn covolume(&self) -> Rat {
        self.basis
            .iter()
            .enumerate()
            .fold(Rat::one(), |acc, (i, row)| acc * &row[i])
    }

    pub fn contains_integers(&self) -> bool {
        (0..self.dim).all(|i| self.contains(&QVec::unit(self.dim, i)))
    }

    /// `[N : Z^d]` for a lattice containing `Z^d`.
    pub fn index(&self) -> u64 {
        let inv = self.covolume().recip();
        inv.to_i64()
            .and_then(|n| u64::try_from(n).ok())
            .expect("index of a lattice containing Z^d is a positive integer")
    }

    /// `[Z^d : M]` for an integral sublattice.
    pub fn index_in_integers(&self) -> u64 {
        self.covolume()
            .to_i64()
            .and_then(|n| u64::try_from(n).ok())
            .expect("covolume of an integral lattice is a positive integer")
    }

    pub fn is_integer_lattice(&self) -> bool {
        self.covolume() == Rat::one() && self.basis.iter().all(QVec::is_integral)
    }

    /// Integer coordinates of `x` in the canonical basis, if `x` lies in the lattice
    /// (rational coordinates otherwise).
    pub fn coordinates(&self, x: &QVec) -> Vec<Rat> {
        let mut rest = x.clone();
        let mut coords = Vec::with_capacity(self.dim);
        for (i, row) in self.basis.iter().enumerate() {
            let c = &rest[i] / &row[i];
            for j in i..self.dim {
                let delta = &c * &row[j];
                rest[j] -= &delta;
            }
            coords.push(c);
        }
        coords
    }

    pub fn contains(&self, x: &QVec) -> bool {
        x.dim() == self.dim && self.coordinates(x).iter().all(Rat::is_integer)
    }

    /// Largest `k` with `x / k` in the lattice.
    pub fn primitive_scale(&self, x: &QVec) -> Result<u64> {
        check_dims(self.dim, std::slice::from_ref(x))?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let coords = self.coordinates(x);
        if !coords.iter().all(Rat::is_integer) {
            return Err(Error::NotInLattice(x.clone()));
        }
        let g = coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        g.to_u64().ok_or(Error::Overflow)
    }

    pub fn is_primitive(&self, x: &QVec) -> bool {
        matches!(self.primitive_scale(x), Ok(1))
    }

    /// Coset representatives of `N / Z^d` by additive closure of the basis mod 1.
    pub fn coset_reps(&self) -> CosetTable {
        let gens: Vec<QVec> = self.basis.iter().map(QVec::mod_one).filter(|g| !g.is_zero()).collect();
        let mut seen = BTreeSet::new();
        let zero = QVec::zeros(self.dim);
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(v) = frontier.pop() {
            for g in &gens {
                let w = (&v + g).mod_one();
                if seen.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        CosetTable {
            reps: seen.into_iter().collect(),
        }
    }

    /// `M = { m : <m, x> ∈ Z for all x ∈ N }`.
    pub fn dual(&self) -> Lattice {
        let inv = invert(&self.basis).expect("canonical bases are invertible");
        // rows of (B^{-1})^T are the columns of B^{-1}
        let cols: Vec<QVec> = (0..self.dim)
            .map(|j| inv.iter().map(|row| row[j].clone()).collect())
            .collect();
        Lattice::span(self.dim, &cols).expect("dual basis has full rank")
    }

    /// Image under deletion of coordinate `i`.
    pub fn project_drop_coord(&self, i: usize) -> Result<Lattice> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        if self.dim < 2 {
            return Err(Error::InvalidFace("cannot project a rank-1 lattice".into()));
        }
        let images: Vec<QVec> = self.basis.iter().map(|b| b.without(i)).collect();
        Lattice::span(self.dim - 1, &images)
    }

    /// Image under `x ↦ (s_1 x_1, …, s_d x_d)`.
    pub fn scale_coords(&self, scales: &[Rat]) -> Lattice {
        assert_eq!(scales.len(), self.dim);
        let rows: Vec<QVec> = self
            .basis
            .iter()
            .map(|b| b.iter().zip(scales).map(|(x, s)| x * s).collect())
            .collect();
        Lattice::span(self.dim, &rows).expect("diagonal rescaling keeps full rank")
    }

    /// Image under the coordinate permutation `x ↦ (x_{perm[0]}, …)`.
    pub fn permuted(&self, perm: &[usize]) -> Lattice {
        let rows: Vec<QVec> = self.basis.iter().map(|b| b.permuted(perm)).collect();
        Lattice::span(self.dim, &rows).expect("permutation keeps full rank")
    }

    /// Nonzero basis rows reduced mod `Z^d`; together with `Z^d` they generate the lattice.
    pub fn fractional_generators(&self) -> Vec<QVec> {
        self.basis.iter().map(QVec::mod_one).filter(|g| !g.is_zero()).collect()
    }

    /// Common denominator `D` of the basis and the integer rows `D·basis`.
    pub fn integer_form(&self) -> Result<(i64, Vec<Vec<i64>>)> {
        let denom = self
            .basis
            .iter()
            .fold(BigInt::one(), |acc, b| acc.lcm(&b.common_denominator()));
        let rows = self
            .basis
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| (x.numer() * (&denom / x.denom())).to_i64().ok_or(Error::Overflow))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok((denom.to_i64().ok_or(Error::Overflow)?, rows))
    }

    /// Hand-built lattice that skips canonicalization; only for fault-injection tests.
    #[doc(hidden)]
    pub fn from_basis_unchecked(basis: Vec<QVec>) -> Lattice {
        Lattice {
            dim: basis.len(),
            basis,
        }
    }

    /// Whether the stored basis is the canonical form of the lattice it spans.
    pub fn is_canonical(&self) -> bool {
        Lattice::span(self.dim, &self.basis).is_ok_and(|l| l == *self)
    }
}

/// Gauss–Jordan inverse of a square rational matrix given by rows.
pub fn invert(rows: &[QVec]) -> Option<Vec<QVec>> {
    let n = rows.len();
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut inv: Vec<Vec<Rat>> = (0..n).map(|i| QVec::unit(n, i).into_entries()).collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col].recip();
        for j in 0..n {
            a[col][j] = &a[col][j] * &piv;
            inv[col][j] = &inv[col][j] * &piv;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let da = &f * &a[col][j];
                a[i][j] -= &da;
                let di = &f * &inv[col][j];
                inv[i][j] -= &di;
            }
        }
    }
    Some(inv.into_iter().map(QVec::new).collect())
}

/// Upper-triangular integer Hermite forms with determinant `n`, in row-style.
fn hnf_with_det(dim: usize, n: u64, out: &mut Vec<Vec<Vec<i64>>>) {
    fn diagonals(dim: usize, n: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == dim - 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 1..=n {
            if n.is_multiple_of(a) {
                prefix.push(a);
                diagonals(dim, n / a, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut diags = Vec::new();
    diagonals(dim, n, &mut Vec::new(), &mut diags);
    for diag in diags {
        // free entries: (i, j) with i < j, ranging over [0, diag[j])
        let slots: Vec<(usize, usize)> = (0..dim).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut m: Vec<Vec<i64>> = (0..dim)
            .map(|i| {
                let mut r = vec![0i64; dim];
                r[i] = diag[i] as i64;
                r
            })
            .collect();
        fill(&slots, 0, &diag, &mut m, out);
    }

    fn fill(slots: &[(usize, usize)], k: usize, diag: &[u64], m: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
        if k == slots.len() {
            out.push(m.clone());
            return;
        }
        let (i, j) = slots[k];
        for v in 0..diag[j] as i64 {
            m[i][j] = v;
            fill(slots, k + 1, diag, m, out);
        }
        m[i][j] = 0;
    }
}

/// All lattices `N ⊇ Z^d` of index at most `max_index` in which every `e_i` is
/// primitive, sorted by `(index, canonical basis)`.
///
/// Runs over the Hermite forms of sublattices `M ⊆ Z^d` and dualizes. `e_i` is
/// primitive in `N = M^*` exactly when column `i` of a basis of `M` has gcd 1,
/// which filters before the dual is formed. With `mod_permutations`, only the
/// lexicographically least coordinate permutation of each lattice is kept.
pub fn enumerate_superlattices(dim: usize, max_index: u64, mod_permutations: bool) -> Vec<Lattice> {
    assert!(dim >= 1);
    let mut found = BTreeSet::new();
    for n in 1..=max_index {
        let mut hnfs = Vec::new();
        hnf_with_det(dim, n, &mut hnfs);
        for m in hnfs {
            let primitive = (0..dim).all(|j| m.iter().fold(0i64, |g, row| g.gcd(&row[j])) == 1);
            if !primitive {
                continue;
            }
            let rows: Vec<QVec> = m.iter().map(|r| QVec::from_ints(r)).collect();
            let lat = Lattice::span(dim, &rows).expect("hermite form has full rank").dual();
            let lat = if mod_permutations {
                min_over_permutations(&lat)
            } else {
                lat
            };
            found.insert((lat.index(), lat));
        }
    }
    found.into_iter().map(|(_, l)| l).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn min_over_permutations(l: &Lattice) -> Lattice {
    permutations(l.dim())
        .iter()
        .map(|p| l.permuted(p))
        .min()
        .expect("at least the identity permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(nums: &[i64], d: i64) -> QVec {
        QVec::from_fracs(nums, d)
    }

    #[test]
    fn from_generators_examples() {
        assert_eq!(Lattice::from_generators(2, &[]).unwrap().index(), 1);
        let a2 = Lattice::from_generators(2, &[q(&[1, 2], 3)]).unwrap();
        assert_eq!(a2.index(), 3);
        assert_eq!(a2.basis(), &[q(&[1, 2], 3), q(&[0, 1], 1)]);
        let l = Lattice::from_generators(3, &[q(&[1, 2, 3], 4)]).unwrap();
        assert_eq!(l.index(), 4);
        assert!(matches!(
            Lattice::from_generators(2, &[q(&[1], 2)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn contains_examples() {
        let a2 = Lattice::from_generators(2, &[q(&[1, 2], 3)]).unwrap();
        assert!(a2.contains(&q(&[2, 1], 3)));
        assert!(!a2.contains(&q(&[1, 1], 3)));
        assert!(!Lattice::integer(2).contains(&q(&[1, 0], 2)));
    }

    #[test]
    fn primitive_scale_examples() {
        let z2 = Lattice::integer(2);
        assert_eq!(z2.primitive_scale(&QVec::unit(2, 0)).unwrap(), 1);
        let l = Lattice::from_generators(2, &[q(&[2, 1], 4)]).unwrap();
        assert_eq!(l.primitive_scale(&QVec::unit(2, 1)).unwrap(), 2);
        let l = Lattice::from_generators(2, &[q(&[1, 0], 2)]).unwrap();
        assert_eq!(l.primitive_scale(&QVec::unit(2, 0)).unwrap(), 2);
        assert_eq!(z2.primitive_scale(&QVec::zeros(2)), Err(Error::ZeroVector));
        assert!(matches!(
            z2.primitive_scale(&q(&[1, 0], 2)),
            Err(Error::NotInLattice(_))
        ));
    }

    #[test]
    fn coset_examples() {
        assert_eq!(Lattice::integer(3).coset_reps().reps(), &[QVec::zeros(3)]);
        let a2 = Lattice::from_generators(2, &[q(&[1, 2], 3)]).unwrap();
        assert_eq!(a2.coset_reps().reps(), &[QVec::zeros(2), q(&[1, 2], 3), q(&[2, 1], 3)]);
        let l = Lattice::from_generators(3, &[q(&[1, 2, 3], 4)]).unwrap();
        let expected: Vec<QVec> = {
            let mut v: Vec<QVec> = (0..4).map(|k| q(&[k, 2 * k, 3 * k], 4).mod_one()).collect();
            v.sort();
            v
        };
        assert_eq!(l.coset_reps().reps(), expected.as_slice());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Lattice::integer(2).dual(), Lattice::integer(2));
        let d = Lattice::from_generators(2, &[q(&[1, 1], 2)]).unwrap().dual();
        let parity = Lattice::span(2, &[QVec::from_ints(&[1, 1]), QVec::from_ints(&[0, 2])]).unwrap();
        assert_eq!(d, parity);
        let d = Lattice::from_generators(3, &[q(&[1, 2, 3], 4)]).unwrap().dual();
        for m in [[4, 0, 0], [1, 0, 1], [0, 2, 0], [2, 1, 0], [1, 1, 1]] {
            let v = QVec::from_ints(&m);
            assert_eq!(d.contains(&v), (m[0] + 2 * m[1] + 3 * m[2]) % 4 == 0, "{m:?}");
        }
        assert_eq!(d.index_in_integers(), 4);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(Lattice::integer(3).project_drop_coord(1).unwrap(), Lattice::integer(2));
        let l = Lattice::from_generators(3, &[q(&[1, 1, 1], 2)]).unwrap();
        assert_eq!(
            l.project_drop_coord(2).unwrap(),
            Lattice::from_generators(2, &[q(&[1, 1], 2)]).unwrap()
        );
        let l = Lattice::from_generators(3, &[q(&[1, 2, 3], 4)]).unwrap();
        assert_eq!(
            l.project_drop_coord(2).unwrap(),
            Lattice::from_generators(2, &[q(&[1, 2], 4)]).unwrap()
        );
    }

    #[test]
    fn superlattice_examples() {
        assert_eq!(enumerate_superlattices(2, 1, false), vec![Lattice::integer(2)]);
        let half = Lattice::from_generators(2, &[q(&[1, 1], 2)]).unwrap();
        assert_eq!(
            enumerate_superlattices(2, 2, false),
            vec![Lattice::integer(2), half.clone()]
        );
        let third_a = Lattice::from_generators(2, &[q(&[1, 1], 3)]).unwrap();
        let third_b = Lattice::from_generators(2, &[q(&[1, 2], 3)]).unwrap();
        let got = enumerate_superlattices(2, 3, false);
        assert_eq!(got.len(), 4);
        for l in [Lattice::integer(2), half, third_a, third_b] {
            assert!(got.contains(&l));
        }
        // 1/3(1,1) and 1/3(1,2) are not permutations of each other
        assert_eq!(enumerate_superlattices(2, 3, true).len(), 4);
    }

    #[test]
    fn mod_permutations_merges_orbits() {
        let all = enumerate_superlattices(3, 6, false);
        let reduced = enumerate_superlattices(3, 6, true);
        assert!(reduced.len() < all.len());
        for l in &reduced {
            assert!(all.contains(l));
        }
    }

    #[test]
    fn invert_roundtrip() {
        let rows = vec![q(&[1, 2], 3), q(&[0, 1], 1)];
        let inv = invert(&rows).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e: Rat = (0..2).map(|k| &rows[i][k] * &inv[k][j]).sum();
                assert_eq!(e, if i == j { Rat::one() } else { Rat::zero() });
            }
        }
    }
}
