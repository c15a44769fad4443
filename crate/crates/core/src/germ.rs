//! Toric log germs `P ∈ (T_N emb(σ), Σ b_i H_i)` over the standard orthant and
//! their minimal log discrepancies.
//!
//! A germ is a lattice `N ⊇ Z^d` in which every `e_i` is primitive, together
//! with boundary coefficients `b_i ∈ [0,1]`. The toric valuation attached to a
//! primitive `x ∈ N ∩ σ` has log discrepancy `Σ (1 - b_i) x_i`, so every mld
//! here is a minimum of a linear form over lattice points of a face interior.
//! Subtracting `e_i` from a point with `x_i > 1` stays in the same face interior
//! and does not increase the form, so the unit box `(0,1]^S` always suffices.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{CosetTable, Lattice};
use crate::rat::{QVec, Rat};

/// Support `S ⊆ {0..d-1}` of a face of the orthant; the orbit closure is
/// `C_S : (x_i = 0, i ∈ S)`. Indices are 0-based in memory and 1-based in
/// documents and on the command line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(dim: usize, mut support: Vec<usize>) -> Result<Face> {
        support.sort_unstable();
        support.dedup();
        if support.is_empty() {
            return Err(Error::InvalidFace("empty support".into()));
        }
        if let Some(&i) = support.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        Ok(Face(support))
    }

    /// The face whose orbit is the fixed point.
    pub fn full(dim: usize) -> Face {
        Face((0..dim).collect())
    }

    pub fn from_one_based(dim: usize, support: &[usize]) -> Result<Face> {
        if support.contains(&0) {
            return Err(Error::InvalidFace("face indices start at 1".into()));
        }
        Face::new(dim, support.iter().map(|i| i - 1).collect())
    }

    pub fn support(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_full(&self, dim: usize) -> bool {
        self.0.len() == dim
    }

    /// Every nonempty face, ordered by size and then lexicographically.
    pub fn all(dim: usize) -> Vec<Face> {
        let mut faces: Vec<Face> = (1u32..(1 << dim))
            .map(|mask| Face((0..dim).filter(|i| mask & (1 << i) != 0).collect()))
            .collect();
        faces.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        faces
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Face{:?}", self.one_based())
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.is_empty() || v.contains(&0) {
            return Err(serde::de::Error::custom("face indices must be nonempty and 1-based"));
        }
        let mut s: Vec<usize> = v.into_iter().map(|i| i - 1).collect();
        s.sort_unstable();
        s.dedup();
        Ok(Face(s))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MldReport {
    pub value: Rat,
    pub witnesses: Vec<QVec>,
    pub face: Face,
}

#[derive(Clone)]
pub struct ToricGerm {
    lattice: Lattice,
    boundary: Vec<Rat>,
    weights: QVec,
    cosets: Arc<CosetTable>,
}

impl PartialEq for ToricGerm {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.boundary == other.boundary
    }
}

impl Eq for ToricGerm {}

impl fmt::Debug for ToricGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ToricGerm")
            .field("lattice", &self.lattice)
            .field("boundary", &self.boundary)
            .finish()
    }
}

fn check_boundary(dim: usize, b: &[Rat]) -> Result<()> {
    if b.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: b.len(),
        });
    }
    match b.iter().find(|x| !x.in_unit_interval()) {
        Some(x) => Err(Error::BoundaryOutOfRange(x.clone())),
        None => Ok(()),
    }
}

/// Rescales coordinates so that every `e_i` becomes primitive; the boundary
/// coefficient stays attached to its divisor.
pub fn germ_normalize(lattice: &Lattice, boundary: &[Rat]) -> Result<ToricGerm> {
    check_boundary(lattice.dim(), boundary)?;
    if !lattice.contains_integers() {
        return Err(Error::InvalidFace("lattice must contain Z^d".into()));
    }
    let dim = lattice.dim();
    let scales = (0..dim)
        .map(|i| {
            lattice
                .primitive_scale(&QVec::unit(dim, i))
                .map(|k| Rat::from_int(k as i64))
        })
        .collect::<Result<Vec<_>>>()?;
    let lattice = if scales.iter().all(|k| *k == Rat::one()) {
        lattice.clone()
    } else {
        lattice.scale_coords(&scales)
    };
    Ok(ToricGerm::from_parts(lattice, boundary.to_vec()))
}

impl ToricGerm {
    /// Same as [`germ_normalize`].
    pub fn new(lattice: &Lattice, boundary: &[Rat]) -> Result<ToricGerm> {
        germ_normalize(lattice, boundary)
    }

    /// Germ from parts that are trusted to be normalized.
    #[doc(hidden)]
    pub fn from_parts(lattice: Lattice, boundary: Vec<Rat>) -> ToricGerm {
        let weights = boundary.iter().map(|b| Rat::one() - b).collect();
        let cosets = Arc::new(lattice.coset_reps());
        ToricGerm {
            lattice,
            boundary,
            weights,
            cosets,
        }
    }

    /// `C^d` with boundary `b`.
    pub fn smooth(boundary: &[Rat]) -> Result<ToricGerm> {
        germ_normalize(&Lattice::integer(boundary.len()), boundary)
    }

    pub fn smooth_zero(dim: usize) -> ToricGerm {
        ToricGerm::smooth(&vec![Rat::zero(); dim]).expect("zero boundary is valid")
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn boundary(&self) -> &[Rat] {
        &self.boundary
    }

    /// `w_i = 1 - b_i`.
    pub fn weights(&self) -> &QVec {
        &self.weights
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    pub fn index(&self) -> u64 {
        self.lattice.index()
    }

    pub fn is_smooth(&self) -> bool {
        self.lattice.index() == 1
    }

    /// `Σ w_i x_i`.
    pub fn weight_of(&self, x: &QVec) -> Rat {
        self.weights.dot(x)
    }

    pub fn with_boundary(&self, boundary: &[Rat]) -> Result<ToricGerm> {
        check_boundary(self.dim(), boundary)?;
        Ok(ToricGerm {
            lattice: self.lattice.clone(),
            boundary: boundary.to_vec(),
            weights: boundary.iter().map(|b| Rat::one() - b).collect(),
            cosets: self.cosets.clone(),
        })
    }

    /// The same germ with coordinates reordered as `x ↦ (x_{perm[0]}, …)`.
    pub fn permuted(&self, perm: &[usize]) -> ToricGerm {
        let b: Vec<Rat> = perm.iter().map(|&p| self.boundary[p].clone()).collect();
        ToricGerm::from_parts(self.lattice.permuted(perm), b)
    }

    /// Unit-box points of `N ∩ relint(τ_S)`: coset representatives vanishing
    /// off `S`, with zero entries on `S` lifted to 1.
    pub fn face_candidates(&self, face: &Face) -> Vec<QVec> {
        let d = self.dim();
        self.cosets
            .reps()
            .iter()
            .filter(|r| (0..d).all(|i| face.contains(i) || r[i].is_zero()))
            .map(|r| {
                let mut x = r.clone();
                for &i in face.support() {
                    if x[i].is_zero() {
                        x[i] = Rat::one();
                    }
                }
                x
            })
            .collect()
    }
}

/// `Z^d + Z·(a_1/q, …, a_d/q)` with zero boundary, normalized.
pub fn germ_cyclic_quotient(q: u64, a: &[i64]) -> Result<ToricGerm> {
    assert!(q >= 1, "order must be positive");
    let gen = QVec::from_fracs(a, q as i64);
    let lattice = Lattice::from_generators(a.len(), &[gen])?;
    germ_normalize(&lattice, &vec![Rat::zero(); a.len()])
}

/// The germ `P_x ∈ (X_x, B_x)` together with the integers `n_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PxGerm {
    pub germ: ToricGerm,
    pub scales: Vec<u64>,
}

fn check_px_point(x: &QVec) -> Result<()> {
    match x.iter().find(|c| !c.is_positive() || **c > Rat::one()) {
        Some(c) => Err(Error::CoordinateOutOfRange(c.clone())),
        None => Ok(()),
    }
}

/// Builds `Z^d + Z·x` with boundary `Σ (1 - 1/n_i) H_i`.
pub fn germ_from_px(x: &QVec) -> Result<PxGerm> {
    check_px_point(x)?;
    let d = x.dim();
    let q = x.common_denominator();
    let qx: Vec<BigInt> = x.iter().map(|c| c.numer() * (&q / c.denom())).collect();
    let all = qx.iter().fold(q.clone(), |g, v| g.gcd(v));
    let scales: Vec<u64> = (0..d)
        .map(|j| {
            let g = qx
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .fold(q.clone(), |g, (_, v)| g.gcd(v));
            (g / &all).to_u64().ok_or(Error::Overflow)
        })
        .collect::<Result<_>>()?;
    let lattice = Lattice::from_generators(d, std::slice::from_ref(x))?;
    for (j, &n) in scales.iter().enumerate() {
        let k = lattice.primitive_scale(&QVec::unit(d, j))?;
        assert_eq!(k, n, "gcd formula disagrees with the primitive scale on axis {j}");
    }
    let boundary: Vec<Rat> = scales.iter().map(|&n| Rat::one() - Rat::new(1, n as i64)).collect();
    Ok(PxGerm {
        germ: germ_normalize(&lattice, &boundary)?,
        scales,
    })
}

/// `a(E_x; X, B) = Σ (1 - b_i) x_i` for primitive `x ∈ N ∩ σ \ 0`.
pub fn log_discrepancy_of_valuation(g: &ToricGerm, x: &QVec) -> Result<Rat> {
    if x.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: x.dim(),
        });
    }
    if !x.is_nonnegative() {
        return Err(Error::OutsideCone(x.clone()));
    }
    let scale = g.lattice().primitive_scale(x)?;
    if scale != 1 {
        return Err(Error::NotPrimitive {
            vector: x.clone(),
            scale,
        });
    }
    Ok(g.weight_of(x))
}

fn report_from_candidates(g: &ToricGerm, face: &Face, candidates: Vec<QVec>) -> MldReport {
    let mut best: Option<Rat> = None;
    let mut witnesses = Vec::new();
    for x in candidates {
        let v = g.weight_of(&x);
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => witnesses.push(x),
            _ => {
                best = Some(v);
                witnesses = vec![x];
            }
        }
    }
    witnesses.sort();
    MldReport {
        value: best.expect("every face has the lifted zero coset"),
        witnesses,
        face: face.clone(),
    }
}

/// `min { Σ w_i x_i : x ∈ N ∩ relint τ_S }` with all unit-box minimizers.
pub fn mld_face(g: &ToricGerm, face: &Face) -> MldReport {
    debug_assert!(face.support().iter().all(|&i| i < g.dim()));
    report_from_candidates(g, face, g.face_candidates(face))
}

/// Minimal log discrepancy at the fixed point.
pub fn mld_point(g: &ToricGerm) -> MldReport {
    mld_face(g, &Face::full(g.dim()))
}

/// Reports for every nonempty face, in [`Face::all`] order.
pub fn mld_all_faces(g: &ToricGerm) -> Vec<MldReport> {
    Face::all(g.dim()).iter().map(|f| mld_face(g, f)).collect()
}

/// `min { Σ w_i x_i : x ∈ N ∩ σ \ 0 }`, reported on the first face (by size,
/// then lexicographically) that attains it.
pub fn mld_global(g: &ToricGerm) -> MldReport {
    let reports = mld_all_faces(g);
    let min = reports
        .iter()
        .map(|r| &r.value)
        .min()
        .expect("at least one face")
        .clone();
    reports
        .into_iter()
        .find(|r| r.value == min)
        .expect("minimum is attained")
}

/// Exhaustive minimum over `x ∈ N` with `x_i ∈ (0, R]` on `S` and `0` off `S`.
pub fn mld_bruteforce_oracle(g: &ToricGerm, face: &Face, radius: u32) -> Rat {
    assert!(radius >= 1);
    let d = g.dim();
    let mut best: Option<Rat> = None;
    let r = Rat::from_int(radius as i64);
    for rep in g.cosets().reps() {
        if (0..d).any(|i| !face.contains(i) && !rep[i].is_zero()) {
            continue;
        }
        // per-coordinate shifts k >= 0 with 0 < rep_i + k <= R
        let ranges: Vec<Vec<Rat>> = face
            .support()
            .iter()
            .map(|&i| {
                let mut vals = Vec::new();
                let mut v = rep[i].clone();
                loop {
                    if v > r {
                        break;
                    }
                    if v.is_positive() {
                        vals.push(v.clone());
                    }
                    v += &Rat::one();
                }
                vals
            })
            .collect();
        if ranges.iter().any(Vec::is_empty) {
            continue;
        }
        // contributions w_i x_i over a common denominator, so the sweep adds machine integers
        let contrib: Vec<Vec<Rat>> = face
            .support()
            .iter()
            .zip(&ranges)
            .map(|(&i, vals)| vals.iter().map(|v| &g.weights[i] * v).collect())
            .collect();
        let denom = contrib
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Option<Vec<Vec<i128>>> = contrib
            .iter()
            .map(|vals| {
                vals.iter()
                    .map(|c| (c.numer() * (&denom / c.denom())).to_i128())
                    .collect()
            })
            .collect();
        let scaled = scaled.expect("oracle values fit in i128");
        let mut idx = vec![0usize; ranges.len()];
        let mut local: Option<i128> = None;
        loop {
            let v: i128 = scaled.iter().zip(&idx).map(|(vals, &j)| vals[j]).sum();
            if local.is_none_or(|b| v < b) {
                local = Some(v);
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < ranges[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        let v = Rat::from_big(BigInt::from(local.expect("nonempty box")), denom);
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.expect("the all-ones point on S is always enumerated")
}

/// Checks that `t` is the first minimum up to `delta`: no lattice point in
/// `int(tΔ)` and some lattice point in `int((t + delta)Δ)`, where
/// `Δ = { x ≥ 0 : Σ w_i x_i ≤ 1 }`.
pub fn verify_minkowski(g: &ToricGerm, t: &Rat, delta: &Rat) -> bool {
    assert!(!t.is_negative() && delta.is_positive());
    let interior = g.face_candidates(&Face::full(g.dim()));
    let values: Vec<Rat> = interior.iter().map(|x| g.weight_of(x)).collect();
    let empty_at_t = values.iter().all(|v| v >= t);
    let upper = t + delta;
    let hit_above = values.iter().any(|v| *v < upper);
    empty_at_t && hit_above
}

/// `min_{n ≥ 0} Σ (1 + n x_i - ⌈n x_i⌉)`, evaluated over one period `n < q`.
pub fn px_mld_formula(x: &QVec) -> Result<Rat> {
    check_px_point(x)?;
    let q = x.common_denominator().to_i64().ok_or(Error::Overflow)?;
    let one = Rat::one();
    let best = (0..q)
        .map(|n| {
            let n = Rat::from_int(n);
            x.iter()
                .map(|c| {
                    let nc = &n * c;
                    &one + &nc - nc.ceil()
                })
                .sum::<Rat>()
        })
        .min()
        .expect("q >= 1");
    Ok(best)
}

/// Smallest `r ≥ 1` with `r·w ∈ M`; every mld of the germ lies in `(1/r)Z`.
pub fn cartier_index(g: &ToricGerm) -> u64 {
    let r = g
        .lattice()
        .basis()
        .iter()
        .map(|row| g.weight_of(row))
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    r.to_u64().expect("cartier index fits u64")
}

/// Every exceptional toric valuation (support of size at least 2) has log
/// discrepancy above 1.
pub fn is_terminal(g: &ToricGerm) -> bool {
    Face::all(g.dim())
        .iter()
        .filter(|f| f.len() >= 2)
        .all(|f| mld_face(g, f).value > Rat::one())
}
