//! Flat log structures: starting from a log canonical toric germ, add general
//! members `D_1, D_2, …` of the maximal ideal at their thresholds until the
//! pair has log discrepancy 0 at the fixed point.
//!
//! General members are modeled through the Newton polyhedron of the whole
//! maximal ideal. Along the toric valuation `x` each `D_j` has order
//! `v(x) = min_{h ∈ HB} <h, x>` (`HB` the Hilbert basis of `M ∩ σ^∨`); each
//! `D_j` has order 1 along its own strict transform, and distinct members meet
//! transversally. A valuation of the resolved model is a pair `(x, J)` with
//! `x ∈ N ∩ σ` primitive or zero and `J` a set of members, centered on a
//! stratum of dimension `d - |supp x| - |J|`, and
//!
//! ```text
//! value(x, J) = A(x) - Γ·v(x) + Σ_{j ∈ J} (1 - γ_j),    Γ = Σ_j γ_j.
//! ```
//!
//! `v` vanishes on every proper face (the axis generator `c_i e_i` pairs to
//! zero with points off coordinate `i`), so invariant cycles with `b_i = 1`
//! never block a step.
//!
//! Threshold of the next member: a new member with coefficient `t` turns
//! `value(x, J)` into `value(x, J) - t v(x)` and adds the pairs `(x, J + new)`
//! with value `value(x, J) + 1 - t (v(x) + 1)`. Each constraint
//! `t ≤ (value(x,J) + e) / (v(x) + e)` is a mediant of `(A - Γv)/v` and
//! `(Σ_J (1-γ_j) + e)/e`, so it is bounded below by the smaller of the ray
//! infimum `inf A/v - Γ` and the `x = 0` constraints. Lattice points beyond
//! the unit box are therefore never needed.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{mld_face, Face, ToricGerm};
use crate::lp::{LinearProgram, LpOutcome, Sense};
use crate::newton::{first_intersection_mu, general_member_poly};
use crate::rat::{ExtRat, QVec, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatState {
    germ: ToricGerm,
    gammas: Vec<Rat>,
    hb: Vec<QVec>,
    ray: RayInfimum,
    // primitive unit-box points with A(x) and v(x); fixed by the germ
    points: Arc<Vec<BoxPoint>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BoxPoint {
    x: QVec,
    a: Rat,
    v: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CenterKind {
    #[serde(rename = "point-P")]
    PointP,
    InvariantCycle {
        face: Face,
    },
    /// 1-based member index.
    GeneralDivisor {
        divisor: usize,
    },
    /// Intersection of an invariant cycle (if any) with general members (1-based).
    Stratum {
        face: Option<Face>,
        divisors: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterDescriptor {
    #[serde(flatten)]
    pub kind: CenterKind,
    pub dimension: usize,
}

impl fmt::Display for CenterDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CenterKind::PointP => write!(f, "point-P"),
            CenterKind::InvariantCycle { face } => write!(f, "invariant-cycle{:?}", face.one_based()),
            CenterKind::GeneralDivisor { divisor } => write!(f, "general-divisor({divisor})"),
            CenterKind::Stratum { face, divisors } => write!(
                f,
                "stratum({:?},{:?})",
                face.as_ref().map(Face::one_based).unwrap_or_default(),
                divisors
            ),
        }?;
        write!(f, " dim {}", self.dimension)
    }
}

/// A valuation of the model together with the members it lies on (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Combo {
    pub x: QVec,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Center {
    pub descriptor: CenterDescriptor,
    pub witness: Combo,
}

/// Infimum of `A(x)/v(x)` over the interior of `σ` and a primitive lattice
/// point on a minimizing ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayInfimum {
    pub value: Rat,
    pub ray: QVec,
}

impl FlatState {
    pub fn new(germ: &ToricGerm) -> FlatState {
        // inf A/v = 1/μ for the general member; the dual certificate is an
        // interior point attaining it
        let gm = general_member_poly(germ);
        let sol = first_intersection_mu(&gm);
        let ray = match (&sol.mu, &sol.dual) {
            (ExtRat::Finite(mu), Some(u)) => RayInfimum {
                value: mu.recip(),
                ray: primitive_on_ray(germ, u),
            },
            _ => RayInfimum {
                value: Rat::zero(),
                ray: primitive_on_ray(germ, &QVec::new(vec![Rat::one(); germ.dim()])),
            },
        };
        let hb = gm.exponents().to_vec();
        let d = germ.dim();
        let mut points = vec![BoxPoint {
            x: QVec::zeros(d),
            a: Rat::zero(),
            v: Rat::zero(),
        }];
        // v(x) = min <h, x> over integer rescalings of HB
        let (hb_int, hb_den) = integer_rows(&hb);
        for face in Face::all(d) {
            for x in germ.face_candidates(&face) {
                if germ.lattice().is_primitive(&x) {
                    let (xi, x_den) = integer_rows(std::slice::from_ref(&x));
                    let v = hb_int
                        .iter()
                        .map(|h| h.iter().zip(&xi[0]).map(|(a, b)| a * b).sum::<i128>())
                        .min()
                        .map_or_else(Rat::zero, |n| {
                            Rat::from_big(BigInt::from(n), BigInt::from(hb_den) * BigInt::from(x_den))
                        });
                    points.push(BoxPoint {
                        a: germ.weight_of(&x),
                        v,
                        x,
                    });
                }
            }
        }
        FlatState {
            hb,
            germ: germ.clone(),
            gammas: Vec::new(),
            ray,
            points: Arc::new(points),
        }
    }

    pub fn with_gammas(germ: &ToricGerm, gammas: Vec<Rat>) -> Result<FlatState> {
        let mut st = FlatState::new(germ);
        if let Some(g) = gammas.iter().find(|g| !g.in_unit_interval()) {
            return Err(Error::BoundaryOutOfRange(g.clone()));
        }
        st.gammas = gammas;
        Ok(st)
    }

    pub fn germ(&self) -> &ToricGerm {
        &self.germ
    }

    pub fn gammas(&self) -> &[Rat] {
        &self.gammas
    }

    pub fn hilbert_basis(&self) -> &[QVec] {
        &self.hb
    }

    pub fn total_gamma(&self) -> Rat {
        self.gammas.iter().sum()
    }

    /// `v(x) = min_{h ∈ HB} <h, x>`, with `v(0) = 0`.
    pub fn order(&self, x: &QVec) -> Rat {
        self.hb.iter().map(|h| h.dot(x)).min().unwrap_or_else(Rat::zero)
    }

    fn pushed(&self, gamma: Rat) -> FlatState {
        let mut st = self.clone();
        st.gammas.push(gamma);
        st
    }

    /// Exact infimum of `A/v` over the interior of `σ`.
    pub fn ray_infimum(&self) -> &RayInfimum {
        &self.ray
    }

    /// The same infimum computed independently, one linear program per
    /// linearity cell of `v`.
    pub fn ray_infimum_by_cells(&self) -> RayInfimum {
        let d = self.germ.dim();
        let w = self.germ.weights();
        let mut best: Option<RayInfimum> = None;
        for h in &self.hb {
            // cell of h: v = <h, x>; normalize <h, x> = 1
            let mut lp = LinearProgram::minimize(w.entries().to_vec());
            lp.constrain(h.entries().to_vec(), Sense::Eq, Rat::one());
            for m in &self.hb {
                if m != h {
                    lp.constrain((m - h).into_entries(), Sense::Ge, Rat::zero());
                }
            }
            let LpOutcome::Optimal { x, value, .. } = lp.solve() else {
                continue;
            };
            if best.as_ref().is_none_or(|b| value < b.value) {
                let ray = primitive_on_ray(&self.germ, &QVec::new(x));
                best = Some(RayInfimum { value, ray });
            }
        }
        let best = best.expect("the cells of v cover the interior of σ");
        debug_assert_eq!(best.ray.dim(), d);
        best
    }

    pub fn is_log_canonical(&self) -> bool {
        self.gammas.iter().all(Rat::in_unit_interval) && self.total_gamma() <= self.ray.value
    }

    fn check_combo(&self, x: &QVec, members: &[usize]) -> Result<()> {
        let d = self.germ.dim();
        if x.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.dim(),
            });
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != members.len() {
            return Err(Error::InvalidCombo("repeated member".into()));
        }
        if let Some(&j) = members.iter().find(|&&j| j >= self.gammas.len()) {
            return Err(Error::InvalidCombo(format!("no member {}", j + 1)));
        }
        if x.is_zero() {
            if members.is_empty() {
                return Err(Error::InvalidCombo("trivial valuation".into()));
            }
        } else {
            if !x.is_nonnegative() {
                return Err(Error::OutsideCone(x.clone()));
            }
            let k = self.germ.lattice().primitive_scale(x)?;
            if k != 1 {
                return Err(Error::NotPrimitive {
                    vector: x.clone(),
                    scale: k,
                });
            }
        }
        if x.support().len() + members.len() > d {
            return Err(Error::InvalidCombo("empty stratum".into()));
        }
        Ok(())
    }

    /// Log discrepancy of the valuation `(x, J)` in the model.
    pub fn state_value(&self, x: &QVec, members: &[usize]) -> Result<Rat> {
        self.check_combo(x, members)?;
        Ok(self.value_unchecked(x, members))
    }

    fn value_unchecked(&self, x: &QVec, members: &[usize]) -> Rat {
        let mut v = self.germ.weight_of(x) - self.total_gamma() * self.order(x);
        for &j in members {
            v += Rat::one() - &self.gammas[j];
        }
        v
    }

    /// Largest coefficient of one more general member keeping the pair log canonical.
    pub fn threshold_step(&self) -> Result<Rat> {
        if !self.is_log_canonical() {
            return Err(Error::NotLogCanonical);
        }
        if let Ok(c) = self.minimal_center() {
            if c.descriptor.dimension == 0 {
                return Err(Error::AlreadyFlat);
            }
        }
        let d = self.germ.dim();
        let k = self.gammas.len();
        let mut best = Rat::one();

        // unit-box points (primitive only) and x = 0, with every admissible member set
        let total = self.total_gamma();
        for p in self.points.iter() {
            let free = d - p.x.support().len();
            let base_x = &p.a - &total * &p.v;
            for members in subsets_up_to(k, free) {
                for e in 0..=1usize {
                    if members.len() + e > free || (p.x.is_zero() && members.is_empty() && e == 0) {
                        continue;
                    }
                    let mut base = base_x.clone();
                    for &j in &members {
                        base += Rat::one() - &self.gammas[j];
                    }
                    let e = Rat::from_int(e as i64);
                    let denom = &p.v + &e;
                    if denom.is_positive() {
                        best = best.min((base + e) / denom);
                    }
                }
            }
        }

        let ray = &self.ray.value - self.total_gamma();
        best = best.min(ray);
        assert!(
            best.is_positive(),
            "a non-flat log canonical state has a positive threshold"
        );
        Ok(best)
    }

    /// The zero combination with the smallest center; ties go to fewer members,
    /// then the lexicographically smaller face and member set.
    pub fn minimal_center(&self) -> Result<Center> {
        let d = self.germ.dim();
        let w = self.germ.weights();
        let ones: Vec<usize> = (0..self.gammas.len())
            .filter(|&j| self.gammas[j] == Rat::one())
            .collect();

        // valuations x with A(x) - Γ v(x) = 0, by support
        let mut x_options: Vec<(Vec<usize>, QVec)> = vec![(Vec::new(), QVec::zeros(d))];
        for face in Face::all(d) {
            if face.is_full(d) {
                continue;
            }
            if face.support().iter().all(|&i| w[i].is_zero()) {
                let rep = mld_face(&self.germ, &face);
                let x = primitive_on_ray(&self.germ, &rep.witnesses[0]);
                x_options.push((face.support().to_vec(), x));
            }
        }
        let ray = &self.ray;
        if ray.value == self.total_gamma() {
            x_options.push(((0..d).collect(), ray.ray.clone()));
        }

        let mut best: Option<CenterCandidate> = None;
        for (support, x) in x_options {
            let room = d - support.len();
            let members: Vec<usize> = ones.iter().copied().take(room).collect();
            if support.is_empty() && members.is_empty() {
                continue;
            }
            let dim = room - members.len();
            let key = (dim, members.len(), support.clone(), members.clone());
            let better = match &best {
                None => true,
                Some((bd, bl, bs, bm, _)) => key < (*bd, *bl, bs.clone(), bm.clone()),
            };
            if better {
                best = Some((dim, members.len(), support, members, x));
            }
        }
        let (dimension, _, support, members, x) = best.ok_or(Error::NoZeroCenter)?;
        debug_assert!(self.value_unchecked(&x, &members).is_zero());
        let face = if support.is_empty() {
            None
        } else {
            Some(Face::new(d, support).expect("nonempty support"))
        };
        let one_based: Vec<usize> = members.iter().map(|j| j + 1).collect();
        let kind = match (dimension, face, one_based.as_slice()) {
            (0, _, _) => CenterKind::PointP,
            (_, Some(face), []) => CenterKind::InvariantCycle { face },
            (_, None, [j]) => CenterKind::GeneralDivisor { divisor: *j },
            (_, face, _) => CenterKind::Stratum {
                face,
                divisors: one_based.clone(),
            },
        };
        Ok(Center {
            descriptor: CenterDescriptor { kind, dimension },
            witness: Combo { x, members },
        })
    }
}

/// Rows scaled by their common denominator.
fn integer_rows(rows: &[QVec]) -> (Vec<Vec<i128>>, i128) {
    let den = rows
        .iter()
        .flat_map(|r| r.entries())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = rows
        .iter()
        .map(|r| {
            r.entries()
                .iter()
                .map(|c| (c.numer() * (&den / c.denom())).to_i128().expect("small box point"))
                .collect()
        })
        .collect();
    (ints, den.to_i128().expect("small denominator"))
}

/// (center dimension, |J|, support, members, x) for minimal-center selection.
type CenterCandidate = (usize, usize, Vec<usize>, Vec<usize>, QVec);

/// Every subset of `0..k` with at most `max` elements.
fn subsets_up_to(k: usize, max: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << k))
        .map(|mask| (0..k).filter(|j| mask & (1 << j) != 0).collect::<Vec<_>>())
        .filter(|s| s.len() <= max)
        .collect()
}

/// The primitive lattice point on the ray through a nonzero rational `x`.
pub fn primitive_on_ray(g: &ToricGerm, x: &QVec) -> QVec {
    use num_integer::Integer;
    let coords = g.lattice().coordinates(x);
    let denom = coords
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = coords.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
    let gcd = ints.iter().fold(num_bigint::BigInt::from(0), |acc, c| acc.gcd(c));
    x.scale(&Rat::from_big(denom, gcd))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub gamma: Rat,
    pub center: CenterDescriptor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatBuild {
    #[serde(serialize_with = "crate::explorer::serialize_germ")]
    pub germ: ToricGerm,
    pub gammas: Vec<Rat>,
    pub trace: Vec<TraceStep>,
    /// Zero-valued combination centered at the fixed point of the final state.
    pub witness: Combo,
    pub final_value: Rat,
}

/// Adds general members at their thresholds until the center is the fixed point.
pub fn build_flat_structure(g: &ToricGerm, max_steps: usize) -> Result<(FlatState, FlatBuild)> {
    let mut st = FlatState::new(g);
    let mut trace = Vec::new();
    let center = loop {
        match st.minimal_center() {
            Ok(c) if c.descriptor.dimension == 0 => break c,
            Ok(_) | Err(Error::NoZeroCenter) => {}
            Err(e) => return Err(e),
        }
        if trace.len() >= max_steps {
            return Err(Error::StepBoundExceeded(max_steps));
        }
        let gamma = st.threshold_step()?;
        st = st.pushed(gamma.clone());
        let c = st.minimal_center()?;
        trace.push(TraceStep {
            gamma,
            center: c.descriptor,
        });
    };
    let final_value = st.state_value(&center.witness.x, &center.witness.members)?;
    assert!(final_value.is_zero(), "flat witness must have log discrepancy 0");
    let build = FlatBuild {
        germ: g.clone(),
        gammas: st.gammas.clone(),
        trace,
        witness: center.witness,
        final_value,
    };
    Ok((st, build))
}
