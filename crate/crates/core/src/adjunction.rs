//! Adjunction to an invariant boundary divisor, and executable checks for
//! precise inversion of adjunction, lower semicontinuity and the bounds
//! `mld ≤ d` / smoothness above `d - 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{germ_normalize, mld_face, mld_point, Face, ToricGerm};
use crate::rat::{QVec, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionResult {
    /// 1-based index of the divisor adjoined to.
    pub divisor: usize,
    #[serde(serialize_with = "crate::explorer::serialize_germ")]
    pub germ: ToricGerm,
    /// `n_j` for the remaining coordinates, in their original order.
    pub scales: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckDetail {
    pub id: String,
    pub lhs: Rat,
    pub rhs: Rat,
    pub relation: Relation,
}

impl CheckDetail {
    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Eq => self.lhs == self.rhs,
            Relation::Le => self.lhs <= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub details: Vec<CheckDetail>,
}

impl CheckReport {
    fn from_details(details: Vec<CheckDetail>) -> CheckReport {
        CheckReport {
            passed: details.iter().all(CheckDetail::holds),
            details,
        }
    }
}

fn face_name(f: &Face) -> String {
    let parts: Vec<String> = f.one_based().iter().map(usize::to_string).collect();
    format!("face{{{}}}", parts.join(","))
}

/// Restricts the germ to `H_i` (0-based `i`), which must carry coefficient 1.
///
/// `S = H_i` is the toric germ of the projected lattice `N_i`; rescaling its
/// coordinates by the primitive scales `n_j` of `e_j` brings it to normal form,
/// and the different gives `b'_j = 1 - (1 - b_j)/n_j`.
pub fn adjoin_invariant_divisor(g: &ToricGerm, i: usize) -> Result<AdjunctionResult> {
    let d = g.dim();
    if i >= d {
        return Err(Error::IndexOutOfRange { index: i, dim: d });
    }
    if g.boundary()[i] != Rat::one() {
        return Err(Error::AdjunctionCoefficient {
            index: i + 1,
            found: g.boundary()[i].clone(),
        });
    }
    let projected = g.lattice().project_drop_coord(i)?;
    let rest: Vec<usize> = (0..d).filter(|&j| j != i).collect();
    let scales = (0..d - 1)
        .map(|j| projected.primitive_scale(&QVec::unit(d - 1, j)))
        .collect::<Result<Vec<u64>>>()?;
    let boundary: Vec<Rat> = rest
        .iter()
        .zip(&scales)
        .map(|(&j, &n)| Rat::one() - &g.weights()[j] / Rat::from_int(n as i64))
        .collect();
    Ok(AdjunctionResult {
        divisor: i + 1,
        germ: germ_normalize(&projected, &boundary)?,
        scales,
    })
}

/// `a(P; X, B) = a(P; S, B_S)` for `S = H_i`. On a curve `S` is the point
/// itself, whose log discrepancy is 0.
pub fn check_precise_inversion(g: &ToricGerm, i: usize) -> Result<CheckReport> {
    let upstairs = mld_point(g).value;
    let downstairs = if g.dim() == 1 {
        if i != 0 || g.boundary()[0] != Rat::one() {
            adjoin_invariant_divisor(g, i)?;
        }
        Rat::zero()
    } else {
        mld_point(&adjoin_invariant_divisor(g, i)?.germ).value
    };
    Ok(CheckReport::from_details(vec![CheckDetail {
        id: format!("pia H{}", i + 1),
        lhs: upstairs,
        rhs: downstairs,
        relation: Relation::Eq,
    }]))
}

/// `a(P) ≤ a(η_{C_S}) + (d - |S|)` for every proper face `S`.
pub fn check_lower_semicontinuity(g: &ToricGerm) -> CheckReport {
    let d = g.dim();
    let at_point = mld_point(g).value;
    let details = Face::all(d)
        .into_iter()
        .filter(|f| !f.is_full(d))
        .map(|f| {
            let rhs = mld_face(g, &f).value + Rat::from_int((d - f.len()) as i64);
            CheckDetail {
                id: format!("lsc {}", face_name(&f)),
                lhs: at_point.clone(),
                rhs,
                relation: Relation::Le,
            }
        })
        .collect();
    CheckReport::from_details(details)
}

/// Whether `a(P) > d - 1`, the regime in which the germ must be smooth.
pub fn bounds_smooth_branch(g: &ToricGerm) -> bool {
    mld_point(g).value > Rat::from_int(g.dim() as i64 - 1)
}

/// `a(P) ≤ d`, and `a(P) > d - 1` forces `N = Z^d` with `a(P) = d - Σ b_i`.
pub fn check_shokurov_bounds(g: &ToricGerm) -> CheckReport {
    let d = Rat::from_int(g.dim() as i64);
    let at_point = mld_point(g).value;
    let mut details = vec![CheckDetail {
        id: "mld <= dim".into(),
        lhs: at_point.clone(),
        rhs: d.clone(),
        relation: Relation::Le,
    }];
    if bounds_smooth_branch(g) {
        details.push(CheckDetail {
            id: "smooth: index".into(),
            lhs: Rat::from_int(g.index() as i64),
            rhs: Rat::one(),
            relation: Relation::Eq,
        });
        let sum_b: Rat = g.boundary().iter().sum();
        details.push(CheckDetail {
            id: "smooth: mld = d - sum b".into(),
            lhs: at_point,
            rhs: d - sum_b,
            relation: Relation::Eq,
        });
    }
    CheckReport::from_details(details)
}
