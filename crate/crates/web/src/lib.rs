//! Browser bindings. Every entry point takes and returns JSON strings:
//! `{"ok": …}` on success, `{"error": "…"}` otherwise, so the page never
//! has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use toric_mld::explorer::parse_germ;
use toric_mld::flat::build_flat_structure;
use toric_mld::germ::{mld_bruteforce_oracle, mld_face, mld_global, mld_point, Face};
use toric_mld::newton::{lct_general_member, lct_newton, newton_poly_from_exponents};
use toric_mld::rat::parse_rat_list;
use toric_mld::{Error, QVec};

fn wrap(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => json!({ "ok": v }).to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn report<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// `face` is "" for the fixed point, "global", or 1-based coordinates like "1,3".
/// A small brute-force comparison (radius 2) is attached.
#[wasm_bindgen]
pub fn explore_mld(germ: &str, face: &str) -> String {
    wrap((|| {
        let g = parse_germ(germ)?;
        let face = face.trim();
        let rep = match face {
            "" => mld_point(&g),
            "global" => mld_global(&g),
            f => {
                let idx = f
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Document(format!("bad index '{t}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                mld_face(&g, &Face::from_one_based(g.dim(), &idx)?)
            }
        };
        let oracle = mld_bruteforce_oracle(&g, &rep.face, 2);
        let mut out = report(&rep);
        out["oracle"] = json!({ "radius": 2, "value": oracle });
        Ok(out)
    })())
}

/// `exponents` like "2,0;0,3"; empty means a general member of the maximal ideal.
#[wasm_bindgen]
pub fn newton_lct(germ: &str, exponents: &str) -> String {
    wrap((|| {
        let g = parse_germ(germ)?;
        if exponents.trim().is_empty() {
            return Ok(report(&lct_general_member(&g)));
        }
        let exps = exponents
            .split(';')
            .map(|e| parse_rat_list(e).map(QVec::new))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(report(&lct_newton(&newton_poly_from_exponents(&g, &exps)?)))
    })())
}

#[wasm_bindgen]
pub fn flat_trace(germ: &str) -> String {
    wrap((|| {
        let g = parse_germ(germ)?;
        let (_, build) = build_flat_structure(&g, g.dim())?;
        Ok(report(&build))
    })())
}
