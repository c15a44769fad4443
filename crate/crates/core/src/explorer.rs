//! Germ documents, corpus surveys, ACC reports and corpus verification.
//!
//! Germ JSON:
//!
//! ```json
//! {"dim":2,"lattice":{"generators":[["1/3","2/3"]]},"boundary":["0","0"]}
//! ```
//!
//! The lattice is `Z^d` plus the listed generators. Serialization lists the
//! nonzero canonical basis rows mod 1, so equal germs serialize identically.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::adjunction::{check_lower_semicontinuity, check_precise_inversion, check_shokurov_bounds};
use crate::error::{Error, Result};
use crate::germ::{
    cartier_index, germ_normalize, is_terminal, mld_bruteforce_oracle, mld_face, mld_global, mld_point,
    verify_minkowski, Face, ToricGerm,
};
use crate::lattice::{enumerate_superlattices, Lattice};
use crate::newton::{
    dual_hilbert_basis, fermat_exponents, first_intersection_mu, general_member_poly, lct_fermat, lct_from_solution,
    lct_general_member, lct_monomial, lct_newton, lct_upper_bound_from_valuation, newton_poly_from_exponents,
    valuation_from_solution,
};
use crate::rat::{ExtRat, QVec, Rat};

pub const DEFAULT_ROW_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermDocument {
    pub dim: usize,
    pub lattice: LatticeDoc,
    pub boundary: Vec<String>,
}

impl GermDocument {
    pub fn from_germ(g: &ToricGerm) -> GermDocument {
        GermDocument {
            dim: g.dim(),
            lattice: LatticeDoc {
                generators: g
                    .lattice()
                    .fractional_generators()
                    .iter()
                    .map(|v| v.iter().map(Rat::to_string).collect())
                    .collect(),
            },
            boundary: g.boundary().iter().map(Rat::to_string).collect(),
        }
    }

    pub fn to_germ(&self) -> Result<ToricGerm> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Document("dim must be positive".into()));
        }
        let parse = |s: &String| s.parse::<Rat>();
        let gens = self
            .lattice
            .generators
            .iter()
            .map(|v| {
                if v.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: v.len(),
                    });
                }
                v.iter().map(parse).collect::<Result<QVec>>()
            })
            .collect::<Result<Vec<QVec>>>()?;
        let boundary = self.boundary.iter().map(parse).collect::<Result<Vec<Rat>>>()?;
        let lattice = Lattice::from_generators(d, &gens)?;
        germ_normalize(&lattice, &boundary)
    }
}

pub fn parse_germ(text: &str) -> Result<ToricGerm> {
    let doc: GermDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc.to_germ()
}

/// Canonical compact JSON text of a germ.
pub fn germ_to_json(g: &ToricGerm) -> String {
    serde_json::to_string(&GermDocument::from_germ(g)).expect("documents serialize")
}

/// `serialize_with` adapter writing a germ as its document.
pub fn serialize_germ<S: Serializer>(g: &ToricGerm, s: S) -> std::result::Result<S::Ok, S::Error> {
    GermDocument::from_germ(g).serialize(s)
}

/// First 16 hex digits of the SHA-256 of the canonical document.
pub fn germ_id(g: &ToricGerm) -> String {
    let digest = Sha256::digest(germ_to_json(g).as_bytes());
    let mut out = String::with_capacity(16);
    for b in &digest[..8] {
        write!(out, "{b:02x}").unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub id: String,
    pub dim: usize,
    pub index: u64,
    #[serde(skip)]
    pub basis: Vec<QVec>,
    pub boundary: Vec<Rat>,
    pub mld: Rat,
    pub global_mld: Rat,
    pub global_face: Face,
    pub witness: QVec,
    pub cartier_index: u64,
    pub lct_general: Rat,
    pub terminal: bool,
    pub lsc: bool,
    pub bounds: bool,
    /// Present when some boundary coefficient is 1.
    pub pia: Option<bool>,
}

impl SurveyRow {
    pub fn compute(g: &ToricGerm) -> Result<SurveyRow> {
        let point = mld_point(g);
        let global = mld_global(g);
        let pia = if g.boundary().iter().any(|b| *b == Rat::one()) {
            let mut ok = true;
            for i in (0..g.dim()).filter(|&i| g.boundary()[i] == Rat::one()) {
                ok &= check_precise_inversion(g, i)?.passed;
            }
            Some(ok)
        } else {
            None
        };
        Ok(SurveyRow {
            id: germ_id(g),
            dim: g.dim(),
            index: g.index(),
            basis: g.lattice().basis().to_vec(),
            boundary: g.boundary().to_vec(),
            witness: point.witnesses[0].clone(),
            mld: point.value,
            global_mld: global.value,
            global_face: global.face,
            cartier_index: cartier_index(g),
            lct_general: lct_general_member(g).lct,
            terminal: is_terminal(g),
            lsc: check_lower_semicontinuity(g).passed,
            bounds: check_shokurov_bounds(g).passed,
            pia,
        })
    }
}

pub const CSV_HEADER: [&str; 14] = [
    "id",
    "dim",
    "index",
    "boundary",
    "mld",
    "global_mld",
    "global_face",
    "witness",
    "cartier_index",
    "lct_general",
    "terminal",
    "lsc",
    "bounds",
    "pia",
];

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

pub fn rows_to_csv(rows: &[SurveyRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Document(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.id.clone(),
            r.dim.to_string(),
            r.index.to_string(),
            join(&r.boundary),
            r.mld.to_string(),
            r.global_mld.to_string(),
            join(&r.global_face.one_based()),
            join(r.witness.entries()),
            r.cartier_index.to_string(),
            r.lct_general.to_string(),
            r.terminal.to_string(),
            r.lsc.to_string(),
            r.bounds.to_string(),
            r.pia.map_or_else(|| "na".to_string(), |p| p.to_string()),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Document(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of ascii fields"))
}

pub fn rows_to_json(rows: &[SurveyRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    pub mod_permutations: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub row_cap: usize,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            mod_permutations: false,
            jobs: None,
            row_cap: DEFAULT_ROW_CAP,
        }
    }
}

/// All vectors in `set^d`, lexicographic in the (sorted) set.
pub fn boundary_assignments(d: usize, set: &[Rat]) -> Vec<Vec<Rat>> {
    let mut set = set.to_vec();
    set.sort();
    set.dedup();
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |b| {
                    let mut v = prefix.clone();
                    v.push(b.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// The corpus of a survey, in canonical order.
pub fn survey_germs(d: usize, max_index: u64, boundary_set: &[Rat], opts: &SurveyOptions) -> Result<Vec<ToricGerm>> {
    if let Some(b) = boundary_set.iter().find(|b| !b.in_unit_interval()) {
        return Err(Error::BoundaryOutOfRange(b.clone()));
    }
    let lattices = enumerate_superlattices(d, max_index, opts.mod_permutations);
    let assignments = boundary_assignments(d, boundary_set);
    let rows = lattices.len().saturating_mul(assignments.len());
    if rows > opts.row_cap {
        return Err(Error::RowCapExceeded {
            cap: opts.row_cap,
            rows,
        });
    }
    let mut germs = Vec::with_capacity(rows);
    for l in &lattices {
        // cosets depend only on the lattice
        let base = germ_normalize(l, &vec![Rat::zero(); d])?;
        for b in &assignments {
            germs.push(base.with_boundary(b)?);
        }
    }
    Ok(germs)
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Document(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// One row per germ of `enumerate_superlattices(d, max_index) × boundary_set^d`,
/// ordered by lattice (index, canonical basis) and then boundary.
pub fn run_survey(d: usize, max_index: u64, boundary_set: &[Rat], opts: &SurveyOptions) -> Result<Vec<SurveyRow>> {
    let germs = survey_germs(d, max_index, boundary_set, opts)?;
    in_pool(opts.jobs, || {
        germs.par_iter().map(SurveyRow::compute).collect::<Result<Vec<_>>>()
    })?
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueCount {
    pub value: Rat,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub lower: Rat,
    pub upper: Rat,
    pub width: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Approach {
    FromAbove,
    FromBelow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccCandidate {
    pub value: Rat,
    pub approach: Approach,
    /// Length of the approaching chain.
    pub links: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccReport {
    pub values: Vec<ValueCount>,
    pub maximum: Rat,
    pub gaps: Vec<Gap>,
    /// Values approached from one side by a chain of ever closer values as
    /// the index grows; exploratory only, no convergence claim.
    pub accumulation_candidates: Vec<AccCandidate>,
    /// Every row has `mld ≤ dim`, with equality only for `Z^d` and `b = 0`.
    pub max_bound_holds: bool,
    /// For rows with `dim = 3` and `b = 0`: values above 1 are `1 + 1/q` or 3.
    /// `None` when there are no such rows.
    pub terminal_threefolds_hold: Option<bool>,
    /// The same statement restricted to terminal rows.
    pub terminal_rows_hold: Option<bool>,
    /// Rows with `dim = 3`, `b = 0` and a value above 1 outside
    /// `{1 + 1/q} ∪ {3}`, as `(id, mld)`.
    pub exceptions: Vec<(String, Rat)>,
}

/// Candidates reported, longest chains first.
pub const ACC_CANDIDATE_LIMIT: usize = 10;

/// Minimum number of successively closer values for an approach candidate.
pub const APPROACH_RECORDS: usize = 4;

/// Walks the rows in corpus order (index ascending) and records, for each
/// value `v` already seen, new values that come strictly closer to `v` from
/// one side. A value is a candidate when such a chain has at least
/// `APPROACH_RECORDS` links and is still improving in the upper half of the
/// index range.
fn approach_candidates(rows: &[SurveyRow], values: &[ValueCount]) -> Vec<AccCandidate> {
    let max_index = rows.iter().map(|r| r.index).max().unwrap_or(0);
    let mut out = Vec::new();
    for v in values {
        let first_seen = rows.iter().find(|r| r.mld == v.value).map_or(0, |r| r.index);
        for approach in [Approach::FromAbove, Approach::FromBelow] {
            let mut best: Option<Rat> = None;
            let mut links = 0usize;
            let mut last_index = 0u64;
            for r in rows.iter().filter(|r| r.index >= first_seen) {
                let gap = match approach {
                    Approach::FromAbove => &r.mld - &v.value,
                    Approach::FromBelow => &v.value - &r.mld,
                };
                if gap.is_positive() && best.as_ref().is_none_or(|b| gap < *b) {
                    best = Some(gap);
                    links += 1;
                    last_index = r.index;
                }
            }
            if links >= APPROACH_RECORDS && 2 * last_index >= max_index {
                out.push(AccCandidate {
                    value: v.value.clone(),
                    approach,
                    links,
                });
            }
        }
    }
    out
}

fn is_one_plus_unit_fraction(v: &Rat) -> bool {
    let e = v - Rat::one();
    e.is_positive() && e.numer() == &1.into()
}

pub fn acc_report(rows: &[SurveyRow]) -> AccReport {
    let mut counts: BTreeMap<Rat, usize> = BTreeMap::new();
    for r in rows {
        *counts.entry(r.mld.clone()).or_default() += 1;
    }
    let values: Vec<ValueCount> = counts
        .into_iter()
        .map(|(value, count)| ValueCount { value, count })
        .collect();
    let maximum = values.last().map_or_else(Rat::zero, |v| v.value.clone());
    let gaps = values
        .windows(2)
        .map(|w| Gap {
            lower: w[0].value.clone(),
            upper: w[1].value.clone(),
            width: &w[1].value - &w[0].value,
        })
        .collect();

    let mut accumulation_candidates = approach_candidates(rows, &values);
    accumulation_candidates.sort_by(|a, b| b.links.cmp(&a.links).then_with(|| a.value.cmp(&b.value)));
    accumulation_candidates.truncate(ACC_CANDIDATE_LIMIT);

    let max_bound_holds = rows.iter().all(|r| {
        let d = Rat::from_int(r.dim as i64);
        r.mld < d || (r.mld == d && r.index == 1 && r.boundary.iter().all(Rat::is_zero))
    });
    let threefolds: Vec<&SurveyRow> = rows
        .iter()
        .filter(|r| r.dim == 3 && r.boundary.iter().all(Rat::is_zero))
        .collect();
    let allowed =
        |r: &&SurveyRow| r.mld <= Rat::one() || r.mld == Rat::from_int(3) || is_one_plus_unit_fraction(&r.mld);
    let exceptions: Vec<(String, Rat)> = threefolds
        .iter()
        .filter(|r| !allowed(r))
        .map(|r| (r.id.clone(), r.mld.clone()))
        .collect();
    let terminal_threefolds_hold = (!threefolds.is_empty()).then_some(exceptions.is_empty());
    let terminal_rows: Vec<&&SurveyRow> = threefolds.iter().filter(|r| r.terminal).collect();
    let terminal_rows_hold = (!terminal_rows.is_empty()).then(|| terminal_rows.iter().all(|r| allowed(r)));

    AccReport {
        values,
        maximum,
        gaps,
        accumulation_candidates,
        max_bound_holds,
        terminal_threefolds_hold,
        terminal_rows_hold,
        exceptions,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub dims: Vec<usize>,
    pub max_index: u64,
    pub boundary_set: Vec<String>,
    pub oracle_radius: u32,
    pub mod_permutations: bool,
    pub extra_germs: Vec<GermDocument>,
    pub fail_fast: bool,
    pub jobs: Option<usize>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            dims: vec![1, 2, 3],
            max_index: 12,
            boundary_set: ["0", "1/2", "2/3", "1"].map(String::from).to_vec(),
            oracle_radius: 3,
            mod_permutations: false,
            extra_germs: Vec::new(),
            fail_fast: false,
            jobs: None,
        }
    }
}

impl CorpusConfig {
    pub fn from_json(text: &str) -> Result<CorpusConfig> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    /// The germs the configuration describes, in canonical order.
    pub fn corpus(&self) -> Result<Vec<ToricGerm>> {
        let set = self
            .boundary_set
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Rat>>>()?;
        let opts = SurveyOptions {
            mod_permutations: self.mod_permutations,
            ..SurveyOptions::default()
        };
        let mut dims = self.dims.clone();
        dims.sort_unstable();
        dims.dedup();
        let mut germs = Vec::new();
        for d in dims.into_iter().filter(|&d| d > 0) {
            germs.extend(survey_germs(d, self.max_index, &set, &opts)?);
        }
        for doc in &self.extra_germs {
            germs.push(doc.to_germ()?);
        }
        Ok(germs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermFailure {
    pub germ: GermDocument,
    pub failures: Vec<CheckFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub passed: bool,
    pub germs_checked: usize,
    pub checks_run: usize,
    pub warnings: Vec<String>,
    pub failures: Vec<GermFailure>,
    /// The first failing germ in canonical order.
    pub minimal_failure: Option<GermDocument>,
}

struct Checker {
    failures: Vec<CheckFailure>,
    runs: usize,
}

impl Checker {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        self.runs += 1;
        if !ok {
            self.failures.push(CheckFailure {
                check: name.into(),
                detail: detail(),
            });
        }
    }
}

/// Runs every per-germ check; returns the failures and the number of checks.
const MONOMIAL_CHECKS: usize = 3;

pub fn check_germ(g: &ToricGerm, oracle_radius: u32) -> (Vec<CheckFailure>, usize) {
    let mut c = Checker {
        failures: Vec::new(),
        runs: 0,
    };
    let d = g.dim();

    c.check("lattice canonical", g.lattice().is_canonical(), || {
        format!("stored basis {:?} is not in canonical form", g.lattice().basis())
    });
    c.check("lattice contains Z^d", g.lattice().contains_integers(), || {
        "lattice does not contain Z^d".into()
    });
    let axes_primitive = (0..d).all(|i| g.lattice().is_primitive(&QVec::unit(d, i)));
    c.check("axes primitive", axes_primitive, || "some e_i is not primitive".into());
    if !c.failures.is_empty() {
        // the engines assume a well-formed germ
        return (c.failures, c.runs);
    }

    let r = Rat::from_int(cartier_index(g) as i64);
    for face in Face::all(d) {
        let name = format!("face{:?}", face.one_based());
        let engine = mld_face(g, &face).value;
        let oracle = mld_bruteforce_oracle(g, &face, oracle_radius);
        c.check(format!("oracle {name}"), engine == oracle, || {
            format!("engine {engine} vs brute force {oracle}")
        });
        c.check(
            format!("index divisibility {name}"),
            (&r * &engine).is_integer(),
            || format!("{r} * {engine} is not an integer"),
        );
    }

    let at_p = mld_point(g).value;
    c.check("minkowski", verify_minkowski(g, &at_p, &Rat::new(1, 1000)), || {
        format!("{at_p} is not the first minimum")
    });
    for i in (0..d).filter(|&i| g.boundary()[i] == Rat::one()) {
        match check_precise_inversion(g, i) {
            Ok(rep) => c.check(format!("pia H{}", i + 1), rep.passed, || format!("{:?}", rep.details)),
            Err(e) => c.check(format!("pia H{}", i + 1), false, || e.to_string()),
        }
    }
    let lsc = check_lower_semicontinuity(g);
    c.check("lsc", lsc.passed, || format!("{:?}", lsc.details));
    let bounds = check_shokurov_bounds(g);
    c.check("bounds", bounds.passed, || format!("{:?}", bounds.details));

    // Newton polyhedra: certificates and closed forms
    let gm = general_member_poly(g);
    let sol = first_intersection_mu(&gm);
    c.check("newton certificate", sol.verify(&gm), || format!("{sol:?}"));
    let rep = lct_from_solution(&gm, &sol);
    c.check(
        "newton lct range",
        rep.lct.is_positive() || rep.mu.is_infinite(),
        || format!("lct {}", rep.lct),
    );
    if let (ExtRat::Finite(mu), Some(x)) = (&rep.mu, valuation_from_solution(&gm, &sol)) {
        let bound = lct_upper_bound_from_valuation(&gm, &x);
        let want = ExtRat::Finite(mu.recip());
        c.check("newton tightness", bound.as_ref() == Ok(&want), || {
            format!("valuation {x} gives {bound:?}, expected {want:?}")
        });
    }
    // a handful of monomials: the axis-most basis elements and their sum
    let hb = dual_hilbert_basis(g);
    let mut monomials: Vec<QVec> = hb.iter().take(MONOMIAL_CHECKS).cloned().collect();
    if hb.len() > 1 {
        monomials.push(hb.iter().skip(1).fold(hb[0].clone(), |acc, m| &acc + m));
    }
    for m in monomials {
        let closed = lct_monomial(g, &m);
        let lp = newton_poly_from_exponents(g, std::slice::from_ref(&m)).map(|p| lct_newton(&p));
        let agree = match (&closed, &lp) {
            (Ok(c), Ok(l)) => l.lct == c.clone().min(Rat::one()),
            _ => false,
        };
        c.check(format!("monomial {m}"), agree, || format!("{closed:?} vs {lp:?}"));
    }
    if g.is_smooth() {
        let n: Vec<u64> = (0..d as u64).map(|i| i + 2).collect();
        let closed = lct_fermat(g, &n);
        let lp = newton_poly_from_exponents(g, &fermat_exponents(&n)).map(|p| lct_newton(&p));
        let agree = match (&closed, &lp) {
            (Ok(c), Ok(l)) => *c == l.lct,
            _ => false,
        };
        c.check("fermat", agree, || format!("{closed:?} vs {lp:?}"));
    }
    (c.failures, c.runs)
}

/// Runs all checks over the configured corpus.
pub fn verify_corpus(cfg: &CorpusConfig) -> Result<CorpusReport> {
    let germs = cfg.corpus()?;
    verify_germs(&germs, cfg.oracle_radius, cfg.fail_fast, cfg.jobs)
}

pub fn verify_germs(
    germs: &[ToricGerm],
    oracle_radius: u32,
    fail_fast: bool,
    jobs: Option<usize>,
) -> Result<CorpusReport> {
    let mut warnings = Vec::new();
    if germs.is_empty() {
        warnings.push("empty corpus: nothing to check".to_string());
    }
    let results: Vec<(Vec<CheckFailure>, usize)> = if fail_fast {
        let mut out = Vec::new();
        for g in germs {
            let r = check_germ(g, oracle_radius);
            let stop = !r.0.is_empty();
            out.push(r);
            if stop {
                break;
            }
        }
        out
    } else {
        in_pool(jobs, || {
            germs.par_iter().map(|g| check_germ(g, oracle_radius)).collect()
        })?
    };
    let checks_run = results.iter().map(|r| r.1).sum();
    let failures: Vec<GermFailure> = germs
        .iter()
        .zip(results)
        .filter(|(_, r)| !r.0.is_empty())
        .map(|(g, r)| GermFailure {
            germ: GermDocument::from_germ(g),
            failures: r.0,
        })
        .collect();
    Ok(CorpusReport {
        passed: failures.is_empty(),
        germs_checked: germs.len(),
        checks_run,
        warnings,
        minimal_failure: failures.first().map(|f| f.germ.clone()),
        failures,
    })
}
