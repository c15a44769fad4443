//! Acceptance suite: one PASS/FAIL line per criterion, exact equality throughout.
//!
//! Runs as a plain binary (`harness = false`) so the report is always printed.
//! Criterion 14 is a known failure: the survey contains non-isolated germs such
//! as C × 1/3(1,1) with mld 5/3, which is neither 1 + 1/q nor 3. The harness
//! exits non-zero on any other failure, or if 14 starts passing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_mld::adjunction::{
    bounds_smooth_branch, check_lower_semicontinuity, check_precise_inversion, check_shokurov_bounds,
};
use toric_mld::explorer::{acc_report, run_survey, CorpusConfig, SurveyOptions};
use toric_mld::flat::build_flat_structure;
use toric_mld::germ::{
    cartier_index, germ_cyclic_quotient, germ_from_px, germ_normalize, mld_all_faces, mld_bruteforce_oracle, mld_face,
    mld_point, px_mld_formula,
};
use toric_mld::newton::{
    dual_hilbert_basis, fermat_exponents, lct_fermat, lct_monomial, lct_newton, newton_poly_from_exponents,
};
use toric_mld::{Face, Lattice, QVec, Rat, ToricGerm};

const KNOWN_RED: &[u32] = &[14];

struct Outcome {
    id: u32,
    passed: bool,
    detail: String,
}

fn outcome(id: u32, failures: &[String], summary: String) -> Outcome {
    let detail = match failures.first() {
        None => summary,
        Some(f) => format!("{} failure(s); first: {f}", failures.len()),
    };
    Outcome {
        id,
        passed: failures.is_empty(),
        detail,
    }
}

fn int(n: i64) -> Rat {
    Rat::from_int(n)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn random_fraction(rng: &mut ChaCha8Rng, max_den: i64) -> Rat {
    let den = rng.gen_range(1..=max_den);
    Rat::new(rng.gen_range(0..=den), den)
}

fn c1() -> Outcome {
    let mut fails = Vec::new();
    for d in 1..=6 {
        let v = mld_face(&ToricGerm::smooth_zero(d), &Face::full(d)).value;
        if v != int(d as i64) {
            fails.push(format!("d={d}: {v}"));
        }
    }
    outcome(1, &fails, "a(0; C^d) = d for d = 1..6".into())
}

fn c2() -> Outcome {
    let mut fails = Vec::new();
    for q in 2..=20u64 {
        let v = mld_point(&germ_cyclic_quotient(q, &[1, q as i64 - 1]).unwrap()).value;
        if v != Rat::one() {
            fails.push(format!("q={q}: {v}"));
        }
    }
    outcome(2, &fails, "A_{q-1}, q = 2..20: mld 1".into())
}

fn c3() -> Outcome {
    let mut fails = Vec::new();
    for k in 2..=20u64 {
        let v = mld_point(&germ_cyclic_quotient(k, &[1, 1]).unwrap()).value;
        if v != Rat::new(2, k as i64) {
            fails.push(format!("k={k}: {v}"));
        }
    }
    outcome(3, &fails, "1/k(1,1), k = 2..20: mld 2/k".into())
}

fn c4() -> Outcome {
    let mut fails = Vec::new();
    let mut n = 0;
    for q in 2..=20i64 {
        for p in (1..q).filter(|&p| gcd(p, q) == 1) {
            n += 1;
            let v = mld_point(&germ_cyclic_quotient(q as u64, &[1, p, q - p]).unwrap()).value;
            if v != Rat::one() + Rat::new(1, q) {
                fails.push(format!("1/{q}(1,{p},{}): {v}", q - p));
            }
        }
    }
    outcome(4, &fails, format!("1/q(1,p,q-p): {n} germs, mld 1 + 1/q"))
}

fn c5() -> Outcome {
    let mut fails = Vec::new();
    for q in 1..=10i64 {
        let g = germ_cyclic_quotient(2 * q as u64, &[1, q, 1 + q]).unwrap();
        let at_p = mld_point(&g).value;
        let on_c2 = mld_face(&g, &Face::from_one_based(3, &[1, 3]).unwrap()).value;
        if at_p != Rat::one() + Rat::new(1, q) || on_c2 != Rat::new(2, q) {
            fails.push(format!("q={q}: P {at_p}, face{{1,3}} {on_c2}"));
        }
    }
    outcome(
        5,
        &fails,
        "1/(2q)(1,q,1+q), q = 1..10: 1 + 1/q at P, 2/q on face {1,3}".into(),
    )
}

fn c6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut fails = Vec::new();
    for _ in 0..100 {
        let d = rng.gen_range(1..=5);
        let b: Vec<Rat> = (0..d).map(|_| random_fraction(rng, 12)).collect();
        let s = rng.gen_range(1..=d);
        let g = ToricGerm::smooth(&b).unwrap();
        let face = Face::new(d, (0..s).collect()).unwrap();
        let want = int(s as i64) - b[..s].iter().sum::<Rat>();
        let got = mld_face(&g, &face).value;
        if got != want {
            fails.push(format!("b={b:?}, s={s}: {got} vs {want}"));
        }
    }
    outcome(6, &fails, "100 random boundaries on Z^d: s - sum b_i".into())
}

fn c7(rng: &mut ChaCha8Rng) -> Outcome {
    let mut fails = Vec::new();
    for _ in 0..200 {
        let d = rng.gen_range(1..=4);
        let x = QVec::new(
            (0..d)
                .map(|_| {
                    let den = rng.gen_range(1..=12);
                    Rat::new(rng.gen_range(1..=den), den)
                })
                .collect(),
        );
        let formula = px_mld_formula(&x).unwrap();
        let engine = mld_point(&germ_from_px(&x).unwrap().germ).value;
        if formula != engine {
            fails.push(format!("x={x}: formula {formula}, engine {engine}"));
        }
    }
    outcome(7, &fails, "200 random P_x: formula = engine".into())
}

struct CorpusTally {
    germs: usize,
    oracle: Vec<String>,
    oracle_faces: usize,
    pia: Vec<String>,
    pia_checks: usize,
    lsc_bounds: Vec<String>,
    branch_hits: usize,
    divisibility: Vec<String>,
}

fn corpus_pass(corpus: &[ToricGerm]) -> CorpusTally {
    let mut t = CorpusTally {
        germs: corpus.len(),
        oracle: Vec::new(),
        oracle_faces: 0,
        pia: Vec::new(),
        pia_checks: 0,
        lsc_bounds: Vec::new(),
        branch_hits: 0,
        divisibility: Vec::new(),
    };
    for g in corpus {
        let r = int(cartier_index(g) as i64);
        for rep in mld_all_faces(g) {
            t.oracle_faces += 1;
            let oracle = mld_bruteforce_oracle(g, &rep.face, 3);
            if oracle != rep.value {
                t.oracle
                    .push(format!("{g:?} {:?}: engine {} oracle {oracle}", rep.face, rep.value));
            }
            if !(&r * &rep.value).is_integer() {
                t.divisibility
                    .push(format!("{g:?} {:?}: {r} * {}", rep.face, rep.value));
            }
        }
        for i in (0..g.dim()).filter(|&i| g.boundary()[i] == Rat::one()) {
            t.pia_checks += 1;
            match check_precise_inversion(g, i) {
                Ok(rep) if rep.passed => {}
                other => t.pia.push(format!("{g:?} H{}: {other:?}", i + 1)),
            }
        }
        if !check_lower_semicontinuity(g).passed || !check_shokurov_bounds(g).passed {
            t.lsc_bounds.push(format!("{g:?}"));
        }
        // the smooth branch fires exactly on Z^d germs with a(P) = d - sum b > d - 1
        let branch = bounds_smooth_branch(g);
        let expected = g.is_smooth() && g.boundary().iter().sum::<Rat>() < Rat::one();
        if branch != expected {
            t.lsc_bounds
                .push(format!("{g:?}: smooth branch {branch}, expected {expected}"));
        }
        t.branch_hits += usize::from(branch);
    }
    t
}

fn c9_worked() -> Option<String> {
    let l = Lattice::from_generators(3, &[QVec::from_fracs(&[1, 2, 3], 4)]).unwrap();
    let g = germ_normalize(&l, &[Rat::zero(), Rat::zero(), Rat::one()]).unwrap();
    let rep = check_precise_inversion(&g, 2).unwrap();
    let three_quarters = Rat::new(3, 4);
    let ok = rep.passed
        && rep
            .details
            .iter()
            .any(|d| d.lhs == three_quarters && d.rhs == three_quarters);
    (!ok).then(|| format!("worked example: {rep:?}"))
}

fn c12() -> Outcome {
    let g = ToricGerm::smooth_zero(2);
    let p = newton_poly_from_exponents(&g, &[QVec::from_ints(&[2, 0]), QVec::from_ints(&[0, 3])]).unwrap();
    let lp = lct_newton(&p).lct;
    let closed = lct_fermat(&g, &[2, 3]).unwrap();
    let want = Rat::new(5, 6);
    let fails: Vec<String> = if lp == want && closed == want {
        Vec::new()
    } else {
        vec![format!("newton {lp}, fermat {closed}")]
    };
    outcome(
        12,
        &fails,
        "cusp y^2 + x^3: lct 5/6 by Newton LP and Fermat closed form".into(),
    )
}

fn c13(rng: &mut ChaCha8Rng, corpus: &[ToricGerm]) -> Outcome {
    let mut fails = Vec::new();
    // monomials on random corpus germs
    for _ in 0..200 {
        let g = &corpus[rng.gen_range(0..corpus.len())];
        let hb = dual_hilbert_basis(g);
        let mut m = QVec::zeros(g.dim());
        while m.is_zero() {
            for h in &hb {
                let k = rng.gen_range(0..=2);
                m = &m + &h.scale(&int(k));
            }
        }
        let closed = lct_monomial(g, &m).unwrap().min(Rat::one());
        let lp = lct_newton(&newton_poly_from_exponents(g, std::slice::from_ref(&m)).unwrap()).lct;
        if closed != lp {
            fails.push(format!("monomial {m} on {g:?}: closed {closed}, LP {lp}"));
        }
    }
    // Fermat polynomials on smooth germs with random boundary
    for _ in 0..200 {
        let d = rng.gen_range(1..=4);
        let b: Vec<Rat> = (0..d).map(|_| random_fraction(rng, 6)).collect();
        let n: Vec<u64> = (0..d).map(|_| rng.gen_range(1..=7)).collect();
        let g = ToricGerm::smooth(&b).unwrap();
        let closed = lct_fermat(&g, &n).unwrap();
        let lp = lct_newton(&newton_poly_from_exponents(&g, &fermat_exponents(&n)).unwrap()).lct;
        if closed != lp {
            fails.push(format!("fermat {n:?}, b={b:?}: closed {closed}, LP {lp}"));
        }
    }
    // Arnold: mu_A = 1/lct, mult = min total degree
    let mut arnold = 0;
    for _ in 0..200 {
        let d = rng.gen_range(1..=4usize);
        let g = ToricGerm::smooth_zero(d);
        let terms = rng.gen_range(1..=4);
        let mut exps = Vec::new();
        while exps.len() < terms {
            let e: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=5)).collect();
            if e.iter().any(|&c| c > 0) {
                exps.push(QVec::from_ints(&e));
            }
        }
        let mult = exps.iter().map(|e| e.iter().sum::<Rat>()).min().unwrap();
        let lct = lct_newton(&newton_poly_from_exponents(&g, &exps).unwrap()).lct;
        let mu_a = lct.recip();
        arnold += 1;
        if !(mu_a <= mult && mult <= int(d as i64) * &mu_a) {
            fails.push(format!("arnold {exps:?}: mu_A {mu_a}, mult {mult}"));
        }
    }
    outcome(
        13,
        &fails,
        format!("200 monomial + 200 Fermat closed forms match the LP; Arnold inequalities on {arnold} polynomials"),
    )
}

fn c14() -> (Outcome, String) {
    let start = Instant::now();
    let rows = run_survey(3, 30, &[Rat::zero()], &SurveyOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let acc = acc_report(&rows);
    let mut fails = Vec::new();
    if acc.terminal_threefolds_hold != Some(true) {
        let (id, v) = acc.exceptions.first().cloned().unwrap_or_default();
        fails.push(format!(
            "{} rows with mld in (1,inf) outside {{1+1/q}} u {{3}}, e.g. {id} with {v} (C x 1/3(1,1) has 5/3)",
            acc.exceptions.len()
        ));
    }
    if elapsed > Duration::from_secs(120) {
        fails.push(format!("survey took {elapsed:.1?}"));
    }
    let note = format!(
        "survey d=3, b=0, index <= 30: {} rows in {elapsed:.1?}; restricted to terminal germs the statement {}",
        rows.len(),
        match acc.terminal_rows_hold {
            Some(true) => "holds",
            Some(false) => "fails",
            None => "is vacuous",
        }
    );
    (outcome(14, &fails, "every value above 1 is 1 + 1/q or 3".into()), note)
}

fn c15(corpus: &[ToricGerm]) -> Outcome {
    let mut fails = Vec::new();
    let plane = build_flat_structure(&ToricGerm::smooth_zero(2), 2).unwrap().1;
    if plane.trace.len() != 2 || plane.gammas != vec![Rat::one(), Rat::one()] {
        fails.push(format!("C^2: {plane:?}"));
    }
    let space = build_flat_structure(&ToricGerm::smooth_zero(3), 3).unwrap().1;
    if space.trace.len() != 3 {
        fails.push(format!("C^3: {} steps", space.trace.len()));
    }
    let half = germ_cyclic_quotient(2, &[1, 1]).unwrap();
    let (state, build) = build_flat_structure(&half, 2).unwrap();
    let witness_value = state.state_value(&build.witness.x, &build.witness.members);
    if build.trace.len() != 1
        || build.gammas != vec![Rat::one()]
        || build.final_value != Rat::zero()
        || witness_value.ok() != Some(Rat::zero())
    {
        fails.push(format!("1/2(1,1): {build:?}"));
    }
    for g in corpus {
        match build_flat_structure(g, g.dim()) {
            Ok((st, b)) if b.trace.len() <= g.dim() && b.final_value.is_zero() => {
                if st.state_value(&b.witness.x, &b.witness.members).ok() != Some(Rat::zero()) {
                    fails.push(format!("{g:?}: witness does not attain 0"));
                }
            }
            other => fails.push(format!("{g:?}: {other:?}")),
        }
    }
    outcome(
        15,
        &fails,
        format!(
            "C^2, C^3, 1/2(1,1) traces; {} corpus germs flat within d steps",
            corpus.len()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let corpus = CorpusConfig::default().corpus().unwrap();

    let mut results = vec![c1(), c2(), c3(), c4(), c5(), c6(&mut rng), c7(&mut rng)];

    let t = corpus_pass(&corpus);
    results.push(outcome(
        8,
        &t.oracle,
        format!(
            "{} germs, {} faces: engine = brute force (R = 3)",
            t.germs, t.oracle_faces
        ),
    ));
    let mut pia = t.pia.clone();
    pia.extend(c9_worked());
    results.push(outcome(
        9,
        &pia,
        format!("{} divisor checks pass; worked value 3/4 = 3/4", t.pia_checks),
    ));
    results.push(outcome(
        10,
        &t.lsc_bounds,
        format!(
            "LSC and bounds on {} germs; smooth branch fired on {} Z^d germs only",
            t.germs, t.branch_hits
        ),
    ));
    results.push(outcome(
        11,
        &t.divisibility,
        format!("r * mld integral on all {} faces", t.oracle_faces),
    ));
    results.push(c12());
    results.push(c13(&mut rng, &corpus));
    let (r14, note14) = c14();
    results.push(r14);
    results.push(c15(&corpus));
    results.sort_by_key(|r| r.id);

    let mut unexpected = Vec::new();
    for r in &results {
        let known = KNOWN_RED.contains(&r.id);
        let tag = if r.passed { "PASS" } else { "FAIL" };
        let suffix = if known && !r.passed {
            " [known: statement needs terminal germs]"
        } else {
            ""
        };
        println!("criterion {:>2}: {tag} {}{suffix}", r.id, r.detail);
        if r.passed == known {
            unexpected.push(r.id);
        }
    }
    println!("info: {note14}");
    let passed = results.iter().filter(|r| r.passed).count();
    println!(
        "acceptance: {passed}/{} passed in {:.1?}",
        results.len(),
        start.elapsed()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
