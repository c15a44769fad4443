use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use toric_mld::adjunction::{adjoin_invariant_divisor, check_precise_inversion};
use toric_mld::explorer::{
    acc_report, parse_germ, rows_to_csv, rows_to_json, run_survey, verify_corpus, CorpusConfig, SurveyOptions,
};
use toric_mld::flat::build_flat_structure;
use toric_mld::germ::{mld_bruteforce_oracle, mld_face, mld_global, mld_point, Face};
use toric_mld::newton::{
    fermat_exponents, lct_fermat, lct_general_member, lct_monomial, lct_newton, newton_poly_from_exponents,
};
use toric_mld::rat::parse_rat_list;
use toric_mld::{Error, QVec, ToricGerm};

const EXIT_INPUT: u8 = 1;
const EXIT_CHECK: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Exact minimal log discrepancies and log canonical thresholds of toric germs.
#[derive(Parser)]
#[command(name = "toricmld", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimal log discrepancy at the fixed point, a face, or globally.
    Mld {
        #[arg(short, long)]
        input: PathBuf,
        /// 1-based coordinates of the face, e.g. "1,3".
        #[arg(long, conflicts_with = "global")]
        face: Option<String>,
        #[arg(long)]
        global: bool,
        /// Also run the brute-force oracle over (0,R]^S and compare.
        #[arg(long)]
        oracle_radius: Option<u32>,
    },
    /// Log canonical threshold of a polynomial given by its Newton data.
    #[command(group(ArgGroup::new("poly").required(true).args(["exponents", "general_member", "monomial", "fermat"])))]
    Lct {
        #[arg(short, long)]
        input: PathBuf,
        /// Exponent vectors, e.g. "2,0;0,3".
        #[arg(long)]
        exponents: Option<String>,
        #[arg(long)]
        general_member: bool,
        #[arg(long)]
        monomial: Option<String>,
        #[arg(long)]
        fermat: Option<String>,
    },
    /// Adjunction to the invariant divisor H_i.
    Adjoin {
        #[arg(short, long)]
        input: PathBuf,
        /// 1-based divisor index.
        #[arg(long)]
        divisor: usize,
        /// Also check precise inversion of adjunction.
        #[arg(long)]
        check: bool,
    },
    /// Build a flat log structure by adding general members.
    Flat {
        #[arg(short, long)]
        input: PathBuf,
        /// Defaults to the dimension.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Enumerate a corpus of germs and write one row per germ.
    Survey {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_index: u64,
        #[arg(long)]
        boundary_set: String,
        #[arg(long)]
        out: PathBuf,
        /// Write JSON rows instead of CSV.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        mod_permutations: bool,
    },
    /// Run every check over a corpus.
    Check {
        #[arg(long)]
        corpus_config: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_germ(path: &Path) -> Result<ToricGerm, Failure> {
    Ok(parse_germ(&read(path)?)?)
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Failure::Input(format!("bad index '{t}'"))))
        .collect()
}

fn parse_vector(s: &str) -> Result<QVec, Failure> {
    Ok(QVec::new(parse_rat_list(s)?))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn cmd_mld(input: &Path, face: Option<&str>, global: bool, radius: Option<u32>) -> Outcome {
    let g = load_germ(input)?;
    let report = if global {
        mld_global(&g)
    } else if let Some(f) = face {
        mld_face(&g, &Face::from_one_based(g.dim(), &parse_usize_list(f)?)?)
    } else {
        mld_point(&g)
    };
    let mut out = to_json(&report);
    if let Some(r) = radius {
        let oracle = mld_bruteforce_oracle(&g, &report.face, r);
        let agrees = oracle == report.value;
        out["oracle"] = json!({ "radius": r, "value": oracle, "agrees": agrees });
        if !agrees {
            return Err(Failure::Check(out));
        }
    }
    Ok(out)
}

fn cmd_lct(
    input: &Path,
    exponents: Option<&str>,
    general: bool,
    monomial: Option<&str>,
    fermat: Option<&str>,
) -> Outcome {
    let g = load_germ(input)?;
    if let Some(e) = exponents {
        let exps = e.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()?;
        let p = newton_poly_from_exponents(&g, &exps)?;
        return Ok(to_json(&lct_newton(&p)));
    }
    if general {
        return Ok(to_json(&lct_general_member(&g)));
    }
    if let Some(m) = monomial {
        let n = parse_vector(m)?;
        return Ok(json!({ "monomial": n, "lct": lct_monomial(&g, &n)? }));
    }
    let n: Vec<u64> = fermat
        .expect("clap enforces one polynomial")
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::Input(format!("bad exponent '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    let lct = lct_fermat(&g, &n)?;
    let newton = lct_newton(&newton_poly_from_exponents(&g, &fermat_exponents(&n))?);
    Ok(json!({ "fermat": n, "lct": lct, "newton": newton }))
}

fn cmd_adjoin(input: &Path, divisor: usize, check: bool) -> Outcome {
    let g = load_germ(input)?;
    if divisor == 0 || divisor > g.dim() {
        return Err(Error::IndexOutOfRange {
            index: divisor,
            dim: g.dim(),
        }
        .into());
    }
    let mut out = to_json(&adjoin_invariant_divisor(&g, divisor - 1)?);
    if check {
        let rep = check_precise_inversion(&g, divisor - 1)?;
        out["pia"] = to_json(&rep);
        if !rep.passed {
            return Err(Failure::Check(out));
        }
    }
    Ok(out)
}

fn cmd_flat(input: &Path, max_steps: Option<usize>) -> Outcome {
    let g = load_germ(input)?;
    match build_flat_structure(&g, max_steps.unwrap_or(g.dim())) {
        Ok((_, build)) => Ok(to_json(&build)),
        Err(e @ Error::StepBoundExceeded(_)) => Err(Failure::Check(json!({ "error": e.to_string() }))),
        Err(e) => Err(e.into()),
    }
}

fn cmd_survey(
    dim: usize,
    max_index: u64,
    boundary_set: &str,
    out: &Path,
    as_json: bool,
    jobs: Option<usize>,
    mod_permutations: bool,
) -> Outcome {
    if dim == 0 {
        return Err(Failure::Input("dim must be positive".into()));
    }
    let set = parse_rat_list(boundary_set)?;
    let opts = SurveyOptions {
        mod_permutations,
        jobs,
        ..SurveyOptions::default()
    };
    let rows = run_survey(dim, max_index, &set, &opts)?;
    let text = if as_json {
        rows_to_json(&rows)
    } else {
        rows_to_csv(&rows)?
    };
    fs::write(out, text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    let mut summary = json!({ "rows": rows.len(), "out": out.display().to_string() });
    if !rows.is_empty() {
        summary["acc"] = to_json(&acc_report(&rows));
    }
    Ok(summary)
}

fn cmd_check(config: Option<&Path>) -> Outcome {
    let cfg = match config {
        Some(p) => CorpusConfig::from_json(&read(p)?)?,
        None => CorpusConfig::default(),
    };
    let rep = verify_corpus(&cfg)?;
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    if rep.passed {
        Ok(to_json(&rep))
    } else {
        Err(Failure::Check(to_json(&rep)))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Mld {
            input,
            face,
            global,
            oracle_radius,
        } => cmd_mld(&input, face.as_deref(), global, oracle_radius),
        Cmd::Lct {
            input,
            exponents,
            general_member,
            monomial,
            fermat,
        } => cmd_lct(
            &input,
            exponents.as_deref(),
            general_member,
            monomial.as_deref(),
            fermat.as_deref(),
        ),
        Cmd::Adjoin { input, divisor, check } => cmd_adjoin(&input, divisor, check),
        Cmd::Flat { input, max_steps } => cmd_flat(&input, max_steps),
        Cmd::Survey {
            dim,
            max_index,
            boundary_set,
            out,
            json,
            jobs,
            mod_permutations,
        } => cmd_survey(dim, max_index, &boundary_set, &out, json, jobs, mod_permutations),
        Cmd::Check { corpus_config } => cmd_check(corpus_config.as_deref()),
    }
}

fn print(v: &Value) {
    // a closed pipe (e.g. `| head`) is not an error
    let text = serde_json::to_string_pretty(v).expect("json values print");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(v)) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Ok(Err(Failure::Check(v))) => {
            print(&v);
            eprintln!("check failed");
            ExitCode::from(EXIT_CHECK)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
