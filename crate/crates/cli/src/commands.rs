use std::path::Path;
use std::str::FromStr;

use dyndeg::fab::{
    chi_formula, fab_spec, fx_matrix, fy_matrix, lambda_n, pic_basis_y, picard_degrees,
    vn_points_mod_p, vn_residual, vn_search,
};
use dyndeg::irrational::certify_irrational;
use dyndeg::linalg::{integer_roots, lex_subsets, IntMatrix};
use dyndeg::matinv::{
    build_i, build_j, build_k, cyclic_subspace, delta_k, delta_k_polynomial, jx_pullback,
    k_handle, symmetric_cyclic_subspace, symmetric_subspace, SYMBOLIC_Q_MAX,
};
use dyndeg::monomial::{degp_matrix, dynamical_degrees, log_concavity_check, projectivize, MonomialMap};
use dyndeg::oracle::{
    degree_sequence_with, delta_estimate, DegreeReport, MapHandle, OracleConfig, Strategy,
    DEFAULT_RATIO_TOL,
};
use dyndeg::poly::PrimeField;
use dyndeg::spec_file::{parse_spec, validate_spec};
use dyndeg::Error;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::{Cli, CliError, Command, FabCommand, ModeArg, Outcome, StrategyArg, SubspaceArg, WhichArg};

/// Exclusive upper bound on primes accepted for exhaustive `V_n` search.
const SMALL_PRIME_MAX: u64 = 20_000;

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn compute(e: Error) -> CliError {
    CliError::Compute(e.to_string())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn read_input(arg: &str) -> Result<Vec<u8>, CliError> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(arg.as_bytes().to_vec());
    }
    std::fs::read(Path::new(arg)).map_err(|e| input(format!("cannot read {arg}: {e}")))
}

fn read_matrix(arg: &str) -> Result<(IntMatrix, Vec<u8>), CliError> {
    let bytes = read_input(arg)?;
    let m: IntMatrix =
        serde_json::from_slice(&bytes).map_err(|e| input(format!("matrix: {e}")))?;
    let canonical = serde_json::to_vec(&m).expect("matrix serializes");
    Ok((m, canonical))
}

fn config(cli: &Cli, n: usize) -> OracleConfig {
    let cfg = OracleConfig::new(n, cli.global.trials, cli.global.seed);
    match &cli.global.primes {
        Some(p) => cfg.primes(p.clone()),
        None => cfg,
    }
}

fn degree_csv(r: &DegreeReport) -> String {
    let mut s = String::from("n,degree,ratio,agree\n");
    for (i, d) in r.degrees.iter().enumerate() {
        let ratio = if i == 0 {
            String::new()
        } else {
            r.ratios[i - 1].to_string()
        };
        s.push_str(&format!("{i},{d},{ratio},{}\n", r.agreement[i]));
    }
    s
}

fn oracle_block(r: &DegreeReport) -> Value {
    let est = if r.degrees.len() >= 3 {
        delta_estimate(&r.degrees, DEFAULT_RATIO_TOL).ok().map(|e| to_value(&e))
    } else {
        None
    };
    json!({
        "report": to_value(r),
        "all_agree": r.all_agree(),
        "submultiplicative": r.is_submultiplicative(),
        "delta_estimate": est,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.global.tol.is_nan() || cli.global.tol <= 0.0 {
        return Err(input(format!("--tol {} must be positive", cli.global.tol)));
    }
    if cli.global.trials == 0 {
        return Err(input("--trials must be at least 1"));
    }
    for &p in cli.global.primes.iter().flatten() {
        PrimeField::new(p).map_err(|e| input(format!("--primes: {e}")))?;
    }
    match &cli.command {
        Command::Degseq { map, n, strategy } => degseq(cli, map, *n, *strategy),
        Command::Monomial {
            matrix,
            all_degrees,
        } => monomial(cli, matrix, *all_degrees),
        Command::Matinv {
            q,
            which,
            mode,
            n,
            subspace,
        } => matinv(cli, *q, *which, *mode, *n, *subspace),
        Command::Fab { command } => fab(cli, command),
        Command::Certify { matrix } => certify(cli, matrix),
        Command::Charpoly { matrix } => charpoly(matrix),
    }
}

fn degseq(
    cli: &Cli,
    path: &Path,
    n: usize,
    strategy: StrategyArg,
) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_spec(&text).map_err(input)?;
    let canonical = file.canonical().map_err(input)?.to_json();
    let valid = validate_spec(&file).map_err(input)?;
    let cfg = config(cli, n).strategy(match strategy {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Pullback => Strategy::Pullback,
        StrategyArg::Sampling => Strategy::Sampling,
    });
    let r = degree_sequence_with(&valid.handle, &cfg).map_err(compute)?;
    let mut results = oracle_block(&r);
    results["map"] = json!(valid.handle.label);
    results["degree"] = json!(valid.spec.as_ref().map(|s| s.degree().to_string()));
    results["warnings"] = json!(valid.warnings);
    Ok(Outcome {
        input: canonical.into_bytes(),
        primes: r.provenance.primes.clone(),
        csv: Some(degree_csv(&r)),
        results,
    })
}

fn monomial(cli: &Cli, matrix: &str, all: bool) -> Result<Outcome, CliError> {
    let (a, canonical) = read_matrix(matrix)?;
    let m = MonomialMap::new(a).map_err(input)?;
    let spec = projectivize(&m).map_err(compute)?;
    let k = m.k();
    let ps: Vec<usize> = if all { (1..=k).collect() } else { vec![1] };
    let mut deg_p = Vec::new();
    for p in ps {
        let d = degp_matrix(&m, p).map_err(compute)?;
        let basis: Vec<Vec<usize>> = lex_subsets(k, p)
            .into_iter()
            .map(|s| s.into_iter().map(|i| i + 1).collect())
            .collect();
        deg_p.push(json!({ "p": p, "matrix": to_value(&d), "basis": basis }));
    }
    let dd = dynamical_degrees(&m, cli.global.tol).map_err(compute)?;
    let mut with_one = vec![1.0];
    with_one.extend(&dd.deltas);
    let shown: Vec<String> = spec.components().iter().map(|c| c.to_string()).collect();
    let results = json!({
        "projectivized": {
            "components": shown,
            "spec": to_value(&spec),
            "degree": spec.degree().to_string(),
        },
        "deg_1": spec.degree().to_string(),
        "deg_p": deg_p,
        "basis_order": "lexicographic subsets of coordinate indices",
        "dynamical_degrees": to_value(&dd),
        "log_concavity": to_value(&log_concavity_check(&with_one)),
    });
    Ok(Outcome {
        input: canonical,
        primes: Vec::new(),
        results,
        csv: None,
    })
}

fn matinv(
    cli: &Cli,
    q: usize,
    which: WhichArg,
    mode: ModeArg,
    n: usize,
    subspace: Option<SubspaceArg>,
) -> Result<Outcome, CliError> {
    if q < 2 {
        return Err(input(format!("--q {q} must be at least 2")));
    }
    let spec = match (which, mode) {
        (WhichArg::J, _) => Some(build_j(q).map_err(input)?),
        (WhichArg::I, _) => Some(build_i(q).map_err(input)?),
        (WhichArg::K, ModeArg::Symbolic) => Some(build_k(q).map_err(input)?),
        (WhichArg::K, ModeArg::Auto) if q <= SYMBOLIC_Q_MAX => {
            Some(build_k(q).map_err(compute)?)
        }
        (WhichArg::K, _) => None,
    };
    let handle = match &spec {
        Some(s) => MapHandle::from(s.spec.clone()),
        None => k_handle(q).map_err(compute)?,
    };
    let mut cfg = config(cli, n);
    if let Some(s) = subspace {
        cfg = cfg.embedding(match s {
            SubspaceArg::Symmetric => symmetric_subspace(q),
            SubspaceArg::Cyclic => cyclic_subspace(q),
            SubspaceArg::SymmetricCyclic => symmetric_cyclic_subspace(q),
        });
    }
    let r = degree_sequence_with(&handle, &cfg).map_err(compute)?;
    let j_pic = jx_pullback(q).map_err(compute)?;
    let j_pic_sq = &j_pic * &j_pic;
    let mut results = json!({
        "q": q,
        "family": format!("{which:?}"),
        "symbolic": spec.is_some(),
        "degree": spec.as_ref().map(|s| s.spec.degree().to_string()),
        "spec": spec.as_ref().map(|s| to_value(&s.spec)),
        "oracle": oracle_block(&r),
        "j_pic_matrix": to_value(&j_pic),
        "j_pic_squared_is_identity": j_pic_sq == IntMatrix::identity(j_pic.dim()),
    });
    if let WhichArg::K = which {
        let d = delta_k(q, cli.global.tol).map_err(compute)?;
        results["delta"] = to_value(&d);
        results["delta_polynomial"] = to_value(&delta_k_polynomial(q));
    } else {
        results["delta"] = json!(1.0);
    }
    let input_text = format!("matinv q={q} which={which:?} mode={mode:?} n={n} subspace={subspace:?}");
    Ok(Outcome {
        input: input_text.into_bytes(),
        primes: r.provenance.primes.clone(),
        csv: Some(degree_csv(&r)),
        results,
    })
}

fn fab(cli: &Cli, cmd: &FabCommand) -> Result<Outcome, CliError> {
    let (input_text, primes, results, csv) = match cmd {
        FabCommand::Chi { n } => {
            let chi = chi_formula(*n);
            let m = fy_matrix(*n);
            let results = json!({
                "n": n,
                "coefficients": to_value(&chi),
                "polynomial": chi.to_string(),
                "basis": pic_basis_y(*n),
                "fy_matrix": to_value(&m),
                "charpoly_matches": m.charpoly() == chi,
            });
            (format!("fab chi n={n}"), Vec::new(), results, None)
        }
        FabCommand::Lambda { n } => {
            let l = lambda_n(*n, cli.global.tol).map_err(compute)?;
            (format!("fab lambda n={n}"), Vec::new(), to_value(&l), None)
        }
        FabCommand::Search { n, restarts, prime } => {
            let cands = vn_search(*n, cli.global.seed, *restarts);
            let listed: Vec<Value> = cands
                .iter()
                .map(|c| {
                    json!({
                        "a": [c.a.re, c.a.im],
                        "b": [c.b.re, c.b.im],
                        "residual": vn_residual(c, *n).ok(),
                    })
                })
                .collect();
            let mut results = json!({ "n": n, "restarts": restarts, "candidates": listed });
            if let Some(p) = prime {
                if *p >= SMALL_PRIME_MAX || !is_prime(*p) {
                    return Err(input(format!(
                        "--prime {p} must be a prime below {SMALL_PRIME_MAX}"
                    )));
                }
                let pts: Vec<[String; 2]> = vn_points_mod_p(*n, *p, 64)
                    .into_iter()
                    .map(|(a, b)| [a.to_string(), b.to_string()])
                    .collect();
                results["mod_p"] = json!({ "prime": p.to_string(), "points": pts });
            }
            (
                format!("fab search n={n} restarts={restarts} prime={prime:?}"),
                Vec::new(),
                results,
                None,
            )
        }
        FabCommand::Degseq {
            a,
            b,
            prime,
            n,
            orbit,
        } => {
            let parse = |s: &str| {
                BigInt::from_str(s.trim()).map_err(|_| input(format!("malformed integer {s:?}")))
            };
            let (ai, bi) = (parse(a)?, parse(b)?);
            let p = BigInt::from(*prime);
            let red = |x: &BigInt| -> u64 {
                u64::try_from(((x % &p) + &p) % &p).expect("residue fits")
            };
            dyndeg::poly::PrimeField::new(*prime).map_err(input)?;
            let spec = fab_spec(red(&ai), red(&bi), *prime).map_err(input)?;
            let handle = MapHandle::from(spec);
            let r = degree_sequence_with(&handle, &config(cli, *n)).map_err(compute)?;
            let pic = match orbit {
                Some(k) => fy_matrix(*k),
                None => fx_matrix(),
            };
            let predicted = picard_degrees(&pic, *n);
            let matches: Vec<bool> = predicted
                .iter()
                .zip(&r.degrees)
                .map(|(x, &d)| *x == BigInt::from(d))
                .collect();
            let mut results = oracle_block(&r);
            results["picard_prediction"] =
                json!(predicted.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            results["picard_matches"] = json!(matches);
            (
                format!("fab degseq a={ai} b={bi} prime={prime} n={n} orbit={orbit:?}"),
                r.provenance.primes.clone(),
                results,
                Some(degree_csv(&r)),
            )
        }
    };
    Ok(Outcome {
        input: input_text.into_bytes(),
        primes,
        results,
        csv,
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn certify(cli: &Cli, matrix: &str) -> Result<Outcome, CliError> {
    let (m, canonical) = read_matrix(matrix)?;
    let v = certify_irrational(&m, cli.global.tol).map_err(|e| match e {
        Error::NotUnimodular(_) => input(e),
        e => compute(e),
    })?;
    Ok(Outcome {
        input: canonical,
        primes: Vec::new(),
        results: to_value(&v),
        csv: None,
    })
}

fn charpoly(matrix: &str) -> Result<Outcome, CliError> {
    let (m, canonical) = read_matrix(matrix)?;
    let cp = m.charpoly();
    let roots: Vec<String> = integer_roots(&cp).iter().map(|r| r.to_string()).collect();
    let results = json!({
        "coefficients": to_value(&cp),
        "polynomial": cp.to_string(),
        "det": m.det().to_string(),
        "trace": m.trace().to_string(),
        "integer_roots": roots,
    });
    Ok(Outcome {
        input: canonical,
        primes: Vec::new(),
        results,
        csv: None,
    })
}
