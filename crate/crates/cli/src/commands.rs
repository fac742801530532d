use std::path::Path;

use serde::Serialize;
use umeb_core::basis::{build_23_first, build_23_second, build_weyl_umeb, complement_projector, Members};
use umeb_core::channel::analyze_over;
use umeb_core::mub::overlap_matrix;
use umeb_core::search::{certify, max_entanglement_in_subspace, projector_residual};
use umeb_core::states::weyl_operator;
use umeb_core::{BasisSet, ComplexMatrix, SearchConfig, Verdict};

use crate::format::{self, to_json, Loaded, Orthonormality, StateFile};
use crate::{CliError, Command, Kind, LogBase, SearchArgs, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK};

type Matrix = Vec<Vec<[f64; 2]>>;

fn matrix_json(m: &ComplexMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn load(path: &Path, check: Orthonormality) -> Result<BasisSet, CliError> {
    let Loaded { value, warnings } = format::read_basis(path, check)?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(value)
}

fn label(basis: &BasisSet, k: usize) -> String {
    basis.labels().map(|l| l[k].clone()).unwrap_or_else(|| format!("#{k}"))
}

fn search_config(args: &SearchArgs) -> Result<SearchConfig, CliError> {
    let config = SearchConfig {
        restarts: args.restarts,
        max_iters: args.max_iters,
        seed: args.seed,
        ..SearchConfig::default()
    };
    config.validate()?;
    eprintln!("seed: {}", config.seed);
    Ok(config)
}

pub fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Construct { kind, d, dprime, out } => construct(kind, d, dprime, out.as_deref()),
        Command::Verify { path, tol, json } => verify(&path, tol, json),
        Command::Certify { path, search, json } => certify_cmd(&path, &search, json),
        Command::Search { path, search, json } => search_cmd(&path, &search, json),
        Command::Mub {
            path_a,
            path_b,
            tol,
            json,
        } => mub(&path_a, &path_b, tol, json),
        Command::Channel {
            path,
            log_base,
            all_members,
            json,
        } => channel(&path, log_base, all_members, json),
        Command::Pauli { d, n, m, json } => pauli(d, n.zip(m), json),
    }
}

fn construct(kind: Kind, d: Option<usize>, dprime: Option<usize>, out: Option<&Path>) -> Result<i32, CliError> {
    let basis = match kind {
        Kind::Weyl => {
            let (Some(d), Some(dprime)) = (d, dprime) else {
                return Err(CliError::Usage("--kind weyl needs --d and --dprime".into()));
            };
            build_weyl_umeb(d, dprime)?
        }
        Kind::C23First | Kind::C23Second => {
            if d.is_some_and(|d| d != 2) || dprime.is_some_and(|dp| dp != 3) {
                return Err(CliError::Usage("the 2⊗3 bases are fixed at --d 2 --dprime 3".into()));
            }
            if kind == Kind::C23First {
                build_23_first()?
            } else {
                build_23_second()?
            }
        }
    };
    let summary = format!(
        "{} members, {} maximally entangled, in {}⊗{}",
        basis.len(),
        basis.me_count(),
        basis.d(),
        basis.dprime()
    );
    match out {
        Some(path) => {
            format::write_basis(path, &basis)?;
            println!("wrote {}: {summary}", path.display());
        }
        None => {
            println!("{}", to_json(&format::BasisFile::from_basis(&basis)));
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct MemberCheck {
    index: usize,
    label: Option<String>,
    maximally_entangled: bool,
    me_deviation: f64,
    schmidt_rank: usize,
    ok: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    d: usize,
    dprime: usize,
    members: usize,
    me_count: usize,
    tol: f64,
    gram_deviation: f64,
    gram_ok: bool,
    states: Vec<MemberCheck>,
    pass: bool,
}

fn verify(path: &Path, tol: f64, json: bool) -> Result<i32, CliError> {
    if tol.is_nan() || tol <= 0.0 || tol >= 1.0 {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {tol}")));
    }
    // a non-orthonormal set is a negative answer here, not a load error
    let basis = load(path, Orthonormality::Skip)?;
    let gram_deviation = basis.orthonormality_error();
    let gram_ok = gram_deviation <= tol;
    let mut states = Vec::with_capacity(basis.len());
    for (k, (s, &flag)) in basis.states().iter().zip(basis.me_flags()).enumerate() {
        let schmidt = s.schmidt()?;
        let dev = schmidt.me_deviation();
        states.push(MemberCheck {
            index: k,
            label: basis.labels().map(|l| l[k].clone()),
            maximally_entangled: flag,
            me_deviation: dev,
            schmidt_rank: schmidt.rank(1e-8),
            ok: !flag || dev <= tol,
        });
    }
    let pass = gram_ok && states.iter().all(|c| c.ok);
    let report = VerifyReport {
        d: basis.d(),
        dprime: basis.dprime(),
        members: basis.len(),
        me_count: basis.me_count(),
        tol,
        gram_deviation,
        gram_ok,
        states,
        pass,
    };
    if json {
        println!("{}", to_json(&report));
    } else {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        println!(
            "{} members ({} maximally entangled) in {}⊗{}",
            report.members, report.me_count, report.d, report.dprime
        );
        println!("gram deviation {:.3e} [{}]", gram_deviation, mark(gram_ok));
        for c in &report.states {
            let name = label(&basis, c.index);
            if c.maximally_entangled {
                println!("  {name}: me deviation {:.3e} [{}]", c.me_deviation, mark(c.ok));
            } else {
                println!("  {name}: auxiliary, Schmidt rank {}", c.schmidt_rank);
            }
        }
        println!("{}", if pass { "pass" } else { "fail" });
    }
    Ok(if pass { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct CertifyJson {
    seed: u64,
    restarts: usize,
    method: String,
    complement_dimension: usize,
    b_support_rank: usize,
    a_support_rank: usize,
    schmidt_rank_bound: usize,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<StateFile>,
}

fn certify_cmd(path: &Path, args: &SearchArgs, json: bool) -> Result<i32, CliError> {
    let basis = load(path, Orthonormality::Enforce)?;
    let config = search_config(args)?;
    let report = certify(&basis, &config)?;
    let out = CertifyJson {
        seed: config.seed,
        restarts: config.restarts,
        method: report.method.to_string(),
        complement_dimension: report.complement_dimension,
        b_support_rank: report.b_support_rank,
        a_support_rank: report.a_support_rank,
        schmidt_rank_bound: report.schmidt_rank_bound,
        verdict: report.verdict.to_string(),
        best_f: report.best_f,
        witness: report.witness.as_ref().map(StateFile::from_state),
    };
    if json {
        println!("{}", to_json(&out));
    } else {
        println!("verdict: {} ({})", out.verdict, out.method);
        println!("complement dimension: {}", out.complement_dimension);
        println!(
            "support ranks: d' side {}, d side {}; Schmidt rank bound {} (d = {})",
            out.b_support_rank,
            out.a_support_rank,
            out.schmidt_rank_bound,
            basis.d()
        );
        if let Some(f) = out.best_f {
            println!("best F: {f:.12}");
        }
        if let Some(w) = &report.witness {
            println!("witness amplitudes:");
            for (k, z) in w.amplitudes().iter().enumerate() {
                println!("  [{k}] {:+.12} {:+.12}i", z.re, z.im);
            }
        }
    }
    Ok(match report.verdict {
        Verdict::Unextendible => EXIT_OK,
        Verdict::Extendible => EXIT_NEGATIVE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

#[derive(Serialize)]
struct SearchJson {
    seed: u64,
    restarts: usize,
    max_iters: usize,
    complement_dimension: usize,
    verdict: String,
    best_f: Option<f64>,
    best_min_coeff_scaled: Option<f64>,
    iterations_used: usize,
    restarts_abandoned: usize,
    converged: bool,
    projector_residual: Option<f64>,
    best_state: Option<StateFile>,
}

fn search_cmd(path: &Path, args: &SearchArgs, json: bool) -> Result<i32, CliError> {
    let basis = load(path, Orthonormality::Enforce)?;
    let config = search_config(args)?;
    let (d, dprime) = basis.dims();
    let complement_dimension = basis.space_dim() - basis.len();
    let out = if complement_dimension == 0 {
        // a complete basis leaves nothing to search
        SearchJson {
            seed: config.seed,
            restarts: config.restarts,
            max_iters: config.max_iters,
            complement_dimension,
            verdict: "none_found".into(),
            best_f: None,
            best_min_coeff_scaled: None,
            iterations_used: 0,
            restarts_abandoned: 0,
            converged: true,
            projector_residual: None,
            best_state: None,
        }
    } else {
        let p = complement_projector(&basis, Members::All);
        let r = max_entanglement_in_subspace(&p, d, dprime, &config)?;
        SearchJson {
            seed: config.seed,
            restarts: r.restarts_used,
            max_iters: config.max_iters,
            complement_dimension,
            verdict: r.verdict.to_string(),
            best_f: Some(r.best_f),
            best_min_coeff_scaled: Some(r.best_min_coeff_scaled),
            iterations_used: r.iterations_used,
            restarts_abandoned: r.restarts_abandoned,
            converged: r.converged,
            projector_residual: Some(projector_residual(&p, &r.best_state)),
            best_state: Some(StateFile::from_state(&r.best_state)),
        }
    };
    if json {
        println!("{}", to_json(&out));
    } else {
        println!("verdict: {}", out.verdict);
        println!("complement dimension: {}", out.complement_dimension);
        if let (Some(f), Some(s)) = (out.best_f, out.best_min_coeff_scaled) {
            println!("best F: {f:.12}");
            println!("sqrt(d)·s_min: {s:.12}");
        }
        println!(
            "{} restarts ({} abandoned), {} iterations",
            out.restarts, out.restarts_abandoned, out.iterations_used
        );
    }
    Ok(if out.verdict == "found_me" {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

#[derive(Serialize)]
struct MubJson {
    dim: usize,
    target: f64,
    tol: f64,
    max_deviation: f64,
    is_mub: bool,
    overlaps: Vec<Vec<f64>>,
}

fn mub(path_a: &Path, path_b: &Path, tol: f64, json: bool) -> Result<i32, CliError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let a = load(path_a, Orthonormality::Enforce)?;
    let b = load(path_b, Orthonormality::Enforce)?;
    let r = overlap_matrix(&a, &b, tol)?;
    let out = MubJson {
        dim: r.dim,
        target: r.target,
        tol,
        max_deviation: r.max_deviation,
        is_mub: r.is_mub,
        overlaps: r.overlaps,
    };
    if json {
        println!("{}", to_json(&out));
    } else {
        println!("target overlap 1/sqrt({}) = {:.12}", out.dim, out.target);
        for row in &out.overlaps {
            let cells: Vec<String> = row.iter().map(|o| format!("{o:.6}")).collect();
            println!("  {}", cells.join(" "));
        }
        println!("max deviation {:.3e}", out.max_deviation);
        println!(
            "{}",
            if out.is_mub {
                "mutually unbiased"
            } else {
                "not mutually unbiased"
            }
        );
    }
    Ok(if out.is_mub { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct ChannelJson {
    d: usize,
    dprime: usize,
    members_used: usize,
    log_base: &'static str,
    trace_preserving_deviation: f64,
    unitality_deviation: f64,
    entropy_a: f64,
    entropy_b: f64,
    marginal_a: Matrix,
    marginal_b: Matrix,
    rho_perp: Matrix,
}

fn channel(path: &Path, base: LogBase, all_members: bool, json: bool) -> Result<i32, CliError> {
    let basis = load(path, Orthonormality::Enforce)?;
    let which = if all_members {
        Members::All
    } else {
        Members::MaximallyEntangled
    };
    let (log_base, base_name) = match base {
        LogBase::Two => (2.0, "2"),
        LogBase::E => (std::f64::consts::E, "e"),
        LogBase::D => (basis.d() as f64, "d"),
    };
    let r = analyze_over(&basis, which, log_base)?;
    let out = ChannelJson {
        d: basis.d(),
        dprime: basis.dprime(),
        members_used: basis.members(which).count(),
        log_base: base_name,
        trace_preserving_deviation: r.trace_preserving_deviation,
        unitality_deviation: r.unitality_deviation,
        entropy_a: r.entropy_a,
        entropy_b: r.entropy_b,
        marginal_a: matrix_json(&r.marginal_a),
        marginal_b: matrix_json(&r.marginal_b),
        rho_perp: matrix_json(&r.rho_perp),
    };
    if json {
        println!("{}", to_json(&out));
    } else {
        println!("members used: {}", out.members_used);
        println!(
            "trace-preserving deviation ‖Tr_B ρ⊥ − I/d‖ = {:.3e}",
            out.trace_preserving_deviation
        );
        println!("unitality deviation ‖Tr_A ρ⊥ − I/d'‖ = {:.6}", out.unitality_deviation);
        println!("S(Tr_A ρ⊥) = {:.9} (log base {base_name})", out.entropy_a);
        println!("S(Tr_B ρ⊥) = {:.9} (log base {base_name})", out.entropy_b);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct WeylJson {
    n: usize,
    m: usize,
    matrix: Matrix,
}

fn pauli(d: usize, which: Option<(usize, usize)>, json: bool) -> Result<i32, CliError> {
    if d < 1 {
        return Err(CliError::Usage("--d must be positive".into()));
    }
    let pairs: Vec<(usize, usize)> = match which {
        Some(p) => vec![p],
        None => (0..d).flat_map(|n| (0..d).map(move |m| (n, m))).collect(),
    };
    let mut ops = Vec::with_capacity(pairs.len());
    for (n, m) in pairs {
        ops.push(WeylJson {
            n,
            m,
            matrix: matrix_json(&weyl_operator(d, n, m)?),
        });
    }
    if json {
        println!("{}", to_json(&ops));
    } else {
        for op in &ops {
            println!("U_{}{}:", op.n, op.m);
            for row in &op.matrix {
                let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:+.6}{im:+.6}i")).collect();
                println!("  {}", cells.join("  "));
            }
        }
    }
    Ok(EXIT_OK)
}
