//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::cell::Cell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::Rng;
use serde_json::Value;
use umeb_cli::format::{read_basis, write_basis, Orthonormality};
use umeb_core::basis::{
    assemble_m, build_23_first, build_23_pauli_set, build_23_second, build_weyl_umeb, c3_second_basis,
    complement_projector, support_rank_certificate, Members,
};
use umeb_core::channel::analyze;
use umeb_core::mub::overlap_matrix;
use umeb_core::numerics::ONE;
use umeb_core::random::{gaussian_vector, projector_onto, rng_for, subspace_basis, unitary};
use umeb_core::search::{max_entanglement_in_subspace, projector_residual, run_restart};
use umeb_core::states::weyl_operator;
use umeb_core::{BasisSet, BipartiteState, Complex64, ComplexMatrix, SearchConfig, SearchVerdict, Verdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const WEYL_CASES: [(usize, usize); 6] = [(2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (4, 7)];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_23_basis(b: &BasisSet, tol: f64) -> Result<(), String> {
    check!(b.len() == 6, "{} members", b.len());
    let gram = b.orthonormality_error();
    check!(gram <= tol, "Gram deviation {gram:e}");
    for (k, s) in b.states().iter().enumerate() {
        let sd = s.schmidt().map_err(|e| e.to_string())?;
        if k < 4 {
            check!(
                sd.me_deviation() <= tol,
                "member {k}: ME deviation {:e}",
                sd.me_deviation()
            );
        } else {
            check!(sd.rank(1e-8) == 1, "member {k}: Schmidt rank {}", sd.rank(1e-8));
        }
    }
    Ok(())
}

fn first_basis() -> Outcome {
    let b = build_23_first().map_err(|e| e.to_string())?;
    check_23_basis(&b, 1e-12)?;
    Ok(format!("Gram deviation {:.1e}", b.orthonormality_error()))
}

fn second_basis() -> Outcome {
    let b = build_23_second().map_err(|e| e.to_string())?;
    check_23_basis(&b, 1e-12)?;
    let xyz = c3_second_basis();
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let ip: Complex64 = xyz[i].iter().zip(&xyz[j]).map(|(a, b)| a.conj() * b).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - c(target)).norm());
        }
    }
    check!(worst <= 1e-12, "x', y', z' Gram deviation {worst:e}");
    Ok(format!("x'y'z' Gram deviation {worst:.1e}"))
}

fn mub_claim() -> Outcome {
    let a = build_23_first().map_err(|e| e.to_string())?;
    let b = build_23_second().map_err(|e| e.to_string())?;
    let r = overlap_matrix(&a, &b, 1e-9).map_err(|e| e.to_string())?;
    let target = 1.0 / 6f64.sqrt();
    let count = r.overlaps.iter().flatten().count();
    check!(count == 36, "{count} overlaps");
    let worst = r
        .overlaps
        .iter()
        .flatten()
        .map(|o| (o - target).abs())
        .fold(0.0, f64::max);
    check!(worst <= 1e-9 && r.is_mub, "max deviation {worst:e}");
    Ok(format!("36 overlaps, max deviation {worst:.1e}"))
}

fn weyl_family() -> Outcome {
    for (d, dp) in WEYL_CASES {
        let b = build_weyl_umeb(d, dp).map_err(|e| e.to_string())?;
        check!(b.len() == d * d, "({d},{dp}): {} members", b.len());
        check!(
            b.orthonormality_error() <= 1e-10,
            "({d},{dp}): Gram {:e}",
            b.orthonormality_error()
        );
        for s in b.states() {
            let dev = s.schmidt().map_err(|e| e.to_string())?.me_deviation();
            check!(dev <= 1e-10, "({d},{dp}): ME deviation {dev:e}");
        }
        let ops: Vec<ComplexMatrix> = (0..d * d).map(|k| weyl_operator(d, k / d, k % d).unwrap()).collect();
        for (i, u) in ops.iter().enumerate() {
            for (j, v) in ops.iter().enumerate() {
                let tr = u.adjoint().matmul(v).trace();
                let target = if i == j { d as f64 } else { 0.0 };
                check!(
                    (tr - c(target)).norm() <= 1e-12,
                    "d={d}: Tr(U†U) off by {:e}",
                    (tr - c(target)).norm()
                );
            }
        }
    }
    Ok(format!("{} dimension pairs", WEYL_CASES.len()))
}

fn unextendibility() -> Outcome {
    let mut rng = rng_for(2025, 0);
    for (d, dp) in WEYL_CASES {
        let b = build_weyl_umeb(d, dp).map_err(|e| e.to_string())?;
        let r = support_rank_certificate(&b).map_err(|e| e.to_string())?;
        check!(r.verdict == Verdict::Unextendible, "({d},{dp}): verdict {}", r.verdict);
        check!(r.b_support_rank == dp - d, "({d},{dp}): r_B = {}", r.b_support_rank);
        let p = complement_projector(&b, Members::MaximallyEntangled);
        for _ in 0..100 {
            let psi = BipartiteState::normalized(d, dp, p.apply(&gaussian_vector(&mut rng, d * dp)))
                .map_err(|e| e.to_string())?;
            let rank = psi.schmidt_rank(1e-8).map_err(|e| e.to_string())?;
            check!(
                rank <= dp - d && dp - d < d,
                "({d},{dp}): complement state of Schmidt rank {rank}"
            );
        }
    }
    Ok("support-rank certificate and 600 complement samples".into())
}

fn negative_control() -> Outcome {
    let b = build_23_pauli_set().map_err(|e| e.to_string())?;
    let p = complement_projector(&b, Members::All);
    let config = SearchConfig::default();
    let r = max_entanglement_in_subspace(&p, 2, 3, &config).map_err(|e| e.to_string())?;
    check!(r.best_f <= 0.5 + 1e-9, "best F = {}", r.best_f);
    check!(r.verdict == SearchVerdict::NoneFound, "verdict {}", r.verdict);
    Ok(format!("{} restarts, best F = {:.12}", config.restarts, r.best_f))
}

fn positive_control() -> Outcome {
    let mut detail = Vec::new();
    for (d, dp) in [(2, 4), (2, 5)] {
        let b = build_weyl_umeb(d, dp).map_err(|e| e.to_string())?;
        let p = complement_projector(&b, Members::MaximallyEntangled);
        let r = max_entanglement_in_subspace(&p, d, dp, &SearchConfig::default()).map_err(|e| e.to_string())?;
        check!(r.verdict == SearchVerdict::FoundMe, "({d},{dp}): verdict {}", r.verdict);
        check!(1.0 - r.best_f <= 1e-6, "({d},{dp}): 1 - F = {:e}", 1.0 - r.best_f);
        let (me, dev) = r.best_state.is_maximally_entangled(1e-6).map_err(|e| e.to_string())?;
        check!(me, "({d},{dp}): witness ME deviation {dev:e}");
        let res = projector_residual(&p, &r.best_state);
        check!(res <= 1e-8, "({d},{dp}): witness leaves the complement by {res:e}");
        detail.push(format!("({d},{dp}) 1-F={:.1e}", 1.0 - r.best_f));
    }
    Ok(detail.join(", "))
}

fn channel_23() -> Outcome {
    let r = analyze(&build_weyl_umeb(2, 3).map_err(|e| e.to_string())?, 2.0).map_err(|e| e.to_string())?;
    let half = ComplexMatrix::identity(2).scale_real(0.5);
    check!(
        r.marginal_b.distance(&half) <= 1e-12,
        "Tr_B deviation {:e}",
        r.marginal_b.distance(&half)
    );
    let mut proj = ComplexMatrix::zeros(3, 3);
    proj[(2, 2)] = ONE;
    check!(
        r.marginal_a.distance(&proj) <= 1e-12,
        "Tr_A deviation {:e}",
        r.marginal_a.distance(&proj)
    );
    check!(r.entropy_a.abs() <= 1e-9, "entropy_A = {}", r.entropy_a);
    check!((r.entropy_b - 1.0).abs() <= 1e-9, "entropy_B = {}", r.entropy_b);
    let exact = 6f64.sqrt() / 3.0;
    check!(
        r.unitality_deviation >= 0.8,
        "unitality deviation {}",
        r.unitality_deviation
    );
    check!(
        (r.unitality_deviation - exact).abs() <= 1e-12,
        "unitality deviation {}",
        r.unitality_deviation
    );
    Ok(format!("unitality deviation {:.12}", r.unitality_deviation))
}

fn entropy_formulas() -> Outcome {
    for (d, dp) in WEYL_CASES {
        let b = build_weyl_umeb(d, dp).map_err(|e| e.to_string())?;
        for base in [2.0, std::f64::consts::E, d as f64] {
            let r = analyze(&b, base).map_err(|e| e.to_string())?;
            let ea = ((dp - d) as f64).ln() / base.ln();
            let eb = (d as f64).ln() / base.ln();
            check!(
                (r.entropy_a - ea).abs() <= 1e-9,
                "({d},{dp}) base {base}: S_A = {}",
                r.entropy_a
            );
            check!(
                (r.entropy_b - eb).abs() <= 1e-9,
                "({d},{dp}) base {base}: S_B = {}",
                r.entropy_b
            );
        }
    }
    Ok(format!("{} cases x 3 bases", WEYL_CASES.len()))
}

fn proof_matrix() -> Outcome {
    let mut rng = rng_for(7, 0);
    let mut worst = 0.0f64;
    for d in [2usize, 3] {
        for _ in 0..50 {
            let u = unitary(&mut rng, d);
            let raw: Vec<f64> = (0..d).map(|_| 0.05 + rng.random::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            let lambdas: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let pm = assemble_m(&u, &lambdas, d).map_err(|e| e.to_string())?;
            let numeric = pm.m.determinant().map_err(|e| e.to_string())?.norm();
            let rel = (numeric - pm.det_abs_factored).abs() / pm.det_abs_factored;
            worst = worst.max(rel);
            check!(rel <= 1e-8, "d={d}: relative mismatch {rel:e}");
            let floor = lambdas.iter().product::<f64>().powf(d as f64 / 2.0) * (d as f64).powf(d as f64 / 2.0);
            check!(numeric >= 0.5 * floor, "d={d}: |det M| = {numeric:e} below {floor:e}");
        }
    }
    let pm = assemble_m(&ComplexMatrix::identity(2), &[0.5, 0.5], 2).map_err(|e| e.to_string())?;
    let det = pm.m.determinant().map_err(|e| e.to_string())?.norm();
    check!((det - 1.0).abs() <= 1e-10, "d=2 identity: |det M| = {det}");
    Ok(format!("100 draws, worst relative mismatch {worst:.1e}"))
}

fn optimizer_properties() -> Outcome {
    const DIMS: [(usize, usize); 7] = [(2, 3), (2, 4), (3, 3), (3, 4), (3, 5), (4, 4), (4, 5)];
    let mut rng = rng_for(11, 0);
    let cfg = SearchConfig {
        max_iters: 2000,
        ..SearchConfig::default()
    };
    for case in 0..100 {
        let (d, dp) = DIMS[case % DIMS.len()];
        let n = d * dp;
        let k = 1 + (case * 5) % (n - 1);
        let p = projector_onto(&subspace_basis(&mut rng, n, k));
        let out = run_restart(&p, d, dp, &cfg, case)
            .map_err(|e| e.to_string())?
            .ok_or("restart collapsed")?;
        for w in out.trace.windows(2) {
            check!(w[1] >= w[0] - 1e-12, "case {case}: F fell from {} to {}", w[0], w[1]);
        }
    }
    let cfg = SearchConfig {
        restarts: 8,
        ..SearchConfig::default()
    };
    for &(d, dp) in &DIMS {
        let p = projector_onto(&subspace_basis(&mut rng, d * dp, (d * dp) / 2));
        let a = max_entanglement_in_subspace(&p, d, dp, &cfg).map_err(|e| e.to_string())?;
        let b = max_entanglement_in_subspace(&p, d, dp, &cfg).map_err(|e| e.to_string())?;
        check!(
            a.verdict == b.verdict && a.best_f.to_bits() == b.best_f.to_bits(),
            "({d},{dp}) not reproducible"
        );
    }
    Ok("100 monotone runs, 7 reproducible searches".into())
}

struct Cli {
    dir: tempfile::TempDir,
    runs: Cell<usize>,
}

impl Cli {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> (i32, String) {
        let out = Command::new(env!("CARGO_BIN_EXE_umeb"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .expect("spawn umeb");
        (
            out.status.code().unwrap_or(-1),
            String::from_utf8_lossy(&out.stdout).into_owned(),
        )
    }

    fn expect(&self, args: &[&str], code: i32) -> Result<String, String> {
        self.runs.set(self.runs.get() + 1);
        let (got, stdout) = self.run(args);
        check!(got == code, "`umeb {}` exited {got}, expected {code}", args.join(" "));
        Ok(stdout)
    }

    fn expect_json(&self, args: &[&str], code: i32) -> Result<Value, String> {
        let stdout = self.expect(args, code)?;
        serde_json::from_str(&stdout).map_err(|e| format!("`umeb {}`: bad JSON: {e}", args.join(" ")))
    }
}

fn states_in(path: &Path) -> Result<usize, String> {
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(v["states"].as_array().map_or(0, Vec::len))
}

fn cli_contract() -> Outcome {
    let cli = Cli {
        dir: tempfile::tempdir().map_err(|e| e.to_string())?,
        runs: Cell::new(0),
    };
    // construct
    cli.expect(
        &[
            "construct",
            "--kind",
            "weyl",
            "--d",
            "3",
            "--dprime",
            "4",
            "-o",
            "w34.json",
        ],
        0,
    )?;
    check!(states_in(&cli.path("w34.json"))? == 9, "weyl(3,4) file size");
    cli.expect(&["construct", "--kind", "c23-first", "-o", "a.json"], 0)?;
    let a = read_basis(&cli.path("a.json"), Orthonormality::Enforce)
        .map_err(|e| e.to_string())?
        .value;
    check!(
        a.len() == 6 && a.me_count() == 4,
        "c23-first: {} members, {} ME",
        a.len(),
        a.me_count()
    );
    cli.expect(&["construct", "--kind", "weyl", "--d", "3", "--dprime", "3"], 2)?;
    for (d, dp) in [(2, 3), (2, 4), (4, 7)] {
        let (ds, dps, out) = (d.to_string(), dp.to_string(), format!("w{d}{dp}.json"));
        cli.expect(
            &["construct", "--kind", "weyl", "--d", &ds, "--dprime", &dps, "-o", &out],
            0,
        )?;
    }
    cli.expect(&["construct", "--kind", "c23-second", "-o", "b.json"], 0)?;

    // round trip: amplitudes bit-identical, Gram deviation unchanged
    for (file, built) in [
        ("a.json", build_23_first().map_err(|e| e.to_string())?),
        ("b.json", build_23_second().map_err(|e| e.to_string())?),
        ("w47.json", build_weyl_umeb(4, 7).map_err(|e| e.to_string())?),
    ] {
        let back = read_basis(&cli.path(file), Orthonormality::Enforce).map_err(|e| e.to_string())?;
        check!(back.warnings.is_empty(), "{file}: load warnings");
        check!(
            back.value.states() == built.states(),
            "{file}: amplitudes changed on round trip"
        );
        let drift = (back.value.orthonormality_error() - built.orthonormality_error()).abs();
        check!(drift <= 1e-12, "{file}: Gram deviation drifted by {drift:e}");
        write_basis(&cli.path("again.json"), &back.value).map_err(|e| e.to_string())?;
        let first = std::fs::read(cli.path(file)).map_err(|e| e.to_string())?;
        let second = std::fs::read(cli.path("again.json")).map_err(|e| e.to_string())?;
        check!(first == second, "{file}: rewrite is not byte-identical");
    }

    // verify
    cli.expect(&["verify", "a.json"], 0)?;
    let mut dup: Value = serde_json::from_str(&std::fs::read_to_string(cli.path("a.json")).unwrap()).unwrap();
    let first_state = dup["states"][0].clone();
    dup["states"][1] = first_state;
    dup.as_object_mut().unwrap().remove("me_flags");
    std::fs::write(cli.path("dup.json"), dup.to_string()).unwrap();
    let v = cli.expect_json(&["verify", "dup.json", "--json"], 1)?;
    let gram = v["gram_deviation"].as_f64().unwrap_or(0.0);
    check!((gram - 1.0).abs() <= 1e-12, "duplicated state: Gram deviation {gram}");
    let text = std::fs::read_to_string(cli.path("a.json")).unwrap();
    std::fs::write(cli.path("truncated.json"), &text[..text.len() / 2]).unwrap();
    cli.expect(&["verify", "truncated.json"], 2)?;

    // certify
    cli.expect(&["certify", "w23.json"], 0)?;
    let v = cli.expect_json(&["certify", "w24.json", "--json"], 1)?;
    check!(
        v["verdict"] == "extendible" && v["witness"]["format"] == "umeb-state/1",
        "weyl(2,4) witness missing"
    );
    let v = cli.expect_json(&["certify", "w47.json", "--json"], 0)?;
    check!(
        v["method"] == "support-rank" && v["b_support_rank"] == 3,
        "weyl(4,7) certificate: {v}"
    );

    // search
    write_basis(
        &cli.path("pauli.json"),
        &build_23_pauli_set().map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let v = cli.expect_json(&["search", "pauli.json", "--json"], 1)?;
    let best = v["best_f"].as_f64().unwrap_or(1.0);
    check!(best <= 0.5 + 1e-9, "four-state complement: best F {best}");
    std::fs::write(
        cli.path("empty.json"),
        r#"{"format": "umeb-basis/1", "d": 2, "dprime": 2, "states": []}"#,
    )
    .unwrap();
    cli.expect(&["search", "empty.json"], 0)?;
    cli.expect(&["search", "w24.json"], 0)?;

    // mub
    let v = cli.expect_json(&["mub", "a.json", "b.json", "--json"], 0)?;
    check!(
        v["max_deviation"].as_f64().unwrap_or(1.0) <= 1e-9,
        "MUB deviation {}",
        v["max_deviation"]
    );
    cli.expect(&["mub", "a.json", "a.json"], 1)?;
    cli.expect(&["mub", "a.json", "w34.json"], 2)?;

    // channel
    let v = cli.expect_json(&["channel", "w23.json", "--json"], 0)?;
    let (sa, sb) = (
        v["entropy_a"].as_f64().unwrap_or(-1.0),
        v["entropy_b"].as_f64().unwrap_or(-1.0),
    );
    check!(
        sa.abs() <= 1e-9 && (sb - 1.0).abs() <= 1e-9,
        "weyl(2,3) entropies {sa}, {sb}"
    );
    let v = cli.expect_json(&["channel", "w34.json", "--json"], 0)?;
    check!(
        v["unitality_deviation"].as_f64().unwrap_or(0.0) > 0.1,
        "weyl(3,4) unitality deviation"
    );
    cli.expect(&["channel", "a.json"], 0)?;
    cli.expect(&["channel", "a.json", "--all-members"], 2)?;

    Ok(format!("{} invocations, 3 lossless round trips", cli.runs.get()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (
            "first 2x3 basis: orthonormal, four ME members, two product members",
            first_basis,
        ),
        ("second 2x3 basis and its x', y', z' qutrit basis", second_basis),
        ("the two 2x3 bases are mutually unbiased", mub_claim),
        (
            "Weyl family: size, orthonormality, entanglement, trace orthogonality",
            weyl_family,
        ),
        ("Weyl sets are unextendible for d'/2 < d < d'", unextendibility),
        (
            "search finds nothing beyond F = 1/2 in a product-only complement",
            negative_control,
        ),
        ("search finds ME witnesses when d <= d'/2", positive_control),
        (
            "complement channel for 2x3: marginals, entropies, non-unitality",
            channel_23,
        ),
        ("complement entropies log(d'-d) and log d", entropy_formulas),
        (
            "orthogonality-system determinant matches its factorization",
            proof_matrix,
        ),
        (
            "optimizer monotonicity and seeded reproducibility",
            optimizer_properties,
        ),
        ("CLI exit codes and lossless serialization", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
