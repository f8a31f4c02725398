//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p qnet-cli --test release_acceptance -- --nocapture`.

use std::fs;
use std::time::Instant;

use qnet::budget::beam_splitter_i12;
use qnet::scenarios::{
    duan_quantity, optimal_coupling, parametric_optimum, separability_boundary,
    two_mode_squeezing_power, ThreeModeParams, TwoModeParams,
};
use qnet::verify::{
    boundary_suite, completeness_suite, decomposition_suite, duan_route_suite, oracle_points,
    oracle_suite, parametric_bound_suite, parametric_cases, pr_suite, random_networks,
    route_suite, steady_physics_suites, two_mode_bound_suite, two_mode_cases, SuiteReport,
    DEFAULT_SEED,
};

const SEED: u64 = DEFAULT_SEED;
const N_NETWORKS: usize = 100;

// pinned tolerances
const SUM_RULE_TOL: f64 = 1e-9;
const PR_TOL: f64 = 1e-12;
const C1_SECONDS: f64 = 10.0;
const ROUTE_TOL: f64 = 1e-6;
const C2_SECONDS: f64 = 60.0;
const ORACLE_TOL: f64 = 1e-12;
const BOUND_TOL: f64 = 1e-9;
const STRONG_COUPLING_MAX: f64 = 1.02;
const OPTIMUM_TOL: f64 = 1e-9;
const DUAN_TOL: f64 = 1e-8;
const DUAN_VACUUM_TOL: f64 = 1e-10;
const GOPT_RATIO: f64 = 0.99;
const HEISENBERG_TOL: f64 = 1e-10;
const DECOMPOSITION_TOL: f64 = 1e-10;

struct Line {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn stats(s: &SuiteReport) -> String {
    format!("{} max {:.3e} over {} cases (tol {:.0e})", s.name, s.max, s.cases, s.tol)
}

fn c1() -> Line {
    let t = Instant::now();
    let specs = random_networks(SEED, N_NETWORKS);
    let ccr = completeness_suite(&specs, SUM_RULE_TOL);
    let pr = pr_suite(&specs, PR_TOL);
    let secs = t.elapsed().as_secs_f64();
    Line {
        id: "1",
        title: "commutator sum rule on random networks",
        passed: ccr.passed && pr.passed && secs < C1_SECONDS,
        detail: format!("{}; {}; {secs:.2}s (limit {C1_SECONDS}s)", stats(&ccr), stats(&pr)),
    }
}

fn c2() -> Line {
    let specs = random_networks(SEED, N_NETWORKS);
    let t = Instant::now();
    let r = route_suite(&specs, ROUTE_TOL);
    let secs = t.elapsed().as_secs_f64();
    Line {
        id: "2",
        title: "Lyapunov and spectral routes agree",
        passed: r.passed && secs < C2_SECONDS,
        detail: format!("{}; {secs:.2}s (limit {C2_SECONDS}s)", stats(&r)),
    }
}

fn c3() -> Line {
    let r = oracle_suite(&oracle_points(), ORACLE_TOL);
    let exact = beam_splitter_i12(0.5, 1.0, 1.0);
    let oracle_ok = (exact - 0.25).abs() <= ORACLE_TOL;
    Line {
        id: "3",
        title: "beam-splitter closed form",
        passed: r.passed && oracle_ok,
        detail: format!("{}; I12(g=0.5) = {exact}", stats(&r)),
    }
}

fn c4() -> Line {
    let r = two_mode_bound_suite(&two_mode_cases(), BOUND_TOL);
    let strong = two_mode_squeezing_power(&TwoModeParams::from_frame(50.0, 0.5, 1.0, 1.0))
        .expect("stable two-mode point");
    let limit = 1.0 + (-1.0f64).exp();
    let strong_ok = strong.sum <= STRONG_COUPLING_MAX;
    Line {
        id: "4",
        title: "two-mode squeezing bound and strong-coupling saturation",
        passed: r.passed && strong_ok,
        detail: format!(
            "{} (bound holds: {}); sum at G/gamma=50, xi=0.5 is {:.6} vs required <= {STRONG_COUPLING_MAX} \
             (strong-coupling limit 1+e^-2xi = {limit:.6})",
            stats(&r),
            r.passed,
            strong.sum
        ),
    }
}

fn c5() -> Line {
    let o = parametric_optimum(4.0, 1.0).expect("optimum");
    let loc = (o.numeric_delta_eta - 5.0 / 3.0).abs();
    let val = (o.numeric_value - 0.9).abs();
    let closed = (o.delta_eta_star - 5.0 / 3.0).abs().max((o.min_value - 0.9).abs());
    let b = parametric_bound_suite(&parametric_cases(), BOUND_TOL);
    Line {
        id: "5",
        title: "parametric bound and optimum",
        passed: loc <= OPTIMUM_TOL && val <= OPTIMUM_TOL && closed <= OPTIMUM_TOL && b.passed,
        detail: format!(
            "numeric argmin {:.12} (err {loc:.1e}), min {:.12} (err {val:.1e}); {}",
            o.numeric_delta_eta,
            o.numeric_value,
            stats(&b)
        ),
    }
}

fn c6() -> Line {
    let r = duan_route_suite(SEED, 50, DUAN_TOL);
    let vac = duan_quantity(&ThreeModeParams {
        g_script: 0.0,
        xi: 0.0,
        omega: 1.0,
        kappa: 1.0,
        gamma_m: 0.01,
        n_o: 0.0,
        n_m: 0.0,
    })
    .expect("vacuum point");
    let err = (vac.direct - 1.0).abs().max((vac.budget - 1.0).abs());
    Line {
        id: "6",
        title: "Duan quantity direct vs budget route",
        passed: r.passed && err <= DUAN_VACUUM_TOL,
        detail: format!("{}; vacuum value {:.15} (err {err:.1e})", stats(&r), vac.direct),
    }
}

fn c7() -> Line {
    let r = boundary_suite(SEED, 10);
    let xi = 0.5f64;
    let line = separability_boundary(xi, 1.0).expect("line");
    let exact = line.n_o_intercept == 0.5 * ((2.0 * xi).exp() - 1.0);
    Line {
        id: "7",
        title: "separability boundary intercept and verdict flip",
        passed: r.passed && exact,
        detail: format!(
            "flips at +-5% on {}/{} parameter sets; n_o intercept at xi=0.5 {:.12}",
            r.cases - r.failures,
            r.cases,
            line.n_o_intercept
        ),
    }
}

fn c8() -> Line {
    let mut worst = f64::INFINITY;
    let mut errors = 0;
    for kr in [0.1, 0.3, 1.0, 3.0, 10.0] {
        for gr in [1e-3, 1e-2] {
            match optimal_coupling(kr, 1.0, gr * kr) {
                Ok(o) => worst = worst.min(o.eta_formula / o.eta_numeric),
                Err(_) => errors += 1,
            }
        }
    }
    Line {
        id: "8",
        title: "optimal-coupling formula within 1% of numeric optimum",
        passed: errors == 0 && worst >= GOPT_RATIO,
        detail: format!("worst eta_e ratio {worst:.6} (required >= {GOPT_RATIO}), {errors} errors"),
    }
}

fn c9() -> Line {
    let specs = random_networks(SEED, N_NETWORKS);
    let mut suites = steady_physics_suites(SEED, &specs, None);
    suites.retain(|s| s.name != "covariance_hermitian");
    let heis = suites.iter().find(|s| s.name == "heisenberg").expect("suite");
    assert_eq!(heis.tol, HEISENBERG_TOL);
    suites.push(decomposition_suite(SEED, 50, DECOMPOSITION_TOL));
    Line {
        id: "9",
        title: "covariance PSD, Heisenberg products, variance decomposition",
        passed: suites.iter().all(|s| s.passed),
        detail: suites.iter().map(stats).collect::<Vec<_>>().join("; "),
    }
}

fn run_twice(args: &[&str], out_flag_index: usize) -> (i32, bool) {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut outputs = Vec::new();
    let mut code = 0;
    for (k, workers) in ["1", "4"].iter().enumerate() {
        let path = dir.path().join(format!("run{k}.out"));
        let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        argv.insert(out_flag_index, path.to_string_lossy().into_owned());
        argv.insert(out_flag_index, "--out".into());
        argv.insert(1, workers.to_string());
        argv.insert(1, "--workers".into());
        code = code.max(qnet_cli::run_args(argv));
        outputs.push(fs::read(&path).expect("output written"));
    }
    (code, outputs[0] == outputs[1])
}

fn c10() -> Line {
    let seed = SEED.to_string();
    let runs = [
        ("verify", run_twice(&["qnet", "verify", "--seed", &seed], 4)),
        (
            "fig1",
            run_twice(
                &["qnet", "sweep", "--scenario", "fig1", "--grid", "g_script:0.1:50:25:log", "--grid", "xi:0.25:1:4"],
                8,
            ),
        ),
        (
            "fig2",
            run_twice(
                &["qnet", "sweep", "--scenario", "fig2", "--gamma1", "4", "--gamma2", "1", "--grid", "delta_eta:-4.9:4.9:99"],
                10,
            ),
        ),
        (
            "boundary",
            run_twice(&["qnet", "boundary", "--grid", "n_o:0:3:7", "--grid", "n_m:0:1:5"], 6),
        ),
    ];
    let passed = runs.iter().all(|(_, (code, same))| *code == 0 && *same);
    Line {
        id: "10",
        title: "byte-identical outputs across runs and worker counts",
        passed,
        detail: runs
            .iter()
            .map(|(n, (code, same))| format!("{n}: exit {code}, identical {same}"))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

#[test]
fn acceptance_criteria() {
    let lines = [c1(), c2(), c3(), c4(), c5(), c6(), c7(), c8(), c9(), c10()];
    for l in &lines {
        println!(
            "{} criterion {:>2}: {} | {}",
            if l.passed { "PASS" } else { "FAIL" },
            l.id,
            l.title,
            l.detail
        );
    }
    let failed: Vec<&str> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
