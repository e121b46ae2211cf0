//! Acceptance criteria AC-1..AC-10. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;
use std::time::{Duration, Instant};

use morse_dk_cli::config::Tolerances;
use morse_dk_cli::report::{self, VerificationReport};
use morse_dk_cli::{hille_hardy_lattice, hille_hardy_row};
use morse_dk_core::analytic::{realness_ledger, Backend, REALNESS_THRESHOLD};
use morse_dk_core::exec::Execution;
use morse_dk_core::model::{
    check_pt_symmetry, symmetric_probe, to_effective_oscillator, FrequencyConvention, PotentialSpec,
};
use morse_dk_core::oracle::Grid;
use morse_dk_core::propagator::{
    compose_closed, kernel_closed, kernel_sliced, kernel_spectral, KernelParams, RadialGrid, RADIAL_POINTS,
};
use morse_dk_core::specfun::{bessel_i, hille_hardy_pair, laguerre, log_gamma, SpecFunError};
use morse_dk_core::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 20_240_917;

// AC-2 paper-literal residual of the n = 0 state on the default grid,
// pinned at its first measured value
const PAPER_RESIDUAL_N0: f64 = 1.9703;

struct Check {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn c(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

fn lambda3() -> PotentialSpec {
    PotentialSpec::hermitian(1.0, 6.0, 1.0, 0.5).unwrap()
}

fn lambda3_report() -> (VerificationReport, Duration) {
    let spec = lambda3();
    let grid = Grid::default_for(&spec);
    let start = Instant::now();
    let r = report::build(
        &spec,
        &grid,
        Tolerances::default(),
        FrequencyConvention::Rederived,
        String::new(),
        Execution::Parallel,
    );
    (r, start.elapsed())
}

fn ac1(r: &VerificationReport, took: Duration) -> Check {
    let expected = [-6.25, -2.25, -0.25];
    let mut worst = 0.0f64;
    let mut ok = r.metadata.grid.n_points() == 4001 && r.metadata.refined_grid.map(|g| g.n_points()) == Some(8001);
    for (n, &e) in expected.iter().enumerate() {
        let row = &r.per_level[n];
        let pole = row.e_pole_condition.unwrap_or(c(f64::NAN));
        ok &= (pole - c(e)).norm() < 1e-12;
        match row.abs_gap_pole_vs_oracle {
            Some(g) => {
                worst = worst.max(g);
                ok &= g <= 1e-6;
            }
            None => ok = false,
        }
    }
    ok &= took < Duration::from_secs(30);
    Check {
        id: "AC-1",
        pass: ok,
        detail: format!("max |E_pole - E_oracle| = {worst:.2e} over 3 levels, {:.2?}", took),
    }
}

fn ac2(r: &VerificationReport) -> Check {
    let pole: Vec<f64> = r.per_level[..3].iter().map(|l| l.residual_pole.unwrap_or(f64::INFINITY)).collect();
    let worst = pole.iter().cloned().fold(0.0, f64::max);
    let paper = r.per_level[0].residual_paper.unwrap_or(f64::NAN);
    let pinned = (paper - PAPER_RESIDUAL_N0).abs() <= 0.1 * PAPER_RESIDUAL_N0;
    Check {
        id: "AC-2",
        pass: worst < 1e-6 && pinned,
        detail: format!("pole residual max {worst:.2e}; paper-literal n=0 residual {paper:.4} (pinned {PAPER_RESIDUAL_N0} ± 10%)"),
    }
}

fn ac3(r: &VerificationReport) -> Check {
    let gaps: Vec<Option<f64>> = r.per_level.iter().take(3).map(|l| l.abs_gap_paper_vs_oracle).collect();
    let counts = &r.level_counts;
    let ok = gaps.iter().all(Option::is_some)
        && counts.paper_literal == 8
        && counts.oracle == Some(3)
        && counts.pole_condition == 3
        && r.summary.pole_rows_pass;
    let shown: Vec<String> = gaps.iter().map(|g| format!("{:.4}", g.unwrap_or(f64::NAN))).collect();
    Check {
        id: "AC-3",
        pass: ok,
        detail: format!(
            "paper-literal gaps [{}]; counts paper {} / pole {} / oracle {:?}; exit gate {}",
            shown.join(", "),
            counts.paper_literal,
            counts.pole_condition,
            counts.oracle,
            if r.summary.pole_rows_pass { "clear" } else { "tripped" }
        ),
    }
}

fn ac4() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut ok = true;
    for nu in [0.5, 1.0, 2.3] {
        let p = KernelParams::euclidean(c(1.0), c(1.0), c(nu), 1.0, 1.0, 1.0).unwrap();
        match (kernel_closed(&p), kernel_spectral(&p, 80)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).norm()),
            _ => ok = false,
        }
    }
    let took = start.elapsed();
    Check {
        id: "AC-4",
        pass: ok && worst < 1e-8 && took < Duration::from_secs(1),
        detail: format!("max |closed - spectral| = {worst:.2e} for nu in {{0.5, 1, 2.3}}, {took:.2?}"),
    }
}

fn ac5() -> Check {
    let start = Instant::now();
    // m = 0.25, alpha = 1, V1 = 0.5 gives M = 1, omega = 1; E = -0.5 gives nu = 1
    let spec = PotentialSpec::hermitian(0.5, 1.0, 1.0, 0.25).unwrap();
    let eff = to_effective_oscillator(&spec, FrequencyConvention::Rederived);
    let energy = c(-0.5);
    let osc = eff.at_energy(energy);
    let nu = osc.bessel_order();
    let exact = kernel_closed(&KernelParams::euclidean(eff.mass, eff.omega, nu, 1.0, 1.0, 1.0).unwrap()).unwrap();
    let grid = RadialGrid::for_level(eff.mass, eff.omega, 0, RADIAL_POINTS).unwrap();

    let slices = [32usize, 64, 128, 256];
    let errors: Vec<f64> = slices
        .iter()
        .map(|&n| (kernel_sliced(&osc, 1.0, 1.0, 1.0, n, &grid, Execution::Parallel).unwrap().value - exact).norm())
        .collect();
    // least-squares slope of log error against log slices
    let xs: Vec<f64> = slices.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    let order = -slope;

    let control = eff.at_energy_unsymmetrized(energy);
    let control_err = (kernel_sliced(&control, 1.0, 1.0, 1.0, 256, &grid, Execution::Parallel).unwrap().value - exact).norm();
    let took = start.elapsed();
    let shown: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
    Check {
        id: "AC-5",
        pass: (order - 2.0).abs() <= 0.3 && errors[3] < 1e-4 && control_err >= 1e-4 && took < Duration::from_secs(60),
        detail: format!(
            "errors [{}] at 32..256 slices, order {order:.3}; without -1/4 error {control_err:.2e} at 256; {took:.2?}",
            shown.join(", ")
        ),
    }
}

fn ac6() -> Check {
    let grid = RadialGrid::for_level(c(1.0), c(1.0), 0, RADIAL_POINTS).unwrap();
    let mut worst = 0.0f64;
    let mut ok = true;
    for nu in [0.5, 1.0, 2.3] {
        let p = KernelParams::euclidean(c(1.0), c(1.0), c(nu), 1.0, 1.0, 1.0).unwrap();
        for (t1, t2) in [(0.5, 0.5), (0.3, 0.7)] {
            match (compose_closed(&p, t1, t2, &grid), kernel_closed(&p)) {
                (Ok(a), Ok(b)) => worst = worst.max((a - b).norm()),
                _ => ok = false,
            }
        }
    }
    Check {
        id: "AC-6",
        pass: ok && worst < 1e-7,
        detail: format!("max composition error {worst:.2e} with {RADIAL_POINTS}-point quadrature"),
    }
}

fn ac7() -> Check {
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut table = Vec::new();
    for (t, x, y, a) in hille_hardy_lattice() {
        match hille_hardy_row(t, x, y, a, 60) {
            Ok(row) => {
                worst = worst.max(row.reference_residual);
                ok &= row.variant_deviation.is_finite();
                table.push(format!(
                    "      t={t} x={x} y={y} a={a}: residual {:.1e}, variant-form deviation {:.4e}",
                    row.reference_residual, row.variant_deviation
                ));
            }
            Err(_) => ok = false,
        }
    }
    Check {
        id: "AC-7",
        pass: ok && table.len() == 12 && worst < 1e-12,
        detail: format!("max identity residual {worst:.2e} on 12 points\n{}", table.join("\n")),
    }
}

fn ac8(rng: &mut StdRng) -> Check {
    let probe = symmetric_probe(5.0, 201);
    let mut pt_true = 0;
    let mut herm_false = 0;
    let mut a_false = 0;
    for _ in 0..100 {
        let spec = PotentialSpec::pt_symmetric(
            rng.gen_range(0.1..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.1..3.0),
        )
        .unwrap();
        pt_true += check_pt_symmetry(&spec, &probe).unwrap().is_pt as usize;
    }
    for _ in 0..100 {
        let spec = PotentialSpec::hermitian(
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.1..3.0),
        )
        .unwrap();
        herm_false += !check_pt_symmetry(&spec, &probe).unwrap().is_pt as usize;
    }
    for _ in 0..100 {
        let spec = PotentialSpec::non_pt_a(
            rng.gen_range(0.1..3.0),
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.0..4.0),
            rng.gen_range(0.1..3.0),
        )
        .unwrap();
        a_false += !check_pt_symmetry(&spec, &probe).unwrap().is_pt as usize;
    }
    Check {
        id: "AC-8",
        pass: pt_true == 100 && herm_false == 100 && a_false == 100,
        detail: format!("PT family {pt_true}/100 true; hermitian {herm_false}/100 false; non-pt-a {a_false}/100 false"),
    }
}

fn ac9(rng: &mut StdRng) -> Check {
    let draws: Vec<PotentialSpec> = (0..50)
        .map(|_| {
            PotentialSpec::non_pt_a(
                rng.gen_range(0.2..3.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.1..2.0),
            )
            .unwrap()
        })
        .collect();
    let literal = realness_ledger(&draws, Backend::PaperLiteral, FrequencyConvention::PaperLiteral, Execution::Parallel);
    let pole = realness_ledger(&draws, Backend::PoleCondition, FrequencyConvention::Rederived, Execution::Parallel);
    let recorded = |l: &morse_dk_core::analytic::RealnessLedger| {
        l.records.len() == 50 && l.records.iter().all(|r| r.energies.len() == usize::try_from(r.n_max + 1).unwrap_or(0))
    };
    let real_draws = |l: &morse_dk_core::analytic::RealnessLedger| {
        l.records
            .iter()
            .filter(|r| r.max_abs_im.is_some_and(|m| m < REALNESS_THRESHOLD))
            .count()
    };
    let worst_im = literal.records.iter().filter_map(|r| r.max_abs_im).fold(0.0, f64::max);
    Check {
        id: "AC-9",
        pass: recorded(&literal) && recorded(&pole),
        detail: format!(
            "50 draws; literal spectra: {} with levels, any real = {} ({} real), largest |Im E| {worst_im:.3}; \
             pole spectra: {} with levels, any real = {} ({} real)",
            literal.draws_with_levels,
            literal.any_real,
            real_draws(&literal),
            pole.draws_with_levels,
            pole.any_real,
            real_draws(&pole)
        ),
    }
}

fn ac10(rng: &mut StdRng) -> Check {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let mut expect = |name: &str, got: Complex, want: Complex, tol: f64| {
        if !((got - want).norm() <= tol) {
            failures.push(format!("{name}: {got} vs {want}"));
        }
    };
    let z = Complex::new;
    expect("lnG(1)", log_gamma(c(1.0)).unwrap(), c(0.0), 1e-14);
    expect("lnG(0.5)", log_gamma(c(0.5)).unwrap(), c(std::f64::consts::PI.sqrt().ln()), 1e-14);
    expect("lnG(4)", log_gamma(c(4.0)).unwrap(), c(6f64.ln()), 1e-14);
    expect("L_0", laguerre(0, z(0.3, 0.2), z(1.7, -0.4)), c(1.0), 1e-15);
    let (a, x) = (z(0.7, 0.1), z(2.3, 0.0));
    expect("L_1", laguerre(1, a, x), a + 1.0 - x, 1e-14);
    expect("L_2", laguerre(2, c(1.0), c(2.0)), c(-1.0), 1e-14);
    expect("I_0(0)", bessel_i(c(0.0), c(0.0)).unwrap(), c(1.0), 1e-15);
    expect("I_1(0)", bessel_i(c(1.0), c(0.0)).unwrap(), c(0.0), 1e-15);
    let half = (2.0 / std::f64::consts::PI).sqrt() * 1f64.sinh();
    expect("I_0.5(1)", bessel_i(c(0.5), c(1.0)).unwrap(), c(half), 1e-12);
    let hh0 = hille_hardy_pair(c(0.3), 0.0, 0.0, c(0.5), 20).unwrap();
    expect("HH(x=y=0) closed", hh0.closed, c(0.0), 1e-15);
    expect("HH(x=y=0) series", hh0.series, c(0.0), 1e-15);
    let hh = hille_hardy_pair(c(0.3), 0.7, 1.1, c(0.5), 60).unwrap();
    expect("HH residual", c(hh.residual()), c(0.0), 1e-12);
    if !matches!(log_gamma(c(-2.0)), Err(SpecFunError::Pole(_))) {
        failures.push("lnG(-2) is not a pole error".to_owned());
    }

    for _ in 0..50 {
        let w = z(rng.gen_range(0.1..10.0), rng.gen_range(-5.0..5.0));
        let lhs = log_gamma(w + 1.0).unwrap().exp();
        let rhs = w * log_gamma(w).unwrap().exp();
        if (lhs - rhs).norm() > 1e-12 * rhs.norm() {
            failures.push(format!("lnG recurrence at {w}"));
        }
    }
    for n in 1..=10 {
        for a in [c(0.0), c(0.5), z(1.0, 0.3)] {
            for k in 0..=20 {
                let x = 0.1 + 9.9 * k as f64 / 20.0;
                let h = 1e-5;
                let fd = (laguerre(n, a, c(x + h)) - laguerre(n, a, c(x - h))) / (2.0 * h);
                let exact = -laguerre(n - 1, a + 1.0, c(x));
                if (fd - exact).norm() > 1e-6 * exact.norm().max(1.0) {
                    failures.push(format!("Laguerre derivative n={n} a={a} x={x}"));
                }
            }
        }
    }
    for nu in [c(0.5), c(1.0), z(2.0, 1.0)] {
        for x in [0.5, 1.0, 4.0] {
            let lhs = bessel_i(nu - 1.0, c(x)).unwrap() - bessel_i(nu + 1.0, c(x)).unwrap();
            let rhs = nu * 2.0 / x * bessel_i(nu, c(x)).unwrap();
            if (lhs - rhs).norm() > 1e-10 * rhs.norm() {
                failures.push(format!("Bessel recurrence nu={nu} z={x}"));
            }
        }
    }
    let mut prev = f64::INFINITY;
    for n in [10, 20, 40, 80] {
        let r = hille_hardy_pair(c(0.5), 0.7, 1.1, c(0.5), n).unwrap().residual();
        if r > prev && r > 1e-14 {
            failures.push(format!("Hille-Hardy residual grew at n={n}"));
        }
        prev = r;
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(1) {
        failures.push(format!("took {took:.2?}"));
    }
    Check {
        id: "AC-10",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("examples, recurrences and truncation monotonicity hold, {took:.2?}")
        } else {
            failures.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let mut rng = StdRng::seed_from_u64(SEED);
    let (report, took) = lambda3_report();
    let checks = [
        ac1(&report, took),
        ac2(&report),
        ac3(&report),
        ac4(),
        ac5(),
        ac6(),
        ac7(),
        ac8(&mut rng),
        ac9(&mut rng),
        ac10(&mut rng),
    ];
    let mut failed = 0;
    for ch in &checks {
        println!("{} {}: {}", ch.id, if ch.pass { "PASS" } else { "FAIL" }, ch.detail);
        failed += !ch.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
