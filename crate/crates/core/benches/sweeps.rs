use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use morse_dk_core::analytic::{realness_ledger, Backend};
use morse_dk_core::exec::Execution;
use morse_dk_core::model::{FrequencyConvention, PotentialSpec, RadialOscillator};
use morse_dk_core::propagator::{kernel_sliced, kernel_sweep, KernelMethod, KernelParams, RadialGrid, SweepSettings};
use morse_dk_core::Complex;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn sliced(c: &mut Criterion) {
    let one = Complex::new(1.0, 0.0);
    let osc = RadialOscillator::from_bessel_order(one, one, one);
    let grid = RadialGrid::for_level(one, one, 0, 1000).unwrap();
    let mut group = c.benchmark_group("kernel_sliced");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "64 slices"), |b| {
            b.iter(|| kernel_sliced(&osc, 1.0, 1.0, 1.0, 64, &grid, exec).unwrap())
        });
    }
    group.finish();
}

fn tau_sweep(c: &mut Criterion) {
    let one = Complex::new(1.0, 0.0);
    let p = KernelParams::euclidean(one, one, one, 1.0, 1.0, 1.0).unwrap();
    let taus: Vec<f64> = (1..=16).map(|k| 0.25 * k as f64).collect();
    let settings = SweepSettings {
        n_trunc: 80,
        n_slices: 16,
        radial_points: 300,
    };
    let methods = [KernelMethod::Closed, KernelMethod::Spectral, KernelMethod::Sliced];
    let mut group = c.benchmark_group("kernel_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| kernel_sweep(&p, &taus, &methods, settings, exec).unwrap()));
    }
    group.finish();
}

fn ledger(c: &mut Criterion) {
    let draws: Vec<PotentialSpec> = (0..2000)
        .map(|k| {
            let t = k as f64 * 0.001;
            PotentialSpec::non_pt_a(0.5 + t, 0.3 - 0.2 * t, 1.0 + 2.0 * t, 0.5).unwrap()
        })
        .collect();
    let mut group = c.benchmark_group("realness_ledger");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| realness_ledger(&draws, Backend::PaperLiteral, FrequencyConvention::PaperLiteral, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, sliced, tau_sweep, ledger);
criterion_main!(benches);
