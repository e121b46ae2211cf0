//! Symmetric tridiagonal eigenvalues by Sturm bisection, and a pivoted
//! tridiagonal solve used for inverse iteration.

use crate::specfun::Complex;

const MAX_BISECTIONS: usize = 300;

/// Number of eigenvalues strictly below `x` for the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n, "off-diagonal must have n - 1 entries");
    let k = k.min(n);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let norm = lo.abs().max(hi.abs());
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * norm);
    let abs_tol = 2.0 * f64::EPSILON * norm;

    let mut out = Vec::with_capacity(k);
    let mut floor = lo;
    for j in 0..k {
        let (mut a, mut b) = (floor, hi);
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid, pivmin) > j {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= abs_tol.max(4.0 * f64::EPSILON * (a.abs() + b.abs())) {
                break;
            }
        }
        let value = 0.5 * (a + b);
        out.push(value);
        floor = a;
    }
    out
}

/// Solves a general tridiagonal system in place with partial pivoting.
///
/// `sub[i]` is `A[i+1][i]`, `sup[i]` is `A[i][i+1]`. Exactly zero pivots are
/// replaced by `tiny`, which is what inverse iteration wants.
pub fn solve_tridiagonal(sub: &[Complex], diag: &[Complex], sup: &[Complex], rhs: &mut [Complex], tiny: f64) {
    let n = diag.len();
    assert!(sub.len() + 1 == n && sup.len() + 1 == n && rhs.len() == n);
    let mut dl = sub.to_vec();
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let guard = |z: Complex| if z.norm() == 0.0 { Complex::new(tiny, 0.0) } else { z };
    let zero = Complex::new(0.0, 0.0);

    for i in 0..n.saturating_sub(1) {
        let last = i + 2 == n;
        if d[i].norm() >= dl[i].norm() {
            d[i] = guard(d[i]);
            let mult = dl[i] / d[i];
            d[i + 1] -= mult * du[i];
            rhs[i + 1] -= mult * rhs[i];
            // dl[i] now holds U[i][i+2]
            dl[i] = zero;
        } else {
            let mult = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - mult * temp;
            if !last {
                dl[i] = du[i + 1];
                du[i + 1] = -mult * dl[i];
            } else {
                dl[i] = zero;
            }
            du[i] = temp;
            let t = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = t - mult * rhs[i + 1];
        }
    }
    d[n - 1] = guard(d[n - 1]);
    rhs[n - 1] /= d[n - 1];
    if n > 1 {
        rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - dl[i] * rhs[i + 2]) / d[i];
    }
}

/// Eigenvector of the tridiagonal matrix `(off, diag, off)` for an
/// eigenvalue estimate `lambda`, by a few steps of inverse iteration.
/// Returned with unit 2-norm.
pub fn inverse_iteration(diag: &[Complex], off: &[f64], lambda: Complex, steps: usize) -> Vec<Complex> {
    let n = diag.len();
    let shifted: Vec<Complex> = diag.iter().map(|d| d - lambda).collect();
    let offc: Vec<Complex> = off.iter().map(|&e| Complex::new(e, 0.0)).collect();
    let scale = diag.iter().map(|d| d.norm()).fold(0.0, f64::max) + 2.0 * off.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let tiny = f64::EPSILON * scale.max(1.0);
    // deterministic start with no symmetry that could hide a component
    let mut v: Vec<Complex> = (0..n)
        .map(|i| Complex::new(1.0 + 0.1 * ((i * 7919) % 13) as f64, 0.0))
        .collect();
    for _ in 0..steps.max(1) {
        solve_tridiagonal(&offc, &shifted, &offc, &mut v, tiny);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
    }
    v
}
