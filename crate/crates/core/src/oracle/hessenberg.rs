//! Eigenvalues of a dense complex matrix: Householder reduction to upper
//! Hessenberg form followed by single-shift QR with Wilkinson shifts and
//! deflation.

#![allow(clippy::needless_range_loop)]

use super::OracleError;
use crate::specfun::Complex;

/// Iteration budget per unit of matrix dimension.
pub const QR_ITERATIONS_PER_DIM: usize = 30;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl DenseMatrix {
    pub fn from_rows(rows: &[Vec<Complex>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        DenseMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }

    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    fn is_hessenberg(&self) -> bool {
        (0..self.n).all(|i| (0..i.saturating_sub(1)).all(|j| self.at(i, j).norm() == 0.0))
    }

    /// Similarity transform to upper Hessenberg form in place.
    pub fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        if self.is_hessenberg() {
            return;
        }
        let mut v = vec![Complex::new(0.0, 0.0); n];
        for k in 0..n.saturating_sub(2) {
            let norm: f64 = (k + 1..n).map(|i| self.at(i, k).norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let x0 = self.at(k + 1, k);
            let phase = if x0.norm() == 0.0 { Complex::new(1.0, 0.0) } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            for i in 0..n {
                v[i] = Complex::new(0.0, 0.0);
            }
            v[k + 1] = x0 - alpha;
            for i in k + 2..n {
                v[i] = self.at(i, k);
            }
            let vnorm: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
            if vnorm == 0.0 {
                continue;
            }
            for i in k + 1..n {
                v[i] /= vnorm;
            }
            // A ← (I - 2vv*) A
            for j in k..n {
                let dot: Complex = (k + 1..n).map(|i| v[i].conj() * self.at(i, j)).sum();
                for i in k + 1..n {
                    *self.at_mut(i, j) -= v[i] * dot * 2.0;
                }
            }
            // A ← A (I - 2vv*)
            for i in 0..n {
                let dot: Complex = (k + 1..n).map(|j| self.at(i, j) * v[j]).sum();
                for j in k + 1..n {
                    *self.at_mut(i, j) -= dot * v[j].conj() * 2.0;
                }
            }
            for i in k + 2..n {
                *self.at_mut(i, k) = Complex::new(0.0, 0.0);
            }
        }
    }
}

fn givens(a: Complex, b: Complex) -> (f64, Complex) {
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex::new(0.0, 0.0));
    }
    let na = a.norm();
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let e1 = half_tr + disc;
    let e2 = half_tr - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// All eigenvalues of `matrix`, in deflation order.
pub fn eigenvalues(mut matrix: DenseMatrix) -> Result<Vec<Complex>, OracleError> {
    let n = matrix.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    matrix.reduce_to_hessenberg();
    let h = &mut matrix;
    let mut eig = vec![Complex::new(0.0, 0.0); n];
    let scale = h.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let budget = QR_ITERATIONS_PER_DIM * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h.at(0, 0);
            break;
        }
        // locate the active block [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = h.at(lo, lo - 1).norm();
            let diag = h.at(lo, lo).norm() + h.at(lo - 1, lo - 1).norm();
            let reference = if diag == 0.0 { scale } else { diag };
            if sub <= f64::EPSILON * reference {
                *h.at_mut(lo, lo - 1) = Complex::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h.at(hi, hi);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(OracleError::ConvergenceFailure { iterations: total });
        }
        let mu = if since_deflation % 11 == 10 {
            // exceptional shift breaks cycles
            h.at(hi, hi) + Complex::new(0.75 * h.at(hi, hi - 1).norm(), 0.0)
        } else {
            wilkinson_shift(h.at(hi - 1, hi - 1), h.at(hi - 1, hi), h.at(hi, hi - 1), h.at(hi, hi))
        };
        for i in lo..=hi {
            *h.at_mut(i, i) -= mu;
        }
        let mut rot = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h.at(k, k), h.at(k + 1, k));
            for j in k..=hi {
                let x = h.at(k, j);
                let y = h.at(k + 1, j);
                *h.at_mut(k, j) = x * c + s * y;
                *h.at_mut(k + 1, j) = -s.conj() * x + y * c;
            }
            rot.push((c, s));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rot[idx];
            for i in lo..=(k + 1).min(hi) {
                let x = h.at(i, k);
                let y = h.at(i, k + 1);
                *h.at_mut(i, k) = x * c + y * s.conj();
                *h.at_mut(i, k + 1) = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            *h.at_mut(i, i) += mu;
        }
    }
    Ok(eig)
}
