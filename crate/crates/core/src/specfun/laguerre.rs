use super::Complex;

/// Associated Laguerre polynomial `L_n^{(a)}(x)` by the three-term
/// recurrence in degree.
pub fn laguerre(n: usize, a: Complex, x: Complex) -> Complex {
    let mut prev = Complex::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = a + 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((a + (2.0 * kf + 1.0) - x) * cur - (a + kf) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_0^{(a)}(x), ..., L_{len-1}^{(a)}(x)` in one pass.
pub fn laguerre_sequence(len: usize, a: Complex, x: Complex) -> Vec<Complex> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(Complex::new(1.0, 0.0));
    if len == 1 {
        return out;
    }
    out.push(a + 1.0 - x);
    for k in 1..len - 1 {
        let kf = k as f64;
        let next = ((a + (2.0 * kf + 1.0) - x) * out[k] - (a + kf) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}
