/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by
/// Newton iteration from the Chebyshev-based initial guess; weights
/// are `2 / ((1 - x^2) P_n'(x)^2)`. Exact for polynomials of degree
/// `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // recurrence for P_n(x) and P_{n-1}(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with an `n`-point Gauss-Legendre rule.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in xs.iter().zip(&ws) {
        sum += w * f(mid + half * x);
    }
    sum * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 3, 5, 8, 16, 32, 64] {
            let (_, ws) = gauss_legendre(n);
            let s: f64 = ws.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: sum {s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        // degree 2n-1 exactness: integrate x^7 over [0,1] with n=4
        let v = integrate(|x| x.powi(7), 0.0, 1.0, 4);
        assert!((v - 0.125).abs() < 1e-14);
    }

    #[test]
    fn sine_integral() {
        let v = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 24);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_against_erf_series() {
        // integral of exp(-x^2) over [0, 1] = 0.7468241328124270
        let v = integrate(|x| (-x * x).exp(), 0.0, 1.0, 32);
        assert!((v - 0.746_824_132_812_427).abs() < 1e-13);
    }
}
