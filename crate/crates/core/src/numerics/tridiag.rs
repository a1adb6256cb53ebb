use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored by diagonals.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// Subdiagonal, length `diag.len() - 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        Self { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * v[i + 1];
            }
            out[i] = s;
        }
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.n();
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(1.0_f64, |m, &v| m.max(v.abs()));
        let tiny = f64::MIN_POSITIVE.max(1e-300) * scale.max(1.0);
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d == 0.0 {
            d = tiny;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..n {
            d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / d;
            if d == 0.0 {
                d = tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Smallest eigenvalue by Sturm-count bisection inside the
    /// Gershgorin interval, polished by a Rayleigh quotient from
    /// inverse iteration. The polish removes the bisection floor of
    /// `rel_tol * spectral scale`, which matters when the matrix norm
    /// is large but the eigenvalue is near zero.
    pub fn smallest_eigenvalue(&self, rel_tol: f64) -> f64 {
        if self.n() == 1 {
            return self.diag[0];
        }
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let tol = rel_tol * scale;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let estimate = 0.5 * (lo + hi);
        match self.eigenvector(estimate, 2) {
            Ok((v, _)) => {
                let mut av = vec![0.0; self.n()];
                self.matvec(&v, &mut av);
                let rq: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
                // the Sturm counts behind the bracket are themselves
                // only reliable to about n * eps * scale, so accept the
                // polish within that window around the bracket
                let w = 4.0 * (hi - lo) + 1e-9 * scale;
                if rq >= lo - w && rq <= hi + w {
                    rq
                } else {
                    estimate
                }
            }
            Err(_) => estimate,
        }
    }

    /// Solve `(A - shift I) x = b` in place by LDL^T elimination.
    /// Near-zero pivots are nudged to keep the sweep finite; inverse
    /// iteration tolerates this.
    fn shifted_solve(&self, shift: f64, b: &mut [f64]) {
        let n = self.n();
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(1.0_f64, |m, &v| m.max(v.abs()))
            .max(1.0);
        let eps_pivot = 1e-14 * scale;
        let mut d = vec![0.0; n];
        let mut l = vec![0.0; n.saturating_sub(1)];
        d[0] = self.diag[0] - shift;
        if d[0].abs() < eps_pivot {
            d[0] = if d[0] < 0.0 { -eps_pivot } else { eps_pivot };
        }
        for i in 1..n {
            l[i - 1] = self.off[i - 1] / d[i - 1];
            d[i] = self.diag[i] - shift - l[i - 1] * self.off[i - 1];
            if d[i].abs() < eps_pivot {
                d[i] = if d[i] < 0.0 { -eps_pivot } else { eps_pivot };
            }
        }
        for i in 1..n {
            b[i] -= l[i - 1] * b[i - 1];
        }
        for i in 0..n {
            b[i] /= d[i];
        }
        for i in (0..n - 1).rev() {
            b[i] -= l[i] * b[i + 1];
        }
    }

    /// Eigenvector for an eigenvalue approximation `lambda` by inverse
    /// iteration; returns the normalized vector and the residual
    /// `||A v - lambda v||_2`.
    pub fn eigenvector(&self, lambda: f64, iters: usize) -> Result<(Vec<f64>, f64)> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        // deterministic start with nonuniform entries to avoid hitting
        // an exactly orthogonal direction
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64 * 0.7391).sin()))
            .collect();
        normalize(&mut v);
        for _ in 0..iters.max(1) {
            self.shifted_solve(lambda, &mut v);
            normalize(&mut v);
        }
        let mut av = vec![0.0; n];
        self.matvec(&v, &mut av);
        let mut res = 0.0;
        for i in 0..n {
            let r = av[i] - lambda * v[i];
            res += r * r;
        }
        Ok((v, res.sqrt()))
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}
