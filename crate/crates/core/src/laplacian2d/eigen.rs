//! Smallest eigenvalue of the discrete operator by shift-and-invert
//! Lanczos with full reorthogonalization.
//!
//! Each inner application of (A - sigma I)^{-1} is a direct banded
//! Cholesky solve; the narrow band of the column-major unknown
//! ordering makes the factorization affordable even on the finest
//! ladder meshes. A first pass runs from a safe shift below the whole
//! spectrum; if it has not converged it re-shifts just below the
//! current Ritz estimate, where the spectral transform separates the
//! target from the near-threshold cluster, and refactors once more.

use crate::error::{Error, Result};
use crate::numerics::tridiag::SymTridiag;

use super::operator::{DiscreteOperator2D, Grid2D};

/// Solver knobs. Tolerances are relative to the threshold energy
/// (pi/4a)^2 so that runs at different strip scales make identical
/// iteration decisions.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EigenConfig {
    /// Eigenvalue error target relative to (pi/4a)^2.
    pub value_rel_tol: f64,
    /// Lanczos steps allowed per factorization.
    pub max_steps: usize,
    /// Factorization phases allowed (initial shift plus re-shifts).
    pub max_phases: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            value_rel_tol: 1e-12,
            max_steps: 60,
            max_phases: 3,
        }
    }
}

/// Converged smallest-eigenvalue result.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EigenResult2D {
    pub value: f64,
    /// ||(A - value) x|| for the returned unit eigenvector.
    pub residual: f64,
    /// Total Lanczos steps across all phases.
    pub iterations: usize,
    pub n_unknowns: usize,
    pub grid: Grid2D,
}

/// Lower-band Cholesky factor, data[p*(bw+1) + d] = L[p][p-d].
struct BandChol {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

fn band_cholesky(n: usize, bw: usize, mut data: Vec<f64>) -> Option<BandChol> {
    let w = bw + 1;
    for p in 0..n {
        let lo = p.saturating_sub(bw);
        for q in lo..p {
            let mut s = data[p * w + (p - q)];
            let dp0 = p * w + (p - lo);
            let dq0 = q * w + (q - lo);
            for t in 0..(q - lo) {
                s -= data[dp0 - t] * data[dq0 - t];
            }
            data[p * w + (p - q)] = s / data[q * w];
        }
        let mut d = data[p * w];
        for t in 1..=(p - lo) {
            let v = data[p * w + t];
            d -= v * v;
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        data[p * w] = d.sqrt();
    }
    Some(BandChol { n, bw, data })
}

impl BandChol {
    /// x = (L L^T)^{-1} b.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let w = self.bw + 1;
        let mut y = vec![0.0; self.n];
        for p in 0..self.n {
            let lo = p.saturating_sub(self.bw);
            let mut s = b[p];
            for d in 1..=(p - lo) {
                s -= self.data[p * w + d] * y[p - d];
            }
            y[p] = s / self.data[p * w];
        }
        // Back substitution row-wise: once x[p] is known, eliminate its
        // contribution from all earlier rows, keeping memory access
        // contiguous along the stored band rows.
        for p in (0..self.n).rev() {
            let lo = p.saturating_sub(self.bw);
            let xp = y[p] / self.data[p * w];
            y[p] = xp;
            for d in 1..=(p - lo) {
                y[p - d] -= self.data[p * w + d] * xp;
            }
        }
        y
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// k-th eigenvalue from the top of a symmetric tridiagonal matrix
/// (k = 0 is the largest), by Sturm-count bisection.
fn tridiag_from_top(tri: &SymTridiag, k: usize, rel_tol: f64) -> f64 {
    let n = tri.n();
    let target = n - 1 - k;
    let (mut lo, mut hi) = gershgorin_tri(tri);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tri.count_below(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= rel_tol * scale {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn gershgorin_tri(tri: &SymTridiag) -> (f64, f64) {
    let n = tri.n();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += tri.off[i - 1].abs();
        }
        if i + 1 < n {
            r += tri.off[i].abs();
        }
        lo = lo.min(tri.diag[i] - r);
        hi = hi.max(tri.diag[i] + r);
    }
    (lo, hi)
}

struct LanczosOutcome {
    /// Largest Ritz value of the inverted operator and its error bound.
    theta: f64,
    theta_next: Option<f64>,
    /// Eigenvalue error bound transported back to A units.
    value_err: f64,
    steps: usize,
    converged: bool,
    /// Ritz vector in the original space, unit norm.
    vector: Vec<f64>,
}

fn lanczos_largest(
    chol: &BandChol,
    n: usize,
    tol_value_abs: f64,
    sigma: f64,
    max_steps: usize,
) -> LanczosOutcome {
    let mut v0: Vec<f64> = (0..n)
        .map(|p| 1.0 + 0.5 * (0.7391 * (p as f64 + 1.0)).sin())
        .collect();
    let nv = norm(&v0);
    for v in v0.iter_mut() {
        *v /= nv;
    }
    let mut vs: Vec<Vec<f64>> = vec![v0];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut best = (0.0f64, None::<f64>, f64::INFINITY, Vec::<f64>::new());
    let mut steps = 0usize;
    let mut converged = false;

    for k in 0..max_steps {
        steps = k + 1;
        let mut w = chol.solve(&vs[k]);
        let alpha = dot(&w, &vs[k]);
        axpy(&mut w, -alpha, &vs[k]);
        if k > 0 {
            let b = betas[k - 1];
            axpy(&mut w, -b, &vs[k - 1]);
        }
        // Full reorthogonalization, two sweeps.
        for _ in 0..2 {
            for v in &vs {
                let c = dot(&w, v);
                if c != 0.0 {
                    axpy(&mut w, -c, v);
                }
            }
        }
        alphas.push(alpha);
        let beta = norm(&w);

        let tri = SymTridiag::new(alphas.clone(), betas.clone());
        let theta = {
            // largest eigenvalue of tri, polished by the negated
            // smallest-eigenvalue routine
            let neg = SymTridiag::new(
                tri.diag.iter().map(|d| -d).collect(),
                tri.off.clone(),
            );
            -neg.smallest_eigenvalue(1e-15)
        };
        let theta_next = if tri.n() >= 2 {
            Some(tridiag_from_top(&tri, 1, 1e-10))
        } else {
            None
        };
        let (z, _zres) = tri
            .eigenvector(theta, 3)
            .unwrap_or_else(|_| (vec![1.0; tri.n()], 0.0));
        let rb = beta * z[z.len() - 1].abs();
        // |dlambda| = |dtheta| / theta^2 under lambda = sigma + 1/theta
        let value_err = if theta > 0.0 {
            rb / (theta * theta)
        } else {
            f64::INFINITY
        };

        if value_err < best.2 {
            let mut x = vec![0.0; n];
            for (zi, v) in z.iter().zip(vs.iter()) {
                axpy(&mut x, *zi, v);
            }
            let nx = norm(&x);
            if nx > 0.0 {
                for xi in x.iter_mut() {
                    *xi /= nx;
                }
            }
            best = (theta, theta_next, value_err, x);
        }

        if value_err <= tol_value_abs {
            converged = true;
            break;
        }
        // Exact invariant subspace: nothing further to extract.
        if !(beta > 1e-14 * theta.abs().max(alpha.abs())) {
            break;
        }
        let mut vnext = w;
        for v in vnext.iter_mut() {
            *v /= beta;
        }
        betas.push(beta);
        vs.push(vnext);
    }
    let _ = sigma;
    LanczosOutcome {
        theta: best.0,
        theta_next: best.1,
        value_err: best.2,
        steps,
        converged,
        vector: best.3,
    }
}

/// Smallest eigenvalue of A + diag(extra), where A is the assembled
/// operator. Returns the eigenvalue, the true residual of the returned
/// eigenvector, and the iteration count.
pub fn smallest_eigenpair(
    op: &DiscreteOperator2D,
    extra_diag: Option<&[f64]>,
    cfg: &EigenConfig,
) -> Result<(EigenResult2D, Vec<f64>)> {
    if op.n == 0 {
        return Err(Error::InvalidParameter(
            "operator has no unknowns".into(),
        ));
    }
    let a = op.grid.a;
    let unit = {
        let k = std::f64::consts::PI / (4.0 * a);
        k * k
    };
    let tol_abs = cfg.value_rel_tol * unit;
    // The assembled Laplacian part is positive semi-definite, so the
    // whole spectrum of A + diag(extra) lies above min(extra).
    let extra_min = extra_diag
        .map(|e| e.iter().cloned().fold(f64::INFINITY, f64::min))
        .unwrap_or(0.0);
    let mut sigma = extra_min - 0.05 * unit;
    let mut total_steps = 0usize;
    let mut last: Option<(f64, f64, Vec<f64>)> = None; // value, err, vector

    for _phase in 0..cfg.max_phases {
        let mut factor = None;
        for _try in 0..8 {
            let (bw, band) = op.to_lower_band(extra_diag, sigma);
            match band_cholesky(op.n, bw, band) {
                Some(f) => {
                    factor = Some(f);
                    break;
                }
                // Shift not strictly below the spectrum; back off.
                None => sigma -= 0.1 * unit + (extra_min - sigma).abs(),
            }
        }
        let Some(chol) = factor else {
            return Err(Error::NoConvergence(
                "could not find a positive-definite shift".into(),
            ));
        };
        let out = lanczos_largest(&chol, op.n, tol_abs, sigma, cfg.max_steps);
        total_steps += out.steps;
        let value = sigma + 1.0 / out.theta;
        let keep = match &last {
            Some((_, err, _)) => out.value_err < *err,
            None => true,
        };
        if keep {
            last = Some((value, out.value_err, out.vector.clone()));
        }
        if out.converged {
            break;
        }
        // Re-shift just below the current estimate. The margin is a
        // multiple of the error bound so the new shift stays strictly
        // below the true eigenvalue, plus a fraction of the observed
        // gap so the spectral transform separates the cluster.
        let gap = out
            .theta_next
            .map(|t2| {
                let v2 = sigma + 1.0 / t2.max(f64::MIN_POSITIVE);
                (v2 - value).abs()
            })
            .unwrap_or(unit);
        let d = (8.0 * out.value_err)
            .max(0.25 * gap)
            .max(1e-8 * unit);
        sigma = value - d;
    }

    let (value, err, x) = last.expect("at least one phase ran");
    if err > 1e3 * tol_abs {
        return Err(Error::NoConvergence(format!(
            "eigenvalue error bound {err:.3e} above tolerance after all phases"
        )));
    }
    let mut r = vec![0.0; op.n];
    op.matvec(&x, extra_diag, &mut r);
    axpy(&mut r, -value, &x);
    let residual = norm(&r);
    Ok((
        EigenResult2D {
            value,
            residual,
            iterations: total_steps,
            n_unknowns: op.n,
            grid: op.grid.clone(),
        },
        x,
    ))
}

/// Smallest eigenvalue of A + diag(extra); see [`smallest_eigenpair`].
pub fn smallest_eigenvalue(
    op: &DiscreteOperator2D,
    extra_diag: Option<&[f64]>,
    cfg: &EigenConfig,
) -> Result<EigenResult2D> {
    smallest_eigenpair(op, extra_diag, cfg).map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BcKind, BcLayout, StripGeometry};
    use crate::laplacian2d::operator::{assemble, Grid2D, Truncation};

    const T: f64 = 0.616_850_275_068_084_9; // (pi/4)^2

    fn solve_switched(a: f64, eps: f64, l: f64, ny: usize, trunc: Truncation) -> EigenResult2D {
        let geom = StripGeometry::new(a, eps).unwrap();
        let grid = Grid2D::switched(&geom, l, ny, trunc).unwrap();
        let op = assemble(grid);
        smallest_eigenvalue(&op, None, &EigenConfig::default()).unwrap()
    }

    #[test]
    fn band_cholesky_solves_small_system() {
        // 3x3 tridiagonal [2,-1;-1,2,-1;-1,2], bandwidth 1
        let data = vec![2.0, 0.0, 2.0, -1.0, 2.0, -1.0];
        let chol = band_cholesky(3, 1, data).unwrap();
        let x = chol.solve(&[1.0, 0.0, 0.0]);
        // exact inverse first column: [3/4, 1/2, 1/4]
        assert!((x[0] - 0.75).abs() < 1e-14);
        assert!((x[1] - 0.5).abs() < 1e-14);
        assert!((x[2] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn band_cholesky_rejects_indefinite() {
        let data = vec![1.0, 0.0, -2.0, 0.0];
        assert!(band_cholesky(2, 1, data).is_none());
    }

    #[test]
    fn all_neumann_box_has_zero_mode() {
        let grid = Grid2D::new(
            1.0,
            BcLayout::Uniform {
                top: BcKind::Neumann,
                bottom: BcKind::Neumann,
            },
            8.0,
            8,
            Truncation::Neumann,
        )
        .unwrap();
        let op = assemble(grid);
        let r = smallest_eigenvalue(&op, None, &EigenConfig::default()).unwrap();
        assert!(r.value.abs() < 1e-10, "zero mode, got {}", r.value);
    }

    #[test]
    fn matches_reference_values_on_switched_grids() {
        // Reference eigenvalues computed independently with a sparse
        // shift-invert Lanczos at machine tolerance on the identical
        // discretization.
        let cases = [
            (0.5, 32, Truncation::Neumann, 0.619_936_952_901_849_4),
            (0.5, 32, Truncation::Dirichlet, 0.640_568_518_124_825_3),
            (0.0, 32, Truncation::Dirichlet, 0.673_247_586_904_511_4),
            (-0.3, 32, Truncation::Neumann, 0.632_658_767_927_556_7),
        ];
        for (eps, ny, trunc, want) in cases {
            let r = solve_switched(1.0, eps, 12.0, ny, trunc);
            assert!(
                (r.value - want).abs() < 5e-9,
                "eps={eps} ny={ny} {trunc:?}: got {}, want {want}",
                r.value
            );
            assert!(r.residual < 1e-6);
        }
    }

    #[test]
    fn uniform_mixed_wall_reference() {
        let grid = Grid2D::new(
            1.0,
            BcLayout::Uniform {
                top: BcKind::Dirichlet,
                bottom: BcKind::Neumann,
            },
            12.0,
            32,
            Truncation::Neumann,
        )
        .unwrap();
        let op = assemble(grid);
        let r = smallest_eigenvalue(&op, None, &EigenConfig::default()).unwrap();
        assert!((r.value - 0.616_726_422_951_696_7).abs() < 5e-9);
        // discrete transverse mode sits just below the continuum
        // threshold at this mesh
        assert!(r.value < T);
    }

    #[test]
    fn wide_switch_beats_threshold_on_fine_mesh() {
        // A bound state exists for eps well above the critical value;
        // it is already visible below the threshold at moderate mesh.
        let r = solve_switched(1.0, 0.7, 12.0, 64, Truncation::Neumann);
        assert!((r.value - 0.597_125_907_123_510_7).abs() < 1e-8);
        assert!(r.value < T);
        // Dirichlet truncation stays above the Neumann value.
        let d = solve_switched(1.0, 0.7, 12.0, 64, Truncation::Dirichlet);
        assert!((d.value - 0.603_376_115_684_733_5).abs() < 1e-8);
        assert!(d.value > r.value);
    }

    #[test]
    fn constant_diagonal_shifts_eigenvalue_exactly() {
        let geom = StripGeometry::new(1.0, 0.4).unwrap();
        let grid = Grid2D::switched(&geom, 8.0, 16, Truncation::Neumann).unwrap();
        let op = assemble(grid);
        let base = smallest_eigenvalue(&op, None, &EigenConfig::default()).unwrap();
        let shift = vec![0.7; op.n];
        let shifted =
            smallest_eigenvalue(&op, Some(&shift), &EigenConfig::default()).unwrap();
        assert!((shifted.value - base.value - 0.7).abs() < 1e-10);
    }

    #[test]
    fn scaled_problem_gives_exactly_quartered_value() {
        let v1 = solve_switched(1.0, 0.6, 12.0, 32, Truncation::Neumann);
        let v2 = solve_switched(2.0, 1.2, 24.0, 32, Truncation::Neumann);
        let rel = (v1.value - 4.0 * v2.value).abs() / v1.value;
        assert!(rel < 1e-12, "scaling mismatch: {} vs {}", v1.value, v2.value);
    }

    #[test]
    fn ground_vector_is_reflection_symmetric() {
        let geom = StripGeometry::new(1.0, 0.5).unwrap();
        let grid = Grid2D::switched(&geom, 8.0, 16, Truncation::Neumann).unwrap();
        let op = assemble(grid);
        let (r, v) = smallest_eigenpair(&op, None, &EigenConfig::default()).unwrap();
        let (nx, ny) = (r.grid.nx, r.grid.ny);
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut worst = 0.0f64;
        for p in 0..op.n {
            let (i, j) = op.node_of(p);
            if let Some(q) = op.index_of(nx - i, ny - j) {
                worst = worst.max((v[p] - v[q]).abs());
            }
        }
        // the point-symmetric partner must carry the same amplitude
        assert!(worst < 1e-6 * vmax, "asymmetry {worst:.2e}");
    }
}
