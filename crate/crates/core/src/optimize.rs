//! Scalar optimization over the rotation angle: locates the angle
//! giving the strongest certified weight level and the angle giving
//! the largest switch offset still supporting the construction.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{derive_frame, StripGeometry};
use crate::numerics::golden::golden_min;
use crate::transcendental::{implicit_h, lambda_v0};

/// Upper end of the admissible angle range; the rotated well height
/// vanishes there.
pub const THETA_MAX: f64 = std::f64::consts::FRAC_PI_3;

/// Outcome of an angle optimization.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ThetaScanResult {
    pub theta_star: f64,
    pub objective_star: f64,
    /// Coarse scan samples (theta, objective), ascending in theta.
    pub curve: Vec<(f64, f64)>,
    /// Objective evaluations made during the refinement, in order.
    pub refinement: Vec<(f64, f64)>,
}

/// Maximizes a bounded objective over the open angle range (0, pi/3)
/// by a uniform coarse scan (evaluated in parallel) followed by
/// golden-section refinement of the best bracket. The scan guards
/// against secondary local maxima; unimodality is not assumed.
pub fn maximize_over_theta<F>(
    objective: F,
    tol: f64,
    scan_points: usize,
) -> Result<ThetaScanResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if scan_points < 8 {
        return Err(Error::InvalidParameter(format!(
            "coarse scan needs at least 8 points, got {scan_points}"
        )));
    }
    let n = scan_points;
    // interior grid: both endpoints are degenerate frames
    let theta_at = |i: usize| THETA_MAX * (i + 1) as f64 / (n + 1) as f64;
    let curve: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let th = theta_at(i);
            (th, objective(th))
        })
        .collect();
    let best = curve
        .iter()
        .enumerate()
        .max_by(|p, q| p.1 .1.partial_cmp(&q.1 .1).expect("objective is finite"))
        .map(|(i, _)| i)
        .expect("scan is nonempty");
    let lo = theta_at(best.saturating_sub(1));
    let hi = theta_at((best + 1).min(n - 1));
    let mut refinement = Vec::new();
    let (theta_star, neg_obj) = if hi > lo {
        golden_min(
            |th| {
                let v = objective(th);
                refinement.push((th, v));
                -v
            },
            lo,
            hi,
            tol,
            200,
        )?
    } else {
        (lo, -objective(lo))
    };
    Ok(ThetaScanResult {
        theta_star,
        objective_star: -neg_obj,
        curve,
        refinement,
    })
}

/// Weight-level objective: the lowest matching-equation root at the
/// window edge, in units of the threshold. Angles where the equation
/// has no root score zero.
pub fn hardy_objective(geom: &StripGeometry, theta: f64) -> f64 {
    let frame = match derive_frame(*geom, theta) {
        Ok(f) => f,
        Err(_) => return 0.0,
    };
    match lambda_v0(&frame, 1e-13) {
        Ok(r) => r.value / geom.threshold(),
        Err(_) => 0.0,
    }
}

/// Critical-offset objective: the switch offset (in units of a) at
/// which the lowest matching-equation root reaches zero, for the given
/// angle. Zero when already no positive-energy root at zero offset.
pub fn eps_objective(a: f64, theta: f64) -> f64 {
    let h_at = |e: f64| -> Option<f64> {
        let geom = StripGeometry::new(a, e).ok()?;
        let frame = derive_frame(geom, theta).ok()?;
        Some(implicit_h(0.0, &frame))
    };
    let Some(h0) = h_at(0.0) else { return 0.0 };
    if h0 <= 0.0 {
        return 0.0;
    }
    // The regularized matching value at zero energy decreases strictly
    // in the offset and is negative at the degenerate end, so the
    // crossing is unique; plain bisection is robust against the None
    // guard at the very end of the range.
    let (mut lo, mut hi) = (0.0, a * theta.tan() * (1.0 - 1e-12));
    for _ in 0..200 {
        if hi - lo <= 1e-13 * a {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match h_at(mid) {
            Some(v) if v > 0.0 => lo = mid,
            _ => hi = mid,
        }
    }
    0.5 * (lo + hi) / a
}

/// Finds the angle maximizing the certified weight level for the
/// centered switch.
///
/// The objective is the window-edge root in threshold units; the
/// maximum sits near 0.774 radians with value near 0.0397, slightly
/// above the 0.0394 attained at the symmetric angle pi/4.
pub fn optimal_theta_hardy(geom: &StripGeometry, tol: f64) -> Result<ThetaScanResult> {
    if geom.eps != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "the weight-level objective is defined for a centered switch (eps={})",
            geom.eps
        )));
    }
    let g = *geom;
    maximize_over_theta(move |th| hardy_objective(&g, th), tol, 128)
}

/// Finds the angle maximizing the certified critical-offset bound.
///
/// The objective is the offset at which the window-edge root reaches
/// zero, in units of a; the maximum sits near 0.759 radians with value
/// near 0.0632, slightly above the 0.0614 attained at pi/4.
pub fn optimal_theta_eps(geom: &StripGeometry, tol: f64) -> Result<ThetaScanResult> {
    let a = geom.a;
    maximize_over_theta(move |th| eps_objective(a, th), tol, 128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transcendental::{solve_s1, solve_t1};

    #[test]
    fn weight_level_maximum_matches_reference() {
        let geom = StripGeometry::new(1.0, 0.0).unwrap();
        let r = optimal_theta_hardy(&geom, 1e-6).unwrap();
        assert!((r.theta_star - 0.774_136_088_632_358_8).abs() < 1e-3, "{}", r.theta_star);
        assert!(
            (r.objective_star - 0.039_711_390_184_464_7).abs() < 1e-6,
            "{}",
            r.objective_star
        );
        assert_eq!(r.curve.len(), 128);
        assert!(!r.refinement.is_empty());
        assert!(r.theta_star > 0.0 && r.theta_star < THETA_MAX);
        let scan_best = r.curve.iter().map(|p| p.1).fold(f64::MIN, f64::max);
        assert!(r.objective_star >= scan_best - 1e-9);
    }

    #[test]
    fn weight_level_at_symmetric_angle_is_s1() {
        let geom = StripGeometry::new(1.0, 0.0).unwrap();
        let v = hardy_objective(&geom, std::f64::consts::FRAC_PI_4);
        let s1 = solve_s1(1e-14).unwrap().value;
        assert!((v - s1).abs() < 1e-10, "{v} vs {s1}");
        let r = optimal_theta_hardy(&geom, 1e-6).unwrap();
        assert!(r.objective_star >= v);
        assert!(r.objective_star - v < 0.002);
    }

    #[test]
    fn weight_level_fades_at_range_end() {
        let geom = StripGeometry::new(1.0, 0.0).unwrap();
        let v = hardy_objective(&geom, THETA_MAX - 1e-3);
        assert!(v < 4e-3, "{v}");
        assert!(hardy_objective(&geom, THETA_MAX + 0.1) == 0.0);
    }

    #[test]
    fn offset_bound_maximum_matches_reference() {
        let geom = StripGeometry::new(1.0, 0.0).unwrap();
        let r = optimal_theta_eps(&geom, 1e-6).unwrap();
        assert!((r.theta_star - 0.759_390_879_537_884_2).abs() < 1e-3, "{}", r.theta_star);
        assert!(
            (r.objective_star - 0.063_208_955_108_647).abs() < 1e-6,
            "{}",
            r.objective_star
        );
    }

    #[test]
    fn offset_bound_at_symmetric_angle_matches_independent_solver() {
        let t1 = solve_t1(1e-14).unwrap().value;
        let v = eps_objective(1.0, std::f64::consts::FRAC_PI_4);
        assert!((v - t1).abs() < 1e-9, "{v} vs {t1}");
        // scale invariance in units of a
        let v2 = eps_objective(2.0, std::f64::consts::FRAC_PI_4);
        assert!((v2 - v).abs() < 1e-9);
    }

    #[test]
    fn offset_bound_vanishes_at_small_angles() {
        assert!(eps_objective(1.0, 0.1) < 0.01);
        assert!(eps_objective(1.0, 0.02) < 2e-3);
    }

    #[test]
    fn scan_curves_have_no_jumps() {
        let geom = StripGeometry::new(1.0, 0.0).unwrap();
        let h = optimal_theta_hardy(&geom, 1e-4).unwrap();
        let e = optimal_theta_eps(&geom, 1e-4).unwrap();
        // every jump must be explained by the slope in its own
        // neighborhood; an isolated discontinuity is not
        for curve in [&h.curve, &e.curve] {
            let diffs: Vec<f64> = curve.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
            for i in 1..diffs.len() - 1 {
                let local = diffs[i - 1].max(diffs[i + 1]);
                assert!(
                    diffs[i] <= 10.0 * local + 1e-5,
                    "jump {:.3e} at theta {:.4} with neighbors {:.3e}",
                    diffs[i],
                    curve[i].0,
                    local
                );
            }
        }
    }

    #[test]
    fn refinement_is_stable_under_scan_doubling() {
        let geom = StripGeometry::new(1.0, 0.0).unwrap();
        let g = geom;
        let tol = 1e-4;
        let r128 = maximize_over_theta(|th| hardy_objective(&g, th), tol, 128).unwrap();
        let r256 = maximize_over_theta(|th| hardy_objective(&g, th), tol, 256).unwrap();
        assert!((r128.theta_star - r256.theta_star).abs() <= 2.0 * tol);
    }

    #[test]
    fn rejects_off_center_switch_for_weight_objective() {
        let geom = StripGeometry::new(1.0, 0.1).unwrap();
        assert!(optimal_theta_hardy(&geom, 1e-4).is_err());
    }
}
