//! The strip, its boundary-condition layout, and the rotated
//! coordinate frame with the derived constants used by the reduced
//! one-dimensional problem.

use crate::error::{Error, Result};
use serde::Serialize;

/// The physical strip `R x (-a, a)` with the boundary-switch offset
/// `eps`. The lower wall is Dirichlet left of `-eps`, the upper wall
/// Dirichlet right of `eps`; both are Neumann elsewhere. `eps` may be
/// negative, which makes the Dirichlet rays overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripGeometry {
    pub a: f64,
    pub eps: f64,
}

impl StripGeometry {
    pub fn new(a: f64, eps: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !eps.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "strip half-width must be positive and finite (a={a}, eps={eps})"
            )));
        }
        Ok(StripGeometry { a, eps })
    }

    /// Spectral threshold `(pi / 4a)^2` of the two-sided mixed strip.
    pub fn threshold(&self) -> f64 {
        let k = std::f64::consts::PI / (4.0 * self.a);
        k * k
    }
}

/// Boundary condition kind on a wall point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// Wall selector for boundary-condition queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wall {
    /// y = -a
    Bottom,
    /// y = +a
    Top,
}

/// Boundary-condition layout along the two walls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BcLayout {
    /// Dirichlet on the bottom wall for x < -eps and on the top wall
    /// for x > eps; Neumann elsewhere.
    Switched { eps: f64 },
    /// The same condition along each entire wall, e.g. Dirichlet on
    /// top and Neumann on bottom for the non-switched comparison
    /// strip.
    Uniform { top: BcKind, bottom: BcKind },
}

impl BcLayout {
    /// Pointwise boundary condition. For the switched layout the rays
    /// are open, so the switch abscissa itself is Neumann; discrete
    /// grids apply their own tie rule at nodes (see the 2D operator).
    pub fn kind_at(&self, wall: Wall, x: f64) -> BcKind {
        match *self {
            BcLayout::Switched { eps } => match wall {
                Wall::Bottom => {
                    if x < -eps {
                        BcKind::Dirichlet
                    } else {
                        BcKind::Neumann
                    }
                }
                Wall::Top => {
                    if x > eps {
                        BcKind::Dirichlet
                    } else {
                        BcKind::Neumann
                    }
                }
            },
            BcLayout::Uniform { top, bottom } => match wall {
                Wall::Bottom => bottom,
                Wall::Top => top,
            },
        }
    }
}

/// Rotated coordinate frame at angle `theta` together with the
/// derived constants of the dimensional reduction.
///
/// The frame stores the geometry it was derived from; all lengths are
/// in the same units as `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatedFrame {
    pub geom: StripGeometry,
    pub theta: f64,
    /// Well height `(pi/4a)^2 (4 cos^2 theta - 1)`; positive for
    /// `theta` below pi/3.
    pub q_plus: f64,
    /// Flank depth `(pi/4a)^2 sin^2 theta`.
    pub q_minus: f64,
    /// Half-width of the well in `u`: `a sin theta - eps cos theta`.
    pub u0: f64,
    /// Half-width of the transverse window in `v`:
    /// `a cos theta + eps sin theta`.
    pub v0: f64,
}

/// Derive the frame constants at angle `theta`.
///
/// Requires `theta` in (0, pi/3) so the well height is positive, and
/// `eps < a tan theta` so the well half-width `u0` is positive (always
/// true for `eps <= 0`).
pub fn derive_frame(geom: StripGeometry, theta: f64) -> Result<RotatedFrame> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_3) {
        return Err(Error::InvalidParameter(format!(
            "rotation angle {theta} outside (0, pi/3)"
        )));
    }
    if geom.eps >= geom.a * theta.tan() {
        return Err(Error::InvalidParameter(format!(
            "switch offset {} >= a tan(theta) = {}; the rotated well degenerates",
            geom.eps,
            geom.a * theta.tan()
        )));
    }
    let t = geom.threshold();
    let (s, c) = theta.sin_cos();
    Ok(RotatedFrame {
        geom,
        theta,
        q_plus: t * (4.0 * c * c - 1.0),
        q_minus: t * s * s,
        u0: geom.a * s - geom.eps * c,
        v0: geom.a * c + geom.eps * s,
    })
}

impl RotatedFrame {
    /// Right edge of the rotated cross-section at height `v`.
    pub fn u_plus(&self, v: f64) -> f64 {
        (self.geom.a + v * self.theta.cos()) / self.theta.sin()
    }

    /// Left edge of the rotated cross-section at height `v`.
    pub fn u_minus(&self, v: f64) -> f64 {
        (-self.geom.a + v * self.theta.cos()) / self.theta.sin()
    }
}

/// Map a point from strip coordinates `(x, y)` to rotated coordinates
/// `(u, v)`.
pub fn rotate(p: (f64, f64), theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (p.0 * c - p.1 * s, p.0 * s + p.1 * c)
}

/// Map a point from rotated coordinates `(u, v)` back to strip
/// coordinates `(x, y)`; exact inverse of [`rotate`].
pub fn unrotate(p: (f64, f64), theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (p.0 * c + p.1 * s, -p.0 * s + p.1 * c)
}

/// Membership flags of a point of the rotated plane with respect to
/// the strip `Omega` and its covering subregions. All predicates use
/// strict inequalities; points on a defining line carry the
/// `boundary` flag instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionFlags {
    /// Inside the rotated strip (|y| < a after unrotating).
    pub in_strip: bool,
    /// |u| < u0 (the central well region).
    pub region_well: bool,
    /// |v| < v0 and |u| > u0 (the flanking region).
    pub region_flank: bool,
    /// |u| < u0 and |v| > v0 (well region beyond the window).
    pub region_well_outer: bool,
    /// |v| < v0 (the full transverse window).
    pub region_window: bool,
    /// On a defining line (strip wall, |u| = u0, or |v| = v0).
    pub boundary: bool,
}

/// Single-label summary of [`RegionFlags`] with a fixed priority for
/// deterministic reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionLabel {
    Boundary,
    WellOuter,
    Well,
    Flank,
    WindowOnly,
    StripRemainder,
    Exterior,
}

/// Classify a point given in rotated coordinates `(u, v)`.
pub fn classify_region(p: (f64, f64), frame: &RotatedFrame) -> (RegionLabel, RegionFlags) {
    let (u, v) = p;
    let (_, y) = unrotate((u, v), frame.theta);
    let a = frame.geom.a;
    let mut flags = RegionFlags {
        in_strip: y.abs() < a,
        region_well: false,
        region_flank: false,
        region_well_outer: false,
        region_window: false,
        boundary: y.abs() == a,
    };
    if !flags.in_strip {
        let label = if flags.boundary {
            RegionLabel::Boundary
        } else {
            RegionLabel::Exterior
        };
        return (label, flags);
    }
    if u.abs() == frame.u0 || v.abs() == frame.v0 {
        flags.boundary = true;
        return (RegionLabel::Boundary, flags);
    }
    flags.region_well = u.abs() < frame.u0;
    flags.region_window = v.abs() < frame.v0;
    flags.region_flank = flags.region_window && u.abs() > frame.u0;
    flags.region_well_outer = flags.region_well && v.abs() > frame.v0;
    let label = if flags.region_well_outer {
        RegionLabel::WellOuter
    } else if flags.region_well {
        RegionLabel::Well
    } else if flags.region_flank {
        RegionLabel::Flank
    } else if flags.region_window {
        RegionLabel::WindowOnly
    } else {
        RegionLabel::StripRemainder
    };
    (label, flags)
}

/// Check that the axis-aligned square `(-a, a)^2` is covered by the
/// closure of the union of the well-outer and window regions, by
/// sampling an `n x n` grid of interior points. Requires the
/// symmetric frame (`eps = 0`, `theta = pi/4`) for which the covering
/// holds.
pub fn covered_square_check(frame: &RotatedFrame, n: usize) -> Result<bool> {
    if frame.geom.eps != 0.0 || (frame.theta - std::f64::consts::FRAC_PI_4).abs() > 1e-12 {
        return Err(Error::InvalidParameter(
            "covering check is defined for eps = 0, theta = pi/4".into(),
        ));
    }
    let a = frame.geom.a;
    let tol = 1e-12 * a;
    let n = n.max(2);
    for i in 0..n {
        for j in 0..n {
            let x = -a + 2.0 * a * (i as f64 + 0.5) / n as f64;
            let y = -a + 2.0 * a * (j as f64 + 0.5) / n as f64;
            let (u, v) = rotate((x, y), frame.theta);
            let covered = v.abs() <= frame.v0 + tol || u.abs() <= frame.u0 + tol;
            if !covered {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
