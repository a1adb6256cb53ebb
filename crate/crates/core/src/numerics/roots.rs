use crate::error::{Error, Result};

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Combines bisection, secant, and inverse quadratic interpolation;
/// the bracket must satisfy `f(a) * f(b) <= 0`. Converges to a point
/// where the bracket width is below `xtol` or `|f|` below `ftol`.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::InvalidParameter(format!(
            "brent: no sign change on [{a}, {b}] (f: {fa}, {fb})"
        )));
    }
    // Keep |f(b)| <= |f(a)|; c is the previous iterate.
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..max_iter {
        if fb == 0.0 || (b - a).abs() < xtol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            // secant
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let hi = b;
        let (lo, hi) = if lo < hi { (lo, hi) } else { (hi, lo) };
        let cond_bisect = s < lo
            || s > hi
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= d.abs() / 2.0)
            || (mflag && (b - c).abs() < xtol)
            || (!mflag && d.abs() < xtol);
        if cond_bisect {
            s = (a + b) / 2.0;
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = b - c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::NoConvergence(format!(
        "brent: no root to tolerance {xtol} in {max_iter} iterations"
    )))
}

/// Plain bisection on a boolean predicate.
///
/// `pred(lo)` must be false and `pred(hi)` true; returns the final
/// `(lo, hi)` with `hi - lo <= resolution` such that the predicate
/// flips inside.
pub fn bisect<F: FnMut(f64) -> bool>(
    mut pred: F,
    lo: f64,
    hi: f64,
    resolution: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    if !(hi > lo) || !(resolution > 0.0) {
        return Err(Error::InvalidParameter(
            "bisect: need lo < hi and resolution > 0".into(),
        ));
    }
    let (mut lo, mut hi) = (lo, hi);
    if pred(lo) {
        return Err(Error::InvalidParameter(
            "bisect: predicate already true at lower end".into(),
        ));
    }
    if !pred(hi) {
        return Err(Error::InvalidParameter(
            "bisect: predicate false at upper end".into(),
        ));
    }
    for _ in 0..max_iter {
        if hi - lo <= resolution {
            return Ok((lo, hi));
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NoConvergence(format!(
        "bisect: interval {:.3e} still wider than {resolution:.3e} after {max_iter} steps",
        hi - lo
    )))
}
