use crate::error::{Error, Result};

/// Golden-section search for a minimum of a unimodal function on
/// `[a, b]`. Returns `(x_min, f(x_min))` once the interval width drops
/// below `xtol`.
pub fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    if !(b > a) || !(xtol > 0.0) {
        return Err(Error::InvalidParameter(
            "golden_min: need a < b and xtol > 0".into(),
        ));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() < xtol {
            let x = 0.5 * (a + b);
            return Ok((x, f(x)));
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Err(Error::NoConvergence(format!(
        "golden_min: interval still wider than {xtol} after {max_iter} iterations"
    )))
}

/// Minimize over `[a, b]` by a uniform coarse scan followed by
/// golden-section refinement around the best sample. Robust against
/// multiple local minima as long as the global one is resolved by the
/// scan.
pub fn scan_then_golden<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    scan_points: usize,
    xtol: f64,
) -> Result<(f64, f64)> {
    if scan_points < 3 {
        return Err(Error::InvalidParameter(
            "scan_then_golden: need at least 3 scan points".into(),
        ));
    }
    let n = scan_points;
    let h = (b - a) / (n - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let v = f(a + i as f64 * h);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = a + h * best_i.saturating_sub(1) as f64;
    let hi = (a + h * (best_i + 1) as f64).min(b);
    golden_min(f, lo, hi, xtol, 200)
}
