/// Richardson extrapolation of a pair computed at mesh sizes `h` and
/// `h/2`, assuming error `C h^p`.
pub fn richardson(v_h: f64, v_h2: f64, p: f64) -> f64 {
    let f = 2f64.powf(p);
    (f * v_h2 - v_h) / (f - 1.0)
}

/// Observed convergence order from three values on a mesh ladder with
/// halving step. Returns `None` when the increments do not behave like
/// a geometric sequence (sign change, stagnation, or a ratio outside a
/// plausible range), so callers can fall back to a conservative model.
pub fn fit_order(vals: &[f64]) -> Option<f64> {
    if vals.len() < 3 {
        return None;
    }
    let n = vals.len();
    let d1 = vals[n - 2] - vals[n - 3];
    let d2 = vals[n - 1] - vals[n - 2];
    if d1 == 0.0 || d2 == 0.0 || d1 * d2 <= 0.0 {
        return None;
    }
    let ratio = d1 / d2;
    if !(1.05..=24.0).contains(&ratio) {
        return None;
    }
    Some(ratio.log2())
}

/// Extrapolate the last three ladder values through the two-term error
/// model `v(h) = v + A h + B h^2` (steps halving). This is exact for
/// any mixture of first- and second-order error, which covers both
/// smooth discretizations and ones dominated by a corner singularity.
pub fn two_term_extrapolate(vals: &[f64]) -> f64 {
    let n = vals.len();
    assert!(n >= 3, "two-term extrapolation needs three ladder values");
    let (v1, v2, v3) = (vals[n - 3], vals[n - 2], vals[n - 1]);
    let d1 = v2 - v1;
    let d2 = v3 - v2;
    let ex = v3 - (d1 - 5.0 * d2) / 3.0;
    // If the fit extrapolates wildly past the observed increments the
    // model is not credible; continue the last increment geometrically
    // instead.
    if (ex - v3).abs() > 2.0 * (d1.abs() + d2.abs()) {
        return v3 + d2;
    }
    ex
}

/// Summary of a mesh-ladder refinement study.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LadderFit {
    /// Raw values, coarsest first.
    pub values: Vec<f64>,
    /// Best estimate for the mesh-size-zero limit.
    pub extrapolated: f64,
    /// Conservative error bar: three times the last ladder increment.
    pub err_bar: f64,
    /// Observed convergence order, when the increments support a fit.
    pub fitted_order: Option<f64>,
}

impl LadderFit {
    pub fn from_halving(values: Vec<f64>) -> Self {
        assert!(values.len() >= 2, "ladder needs at least two rungs");
        let n = values.len();
        let d_last = values[n - 1] - values[n - 2];
        let extrapolated = if n >= 3 {
            two_term_extrapolate(&values)
        } else {
            // with two rungs assume first order, the weakest model
            values[n - 1] + d_last
        };
        LadderFit {
            extrapolated,
            err_bar: 3.0 * d_last.abs(),
            fitted_order: fit_order(&values),
            values,
        }
    }

    /// Magnitude of the last ladder increment, the standard one-step
    /// uncertainty proxy for the extrapolated value.
    pub fn last_increment(&self) -> f64 {
        let n = self.values.len();
        (self.values[n - 1] - self.values[n - 2]).abs()
    }
}
