//! One module section per subcommand: the resolved parameter record
//! (also the TOML config schema), the command-line overrides, and the
//! runner. Flags given on the command line win over config-file
//! values, which win over the built-in defaults; the JSON report
//! echoes the fully resolved record.

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use stripspec::geometry::{derive_frame, StripGeometry};
use stripspec::laplacian2d::{
    critical_eps, hardy_failure_demo, hardy_form_check, threshold_gap, CriticalEpsConfig,
    EigenConfig, HardyWeight, LadderConfig, LadderTrend, SpectralVerdict,
};
use stripspec::optimize::{eps_objective, hardy_objective, maximize_over_theta};
use stripspec::schrodinger1d::{lambda_profile, verify_lemma};
use stripspec::transcendental::{lambda_v0, solve_s1, solve_t1};
use stripspec::{Error, Result};

use crate::output::{emit, row2, CsvTable, OutputOpts};

fn load_params<T: DeserializeOwned + Default>(config: &Option<PathBuf>) -> Result<T> {
    match config {
        None => Ok(T::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidParameter(format!("cannot read config {}: {e}", path.display()))
            })?;
            toml::from_str(&text).map_err(|e| {
                Error::InvalidParameter(format!("config {}: {e}", path.display()))
            })
        }
    }
}

fn ladder(nys: &[usize], l_over_a: f64) -> LadderConfig {
    LadderConfig {
        nys: nys.to_vec(),
        l_over_a,
        eig: EigenConfig::default(),
    }
}

// ---------------------------------------------------------------- roots

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RootsParams {
    pub tol: f64,
}

impl Default for RootsParams {
    fn default() -> Self {
        RootsParams { tol: 1e-12 }
    }
}

#[derive(Debug, clap::Args)]
pub struct RootsArgs {
    /// Root tolerance for both dimensionless equations
    #[arg(long)]
    tol: Option<f64>,
}

pub fn run_roots(args: &RootsArgs, config: &Option<PathBuf>, opts: &OutputOpts) -> Result<()> {
    let mut p: RootsParams = load_params(config)?;
    if let Some(v) = args.tol {
        p.tol = v;
    }
    let s1 = solve_s1(p.tol)?;
    let t1 = solve_t1(p.tol)?;
    let t_unit = std::f64::consts::PI * std::f64::consts::PI / 16.0;
    let summary = format!(
        "s1 = {:.9} in units of (pi/4a)^2 ({:.9} absolute at a = 1); t1 = {:.9} in units of a",
        s1.value,
        s1.value * t_unit,
        t1.value
    );
    let results = serde_json::json!({
        "s1": s1,
        "t1": t1,
        "threshold_at_unit_a": t_unit,
    });
    emit(opts, "roots", &p, &results, &summary, &[])
}

// ------------------------------------------------------- lambda-profile

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileParams {
    pub a: f64,
    pub eps: f64,
    pub theta: f64,
    pub samples: usize,
    pub mesh: usize,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            a: 1.0,
            eps: 0.0,
            theta: FRAC_PI_4,
            samples: 101,
            mesh: 2048,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct ProfileArgs {
    /// Strip half-width (length units)
    #[arg(long)]
    a: Option<f64>,
    /// Switch offset (same length units as a)
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Rotation angle in radians, inside (0, pi/3)
    #[arg(long)]
    theta: Option<f64>,
    /// Odd number of heights sampled across the window
    #[arg(long)]
    samples: Option<usize>,
    /// Finite-difference cells per sample
    #[arg(long)]
    mesh: Option<usize>,
}

pub fn run_lambda_profile(
    args: &ProfileArgs,
    config: &Option<PathBuf>,
    opts: &OutputOpts,
) -> Result<()> {
    let mut p: ProfileParams = load_params(config)?;
    if let Some(v) = args.a {
        p.a = v;
    }
    if let Some(v) = args.eps {
        p.eps = v;
    }
    if let Some(v) = args.theta {
        p.theta = v;
    }
    if let Some(v) = args.samples {
        p.samples = v;
    }
    if let Some(v) = args.mesh {
        p.mesh = v;
    }
    let geom = StripGeometry::new(p.a, p.eps)?;
    let frame = derive_frame(geom, p.theta)?;
    let curve = lambda_profile(&frame, p.samples, p.mesh)?;
    let root = lambda_v0(&frame, 1e-13)?;
    let (v_min, lam_min) = curve
        .iter()
        .copied()
        .min_by(|x, y| x.1.partial_cmp(&y.1).expect("profile values are finite"))
        .expect("profile is nonempty");
    let t = geom.threshold();
    let summary = format!(
        "lambda(v) minimum {:.9} absolute = {:.9} x (pi/4a)^2 at v = {:.6}; window-edge matching root {:.9} absolute",
        lam_min,
        lam_min / t,
        v_min,
        root.value
    );
    let results = serde_json::json!({
        "v0": frame.v0,
        "threshold": t,
        "matching_root": root,
        "min_sample": { "v": v_min, "lambda": lam_min },
        "curve": curve,
    });
    let rows = curve.iter().map(|&(v, lam)| row2(v, lam)).collect();
    let tables = [CsvTable {
        suffix: None,
        header: "v,lambda",
        rows,
    }];
    emit(opts, "lambda-profile", &p, &results, &summary, &tables)
}

// ------------------------------------------------------- optimize-theta

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizeParams {
    pub a: f64,
    /// "hardy" for the weight-level objective, "eps" for the
    /// critical-offset bound.
    pub objective: String,
    pub tol: f64,
    pub scan_points: usize,
}

impl Default for OptimizeParams {
    fn default() -> Self {
        OptimizeParams {
            a: 1.0,
            objective: "hardy".into(),
            tol: 1e-4,
            scan_points: 128,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct OptimizeArgs {
    /// Strip half-width (length units)
    #[arg(long)]
    a: Option<f64>,
    /// Objective: "hardy" (weight level, units of (pi/4a)^2) or "eps"
    /// (offset bound, units of a)
    #[arg(long)]
    objective: Option<String>,
    /// Angle tolerance of the refinement, radians
    #[arg(long)]
    tol: Option<f64>,
    /// Coarse scan resolution over (0, pi/3)
    #[arg(long)]
    scan_points: Option<usize>,
}

pub fn run_optimize_theta(
    args: &OptimizeArgs,
    config: &Option<PathBuf>,
    opts: &OutputOpts,
) -> Result<()> {
    let mut p: OptimizeParams = load_params(config)?;
    if let Some(v) = args.a {
        p.a = v;
    }
    if let Some(v) = &args.objective {
        p.objective = v.clone();
    }
    if let Some(v) = args.tol {
        p.tol = v;
    }
    if let Some(v) = args.scan_points {
        p.scan_points = v;
    }
    let geom = StripGeometry::new(p.a, 0.0)?;
    let (scan, summary) = match p.objective.as_str() {
        "hardy" => {
            let r = maximize_over_theta(|th| hardy_objective(&geom, th), p.tol, p.scan_points)?;
            let s = format!(
                "best angle {:.6} rad: weight level {:.6} x (pi/4a)^2 ({:.9} absolute)",
                r.theta_star,
                r.objective_star,
                r.objective_star * geom.threshold()
            );
            (r, s)
        }
        "eps" => {
            let r = maximize_over_theta(|th| eps_objective(p.a, th), p.tol, p.scan_points)?;
            let s = format!(
                "best angle {:.6} rad: offset bound {:.6} a ({:.9} absolute)",
                r.theta_star,
                r.objective_star,
                r.objective_star * p.a
            );
            (r, s)
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "objective must be \"hardy\" or \"eps\", got \"{other}\""
            )))
        }
    };
    let tables = [
        CsvTable {
            suffix: None,
            header: "theta,objective",
            rows: scan.curve.iter().map(|&(t, v)| row2(t, v)).collect(),
        },
        CsvTable {
            suffix: Some("refinement"),
            header: "theta,objective",
            rows: scan.refinement.iter().map(|&(t, v)| row2(t, v)).collect(),
        },
    ];
    emit(opts, "optimize-theta", &p, &scan, &summary, &tables)
}

// --------------------------------------------------------- spectrum-2d

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumParams {
    pub a: f64,
    pub eps: f64,
    pub l_over_a: f64,
    pub nys: Vec<usize>,
}

impl Default for SpectrumParams {
    fn default() -> Self {
        SpectrumParams {
            a: 1.0,
            eps: 0.0,
            l_over_a: 12.0,
            nys: vec![32, 64, 128],
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct SpectrumArgs {
    /// Strip half-width (length units)
    #[arg(long)]
    a: Option<f64>,
    /// Switch offset (same length units as a)
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Truncation half-length in units of a
    #[arg(long)]
    l_over_a: Option<f64>,
    /// Mesh ladder: transverse cell counts, each double the last
    #[arg(long, value_delimiter = ',')]
    nys: Option<Vec<usize>>,
}

fn verdict_text(v: SpectralVerdict) -> &'static str {
    match v {
        SpectralVerdict::BoundStateCertified => "bound state below the threshold certified",
        SpectralVerdict::NoStateBelowThreshold => "no state below the threshold",
        SpectralVerdict::Inconclusive => "inconclusive",
    }
}

pub fn run_spectrum_2d(
    args: &SpectrumArgs,
    config: &Option<PathBuf>,
    opts: &OutputOpts,
) -> Result<()> {
    let mut p: SpectrumParams = load_params(config)?;
    if let Some(v) = args.a {
        p.a = v;
    }
    if let Some(v) = args.eps {
        p.eps = v;
    }
    if let Some(v) = args.l_over_a {
        p.l_over_a = v;
    }
    if let Some(v) = &args.nys {
        p.nys = v.clone();
    }
    let geom = StripGeometry::new(p.a, p.eps)?;
    let rep = threshold_gap(&geom, &ladder(&p.nys, p.l_over_a))?;
    let summary = format!(
        "extrapolated lowest eigenvalue {:.9} absolute = {:.9} x (pi/4a)^2 (threshold {:.9}); {}",
        rep.dirichlet.extrapolated,
        rep.dirichlet.extrapolated / rep.threshold,
        rep.threshold,
        verdict_text(rep.verdict)
    );
    let rows = p
        .nys
        .iter()
        .zip(rep.neumann.values.iter().zip(&rep.dirichlet.values))
        .map(|(ny, (n, d))| format!("{ny},{n},{d}"))
        .collect();
    let tables = [CsvTable {
        suffix: None,
        header: "ny,neumann_truncated,dirichlet_truncated",
        rows,
    }];
    emit(opts, "spectrum-2d", &p, &rep, &summary, &tables)?;
    if rep.verdict == SpectralVerdict::Inconclusive {
        return Err(Error::Inconclusive(
            "the truncation bracket straddles the threshold; extend the ladder or the length"
                .into(),
        ));
    }
    Ok(())
}

// -------------------------------------------------------- critical-eps

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CriticalParams {
    pub a: f64,
    pub l_over_a: f64,
    pub nys: Vec<usize>,
    pub resolution: f64,
    pub bracket: (f64, f64),
}

impl Default for CriticalParams {
    fn default() -> Self {
        CriticalParams {
            a: 1.0,
            l_over_a: 12.0,
            nys: vec![32, 64, 128],
            resolution: 0.02,
            bracket: (0.3, 0.7),
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct CriticalArgs {
    /// Strip half-width (length units)
    #[arg(long)]
    a: Option<f64>,
    /// Truncation half-length in units of a
    #[arg(long)]
    l_over_a: Option<f64>,
    /// Mesh ladder: transverse cell counts, each double the last
    #[arg(long, value_delimiter = ',')]
    nys: Option<Vec<usize>>,
    /// Target interval width in units of a
    #[arg(long)]
    resolution: Option<f64>,
    /// Lower search bound in units of a
    #[arg(long)]
    bracket_lo: Option<f64>,
    /// Upper search bound in units of a
    #[arg(long)]
    bracket_hi: Option<f64>,
}

pub fn run_critical_eps(
    args: &CriticalArgs,
    config: &Option<PathBuf>,
    opts: &OutputOpts,
) -> Result<()> {
    let mut p: CriticalParams = load_params(config)?;
    if let Some(v) = args.a {
        p.a = v;
    }
    if let Some(v) = args.l_over_a {
        p.l_over_a = v;
    }
    if let Some(v) = &args.nys {
        p.nys = v.clone();
    }
    if let Some(v) = args.resolution {
        p.resolution = v;
    }
    if let Some(v) = args.bracket_lo {
        p.bracket.0 = v;
    }
    if let Some(v) = args.bracket_hi {
        p.bracket.1 = v;
    }
    let geom = StripGeometry::new(p.a, 0.0)?;
    let cfg = CriticalEpsConfig {
        ladder: ladder(&p.nys, p.l_over_a),
        resolution_over_a: p.resolution,
        bracket_over_a: p.bracket,
    };
    let rep = critical_eps(&geom, &cfg)?;
    let summary = format!(
        "critical switch offset within ({:.4} a, {:.4} a) = ({:.4}, {:.4}) absolute; {} probes",
        rep.interval_over_a.0,
        rep.interval_over_a.1,
        rep.interval_over_a.0 * p.a,
        rep.interval_over_a.1 * p.a,
        rep.probes.len()
    );
    let rows = rep
        .probes
        .iter()
        .map(|q| {
            format!(
                "{},{},{},{}",
                q.eps_over_a, q.extrapolated, q.increment, q.bound_suspected
            )
        })
        .collect();
    let tables = [CsvTable {
        suffix: None,
        header: "eps_over_a,extrapolated,increment,bound_suspected",
        rows,
    }];
    emit(opts, "critical-eps", &p, &rep, &summary, &tables)
}

// --------------------------------------------------------- hardy-check

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HardyCheckParams {
    pub a: f64,
    pub eps: f64,
    /// "square", "negative", or "corollary".
    pub weight: String,
    /// Indicator strength; omitted means the certified default.
    pub c: Option<f64>,
    pub l_over_a: f64,
    pub nys: Vec<usize>,
}

impl Default for HardyCheckParams {
    fn default() -> Self {
        HardyCheckParams {
            a: 1.0,
            eps: 0.0,
            weight: "square".into(),
            c: None,
            l_over_a: 12.0,
            nys: vec![32, 64, 128],
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct HardyCheckArgs {
    /// Strip half-width (length units)
    #[arg(long)]
    a: Option<f64>,
    /// Switch offset (same length units as a)
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Weight shape: "square" (indicator of (-a,a)^2), "negative"
    /// (indicator of (eps,-eps)x(-a,a)), or "corollary" (decaying
    /// c_h/(1+x^2))
    #[arg(long)]
    weight: Option<String>,
    /// Indicator strength (absolute energy units); default is the
    /// certified constant for the chosen shape
    #[arg(long)]
    c: Option<f64>,
    /// Truncation half-length in units of a
    #[arg(long)]
    l_over_a: Option<f64>,
    /// Mesh ladder: transverse cell counts, each double the last
    #[arg(long, value_delimiter = ',')]
    nys: Option<Vec<usize>>,
}

pub fn run_hardy_check(
    args: &HardyCheckArgs,
    config: &Option<PathBuf>,
    opts: &OutputOpts,
) -> Result<()> {
    let mut p: HardyCheckParams = load_params(config)?;
    if let Some(v) = args.a {
        p.a = v;
    }
    if let Some(v) = args.eps {
        p.eps = v;
    }
    if let Some(v) = &args.weight {
        p.weight = v.clone();
    }
    if let Some(v) = args.c {
        p.c = Some(v);
    }
    if let Some(v) = args.l_over_a {
        p.l_over_a = v;
    }
    if let Some(v) = &args.nys {
        p.nys = v.clone();
    }
    let weight = match p.weight.as_str() {
        "square" => HardyWeight::IndicatorSquare { c: p.c },
        "negative" => HardyWeight::NegativeEpsIndicator { c: p.c },
        "corollary" => {
            if p.c.is_some() {
                return Err(Error::InvalidParameter(
                    "the decaying weight has a fixed amplitude; drop --c".into(),
                ));
            }
            HardyWeight::CorollaryRho
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "weight must be \"square\", \"negative\", or \"corollary\", got \"{other}\""
            )))
        }
    };
    let geom = StripGeometry::new(p.a, p.eps)?;
    let rep = hardy_form_check(&geom, &weight, &ladder(&p.nys, p.l_over_a))?;
    let trend = match rep.trend {
        LadderTrend::AllPositive => "all rungs positive",
        LadderTrend::NonDecreasing => "rungs rising toward the limit",
        LadderTrend::Ambiguous => "ambiguous trend",
    };
    let summary = format!(
        "weight {}: extrapolated shifted-form minimum {:.6e} absolute = {:.6e} x (pi/4a)^2; {} ({})",
        rep.weight,
        rep.extrapolated,
        rep.extrapolated / geom.threshold(),
        if rep.holds { "holds" } else { "does not hold" },
        trend
    );
    let rows = p
        .nys
        .iter()
        .zip(&rep.values)
        .map(|(ny, v)| format!("{ny},{v}"))
        .collect();
    let tables = [CsvTable {
        suffix: None,
        header: "ny,shifted_form_minimum",
        rows,
    }];
    emit(opts, "hardy-check", &p, &rep, &summary, &tables)
}

// ------------------------------------------------------------ hc-lemma

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HcLemmaParams {
    pub h: f64,
    pub l: f64,
    pub delta: f64,
    pub offsets: usize,
    pub mesh: usize,
}

impl Default for HcLemmaParams {
    fn default() -> Self {
        HcLemmaParams {
            h: 1.0,
            l: 1.0,
            delta: 0.25,
            offsets: 64,
            mesh: 512,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct HcLemmaArgs {
    /// Bump height (energy units, 1/length^2)
    #[arg(long)]
    h: Option<f64>,
    /// Interval length
    #[arg(long)]
    l: Option<f64>,
    /// Bump width as a fraction of the interval, in (0, 1)
    #[arg(long)]
    delta: Option<f64>,
    /// Number of bump offsets swept across the interval
    #[arg(long)]
    offsets: Option<usize>,
    /// Finite-difference cells per solve
    #[arg(long)]
    mesh: Option<usize>,
}

pub fn run_hc_lemma(
    args: &HcLemmaArgs,
    config: &Option<PathBuf>,
    opts: &OutputOpts,
) -> Result<()> {
    let mut p: HcLemmaParams = load_params(config)?;
    if let Some(v) = args.h {
        p.h = v;
    }
    if let Some(v) = args.l {
        p.l = v;
    }
    if let Some(v) = args.delta {
        p.delta = v;
    }
    if let Some(v) = args.offsets {
        p.offsets = v;
    }
    if let Some(v) = args.mesh {
        p.mesh = v;
    }
    let rep = verify_lemma(p.h, p.l, p.delta, p.offsets, p.mesh)?;
    let summary = format!(
        "edge-position eigenvalue {:.9}; {} violations out of {} offsets (tolerance {:.3e})",
        rep.edge_value,
        rep.violations.len(),
        p.offsets,
        rep.tol
    );
    let rows = rep.curve.iter().map(|&(c, v)| row2(c, v)).collect();
    let tables = [CsvTable {
        suffix: None,
        header: "offset,lowest_eigenvalue",
        rows,
    }];
    emit(opts, "hc-lemma", &p, &rep, &summary, &tables)
}

// -------------------------------------------------------- hardy-failure

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FailureParams {
    pub a: f64,
    pub eps: f64,
    pub steps: usize,
    pub weight_c: f64,
}

impl Default for FailureParams {
    fn default() -> Self {
        FailureParams {
            a: 1.0,
            eps: 0.0,
            steps: 8,
            weight_c: 1.0,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct FailureArgs {
    /// Strip half-width (length units)
    #[arg(long)]
    a: Option<f64>,
    /// Switch offset for the switched comparison (must be >= 0)
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Number of dyadic cutoff widths
    #[arg(long)]
    steps: Option<usize>,
    /// Square-indicator weight strength (absolute energy units)
    #[arg(long)]
    weight_c: Option<f64>,
}

pub fn run_hardy_failure(
    args: &FailureArgs,
    config: &Option<PathBuf>,
    opts: &OutputOpts,
) -> Result<()> {
    let mut p: FailureParams = load_params(config)?;
    if let Some(v) = args.a {
        p.a = v;
    }
    if let Some(v) = args.eps {
        p.eps = v;
    }
    if let Some(v) = args.steps {
        p.steps = v;
    }
    if let Some(v) = args.weight_c {
        p.weight_c = v;
    }
    let geom = StripGeometry::new(p.a, p.eps)?;
    let weight = HardyWeight::IndicatorSquare {
        c: Some(p.weight_c),
    };
    let rep = hardy_failure_demo(&geom, &weight, p.steps)?;
    let summary = format!(
        "uniform-strip quotient falls {:.6e} -> {:.6e} (ratio {:.3e}); switched quotient stays >= {:.6e} (certified floor {:.6e})",
        rep.nonswitched[0],
        rep.nonswitched[rep.nonswitched.len() - 1],
        rep.final_over_initial,
        rep.switched_min,
        rep.floor_reference
    );
    let rows = (1..=p.steps)
        .map(|k| {
            format!(
                "{k},{},{}",
                rep.nonswitched[k - 1],
                rep.switched[k - 1]
            )
        })
        .collect();
    let tables = [CsvTable {
        suffix: None,
        header: "k,uniform_strip,switched_strip",
        rows,
    }];
    emit(opts, "hardy-failure", &p, &rep, &summary, &tables)
}
