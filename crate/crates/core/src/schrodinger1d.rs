//! The reduced one-dimensional eigenvalue problem: a Neumann
//! Schrodinger operator `-d^2/du^2 + V` with a piecewise-constant
//! potential on an interval, discretized by second-order finite
//! differences. Provides the step-potential builder for the rotated
//! cross-section, a mesh-ladder oracle for its lowest eigenvalue, the
//! transverse eigenvalue profile, and the shifted-bump family used to
//! verify that the profile is minimized at the window edge.

use crate::error::{Error, Result};
use crate::geometry::RotatedFrame;
use crate::numerics::extrapolate::richardson;
use crate::numerics::tridiag::SymTridiag;
use serde::Serialize;

/// Interval with a piecewise-constant potential. Pieces tile the
/// domain exactly and are kept in left-to-right order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepPotential1D {
    pub left: f64,
    pub right: f64,
    /// `(piece_left, piece_right, value)` triples.
    pub pieces: Vec<(f64, f64, f64)>,
}

impl StepPotential1D {
    /// Build from breakpoints and per-piece values; zero-width pieces
    /// are dropped.
    pub fn new(left: f64, right: f64, breaks: &[f64], values: &[f64]) -> Result<Self> {
        if !(right > left) {
            return Err(Error::InvalidParameter(format!(
                "empty interval [{left}, {right}]"
            )));
        }
        if breaks.len() + 1 != values.len() {
            return Err(Error::InvalidParameter(
                "need one more value than interior breakpoints".into(),
            ));
        }
        let width = right - left;
        let mut pieces = Vec::with_capacity(values.len());
        let mut lo = left;
        for (i, &val) in values.iter().enumerate() {
            let hi = if i < breaks.len() { breaks[i] } else { right };
            if hi < lo - 1e-14 * width {
                return Err(Error::InvalidParameter(
                    "breakpoints must be nondecreasing and inside the domain".into(),
                ));
            }
            if hi - lo > 1e-14 * width {
                pieces.push((lo, hi, val));
            }
            lo = lo.max(hi);
        }
        if (lo - right).abs() > 1e-12 * width || pieces.is_empty() {
            return Err(Error::InvalidParameter(
                "pieces do not tile the domain".into(),
            ));
        }
        // close the tiling exactly
        pieces.last_mut().unwrap().1 = right;
        Ok(StepPotential1D {
            left,
            right,
            pieces,
        })
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }
}

/// How an eigenvalue estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Matching,
    FiniteDifference,
}

/// Eigenvalue estimate with solver metadata.
#[derive(Debug, Clone, Serialize)]
pub struct EigenResult1D {
    pub value: f64,
    pub method: Method,
    /// Mesh cell count for finite-difference results.
    pub mesh: Option<usize>,
    /// Euclidean norm of `A v - lambda v` for the computed pair.
    pub residual: f64,
}

/// Three-piece potential of the rotated cross-section at height `v`:
/// the well of height `q_plus` on `(-u0, u0)` and flanks at depth
/// `-q_minus` out to the slanted edges `u_minus(v)`, `u_plus(v)`.
///
/// Defined for `|v| <= v0`; at the window edge one flank degenerates
/// to zero width and is dropped.
pub fn build_reduced_potential(v: f64, frame: &RotatedFrame) -> Result<StepPotential1D> {
    if v.abs() > frame.v0 {
        return Err(Error::InvalidParameter(format!(
            "cross-section height |{v}| exceeds the window half-width {}",
            frame.v0
        )));
    }
    let lo = frame.u_minus(v);
    let hi = frame.u_plus(v);
    StepPotential1D::new(
        lo,
        hi,
        &[-frame.u0, frame.u0],
        &[-frame.q_minus, frame.q_plus, -frame.q_minus],
    )
}

/// Distribute `n` mesh cells over the pieces proportionally to width
/// by largest-remainder apportionment. Relative widths are quantized
/// to 2^-40 first so that reversing the piece order (which perturbs
/// the widths by rounding ulps) yields exactly the reversed counts;
/// ties go to the wider piece, then to the leftmost.
fn distribute_cells(pot: &StepPotential1D, n: usize) -> Vec<usize> {
    let k = pot.pieces.len();
    let widths: Vec<f64> = pot.pieces.iter().map(|&(l, r, _)| r - l).collect();
    let total_w: f64 = widths.iter().sum();
    let quant = (1u64 << 40) as f64;
    let rel: Vec<f64> = widths
        .iter()
        .map(|w| (w / total_w * quant).round() / quant)
        .collect();
    let mut counts: Vec<usize> = Vec::with_capacity(k);
    let mut fracs: Vec<(f64, f64, usize)> = Vec::with_capacity(k);
    for (i, &r) in rel.iter().enumerate() {
        let q = r * n as f64;
        let base = (q.floor() as usize).max(1);
        counts.push(base);
        fracs.push((q - q.floor(), r, i));
    }
    let mut assigned: i64 = counts.iter().map(|&c| c as i64).sum();
    // hand out missing cells by descending fractional part; reclaim
    // any excess (from the one-cell minimum) from the largest pieces
    fracs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(b.1.partial_cmp(&a.1).unwrap())
            .then(a.2.cmp(&b.2))
    });
    let mut cursor = 0;
    while assigned < n as i64 {
        counts[fracs[cursor % k].2] += 1;
        assigned += 1;
        cursor += 1;
    }
    while assigned > n as i64 {
        let victim = (0..k)
            .filter(|&i| counts[i] > 1)
            .max_by(|&a, &b| {
                counts[a]
                    .cmp(&counts[b])
                    .then(rel[a].partial_cmp(&rel[b]).unwrap())
            })
            .expect("cannot reduce below one cell per piece");
        counts[victim] -= 1;
        assigned -= 1;
    }
    counts
}

/// Assemble the symmetric tridiagonal matrix of the Neumann
/// finite-difference operator on a mesh with `n` cells distributed
/// over the pieces proportionally to width, so every potential jump
/// lies exactly on a node. Neumann ends enter through mirror ghost
/// points, symmetrized by half-cell weights; the scheme is exact for
/// constant potentials and O(h^2) otherwise.
fn assemble(pot: &StepPotential1D, n: usize) -> SymTridiag {
    let counts = distribute_cells(pot, n);

    // node-centered mesh: cell widths and per-cell potential values
    let mut hs = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for (&(l, r, val), &c) in pot.pieces.iter().zip(&counts) {
        let h = (r - l) / c as f64;
        for _ in 0..c {
            hs.push(h);
            vs.push(val);
        }
    }
    let n_nodes = hs.len() + 1;
    // lumped mass (half-cell at the ends), stiffness, and potential
    let mut mass = vec![0.0; n_nodes];
    let mut pot_diag = vec![0.0; n_nodes];
    let mut kdiag = vec![0.0; n_nodes];
    let mut koff = vec![0.0; n_nodes - 1];
    for (i, (&h, &val)) in hs.iter().zip(&vs).enumerate() {
        let half = 0.5 * h;
        mass[i] += half;
        mass[i + 1] += half;
        pot_diag[i] += val * half;
        pot_diag[i + 1] += val * half;
        let w = 1.0 / h;
        kdiag[i] += w;
        kdiag[i + 1] += w;
        koff[i] = -w;
    }
    // similarity transform to a plain symmetric eigenproblem
    let inv_sqrt: Vec<f64> = mass.iter().map(|&m| 1.0 / m.sqrt()).collect();
    let diag: Vec<f64> = (0..n_nodes)
        .map(|i| (kdiag[i] + pot_diag[i]) * inv_sqrt[i] * inv_sqrt[i])
        .collect();
    let off: Vec<f64> = (0..n_nodes - 1)
        .map(|i| koff[i] * inv_sqrt[i] * inv_sqrt[i + 1])
        .collect();
    SymTridiag::new(diag, off)
}

/// Lowest Neumann eigenvalue of `-d^2/du^2 + V` on `n` cells.
pub fn lowest_eig_fd(pot: &StepPotential1D, n: usize) -> Result<EigenResult1D> {
    if n < 16 {
        return Err(Error::InvalidParameter(format!(
            "mesh of {n} cells is too coarse; need at least 16"
        )));
    }
    let t = assemble(pot, n);
    let value = t.smallest_eigenvalue(1e-15);
    let (_, residual) = t.eigenvector(value, 3)?;
    Ok(EigenResult1D {
        value,
        method: Method::FiniteDifference,
        mesh: Some(n),
        residual,
    })
}

/// Richardson-extrapolated lowest eigenvalue from meshes `n` and `2n`
/// (second-order scheme). Returns the estimate and the magnitude of
/// the applied correction as an error proxy.
pub fn lowest_eig_richardson(pot: &StepPotential1D, n: usize) -> Result<(f64, f64)> {
    let v1 = lowest_eig_fd(pot, n)?.value;
    let v2 = lowest_eig_fd(pot, 2 * n)?.value;
    let ex = richardson(v1, v2, 2.0);
    Ok((ex, (ex - v2).abs()))
}

/// Transverse eigenvalue profile `v -> lambda(v)` sampled at `n_v`
/// cell-centered heights inside the open window `(-v0, v0)`; `n_v`
/// must be odd and at least 3 so the samples are symmetric and
/// include `v = 0`.
pub fn lambda_profile(
    frame: &RotatedFrame,
    n_v: usize,
    n_mesh: usize,
) -> Result<Vec<(f64, f64)>> {
    if n_v < 3 || n_v % 2 == 0 {
        return Err(Error::InvalidParameter(
            "profile needs an odd sample count of at least 3".into(),
        ));
    }
    use rayon::prelude::*;
    let heights: Vec<f64> = (0..n_v)
        .map(|j| frame.v0 * ((2 * j + 1) as f64 / n_v as f64 - 1.0))
        .collect();
    heights
        .par_iter()
        .map(|&v| {
            let pot = build_reduced_potential(v, frame)?;
            Ok((v, lowest_eig_fd(&pot, n_mesh)?.value))
        })
        .collect()
}

/// Lowest Neumann eigenvalue of `-d^2/dx^2 + h * chi_(c, c+delta*l)`
/// on `(0, l)`: a bump of height `h` covering the fraction `delta` of
/// the interval, offset by `c` from the left end.
pub fn hc_lowest(h: f64, l: f64, delta: f64, c: f64, n: usize) -> Result<EigenResult1D> {
    if !(l > 0.0) || !(delta > 0.0 && delta < 1.0) || h < 0.0 {
        return Err(Error::InvalidParameter(
            "need l > 0, 0 < delta < 1, h >= 0".into(),
        ));
    }
    let bump = delta * l;
    if !(0.0..=l - bump + 1e-12 * l).contains(&c) {
        return Err(Error::InvalidParameter(format!(
            "offset {c} outside [0, {}]",
            l - bump
        )));
    }
    let pot = StepPotential1D::new(0.0, l, &[c, c + bump], &[0.0, h, 0.0])?;
    lowest_eig_fd(&pot, n)
}

/// Report of the shifted-bump sweep: the lowest eigenvalue as a
/// function of the bump offset, compared against the edge position.
#[derive(Debug, Clone, Serialize)]
pub struct BumpSweepReport {
    /// `(c, extrapolated lowest eigenvalue)` per offset.
    pub curve: Vec<(f64, f64)>,
    /// Eigenvalue at the left-edge position `c = 0`.
    pub edge_value: f64,
    /// Comparison tolerance: ten times the extrapolation error proxy.
    pub tol: f64,
    /// Offsets whose eigenvalue drops below `edge_value - tol`.
    pub violations: Vec<(f64, f64)>,
}

/// Sweep the bump offset over `n_c` uniform positions in
/// `[0, l - delta*l]` and check that the edge position minimizes the
/// lowest eigenvalue, up to discretization error.
pub fn verify_lemma(
    h: f64,
    l: f64,
    delta: f64,
    n_c: usize,
    n_mesh: usize,
) -> Result<BumpSweepReport> {
    if n_c < 2 {
        return Err(Error::InvalidParameter("need at least 2 offsets".into()));
    }
    use rayon::prelude::*;
    let span = l - delta * l;
    let eval = |c: f64| -> Result<f64> {
        let bump = delta * l;
        let pot = StepPotential1D::new(0.0, l, &[c, c + bump], &[0.0, h, 0.0])?;
        Ok(lowest_eig_richardson(&pot, n_mesh)?.0)
    };
    let offsets: Vec<f64> = (0..n_c)
        .map(|i| span * i as f64 / (n_c - 1) as f64)
        .collect();
    let curve: Vec<(f64, f64)> = offsets
        .par_iter()
        .map(|&c| Ok((c, eval(c)?)))
        .collect::<Result<_>>()?;
    let edge_value = curve[0].1;
    let bump = delta * l;
    let pot0 = StepPotential1D::new(0.0, l, &[0.0, bump], &[0.0, h, 0.0])?;
    let (_, err) = lowest_eig_richardson(&pot0, n_mesh)?;
    let tol = 10.0 * err.max(1e-14);
    let violations: Vec<(f64, f64)> = curve
        .iter()
        .filter(|&&(_, v)| v < edge_value - tol)
        .copied()
        .collect();
    Ok(BumpSweepReport {
        curve,
        edge_value,
        tol,
        violations,
    })
}
