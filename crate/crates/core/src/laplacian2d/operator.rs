//! Five-point finite-difference discretization of the Laplacian on the
//! truncated strip (-L, L) x (-a, a).
//!
//! The wall conditions come from a [`BcLayout`]; the artificial ends at
//! x = +-L carry either Dirichlet or Neumann conditions so that the two
//! variants bracket the untruncated operator from above and below.
//! Assembly is form-based: each grid link contributes a difference
//! quotient weighted by the trapezoid area it represents, masses are
//! lumped, and the generalized problem is symmetrized by a diagonal
//! similarity, so the assembled matrix is symmetric with at most five
//! entries per row.

use crate::error::{Error, Result};
use crate::geometry::{BcKind, BcLayout, StripGeometry};

/// Artificial boundary condition applied at the truncation ends x = +-L.
///
/// Neumann truncation can only lower the lowest eigenvalue and Dirichlet
/// truncation can only raise it, so solving with both brackets the value
/// on the unbounded strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Truncation {
    Dirichlet,
    Neumann,
}

/// Tensor grid on the truncated strip.
///
/// `hy = 2a/ny` always. When the layout is switched with `|eps|` larger
/// than a quarter cell, `hx` is chosen as `2|eps|/k` for the integer `k`
/// nearest to `2|eps|/hy`, so that the switch abscissae +-eps fall on
/// grid nodes exactly; otherwise `hx = hy`. The column count is then
/// rounded to the requested length and adjusted by one if needed so that
/// both switch columns exist ((nx - k) even). The stored `half_length`
/// is the realized value `nx*hx/2`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Grid2D {
    pub a: f64,
    pub half_length: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub layout: BcLayout,
    pub trunc: Truncation,
    #[serde(skip)]
    pub xs: Vec<f64>,
    #[serde(skip)]
    pub ys: Vec<f64>,
}

impl Grid2D {
    pub fn new(
        a: f64,
        layout: BcLayout,
        half_length: f64,
        ny: usize,
        trunc: Truncation,
    ) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "strip half-width must be positive (a={a})"
            )));
        }
        if ny < 4 || ny % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "ny must be even and at least 4 (ny={ny})"
            )));
        }
        if !(half_length >= 8.0 * a) || !half_length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "truncation length must satisfy L >= 8a for far-field room \
                 (L={half_length}, a={a})"
            )));
        }
        let eps = match layout {
            BcLayout::Switched { eps } => eps,
            BcLayout::Uniform { .. } => 0.0,
        };
        if !eps.is_finite() || eps.abs() >= half_length {
            return Err(Error::InvalidParameter(format!(
                "switch abscissa must lie inside the truncated strip \
                 (eps={eps}, L={half_length})"
            )));
        }
        let hy = 2.0 * a / ny as f64;
        let ae = eps.abs();
        let (k, hx) = if ae > 0.25 * hy {
            let k = ((2.0 * ae / hy).round() as usize).max(1);
            (k, 2.0 * ae / k as f64)
        } else {
            (0, hy)
        };
        let mut nx = (2.0 * half_length / hx).round() as usize;
        if (nx - k) % 2 != 0 {
            nx += 1;
        }
        let l = nx as f64 * hx / 2.0;
        let xs: Vec<f64> = (0..=nx).map(|i| -l + hx * i as f64).collect();
        let ys: Vec<f64> = (0..=ny).map(|j| -a + hy * j as f64).collect();
        Ok(Grid2D {
            a,
            half_length: l,
            nx,
            ny,
            hx,
            hy,
            layout,
            trunc,
            xs,
            ys,
        })
    }

    /// Grid with the switched layout of the given geometry.
    pub fn switched(
        geom: &StripGeometry,
        half_length: f64,
        ny: usize,
        trunc: Truncation,
    ) -> Result<Self> {
        Grid2D::new(
            geom.a,
            BcLayout::Switched { eps: geom.eps },
            half_length,
            ny,
            trunc,
        )
    }

    /// Whether the node (i, j) is eliminated by a Dirichlet condition.
    ///
    /// Wall nodes follow the layout, except that a node lying exactly at
    /// a switch abscissa is assigned to the Dirichlet side (the
    /// continuum rays are open there, but the discrete operator needs a
    /// deterministic choice and the Dirichlet one is the closure). The
    /// tie window is a 1e-9 fraction of a cell, far above rounding noise
    /// in the node coordinates and far below any genuine node spacing.
    pub fn is_dirichlet_node(&self, i: usize, j: usize) -> bool {
        if self.trunc == Truncation::Dirichlet && (i == 0 || i == self.nx) {
            return true;
        }
        let tie = 1e-9 * self.hx;
        let x = self.xs[i];
        if j == 0 {
            return match self.layout {
                BcLayout::Switched { eps } => x <= -eps + tie,
                BcLayout::Uniform { bottom, .. } => bottom == BcKind::Dirichlet,
            };
        }
        if j == self.ny {
            return match self.layout {
                BcLayout::Switched { eps } => x >= eps - tie,
                BcLayout::Uniform { top, .. } => top == BcKind::Dirichlet,
            };
        }
        false
    }
}

/// Symmetrized finite-difference Laplacian on a [`Grid2D`], in
/// compressed sparse row form over the non-Dirichlet nodes.
#[derive(Debug, Clone)]
pub struct DiscreteOperator2D {
    pub grid: Grid2D,
    /// Number of unknowns.
    pub n: usize,
    /// Node (i*(ny+1)+j) to unknown index, -1 for eliminated nodes.
    index: Vec<i64>,
    /// Unknown index to node (i, j).
    nodes: Vec<(u32, u32)>,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<f64>,
}

/// Assemble the symmetrized operator for a grid.
///
/// Unknowns are ordered column by column with y fastest, which keeps
/// every off-diagonal entry within `ny + 2` positions of the diagonal.
pub fn assemble(grid: Grid2D) -> DiscreteOperator2D {
    let (nx, ny) = (grid.nx, grid.ny);
    let stride = ny + 1;
    let mut index = vec![-1i64; (nx + 1) * stride];
    let mut nodes = Vec::new();
    for i in 0..=nx {
        for j in 0..=ny {
            if !grid.is_dirichlet_node(i, j) {
                index[i * stride + j] = nodes.len() as i64;
                nodes.push((i as u32, j as u32));
            }
        }
    }
    let n = nodes.len();

    let wx = |i: usize| if i == 0 || i == nx { 0.5 } else { 1.0 };
    let wy = |j: usize| if j == 0 || j == ny { 0.5 } else { 1.0 };
    let mass =
        |i: usize, j: usize| wx(i) * wy(j) * grid.hx * grid.hy;
    let at = |i: usize, j: usize| index[i * stride + j];

    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(5 * n);
    let mut vals = Vec::with_capacity(5 * n);
    row_ptr.push(0usize);
    for p in 0..n {
        let (iu, ju) = nodes[p];
        let (i, j) = (iu as usize, ju as usize);
        let m_p = mass(i, j);
        // Links in ascending unknown order: west, south, then the
        // diagonal, then north, east. A link to an eliminated node
        // (index -1) contributes only to the diagonal; a link beyond
        // the domain does not exist at all (natural Neumann edge).
        let cx = |j: usize| wy(j) * grid.hy / grid.hx;
        let cy = |i: usize| wx(i) * grid.hx / grid.hy;
        let links: [Option<(i64, f64)>; 4] = [
            if i > 0 { Some((at(i - 1, j), cx(j))) } else { None },
            if j > 0 { Some((at(i, j - 1), cy(i))) } else { None },
            if j < ny { Some((at(i, j + 1), cy(i))) } else { None },
            if i < nx { Some((at(i + 1, j), cx(j))) } else { None },
        ];
        let mut diag = 0.0;
        for (_, c) in links.iter().flatten() {
            diag += c / m_p;
        }
        for (slot, link) in links.iter().enumerate() {
            if slot == 2 {
                col_idx.push(p as u32);
                vals.push(diag);
            }
            if let Some((q, c)) = *link {
                if q >= 0 {
                    let (qi, qj) = nodes[q as usize];
                    let m_q = mass(qi as usize, qj as usize);
                    col_idx.push(q as u32);
                    vals.push(-c / (m_p * m_q).sqrt());
                }
            }
        }
        row_ptr.push(col_idx.len());
    }

    DiscreteOperator2D {
        grid,
        n,
        index,
        nodes,
        row_ptr,
        col_idx,
        vals,
    }
}

impl DiscreteOperator2D {
    /// Unknown index of node (i, j), if it is not eliminated.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        let q = self.index[i * (self.grid.ny + 1) + j];
        (q >= 0).then_some(q as usize)
    }

    /// Grid node of unknown p.
    pub fn node_of(&self, p: usize) -> (usize, usize) {
        let (i, j) = self.nodes[p];
        (i as usize, j as usize)
    }

    /// Coordinates of unknown p.
    pub fn coords_of(&self, p: usize) -> (f64, f64) {
        let (i, j) = self.node_of(p);
        (self.grid.xs[i], self.grid.ys[j])
    }

    /// Nodal samples of a function over the unknowns.
    pub fn nodal_values<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n)
            .map(|p| {
                let (x, y) = self.coords_of(p);
                f(x, y)
            })
            .collect()
    }

    /// y = A x, optionally with an extra diagonal term:
    /// y = (A + diag(extra)) x.
    pub fn matvec(&self, x: &[f64], extra_diag: Option<&[f64]>, y: &mut [f64]) {
        for p in 0..self.n {
            let mut s = 0.0;
            for t in self.row_ptr[p]..self.row_ptr[p + 1] {
                s += self.vals[t] * x[self.col_idx[t] as usize];
            }
            if let Some(w) = extra_diag {
                s += w[p] * x[p];
            }
            y[p] = s;
        }
    }

    /// Gershgorin enclosure of the spectrum, including an optional
    /// extra diagonal.
    pub fn gershgorin(&self, extra_diag: Option<&[f64]>) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in 0..self.n {
            let mut d = extra_diag.map_or(0.0, |w| w[p]);
            let mut r = 0.0;
            for t in self.row_ptr[p]..self.row_ptr[p + 1] {
                if self.col_idx[t] as usize == p {
                    d += self.vals[t];
                } else {
                    r += self.vals[t].abs();
                }
            }
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    /// Maximum distance of an off-diagonal entry from the diagonal.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for p in 0..self.n {
            let first = self.col_idx[self.row_ptr[p]] as usize;
            bw = bw.max(p - first);
        }
        bw
    }

    /// Copy of the matrix diagonal plus an optional extra diagonal.
    pub fn diagonal(&self, extra_diag: Option<&[f64]>) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for p in 0..self.n {
            for t in self.row_ptr[p]..self.row_ptr[p + 1] {
                if self.col_idx[t] as usize == p {
                    d[p] += self.vals[t];
                }
            }
            if let Some(w) = extra_diag {
                d[p] += w[p];
            }
        }
        d
    }

    /// Lower-triangle band representation of A + diag(extra) - shift*I,
    /// as (bandwidth, row-major band data) with layout
    /// data[p*(bw+1) + d] = entry (p, p-d).
    pub fn to_lower_band(
        &self,
        extra_diag: Option<&[f64]>,
        shift: f64,
    ) -> (usize, Vec<f64>) {
        let bw = self.bandwidth();
        let w = bw + 1;
        let mut data = vec![0.0; self.n * w];
        for p in 0..self.n {
            for t in self.row_ptr[p]..self.row_ptr[p + 1] {
                let q = self.col_idx[t] as usize;
                if q <= p {
                    data[p * w + (p - q)] = self.vals[t];
                }
            }
            data[p * w] += extra_diag.map_or(0.0, |e| e[p]) - shift;
        }
        (bw, data)
    }

    /// Largest absolute row sum, a cheap operator-norm bound.
    pub fn norm_bound(&self, extra_diag: Option<&[f64]>) -> f64 {
        let (lo, hi) = self.gershgorin(extra_diag);
        lo.abs().max(hi.abs())
    }
}
