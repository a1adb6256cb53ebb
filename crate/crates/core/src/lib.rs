//! Spectral toolkit for a planar strip waveguide with mixed
//! Dirichlet/Neumann boundary conditions that switch sides at a
//! configurable abscissa.
//!
//! The strip is `R x (-a, a)`. The lower wall carries a Dirichlet
//! condition left of `-eps` and a Neumann condition right of it; the
//! upper wall mirrors this (Neumann left of `eps`, Dirichlet right).
//! The continuous spectrum of the Laplacian on this geometry starts at
//! the threshold `(pi/4a)^2`, and the crate computes the quantities
//! that control whether discrete spectrum appears below it:
//!
//! - closed-form threshold constants and rotated-frame geometry
//!   ([`geometry`]),
//! - the transcendental matching equation for the lowest eigenvalue of
//!   an auxiliary one-dimensional cross-section problem
//!   ([`transcendental`]),
//! - finite-difference eigensolvers for one-dimensional step-potential
//!   operators ([`schrodinger1d`]) and for the full two-dimensional
//!   strip ([`laplacian2d`]),
//! - scalar optimization of the rotation angle ([`optimize`]),
//! - Hardy-type lower-bound certification and its failure mechanism
//!   for the non-switched strip ([`laplacian2d::hardy`]).
//!
//! Lengths are arbitrary but consistent; all spectral quantities scale
//! as `1/length^2` and the API carries the half-width `a` explicitly.

pub mod error;
pub mod geometry;
pub mod laplacian2d;
pub mod numerics;
pub mod optimize;
pub mod schrodinger1d;
pub mod transcendental;

pub use error::{Error, Result};
