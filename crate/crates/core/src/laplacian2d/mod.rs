//! Finite-difference model of the Laplacian on the truncated strip:
//! grid and operator assembly, a banded shift-invert eigensolver, and
//! mesh-ladder studies of the threshold behavior.

pub mod eigen;
pub mod hardy;
pub mod operator;

pub use eigen::{smallest_eigenpair, smallest_eigenvalue, EigenConfig, EigenResult2D};
pub use hardy::{
    critical_eps, hardy_failure_demo, hardy_form_check, lemma_hardy_quadrature_check,
    standard_suite, threshold_gap, CriticalEpsConfig, CriticalEpsReport, FailureDemoReport,
    HardyFormReport, HardyWeight, LadderConfig, LadderTrend, LemmaCase, LemmaReport,
    SpectralVerdict, ThresholdGapReport,
};
pub use operator::{assemble, DiscreteOperator2D, Grid2D, Truncation};
