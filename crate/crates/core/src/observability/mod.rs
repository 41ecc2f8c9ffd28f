//! Observability constants: eigenspace Gramians over the ball, the full-period
//! inequality, the one-dimensional Helmholtz estimate and Nazarov-Turan ratios.

mod gramian;
mod helmholtz;
mod inequality;
mod nazarov;
mod scaling;

pub use gramian::{
    eigenspace_gramian, min_eigenvalue, observability_constant, EigenRow, EigenspaceBasis,
    GramianMatrix, ObservabilityReport,
};
pub use helmholtz::{helmholtz_1d_constant, residual_weight, symmetric_interval_gram};
pub use inequality::{
    extremal_state, period_blocks, period_integral, random_truncated_field,
    verify_inequality_samples, InequalityReport, PeriodBlocks, SampleRecord, CROSS_TOL,
    INEQUALITY_SLACK, MIN_QUAD_POINTS,
};
pub use nazarov::{
    interval_gram, nazarov_growth, nazarov_ratio, FrequencySet, Interval1D, NazarovGrowth,
    NazarovRow,
};
pub use scaling::{
    least_squares, scaling_study, ScalingFit, ScalingReport, ScalingRow, LAW_LOG,
    LAW_LOG_OVER_LOGLOG,
};
