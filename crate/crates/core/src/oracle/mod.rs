//! Randomized degree-sequence oracle: `deg(f^n)` from the restriction of `f^n` to a
//! random line over a large prime field.

pub mod line;
pub mod sequence;
pub mod spec;

pub use line::{Embedding, ParamLine};
pub use sequence::{
    degree_sequence, degree_sequence_with, delta_estimate, pullback_step, DegreeReport,
    DeltaEstimate, OracleConfig, Strategy, TrialRecord, DEFAULT_RATIO_TOL,
};
pub use spec::{FastEval, MapHandle, RationalMapSpec, Stage};
