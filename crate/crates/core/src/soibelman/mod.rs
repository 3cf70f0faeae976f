//! Truncated shift-operator models of the Soibelman representation of
//! O_q(SU(n+1)), and the two routes to its `q -> 0` limit: specialize each
//! tensor leg after projecting to rank one, or specialize globally first.

mod checks;
mod entry;
mod ops;
mod pipeline;

pub use checks::{
    commuting_square, crystal_limit_comparison, fixed_q_comparison, generator, star_compatibility, theta_q,
    CommutingSquareReport, LimitRow, PipelineRow,
};
pub use entry::{recognize_rational, Entry, ExactAt, Field, FloatAt, Leading, LeadingOrder, Surd};
pub use ops::{compare_on_interior, Deviation, InteriorBlock, LegOp, TruncOp, TruncSpace};
pub use pipeline::{
    chi_q, compare_limits, compare_numeric_limit, iterated_coproduct, my_q, pi0_gp, pi0_my, pi_q, project_leg, psi_q,
    richardson, Cutoffs, LegKind, Layout, LimitOp, NumericLimit, Projected, DEFAULT_QS, FALLBACK_QS, MAX_DIMENSION,
};
