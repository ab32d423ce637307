//! Membership testing and numerical irreducible decomposition.

mod membership;
mod monodromy;
mod partition;
mod trace;

pub use membership::{
    member_of_any, membership_test, test_slice_type, Membership, MembershipTrace, SliceVerdict,
};
pub use monodromy::{cross_slice_link, link_to_point, monodromy_group, monodromy_loop, PointId};
pub use partition::{
    decompose, decompose_all, trace_cuts, Component, DecomposeOptions, Decomposition, EdgeKind,
    Partition, TraceCut,
};
pub use trace::{
    build_trace_homotopy, is_affine_linear, point_traces, subset_trace, trace_test, trace_values,
    GeneralCoordinate, TraceSample, TRACE_TIMES, TRACE_TOL,
};
