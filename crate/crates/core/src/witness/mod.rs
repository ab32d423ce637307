//! Slice types, slices, charts and witness set collections.

mod set;
mod slice;

pub use set::{
    compile, move_slice, point_equal, slice_homotopy, square_system, Multidegree,
    WitnessCollection, WitnessSet,
};
pub use slice::{
    random_slice, slice_through_point, Chart, LinearSlice, SegreSlice, SliceFamily, SliceType,
};
