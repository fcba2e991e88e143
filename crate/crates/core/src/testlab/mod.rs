//! Test functions, test point sets and error metrics for the experiments.

mod functions;
mod points;
mod report;

pub use functions::{scaling_constant, FunctionId, TestFunction, SCALING_GRID};
pub use points::{build_test_point_set, near_node_offsets, TestPointSet, UNIFORM_POINTS};
pub use report::{error_report, ErrorReport};
