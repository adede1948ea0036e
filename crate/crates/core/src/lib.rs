//! Certified isolation of the real roots of square polynomial systems by
//! interval subdivision with adaptive arithmetic precision.

pub mod benchmark;
pub mod bigfloat;
pub mod certify;
pub mod enclosure;
pub mod generate;
pub mod interval;
pub mod poly;
pub mod precision;
pub mod report;
pub mod solver;
pub mod strategy;

pub use certify::SolutionBox;
pub use enclosure::{ExtensionOrder, KrawczykVariant};
pub use interval::{parse_box, IBox, Interval, Precision};
pub use poly::{parse_system, MPoly, PolySystem};
pub use precision::C2Form;
pub use solver::{refine_solutions, solve_adaptive, SolveError, SolveReport, SolverConfig, Status};
pub use strategy::Strategy;
