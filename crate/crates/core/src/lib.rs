//! Delta-matroids, multimatroids and ribbon graphs.

pub mod bits;
pub mod bridge;
pub mod delta;
pub mod harness;
pub mod io;
pub mod mm;
pub mod report;
pub mod ribbon;

pub use bits::Mask;
pub use delta::{DeltaError, DeltaMatroid, ElementRole, MinorOp, MinorSpec, SetSystem};
pub use report::CheckReport;
pub use mm::Multimatroid;
pub use ribbon::RibbonGraph;
