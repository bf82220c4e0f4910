//! Exact order of the linear brickwork matrix over `F_p` and the number
//! theory around it.

pub mod arith;
pub mod brickwork;
pub mod checks;
pub mod gf;
pub mod order;

pub use brickwork::{build_v, BrickworkMatrix};
pub use gf::{FpMat, Gf};
pub use order::{matrix_order, OrderOptions, OrderReport};
