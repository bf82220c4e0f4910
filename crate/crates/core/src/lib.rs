//! Dual-unitary two-site gates and the brickwork circuits built from them.
//!
//! Gates are dense complex matrices (see [`tensor`] for the index packing),
//! permutation gates additionally live in [`perm_map`] as pairs of squares.
//! [`ergodicity`] counts gliders through light-cone transfer matrices,
//! [`ca`] runs the classical permutation circuits, and [`linear_ca`] does the
//! exact finite-field order computations for the linear model.

pub mod builtins;
pub mod ca;
pub mod cmatrix;
pub mod constructions;
pub mod ergodicity;
pub mod error;
pub mod linear_ca;
pub mod perm_map;
pub mod tensor;

pub use cmatrix::CMat;
pub use error::{Error, Result};
pub use perm_map::{MapFlags, PermMap};
pub use tensor::{Gate, GateFlags, LegPair, Tolerance, D4};

pub use num_complex::Complex64 as C64;
