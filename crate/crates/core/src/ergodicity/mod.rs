//! Light-cone channels, transfer matrices, gliders and dynamical correlators.

pub mod chain;
pub mod correlator;
pub mod channel;
pub mod gliders;
pub mod spectrum;
pub mod transfer;

pub use correlator::{correlator, max_correlation, on_light_cone, traceless_basis};
pub use channel::{apply_channel, channel_m, Sign};
pub use gliders::{extract_gliders, GliderCandidate};
pub use spectrum::{glider_count, spectrum, trivial_spectrum_check, GliderCount, PhaseApprox, SpectrumReport, TrivialSpectrumCheck};
pub use transfer::{transfer_matrix, Direction, TransferMatrix, DEFAULT_CAP};
