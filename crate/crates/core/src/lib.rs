//! Quantum discord of bipartite states and its protection from amplitude
//! damping by weak measurement and measurement reversal.
//!
//! - [`densmat`]: complex matrices, density-matrix validation, partial trace,
//!   Hermitian eigensolver, trace norm.
//! - [`basis_search`]: qubit measurement parameterization, generalized
//!   Gell-Mann matrices, Bloch-vector sampling, grid and Monte Carlo optimizers.
//! - [`correlations`]: entropies, mutual information, entropic and geometric
//!   discord, concurrence.
//! - [`damping_protocol`]: damping channels, protocol filters and the
//!   closed-form damped and protected states.

pub mod basis_search;
pub mod correlations;
pub mod damping_protocol;
pub mod densmat;
pub mod error;

pub use basis_search::{MeasurementBasis, SearchConfig, SearchMethod};
pub use correlations::{DiscordResult, MeasuredSide};
pub use damping_protocol::ProtocolParams;
pub use densmat::{ComplexMatrix, DensityMatrix, C64};
pub use error::{Error, Invariant, Result};
