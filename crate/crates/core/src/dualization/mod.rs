//! Dualization of double vector bundles and of DVB* sequences.

pub mod adual;
pub mod cstar;
pub mod pairing;
pub mod side_dual;
pub mod triality;
pub mod udual;
pub mod xspace;

pub use pairing::{SlicePairing, ValuedPairing};
pub use side_dual::{dual_over, dual_over_a, dual_over_b, SideDual};
pub use udual::{transpose, u_dual, DualError, DualSide, UDual};
pub use xspace::{xspace, DoubleLinearFunctional};
