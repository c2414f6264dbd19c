//! Exact scalar and polynomial arithmetic, plus the two-tier inequality
//! check on the nonnegative reals: coefficient dominance (sound) and grid
//! sampling (diagnostic only).

mod grid;
mod poly;
mod scalar;

pub use grid::Grid;
pub use poly::Polynomial;
pub use scalar::{ceil_to_u64, decimal_string, Scalar};
