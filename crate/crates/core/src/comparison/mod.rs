//! Numerical checks of the comparison theorems: eigenvalue comparison with
//! model balls, volume-density monotonicity, the Wronskian inequality,
//! the catenoid instance of the minimal-submanifold bound and the
//! stability criterion.

mod surface;
mod warps;
mod wronskian;

pub use surface::*;
pub use warps::*;
pub use wronskian::*;
