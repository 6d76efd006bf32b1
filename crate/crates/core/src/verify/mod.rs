//! Quantitative checks tying the Fekete side to the random process.

mod dist;
mod bounds;
mod logtrunc;
mod moments;

pub use dist::*;
pub use bounds::*;
pub use logtrunc::*;
pub use moments::*;
