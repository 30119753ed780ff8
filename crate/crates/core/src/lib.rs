pub mod arith;
pub mod batteries;
pub mod counts;
pub mod enclosure;
pub mod error;
pub mod lattice;
pub mod order;
pub mod poly;
pub mod region;
pub mod volume;
pub mod weil;

pub use error::{Error, Result};
