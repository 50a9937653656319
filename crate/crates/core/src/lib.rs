pub mod charpoly;
pub mod error;
pub mod floquet;
pub mod io;
pub mod laurent;
pub mod lattice;
pub mod potential;
pub mod rigidity;
pub mod rng;

pub use error::{Error, Result};
