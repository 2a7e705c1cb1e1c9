//! Exact deciders for isospectrality of lens spaces.

pub mod arith;
pub mod error;
pub mod genfun;
pub mod ikeda;
pub mod lattice;
pub mod lens;
pub mod lmr;
pub mod search;
pub mod spectrum;
pub mod weights;

pub use error::{Error, Result};
pub use lattice::{CongruenceLattice, CountTable};
pub use lens::{CanonicalForm, LensSpace};
