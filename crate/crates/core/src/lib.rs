pub mod clock;
pub mod commutator;
pub mod error;
pub mod invariant;
pub mod linalg;
pub mod pairs;
pub mod sample;
pub mod tolerance;
pub mod uncertainty;

pub use error::{Error, Result};
pub use tolerance::ToleranceConfig;
