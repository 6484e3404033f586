//! Exact return times and local return rates for Sturmian subshifts.
//!
//! Everything is computed in `Q + Qα` with signs decided from the continued
//! fraction of α, so no result depends on floating point.

pub mod cf;
pub mod coding;
pub mod decimal;
pub mod error;
pub mod form;
pub mod jumps;
pub mod lang;
pub mod measure;
pub mod rates;
pub mod rotation;
pub mod surd;
pub mod verify;
pub mod word;

pub use cf::{ContinuedFraction, Schedule};
pub use error::{Error, Result};
pub use form::{frac_position, sign_of, LinearForm, Sign};
pub use rotation::CircleInterval;
pub use word::Word;
