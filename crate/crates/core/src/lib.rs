//! List-decodable insertion/deletion codes at desk scale.
//!
//! The crate covers Bukh-Ma code families, advantage-based alignment, the
//! feasibility region `F_q` with its adversaries, the concatenated window
//! decoder, and exact enumeration versions of the martingale analysis.

pub mod align;
pub mod analysis;
pub mod bukhma;
pub mod channel;
pub mod concat;
pub mod error;
pub mod plot;
pub mod rational;
pub mod region;
pub mod seq;

mod par;

pub use error::{Error, Result};
pub use rational::Rational;
pub use seq::Seq;

/// Name of the pseudo-random generator used by every seeded routine.
pub const RNG_NAME: &str = "ChaCha8Rng";
