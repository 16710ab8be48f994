//! Björck CAZAC sequences of prime length and their discrete periodic
//! ambiguity functions.
//!
//! The crate builds the sequences, evaluates the ambiguity surface through a
//! prime-length FFT, computes the Kloosterman and Gauss sums that govern it,
//! and checks the bound `|A(u)[m,n]| < 2/√p + 4/p` over ranges of primes.

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod expsums;
pub mod format;
pub mod numtheory;
pub mod reference;
pub mod scan;
pub mod sequences;
pub mod transform;

pub use error::{Error, Result};
pub use numtheory::{PrimeContext, ResidueClass};
pub use sequences::UnimodularSequence;
