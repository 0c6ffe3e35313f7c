//! Numerical laboratory for representation varieties `Hom(Γ, SL(n, ℂ))`.
//!
//! The crate is `no_std` (it needs `alloc`) and is organized bottom-up:
//!
//! - [`presentation`]: finite group presentations, words and their evaluation.
//! - [`matgroup`]: the small complex matrix kernel for `SL(n, ℂ)` and `SU(n)`, `n ≤ 4`.
//! - [`repvar`]: representation tuples, residuals, conjugation and samplers.
//! - [`kempfness`]: moment-map gradient flow and the normal-tuple scaling retraction.
//! - [`retract`]: the Cartan (KAK) interpolation homotopy and its verifier.
//! - [`census`]: case-by-case classification of the angle RAAG character variety.
//!
//! All randomness is passed in explicitly, so every result is a pure function
//! of the inputs and the seed.
#![no_std]
// `num_traits::Float` supplies f64 math without std; modules import it under
// `allow(unused_imports)` because std's inherent methods win whenever std is linked.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod census;
pub mod kempfness;
pub mod matgroup;
pub mod presentation;
pub mod repvar;
pub mod retract;

pub use matgroup::{MatC, C64};
pub use presentation::{GroupPresentation, Word};
pub use repvar::Rep;

/// Deterministic generator used by the seeded drivers (census, CLI).
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the crate's seeded generator.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
