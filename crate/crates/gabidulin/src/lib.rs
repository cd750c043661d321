//! Generalized Gabidulin codes over cyclic Galois extensions, in exact
//! arithmetic: finite fields and number fields share one code path.
//!
//! The crate is organized around five building blocks:
//!
//! - [`exact_fields`]: towers of quotient extensions over Q or F_p with a
//!   designated cyclic automorphism and exact K-linear algebra;
//! - [`skew_poly`]: the Ore ring L[X;theta] with operator evaluation,
//!   Euclidean divisions, annihilators and interpolators;
//! - [`rank_metric`]: the four rank weights and their induced distances;
//! - [`gabidulin_codec`]: code construction, encoding, error decoding
//!   (Gaussian and Welch-Berlekamp style with variants), line and
//!   network-coding erasures, plus brute-force oracles for testing;
//! - [`residue_reduction`]: integral codes over number rings decoded by
//!   reduction modulo an inert prime and lifting from a known alphabet.

pub mod demo;
pub mod error;
pub mod exact_fields;
pub mod gabidulin_codec;
pub mod instances;
pub mod json;
pub mod rank_metric;
pub mod residue_reduction;
pub mod skew_poly;

pub use error::{Error, Result};
