//! Wedderburn profiles of finite-dimensional complex algebras, the integer
//! criteria deciding when spectrum-shrinking and spectrum-preserving maps
//! between them exist, explicit block-repetition witness maps, and
//! randomized verification of the resulting spectral claims.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod diophantine;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mapbuilder;
pub mod scalar;
pub mod sma;
pub mod verify;
pub mod wedderburn;

pub use algebra::{Algebra, Element, IdealBasis, QuotientMap};
pub use diophantine::{Decision, Verdict};
pub use error::{Error, Result};
pub use mapbuilder::{build_block_map, evaluate_map, ShrinkMapSpec, SourcePipeline};
pub use scalar::GaussRational;
pub use sma::{condensation, sma_algebra, Condensation, QuasiOrder};
pub use verify::{VerificationReport, DEFAULT_SAMPLES, DEFAULT_TOL};
pub use wedderburn::{wedderburn_profile, WedderburnProfile};
