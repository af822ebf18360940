//! Verification engine for nonassociative algebras twisted by group 3-cocycles
//! over finite abelian groups.

#![allow(clippy::needless_range_loop)]

pub mod cochain;
pub mod coeff;
pub mod crossed;
pub mod error;
pub mod group;
pub mod kernel;
pub mod octonion;
pub mod scalar;
pub mod split;
pub mod strictify;
pub mod suite;
pub mod system;
pub mod takai;
pub mod torus;
pub mod zigzag;
pub mod zmod;

pub use cochain::{PhaseCochain, Tricharacter, Turn};
pub use error::{Error, Result};
pub use group::{FiniteAbelianGroup, GroupElement};
pub use scalar::{Real, C};

/// Double-precision instantiations.
pub type Kernel = kernel::TwistedKernel<f64>;
pub type System = system::TwistedSystem<f64>;
pub type Crossed = crossed::CrossedElement<f64>;
pub type DoubleCrossed = takai::DoubleCrossedElement<f64>;
/// Single-precision instantiations.
pub type Kernel32 = kernel::TwistedKernel<f32>;
pub type System32 = system::TwistedSystem<f32>;
pub type Crossed32 = crossed::CrossedElement<f32>;
