//! Exact computer algebra for second-order synthetic differential geometry.
//!
//! The base ring is modelled by truncated nilpotent polynomial algebras over ℚ
//! ([`weil`]). On top of that sit the infinitesimal neighbourhood structures
//! ([`spaces`]), Kock–Lawvere normal-form extraction ([`calculus`]), affine
//! connections in a chart ([`connection`]), infinitesimal groups ([`igroup`])
//! and matrix Lie groups ([`liegroup`]).

pub mod calculus;
pub mod connection;
pub mod error;
pub mod igroup;
pub mod liegroup;
pub mod linalg;
pub mod rational;
pub mod sample;
pub mod spaces;
pub mod tensor;
pub mod weil;

pub use error::{Error, Result};
pub use rational::Rational;
