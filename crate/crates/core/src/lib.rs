//! Exact computer algebra for power operations at height 2 and the prime 2.
//!
//! The ground ring is `R = Z[a]`. The crate provides the ring `Γ` of
//! operations with its admissible basis, Γ-modules such as `ω^n`, the free
//! amplified Γ-ring with its `θ` operator, the trace, norm and logarithm
//! operators, the Koszul resolution with Tor computations, and the
//! elliptic-curve isogeny from which all of the relations are re-derived.

pub mod amplified;
pub mod elliptic;
pub mod error;
pub mod expr;
pub mod gamma;
pub mod gmod;
pub mod koszul;
pub mod local;
pub mod mpoly;
pub mod normlog;
pub mod padic;
pub mod pid;
pub mod poly;
pub mod ring;
pub mod series;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
