//! Exact arithmetic in skew PBW extensions σ(R)⟨x₁,…,xₙ⟩ and the module
//! theory of their induced modules M⟨X⟩.

pub mod dimension;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod good;
pub mod invariant;
pub mod io;
pub mod module;
pub mod pbw;
pub mod primes;
pub mod ring;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};
