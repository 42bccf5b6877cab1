//! Computational engine for finite (unitary) fusion-category symmetries:
//! tube categories, generalised charges, isometric transition-channel bases,
//! and the induced quantum channels and transition probabilities.

pub mod error;
pub mod numerics;
pub mod fusion;
pub mod tube;
pub mod charges;
pub mod channel;
pub mod catalog;
pub mod schema;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, Tolerance};
