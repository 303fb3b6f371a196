//! Exact computations with quadratic forms, even Clifford algebras and their
//! invariants in Witt and Brauer groups.

pub mod algebras;
pub mod brauer;
pub mod clifford;
pub mod dedekind;
pub mod error;
pub mod exceptional;
pub mod forms;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod scalars;
pub mod verify;

pub use error::{Error, Result};
