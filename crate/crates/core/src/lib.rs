//! Finite categories and presheaves, the category of elements and the
//! Grothendieck construction, and exhaustive checks of the isomorphisms
//! relating iterated Σ-constructions.

pub mod error;
pub mod elements;
pub mod fincat;
pub mod grothendieck;
pub mod report;
pub mod testkit;
pub mod theorems;

pub use error::{Error, Result};
pub use fincat::{FinCategory, Functor, Limits, Name, NatTrans};
pub use report::{Law, ValidationReport, Violation};
