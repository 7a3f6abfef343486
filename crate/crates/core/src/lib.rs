//! Exact computation in the group of lifts of Thompson's group T.
//!
//! The central object is the group of homeomorphisms of the real line that
//! are piecewise linear with power-of-two slopes and dyadic breakpoints and
//! that commute with the unit translation z(x) = x + 1. Everything here is
//! exact: coordinates are dyadic rationals, equality of group elements is
//! decidable, and every construction (generators and relators, nth roots of
//! fixed-point-free elements, chains embedding the rationals) is verified by
//! recomposition rather than sampling.

pub mod dyadic;
pub mod error;
pub mod plmap;
pub mod qembed;
pub mod report;
pub mod roots;
pub mod tbar;
pub mod words;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use plmap::{ChoiceSeed, Interval, PLMap};
pub use qembed::{Chain, ChainKind};
pub use report::{Check, VerificationReport};
pub use roots::RootGerm;
pub use tbar::{DisplacementSign, TBarElement};
pub use words::{Convention, Generator, Named, Word, WordForm};
