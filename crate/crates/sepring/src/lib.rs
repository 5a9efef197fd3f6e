//! Exact computation in concretely representable von Neumann regular rings:
//! finite products of matrix rings over prime fields with corner and
//! opposite wrappers, plus a windowed column-finite matrix ring.
//!
//! The library provides the inner-inverse calculus (inner, reflexive, and
//! unit inner inverses), repeater constructions with explicit isomorphism
//! witnesses, equational identity checking, constructive exchange-ring
//! lemmas, and count-certified elementary diagonal reduction of 2x2
//! matrices with replayable certificates.

pub mod cfm;
pub mod diagred;
pub mod error;
pub mod exchange;
pub mod inverses;
pub mod linalg;
pub mod monoid;
pub mod repeaters;
pub mod ring;
pub mod variety;

pub use error::{Error, Result};
pub use ring::{ElementSampler, Factor, RingDescriptor, RingElement};
