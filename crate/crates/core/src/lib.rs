//! Finite left cancellative left semi-braces.
//!
//! A left cancellative left semi-brace is a triple `(B, +, ∘)` where `(B, +)` is a
//! left cancellative semigroup, `(B, ∘)` is a group with identity `0`, and
//!
//! ```text
//! a ∘ (b + c) = a ∘ b + a ∘ (a⁻ + c)
//! ```
//!
//! holds for all `a, b, c`. Every structure in this crate is a pair of Cayley
//! tables over the carrier `0..n`, with the multiplicative identity at index 0.
//!
//! The crate covers axiom verification ([`brace`]), explicit constructions
//! ([`construct`]), the induced set-theoretic Yang–Baxter solution ([`ybe`]),
//! the left and right nilpotency series ([`nilpotency`]), isomorphism testing
//! and enumeration up to isomorphism ([`iso`], [`enumerate`], [`classify`]).
//!
//! Search-heavy routines take an [`Exec`] and fan out over rayon when the
//! `parallel` feature is enabled; output order never depends on the schedule.

pub mod brace;
pub mod cache;
pub mod catalog;
pub mod classify;
pub mod construct;
pub mod enumerate;
mod error;
mod exec;
pub mod group;
pub mod iso;
pub mod nilpotency;
mod perm;
pub mod table;
pub mod ybe;

pub use brace::{Diagnostic, SemiBrace};
pub use error::{Error, Result};
pub use exec::Exec;
pub use group::{FiniteGroup, GroupHom};
pub use perm::Permutation;
pub use table::CayleyTable;
