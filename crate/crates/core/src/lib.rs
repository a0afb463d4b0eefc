//! Zero-sum constants of finite Abelian groups.
//!
//! The crate is organised around four pieces:
//!
//! * [`group`]: canonical finite Abelian groups, their elements and primary decomposition.
//! * [`search`]: zero-sum subsequence detection, exact `s(G)` / `η(G)` by symmetry-reduced
//!   exhaustive search, and Property D verification.
//! * [`bounds`]: closed-form lower and upper bounds with exact integerization, the
//!   `γ_{k,q}` infimum and derivation certificates that replay to their value.
//! * [`oracle`]: naive brute-force reference implementations used to cross-check the rest.
//!
//! The [`cli`] module backs the `egz` binary.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod group;
pub mod oracle;
pub mod search;
pub mod sequence;

pub use error::{Error, Result};
pub use group::{FiniteAbelianGroup, GroupElement, PrimaryComponent};
pub use sequence::{LengthSpec, Sequence, ZeroSumWitness};
