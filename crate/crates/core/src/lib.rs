//! Bitrops, commutative mnesor spaces and relational selection built on
//! them.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitrop;
pub mod checker;
pub mod error;
pub mod mnesor;
pub mod relalg;
pub mod subset;

pub use bitrop::{Bitrop, MinPlus, SubsetBitrop};
pub use error::AlgebraError;
pub use mnesor::{
    Extended, ExtendedMinPlus, MnesorSpace, Relation, RelationSpace, TruncatedTropical,
};
pub use subset::Subset;
