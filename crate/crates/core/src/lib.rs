//! Elementary-type constructions of cyclotomic pro-p pairs, factoring of
//! homomorphisms into finite p-groups, and symbol-length bounds.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod cohomology;
pub mod construction;
pub mod fpgroup;
pub mod homomorph;
pub mod padic;
pub mod word;
