//! Finite-depth certification of separable-stability for PSL(2,C) representations
//! of compression-body groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`]: presentations, words, free-product normal forms, cyclic classes,
//!   Cayley balls and the separable test set.
//! - [`whitehead`]: classical and labelled Whitehead graphs, Whitehead moves,
//!   free-group minimisation and the labelled-graph classifier.
//! - [`hyperbolic`]: Moebius maps acting on upper half-space, geodesic planes and
//!   trace-coordinate representations of the rank-two free group.
//! - [`stability`]: ratio scores, nesting certificates, verdict assembly and the
//!   automorphism census.
//! - [`scan`]: the character-variety slice scanner and its file formats.

pub mod error;
pub mod group;
pub mod hyperbolic;
pub mod scan;
pub mod stability;
pub mod whitehead;

pub use error::{Error, Result};
