//! Kronecker and plethysm coefficients of the symmetric group, computed two
//! independent ways: classical character-theoretic oracles, and exact
//! simulation of pipelines of commuting Hermitian projectors on
//! `C[S_n]^{⊗k}` whose image dimension equals the coefficient.

pub mod characters;
pub mod combinatorics;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod projectors;
pub mod protocol;
pub mod specht;
pub mod suites;
pub mod symgroup;

pub use combinatorics::{Partition, Tableau};
pub use error::{Error, Result};
pub use symgroup::{Permutation, SubgroupDescriptor};
