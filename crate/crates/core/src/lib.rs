//! Connected subgraph arrangements with exact arithmetic.

pub mod error;
pub mod exactlin;
pub mod graphs;

pub use error::{CsaError, Result};
pub use exactlin::{RatVector, Subspace};
pub use graphs::{FamilySpec, FamilyTag, Graph};
pub mod arrangement;
pub mod budget;
pub mod lattice;
pub mod poly;
pub mod verdict;
pub mod freeness;
pub mod factorization;
pub mod tables;
pub mod formality;
pub mod regions;
pub mod topology;

pub use arrangement::{Arrangement, Hyperplane};
pub use budget::Budget;
pub use poly::IntPolynomial;
pub use lattice::{IntersectionLattice, Flat};
pub use verdict::{Status, Verdict};
