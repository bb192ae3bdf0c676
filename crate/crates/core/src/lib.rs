//! Exact lattice-polytope toolkit.
//!
//! Mixed volumes and mixed degree of polytope tuples, affine unimodular
//! normal forms, Cayley sums, lattice projections onto unimodular
//! simplices, and the classification of triples of lattice 3-polytopes of
//! mixed degree one.

mod bits;
pub mod catalog;
pub mod classify;
pub mod decomp;
pub mod equiv;
pub mod error;
pub mod intlin;
pub mod mixed;
pub mod polytope;
pub mod proj;
#[cfg(test)]
mod testutil;

pub use equiv::{affine_automorphisms, are_equivalent, normal_form, tuple_equivalent, AffineUnimodularMap, NormalForm};
pub use error::{Error, Result};
pub use intlin::{Int, IntMatrix, IntVector};
pub use mixed::{mixed_degree, mixed_volume, soprunov_check, MixedDegreeReport};
pub use polytope::{cayley_sum, hull, Facet, LatticePolytope, PolytopeTuple};
pub use proj::{common_projection, project_along, InfinitePrism, Projection};
