//! Symbolic and numeric toolkit for the homogeneous (line-bundle) Hamiltonian
//! formalism of field theory.

pub mod bundles;
pub mod driver;
pub mod evolve;
pub mod gravity;
pub mod hamilton;
pub mod jetcalc;
pub mod model;
pub mod symexpr;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/jets.md")]
    mod jets {}
    #[doc = include_str!("../../../book/src/connections.md")]
    mod connections {}
    #[doc = include_str!("../../../book/src/hamiltonian.md")]
    mod hamiltonian {}
    #[doc = include_str!("../../../book/src/gauge.md")]
    mod gauge {}
    #[doc = include_str!("../../../book/src/integration.md")]
    mod integration {}
    #[doc = include_str!("../../../book/src/gravity.md")]
    mod gravity {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
}
