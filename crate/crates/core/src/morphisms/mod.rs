//! Structure maps: multiplicative functions χ, involutive automorphisms σ,
//! admissible weights μ and additive functions A, plus their enumeration on
//! finite monoids.

mod additive;
mod automorphism;
mod character;
mod enumerate;
mod root;

use std::sync::Arc;

use thiserror::Error;

use crate::carrier::{Carrier, CarrierError};

pub use additive::{
    additive_functions, additive_kernel_dimension, odd_additive_basis, AdditiveFunction, AdditiveSpace,
    PeriodWitness,
};
pub use automorphism::InvolutiveAutomorphism;
pub use character::{character_ideal, sigma_branch, Branch, MultiplicativeFunction, WeightFunction};
pub use enumerate::{
    enumerate_admissible_mu, enumerate_involutive_automorphisms, enumerate_multiplicative,
    enumerate_multiplicative_with_generators,
};
pub use root::RootValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("structure maps live on different carriers")]
    CarrierMismatch,
    #[error("operation needs a finite carrier")]
    NotFinite,
    #[error("operation needs a lattice carrier")]
    NotLattice,
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("not multiplicative at ({x}, {y})")]
    NotMultiplicative { x: String, y: String },
    #[error("multiplicative function vanishes identically")]
    ZeroCharacter,
    #[error("lattice character base {0} is zero")]
    ZeroBase(usize),
    #[error("map is not an involution at {0}")]
    NotInvolutive(String),
    #[error("map is not a homomorphism at ({x}, {y})")]
    NotHomomorphism { x: String, y: String },
    #[error("weight is not admissible: μ(x·σ(x)) != 1 at x = {0}")]
    NotAdmissible(String),
    #[error("not additive at ({x}, {y})")]
    NotAdditive { x: String, y: String },
    #[error("additive function is not σ-odd at {0}")]
    NotSigmaOdd(String),
    #[error("inversion is an automorphism only of an abelian group")]
    NotAbelianGroup,
    #[error("generating set does not generate the monoid")]
    NotGenerating,
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

pub(crate) fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
