//! Solution families of twisted d'Alembert, Wilson and sine-type functional
//! equations on monoids and on ℤ^d.
//!
//! The pieces build on each other: a [`Carrier`](carrier::Carrier) holds the
//! monoid, [`morphisms`] enumerates characters, involutions and weights,
//! [`equations`] evaluates residuals, [`families`] builds verified closed-form
//! solutions and [`analysis`] computes the homogeneous nullspace and runs a
//! numerical completeness oracle.
//!
//! Everything is generic over [`Scalar`]. The aliases below fix the common
//! choices.

pub mod analysis;
pub mod carrier;
pub mod cyclotomic;
pub mod equations;
pub mod families;
pub mod linalg;
pub mod morphisms;
pub mod scalar;

pub use carrier::{Carrier, Element, FiniteMonoid, LatticeGroup, Scope};
pub use cyclotomic::Cyclotomic;
pub use equations::{EquationId, ScalarFunction, Slot, Slots};
pub use families::{FamilyTag, SolutionTriple};
pub use morphisms::{InvolutiveAutomorphism, MultiplicativeFunction, WeightFunction};
pub use scalar::{Real, Scalar};

pub type C64 = num_complex::Complex<f64>;
pub type C32 = num_complex::Complex<f32>;
pub type Exact = Cyclotomic;

pub type Function64 = ScalarFunction<C64>;
pub type ExactFunction = ScalarFunction<Exact>;
pub type Character64 = MultiplicativeFunction<C64>;
pub type ExactCharacter = MultiplicativeFunction<Exact>;
pub type Weight64 = WeightFunction<C64>;
pub type ExactWeight = WeightFunction<Exact>;
pub type Triple64 = SolutionTriple<C64>;
pub type ExactTriple = SolutionTriple<Exact>;
