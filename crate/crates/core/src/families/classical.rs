//! Translation from the constants of the classical statement of the
//! application-equation solutions to the parameters of [`ApplicationInput`].
//!
//! The classical case (a) reads
//! `h = (1/α)[u + c₂v]`, `f = ½[(1 + c₁c₂/2)u + 2c₂v + θ]`,
//! `g = ½[(1 - c₁c₂/2)u - θ]`; it solves the equation only when `α² = 1`
//! and `c₁ = 2c₂` (or `c₂ = 0`), and then equals case A with `alpha = 1/α`.
//!
//! The classical case (b) reads `h = (1/α)c₂χ(2 + A)` with matching `f`, `g`;
//! it solves the equation only when `α² = 2c₂`, and then equals case B with
//! `alpha = α` and `kappa = 1/2`.
//!
//! [`ApplicationInput`]: super::ApplicationInput

use num_rational::Ratio;

use crate::scalar::Scalar;

use super::FamilyError;

fn close<T: Scalar>(a: &T, b: &T) -> bool {
    a.approx_eq(b, T::residual_tolerance() * a.modulus().max(b.modulus()).max(1.0))
}

/// `(alpha, c2)` for case A from classical `(α, c₁, c₂)`.
pub fn application_a<T: Scalar>(alpha: T, c1: T, c2: T) -> Result<(T, T), FamilyError> {
    if !close(&(alpha.clone() * alpha.clone()), &T::one()) {
        return Err(FamilyError::InvalidParams("classical case (a) needs α² = 1".into()));
    }
    if !c2.is_zero() && !close(&c1, &(T::from_integer(2) * c2.clone())) {
        return Err(FamilyError::InvalidParams("classical case (a) needs c₁ = 2c₂".into()));
    }
    Ok((alpha.inv(), c2))
}

/// `(alpha, kappa)` for case B from classical `(α, c₂)`.
pub fn application_b<T: Scalar>(alpha: T, c2: T) -> Result<(T, T), FamilyError> {
    if alpha.is_zero() || !close(&(alpha.clone() * alpha.clone()), &(T::from_integer(2) * c2)) {
        return Err(FamilyError::InvalidParams("classical case (b) needs α² = 2c₂ ≠ 0".into()));
    }
    Ok((alpha, T::from_gaussian(Ratio::new(1, 2), Ratio::from_integer(0))))
}
