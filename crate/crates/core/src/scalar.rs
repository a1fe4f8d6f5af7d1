//! Scalar fields the library computes over.
//!
//! Everything above this module is written against [`Scalar`], so the same
//! constructors and residual scans run in double precision, single precision
//! or exactly (see [`Cyclotomic`](crate::Cyclotomic)).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, One, ToPrimitive, Zero};

/// Real floating-point type backing a complex scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Absolute tolerance for residual checks.
    const RESIDUAL_TOL: f64;
    /// Pivot threshold used when deciding numerical rank.
    const RANK_TOL: f64;
}

impl Real for f64 {
    const RESIDUAL_TOL: f64 = 1e-9;
    const RANK_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const RESIDUAL_TOL: f64 = 1e-4;
    const RANK_TOL: f64 = 1e-5;
}

/// A complex scalar: closed under the field operations, with exact
/// constructors for roots of unity and Gaussian rationals.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact and equality is decidable.
    const EXACT: bool;

    /// `exp(2πi·rotation)`.
    fn root_of_unity(rotation: Ratio<i64>) -> Self;

    /// `re + i·im` for rational parts.
    fn from_gaussian(re: Ratio<i64>, im: Ratio<i64>) -> Self;

    /// Lossy conversion from a double-precision complex number; `None` for
    /// exact types.
    fn from_complex64(z: Complex<f64>) -> Option<Self>;

    fn to_complex64(&self) -> Complex<f64>;

    fn conj(&self) -> Self;

    /// Residual tolerance for this type (zero for exact types).
    fn residual_tolerance() -> f64;

    /// Threshold below which a pivot counts as zero.
    fn rank_tolerance() -> f64;

    fn modulus(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn from_integer(n: i64) -> Self {
        Self::from_gaussian(Ratio::from_integer(n), Ratio::from_integer(0))
    }

    /// Zero test used by elimination: exact types compare with zero, float
    /// types compare the modulus against `scale * rank_tolerance()`.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= scale.max(1.0) * Self::rank_tolerance()
        }
    }

    /// Equality up to `tol` for float types; exact equality otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).modulus() <= tol
        }
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Integer power; negative exponents invert.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { self.inv() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn half() -> Self {
        Self::from_gaussian(Ratio::new(1, 2), Ratio::from_integer(0))
    }
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl<F: Real> Scalar for Complex<F> {
    const EXACT: bool = false;

    fn root_of_unity(rotation: Ratio<i64>) -> Self {
        let reduced = rotation - rotation.floor();
        let angle = 2.0 * std::f64::consts::PI * ratio_to_f64(reduced);
        // exact values at the quarter turns keep i^k free of rounding noise
        let (s, c) = match (*reduced.numer(), *reduced.denom()) {
            (0, _) => (0.0, 1.0),
            (1, 4) => (1.0, 0.0),
            (1, 2) => (0.0, -1.0),
            (3, 4) => (-1.0, 0.0),
            _ => angle.sin_cos(),
        };
        Complex::new(F::from_f64(c).unwrap(), F::from_f64(s).unwrap())
    }

    fn from_gaussian(re: Ratio<i64>, im: Ratio<i64>) -> Self {
        Complex::new(
            F::from_f64(ratio_to_f64(re)).unwrap(),
            F::from_f64(ratio_to_f64(im)).unwrap(),
        )
    }

    fn from_complex64(z: Complex<f64>) -> Option<Self> {
        Some(Complex::new(F::from_f64(z.re)?, F::from_f64(z.im)?))
    }

    fn to_complex64(&self) -> Complex<f64> {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn residual_tolerance() -> f64 {
        F::RESIDUAL_TOL
    }

    fn rank_tolerance() -> f64 {
        F::RANK_TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C64 = Complex<f64>;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(C64::root_of_unity(Ratio::new(1, 4)), Complex::new(0.0, 1.0));
        assert_eq!(C64::root_of_unity(Ratio::new(5, 4)), Complex::new(0.0, 1.0));
        assert_eq!(C64::root_of_unity(Ratio::new(-1, 2)), Complex::new(-1.0, 0.0));
    }

    #[test]
    fn cube_root_cubes_to_one() {
        let w = C64::root_of_unity(Ratio::new(1, 3));
        assert!(w.powi(3).approx_eq(&C64::one(), 1e-14));
        assert!(w.powi(-3).approx_eq(&C64::one(), 1e-14));
    }

    #[test]
    fn powi_negative() {
        let two = C64::from_integer(2);
        assert!(two.powi(-3).approx_eq(&C64::new(0.125, 0.0), 0.0));
        assert_eq!(two.powi(0), C64::one());
    }

    #[test]
    fn single_precision_tolerances() {
        assert_eq!(<Complex<f32> as Scalar>::residual_tolerance(), 1e-4);
        let exact = <Complex<f32> as Scalar>::EXACT;
        assert!(!exact);
    }
}
