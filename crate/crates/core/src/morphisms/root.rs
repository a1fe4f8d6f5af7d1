use std::fmt;
use std::ops::Mul;

use num_rational::Ratio;
use num_traits::Zero;

use crate::scalar::Scalar;

/// Exact value of a multiplicative function on a finite monoid: zero, or the
/// root of unity `exp(2πi·r)` with rotation `r ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootValue {
    Zero,
    Root(Ratio<i64>),
}

impl RootValue {
    pub const ONE: RootValue = RootValue::Root(Ratio::new_raw(0, 1));

    pub fn root(rotation: Ratio<i64>) -> Self {
        RootValue::Root(rotation - rotation.floor())
    }

    /// `exp(2πi·k/n)`.
    pub fn unit(k: i64, n: i64) -> Self {
        RootValue::root(Ratio::new(k, n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RootValue::Zero)
    }

    pub fn rotation(&self) -> Option<Ratio<i64>> {
        match self {
            RootValue::Zero => None,
            RootValue::Root(r) => Some(*r),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        self.rotation().map(|r| RootValue::root(-r))
    }

    pub fn to_scalar<T: Scalar>(&self) -> T {
        match self {
            RootValue::Zero => T::zero(),
            RootValue::Root(r) => T::root_of_unity(*r),
        }
    }
}

impl Mul for RootValue {
    type Output = RootValue;

    // roots multiply by adding rotations
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (RootValue::Root(a), RootValue::Root(b)) => RootValue::root(a + b),
            _ => RootValue::Zero,
        }
    }
}

impl fmt::Display for RootValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootValue::Zero => write!(f, "0"),
            RootValue::Root(r) if r.is_zero() => write!(f, "1"),
            RootValue::Root(r) => write!(f, "e(2πi·{r})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let i = RootValue::unit(1, 4);
        assert_eq!(i * i * i * i, RootValue::ONE);
        assert_eq!(i * RootValue::Zero, RootValue::Zero);
        assert_eq!(i.inverse(), Some(RootValue::unit(3, 4)));
        assert_eq!(RootValue::unit(-1, 4), RootValue::unit(3, 4));
        assert!(RootValue::Zero < RootValue::ONE);
    }
}
