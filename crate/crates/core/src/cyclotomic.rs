//! Exact arithmetic in cyclotomic fields ℚ(ζ_n).
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(n)-1}` of
//! ℚ(ζ_n), i.e. as a rational polynomial reduced modulo the cyclotomic
//! polynomial Φ_n. Binary operations between elements of different orders
//! first embed both operands into ℚ(ζ_lcm) through `ζ_m = ζ_lcm^{lcm/m}`.
//! Every character value on a finite monoid, and every Gaussian rational,
//! lives in such a field, so residuals on finite carriers can be checked
//! for exact vanishing.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Integer coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Rc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    if let Some(p) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by Φ_d for every proper divisor d of n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = divide_monic(&num, &den);
        }
    }
    let p = Rc::new(num);
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// An element of ℚ(ζ_order).
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio_to_big(r: Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Reduce a rational polynomial modulo Φ_n, padding to φ(n) coefficients.
fn reduce(mut p: Vec<BigRational>, n: u32) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if p.len() > deg {
        for i in (deg..p.len()).rev() {
            let c = std::mem::replace(&mut p[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    p[i - deg + j] -= &c * big(pj);
                }
            }
        }
        p.truncate(deg);
    }
    p.resize(deg, BigRational::zero());
    p
}

impl Cyclotomic {
    /// The rational number `r`.
    pub fn rational(r: BigRational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    /// `ζ_n^k`.
    pub fn zeta_power(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        Cyclotomic { order: n, coeffs: reduce(p, n) }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Embed into ℚ(ζ_n); `n` must be a multiple of the current order.
    pub fn lift(&self, n: u32) -> Self {
        assert!(n.is_multiple_of(self.order), "cannot embed order {} into {}", self.order, n);
        if n == self.order {
            return self.clone();
        }
        let step = (n / self.order) as usize;
        let mut p = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[k * step] = c.clone();
        }
        Cyclotomic { order: n, coeffs: reduce(p, n) }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let n = a.order.lcm(&b.order);
        (a.lift(n), b.lift(n))
    }

    /// The rational value if the element lies in ℚ. The power basis starts
    /// with 1, so this is a coefficient check.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs
            .iter()
            .skip(1)
            .all(|c| c.is_zero())
            .then(|| self.coeffs[0].clone())
    }

    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in cyclotomic field");
        if self.order <= 2 {
            return Cyclotomic { order: self.order, coeffs: vec![self.coeffs[0].recip()] };
        }
        // s·a + t·Φ = 1 via the extended Euclidean algorithm over ℚ[x]
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.order).iter().map(|&c| big(c)).collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while r1.len() != 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            assert!(!r1.is_empty(), "non-invertible element: Φ_n is not irreducible?");
        }
        let c = r1[0].recip();
        let s: Vec<BigRational> = s1.into_iter().map(|x| x * &c).collect();
        Cyclotomic { order: self.order, coeffs: reduce(s, self.order) }
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})·ζ{}", self.order),
                _ => format!("({c})·ζ{}^{k}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::rational(BigRational::one())
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: Self) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: Self) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: Self) -> Cyclotomic {
        // rationals scale coefficient-wise without lifting
        if rhs.order == 1 {
            let c = &rhs.coeffs[0];
            return Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() };
        }
        if self.order == 1 {
            return rhs * self;
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        let n = a.order;
        Cyclotomic { order: n, coeffs: reduce(poly_mul(&a.coeffs, &b.coeffs), n) }
    }
}

impl Div for Cyclotomic {
    type Output = Cyclotomic;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        &self * &rhs.inverse()
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;

    fn root_of_unity(rotation: Ratio<i64>) -> Self {
        let q = *rotation.denom();
        let p = *rotation.numer();
        let q = u32::try_from(q).expect("rotation denominator out of range");
        Cyclotomic::zeta_power(q, p)
    }

    fn from_gaussian(re: Ratio<i64>, im: Ratio<i64>) -> Self {
        if im.is_zero() {
            Cyclotomic::rational(ratio_to_big(re))
        } else {
            // Φ_4 = x² + 1, so ζ_4 = i
            Cyclotomic { order: 4, coeffs: vec![ratio_to_big(re), ratio_to_big(im)] }
        }
    }

    fn from_complex64(_: Complex<f64>) -> Option<Self> {
        None
    }

    fn to_complex64(&self) -> Complex<f64> {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    fn conj(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut p = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[(n - k) % n] += c;
        }
        Cyclotomic { order: self.order, coeffs: reduce(p, self.order) }
    }

    fn residual_tolerance() -> f64 {
        0.0
    }

    fn rank_tolerance() -> f64 {
        0.0
    }

    fn modulus(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.to_complex64().norm()
        }
    }
}

impl Cyclotomic {
    /// Absolute value of the rational part when the element is rational.
    pub fn abs_rational(&self) -> Option<BigRational> {
        self.as_rational().map(|r| r.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_gaussian(Ratio::new(n, d), Ratio::from_integer(0))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn roots_of_unity_multiply_by_adding_rotations() {
        let i = Cyclotomic::root_of_unity(Ratio::new(1, 4));
        let w = Cyclotomic::root_of_unity(Ratio::new(1, 3));
        let prod = i.clone() * w.clone();
        assert_eq!(prod, Cyclotomic::root_of_unity(Ratio::new(7, 12)));
        assert_eq!(i.powi(4), Cyclotomic::one());
        assert_eq!(w.powi(-3), Cyclotomic::one());
        assert_eq!(i.clone() * i, -Cyclotomic::one());
    }

    #[test]
    fn sum_of_primitive_cube_roots_is_minus_one() {
        let w = Cyclotomic::zeta_power(3, 1);
        let w2 = Cyclotomic::zeta_power(3, 2);
        let s = w + w2;
        assert_eq!(s, q(-1, 1));
        assert_eq!(s.as_rational(), Some(big(-1)));
    }

    #[test]
    fn inverse_and_division() {
        let a = Cyclotomic::from_gaussian(Ratio::new(1, 2), Ratio::from_integer(1));
        let b = a.inverse();
        assert_eq!(a.clone() * b, Cyclotomic::one());
        let w = Cyclotomic::zeta_power(12, 5) + q(3, 7);
        assert_eq!((w.clone() / w.clone()), Cyclotomic::one());
        assert_eq!(q(3, 4) / q(1, 2), q(3, 2));
    }

    #[test]
    fn lifting_preserves_value() {
        let i = Cyclotomic::zeta_power(4, 1);
        let lifted = i.lift(12);
        assert_eq!(lifted.order(), 12);
        assert_eq!(lifted, i);
        assert!((lifted.to_complex64() - Complex::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn conjugation() {
        let z = Cyclotomic::zeta_power(6, 1) + q(2, 1);
        let c = z.conj();
        let zc = z.to_complex64().conj();
        assert!((c.to_complex64() - zc).norm() < 1e-12);
        // z·z̄ is real
        assert!((z.clone() * c).as_rational().is_some());
    }
}
