use std::sync::Arc;

use crate::carrier::{Carrier, Element, Scope};
use crate::morphisms::{same_carrier, AdditiveFunction, InvolutiveAutomorphism, MultiplicativeFunction, WeightFunction};
use crate::scalar::Scalar;

use super::EquationError;

/// One summand `c · ∏ z_i^{x_i} · ∏_k ⟨a_k, x⟩` of an exponential polynomial
/// on ℤ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<T> {
    pub coeff: T,
    pub bases: Vec<T>,
    pub forms: Vec<Vec<T>>,
}

impl<T: Scalar> Term<T> {
    fn eval(&self, p: &[i64]) -> T {
        let exp = self.bases.iter().zip(p).fold(self.coeff.clone(), |acc, (z, &k)| acc * z.powi(k));
        self.forms.iter().fold(exp, |acc, a| {
            acc * a.iter().zip(p).fold(T::zero(), |s, (c, &k)| s + c.clone() * T::from_integer(k))
        })
    }

    fn product(&self, other: &Self) -> Self {
        Term {
            coeff: self.coeff.clone() * other.coeff.clone(),
            bases: self.bases.iter().zip(&other.bases).map(|(a, b)| a.clone() * b.clone()).collect(),
            forms: self.forms.iter().chain(&other.forms).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr<T> {
    Dense(Vec<T>),
    ExpPoly(Vec<Term<T>>),
}

/// A complex-valued function on a carrier: a value table on finite carriers,
/// an exponential polynomial on lattices.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFunction<T> {
    carrier: Arc<Carrier>,
    repr: Repr<T>,
}

impl<T: Scalar> ScalarFunction<T> {
    pub fn zero(carrier: &Arc<Carrier>) -> Self {
        let repr = match carrier.as_ref() {
            Carrier::Finite(m) => Repr::Dense(vec![T::zero(); m.size()]),
            Carrier::Lattice(_) => Repr::ExpPoly(Vec::new()),
        };
        ScalarFunction { carrier: carrier.clone(), repr }
    }

    pub fn constant(carrier: &Arc<Carrier>, c: T) -> Self {
        ScalarFunction::from_character(&MultiplicativeFunction::trivial(carrier)).scale(&c)
    }

    /// Value table on a finite carrier.
    pub fn dense(carrier: &Arc<Carrier>, values: Vec<T>) -> Result<Self, EquationError> {
        let m = carrier.as_finite().ok_or(EquationError::NotFinite)?;
        if values.len() != m.size() {
            return Err(EquationError::WrongLength { expected: m.size(), got: values.len() });
        }
        Ok(ScalarFunction { carrier: carrier.clone(), repr: Repr::Dense(values) })
    }

    /// Tabulate `f` on a finite carrier.
    pub fn from_fn(carrier: &Arc<Carrier>, f: impl Fn(usize) -> T) -> Result<Self, EquationError> {
        let m = carrier.as_finite().ok_or(EquationError::NotFinite)?;
        Self::dense(carrier, (0..m.size()).map(f).collect())
    }

    /// Exponential polynomial on a lattice.
    pub fn exp_poly(carrier: &Arc<Carrier>, terms: Vec<Term<T>>) -> Result<Self, EquationError> {
        let l = carrier.as_lattice().ok_or(EquationError::NotLattice)?;
        let d = l.rank();
        if terms.iter().any(|t| t.bases.len() != d || t.forms.iter().any(|a| a.len() != d)) {
            return Err(EquationError::WrongLength { expected: d, got: 0 });
        }
        Ok(ScalarFunction { carrier: carrier.clone(), repr: Repr::ExpPoly(terms) })
    }

    pub fn from_character(chi: &MultiplicativeFunction<T>) -> Self {
        let carrier = chi.carrier();
        let repr = match carrier.as_ref() {
            Carrier::Finite(m) => Repr::Dense((0..m.size()).map(|x| chi.eval(&Element::Index(x))).collect()),
            Carrier::Lattice(_) => Repr::ExpPoly(vec![Term {
                coeff: T::one(),
                bases: chi.bases().expect("lattice character").to_vec(),
                forms: Vec::new(),
            }]),
        };
        ScalarFunction { carrier: carrier.clone(), repr }
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn table(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Dense(v) => Some(v),
            Repr::ExpPoly(_) => None,
        }
    }

    pub fn terms(&self) -> Option<&[Term<T>]> {
        match &self.repr {
            Repr::ExpPoly(t) => Some(t),
            Repr::Dense(_) => None,
        }
    }

    pub fn eval(&self, x: &Element) -> T {
        match (&self.repr, x) {
            (Repr::Dense(v), Element::Index(i)) => v[*i].clone(),
            (Repr::ExpPoly(terms), Element::Point(p)) => {
                terms.iter().fold(T::zero(), |acc, t| acc + t.eval(p))
            }
            _ => panic!("element kind does not match function"),
        }
    }

    pub fn values(&self, scope: Scope) -> Vec<T> {
        self.carrier.elements(scope).iter().map(|x| self.eval(x)).collect()
    }

    fn check(&self, other: &Self) -> Result<(), EquationError> {
        if same_carrier(&self.carrier, &other.carrier) {
            Ok(())
        } else {
            Err(EquationError::CarrierMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, EquationError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => {
                Repr::Dense(a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            }
            (Repr::ExpPoly(a), Repr::ExpPoly(b)) => Repr::ExpPoly(a.iter().chain(b).cloned().collect()),
            _ => return Err(EquationError::CarrierMismatch),
        };
        Ok(ScalarFunction { carrier: self.carrier.clone(), repr })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, EquationError> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        let repr = match &self.repr {
            Repr::Dense(v) => Repr::Dense(v.iter().map(|x| x.clone() * c.clone()).collect()),
            Repr::ExpPoly(terms) => Repr::ExpPoly(
                terms
                    .iter()
                    .map(|t| Term { coeff: t.coeff.clone() * c.clone(), ..t.clone() })
                    .collect(),
            ),
        };
        ScalarFunction { carrier: self.carrier.clone(), repr }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self, EquationError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => {
                Repr::Dense(a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).collect())
            }
            (Repr::ExpPoly(a), Repr::ExpPoly(b)) => {
                Repr::ExpPoly(a.iter().flat_map(|s| b.iter().map(move |t| s.product(t))).collect())
            }
            _ => return Err(EquationError::CarrierMismatch),
        };
        Ok(ScalarFunction { carrier: self.carrier.clone(), repr })
    }

    /// `f∘σ`.
    pub fn compose(&self, sigma: &InvolutiveAutomorphism) -> Result<Self, EquationError> {
        if !same_carrier(&self.carrier, sigma.carrier()) {
            return Err(EquationError::CarrierMismatch);
        }
        let repr = match &self.repr {
            Repr::Dense(v) => Repr::Dense((0..v.len()).map(|x| v[sigma.apply_index(x)].clone()).collect()),
            Repr::ExpPoly(terms) => {
                let m = sigma.matrix().expect("lattice automorphism");
                let d = m.len();
                let transpose = |a: &[T]| -> Vec<T> {
                    (0..d)
                        .map(|j| (0..d).fold(T::zero(), |acc, i| acc + a[i].clone() * T::from_integer(m[i][j])))
                        .collect()
                };
                Repr::ExpPoly(
                    terms
                        .iter()
                        .map(|t| Term {
                            coeff: t.coeff.clone(),
                            bases: (0..d)
                                .map(|j| (0..d).fold(T::one(), |acc, i| acc * t.bases[i].powi(m[i][j])))
                                .collect(),
                            forms: t.forms.iter().map(|a| transpose(a)).collect(),
                        })
                        .collect(),
                )
            }
        };
        Ok(ScalarFunction { carrier: self.carrier.clone(), repr })
    }

    pub fn mul_character(&self, chi: &MultiplicativeFunction<T>) -> Result<Self, EquationError> {
        self.mul(&ScalarFunction::from_character(chi))
    }

    pub fn mul_additive(&self, a: &AdditiveFunction<T>) -> Result<Self, EquationError> {
        if !same_carrier(&self.carrier, a.carrier()) {
            return Err(EquationError::CarrierMismatch);
        }
        let repr = match &self.repr {
            Repr::Dense(v) => {
                Repr::Dense(v.iter().enumerate().map(|(x, f)| f.clone() * a.eval(&Element::Index(x))).collect())
            }
            Repr::ExpPoly(terms) => {
                let coeffs = a.coefficients().expect("lattice additive function");
                Repr::ExpPoly(
                    terms
                        .iter()
                        .map(|t| {
                            let mut t = t.clone();
                            t.forms.push(coeffs.to_vec());
                            t
                        })
                        .collect(),
                )
            }
        };
        Ok(ScalarFunction { carrier: self.carrier.clone(), repr })
    }

    /// `μ·(f∘σ)` for the weight's μ and σ.
    pub fn twist(&self, weight: &WeightFunction<T>) -> Result<Self, EquationError> {
        self.compose(weight.sigma())?.mul_character(weight.mu())
    }

    /// Largest `|f(x) - g(x)|` over the scope.
    pub fn distance(&self, other: &Self, scope: Scope) -> Result<f64, EquationError> {
        self.check(other)?;
        Ok(self
            .carrier
            .elements(scope)
            .iter()
            .map(|x| (self.eval(x) - other.eval(x)).modulus())
            .fold(0.0, f64::max))
    }

    /// True when every value in the scope is zero (exactly for exact scalars,
    /// within the residual tolerance otherwise).
    pub fn is_zero_on(&self, scope: Scope) -> bool {
        self.values(scope).iter().all(|v| if T::EXACT { v.is_zero() } else { v.modulus() <= T::residual_tolerance() })
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ScalarFunction<U> {
        let repr = match &self.repr {
            Repr::Dense(v) => Repr::Dense(v.iter().map(&f).collect()),
            Repr::ExpPoly(terms) => Repr::ExpPoly(
                terms
                    .iter()
                    .map(|t| Term {
                        coeff: f(&t.coeff),
                        bases: t.bases.iter().map(&f).collect(),
                        forms: t.forms.iter().map(|a| a.iter().map(&f).collect()).collect(),
                    })
                    .collect(),
            ),
        };
        ScalarFunction { carrier: self.carrier.clone(), repr }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{FiniteMonoid, LatticeGroup};
    use num_complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn lattice_algebra() {
        let g = Arc::new(Carrier::from(LatticeGroup::new(1).unwrap()));
        let chi = MultiplicativeFunction::lattice(&g, vec![c(2.0)]).unwrap();
        let a = AdditiveFunction::linear(&g, vec![c(1.0)]).unwrap();
        // x·2^x
        let f = ScalarFunction::from_character(&chi).mul_additive(&a).unwrap();
        assert_eq!(f.eval(&Element::Point(vec![3])), c(24.0));
        let neg = InvolutiveAutomorphism::negation(&g).unwrap();
        // -x·2^{-x}
        let fs = f.compose(&neg).unwrap();
        assert_eq!(fs.eval(&Element::Point(vec![3])), c(-3.0 / 8.0));
        let sq = f.mul(&f).unwrap();
        assert_eq!(sq.eval(&Element::Point(vec![2])), c(64.0));
        let diff = f.sub(&f).unwrap();
        assert!(diff.is_zero_on(Scope::Box(5)));
    }

    #[test]
    fn dense_algebra() {
        let z4 = Arc::new(Carrier::from(FiniteMonoid::cyclic(4)));
        let f = ScalarFunction::from_fn(&z4, |x| c(x as f64)).unwrap();
        let neg = InvolutiveAutomorphism::from_permutation(&z4, vec![0, 3, 2, 1]).unwrap();
        assert_eq!(f.compose(&neg).unwrap().table().unwrap(), &[c(0.0), c(3.0), c(2.0), c(1.0)]);
        assert!(ScalarFunction::dense(&z4, vec![c(0.0)]).is_err());
        let other = Arc::new(Carrier::from(FiniteMonoid::cyclic(4)));
        // equal carriers in different allocations still match
        assert!(f.add(&ScalarFunction::zero(&other)).is_ok());
        let z3 = Arc::new(Carrier::from(FiniteMonoid::cyclic(3)));
        assert_eq!(f.add(&ScalarFunction::zero(&z3)), Err(EquationError::CarrierMismatch));
    }
}
