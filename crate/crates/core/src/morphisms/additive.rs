use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::carrier::{Carrier, CharacterIdeal, Element};
use crate::cyclotomic::Cyclotomic;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::{same_carrier, InvolutiveAutomorphism, MorphismError};

#[derive(Debug, Clone, PartialEq)]
enum Repr<T> {
    Table(Vec<T>),
    /// `A(x) = ⟨a, x⟩`.
    Linear(Vec<T>),
}

/// A function with `A(xy) = A(x) + A(y)`, optionally only on the complement
/// of a character ideal (and zero on the ideal).
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveFunction<T> {
    carrier: Arc<Carrier>,
    repr: Repr<T>,
    excluded: CharacterIdeal,
}

impl<T: Scalar> AdditiveFunction<T> {
    pub fn zero(carrier: &Arc<Carrier>) -> Self {
        let repr = match carrier.as_ref() {
            Carrier::Finite(m) => Repr::Table(vec![T::zero(); m.size()]),
            Carrier::Lattice(l) => Repr::Linear(vec![T::zero(); l.rank()]),
        };
        AdditiveFunction { carrier: carrier.clone(), repr, excluded: CharacterIdeal::empty() }
    }

    /// `A(x) = ⟨a, x⟩` on ℤ^d.
    pub fn linear(carrier: &Arc<Carrier>, a: Vec<T>) -> Result<Self, MorphismError> {
        let l = carrier.as_lattice().ok_or(MorphismError::NotLattice)?;
        if a.len() != l.rank() {
            return Err(MorphismError::WrongLength { expected: l.rank(), got: a.len() });
        }
        Ok(AdditiveFunction { carrier: carrier.clone(), repr: Repr::Linear(a), excluded: CharacterIdeal::empty() })
    }

    /// A value table on a finite monoid, additive on the complement of
    /// `excluded`. Values on `excluded` are ignored and read as zero.
    pub fn from_table(
        carrier: &Arc<Carrier>,
        values: Vec<T>,
        excluded: CharacterIdeal,
    ) -> Result<Self, MorphismError> {
        let m = carrier.as_finite().ok_or(MorphismError::NotFinite)?;
        if values.len() != m.size() {
            return Err(MorphismError::WrongLength { expected: m.size(), got: values.len() });
        }
        let values: Vec<T> =
            values.into_iter().enumerate().map(|(x, v)| if excluded.contains(x) { T::zero() } else { v }).collect();
        let domain: Vec<usize> = (0..m.size()).filter(|&x| !excluded.contains(x)).collect();
        for &x in &domain {
            for &y in &domain {
                let lhs = values[m.mul(x, y)].clone();
                let rhs = values[x].clone() + values[y].clone();
                let scale = lhs.modulus().max(rhs.modulus()).max(1.0);
                if !lhs.approx_eq(&rhs, T::residual_tolerance() * scale) {
                    return Err(MorphismError::NotAdditive { x: x.to_string(), y: y.to_string() });
                }
            }
        }
        Ok(AdditiveFunction { carrier: carrier.clone(), repr: Repr::Table(values), excluded })
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn excluded(&self) -> &CharacterIdeal {
        &self.excluded
    }

    pub fn coefficients(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Linear(a) => Some(a),
            Repr::Table(_) => None,
        }
    }

    pub fn table(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Table(v) => Some(v),
            Repr::Linear(_) => None,
        }
    }

    pub fn eval(&self, x: &Element) -> T {
        match (&self.repr, x) {
            (Repr::Table(v), Element::Index(i)) => v[*i].clone(),
            (Repr::Linear(a), Element::Point(p)) => {
                a.iter().zip(p).fold(T::zero(), |acc, (c, &k)| acc + c.clone() * T::from_integer(k))
            }
            _ => panic!("element kind does not match additive function"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Table(v) | Repr::Linear(v) => v.iter().all(Zero::is_zero),
        }
    }

    /// `A∘σ`.
    pub fn compose(&self, sigma: &InvolutiveAutomorphism) -> Result<Self, MorphismError> {
        if !same_carrier(&self.carrier, sigma.carrier()) {
            return Err(MorphismError::CarrierMismatch);
        }
        let repr = match &self.repr {
            Repr::Table(v) => Repr::Table((0..v.len()).map(|x| v[sigma.apply_index(x)].clone()).collect()),
            Repr::Linear(a) => {
                // ⟨a, Σx⟩ = ⟨Σᵀa, x⟩
                let m = sigma.matrix().expect("lattice automorphism");
                let d = a.len();
                Repr::Linear(
                    (0..d)
                        .map(|j| (0..d).fold(T::zero(), |acc, i| acc + a[i].clone() * T::from_integer(m[i][j])))
                        .collect(),
                )
            }
        };
        let excluded = match &self.repr {
            Repr::Table(_) => {
                let m = self.carrier.as_finite().expect("finite carrier");
                let moved = self.excluded.members().iter().map(|&x| sigma.apply_index(x)).collect();
                CharacterIdeal::new(m, moved).expect("automorphic image of an ideal")
            }
            Repr::Linear(_) => CharacterIdeal::empty(),
        };
        Ok(AdditiveFunction { carrier: self.carrier.clone(), repr, excluded })
    }

    /// Check `A∘σ = -A` on the domain.
    pub fn check_sigma_odd(&self, sigma: &InvolutiveAutomorphism) -> Result<(), MorphismError> {
        let composed = self.compose(sigma)?;
        match (&self.repr, &composed.repr) {
            (Repr::Table(a), Repr::Table(b)) | (Repr::Linear(a), Repr::Linear(b)) => {
                for (i, (x, y)) in a.iter().zip(b).enumerate() {
                    if self.excluded.contains(i) && matches!(self.repr, Repr::Table(_)) {
                        continue;
                    }
                    let s = x.clone() + y.clone();
                    if !s.is_negligible(x.modulus().max(1.0)) {
                        return Err(MorphismError::NotSigmaOdd(i.to_string()));
                    }
                }
                Ok(())
            }
            _ => Err(MorphismError::CarrierMismatch),
        }
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AdditiveFunction<U> {
        let repr = match &self.repr {
            Repr::Table(v) => Repr::Table(v.iter().map(&f).collect()),
            Repr::Linear(a) => Repr::Linear(a.iter().map(&f).collect()),
        };
        AdditiveFunction { carrier: self.carrier.clone(), repr, excluded: self.excluded.clone() }
    }
}

/// Why `A(x) = 0` at one element of a finite monoid: `x^m = x^{m+p}` gives
/// `m·A(x) = (m+p)·A(x)`, so `p·A(x) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodWitness {
    pub element: usize,
    pub index: usize,
    pub period: usize,
}

/// The space of additive functions on a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdditiveSpace {
    /// Only `A ≡ 0`, with one witness per element of the domain.
    Trivial { witnesses: Vec<PeriodWitness> },
    /// `A(x) = ⟨a, x⟩` for every `a ∈ ℂ^rank`.
    Linear { rank: usize },
}

impl AdditiveSpace {
    pub fn dimension(&self) -> usize {
        match self {
            AdditiveSpace::Trivial { .. } => 0,
            AdditiveSpace::Linear { rank } => *rank,
        }
    }
}

/// Describe all additive functions on `carrier`, optionally restricted to the
/// complement of `restrict_to`.
pub fn additive_functions(carrier: &Carrier, restrict_to: Option<&CharacterIdeal>) -> AdditiveSpace {
    match carrier {
        Carrier::Lattice(l) => AdditiveSpace::Linear { rank: l.rank() },
        Carrier::Finite(m) => {
            let witnesses = (0..m.size())
                .filter(|&x| restrict_to.is_none_or(|i| !i.contains(x)))
                .map(|x| {
                    let (index, period) = m.eventual_period(x);
                    PeriodWitness { element: x, index, period }
                })
                .collect();
            AdditiveSpace::Trivial { witnesses }
        }
    }
}

/// Dimension of `{A : A(xy) = A(x) + A(y)}` on the complement of
/// `restrict_to`, by exact elimination of the explicit linear system.
pub fn additive_kernel_dimension(carrier: &Carrier, restrict_to: Option<&CharacterIdeal>) -> Result<usize, MorphismError> {
    let m = carrier.as_finite().ok_or(MorphismError::NotFinite)?;
    let domain: Vec<usize> = (0..m.size()).filter(|&x| restrict_to.is_none_or(|i| !i.contains(x))).collect();
    let col = |x: usize| domain.iter().position(|&d| d == x);
    let mut rows = Vec::new();
    for &x in &domain {
        for &y in &domain {
            let mut row = vec![Cyclotomic::zero(); domain.len()];
            let Some(xy) = col(m.mul(x, y)) else { continue };
            let mut bump = |i: usize, v: i64| row[i] = row[i].clone() + Cyclotomic::from_integer(v);
            bump(xy, 1);
            bump(col(x).unwrap(), -1);
            bump(col(y).unwrap(), -1);
            rows.push(row);
        }
    }
    if domain.is_empty() {
        return Ok(0);
    }
    let matrix = Matrix::from_rows(rows);
    Ok(domain.len() - matrix.rank())
}

/// Integer basis of `{a : ⟨a, σx⟩ = -⟨a, x⟩}`, i.e. the kernel of `Σᵀ + I`.
/// Empty on finite carriers, where only `A ≡ 0` exists.
pub fn odd_additive_basis(sigma: &InvolutiveAutomorphism) -> Vec<Vec<i64>> {
    let Some(m) = sigma.matrix() else { return Vec::new() };
    let d = m.len();
    let rows: Vec<Vec<Cyclotomic>> = (0..d)
        .map(|j| (0..d).map(|i| Cyclotomic::from_integer(m[i][j] + i64::from(i == j))).collect())
        .collect();
    Matrix::from_rows(rows)
        .kernel()
        .into_iter()
        .map(|v| {
            let q: Vec<Ratio<i64>> = v
                .iter()
                .map(|c| {
                    let r = c.as_rational().expect("rational kernel");
                    Ratio::new(r.numer().to_i64().unwrap(), r.denom().to_i64().unwrap())
                })
                .collect();
            let lcm = q.iter().fold(1i64, |acc, r| num_integer::lcm(acc, *r.denom()));
            let mut ints: Vec<i64> = q.iter().map(|r| (*r * lcm).to_integer()).collect();
            let g = ints.iter().fold(0i64, |acc, &k| num_integer::gcd(acc, k));
            if g > 1 {
                ints.iter_mut().for_each(|k| *k /= g);
            }
            if ints.iter().find(|k| !k.is_zero()).is_some_and(|k| k.is_negative()) {
                ints.iter_mut().for_each(|k| *k = -*k);
            }
            ints
        })
        .collect()
}

impl AdditiveFunction<num_complex::Complex<f64>> {
    /// Lattice additive function from an integer coefficient vector.
    pub fn from_integers(carrier: &Arc<Carrier>, a: &[i64]) -> Result<Self, MorphismError> {
        Self::linear(carrier, a.iter().map(|&k| num_complex::Complex::new(k as f64, 0.0)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{FiniteMonoid, LatticeGroup};
    use num_complex::Complex64;

    #[test]
    fn finite_carriers_have_only_zero() {
        for m in [FiniteMonoid::cyclic(4), FiniteMonoid::zero_one(), FiniteMonoid::symmetric(3)] {
            let c = Carrier::from(m.clone());
            let space = additive_functions(&c, None);
            assert_eq!(space.dimension(), 0);
            let AdditiveSpace::Trivial { witnesses } = space else { panic!() };
            assert_eq!(witnesses.len(), m.size());
            assert!(witnesses.iter().all(|w| w.period >= 1));
            assert_eq!(additive_kernel_dimension(&c, None).unwrap(), 0);
        }
    }

    #[test]
    fn swap_odd_basis() {
        let g = Arc::new(Carrier::from(LatticeGroup::new(2).unwrap()));
        let swap = InvolutiveAutomorphism::from_matrix(&g, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(odd_additive_basis(&swap), vec![vec![1, -1]]);
        let neg = InvolutiveAutomorphism::negation(&g).unwrap();
        assert_eq!(odd_additive_basis(&neg).len(), 2);
        assert!(odd_additive_basis(&InvolutiveAutomorphism::identity(&g)).is_empty());
    }

    #[test]
    fn lattice_additive_oddness() {
        let g = Arc::new(Carrier::from(LatticeGroup::new(1).unwrap()));
        let a = AdditiveFunction::from_integers(&g, &[1]).unwrap();
        let neg = InvolutiveAutomorphism::negation(&g).unwrap();
        assert!(a.check_sigma_odd(&neg).is_ok());
        assert!(a.check_sigma_odd(&InvolutiveAutomorphism::identity(&g)).is_err());
        assert_eq!(a.eval(&Element::Point(vec![-3])), Complex64::new(-3.0, 0.0));
    }

    #[test]
    fn table_rejects_non_additive() {
        let c = Arc::new(Carrier::from(FiniteMonoid::cyclic(2)));
        let bad = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(AdditiveFunction::from_table(&c, bad, CharacterIdeal::empty()).is_err());
    }
}
