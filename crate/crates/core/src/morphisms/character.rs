use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::carrier::{Carrier, CharacterIdeal, Element};
use crate::scalar::Scalar;

use super::{same_carrier, InvolutiveAutomorphism, MorphismError, RootValue};

#[derive(Debug, Clone, PartialEq)]
enum Repr<T> {
    Table(Vec<RootValue>),
    /// `χ(x) = ∏ z_i^{x_i}`.
    Bases(Vec<T>),
}

/// A function with `χ(xy) = χ(x)χ(y)` that is not identically zero.
///
/// Finite carriers store exact values (zero or a root of unity); lattice
/// carriers store one nonzero base per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeFunction<T> {
    carrier: Arc<Carrier>,
    repr: Repr<T>,
}

fn close<T: Scalar>(a: &T, b: &T) -> bool {
    a.approx_eq(b, T::residual_tolerance() * a.modulus().max(b.modulus()).max(1.0))
}

impl<T: Scalar> MultiplicativeFunction<T> {
    pub fn from_roots(carrier: &Arc<Carrier>, values: Vec<RootValue>) -> Result<Self, MorphismError> {
        let m = carrier.as_finite().ok_or(MorphismError::NotFinite)?;
        if values.len() != m.size() {
            return Err(MorphismError::WrongLength { expected: m.size(), got: values.len() });
        }
        if values.iter().all(RootValue::is_zero) {
            return Err(MorphismError::ZeroCharacter);
        }
        for x in 0..m.size() {
            for y in 0..m.size() {
                if values[m.mul(x, y)] != values[x] * values[y] {
                    return Err(MorphismError::NotMultiplicative { x: x.to_string(), y: y.to_string() });
                }
            }
        }
        Ok(Self::from_roots_unchecked(carrier, values))
    }

    pub(crate) fn from_roots_unchecked(carrier: &Arc<Carrier>, values: Vec<RootValue>) -> Self {
        MultiplicativeFunction { carrier: carrier.clone(), repr: Repr::Table(values) }
    }

    /// `χ(x) = ∏ z_i^{x_i}` on ℤ^d. Zero bases are rejected.
    pub fn lattice(carrier: &Arc<Carrier>, bases: Vec<T>) -> Result<Self, MorphismError> {
        let l = carrier.as_lattice().ok_or(MorphismError::NotLattice)?;
        if bases.len() != l.rank() {
            return Err(MorphismError::WrongLength { expected: l.rank(), got: bases.len() });
        }
        if let Some(i) = bases.iter().position(T::is_zero) {
            return Err(MorphismError::ZeroBase(i));
        }
        Ok(MultiplicativeFunction { carrier: carrier.clone(), repr: Repr::Bases(bases) })
    }

    /// `χ ≡ 1`.
    pub fn trivial(carrier: &Arc<Carrier>) -> Self {
        let repr = match carrier.as_ref() {
            Carrier::Finite(m) => Repr::Table(vec![RootValue::ONE; m.size()]),
            Carrier::Lattice(l) => Repr::Bases(vec![T::one(); l.rank()]),
        };
        MultiplicativeFunction { carrier: carrier.clone(), repr }
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn roots(&self) -> Option<&[RootValue]> {
        match &self.repr {
            Repr::Table(v) => Some(v),
            Repr::Bases(_) => None,
        }
    }

    pub fn bases(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Bases(z) => Some(z),
            Repr::Table(_) => None,
        }
    }

    pub fn eval(&self, x: &Element) -> T {
        match (&self.repr, x) {
            (Repr::Table(v), Element::Index(i)) => v[*i].to_scalar(),
            (Repr::Bases(z), Element::Point(p)) => {
                z.iter().zip(p).fold(T::one(), |acc, (b, &k)| acc * b.powi(k))
            }
            _ => panic!("element kind does not match multiplicative function"),
        }
    }

    /// Exact value at an index of a finite carrier.
    pub fn value_at(&self, x: usize) -> Option<RootValue> {
        self.roots().map(|v| v[x])
    }

    pub fn is_trivial(&self) -> bool {
        self.same_as(&Self::trivial(&self.carrier))
    }

    /// `χ∘σ`.
    pub fn compose(&self, sigma: &InvolutiveAutomorphism) -> Result<Self, MorphismError> {
        if !same_carrier(&self.carrier, sigma.carrier()) {
            return Err(MorphismError::CarrierMismatch);
        }
        let repr = match &self.repr {
            Repr::Table(v) => Repr::Table((0..v.len()).map(|x| v[sigma.apply_index(x)]).collect()),
            Repr::Bases(z) => {
                let m = sigma.matrix().expect("lattice automorphism");
                let d = z.len();
                Repr::Bases(
                    (0..d)
                        .map(|j| (0..d).fold(T::one(), |acc, i| acc * z[i].powi(m[i][j])))
                        .collect(),
                )
            }
        };
        Ok(MultiplicativeFunction { carrier: self.carrier.clone(), repr })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self, MorphismError> {
        if !same_carrier(&self.carrier, &other.carrier) {
            return Err(MorphismError::CarrierMismatch);
        }
        let repr = match (&self.repr, &other.repr) {
            (Repr::Table(a), Repr::Table(b)) => Repr::Table(a.iter().zip(b).map(|(x, y)| *x * *y).collect()),
            (Repr::Bases(a), Repr::Bases(b)) => {
                Repr::Bases(a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).collect())
            }
            _ => return Err(MorphismError::CarrierMismatch),
        };
        if let Repr::Table(v) = &repr {
            if v.iter().all(RootValue::is_zero) {
                return Err(MorphismError::ZeroCharacter);
            }
        }
        Ok(MultiplicativeFunction { carrier: self.carrier.clone(), repr })
    }

    /// The twist `χ* = μ·(χ∘σ)` for the weight's σ.
    pub fn twist(&self, weight: &WeightFunction<T>) -> Result<Self, MorphismError> {
        weight.mu().mul(&self.compose(weight.sigma())?)
    }

    /// Equality: exact on finite carriers, base-by-base within the scalar's
    /// residual tolerance on lattices.
    pub fn same_as(&self, other: &Self) -> bool {
        if !same_carrier(&self.carrier, &other.carrier) {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Table(a), Repr::Table(b)) => a == b,
            (Repr::Bases(a), Repr::Bases(b)) => a.iter().zip(b).all(|(x, y)| close(x, y)),
            _ => false,
        }
    }

    /// Convert the scalar type. Finite tables carry over exactly.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MultiplicativeFunction<U> {
        let repr = match &self.repr {
            Repr::Table(v) => Repr::Table(v.clone()),
            Repr::Bases(z) => Repr::Bases(z.iter().map(f).collect()),
        };
        MultiplicativeFunction { carrier: self.carrier.clone(), repr }
    }
}

impl<T: Scalar> fmt::Display for MultiplicativeFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Table(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Repr::Bases(z) => {
                let parts: Vec<String> = z.iter().map(|b| format!("{}", b.to_complex64())).collect();
                write!(f, "bases({})", parts.join(", "))
            }
        }
    }
}

/// A multiplicative μ bound to the σ it is admissible for:
/// `μ(x·σ(x)) = 1` for every x.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction<T> {
    mu: MultiplicativeFunction<T>,
    sigma: InvolutiveAutomorphism,
}

impl<T: Scalar> WeightFunction<T> {
    pub fn new(mu: MultiplicativeFunction<T>, sigma: InvolutiveAutomorphism) -> Result<Self, MorphismError> {
        if !same_carrier(mu.carrier(), sigma.carrier()) {
            return Err(MorphismError::CarrierMismatch);
        }
        match mu.carrier().as_ref() {
            Carrier::Finite(m) => {
                for x in 0..m.size() {
                    if mu.value_at(m.mul(x, sigma.apply_index(x))) != Some(RootValue::ONE) {
                        return Err(MorphismError::NotAdmissible(x.to_string()));
                    }
                }
            }
            Carrier::Lattice(l) => {
                // μ(x + σx) is multiplicative in x, so the generators suffice
                for k in 0..l.rank() {
                    let mut e = vec![0; l.rank()];
                    e[k] = 1;
                    let x = Element::Point(e);
                    let s = mu.carrier().op(&x, &sigma.apply(&x));
                    if !close(&mu.eval(&s), &T::one()) {
                        return Err(MorphismError::NotAdmissible(x.to_string()));
                    }
                }
            }
        }
        Ok(WeightFunction { mu, sigma })
    }

    /// `μ ≡ 1`, admissible for every σ.
    pub fn trivial(sigma: &InvolutiveAutomorphism) -> Self {
        WeightFunction { mu: MultiplicativeFunction::trivial(sigma.carrier()), sigma: sigma.clone() }
    }

    pub fn mu(&self) -> &MultiplicativeFunction<T> {
        &self.mu
    }

    pub fn sigma(&self) -> &InvolutiveAutomorphism {
        &self.sigma
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        self.mu.carrier()
    }

    pub fn eval(&self, x: &Element) -> T {
        self.mu.eval(x)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> WeightFunction<U> {
        WeightFunction { mu: self.mu.map_scalar(f), sigma: self.sigma.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `χ ≠ μ·χ∘σ`.
    Distinct,
    /// `χ = μ·χ∘σ`.
    Equal,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Distinct => "DISTINCT",
            Branch::Equal => "EQUAL",
        })
    }
}

/// Decide whether `χ = μ·χ∘σ`.
pub fn sigma_branch<T: Scalar>(
    chi: &MultiplicativeFunction<T>,
    weight: &WeightFunction<T>,
) -> Result<Branch, MorphismError> {
    Ok(if chi.same_as(&chi.twist(weight)?) { Branch::Equal } else { Branch::Distinct })
}

/// The zero set `I_χ`. Empty on lattices.
pub fn character_ideal<T: Scalar>(chi: &MultiplicativeFunction<T>) -> Result<CharacterIdeal, MorphismError> {
    match chi.carrier().as_ref() {
        Carrier::Lattice(_) => Ok(CharacterIdeal::empty()),
        Carrier::Finite(m) => {
            let values = chi.roots().expect("finite table");
            if values.iter().all(RootValue::is_zero) {
                return Err(MorphismError::ZeroCharacter);
            }
            let members: BTreeSet<usize> = (0..m.size()).filter(|&x| values[x].is_zero()).collect();
            CharacterIdeal::new(m, members).map_err(|(x, y)| MorphismError::NotMultiplicative {
                x: x.to_string(),
                y: y.to_string(),
            })
        }
    }
}
