use std::sync::Arc;

use crate::carrier::{check_permutation, Carrier, Element};

use super::MorphismError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Permutation(Vec<usize>),
    /// `σ(x)_i = Σ_j m[i][j]·x_j`.
    Matrix(Vec<Vec<i64>>),
}

/// A homomorphism σ with `σ∘σ = id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvolutiveAutomorphism {
    carrier: Arc<Carrier>,
    repr: Repr,
}

impl InvolutiveAutomorphism {
    pub fn identity(carrier: &Arc<Carrier>) -> Self {
        let repr = match carrier.as_ref() {
            Carrier::Finite(m) => Repr::Permutation((0..m.size()).collect()),
            Carrier::Lattice(l) => {
                let d = l.rank();
                Repr::Matrix((0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect())
            }
        };
        InvolutiveAutomorphism { carrier: carrier.clone(), repr }
    }

    /// Validate a permutation of a finite monoid.
    pub fn from_permutation(carrier: &Arc<Carrier>, perm: Vec<usize>) -> Result<Self, MorphismError> {
        let m = carrier.as_finite().ok_or(MorphismError::NotFinite)?;
        check_permutation(&perm, m.size())?;
        if let Some(x) = (0..m.size()).find(|&x| perm[perm[x]] != x) {
            return Err(MorphismError::NotInvolutive(x.to_string()));
        }
        for x in 0..m.size() {
            for y in 0..m.size() {
                if perm[m.mul(x, y)] != m.mul(perm[x], perm[y]) {
                    return Err(MorphismError::NotHomomorphism { x: x.to_string(), y: y.to_string() });
                }
            }
        }
        Ok(InvolutiveAutomorphism { carrier: carrier.clone(), repr: Repr::Permutation(perm) })
    }

    /// Validate an integer matrix with `Σ² = I` acting on ℤ^d.
    pub fn from_matrix(carrier: &Arc<Carrier>, matrix: Vec<Vec<i64>>) -> Result<Self, MorphismError> {
        let l = carrier.as_lattice().ok_or(MorphismError::NotLattice)?;
        let d = l.rank();
        if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
            return Err(MorphismError::WrongLength { expected: d * d, got: matrix.iter().map(Vec::len).sum() });
        }
        for i in 0..d {
            for j in 0..d {
                let sq: i64 = (0..d).map(|k| matrix[i][k] * matrix[k][j]).sum();
                if sq != i64::from(i == j) {
                    return Err(MorphismError::NotInvolutive(format!("matrix entry ({i}, {j})")));
                }
            }
        }
        Ok(InvolutiveAutomorphism { carrier: carrier.clone(), repr: Repr::Matrix(matrix) })
    }

    /// `x ↦ -x` on ℤ^d, `x ↦ x⁻¹` on a finite abelian group.
    pub fn negation(carrier: &Arc<Carrier>) -> Result<Self, MorphismError> {
        if let Some(m) = carrier.as_finite() {
            if !m.is_group() || !m.is_commutative() {
                return Err(MorphismError::NotAbelianGroup);
            }
            let e = m.identity();
            let perm = (0..m.size())
                .map(|x| (0..m.size()).find(|&y| m.mul(x, y) == e).expect("group"))
                .collect();
            return Self::from_permutation(carrier, perm);
        }
        let l = carrier.as_lattice().ok_or(MorphismError::NotLattice)?;
        let d = l.rank();
        let m = (0..d).map(|i| (0..d).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
        Self::from_matrix(carrier, m)
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn apply(&self, x: &Element) -> Element {
        match (&self.repr, x) {
            (Repr::Permutation(p), Element::Index(i)) => Element::Index(p[*i]),
            (Repr::Matrix(m), Element::Point(v)) => {
                Element::Point(m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            }
            _ => panic!("element kind does not match automorphism"),
        }
    }

    /// Index form on finite carriers.
    pub fn apply_index(&self, x: usize) -> usize {
        match &self.repr {
            Repr::Permutation(p) => p[x],
            Repr::Matrix(_) => panic!("apply_index on a lattice automorphism"),
        }
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        match &self.repr {
            Repr::Permutation(p) => Some(p),
            Repr::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&[Vec<i64>]> {
        match &self.repr {
            Repr::Matrix(m) => Some(m),
            Repr::Permutation(_) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.carrier)
    }

    pub fn describe(&self) -> String {
        match &self.repr {
            Repr::Permutation(p) => format!("{p:?}"),
            Repr::Matrix(m) => format!("{m:?}"),
        }
    }
}
