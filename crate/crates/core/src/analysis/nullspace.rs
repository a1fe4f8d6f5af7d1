use std::sync::Arc;

use crate::carrier::{Carrier, Element};
use crate::equations::ScalarFunction;
use crate::linalg::{orthonormalize, Matrix};
use crate::morphisms::WeightFunction;
use crate::scalar::Scalar;

use super::AnalysisError;

/// Basis of `{θ : θ(xy) = μ(y)θ(σ(y)x)}` on a finite carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct NullspaceBasis<T> {
    weight: WeightFunction<T>,
    basis: Vec<ScalarFunction<T>>,
}

impl<T: Scalar> NullspaceBasis<T> {
    pub fn weight(&self) -> &WeightFunction<T> {
        &self.weight
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        self.weight.carrier()
    }

    pub fn basis(&self) -> &[ScalarFunction<T>] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Sum of the basis vectors; zero when the space is trivial.
    pub fn sum(&self) -> ScalarFunction<T> {
        self.basis
            .iter()
            .fold(ScalarFunction::zero(self.carrier()), |acc, b| acc.add(b).expect("same carrier"))
    }
}

/// The `n² × n` matrix whose row `(x, y)` reads off `θ(xy) - μ(y)θ(σ(y)x)`.
pub fn constraint_matrix<T: Scalar>(weight: &WeightFunction<T>) -> Result<Matrix<T>, AnalysisError> {
    let m = weight.carrier().as_finite().ok_or(AnalysisError::NotFinite)?;
    let n = m.size();
    let sigma = weight.sigma();
    let mut a = Matrix::zeros(n * n, n);
    for x in 0..n {
        for y in 0..n {
            let row = x * n + y;
            a.add_to(row, m.mul(x, y), T::one());
            let mu = weight.eval(&Element::Index(y));
            a.add_to(row, m.mul(sigma.apply_index(y), x), -mu);
        }
    }
    Ok(a)
}

/// Exact scalars get the reduced-echelon kernel basis; float scalars get the
/// same kernel orthonormalized.
pub fn nullspace_basis<T: Scalar>(weight: &WeightFunction<T>) -> Result<NullspaceBasis<T>, AnalysisError> {
    let a = constraint_matrix(weight)?;
    let mut kernel = a.kernel();
    if let Some(q) = orthonormalize(&kernel) {
        kernel = q;
    }
    let carrier = weight.carrier();
    let basis = kernel
        .into_iter()
        .map(|v| ScalarFunction::dense(carrier, v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NullspaceBasis { weight: weight.clone(), basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::FiniteMonoid;
    use crate::cyclotomic::Cyclotomic;
    use crate::equations::nullspace_residual;
    use crate::morphisms::InvolutiveAutomorphism;
    use num_complex::Complex64;

    fn z(n: usize) -> Arc<Carrier> {
        Arc::new(Carrier::from(FiniteMonoid::cyclic(n)))
    }

    #[test]
    fn z4_negation_has_parity_nullspace() {
        let c = z(4);
        let w = WeightFunction::<Cyclotomic>::trivial(&InvolutiveAutomorphism::negation(&c).unwrap());
        let n = nullspace_basis(&w).unwrap();
        assert_eq!(n.dimension(), 2);
        for theta in n.basis() {
            let t = theta.table().unwrap();
            assert_eq!(t[0], t[2]);
            assert_eq!(t[1], t[3]);
            assert!(nullspace_residual(theta, &w, c.default_scope()).unwrap().all_zero);
        }
    }

    #[test]
    fn trivial_monoid_is_one_dimensional() {
        let c = z(1);
        let w = WeightFunction::<Complex64>::trivial(&InvolutiveAutomorphism::identity(&c));
        assert_eq!(nullspace_basis(&w).unwrap().dimension(), 1);
    }

    #[test]
    fn float_basis_is_orthonormal() {
        let c = z(6);
        let w = WeightFunction::<Complex64>::trivial(&InvolutiveAutomorphism::negation(&c).unwrap());
        let n = nullspace_basis(&w).unwrap();
        assert!(n.dimension() > 0);
        for (i, a) in n.basis().iter().enumerate() {
            for (j, b) in n.basis().iter().enumerate() {
                let ip = crate::linalg::inner(a.table().unwrap(), b.table().unwrap());
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
