mod common;

use std::sync::Arc;

use common::{arc, characters, corpus, power_period, weights};
use fneq::morphisms::{
    additive_functions, additive_kernel_dimension, enumerate_involutive_automorphisms, AdditiveSpace, RootValue,
};
use fneq::{Carrier, Element, Exact, InvolutiveAutomorphism, LatticeGroup, MultiplicativeFunction, C64};
use num_complex::Complex64;
use proptest::prelude::*;

/// Number of nonzero multiplicative functions, worked out by hand per shape.
fn expected_characters(name: &str) -> usize {
    match name {
        "trivial" => 1,
        "Z2" => 2,
        "Z3" => 3,
        "Z4" => 4,
        "Z5" => 5,
        "Z6" => 6,
        "Z2xZ2" => 4,
        // abelianization is Z2
        "S3" => 2,
        // χ(0) ∈ {0, 1}
        "{1,0}" => 2,
        "Z2x{1,0}" => 4,
        // χ(a) = χ(b) ∈ {0, 1}
        "left-zero" => 2,
        _ => unreachable!(),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| (0..n).map(move |i| {
            let mut q = p.clone();
            q.insert(i, n - 1);
            q
        }))
        .collect()
}

#[test]
fn character_counts_and_exact_multiplicativity() {
    for (name, m) in corpus() {
        let c = arc(m.clone());
        let chars = characters::<Exact>(&c);
        assert_eq!(chars.len(), expected_characters(name), "{name}");
        for chi in &chars {
            let t = chi.roots().unwrap();
            for x in 0..m.size() {
                for y in 0..m.size() {
                    assert_eq!(t[m.mul(x, y)], t[x] * t[y], "{name}");
                }
            }
        }
    }
}

#[test]
fn involutions_match_brute_force() {
    for (name, m) in corpus() {
        let c = arc(m.clone());
        let n = m.size();
        let brute = permutations(n)
            .into_iter()
            .filter(|p| {
                p[m.identity()] == m.identity()
                    && (0..n).all(|x| p[p[x]] == x)
                    && (0..n).all(|x| (0..n).all(|y| p[m.mul(x, y)] == m.mul(p[x], p[y])))
            })
            .count();
        let found = enumerate_involutive_automorphisms(&c).unwrap();
        assert_eq!(found.len(), brute, "{name}");
        for s in &found {
            assert_eq!(s.apply_index(m.identity()), m.identity());
            assert!((0..n).all(|x| s.apply_index(s.apply_index(x)) == x));
        }
    }
}

#[test]
fn admissible_weights_are_units() {
    for (name, m) in corpus() {
        let c = arc(m.clone());
        for w in weights::<Exact>(&c) {
            let t = w.mu().roots().unwrap();
            for x in 0..m.size() {
                assert!(!t[x].is_zero(), "{name}");
                assert_eq!(t[x] * t[w.sigma().apply_index(x)], RootValue::ONE, "{name}");
            }
        }
    }
}

#[test]
fn finite_additive_functions_vanish() {
    for (name, m) in corpus() {
        let c = Carrier::from(m.clone());
        // order argument: x^k = x^{k+p} gives k·A(x) = (k+p)·A(x), so p·A(x) = 0
        let AdditiveSpace::Trivial { witnesses } = additive_functions(&c, None) else { panic!("{name}") };
        for w in &witnesses {
            assert_eq!((w.index, w.period), power_period(&m, w.element), "{name}");
            assert!(w.period >= 1);
        }
        assert_eq!(additive_kernel_dimension(&c, None).unwrap(), 0, "{name}");
    }
}

fn z2() -> Arc<Carrier> {
    Arc::new(Carrier::from(LatticeGroup::new(2).unwrap()))
}

fn nonzero() -> impl Strategy<Value = Complex64> {
    (0.3f64..2.0, -3.0f64..3.0).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn point() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 2)
}

proptest! {
    #[test]
    fn lattice_characters_multiply(b in prop::collection::vec(nonzero(), 2), x in point(), y in point()) {
        let c = z2();
        let chi = MultiplicativeFunction::<C64>::lattice(&c, b).unwrap();
        let sigma = InvolutiveAutomorphism::from_matrix(&c, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let composed = chi.compose(&sigma).unwrap();
        let (px, py) = (Element::Point(x.clone()), Element::Point(y.clone()));
        let sum = c.op(&px, &py);
        let lhs = chi.eval(&sum);
        let rhs = chi.eval(&px) * chi.eval(&py);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
        let direct = chi.eval(&sigma.apply(&px));
        prop_assert!((composed.eval(&px) - direct).norm() <= 1e-9 * (1.0 + direct.norm()));
    }

    #[test]
    fn lattice_involutions_square_to_identity(k in -3i64..=3, x in point()) {
        // [[1, k], [0, -1]] squares to the identity for every k
        let c = z2();
        let s = InvolutiveAutomorphism::from_matrix(&c, vec![vec![1, k], vec![0, -1]]).unwrap();
        let p = Element::Point(x);
        prop_assert_eq!(s.apply(&s.apply(&p)), p);
        prop_assert_eq!(s.apply(&c.identity()), c.identity());
    }
}
