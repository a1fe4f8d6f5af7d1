#![allow(dead_code)]

use std::sync::Arc;

use fneq::morphisms::{enumerate_admissible_mu, enumerate_involutive_automorphisms, enumerate_multiplicative};
use fneq::{Carrier, FiniteMonoid, MultiplicativeFunction, Scalar, WeightFunction};

/// `{e, a, b}` with `xy = x` for `x, y ∈ {a, b}`: non-commutative, not a group.
pub fn left_zero() -> FiniteMonoid {
    FiniteMonoid::new(vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]], 0).unwrap()
}

/// The acceptance corpus.
pub fn acceptance_corpus() -> Vec<(&'static str, FiniteMonoid)> {
    let z2 = FiniteMonoid::cyclic(2);
    vec![
        ("Z2", FiniteMonoid::cyclic(2)),
        ("Z3", FiniteMonoid::cyclic(3)),
        ("Z4", FiniteMonoid::cyclic(4)),
        ("Z6", FiniteMonoid::cyclic(6)),
        ("Z2xZ2", FiniteMonoid::product(&z2, &z2)),
        ("S3", FiniteMonoid::symmetric(3)),
        ("{1,0}", FiniteMonoid::zero_one()),
    ]
}

/// The acceptance corpus plus a few extra shapes.
pub fn corpus() -> Vec<(&'static str, FiniteMonoid)> {
    let mut c = acceptance_corpus();
    c.push(("trivial", FiniteMonoid::trivial()));
    c.push(("Z5", FiniteMonoid::cyclic(5)));
    c.push(("Z2x{1,0}", FiniteMonoid::product(&FiniteMonoid::cyclic(2), &FiniteMonoid::zero_one())));
    c.push(("left-zero", left_zero()));
    c
}

pub fn arc(m: FiniteMonoid) -> Arc<Carrier> {
    Arc::new(Carrier::from(m))
}

/// Every admissible weight on `carrier`.
pub fn weights<T: Scalar>(carrier: &Arc<Carrier>) -> Vec<WeightFunction<T>> {
    enumerate_involutive_automorphisms(carrier)
        .unwrap()
        .iter()
        .flat_map(|s| enumerate_admissible_mu::<T>(s).unwrap())
        .collect()
}

pub fn characters<T: Scalar>(carrier: &Arc<Carrier>) -> Vec<MultiplicativeFunction<T>> {
    enumerate_multiplicative::<T>(carrier).unwrap()
}

/// Orbit of `x` under repeated multiplication, as a brute-force oracle for
/// the power sequence: returns `(m, p)` with `x^m = x^{m+p}` minimal.
pub fn power_period(m: &FiniteMonoid, x: usize) -> (usize, usize) {
    let mut powers = vec![x];
    loop {
        let next = m.mul(*powers.last().unwrap(), x);
        if let Some(i) = powers.iter().position(|&p| p == next) {
            return (i + 1, powers.len() - i);
        }
        powers.push(next);
    }
}
