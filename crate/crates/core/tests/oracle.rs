use std::sync::Arc;
use std::time::Instant;

use fneq::analysis::{oracle_solve_main, AnalysisError, Classification, OracleConfig};
use fneq::morphisms::{enumerate_admissible_mu, enumerate_involutive_automorphisms};
use fneq::{Carrier, FiniteMonoid, InvolutiveAutomorphism, Weight64, C64};

fn carrier(m: FiniteMonoid) -> Arc<Carrier> {
    Arc::new(Carrier::from(m))
}

#[test]
fn z2_identity_has_only_degenerate_solutions() {
    let c = carrier(FiniteMonoid::cyclic(2));
    let w = Weight64::trivial(&InvolutiveAutomorphism::identity(&c));
    let r = oracle_solve_main(&w, &OracleConfig::new(50, 7)).unwrap();
    assert!(r.solutions.is_empty());
    assert_eq!(r.nullspace_dimension, 2);
}

#[test]
fn zero_starts_give_empty_report() {
    let c = carrier(FiniteMonoid::cyclic(4));
    let w = Weight64::trivial(&InvolutiveAutomorphism::negation(&c).unwrap());
    let r = oracle_solve_main(&w, &OracleConfig::new(0, 1)).unwrap();
    assert!(r.solutions.is_empty());
    assert_eq!(r.converged, 0);
}

#[test]
fn large_carrier_is_refused() {
    let c = carrier(FiniteMonoid::cyclic(13));
    let w = Weight64::trivial(&InvolutiveAutomorphism::identity(&c));
    assert!(matches!(
        oracle_solve_main(&w, &OracleConfig::new(1, 1)),
        Err(AnalysisError::CarrierTooLarge { size: 13, limit: 12 })
    ));
}

#[test]
fn z4_negation_classifies_to_i_powers() {
    let c = carrier(FiniteMonoid::cyclic(4));
    let w = Weight64::trivial(&InvolutiveAutomorphism::negation(&c).unwrap());
    let t = Instant::now();
    let r = oracle_solve_main(&w, &OracleConfig::new(200, 42)).unwrap();
    eprintln!("{} solutions, {} converged in {:?}", r.solutions.len(), r.converged, t.elapsed());
    assert!(!r.solutions.is_empty());
    assert_eq!(r.unclassified(), 0);
    for s in &r.solutions {
        assert!(s.scan.max < 1e-8);
        let Classification::Family { chi, .. } = &s.classification else { unreachable!() };
        // χ(1) = ±i
        let v = chi.eval(&fneq::Element::Index(1));
        assert!((v.re).abs() < 1e-12 && (v.im.abs() - 1.0).abs() < 1e-12, "{v}");
    }
}

#[test]
fn reports_are_reproducible() {
    let c = carrier(FiniteMonoid::cyclic(3));
    let w = Weight64::trivial(&InvolutiveAutomorphism::negation(&c).unwrap());
    let a = oracle_solve_main(&w, &OracleConfig::new(40, 3)).unwrap();
    let b = oracle_solve_main(&w, &OracleConfig::new(40, 3)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn s3_every_weight() {
    let c = carrier(FiniteMonoid::symmetric(3));
    for sigma in enumerate_involutive_automorphisms(&c).unwrap() {
        for w in enumerate_admissible_mu::<C64>(&sigma).unwrap() {
            let r = oracle_solve_main(&w, &OracleConfig::new(60, 11)).unwrap();
            eprintln!("{} μ={}: {} found, {} unclassified", sigma.describe(), w.mu(), r.solutions.len(), r.unclassified());
            assert_eq!(r.unclassified(), 0);
        }
    }
}

/// Non-abelian, not a group, not generated by squares: every solution found
/// still fits the closed-form family.
#[test]
fn s3_times_zero_one_is_fully_classified() {
    let m = FiniteMonoid::product(&FiniteMonoid::symmetric(3), &FiniteMonoid::zero_one());
    assert!(!m.is_group() && !m.is_commutative() && !m.is_generated_by_squares());
    let c = carrier(m);
    let mut found = 0;
    for sigma in enumerate_involutive_automorphisms(&c).unwrap() {
        for w in enumerate_admissible_mu::<C64>(&sigma).unwrap() {
            let r = oracle_solve_main(&w, &OracleConfig::new(30, 5)).unwrap();
            assert_eq!(r.unclassified(), 0, "{} μ={}", sigma.describe(), w.mu());
            found += r.solutions.len();
        }
    }
    assert!(found > 0);
}
