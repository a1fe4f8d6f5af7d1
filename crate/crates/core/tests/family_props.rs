mod common;

use std::sync::OnceLock;

use common::{acceptance_corpus, arc, characters, weights};
use fneq::analysis::{nullspace_basis, verify_structure};
use fneq::equations::max_residual;
use fneq::families::{
    application_family, classical, main_family, sweep, ApplicationInput, MainInput, SweepConfig,
};
use fneq::morphisms::{sigma_branch, Branch};
use fneq::{EquationId, Exact, MultiplicativeFunction, Scope, Slot, WeightFunction, C64};
use num_complex::Complex64;
use proptest::prelude::*;

type Combo = (WeightFunction<C64>, MultiplicativeFunction<C64>, Branch);

fn combos() -> &'static Vec<Combo> {
    static C: OnceLock<Vec<Combo>> = OnceLock::new();
    C.get_or_init(|| {
        let mut out = Vec::new();
        for (_, m) in acceptance_corpus() {
            let c = arc(m);
            for w in weights::<C64>(&c) {
                for chi in characters::<C64>(&c) {
                    let b = sigma_branch(&chi, &w).unwrap();
                    out.push((w.clone(), chi, b));
                }
            }
        }
        out
    })
}

fn distinct() -> Vec<usize> {
    (0..combos().len()).filter(|&i| combos()[i].2 == Branch::Distinct).collect()
}

fn scalar() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn nonzero() -> impl Strategy<Value = Complex64> {
    (0.2f64..3.0, -3.2f64..3.2).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn main_distinct_closures(
        pick in prop::sample::select(distinct()),
        c in nonzero(), c1 in nonzero(), c2 in scalar(), lambda in nonzero(),
    ) {
        let (w, chi, _) = &combos()[pick];
        let t = main_family(MainInput::Distinct { chi: chi.clone(), c, c1, c2, theta: None }, w).unwrap();
        prop_assert!(t.scan().max < 1e-9);
        let scope = Scope::AllPairs;

        let s = verify_structure(t.slots(), w, scope, 1e-9).unwrap();
        prop_assert!(s.passed(), "{:?}", s);

        let null = nullspace_basis(w).unwrap();
        for theta in null.basis() {
            let shifted = t.slots().clone().with(Slot::F, t.slot(Slot::F).add(theta).unwrap());
            prop_assert!(max_residual(EquationId::Main, &shifted, Some(w), scope).unwrap().max < 1e-9);
        }

        let scaled = t.slots().clone()
            .with(Slot::G, t.slot(Slot::G).scale(&lambda))
            .with(Slot::H, t.slot(Slot::H).scale(&lambda.inv()));
        prop_assert!(max_residual(EquationId::Main, &scaled, Some(w), scope).unwrap().max < 1e-9);
    }

    #[test]
    fn application_g_is_mu_even(pick in 0..combos().len(), alpha in nonzero(), second in scalar()) {
        let (w, chi, b) = &combos()[pick];
        let theta = nullspace_basis(w).unwrap().sum();
        let input = match b {
            Branch::Distinct => ApplicationInput::A { chi: chi.clone(), alpha, c2: second, theta: Some(theta) },
            Branch::Equal => ApplicationInput::B { chi: chi.clone(), alpha, kappa: second, additive: None, theta: Some(theta) },
        };
        let t = application_family(input, w).unwrap();
        let g = t.slot(Slot::G);
        let c = w.carrier();
        for x in c.elements(Scope::AllPairs) {
            let lhs = g.eval(&x);
            let rhs = w.eval(&x) * g.eval(&w.sigma().apply(&x));
            prop_assert!((lhs - rhs).norm() < 1e-9);
        }
    }
}

#[test]
fn exact_sweep_is_exactly_zero() {
    for (name, m) in acceptance_corpus() {
        let c = arc(m);
        let chars = characters::<Exact>(&c);
        for w in weights::<Exact>(&c) {
            for e in sweep(&w, &chars, &SweepConfig::default()).unwrap() {
                let t = e.outcome.unwrap_or_else(|err| panic!("{name} {}: {err}", e.tag));
                assert!(t.scan().all_zero && t.scan().exact, "{name} {}", e.tag);
            }
        }
    }
}

#[test]
fn single_precision_sweep() {
    let c = arc(fneq::FiniteMonoid::cyclic(6));
    let chars = characters::<fneq::C32>(&c);
    for w in weights::<fneq::C32>(&c) {
        for e in sweep(&w, &chars, &SweepConfig::default()).unwrap() {
            let t = e.outcome.unwrap_or_else(|err| panic!("{}: {err}", e.tag));
            assert!(t.scan().max < 1e-4);
        }
    }
}

#[test]
fn classical_case_a_matches() {
    // classical (a) with α = 1, c₁ = 2c₂, built directly
    let c = arc(fneq::FiniteMonoid::cyclic(4));
    let w = WeightFunction::trivial(&fneq::InvolutiveAutomorphism::negation(&c).unwrap());
    let chi = characters::<C64>(&c).into_iter().find(|x| sigma_branch(x, &w).unwrap() == Branch::Distinct).unwrap();
    let (alpha, c1, c2) = (Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0), Complex64::new(1.5, 0.0));
    let table = |f: &dyn Fn(usize) -> Complex64| fneq::ScalarFunction::from_fn(&c, f).unwrap();
    let chi_v = |x: usize| chi.eval(&fneq::Element::Index(x));
    let star = |x: usize| chi.eval(&fneq::Element::Index((4 - x) % 4));
    let u = |x: usize| (chi_v(x) + star(x)) / 2.0;
    let v = |x: usize| (chi_v(x) - star(x)) / 2.0;
    let h = table(&|x| (u(x) + c2 * v(x)) / alpha);
    let f = table(&|x| ((1.0 + c1 * c2 / 2.0) * u(x) + 2.0 * c2 * v(x)) / 2.0);
    let g = table(&|x| (1.0 - c1 * c2 / 2.0) * u(x) / 2.0);
    let (mapped_alpha, mapped_c2) = classical::application_a(alpha, c1, c2).unwrap();
    let t = application_family(
        ApplicationInput::A { chi: chi.clone(), alpha: mapped_alpha, c2: mapped_c2, theta: None },
        &w,
    )
    .unwrap();
    for (slot, want) in [(Slot::F, f), (Slot::G, g), (Slot::H, h)] {
        assert!(t.slot(slot).distance(&want, Scope::AllPairs).unwrap() < 1e-12, "{slot}");
    }
}
