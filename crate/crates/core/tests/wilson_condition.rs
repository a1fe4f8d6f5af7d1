mod common;

use common::{arc, characters, corpus, weights};
use fneq::families::{wilson_family, FamilyError, WilsonInput};
use fneq::morphisms::{sigma_branch, Branch};
use fneq::{Exact, Scalar, ScalarFunction, Scope};

/// The third WILSON case is built exactly when `(μ - 1)χ = (μ - 1)χ∘σ`.
/// Checked pointwise here, then compared with the σ-branch and with the
/// global alternative "μ ≡ 1 or χ∘σ = χ".
#[test]
fn third_case_condition_against_branch() {
    let (mut distinct_ok, mut equal_fails) = (0, 0);
    for (name, m) in corpus() {
        let c = arc(m);
        for w in weights::<Exact>(&c) {
            for chi in characters::<Exact>(&c) {
                let f = ScalarFunction::from_character(&chi);
                let fs = f.compose(w.sigma()).unwrap();
                let mu = ScalarFunction::from_character(w.mu());
                let n = c.as_finite().unwrap().size();
                let holds = (0..n).all(|x| {
                    let at = |g: &ScalarFunction<Exact>| g.values(Scope::AllPairs)[x].clone();
                    (at(&mu) - Exact::from_integer(1)) * (at(&f) - at(&fs)) == Exact::from_integer(0)
                });
                let global = w.mu().is_trivial() || f.sub(&fs).unwrap().is_zero_on(Scope::AllPairs);
                assert_eq!(holds, global, "{name}");

                let built = wilson_family(WilsonInput::Third { chi: chi.clone(), c: Exact::from_integer(1), alpha: Exact::from_integer(1) }, &w);
                match &built {
                    Ok(_) => assert!(holds, "{name}"),
                    Err(FamilyError::SideConditionViolated(_)) => assert!(!holds, "{name}"),
                    Err(e) => panic!("{name}: {e}"),
                }
                match (holds, sigma_branch(&chi, &w).unwrap()) {
                    (true, Branch::Distinct) => distinct_ok += 1,
                    (false, Branch::Equal) => equal_fails += 1,
                    _ => {}
                }
            }
        }
    }
    // neither direction of "condition ⇔ EQUAL branch" holds on the corpus
    assert!(distinct_ok > 0);
    assert!(equal_fails > 0);
}
