//! Build every applicable family over a grid of constants.

use num_rational::Ratio;

use crate::analysis::nullspace_basis;
use crate::carrier::Carrier;
use crate::equations::{EquationId, ScalarFunction};
use crate::morphisms::{
    odd_additive_basis, sigma_branch, AdditiveFunction, Branch, MultiplicativeFunction, WeightFunction,
};
use crate::scalar::Scalar;

use super::{
    application_family, main_family, mu_sine_subtraction_family, sine_addition_family, wilson_family,
    ApplicationCase, ApplicationInput, FamilyError, FamilyTag, MainInput, MuSineInput, SineAdditionCase,
    SineAdditionInput, SolutionTriple, WilsonCase, WilsonInput,
};

/// `1`, `-2` and `1/2 + i`.
pub fn sweep_points<T: Scalar>() -> Vec<T> {
    vec![
        T::one(),
        T::from_integer(-2),
        T::from_gaussian(Ratio::new(1, 2), Ratio::from_integer(1)),
    ]
}

#[derive(Debug, Clone)]
pub struct SweepConfig<T> {
    pub equations: Vec<EquationId>,
    /// Values tried for every scalar constant.
    pub points: Vec<T>,
    /// Also try θ = sum of the nullspace basis on finite carriers.
    pub theta: bool,
}

impl<T: Scalar> Default for SweepConfig<T> {
    fn default() -> Self {
        SweepConfig { equations: EquationId::ALL.to_vec(), points: sweep_points(), theta: true }
    }
}

/// One attempted construction. Only combinations the family applies to are
/// attempted, so an `Err` outcome is a real failure.
#[derive(Debug, Clone)]
pub struct SweepEntry<T> {
    pub tag: FamilyTag,
    pub chi_index: Option<usize>,
    pub chi2_index: Option<usize>,
    pub outcome: Result<SolutionTriple<T>, FamilyError>,
}

struct Ctx<'a, T> {
    weight: &'a WeightFunction<T>,
    points: &'a [T],
    thetas: Vec<Option<ScalarFunction<T>>>,
    /// Additive function for the EQUAL branch; `None` means "let the
    /// constructor take A = 0" on finite carriers.
    odd: Option<AdditiveFunction<T>>,
    /// Some nonzero additive function, for the σ-free sine addition law.
    any: Option<AdditiveFunction<T>>,
    finite: bool,
    squares_ok: bool,
    out: Vec<SweepEntry<T>>,
}

impl<T: Scalar> Ctx<'_, T> {
    fn push(
        &mut self,
        tag: FamilyTag,
        chi: usize,
        chi2: Option<usize>,
        outcome: Result<SolutionTriple<T>, FamilyError>,
    ) {
        self.out.push(SweepEntry { tag, chi_index: Some(chi), chi2_index: chi2, outcome });
    }

    fn pairs(&self) -> Vec<(T, T)> {
        let p = self.points;
        p.iter().flat_map(|a| p.iter().map(move |b| (a.clone(), b.clone()))).collect()
    }
}

/// Every constructor of every selected equation, for every character in
/// `chars`, every branch-compatible case and every combination of sweep
/// points.
pub fn sweep<T: Scalar>(
    weight: &WeightFunction<T>,
    chars: &[MultiplicativeFunction<T>],
    config: &SweepConfig<T>,
) -> Result<Vec<SweepEntry<T>>, FamilyError> {
    let carrier = weight.carrier();
    let finite = carrier.as_finite().is_some();
    let mut thetas = vec![None];
    if finite && config.theta {
        let basis = nullspace_basis(weight).map_err(|e| FamilyError::InvalidParams(e.to_string()))?;
        if basis.dimension() > 0 {
            thetas.push(Some(basis.sum()));
        }
    }
    let (odd, any) = match carrier.as_ref() {
        Carrier::Finite(_) => (None, None),
        Carrier::Lattice(l) => {
            let basis = odd_additive_basis(weight.sigma());
            let odd = (!basis.is_empty())
                .then(|| {
                    let sum: Vec<T> = (0..l.rank())
                        .map(|j| T::from_integer(basis.iter().map(|b| b[j]).sum()))
                        .collect();
                    AdditiveFunction::linear(carrier, sum)
                })
                .transpose()?;
            let any = AdditiveFunction::linear(carrier, vec![T::one(); l.rank()])?;
            (odd, Some(any))
        }
    };
    let squares_ok = finite && (carrier.is_group() || carrier.is_generated_by_squares()) || !finite;
    let mut ctx =
        Ctx { weight, points: &config.points, thetas, odd, any, finite, squares_ok, out: Vec::new() };
    let branches = chars.iter().map(|chi| sigma_branch(chi, weight)).collect::<Result<Vec<_>, _>>()?;

    for &eq in &config.equations {
        match eq {
            EquationId::SineAddition => sweep_sine_addition(&mut ctx, chars),
            EquationId::MuSineSubtraction => sweep_mu_sine(&mut ctx, chars, &branches),
            EquationId::Wilson => sweep_wilson(&mut ctx, chars, &branches),
            EquationId::Main => sweep_main(&mut ctx, chars, &branches),
            EquationId::Application => sweep_application(&mut ctx, chars, &branches),
        }
    }
    Ok(ctx.out)
}

/// The additive function for an EQUAL-branch family, or `None` when the
/// family needs a nonzero one and the lattice has none.
fn equal_additive<T: Scalar>(ctx: &Ctx<'_, T>) -> Option<Option<AdditiveFunction<T>>> {
    if ctx.finite {
        Some(None)
    } else {
        ctx.odd.clone().map(Some)
    }
}

fn sweep_sine_addition<T: Scalar>(ctx: &mut Ctx<'_, T>, chars: &[MultiplicativeFunction<T>]) {
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate().skip(i + 1) {
            for c in ctx.points.iter().cloned() {
                let input = SineAdditionInput::DistinctChars { chi1: a.clone(), chi2: b.clone(), c };
                ctx.push(
                    FamilyTag::SineAddition(SineAdditionCase::DistinctChars),
                    i,
                    Some(j),
                    sine_addition_family(input),
                );
            }
        }
        let additive = if ctx.finite { None } else { ctx.any.clone() };
        let input = SineAdditionInput::EqualChars { chi: a.clone(), additive };
        ctx.push(FamilyTag::SineAddition(SineAdditionCase::EqualChars), i, None, sine_addition_family(input));
    }
}

fn sweep_mu_sine<T: Scalar>(ctx: &mut Ctx<'_, T>, chars: &[MultiplicativeFunction<T>], branches: &[Branch]) {
    let weight = ctx.weight;
    for (i, chi) in chars.iter().enumerate() {
        match branches[i] {
            Branch::Distinct => {
                for (c1, c2) in ctx.pairs() {
                    let input = MuSineInput::Distinct { chi: chi.clone(), c1, c2 };
                    let out = mu_sine_subtraction_family(input, weight);
                    ctx.push(FamilyTag::MuSineSubtraction(Branch::Distinct), i, None, out);
                }
            }
            Branch::Equal => {
                let Some(additive) = equal_additive(ctx).filter(|_| ctx.squares_ok) else { continue };
                for c1 in ctx.points.iter().cloned() {
                    let input = MuSineInput::Equal { chi: chi.clone(), c1, additive: additive.clone() };
                    let out = mu_sine_subtraction_family(input, weight);
                    ctx.push(FamilyTag::MuSineSubtraction(Branch::Equal), i, None, out);
                }
            }
        }
    }
}

fn sweep_wilson<T: Scalar>(ctx: &mut Ctx<'_, T>, chars: &[MultiplicativeFunction<T>], branches: &[Branch]) {
    let weight = ctx.weight;
    for (i, chi) in chars.iter().enumerate() {
        let g = ScalarFunction::from_character(chi);
        ctx.push(FamilyTag::Wilson(WilsonCase::Zero), i, None, wilson_family(WilsonInput::Zero { g }, weight));
        for alpha in ctx.points.iter().cloned() {
            let input = WilsonInput::EvenScaled { chi: chi.clone(), alpha };
            ctx.push(FamilyTag::Wilson(WilsonCase::EvenScaled), i, None, wilson_family(input, weight));
        }
        for (c, alpha) in ctx.pairs() {
            let out = wilson_family(WilsonInput::Third { chi: chi.clone(), c, alpha }, weight);
            // the case only exists when (μ - 1)χ = (μ - 1)χ∘σ
            if matches!(out, Err(FamilyError::SideConditionViolated(_))) {
                break;
            }
            ctx.push(FamilyTag::Wilson(WilsonCase::Third), i, None, out);
        }
        if branches[i] == Branch::Equal {
            let additive = if ctx.finite { None } else { ctx.odd.clone() };
            for alpha in ctx.points.iter().cloned() {
                let input = WilsonInput::Additive { chi: chi.clone(), alpha, additive: additive.clone() };
                ctx.push(FamilyTag::Wilson(WilsonCase::Additive), i, None, wilson_family(input, weight));
            }
        }
    }
}

fn sweep_main<T: Scalar>(ctx: &mut Ctx<'_, T>, chars: &[MultiplicativeFunction<T>], branches: &[Branch]) {
    let weight = ctx.weight;
    let thetas = ctx.thetas.clone();
    for (i, chi) in chars.iter().enumerate() {
        match branches[i] {
            Branch::Distinct => {
                for theta in &thetas {
                    for c in ctx.points {
                        for (c1, c2) in ctx.pairs() {
                            let input = MainInput::Distinct {
                                chi: chi.clone(),
                                c: c.clone(),
                                c1,
                                c2,
                                theta: theta.clone(),
                            };
                            ctx.push(FamilyTag::Main(Branch::Distinct), i, None, main_family(input, weight));
                        }
                    }
                }
            }
            Branch::Equal => {
                let Some(additive) = equal_additive(ctx).filter(|_| ctx.squares_ok) else { continue };
                for theta in &thetas {
                    for (c, c2) in ctx.pairs() {
                        let input = MainInput::Equal {
                            chi: chi.clone(),
                            c,
                            c2,
                            additive: additive.clone(),
                            theta: theta.clone(),
                        };
                        ctx.push(FamilyTag::Main(Branch::Equal), i, None, main_family(input, weight));
                    }
                }
            }
        }
    }
}

fn sweep_application<T: Scalar>(
    ctx: &mut Ctx<'_, T>,
    chars: &[MultiplicativeFunction<T>],
    branches: &[Branch],
) {
    let weight = ctx.weight;
    let thetas = ctx.thetas.clone();
    for (i, chi) in chars.iter().enumerate() {
        for theta in &thetas {
            for (alpha, second) in ctx.pairs() {
                let (tag, out) = match branches[i] {
                    Branch::Distinct => {
                        let input =
                            ApplicationInput::A { chi: chi.clone(), alpha, c2: second, theta: theta.clone() };
                        (ApplicationCase::A, application_family(input, weight))
                    }
                    Branch::Equal => {
                        let additive = if ctx.finite { None } else { ctx.odd.clone() };
                        let input = ApplicationInput::B {
                            chi: chi.clone(),
                            alpha,
                            kappa: second,
                            additive,
                            theta: theta.clone(),
                        };
                        (ApplicationCase::B, application_family(input, weight))
                    }
                };
                ctx.push(FamilyTag::Application(tag), i, None, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::carrier::FiniteMonoid;
    use crate::morphisms::{enumerate_multiplicative, InvolutiveAutomorphism};
    use num_complex::Complex64;

    #[test]
    fn z4_negation_sweep_is_clean() {
        let c = Arc::new(Carrier::from(FiniteMonoid::cyclic(4)));
        let w = WeightFunction::trivial(&InvolutiveAutomorphism::negation(&c).unwrap());
        let chars = enumerate_multiplicative::<Complex64>(&c).unwrap();
        let entries = sweep(&w, &chars, &SweepConfig::default()).unwrap();
        assert!(entries.iter().any(|e| e.tag == FamilyTag::Main(Branch::Distinct)));
        for e in &entries {
            let t = e.outcome.as_ref().unwrap_or_else(|err| panic!("{} failed: {err}", e.tag));
            assert!(t.scan().max < 1e-9);
        }
    }
}
