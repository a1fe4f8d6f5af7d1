use crate::carrier::{Carrier, Scope};
use crate::equations::{nullspace_residual, ScalarFunction, Slot, Slots};
use crate::morphisms::{
    same_carrier, sigma_branch, AdditiveFunction, Branch, MorphismError, MultiplicativeFunction, WeightFunction,
};
use crate::scalar::Scalar;

use super::{
    witness_string, ApplicationCase, FamilyError, FamilyParams, FamilyTag, SineAdditionCase, SolutionTriple,
    WilsonCase, Warning,
};

/// `χ`, `u = (χ + χ*)/2` and `v = (χ - χ*)/2` with `χ* = μ·χ∘σ`.
struct Parts<T> {
    chi: ScalarFunction<T>,
    u: ScalarFunction<T>,
    v: ScalarFunction<T>,
}

fn parts<T: Scalar>(chi: &MultiplicativeFunction<T>, weight: &WeightFunction<T>) -> Result<Parts<T>, FamilyError> {
    if !same_carrier(chi.carrier(), weight.carrier()) {
        return Err(MorphismError::CarrierMismatch.into());
    }
    let f = ScalarFunction::from_character(chi);
    let star = ScalarFunction::from_character(&chi.twist(weight)?);
    let half = T::half();
    let u = f.add(&star)?.scale(&half);
    let v = f.sub(&star)?.scale(&half);
    Ok(Parts { chi: f, u, v })
}

fn require_branch<T: Scalar>(
    chi: &MultiplicativeFunction<T>,
    weight: &WeightFunction<T>,
    expected: Branch,
) -> Result<(), FamilyError> {
    let found = sigma_branch(chi, weight)?;
    if found == expected {
        Ok(())
    } else {
        Err(FamilyError::BranchMismatch { expected, found })
    }
}

fn require_nonzero<T: Scalar>(value: &T, name: &str, why: &str) -> Result<(), FamilyError> {
    if value.is_zero() {
        Err(FamilyError::InvalidParams(format!("{name} must be nonzero: {why}")))
    } else {
        Ok(())
    }
}

fn require_squares<T: Scalar>(weight: &WeightFunction<T>) -> Result<(), FamilyError> {
    let c = weight.carrier();
    if c.as_finite().is_some() && !c.is_group() && !c.is_generated_by_squares() {
        Err(FamilyError::NotSquaresGenerated)
    } else {
        Ok(())
    }
}

/// The σ-odd additive function to use, and whether it was forced to zero by a
/// finite carrier.
fn resolve_additive<T: Scalar>(
    carrier: &std::sync::Arc<Carrier>,
    additive: Option<&AdditiveFunction<T>>,
    weight: &WeightFunction<T>,
) -> Result<(AdditiveFunction<T>, bool), FamilyError> {
    let a = match additive {
        Some(a) => {
            if !same_carrier(carrier, a.carrier()) {
                return Err(MorphismError::CarrierMismatch.into());
            }
            a.check_sigma_odd(weight.sigma())
                .map_err(|e| FamilyError::SideConditionViolated(format!("A∘σ = -A fails: {e}")))?;
            a.clone()
        }
        None => AdditiveFunction::zero(carrier),
    };
    let forced = carrier.as_finite().is_some();
    Ok((a, forced))
}

fn resolve_theta<T: Scalar>(
    theta: Option<&ScalarFunction<T>>,
    weight: &WeightFunction<T>,
) -> Result<ScalarFunction<T>, FamilyError> {
    let Some(theta) = theta else { return Ok(ScalarFunction::zero(weight.carrier())) };
    if !same_carrier(theta.carrier(), weight.carrier()) {
        return Err(MorphismError::CarrierMismatch.into());
    }
    let scope = weight.carrier().default_scope();
    let scan = nullspace_residual(theta, weight, scope)?;
    if !scan.passes(T::residual_tolerance()) {
        return Err(FamilyError::ThetaNotInNullspace { max: scan.max, witness: witness_string(&scan.witness) });
    }
    Ok(theta.clone())
}

fn finish<T: Scalar>(
    tag: FamilyTag,
    params: FamilyParams<T>,
    slots: Slots<T>,
    weight: Option<&WeightFunction<T>>,
    carrier: &Carrier,
    forced_zero: bool,
) -> Result<SolutionTriple<T>, FamilyError> {
    let scope: Scope = carrier.default_scope();
    let triple = SolutionTriple::verify(tag, params, slots, weight.cloned(), scope, T::residual_tolerance())?;
    Ok(if forced_zero { triple.warn(Warning::ForcedZeroAdditive) } else { triple })
}

pub enum SineAdditionInput<T> {
    /// `g = (χ₁ + χ₂)/2`, `f = c(χ₁ - χ₂)`.
    DistinctChars { chi1: MultiplicativeFunction<T>, chi2: MultiplicativeFunction<T>, c: T },
    /// `g = χ`, `f = χA` (zero on `I_χ`).
    EqualChars { chi: MultiplicativeFunction<T>, additive: Option<AdditiveFunction<T>> },
}

pub fn sine_addition_family<T: Scalar>(input: SineAdditionInput<T>) -> Result<SolutionTriple<T>, FamilyError> {
    match input {
        SineAdditionInput::DistinctChars { chi1, chi2, c } => {
            if chi1.same_as(&chi2) {
                return Err(FamilyError::InvalidParams("χ₁ and χ₂ must differ".into()));
            }
            require_nonzero(&c, "c", "f would vanish")?;
            let a = ScalarFunction::from_character(&chi1);
            let b = ScalarFunction::from_character(&chi2);
            let g = a.add(&b)?.scale(&T::half());
            let f = a.sub(&b)?.scale(&c);
            let carrier = chi1.carrier().clone();
            let params = FamilyParams { c: Some(c), chi: Some(chi1), chi2: Some(chi2), ..Default::default() };
            finish(
                FamilyTag::SineAddition(SineAdditionCase::DistinctChars),
                params,
                Slots::new().with(Slot::F, f).with(Slot::G, g),
                None,
                &carrier,
                false,
            )
        }
        SineAdditionInput::EqualChars { chi, additive } => {
            let carrier = chi.carrier().clone();
            let a = match additive {
                Some(a) if same_carrier(&carrier, a.carrier()) => a,
                Some(_) => return Err(MorphismError::CarrierMismatch.into()),
                None => AdditiveFunction::zero(&carrier),
            };
            let forced = carrier.as_finite().is_some();
            if a.is_zero() && !forced {
                return Err(FamilyError::InvalidParams("A must be nonzero: f would vanish".into()));
            }
            let g = ScalarFunction::from_character(&chi);
            let f = g.mul_additive(&a)?;
            let params = FamilyParams { chi: Some(chi), additive: Some(a), ..Default::default() };
            finish(
                FamilyTag::SineAddition(SineAdditionCase::EqualChars),
                params,
                Slots::new().with(Slot::F, f).with(Slot::G, g),
                None,
                &carrier,
                forced,
            )
        }
    }
}

pub enum MuSineInput<T> {
    /// `k = c₂v`, `l = u + c₁v`.
    Distinct { chi: MultiplicativeFunction<T>, c1: T, c2: T },
    /// `k = χA`, `l = χ(1 + c₁A)`.
    Equal { chi: MultiplicativeFunction<T>, c1: T, additive: Option<AdditiveFunction<T>> },
}

pub fn mu_sine_subtraction_family<T: Scalar>(
    input: MuSineInput<T>,
    weight: &WeightFunction<T>,
) -> Result<SolutionTriple<T>, FamilyError> {
    let carrier = weight.carrier().clone();
    match input {
        MuSineInput::Distinct { chi, c1, c2 } => {
            require_branch(&chi, weight, Branch::Distinct)?;
            require_nonzero(&c2, "c2", "k would vanish")?;
            let p = parts(&chi, weight)?;
            let k = p.v.scale(&c2);
            let l = p.u.add(&p.v.scale(&c1))?;
            let params = FamilyParams {
                c1: Some(c1),
                c2: Some(c2),
                chi: Some(chi),
                branch: Some(Branch::Distinct),
                ..Default::default()
            };
            finish(
                FamilyTag::MuSineSubtraction(Branch::Distinct),
                params,
                Slots::new().with(Slot::K, k).with(Slot::L, l),
                Some(weight),
                &carrier,
                false,
            )
        }
        MuSineInput::Equal { chi, c1, additive } => {
            require_branch(&chi, weight, Branch::Equal)?;
            require_squares(weight)?;
            let (a, forced) = resolve_additive(&carrier, additive.as_ref(), weight)?;
            if a.is_zero() && !forced {
                return Err(FamilyError::InvalidParams("A must be nonzero: k would vanish".into()));
            }
            let x = ScalarFunction::from_character(&chi);
            let k = x.mul_additive(&a)?;
            let l = x.add(&k.scale(&c1))?;
            let params = FamilyParams {
                c1: Some(c1),
                chi: Some(chi),
                additive: Some(a),
                branch: Some(Branch::Equal),
                ..Default::default()
            };
            finish(
                FamilyTag::MuSineSubtraction(Branch::Equal),
                params,
                Slots::new().with(Slot::K, k).with(Slot::L, l),
                Some(weight),
                &carrier,
                forced,
            )
        }
    }
}

pub enum WilsonInput<T> {
    Zero { g: ScalarFunction<T> },
    EvenScaled { chi: MultiplicativeFunction<T>, alpha: T },
    Third { chi: MultiplicativeFunction<T>, c: T, alpha: T },
    Additive { chi: MultiplicativeFunction<T>, alpha: T, additive: Option<AdditiveFunction<T>> },
}

pub fn wilson_family<T: Scalar>(
    input: WilsonInput<T>,
    weight: &WeightFunction<T>,
) -> Result<SolutionTriple<T>, FamilyError> {
    let carrier = weight.carrier().clone();
    let (case, params, f, g, forced) = match input {
        WilsonInput::Zero { g } => {
            if !same_carrier(&carrier, g.carrier()) {
                return Err(MorphismError::CarrierMismatch.into());
            }
            (WilsonCase::Zero, FamilyParams::default(), ScalarFunction::zero(&carrier), g, false)
        }
        WilsonInput::EvenScaled { chi, alpha } => {
            require_nonzero(&alpha, "alpha", "f would vanish")?;
            let p = parts(&chi, weight)?;
            let f = p.u.scale(&alpha);
            let params = FamilyParams { alpha: Some(alpha), chi: Some(chi), ..Default::default() };
            (WilsonCase::EvenScaled, params, f, p.u, false)
        }
        WilsonInput::Third { chi, c, alpha } => {
            require_nonzero(&c, "c", "the case takes c ≠ 0")?;
            require_nonzero(&alpha, "alpha", "the case takes α ≠ 0")?;
            let p = parts(&chi, weight)?;
            let composed = ScalarFunction::from_character(&chi.compose(weight.sigma())?);
            // (μ - 1)χ = (μ - 1)χ∘σ
            let mu_minus_one =
                ScalarFunction::from_character(weight.mu()).sub(&ScalarFunction::constant(&carrier, T::one()))?;
            let lhs = mu_minus_one.mul(&p.chi)?;
            let rhs = mu_minus_one.mul(&composed)?;
            let scope = carrier.default_scope();
            if !lhs.sub(&rhs)?.is_zero_on(scope) {
                return Err(FamilyError::SideConditionViolated("(μ - 1)χ ≠ (μ - 1)χ∘σ".into()));
            }
            let half_alpha = alpha.clone() * T::half();
            let f = p.chi.scale(&(c.clone() + half_alpha.clone())).sub(&composed.scale(&(c.clone() - half_alpha)))?;
            let params = FamilyParams { c: Some(c), alpha: Some(alpha), chi: Some(chi), ..Default::default() };
            (WilsonCase::Third, params, f, p.u, false)
        }
        WilsonInput::Additive { chi, alpha, additive } => {
            require_branch(&chi, weight, Branch::Equal)
                .map_err(|_| FamilyError::SideConditionViolated("χ ≠ μ·χ∘σ".into()))?;
            let (a, forced) = resolve_additive(&carrier, additive.as_ref(), weight)?;
            if a.is_zero() && alpha.is_zero() {
                return Err(FamilyError::InvalidParams("A and α both zero: f would vanish".into()));
            }
            let g = ScalarFunction::from_character(&chi);
            let f = g.mul_additive(&a)?.add(&g.scale(&alpha))?;
            let params = FamilyParams {
                alpha: Some(alpha),
                chi: Some(chi),
                additive: Some(a),
                branch: Some(Branch::Equal),
                ..Default::default()
            };
            (WilsonCase::Additive, params, f, g, forced)
        }
    };
    finish(
        FamilyTag::Wilson(case),
        params,
        Slots::new().with(Slot::F, f).with(Slot::G, g),
        Some(weight),
        &carrier,
        forced,
    )
}

pub enum MainInput<T> {
    /// `h = c₁v`, `g = c·u + c₂v`, `f = θ + (c₁/2)(c·v + c₂u)`.
    Distinct { chi: MultiplicativeFunction<T>, c: T, c1: T, c2: T, theta: Option<ScalarFunction<T>> },
    /// `h = χA`, `g = χ(c + c₂A)`, `f = θ + χA(c/2 + c₂A/4)`.
    Equal {
        chi: MultiplicativeFunction<T>,
        c: T,
        c2: T,
        additive: Option<AdditiveFunction<T>>,
        theta: Option<ScalarFunction<T>>,
    },
}

pub fn main_family<T: Scalar>(
    input: MainInput<T>,
    weight: &WeightFunction<T>,
) -> Result<SolutionTriple<T>, FamilyError> {
    let carrier = weight.carrier().clone();
    match input {
        MainInput::Distinct { chi, c, c1, c2, theta } => {
            require_branch(&chi, weight, Branch::Distinct)?;
            require_nonzero(&c1, "c1", "h would vanish")?;
            if c.is_zero() && c2.is_zero() {
                return Err(FamilyError::InvalidParams("c and c2 both zero: g would vanish".into()));
            }
            let theta = resolve_theta(theta.as_ref(), weight)?;
            let p = parts(&chi, weight)?;
            let h = p.v.scale(&c1);
            let g = p.u.scale(&c).add(&p.v.scale(&c2))?;
            let inner = p.v.scale(&c).add(&p.u.scale(&c2))?;
            let f = theta.add(&inner.scale(&(c1.clone() * T::half())))?;
            let params = FamilyParams {
                c: Some(c),
                c1: Some(c1),
                c2: Some(c2),
                chi: Some(chi),
                theta: Some(theta),
                branch: Some(Branch::Distinct),
                ..Default::default()
            };
            finish(
                FamilyTag::Main(Branch::Distinct),
                params,
                Slots::new().with(Slot::F, f).with(Slot::G, g).with(Slot::H, h),
                Some(weight),
                &carrier,
                false,
            )
        }
        MainInput::Equal { chi, c, c2, additive, theta } => {
            require_branch(&chi, weight, Branch::Equal)?;
            require_squares(weight)?;
            let (a, forced) = resolve_additive(&carrier, additive.as_ref(), weight)?;
            if a.is_zero() && !forced {
                return Err(FamilyError::InvalidParams("A must be nonzero: h would vanish".into()));
            }
            if c.is_zero() && (c2.is_zero() || a.is_zero()) {
                return Err(FamilyError::InvalidParams("g would vanish".into()));
            }
            let theta = resolve_theta(theta.as_ref(), weight)?;
            let x = ScalarFunction::from_character(&chi);
            let h = x.mul_additive(&a)?;
            let haa = h.mul_additive(&a)?;
            let g = x.scale(&c).add(&h.scale(&c2))?;
            let quarter = T::half() * T::half();
            let f = theta.add(&h.scale(&(c.clone() * T::half())))?.add(&haa.scale(&(c2.clone() * quarter)))?;
            let params = FamilyParams {
                c: Some(c),
                c2: Some(c2),
                chi: Some(chi),
                additive: Some(a),
                theta: Some(theta),
                branch: Some(Branch::Equal),
                ..Default::default()
            };
            finish(
                FamilyTag::Main(Branch::Equal),
                params,
                Slots::new().with(Slot::F, f).with(Slot::G, g).with(Slot::H, h),
                Some(weight),
                &carrier,
                forced,
            )
        }
    }
}

pub enum ApplicationInput<T> {
    /// `h = α(u + c₂v)`, `f = ½[α²(1+c₂²)u + 2α²c₂v + θ]`, `g = ½[α²(1-c₂²)u - θ]`.
    A { chi: MultiplicativeFunction<T>, alpha: T, c2: T, theta: Option<ScalarFunction<T>> },
    /// `h = αχ(1 + κA)`, `f = ½[α²χ(1 + 2κA + κ²A²/2) + θ]`, `g = ½[α²χ(1 - κ²A²/2) - θ]`.
    B {
        chi: MultiplicativeFunction<T>,
        alpha: T,
        kappa: T,
        additive: Option<AdditiveFunction<T>>,
        theta: Option<ScalarFunction<T>>,
    },
}

pub fn application_family<T: Scalar>(
    input: ApplicationInput<T>,
    weight: &WeightFunction<T>,
) -> Result<SolutionTriple<T>, FamilyError> {
    let carrier = weight.carrier().clone();
    let half = T::half();
    match input {
        ApplicationInput::A { chi, alpha, c2, theta } => {
            require_branch(&chi, weight, Branch::Distinct)?;
            require_nonzero(&alpha, "alpha", "f + g would vanish")?;
            let theta = resolve_theta(theta.as_ref(), weight)?;
            let p = parts(&chi, weight)?;
            let a2 = alpha.clone() * alpha.clone();
            let c2sq = c2.clone() * c2.clone();
            let h = p.u.add(&p.v.scale(&c2))?.scale(&alpha);
            let f = p
                .u
                .scale(&(a2.clone() * (T::one() + c2sq.clone())))
                .add(&p.v.scale(&(T::from_integer(2) * a2.clone() * c2.clone())))?
                .add(&theta)?
                .scale(&half);
            let g = p.u.scale(&(a2 * (T::one() - c2sq))).sub(&theta)?.scale(&half);
            let params = FamilyParams {
                c2: Some(c2),
                alpha: Some(alpha),
                chi: Some(chi),
                theta: Some(theta),
                branch: Some(Branch::Distinct),
                ..Default::default()
            };
            finish(
                FamilyTag::Application(ApplicationCase::A),
                params,
                Slots::new().with(Slot::F, f).with(Slot::G, g).with(Slot::H, h),
                Some(weight),
                &carrier,
                false,
            )
        }
        ApplicationInput::B { chi, alpha, kappa, additive, theta } => {
            require_branch(&chi, weight, Branch::Equal)?;
            require_nonzero(&alpha, "alpha", "f + g would vanish")?;
            let (a, forced) = resolve_additive(&carrier, additive.as_ref(), weight)?;
            let theta = resolve_theta(theta.as_ref(), weight)?;
            let x = ScalarFunction::from_character(&chi);
            let xa = x.mul_additive(&a)?;
            let xaa = xa.mul_additive(&a)?;
            let a2 = alpha.clone() * alpha.clone();
            let k2_half = kappa.clone() * kappa.clone() * half.clone();
            let h = x.add(&xa.scale(&kappa))?.scale(&alpha);
            let f = x
                .add(&xa.scale(&(T::from_integer(2) * kappa.clone())))?
                .add(&xaa.scale(&k2_half))?
                .scale(&a2)
                .add(&theta)?
                .scale(&half);
            let g = x.sub(&xaa.scale(&k2_half))?.scale(&a2).sub(&theta)?.scale(&half);
            let params = FamilyParams {
                alpha: Some(alpha),
                kappa: Some(kappa),
                chi: Some(chi),
                additive: Some(a),
                theta: Some(theta),
                branch: Some(Branch::Equal),
                ..Default::default()
            };
            finish(
                FamilyTag::Application(ApplicationCase::B),
                params,
                Slots::new().with(Slot::F, f).with(Slot::G, g).with(Slot::H, h),
                Some(weight),
                &carrier,
                forced,
            )
        }
    }
}
