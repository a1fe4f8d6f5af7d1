//! Closed-form solution families of the five equations. Every constructor
//! checks its side conditions, builds the slots, and re-verifies the residual
//! before returning.

mod constructors;
pub mod classical;
mod sweep;

use std::fmt;

use thiserror::Error;

use crate::carrier::{Element, Scope};
use crate::equations::{max_residual, EquationError, EquationId, ResidualScan, ScalarFunction, Slot, Slots};
use crate::morphisms::{AdditiveFunction, Branch, MorphismError, MultiplicativeFunction, WeightFunction};
use crate::scalar::Scalar;

pub use constructors::{
    application_family, main_family, mu_sine_subtraction_family, sine_addition_family, wilson_family,
    ApplicationInput, MainInput, MuSineInput, SineAdditionInput, WilsonInput,
};
pub use sweep::{sweep, sweep_points, SweepConfig, SweepEntry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("branch mismatch: family needs {expected}, χ is in {found}")]
    BranchMismatch { expected: Branch, found: Branch },
    #[error("the EQUAL branch on a non-group monoid needs a monoid generated by its squares")]
    NotSquaresGenerated,
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("θ is not in the nullspace (residual {max:.3e} at {witness})")]
    ThetaNotInNullspace { max: f64, witness: String },
    #[error("{equation} residual {max:.3e} at {witness} exceeds tolerance")]
    VerificationFailed { equation: EquationId, max: f64, witness: String },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Equation(#[from] EquationError),
}

pub(crate) fn witness_string(w: &Option<(Element, Element)>) -> String {
    match w {
        Some((x, y)) => format!("({x}, {y})"),
        None => "-".to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SineAdditionCase {
    DistinctChars,
    EqualChars,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WilsonCase {
    /// `f = 0`, `g` arbitrary.
    Zero,
    /// `g = u`, `f = αg`.
    EvenScaled,
    /// `g = u`, `f = (c + α/2)χ - (c - α/2)χ∘σ`.
    Third,
    /// `g = χ`, `f = χ(A + α)`.
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ApplicationCase {
    A,
    B,
}

/// Which family a triple belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    SineAddition(SineAdditionCase),
    MuSineSubtraction(Branch),
    Wilson(WilsonCase),
    Main(Branch),
    /// `g ≡ 0` or `h ≡ 0` with `f` in the nullspace.
    MainDegenerate,
    Application(ApplicationCase),
}

impl FamilyTag {
    pub fn equation(self) -> EquationId {
        match self {
            FamilyTag::SineAddition(_) => EquationId::SineAddition,
            FamilyTag::MuSineSubtraction(_) => EquationId::MuSineSubtraction,
            FamilyTag::Wilson(_) => EquationId::Wilson,
            FamilyTag::Main(_) | FamilyTag::MainDegenerate => EquationId::Main,
            FamilyTag::Application(_) => EquationId::Application,
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let case = match self {
            FamilyTag::SineAddition(SineAdditionCase::DistinctChars) => "DISTINCT_CHARS".to_string(),
            FamilyTag::SineAddition(SineAdditionCase::EqualChars) => "EQUAL_CHARS".to_string(),
            FamilyTag::MuSineSubtraction(b) | FamilyTag::Main(b) => b.to_string(),
            FamilyTag::Wilson(c) => match c {
                WilsonCase::Zero => "ZERO",
                WilsonCase::EvenScaled => "EVEN_SCALED",
                WilsonCase::Third => "THIRD",
                WilsonCase::Additive => "ADDITIVE",
            }
            .to_string(),
            FamilyTag::MainDegenerate => "DEGENERATE".to_string(),
            FamilyTag::Application(ApplicationCase::A) => "A".to_string(),
            FamilyTag::Application(ApplicationCase::B) => "B".to_string(),
        };
        write!(f, "{}/{}", self.equation(), case)
    }
}

/// Constants and structure maps a triple was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams<T> {
    pub c: Option<T>,
    pub c1: Option<T>,
    pub c2: Option<T>,
    pub alpha: Option<T>,
    pub b: Option<T>,
    pub kappa: Option<T>,
    pub chi: Option<MultiplicativeFunction<T>>,
    pub chi2: Option<MultiplicativeFunction<T>>,
    pub additive: Option<AdditiveFunction<T>>,
    pub theta: Option<ScalarFunction<T>>,
    pub branch: Option<Branch>,
}

impl<T> Default for FamilyParams<T> {
    fn default() -> Self {
        FamilyParams {
            c: None,
            c1: None,
            c2: None,
            alpha: None,
            b: None,
            kappa: None,
            chi: None,
            chi2: None,
            additive: None,
            theta: None,
            branch: None,
        }
    }
}

impl<T: Scalar> FamilyParams<T> {
    /// Named scalar constants that are set, in a fixed order.
    pub fn constants(&self) -> Vec<(&'static str, &T)> {
        [("c", &self.c), ("c1", &self.c1), ("c2", &self.c2), ("alpha", &self.alpha), ("b", &self.b), ("kappa", &self.kappa)]
            .into_iter()
            .filter_map(|(n, v)| v.as_ref().map(|v| (n, v)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Warning {
    /// The carrier is finite, so the additive function is forced to vanish.
    ForcedZeroAdditive,
    /// A slot vanishes identically.
    ZeroSlot(Slot),
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ForcedZeroAdditive => f.write_str("additive part forced to zero on a finite carrier"),
            Warning::ZeroSlot(s) => write!(f, "slot {s} vanishes identically"),
        }
    }
}

/// A verified solution: slots, the family they came from, and the residual
/// scan that certified them.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTriple<T> {
    tag: FamilyTag,
    params: FamilyParams<T>,
    slots: Slots<T>,
    weight: Option<WeightFunction<T>>,
    scan: ResidualScan,
    warnings: Vec<Warning>,
}

impl<T: Scalar> SolutionTriple<T> {
    /// Verify `slots` against the tag's equation over `scope` and wrap them.
    pub fn verify(
        tag: FamilyTag,
        params: FamilyParams<T>,
        slots: Slots<T>,
        weight: Option<WeightFunction<T>>,
        scope: Scope,
        tolerance: f64,
    ) -> Result<Self, FamilyError> {
        let equation = tag.equation();
        let scan = max_residual(equation, &slots, weight.as_ref(), scope)?;
        if !scan.passes(tolerance) {
            return Err(FamilyError::VerificationFailed {
                equation,
                max: scan.max,
                witness: witness_string(&scan.witness),
            });
        }
        let mut warnings = Vec::new();
        for &slot in equation.slots() {
            if slots.get(slot).is_some_and(|f| f.is_zero_on(scope)) {
                warnings.push(Warning::ZeroSlot(slot));
            }
        }
        Ok(SolutionTriple { tag, params, slots, weight, scan, warnings })
    }

    pub(crate) fn warn(mut self, w: Warning) -> Self {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
            self.warnings.sort();
        }
        self
    }

    pub fn equation(&self) -> EquationId {
        self.tag.equation()
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn params(&self) -> &FamilyParams<T> {
        &self.params
    }

    pub fn slots(&self) -> &Slots<T> {
        &self.slots
    }

    pub fn slot(&self, slot: Slot) -> &ScalarFunction<T> {
        self.slots.get(slot).expect("slot of this equation")
    }

    pub fn weight(&self) -> Option<&WeightFunction<T>> {
        self.weight.as_ref()
    }

    pub fn scan(&self) -> &ResidualScan {
        &self.scan
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// Re-run the residual scan on another scope.
    pub fn rescan(&self, scope: Scope) -> Result<ResidualScan, FamilyError> {
        Ok(max_residual(self.equation(), &self.slots, self.weight.as_ref(), scope)?)
    }
}
