use rayon::prelude::*;

use crate::carrier::{Element, Scope};
use crate::equations::{max_residual, EquationId, ResidualScan, ScalarFunction, Slot, Slots};
use crate::families::witness_string;
use crate::morphisms::WeightFunction;
use crate::scalar::Scalar;

use super::AnalysisError;

/// Outcome of one pointwise clause.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseCheck {
    pub passed: bool,
    pub max: f64,
    /// Where the largest deviation sits; `None` when there is none.
    pub witness: Option<String>,
}

impl ClauseCheck {
    fn from_scan(scan: &ResidualScan, tol: f64) -> Self {
        ClauseCheck {
            passed: scan.passes(tol),
            max: scan.max,
            witness: scan.witness.as_ref().map(|_| witness_string(&scan.witness)),
        }
    }
}

/// Running maximum of `|value|` with exact-zero tracking.
struct Acc {
    max: f64,
    witness: Option<String>,
    all_zero: bool,
}

impl Acc {
    fn new() -> Self {
        Acc { max: 0.0, witness: None, all_zero: true }
    }

    fn push<T: Scalar>(&mut self, value: T, at: impl FnOnce() -> String) {
        if value.is_zero() {
            return;
        }
        self.all_zero = false;
        let m = value.modulus();
        if m > self.max || self.witness.is_none() {
            self.max = self.max.max(m);
            self.witness = Some(at());
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.all_zero &= other.all_zero;
        if other.max > self.max || (self.witness.is_none() && other.witness.is_some()) {
            self.max = self.max.max(other.max);
            self.witness = other.witness;
        }
        self
    }

    fn finish<T: Scalar>(self, tol: f64) -> ClauseCheck {
        let passed = if T::EXACT { self.all_zero } else { self.max <= tol };
        ClauseCheck { passed, max: self.max, witness: self.witness }
    }
}

fn scan_points<T: Scalar>(elems: &[Element], tol: f64, f: impl Fn(&Element) -> T) -> ClauseCheck {
    let mut acc = Acc::new();
    for x in elems {
        acc.push(f(x), || x.to_string());
    }
    acc.finish::<T>(tol)
}

fn scan_pairs<T: Scalar>(
    elems: &[Element],
    tol: f64,
    f: impl Fn(&Element, &Element) -> T + Sync,
) -> ClauseCheck {
    elems
        .par_iter()
        .map(|x| {
            let mut acc = Acc::new();
            for y in elems {
                acc.push(f(x, y), || format!("({x}, {y})"));
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Acc::new(), Acc::merge)
        .finish::<T>(tol)
}

/// What the structure of `g` looks like, split on `g(e)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GBranch<T> {
    /// `g(e) = 0`: `g` should be a multiple `b·h`.
    ZeroAtIdentity { b: T, proportional: ClauseCheck },
    /// `g(e) ≠ 0`: `(h, g/g(e))` should solve the μ-sine subtraction law.
    NonZeroAtIdentity { companion: ClauseCheck },
}

impl<T> GBranch<T> {
    pub fn passed(&self) -> bool {
        match self {
            GBranch::ZeroAtIdentity { proportional, .. } => proportional.passed,
            GBranch::NonZeroAtIdentity { companion } => companion.passed,
        }
    }
}

/// Pointwise checks of the properties forced on `h` and `g` by a
/// nondegenerate MAIN solution.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport<T> {
    /// MAIN residual of the triple itself, for reference.
    pub main: ResidualScan,
    /// `h(σx) = -μ(σx)h(x)`.
    pub oddness: ClauseCheck,
    /// `h(xy) = h(yx)`.
    pub centrality: ClauseCheck,
    /// `(h, l)` solves the μ-sine subtraction law with
    /// `l(y) = μ(y)h(x₀σ(y))/h(x₀)` and `x₀` the first maximizer of `|h|`.
    pub sine_law: ClauseCheck,
    pub g_branch: GBranch<T>,
}

impl<T> StructureReport<T> {
    pub fn passed(&self) -> bool {
        self.oddness.passed && self.centrality.passed && self.sine_law.passed && self.g_branch.passed()
    }
}

fn negligible<T: Scalar>(v: &T, tol: f64) -> bool {
    if T::EXACT {
        v.is_zero()
    } else {
        v.modulus() <= tol
    }
}

/// Run every structural check on the MAIN slots `f, g, h` over `scope`.
pub fn verify_structure<T: Scalar>(
    slots: &Slots<T>,
    weight: &WeightFunction<T>,
    scope: Scope,
    tol: f64,
) -> Result<StructureReport<T>, AnalysisError> {
    let main = max_residual(EquationId::Main, slots, Some(weight), scope)?;
    let g = slots.get(Slot::G).expect("checked by the scan");
    let h = slots.get(Slot::H).expect("checked by the scan");
    if g.is_zero_on(scope) {
        return Err(AnalysisError::PreconditionViolated("g vanishes on the scope".into()));
    }
    if h.is_zero_on(scope) {
        return Err(AnalysisError::PreconditionViolated("h vanishes on the scope".into()));
    }
    let carrier = weight.carrier().clone();
    let sigma = weight.sigma();
    let op = |a: &Element, b: &Element| carrier.op(a, b);
    let elems = carrier.elements(scope);

    let oddness = scan_points(&elems, tol, |x| {
        let sx = sigma.apply(x);
        h.eval(&sx) + weight.eval(&sx) * h.eval(x)
    });
    let centrality = scan_pairs(&elems, tol, |x, y| h.eval(&op(x, y)) - h.eval(&op(y, x)));

    let hv: Vec<T> = elems.iter().map(|x| h.eval(x)).collect();
    let x0 = (0..elems.len()).fold(0, |best, i| if hv[i].modulus() > hv[best].modulus() { i } else { best });
    let (x0, hx0) = (&elems[x0], hv[x0].clone());
    let l = |y: &Element| weight.eval(y) * h.eval(&op(x0, &sigma.apply(y))) / hx0.clone();
    let sine_law = scan_pairs(&elems, tol, |x, y| {
        weight.eval(y) * h.eval(&op(x, &sigma.apply(y))) - h.eval(x) * l(y) + h.eval(y) * l(x)
    });

    let ge = g.eval(&carrier.identity());
    let g_branch = if negligible(&ge, tol) {
        let b = g.eval(x0) / hx0.clone();
        let proportional = scan_points(&elems, tol, |x| g.eval(x) - b.clone() * h.eval(x));
        GBranch::ZeroAtIdentity { b, proportional }
    } else {
        let companion: ScalarFunction<T> = g.scale(&ge.inv());
        let pair = Slots::new().with(Slot::K, h.clone()).with(Slot::L, companion);
        let scan = max_residual(EquationId::MuSineSubtraction, &pair, Some(weight), scope)?;
        GBranch::NonZeroAtIdentity { companion: ClauseCheck::from_scan(&scan, tol) }
    };

    Ok(StructureReport { main, oddness, centrality, sine_law, g_branch })
}
