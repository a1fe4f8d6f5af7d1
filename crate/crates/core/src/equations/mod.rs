//! The five functional equations as pointwise residuals, plus the μ-even /
//! μ-odd split of a function.

mod function;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::carrier::{Carrier, Element, Scope};
use crate::morphisms::{same_carrier, WeightFunction};
use crate::scalar::Scalar;

pub use function::{ScalarFunction, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("functions live on different carriers")]
    CarrierMismatch,
    #[error("equation {equation} needs slot {slot}")]
    MissingSlot { equation: EquationId, slot: Slot },
    #[error("equation {0} needs a weight μ and automorphism σ")]
    MissingWeight(EquationId),
    #[error("operation needs a finite carrier")]
    NotFinite,
    #[error("operation needs a lattice carrier")]
    NotLattice,
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("unknown equation `{0}`")]
    UnknownEquation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquationId {
    /// `f(xy) = f(x)g(y) + f(y)g(x)`.
    SineAddition,
    /// `μ(y)k(xσ(y)) = k(x)l(y) - k(y)l(x)`.
    MuSineSubtraction,
    /// `f(xy) + μ(y)f(σ(y)x) = 2f(x)g(y)`.
    Wilson,
    /// `f(xy) - μ(y)f(σ(y)x) = g(x)h(y)`.
    Main,
    /// `f(xy) + μ(y)g(σ(y)x) = h(x)h(y)`.
    Application,
}

impl EquationId {
    pub const ALL: [EquationId; 5] = [
        EquationId::SineAddition,
        EquationId::MuSineSubtraction,
        EquationId::Wilson,
        EquationId::Main,
        EquationId::Application,
    ];

    pub fn slots(self) -> &'static [Slot] {
        match self {
            EquationId::SineAddition | EquationId::Wilson => &[Slot::F, Slot::G],
            EquationId::MuSineSubtraction => &[Slot::K, Slot::L],
            EquationId::Main | EquationId::Application => &[Slot::F, Slot::G, Slot::H],
        }
    }

    pub fn needs_weight(self) -> bool {
        self != EquationId::SineAddition
    }

    pub fn name(self) -> &'static str {
        match self {
            EquationId::SineAddition => "SINE_ADDITION",
            EquationId::MuSineSubtraction => "MU_SINE_SUBTRACTION",
            EquationId::Wilson => "WILSON",
            EquationId::Main => "MAIN",
            EquationId::Application => "APPLICATION",
        }
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationId {
    type Err = EquationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        EquationId::ALL
            .into_iter()
            .find(|e| e.name() == key)
            .ok_or_else(|| EquationError::UnknownEquation(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    F,
    G,
    H,
    K,
    L,
}

impl Slot {
    pub const ALL: [Slot; 5] = [Slot::F, Slot::G, Slot::H, Slot::K, Slot::L];

    pub fn name(self) -> &'static str {
        match self {
            Slot::F => "f",
            Slot::G => "g",
            Slot::H => "h",
            Slot::K => "k",
            Slot::L => "l",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Slot {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Slot::ALL.into_iter().find(|x| x.name() == s.trim()).ok_or(())
    }
}

/// Named unknowns handed to a residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Slots<T> {
    map: BTreeMap<Slot, ScalarFunction<T>>,
}

impl<T> Default for Slots<T> {
    fn default() -> Self {
        Slots { map: BTreeMap::new() }
    }
}

impl<T: Scalar> Slots<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, slot: Slot, f: ScalarFunction<T>) -> Self {
        self.map.insert(slot, f);
        self
    }

    pub fn insert(&mut self, slot: Slot, f: ScalarFunction<T>) {
        self.map.insert(slot, f);
    }

    pub fn get(&self, slot: Slot) -> Option<&ScalarFunction<T>> {
        self.map.get(&slot)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Slot, &ScalarFunction<T>)> {
        self.map.iter().map(|(s, f)| (*s, f))
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> Slots<U> {
        Slots { map: self.map.iter().map(|(s, g)| (*s, g.map_scalar(f))).collect() }
    }
}

/// Validated inputs for repeated residual evaluation.
struct Bound<'a, T> {
    eq: EquationId,
    carrier: Arc<Carrier>,
    a: &'a ScalarFunction<T>,
    b: &'a ScalarFunction<T>,
    c: Option<&'a ScalarFunction<T>>,
    weight: Option<&'a WeightFunction<T>>,
}

fn bind<'a, T: Scalar>(
    eq: EquationId,
    slots: &'a Slots<T>,
    weight: Option<&'a WeightFunction<T>>,
) -> Result<Bound<'a, T>, EquationError> {
    let mut funcs = Vec::new();
    for &slot in eq.slots() {
        funcs.push(slots.get(slot).ok_or(EquationError::MissingSlot { equation: eq, slot })?);
    }
    let carrier = funcs[0].carrier().clone();
    if funcs.iter().any(|f| !same_carrier(&carrier, f.carrier())) {
        return Err(EquationError::CarrierMismatch);
    }
    let weight = if eq.needs_weight() {
        let w = weight.ok_or(EquationError::MissingWeight(eq))?;
        if !same_carrier(&carrier, w.carrier()) {
            return Err(EquationError::CarrierMismatch);
        }
        Some(w)
    } else {
        None
    };
    Ok(Bound { eq, carrier, a: funcs[0], b: funcs[1], c: funcs.get(2).copied(), weight })
}

impl<T: Scalar> Bound<'_, T> {
    fn at(&self, x: &Element, y: &Element) -> T {
        let op = |p: &Element, q: &Element| self.carrier.op(p, q);
        let two = T::from_integer(2);
        // μ(y) and σ(y)x where needed
        let twisted = |f: &ScalarFunction<T>| {
            let w = self.weight.expect("bound weight");
            w.eval(y) * f.eval(&op(&w.sigma().apply(y), x))
        };
        let (a, b) = (self.a, self.b);
        match self.eq {
            EquationId::SineAddition => a.eval(&op(x, y)) - a.eval(x) * b.eval(y) - a.eval(y) * b.eval(x),
            EquationId::MuSineSubtraction => {
                let w = self.weight.expect("bound weight");
                w.eval(y) * a.eval(&op(x, &w.sigma().apply(y))) - a.eval(x) * b.eval(y) + a.eval(y) * b.eval(x)
            }
            EquationId::Wilson => a.eval(&op(x, y)) + twisted(a) - two * a.eval(x) * b.eval(y),
            EquationId::Main => {
                let h = self.c.expect("h slot");
                a.eval(&op(x, y)) - twisted(a) - b.eval(x) * h.eval(y)
            }
            EquationId::Application => {
                let h = self.c.expect("h slot");
                a.eval(&op(x, y)) + twisted(b) - h.eval(x) * h.eval(y)
            }
        }
    }
}

/// Left side minus right side of `eq` at `(x, y)`. The weight may be `None`
/// only for [`EquationId::SineAddition`].
pub fn residual<T: Scalar>(
    eq: EquationId,
    slots: &Slots<T>,
    weight: Option<&WeightFunction<T>>,
    x: &Element,
    y: &Element,
) -> Result<T, EquationError> {
    Ok(bind(eq, slots, weight)?.at(x, y))
}

/// Result of scanning a residual over every pair of a scope.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualScan {
    pub max: f64,
    /// First pair attaining the maximum, `None` when every residual is zero.
    pub witness: Option<(Element, Element)>,
    /// Every residual was exactly zero.
    pub all_zero: bool,
    /// Arithmetic was exact.
    pub exact: bool,
    pub pairs: usize,
}

impl ResidualScan {
    /// Exact scans pass only when every residual is zero.
    pub fn passes(&self, tol: f64) -> bool {
        if self.exact {
            self.all_zero
        } else {
            self.max <= tol
        }
    }
}

/// Scan `|residual|` over all pairs of `scope`, in parallel over rows. Ties
/// resolve to the first pair in iteration order.
pub fn max_residual<T: Scalar>(
    eq: EquationId,
    slots: &Slots<T>,
    weight: Option<&WeightFunction<T>>,
    scope: Scope,
) -> Result<ResidualScan, EquationError> {
    let bound = bind(eq, slots, weight)?;
    let elems = bound.carrier.elements(scope);
    let rows: Vec<(f64, usize, bool)> = elems
        .par_iter()
        .map(|x| {
            let mut best = (0.0f64, 0usize, true);
            for (j, y) in elems.iter().enumerate() {
                let r = bound.at(x, y);
                if !r.is_zero() {
                    best.2 = false;
                }
                let m = r.modulus();
                if m > best.0 {
                    best.0 = m;
                    best.1 = j;
                }
            }
            best
        })
        .collect();
    let mut scan =
        ResidualScan { max: 0.0, witness: None, all_zero: true, exact: T::EXACT, pairs: elems.len() * elems.len() };
    for (i, &(m, j, zero)) in rows.iter().enumerate() {
        scan.all_zero &= zero;
        if m > scan.max {
            scan.max = m;
            scan.witness = Some((elems[i].clone(), elems[j].clone()));
        }
    }
    if scan.witness.is_none() && !scan.all_zero {
        // nonzero residuals whose modulus rounds to zero
        let i = rows.iter().position(|r| !r.2).unwrap();
        let j = elems.iter().position(|y| !bound.at(&elems[i], y).is_zero()).unwrap();
        scan.witness = Some((elems[i].clone(), elems[j].clone()));
    }
    Ok(scan)
}

/// Split `h` into `h_e = (h + μ·h∘σ)/2` and `h_o = (h - μ·h∘σ)/2`.
pub fn mu_even_odd<T: Scalar>(
    h: &ScalarFunction<T>,
    weight: &WeightFunction<T>,
) -> Result<(ScalarFunction<T>, ScalarFunction<T>), EquationError> {
    let star = h.twist(weight)?;
    let half = T::half();
    Ok((h.add(&star)?.scale(&half), h.sub(&star)?.scale(&half)))
}

/// MAIN residual of `(θ, 0, 0)`: zero exactly when θ lies in the nullspace.
pub fn nullspace_residual<T: Scalar>(
    theta: &ScalarFunction<T>,
    weight: &WeightFunction<T>,
    scope: Scope,
) -> Result<ResidualScan, EquationError> {
    let zero = ScalarFunction::zero(theta.carrier());
    let slots = Slots::new().with(Slot::F, theta.clone()).with(Slot::G, zero.clone()).with(Slot::H, zero);
    max_residual(EquationId::Main, &slots, Some(weight), scope)
}
