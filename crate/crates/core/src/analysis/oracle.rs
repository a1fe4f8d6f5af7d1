//! Multi-start search for nondegenerate MAIN solutions on small finite
//! carriers. `f ↦ [f(xy) - μ(y)f(σ(y)x)]` is linear, so the search runs over
//! rank-one matrices `g·hᵀ` inside its image and recovers `f` afterwards.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::carrier::Scope;
use crate::equations::{max_residual, EquationId, ResidualScan, ScalarFunction, Slot, Slots};
use crate::families::FamilyTag;
use crate::linalg::inner;
use crate::morphisms::{enumerate_multiplicative, sigma_branch, Branch, MultiplicativeFunction, WeightFunction};

use super::{constraint_matrix, nullspace_basis, AnalysisError};

/// Largest carrier the oracle accepts.
pub const ORACLE_LIMIT: usize = 12;

const DAMPING: f64 = 1e-8;
const SINGULAR_CUTOFF: f64 = 1e-10;
const NEWTON_STOP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// A found triple must re-verify below this MAIN residual.
    pub tolerance: f64,
    /// Largest family fit error still counted as classified.
    pub classify_tolerance: f64,
    /// Gauge-fixed distance below which two solutions are the same.
    pub dedup_tolerance: f64,
}

impl OracleConfig {
    pub fn new(starts: usize, seed: u64) -> Self {
        OracleConfig {
            starts,
            seed,
            max_iterations: 200,
            tolerance: 1e-8,
            classify_tolerance: 1e-6,
            dedup_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// Fits the closed-form family `h = c1·v`, `g = c·u + c2·v`,
    /// `f = θ + (c1/2)(c·v + c2·u)`.
    Family {
        tag: FamilyTag,
        chi: MultiplicativeFunction<Complex64>,
        c: Complex64,
        c1: Complex64,
        c2: Complex64,
        fit: f64,
    },
    Unclassified {
        /// Smallest fit error over all candidate characters, infinite if none applied.
        best_fit: f64,
    },
}

impl Classification {
    pub fn is_classified(&self) -> bool {
        matches!(self, Classification::Family { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub f: ScalarFunction<Complex64>,
    pub g: ScalarFunction<Complex64>,
    pub h: ScalarFunction<Complex64>,
    pub scan: ResidualScan,
    pub classification: Classification,
    /// Index of the first start that reached this solution.
    pub start: usize,
    /// Number of starts that reached it.
    pub hits: usize,
}

impl OracleSolution {
    pub fn slots(&self) -> Slots<Complex64> {
        Slots::new().with(Slot::F, self.f.clone()).with(Slot::G, self.g.clone()).with(Slot::H, self.h.clone())
    }
}

/// Nondegenerate solutions found by the search. The degenerate family
/// (`g ≡ 0` or `h ≡ 0`, `f` in the nullspace) always exists and is summarized
/// by `nullspace_dimension`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub starts: usize,
    pub seed: u64,
    pub nullspace_dimension: usize,
    /// Starts whose Newton run reached a verified solution.
    pub converged: usize,
    pub solutions: Vec<OracleSolution>,
}

impl OracleReport {
    pub fn unclassified(&self) -> usize {
        self.solutions.iter().filter(|s| !s.classification.is_classified()).count()
    }

    pub fn max_residual(&self) -> f64 {
        self.solutions.iter().map(|s| s.scan.max).fold(0.0, f64::max)
    }
}

/// Linear algebra shared by every start.
struct Problem {
    n: usize,
    /// The linear map `f ↦ F`, flattened row-major in `(x, y)`.
    lin: DMatrix<Complex64>,
    /// Orthonormal basis of its image.
    q: DMatrix<Complex64>,
}

impl Problem {
    /// Component of each column orthogonal to the image.
    fn reject(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        m - &self.q * (self.q.adjoint() * m)
    }

    fn outer(&self, g: &[Complex64], h: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.n;
        DMatrix::from_fn(n * n, 1, |r, _| g[r / n] * h[r % n])
    }

    fn residual(&self, z: &DVector<Complex64>, g0: &[Complex64], h0: &[Complex64]) -> DVector<Complex64> {
        let n = self.n;
        let (g, h) = (&z.as_slice()[..n], &z.as_slice()[n..]);
        let top = self.reject(&self.outer(g, h));
        let mut r = DVector::zeros(n * n + 2);
        r.rows_mut(0, n * n).copy_from(&top.column(0));
        r[n * n] = inner(g0, g) / inner(g0, g0) - Complex64::new(1.0, 0.0);
        r[n * n + 1] = inner(h0, h) / inner(h0, h0) - Complex64::new(1.0, 0.0);
        r
    }

    fn jacobian(&self, z: &DVector<Complex64>, g0: &[Complex64], h0: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.n;
        let (g, h) = (&z.as_slice()[..n], &z.as_slice()[n..]);
        let raw = DMatrix::from_fn(n * n, 2 * n, |r, k| {
            let (x, y) = (r / n, r % n);
            match k {
                k if k < n && k == x => h[y],
                k if k >= n && k - n == y => g[x],
                _ => Complex64::new(0.0, 0.0),
            }
        });
        let top = self.reject(&raw);
        let mut j = DMatrix::zeros(n * n + 2, 2 * n);
        j.rows_mut(0, n * n).copy_from(&top);
        let (ng, nh) = (inner(g0, g0), inner(h0, h0));
        for k in 0..n {
            j[(n * n, k)] = g0[k].conj() / ng;
            j[(n * n + 1, n + k)] = h0[k].conj() / nh;
        }
        j
    }

    /// Damped Gauss–Newton from a random start; `(g, h)` on success.
    fn solve(&self, rng: &mut ChaCha8Rng, max_iterations: usize) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
        let n = self.n;
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut draw = || {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        };
        let start: Vec<Complex64> = (0..2 * n).map(|_| draw()).collect();
        let (g0, h0) = (start[..n].to_vec(), start[n..].to_vec());
        let mut z = DVector::from_vec(start);
        let mut r = self.residual(&z, &g0, &h0);
        let mut cost = r.norm_squared();
        for _ in 0..max_iterations {
            if cost.sqrt() < NEWTON_STOP {
                break;
            }
            let j = self.jacobian(&z, &g0, &h0);
            let jh = j.adjoint();
            let mut a = &jh * &j;
            for k in 0..2 * n {
                a[(k, k)] += Complex64::new(DAMPING, 0.0);
            }
            let b = -(&jh * &r);
            let step = match a.clone().cholesky() {
                Some(ch) => ch.solve(&b),
                None => a.lu().solve(&b)?,
            };
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let trial = &z + &step * Complex64::new(t, 0.0);
                let tr = self.residual(&trial, &g0, &h0);
                let tc = tr.norm_squared();
                if tc < cost {
                    z = trial;
                    r = tr;
                    cost = tc;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let zs = z.as_slice();
        Some((zs[..n].to_vec(), zs[n..].to_vec()))
    }

    /// Minimum-norm `f` with `F = g·hᵀ`, hence orthogonal to the nullspace.
    fn recover_f(&self, g: &[Complex64], h: &[Complex64]) -> Option<Vec<Complex64>> {
        let svd = self.lin.clone().svd(true, true);
        let f = svd.solve(&self.outer(g, h), SINGULAR_CUTOFF).ok()?;
        Some(f.column(0).iter().copied().collect())
    }
}

/// First index where `|v|` is within a relative 1e-3 of its maximum.
fn anchor(v: &[Complex64]) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter().position(|z| z.norm() >= max * (1.0 - 1e-3)).unwrap_or(0)
}

/// Rescale so that `h` and `g` equal 1 at their anchors; `f` follows `g·hᵀ`.
fn gauge_fix(f: &mut [Complex64], g: &mut [Complex64], h: &mut [Complex64]) {
    let t = h[anchor(h)].inv();
    let s = g[anchor(g)].inv();
    h.iter_mut().for_each(|z| *z *= t);
    g.iter_mut().for_each(|z| *z *= s);
    f.iter_mut().for_each(|z| *z *= s * t);
}

fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

struct Candidate {
    start: usize,
    f: Vec<Complex64>,
    g: Vec<Complex64>,
    h: Vec<Complex64>,
}

impl Candidate {
    fn distance(&self, other: &Candidate) -> f64 {
        sup_distance(&self.f, &other.f).max(sup_distance(&self.g, &other.g)).max(sup_distance(&self.h, &other.h))
    }

    fn key(&self) -> Vec<(i64, i64)> {
        let q = |z: &Complex64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
        self.h.iter().chain(&self.g).chain(&self.f).map(q).collect()
    }
}

struct Fitter {
    chars: Vec<(MultiplicativeFunction<Complex64>, Vec<Complex64>, Vec<Complex64>)>,
    /// Orthonormal nullspace basis.
    null: Vec<Vec<Complex64>>,
}

impl Fitter {
    fn new(weight: &WeightFunction<Complex64>, null: Vec<Vec<Complex64>>) -> Result<Self, AnalysisError> {
        let mut chars = Vec::new();
        let carrier = weight.carrier();
        for chi in enumerate_multiplicative::<Complex64>(carrier)? {
            if sigma_branch(&chi, weight)? != Branch::Distinct {
                continue;
            }
            let a = ScalarFunction::from_character(&chi);
            let b = ScalarFunction::from_character(&chi.twist(weight)?);
            let half = Complex64::new(0.5, 0.0);
            let u = a.add(&b)?.scale(&half).values(Scope::AllPairs);
            let v = a.sub(&b)?.scale(&half).values(Scope::AllPairs);
            chars.push((chi, u, v));
        }
        Ok(Fitter { chars, null })
    }

    fn off_nullspace(&self, r: &[Complex64]) -> f64 {
        let mut w = r.to_vec();
        for q in &self.null {
            let p = inner(q, &w);
            w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= p * qi);
        }
        w.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn classify(&self, c: &Candidate, tol: f64) -> Classification {
        let mut best: Option<Classification> = None;
        let mut best_fit = f64::INFINITY;
        for (chi, u, v) in &self.chars {
            let c1 = inner(v, &c.h) / inner(v, v);
            let eh = sup_distance(&c.h, &v.iter().map(|z| z * c1).collect::<Vec<_>>());
            let basis = DMatrix::from_fn(u.len(), 2, |i, k| if k == 0 { u[i] } else { v[i] });
            let rhs = DMatrix::from_column_slice(c.g.len(), 1, &c.g);
            let Ok(sol) = basis.svd(true, true).solve(&rhs, SINGULAR_CUTOFF) else { continue };
            let (cc, c2) = (sol[(0, 0)], sol[(1, 0)]);
            let gfit: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| cc * a + c2 * b).collect();
            let eg = sup_distance(&c.g, &gfit);
            let rest: Vec<Complex64> = (0..u.len()).map(|i| c.f[i] - c1 * 0.5 * (cc * v[i] + c2 * u[i])).collect();
            let ef = self.off_nullspace(&rest);
            let fit = eh.max(eg).max(ef);
            if fit < best_fit {
                best_fit = fit;
                best = Some(Classification::Family {
                    tag: FamilyTag::Main(Branch::Distinct),
                    chi: chi.clone(),
                    c: cc,
                    c1,
                    c2,
                    fit,
                });
            }
        }
        match best {
            Some(class) if best_fit <= tol => class,
            _ => Classification::Unclassified { best_fit },
        }
    }
}

/// Search for nondegenerate MAIN solutions from `config.starts` random
/// complex Gaussian starts and classify each distinct one against the
/// closed-form family. Reproducible from the weight and `config.seed`.
pub fn oracle_solve_main(
    weight: &WeightFunction<Complex64>,
    config: &OracleConfig,
) -> Result<OracleReport, AnalysisError> {
    let carrier = weight.carrier();
    let m = carrier.as_finite().ok_or(AnalysisError::NotFinite)?;
    let n = m.size();
    if n > ORACLE_LIMIT {
        return Err(AnalysisError::CarrierTooLarge { size: n, limit: ORACLE_LIMIT });
    }
    let null = nullspace_basis(weight)?;
    let nullspace_dimension = null.dimension();
    let mut report =
        OracleReport { starts: config.starts, seed: config.seed, nullspace_dimension, converged: 0, solutions: vec![] };
    if config.starts == 0 {
        return Ok(report);
    }

    let a = constraint_matrix(weight)?;
    let lin = DMatrix::from_fn(n * n, n, |r, c| *a.get(r, c));
    let svd = lin.clone().svd(true, false);
    let top = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > SINGULAR_CUTOFF * top.max(1.0)).count();
    let u = svd.u.expect("requested");
    // nalgebra leaves singular values unsorted
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let q = DMatrix::from_fn(n * n, rank, |r, c| u[(r, order[c])]);
    let problem = Problem { n, lin, q };

    let scope = Scope::AllPairs;
    let runs: Vec<Option<Candidate>> = (0..config.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let (mut g, mut h) = problem.solve(&mut rng, config.max_iterations)?;
            let mut f = problem.recover_f(&g, &h)?;
            gauge_fix(&mut f, &mut g, &mut h);
            if g.iter().chain(&h).chain(&f).any(|z| !z.is_finite()) {
                return None;
            }
            Some(Candidate { start: i, f, g, h })
        })
        .collect();

    let mut kept: Vec<(Candidate, usize)> = Vec::new();
    for cand in runs.into_iter().flatten() {
        let slots = candidate_slots(carrier, &cand)?;
        let scan = max_residual(EquationId::Main, &slots, Some(weight), scope)?;
        if !scan.passes(config.tolerance) {
            continue;
        }
        report.converged += 1;
        match kept.iter_mut().find(|(k, _)| k.distance(&cand) <= config.dedup_tolerance) {
            Some((_, hits)) => *hits += 1,
            None => kept.push((cand, 1)),
        }
    }

    let null_vectors = null.basis().iter().map(|b| b.values(scope)).collect();
    let fitter = Fitter::new(weight, null_vectors)?;
    let mut solutions = Vec::with_capacity(kept.len());
    for (cand, hits) in kept {
        let slots = candidate_slots(carrier, &cand)?;
        let scan = max_residual(EquationId::Main, &slots, Some(weight), scope)?;
        let classification = fitter.classify(&cand, config.classify_tolerance);
        let key = cand.key();
        let [f, g, h] = [Slot::F, Slot::G, Slot::H].map(|s| slots.get(s).expect("built above").clone());
        solutions.push((key, OracleSolution { f, g, h, scan, classification, start: cand.start, hits }));
    }
    solutions.sort_by(|(ka, a), (kb, b)| a.scan.max.total_cmp(&b.scan.max).then_with(|| ka.cmp(kb)));
    report.solutions = solutions.into_iter().map(|(_, s)| s).collect();
    Ok(report)
}

fn candidate_slots(
    carrier: &std::sync::Arc<crate::carrier::Carrier>,
    c: &Candidate,
) -> Result<Slots<Complex64>, AnalysisError> {
    Ok(Slots::new()
        .with(Slot::F, ScalarFunction::dense(carrier, c.f.clone())?)
        .with(Slot::G, ScalarFunction::dense(carrier, c.g.clone())?)
        .with(Slot::H, ScalarFunction::dense(carrier, c.h.clone())?))
}

