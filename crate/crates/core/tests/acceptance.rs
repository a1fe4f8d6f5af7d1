//! Acceptance criteria AC1–AC8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{acceptance_corpus, arc, characters, corpus, power_period, weights};
use fneq::analysis::{nullspace_basis, oracle_solve_main, verify_structure, OracleConfig};
use fneq::equations::{max_residual, nullspace_residual};
use fneq::families::{
    application_family, main_family, sweep, ApplicationInput, MainInput, SweepConfig,
};
use fneq::morphisms::{
    additive_functions, additive_kernel_dimension, enumerate_involutive_automorphisms, sigma_branch, AdditiveFunction,
    AdditiveSpace, Branch,
};
use fneq::{
    Carrier, Element, EquationId, Exact, FiniteMonoid, InvolutiveAutomorphism, LatticeGroup, MultiplicativeFunction,
    Scalar, ScalarFunction, Scope, Slot, Slots, WeightFunction, C64,
};
use num_complex::Complex64;
use num_rational::Ratio;

const FAMILY_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;
const AC7_GAP: f64 = 0.1;

type Outcome = Result<String, String>;

/// MAIN triples with g ≠ 0 and h ≠ 0 collected by AC1 for AC2.
type MainTriples = Vec<(String, WeightFunction<C64>, Slots<C64>)>;

fn ac1(main: &mut MainTriples) -> Outcome {
    let start = Instant::now();
    let mut built = 0usize;
    let mut worst = 0.0f64;
    for (name, m) in acceptance_corpus() {
        let c = arc(m);
        let chars = characters::<C64>(&c);
        for w in weights::<C64>(&c) {
            for e in sweep(&w, &chars, &SweepConfig::default()).map_err(|e| format!("{name}: {e}"))? {
                let t = e.outcome.map_err(|err| format!("{name} {}: {err}", e.tag))?;
                let scan = max_residual(t.equation(), t.slots(), t.weight(), Scope::AllPairs)
                    .map_err(|err| err.to_string())?;
                worst = worst.max(scan.max);
                if scan.max >= FAMILY_TOL {
                    return Err(format!("{name} {}: residual {:.3e}", e.tag, scan.max));
                }
                built += 1;
                if t.equation() == EquationId::Main {
                    let nonzero = [Slot::G, Slot::H].iter().all(|&s| !t.slot(s).is_zero_on(Scope::AllPairs));
                    if nonzero {
                        main.push((format!("{name} {}", e.tag), w.clone(), t.slots().clone()));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{built} triples, max residual {worst:.2e}, {:.2}s", elapsed.as_secs_f64()))
}

fn ac2(main: &MainTriples) -> Outcome {
    if main.is_empty() {
        return Err("no nondegenerate MAIN triples".into());
    }
    for (label, w, slots) in main {
        let r = verify_structure(slots, w, Scope::AllPairs, FAMILY_TOL).map_err(|e| format!("{label}: {e}"))?;
        if !r.passed() {
            return Err(format!("{label}: {r:?}"));
        }
    }
    Ok(format!("{} MAIN triples pass every clause", main.len()))
}

/// Rank of an integer matrix by fraction-exact row reduction.
fn rational_rank(mut rows: Vec<Vec<Ratio<i64>>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != Ratio::from_integer(0)) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c];
        for r in 0..rows.len() {
            if r != rank {
                let f = rows[r][c] / pivot;
                let pivot_row = rows[rank].clone();
                for (x, v) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn ac3() -> Outcome {
    let m = FiniteMonoid::cyclic(4);
    let c = arc(m.clone());
    let neg = InvolutiveAutomorphism::negation(&c).map_err(|e| e.to_string())?;
    // θ(x + y) - θ(x - y), one row per pair
    let rows: Vec<Vec<Ratio<i64>>> = (0..4)
        .flat_map(|x| (0..4).map(move |y| (x, y)))
        .map(|(x, y)| {
            let mut row = vec![Ratio::from_integer(0); 4];
            row[(x + y) % 4] += 1;
            row[(x + 4 - y) % 4] -= 1;
            row
        })
        .collect();
    let oracle = 4 - rational_rank(rows);
    let exact = nullspace_basis(&WeightFunction::<Exact>::trivial(&neg)).map_err(|e| e.to_string())?;
    let float = nullspace_basis(&WeightFunction::<C64>::trivial(&neg)).map_err(|e| e.to_string())?;
    if oracle != 2 || exact.dimension() != 2 || float.dimension() != 2 {
        return Err(format!("oracle {oracle}, exact {}, float {}", exact.dimension(), float.dimension()));
    }
    for theta in exact.basis() {
        let scan = nullspace_residual(theta, exact.weight(), Scope::AllPairs).map_err(|e| e.to_string())?;
        if !scan.all_zero {
            return Err(format!("basis element with residual {:.3e}", scan.max));
        }
    }
    for theta in float.basis() {
        let scan = nullspace_residual(theta, float.weight(), Scope::AllPairs).map_err(|e| e.to_string())?;
        if scan.max > 1e-12 {
            return Err(format!("float basis element with residual {:.3e}", scan.max));
        }
    }
    Ok("dimension 2, basis residuals exactly 0".into())
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let carriers = [
        ("Z2", FiniteMonoid::cyclic(2)),
        ("Z3", FiniteMonoid::cyclic(3)),
        ("Z4", FiniteMonoid::cyclic(4)),
        ("S3", FiniteMonoid::symmetric(3)),
    ];
    let config = OracleConfig::new(200, 42);
    let (mut runs, mut found) = (0, 0);
    for (name, m) in carriers {
        let c = arc(m);
        for w in weights::<C64>(&c) {
            let r = oracle_solve_main(&w, &config).map_err(|e| format!("{name}: {e}"))?;
            runs += 1;
            found += r.solutions.len();
            if r.unclassified() > 0 {
                return Err(format!("{name} σ={}: {} unclassified", w.sigma().describe(), r.unclassified()));
            }
            for s in &r.solutions {
                let scan = max_residual(EquationId::Main, &s.slots(), Some(&w), Scope::AllPairs)
                    .map_err(|e| e.to_string())?;
                if scan.max >= ORACLE_TOL {
                    return Err(format!("{name}: found triple re-verifies at {:.3e}", scan.max));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{runs} (σ, μ) runs, {found} solutions, 0 unclassified, {:.2}s", elapsed.as_secs_f64()))
}

fn ac5() -> Outcome {
    let mut checked = 0;
    for (name, m) in corpus() {
        let c = Carrier::from(m.clone());
        let AdditiveSpace::Trivial { witnesses } = additive_functions(&c, None) else {
            return Err(format!("{name}: not trivial"));
        };
        if witnesses.len() != m.size() {
            return Err(format!("{name}: {} witnesses", witnesses.len()));
        }
        for w in &witnesses {
            // x^k = x^{k+p} forces p·A(x) = 0
            if (w.index, w.period) != power_period(&m, w.element) || w.period == 0 {
                return Err(format!("{name}: bad witness {w:?}"));
            }
        }
        let dim = additive_kernel_dimension(&c, None).map_err(|e| e.to_string())?;
        if dim != 0 {
            return Err(format!("{name}: linear solve gives dimension {dim}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} carriers, both arguments give {{0}}"))
}

fn ac6() -> Outcome {
    let c = Arc::new(Carrier::from(LatticeGroup::new(1).unwrap()));
    let q = |n: i64| Exact::from_integer(n);
    let chi = |b: i64| MultiplicativeFunction::lattice(&c, vec![q(b)]).unwrap();
    let neg = InvolutiveAutomorphism::negation(&c).unwrap();
    let flat = WeightFunction::<Exact>::trivial(&neg);
    let heavy = WeightFunction::new(chi(4), neg.clone()).unwrap();
    let a = AdditiveFunction::linear(&c, vec![q(1)]).unwrap();
    let p = |x: i64| Element::Point(vec![x]);
    let err = |e: fneq::families::FamilyError| e.to_string();

    let main_d =
        main_family(MainInput::Distinct { chi: chi(2), c: q(1), c1: q(2), c2: q(1), theta: None }, &flat).map_err(err)?;
    let main_e = main_family(
        MainInput::Equal { chi: chi(2), c: q(1), c2: q(0), additive: Some(a.clone()), theta: None },
        &heavy,
    )
    .map_err(err)?;
    let app_b = application_family(
        ApplicationInput::B { chi: chi(2), alpha: q(1), kappa: q(1), additive: Some(a), theta: None },
        &heavy,
    )
    .map_err(err)?;
    for t in [&main_d, &main_e, &app_b] {
        let scan = t.rescan(Scope::Box(5)).map_err(|e| e.to_string())?;
        if !(scan.exact && scan.all_zero) {
            return Err(format!("{}: residual {:.3e}", t.tag(), scan.max));
        }
    }
    let v = |t: &fneq::SolutionTriple<Exact>, s: Slot, x: i64| t.slot(s).eval(&p(x));
    let pairs = [
        (v(&main_d, Slot::F, 2) - v(&main_d, Slot::F, 0), v(&main_d, Slot::G, 1) * v(&main_d, Slot::H, 1), q(3)),
        (v(&main_e, Slot::F, 2) - q(4) * v(&main_e, Slot::F, 0), v(&main_e, Slot::G, 1) * v(&main_e, Slot::H, 1), q(4)),
        (v(&app_b, Slot::F, 2) + q(4) * v(&app_b, Slot::G, 0), v(&app_b, Slot::H, 1) * v(&app_b, Slot::H, 1), q(16)),
    ];
    for (lhs, rhs, want) in pairs {
        if lhs != want || rhs != want {
            return Err(format!("expected {want}, got {lhs} and {rhs}"));
        }
    }
    Ok("exact zero on [-5,5]; 3=3, 4=4, 16=16 at (1,1)".into())
}

fn ac7() -> Outcome {
    let c = arc(FiniteMonoid::cyclic(4));
    let w = WeightFunction::<C64>::trivial(&InvolutiveAutomorphism::negation(&c).unwrap());
    let chi = characters::<C64>(&c)
        .into_iter()
        .find(|x| sigma_branch(x, &w).unwrap() == Branch::Distinct)
        .ok_or("no DISTINCT character")?;
    let k = |x: f64| Complex64::new(x, 0.0);
    let (cc, c1, c2) = (k(2.0), k(1.0), k(0.5));
    // g = u + c₂v with c left out of g but kept in f
    let star = chi.twist(&w).unwrap();
    let val = |x: usize| (chi.eval(&Element::Index(x)), star.eval(&Element::Index(x)));
    let u = |x: usize| (val(x).0 + val(x).1) / 2.0;
    let v = |x: usize| (val(x).0 - val(x).1) / 2.0;
    let table = |f: &dyn Fn(usize) -> Complex64| ScalarFunction::from_fn(&c, f).unwrap();
    let dropped = Slots::new()
        .with(Slot::F, table(&|x| c1 / 2.0 * (cc * v(x) + c2 * u(x))))
        .with(Slot::G, table(&|x| u(x) + c2 * v(x)))
        .with(Slot::H, table(&|x| c1 * v(x)));
    let dropped_scan = max_residual(EquationId::Main, &dropped, Some(&w), Scope::AllPairs).map_err(|e| e.to_string())?;
    let full = main_family(MainInput::Distinct { chi, c: cc, c1, c2, theta: None }, &w).map_err(|e| e.to_string())?;
    let full_max = full.scan().max;
    if dropped_scan.max > AC7_GAP && full_max < FAMILY_TOL {
        Ok(format!("g without c: residual {:.3e}; with c: {:.2e}", dropped_scan.max, full_max))
    } else {
        Err(format!("g without c: residual {:.3e}; with c: {:.3e}", dropped_scan.max, full_max))
    }
}

fn ac8() -> Outcome {
    for n in [2usize, 3, 4, 6] {
        let got = characters::<Exact>(&arc(FiniteMonoid::cyclic(n))).len();
        if got != n {
            return Err(format!("Z{n}: {got} characters"));
        }
    }
    let inv = enumerate_involutive_automorphisms(&arc(FiniteMonoid::cyclic(4))).map_err(|e| e.to_string())?.len();
    if inv != 2 {
        return Err(format!("Z4: {inv} involutive automorphisms"));
    }
    Ok("|X(Z/n)| = n for n = 2, 3, 4, 6; Z4 has 2 involutions".into())
}

fn main() {
    let mut main_triples = Vec::new();
    let results: Vec<(&str, &str, Outcome)> = vec![
        ("AC1", "family residual suite", ac1(&mut main_triples)),
        ("AC2", "structure of MAIN solutions", ac2(&main_triples)),
        ("AC3", "nullspace of Z/4", ac3()),
        ("AC4", "oracle completeness", ac4()),
        ("AC5", "finite additive functions vanish", ac5()),
        ("AC6", "lattice instances", ac6()),
        ("AC7", "MAIN constant c in g", ac7()),
        ("AC8", "enumeration counts", ac8()),
    ];
    let mut failed = 0;
    for (id, what, outcome) in &results {
        match outcome {
            Ok(detail) => println!("{id} PASS {what}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id} FAIL {what}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
