use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::carrier::{Carrier, FiniteMonoid};
use crate::scalar::Scalar;

use super::{InvolutiveAutomorphism, MorphismError, MultiplicativeFunction, RootValue, WeightFunction};

/// `{0}` together with the `p`-th roots of unity, `p` the eventual period of `x`.
fn candidates(m: &FiniteMonoid, x: usize) -> Vec<RootValue> {
    let (_, p) = m.eventual_period(x);
    let p = p as i64;
    std::iter::once(RootValue::Zero).chain((0..p).map(|k| RootValue::root(Ratio::new(k, p)))).collect()
}

/// Fill in every product of known values; `None` on a contradiction.
fn propagate(m: &FiniteMonoid, mut values: Vec<Option<RootValue>>) -> Option<Vec<Option<RootValue>>> {
    let n = m.size();
    loop {
        let mut changed = false;
        for x in 0..n {
            let Some(a) = values[x] else { continue };
            for y in 0..n {
                let Some(b) = values[y] else { continue };
                let xy = m.mul(x, y);
                match values[xy] {
                    Some(v) if v != a * b => return None,
                    Some(_) => {}
                    None => {
                        values[xy] = Some(a * b);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Some(values);
        }
    }
}

fn extend(m: &FiniteMonoid, generators: &[usize], values: Vec<Option<RootValue>>, out: &mut Vec<Vec<RootValue>>) {
    let Some(&x) = generators.iter().find(|&&g| values[g].is_none()) else {
        if values.iter().all(Option::is_some) {
            out.push(values.into_iter().map(Option::unwrap).collect());
        }
        return;
    };
    for v in candidates(m, x) {
        let mut next = values.clone();
        next[x] = Some(v);
        if let Some(next) = propagate(m, next) {
            extend(m, generators, next, out);
        }
    }
}

/// Every multiplicative function on a finite monoid other than `χ ≡ 0`,
/// found by backtracking over the generating set. Sorted by value table.
pub fn enumerate_multiplicative_with_generators<T: Scalar>(
    carrier: &Arc<Carrier>,
    generators: &[usize],
) -> Result<Vec<MultiplicativeFunction<T>>, MorphismError> {
    let m = carrier.as_finite().ok_or(MorphismError::NotFinite)?;
    if generators.iter().any(|&g| g >= m.size()) || !m.generates(generators) {
        return Err(MorphismError::NotGenerating);
    }
    let mut start = vec![None; m.size()];
    // χ ≢ 0 forces χ(e) = 1
    start[m.identity()] = Some(RootValue::ONE);
    let Some(start) = propagate(m, start) else { return Ok(Vec::new()) };
    let mut tables: Vec<Vec<RootValue>> = match generators.iter().find(|&&g| start[g].is_none()) {
        None => vec![start.into_iter().map(Option::unwrap).collect()],
        Some(&first) => candidates(m, first)
            .into_par_iter()
            .map(|v| {
                let mut out = Vec::new();
                let mut next = start.clone();
                next[first] = Some(v);
                if let Some(next) = propagate(m, next) {
                    extend(m, generators, next, &mut out);
                }
                out
            })
            .flatten()
            .collect(),
    };
    // the propagation leaves no product unchecked, but a final full scan is cheap
    tables.retain(|t| (0..m.size()).all(|x| (0..m.size()).all(|y| t[m.mul(x, y)] == t[x] * t[y])));
    tables.sort();
    tables.dedup();
    Ok(tables.into_iter().map(|t| MultiplicativeFunction::from_roots_unchecked(carrier, t)).collect())
}

/// [`enumerate_multiplicative_with_generators`] with every element as a generator.
pub fn enumerate_multiplicative<T: Scalar>(
    carrier: &Arc<Carrier>,
) -> Result<Vec<MultiplicativeFunction<T>>, MorphismError> {
    let m = carrier.as_finite().ok_or(MorphismError::NotFinite)?;
    let all: Vec<usize> = (0..m.size()).collect();
    enumerate_multiplicative_with_generators(carrier, &all)
}

/// Set `π(x) = y` and `π(y) = x`; `false` on conflict.
fn pair(perm: &mut [Option<usize>], used: &mut [bool], x: usize, y: usize) -> bool {
    match (perm[x], perm[y]) {
        (Some(a), _) if a != y => false,
        (_, Some(b)) if b != x => false,
        (Some(_), Some(_)) => true,
        _ => {
            if (perm[x].is_none() && used[y]) || (perm[y].is_none() && used[x]) {
                return false;
            }
            perm[x] = Some(y);
            perm[y] = Some(x);
            used[x] = true;
            used[y] = true;
            true
        }
    }
}

fn propagate_perm(m: &FiniteMonoid, perm: &mut [Option<usize>], used: &mut [bool]) -> bool {
    let n = m.size();
    loop {
        let mut changed = false;
        for x in 0..n {
            let Some(px) = perm[x] else { continue };
            for y in 0..n {
                let Some(py) = perm[y] else { continue };
                let xy = m.mul(x, y);
                let target = m.mul(px, py);
                match perm[xy] {
                    Some(v) if v != target => return false,
                    Some(_) => {}
                    None => {
                        if !pair(perm, used, xy, target) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search_perm(m: &FiniteMonoid, perm: Vec<Option<usize>>, used: Vec<bool>, out: &mut Vec<Vec<usize>>) {
    let Some(x) = perm.iter().position(Option::is_none) else {
        out.push(perm.into_iter().map(Option::unwrap).collect());
        return;
    };
    let period = m.eventual_period(x);
    for y in x..m.size() {
        if perm[y].is_some() || m.eventual_period(y) != period {
            continue;
        }
        let (mut p, mut u) = (perm.clone(), used.clone());
        if pair(&mut p, &mut u, x, y) && propagate_perm(m, &mut p, &mut u) {
            search_perm(m, p, u, out);
        }
    }
}

/// Every homomorphism σ of a finite monoid with `σ∘σ = id`, sorted by
/// permutation.
pub fn enumerate_involutive_automorphisms(carrier: &Arc<Carrier>) -> Result<Vec<InvolutiveAutomorphism>, MorphismError> {
    let m = carrier.as_finite().ok_or(MorphismError::NotFinite)?;
    let n = m.size();
    let mut perm = vec![None; n];
    let mut used = vec![false; n];
    let e = m.identity();
    pair(&mut perm, &mut used, e, e);
    let mut found = Vec::new();
    if propagate_perm(m, &mut perm, &mut used) {
        search_perm(m, perm, used, &mut found);
    }
    found.sort();
    found.dedup();
    found.into_iter().map(|p| InvolutiveAutomorphism::from_permutation(carrier, p)).collect()
}

/// Every multiplicative μ with `μ(x·σ(x)) = 1`.
pub fn enumerate_admissible_mu<T: Scalar>(
    sigma: &InvolutiveAutomorphism,
) -> Result<Vec<WeightFunction<T>>, MorphismError> {
    Ok(enumerate_multiplicative::<T>(sigma.carrier())?
        .into_iter()
        .filter_map(|mu| WeightFunction::new(mu, sigma.clone()).ok())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn arc(m: FiniteMonoid) -> Arc<Carrier> {
        Arc::new(Carrier::from(m))
    }

    #[test]
    fn cyclic_counts() {
        for n in 1..=8 {
            let c = arc(FiniteMonoid::cyclic(n));
            assert_eq!(enumerate_multiplicative::<Complex64>(&c).unwrap().len(), n);
        }
    }

    #[test]
    fn zero_one_monoid() {
        let c = arc(FiniteMonoid::zero_one());
        let chars = enumerate_multiplicative::<Complex64>(&c).unwrap();
        assert_eq!(chars.len(), 2);
        assert_eq!(chars[0].roots().unwrap(), &[RootValue::ONE, RootValue::Zero]);
    }

    #[test]
    fn generator_subset() {
        let c = arc(FiniteMonoid::cyclic(6));
        let a = enumerate_multiplicative_with_generators::<Complex64>(&c, &[1]).unwrap();
        let b = enumerate_multiplicative::<Complex64>(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            enumerate_multiplicative_with_generators::<Complex64>(&c, &[2]),
            Err(MorphismError::NotGenerating)
        );
    }

    /// Brute force over all permutations.
    fn brute_involutions(m: &FiniteMonoid) -> usize {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for i in 0..k {
                    let mut q = p.clone();
                    q.insert(i, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.size();
        perms(n)
            .into_iter()
            .filter(|p| {
                (0..n).all(|x| p[p[x]] == x)
                    && (0..n).all(|x| (0..n).all(|y| p[m.mul(x, y)] == m.mul(p[x], p[y])))
            })
            .count()
    }

    #[test]
    fn involutions_match_brute_force() {
        let z2 = FiniteMonoid::cyclic(2);
        for m in [
            FiniteMonoid::trivial(),
            FiniteMonoid::cyclic(4),
            FiniteMonoid::cyclic(6),
            FiniteMonoid::product(&z2, &z2),
            FiniteMonoid::symmetric(3),
            FiniteMonoid::zero_one(),
        ] {
            let expected = brute_involutions(&m);
            let c = arc(m);
            assert_eq!(enumerate_involutive_automorphisms(&c).unwrap().len(), expected);
        }
    }

    #[test]
    fn admissible_weights_on_z4() {
        let c = arc(FiniteMonoid::cyclic(4));
        let sigmas = enumerate_involutive_automorphisms(&c).unwrap();
        let id = sigmas.iter().find(|s| s.is_identity()).unwrap();
        let neg = sigmas.iter().find(|s| !s.is_identity()).unwrap();
        assert_eq!(enumerate_admissible_mu::<Complex64>(neg).unwrap().len(), 4);
        // μ(2x) = 1 for all x leaves μ(1) = ±1
        assert_eq!(enumerate_admissible_mu::<Complex64>(id).unwrap().len(), 2);
    }
}
