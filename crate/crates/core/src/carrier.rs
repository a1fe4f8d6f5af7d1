//! Algebraic stages: finite monoids given by Cayley tables, and the lattice
//! groups ℤ^d.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error("empty Cayley table")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range for a monoid of size {size}")]
    IndexOutOfRange { row: usize, col: usize, value: usize, size: usize },
    #[error("identity index {0} is out of range")]
    IdentityOutOfRange(usize),
    #[error("element {identity} is not a two-sided identity (fails at {witness})")]
    NoIdentity { identity: usize, witness: usize },
    #[error("operation is not associative: ({x}·{y})·{z} != {x}·({y}·{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("lattice rank must be positive")]
    ZeroRank,
    #[error("{0} is not a permutation of the carrier")]
    NotAPermutation(String),
}

/// A finite monoid on the elements `0..n`, validated at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<usize>,
    identity: usize,
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMonoid")
            .field("size", &self.size)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

impl FiniteMonoid {
    /// Validate a Cayley table (`table[x][y]` is the index of `xy`).
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<Self, CarrierError> {
        let n = table.len();
        if n == 0 {
            return Err(CarrierError::Empty);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(CarrierError::Ragged { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(CarrierError::IndexOutOfRange { row, col, value, size: n });
                }
                flat.push(value);
            }
        }
        if identity >= n {
            return Err(CarrierError::IdentityOutOfRange(identity));
        }
        let m = FiniteMonoid { size: n, table: flat, identity };
        if let Some(witness) = (0..n).find(|&x| m.mul(identity, x) != x || m.mul(x, identity) != x) {
            return Err(CarrierError::NoIdentity { identity, witness });
        }
        for x in 0..n {
            for y in 0..n {
                let xy = m.mul(x, y);
                for z in 0..n {
                    if m.mul(xy, z) != m.mul(x, m.mul(y, z)) {
                        return Err(CarrierError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.size)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Every element has a two-sided inverse.
    pub fn is_group(&self) -> bool {
        (0..self.size).all(|x| {
            (0..self.size).any(|y| self.mul(x, y) == self.identity && self.mul(y, x) == self.identity)
        })
    }

    /// Index `m ≥ 1` and period `p ≥ 1` of the power sequence of `x`, so that
    /// `x^m = x^{m+p}` with `m` and `p` minimal.
    pub fn eventual_period(&self, x: usize) -> (usize, usize) {
        let mut seen = vec![usize::MAX; self.size];
        let mut power = x;
        let mut k = 1;
        loop {
            if seen[power] != usize::MAX {
                let m = seen[power];
                return (m, k - m);
            }
            seen[power] = k;
            power = self.mul(power, x);
            k += 1;
        }
    }

    /// Smallest submonoid containing `seed`, with the number of closure
    /// rounds needed to reach the fixpoint.
    pub fn submonoid_closure(&self, seed: &[usize]) -> (BTreeSet<usize>, usize) {
        let mut set: BTreeSet<usize> = seed.iter().copied().collect();
        set.insert(self.identity);
        let mut rounds = 0;
        loop {
            let mut next = set.clone();
            for &a in &set {
                for &b in &set {
                    next.insert(self.mul(a, b));
                }
            }
            if next.len() == set.len() {
                return (set, rounds);
            }
            set = next;
            rounds += 1;
        }
    }

    pub fn generates(&self, generators: &[usize]) -> bool {
        self.submonoid_closure(generators).0.len() == self.size
    }

    pub fn squares(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..self.size).map(|x| self.mul(x, x)).collect();
        set.into_iter().collect()
    }

    /// True iff the submonoid generated by `{x·x}` is everything.
    pub fn is_generated_by_squares(&self) -> bool {
        self.generates(&self.squares())
    }

    /// The isomorphic monoid obtained by renaming element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, CarrierError> {
        check_permutation(perm, self.size)?;
        let mut table = vec![vec![0; self.size]; self.size];
        for x in 0..self.size {
            for y in 0..self.size {
                table[perm[x]][perm[y]] = perm[self.mul(x, y)];
            }
        }
        FiniteMonoid::new(table, perm[self.identity])
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.rows().map(<[usize]>::to_vec).collect()
    }

    pub fn trivial() -> Self {
        FiniteMonoid { size: 1, table: vec![0], identity: 0 }
    }

    /// ℤ/n under addition; element `k` is the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FiniteMonoid::new(table, 0).expect("cyclic table is a group")
    }

    /// Direct product; element `(a, b)` has index `a * b_size + b`.
    pub fn product(a: &FiniteMonoid, b: &FiniteMonoid) -> Self {
        let n = a.size * b.size;
        let split = |x: usize| (x / b.size, x % b.size);
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let ((x1, x2), (y1, y2)) = (split(x), split(y));
                        a.mul(x1, y1) * b.size + b.mul(x2, y2)
                    })
                    .collect()
            })
            .collect();
        FiniteMonoid::new(table, a.identity * b.size + b.identity).expect("product of monoids")
    }

    /// The symmetric group on `k` letters; permutations in lexicographic
    /// order, composed as `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index(&t.iter().map(|&i| s[i]).collect()))
                    .collect()
            })
            .collect();
        let id: Vec<usize> = (0..k).collect();
        FiniteMonoid::new(table, index(&id)).expect("symmetric group")
    }

    /// The multiplicative monoid `{1, 0}`: index 0 is `1`, index 1 is the
    /// absorbing `0`.
    pub fn zero_one() -> Self {
        FiniteMonoid::new(vec![vec![0, 1], vec![1, 1]], 0).expect("{1,0} monoid")
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<(), CarrierError> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(CarrierError::NotAPermutation(format!("{perm:?}")));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(CarrierError::NotAPermutation(format!("{perm:?}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// The free abelian group ℤ^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeGroup {
    rank: usize,
}

impl LatticeGroup {
    pub fn new(rank: usize) -> Result<Self, CarrierError> {
        if rank == 0 {
            return Err(CarrierError::ZeroRank);
        }
        Ok(LatticeGroup { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All points of the box `[-bound, bound]^d`, lexicographically.
    pub fn box_points(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut points = vec![vec![]];
        for _ in 0..self.rank {
            points = points
                .into_iter()
                .flat_map(|p| {
                    (-bound..=bound).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

/// A carrier element: an index into a finite monoid or a lattice point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Index(usize),
    Point(Vec<i64>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Index(i) => write!(f, "{i}"),
            Element::Point(p) => {
                let parts: Vec<String> = p.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Default half-width of the sample box on lattice carriers.
pub const DEFAULT_BOX: i64 = 5;

/// Where pointwise checks run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Every element of a finite carrier.
    AllPairs,
    /// The box `[-B, B]^d` of a lattice carrier.
    Box(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Carrier {
    Finite(FiniteMonoid),
    Lattice(LatticeGroup),
}

impl Carrier {
    pub fn op(&self, x: &Element, y: &Element) -> Element {
        match (self, x, y) {
            (Carrier::Finite(m), Element::Index(a), Element::Index(b)) => Element::Index(m.mul(*a, *b)),
            (Carrier::Lattice(_), Element::Point(a), Element::Point(b)) => {
                Element::Point(a.iter().zip(b).map(|(s, t)| s + t).collect())
            }
            _ => panic!("element kind does not match carrier"),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Carrier::Finite(m) => Element::Index(m.identity()),
            Carrier::Lattice(l) => Element::Point(vec![0; l.rank()]),
        }
    }

    pub fn default_scope(&self) -> Scope {
        match self {
            Carrier::Finite(_) => Scope::AllPairs,
            Carrier::Lattice(_) => Scope::Box(DEFAULT_BOX),
        }
    }

    /// Elements covered by `scope`. A finite carrier ignores the box bound.
    pub fn elements(&self, scope: Scope) -> Vec<Element> {
        match (self, scope) {
            (Carrier::Finite(m), _) => (0..m.size()).map(Element::Index).collect(),
            (Carrier::Lattice(l), Scope::Box(b)) => l.box_points(b).into_iter().map(Element::Point).collect(),
            (Carrier::Lattice(l), Scope::AllPairs) => {
                l.box_points(DEFAULT_BOX).into_iter().map(Element::Point).collect()
            }
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteMonoid> {
        match self {
            Carrier::Finite(m) => Some(m),
            Carrier::Lattice(_) => None,
        }
    }

    pub fn as_lattice(&self) -> Option<&LatticeGroup> {
        match self {
            Carrier::Lattice(l) => Some(l),
            Carrier::Finite(_) => None,
        }
    }

    pub fn is_group(&self) -> bool {
        match self {
            Carrier::Finite(m) => m.is_group(),
            Carrier::Lattice(_) => true,
        }
    }

    /// Whether the squares `x·x` generate the whole carrier.
    pub fn is_generated_by_squares(&self) -> bool {
        match self {
            Carrier::Finite(m) => m.is_generated_by_squares(),
            // 2ℤ^d is a proper subgroup
            Carrier::Lattice(_) => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Carrier::Finite(m) => format!("finite monoid of order {}", m.size()),
            Carrier::Lattice(l) => format!("lattice group Z^{}", l.rank()),
        }
    }
}

impl From<FiniteMonoid> for Carrier {
    fn from(m: FiniteMonoid) -> Self {
        Carrier::Finite(m)
    }
}

impl From<LatticeGroup> for Carrier {
    fn from(l: LatticeGroup) -> Self {
        Carrier::Lattice(l)
    }
}

/// Zero set `I_χ` of a multiplicative function on a finite monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterIdeal {
    members: BTreeSet<usize>,
}

impl CharacterIdeal {
    /// Build from a member set, checking the two-sided ideal property.
    pub fn new(monoid: &FiniteMonoid, members: BTreeSet<usize>) -> Result<Self, (usize, usize)> {
        for &x in &members {
            for y in 0..monoid.size() {
                if !members.contains(&monoid.mul(x, y)) {
                    return Err((x, y));
                }
                if !members.contains(&monoid.mul(y, x)) {
                    return Err((y, x));
                }
            }
        }
        Ok(CharacterIdeal { members })
    }

    pub fn empty() -> Self {
        CharacterIdeal { members: BTreeSet::new() }
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive check of the two monoid laws, independent of `new`.
    fn laws_hold(table: &[Vec<usize>], e: usize) -> bool {
        let n = table.len();
        let assoc = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| table[table[x][y]][z] == table[x][table[y][z]]))
        });
        let ident = (0..n).all(|x| table[e][x] == x && table[x][e] == x);
        assoc && ident
    }

    #[test]
    fn trivial_and_cyclic() {
        let t = FiniteMonoid::new(vec![vec![0]], 0).unwrap();
        assert_eq!(t, FiniteMonoid::trivial());
        let z4 = FiniteMonoid::cyclic(4);
        assert_eq!(z4.size(), 4);
        assert!(z4.is_group() && z4.is_commutative());
    }

    #[test]
    fn two_element_tables() {
        let a = vec![vec![0, 1], vec![1, 0]];
        let b = vec![vec![0, 1], vec![1, 1]];
        let c = vec![vec![1, 0], vec![0, 0]];
        assert!(laws_hold(&a, 0) && laws_hold(&b, 0) && !laws_hold(&c, 0));
        assert!(FiniteMonoid::new(a, 0).is_ok());
        assert!(FiniteMonoid::new(b, 0).is_ok());
        assert!(matches!(FiniteMonoid::new(c, 0), Err(CarrierError::NoIdentity { .. })));
    }

    #[test]
    fn associativity_witness() {
        // identity 0; 1·1 = 2, 2·1 = 1, 1·2 = 2: (1·1)·1 = 1 but 1·(1·1) = 2
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 1, 2]];
        assert!(!laws_hold(&table, 0));
        assert!(matches!(FiniteMonoid::new(table, 0), Err(CarrierError::NotAssociative { .. })));
    }

    #[test]
    fn out_of_range_entries() {
        let err = FiniteMonoid::new(vec![vec![0, 2], vec![1, 0]], 0).unwrap_err();
        assert_eq!(err, CarrierError::IndexOutOfRange { row: 0, col: 1, value: 2, size: 2 });
        assert!(matches!(FiniteMonoid::new(vec![vec![0]], 3), Err(CarrierError::IdentityOutOfRange(3))));
    }

    #[test]
    fn squares_generation() {
        assert!(FiniteMonoid::trivial().is_generated_by_squares());
        assert_eq!(FiniteMonoid::cyclic(4).squares(), vec![0, 2]);
        assert!(!FiniteMonoid::cyclic(4).is_generated_by_squares());
        assert!(FiniteMonoid::cyclic(3).is_generated_by_squares());
        assert!(FiniteMonoid::zero_one().is_generated_by_squares());
        assert!(!FiniteMonoid::symmetric(3).is_generated_by_squares());
    }

    #[test]
    fn closure_rounds_bounded_by_order() {
        for m in [FiniteMonoid::cyclic(6), FiniteMonoid::symmetric(3), FiniteMonoid::cyclic(5)] {
            let (_, rounds) = m.submonoid_closure(&m.squares());
            assert!(rounds <= m.size());
            let (all, rounds) = m.submonoid_closure(&[1]);
            assert!(rounds <= m.size());
            assert!(all.len() <= m.size());
        }
    }

    #[test]
    fn eventual_periods() {
        let z4 = FiniteMonoid::cyclic(4);
        assert_eq!(z4.eventual_period(1), (1, 4));
        assert_eq!(z4.eventual_period(2), (1, 2));
        assert_eq!(z4.eventual_period(0), (1, 1));
        let zo = FiniteMonoid::zero_one();
        assert_eq!(zo.eventual_period(1), (1, 1));
    }

    #[test]
    fn symmetric_group_shape() {
        let s3 = FiniteMonoid::symmetric(3);
        assert_eq!(s3.size(), 6);
        assert!(s3.is_group());
        assert!(!s3.is_commutative());
        assert_eq!(s3.identity(), 0);
    }

    #[test]
    fn product_is_klein_four() {
        let z2 = FiniteMonoid::cyclic(2);
        let v4 = FiniteMonoid::product(&z2, &z2);
        assert_eq!(v4.size(), 4);
        assert!((0..4).all(|x| v4.mul(x, x) == 0));
    }

    #[test]
    fn relabel_preserves_laws() {
        let s3 = FiniteMonoid::symmetric(3);
        let r = s3.relabel(&[5, 3, 1, 0, 2, 4]).unwrap();
        assert_eq!(r.identity(), 5);
        assert!(laws_hold(&r.table(), 5));
        assert!(s3.relabel(&[0, 0, 1, 2, 3, 4]).is_err());
    }

    #[test]
    fn lattice_box() {
        let z2 = LatticeGroup::new(2).unwrap();
        let pts = z2.box_points(1);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![-1, -1]);
        assert!(LatticeGroup::new(0).is_err());
        let c = Carrier::from(z2);
        assert_eq!(c.op(&Element::Point(vec![1, 2]), &Element::Point(vec![-3, 4])), Element::Point(vec![-2, 6]));
    }

    #[test]
    fn ideal_check() {
        let zo = FiniteMonoid::zero_one();
        assert!(CharacterIdeal::new(&zo, [1].into()).is_ok());
        assert!(CharacterIdeal::new(&zo, [0].into()).is_err());
    }
}
