//! Ground sets, subsets in lexicographic order, permutation signs, and the
//! bijection between alternating functions on tuples and functions on
//! unordered `d`-subsets.
//!
//! Elements are always addressed by their position `0..n` in the ground set.
//! A ground set may additionally carry natural-number labels (for instance a
//! finite window of ℕ); the labels only fix the order and are used when two
//! vectors on ℕ are compared. Every coordinate outside the stored window is
//! zero (or ∞ in tropical terms).

use std::fmt;
use std::sync::OnceLock;

use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the ground set size; subsets are indexed with 64-bit binomials.
pub const MAX_GROUND: usize = 64;

pub type Sign = i8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<u128>,
}

impl GroundSet {
    /// The canonical ground set `{0, .., n-1}`.
    pub fn range(n: usize) -> Result<Self> {
        Self::from_labels((0..n as u128).collect())
    }

    pub fn from_labels(labels: Vec<u128>) -> Result<Self> {
        if labels.len() > MAX_GROUND {
            return Err(Error::GroundTooLarge {
                size: labels.len(),
                limit: MAX_GROUND,
            });
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedLabels);
        }
        Ok(Self { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u128] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> u128 {
        self.labels[index]
    }

    pub fn index_of(&self, label: u128) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// True when the labels are exactly `0..n`.
    pub fn is_canonical(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, &l)| l == i as u128)
    }
}

/// A sorted `d`-subset of element positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisId(Vec<usize>);

impl BasisId {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if let Some(pos) = members.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::NotPermutation { position: pos + 1 });
        }
        Ok(Self(members))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn without(&self, e: usize) -> Self {
        Self(self.0.iter().copied().filter(|&x| x != e).collect())
    }

    /// `self ∪ {e}`, or `None` when `e` is already a member.
    pub fn with(&self, e: usize) -> Option<Self> {
        match self.0.binary_search(&e) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, e);
                Some(Self(v))
            }
        }
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &e| m | (1u64 << e))
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A pair `(X, Y)` with `|X| = d + 1` and `|Y| = d - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangePair {
    pub x: BasisId,
    pub y: BasisId,
}

impl ExchangePair {
    /// `X \ Y` in increasing order.
    pub fn difference(&self) -> Vec<usize> {
        self.x
            .members()
            .iter()
            .copied()
            .filter(|&e| !self.y.contains(e))
            .collect()
    }

    /// The two bases `X - i` and `Y ∪ i` of the exchange term for `i ∈ X \ Y`.
    pub fn term_bases(&self, i: usize) -> (BasisId, BasisId) {
        let left = self.x.without(i);
        let right = self.y.with(i).expect("i must not lie in Y");
        (left, right)
    }
}

impl fmt::Display for ExchangePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(X={}, Y={})", self.x, self.y)
    }
}

fn binomial_table() -> &'static Vec<Vec<u64>> {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![vec![0u64; MAX_GROUND + 2]; MAX_GROUND + 2];
        for n in 0..MAX_GROUND + 2 {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1].saturating_add(t[n - 1][k]);
            }
        }
        t
    })
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    binomial_table()[n][k]
}

/// Position of a sorted `d`-subset of `{0..n-1}` in lexicographic order.
pub fn lex_rank(n: usize, subset: &[usize]) -> usize {
    let d = subset.len();
    let total = binomial(n, d);
    let colex: u64 = subset
        .iter()
        .enumerate()
        .map(|(i, &s)| binomial(n - 1 - s, d - i))
        .sum();
    (total - 1 - colex) as usize
}

/// Iterator over all `d`-subsets of `{0..n-1}` in lexicographic order.
pub struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Subsets {
    type Item = BasisId;

    fn next(&mut self) -> Option<BasisId> {
        let cur = self.current.take()?;
        let d = cur.len();
        let mut next = cur.clone();
        let mut i = d;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - d + i {
                next[i] += 1;
                for j in i + 1..d {
                    next[j] = next[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.current = Some(next);
        }
        Some(BasisId(cur))
    }
}

pub fn subsets(n: usize, d: usize) -> Subsets {
    Subsets {
        n,
        current: (d <= n).then(|| (0..d).collect()),
    }
}

pub fn enumerate_subsets(n: usize, d: usize) -> Result<Vec<BasisId>> {
    if d > n {
        return Err(Error::RankOutOfRange { rank: d, size: n });
    }
    Ok(subsets(n, d).collect())
}

/// All `(X, Y)` with `X` a `(d+1)`-subset and `Y` a `(d-1)`-subset, in
/// lexicographic order of `X` then `Y`.
pub fn exchange_pairs(n: usize, d: usize) -> Result<Vec<ExchangePair>> {
    if d == 0 || d + 1 > n {
        return Err(Error::RankOutOfRange { rank: d, size: n });
    }
    let ys: Vec<BasisId> = subsets(n, d - 1).collect();
    Ok(subsets(n, d + 1)
        .flat_map(|x| {
            ys.iter().map(move |y| ExchangePair {
                x: x.clone(),
                y: y.clone(),
            })
        })
        .collect())
}

/// Same as [`exchange_pairs`] but empty where no pair exists (rank 0 or full rank).
pub fn exchange_pairs_or_empty(n: usize, d: usize) -> Vec<ExchangePair> {
    exchange_pairs(n, d).unwrap_or_default()
}

/// Sign of the permutation sorting `seq` ascending.
pub fn perm_sign<T: Ord>(seq: &[T]) -> Result<Sign> {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            match seq[i].cmp(&seq[j]) {
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Equal => return Err(Error::NotPermutation { position: j }),
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

/// A value set with an involution fixing a distinguished zero.
pub trait AlternatingValue: Clone {
    /// The fixed point of the involution.
    fn null() -> Self;
    fn negate(&self) -> Self;
    fn is_null(&self) -> bool;
}

impl AlternatingValue for Sign {
    fn null() -> Self {
        0
    }
    fn negate(&self) -> Self {
        -*self
    }
    fn is_null(&self) -> bool {
        *self == 0
    }
}

impl AlternatingValue for BigRational {
    fn null() -> Self {
        Zero::zero()
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
    fn is_null(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// A function on the `d`-subsets of a ground set, stored densely in
/// lexicographic basis order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PluckerMap<V> {
    ground: GroundSet,
    rank: usize,
    values: Vec<V>,
}

impl<V> PluckerMap<V> {
    pub fn new(ground: GroundSet, rank: usize, values: Vec<V>) -> Result<Self> {
        let n = ground.len();
        if rank > n {
            return Err(Error::RankOutOfRange { rank, size: n });
        }
        let expected = binomial(n, rank) as usize;
        if values.len() != expected {
            return Err(Error::WrongLength {
                expected,
                found: values.len(),
            });
        }
        Ok(Self {
            ground,
            rank,
            values,
        })
    }

    pub fn from_fn(
        ground: GroundSet,
        rank: usize,
        mut f: impl FnMut(&BasisId) -> V,
    ) -> Result<Self> {
        let n = ground.len();
        if rank > n {
            return Err(Error::RankOutOfRange { rank, size: n });
        }
        let values = subsets(n, rank).map(|b| f(&b)).collect();
        Self::new(ground, rank, values)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn bases(&self) -> Subsets {
        subsets(self.n(), self.rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisId, &V)> {
        self.bases().zip(self.values.iter())
    }

    pub fn get(&self, basis: &BasisId) -> &V {
        &self.values[lex_rank(self.n(), basis.members())]
    }

    pub fn index_of(&self, basis: &BasisId) -> usize {
        lex_rank(self.n(), basis.members())
    }

    pub fn map<W>(&self, f: impl FnMut(&V) -> W) -> PluckerMap<W> {
        PluckerMap {
            ground: self.ground.clone(),
            rank: self.rank,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn same_shape<W>(&self, other: &PluckerMap<W>) -> bool {
        self.rank == other.rank && self.ground == other.ground
    }

    pub(crate) fn check_shape<W>(&self, other: &PluckerMap<W>) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ParameterMismatch(format!(
                "rank {} on {} elements vs rank {} on {} elements",
                self.rank,
                self.n(),
                other.rank,
                other.n()
            )))
        }
    }
}

impl<V: AlternatingValue> PluckerMap<V> {
    /// Evaluates the alternating function determined by this map on an
    /// ordered tuple of element positions.
    pub fn alternating_eval(&self, tuple: &[usize]) -> Result<V> {
        if tuple.len() != self.rank {
            return Err(Error::ParameterMismatch(format!(
                "tuple of length {} for a rank-{} map",
                tuple.len(),
                self.rank
            )));
        }
        let n = self.n();
        if let Some(&e) = tuple.iter().find(|&&e| e >= n) {
            return Err(Error::OutsideGround {
                element: e,
                size: n,
            });
        }
        Ok(self.eval_unchecked(tuple))
    }

    /// As [`Self::alternating_eval`] for tuples known to be in range.
    pub(crate) fn eval_unchecked(&self, tuple: &[usize]) -> V {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return V::null();
        }
        let value = &self.values[lex_rank(self.n(), &sorted)];
        match perm_sign(tuple) {
            Ok(1) => value.clone(),
            _ => value.negate(),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(V::is_null)
    }
}

pub fn rational_sign(r: &BigRational) -> Sign {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn perm_sign_examples() {
        assert_eq!(perm_sign(&[1, 2, 3]).unwrap(), 1);
        assert_eq!(perm_sign(&[2, 1, 3]).unwrap(), -1);
        assert_eq!(perm_sign(&[3, 1, 2]).unwrap(), 1);
        assert!(matches!(
            perm_sign(&[1, 2, 1]),
            Err(Error::NotPermutation { .. })
        ));
    }

    #[test]
    fn perm_sign_is_multiplicative_on_s4() {
        let perms = all_perms(4);
        for p in &perms {
            for q in &perms {
                // (p ∘ q)(i) = p[q[i]]
                let comp: Vec<usize> = q.iter().map(|&i| p[i]).collect();
                assert_eq!(
                    perm_sign(&comp).unwrap(),
                    perm_sign(p).unwrap() * perm_sign(q).unwrap()
                );
            }
        }
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        for n in 0..8 {
            for d in 0..=n {
                for (i, b) in subsets(n, d).enumerate() {
                    assert_eq!(lex_rank(n, b.members()), i);
                }
                assert_eq!(subsets(n, d).count() as u64, binomial(n, d));
            }
        }
    }

    #[test]
    fn enumerate_subsets_examples() {
        let s = enumerate_subsets(3, 2).unwrap();
        let raw: Vec<Vec<usize>> = s.iter().map(|b| b.members().to_vec()).collect();
        assert_eq!(raw, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let e = enumerate_subsets(3, 0).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].is_empty());
        assert_eq!(enumerate_subsets(4, 2).unwrap().len(), 6);
        assert!(enumerate_subsets(2, 3).is_err());
    }

    #[test]
    fn exchange_pair_counts() {
        assert_eq!(exchange_pairs(4, 2).unwrap().len(), 16);
        let p = exchange_pairs(3, 1).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|e| e.y.is_empty()));
        assert_eq!(exchange_pairs(2, 1).unwrap().len(), 1);
        assert!(exchange_pairs(3, 0).is_err());
        assert!(exchange_pairs(3, 3).is_err());
    }

    #[test]
    fn alternating_eval_examples() {
        let g = GroundSet::range(3).unwrap();
        let signs: PluckerMap<Sign> = PluckerMap::from_fn(g.clone(), 2, |_| 1).unwrap();
        assert_eq!(signs.alternating_eval(&[1, 0]).unwrap(), -1);
        assert_eq!(signs.alternating_eval(&[1, 1]).unwrap(), 0);
        assert!(signs.alternating_eval(&[0, 7]).is_err());

        let q = GroundSet::range(4).unwrap();
        let rat: PluckerMap<BigRational> = PluckerMap::from_fn(q, 2, |b| {
            if b.members() == [1, 3] {
                BigRational::from_integer(5.into())
            } else {
                BigRational::zero()
            }
        })
        .unwrap();
        assert_eq!(
            rat.alternating_eval(&[3, 1]).unwrap(),
            BigRational::from_integer((-5).into())
        );
    }

    #[test]
    fn alternating_eval_is_alternating() {
        let g = GroundSet::range(5).unwrap();
        for d in 1..=4 {
            let map: PluckerMap<BigRational> = PluckerMap::from_fn(g.clone(), d, |b| {
                BigRational::from_integer((lex_rank(5, b.members()) as i64 + 1).into())
            })
            .unwrap();
            for b in subsets(5, d) {
                let base = b.members().to_vec();
                // round trip on sorted tuples
                assert_eq!(&map.alternating_eval(&base).unwrap(), map.get(&b));
                for p in all_perms(d) {
                    let tuple: Vec<usize> = p.iter().map(|&i| base[i]).collect();
                    let s = perm_sign(&p).unwrap();
                    let expected = if s == 1 {
                        map.get(&b).clone()
                    } else {
                        -map.get(&b).clone()
                    };
                    assert_eq!(map.alternating_eval(&tuple).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn labels_must_be_sorted() {
        assert!(GroundSet::from_labels(vec![3, 1]).is_err());
        let g = GroundSet::from_labels(vec![2, 9, 40]).unwrap();
        assert_eq!(g.index_of(9), Some(1));
        assert!(!g.is_canonical());
    }
}
