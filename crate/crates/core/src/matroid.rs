//! Ordinary matroids as 0/1 Plücker vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::ground::{
    binomial, exchange_pairs_or_empty, BasisId, ExchangePair, GroundSet, PluckerMap,
};

/// Default cap on the number of coordinates `C(n, d)` for the `2^C(n,d)` scan.
pub const DEFAULT_MATROID_GUARD: usize = 20;

/// An unchecked 0/1 vector; the input type of [`is_matroid`].
pub type RawMatroid = PluckerMap<bool>;

/// First failure of the basis-exchange condition: at `pair`, index `i` has
/// both bases present but no second index does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeViolation {
    pub pair: ExchangePair,
    pub i: usize,
}

impl fmt::Display for ExchangeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exchange fails at {}: i={} has p(X-i)=p(Y+i)=1 but no j≠i in X\\Y does",
            self.pair, self.i
        )
    }
}

pub fn exchange_violation(candidate: &RawMatroid) -> Result<Option<ExchangeViolation>> {
    if candidate.values().iter().all(|&b| !b) {
        return Err(Error::ZeroVector("matroid"));
    }
    for pair in exchange_pairs_or_empty(candidate.n(), candidate.rank()) {
        let live: Vec<usize> = pair
            .difference()
            .into_iter()
            .filter(|&i| {
                let (a, b) = pair.term_bases(i);
                *candidate.get(&a) && *candidate.get(&b)
            })
            .collect();
        if live.len() == 1 {
            return Ok(Some(ExchangeViolation { pair, i: live[0] }));
        }
    }
    Ok(None)
}

/// The basis-exchange check on a nonzero 0/1 vector.
pub fn is_matroid(candidate: &RawMatroid) -> Result<bool> {
    Ok(exchange_violation(candidate)?.is_none())
}

/// A validated matroid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatroidVector {
    vector: RawMatroid,
}

impl MatroidVector {
    pub fn new(vector: RawMatroid) -> Result<Self> {
        match exchange_violation(&vector)? {
            None => Ok(Self { vector }),
            Some(v) => Err(Error::NotMatroid(v.to_string())),
        }
    }

    pub fn from_support(ground: GroundSet, rank: usize, support: &[BasisId]) -> Result<Self> {
        let n = ground.len();
        for b in support {
            if b.len() != rank {
                return Err(Error::ParameterMismatch(format!(
                    "basis {b} has size != {rank}"
                )));
            }
            if let Some(&e) = b.members().iter().find(|&&e| e >= n) {
                return Err(Error::OutsideGround {
                    element: e,
                    size: n,
                });
            }
        }
        let vector = PluckerMap::from_fn(ground, rank, |b| support.contains(b))?;
        Self::new(vector)
    }

    pub fn vector(&self) -> &RawMatroid {
        &self.vector
    }

    pub fn rank(&self) -> usize {
        self.vector.rank()
    }

    pub fn n(&self) -> usize {
        self.vector.n()
    }

    pub fn ground(&self) -> &GroundSet {
        self.vector.ground()
    }

    pub fn is_basis(&self, b: &BasisId) -> bool {
        *self.vector.get(b)
    }

    pub fn support(&self) -> Vec<BasisId> {
        self.vector
            .iter()
            .filter(|(_, &v)| v)
            .map(|(b, _)| b)
            .collect()
    }

    /// Positions (lex indices) of the bases.
    pub fn support_indices(&self) -> Vec<usize> {
        self.vector
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| i)
            .collect()
    }
}

/// The constant-one vector.
pub fn uniform(rank: usize, ground: GroundSet) -> Result<MatroidVector> {
    let vector = PluckerMap::from_fn(ground, rank, |_| true)?;
    MatroidVector::new(vector)
}

/// `q` is a specialization of `p`: every basis of `q` is a basis of `p`.
pub fn specializes(p: &MatroidVector, q: &MatroidVector) -> Result<bool> {
    p.vector.check_shape(&q.vector)?;
    Ok(p.vector
        .values()
        .iter()
        .zip(q.vector.values())
        .all(|(&a, &b)| a || !b))
}

/// All rank-`d` matroids on `n` elements, sorted lexicographically by their
/// list of bases.
pub fn enumerate_matroids(d: usize, n: usize, guard: usize) -> Result<Vec<MatroidVector>> {
    if d > n {
        return Err(Error::RankOutOfRange { rank: d, size: n });
    }
    let coords = binomial(n, d) as usize;
    if coords > guard || coords >= 63 {
        return Err(Error::GuardExceeded {
            what: "matroid support scan",
            size: coords,
            limit: guard,
        });
    }
    let ground = GroundSet::range(n)?;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << coords) {
        let values = (0..coords).map(|i| mask >> i & 1 == 1).collect();
        let raw = PluckerMap::new(ground.clone(), d, values)?;
        if is_matroid(&raw)? {
            out.push(MatroidVector { vector: raw });
        }
    }
    out.sort_by_cached_key(|m| m.support());
    Ok(out)
}
