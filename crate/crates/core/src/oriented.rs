//! Chirotopes, oriented matroids and the MacPhersonian poset.

use std::fmt;

use crate::complexes::FinitePoset;
use crate::error::{Error, Result};
use crate::ground::{binomial, exchange_pairs_or_empty, ExchangePair, GroundSet, PluckerMap, Sign};
use crate::matroid::MatroidVector;
use crate::valuated::{self, DressianCellId, InitialDatum, TropicalValue};

/// Default cap on `C(n, d)` for the `3^C(n,d)` sign-vector scan.
pub const DEFAULT_CHIROTOPE_GUARD: usize = 9;

pub type SignVector = PluckerMap<Sign>;

/// `(-1)^k χ(X - x_k) χ(x_k, Y)` for `k = 1..=d+1`, with `χ` evaluated as an
/// alternating function of ordered tuples.
pub fn three_term_values(chi: &SignVector, x: &[usize], y: &[usize]) -> Result<Vec<Sign>> {
    let d = chi.rank();
    if x.len() != d + 1 || y.len() + 1 != d {
        return Err(Error::ParameterMismatch(format!(
            "expected |X|={} and |Y|={}, got {} and {}",
            d + 1,
            d.saturating_sub(1),
            x.len(),
            y.len()
        )));
    }
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..x.len() {
        let rest: Vec<usize> = x
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &e)| e)
            .collect();
        let mut with: Vec<usize> = Vec::with_capacity(d);
        with.push(x[k]);
        with.extend_from_slice(y);
        let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
        out.push(sign * chi.alternating_eval(&rest)? * chi.alternating_eval(&with)?);
    }
    Ok(out)
}

fn mixed_or_zero(values: &[Sign]) -> bool {
    values.iter().all(|&v| v == 0) || (values.contains(&1) && values.contains(&-1))
}

/// A three-term list that is neither all zero nor of mixed sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeTermViolation {
    pub pair: ExchangePair,
    pub values: Vec<Sign>,
}

impl fmt::Display for ThreeTermViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "three-term list {:?} at (X,Y)={} is neither all zero nor contains both +1 and -1",
            self.values, self.pair
        )
    }
}

pub fn chirotope_violation(candidate: &SignVector) -> Result<Option<ThreeTermViolation>> {
    if candidate.values().iter().any(|v| !(-1..=1).contains(v)) {
        return Err(Error::Parse("signs must lie in {-1,0,1}".into()));
    }
    if candidate.values().iter().all(|&v| v == 0) {
        return Err(Error::ZeroVector("chirotope"));
    }
    for pair in exchange_pairs_or_empty(candidate.n(), candidate.rank()) {
        let values = three_term_values(candidate, pair.x.members(), pair.y.members())?;
        if !mixed_or_zero(&values) {
            return Ok(Some(ThreeTermViolation { pair, values }));
        }
    }
    Ok(None)
}

/// The three-term sign condition over sorted representatives `(X, Y)`.
pub fn is_chirotope(candidate: &SignVector) -> Result<bool> {
    Ok(chirotope_violation(candidate)?.is_none())
}

/// The same condition scanned over every ordered pair of tuples.
pub fn is_chirotope_all_tuples(candidate: &SignVector) -> Result<bool> {
    if candidate.is_identically_zero() {
        return Err(Error::ZeroVector("chirotope"));
    }
    let n = candidate.n();
    let d = candidate.rank();
    if d == 0 {
        return Ok(true);
    }
    let tuples = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        out
    };
    let ys = tuples(d - 1);
    for x in tuples(d + 1) {
        for y in &ys {
            if !mixed_or_zero(&three_term_values(candidate, &x, y)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A validated chirotope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chirotope {
    signs: SignVector,
}

impl PartialOrd for PluckerMap<Sign> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PluckerMap<Sign> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n(), self.rank(), self.values()).cmp(&(other.n(), other.rank(), other.values()))
    }
}

impl Chirotope {
    pub fn new(signs: SignVector) -> Result<Self> {
        match chirotope_violation(&signs)? {
            None => Ok(Self { signs }),
            Some(v) => Err(Error::NotChirotope(v.to_string())),
        }
    }

    pub fn from_signs(ground: GroundSet, rank: usize, signs: Vec<Sign>) -> Result<Self> {
        Self::new(PluckerMap::new(ground, rank, signs)?)
    }

    pub fn signs(&self) -> &SignVector {
        &self.signs
    }

    pub fn rank(&self) -> usize {
        self.signs.rank()
    }

    pub fn n(&self) -> usize {
        self.signs.n()
    }

    pub fn negated(&self) -> Chirotope {
        Chirotope {
            signs: self.signs.map(|s| -s),
        }
    }

    pub fn underlying_matroid(&self) -> MatroidVector {
        MatroidVector::new(self.signs.map(|&s| s != 0))
            .expect("support of a chirotope satisfies basis exchange")
    }
}

/// `[χ] = {χ, -χ}`, stored through the member whose first nonzero sign is +.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedMatroidClass {
    representative: Chirotope,
}

impl OrientedMatroidClass {
    pub fn representative(&self) -> &Chirotope {
        &self.representative
    }

    pub fn underlying_matroid(&self) -> MatroidVector {
        self.representative.underlying_matroid()
    }
}

impl fmt::Display for OrientedMatroidClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in self.representative.signs.values() {
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

pub fn om_class(chi: &Chirotope) -> OrientedMatroidClass {
    let first = chi
        .signs
        .values()
        .iter()
        .copied()
        .find(|&s| s != 0)
        .unwrap_or(1);
    OrientedMatroidClass {
        representative: if first > 0 {
            chi.clone()
        } else {
            chi.negated()
        },
    }
}

pub fn underlying_matroid_of_chirotope(chi: &Chirotope) -> MatroidVector {
    chi.underlying_matroid()
}

/// `χ'(B) ∈ {χ(B), 0}` for every `B`.
pub fn chirotope_specializes(chi: &SignVector, chi_prime: &SignVector) -> Result<bool> {
    chi.check_shape(chi_prime)?;
    Ok(chi
        .values()
        .iter()
        .zip(chi_prime.values())
        .all(|(&a, &b)| b == 0 || a == b))
}

/// `b` is a specialization of `a` for some choice of representatives.
pub fn om_specializes(a: &OrientedMatroidClass, b: &OrientedMatroidClass) -> Result<bool> {
    let sa = a.representative.signs();
    let sb = b.representative.signs();
    Ok(chirotope_specializes(sa, sb)?
        || chirotope_specializes(sa, b.representative.negated().signs())?)
}

/// `x ∈ I(X, Y)` iff `|χ|(X - x)·|χ|(Y + x) ≠ 0`, and all of `X \ Y` when no
/// such `x` exists. This is the initial datum of the vector that is 0 on the
/// bases of `|χ|` and ∞ elsewhere.
pub fn i_max(chi: &Chirotope) -> InitialDatum {
    let phi = chi.signs.map(|&s| {
        if s != 0 {
            TropicalValue::int(0)
        } else {
            TropicalValue::Infinite
        }
    });
    valuated::initial_datum(&phi)
}

/// Does `I` satisfy the sign condition against `χ` at every pair?
///
/// `I` must first be the initial datum of some tropical Plücker vector with
/// underlying matroid `|χ|`; otherwise [`Error::IncompatibleWithMatroid`].
pub fn initial_datum_compatible_with_chirotope(
    datum: &InitialDatum,
    chi: &Chirotope,
) -> Result<bool> {
    let id = DressianCellId {
        matroid: chi.underlying_matroid(),
        datum: datum.clone(),
    };
    if valuated::certify_cell(id)?.is_none() {
        return Err(Error::IncompatibleWithMatroid);
    }
    Ok(sign_condition_holds(datum, chi.signs())?)
}

/// The sign condition alone, with no check on `I` against `|χ|`.
pub fn sign_condition_holds(datum: &InitialDatum, chi: &SignVector) -> Result<bool> {
    for (k, pair) in datum.pairs().iter().enumerate() {
        let xs = pair.x.members();
        let values = three_term_values(chi, xs, pair.y.members())?;
        if values.iter().all(|&v| v == 0) {
            continue;
        }
        let has = |want: Sign| {
            xs.iter()
                .zip(&values)
                .any(|(&x, &v)| v == want && datum.contains(k, x))
        };
        if !(has(1) && has(-1)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The oriented matroids of rank `d` on `n` elements, ordered by specialization.
#[derive(Clone, Debug)]
pub struct MacPPoset {
    pub classes: Vec<OrientedMatroidClass>,
    pub poset: FinitePoset,
}

impl MacPPoset {
    pub fn index_of(&self, c: &OrientedMatroidClass) -> Option<usize> {
        self.classes.binary_search(c).ok()
    }
}

pub fn enumerate_oriented_matroids(d: usize, n: usize, guard: usize) -> Result<MacPPoset> {
    if d > n {
        return Err(Error::RankOutOfRange { rank: d, size: n });
    }
    let coords = binomial(n, d) as usize;
    if coords > guard || coords > 39 {
        return Err(Error::GuardExceeded {
            what: "sign vector scan",
            size: coords,
            limit: guard,
        });
    }
    let ground = GroundSet::range(n)?;
    let mut classes = Vec::new();
    let total = 3u64.pow(coords as u32);
    let mut digits = vec![0 as Sign; coords];
    for code in 1..total {
        let mut c = code;
        for dgt in digits.iter_mut() {
            *dgt = match c % 3 {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            c /= 3;
        }
        // only canonical representatives: first nonzero sign is +
        if digits.iter().find(|&&s| s != 0) != Some(&1) {
            continue;
        }
        let signs = PluckerMap::new(ground.clone(), d, digits.clone())?;
        if is_chirotope(&signs)? {
            classes.push(OrientedMatroidClass {
                representative: Chirotope { signs },
            });
        }
    }
    classes.sort();
    let names = classes.iter().map(|c| c.to_string()).collect();
    let mut leq = vec![vec![false; classes.len()]; classes.len()];
    for (a, ca) in classes.iter().enumerate() {
        for (b, cb) in classes.iter().enumerate() {
            leq[a][b] = om_specializes(ca, cb)?;
        }
    }
    // a ≤ b in the poset means b is a specialization of a
    let poset = FinitePoset::new(names, leq)?;
    Ok(MacPPoset { classes, poset })
}
