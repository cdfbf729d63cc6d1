//! Tropical Plücker vectors, initial data, and the cones `C(p, I)` of the
//! Plücker fan on the Dressian.
//!
//! A cone is described by a [`LinearSystem`] over the coordinates of the
//! bases of `p`: one equality for every two tied exchange terms, one strict
//! inequality for every term that loses to the argmin. Nonemptiness is
//! certified by an exact rational LP, which also yields an interior witness.
//!
//! Convention: when every exchange term at `(X, Y)` is ∞, the initial datum
//! there is all of `X \ Y` and the pair imposes no constraint.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::{exchange_pairs_or_empty, BasisId, ExchangePair, PluckerMap};
use crate::lp::{self, Constraint, LinearProgram, LpOutcome, Relation};
use crate::matroid::{enumerate_matroids, specializes, MatroidVector};

/// An ordered value domain with an absorbing ∞ and a tropical product.
///
/// The order is the tropical one: smaller values win the argmin.
pub trait TropicalScalar: Clone + Ord + fmt::Debug {
    fn infinity() -> Self;
    fn is_infinite(&self) -> bool;
    fn otimes(&self, other: &Self) -> Self;
}

/// An element of ℝ ∪ {∞} with exact rational finite part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TropicalValue {
    Finite(BigRational),
    Infinite,
}

impl TropicalValue {
    pub fn finite(r: BigRational) -> Self {
        TropicalValue::Finite(r)
    }

    pub fn int(v: i64) -> Self {
        TropicalValue::Finite(BigRational::from_integer(v.into()))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            TropicalValue::Finite(r) => Some(r),
            TropicalValue::Infinite => None,
        }
    }

    pub fn shifted(&self, by: &BigRational) -> Self {
        match self {
            TropicalValue::Finite(r) => TropicalValue::Finite(r + by),
            TropicalValue::Infinite => TropicalValue::Infinite,
        }
    }
}

impl TropicalScalar for TropicalValue {
    fn infinity() -> Self {
        TropicalValue::Infinite
    }
    fn is_infinite(&self) -> bool {
        matches!(self, TropicalValue::Infinite)
    }
    fn otimes(&self, other: &Self) -> Self {
        match (self, other) {
            (TropicalValue::Finite(a), TropicalValue::Finite(b)) => TropicalValue::Finite(a + b),
            _ => TropicalValue::Infinite,
        }
    }
}

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropicalValue::Finite(r) => write!(f, "{}", format_rational(r)),
            TropicalValue::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for TropicalValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            Ok(TropicalValue::Infinite)
        } else {
            parse_rational(t).map(TropicalValue::Finite)
        }
    }
}

/// The modulus `|r|` of a real coordinate, ordered so that a larger modulus
/// is tropically smaller (it plays the role of `-log |r|` without leaving the
/// rationals). Zero is ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus(BigRational);

impl Modulus {
    pub fn new(r: BigRational) -> Self {
        Modulus(r.abs())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl PartialOrd for Modulus {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Modulus {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        match (a.is_zero(), b.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => b.cmp(a),
        }
    }
}

impl TropicalScalar for Modulus {
    fn infinity() -> Self {
        Modulus(BigRational::zero())
    }
    fn is_infinite(&self) -> bool {
        self.0.is_zero()
    }
    fn otimes(&self, other: &Self) -> Self {
        Modulus(&self.0 * &other.0)
    }
}

pub type TropicalVector = PluckerMap<TropicalValue>;

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bit(i: usize) -> u64 {
    1u64 << i
}

fn mask_of(elems: &[usize]) -> u64 {
    elems.iter().fold(0, |m, &e| m | bit(e))
}

fn members_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & bit(i) != 0).collect()
}

/// For each exchange pair `(X, Y)` (in the order of
/// [`crate::ground::exchange_pairs`]) a subset of `X \ Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InitialDatum {
    n: usize,
    rank: usize,
    sets: Vec<u64>,
}

impl InitialDatum {
    pub fn from_sets(n: usize, rank: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let pairs = exchange_pairs_or_empty(n, rank);
        if pairs.len() != sets.len() {
            return Err(Error::WrongLength {
                expected: pairs.len(),
                found: sets.len(),
            });
        }
        Ok(Self {
            n,
            rank,
            sets: sets.iter().map(|s| mask_of(s)).collect(),
        })
    }

    pub(crate) fn from_masks(n: usize, rank: usize, sets: Vec<u64>) -> Self {
        Self { n, rank, sets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pairs(&self) -> Vec<ExchangePair> {
        exchange_pairs_or_empty(self.n, self.rank)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, k: usize) -> Vec<usize> {
        members_of(self.sets[k])
    }

    pub(crate) fn mask(&self, k: usize) -> u64 {
        self.sets[k]
    }

    pub fn contains(&self, k: usize, e: usize) -> bool {
        self.sets[k] & bit(e) != 0
    }

    pub fn entries(&self) -> impl Iterator<Item = (ExchangePair, Vec<usize>)> + '_ {
        self.pairs()
            .into_iter()
            .enumerate()
            .map(|(k, p)| (p, self.set(k)))
    }

    /// Pointwise `self(X,Y) ⊆ other(X,Y)`.
    pub fn is_subset_of(&self, other: &InitialDatum) -> bool {
        self.n == other.n
            && self.rank == other.rank
            && self.sets.iter().zip(&other.sets).all(|(a, b)| a & !b == 0)
    }
}

/// The exchange terms `φ(X - i) ⊗ φ(Y ∪ i)` for `i ∈ X \ Y`.
pub fn exchange_terms<V: TropicalScalar>(
    phi: &PluckerMap<V>,
    pair: &ExchangePair,
) -> Vec<(usize, V)> {
    pair.difference()
        .into_iter()
        .map(|i| {
            let (a, b) = pair.term_bases(i);
            (i, phi.get(&a).otimes(phi.get(&b)))
        })
        .collect()
}

/// Argmin set at one pair; all of `X \ Y` when every term is ∞.
pub fn argmin_set<V: TropicalScalar>(terms: &[(usize, V)]) -> Vec<usize> {
    let min = terms.iter().map(|(_, v)| v).min();
    match min {
        Some(m) if !m.is_infinite() => terms
            .iter()
            .filter(|(_, v)| v == m)
            .map(|(i, _)| *i)
            .collect(),
        _ => terms.iter().map(|(i, _)| *i).collect(),
    }
}

pub fn initial_datum<V: TropicalScalar>(phi: &PluckerMap<V>) -> InitialDatum {
    let sets = exchange_pairs_or_empty(phi.n(), phi.rank())
        .iter()
        .map(|pair| mask_of(&argmin_set(&exchange_terms(phi, pair))))
        .collect();
    InitialDatum::from_masks(phi.n(), phi.rank(), sets)
}

/// The first pair whose finite argmin is a singleton, if any.
pub fn tropical_plucker_violation<V: TropicalScalar>(phi: &PluckerMap<V>) -> Option<String> {
    if phi.values().iter().all(V::is_infinite) {
        return Some("vector is identically ∞".into());
    }
    for pair in exchange_pairs_or_empty(phi.n(), phi.rank()) {
        let terms = exchange_terms(phi, &pair);
        if terms.iter().all(|(_, v)| v.is_infinite()) {
            continue;
        }
        let arg = argmin_set(&terms);
        if arg.len() < 2 {
            return Some(format!(
                "initial datum cardinality < 2 at (X,Y)={pair}: argmin {arg:?}"
            ));
        }
    }
    None
}

pub fn is_tropical_plucker<V: TropicalScalar>(phi: &PluckerMap<V>) -> bool {
    tropical_plucker_violation(phi).is_none()
}

/// `B ↦ 1` exactly where `φ(B)` is finite.
pub fn underlying_matroid<V: TropicalScalar>(phi: &PluckerMap<V>) -> Result<MatroidVector> {
    MatroidVector::new(phi.map(|v| !v.is_infinite()))
}

/// The representative of the `(ℝ, +)`-orbit whose minimum finite value is 0.
pub fn normalize(phi: &TropicalVector) -> Result<TropicalVector> {
    let min = phi
        .values()
        .iter()
        .filter_map(TropicalValue::as_finite)
        .min()
        .cloned()
        .ok_or(Error::ZeroVector("tropical Plücker vector"))?;
    let shift = -min;
    Ok(phi.map(|v| v.shifted(&shift)))
}

/// Names the cone `C(p, I)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DressianCellId {
    pub matroid: MatroidVector,
    pub datum: InitialDatum,
}

/// A nonempty cone together with one relative-interior point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DressianCell {
    pub id: DressianCellId,
    pub witness: TropicalVector,
}

/// Equalities and strict inequalities over the coordinates of `supp(p)`.
///
/// Each form is an integer row over `variables`; equalities read `form = 0`,
/// strict rows read `form > 0`. Every form is annihilated by the all-ones
/// direction, recorded in `lineality`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub variables: Vec<BasisId>,
    pub equalities: Vec<Vec<i64>>,
    pub strict: Vec<Vec<i64>>,
    pub lineality: Vec<i64>,
}

impl LinearSystem {
    fn values_of(&self, phi: &TropicalVector) -> Option<Vec<BigRational>> {
        self.variables
            .iter()
            .map(|b| phi.get(b).as_finite().cloned())
            .collect()
    }

    /// Does `phi`, restricted to the variables, satisfy every form?
    pub fn is_satisfied_by(&self, phi: &TropicalVector) -> bool {
        let Some(x) = self.values_of(phi) else {
            return false;
        };
        let eval = |form: &[i64]| -> BigRational {
            form.iter()
                .zip(&x)
                .filter(|(c, _)| **c != 0)
                .map(|(c, v)| BigRational::from_integer((*c).into()) * v)
                .fold(BigRational::zero(), |s, t| s + t)
        };
        self.equalities.iter().all(|f| eval(f).is_zero())
            && self.strict.iter().all(|f| eval(f).is_positive())
    }

    /// Rank of the equality rows over ℚ.
    pub fn equality_rank(&self) -> usize {
        rational_rank(&self.equalities)
    }
}

pub(crate) fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot[c];
                for (v, pv) in m[r].iter_mut().zip(&pivot) {
                    *v = &*v - &f * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Constraints contributed by one exchange pair.
struct PairForms {
    equalities: Vec<Vec<i64>>,
    strict: Vec<Vec<i64>>,
    /// The pair admits no point at all (e.g. an ∞ term inside the argmin).
    empty: bool,
}

fn pair_forms(
    pair: &ExchangePair,
    chosen: u64,
    var_of: &dyn Fn(&BasisId) -> Option<usize>,
    num_vars: usize,
) -> Result<PairForms> {
    let diff = pair.difference();
    let full = mask_of(&diff);
    if chosen & !full != 0 {
        return Err(Error::InitialDatumNotSubset {
            x: pair.x.members().to_vec(),
            y: pair.y.members().to_vec(),
        });
    }
    let mut finite: Vec<(usize, Vec<i64>)> = Vec::new();
    for &i in &diff {
        let (a, b) = pair.term_bases(i);
        if let (Some(va), Some(vb)) = (var_of(&a), var_of(&b)) {
            let mut f = vec![0i64; num_vars];
            f[va] += 1;
            f[vb] += 1;
            finite.push((i, f));
        }
    }
    let mut out = PairForms {
        equalities: Vec::new(),
        strict: Vec::new(),
        empty: false,
    };
    if finite.is_empty() {
        out.empty = chosen != full;
        return Ok(out);
    }
    let finite_mask = mask_of(&finite.iter().map(|(i, _)| *i).collect::<Vec<_>>());
    if chosen & !finite_mask != 0 || chosen.count_ones() < 2 {
        out.empty = true;
        return Ok(out);
    }
    let winners: Vec<&Vec<i64>> = finite
        .iter()
        .filter(|(i, _)| chosen & bit(*i) != 0)
        .map(|(_, f)| f)
        .collect();
    let base = winners[0];
    for w in &winners[1..] {
        out.equalities.push(diff_form(w, base));
    }
    for (i, f) in &finite {
        if chosen & bit(*i) == 0 {
            out.strict.push(diff_form(f, base));
        }
    }
    Ok(out)
}

fn diff_form(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn is_zero_form(f: &[i64]) -> bool {
    f.iter().all(|&c| c == 0)
}

/// Scales an equality row so its first nonzero entry is positive.
fn orient(mut f: Vec<i64>) -> Vec<i64> {
    if f.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        f.iter_mut().for_each(|c| *c = -*c);
    }
    f
}

struct SystemBuilder {
    variables: Vec<BasisId>,
    index: Vec<Option<usize>>,
    n: usize,
    equalities: Vec<Vec<i64>>,
    strict: Vec<Vec<i64>>,
    empty: bool,
}

impl SystemBuilder {
    fn new(p: &MatroidVector) -> Self {
        let variables = p.support();
        let mut index = vec![None; p.vector().values().len()];
        for (k, b) in variables.iter().enumerate() {
            index[p.vector().index_of(b)] = Some(k);
        }
        Self {
            variables,
            index,
            n: p.n(),
            equalities: Vec::new(),
            strict: Vec::new(),
            empty: false,
        }
    }

    fn var_of(&self, b: &BasisId) -> Option<usize> {
        self.index[crate::ground::lex_rank(self.n, b.members())]
    }

    fn add_pair(&mut self, pair: &ExchangePair, chosen: u64) -> Result<()> {
        let nv = self.variables.len();
        let forms = pair_forms(pair, chosen, &|b| self.var_of(b), nv)?;
        self.empty |= forms.empty;
        for e in forms.equalities {
            if !is_zero_form(&e) {
                let e = orient(e);
                if !self.equalities.contains(&e) {
                    self.equalities.push(e);
                }
            }
        }
        for s in forms.strict {
            if !self.strict.contains(&s) {
                self.strict.push(s);
            }
        }
        Ok(())
    }

    fn build(&self) -> LinearSystem {
        let nv = self.variables.len();
        let mut strict = self.strict.clone();
        if self.empty && !strict.iter().any(|f| is_zero_form(f)) {
            // 0 > 0: the cone is empty
            strict.push(vec![0; nv]);
        }
        LinearSystem {
            variables: self.variables.clone(),
            equalities: self.equalities.clone(),
            strict,
            lineality: vec![1; nv],
        }
    }
}

/// The system cutting out `C(p, I)` inside `ℝ^supp(p)`.
pub fn cell_system(cell: &DressianCellId) -> Result<LinearSystem> {
    let p = &cell.matroid;
    let i = &cell.datum;
    if i.n() != p.n() || i.rank() != p.rank() {
        return Err(Error::ParameterMismatch(
            "initial datum and matroid shapes differ".into(),
        ));
    }
    let mut builder = SystemBuilder::new(p);
    for (k, pair) in i.pairs().iter().enumerate() {
        builder.add_pair(pair, i.mask(k))?;
    }
    Ok(builder.build())
}

fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect()
        })
        .collect()
}

/// An exact point satisfying every equality and strict inequality, with the
/// first variable pinned to 0, or `None` when the cone is empty.
pub fn lp_feasible_interior(sys: &LinearSystem) -> Result<Option<Vec<BigRational>>> {
    let nv = sys.variables.len();
    if sys.strict.iter().any(|f| is_zero_form(f)) {
        return Ok(None);
    }
    lp::strict_feasible_point(
        nv,
        &to_rational_rows(&sys.equalities),
        &to_rational_rows(&sys.strict),
        (nv > 0).then_some(0),
    )
}

fn witness_vector(
    p: &MatroidVector,
    sys: &LinearSystem,
    point: &[BigRational],
) -> Result<TropicalVector> {
    let mut values = vec![TropicalValue::Infinite; p.vector().values().len()];
    for (b, v) in sys.variables.iter().zip(point) {
        values[p.vector().index_of(b)] = TropicalValue::Finite(v.clone());
    }
    normalize(&PluckerMap::new(p.ground().clone(), p.rank(), values)?)
}

/// Certifies `C(p, I)` nonempty and returns an interior witness.
pub fn certify_cell(id: DressianCellId) -> Result<Option<DressianCell>> {
    let sys = cell_system(&id)?;
    match lp_feasible_interior(&sys)? {
        None => Ok(None),
        Some(point) => {
            let witness = witness_vector(&id.matroid, &sys, &point)?;
            if !sys.is_satisfied_by(&witness) {
                return Err(Error::Solver("witness fails its own cell system".into()));
            }
            Ok(Some(DressianCell { id, witness }))
        }
    }
}

pub fn cell_of(phi: &TropicalVector) -> Result<DressianCellId> {
    if let Some(msg) = tropical_plucker_violation(phi) {
        return Err(Error::NotTropicalPlucker(msg));
    }
    Ok(DressianCellId {
        matroid: underlying_matroid(phi)?,
        datum: initial_datum(phi),
    })
}

/// Cells `(p', I')` of `universe` with `p ⪯ p'` and `I ⊆ I'`, other than `c`.
pub fn closure_candidates(c: &DressianCellId, universe: &[DressianCellId]) -> Vec<DressianCellId> {
    universe
        .iter()
        .filter(|other| {
            *other != c
                && specializes(&c.matroid, &other.matroid).unwrap_or(false)
                && c.datum.is_subset_of(&other.datum)
        })
        .cloned()
        .collect()
}

/// All nonempty cones `C(p, I)` for rank `d` on `n` elements.
///
/// Initial data are built pair by pair from subsets of size ≥ 2 of the
/// finite exchange terms, pruning every partial assignment whose system is
/// already infeasible.
pub fn enumerate_dressian_cells(d: usize, n: usize, guard: usize) -> Result<Vec<DressianCell>> {
    let mut out = Vec::new();
    for p in enumerate_matroids(d, n, guard)? {
        out.extend(cells_of_matroid(&p)?);
    }
    Ok(out)
}

/// All nonempty cones with underlying matroid `p`.
pub fn cells_of_matroid(p: &MatroidVector) -> Result<Vec<DressianCell>> {
    let pairs = exchange_pairs_or_empty(p.n(), p.rank());
    let probe = SystemBuilder::new(p);
    let mut options: Vec<Vec<u64>> = Vec::with_capacity(pairs.len());
    for pair in &pairs {
        let diff = pair.difference();
        let finite: Vec<usize> = diff
            .iter()
            .copied()
            .filter(|&i| {
                let (a, b) = pair.term_bases(i);
                probe.var_of(&a).is_some() && probe.var_of(&b).is_some()
            })
            .collect();
        if finite.is_empty() {
            options.push(vec![mask_of(&diff)]);
            continue;
        }
        let fm = mask_of(&finite);
        let mut opts: Vec<u64> = Vec::new();
        // enumerate submasks of the finite mask with at least two members
        let mut sub = fm;
        loop {
            if sub.count_ones() >= 2 {
                opts.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & fm;
        }
        opts.sort_unstable();
        options.push(opts);
    }

    let mut found = Vec::new();
    let mut chosen = Vec::with_capacity(pairs.len());
    search(p, &pairs, &options, &mut chosen, &mut found)?;
    Ok(found)
}

fn search(
    p: &MatroidVector,
    pairs: &[ExchangePair],
    options: &[Vec<u64>],
    chosen: &mut Vec<u64>,
    found: &mut Vec<DressianCell>,
) -> Result<()> {
    let depth = chosen.len();
    if depth == pairs.len() {
        let id = DressianCellId {
            matroid: p.clone(),
            datum: InitialDatum::from_masks(p.n(), p.rank(), chosen.clone()),
        };
        if let Some(cell) = certify_cell(id)? {
            found.push(cell);
        }
        return Ok(());
    }
    for &opt in &options[depth] {
        chosen.push(opt);
        let forced = options[depth].len() == 1;
        let feasible = forced || partial_feasible(p, pairs, chosen)?;
        if feasible {
            search(p, pairs, options, chosen, found)?;
        }
        chosen.pop();
    }
    Ok(())
}

fn partial_feasible(p: &MatroidVector, pairs: &[ExchangePair], chosen: &[u64]) -> Result<bool> {
    let mut builder = SystemBuilder::new(p);
    for (pair, &m) in pairs.iter().zip(chosen) {
        builder.add_pair(pair, m)?;
    }
    Ok(lp_feasible_interior(&builder.build())?.is_some())
}

/// Exact test that the point `target.witness` lies in the closure of the cone
/// `C(source)` inside `𝕋^C(E,d)`.
///
/// The closure of a relatively open cone `K ⊆ ℝ^supp(p)` is cut out by the
/// same equalities with the strict inequalities relaxed. A point whose finite
/// part lives on `supp(p') ⊆ supp(p)` is a limit of points of `K` exactly when
/// some `ψ ∈ cl K` agrees with it on `supp(p')` and some recession direction
/// `r ∈ cl K` vanishes on `supp(p')` and is ≥ 1 on `supp(p) \ supp(p')`
/// (then `ψ + λ r` sends those coordinates to ∞).
pub fn witness_in_closure(source: &DressianCellId, target: &DressianCell) -> Result<bool> {
    let p = &source.matroid;
    let target_p = &target.id.matroid;
    if !specializes(p, target_p)? {
        // a finite coordinate outside supp(p) cannot be a limit of ∞
        return Ok(false);
    }
    let sys = cell_system(source)?;
    if sys.strict.iter().any(|f| is_zero_form(f)) {
        return Ok(false);
    }
    let nv = sys.variables.len();
    let mut lp = LinearProgram::new(2 * nv);
    let zero = BigRational::zero;
    let row = |form: &[i64], offset: usize| {
        let mut v = vec![zero(); 2 * nv];
        for (k, &c) in form.iter().enumerate() {
            v[offset + k] = BigRational::from_integer(c.into());
        }
        v
    };
    for offset in [0, nv] {
        for e in &sys.equalities {
            lp.add(Constraint::new(row(e, offset), Relation::Eq, zero()));
        }
        for s in &sys.strict {
            lp.add(Constraint::new(row(s, offset), Relation::Ge, zero()));
        }
    }
    for (k, b) in sys.variables.iter().enumerate() {
        let mut unit = vec![zero(); 2 * nv];
        let mut dir = vec![zero(); 2 * nv];
        unit[k] = BigRational::one();
        dir[nv + k] = BigRational::one();
        match target.witness.get(b) {
            TropicalValue::Finite(v) => {
                lp.add(Constraint::new(unit, Relation::Eq, v.clone()));
                lp.add(Constraint::new(dir, Relation::Eq, zero()));
            }
            TropicalValue::Infinite => {
                lp.add(Constraint::new(dir, Relation::Ge, BigRational::one()));
            }
        }
    }
    Ok(!matches!(lp.solve()?, LpOutcome::Infeasible))
}

/// Outcome of comparing the closure LP with the combinatorial prediction
/// `p ⪯ p′ and I ⊆ I′` over all ordered pairs of cells.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ClosureReport {
    pub cells: usize,
    pub pairs: usize,
    pub contained: usize,
    pub violations: Vec<String>,
}

impl ClosureReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_closure_relation(cells: &[DressianCell]) -> Result<ClosureReport> {
    let mut report = ClosureReport {
        cells: cells.len(),
        ..Default::default()
    };
    for c in cells {
        for target in cells {
            let predicted = specializes(&c.id.matroid, &target.id.matroid)?
                && c.id.datum.is_subset_of(&target.id.datum);
            let found = witness_in_closure(&c.id, target)?;
            report.pairs += 1;
            if found {
                report.contained += 1;
            }
            if found != predicted {
                report.violations.push(format!(
                    "LP says {found}, combinatorics says {predicted}: witness {:?} against cell with support {:?}",
                    target.witness.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    c.id.matroid.support_indices()
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::GroundSet;
    use crate::matroid::{uniform, DEFAULT_MATROID_GUARD};

    fn b(v: &[usize]) -> BasisId {
        BasisId::new(v.to_vec()).unwrap()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    /// Rank-2 vector on 4 elements from values in lex order 01,02,03,12,13,23.
    fn phi24(vals: [Option<i64>; 6]) -> TropicalVector {
        PluckerMap::new(
            GroundSet::range(4).unwrap(),
            2,
            vals.iter()
                .map(|v| v.map_or(TropicalValue::Infinite, TropicalValue::int))
                .collect(),
        )
        .unwrap()
    }

    fn pair(x: &[usize], y: &[usize]) -> usize {
        exchange_pairs_or_empty(4, 2)
            .iter()
            .position(|p| p.x == b(x) && p.y == b(y))
            .unwrap()
    }

    #[test]
    fn tropical_value_order_and_parse() {
        assert!(TropicalValue::int(5) < TropicalValue::Infinite);
        assert_eq!(
            "3/6".parse::<TropicalValue>().unwrap(),
            TropicalValue::Finite(r(1, 2))
        );
        assert_eq!(
            "inf".parse::<TropicalValue>().unwrap(),
            TropicalValue::Infinite
        );
        assert!("x".parse::<TropicalValue>().is_err());
        assert_eq!(TropicalValue::Finite(r(-7, 4)).to_string(), "-7/4");
        assert!(Modulus::new(r(3, 1)) < Modulus::new(r(-1, 1)));
        assert!(Modulus::new(r(1, 100)) < Modulus::infinity());
    }

    #[test]
    fn initial_datum_all_ties() {
        let phi = phi24([Some(0); 6]);
        let i = initial_datum(&phi);
        for (pair, set) in i.entries() {
            assert_eq!(set, pair.difference());
        }
    }

    #[test]
    fn initial_datum_two_valued() {
        let phi = phi24([Some(1), Some(0), Some(0), Some(0), Some(0), Some(1)]);
        let i = initial_datum(&phi);
        assert_eq!(i.set(pair(&[0, 1, 2], &[3])), vec![0, 1]);
        assert!(is_tropical_plucker(&phi));
    }

    #[test]
    fn infinite_terms_drop_from_argmin() {
        let phi = phi24([None, Some(0), Some(0), Some(0), Some(0), Some(0)]);
        let i = initial_datum(&phi);
        assert_eq!(i.set(pair(&[0, 1, 2], &[3])), vec![0, 1]);
        assert_eq!(underlying_matroid(&phi).unwrap().support().len(), 5);
    }

    #[test]
    fn plucker_violation() {
        let phi = phi24([Some(-1), Some(0), Some(0), Some(0), Some(0), Some(0)]);
        assert!(!is_tropical_plucker(&phi));
        let msg = tropical_plucker_violation(&phi).unwrap();
        assert!(msg.contains("cardinality < 2"));
        assert!(is_tropical_plucker(&phi24([Some(0); 6])));
        assert!(!is_tropical_plucker(&phi24([None; 6])));
    }

    #[test]
    fn underlying_uniform() {
        let m = underlying_matroid(&phi24([Some(0); 6])).unwrap();
        assert_eq!(m, uniform(2, GroundSet::range(4).unwrap()).unwrap());
    }

    #[test]
    fn normalize_examples() {
        let g = GroundSet::range(3).unwrap();
        let five = PluckerMap::new(g.clone(), 1, vec![TropicalValue::int(5); 3]).unwrap();
        assert_eq!(
            normalize(&five).unwrap().values(),
            vec![TropicalValue::int(0); 3].as_slice()
        );
        let v = PluckerMap::new(
            g,
            1,
            vec![
                TropicalValue::int(3),
                TropicalValue::int(7),
                TropicalValue::Infinite,
            ],
        )
        .unwrap();
        let nv = normalize(&v).unwrap();
        assert_eq!(
            nv.values(),
            &[
                TropicalValue::int(0),
                TropicalValue::int(4),
                TropicalValue::Infinite
            ]
        );
        assert_eq!(normalize(&nv).unwrap(), nv);
    }

    #[test]
    fn cell_system_all_ties_uniform() {
        let id = cell_of(&phi24([Some(0); 6])).unwrap();
        let sys = cell_system(&id).unwrap();
        assert_eq!(sys.variables.len(), 6);
        assert_eq!(sys.equality_rank(), 2);
        assert!(sys.strict.is_empty());
    }

    #[test]
    fn cell_system_two_way_tie() {
        // 02+13 = 03+12 < 01+23
        let id = cell_of(&phi24([
            Some(1),
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(1),
        ]))
        .unwrap();
        let sys = cell_system(&id).unwrap();
        assert_eq!(sys.equality_rank(), 1);
        let mut all = sys.equalities.clone();
        all.extend(sys.strict.iter().cloned());
        assert_eq!(rational_rank(&all), 2);
        assert!(sys.is_satisfied_by(&phi24([
            Some(1),
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(1)
        ])));
    }

    #[test]
    fn cell_system_drops_non_bases() {
        let id = cell_of(&phi24([None, Some(0), Some(0), Some(0), Some(0), Some(0)])).unwrap();
        let sys = cell_system(&id).unwrap();
        assert_eq!(sys.variables.len(), 5);
        assert!(!sys.variables.contains(&b(&[0, 1])));
    }

    #[test]
    fn cell_system_rejects_foreign_datum() {
        let mut id = cell_of(&phi24([Some(0); 6])).unwrap();
        let k = pair(&[0, 1, 2], &[3]);
        id.datum.sets[k] = bit(3);
        assert!(matches!(
            cell_system(&id),
            Err(Error::InitialDatumNotSubset { .. })
        ));
    }

    #[test]
    fn lp_examples() {
        let sys = LinearSystem {
            variables: vec![b(&[0]), b(&[1])],
            equalities: vec![],
            strict: vec![vec![-1, 1]],
            lineality: vec![1, 1],
        };
        let p = lp_feasible_interior(&sys).unwrap().unwrap();
        assert_eq!(&p[1] - &p[0], r(1, 1));
        let sys = LinearSystem {
            strict: vec![vec![-1, 1], vec![1, -1]],
            ..sys
        };
        assert!(lp_feasible_interior(&sys).unwrap().is_none());
    }

    #[test]
    fn generic_uniform_cone_is_feasible() {
        // raising one basis of the all-zero vector gives a generic cone
        let id = cell_of(&phi24([
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(1),
        ]))
        .unwrap();
        assert!(certify_cell(id).unwrap().is_some());
        // lowering one breaks the relation
        assert!(!is_tropical_plucker(&phi24([
            Some(-1),
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(0)
        ])));
    }

    #[test]
    fn uniform_24_has_four_cells() {
        let u = uniform(2, GroundSet::range(4).unwrap()).unwrap();
        let cells = cells_of_matroid(&u).unwrap();
        assert_eq!(cells.len(), 4);
        let k = pair(&[0, 1, 2], &[3]);
        let sizes: Vec<usize> = cells.iter().map(|c| c.id.datum.set(k).len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 1);
        for c in &cells {
            assert_eq!(cell_of(&c.witness).unwrap(), c.id);
        }
    }

    #[test]
    fn rank_one_cells_are_forced() {
        for n in 2..=4 {
            let cells = enumerate_dressian_cells(1, n, DEFAULT_MATROID_GUARD).unwrap();
            let matroids = enumerate_matroids(1, n, DEFAULT_MATROID_GUARD).unwrap();
            assert_eq!(cells.len(), matroids.len());
            for c in &cells {
                assert_eq!(cell_of(&c.witness).unwrap(), c.id);
            }
        }
    }

    #[test]
    fn closure_candidates_examples() {
        let cells = enumerate_dressian_cells(2, 4, DEFAULT_MATROID_GUARD).unwrap();
        let ids: Vec<DressianCellId> = cells.iter().map(|c| c.id.clone()).collect();
        let all_ties = cell_of(&phi24([Some(0); 6])).unwrap();
        let generic = cell_of(&phi24([
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(1),
        ]))
        .unwrap();
        let cands = closure_candidates(&generic, &ids);
        assert!(cands.contains(&all_ties));
        assert!(!cands.contains(&generic));
        let from_ties = closure_candidates(&all_ties, &ids);
        assert!(from_ties.iter().all(|c| c.matroid != all_ties.matroid));
    }

    #[test]
    fn translation_invariance() {
        let phi = phi24([Some(3), Some(1), Some(1), Some(1), Some(1), Some(2)]);
        let id = cell_of(&phi).unwrap();
        let sys = cell_system(&id).unwrap();
        for shift in [r(-5, 3), r(0, 1), r(7, 2)] {
            let moved = phi.map(|v| v.shifted(&shift));
            assert_eq!(cell_of(&moved).unwrap(), id);
            assert!(sys.is_satisfied_by(&moved));
        }
        assert_eq!(cell_of(&normalize(&phi).unwrap()).unwrap(), id);
    }
}
