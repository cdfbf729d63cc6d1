//! Oriented valuated matroids as signed tropical Plücker vectors, their
//! cells `D([χ], I)`, and the projection of the cell poset onto the
//! MacPhersonian.
//!
//! Coordinates come in two exact forms: [`SignedTropical`] (a sign and a
//! valuation) and signed rationals, whose moduli are compared
//! multiplicatively through [`Modulus`]. Both implement [`OrientedScalar`].
//!
//! At a pair whose three-term list is all zero the initial datum is all of
//! `X \ Y`, as on the valuated side.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, Zero};
use serde::Serialize;

use crate::complexes::FinitePoset;
use crate::error::{Error, Result};
use crate::ground::{exchange_pairs_or_empty, rational_sign, AlternatingValue, PluckerMap, Sign};
use crate::matroid::MatroidVector;
use crate::oriented::{
    enumerate_oriented_matroids, i_max, om_class, sign_condition_holds, Chirotope, MacPPoset,
    OrientedMatroidClass, SignVector,
};
use crate::valuated::{
    self, argmin_set, exchange_terms, initial_datum, InitialDatum, Modulus, TropicalScalar,
    TropicalValue,
};

/// A coordinate `(sign, valuation)` with `sign = 0` exactly when the
/// valuation is ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedTropical {
    sign: Sign,
    val: TropicalValue,
}

impl SignedTropical {
    pub fn new(sign: Sign, val: TropicalValue) -> Result<Self> {
        let ok = match sign {
            0 => val.is_infinite(),
            1 | -1 => !val.is_infinite(),
            _ => false,
        };
        if ok {
            Ok(Self { sign, val })
        } else {
            Err(Error::Parse(format!(
                "sign {sign} with valuation {val}: sign must be 0 exactly when the valuation is inf"
            )))
        }
    }

    pub fn zero() -> Self {
        Self {
            sign: 0,
            val: TropicalValue::Infinite,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn val(&self) -> &TropicalValue {
        &self.val
    }
}

impl fmt::Display for SignedTropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "+{}", self.val),
            _ => write!(f, "-{}", self.val),
        }
    }
}

impl AlternatingValue for SignedTropical {
    fn null() -> Self {
        Self::zero()
    }
    fn negate(&self) -> Self {
        Self {
            sign: -self.sign,
            val: self.val.clone(),
        }
    }
    fn is_null(&self) -> bool {
        self.sign == 0
    }
}

/// A coordinate with a sign and a modulus, closed under products.
pub trait OrientedScalar: AlternatingValue + fmt::Debug {
    /// The modulus in tropical order: larger moduli compare smaller.
    type Modulus: TropicalScalar;
    fn one() -> Self;
    fn sign(&self) -> Sign;
    fn modulus(&self) -> Self::Modulus;
    fn times(&self, other: &Self) -> Self;
}

impl OrientedScalar for SignedTropical {
    type Modulus = TropicalValue;
    fn one() -> Self {
        Self {
            sign: 1,
            val: TropicalValue::int(0),
        }
    }
    fn sign(&self) -> Sign {
        self.sign
    }
    fn modulus(&self) -> TropicalValue {
        self.val.clone()
    }
    fn times(&self, other: &Self) -> Self {
        Self {
            sign: self.sign * other.sign,
            val: self.val.otimes(&other.val),
        }
    }
}

impl OrientedScalar for BigRational {
    type Modulus = Modulus;
    fn one() -> Self {
        BigRational::from_integer(1.into())
    }
    fn sign(&self) -> Sign {
        rational_sign(self)
    }
    fn modulus(&self) -> Modulus {
        Modulus::new(self.clone())
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

pub type OrientedTropicalVector = PluckerMap<SignedTropical>;
pub type RationalVector = PluckerMap<BigRational>;

/// Componentwise (modulus, sign).
pub fn split<V: OrientedScalar>(
    phi: &PluckerMap<V>,
) -> Result<(PluckerMap<V::Modulus>, SignVector)> {
    if phi.is_identically_zero() {
        return Err(Error::ZeroVector("oriented tropical Plücker vector"));
    }
    Ok((phi.map(V::modulus), phi.map(V::sign)))
}

/// Reassembles a signed vector from a valuation and a sign pattern with the
/// same support.
pub fn join(phi: &valuated::TropicalVector, chi: &SignVector) -> Result<OrientedTropicalVector> {
    phi.check_shape(chi)?;
    let values = phi
        .values()
        .iter()
        .zip(chi.values())
        .map(|(v, &s)| SignedTropical::new(s, v.clone()))
        .collect::<Result<Vec<_>>>()?;
    PluckerMap::new(phi.ground().clone(), phi.rank(), values)
}

/// `(-1)^k Φ(X - x_k) Φ(x_k, Y)` for `k = 1..=d+1`.
pub fn signed_products<V: OrientedScalar>(
    phi: &PluckerMap<V>,
    x: &[usize],
    y: &[usize],
) -> Result<Vec<V>> {
    let d = phi.rank();
    if x.len() != d + 1 || y.len() + 1 != d {
        return Err(Error::ParameterMismatch(format!(
            "expected |X|={} and |Y|={}",
            d + 1,
            d.saturating_sub(1)
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
        let mut with = vec![x[k]];
        with.extend_from_slice(y);
        let p = phi
            .alternating_eval(&rest)?
            .times(&phi.alternating_eval(&with)?);
        out.push(if (k + 1) % 2 == 0 { p } else { p.negate() });
    }
    Ok(out)
}

/// The first pair whose maximum-modulus products all share one sign.
pub fn oriented_plucker_violation<V: OrientedScalar>(phi: &PluckerMap<V>) -> Option<String> {
    if phi.is_identically_zero() {
        return Some("vector is identically zero".into());
    }
    for pair in exchange_pairs_or_empty(phi.n(), phi.rank()) {
        let products = signed_products(phi, pair.x.members(), pair.y.members())
            .expect("exchange pairs have the right sizes");
        if products.iter().all(V::is_null) {
            continue;
        }
        let moduli: Vec<V::Modulus> = products.iter().map(V::modulus).collect();
        let top = moduli.iter().min().expect("nonempty");
        let signs: Vec<Sign> = products
            .iter()
            .zip(&moduli)
            .filter(|(_, m)| *m == top)
            .map(|(p, _)| p.sign())
            .collect();
        if !(signs.contains(&1) && signs.contains(&-1)) {
            return Some(format!(
                "maximum modulus does not occur with both signs at (X,Y)={pair}: signs {signs:?}"
            ));
        }
    }
    None
}

pub fn is_oriented_tropical_plucker<V: OrientedScalar>(phi: &PluckerMap<V>) -> bool {
    oriented_plucker_violation(phi).is_none()
}

/// Compatibility of a valuation with a sign pattern: equal supports, and at
/// every pair with a finite term the argmin carries both three-term signs.
pub fn is_compatible<M: TropicalScalar>(phi: &PluckerMap<M>, chi: &SignVector) -> Result<bool> {
    phi.check_shape(chi)?;
    let same_support = phi
        .values()
        .iter()
        .zip(chi.values())
        .all(|(v, &s)| v.is_infinite() == (s == 0));
    if !same_support {
        return Ok(false);
    }
    let mut sets = Vec::new();
    for pair in exchange_pairs_or_empty(phi.n(), phi.rank()) {
        sets.push(argmin_set(&exchange_terms(phi, &pair)));
    }
    let datum = InitialDatum::from_sets(phi.n(), phi.rank(), sets)?;
    sign_condition_holds(&datum, chi)
}

/// Names the cell `D([χ], I)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCellId {
    pub om: OrientedMatroidClass,
    pub datum: InitialDatum,
}

pub fn cell_of_oriented<V: OrientedScalar>(phi: &PluckerMap<V>) -> Result<OrientedCellId> {
    if let Some(msg) = oriented_plucker_violation(phi) {
        return Err(Error::NotOrientedPlucker(msg));
    }
    let (val, signs) = split(phi)?;
    let chi = Chirotope::new(signs)?;
    Ok(OrientedCellId {
        om: om_class(&chi),
        datum: initial_datum(&val),
    })
}

/// The poset `𝒞` of nonempty cells with one signed witness per cell.
#[derive(Clone, Debug)]
pub struct OrientedCellPoset {
    pub cells: Vec<OrientedCellId>,
    pub witnesses: Vec<OrientedTropicalVector>,
    pub poset: FinitePoset,
}

impl OrientedCellPoset {
    pub fn index_of(&self, c: &OrientedCellId) -> Option<usize> {
        self.cells.binary_search(c).ok()
    }
}

/// `([χ], I) ≤ ([χ'], I')` iff `[χ] ≤ [χ']` and `I ⊆ I'` pointwise.
pub fn cell_leq(macp: &MacPPoset, a: &OrientedCellId, b: &OrientedCellId) -> bool {
    let (Some(ia), Some(ib)) = (macp.index_of(&a.om), macp.index_of(&b.om)) else {
        return false;
    };
    macp.poset.leq(ia, ib) && a.datum.is_subset_of(&b.datum)
}

pub fn oriented_cell_poset(
    d: usize,
    n: usize,
    guard: usize,
) -> Result<(OrientedCellPoset, MacPPoset)> {
    let macp = enumerate_oriented_matroids(d, n, guard)?;
    let poset = cells_over(&macp)?;
    Ok((poset, macp))
}

/// All nonempty cells over the classes of `macp`.
pub fn cells_over(macp: &MacPPoset) -> Result<OrientedCellPoset> {
    let mut dressian: BTreeMap<Vec<bool>, Vec<valuated::DressianCell>> = BTreeMap::new();
    let mut found: Vec<(OrientedCellId, OrientedTropicalVector)> = Vec::new();
    for class in &macp.classes {
        let chi = class.representative();
        let m: MatroidVector = chi.underlying_matroid();
        let key = m.vector().values().to_vec();
        if !dressian.contains_key(&key) {
            dressian.insert(key.clone(), valuated::cells_of_matroid(&m)?);
        }
        for cell in &dressian[&key] {
            if !sign_condition_holds(&cell.id.datum, chi.signs())? {
                continue;
            }
            let witness = join(&cell.witness, chi.signs())?;
            if !is_oriented_tropical_plucker(&witness) {
                return Err(Error::Solver(format!(
                    "witness of cell ({class}, I) fails the oriented relation"
                )));
            }
            found.push((
                OrientedCellId {
                    om: class.clone(),
                    datum: cell.id.datum.clone(),
                },
                witness,
            ));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let (cells, witnesses): (Vec<_>, Vec<_>) = found.into_iter().unzip();
    let names = cells.iter().map(cell_name).collect();
    let leq = cells
        .iter()
        .map(|a| cells.iter().map(|b| cell_leq(macp, a, b)).collect())
        .collect();
    Ok(OrientedCellPoset {
        cells,
        witnesses,
        poset: FinitePoset::new(names, leq)?,
    })
}

fn cell_name(c: &OrientedCellId) -> String {
    let sets: Vec<String> = (0..c.datum.len())
        .map(|k| {
            c.datum
                .set(k)
                .iter()
                .map(|e| e.to_string())
                .collect::<String>()
        })
        .collect();
    format!("{}|{}", c.om, sets.join(","))
}

/// `([χ], I) ↦ [χ]` as indices into `macp.classes`.
pub fn project_to_macp(cells: &OrientedCellPoset, macp: &MacPPoset) -> Result<Vec<usize>> {
    cells
        .cells
        .iter()
        .map(|c| {
            macp.index_of(&c.om).ok_or_else(|| {
                Error::ParameterMismatch(format!("class {} is not in the poset", c.om))
            })
        })
        .collect()
}

/// A fibre object `([τ], I)` over `[χ]` whose fibre category
/// `{J compatible with χ : J ⊆ I}` does not have `I` as its final object.
#[derive(Clone, Debug, Serialize)]
pub struct FinalityViolation {
    pub chi: String,
    pub tau: String,
    pub datum: Vec<Vec<usize>>,
    pub candidates: usize,
    /// The maximum of the fibre category when it has one.
    pub maximum: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FiberReport {
    pub classes: usize,
    pub cells: usize,
    pub monotone: bool,
    pub surjective: bool,
    /// Geometric fibres without the unique maximum `([χ], i_max(χ))`.
    pub geometric_violations: Vec<String>,
    pub objects_checked: usize,
    /// Fibre categories with no final object at all.
    pub without_final_object: usize,
    /// Fibre categories whose final object is not `I`.
    pub final_object_violations: Vec<FinalityViolation>,
}

impl FiberReport {
    pub fn is_clean(&self) -> bool {
        self.monotone
            && self.surjective
            && self.geometric_violations.is_empty()
            && self.final_object_violations.is_empty()
    }
}

fn datum_sets(i: &InitialDatum) -> Vec<Vec<usize>> {
    (0..i.len()).map(|k| i.set(k)).collect()
}

/// Checks the fibres of `π: 𝒞 → MacP` and the fibre categories of the
/// inclusion of each geometric fibre into its homotopy fibre.
pub fn check_fiber_finality(cells: &OrientedCellPoset, macp: &MacPPoset) -> Result<FiberReport> {
    let proj = project_to_macp(cells, macp)?;
    let mut report = FiberReport {
        classes: macp.classes.len(),
        cells: cells.cells.len(),
        ..Default::default()
    };
    report.monotone = cells
        .poset
        .strict_relations()
        .iter()
        .all(|&(a, b)| macp.poset.leq(proj[a], proj[b]));
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); macp.classes.len()];
    for (k, &c) in proj.iter().enumerate() {
        fibers[c].push(k);
    }
    report.surjective = fibers.iter().all(|f| !f.is_empty());

    for (c, fiber) in fibers.iter().enumerate() {
        let chi = macp.classes[c].representative();
        let want = OrientedCellId {
            om: macp.classes[c].clone(),
            datum: i_max(chi),
        };
        let sub = cells.poset.restrict(fiber);
        let ok = sub.maximum().is_some_and(|m| cells.cells[fiber[m]] == want);
        if !ok {
            report.geometric_violations.push(format!(
                "fibre over {} lacks the maximum ({}, i_max)",
                macp.classes[c], macp.classes[c]
            ));
        }
    }

    for (c, fiber) in fibers.iter().enumerate() {
        for (k, obj) in cells.cells.iter().enumerate() {
            if !macp.poset.leq(c, proj[k]) {
                continue;
            }
            report.objects_checked += 1;
            let below: Vec<usize> = fiber
                .iter()
                .copied()
                .filter(|&j| cells.cells[j].datum.is_subset_of(&obj.datum))
                .collect();
            let maximum = below.iter().copied().find(|&m| {
                below
                    .iter()
                    .all(|&j| cells.cells[j].datum.is_subset_of(&cells.cells[m].datum))
            });
            if maximum.is_none() {
                report.without_final_object += 1;
            }
            if maximum.map(|m| &cells.cells[m].datum) != Some(&obj.datum) {
                report.final_object_violations.push(FinalityViolation {
                    chi: macp.classes[c].to_string(),
                    tau: obj.om.to_string(),
                    datum: datum_sets(&obj.datum),
                    candidates: below.len(),
                    maximum: maximum.map(|m| datum_sets(&cells.cells[m].datum)),
                });
            }
        }
    }
    Ok(report)
}

/// Signed rationals to the (sign, valuation) form is not exact; this builds
/// the signed tropical vector of a rational one only when every nonzero
/// modulus is an integral power of `base`.
pub fn from_rational_powers(
    phi: &RationalVector,
    base: &BigRational,
) -> Option<OrientedTropicalVector> {
    let values = phi
        .values()
        .iter()
        .map(|r| {
            if r.is_zero() {
                return Some(SignedTropical::zero());
            }
            let m = Modulus::new(r.clone()).value().clone();
            let mut e: i64 = 0;
            let mut acc = BigRational::from_integer(1.into());
            let one = acc.clone();
            // -log_base |r|
            if m >= one {
                while acc < m {
                    acc *= base;
                    e -= 1;
                }
            } else {
                while acc > m {
                    acc /= base;
                    e += 1;
                }
            }
            (acc == m).then(|| SignedTropical {
                sign: rational_sign(r),
                val: TropicalValue::int(e),
            })
        })
        .collect::<Option<Vec<_>>>()?;
    PluckerMap::new(phi.ground().clone(), phi.rank(), values).ok()
}
