//! Direct sums of signed Plücker vectors, pushforward along injections, and
//! matroid sliding `Φ_t^A`.
//!
//! Sliding multiplies coordinates by monomials in rational weights, so it is
//! provided on the signed-rational form only, where it stays exact.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{binomial, lex_rank, perm_sign, AlternatingValue, GroundSet, PluckerMap};
use crate::orval::{OrientedScalar, RationalVector};

/// The unique rank-0 vector, the unit of the direct sum.
pub fn rank_zero_unit<V: OrientedScalar>() -> PluckerMap<V> {
    PluckerMap::new(
        GroundSet::range(0).expect("empty ground set"),
        0,
        vec![V::one()],
    )
    .expect("one coordinate on the empty set")
}

/// Same coordinates on a relabeled ground set of the same size.
pub fn relabel<V: Clone>(phi: &PluckerMap<V>, ground: GroundSet) -> Result<PluckerMap<V>> {
    if ground.len() != phi.n() {
        return Err(Error::WrongLength {
            expected: phi.n(),
            found: ground.len(),
        });
    }
    PluckerMap::new(ground, phi.rank(), phi.values().to_vec())
}

/// The value `sign(σ)·v` placed at the sorted form of `positions`.
fn place<V: AlternatingValue>(values: &mut [V], n: usize, positions: &[usize], v: V) -> Result<()> {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    let s = perm_sign(positions)?;
    values[lex_rank(n, &sorted)] = if s > 0 { v } else { v.negate() };
    Ok(())
}

/// Direct sum of several blocks on `ground`, where `position[a][i]` is the
/// position in `ground` of the `i`-th element of block `a`.
///
/// The alternating function takes the value `Φ_0(B_0)···Φ_k(B_k)` on tuples
/// listing `B_0` first, then `B_1`, and so on.
fn block_sum<V: OrientedScalar>(
    blocks: &[&PluckerMap<V>],
    ground: GroundSet,
    position: &[Vec<usize>],
) -> Result<PluckerMap<V>> {
    let n = ground.len();
    let d: usize = blocks.iter().map(|b| b.rank()).sum();
    let len = binomial(n, d) as usize;
    let mut values = vec![V::null(); len];
    let supports: Vec<Vec<(Vec<usize>, V)>> = blocks
        .iter()
        .zip(position)
        .map(|(phi, pos)| {
            phi.iter()
                .filter(|(_, v)| !v.is_null())
                .map(|(b, v)| (b.members().iter().map(|&e| pos[e]).collect(), v.clone()))
                .collect()
        })
        .collect();
    let mut stack: Vec<usize> = vec![0; blocks.len()];
    if supports.iter().any(Vec::is_empty) {
        return PluckerMap::new(ground, d, values);
    }
    loop {
        let mut tuple = Vec::with_capacity(d);
        let mut v = V::one();
        for (a, &k) in stack.iter().enumerate() {
            let (pos, val) = &supports[a][k];
            tuple.extend_from_slice(pos);
            v = v.times(val);
        }
        place(&mut values, n, &tuple, v)?;
        // odometer over the product of supports
        let mut a = blocks.len();
        loop {
            if a == 0 {
                return PluckerMap::new(ground, d, values);
            }
            a -= 1;
            stack[a] += 1;
            if stack[a] < supports[a].len() {
                break;
            }
            stack[a] = 0;
        }
    }
}

/// `Φ_1 ⊕ Φ_2` on `E_1 ⊔ E_2`, relabeled as `0..n_1` followed by
/// `n_1..n_1+n_2`.
pub fn direct_sum<V: OrientedScalar>(
    a: &PluckerMap<V>,
    b: &PluckerMap<V>,
) -> Result<PluckerMap<V>> {
    let n1 = a.n();
    let n2 = b.n();
    let ground = GroundSet::range(n1 + n2)?;
    block_sum(
        &[a, b],
        ground,
        &[(0..n1).collect(), (n1..n1 + n2).collect()],
    )
}

/// `Φ_1 ⊕ Φ_2` on the union of their labels, which must be disjoint.
pub fn direct_sum_labeled<V: OrientedScalar>(
    a: &PluckerMap<V>,
    b: &PluckerMap<V>,
) -> Result<PluckerMap<V>> {
    let la = a.ground().labels();
    let lb = b.ground().labels();
    if let Some(&c) = la.iter().find(|l| lb.binary_search(l).is_ok()) {
        return Err(Error::LabelCollision(c));
    }
    let mut all: Vec<u128> = la.iter().chain(lb).copied().collect();
    all.sort_unstable();
    let ground = GroundSet::from_labels(all)?;
    let pos = |ls: &[u128]| -> Vec<usize> {
        ls.iter()
            .map(|&l| ground.index_of(l).expect("label present"))
            .collect()
    };
    let position = vec![pos(la), pos(lb)];
    block_sum(&[a, b], ground.clone(), &position)
}

/// Iterated direct sum of `blocks` on the elements `(a, label)` ordered
/// block by block. Returns the vector together with the element list.
pub fn direct_sum_blocks<V: OrientedScalar>(
    blocks: &[PluckerMap<V>],
) -> Result<(PluckerMap<V>, Vec<(usize, u128)>)> {
    let mut elements = Vec::new();
    let mut position = Vec::new();
    for (a, phi) in blocks.iter().enumerate() {
        let mut pos = Vec::new();
        for &l in phi.ground().labels() {
            pos.push(elements.len());
            elements.push((a, l));
        }
        position.push(pos);
    }
    let ground = GroundSet::range(elements.len())?;
    let refs: Vec<&PluckerMap<V>> = blocks.iter().collect();
    Ok((block_sum(&refs, ground, &position)?, elements))
}

/// An injective map between label sets, stored as explicit pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injection {
    pub map: BTreeMap<u128, u128>,
}

impl Injection {
    pub fn new(map: BTreeMap<u128, u128>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (&x, &y) in &map {
            if let Some(prev) = seen.insert(y, x) {
                return Err(Error::NotInjective(format!(
                    "{prev} and {x} both map to {y}"
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn from_pairs(pairs: &[(u128, u128)]) -> Result<Self> {
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::NotInjective(format!("{} listed twice", w[0].0)));
        }
        Self::new(pairs.iter().copied().collect())
    }

    pub fn image(&self) -> BTreeSet<u128> {
        self.map.values().copied().collect()
    }

    pub fn apply(&self, x: u128) -> Option<u128> {
        self.map.get(&x).copied()
    }

    fn check_domain(&self, ground: &GroundSet) -> Result<()> {
        let dom: Vec<u128> = self.map.keys().copied().collect();
        if dom != ground.labels() {
            return Err(Error::ParameterMismatch(format!(
                "injection domain {dom:?} differs from the ground set {:?}",
                ground.labels()
            )));
        }
        Ok(())
    }
}

/// Injections `α_0, …, α_n` with a common domain and pairwise disjoint images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InjectionFamily {
    maps: Vec<Injection>,
}

impl InjectionFamily {
    pub fn new(maps: Vec<Injection>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::ParameterMismatch("empty injection family".into()));
        }
        let dom: Vec<&u128> = maps[0].map.keys().collect();
        for m in &maps[1..] {
            if m.map.keys().collect::<Vec<_>>() != dom {
                return Err(Error::ParameterMismatch(
                    "injections have different domains".into(),
                ));
            }
        }
        let mut owner: BTreeMap<u128, usize> = BTreeMap::new();
        for (k, m) in maps.iter().enumerate() {
            for y in m.image() {
                if let Some(j) = owner.insert(y, k) {
                    return Err(Error::ImagesOverlap(format!(
                        "maps {j} and {k} both hit {y}"
                    )));
                }
            }
        }
        Ok(Self { maps })
    }

    pub fn maps(&self) -> &[Injection] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// The sorted union of the images.
    pub fn codomain(&self) -> Result<GroundSet> {
        let all: BTreeSet<u128> = self.maps.iter().flat_map(Injection::image).collect();
        GroundSet::from_labels(all.into_iter().collect())
    }

    pub fn sub_family(&self, keep: &[usize]) -> Result<Self> {
        Self::new(keep.iter().map(|&k| self.maps[k].clone()).collect())
    }
}

/// Nonnegative rational weights summing to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexPoint {
    weights: Vec<BigRational>,
}

impl SimplexPoint {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSimplexPoint("no weights".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidSimplexPoint("negative weight".into()));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidSimplexPoint(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { weights })
    }

    /// The `k`-th vertex of the `n`-simplex (`n + 1` weights).
    pub fn vertex(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidSimplexPoint(format!(
                "vertex {k} of a {n}-simplex"
            )));
        }
        Self::new(
            (0..=n)
                .map(|i| {
                    if i == k {
                        <BigRational as One>::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect(),
        )
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }
}

/// `(α)_*Φ` on `target`: coordinates relabeled along `α`, zero on bases not
/// inside `α(E)`.
pub fn pushforward<V: OrientedScalar>(
    phi: &PluckerMap<V>,
    alpha: &Injection,
    target: &GroundSet,
) -> Result<PluckerMap<V>> {
    alpha.check_domain(phi.ground())?;
    let n = target.len();
    let d = phi.rank();
    let mut values = vec![V::null(); binomial(n, d) as usize];
    let pos: Vec<usize> = phi
        .ground()
        .labels()
        .iter()
        .map(|&l| {
            let y = alpha.apply(l).expect("domain checked");
            target.index_of(y).ok_or(Error::ParameterMismatch(format!(
                "image {y} lies outside the target ground set"
            )))
        })
        .collect::<Result<_>>()?;
    for (b, v) in phi.iter() {
        if !v.is_null() {
            let tuple: Vec<usize> = b.members().iter().map(|&e| pos[e]).collect();
            place(&mut values, n, &tuple, v.clone())?;
        }
    }
    PluckerMap::new(target.clone(), d, values)
}

/// `Φ_t^A` on `target` (by default the union of the images).
///
/// On a tuple of elements all inside the images, with `b_k` of them in
/// `α_k(E)`, the value is `Φ(x̄_1, …, x̄_d)·t_0^{b_0}···t_n^{b_n}`; it is 0
/// elsewhere.
pub fn slide(
    phi: &RationalVector,
    family: &InjectionFamily,
    t: &SimplexPoint,
    target: Option<&GroundSet>,
) -> Result<RationalVector> {
    if t.weights().len() != family.len() {
        return Err(Error::InvalidSimplexPoint(format!(
            "{} weights for {} injections",
            t.weights().len(),
            family.len()
        )));
    }
    for m in family.maps() {
        m.check_domain(phi.ground())?;
    }
    let owned;
    let target = match target {
        Some(g) => g,
        None => {
            owned = family.codomain()?;
            &owned
        }
    };
    let n = target.len();
    let d = phi.rank();
    let k = family.len();
    let mut values = vec![BigRational::zero(); binomial(n, d) as usize];
    let image_pos: Vec<Vec<usize>> = family
        .maps()
        .iter()
        .map(|m| {
            phi.ground()
                .labels()
                .iter()
                .map(|&l| {
                    let y = m.apply(l).expect("domain checked");
                    target.index_of(y).ok_or(Error::ParameterMismatch(format!(
                        "image {y} lies outside the target ground set"
                    )))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for (b, v) in phi.iter() {
        if v.is_zero() {
            continue;
        }
        let members = b.members();
        // every way of sending each basis element through one of the maps
        let mut choice = vec![0usize; d];
        loop {
            let mut exps = vec![0u32; k];
            let tuple: Vec<usize> = members
                .iter()
                .zip(&choice)
                .map(|(&e, &c)| {
                    exps[c] += 1;
                    image_pos[c][e]
                })
                .collect();
            let mut w = v.clone();
            for (tk, &e) in t.weights().iter().zip(&exps) {
                if e > 0 {
                    w *= num::pow(tk.clone(), e as usize);
                }
            }
            place(&mut values, n, &tuple, w)?;
            let mut i = d;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < k {
                    break;
                }
                choice[i] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    PluckerMap::new(target.clone(), d, values)
}
