//! The operad `𝓔` of disjoint injections and its action on signed Plücker
//! vectors.
//!
//! ℕ is split into the pieces `P_i = {m : 2^i exactly divides m + 1}`, so
//! `e_i(x) = 2^i(2x + 1) - 1` enumerates `P_i` in order. Every injection
//! `A × ℕ → ℕ` used here is affine on each `{a} × ℕ`, `n ↦ s·n + c`, and
//! affine maps are closed under composition. Equalities of operad points are
//! therefore exact equalities of finitely many integers, valid on all of ℕ.
//!
//! Label arithmetic is checked; overflow reports [`Error::WindowExhausted`].

use std::collections::BTreeMap;
use std::fmt;

use num::integer::gcd;
use num::{BigRational, One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::PluckerMap;
use crate::orval::RationalVector;
use crate::sampling::OrientedSampler;
use crate::sums_sliding::{direct_sum_blocks, slide, Injection, InjectionFamily, SimplexPoint};

fn overflow(what: &str) -> Error {
    Error::WindowExhausted(what.to_string())
}

/// Piece index of `m`: the 2-adic valuation of `m + 1`.
pub fn piece_of(m: u128) -> Result<u32> {
    m.checked_add(1)
        .map(u128::trailing_zeros)
        .ok_or_else(|| overflow("u128::MAX"))
}

/// The `x`-th element of `P_i`.
pub fn piece_element(i: u32, x: u128) -> Result<u128> {
    let odd = x
        .checked_mul(2)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| overflow(&format!("2*{x}+1")))?;
    1u128
        .checked_shl(i)
        .and_then(|p| p.checked_mul(odd))
        .map(|v| v - 1)
        .ok_or_else(|| overflow(&format!("element {x} of piece {i}")))
}

/// `n ↦ scale·n + offset` on ℕ, with `scale ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Affine {
    pub scale: u128,
    pub offset: u128,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        scale: 1,
        offset: 0,
    };

    pub fn new(scale: u128, offset: u128) -> Result<Self> {
        if scale == 0 {
            return Err(Error::NotInjective(format!("constant map n ↦ {offset}")));
        }
        Ok(Self { scale, offset })
    }

    pub fn apply(&self, n: u128) -> Result<u128> {
        self.scale
            .checked_mul(n)
            .and_then(|v| v.checked_add(self.offset))
            .ok_or_else(|| overflow(&format!("{}·{n}+{}", self.scale, self.offset)))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Affine) -> Result<Affine> {
        let scale = self
            .scale
            .checked_mul(inner.scale)
            .ok_or_else(|| overflow("composite scale"))?;
        let offset = self.apply(inner.offset)?;
        Ok(Affine { scale, offset })
    }

    /// The piece containing the whole image, if there is one.
    pub fn piece(&self) -> Option<u32> {
        let first = self.offset.checked_add(1)?.trailing_zeros();
        (first < self.scale.trailing_zeros()).then_some(first)
    }

    /// The images `{s n + c}` and `{s' n + c'}` meet iff `gcd(s, s')`
    /// divides `c' - c`.
    pub fn is_disjoint_from(&self, other: &Affine) -> bool {
        let g = gcd(self.scale, other.scale);
        self.offset.abs_diff(other.offset) % g != 0
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}n+{}", self.scale, self.offset)
    }
}

/// An injection `A × ℕ → ℕ` for `A = {0, …, k-1}`, one affine map per `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InjectionVertex {
    components: Vec<Affine>,
}

impl InjectionVertex {
    /// Checks injectivity: the component images are pairwise disjoint.
    pub fn new(components: Vec<Affine>) -> Result<Self> {
        for (a, x) in components.iter().enumerate() {
            if x.scale == 0 {
                return Err(Error::NotInjective(format!("component {a} is constant")));
            }
            for (b, y) in components.iter().enumerate().skip(a + 1) {
                if !x.is_disjoint_from(y) {
                    return Err(Error::NotInjective(format!(
                        "components {a} ({x}) and {b} ({y}) overlap"
                    )));
                }
            }
        }
        Ok(Self { components })
    }

    /// The point of `𝓔({a})`: `(a, n) ↦ n`.
    pub fn unit() -> Self {
        Self {
            components: vec![Affine::IDENTITY],
        }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Affine] {
        &self.components
    }

    pub fn apply(&self, a: usize, n: u128) -> Result<u128> {
        self.components[a].apply(n)
    }

    /// The common piece of all components, if any.
    pub fn piece(&self) -> Option<u32> {
        let first = self.components.first()?.piece()?;
        self.components
            .iter()
            .all(|c| c.piece() == Some(first))
            .then_some(first)
    }

    /// A vertex of `ℐ(A × ℕ)`: the image lies in a single piece.
    pub fn is_i_vertex(&self) -> bool {
        self.piece().is_some()
    }

    /// A vertex of `𝓔(A)`: the unit when `|A| = 1`, a vertex of
    /// `ℐ(A × ℕ)` when `|A| ≥ 2`. `𝓔(∅)` is not defined.
    pub fn is_e_vertex(&self) -> bool {
        match self.arity() {
            0 => false,
            1 => self.components[0] == Affine::IDENTITY,
            _ => self.is_i_vertex(),
        }
    }

    pub fn is_disjoint_from(&self, other: &InjectionVertex) -> bool {
        self.components
            .iter()
            .all(|x| other.components.iter().all(|y| x.is_disjoint_from(y)))
    }

    /// `(σ·α)_{σ(a)} = α_a`.
    pub fn permuted(&self, sigma: &[usize]) -> InjectionVertex {
        let mut components = self.components.clone();
        for (a, &s) in sigma.iter().enumerate() {
            components[s] = self.components[a];
        }
        InjectionVertex { components }
    }

    /// The values on `A × {0, …, window-1}`, block by block.
    pub fn window_image(&self, window: u128) -> Result<Vec<u128>> {
        let mut out = Vec::new();
        for c in &self.components {
            for n in 0..window {
                out.push(c.apply(n)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for InjectionVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The vertex of `ℐ(A × ℕ)` landing in block `block` of `blocks` equal
/// blocks of `P_piece`: `(a, n) ↦ e_piece(blocks·k·n + block·k + a)`.
pub fn block_vertex(
    arity: usize,
    piece: u32,
    blocks: u128,
    block: u128,
) -> Result<InjectionVertex> {
    let k = arity as u128;
    let p = 1u128
        .checked_shl(piece)
        .ok_or_else(|| overflow("piece index"))?;
    let mut comps = Vec::with_capacity(arity);
    for a in 0..k {
        let scale = p
            .checked_mul(2)
            .and_then(|v| v.checked_mul(blocks))
            .and_then(|v| v.checked_mul(k))
            .ok_or_else(|| overflow("vertex scale"))?;
        let offset = piece_element(piece, block * k + a)?;
        comps.push(Affine::new(scale, offset)?);
    }
    InjectionVertex::new(comps)
}

/// Do the vertices span a simplex (pairwise disjoint images)?
pub fn is_simplex(vertices: &[InjectionVertex]) -> Result<bool> {
    if let Some(v) = vertices.iter().find(|v| v.arity() != vertices[0].arity()) {
        return Err(Error::ParameterMismatch(format!(
            "vertex {v} has arity {} instead of {}",
            v.arity(),
            vertices[0].arity()
        )));
    }
    for (i, x) in vertices.iter().enumerate() {
        for y in &vertices[i + 1..] {
            if !x.is_disjoint_from(y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A vertex whose image misses every vertex of `k`: the order-preserving
/// enumeration of `P_M`, `M` one more than the largest piece used (`P_1`
/// when `k` is empty).
pub fn cone_vertex(k: &[InjectionVertex], arity: usize) -> Result<InjectionVertex> {
    let mut m = 0u32;
    for v in k {
        for c in v.components() {
            let p = c.piece().ok_or_else(|| {
                Error::ParameterMismatch(format!("component {c} of {v} meets several pieces"))
            })?;
            m = m.max(p);
        }
    }
    block_vertex(arity, m + 1, 1, 0)
}

/// `Σ t_i α_i` with positive weights summing to 1 and pairwise disjoint
/// vertices. Terms are kept sorted by vertex with equal vertices merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexCombination {
    arity: usize,
    terms: Vec<(BigRational, InjectionVertex)>,
}

impl ConvexCombination {
    pub fn new(arity: usize, terms: Vec<(BigRational, InjectionVertex)>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ParameterMismatch(
                "there are no operations of arity 0".into(),
            ));
        }
        let mut merged: BTreeMap<InjectionVertex, BigRational> = BTreeMap::new();
        for (w, v) in terms {
            if v.arity() != arity {
                return Err(Error::ParameterMismatch(format!(
                    "vertex {v} has arity {} instead of {arity}",
                    v.arity()
                )));
            }
            if !w.is_positive() {
                return Err(Error::InvalidSimplexPoint(format!(
                    "weight {w} is not positive"
                )));
            }
            *merged.entry(v).or_insert_with(BigRational::zero) += w;
        }
        let total: BigRational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidSimplexPoint(format!(
                "weights sum to {total}"
            )));
        }
        if let Some(v) = merged.keys().find(|v| !v.is_e_vertex()) {
            return Err(Error::InvalidSimplexPoint(format!(
                "{v} is not a vertex of the operad space of arity {arity}"
            )));
        }
        let vertices: Vec<InjectionVertex> = merged.keys().cloned().collect();
        if !is_simplex(&vertices)? {
            return Err(Error::ImagesOverlap(format!(
                "vertices {} do not have disjoint images",
                vertices
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        Ok(Self {
            arity,
            terms: merged.into_iter().map(|(v, w)| (w, v)).collect(),
        })
    }

    pub fn vertex(v: InjectionVertex) -> Result<Self> {
        Self::new(v.arity(), vec![(BigRational::one(), v)])
    }

    /// The unit of `𝓔({a})`.
    pub fn unit() -> Self {
        Self {
            arity: 1,
            terms: vec![(BigRational::one(), InjectionVertex::unit())],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(BigRational, InjectionVertex)] {
        &self.terms
    }

    pub fn is_vertex(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        Self::new(
            self.arity,
            self.terms
                .iter()
                .map(|(w, v)| (w.clone(), v.permuted(sigma)))
                .collect(),
        )
    }
}

impl fmt::Display for ConvexCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(w, v)| format!("{w}·{v}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The elements of each fibre of `gamma: B → A`, in increasing order.
/// Every fibre must be nonempty.
fn fibres(gamma: &[usize], a_size: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); a_size];
    for (b, &a) in gamma.iter().enumerate() {
        if a >= a_size {
            return Err(Error::OutsideGround {
                element: a,
                size: a_size,
            });
        }
        out[a].push(b);
    }
    if let Some(a) = out.iter().position(Vec::is_empty) {
        return Err(Error::ParameterMismatch(format!(
            "γ is not surjective: nothing maps to {a}"
        )));
    }
    Ok(out)
}

/// `γ*(p_A, (p_a)_a)` for a surjection `γ: B → A` given as `gamma[b] = a`.
///
/// Vertex tuples compose as `(α_{γ(b)} ∘ β_b)_b`; combinations expand over
/// the product of the weight distributions. The result is validated, and a
/// composite that is not a point of `𝓔(B)` is reported as
/// [`Error::NonSimplicialComposite`].
pub fn operad_compose(
    gamma: &[usize],
    p_a: &ConvexCombination,
    family: &[ConvexCombination],
) -> Result<ConvexCombination> {
    let a_size = p_a.arity();
    if family.len() != a_size {
        return Err(Error::WrongLength {
            expected: a_size,
            found: family.len(),
        });
    }
    let fib = fibres(gamma, a_size)?;
    let mut pos = vec![0usize; gamma.len()];
    for f in &fib {
        for (i, &b) in f.iter().enumerate() {
            pos[b] = i;
        }
    }
    for (a, (f, p)) in fib.iter().zip(family).enumerate() {
        if p.arity() != f.len() {
            return Err(Error::ParameterMismatch(format!(
                "fibre over {a} has {} elements but its point has arity {}",
                f.len(),
                p.arity()
            )));
        }
    }
    let mut terms = Vec::new();
    let mut choice = vec![0usize; a_size];
    for (wa, alpha) in p_a.terms() {
        loop {
            let mut w = wa.clone();
            for (a, &j) in choice.iter().enumerate() {
                w *= &family[a].terms()[j].0;
            }
            let comps = gamma
                .iter()
                .enumerate()
                .map(|(b, &a)| {
                    let beta = &family[a].terms()[choice[a]].1;
                    alpha.components()[a].compose(&beta.components()[pos[b]])
                })
                .collect::<Result<Vec<_>>>()?;
            let v = InjectionVertex::new(comps).map_err(|e| {
                Error::NonSimplicialComposite(format!("composite is not injective: {e}"))
            })?;
            terms.push((w, v));
            let mut a = a_size;
            let mut done = true;
            while a > 0 {
                a -= 1;
                choice[a] += 1;
                if choice[a] < family[a].terms().len() {
                    done = false;
                    break;
                }
                choice[a] = 0;
            }
            if done {
                break;
            }
        }
    }
    ConvexCombination::new(gamma.len(), terms)
        .map_err(|e| Error::NonSimplicialComposite(e.to_string()))
}

/// Outcome of comparing two sides of a law that may be undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Comparison {
    Equal,
    Unequal,
    BothUndefined,
    OneUndefined,
}

/// Brute-force simplex check on a window.
fn window_disjoint(p: &ConvexCombination, window: u128) -> Result<bool> {
    let mut seen = std::collections::BTreeSet::new();
    for (_, v) in p.terms() {
        for x in v.window_image(window)? {
            if !seen.insert(x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn compare<T: PartialEq>(x: Result<T>, y: Result<T>) -> Result<Comparison> {
    let defined = |r: &Result<T>| -> Result<bool> {
        match r {
            Ok(_) => Ok(true),
            Err(Error::NonSimplicialComposite(_)) => Ok(false),
            Err(e) => Err(e.clone()),
        }
    };
    Ok(match (defined(&x)?, defined(&y)?) {
        (true, true) => {
            if x.ok() == y.ok() {
                Comparison::Equal
            } else {
                Comparison::Unequal
            }
        }
        (false, false) => Comparison::BothUndefined,
        _ => Comparison::OneUndefined,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LawTally {
    pub checked: usize,
    pub undefined: usize,
    pub definedness_mismatches: usize,
    pub violations: usize,
}

impl LawTally {
    fn record(&mut self, c: Comparison, what: &str, failures: &mut Vec<String>) {
        match c {
            Comparison::Equal => self.checked += 1,
            Comparison::BothUndefined => self.undefined += 1,
            Comparison::Unequal => {
                self.checked += 1;
                self.violations += 1;
                failures.push(format!("unequal: {what}"));
            }
            Comparison::OneUndefined => {
                self.definedness_mismatches += 1;
                failures.push(format!("defined on one side only: {what}"));
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LawsReport {
    pub max_size: usize,
    pub seed: u64,
    pub draws: usize,
    pub window: u128,
    /// Defined results whose vertex images meet on the window.
    pub window_violations: usize,
    pub unit_left: LawTally,
    pub unit_right: LawTally,
    pub associativity: LawTally,
    pub equivariance: LawTally,
    /// Composites with a non-vertex family point that fail validation.
    pub non_simplicial_composites: usize,
    pub failures: Vec<String>,
}

impl LawsReport {
    pub fn is_clean(&self) -> bool {
        [
            &self.unit_left,
            &self.unit_right,
            &self.associativity,
            &self.equivariance,
        ]
        .iter()
        .all(|t| t.violations == 0 && t.definedness_mismatches == 0)
            && self.window_violations == 0
    }
}

/// A fixed pool of points of `𝓔(A)` for `|A| = arity`: vertices in distinct
/// pieces and blocks, and two-term combinations.
pub fn point_pool(arity: usize) -> Result<Vec<ConvexCombination>> {
    match arity {
        0 => return Ok(vec![]),
        1 => return Ok(vec![ConvexCombination::unit()]),
        _ => {}
    }
    let third = BigRational::new(1.into(), 3.into());
    let half = BigRational::new(1.into(), 2.into());
    let v = |piece, blocks, block| block_vertex(arity, piece, blocks, block);
    Ok(vec![
        ConvexCombination::vertex(v(1, 1, 0)?)?,
        ConvexCombination::vertex(v(0, 2, 1)?)?,
        ConvexCombination::new(
            arity,
            vec![
                (third.clone(), v(2, 2, 0)?),
                (BigRational::one() - third, v(2, 2, 1)?),
            ],
        )?,
        ConvexCombination::new(
            arity,
            vec![(half.clone(), v(1, 1, 0)?), (half, v(3, 1, 0)?)],
        )?,
    ])
}

fn all_surjections(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..from {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..to).map(move |a| {
                    let mut m = m.clone();
                    m.push(a);
                    m
                })
            })
            .collect();
    }
    out.retain(|m| (0..to).all(|a| m.contains(&a)));
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every choice of one element from each pool.
fn tuples<T: Clone>(pools: &[&[T]]) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for pool in pools {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, pool: &'a [T]) -> &'a T {
    pool.choose(rng).expect("nonempty pool")
}

/// Checks the unit, associativity and equivariance laws over every pair of
/// surjections `C → B → A` with `|A|, |B|, |C| ≤ max_size`. Points of
/// `𝓔(A)` and of the fibres over `A` run through all of [`point_pool`];
/// points over the fibres of `C → B` are drawn `draws` times by a seeded
/// generator.
///
/// Every defined result is also checked against a brute-force oracle: its
/// vertices have pairwise disjoint images on `A × {0, …, window-1}`.
pub fn check_operad_laws(
    max_size: usize,
    seed: u64,
    draws: usize,
    window: u128,
) -> Result<LawsReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LawsReport {
        max_size,
        seed,
        draws,
        window,
        ..Default::default()
    };
    let mut window_violations = 0usize;
    let mut compare =
        |x: Result<ConvexCombination>, y: Result<ConvexCombination>| -> Result<Comparison> {
            for p in [&x, &y].into_iter().flatten() {
                if !window_disjoint(p, window)? {
                    window_violations += 1;
                }
            }
            compare(x, y)
        };
    let pools: Vec<Vec<ConvexCombination>> =
        (0..=max_size).map(point_pool).collect::<Result<_>>()?;
    let mut failures = Vec::new();

    for k in 1..=max_size {
        for x in &pools[k] {
            let id: Vec<usize> = (0..k).collect();
            let units = vec![ConvexCombination::unit(); k];
            let c = compare(operad_compose(&id, x, &units), Ok(x.clone()))?;
            report
                .unit_left
                .record(c, &format!("id*({x}, 1, …, 1)"), &mut failures);
            let to_point = vec![0usize; k];
            let c = compare(
                operad_compose(
                    &to_point,
                    &ConvexCombination::unit(),
                    std::slice::from_ref(x),
                ),
                Ok(x.clone()),
            )?;
            report
                .unit_right
                .record(c, &format!("π*(1, {x})"), &mut failures);
        }
    }

    for a_size in 1..=max_size {
        for b_size in 1..=max_size {
            for gamma in all_surjections(b_size, a_size) {
                let fib = fibres(&gamma, a_size)?;
                let family_pools: Vec<&[ConvexCombination]> =
                    fib.iter().map(|f| pools[f.len()].as_slice()).collect();
                for (p_a, fam) in pools[a_size]
                    .iter()
                    .flat_map(|p| tuples(&family_pools).into_iter().map(move |f| (p, f)))
                {
                    // equivariance over fibre-preserving permutations of B
                    for sigma in permutations(b_size) {
                        let Some(sigma_a) = induced_permutation(&gamma, &sigma, a_size) else {
                            continue;
                        };
                        let lhs =
                            operad_compose(&gamma, p_a, &fam).and_then(|p| p.permuted(&sigma));
                        let moved_a = p_a.permuted(&sigma_a)?;
                        let mut moved_fam = fam.clone();
                        for (a, f) in fib.iter().enumerate() {
                            let target = sigma_a[a];
                            let local: Vec<usize> = f
                                .iter()
                                .map(|&b| {
                                    fib[target]
                                        .iter()
                                        .position(|&x| x == sigma[b])
                                        .expect("fibre preserved")
                                })
                                .collect();
                            moved_fam[target] = fam[a].permuted(&local)?;
                        }
                        let rhs = operad_compose(&gamma, &moved_a, &moved_fam);
                        let c = compare(lhs, rhs)?;
                        report.equivariance.record(
                            c,
                            &format!("γ={gamma:?} σ={sigma:?} p_A={p_a}"),
                            &mut failures,
                        );
                    }

                    for c_size in 1..=max_size {
                        for (tau, _) in all_surjections(c_size, b_size)
                            .into_iter()
                            .flat_map(|t| (0..draws).map(move |k| (t.clone(), k)))
                        {
                            let fib_tau = fibres(&tau, b_size)?;
                            let fam_c: Vec<ConvexCombination> = fib_tau
                                .iter()
                                .map(|f| pick(&mut rng, &pools[f.len()]).clone())
                                .collect();
                            let c = compare(
                                associativity_lhs(&gamma, &tau, p_a, &fam, &fam_c),
                                operad_compose(&gamma, p_a, &fam)
                                    .and_then(|mid| operad_compose(&tau, &mid, &fam_c)),
                            )?;
                            report.associativity.record(
                                c,
                                &format!("γ={gamma:?} τ={tau:?} p_A={p_a}"),
                                &mut failures,
                            );
                        }
                    }
                }
            }
        }
    }
    report.non_simplicial_composites = report.unit_left.undefined
        + report.unit_right.undefined
        + report.associativity.undefined
        + report.equivariance.undefined;
    failures.truncate(50);
    report.failures = failures;
    report.window_violations = window_violations;
    Ok(report)
}

/// `σ_A` with `γ ∘ σ = σ_A ∘ γ`, when `σ` preserves the fibres of the
/// surjection `γ`.
fn induced_permutation(gamma: &[usize], sigma: &[usize], a_size: usize) -> Option<Vec<usize>> {
    let mut sa: Vec<Option<usize>> = vec![None; a_size];
    for (b, &a) in gamma.iter().enumerate() {
        let target = gamma[sigma[b]];
        match sa[a] {
            None => sa[a] = Some(target),
            Some(t) if t != target => return None,
            _ => {}
        }
    }
    sa.into_iter().collect()
}

/// `(γτ)*(p_A, (τ_a*(p_a, (p_b)_{b ∈ γ⁻¹(a)}))_a)`.
fn associativity_lhs(
    gamma: &[usize],
    tau: &[usize],
    p_a: &ConvexCombination,
    fam_b: &[ConvexCombination],
    fam_c: &[ConvexCombination],
) -> Result<ConvexCombination> {
    let a_size = p_a.arity();
    let fib_g = fibres(gamma, a_size)?;
    let composite: Vec<usize> = tau.iter().map(|&b| gamma[b]).collect();
    let fib_gt = fibres(&composite, a_size)?;
    let mut inner = Vec::with_capacity(a_size);
    for a in 0..a_size {
        // τ_a : (γτ)⁻¹(a) → γ⁻¹(a), both listed in increasing order
        let tau_a: Vec<usize> = fib_gt[a]
            .iter()
            .map(|&c| {
                fib_g[a]
                    .iter()
                    .position(|&b| b == tau[c])
                    .expect("τ maps into the fibre")
            })
            .collect();
        let fam: Vec<ConvexCombination> = fib_g[a].iter().map(|&b| fam_c[b].clone()).collect();
        inner.push(operad_compose(&tau_a, &fam_b[a], &fam)?);
    }
    operad_compose(&composite, p_a, &inner)
}

/// `μ_A(p, (Φ_a)_a)`: the direct sum of the inputs on `A × ℕ`, slid along
/// the vertices of `p` with its weights.
pub fn operad_act(p: &ConvexCombination, inputs: &[RationalVector]) -> Result<RationalVector> {
    if inputs.len() != p.arity() {
        return Err(Error::WrongLength {
            expected: p.arity(),
            found: inputs.len(),
        });
    }
    let (sum, elements) = direct_sum_blocks(inputs)?;
    let mut maps = Vec::with_capacity(p.terms().len());
    for (_, v) in p.terms() {
        let pairs = elements
            .iter()
            .enumerate()
            .map(|(i, &(a, label))| Ok((i as u128, v.apply(a, label)?)))
            .collect::<Result<Vec<_>>>()?;
        maps.push(Injection::from_pairs(&pairs)?);
    }
    let family = InjectionFamily::new(maps)?;
    let t = SimplexPoint::new(p.terms().iter().map(|(w, _)| w.clone()).collect())?;
    slide(&sum, &family, &t, None)
}

/// Equality as points of the projectivized space: same ground labels and
/// rank, and one nonzero rational `λ` with `y = λ·x`.
pub fn equal_up_to_scale(x: &RationalVector, y: &RationalVector) -> bool {
    if x.rank() != y.rank() {
        return false;
    }
    let sparse = |v: &RationalVector| -> BTreeMap<Vec<u128>, BigRational> {
        v.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, c)| {
                (
                    b.members().iter().map(|&e| v.ground().label(e)).collect(),
                    c.clone(),
                )
            })
            .collect()
    };
    let (sx, sy) = (sparse(x), sparse(y));
    if sx.len() != sy.len() || sx.keys().ne(sy.keys()) {
        return false;
    }
    let mut ratio: Option<BigRational> = None;
    for (k, vx) in &sx {
        let r = &sy[k] / vx;
        match &ratio {
            None => ratio = Some(r),
            Some(r0) if *r0 != r => return false,
            _ => {}
        }
    }
    true
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ActionReport {
    pub seed: u64,
    pub trials: usize,
    pub checked: usize,
    /// Trials whose composite is not a point of `𝓔(B)`.
    pub undefined: usize,
    pub exact_equalities: usize,
    /// Inputs of rank 1 and of rank 2 across checked trials.
    pub input_ranks: [usize; 2],
    pub violations: Vec<String>,
    pub invalid_outputs: usize,
}

impl ActionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.invalid_outputs == 0
    }
}

/// Compares `μ_B(γ*(p_A, (p_a)), Φ)` with `μ_A(p_A, (μ(p_a, Φ|γ⁻¹(a)))_a)`
/// on seeded samples: `|A| ≤ 2`, `|B| ≤ 3`, inputs of rank 1 or 2 on at most
/// three elements, total rank at most 3.
pub fn check_action_compatibility(seed: u64, trials: usize) -> Result<ActionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samplers = [
        OrientedSampler::new(1, 2)?,
        OrientedSampler::new(1, 3)?,
        OrientedSampler::new(2, 3)?,
    ];
    let pools: Vec<Vec<ConvexCombination>> = (0..=3).map(point_pool).collect::<Result<_>>()?;
    let mut report = ActionReport {
        seed,
        trials,
        ..Default::default()
    };
    for _ in 0..trials {
        let a_size = rng.gen_range(1..=2);
        let b_size = rng.gen_range(a_size..=3);
        let mut gamma: Vec<usize> = (0..b_size)
            .map(|b| {
                if b < a_size {
                    b
                } else {
                    rng.gen_range(0..a_size)
                }
            })
            .collect();
        gamma.shuffle(&mut rng);
        let fib = fibres(&gamma, a_size)?;
        let p_a = pick(&mut rng, &pools[a_size]).clone();
        // non-vertex family points are kept only where the composite can exist
        let fam: Vec<ConvexCombination> = fib
            .iter()
            .map(|f| {
                let pool = &pools[f.len()];
                if a_size == 1 {
                    pick(&mut rng, pool).clone()
                } else {
                    let vertices: Vec<&ConvexCombination> =
                        pool.iter().filter(|p| p.is_vertex()).collect();
                    (*vertices.choose(&mut rng).expect("pool has vertices")).clone()
                }
            })
            .collect();
        // total rank at most 3 keeps the slid outputs small
        let mut budget = 3 - b_size;
        let inputs: Vec<RationalVector> = (0..b_size)
            .map(|_| {
                let k = if budget > 0 {
                    rng.gen_range(0..samplers.len())
                } else {
                    rng.gen_range(0..2)
                };
                if k == 2 {
                    budget -= 1;
                }
                samplers[k].sample(&mut rng)
            })
            .collect();
        let composite = match operad_compose(&gamma, &p_a, &fam) {
            Ok(c) => c,
            Err(Error::NonSimplicialComposite(_)) => {
                report.undefined += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let lhs = operad_act(&composite, &inputs)?;
        let inner = fib
            .iter()
            .zip(&fam)
            .map(|(f, p)| {
                let xs: Vec<RationalVector> = f.iter().map(|&b| inputs[b].clone()).collect();
                operad_act(p, &xs)
            })
            .collect::<Result<Vec<_>>>()?;
        let rhs = operad_act(&p_a, &inner)?;
        report.checked += 1;
        for x in &inputs {
            report.input_ranks[x.rank() - 1] += 1;
        }
        if !crate::orval::is_oriented_tropical_plucker(&lhs)
            || !crate::orval::is_oriented_tropical_plucker(&rhs)
        {
            report.invalid_outputs += 1;
        }
        if lhs == rhs {
            report.exact_equalities += 1;
        }
        if !equal_up_to_scale(&lhs, &rhs) {
            report.violations.push(format!("γ={gamma:?} p_A={p_a}"));
        }
    }
    Ok(report)
}

/// The rank-`d` vector on `labels` with every listed basis set to 1.
pub fn indicator(labels: Vec<u128>, rank: usize, bases: &[Vec<usize>]) -> Result<RationalVector> {
    let g = crate::ground::GroundSet::from_labels(labels)?;
    PluckerMap::from_fn(g, rank, |b| {
        if bases.iter().any(|x| x.as_slice() == b.members()) {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::GroundSet;
    use crate::sums_sliding::{direct_sum, pushforward};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn aff(s: u128, c: u128) -> Affine {
        Affine::new(s, c).unwrap()
    }

    #[test]
    fn pieces_partition() {
        let mut seen = BTreeMap::new();
        for i in 0..5u32 {
            for x in 0..40u128 {
                let m = piece_element(i, x).unwrap();
                assert_eq!(piece_of(m).unwrap(), i);
                assert!(seen.insert(m, (i, x)).is_none());
            }
        }
        // e_i is increasing
        assert!(piece_element(2, 3).unwrap() < piece_element(2, 4).unwrap());
        assert!(piece_element(200, 1).is_err());
    }

    #[test]
    fn affine_algebra() {
        let f = aff(4, 1);
        let g = aff(3, 2);
        let fg = f.compose(&g).unwrap();
        for n in 0..20 {
            assert_eq!(fg.apply(n).unwrap(), f.apply(g.apply(n).unwrap()).unwrap());
        }
        assert_eq!(Affine::IDENTITY.compose(&f).unwrap(), f);
        assert!(aff(2, 0).is_disjoint_from(&aff(2, 1)));
        assert!(!aff(2, 0).is_disjoint_from(&aff(3, 0)));
        assert_eq!(aff(4, 1).piece(), Some(1));
        assert_eq!(aff(2, 1).piece(), None);
        assert!(aff(u128::MAX, 0).compose(&aff(2, 0)).is_err());
        // disjointness against brute force on a window
        for (x, y) in [
            (aff(6, 1), aff(4, 3)),
            (aff(6, 1), aff(4, 2)),
            (aff(5, 0), aff(3, 1)),
        ] {
            let ix: Vec<u128> = (0..60).map(|n| x.apply(n).unwrap()).collect();
            let meets = (0..60).any(|n| ix.contains(&y.apply(n).unwrap()));
            assert_eq!(x.is_disjoint_from(&y), !meets);
        }
    }

    #[test]
    fn simplex_examples() {
        let p1 = block_vertex(2, 1, 1, 0).unwrap();
        let p2 = block_vertex(2, 2, 1, 0).unwrap();
        assert!(is_simplex(&[p1.clone(), p2]).unwrap());
        assert!(!is_simplex(&[p1.clone(), p1]).unwrap());
        let blocks: Vec<InjectionVertex> =
            (0..3).map(|j| block_vertex(2, 1, 3, j).unwrap()).collect();
        assert!(is_simplex(&blocks).unwrap());
        for v in &blocks {
            assert!(v.is_i_vertex());
            let img = v.window_image(20).unwrap();
            for w in &blocks {
                if v != w {
                    let other = w.window_image(20).unwrap();
                    assert!(img.iter().all(|x| !other.contains(x)));
                }
            }
        }
        assert!(is_simplex(&[
            block_vertex(2, 1, 1, 0).unwrap(),
            block_vertex(3, 1, 1, 0).unwrap()
        ])
        .is_err());
    }

    #[test]
    fn cone_vertex_examples() {
        let k = vec![
            block_vertex(2, 1, 1, 0).unwrap(),
            block_vertex(2, 2, 1, 0).unwrap(),
        ];
        let beta = cone_vertex(&k, 2).unwrap();
        assert_eq!(beta.piece(), Some(3));
        assert_eq!(cone_vertex(&[], 2).unwrap().piece(), Some(1));
        let mut all = k.clone();
        all.push(beta);
        assert!(is_simplex(&all).unwrap());
    }

    #[test]
    fn unit_laws_examples() {
        let x = &point_pool(2).unwrap()[3];
        let id = operad_compose(
            &[0, 1],
            x,
            &[ConvexCombination::unit(), ConvexCombination::unit()],
        )
        .unwrap();
        assert_eq!(&id, x);
        let pi =
            operad_compose(&[0, 0], &ConvexCombination::unit(), std::slice::from_ref(x)).unwrap();
        assert_eq!(&pi, x);
    }

    #[test]
    fn two_vertex_point_with_vertex_family() {
        let p_a = point_pool(2).unwrap()[3].clone();
        let fam = vec![point_pool(2).unwrap()[0].clone(), ConvexCombination::unit()];
        let out = operad_compose(&[0, 0, 1], &p_a, &fam).unwrap();
        assert_eq!(out.terms().len(), 2);
        assert!(out.terms().iter().all(|(w, _)| *w == q(1, 2)));
    }

    #[test]
    fn product_extension_can_overlap() {
        // two non-vertex family points over a two-element A: tuples differing
        // only in the second fibre agree on the first fibre's components
        let p_a = point_pool(2).unwrap()[0].clone();
        let mixed = point_pool(2).unwrap()[2].clone();
        let r = operad_compose(&[0, 0, 1, 1], &p_a, &[mixed.clone(), mixed]);
        assert!(matches!(r, Err(Error::NonSimplicialComposite(_))));
    }

    #[test]
    fn composition_needs_a_surjection() {
        let p_a = point_pool(2).unwrap()[0].clone();
        let r = operad_compose(
            &[0],
            &p_a,
            &[ConvexCombination::unit(), ConvexCombination::unit()],
        );
        assert!(matches!(r, Err(Error::ParameterMismatch(_))));
        assert!(ConvexCombination::new(0, vec![]).is_err());
    }

    #[test]
    fn laws_small() {
        let report = check_operad_laws(2, 7, 2, 20).unwrap();
        assert!(report.is_clean(), "{:?}", report.failures);
        assert!(report.associativity.checked > 0);
        assert!(report.equivariance.checked > 0);
    }

    #[test]
    fn action_unit_and_vertex() {
        let phi = indicator(vec![0, 1, 2], 1, &[vec![0], vec![2]]).unwrap();
        let out = operad_act(&ConvexCombination::unit(), std::slice::from_ref(&phi)).unwrap();
        assert_eq!(out, phi);

        let x = indicator(vec![0, 1], 1, &[vec![0], vec![1]]).unwrap();
        let y = indicator(vec![0, 1, 2], 2, &[vec![0, 1], vec![1, 2]]).unwrap();
        let v = block_vertex(2, 1, 1, 0).unwrap();
        let out = operad_act(
            &ConvexCombination::vertex(v.clone()).unwrap(),
            &[x.clone(), y.clone()],
        )
        .unwrap();
        assert_eq!(out.rank(), 3);
        let sum = direct_sum(&x, &y).unwrap();
        let pairs: Vec<(u128, u128)> = [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]
            .iter()
            .enumerate()
            .map(|(i, &(a, l))| (i as u128, v.apply(a, l).unwrap()))
            .collect();
        let alpha = Injection::from_pairs(&pairs).unwrap();
        let target = GroundSet::from_labels({
            let mut l: Vec<u128> = pairs.iter().map(|p| p.1).collect();
            l.sort_unstable();
            l
        })
        .unwrap();
        assert_eq!(out, pushforward(&sum, &alpha, &target).unwrap());
    }

    #[test]
    fn scale_equality() {
        let x = indicator(vec![0, 1], 1, &[vec![0], vec![1]]).unwrap();
        let y = x.map(|v| v * q(-3, 2));
        assert!(equal_up_to_scale(&x, &y));
        let z = indicator(vec![0, 1], 1, &[vec![0]]).unwrap();
        assert!(!equal_up_to_scale(&x, &z));
    }

    #[test]
    fn action_compatibility_small() {
        let report = check_action_compatibility(11, 20).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(report.checked > 0);
    }

    #[test]
    fn symmetric_action_is_free_on_vertices() {
        for v in [
            block_vertex(3, 1, 1, 0).unwrap(),
            block_vertex(3, 0, 2, 1).unwrap(),
        ] {
            let images: std::collections::BTreeSet<InjectionVertex> =
                permutations(3).iter().map(|s| v.permuted(s)).collect();
            assert_eq!(images.len(), 6);
        }
    }
}
