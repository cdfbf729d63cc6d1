//! Seeded generators for the randomized checks.

use num::{BigRational, One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::ground::{GroundSet, PluckerMap, Sign};
use crate::oriented::{enumerate_oriented_matroids, Chirotope, DEFAULT_CHIROTOPE_GUARD};
use crate::orval::{
    is_oriented_tropical_plucker, OrientedTropicalVector, RationalVector, SignedTropical,
};
use crate::sums_sliding::{Injection, InjectionFamily, SimplexPoint};
use crate::valuated::TropicalValue;

/// Draws rational vectors satisfying the oriented tropical Plücker
/// relations with a fixed rank and ground size.
#[derive(Clone, Debug)]
pub struct OrientedSampler {
    chirotopes: Vec<Chirotope>,
}

impl OrientedSampler {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        let macp = enumerate_oriented_matroids(d, n, DEFAULT_CHIROTOPE_GUARD)?;
        let chirotopes = macp
            .classes
            .iter()
            .flat_map(|c| [c.representative().clone(), c.representative().negated()])
            .collect();
        Ok(Self { chirotopes })
    }

    /// A random chirotope with random moduli in `{1, 2, 1/2}` on its support,
    /// resampled until it passes; unit moduli after 20 attempts.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> RationalVector {
        let chi = self.chirotopes.choose(rng).expect("at least one chirotope");
        let moduli = [
            BigRational::one(),
            BigRational::from_integer(2.into()),
            BigRational::new(1.into(), 2.into()),
        ];
        for _ in 0..20 {
            let phi = chi.signs().map(|&s| {
                if s == 0 {
                    BigRational::zero()
                } else {
                    moduli.choose(rng).expect("nonempty") * BigRational::from_integer(s.into())
                }
            });
            if is_oriented_tropical_plucker(&phi) {
                return phi;
            }
        }
        chi.signs().map(|&s| BigRational::from_integer(s.into()))
    }
}

/// Signs and valuations drawn independently; each coordinate is zero
/// with probability `zero_rate`.
pub fn random_signed_tropical<R: Rng>(
    rng: &mut R,
    d: usize,
    n: usize,
    zero_rate: f64,
    max_val: i64,
) -> Result<OrientedTropicalVector> {
    let ground = GroundSet::range(n)?;
    PluckerMap::from_fn(ground, d, |_| {
        if rng.gen_bool(zero_rate) {
            SignedTropical::zero()
        } else {
            let sign: Sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            SignedTropical::new(sign, TropicalValue::int(rng.gen_range(0..=max_val)))
                .expect("nonzero sign, finite value")
        }
    })
}

/// `k` injections of `domain` with pairwise disjoint images in
/// `{0, …, window-1}`; `window` must be at least `k·|domain|`.
pub fn random_injection_family<R: Rng>(
    rng: &mut R,
    domain: &[u128],
    k: usize,
    window: u128,
) -> Result<InjectionFamily> {
    let mut pool: Vec<u128> = (0..window).collect();
    pool.shuffle(rng);
    let mut maps = Vec::with_capacity(k);
    for chunk in pool.chunks(domain.len().max(1)).take(k) {
        let pairs: Vec<(u128, u128)> = domain.iter().copied().zip(chunk.iter().copied()).collect();
        maps.push(Injection::from_pairs(&pairs)?);
    }
    while maps.len() < k {
        maps.push(Injection::from_pairs(&[])?);
    }
    InjectionFamily::new(maps)
}

/// A point of the `(k-1)`-simplex with weights `w_i / Σ w`, `w_i ∈ 1..=max`.
/// With `allow_zero`, weights may also vanish (not all of them).
pub fn random_simplex_point<R: Rng>(
    rng: &mut R,
    k: usize,
    max: i64,
    allow_zero: bool,
) -> Result<SimplexPoint> {
    let lo = if allow_zero { 0 } else { 1 };
    let mut raw: Vec<i64> = (0..k).map(|_| rng.gen_range(lo..=max)).collect();
    if raw.iter().all(|&w| w == 0) {
        raw[0] = 1;
    }
    let total: i64 = raw.iter().sum();
    SimplexPoint::new(
        raw.into_iter()
            .map(|w| BigRational::new(w.into(), total.into()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = OrientedSampler::new(2, 4).unwrap();
        let mut non_unit = 0;
        for _ in 0..30 {
            let phi = s.sample(&mut rng);
            assert!(is_oriented_tropical_plucker(&phi));
            if phi
                .values()
                .iter()
                .any(|v| !v.is_zero() && *v != BigRational::one() && *v != -BigRational::one())
            {
                non_unit += 1;
            }
        }
        assert!(non_unit > 0);
    }

    #[test]
    fn families_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_injection_family(&mut rng, &[0, 1, 2], 3, 12).unwrap();
        assert_eq!(f.len(), 3);
        let t = random_simplex_point(&mut rng, 3, 4, true).unwrap();
        assert_eq!(t.weights().iter().sum::<BigRational>(), BigRational::one());
    }
}
