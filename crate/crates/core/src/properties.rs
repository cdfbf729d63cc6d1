//! Property tests spanning several modules.

use std::collections::BTreeSet;

use num::{BigRational, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complexes::{euler_characteristic, f_vector, order_complex, FinitePoset};
use crate::ground::{GroundSet, PluckerMap, Sign};
use crate::matroid::{enumerate_matroids, is_matroid, specializes, uniform};
use crate::operad::{
    block_vertex, cone_vertex, is_simplex, operad_act, point_pool, InjectionVertex,
};
use crate::oriented::{
    chirotope_specializes, enumerate_oriented_matroids, i_max,
    initial_datum_compatible_with_chirotope, is_chirotope, Chirotope, DEFAULT_CHIROTOPE_GUARD,
};
use crate::orval::{
    cell_of_oriented, is_compatible, is_oriented_tropical_plucker, oriented_cell_poset, split,
    RationalVector,
};
use crate::sampling::OrientedSampler;
use crate::sums_sliding::direct_sum;
use crate::valuated::{
    cell_of, enumerate_dressian_cells, is_tropical_plucker, underlying_matroid, TropicalValue,
    TropicalVector,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn sample(d: usize, n: usize, seed: u64) -> RationalVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    OrientedSampler::new(d, n).unwrap().sample(&mut rng)
}

fn tropical(n: usize, d: usize, vals: &[Option<i64>]) -> TropicalVector {
    PluckerMap::new(
        GroundSet::range(n).unwrap(),
        d,
        vals.iter()
            .map(|v| v.map_or(TropicalValue::Infinite, TropicalValue::int))
            .collect(),
    )
    .unwrap()
}

/// `χ ∘ π` on sorted bases.
fn relabeled(chi: &PluckerMap<Sign>, perm: &[usize]) -> PluckerMap<Sign> {
    PluckerMap::from_fn(chi.ground().clone(), chi.rank(), |b| {
        let t: Vec<usize> = b.members().iter().map(|&e| perm[e]).collect();
        chi.alternating_eval(&t).unwrap()
    })
    .unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut x = p.clone();
            x.insert(i, n - 1);
            out.push(x);
        }
    }
    out
}

#[test]
fn uniform_is_below_every_matroid() {
    for (d, n) in [(1, 3), (2, 4), (2, 5)] {
        let u = uniform(d, GroundSet::range(n).unwrap()).unwrap();
        for p in enumerate_matroids(d, n, 20).unwrap() {
            assert!(specializes(&u, &p).unwrap());
        }
    }
}

#[test]
fn chirotope_axioms_are_symmetric_exhaustive_rank_one() {
    let macp = enumerate_oriented_matroids(1, 3, DEFAULT_CHIROTOPE_GUARD).unwrap();
    for c in &macp.classes {
        let chi = c.representative().signs();
        assert!(is_chirotope(&chi.map(|s| -s)).unwrap());
        for p in permutations(3) {
            assert!(is_chirotope(&relabeled(chi, &p)).unwrap());
        }
    }
}

#[test]
fn oriented_specialization_is_a_partial_order() {
    let macp = enumerate_oriented_matroids(2, 4, DEFAULT_CHIROTOPE_GUARD).unwrap();
    // FinitePoset::new checks all three axioms
    assert!(FinitePoset::new(macp.poset.names().to_vec(), macp.poset.matrix().to_vec()).is_ok());
}

#[test]
fn i_max_is_the_largest_compatible_datum() {
    let cells = enumerate_dressian_cells(2, 4, 20).unwrap();
    let macp = enumerate_oriented_matroids(2, 4, DEFAULT_CHIROTOPE_GUARD).unwrap();
    for c in &macp.classes {
        let chi = c.representative();
        let top = i_max(chi);
        assert!(initial_datum_compatible_with_chirotope(&top, chi).unwrap());
        for cell in cells
            .iter()
            .filter(|x| x.id.matroid == chi.underlying_matroid())
        {
            if initial_datum_compatible_with_chirotope(&cell.id.datum, chi).unwrap() {
                assert!(cell.id.datum.is_subset_of(&top));
            }
        }
    }
}

#[test]
fn downward_inheritance_fails_across_supports() {
    // χ = 0+--+- specializes to τ = 00000-; the datum of τ's only cell has
    // full sets on the pairs where every term of τ is ∞, which χ's matroid
    // cannot realize.
    let g = GroundSet::range(4).unwrap();
    let chi = Chirotope::from_signs(g.clone(), 2, vec![0, 1, -1, -1, 1, -1]).unwrap();
    let tau = Chirotope::from_signs(g, 2, vec![0, 0, 0, 0, 0, -1]).unwrap();
    assert!(chirotope_specializes(chi.signs(), tau.signs()).unwrap());
    let datum = i_max(&tau);
    assert!(initial_datum_compatible_with_chirotope(&datum, &tau).unwrap());
    assert!(!matches!(
        initial_datum_compatible_with_chirotope(&datum, &chi),
        Ok(true)
    ));
}

#[test]
fn negation_keeps_the_cell_and_flips_the_signs() {
    let (cells, _) = oriented_cell_poset(2, 4, DEFAULT_CHIROTOPE_GUARD).unwrap();
    for (id, w) in cells.cells.iter().zip(&cells.witnesses) {
        let neg = w.map(|x| crate::ground::AlternatingValue::negate(x));
        assert_eq!(&cell_of_oriented(&neg).unwrap(), id);
        assert_ne!(split(&neg).unwrap().1, split(w).unwrap().1);
    }
}

#[test]
fn compatibility_is_constant_on_cells() {
    let cells = enumerate_dressian_cells(2, 4, 20).unwrap();
    let macp = enumerate_oriented_matroids(2, 4, DEFAULT_CHIROTOPE_GUARD).unwrap();
    for cell in &cells {
        // 3φ + 1 lies in the same open cone
        let other = cell.witness.map(|v| {
            v.as_finite().map_or(TropicalValue::Infinite, |x| {
                TropicalValue::finite(x * q(3, 1) + q(1, 1))
            })
        });
        assert_eq!(cell_of(&other).unwrap(), cell.id);
        for c in &macp.classes {
            for chi in [
                c.representative().signs().clone(),
                c.representative().negated().signs().clone(),
            ] {
                assert_eq!(
                    is_compatible(&cell.witness, &chi).unwrap(),
                    is_compatible(&other, &chi).unwrap()
                );
            }
        }
    }
}

#[test]
fn fibre_complexes_with_a_maximum_are_cones() {
    let (cells, macp) = oriented_cell_poset(2, 4, DEFAULT_CHIROTOPE_GUARD).unwrap();
    for k in 0..macp.classes.len() {
        let fibre: Vec<usize> = (0..cells.cells.len())
            .filter(|&c| macp.index_of(&cells.cells[c].om) == Some(k))
            .collect();
        let sub = cells.poset.restrict(&fibre);
        assert!(sub.maximum().is_some());
        assert_eq!(euler_characteristic(&order_complex(&sub, None)), 1);
    }
}

#[test]
fn direct_sum_structure() {
    let a = sample(1, 2, 1);
    let b = sample(2, 3, 2);
    let c = sample(1, 3, 3);
    let left = direct_sum(&direct_sum(&a, &b).unwrap(), &c).unwrap();
    let right = direct_sum(&a, &direct_sum(&b, &c).unwrap()).unwrap();
    assert_eq!(left, right);
    let ab = direct_sum(&a, &b).unwrap();
    assert!(is_chirotope(&split(&ab).unwrap().1).unwrap());
    // the support is the product of the supports
    let support = |v: &RationalVector, shift: usize| -> BTreeSet<Vec<usize>> {
        v.iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(bs, _)| bs.members().iter().map(|&e| e + shift).collect())
            .collect()
    };
    let expected: BTreeSet<Vec<usize>> = support(&a, 0)
        .iter()
        .flat_map(|x| {
            support(&b, 2)
                .into_iter()
                .map(move |y| [x.clone(), y].concat())
        })
        .collect();
    assert_eq!(support(&ab, 0), expected);
}

#[test]
fn cone_vertex_extends_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    use rand::Rng;
    for _ in 0..50 {
        let arity = rng.gen_range(2..=3);
        let k: Vec<InjectionVertex> = (0..rng.gen_range(0..5))
            .map(|_| {
                let blocks = rng.gen_range(1..=3);
                block_vertex(arity, rng.gen_range(0..4), blocks, rng.gen_range(0..blocks)).unwrap()
            })
            .collect();
        let beta = cone_vertex(&k, arity).unwrap();
        for v in &k {
            assert!(is_simplex(&[v.clone(), beta.clone()]).unwrap());
        }
    }
}

#[test]
fn action_outputs_are_oriented_valuated() {
    for (i, p) in point_pool(2).unwrap().iter().enumerate() {
        let x = sample(1, 2, i as u64);
        let y = sample(1, 3, 10 + i as u64);
        let out = operad_act(p, &[x, y]).unwrap();
        assert!(is_oriented_tropical_plucker(&out));
    }
}

fn poset_strategy() -> impl Strategy<Value = FinitePoset> {
    (1usize..=9, proptest::collection::vec(any::<bool>(), 36)).prop_map(|(n, bits)| {
        let mut leq = vec![vec![false; n]; n];
        let mut k = 0;
        for a in 0..n {
            leq[a][a] = true;
            for b in a + 1..n {
                leq[a][b] = bits[k % bits.len()];
                k += 1;
            }
        }
        for m in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a][m] && leq[m][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        FinitePoset::new((0..n).map(|i| i.to_string()).collect(), leq).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_count_matches_f_vector(p in poset_strategy()) {
        let n = p.len();
        let chains = (1u32..(1 << n))
            .filter(|mask| {
                let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                s.iter().all(|&a| s.iter().all(|&b| p.leq(a, b) || p.leq(b, a)))
            })
            .count();
        prop_assert_eq!(f_vector(&order_complex(&p, None)).iter().sum::<usize>(), chains);
    }

    #[test]
    fn adding_a_maximum_makes_a_cone(p in poset_strategy()) {
        let n = p.len();
        let q = FinitePoset::from_fn(n + 1, |a, b| b == n || (a < n && b < n && p.leq(a, b))).unwrap();
        prop_assert_eq!(euler_characteristic(&order_complex(&q, None)), 1);
    }

    #[test]
    fn tropical_plucker_has_a_matroid_support(vals in proptest::collection::vec(proptest::option::weighted(0.7, 0i64..4), 6)) {
        let phi = tropical(4, 2, &vals);
        if is_tropical_plucker(&phi) {
            let m = underlying_matroid(&phi).unwrap();
            prop_assert!(is_matroid(m.vector()).unwrap());
        }
    }

    #[test]
    fn cells_are_translation_invariant(vals in proptest::collection::vec(proptest::option::weighted(0.8, -3i64..4), 6), shift in -5i64..5) {
        let phi = tropical(4, 2, &vals);
        prop_assume!(is_tropical_plucker(&phi));
        let moved = phi.map(|v| v.shifted(&q(shift, 2)));
        prop_assert_eq!(cell_of(&phi).unwrap(), cell_of(&moved).unwrap());
    }

    #[test]
    fn chirotope_symmetry_rank_two(signs in proptest::collection::vec(-1i8..=1, 6), perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        prop_assume!(signs.iter().any(|&s| s != 0));
        let chi = PluckerMap::new(GroundSet::range(4).unwrap(), 2, signs).unwrap();
        let verdict = is_chirotope(&chi).unwrap();
        prop_assert_eq!(is_chirotope(&chi.map(|s| -s)).unwrap(), verdict);
        prop_assert_eq!(is_chirotope(&relabeled(&chi, &perm)).unwrap(), verdict);
    }

    #[test]
    fn scaling_preserves_oriented_predicates(seed in 0u64..1000, num in 1i64..7, den in 1i64..7, neg in any::<bool>()) {
        let phi = sample(2, 4, seed);
        let lambda = q(if neg { -num } else { num }, den);
        let scaled = phi.map(|x| x * &lambda);
        prop_assert_eq!(is_oriented_tropical_plucker(&scaled), is_oriented_tropical_plucker(&phi));
        prop_assert_eq!(cell_of_oriented(&scaled).unwrap(), cell_of_oriented(&phi).unwrap());
    }

    #[test]
    fn unit_is_neutral(seed in 0u64..1000) {
        let phi = sample(2, 3, seed);
        let unit = crate::sums_sliding::rank_zero_unit::<BigRational>();
        prop_assert_eq!(direct_sum(&unit, &phi).unwrap(), phi.clone());
        prop_assert_eq!(direct_sum(&phi, &unit).unwrap(), phi);
    }

    #[test]
    fn operad_vertices_have_free_symmetric_action(piece in 0u32..4, blocks in 1u128..4) {
        let v = block_vertex(3, piece, blocks, blocks - 1).unwrap();
        let images: BTreeSet<InjectionVertex> = permutations(3).iter().map(|s| v.permuted(s)).collect();
        prop_assert_eq!(images.len(), 6);
    }
}
