//! Finite posets and their order complexes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partial order on `0..len`, stored as its full comparison matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Validates reflexivity, antisymmetry and transitivity.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::ParameterMismatch(format!(
                "relation matrix must be {n}x{n}"
            )));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::Parse(format!("relation is not reflexive at {a}")));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Parse(format!(
                        "relation is not antisymmetric at ({a},{b})"
                    )));
                }
                if leq[a][b] {
                    if let Some(c) = (0..n).find(|&c| leq[b][c] && !leq[a][c]) {
                        return Err(Error::Parse(format!(
                            "relation is not transitive at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Self { names, leq })
    }

    /// The poset on `0..n` with `a ≤ b` iff `le(a, b)`.
    pub fn from_fn(n: usize, mut le: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let leq = (0..n).map(|a| (0..n).map(|b| le(a, b)).collect()).collect();
        Self::new((0..n).map(|i| i.to_string()).collect(), leq)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::WrongLength {
                expected: self.len(),
                found: names.len(),
            });
        }
        self.names = names;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.lt(a, b)))
            .collect()
    }

    /// The unique maximum, if there is one.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|a| self.leq(a, m)))
    }

    /// The induced subposet on `keep`, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> FinitePoset {
        FinitePoset {
            names: keep.iter().map(|&i| self.names[i].clone()).collect(),
            leq: keep
                .iter()
                .map(|&a| keep.iter().map(|&b| self.leq[a][b]).collect())
                .collect(),
        }
    }

    /// The pairs `a < b`, listed by `a` then `b`.
    pub fn strict_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| a != b).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq[a][b])
            .collect()
    }
}

/// A simplicial complex given by all of its faces.
///
/// Faces are sorted vertex lists, ordered by dimension and then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    pub num_vertices: usize,
    pub faces: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// The downward closure of `facets`.
    pub fn from_facets(num_vertices: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let mut faces = std::collections::BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if let Some(&v) = f.iter().find(|&&v| v >= num_vertices) {
                return Err(Error::OutsideGround {
                    element: v,
                    size: num_vertices,
                });
            }
            if f.len() > 63 {
                return Err(Error::GuardExceeded {
                    what: "facet size",
                    size: f.len(),
                    limit: 63,
                });
            }
            for mask in 1u64..(1u64 << f.len()) {
                let sub: Vec<usize> = (0..f.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                faces.insert(sub);
            }
        }
        let mut faces: Vec<Vec<usize>> = faces.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(Self {
            num_vertices,
            faces,
        })
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces.iter().map(|f| f.len() - 1).max()
    }

    /// Faces not contained in a larger face.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let is_sub = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|v| b.binary_search(v).is_ok());
        self.faces
            .iter()
            .filter(|f| !self.faces.iter().any(|g| g.len() > f.len() && is_sub(f, g)))
            .cloned()
            .collect()
    }

    pub fn is_downward_closed(&self) -> bool {
        let set: std::collections::HashSet<&Vec<usize>> = self.faces.iter().collect();
        self.faces.iter().all(|f| {
            f.len() == 1
                || (0..f.len()).all(|i| {
                    let mut g = f.clone();
                    g.remove(i);
                    set.contains(&g)
                })
        })
    }
}

/// Chains of `poset` as simplices, up to `max_dim` when given.
pub fn order_complex(poset: &FinitePoset, max_dim: Option<usize>) -> SimplicialComplex {
    let n = poset.len();
    let cap = max_dim.map_or(usize::MAX, |d| d + 1);
    let mut faces = Vec::new();
    let mut chain = Vec::new();
    // chains are grown upward from their minimum
    fn grow(poset: &FinitePoset, cap: usize, chain: &mut Vec<usize>, faces: &mut Vec<Vec<usize>>) {
        let mut sorted = chain.clone();
        sorted.sort_unstable();
        faces.push(sorted);
        if chain.len() == cap {
            return;
        }
        let top = *chain.last().unwrap();
        for next in 0..poset.len() {
            if poset.lt(top, next) {
                chain.push(next);
                grow(poset, cap, chain, faces);
                chain.pop();
            }
        }
    }
    if cap > 0 {
        for v in 0..n {
            chain.push(v);
            grow(poset, cap, &mut chain, &mut faces);
            chain.pop();
        }
    }
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    SimplicialComplex {
        num_vertices: n,
        faces,
    }
}

pub fn f_vector(k: &SimplicialComplex) -> Vec<usize> {
    let mut f = Vec::new();
    for face in &k.faces {
        let d = face.len() - 1;
        if f.len() <= d {
            f.resize(d + 1, 0);
        }
        f[d] += 1;
    }
    f
}

pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    f_vector(k)
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// The poset indexing the cover of the cell complex by open stars of
/// cells; its nerve is the order complex of the cell poset itself.
pub fn good_cover_nerve_data(cells: &crate::orval::OrientedCellPoset) -> FinitePoset {
    cells.poset.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_count_brute(p: &FinitePoset) -> usize {
        let n = p.len();
        (1u32..(1 << n))
            .filter(|mask| {
                let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                s.iter()
                    .all(|&a| s.iter().all(|&b| p.leq(a, b) || p.leq(b, a)))
            })
            .count()
    }

    #[test]
    fn two_chain_is_an_edge() {
        let p = FinitePoset::from_fn(2, |a, b| a <= b).unwrap();
        let k = order_complex(&p, None);
        assert_eq!(f_vector(&k), vec![2, 1]);
        assert_eq!(k.facets(), vec![vec![0, 1]]);
    }

    #[test]
    fn antichain() {
        let p = FinitePoset::from_fn(3, |a, b| a == b).unwrap();
        let k = order_complex(&p, None);
        assert_eq!(f_vector(&k), vec![3]);
        assert_eq!(euler_characteristic(&k), 3);
    }

    #[test]
    fn triangle_boundary_subdivides_to_hexagon() {
        // vertices 0,1,2 and edges 3={0,1}, 4={0,2}, 5={1,2}
        let faces: [&[usize]; 6] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]];
        let p =
            FinitePoset::from_fn(6, |a, b| faces[a].iter().all(|v| faces[b].contains(v))).unwrap();
        let k = order_complex(&p, None);
        assert_eq!(f_vector(&k), vec![6, 6]);
        assert_eq!(euler_characteristic(&k), 0);
    }

    #[test]
    fn single_vertex_and_empty() {
        let p = FinitePoset::from_fn(1, |_, _| true).unwrap();
        assert_eq!(euler_characteristic(&order_complex(&p, None)), 1);
        let e = FinitePoset::from_fn(0, |_, _| true).unwrap();
        assert!(order_complex(&e, None).faces.is_empty());
    }

    #[test]
    fn rejects_non_posets() {
        assert!(FinitePoset::from_fn(2, |a, b| a != b || a == b).is_err());
        assert!(FinitePoset::from_fn(2, |a, b| a < b).is_err());
        let leq = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(FinitePoset::new(vec!["a".into(), "b".into(), "c".into()], leq).is_err());
    }

    #[test]
    fn chains_match_brute_force() {
        // divisibility on 1..=12
        let p = FinitePoset::from_fn(12, |a, b| (b + 1) % (a + 1) == 0).unwrap();
        let k = order_complex(&p, None);
        assert_eq!(k.faces.len(), chain_count_brute(&p));
        assert!(k.is_downward_closed());
        assert_eq!(SimplicialComplex::from_facets(12, &k.facets()).unwrap(), k);
        // a maximum makes the complex a cone
        let q = FinitePoset::from_fn(13, |a, b| {
            b == 12 || (a < 12 && b < 12 && (b + 1) % (a + 1) == 0)
        })
        .unwrap();
        assert_eq!(q.maximum(), Some(12));
        assert_eq!(euler_characteristic(&order_complex(&q, None)), 1);
    }

    #[test]
    fn dimension_cap() {
        let p = FinitePoset::from_fn(4, |a, b| a <= b).unwrap();
        assert_eq!(f_vector(&order_complex(&p, Some(1))), vec![4, 6]);
        assert_eq!(f_vector(&order_complex(&p, None)), vec![4, 6, 4, 1]);
    }
}
