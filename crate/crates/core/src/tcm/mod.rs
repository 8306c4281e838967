//! Triangular choice multigraphs: for every triple of `[m]` one of its three
//! edges is chosen, and `m_xy` counts how often the pair `xy` was chosen.

mod closed;
mod local;
mod search;

use std::sync::Arc;

use rand::Rng;

use crate::combin::Indexer;
use crate::error::{Error, Result};
use crate::scalar::{power_table, Scalar};

pub use closed::{closed_sets, closure, is_closed, verify_partition, ClosedSetPartition};
pub use local::{is_reassignment_stable, local_search, LocalSearchOptions, LocalSearchResult};
pub use search::{h_exact, h_exact_rational, h_exact_with_powers, HExactOptions, HExactResult};

/// Endpoint positions of each local edge code (`ab`, `ac`, `bc` of a sorted
/// triple `a < b < c`), and the position left out.
const CODE_ENDS: [([usize; 2], usize); 3] = [([0, 1], 2), ([0, 2], 1), ([1, 2], 0)];

#[derive(Debug, Clone)]
pub struct Tcm {
    idx: Arc<Indexer>,
    chosen: Vec<u8>,
    mult: Vec<u32>,
}

impl PartialEq for Tcm {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m() && self.chosen == other.chosen
    }
}

impl Eq for Tcm {}

impl Tcm {
    /// The TCM choosing the lexicographically first edge `ab` of every triple.
    pub fn lexicographic_first(m: usize) -> Self {
        Self::from_codes(m, vec![0; Indexer::new(m).num_triples()])
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let t = Indexer::new(m).num_triples();
        Self::from_codes(m, (0..t).map(|_| rng.gen_range(0..3u8)).collect())
    }

    /// Builds a TCM from a rule giving the chosen edge of each sorted triple.
    pub fn from_fn(m: usize, mut edge: impl FnMut([usize; 3]) -> [usize; 2]) -> Result<Self> {
        let idx = Indexer::new(m);
        let mut codes = Vec::with_capacity(idx.num_triples());
        for &t in idx.triples() {
            let e = edge(t);
            codes.push(edge_code(t, e).ok_or_else(|| {
                Error::Parse(format!("edge {e:?} is not inside triple {t:?}"))
            })?);
        }
        Ok(Self::from_codes(m, codes))
    }

    /// `codes[t]` is 0, 1 or 2 for the edges `ab`, `ac`, `bc` of the `t`-th sorted triple.
    pub fn from_codes(m: usize, codes: Vec<u8>) -> Self {
        Self::from_codes_with(Arc::new(Indexer::new(m)), codes)
    }

    pub(crate) fn from_codes_with(idx: Arc<Indexer>, codes: Vec<u8>) -> Self {
        assert_eq!(codes.len(), idx.num_triples());
        let mut g = Tcm { mult: vec![0; idx.num_pairs()], chosen: codes, idx };
        g.mult = g.recount();
        g
    }

    pub fn m(&self) -> usize {
        self.idx.m()
    }

    pub fn indexer(&self) -> &Indexer {
        &self.idx
    }

    pub(crate) fn shared_indexer(&self) -> Arc<Indexer> {
        Arc::clone(&self.idx)
    }

    pub fn codes(&self) -> &[u8] {
        &self.chosen
    }

    /// Chosen edge of the `t`-th triple, as a sorted pair.
    pub fn chosen_edge(&self, t: usize) -> [usize; 2] {
        let tri = self.idx.triples()[t];
        let ([i, j], _) = CODE_ENDS[self.chosen[t] as usize];
        [tri[i], tri[j]]
    }

    /// Vertex of the `t`-th triple not on its chosen edge.
    pub fn apex(&self, t: usize) -> usize {
        self.idx.triples()[t][CODE_ENDS[self.chosen[t] as usize].1]
    }

    pub fn edge_of(&self, x: usize, y: usize, z: usize) -> [usize; 2] {
        self.chosen_edge(self.idx.triple(x, y, z))
    }

    /// Re-chooses the `t`-th triple, keeping multiplicities in sync.
    pub fn set_code(&mut self, t: usize, code: u8) {
        assert!(code < 3);
        let [x, y] = self.chosen_edge(t);
        self.mult[self.idx.pair(x, y)] -= 1;
        self.chosen[t] = code;
        let [x, y] = self.chosen_edge(t);
        self.mult[self.idx.pair(x, y)] += 1;
    }

    /// Re-chooses the `t`-th triple to the edge `e`, which must lie inside it.
    pub fn set_edge(&mut self, t: usize, e: [usize; 2]) {
        let code = edge_code(self.idx.triples()[t], e).expect("edge inside triple");
        self.set_code(t, code);
    }

    pub fn multiplicity(&self, x: usize, y: usize) -> u32 {
        self.mult[self.idx.pair(x, y)]
    }

    /// Multiplicities in lexicographic pair order.
    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    fn recount(&self) -> Vec<u32> {
        let mut mult = vec![0; self.idx.num_pairs()];
        for t in 0..self.chosen.len() {
            let [x, y] = self.chosen_edge(t);
            mult[self.idx.pair(x, y)] += 1;
        }
        mult
    }

    /// Recomputes multiplicities from the triple map and compares with the cache.
    pub fn cache_consistent(&self) -> bool {
        self.recount() == self.mult
    }

    /// `w(G, alpha) = sum over pairs of alpha^{m_xy}`.
    pub fn weight<S: Scalar>(&self, alpha: &S) -> S {
        self.weight_with(&power_table(alpha, self.m().saturating_sub(2)))
    }

    /// Weight against a precomputed table `pow[k]` standing for `alpha^k`.
    pub fn weight_with<S: Scalar>(&self, pow: &[S]) -> S {
        self.mult
            .iter()
            .fold(S::zero(), |acc, &k| acc + pow[k as usize].clone())
    }

    /// `d_j(x)` for `j = 0..=m-2`: pairs through `x` of multiplicity exactly `j`.
    pub fn degree_profile(&self, x: usize) -> Vec<usize> {
        let mut d = vec![0; self.m().saturating_sub(1)];
        for y in (0..self.m()).filter(|&y| y != x) {
            d[self.multiplicity(x, y) as usize] += 1;
        }
        d
    }

    /// The TCM with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Tcm {
        assert_eq!(perm.len(), self.m());
        let inv_edges: Vec<([usize; 3], [usize; 2])> = (0..self.chosen.len())
            .map(|t| {
                let [a, b, c] = self.idx.triples()[t];
                let [x, y] = self.chosen_edge(t);
                ([perm[a], perm[b], perm[c]], [perm[x], perm[y]])
            })
            .collect();
        let mut codes = vec![0; self.chosen.len()];
        for (tri, e) in inv_edges {
            let t = self.idx.triple(tri[0], tri[1], tri[2]);
            codes[t] = edge_code(self.idx.triples()[t], e).expect("relabelled edge");
        }
        Tcm::from_codes_with(self.shared_indexer(), codes)
    }

    /// Restriction to the sorted vertex list `vs`, relabelled `0..vs.len()`.
    pub fn induced(&self, vs: &[usize]) -> Tcm {
        let sub = Indexer::new(vs.len());
        let codes = sub
            .triples()
            .iter()
            .map(|&[a, b, c]| {
                let [x, y] = self.edge_of(vs[a], vs[b], vs[c]);
                let local = |v: usize| vs.iter().position(|&w| w == v).unwrap();
                edge_code([a, b, c], [local(x), local(y)]).unwrap()
            })
            .collect();
        Tcm::from_codes(vs.len(), codes)
    }
}

/// Local code of edge `e` inside the sorted triple `t`.
pub(crate) fn edge_code(t: [usize; 3], e: [usize; 2]) -> Option<u8> {
    let (x, y) = (e[0].min(e[1]), e[0].max(e[1]));
    CODE_ENDS
        .iter()
        .position(|&([i, j], _)| t[i] == x && t[j] == y)
        .map(|c| c as u8)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The five-vertex TCM with `m12 = 3, m13 = m23 = 2, m45 = 3` (0-indexed here).
    pub fn example_five() -> Tcm {
        Tcm::from_fn(5, |t| match t {
            [0, 1, _] => [0, 1],
            [0, 2, 3] | [0, 2, 4] => [0, 2],
            [1, 2, 3] | [1, 2, 4] => [1, 2],
            [_, 3, 4] => [3, 4],
            other => panic!("unexpected triple {other:?}"),
        })
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::example_five;
    use super::*;
    use crate::combin::binomial;
    use num::BigInt;
    use rand::SeedableRng;

    #[test]
    fn small_weights() {
        assert_eq!(Tcm::lexicographic_first(2).weight(&2u64), 1);
        assert_eq!(Tcm::lexicographic_first(1).weight(&2u64), 0);
        for code in 0..3 {
            assert_eq!(Tcm::from_codes(3, vec![code]).weight(&2u64), 4);
            assert_eq!(Tcm::from_codes(3, vec![code]).weight(&5u64), 7);
        }
    }

    #[test]
    fn example_five_weight() {
        let g = example_five();
        assert_eq!(g.multiplicity(0, 1), 3);
        assert_eq!(g.multiplicity(0, 2), 2);
        assert_eq!(g.multiplicity(1, 2), 2);
        assert_eq!(g.multiplicity(3, 4), 3);
        assert_eq!(g.weight(&2u64), 30);
        assert_eq!(g.weight(&BigInt::from(2)), BigInt::from(30));
    }

    #[test]
    fn set_code_keeps_cache() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut g = Tcm::random(7, &mut rng);
        for t in 0..g.codes().len() {
            g.set_code(t, rng.gen_range(0..3));
            assert!(g.cache_consistent());
        }
        let total: u32 = g.multiplicities().iter().sum();
        assert_eq!(total as u64, binomial(7, 3));
        assert!(g.multiplicities().iter().all(|&k| k <= 5));
    }

    #[test]
    fn relabel_preserves_weight_and_multiset() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g = Tcm::random(6, &mut rng);
        let perm = [3, 5, 0, 1, 4, 2];
        let h = g.relabel(&perm);
        assert_eq!(g.weight(&3u64), h.weight(&3u64));
        for x in 0..6 {
            for y in x + 1..6 {
                assert_eq!(g.multiplicity(x, y), h.multiplicity(perm[x], perm[y]));
            }
        }
    }

    #[test]
    fn degree_profile_counts() {
        let g = Tcm::from_codes(3, vec![0]);
        assert_eq!(g.degree_profile(0), vec![1, 1]);
        assert_eq!(g.degree_profile(2), vec![2, 0]);
    }

    #[test]
    fn induced_subgraph() {
        let g = example_five();
        let h = g.induced(&[0, 1, 2]);
        assert_eq!(h.edge_of(0, 1, 2), [0, 1]);
        assert_eq!(g.induced(&[3, 4]).weight(&2u64), 1);
    }
}
