//! Index bookkeeping for pairs and triples of `[m]` and small binomials.

/// `C(n, k)` in `u64`; panics on overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(n - i)
            .expect("binomial overflow")
            / (i + 1);
    }
    acc
}

/// Lexicographic ranking of the 2- and 3-subsets of `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indexer {
    m: usize,
    pair_rank: Vec<usize>,
    triples: Vec<[usize; 3]>,
    pairs: Vec<[usize; 2]>,
    triple_rank: Vec<usize>,
}

impl Indexer {
    pub fn new(m: usize) -> Self {
        let mut pairs = Vec::new();
        let mut pair_rank = vec![usize::MAX; m * m];
        for x in 0..m {
            for y in x + 1..m {
                pair_rank[x * m + y] = pairs.len();
                pair_rank[y * m + x] = pairs.len();
                pairs.push([x, y]);
            }
        }
        let mut triples = Vec::new();
        let mut triple_rank = vec![usize::MAX; m * m * m];
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let r = triples.len();
                    for [x, y, z] in permutations3([a, b, c]) {
                        triple_rank[(x * m + y) * m + z] = r;
                    }
                    triples.push([a, b, c]);
                }
            }
        }
        Indexer { m, pair_rank, triples, pairs, triple_rank }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn num_triples(&self) -> usize {
        self.triples.len()
    }

    pub fn pair(&self, x: usize, y: usize) -> usize {
        debug_assert!(x != y && x < self.m && y < self.m);
        self.pair_rank[x * self.m + y]
    }

    /// Rank of the triple `{x, y, z}` in any argument order.
    pub fn triple(&self, x: usize, y: usize, z: usize) -> usize {
        self.triple_rank[(x * self.m + y) * self.m + z]
    }

    pub fn pairs(&self) -> &[[usize; 2]] {
        &self.pairs
    }

    /// Sorted triples in lexicographic order.
    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }
}

fn permutations3([a, b, c]: [usize; 3]) -> [[usize; 3]; 6] {
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

/// All subsets of `0..m` as bitmasks, ordered by popcount then lexicographically
/// by their sorted element lists.
pub fn subsets_by_size(m: usize) -> Vec<u32> {
    assert!(m < 32);
    let mut out: Vec<u32> = (0..(1u32 << m)).collect();
    out.sort_by_key(|&s| (s.count_ones(), sorted_elements(s)));
    out
}

fn sorted_elements(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Elements of a vertex bitmask in increasing order.
pub fn mask_elements(mask: u32) -> impl Iterator<Item = usize> {
    (0..32usize).filter(move |&i| mask >> i & 1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn indexer_ranks_are_consistent() {
        let ix = Indexer::new(6);
        assert_eq!(ix.num_pairs(), 15);
        assert_eq!(ix.num_triples(), 20);
        for (r, &[a, b, c]) in ix.triples().iter().enumerate() {
            assert_eq!(ix.triple(a, b, c), r);
            assert_eq!(ix.triple(c, a, b), r);
        }
        for (r, &[x, y]) in ix.pairs().iter().enumerate() {
            assert_eq!(ix.pair(x, y), r);
            assert_eq!(ix.pair(y, x), r);
        }
        assert_eq!(ix.triples()[0], [0, 1, 2]);
        assert_eq!(ix.triples()[19], [3, 4, 5]);
    }

    #[test]
    fn subset_order() {
        let s = subsets_by_size(3);
        assert_eq!(s, vec![0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]);
    }
}
