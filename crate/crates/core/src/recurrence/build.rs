//! Explicit 2-recursive TCMs and their split trees.

use serde::Serialize;

use super::table::{power_of_two_index, H2Table};
use crate::scalar::Scalar;
use crate::tcm::Tcm;

/// A recursive bipartition of the consecutive vertices `start..start + len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitTree {
    pub start: usize,
    pub len: usize,
    /// The first `children.0.len` vertices form one side, the rest the other.
    pub children: Option<Box<(SplitTree, SplitTree)>>,
}

impl SplitTree {
    /// Splits `len` vertices by `first_part(n)`, the size of the first side
    /// for a node of `n >= 2` vertices; nodes of size at most 2 become
    /// leaves when `first_part` returns 0 or `n`.
    pub fn build(start: usize, len: usize, first_part: &mut impl FnMut(usize) -> usize) -> SplitTree {
        if len < 2 {
            return SplitTree { start, len, children: None };
        }
        let a = first_part(len);
        if a == 0 || a >= len {
            return SplitTree { start, len, children: None };
        }
        let left = SplitTree::build(start, a, first_part);
        let right = SplitTree::build(start + a, len - a, first_part);
        SplitTree { start, len, children: Some(Box::new((left, right))) }
    }

    pub fn contains(&self, v: usize) -> bool {
        (self.start..self.start + self.len).contains(&v)
    }

    /// Sizes `(a, b)` of the two sides at the root, if split.
    pub fn root_split(&self) -> Option<(usize, usize)> {
        self.children.as_ref().map(|c| (c.0.len, c.1.len))
    }

    /// The edge of `tri` that a 2-recursive TCM with this tree must choose,
    /// or `None` when all three vertices end in one unsplit leaf.
    pub fn forced_edge(&self, tri: [usize; 3]) -> Option<[usize; 2]> {
        let (left, right) = &**self.children.as_ref()?;
        let in_left: Vec<usize> = tri.iter().copied().filter(|&v| left.contains(v)).collect();
        let in_right: Vec<usize> = tri.iter().copied().filter(|&v| right.contains(v)).collect();
        match (in_left.len(), in_right.len()) {
            (3, _) => left.forced_edge(tri),
            (_, 3) => right.forced_edge(tri),
            (2, _) => Some([in_left[0], in_left[1]]),
            _ => Some([in_right[0], in_right[1]]),
        }
    }
}

/// A 2-recursive TCM together with the bipartitions that produced it.
#[derive(Debug, Clone)]
pub struct BuiltTcm {
    pub tcm: Tcm,
    pub tree: SplitTree,
}

/// The construction on `m` vertices: split off the first `2^k` vertices with
/// `k` from the power-of-two rule (`3 + 3` at `m = 6`, halves at `m = 4`),
/// recurse on both sides, and let cross triples choose their same-side edge.
pub fn build_g(m: usize) -> BuiltTcm {
    build_g_with(m, |n| match n {
        2 => 1,
        6 => 3,
        n => 1 << power_of_two_index(n),
    })
}

/// The 2-recursive TCM whose bipartitions are chosen by `first_part`.
pub fn build_g_with(m: usize, mut first_part: impl FnMut(usize) -> usize) -> BuiltTcm {
    let tree = SplitTree::build(0, m, &mut first_part);
    let tcm = tcm_from_tree(m, &tree);
    BuiltTcm { tcm, tree }
}

/// The construction following the first optimal split of every row of a DP
/// table; its weight at the table's `alpha` is `H2(m, alpha)`.
pub fn build_from_table<S: Scalar>(m: usize, table: &H2Table<S>) -> BuiltTcm {
    assert!(m <= table.m_max());
    build_g_with(m, |n| table.row(n).split().map_or(0, |(a, _)| a))
}

fn tcm_from_tree(m: usize, tree: &SplitTree) -> Tcm {
    Tcm::from_fn(m, |tri| {
        // A leaf of size >= 3 is never produced by the builders above; fall
        // back to the first edge so that any tree yields a TCM.
        tree.forced_edge(tri).unwrap_or([tri[0], tri[1]])
    })
    .expect("forced edge lies in its triple")
}

/// Whether `g` is the 2-recursive TCM of `tree`: every triple split by some
/// node chooses the edge on the side holding two of its vertices, and
/// every node of three or more vertices is split.
pub fn verify_two_recursive(g: &Tcm, tree: &SplitTree) -> bool {
    if tree.start != 0 || tree.len != g.m() || !leaves_are_small(tree) {
        return false;
    }
    g.indexer()
        .triples()
        .iter()
        .enumerate()
        .all(|(t, &tri)| tree.forced_edge(tri) == Some(g.chosen_edge(t)))
}

fn leaves_are_small(tree: &SplitTree) -> bool {
    match &tree.children {
        None => tree.len <= 2,
        Some(c) => c.0.len + c.1.len == tree.len && leaves_are_small(&c.0) && leaves_are_small(&c.1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{g_partial, h2_table};
    use num::bigint::BigInt;
    use num::rational::BigRational;

    #[test]
    fn small_constructions() {
        assert_eq!(build_g(2).tcm.codes().len(), 0);
        assert_eq!(build_g(2).tcm.weight(&2u64), 1);
        assert_eq!(build_g(4).tcm.weight(&2u64), 12);
        assert_eq!(build_g(6).tree.root_split(), Some((3, 3)));
        assert_eq!(build_g(12).tree.root_split(), Some((8, 4)));
        for m in 1..=12 {
            let b = build_g(m);
            assert!(verify_two_recursive(&b.tcm, &b.tree), "m={m}");
        }
    }

    #[test]
    fn cross_triples_choose_same_side_edge() {
        let b = build_g(5);
        // Sides {0,1} and {2,3,4}.
        assert_eq!(b.tree.root_split(), Some((2, 3)));
        assert_eq!(b.tcm.edge_of(0, 1, 3), [0, 1]);
        assert_eq!(b.tcm.edge_of(0, 3, 4), [3, 4]);
        let mut g = b.tcm.clone();
        g.set_edge(g.indexer().triple(0, 3, 4), [0, 3]);
        assert!(!verify_two_recursive(&g, &b.tree));
    }

    #[test]
    fn powers_of_two_match_partial_sums() {
        for k in 1..=5u32 {
            let m = 1usize << k;
            let g = build_g(m).tcm;
            for alpha in [2i64, 3] {
                let w = g.weight(&BigInt::from(alpha));
                let h = BigRational::new(BigInt::from(2) * w, BigInt::from(m) * num::pow(BigInt::from(alpha), m));
                let want = g_partial(k, &BigRational::from_integer(alpha.into())).unwrap();
                assert_eq!(h, want, "k={k} alpha={alpha}");
            }
        }
    }

    #[test]
    fn table_driven_construction_attains_h2() {
        for alpha in [BigInt::from(3), BigInt::from(5)] {
            let t = h2_table(14, &alpha);
            for m in 1..=14 {
                let b = build_from_table(m, &t);
                assert_eq!(b.tcm.weight(&alpha), *t.value(m), "m={m}");
                assert!(verify_two_recursive(&b.tcm, &b.tree));
            }
        }
    }
}
