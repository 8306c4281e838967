//! The directed multigraph of 0-implications on a row set, its closure under
//! the three completion rules, strongly connected components and blocks.

use super::{Choice, PatternKind};
use crate::combin::mask_elements;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationGraph {
    m: usize,
    x: u32,
    /// Arcs with multiplicity, in the order the triples produced them.
    arcs: Vec<(usize, usize)>,
    /// `adj[i]` has bit `j` set when some arc goes from `i` to `j`.
    adj: Vec<u32>,
    closed: bool,
}

impl ImplicationGraph {
    /// `D_B(X)`: two arcs from every good triple inside `x`, none from `I`/`I^c`.
    pub fn new(b: &Choice, x: u32) -> Self {
        let m = b.m();
        assert!(m <= 32);
        let mut arcs = Vec::new();
        let mut adj = vec![0u32; m];
        for (t, tri) in b.indexer().triples().iter().enumerate() {
            if tri.iter().all(|&v| x >> v & 1 == 1) {
                if let Some(pair) = b.arcs_of(t) {
                    for (i, j) in pair {
                        arcs.push((i, j));
                        adj[i] |= 1 << j;
                    }
                }
            }
        }
        ImplicationGraph { m, x, arcs, adj, closed: false }
    }

    pub fn vertex_set(&self) -> u32 {
        self.x
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        mask_elements(self.x)
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Distinct arcs as adjacency rows.
    pub fn adjacency(&self) -> &[u32] {
        &self.adj
    }

    /// Applies transitivity, the `I` rule (`ij` gives `ik`) and the `I^c` rule
    /// (`ij` gives `kj`) until nothing changes. The result keeps one copy of
    /// each arc.
    pub fn closure(&self, b: &Choice) -> ImplicationGraph {
        let vs: Vec<usize> = self.vertices().collect();
        let mut adj = self.adj.clone();
        loop {
            let mut changed = false;
            for &i in &vs {
                for &j in &vs {
                    if i == j || adj[i] >> j & 1 == 0 {
                        continue;
                    }
                    for &k in &vs {
                        if k == i || k == j {
                            continue;
                        }
                        let mut add = |from: usize, to: usize, adj: &mut Vec<u32>| {
                            if adj[from] >> to & 1 == 0 {
                                adj[from] |= 1 << to;
                                changed = true;
                            }
                        };
                        if adj[j] >> k & 1 == 1 {
                            add(i, k, &mut adj);
                        }
                        match b.get(i, j, k).kind() {
                            PatternKind::Identity => add(i, k, &mut adj),
                            PatternKind::IdentityComplement => add(k, j, &mut adj),
                            _ => {}
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let arcs = vs
            .iter()
            .flat_map(|&i| mask_elements(adj[i]).map(move |j| (i, j)))
            .collect();
        ImplicationGraph { m: self.m, x: self.x, arcs, adj, closed: true }
    }

    /// Strongly connected components, in a topological order of the
    /// condensation (sources first). Each component is sorted.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let mut t = Tarjan {
            adj: &self.adj,
            index: vec![usize::MAX; self.m],
            low: vec![0; self.m],
            on_stack: vec![false; self.m],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in self.vertices() {
            if t.index[v] == usize::MAX {
                t.visit(v, self.x);
            }
        }
        let mut comps = t.out;
        // Tarjan emits sinks first.
        comps.reverse();
        for c in &mut comps {
            c.sort_unstable();
        }
        comps
    }

    /// `(t, n_t)`: number of components and of unordered component pairs with
    /// no arc between them in either direction.
    pub fn component_counts(&self) -> (usize, usize) {
        let comps = self.sccs();
        let masks: Vec<u32> = comps.iter().map(|c| c.iter().fold(0, |a, &v| a | 1 << v)).collect();
        let out: Vec<u32> = comps
            .iter()
            .map(|c| c.iter().fold(0, |a, &v| a | self.adj[v]))
            .collect();
        let mut n_t = 0;
        for a in 0..comps.len() {
            for b in a + 1..comps.len() {
                if out[a] & masks[b] == 0 && out[b] & masks[a] == 0 {
                    n_t += 1;
                }
            }
        }
        (comps.len(), n_t)
    }

    /// Blocks of the closed graph: classes of vertices with no arc either way.
    pub fn blocks(&self, b: &Choice) -> BlockDecomposition {
        let closed;
        let g = if self.closed {
            self
        } else {
            closed = self.closure(b);
            &closed
        };
        let vs: Vec<usize> = g.vertices().collect();
        let independent = |i: usize, j: usize| !g.has_arc(i, j) && !g.has_arc(j, i);
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &vs {
            match classes.iter_mut().find(|c| independent(c[0], v)) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        // Order blocks so that every vertex of an earlier block has an arc to
        // every vertex of a later one; among valid next blocks take the one
        // with the smallest vertex.
        let fully = |a: &[usize], c: &[usize]| a.iter().all(|&i| c.iter().all(|&j| g.has_arc(i, j)));
        let mut ordered = Vec::with_capacity(classes.len());
        while !classes.is_empty() {
            let pick = (0..classes.len())
                .filter(|&a| (0..classes.len()).all(|c| c == a || fully(&classes[a], &classes[c])))
                .min_by_key(|&a| classes[a][0])
                .unwrap_or_else(|| {
                    debug_assert!(false, "closed graph admits no block order");
                    0
                });
            ordered.push(classes.remove(pick));
        }
        let position = |v: usize| ordered.iter().position(|blk| blk.contains(&v)).unwrap();
        let special = (0..ordered.len())
            .map(|gamma| {
                let blk = &ordered[gamma];
                blk.iter().enumerate().any(|(p, &i)| {
                    blk[p + 1..].iter().any(|&j| {
                        vs.iter().any(|&k| {
                            let pk = position(k);
                            (pk < gamma && b.get(k, i, j).kind() == PatternKind::Identity)
                                || (pk > gamma && b.get(i, j, k).kind() == PatternKind::IdentityComplement)
                        })
                    })
                })
            })
            .collect();
        BlockDecomposition { blocks: ordered, special }
    }
}

struct Tarjan<'a> {
    adj: &'a [u32],
    index: Vec<usize>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    next: usize,
    out: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize, within: u32) {
        self.index[v] = self.next;
        self.low[v] = self.next;
        self.next += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for w in mask_elements(self.adj[v] & within) {
            if self.index[w] == usize::MAX {
                self.visit(w, within);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.index[w]);
            }
        }
        if self.low[v] == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().unwrap();
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.out.push(comp);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Blocks in order; each sorted.
    pub blocks: Vec<Vec<usize>>,
    pub special: Vec<bool>,
}

impl BlockDecomposition {
    /// `b(B, X)`: blocks with at least two vertices.
    pub fn big_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() >= 2).count()
    }

    /// `s(B, X)`: special blocks.
    pub fn special_blocks(&self) -> usize {
        self.special.iter().filter(|&&s| s).count()
    }

    pub fn num_vertices(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// `|X| + b - s + 1`.
    pub fn bound(&self) -> usize {
        self.num_vertices() + self.big_blocks() + 1 - self.special_blocks()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{fixtures, TriplePattern};
    use super::*;

    #[test]
    fn arcs_of_good_choice() {
        let b = fixtures::example_five();
        let g = ImplicationGraph::new(&b, 0b11111);
        assert_eq!(g.arcs().len(), 20);
        assert!(g.arcs().iter().all(|&(i, j)| i < j));
        let comps = g.sccs();
        assert_eq!(comps.len(), 5);
        assert!(comps.iter().all(|c| c.len() == 1));
        let pos = |v: usize| comps.iter().position(|c| c.contains(&v)).unwrap();
        assert!(g.arcs().iter().all(|&(i, j)| pos(i) < pos(j)));
    }

    #[test]
    fn closure_is_idempotent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let b = Choice::random(6, &mut rng, false);
            let x = rng.gen_range(0..64u32);
            let once = ImplicationGraph::new(&b, x).closure(&b);
            let twice = once.closure(&b);
            assert_eq!(once.adjacency(), twice.adjacency());
            assert!(once.is_closed());
        }
    }

    #[test]
    fn cyclic_components() {
        let b = Choice::from_fn(4, |t| match t {
            [0, 1, 2] => TriplePattern::A1,
            [0, 1, 3] => TriplePattern::from_arcs([(1, 0), (1, 2)]).unwrap(),
            _ => TriplePattern::A2,
        });
        let g = ImplicationGraph::new(&b, 0b1111);
        assert!(g.has_arc(0, 1) && g.has_arc(1, 0));
        assert_eq!(g.sccs(), vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(g.component_counts(), (3, 0));
    }

    #[test]
    fn identity_triple_blocks() {
        let b = Choice::uniform(3, TriplePattern::I);
        let d = ImplicationGraph::new(&b, 0b111).blocks(&b);
        assert_eq!(d.blocks, vec![vec![0, 1, 2]]);
        assert_eq!(d.big_blocks(), 1);
        assert_eq!(d.bound(), 5);
    }
}
