//! Passing between good choices and TCMs.

use super::{Choice, TriplePattern};
use crate::error::Result;
use crate::tcm::Tcm;

/// A good choice built from a TCM, with whether every implication points
/// forward in the vertex order that was used.
#[derive(Debug, Clone)]
pub struct OrientedChoice {
    pub choice: Choice,
    /// When false, some triple had its apex between the ends of its chosen
    /// edge; count equality with the TCM weight is then not guaranteed and
    /// must be checked by counting.
    pub uniformly_directed: bool,
}

/// The TCM of a good choice: in each triple the two implications share a
/// vertex, and the edge between their other ends is chosen.
pub fn tcm_of_choice(b: &Choice) -> Result<Tcm> {
    b.require_good()?;
    let mut t = 0;
    Tcm::from_fn(b.m(), |_| {
        let [(a, x), (c, y)] = b.arcs_of(t).expect("good pattern");
        t += 1;
        if a == c {
            [x, y]
        } else {
            debug_assert_eq!(x, y);
            [a, c]
        }
    })
}

/// A good choice whose TCM is `g`. With `order` (a list of all vertices,
/// earliest first; identity when absent), the apex `w` of each chosen edge
/// `uv` sends implications to `u, v` when it comes before both and receives
/// them otherwise.
pub fn choice_from_tcm(g: &Tcm, order: Option<&[usize]>) -> OrientedChoice {
    let m = g.m();
    let mut pos: Vec<usize> = (0..m).collect();
    if let Some(order) = order {
        assert_eq!(order.len(), m);
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
    }
    let patterns = (0..g.codes().len())
        .map(|t| {
            let tri = g.indexer().triples()[t];
            let role = |v: usize| tri.iter().position(|&u| u == v).unwrap() as u8;
            let [u, v] = g.chosen_edge(t);
            let w = g.apex(t);
            let arcs = if pos[w] < pos[u] && pos[w] < pos[v] {
                [(role(w), role(u)), (role(w), role(v))]
            } else {
                [(role(u), role(w)), (role(v), role(w))]
            };
            TriplePattern::from_arcs(arcs).expect("star arcs")
        })
        .collect();
    let choice = Choice::with_indexer(g.shared_indexer(), patterns);
    let uniformly_directed = is_uniformly_directed(&choice, &pos_to_order(&pos));
    OrientedChoice { choice, uniformly_directed }
}

fn pos_to_order(pos: &[usize]) -> Vec<usize> {
    let mut order = vec![0; pos.len()];
    for (v, &p) in pos.iter().enumerate() {
        order[p] = v;
    }
    order
}

/// Every implication goes from an earlier to a later vertex of `order`.
pub fn is_uniformly_directed(b: &Choice, order: &[usize]) -> bool {
    let mut pos = vec![0; order.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    (0..b.patterns().len()).all(|t| b.arcs_of(t).map_or(true, |arcs| arcs.iter().all(|&(i, j)| pos[i] < pos[j])))
}
