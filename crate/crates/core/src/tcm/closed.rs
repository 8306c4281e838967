//! Closed sets. A vertex set `S` is closed when every triple with two vertices
//! `x, y` in `S` and the third outside chooses `xy`.

use serde::Serialize;

use super::Tcm;

/// Maximal closed sets, each sorted, listed by smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedSetPartition {
    pub sets: Vec<Vec<usize>>,
}

impl ClosedSetPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }
}

fn to_mask(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |acc, &v| acc | 1 << v)
}

fn from_mask(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn is_closed(g: &Tcm, s: &[usize]) -> bool {
    let inside = to_mask(s);
    for (i, &x) in s.iter().enumerate() {
        for &y in &s[i + 1..] {
            for z in (0..g.m()).filter(|&z| inside >> z & 1 == 0) {
                if g.edge_of(x, y, z) != [x.min(y), x.max(y)] {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest closed set containing `seed`: keep adding any outside `z` whose
/// triple with two members does not choose the inner edge.
pub fn closure(g: &Tcm, seed: &[usize]) -> Vec<usize> {
    assert!(g.m() <= 64);
    let full = if g.m() == 64 { u64::MAX } else { (1u64 << g.m()) - 1 };
    let mut s = to_mask(seed);
    loop {
        let before = s;
        let members = from_mask(s);
        for z in 0..g.m() {
            if s >> z & 1 == 1 {
                continue;
            }
            let pulled = members.iter().enumerate().any(|(i, &x)| {
                members[i + 1..]
                    .iter()
                    .any(|&y| g.edge_of(x, y, z) != [x.min(y), x.max(y)])
            });
            if pulled {
                s |= 1 << z;
            }
        }
        if s == before || s == full {
            return from_mask(s);
        }
    }
}

/// Maximal closed sets of `g`.
///
/// Proper closed sets through a vertex `v` are nested, so the maximal one is
/// the largest proper `cl({v, y})`, or `{v}` when every such closure is `[m]`.
/// The result is re-checked against the definition before it is returned.
pub fn closed_sets(g: &Tcm) -> ClosedSetPartition {
    let m = g.m();
    let mut owner: Vec<Option<usize>> = vec![None; m];
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for v in 0..m {
        if owner[v].is_some() {
            continue;
        }
        let mut best = vec![v];
        for y in (0..m).filter(|&y| y != v) {
            let c = closure(g, &[v, y]);
            if c.len() < m && c.len() > best.len() {
                best = c;
            }
        }
        for &u in &best {
            owner[u] = Some(sets.len());
        }
        sets.push(best);
    }
    let partition = ClosedSetPartition { sets };
    assert!(verify_partition(g, &partition), "closed set decomposition failed verification");
    partition
}

/// Checks closedness, disjoint cover of `[m]`, and maximality of every set.
pub fn verify_partition(g: &Tcm, p: &ClosedSetPartition) -> bool {
    let m = g.m();
    let mut seen = vec![false; m];
    for s in &p.sets {
        for &v in s {
            if v >= m || seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    if seen.iter().any(|&b| !b) {
        return false;
    }
    p.sets.iter().all(|s| {
        is_closed(g, s)
            && (s.len() == m
                || (0..m).filter(|v| !s.contains(v)).all(|v| {
                    let mut t = s.clone();
                    t.push(v);
                    closure(g, &t).len() == m
                }))
    })
}
