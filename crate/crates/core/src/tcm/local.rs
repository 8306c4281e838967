//! Hill climbing on TCMs with single reassignments, paired swaps and
//! neutral-then-improving chains. Only strictly improving moves are kept.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Tcm;
use crate::scalar::{power_table, Scalar};

#[derive(Debug, Clone)]
pub struct LocalSearchOptions {
    pub seed: u64,
    /// Maximum number of improving moves per climb.
    pub iters: usize,
    /// Extra climbs from random TCMs drawn from `seed`.
    pub restarts: usize,
    /// Further starting points, climbed after the input.
    pub pool: Vec<Tcm>,
}

impl Default for LocalSearchOptions {
    fn default() -> Self {
        LocalSearchOptions { seed: 0, iters: 100_000, restarts: 0, pool: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct LocalSearchResult<S> {
    pub tcm: Tcm,
    pub weight: S,
    pub moves: usize,
}

pub fn local_search<S: Scalar>(g: &Tcm, alpha: &S, opts: &LocalSearchOptions) -> LocalSearchResult<S> {
    let pow = power_table(alpha, g.m().saturating_sub(2));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = vec![g.clone()];
    starts.extend(opts.pool.iter().filter(|p| p.m() == g.m()).cloned());
    for _ in 0..opts.restarts {
        starts.push(Tcm::random(g.m(), &mut rng));
    }
    let mut best: Option<LocalSearchResult<S>> = None;
    for start in starts {
        let r = climb(start, &pow, opts.iters);
        if best.as_ref().map_or(true, |b| r.weight.beats(&b.weight)) {
            best = Some(r);
        }
    }
    best.expect("at least one start")
}

/// No single reassignment increases the weight (for any `alpha > 1`): every
/// triple's chosen edge has strictly larger multiplicity than its other two.
pub fn is_reassignment_stable(g: &Tcm) -> bool {
    (0..g.codes().len()).all(|t| {
        let [a, b, c] = g.indexer().triples()[t];
        let chosen = g.chosen_edge(t);
        let mc = g.multiplicity(chosen[0], chosen[1]);
        [[a, b], [a, c], [b, c]]
            .iter()
            .filter(|&&e| e != chosen)
            .all(|e| g.multiplicity(e[0], e[1]) < mc)
    })
}

fn climb<S: Scalar>(mut g: Tcm, pow: &[S], iters: usize) -> LocalSearchResult<S> {
    let mut moves = 0;
    while moves < iters {
        let improved = single_move(&mut g, pow) || paired_swap(&mut g, pow) || chain(&mut g, pow);
        if !improved {
            break;
        }
        moves += 1;
    }
    let weight = g.weight_with(pow);
    LocalSearchResult { tcm: g, weight, moves }
}

/// Weight carried by the pairs a move touches, before or after it.
fn touched_weight<S: Scalar>(g: &Tcm, pow: &[S], pairs: &[usize]) -> S {
    pairs.iter().fold(S::zero(), |acc, &p| acc + pow[g.multiplicities()[p] as usize].clone())
}

fn touched_pairs(g: &Tcm, changes: &[(usize, u8)]) -> Vec<usize> {
    let mut pairs = Vec::new();
    for &(t, code) in changes {
        let [a, b, c] = g.indexer().triples()[t];
        let ends = [[a, b], [a, c], [b, c]];
        for e in [g.chosen_edge(t), ends[code as usize]] {
            pairs.push(g.indexer().pair(e[0], e[1]));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

#[derive(PartialEq)]
enum Outcome {
    Better,
    Equal,
    Worse,
}

/// Applies the changes and reports how the weight moved; reverts unless `keep` accepts.
fn attempt<S: Scalar>(g: &mut Tcm, pow: &[S], changes: &[(usize, u8)], keep: impl Fn(&Outcome) -> bool) -> bool {
    let pairs = touched_pairs(g, changes);
    let before = touched_weight(g, pow, &pairs);
    let old: Vec<u8> = changes.iter().map(|&(t, _)| g.codes()[t]).collect();
    for &(t, code) in changes {
        g.set_code(t, code);
    }
    let after = touched_weight(g, pow, &pairs);
    let outcome = if after.beats(&before) {
        Outcome::Better
    } else if after.ties(&before) {
        Outcome::Equal
    } else {
        Outcome::Worse
    };
    if keep(&outcome) {
        return true;
    }
    for (&(t, _), &code) in changes.iter().zip(&old).rev() {
        g.set_code(t, code);
    }
    false
}

fn single_move<S: Scalar>(g: &mut Tcm, pow: &[S]) -> bool {
    for t in 0..g.codes().len() {
        let cur = g.codes()[t];
        for code in (0..3).filter(|&c| c != cur) {
            if attempt(g, pow, &[(t, code)], |o| *o == Outcome::Better) {
                return true;
            }
        }
    }
    false
}

/// Two triples sharing their chosen edge `xy` both move off it.
fn paired_swap<S: Scalar>(g: &mut Tcm, pow: &[S]) -> bool {
    let m = g.m();
    for x in 0..m {
        for y in x + 1..m {
            let on_xy: Vec<usize> = (0..m)
                .filter(|&z| z != x && z != y)
                .map(|z| g.indexer().triple(x, y, z))
                .filter(|&t| g.chosen_edge(t) == [x, y])
                .collect();
            for (i, &t1) in on_xy.iter().enumerate() {
                for &t2 in &on_xy[i + 1..] {
                    let (c1, c2) = (g.codes()[t1], g.codes()[t2]);
                    for a in (0..3).filter(|&a| a != c1) {
                        for b in (0..3).filter(|&b| b != c2) {
                            if attempt(g, pow, &[(t1, a), (t2, b)], |o| *o == Outcome::Better) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

/// A weight-neutral reassignment that opens up a strictly improving one.
fn chain<S: Scalar>(g: &mut Tcm, pow: &[S]) -> bool {
    for t in 0..g.codes().len() {
        let cur = g.codes()[t];
        for code in (0..3).filter(|&c| c != cur) {
            if attempt(g, pow, &[(t, code)], |o| *o == Outcome::Equal) {
                if single_move(g, pow) {
                    return true;
                }
                g.set_code(t, cur);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tcm::h_exact;
    use crate::tcm::HExactOptions;

    #[test]
    fn never_decreases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 3..=7 {
            let g = Tcm::random(m, &mut rng);
            let r = local_search(&g, &2u64, &LocalSearchOptions::default());
            assert!(r.weight >= g.weight(&2u64));
            assert_eq!(r.weight, r.tcm.weight(&2u64));
        }
    }

    #[test]
    fn reaches_optimum_on_four_vertices() {
        let g = Tcm::lexicographic_first(4);
        let r = local_search(&g, &2u64, &LocalSearchOptions::default());
        assert_eq!(r.weight, 12);
    }

    #[test]
    fn extremal_input_is_kept() {
        for m in 3..=5 {
            let best = h_exact(m, &2u64, &HExactOptions::default()).unwrap();
            let r = local_search(&best.argmax, &2u64, &LocalSearchOptions::default());
            assert_eq!(r.weight, best.value);
        }
    }

    #[test]
    fn restarts_are_reproducible() {
        let g = Tcm::lexicographic_first(8);
        let opts = LocalSearchOptions { seed: 9, restarts: 3, ..Default::default() };
        let a = local_search(&g, &2.0f64, &opts);
        let b = local_search(&g, &2.0f64, &opts);
        assert_eq!(a.tcm, b.tcm);
    }

    #[test]
    fn climbs_end_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 3..=8 {
            let r = local_search(&Tcm::random(m, &mut rng), &3u64, &LocalSearchOptions::default());
            assert!(is_reassignment_stable(&r.tcm));
        }
        // Every pair through vertex 0 is chosen once.
        let g = Tcm::from_fn(4, |t| match t {
            [0, 1, 2] => [0, 1],
            [0, 1, 3] => [0, 3],
            [0, 2, 3] => [0, 2],
            [a, b, _] => [a, b],
        })
        .unwrap();
        assert!(!is_reassignment_stable(&g));
    }
}
