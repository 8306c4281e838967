//! `forb(m, r, M)` as the maximum of `forb(m, r, B)` over choices.

use std::sync::Arc;

use num::bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::convert::{choice_from_tcm, tcm_of_choice};
use super::count::{combine, count_fast, counts_by_size};
use super::{Choice, TriplePattern};
use crate::combin::{binomial, subsets_by_size, Indexer};
use crate::error::{Error, Result, SearchStatus};
use crate::recurrence::build_g;
use crate::tcm::Tcm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceMode {
    /// Every one of the `8^C(m,3)` choices.
    All,
    /// Only choices without `I` or `I^c`.
    GoodOnly,
    /// `n` uniformly random choices drawn from `seed`.
    Sample { n: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct ChoiceSearchOptions {
    /// Refuse `All` beyond this many choices.
    pub max_all: f64,
    /// Refuse `GoodOnly` beyond this many choices.
    pub max_good: f64,
    /// Largest `m` accepted by sampling.
    pub max_sample_m: usize,
    pub node_budget: u64,
    pub parallel: bool,
}

impl Default for ChoiceSearchOptions {
    fn default() -> Self {
        ChoiceSearchOptions {
            max_all: 1.0e7,
            max_good: 6.1e7,
            max_sample_m: 12,
            node_budget: 5_000_000_000,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChoiceSearchResult {
    pub value: BigUint,
    /// Lexicographically least maximising choice (by selectors in triple order).
    pub argmax: Choice,
    /// The TCM of the maximiser, when it is good.
    pub tcm: Option<Tcm>,
    pub status: SearchStatus,
    pub nodes: u64,
}

pub fn forb_via_choices(
    m: usize,
    r: u64,
    mode: ChoiceMode,
    opts: &ChoiceSearchOptions,
) -> Result<ChoiceSearchResult> {
    if r < 3 {
        return Err(Error::DomainError(format!("choices describe forb(m, r, M) for r >= 3, got r = {r}")));
    }
    if (r as f64).powi(m as i32) > 1e35 || m > 31 {
        return Err(Error::InfeasibleSize(format!("r^m too large for r = {r}, m = {m}")));
    }
    let triples = binomial(m as u64, 3) as i32;
    let (value, argmax, status, nodes) = match mode {
        ChoiceMode::All | ChoiceMode::GoodOnly => {
            let good_only = mode == ChoiceMode::GoodOnly;
            let (space, limit) = if good_only { (6f64, opts.max_good) } else { (8f64, opts.max_all) };
            if space.powi(triples) > limit {
                return Err(Error::InfeasibleSize(format!(
                    "{}^{triples} choices exceeds the guard of {limit:e}",
                    space as u32
                )));
            }
            exhaustive(m, r, good_only, opts)
        }
        ChoiceMode::Sample { n, seed } => {
            if m > opts.max_sample_m {
                return Err(Error::InfeasibleSize(format!("sampling is limited to m <= {}", opts.max_sample_m)));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best: Option<(BigUint, Choice)> = None;
            for _ in 0..n.max(1) {
                let b = Choice::random(m, &mut rng, false);
                let v = combine(&counts_by_size(&b), r);
                if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
                    best = Some((v, b));
                }
            }
            let (v, b) = best.unwrap();
            (v, b, SearchStatus::LowerBound, n.max(1))
        }
    };
    let tcm = if argmax.is_good() { Some(tcm_of_choice(&argmax)?) } else { None };
    Ok(ChoiceSearchResult { value, argmax, tcm, status, nodes })
}

fn exhaustive(m: usize, r: u64, good_only: bool, opts: &ChoiceSearchOptions) -> (BigUint, Choice, SearchStatus, u64) {
    let idx = Arc::new(Indexer::new(m));
    let start = choice_from_tcm(&build_g(m).tcm, None).choice;
    if idx.num_triples() == 0 {
        let v = combine(&counts_by_size(&start), r);
        return (v, start, SearchStatus::Exact, 1);
    }
    let weight: Vec<u128> = (0..=m).map(|k| (r as u128 - 2).pow((m - k) as u32)).collect();
    let incumbent = weighted(&counts_by_size(&start), &weight);

    // Row sets of size >= 3 become decided once their lexicographically last
    // triple (their three largest rows) is assigned.
    let mut completes: Vec<Vec<u32>> = vec![Vec::new(); idx.num_triples()];
    let mut base: u128 = 0;
    let mut optimistic: u128 = 0;
    for x in subsets_by_size(m) {
        let k = x.count_ones() as usize;
        if k < 3 {
            base += (1u128 << k) * weight[k];
            continue;
        }
        let top: Vec<usize> = (0..m).filter(|&v| x >> v & 1 == 1).rev().take(3).collect();
        completes[idx.triple(top[0], top[1], top[2])].push(x);
        optimistic += cap(k) * weight[k];
    }

    let allowed: Vec<TriplePattern> =
        TriplePattern::all().filter(|p| !good_only || p.is_good()).collect();
    let budget = (opts.node_budget / allowed.len() as u64).max(1);
    let run = |&first: &TriplePattern| {
        let mut s = Search {
            choice: Choice::with_indexer(Arc::clone(&idx), vec![first; idx.num_triples()]),
            allowed: &allowed,
            completes: &completes,
            weight: &weight,
            exact: base,
            optimistic,
            best: incumbent,
            found: false,
            best_patterns: Vec::new(),
            nodes: 0,
            budget,
            out_of_budget: false,
        };
        s.assign(0, first);
        s.finish_subtree()
    };
    let outcomes: Vec<Outcome> = if opts.parallel {
        allowed.par_iter().map(run).collect()
    } else {
        allowed.iter().map(run).collect()
    };
    let nodes = outcomes.iter().map(|o| o.nodes).sum();
    let exhausted = outcomes.iter().any(|o| o.out_of_budget);
    let winner = outcomes
        .iter()
        .filter(|o| o.found)
        .fold(None::<&Outcome>, |w, o| match w {
            Some(w) if w.best >= o.best => Some(w),
            _ => Some(o),
        });
    let status = if exhausted { SearchStatus::LowerBound } else { SearchStatus::Exact };
    match winner {
        Some(w) => (
            BigUint::from(w.best),
            Choice::with_indexer(Arc::clone(&idx), w.patterns.clone()),
            status,
            nodes,
        ),
        None => (BigUint::from(incumbent), start, SearchStatus::LowerBound, nodes),
    }
}

/// Largest possible `c(B, X)` for `|X| = k` and any choice: `|X| + b + 1`
/// with at most `k / 2` blocks of size two or more.
fn cap(k: usize) -> u128 {
    (k + k / 2 + 1) as u128
}

fn weighted(counts: &[u64], weight: &[u128]) -> u128 {
    counts.iter().zip(weight).map(|(&c, &w)| c as u128 * w).sum()
}

struct Outcome {
    found: bool,
    best: u128,
    patterns: Vec<TriplePattern>,
    nodes: u64,
    out_of_budget: bool,
}

struct Search<'a> {
    choice: Choice,
    allowed: &'a [TriplePattern],
    completes: &'a [Vec<u32>],
    weight: &'a [u128],
    /// Exact contribution of all decided row sets.
    exact: u128,
    /// Sum of caps over undecided row sets.
    optimistic: u128,
    best: u128,
    found: bool,
    best_patterns: Vec<TriplePattern>,
    nodes: u64,
    budget: u64,
    out_of_budget: bool,
}

impl Search<'_> {
    /// Fixes triple `t` to `p`, scores the row sets it completes, and explores below.
    fn assign(&mut self, t: usize, p: TriplePattern) {
        if self.out_of_budget {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
            return;
        }
        self.choice.set(t, p);
        let (old_exact, old_opt) = (self.exact, self.optimistic);
        for &x in &self.completes[t] {
            let k = x.count_ones() as usize;
            self.exact += count_fast(&self.choice, x) as u128 * self.weight[k];
            self.optimistic -= cap(k) * self.weight[k];
        }
        let bound = self.exact + self.optimistic;
        let next = t + 1;
        if next == self.choice.patterns().len() {
            if (!self.found && bound >= self.best) || bound > self.best {
                self.found = true;
                self.best = bound;
                self.best_patterns = self.choice.patterns().to_vec();
            }
        } else if bound > self.best || (!self.found && bound == self.best) {
            for &q in self.allowed {
                self.assign(next, q);
            }
        }
        self.exact = old_exact;
        self.optimistic = old_opt;
    }

    fn finish_subtree(self) -> Outcome {
        Outcome {
            found: self.found,
            best: self.best,
            patterns: self.best_patterns,
            nodes: self.nodes,
            out_of_budget: self.out_of_budget,
        }
    }
}
