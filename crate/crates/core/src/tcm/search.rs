//! Exact `H(m, alpha)` by depth-first search over the edge choices of all
//! triples, with an optimistic bound on the weight still obtainable.

use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use rayon::prelude::*;

use super::{Tcm, CODE_ENDS};
use crate::combin::Indexer;
use crate::error::{Error, Result, SearchStatus};
use crate::recurrence::build_g;
use crate::scalar::{power_table, Scalar};

#[derive(Debug, Clone)]
pub struct HExactOptions {
    /// Total node budget, split evenly across the top-level subtrees.
    pub node_budget: u64,
    /// `m = 7` has `3^35` leaves; it is refused unless explicitly allowed.
    pub allow_m7: bool,
    /// Keep every maximiser (up to `max_collected`), not just the first.
    pub collect_all: bool,
    pub max_collected: usize,
    pub parallel: bool,
}

impl Default for HExactOptions {
    fn default() -> Self {
        HExactOptions {
            node_budget: 20_000_000_000,
            allow_m7: false,
            collect_all: false,
            max_collected: 100_000,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HExactResult<S> {
    pub value: S,
    /// Lexicographically least maximiser among those with triple `{0,1,2}` choosing `01`.
    pub argmax: Tcm,
    /// All maximisers with triple `{0,1,2}` choosing `01`, when collection was requested.
    pub all_argmax: Vec<Tcm>,
    pub status: SearchStatus,
    pub nodes: u64,
}

pub fn h_exact<S: Scalar>(m: usize, alpha: &S, opts: &HExactOptions) -> Result<HExactResult<S>> {
    if *alpha < S::one() {
        return Err(Error::DomainError(format!("alpha must be at least 1, got {alpha}")));
    }
    h_exact_with_powers(m, power_table(alpha, m.saturating_sub(2)), opts)
}

/// `H(m, p/q)` in exact rational arithmetic. The search runs on the integer
/// table `p^k q^(m-2-k)`, which orders TCMs exactly as the weights do.
pub fn h_exact_rational(
    m: usize,
    alpha: &BigRational,
    opts: &HExactOptions,
) -> Result<HExactResult<BigRational>> {
    if *alpha < BigRational::one() {
        return Err(Error::DomainError(format!("alpha must be at least 1, got {alpha}")));
    }
    let top = m.saturating_sub(2);
    let (p, q) = (alpha.numer().clone(), alpha.denom().clone());
    let scaled: Vec<BigInt> = (0..=top)
        .map(|k| num::pow(p.clone(), k) * num::pow(q.clone(), top - k))
        .collect();
    let scale = num::pow(q, top);
    let res = match scaled.iter().map(i128::try_from).collect::<std::result::Result<Vec<_>, _>>() {
        Ok(small) if small[top] < i128::MAX >> 16 => {
            let r = h_exact_with_powers(m, small, opts)?;
            HExactResult {
                value: BigInt::from(r.value),
                argmax: r.argmax,
                all_argmax: r.all_argmax,
                status: r.status,
                nodes: r.nodes,
            }
        }
        _ => h_exact_with_powers(m, scaled, opts)?,
    };
    Ok(HExactResult {
        value: BigRational::new(res.value, scale),
        argmax: res.argmax,
        all_argmax: res.all_argmax,
        status: res.status,
        nodes: res.nodes,
    })
}

/// The search proper, against a table `pow[k]` (`k = 0..=m-2`) that must be
/// nondecreasing with nondecreasing increments, as `alpha^k` is for `alpha >= 1`.
pub fn h_exact_with_powers<S: Scalar>(
    m: usize,
    pow: Vec<S>,
    opts: &HExactOptions,
) -> Result<HExactResult<S>> {
    if m >= 8 || (m == 7 && !opts.allow_m7) {
        return Err(Error::InfeasibleSize(format!(
            "exact H(m, alpha) is limited to m <= 6 (m = 7 needs the explicit override), got m = {m}"
        )));
    }
    if pow.len() < m.saturating_sub(1) {
        return Err(Error::DomainError("power table too short".into()));
    }
    let idx = Arc::new(Indexer::new(m));
    if m < 3 {
        let g = Tcm::from_codes_with(Arc::clone(&idx), Vec::new());
        return Ok(HExactResult {
            value: g.weight_with(&pow),
            all_argmax: if opts.collect_all { vec![g.clone()] } else { Vec::new() },
            argmax: g,
            status: SearchStatus::Exact,
            nodes: 1,
        });
    }

    let incumbent = build_g(m).tcm;
    let incumbent_value = incumbent.weight_with(&pow);
    let tri_pairs: Vec<[usize; 3]> = idx
        .triples()
        .iter()
        .map(|t| CODE_ENDS.map(|([i, j], _)| idx.pair(t[i], t[j])))
        .collect();

    let num_triples = tri_pairs.len();
    let depth = (num_triples - 1).min(3);
    let prefixes: Vec<Vec<u8>> = (0..3usize.pow(depth as u32))
        .map(|mut code| {
            let mut p = vec![0u8; depth + 1];
            for slot in p[1..].iter_mut().rev() {
                *slot = (code % 3) as u8;
                code /= 3;
            }
            p
        })
        .collect();
    let budget = (opts.node_budget / prefixes.len() as u64).max(1);

    let run = |prefix: &Vec<u8>| {
        let mut s = Subtree::new(&tri_pairs, idx.num_pairs(), &pow, opts, budget);
        s.best = incumbent_value.clone();
        for (t, &c) in prefix.iter().enumerate() {
            s.decide(t, c);
        }
        s.dfs(prefix.len());
        s.into_outcome()
    };
    let outcomes: Vec<Outcome<S>> = if opts.parallel {
        prefixes.par_iter().map(run).collect()
    } else {
        prefixes.iter().map(run).collect()
    };

    let nodes = outcomes.iter().map(|o| o.nodes).sum();
    let exhausted = outcomes.iter().any(|o| o.out_of_budget);
    let mut winner: Option<&Outcome<S>> = None;
    for o in outcomes.iter().filter(|o| o.found) {
        if winner.map_or(true, |w| o.best.beats(&w.best)) {
            winner = Some(o);
        }
    }
    let status = if exhausted { SearchStatus::LowerBound } else { SearchStatus::Exact };
    let Some(w) = winner else {
        return Ok(HExactResult {
            value: incumbent_value,
            all_argmax: if opts.collect_all { vec![incumbent.clone()] } else { Vec::new() },
            argmax: incumbent,
            status: SearchStatus::LowerBound,
            nodes,
        });
    };
    let mut all_argmax = Vec::new();
    if opts.collect_all {
        for o in outcomes.iter().filter(|o| o.found && o.best.ties(&w.best)) {
            all_argmax.extend(o.collected.iter().cloned());
        }
        all_argmax.sort();
        all_argmax.truncate(opts.max_collected);
    }
    let to_tcm = |codes: Vec<u8>| Tcm::from_codes_with(Arc::clone(&idx), codes);
    Ok(HExactResult {
        value: w.best.clone(),
        argmax: to_tcm(w.codes.clone()),
        all_argmax: all_argmax.into_iter().map(to_tcm).collect(),
        status,
        nodes,
    })
}

struct Outcome<S> {
    found: bool,
    best: S,
    codes: Vec<u8>,
    collected: Vec<Vec<u8>>,
    nodes: u64,
    out_of_budget: bool,
}

struct Subtree<'a, S> {
    tri_pairs: &'a [[usize; 3]],
    pow: &'a [S],
    mult: Vec<usize>,
    remaining: Vec<usize>,
    codes: Vec<u8>,
    weight: S,
    best: S,
    found: bool,
    best_codes: Vec<u8>,
    collected: Vec<Vec<u8>>,
    collect_all: bool,
    max_collected: usize,
    nodes: u64,
    budget: u64,
    out_of_budget: bool,
}

impl<'a, S: Scalar> Subtree<'a, S> {
    fn new(tri_pairs: &'a [[usize; 3]], num_pairs: usize, pow: &'a [S], opts: &HExactOptions, budget: u64) -> Self {
        let mut remaining = vec![0; num_pairs];
        for ps in tri_pairs {
            for &p in ps {
                remaining[p] += 1;
            }
        }
        Subtree {
            tri_pairs,
            pow,
            mult: vec![0; num_pairs],
            remaining,
            codes: vec![0; tri_pairs.len()],
            weight: pow[0].clone() * S::from_usize_exact(num_pairs),
            best: S::zero(),
            found: false,
            best_codes: Vec::new(),
            collected: Vec::new(),
            collect_all: opts.collect_all,
            max_collected: opts.max_collected,
            nodes: 0,
            budget,
            out_of_budget: false,
        }
    }

    fn decide(&mut self, t: usize, code: u8) {
        let ps = self.tri_pairs[t];
        for &p in &ps {
            self.remaining[p] -= 1;
        }
        let p = ps[code as usize];
        let k = self.mult[p];
        self.weight = self.weight.clone() + self.pow[k + 1].clone() - self.pow[k].clone();
        self.mult[p] += 1;
        self.codes[t] = code;
    }

    fn undo(&mut self, t: usize, code: u8, old_weight: S) {
        let ps = self.tri_pairs[t];
        for &p in &ps {
            self.remaining[p] += 1;
        }
        self.mult[ps[code as usize]] -= 1;
        self.weight = old_weight;
    }

    /// Weight reachable from this node: each undecided triple adds at most the
    /// largest final-step increment among its edges, and no pair can end above
    /// its current multiplicity plus the undecided triples through it.
    fn bound(&self, next: usize) -> S {
        let cap = |p: usize| self.mult[p] + self.remaining[p];
        let mut by_triples = self.weight.clone();
        for ps in &self.tri_pairs[next..] {
            let inc = ps
                .iter()
                .map(|&p| self.pow[cap(p)].clone() - self.pow[cap(p) - 1].clone())
                .fold(S::zero(), |a, b| if b > a { b } else { a });
            by_triples = by_triples + inc;
        }
        let by_pairs = (0..self.mult.len()).fold(S::zero(), |acc, p| acc + self.pow[cap(p)].clone());
        if by_pairs < by_triples {
            by_pairs
        } else {
            by_triples
        }
    }

    fn dfs(&mut self, t: usize) {
        if self.out_of_budget {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
            return;
        }
        if t == self.tri_pairs.len() {
            self.leaf();
            return;
        }
        let bound = self.bound(t);
        let strict = self.found && !self.collect_all;
        if self.best.beats(&bound) || (strict && !bound.beats(&self.best)) {
            return;
        }
        for code in 0..3u8 {
            let old = self.weight.clone();
            self.decide(t, code);
            self.dfs(t + 1);
            self.undo(t, code, old);
        }
    }

    fn leaf(&mut self) {
        let w = &self.weight;
        if !self.found {
            if !self.best.beats(w) {
                self.accept();
            }
        } else if w.beats(&self.best) {
            self.accept();
        } else if self.collect_all && w.ties(&self.best) && self.collected.len() < self.max_collected {
            self.collected.push(self.codes.clone());
        }
    }

    fn accept(&mut self) {
        self.found = true;
        self.best = self.weight.clone();
        self.best_codes = self.codes.clone();
        self.collected.clear();
        if self.collect_all {
            self.collected.push(self.codes.clone());
        }
    }

    fn into_outcome(self) -> Outcome<S> {
        Outcome {
            found: self.found,
            best: self.best,
            codes: self.best_codes,
            collected: self.collected,
            nodes: self.nodes,
            out_of_budget: self.out_of_budget,
        }
    }
}
