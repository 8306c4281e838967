//! Choices: one triple pattern for every triple of rows, and the counting of
//! valid columns that turns a choice into a lower bound for `forb(m, r, M)`.

mod convert;
mod count;
mod graph;
mod pattern;
mod search;

use std::sync::Arc;

use rand::Rng;

use crate::combin::Indexer;
use crate::error::{Error, Result};

pub use convert::{choice_from_tcm, is_uniformly_directed, tcm_of_choice, OrientedChoice};
pub use count::{
    block_bound, c_scc, count_valid, forb_from_choice, forb_witness, valid_columns, CountOptions,
};
pub use graph::{BlockDecomposition, ImplicationGraph};
pub use pattern::{PatternKind, RoleArc, TriplePattern, PAIRS};
pub use search::{forb_via_choices, ChoiceMode, ChoiceSearchOptions, ChoiceSearchResult};

/// A pattern for every triple of `[m]`; roles follow increasing row order.
#[derive(Debug, Clone)]
pub struct Choice {
    idx: Arc<Indexer>,
    patterns: Vec<TriplePattern>,
}

impl PartialEq for Choice {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m() && self.patterns == other.patterns
    }
}

impl Eq for Choice {}

impl Choice {
    /// `patterns[t]` belongs to the `t`-th triple in lexicographic order.
    pub fn new(m: usize, patterns: Vec<TriplePattern>) -> Result<Self> {
        let idx = Indexer::new(m);
        if patterns.len() != idx.num_triples() {
            return Err(Error::Parse(format!(
                "a choice on {m} rows needs {} patterns, got {}",
                idx.num_triples(),
                patterns.len()
            )));
        }
        Ok(Choice { idx: Arc::new(idx), patterns })
    }

    pub(crate) fn with_indexer(idx: Arc<Indexer>, patterns: Vec<TriplePattern>) -> Self {
        debug_assert_eq!(patterns.len(), idx.num_triples());
        Choice { idx, patterns }
    }

    pub fn uniform(m: usize, p: TriplePattern) -> Self {
        let idx = Indexer::new(m);
        let patterns = vec![p; idx.num_triples()];
        Choice { idx: Arc::new(idx), patterns }
    }

    pub fn from_fn(m: usize, mut f: impl FnMut([usize; 3]) -> TriplePattern) -> Self {
        let idx = Indexer::new(m);
        let patterns = idx.triples().iter().map(|&t| f(t)).collect();
        Choice { idx: Arc::new(idx), patterns }
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R, good_only: bool) -> Self {
        Self::from_fn(m, |_| loop {
            let p = TriplePattern::new(rng.gen_range(0..8)).unwrap();
            if !good_only || p.is_good() {
                break p;
            }
        })
    }

    pub fn m(&self) -> usize {
        self.idx.m()
    }

    pub fn indexer(&self) -> &Indexer {
        &self.idx
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }

    /// Pattern on the triple `{x, y, z}` (any argument order).
    pub fn get(&self, x: usize, y: usize, z: usize) -> TriplePattern {
        self.patterns[self.idx.triple(x, y, z)]
    }

    pub fn set(&mut self, t: usize, p: TriplePattern) {
        self.patterns[t] = p;
    }

    pub fn is_good(&self) -> bool {
        self.patterns.iter().all(|p| p.is_good())
    }

    /// First triple carrying `I` or `I^c`, if any.
    pub fn first_bad_triple(&self) -> Option<[usize; 3]> {
        self.patterns
            .iter()
            .position(|p| !p.is_good())
            .map(|t| self.idx.triples()[t])
    }

    pub(crate) fn require_good(&self) -> Result<()> {
        match self.first_bad_triple() {
            Some(t) => Err(Error::NotGoodChoice(t)),
            None => Ok(()),
        }
    }

    /// Implications on actual rows contributed by the `t`-th triple.
    pub fn arcs_of(&self, t: usize) -> Option<[(usize, usize); 2]> {
        let tri = self.idx.triples()[t];
        self.patterns[t]
            .implied_arcs()
            .map(|a| a.map(|(u, v)| (tri[u as usize], tri[v as usize])))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// A good, uniformly directed choice on five rows (0-indexed).
    pub fn example_five() -> Choice {
        use TriplePattern as P;
        Choice::from_fn(5, |t| match t {
            [0, 1, 2] | [0, 3, 4] | [1, 3, 4] | [2, 3, 4] => P::A1,
            _ => P::A2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_lookup() {
        let c = fixtures::example_five();
        assert!(c.is_good());
        assert_eq!(c.get(4, 0, 3), TriplePattern::A1);
        assert_eq!(c.arcs_of(0), Some([(0, 1), (0, 2)]));
        let mut bad = c.clone();
        bad.set(3, TriplePattern::I);
        assert_eq!(bad.first_bad_triple(), Some(c.indexer().triples()[3]));
        assert!(matches!(bad.require_good(), Err(Error::NotGoodChoice(_))));
        assert!(Choice::new(4, vec![TriplePattern::A1; 3]).is_err());
    }
}
