//! r-matrices, configuration containment and exact `forb(m, r, F)` search.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SearchStatus};

/// An `m`-rowed matrix over the alphabet `{0, ..., r-1}`, stored by columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    alphabet: u8,
    columns: Vec<Vec<u8>>,
}

impl RMatrix {
    pub fn new(rows: usize, alphabet: u8, columns: Vec<Vec<u8>>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidMatrix("alphabet must be positive".into()));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::InvalidMatrix(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            if let Some(&e) = col.iter().find(|&&e| e >= alphabet) {
                return Err(Error::InvalidMatrix(format!(
                    "entry {e} in column {j} outside alphabet 0..{alphabet}"
                )));
            }
        }
        Ok(RMatrix { rows, alphabet, columns })
    }

    /// Builds a matrix from row-major data, the way matrices are usually written down.
    pub fn from_rows(alphabet: u8, rows: &[&[u8]]) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let columns = (0..width).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        RMatrix::new(rows.len(), alphabet, columns)
    }

    pub fn empty(rows: usize, alphabet: u8) -> Self {
        RMatrix { rows, alphabet, columns: Vec::new() }
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<u8>] {
        &self.columns
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.columns[col][row]
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.columns.len());
        self.columns.iter().all(|c| seen.insert(c))
    }

    pub fn push_column(&mut self, col: Vec<u8>) -> Result<()> {
        if col.len() != self.rows || col.iter().any(|&e| e >= self.alphabet) {
            return Err(Error::InvalidMatrix("column does not fit matrix".into()));
        }
        self.columns.push(col);
        Ok(())
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> RMatrix {
        assert_eq!(perm.len(), self.rows);
        let columns = self
            .columns
            .iter()
            .map(|c| perm.iter().map(|&p| c[p]).collect())
            .collect();
        RMatrix { rows: self.rows, alphabet: self.alphabet, columns }
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> RMatrix {
        assert_eq!(perm.len(), self.columns.len());
        let columns = perm.iter().map(|&p| self.columns[p].clone()).collect();
        RMatrix { rows: self.rows, alphabet: self.alphabet, columns }
    }

    /// Appends a row filled with `fill` (which may widen the alphabet).
    pub fn with_extra_row(&self, fill: u8) -> RMatrix {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.push(fill);
                c
            })
            .collect();
        RMatrix { rows: self.rows + 1, alphabet: self.alphabet.max(fill + 1), columns }
    }
}

/// A forbidden pattern `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigPattern(RMatrix);

impl ConfigPattern {
    pub fn new(matrix: RMatrix) -> Self {
        ConfigPattern(matrix)
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.0
    }

    /// `M`: rows `01 / 01 / 10`.
    pub fn m() -> Self {
        Self::from_rows(&[&[0, 1], &[0, 1], &[1, 0]])
    }

    pub fn a1() -> Self {
        Self::from_rows(&[&[0, 0, 0], &[1, 0, 1], &[1, 1, 0]])
    }

    pub fn a2() -> Self {
        Self::from_rows(&[&[0, 0, 1], &[0, 1, 0], &[1, 1, 1]])
    }

    /// The 3x3 identity `I`.
    pub fn identity() -> Self {
        Self::from_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    /// `I^c`, the entrywise complement of the identity.
    pub fn identity_complement() -> Self {
        Self::from_rows(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
    }

    /// `K_k`: every (0,1)-column of length `k` exactly once, in lexicographic order.
    pub fn complete(k: usize) -> Self {
        assert!(k < 31, "K_k too large");
        let columns = (0..1u32 << k)
            .map(|bits| (0..k).map(|i| ((bits >> (k - 1 - i)) & 1) as u8).collect())
            .collect();
        ConfigPattern(RMatrix::new(k, 2, columns).expect("valid K_k"))
    }

    /// Recognises `M`, `A1`, `A2`, `I`, `Ic` and `K<k>`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "M" => Some(Self::m()),
            "A1" => Some(Self::a1()),
            "A2" => Some(Self::a2()),
            "I" => Some(Self::identity()),
            "Ic" => Some(Self::identity_complement()),
            _ => {
                let k: usize = name.strip_prefix('K')?.parse().ok()?;
                (1..=8).contains(&k).then(|| Self::complete(k))
            }
        }
    }

    fn from_rows(rows: &[&[u8]]) -> Self {
        ConfigPattern(RMatrix::from_rows(2, rows).expect("constant pattern"))
    }
}

/// JSON form of a matrix or pattern: `{"rows": m, "alphabet": r, "columns": [[..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub alphabet: u8,
    pub columns: Vec<Vec<u8>>,
}

impl From<&RMatrix> for MatrixFile {
    fn from(a: &RMatrix) -> Self {
        MatrixFile { rows: a.rows, alphabet: a.alphabet, columns: a.columns.clone() }
    }
}

impl TryFrom<MatrixFile> for RMatrix {
    type Error = Error;
    fn try_from(f: MatrixFile) -> Result<Self> {
        RMatrix::new(f.rows, f.alphabet, f.columns)
    }
}

/// Tracks, for every ordered selection of `k` rows, how far the current column
/// multiset is from covering the pattern's column multiset on those rows.
/// Adding or removing one column costs one pass over the selections.
struct Coverage {
    base: usize,
    selections: Vec<Vec<usize>>,
    slot_of: HashMap<usize, usize>,
    need: Vec<u32>,
    counts: Vec<u32>,
    deficit: Vec<u32>,
    covered: usize,
}

impl Coverage {
    fn new(num_rows: usize, base: usize, f: &RMatrix) -> Self {
        let k = f.num_rows();
        let mut slot_of = HashMap::new();
        let mut need = Vec::new();
        for col in f.columns() {
            let code = encode(col.iter().copied(), base);
            let slot = *slot_of.entry(code).or_insert_with(|| {
                need.push(0);
                need.len() - 1
            });
            need[slot] += 1;
        }
        let selections = ordered_selections(num_rows, k);
        let total: u32 = need.iter().sum();
        let covered = if total == 0 { selections.len() } else { 0 };
        Coverage {
            base,
            counts: vec![0; selections.len() * need.len()],
            deficit: vec![total; selections.len()],
            selections,
            slot_of,
            need,
            covered,
        }
    }

    fn contained(&self) -> bool {
        self.covered > 0
    }

    fn add(&mut self, col: &[u8]) {
        let slots = self.need.len();
        for (s, sel) in self.selections.iter().enumerate() {
            let code = encode(sel.iter().map(|&r| col[r]), self.base);
            if let Some(&slot) = self.slot_of.get(&code) {
                let c = &mut self.counts[s * slots + slot];
                if *c < self.need[slot] {
                    self.deficit[s] -= 1;
                    if self.deficit[s] == 0 {
                        self.covered += 1;
                    }
                }
                *c += 1;
            }
        }
    }

    fn remove(&mut self, col: &[u8]) {
        let slots = self.need.len();
        for (s, sel) in self.selections.iter().enumerate() {
            let code = encode(sel.iter().map(|&r| col[r]), self.base);
            if let Some(&slot) = self.slot_of.get(&code) {
                let c = &mut self.counts[s * slots + slot];
                *c -= 1;
                if *c < self.need[slot] {
                    if self.deficit[s] == 0 {
                        self.covered -= 1;
                    }
                    self.deficit[s] += 1;
                }
            }
        }
    }
}

fn encode(symbols: impl Iterator<Item = u8>, base: usize) -> usize {
    symbols.fold(0, |acc, s| acc * base + s as usize)
}

/// All ordered `k`-tuples of distinct rows of `0..n`.
fn ordered_selections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for r in 0..n {
            if !used[r] {
                used[r] = true;
                cur.push(r);
                go(n, k, cur, used, out);
                cur.pop();
                used[r] = false;
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, &mut Vec::new(), &mut vec![false; n], &mut out);
    }
    out
}

/// `F ≺ A`: some submatrix of `a` is a row and column permutation of `f`.
///
/// Row orders are enumerated explicitly. For a fixed ordered row selection the
/// compatibility between columns of `f` and columns of `a` is equality of the
/// restricted column, so an injection of `f`'s columns exists exactly when
/// every distinct column of `f` occurs at least as often among the restricted
/// columns of `a`.
pub fn contains_config(a: &RMatrix, f: &ConfigPattern) -> bool {
    let f = f.matrix();
    if f.num_rows() == 0 || f.num_columns() == 0 {
        return true;
    }
    if f.num_rows() > a.num_rows() || f.num_columns() > a.num_columns() {
        return false;
    }
    let base = a.alphabet().max(f.alphabet()) as usize;
    let mut cov = Coverage::new(a.num_rows(), base, f);
    for col in a.columns() {
        cov.add(col);
        if cov.contained() {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone)]
pub struct ForbOptions {
    /// Maximum number of search nodes before giving up with a lower bound.
    pub node_budget: u64,
    /// Refuse instances with more than this many candidate columns.
    pub max_candidates: usize,
}

impl Default for ForbOptions {
    fn default() -> Self {
        ForbOptions { node_budget: 200_000_000, max_candidates: 1 << 20 }
    }
}

#[derive(Debug, Clone)]
pub struct ForbResult {
    pub value: usize,
    pub witness: RMatrix,
    pub status: SearchStatus,
    pub nodes: u64,
}

/// Candidate columns for `forb_exact`: the all-`(r-1)` column first, then the
/// rest in lexicographic order (row 0 most significant).
pub fn candidate_columns(m: usize, r: u8) -> Vec<Vec<u8>> {
    let total = (r as usize).pow(m as u32);
    let mut out = Vec::with_capacity(total);
    out.push(vec![r - 1; m]);
    for code in 0..total - 1 {
        let mut col = vec![0u8; m];
        let mut c = code;
        for i in (0..m).rev() {
            col[i] = (c % r as usize) as u8;
            c /= r as usize;
        }
        out.push(col);
    }
    out
}

/// Exact `forb(m, r, F)` by depth-first search over candidate columns.
///
/// Each node decides one candidate column (include first, then exclude). A
/// column is only included if the partial matrix still avoids `f`, checked
/// incrementally. Subtrees that cannot beat the best matrix found so far are
/// cut off.
pub fn forb_exact(m: usize, r: u8, f: &ConfigPattern, opts: &ForbOptions) -> Result<ForbResult> {
    if m == 0 || r < 2 {
        return Err(Error::DomainError(format!("need m >= 1 and r >= 2, got m={m}, r={r}")));
    }
    let fm = f.matrix();
    if fm.num_rows() == 0 || fm.num_columns() == 0 {
        return Err(Error::DomainError("degenerate pattern is contained in every matrix".into()));
    }
    let total = (r as f64).powi(m as i32);
    if total > opts.max_candidates as f64 {
        return Err(Error::InfeasibleSize(format!(
            "{r}^{m} candidate columns exceeds the guard of {}",
            opts.max_candidates
        )));
    }
    let candidates = candidate_columns(m, r);
    let base = (r.max(fm.alphabet())) as usize;
    let mut search = ForbSearch {
        candidates: &candidates,
        cov: Coverage::new(m, base, fm),
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        budget: opts.node_budget,
        out_of_budget: false,
    };
    search.dfs(0);
    let witness = RMatrix::new(
        m,
        r,
        search.best.iter().map(|&i| candidates[i].clone()).collect(),
    )?;
    Ok(ForbResult {
        value: search.best.len(),
        witness,
        status: if search.out_of_budget { SearchStatus::LowerBound } else { SearchStatus::Exact },
        nodes: search.nodes,
    })
}

struct ForbSearch<'a> {
    candidates: &'a [Vec<u8>],
    cov: Coverage,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    out_of_budget: bool,
}

impl ForbSearch<'_> {
    fn dfs(&mut self, i: usize) {
        if self.out_of_budget {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let n = self.candidates.len();
        if i == n || self.chosen.len() + (n - i) <= self.best.len() {
            return;
        }
        let col = &self.candidates[i];
        self.cov.add(col);
        if !self.cov.contained() {
            self.chosen.push(i);
            self.dfs(i + 1);
            self.chosen.pop();
        }
        self.cov.remove(col);
        if self.chosen.len() + (n - i - 1) > self.best.len() {
            self.dfs(i + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Containment straight from the definition: every ordered row selection
    /// and every injective assignment of pattern columns.
    fn contains_brute(a: &RMatrix, f: &RMatrix) -> bool {
        fn inject(a: &RMatrix, f: &RMatrix, rows: &[usize], fc: usize, used: &mut Vec<bool>) -> bool {
            if fc == f.num_columns() {
                return true;
            }
            for ac in 0..a.num_columns() {
                if !used[ac] && rows.iter().enumerate().all(|(i, &r)| a.entry(r, ac) == f.entry(i, fc)) {
                    used[ac] = true;
                    if inject(a, f, rows, fc + 1, used) {
                        return true;
                    }
                    used[ac] = false;
                }
            }
            false
        }
        ordered_selections(a.num_rows(), f.num_rows())
            .iter()
            .any(|rows| inject(a, f, rows, 0, &mut vec![false; a.num_columns()]))
    }

    fn at_most_one_zero(m: usize) -> RMatrix {
        let mut cols = vec![vec![1u8; m]];
        for i in 0..m {
            let mut c = vec![1u8; m];
            c[i] = 0;
            cols.push(c);
        }
        RMatrix::new(m, 2, cols).unwrap()
    }

    #[test]
    fn pattern_constants() {
        let m = ConfigPattern::m();
        assert_eq!(m.matrix().columns(), &[vec![0, 0, 1], vec![1, 1, 0]]);
        let a1 = ConfigPattern::a1();
        assert_eq!(a1.matrix().columns(), &[vec![0, 1, 1], vec![0, 0, 1], vec![0, 1, 0]]);
        let a2 = ConfigPattern::a2();
        assert_eq!(a2.matrix().columns(), &[vec![0, 0, 1], vec![0, 1, 1], vec![1, 0, 1]]);
        let k3 = ConfigPattern::complete(3);
        assert_eq!(k3.matrix().num_columns(), 8);
        assert!(k3.matrix().is_simple());
        assert_eq!(ConfigPattern::builtin("K2"), Some(ConfigPattern::complete(2)));
        assert_eq!(ConfigPattern::builtin("Ic"), Some(ConfigPattern::identity_complement()));
        assert_eq!(ConfigPattern::builtin("Q"), None);
    }

    #[test]
    fn invalid_entries_rejected() {
        assert!(RMatrix::new(2, 2, vec![vec![0, 2]]).is_err());
        assert!(RMatrix::new(2, 2, vec![vec![0]]).is_err());
    }

    #[test]
    fn containment_examples() {
        let m = ConfigPattern::m();
        assert!(contains_config(m.matrix(), &m));
        assert!(!contains_config(&at_most_one_zero(4), &m));
        let k3 = ConfigPattern::complete(3);
        assert!(contains_brute(k3.matrix(), m.matrix()));
        assert!(contains_config(k3.matrix(), &m));
    }

    #[test]
    fn degenerate_pattern_always_contained() {
        let empty = ConfigPattern::new(RMatrix::empty(3, 2));
        assert!(contains_config(&RMatrix::empty(0, 2), &empty));
        let no_rows = ConfigPattern::new(RMatrix::new(0, 2, vec![vec![], vec![]]).unwrap());
        assert!(contains_config(&at_most_one_zero(2), &no_rows));
    }

    #[test]
    fn repeated_pattern_columns_need_multiplicity() {
        let f = ConfigPattern::new(RMatrix::from_rows(2, &[&[0, 0]]).unwrap());
        let once = RMatrix::from_rows(2, &[&[0, 1]]).unwrap();
        let twice = RMatrix::from_rows(2, &[&[0, 1, 0]]).unwrap();
        assert!(!contains_config(&once, &f));
        assert!(contains_config(&twice, &f));
    }

    #[test]
    fn forb_small_values() {
        let opts = ForbOptions::default();
        let r = forb_exact(2, 2, &ConfigPattern::complete(2), &opts).unwrap();
        assert_eq!(r.value, 3);
        assert!(r.status.is_exact());
        assert!(!contains_config(&r.witness, &ConfigPattern::complete(2)));
        let r = forb_exact(2, 2, &ConfigPattern::m(), &opts).unwrap();
        assert_eq!(r.value, 4);
        let r = forb_exact(2, 3, &ConfigPattern::m(), &opts).unwrap();
        assert_eq!(r.value, 9);
    }

    #[test]
    fn forb_m_at_three_rows_three_symbols() {
        let r = forb_exact(3, 3, &ConfigPattern::m(), &ForbOptions::default()).unwrap();
        assert_eq!(r.value, 24);
        assert!(r.witness.is_simple());
        assert!(!contains_config(&r.witness, &ConfigPattern::m()));
    }

    #[test]
    fn forb_guard_and_budget() {
        let opts = ForbOptions { node_budget: 10, max_candidates: 1 << 20 };
        let r = forb_exact(3, 3, &ConfigPattern::m(), &opts).unwrap();
        assert_eq!(r.status, SearchStatus::LowerBound);
        assert!(r.value <= 24);
        let tight = ForbOptions { node_budget: 10, max_candidates: 8 };
        assert!(matches!(
            forb_exact(3, 3, &ConfigPattern::m(), &tight),
            Err(Error::InfeasibleSize(_))
        ));
    }

    #[test]
    fn candidate_order() {
        let c = candidate_columns(2, 2);
        assert_eq!(c, vec![vec![1, 1], vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn incremental_matches_brute_force_on_small_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let patterns = [ConfigPattern::m(), ConfigPattern::identity(), ConfigPattern::complete(2), ConfigPattern::a1()];
        for _ in 0..300 {
            let rows = rng.gen_range(2..=4);
            let cols = rng.gen_range(0..=6);
            let r = rng.gen_range(2..=3u8);
            let columns = (0..cols).map(|_| (0..rows).map(|_| rng.gen_range(0..r)).collect()).collect();
            let a = RMatrix::new(rows, r, columns).unwrap();
            for f in &patterns {
                assert_eq!(contains_config(&a, f), contains_brute(&a, f.matrix()));
            }
        }
    }
}
