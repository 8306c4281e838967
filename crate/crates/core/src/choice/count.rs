//! Valid columns of a choice on a row set, three ways of counting them, and
//! the resulting value `forb(m, r, B)`.

use num::bigint::BigUint;
use num::Zero;

use super::graph::ImplicationGraph;
use super::Choice;
use crate::combin::{mask_elements, subsets_by_size};
use crate::error::{Error, Result};
use crate::matrix::RMatrix;

#[derive(Debug, Clone)]
pub struct CountOptions {
    /// Largest row set enumerated column by column.
    pub max_brute_rows: usize,
    /// Largest `m` for sums over all `2^m` row sets.
    pub max_m: usize,
    /// Largest witness matrix built, in columns.
    pub max_witness_columns: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { max_brute_rows: 24, max_m: 12, max_witness_columns: 1 << 20 }
    }
}

/// Triples inside `x` with the set of role masks their pattern forbids.
fn constraints(b: &Choice, x: u32) -> Vec<([usize; 3], u8)> {
    b.indexer()
        .triples()
        .iter()
        .zip(b.patterns())
        .filter(|(t, _)| t.iter().all(|&v| x >> v & 1 == 1))
        .map(|(&t, p)| (t, p.forbidden()))
        .collect()
}

fn is_valid(col: u32, cons: &[([usize; 3], u8)]) -> bool {
    cons.iter().all(|&([i, j, k], forbidden)| {
        let v = (col >> i & 1) | (col >> j & 1) << 1 | (col >> k & 1) << 2;
        forbidden >> v & 1 == 0
    })
}

fn submasks(x: u32) -> impl Iterator<Item = u32> {
    // All submasks of x in increasing numeric order.
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == x { None } else { Some(((cur | !x).wrapping_add(1)) & x) };
        Some(cur)
    })
}

fn check_rows(x: u32) -> Result<()> {
    let rows = x.count_ones() as usize;
    if rows > CountOptions::default().max_brute_rows {
        return Err(Error::InfeasibleSize(format!("{rows} rows is too many to enumerate columns")));
    }
    Ok(())
}

/// Valid (0,1)-columns on the rows of `x`, each given by the set of rows
/// holding a 1. A column is valid when on no triple inside `x` it equals one
/// of the triple's pattern columns.
pub fn valid_columns(b: &Choice, x: u32) -> Result<Vec<u32>> {
    check_rows(x)?;
    let cons = constraints(b, x);
    Ok(submasks(x).filter(|&c| is_valid(c, &cons)).collect())
}

/// `c(B, X)` by enumeration.
pub fn count_valid(b: &Choice, x: u32) -> Result<u64> {
    check_rows(x)?;
    let cons = constraints(b, x);
    Ok(submasks(x).filter(|&c| is_valid(c, &cons)).count() as u64)
}

/// `c(B, X) = n_t + t + 1` from the strongly connected components of the
/// implication graph; only valid for good choices.
pub fn c_scc(b: &Choice, x: u32) -> Result<u64> {
    b.require_good()?;
    Ok(c_scc_unchecked(b, x))
}

pub(crate) fn c_scc_unchecked(b: &Choice, x: u32) -> u64 {
    let (t, n_t) = ImplicationGraph::new(b, x).component_counts();
    (n_t + t + 1) as u64
}

/// `|X| + b(B, X) - s(B, X) + 1`, an upper bound on `c(B, X)` for any choice.
pub fn block_bound(b: &Choice, x: u32) -> usize {
    ImplicationGraph::new(b, x).closure(b).blocks(b).bound()
}

/// `c(B, X)` with the component formula when every triple inside `x` is good.
pub(crate) fn count_fast(b: &Choice, x: u32) -> u64 {
    let all_good = b
        .indexer()
        .triples()
        .iter()
        .zip(b.patterns())
        .all(|(t, p)| p.is_good() || !t.iter().all(|&v| x >> v & 1 == 1));
    if all_good {
        c_scc_unchecked(b, x)
    } else {
        let cons = constraints(b, x);
        submasks(x).filter(|&c| is_valid(c, &cons)).count() as u64
    }
}

/// `sum over |X| = k of c(B, X)`, for `k = 0..=m`.
pub(crate) fn counts_by_size(b: &Choice) -> Vec<u64> {
    let mut out = vec![0u64; b.m() + 1];
    for x in subsets_by_size(b.m()) {
        out[x.count_ones() as usize] += count_fast(b, x);
    }
    out
}

pub(crate) fn combine(counts: &[u64], r: u64) -> BigUint {
    let m = counts.len() - 1;
    let base = BigUint::from(r - 2);
    counts.iter().enumerate().fold(BigUint::zero(), |acc, (k, &c)| {
        acc + BigUint::from(c) * num::pow(base.clone(), m - k)
    })
}

/// `forb(m, r, B) = sum over X of c(B, X) (r-2)^(m-|X|)`.
pub fn forb_from_choice(r: u64, b: &Choice, opts: &CountOptions) -> Result<BigUint> {
    if r < 2 {
        return Err(Error::DomainError(format!("need r >= 2, got {r}")));
    }
    if b.m() > opts.max_m {
        return Err(Error::InfeasibleSize(format!(
            "m = {} exceeds the subset-sum guard of {}",
            b.m(),
            opts.max_m
        )));
    }
    Ok(combine(&counts_by_size(b), r))
}

/// The simple matrix of all columns that are a valid column on some `X` and
/// take values in `{2, ..., r-1}` outside `X`; it has `forb(m, r, B)` columns
/// and avoids `M`.
pub fn forb_witness(r: u8, b: &Choice, opts: &CountOptions) -> Result<RMatrix> {
    let total = forb_from_choice(r as u64, b, opts)?;
    if total > BigUint::from(opts.max_witness_columns) {
        return Err(Error::InfeasibleSize(format!("witness would have {total} columns")));
    }
    let m = b.m();
    let mut a = RMatrix::empty(m, r);
    for x in subsets_by_size(m) {
        let outside: Vec<usize> = (0..m).filter(|&i| x >> i & 1 == 0).collect();
        let fillings = (r as usize - 2).pow(outside.len() as u32);
        for col in valid_columns(b, x)? {
            for mut f in 0..fillings {
                let mut c = vec![0u8; m];
                for i in mask_elements(x) {
                    c[i] = (col >> i & 1) as u8;
                }
                for &i in &outside {
                    c[i] = 2 + (f % (r as usize - 2)) as u8;
                    f /= r as usize - 2;
                }
                a.push_column(c)?;
            }
        }
    }
    debug_assert_eq!(BigUint::from(a.num_columns()), total);
    Ok(a)
}
