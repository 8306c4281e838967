//! JSON file formats. Rows and vertices are 1-indexed in files and 0-indexed
//! in memory; triple keys are written `"i,j,k"` with `i < j < k`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::choice::{Choice, TriplePattern};
use crate::combin::Indexer;
use crate::error::{Error, Result};
use crate::matrix::{ConfigPattern, MatrixFile, RMatrix};
use crate::tcm::{ClosedSetPartition, Tcm};

/// `{"m": 5, "patterns": {"1,2,3": 4, ...}}`; bit `p` of a selector picks the
/// member of pair `p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiceFile {
    pub m: usize,
    pub patterns: BTreeMap<String, u8>,
}

/// `{"m": 5, "edges": {"1,2,3": "1,2", ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TcmFile {
    pub m: usize,
    pub edges: BTreeMap<String, String>,
}

fn key(vs: &[usize]) -> String {
    vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn parse_key(text: &str, len: usize, m: usize) -> Result<Vec<usize>> {
    let vs = text
        .split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(v) if (1..=m).contains(&v) => Ok(v - 1),
            _ => Err(Error::Parse(format!("bad vertex {s:?} in key {text:?} for m = {m}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = vs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if vs.len() != len || sorted.len() != len {
        return Err(Error::Parse(format!("key {text:?} must list {len} distinct vertices")));
    }
    Ok(vs)
}

/// Every triple must appear exactly once.
fn by_triple<T: Clone>(m: usize, entries: &BTreeMap<String, T>) -> Result<Vec<([usize; 3], T)>> {
    let idx = Indexer::new(m);
    let mut out: Vec<Option<([usize; 3], T)>> = vec![None; idx.num_triples()];
    for (k, v) in entries {
        let t = parse_key(k, 3, m)?;
        let slot = idx.triple(t[0], t[1], t[2]);
        if out[slot].is_some() {
            return Err(Error::Parse(format!("triple {k:?} listed twice")));
        }
        out[slot] = Some((idx.triples()[slot], v.clone()));
    }
    out.into_iter()
        .enumerate()
        .map(|(t, e)| e.ok_or_else(|| Error::Parse(format!("triple {} missing", key(&idx.triples()[t])))))
        .collect()
}

impl From<&Choice> for ChoiceFile {
    fn from(b: &Choice) -> Self {
        let patterns = b
            .indexer()
            .triples()
            .iter()
            .zip(b.patterns())
            .map(|(t, p)| (key(t), p.selector()))
            .collect();
        ChoiceFile { m: b.m(), patterns }
    }
}

impl TryFrom<ChoiceFile> for Choice {
    type Error = Error;
    fn try_from(f: ChoiceFile) -> Result<Self> {
        let patterns = by_triple(f.m, &f.patterns)?
            .into_iter()
            .map(|(t, s)| TriplePattern::new(s).ok_or_else(|| Error::Parse(format!("selector {s} on {} is not in 0..8", key(&t)))))
            .collect::<Result<Vec<_>>>()?;
        Choice::new(f.m, patterns)
    }
}

impl From<&Tcm> for TcmFile {
    fn from(g: &Tcm) -> Self {
        let edges = (0..g.codes().len())
            .map(|t| (key(&g.indexer().triples()[t]), key(&g.chosen_edge(t))))
            .collect();
        TcmFile { m: g.m(), edges }
    }
}

impl TryFrom<TcmFile> for Tcm {
    type Error = Error;
    fn try_from(f: TcmFile) -> Result<Self> {
        let edges = by_triple(f.m, &f.edges)?;
        let mut it = edges.into_iter();
        let mut failure = None;
        let g = Tcm::from_fn(f.m, |_| {
            let (t, e) = it.next().expect("one entry per triple");
            match parse_key(&e, 2, f.m) {
                Ok(e) if t.contains(&e[0]) && t.contains(&e[1]) => [e[0], e[1]],
                _ => {
                    failure.get_or_insert_with(|| format!("edge {e:?} is not inside triple {}", key(&t)));
                    [t[0], t[1]]
                }
            }
        })?;
        match failure {
            Some(msg) => Err(Error::Parse(msg)),
            None => Ok(g),
        }
    }
}

pub fn choice_to_json(b: &Choice) -> Value {
    serde_json::to_value(ChoiceFile::from(b)).expect("plain data")
}

pub fn choice_from_json(text: &str) -> Result<Choice> {
    serde_json::from_str::<ChoiceFile>(text)?.try_into()
}

pub fn tcm_to_json(g: &Tcm) -> Value {
    serde_json::to_value(TcmFile::from(g)).expect("plain data")
}

pub fn tcm_from_json(text: &str) -> Result<Tcm> {
    serde_json::from_str::<TcmFile>(text)?.try_into()
}

/// `{"1,2": 3, ...}` over all pairs.
pub fn multiplicities_json(g: &Tcm) -> Value {
    let map: BTreeMap<String, u32> = g
        .indexer()
        .pairs()
        .iter()
        .zip(g.multiplicities())
        .map(|(p, &k)| (key(p), k))
        .collect();
    serde_json::to_value(map).expect("plain data")
}

/// Closed sets as lists of 1-indexed vertices.
pub fn closed_sets_json(p: &ClosedSetPartition) -> Value {
    Value::from(
        p.sets
            .iter()
            .map(|s| Value::from(s.iter().map(|v| v + 1).collect::<Vec<_>>()))
            .collect::<Vec<_>>(),
    )
}

pub fn matrix_to_json(a: &RMatrix) -> Value {
    serde_json::to_value(MatrixFile::from(a)).expect("plain data")
}

/// A builtin pattern name (`M`, `A1`, `A2`, `I`, `Ic`, `K2`, ...) or a matrix
/// in JSON form.
pub fn parse_pattern(text: &str) -> Result<ConfigPattern> {
    if let Some(p) = ConfigPattern::builtin(text.trim()) {
        return Ok(p);
    }
    let f: MatrixFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("{text:?} is neither a builtin pattern nor matrix JSON: {e}")))?;
    Ok(ConfigPattern::new(RMatrix::try_from(f)?))
}
