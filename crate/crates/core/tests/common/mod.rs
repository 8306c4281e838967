//! Brute-force reference implementations, written without the library's
//! search or counting code.

#![allow(dead_code)]

use forbcfg::{Choice, RMatrix, Tcm};

/// Ordered selections of `k` distinct items from `0..n`.
pub fn injections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut out);
    out
}

/// Whether some rows and columns of `a`, in some order, spell out `f`.
pub fn contains_brute(a: &RMatrix, f: &RMatrix) -> bool {
    if f.num_rows() > a.num_rows() || f.num_columns() > a.num_columns() {
        return false;
    }
    let cols = injections(a.num_columns(), f.num_columns());
    injections(a.num_rows(), f.num_rows()).iter().any(|rows| {
        cols.iter().any(|cs| {
            (0..f.num_rows()).all(|i| (0..f.num_columns()).all(|j| a.entry(rows[i], cs[j]) == f.entry(i, j)))
        })
    })
}

/// `[[0,1],[0,1],[1,0]]`.
pub fn m_matrix() -> RMatrix {
    RMatrix::from_rows(2, &[&[0, 1], &[0, 1], &[1, 0]]).unwrap()
}

/// The three columns a selector places on roles (first, second, third), as
/// masks of the roles holding a 1.
pub fn pattern_columns(selector: u8) -> [u8; 3] {
    const PAIRS: [[u8; 2]; 3] = [[0b001, 0b110], [0b010, 0b101], [0b100, 0b011]];
    [0, 1, 2].map(|p| PAIRS[p][(selector >> p & 1) as usize])
}

/// `c(B, X)`: (0,1)-columns on the rows of `x` that show none of a
/// triple's three pattern columns on that triple.
pub fn count_valid_brute(b: &Choice, x: u32) -> u64 {
    let m = b.m();
    let rows: Vec<usize> = (0..m).filter(|&i| x >> i & 1 == 1).collect();
    let mut count = 0;
    for bits in 0u32..1 << rows.len() {
        let col = |v: usize| bits >> rows.iter().position(|&r| r == v).unwrap() & 1;
        let mut ok = true;
        for (t, p) in b.indexer().triples().iter().zip(b.patterns()) {
            if !t.iter().all(|&v| x >> v & 1 == 1) {
                continue;
            }
            let v = (col(t[0]) | col(t[1]) << 1 | col(t[2]) << 2) as u8;
            if pattern_columns(p.selector()).contains(&v) {
                ok = false;
                break;
            }
        }
        count += ok as u64;
    }
    count
}

/// `sum over X of c(B, X) (r-2)^(m-|X|)`.
pub fn forb_of_choice_brute(b: &Choice, r: u64) -> u128 {
    let m = b.m();
    (0u32..1 << m)
        .map(|x| count_valid_brute(b, x) as u128 * ((r - 2) as u128).pow(m as u32 - x.count_ones()))
        .sum()
}

/// `forb(m, r, M)` as the maximum over every choice, by plain enumeration,
/// and the maximum over good choices only.
pub fn forb_via_all_choices_brute(m: usize, r: u64) -> (u128, u128) {
    let t = m * (m - 1) * (m - 2) / 6;
    let (mut best, mut best_good) = (0, 0);
    for code in 0u64..8u64.pow(t as u32) {
        let mut c = code;
        let b = Choice::from_fn(m, |_| {
            let s = (c % 8) as u8;
            c /= 8;
            forbcfg::TriplePattern::new(s).unwrap()
        });
        let v = forb_of_choice_brute(&b, r);
        best = best.max(v);
        if b.is_good() {
            best_good = best_good.max(v);
        }
    }
    (best, best_good)
}

/// Sorted triples of `0..m` in lexicographic order.
pub fn triples(m: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Pair multiplicities `mult[x][y]` of a TCM given by local edge codes
/// (0 = ab, 1 = ac, 2 = bc of each sorted triple in lexicographic order).
pub fn multiplicities_from_codes(m: usize, codes: &[u8]) -> Vec<Vec<u32>> {
    let mut mult = vec![vec![0u32; m]; m];
    for (&[a, b, c], &code) in triples(m).iter().zip(codes) {
        let (x, y) = [(a, b), (a, c), (b, c)][code as usize];
        mult[x][y] += 1;
        mult[y][x] += 1;
    }
    mult
}

pub fn weight_brute(m: usize, codes: &[u8], alpha: u128) -> u128 {
    let mult = multiplicities_from_codes(m, codes);
    let mut w = 0;
    for x in 0..m {
        for y in x + 1..m {
            w += alpha.pow(mult[x][y]);
        }
    }
    w
}

/// `H(m, alpha)` over all `3^C(m,3)` TCMs.
pub fn h_brute(m: usize, alpha: u128) -> u128 {
    let t = triples(m).len();
    let mut codes = vec![0u8; t];
    let mut best = 0;
    loop {
        best = best.max(weight_brute(m, &codes, alpha));
        let mut i = 0;
        while i < t && codes[i] == 2 {
            codes[i] = 0;
            i += 1;
        }
        if i == t {
            return best;
        }
        codes[i] += 1;
    }
}

/// `H2(m, alpha)` for `m = 1..=n` by the split recurrence, in `u128`.
pub fn h2_brute(n: usize, alpha: u128) -> Vec<u128> {
    let mut h = vec![0u128; n + 1];
    for m in 2..=n {
        h[m] = (1..m)
            .map(|a| h[a] * alpha.pow((m - a) as u32) + h[m - a] * alpha.pow(a as u32) + (a * (m - a)) as u128)
            .max()
            .unwrap();
    }
    h
}

/// Whether every triple with two vertices in `s` and one outside chooses the inner pair.
pub fn is_closed_brute(g: &Tcm, s: u32) -> bool {
    let m = g.m();
    triples(m).iter().all(|tri| {
        let inside: Vec<usize> = tri.iter().copied().filter(|&v| s >> v & 1 == 1).collect();
        inside.len() != 2 || g.edge_of(tri[0], tri[1], tri[2]) == [inside[0], inside[1]]
    })
}

/// Maximal proper closed sets (the whole set when `m <= 1`), each sorted,
/// listed by smallest element.
pub fn maximal_closed_sets_brute(g: &Tcm) -> Vec<Vec<usize>> {
    let m = g.m();
    if m <= 1 {
        return vec![(0..m).collect()];
    }
    let full = (1u32 << m) - 1;
    let closed: Vec<u32> = (1..full).filter(|&s| is_closed_brute(g, s)).collect();
    let mut out: Vec<Vec<usize>> = closed
        .iter()
        .filter(|&&s| !closed.iter().any(|&t| t != s && t & s == s))
        .map(|&s| (0..m).filter(|&v| s >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}
