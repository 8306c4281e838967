//! `H2(m, alpha)` by dynamic programming over splits `m = a + b`.

use serde::Serialize;

use crate::scalar::{power_table, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct H2Row<S> {
    pub m: usize,
    pub value: S,
    /// Every maximising split `(a, b)` with `a <= b`, smallest `a` first.
    /// Empty for `m = 1`.
    pub splits: Vec<(usize, usize)>,
}

impl<S> H2Row<S> {
    /// The maximising split with the smallest first part.
    pub fn split(&self) -> Option<(usize, usize)> {
        self.splits.first().copied()
    }
}

#[derive(Debug, Clone)]
pub struct H2Table<S> {
    alpha: S,
    pow: Vec<S>,
    rows: Vec<H2Row<S>>,
}

/// `H2(m, alpha)` for `m = 1..=m_max`, where
/// `H2(m) = max over a + b = m of H2(a) alpha^b + H2(b) alpha^a + ab`.
pub fn h2_table<S: Scalar>(m_max: usize, alpha: &S) -> H2Table<S> {
    let pow = power_table(alpha, m_max);
    let mut rows: Vec<H2Row<S>> = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut best: Option<S> = None;
        let mut splits = Vec::new();
        for a in 1..=m / 2 {
            let b = m - a;
            let v = split_value(&rows, &pow, a, b);
            match &best {
                Some(cur) if cur.beats(&v) => {}
                Some(cur) if cur.ties(&v) => splits.push((a, b)),
                _ => {
                    best = Some(v);
                    splits = vec![(a, b)];
                }
            }
        }
        rows.push(H2Row { m, value: best.unwrap_or_else(S::zero), splits });
    }
    H2Table { alpha: alpha.clone(), pow, rows }
}

fn split_value<S: Scalar>(rows: &[H2Row<S>], pow: &[S], a: usize, b: usize) -> S {
    rows[a - 1].value.clone() * pow[b].clone()
        + rows[b - 1].value.clone() * pow[a].clone()
        + S::from_usize_exact(a * b)
}

impl<S: Scalar> H2Table<S> {
    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn m_max(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[H2Row<S>] {
        &self.rows
    }

    pub fn row(&self, m: usize) -> &H2Row<S> {
        &self.rows[m - 1]
    }

    pub fn value(&self, m: usize) -> &S {
        &self.rows[m - 1].value
    }

    /// The recurrence evaluated at a given split, whether or not it is optimal.
    pub fn value_at_split(&self, a: usize, b: usize) -> S {
        split_value(&self.rows, &self.pow, a, b)
    }

    /// `h2(m) = 2 H2(m) / (m alpha^m)`, computed from the stored value.
    pub fn normalized(&self, m: usize) -> f64 {
        let den = S::from_usize_exact(m) * self.pow[m].clone();
        2.0 * self.value(m).ratio_f64(&den)
    }

    /// Whether `(a, m - a)` (in either order) attains `H2(m)`.
    pub fn is_optimal_split(&self, m: usize, a: usize) -> bool {
        let a = a.min(m - a);
        self.row(m).splits.iter().any(|&(x, _)| x == a)
    }
}

/// The split singled out by the power-of-two rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedSplit {
    /// `k` with `2^k + 2^(k-1) <= m < 2^k + 2^(k+1)`, or the value given
    /// for `m = 6`.
    pub k: u32,
    /// `(a, b)` with `a <= b`.
    pub split: (usize, usize),
    /// `m = 6`, where `2^k` exceeds `m` and the split is taken directly.
    pub six_exception: bool,
}

/// Threshold for the `m = 6` case: `1 + sqrt(2)`.
pub const SIX_THRESHOLD: f64 = 1.0 + std::f64::consts::SQRT_2;

/// Predicted optimal split for `m >= 3` and `alpha >= 2`.
///
/// For `m = 6` the stated `k` (3 below `1 + sqrt 2`, 4 above) is reported
/// as is, with the split `3 + 3` resp. `2 + 4`.
pub fn predicted_split(m: usize, alpha: f64) -> Option<PredictedSplit> {
    if m < 3 || alpha < 2.0 {
        return None;
    }
    if m == 6 {
        let (k, split) = if alpha < SIX_THRESHOLD { (3, (3, 3)) } else { (4, (2, 4)) };
        return Some(PredictedSplit { k, split, six_exception: true });
    }
    let k = power_of_two_index(m);
    let a = 1usize << k;
    let split = (a.min(m - a), a.max(m - a));
    Some(PredictedSplit { k, split, six_exception: false })
}

/// The unique `k >= 1` with `2^k + 2^(k-1) <= m < 2^k + 2^(k+1)`, for `m >= 3`.
pub fn power_of_two_index(m: usize) -> u32 {
    debug_assert!(m >= 3);
    (1..usize::BITS)
        .find(|&k| {
            let p = 1usize << k;
            p + p / 2 <= m && m < 3 * p
        })
        .expect("m >= 3")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;
    use num::rational::BigRational;

    #[test]
    fn small_values() {
        let t = h2_table(8, &BigInt::from(2));
        let got: Vec<BigInt> = t.rows().iter().map(|r| r.value.clone()).collect();
        let want: Vec<BigInt> = [0, 1, 4, 12, 30, 73, 172, 400].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(got, want);
        assert_eq!(t.row(6).splits, vec![(3, 3)]);
        assert_eq!(t.row(1).split(), None);
        assert_eq!(t.row(2).split(), Some((1, 1)));
    }

    #[test]
    fn three_rows_is_alpha_plus_two() {
        for a in [1u64, 2, 3, 7] {
            assert_eq!(*h2_table(3, &a).value(3), a + 2);
        }
        let half = BigRational::new(3.into(), 2.into());
        assert_eq!(*h2_table(3, &half).value(3), BigRational::new(7.into(), 2.into()));
    }

    #[test]
    fn float_and_exact_agree() {
        let exact = h2_table(40, &BigInt::from(3));
        let float = h2_table(40, &3.0f64);
        for m in 1..=40 {
            let e = exact.value(m).to_f64_lossy();
            // Float ties are decided within a relative 1e-9.
            assert!((e - float.value(m)).abs() <= 1e-8 * e.max(1.0));
            for s in &exact.row(m).splits {
                assert!(float.row(m).splits.contains(s), "m={m}");
            }
        }
    }

    #[test]
    fn power_of_two_rule() {
        assert_eq!(power_of_two_index(3), 1);
        assert_eq!(power_of_two_index(5), 1);
        assert_eq!(power_of_two_index(7), 2);
        assert_eq!(power_of_two_index(11), 2);
        assert_eq!(predicted_split(12, 2.0).unwrap().split, (4, 8));
        assert_eq!(predicted_split(12, 2.0).unwrap().k, 3);
        assert_eq!(predicted_split(24, 2.0).unwrap().k, 4);
        assert_eq!(predicted_split(6, 2.0).unwrap().split, (3, 3));
        assert_eq!(predicted_split(6, 3.0).unwrap().split, (2, 4));
        assert_eq!(predicted_split(2, 2.0), None);
        assert_eq!(predicted_split(5, 1.5), None);
    }

    #[test]
    fn normalization_stays_finite() {
        let t = h2_table(300, &BigInt::from(2));
        let h = t.normalized(300);
        assert!(h.is_finite() && h > 0.3 && h < 0.5);
        assert!((h2_table(4, &2u64).normalized(4) - 0.375).abs() < 1e-15);
    }
}
