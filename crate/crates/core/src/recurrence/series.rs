//! `g(k, alpha) = sum_{j=1}^k 2^(j-1) / alpha^(2^j)` and its limit `lambda(alpha)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::FieldScalar;

/// `g(k, alpha)` in the arithmetic of `S`.
pub fn g_partial<S: FieldScalar>(k: u32, alpha: &S) -> Result<S> {
    if *alpha <= S::one() {
        return Err(Error::DivergentParameter(alpha.to_f64_lossy()));
    }
    let mut sum = S::zero();
    let mut coef = S::one();
    let mut denom = alpha.clone() * alpha.clone();
    for _ in 0..k {
        sum = sum + coef.clone() / denom.clone();
        coef = coef.clone() + coef;
        denom = denom.clone() * denom;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaValue {
    pub value: f64,
    /// Number of terms summed.
    pub terms: u32,
    /// Proven bound on the omitted tail.
    pub tail_bound: f64,
}

/// Largest number of terms `lambda` will sum before giving up.
const MAX_TERMS: u32 = 1024;

/// `lambda(alpha)` to within `eps`. Terms are summed until the next term is
/// below `eps / 2` and the geometric bound on the tail,
/// `T_{k+1} / (1 - 2 / alpha^(2^(k+1)))`, is below `eps / 2` as well.
pub fn lambda(alpha: f64, eps: f64) -> Result<LambdaValue> {
    if !(alpha > 1.0) {
        return Err(Error::DivergentParameter(alpha));
    }
    if !(eps > 0.0) {
        return Err(Error::DomainError(format!("eps must be positive, got {eps}")));
    }
    let ln_a = alpha.ln();
    let ln_term = |j: u32| (j as f64 - 1.0) * std::f64::consts::LN_2 - (2f64).powi(j as i32) * ln_a;
    let mut value = 0.0;
    for k in 0..MAX_TERMS {
        let next = ln_term(k + 1).exp();
        // Ratio of consecutive terms from T_{k+1} on is at most 2 / alpha^(2^(k+1)).
        let ratio = (std::f64::consts::LN_2 - (2f64).powi(k as i32 + 1) * ln_a).exp();
        if ratio < 1.0 {
            let tail = next / (1.0 - ratio);
            if next < eps / 2.0 && tail < eps / 2.0 {
                return Ok(LambdaValue { value, terms: k, tail_bound: tail });
            }
        }
        value += next;
    }
    Err(Error::InfeasibleSize(format!("lambda({alpha}) did not reach eps = {eps} in {MAX_TERMS} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    #[test]
    fn two_terms() {
        assert_eq!(g_partial(2, &2.0f64).unwrap(), 0.375);
        let two = BigRational::from_integer(2.into());
        assert_eq!(g_partial(2, &two).unwrap(), BigRational::new(3.into(), 8.into()));
        assert_eq!(g_partial(0, &3.0f64).unwrap(), 0.0);
    }

    #[test]
    fn lambda_two() {
        let l = lambda(2.0, 1e-6).unwrap();
        assert!((l.value - 0.390747).abs() < 1e-6);
        assert!(l.tail_bound < 5e-7);
        let tight = lambda(2.0, 1e-9).unwrap();
        assert!(tight.terms <= 6);
        assert!((tight.value - l.value).abs() < 1e-6);
    }

    #[test]
    fn partial_sums_sandwich_the_limit() {
        for alpha in [1.5f64, 2.0, 3.0, 10.0] {
            let l = lambda(alpha, 1e-12).unwrap();
            let mut prev = 0.0;
            for k in 1..12 {
                let g = g_partial(k, &alpha).unwrap();
                assert!(g >= prev && g <= l.value + 1e-12);
                let next_t = 2f64.powi(k as i32) / alpha.powf(2f64.powi(k as i32 + 1));
                let q = 2.0 / alpha.powf(2f64.powi(k as i32 + 1));
                if q < 1.0 {
                    assert!(l.value - g <= next_t / (1.0 - q) + 1e-12, "alpha={alpha} k={k}");
                }
                prev = g;
            }
        }
    }

    #[test]
    fn divergent_parameters() {
        assert!(matches!(lambda(1.0, 1e-6), Err(Error::DivergentParameter(_))));
        assert!(matches!(g_partial(3, &0.5f64), Err(Error::DivergentParameter(_))));
        assert!(lambda(2.0, 0.0).is_err());
        assert!(lambda(f64::NAN, 1e-6).is_err());
    }
}
