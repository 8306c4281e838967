//! Closed-form bounds on `forb(m, r, M)` and `H(m, alpha)`, and the check of
//! the two-sided relation between `forb(m, r, M)`, `H2` and `H`.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::build::build_from_table;
use super::series::lambda;
use super::table::h2_table;
use crate::choice::{choice_from_tcm, forb_from_choice, forb_via_choices, ChoiceMode, ChoiceSearchOptions, CountOptions};
use crate::error::{Error, Result, SearchStatus};
use crate::matrix::{forb_exact, ConfigPattern, ForbOptions};
use crate::tcm::{h_exact_rational, HExactOptions};

fn int(v: u64) -> BigInt {
    BigInt::from(v)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `alpha_r = (r - 1) / (r - 2)`.
pub fn alpha_r(r: u64) -> Result<BigRational> {
    if r < 3 {
        return Err(Error::DomainError(format!("alpha_r needs r >= 3, got {r}")));
    }
    Ok(BigRational::new(int(r - 1), int(r - 2)))
}

/// `(alpha^6 + alpha^4 + alpha + 1) / (alpha^6 (alpha^2 - 1))`, for `alpha >= 2`.
pub fn general_upper_coefficient(alpha: &BigRational) -> Result<BigRational> {
    if *alpha < BigRational::from_integer(2.into()) {
        return Err(Error::DomainError(format!("the coefficient needs alpha >= 2, got {alpha}")));
    }
    let a2 = alpha * alpha;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let one = BigRational::one();
    Ok((&a6 + &a4 + alpha + &one) / (&a6 * (a2 - one)))
}

/// `83/192 * m * 2^(m-1)`, the upper bound on `H(m, 2)`.
pub fn h_upper_alpha2(m: usize) -> BigRational {
    if m == 0 {
        return BigRational::zero();
    }
    rat(83, 192) * BigRational::from_integer(BigInt::from(m) * num::pow(int(2), m - 1))
}

/// Bounds evaluated for a given `(m, r)` and `alpha` (default `alpha_r`).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub m: usize,
    pub r: u64,
    pub alpha: BigRational,
    /// `m (r-1)^(m-1) + (r-1)^m`.
    pub eq1_lower: BigInt,
    /// `floor(3/2 m (r-1)^(m-1)) + (r-1)^m`.
    pub eq1_upper: BigInt,
    /// `83/192 m 2^(m-1)`, an upper bound on `H(m, 2)`.
    pub h_upper: BigRational,
    /// `(1 + 83/192) m (r-1)^(m-1) + (r-1)^m`.
    pub forb_upper: BigRational,
    pub lambda: f64,
    pub eps: f64,
    /// `(r-1) / (2 (r-2)^2) * lambda(alpha)`.
    pub lower_rider: f64,
    /// `1 + lower_rider - eps`: for large `m`, `forb >= coefficient m (r-1)^(m-1) + (r-1)^m`.
    pub forb_lower_coefficient: f64,
    /// Defined for `alpha >= 2`.
    pub general_upper_coefficient: Option<BigRational>,
    /// `coefficient * m alpha^m / 2`, an upper bound on `H(m, alpha)` for `m >= 3`.
    pub general_h_upper: Option<BigRational>,
    pub h2: BigRational,
    /// `H2(m, alpha) (r-2)^(m-2) + (r-1)^m + m (r-1)^(m-1)`.
    pub sandwich_lower: BigRational,
    /// Same with `H` replaced by its closed-form upper bound, when available.
    pub sandwich_upper: Option<BigRational>,
    /// The coefficient at `alpha = 2` reproduces `83/192`.
    pub coefficient_matches: bool,
}

pub const DEFAULT_EPS: f64 = 1e-3;

pub fn bounds(m: usize, r: u64, alpha_override: Option<BigRational>) -> Result<BoundReport> {
    bounds_with_eps(m, r, alpha_override, DEFAULT_EPS)
}

pub fn bounds_with_eps(m: usize, r: u64, alpha_override: Option<BigRational>, eps: f64) -> Result<BoundReport> {
    if r < 3 {
        return Err(Error::DomainError(format!("forb bounds need r >= 3, got {r}")));
    }
    if m == 0 {
        return Err(Error::DomainError("bounds need m >= 1".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::DomainError(format!("eps must be positive, got {eps}")));
    }
    let alpha = match alpha_override {
        Some(a) if a <= BigRational::one() => {
            return Err(Error::DomainError(format!("alpha must exceed 1, got {a}")));
        }
        Some(a) => a,
        None => alpha_r(r)?,
    };
    let r1 = int(r - 1);
    let lead = BigInt::from(m) * num::pow(r1.clone(), m - 1);
    let full = num::pow(r1.clone(), m);
    let eq1_lower = &lead + &full;
    let eq1_upper = (BigInt::from(3) * &lead) / BigInt::from(2) + &full;
    let lead_q = BigRational::from_integer(lead.clone());
    let full_q = BigRational::from_integer(full.clone());
    let forb_upper = (BigRational::one() + rat(83, 192)) * &lead_q + &full_q;

    let alpha_f = alpha.to_f64().unwrap_or(f64::NAN);
    let lam = lambda(alpha_f, eps / 10.0)?.value;
    let lower_rider = (r - 1) as f64 / (2.0 * ((r - 2) as f64).powi(2)) * lam;

    let coefficient = general_upper_coefficient(&alpha).ok();
    let general_h_upper = coefficient.as_ref().filter(|_| m >= 3).map(|c| {
        c * BigRational::from_integer(BigInt::from(m)) * num::pow(alpha.clone(), m) / BigRational::from_integer(2.into())
    });

    let h2 = h2_table(m, &alpha).value(m).clone();
    let shift = pow_signed(&BigRational::from_integer(int(r - 2)), m as i64 - 2);
    let base = &full_q + &lead_q;
    let sandwich_lower = &h2 * &shift + &base;
    let sandwich_upper = general_h_upper.as_ref().map(|h| h * &shift + &base);
    let coefficient_matches =
        general_upper_coefficient(&BigRational::from_integer(2.into())).ok() == Some(rat(83, 192));

    Ok(BoundReport {
        m,
        r,
        alpha,
        eq1_lower,
        eq1_upper,
        h_upper: h_upper_alpha2(m),
        forb_upper,
        lambda: lam,
        eps,
        lower_rider,
        forb_lower_coefficient: 1.0 + lower_rider - eps,
        general_upper_coefficient: coefficient,
        general_h_upper,
        h2,
        sandwich_lower,
        sandwich_upper,
        coefficient_matches,
    })
}

fn pow_signed(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num::pow(x.clone(), e as usize)
    } else {
        BigRational::one() / num::pow(x.clone(), (-e) as usize)
    }
}

impl BoundReport {
    /// Every lower bound is at most its matching upper bound.
    pub fn is_consistent(&self) -> bool {
        let eq1 = self.eq1_lower <= self.eq1_upper;
        let forb = BigRational::from_integer(self.eq1_lower.clone()) <= self.forb_upper;
        let sandwich = self.sandwich_upper.as_ref().map_or(true, |u| self.sandwich_lower <= *u);
        let h = self.general_h_upper.as_ref().map_or(true, |u| self.h2 <= *u);
        eq1 && forb && sandwich && h && self.coefficient_matches
    }

    pub fn to_json(&self) -> Value {
        let q = |x: &BigRational| Value::String(x.to_string());
        let qo = |x: &Option<BigRational>| x.as_ref().map_or(Value::Null, |v| Value::String(v.to_string()));
        json!({
            "m": self.m,
            "r": self.r,
            "alpha": q(&self.alpha),
            "eq1_lower": self.eq1_lower.to_string(),
            "eq1_upper": self.eq1_upper.to_string(),
            "h_upper": q(&self.h_upper),
            "forb_upper": q(&self.forb_upper),
            "lambda": self.lambda,
            "eps": self.eps,
            "lower_rider": self.lower_rider,
            "forb_lower_coefficient": self.forb_lower_coefficient,
            "general_upper_coefficient": qo(&self.general_upper_coefficient),
            "general_h_upper": qo(&self.general_h_upper),
            "h2": q(&self.h2),
            "sandwich_lower": q(&self.sandwich_lower),
            "sandwich_upper": qo(&self.sandwich_upper),
            "coefficient_matches": self.coefficient_matches,
            "consistent": self.is_consistent(),
        })
    }
}

/// Where the value of `forb(m, r, M)` in a sandwich check came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForbSource {
    /// Maximum over all choices.
    ChoiceEnumeration,
    /// Column search.
    ForbExact,
    /// A construction matching `H2`; only a lower bound on `forb`.
    Construction,
}

#[derive(Debug, Clone)]
pub struct SandwichOptions {
    /// Largest `m` for which `H(m, alpha_r)` is searched exactly.
    pub max_h_m: usize,
    /// Largest number of candidate columns for the column search.
    pub max_exact_columns: u64,
    pub h_options: HExactOptions,
}

impl Default for SandwichOptions {
    fn default() -> Self {
        SandwichOptions { max_h_m: 5, max_exact_columns: 64, h_options: HExactOptions::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub m: usize,
    pub r: u64,
    pub forb: BigUint,
    pub source: ForbSource,
    /// `forb - (r-1)^m - m (r-1)^(m-1)`.
    pub excess: BigInt,
    /// `H2(m, alpha_r) (r-2)^(m-2)`.
    pub lower: BigRational,
    /// `H(m, alpha_r) (r-2)^(m-2)`, when `H` was computed.
    pub upper: Option<BigRational>,
    pub lower_holds: bool,
    pub upper_holds: Option<bool>,
    /// Exact when `forb` is exact and `H` was computed exactly.
    pub status: SearchStatus,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds != Some(false)
    }

    pub fn is_tight(&self) -> bool {
        let e = BigRational::from_integer(self.excess.clone());
        self.lower == e && self.upper.as_ref() == Some(&e)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "r": self.r,
            "forb": self.forb.to_string(),
            "source": self.source,
            "excess": self.excess.to_string(),
            "lower": self.lower.to_string(),
            "upper": self.upper.as_ref().map(|u| u.to_string()),
            "lower_holds": self.lower_holds,
            "upper_holds": self.upper_holds,
            "tight": self.is_tight(),
            "status": self.status,
        })
    }
}

pub fn sandwich_check(m: usize, r: u64) -> Result<SandwichReport> {
    sandwich_check_with(m, r, &SandwichOptions::default())
}

pub fn sandwich_check_with(m: usize, r: u64, opts: &SandwichOptions) -> Result<SandwichReport> {
    let alpha = alpha_r(r)?;
    if m == 0 {
        return Err(Error::DomainError("sandwich check needs m >= 1".into()));
    }
    let table = h2_table(m, &alpha);
    let shift = pow_signed(&BigRational::from_integer(int(r - 2)), m as i64 - 2);

    let (forb, source, mut status) = if m <= 4 {
        let res = forb_via_choices(m, r, ChoiceMode::All, &ChoiceSearchOptions::default())?;
        (res.value, ForbSource::ChoiceEnumeration, res.status)
    } else if (r as f64).powi(m as i32) <= opts.max_exact_columns as f64 {
        let res = forb_exact(m, r as u8, &ConfigPattern::m(), &ForbOptions::default())?;
        (BigUint::from(res.value), ForbSource::ForbExact, res.status)
    } else {
        let g = build_from_table(m, &table).tcm;
        let choice = choice_from_tcm(&g, None).choice;
        let value = forb_from_choice(r, &choice, &CountOptions::default())?;
        (value, ForbSource::Construction, SearchStatus::LowerBound)
    };

    let r1 = int(r - 1);
    let excess = BigInt::from(forb.clone()) - num::pow(r1.clone(), m) - BigInt::from(m) * num::pow(r1, m - 1);
    let excess_q = BigRational::from_integer(excess.clone());
    let lower = table.value(m) * &shift;
    let lower_holds = lower <= excess_q;

    let upper = if m <= opts.max_h_m {
        let h = h_exact_rational(m, &alpha, &opts.h_options)?;
        if !h.status.is_exact() {
            status = SearchStatus::LowerBound;
        }
        Some(h.value * &shift)
    } else {
        status = SearchStatus::LowerBound;
        None
    };
    // A lower-bound forb cannot refute the upper inequality.
    let upper_holds = upper.as_ref().map(|u| excess_q <= *u || source == ForbSource::Construction);
    Ok(SandwichReport { m, r, forb, source, excess, lower, upper, lower_holds, upper_holds, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_at_two() {
        let c = general_upper_coefficient(&BigRational::from_integer(2.into())).unwrap();
        assert_eq!(c, rat(83, 192));
        assert!(general_upper_coefficient(&rat(3, 2)).is_err());
    }

    #[test]
    fn eq1_at_three_rows() {
        let b = bounds(3, 3, None).unwrap();
        assert_eq!(b.eq1_lower, int(20));
        assert_eq!(b.eq1_upper, int(26));
        assert!(b.is_consistent());
        assert_eq!(b.alpha, BigRational::from_integer(2.into()));
        assert_eq!(b.sandwich_lower, BigRational::from_integer(24.into()));
    }

    #[test]
    fn h_upper_at_six() {
        assert_eq!(h_upper_alpha2(6), BigRational::from_integer(83.into()));
        let b = bounds(6, 3, None).unwrap();
        assert_eq!(b.general_h_upper, Some(BigRational::from_integer(83.into())));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bounds(4, 2, None), Err(Error::DomainError(_))));
        assert!(matches!(bounds(4, 3, Some(BigRational::one())), Err(Error::DomainError(_))));
        let b = bounds(5, 4, None).unwrap();
        assert!(b.general_upper_coefficient.is_none());
        assert!(b.is_consistent());
        assert!(b.lower_rider > 0.25);
    }

    #[test]
    fn sandwich_small() {
        let s = sandwich_check(4, 3).unwrap();
        assert_eq!(s.forb, BigUint::from(60u32));
        assert!(s.is_tight());
        for m in 1..=2 {
            let s = sandwich_check(m, 5).unwrap();
            assert_eq!(s.forb, BigUint::from(5u32.pow(m as u32)));
            assert!(s.is_tight());
        }
    }
}
