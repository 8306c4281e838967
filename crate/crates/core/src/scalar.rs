//! Scalar abstraction shared by the weight, search and recurrence code.
//!
//! Everything that sums powers of `alpha` is written against [`Scalar`], so the
//! same code runs on machine integers, big integers, exact rationals and
//! binary floating point. Integer and rational types compare exactly; floating
//! point types treat values within a relative tolerance as ties.

use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::rational::{BigRational, Ratio};
use num::traits::{FromPrimitive, Num, ToPrimitive};

/// Relative tolerance used by floating point scalars when deciding ties.
pub const FLOAT_TIE_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Clone + PartialOrd + Num + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync
{
    /// Whether values of this type are compared exactly.
    const EXACT: bool;

    fn to_f64_lossy(&self) -> f64;

    /// Equality up to the type's tie tolerance.
    fn ties(&self, other: &Self) -> bool {
        self == other
    }

    /// Strictly greater and not a tie.
    fn beats(&self, other: &Self) -> bool {
        self > other && !self.ties(other)
    }

    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("small integer is representable")
    }

    /// `self / den` as binary64, staying finite when both are huge.
    fn ratio_f64(&self, den: &Self) -> f64 {
        self.to_f64_lossy() / den.to_f64_lossy()
    }

    /// `self^exp` by repeated squaring.
    fn powi(&self, exp: u32) -> Self {
        num::traits::pow(self.clone(), exp as usize)
    }
}

/// Scalars with exact or approximate division, used for normalised values and
/// series such as `g(k, alpha)`.
pub trait FieldScalar: Scalar {}

macro_rules! exact_int {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            const EXACT: bool = true;
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}

exact_int!(u32, u64, u128, i64, i128);

macro_rules! float {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            const EXACT: bool = false;
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
            fn ties(&self, other: &Self) -> bool {
                let (a, b) = (*self as f64, *other as f64);
                let scale = a.abs().max(b.abs()).max(1.0);
                (a - b).abs() <= FLOAT_TIE_TOLERANCE * scale
            }
        }
        impl FieldScalar for $t {}
    )*};
}

float!(f32, f64);

impl Scalar for BigInt {
    const EXACT: bool = true;
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::INFINITY)
    }
    fn ratio_f64(&self, den: &Self) -> f64 {
        ratio_to_f64(&Ratio::new_raw(self.clone(), den.clone()))
    }
}

impl Scalar for BigUint {
    const EXACT: bool = true;
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::INFINITY)
    }
    fn ratio_f64(&self, den: &Self) -> f64 {
        ratio_to_f64(&Ratio::new_raw(BigInt::from(self.clone()), BigInt::from(den.clone())))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn to_f64_lossy(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn ratio_f64(&self, den: &Self) -> f64 {
        ratio_to_f64(&(self / den))
    }
}

impl FieldScalar for BigRational {}

fn ratio_to_f64(r: &Ratio<BigInt>) -> f64 {
    if let Some(v) = r.to_f64() {
        return v;
    }
    // Both parts overflow f64; shift them down together.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `alpha^0, alpha^1, ..., alpha^max_exp`.
pub fn power_table<S: Scalar>(alpha: &S, max_exp: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(max_exp + 1);
    let mut cur = S::one();
    for _ in 0..=max_exp {
        out.push(cur.clone());
        cur = cur * alpha.clone();
    }
    out
}

/// Parses `"2"`, `"3/2"` or a decimal such as `"1.5"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().ok()?;
        let d = num::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(n, d));
    }
    let n: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(n))
}
