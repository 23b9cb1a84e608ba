//! Rational helpers: the `"num/den"` text form and the rounding step that
//! turns floating-point candidates into small exact points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::Point;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational string")]
    Empty,
    #[error("invalid integer {0:?}")]
    InvalidInteger(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// `"num/den"`, or `"num"` when the denominator is one. Always canonical.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let int = |t: &str| -> Result<BigInt, ParseRationalError> {
        t.trim().parse::<BigInt>().map_err(|_| ParseRationalError::InvalidInteger(t.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(int(n)?, d))
        }
    }
}

pub fn from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact value of a finite float.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The rational with the smallest denominator (then smallest magnitude) in
/// the closed interval `[lo, hi]`.
pub fn simplest_in_interval(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_in_interval(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    // Both ends lie in (fl, fl + 1).
    let inner = simplest_in_interval(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

#[derive(Clone, Debug)]
pub struct RationalizeConfig {
    pub max_attempts: usize,
    /// Largest accepted distance (per coordinate) from the approximation.
    /// `None` means `1e-9` relative to the coordinate magnitude.
    pub tolerance: Option<f64>,
}

impl Default for RationalizeConfig {
    fn default() -> Self {
        RationalizeConfig { max_attempts: 160, tolerance: None }
    }
}

impl RationalizeConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        RationalizeConfig { tolerance: Some(tolerance), ..Default::default() }
    }
}

/// Finds a point with small denominators near `approx` that satisfies the
/// exact `feasible` predicate. Candidates are tried by increasing size:
/// simplest rationals in shrinking boxes around each coordinate (the
/// continued-fraction convergents), then dyadic grid points around the
/// approximation.
pub fn rationalize<F>(approx: [f64; 2], feasible: F, cfg: &RationalizeConfig) -> Option<Point<Rational>>
where
    F: Fn(&Point<Rational>) -> bool,
{
    if !approx[0].is_finite() || !approx[1].is_finite() {
        return None;
    }
    let x = from_f64(approx[0])?;
    let y = from_f64(approx[1])?;
    let scale = approx[0].abs().max(approx[1].abs()).max(1.0);
    let mut attempts = 0usize;
    let mut last: Option<Point<Rational>> = None;

    let tol = cfg.tolerance.unwrap_or(1e-9 * scale).max(scale * 1e-17);
    let floor = scale * (-62f64).exp2();
    let mut eps_f = tol;
    while eps_f >= floor && attempts < cfg.max_attempts {
        let eps = from_f64(eps_f)?;
        eps_f /= 4.0;
        let cand = Point::new(
            simplest_in_interval(&(&x - &eps), &(&x + &eps)),
            simplest_in_interval(&(&y - &eps), &(&y + &eps)),
        );
        if last.as_ref() == Some(&cand) {
            continue;
        }
        attempts += 1;
        if feasible(&cand) {
            return Some(cand);
        }
        last = Some(cand);
    }

    let mut step = tol / 2.0;
    while step >= floor && attempts < cfg.max_attempts {
        // power-of-two grid spacing keeps denominators small
        let spacing = step.log2().floor().exp2();
        let den = from_f64(spacing)?.recip();
        let base_x = (&x * &den).round();
        let base_y = (&y * &den).round();
        for (i, j) in ring_offsets() {
            if attempts >= cfg.max_attempts {
                break;
            }
            let cand = Point::new((&base_x + from_int(i)) / &den, (&base_y + from_int(j)) / &den);
            attempts += 1;
            if feasible(&cand) {
                return Some(cand);
            }
        }
        step /= 64.0;
    }
    None
}

fn ring_offsets() -> impl Iterator<Item = (i64, i64)> {
    let mut v: Vec<(i64, i64)> = Vec::new();
    for i in -1i64..=1 {
        for j in -1i64..=1 {
            v.push((i, j));
        }
    }
    v.sort_by_key(|&(i, j)| i.abs() + j.abs());
    v.into_iter()
}

/// Size of a rational in bits (numerator plus denominator).
pub fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

pub fn gcd_canonical(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}
