//! Exact rational radii and a few conversion helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational used for Bohr radii and doubling constants.
pub type Ratio = BigRational;

/// `n / d` as an exact rational; `d != 0`.
pub fn ratio(n: i64, d: i64) -> Ratio {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ratio_int(n: i64) -> Ratio {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact dyadic rational equal to the given float. Finite input only.
pub fn from_f64_exact(x: f64) -> Ratio {
    BigRational::from_float(x).expect("finite float")
}

/// Clamp a radius from below at `1/n`, flagging whether clamping fired.
pub fn clamp_radius(r: &Ratio, n: u64) -> (Ratio, bool) {
    let floor = BigRational::new(BigInt::one(), BigInt::from(n));
    if *r < floor {
        (floor, true)
    } else {
        (r.clone(), false)
    }
}

/// Parse `"p/q"`, an integer, or a decimal like `"0.125"` exactly.
pub fn parse_ratio(s: &str) -> Option<Ratio> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = frac.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigRational::new(digits, scale);
        let whole = BigRational::from_integer(int_part);
        return Some(if neg { whole - frac_part } else { whole + frac_part });
    }
    let num: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(num))
}

/// Render as `p/q` (or `p` when integral); inverse of [`parse_ratio`].
pub fn format_ratio(r: &Ratio) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact integer `floor(r * n)` for a nonnegative rational `r`.
/// This is the largest m with `m <= r*n`, used for norm thresholds.
pub fn floor_mul(r: &Ratio, n: u64) -> u64 {
    debug_assert!(!r.is_negative());
    let prod = r * BigRational::from_integer(BigInt::from(n));
    prod.floor().to_integer().to_u64().expect("threshold fits u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_ratio("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse_ratio("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_ratio("3").unwrap(), ratio_int(3));
        assert_eq!(parse_ratio("-0.5").unwrap(), ratio(-1, 2));
        assert!(parse_ratio("1/0").is_none());
    }

    #[test]
    fn floor_mul_is_exact_at_boundaries() {
        assert_eq!(floor_mul(&ratio(1, 4), 12), 3); // 3 <= 12/4
        assert_eq!(floor_mul(&ratio(1, 3), 10), 3); // floor(10/3)
        assert_eq!(floor_mul(&ratio(1, 2), 7), 3);
        assert_eq!(floor_mul(&ratio_int(1), 5), 5);
    }

    #[test]
    fn clamp_fires_only_below_floor() {
        let (r, clamped) = clamp_radius(&ratio(1, 1000), 10);
        assert!(clamped);
        assert_eq!(r, ratio(1, 10));
        let (r, clamped) = clamp_radius(&ratio(1, 4), 10);
        assert!(!clamped);
        assert_eq!(r, ratio(1, 4));
    }

    #[test]
    fn round_trips_format() {
        for s in ["1/4", "7", "3/8"] {
            let r = parse_ratio(s).unwrap();
            assert_eq!(format_ratio(&r), s);
        }
    }
}
