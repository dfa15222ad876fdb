//! Recovering small rationals from doubles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// The simplest fraction `p/q` with `q <= max_den` that rounds to `x`
/// (within a few ulps), if one exists.
pub fn approx_rational(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    let tol = 4.0 * f64::EPSILON * x.abs();
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2.abs() > BigInt::from(max_den) {
            return None;
        }
        let approx = h2.to_f64()? / k2.to_f64()?;
        if (approx - x).abs() <= tol {
            return Some(BigRational::new(h2, k2));
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    None
}

/// Default denominator bound for catalog parameters.
pub const MAX_DENOMINATOR: u64 = 1 << 40;

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
