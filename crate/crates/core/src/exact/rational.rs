//! Arbitrary-precision rationals: thin helpers over `num_rational::BigRational`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// ratio^exp for exp >= 0 without going through i32 overflow paths.
pub fn rat_pow(r: &Rat, exp: usize) -> Rat {
    let mut acc = Rat::one();
    let mut base = r.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// 2^-bits as an exact rational.
pub fn pow2_neg(bits: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << bits)
}

/// Decimal digits of |r| truncated toward zero, as (integer-part, fraction-digit string).
fn decimal_parts(r: &Rat, digits: usize) -> (BigInt, String) {
    let a = r.abs();
    let ip = a.to_integer();
    let mut frac = &a - Rat::from_integer(ip.clone());
    let mut out = String::with_capacity(digits);
    let ten = BigInt::from(10);
    for _ in 0..digits {
        frac *= Rat::from_integer(ten.clone());
        let d = frac.to_integer();
        out.push(char::from(b'0' + d.to_u8().unwrap_or(0)));
        frac -= Rat::from_integer(d);
    }
    (ip, out)
}

/// Plain truncated decimal rendering (no certification), e.g. for report payloads.
pub fn dec_string(r: &Rat, digits: usize) -> String {
    let (ip, frac) = decimal_parts(r, digits);
    let sign = if r.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_and_floor() {
        assert_eq!(rat_pow(&rat(-1, 2), 3), rat(-1, 8));
        assert_eq!(rat_pow(&rat(2, 3), 0), rat_int(1));
        assert_eq!(floor_int(&rat(-7, 2)), BigInt::from(-4));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(dec_string(&rat(5, 8), 4), "0.6250");
        assert_eq!(dec_string(&rat(-1, 3), 5), "-0.33333");
        assert_eq!(dec_string(&rat_int(12), 0), "12");
    }
}
