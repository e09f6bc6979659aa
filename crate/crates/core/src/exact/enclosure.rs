//! Certified rational intervals [lo, hi] guaranteed to contain an exact real.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::rational::{floor_int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: Rat,
    hi: Rat,
}

impl RealEnclosure {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        RealEnclosure { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        RealEnclosure { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn add(&self, other: &Self) -> Self {
        RealEnclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        RealEnclosure::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        RealEnclosure::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let corners = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = corners.iter().min().unwrap().clone();
        let hi = corners.iter().max().unwrap().clone();
        RealEnclosure::new(lo, hi)
    }

    pub fn add_rat(&self, r: &Rat) -> Self {
        RealEnclosure::new(&self.lo + r, &self.hi + r)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_negative() {
            RealEnclosure::new(&self.hi * r, &self.lo * r)
        } else {
            RealEnclosure::new(&self.lo * r, &self.hi * r)
        }
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign: Some(ordering vs 0) when the enclosure excludes 0.
    pub fn sign_certain(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// True when every point of self is below every point of other.
    pub fn certainly_below(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }

    pub fn hull(&self, other: &Self) -> Self {
        RealEnclosure::new(self.lo.clone().min(other.lo.clone()), self.hi.clone().max(other.hi.clone()))
    }

    /// Reduce modulo one. Ok((frac, k)) with frac = self - k inside [0, 1);
    /// Err(()) when the enclosure straddles an integer (wrap-ambiguous).
    pub fn fractional_part(&self) -> std::result::Result<(RealEnclosure, BigInt), ()> {
        let k_lo = floor_int(&self.lo);
        let k_hi = floor_int(&self.hi);
        if k_lo != k_hi {
            return Err(());
        }
        let k = Rat::from_integer(k_lo.clone());
        Ok((RealEnclosure::new(&self.lo - &k, &self.hi - &k), k_lo))
    }

    /// Longest decimal prefix certified by both endpoints (truncation toward
    /// zero), with the count of certified fractional digits.
    pub fn decimal_certified(&self, max_digits: usize) -> (String, usize) {
        if self.lo.is_negative() && self.hi.is_positive() {
            return ("0".to_string(), 0);
        }
        let ten = Rat::from_integer(BigInt::from(10));
        let mut scale = Rat::from_integer(BigInt::from(1));
        let mut best: Option<(BigInt, usize)> = None;
        for digits in 0..=max_digits {
            let a = (&self.lo * &scale).trunc().to_integer();
            let b = (&self.hi * &scale).trunc().to_integer();
            if a == b {
                best = Some((a, digits));
            } else {
                break;
            }
            scale *= &ten;
        }
        match best {
            Some((v, digits)) => {
                let neg = self.hi.is_negative();
                let mut raw = v.magnitude().to_string();
                if digits > 0 {
                    while raw.len() <= digits {
                        raw.insert(0, '0');
                    }
                    raw.insert(raw.len() - digits, '.');
                }
                let sign = if neg { "-" } else { "" };
                (format!("{sign}{raw}"), digits)
            }
            None => ("0".to_string(), 0),
        }
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, digits) = self.decimal_certified(24);
        write!(f, "{s}")?;
        if self.width() > Rat::zero() {
            write!(f, "~({digits} digits)")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn arithmetic_encloses() {
        let a = RealEnclosure::new(rat(1, 3), rat(1, 2));
        let b = RealEnclosure::new(rat(-1, 4), rat(1, 8));
        let s = a.add(&b);
        assert!(s.contains(&(rat(2, 5) + rat(-1, 10))));
        let p = a.mul(&b);
        assert!(p.contains(&(rat(1, 3) * rat(1, 8))));
        assert!(p.contains(&(rat(1, 2) * rat(-1, 4))));
    }

    #[test]
    fn fractional_part_wrap() {
        let e = RealEnclosure::new(rat(-1, 16), rat(-1, 32));
        let (frac, k) = e.fractional_part().unwrap();
        assert_eq!(k, BigInt::from(-1));
        assert_eq!(frac.lo(), &rat(15, 16));
        let straddling = RealEnclosure::new(rat(-1, 64), rat(1, 64));
        assert!(straddling.fractional_part().is_err());
    }

    #[test]
    fn certified_digits() {
        let e = RealEnclosure::new(rat(132942, 1000000), rat(132943, 1000000));
        let (s, digits) = e.decimal_certified(10);
        assert_eq!(s, "0.13294");
        assert_eq!(digits, 5);
        let n = RealEnclosure::new(rat(-635386, 10000000), rat(-635385, 10000000));
        let (s, _) = n.decimal_certified(10);
        assert!(s.starts_with("-0.063538"), "{s}");
    }
}
