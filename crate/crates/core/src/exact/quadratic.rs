//! Exact elements (p + q*sqrt(d))/s of a real quadratic field.
//!
//! All comparisons and floors are decided by integer arithmetic (cross
//! multiplication and integer square roots), never by approximation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::enclosure::RealEnclosure;
use crate::exact::rational::Rat;

/// (p + q*sqrt(d))/s in canonical form: s > 0, gcd(p, q, s) = 1, d square-free,
/// and d = 1 exactly when q = 0 (the rational case).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    p: BigInt,
    q: BigInt,
    s: BigInt,
    d: u64,
}

/// Splits n into (square, square-free) with n = square^2 * square-free.
/// Trial division up to 10^5 plus a perfect-square check on the remainder,
/// which is complete for n < 10^15.
fn square_free_split(n: u64) -> (u64, u64) {
    let mut rest = n;
    let mut square = 1u64;
    let mut f = 2u64;
    while f <= 100_000 && f * f <= rest {
        while rest % (f * f) == 0 {
            rest /= f * f;
            square *= f;
        }
        f += 1;
    }
    let r = (rest as f64).sqrt() as u64;
    for c in r.saturating_sub(1)..=r + 1 {
        if c > 1 && c * c == rest {
            square *= c;
            rest = 1;
            break;
        }
    }
    (square, rest)
}

fn big_isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

impl QuadraticReal {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, s: impl Into<BigInt>, d: u64) -> Result<Self> {
        let mut v = QuadraticReal { p: p.into(), q: q.into(), s: s.into(), d };
        if v.s.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if v.d == 0 && !v.q.is_zero() {
            return Err(Error::RationalInput("sqrt(0) coefficient".into()));
        }
        v.normalize();
        Ok(v)
    }

    pub fn from_rational(r: &Rat) -> Self {
        QuadraticReal { p: r.numer().clone(), q: BigInt::zero(), s: r.denom().clone(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        QuadraticReal { p: BigInt::from(n), q: BigInt::zero(), s: BigInt::one(), d: 1 }
    }

    pub fn sqrt_of(d: u64) -> Self {
        let mut v = QuadraticReal { p: BigInt::zero(), q: BigInt::one(), s: BigInt::one(), d };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.q.is_zero() {
            self.d = 1;
        } else {
            let (square, free) = square_free_split(self.d);
            if free == 1 {
                // the root collapses to an integer
                self.p += &self.q * BigInt::from(square);
                self.q = BigInt::zero();
                self.d = 1;
            } else {
                self.q *= BigInt::from(square);
                self.d = free;
            }
        }
        if self.s.is_negative() {
            self.p = -&self.p;
            self.q = -&self.q;
            self.s = -&self.s;
        }
        let g = self.p.gcd(&self.q).gcd(&self.s);
        if g > BigInt::one() {
            self.p /= &g;
            self.q /= &g;
            self.s /= &g;
        }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rat> {
        self.is_rational().then(|| Rat::new(self.p.clone(), self.s.clone()))
    }

    /// Square-free discriminant when irrational.
    pub fn field(&self) -> Option<u64> {
        (!self.q.is_zero()).then_some(self.d)
    }

    fn unify(&self, other: &Self) -> Result<u64> {
        match (self.field(), other.field()) {
            (Some(a), Some(b)) if a != b => Err(Error::FieldMismatch { left: a, right: b }),
            (Some(a), _) => Ok(a),
            (_, Some(b)) => Ok(b),
            (None, None) => Ok(1),
        }
    }

    /// Check the two values live in one quadratic field (rationals fit any).
    pub fn compatible(&self, other: &Self) -> Result<()> {
        self.unify(other).map(|_| ())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.unify(other)?;
        QuadraticReal::new(
            &self.p * &other.s + &other.p * &self.s,
            &self.q * &other.s + &other.q * &self.s,
            &self.s * &other.s,
            d,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadraticReal { p: -&self.p, q: -&self.q, s: self.s.clone(), d: self.d }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.unify(other)?;
        QuadraticReal::new(
            &self.p * &other.p + &self.q * &other.q * BigInt::from(d),
            &self.p * &other.q + &self.q * &other.p,
            &self.s * &other.s,
            d,
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.sign() == Ordering::Equal {
            return Err(Error::DivisionByZero);
        }
        let d = self.unify(other)?;
        // multiply by the conjugate of the divisor
        let norm = &other.p * &other.p - &other.q * &other.q * BigInt::from(d);
        QuadraticReal::new(
            (&self.p * &other.p - &self.q * &other.q * BigInt::from(d)) * &other.s,
            (&self.q * &other.p - &self.p * &other.q) * &other.s,
            &self.s * norm,
            d,
        )
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        let mut v = QuadraticReal {
            p: &self.p * r.numer(),
            q: &self.q * r.numer(),
            s: &self.s * r.denom(),
            d: self.d,
        };
        v.normalize();
        v
    }

    pub fn add_rat(&self, r: &Rat) -> Self {
        let mut v = QuadraticReal {
            p: &self.p * r.denom() + r.numer() * &self.s,
            q: &self.q * r.denom(),
            s: &self.s * r.denom(),
            d: self.d,
        };
        v.normalize();
        v
    }

    pub fn conjugate(&self) -> Self {
        QuadraticReal { p: self.p.clone(), q: -&self.q, s: self.s.clone(), d: self.d }
    }

    /// Sign of p + q*sqrt(d), decided by squaring when the terms disagree.
    fn numerator_sign(p: &BigInt, q: &BigInt, d: u64) -> Ordering {
        if q.is_zero() {
            return p.cmp(&BigInt::zero());
        }
        if p.is_zero() {
            return q.cmp(&BigInt::zero());
        }
        match (p.is_positive(), q.is_positive()) {
            (true, true) => Ordering::Greater,
            (false, false) => Ordering::Less,
            (true, false) => (p * p).cmp(&(q * q * BigInt::from(d))),
            (false, true) => (q * q * BigInt::from(d)).cmp(&(p * p)),
        }
    }

    pub fn sign(&self) -> Ordering {
        Self::numerator_sign(&self.p, &self.q, self.d)
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        let d = self.unify(other)?;
        let p = &self.p * &other.s - &other.p * &self.s;
        let q = &self.q * &other.s - &other.q * &self.s;
        Ok(Self::numerator_sign(&p, &q, d))
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        let p = &self.p * r.denom() - r.numer() * &self.s;
        let q = &self.q * r.denom();
        Self::numerator_sign(&p, &q, self.d)
    }

    /// Exact floor via integer square-root bracketing of q*sqrt(d).
    pub fn floor(&self) -> BigInt {
        if self.q.is_zero() {
            return self.p.div_floor(&self.s);
        }
        let k = &self.q * &self.q * BigInt::from(self.d);
        let root = big_isqrt(&k);
        // q*sqrt(d) lies strictly between consecutive integers (irrational)
        let fq = if self.q.is_positive() { root } else { -root - BigInt::one() };
        // numerator lies in the open unit interval (p + fq, p + fq + 1)
        (&self.p + fq).div_floor(&self.s)
    }

    /// Outward-rounded rational enclosure of width <= 2^-bits.
    pub fn enclosure(&self, bits: u32) -> RealEnclosure {
        if self.q.is_zero() {
            let v = Rat::new(self.p.clone(), self.s.clone());
            return RealEnclosure::point(v);
        }
        let k = &self.q * &self.q * BigInt::from(self.d);
        let scale = bits + 2;
        let t = big_isqrt(&(&k << (2 * scale)));
        let den = BigInt::one() << scale;
        // sqrt(k) is in [t, t+1]/2^scale
        let (lo_num, hi_num) = if self.q.is_positive() {
            (t.clone(), &t + BigInt::one())
        } else {
            (-(&t + BigInt::one()), -t)
        };
        let lo = (Rat::from_integer(self.p.clone()) + Rat::new(lo_num, den.clone()))
            / Rat::from_integer(self.s.clone());
        let hi = (Rat::from_integer(self.p.clone()) + Rat::new(hi_num, den))
            / Rat::from_integer(self.s.clone());
        RealEnclosure::new(lo, hi)
    }

    pub fn numer_pair(&self) -> (&BigInt, &BigInt) {
        (&self.p, &self.q)
    }

    pub fn denom(&self) -> &BigInt {
        &self.s
    }
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            if self.s.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.s)
            }
        } else {
            write!(f, "({}{:+}*sqrt({}))/{}", self.p, self.q, self.d, self.s)
        }
    }
}

/// theta = (3 - sqrt(5))/2, the slope of the doubled-Fibonacci test family.
pub fn golden_slope() -> QuadraticReal {
    QuadraticReal::new(3, -1, 2, 5).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn phi() -> QuadraticReal {
        QuadraticReal::new(1, 1, 2, 5).unwrap()
    }

    #[test]
    fn conjugate_sum_is_one() {
        let a = phi(); // (1+sqrt5)/2
        let b = QuadraticReal::new(1, -1, 2, 5).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.to_rational().unwrap(), rat(1, 1));
    }

    #[test]
    fn exact_cancellation() {
        let theta = golden_slope();
        let c = QuadraticReal::new(-1, 1, 2, 5).unwrap(); // (sqrt5-1)/2
        assert_eq!(theta.add(&c).unwrap().to_rational().unwrap(), rat(1, 1));
        assert_eq!(theta.mul(&QuadraticReal::from_int(1)).unwrap(), theta);
    }

    #[test]
    fn floors() {
        assert_eq!(phi().floor(), BigInt::from(1));
        // 5 * (3-sqrt5)/2 = (15-5*sqrt5)/2 ~ 1.9098
        let x = golden_slope().mul_rat(&rat(5, 1));
        assert_eq!(x.floor(), BigInt::from(1));
        assert_eq!(QuadraticReal::new(-1, -1, 2, 5).unwrap().floor(), BigInt::from(-2));
        assert_eq!(QuadraticReal::from_rational(&rat(-7, 2)).floor(), BigInt::from(-4));
    }

    #[test]
    fn comparisons() {
        let theta = golden_slope();
        assert_eq!(theta.cmp_rat(&rat(2, 5)), Ordering::Less);
        assert_eq!(theta.cmp_rat(&rat(38, 100)), Ordering::Greater);
        let s2 = QuadraticReal::sqrt_of(2);
        let s8 = QuadraticReal::sqrt_of(8);
        // sqrt(8) normalizes into the sqrt(2) field
        assert_eq!(s8.field(), Some(2));
        assert_eq!(s8.cmp_exact(&s2.mul_rat(&rat(2, 1))).unwrap(), Ordering::Equal);
    }

    #[test]
    fn perfect_square_collapses() {
        let x = QuadraticReal::new(0, 1, 1, 9).unwrap();
        assert_eq!(x.to_rational().unwrap(), rat(3, 1));
    }

    #[test]
    fn field_mismatch_rejected() {
        let a = QuadraticReal::sqrt_of(2);
        let b = QuadraticReal::sqrt_of(3);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn enclosure_brackets_value() {
        let x = golden_slope();
        let e = x.enclosure(80);
        assert_eq!(x.cmp_rat(e.lo()), Ordering::Greater);
        assert_eq!(x.cmp_rat(e.hi()), Ordering::Less);
        assert!(e.width() <= crate::exact::rational::pow2_neg(80));
    }
}
