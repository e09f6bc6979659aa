//! Continued fractions of quadratic irrationals, with period detection.
//!
//! The expansion is computed by exact floor-and-reciprocal steps; complete
//! quotients of a quadratic irrational eventually repeat, so the period is
//! found by watching for a repeated normalized state.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::quadratic::QuadraticReal;
use crate::exact::rational::Rat;

/// Lazy partial-quotient iterator for an irrational quadratic real.
pub struct CfIter {
    state: QuadraticReal,
}

impl Iterator for CfIter {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let a = self.state.floor();
        let frac = self
            .state
            .sub(&QuadraticReal::from_rational(&Rat::from_integer(a.clone())))
            .expect("same field");
        // state is irrational, so the fractional part is nonzero
        self.state = QuadraticReal::from_int(1).div(&frac).expect("nonzero");
        Some(a)
    }
}

pub fn cf_stream(x: &QuadraticReal) -> Result<CfIter> {
    if x.is_rational() {
        return Err(Error::RationalInput(format!("continued fraction of {x}")));
    }
    Ok(CfIter { state: x.clone() })
}

/// Eventually periodic expansion [a0; a1, ..., (p1, ..., pk)].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub pre: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

impl CfExpansion {
    /// k-th partial quotient, 0-indexed.
    pub fn quotient(&self, k: usize) -> BigInt {
        if k < self.pre.len() {
            self.pre[k].clone()
        } else {
            self.period[(k - self.pre.len()) % self.period.len()].clone()
        }
    }

    pub fn quotients(&self) -> impl Iterator<Item = BigInt> + '_ {
        (0..).map(|k| self.quotient(k))
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let per: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
        match self.pre.split_first() {
            None => write!(f, "[({})]", per.join(",")),
            Some((a0, rest)) => {
                write!(f, "[{a0};")?;
                let rest: Vec<String> = rest.iter().map(|a| a.to_string()).collect();
                if !rest.is_empty() {
                    write!(f, "{}", rest.join(","))?;
                    if !per.is_empty() {
                        write!(f, ",")?;
                    }
                }
                if !per.is_empty() {
                    write!(f, "({})", per.join(","))?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Full expansion of a quadratic irrational. `max_steps` caps the search;
/// quadratic irrationals always repeat, so the cap only guards pathology.
pub fn detect_period(x: &QuadraticReal, max_steps: usize) -> Result<CfExpansion> {
    if x.is_rational() {
        return Err(Error::RationalInput(format!("continued fraction of {x}")));
    }
    let mut quotients: Vec<BigInt> = Vec::new();
    let mut seen: HashMap<QuadraticReal, usize> = HashMap::new();
    let mut state = x.clone();
    for step in 0..max_steps {
        if let Some(&first) = seen.get(&state) {
            return Ok(CfExpansion {
                pre: quotients[..first].to_vec(),
                period: quotients[first..].to_vec(),
            });
        }
        seen.insert(state.clone(), step);
        let a = state.floor();
        quotients.push(a.clone());
        let frac = state
            .sub(&QuadraticReal::from_rational(&Rat::from_integer(a)))
            .expect("same field");
        state = QuadraticReal::from_int(1).div(&frac).expect("nonzero");
    }
    Err(Error::Inconclusive(format!("no period within {max_steps} quotients")))
}

/// Convergents p_k/q_k of a quotient sequence.
pub fn convergents(quotients: &[BigInt]) -> Vec<Rat> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p0, mut q0) = (BigInt::one(), BigInt::from(0));
    let (mut p1, mut q1) = (BigInt::from(0), BigInt::one());
    for a in quotients {
        let p = a * &p0 + &p1;
        let q = a * &q0 + &q1;
        out.push(Rat::new(p.clone(), q.clone()));
        p1 = std::mem::replace(&mut p0, p);
        q1 = std::mem::replace(&mut q0, q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadratic::golden_slope;
    use std::cmp::Ordering;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn golden_ratio_is_all_ones() {
        let phi = QuadraticReal::new(1, 1, 2, 5).unwrap();
        let e = detect_period(&phi, 64).unwrap();
        let q: Vec<BigInt> = e.quotients().take(4).collect();
        assert_eq!(q, ints(&[1, 1, 1, 1]));
        assert_eq!(e.to_string(), "[(1)]");
    }

    #[test]
    fn golden_slope_expansion() {
        // (3-sqrt5)/2 = [0; 2, 1, 1, 1, ...]
        let e = detect_period(&golden_slope(), 64).unwrap();
        let q: Vec<BigInt> = e.quotients().take(5).collect();
        assert_eq!(q, ints(&[0, 2, 1, 1, 1]));
    }

    #[test]
    fn sqrt2_expansion() {
        let e = detect_period(&QuadraticReal::sqrt_of(2), 64).unwrap();
        let q: Vec<BigInt> = e.quotients().take(4).collect();
        assert_eq!(q, ints(&[1, 2, 2, 2]));
    }

    #[test]
    fn rational_rejected() {
        let x = QuadraticReal::from_int(3);
        assert!(cf_stream(&x).is_err());
    }

    #[test]
    fn convergent_quality() {
        // |x - p/q| < 1/q^2, checked exactly in the field
        let x = QuadraticReal::sqrt_of(7);
        let e = detect_period(&x, 64).unwrap();
        let qs: Vec<BigInt> = e.quotients().take(12).collect();
        for c in convergents(&qs) {
            let err = x.add_rat(&-c.clone());
            let q2 = Rat::new(BigInt::one(), c.denom() * c.denom());
            let abs_err = if err.sign() == Ordering::Less { err.neg() } else { err };
            assert_eq!(abs_err.cmp_rat(&q2), Ordering::Less);
        }
    }
}
