//! The four excluded intervals around 0, 1/2 and 1, and their defining
//! constants, computed as truncated infinite products with certified tails.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::exact::enclosure::RealEnclosure;
use crate::exact::rational::{pow2_neg, rat_pow, Rat};
use crate::orbits::{endpoints, XiSpec};
use crate::verify::{Status, VerdictReport};

#[derive(Debug, Clone)]
pub struct DubickasConstants {
    pub p: RealEnclosure,
    pub a: RealEnclosure,
    pub a_prime: RealEnclosure,
    pub b: RealEnclosure,
}

/// Enclosure of prod_{k in keys} (1 - base^-e(k)), truncated once the summed
/// tail of the remaining exponents drops below 2^-(bits+4). The factors
/// approach 1 geometrically: e(k+1) >= e(k) + 1 from the third factor on, so
/// the dropped factors multiply to at least 1 - 2 * base^-e(K).
fn product_enclosure(base: i64, exponents: impl Fn(u32) -> u64, start: u32, bits: u32) -> RealEnclosure {
    let b = Rat::from_integer(BigInt::from(base));
    let mut partial = Rat::one();
    let mut k = start;
    loop {
        let e = exponents(k);
        let tail_bound = Rat::from_integer(2.into()) * rat_pow(&(Rat::one() / b.clone()), e as usize);
        if tail_bound <= pow2_neg(bits + 4) {
            let lo = &partial * (Rat::one() - &tail_bound);
            return RealEnclosure::new(lo, partial);
        }
        partial *= Rat::one() - rat_pow(&(Rat::one() / b.clone()), e as usize);
        k += 1;
    }
}

pub fn dubickas_constants(base: i64, bits: u32) -> DubickasConstants {
    assert!(base >= 2);
    let one = RealEnclosure::point(Rat::one());
    let half = Rat::new(1.into(), 2.into());
    let p = product_enclosure(base, |k| 1u64 << k, 0, bits);
    // A = (1 - (1 - 1/b) P) / 2
    let inv_b = Rat::new(1.into(), base.into());
    let a = one
        .sub(&p.scale(&(Rat::one() - &inv_b)))
        .scale(&half);
    let a_prime = if base % 2 == 1 {
        a.clone()
    } else {
        one.sub(&p).scale(&half)
    };
    // exponents (2^k + (-1)^(k-1)) / 3, k >= 1: 1, 1, 3, 5, 11, 21, 43, ...
    let b_prod = product_enclosure(
        base,
        |k| {
            let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
            (((1i64 << k) + sign) / 3) as u64
        },
        1,
        bits,
    );
    let b_const = one.sub(&b_prod);
    DubickasConstants { p, a, a_prime, b: b_const }
}

/// A circular arc start + [0, len] with a certified start enclosure.
struct Arc {
    start: RealEnclosure,
    len: RealEnclosure,
}

/// Certify that the point p (mod 1) lies outside the arc: (p - start) mod 1
/// must exceed len. Errors toward inconclusive (returns false) when the
/// enclosures cannot decide.
fn point_certainly_outside(p: &Rat, arc: &Arc) -> bool {
    let rel = RealEnclosure::point(p.clone()).sub(&arc.start);
    match rel.fractional_part() {
        Ok((frac, _)) => frac.lo() > arc.len.hi(),
        Err(()) => false,
    }
}

/// Verify that the orbit interval of the spec is not contained in any of the
/// four excluded intervals, and that the four constants carry the advertised
/// precision.
pub fn dubickas_intervals(spec: &XiSpec, bits: u32, eps: &Rat) -> Result<VerdictReport> {
    let base = spec.base();
    let mut report = VerdictReport::new(
        "dubickas-intervals",
        format!("b={base} bits={bits} eps={eps}"),
    );
    let c = dubickas_constants(base, bits);
    for (name, e) in [("const-p", &c.p), ("const-a", &c.a), ("const-a-prime", &c.a_prime), ("const-b", &c.b)] {
        let ok = e.width() <= pow2_neg(bits);
        report.verdict(
            name,
            format!("enclosure width <= 2^-{bits}: value ~ {}", e.decimal_certified(8).0),
            ok,
            format!("width {}", e.width()),
        );
    }

    let (lo, hi) = endpoints(spec, bits)?;
    let len = hi.sub(&lo);
    let arcs = [
        ("interval-1-around-zero", Arc {
            start: c.a.neg().add_rat(eps),
            len: c.a.add(&c.a).add_rat(&(-eps - eps)),
        }),
        ("interval-2-low", Arc {
            start: RealEnclosure::point(eps.clone()),
            len: c.b.add_rat(&(-eps - eps)),
        }),
        ("interval-3-around-half", Arc {
            start: c.a_prime.neg().add_rat(&(Rat::new(1.into(), 2.into()) + eps)),
            len: c.a_prime.add(&c.a_prime).add_rat(&(-eps - eps)),
        }),
        ("interval-4-high", Arc {
            start: c.b.neg().add_rat(&(Rat::one() + eps)),
            len: c.b.add_rat(&(-eps - eps)),
        }),
    ];
    for (name, arc) in arcs {
        // witness candidates inside our interval: walk from the lower
        // endpoint toward the upper in eighths
        let step = len.midpoint() / Rat::from_integer(8.into());
        let mut found = None;
        for j in 0..=8 {
            let p = lo.midpoint() + &step * Rat::from_integer(j.into());
            // p must be certainly inside our own interval
            if !(lo.hi() <= &p && &p <= hi.lo()) {
                continue;
            }
            if point_certainly_outside(&p, &arc) {
                found = Some(p);
                break;
            }
        }
        match found {
            Some(p) => report.pass(
                name,
                format!("orbit interval point {} escapes the excluded arc", crate::exact::rational::dec_string(&p, 6)),
            ),
            None => report.push(
                name,
                "no orbit-interval point certified outside the arc".to_string(),
                Status::Inconclusive,
                Some("all sampled points undecided".to_string()),
            ),
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadratic::golden_slope;
    use crate::exact::rational::rat;
    use crate::orbits::BaseSign;
    use crate::sturmian::characteristic;

    #[test]
    fn constants_match_reference() {
        // b = 2: P ~ 0.35018386, A ~ 0.41245403, A' ~ 0.32490806, B ~ 0.78818951
        let c = dubickas_constants(2, 64);
        for (e, num) in [
            (&c.p, 35018386u64),
            (&c.a, 41245403),
            (&c.a_prime, 32490806),
            (&c.b, 78818951),
        ] {
            let r = rat(num as i64, 100_000_000);
            let margin = rat(1, 100_000_000);
            assert!(
                e.lo() <= &(&r + &margin) && &(&r - &margin) <= e.hi(),
                "constant {} not near {}",
                e.decimal_certified(10).0,
                r
            );
        }
    }

    #[test]
    fn four_intervals_never_contain_orbit_interval() {
        let dc = characteristic(&golden_slope()).unwrap().double();
        let spec = XiSpec::new(0, 2, dc, BaseSign::Negative).unwrap();
        let report = dubickas_intervals(&spec, 64, &rat(1, 1000)).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn base_three_constants() {
        let c = dubickas_constants(3, 64);
        // P ~ 0.58518741, B ~ 0.57378011
        assert!(c.p.decimal_certified(6).0.starts_with("0.585187"));
        assert!(c.b.decimal_certified(6).0.starts_with("0.573780"));
    }
}
