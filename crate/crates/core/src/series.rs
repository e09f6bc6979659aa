//! Certified evaluation of the power series sum_i w_i ratio^i for |ratio| < 1.
//!
//! One evaluator serves both signs of the ratio. A value is always an exact
//! rational partial sum plus a worst-case tail enclosure derived from the
//! word's alphabet bounds, so every result is a guaranteed interval.
//!
//! Order comparisons between two series values go through the difference
//! word: the common prefix contributes exactly zero, the leading nonzero
//! difference letter is factored out as a power of the ratio, and only the
//! local remainder needs enclosure arithmetic. This keeps comparisons
//! decisive even when the two words agree for thousands of letters.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::enclosure::RealEnclosure;
use crate::exact::rational::{pow2_neg, rat_pow, Rat};
use crate::words::{FiniteWord, Letter, WordStream};

/// Exact finite sum sum_{i=1}^{N} letters[i-1] * ratio^i, by Horner over the
/// numerator with a single final reduction.
pub fn eval_finite(letters: &[Letter], ratio: &Rat) -> Rat {
    if letters.is_empty() {
        return Rat::zero();
    }
    let a = ratio.numer();
    let b = ratio.denom();
    let mut p = BigInt::zero();
    let mut pw = BigInt::one();
    for &c in letters.iter().rev() {
        p = a * &p + c * &pw;
        pw *= b;
    }
    Rat::new(a * p, pw)
}

pub fn eval_finite_word(w: &FiniteWord, ratio: &Rat) -> Result<Rat> {
    check_ratio(ratio)?;
    Ok(eval_finite(w.letters(), ratio))
}

fn check_ratio(ratio: &Rat) -> Result<()> {
    if ratio.abs() >= Rat::one() {
        return Err(Error::RatioOutOfRange(ratio.to_string()));
    }
    Ok(())
}

/// Enclosure of the tail sum_{i>N} w_i ratio^i for letters within [lo, hi].
/// For a negative ratio the odd and even positions are bounded separately.
pub fn tail_enclosure(bounds: (Letter, Letter), ratio: &Rat, terms: usize) -> RealEnclosure {
    let (m, big_m) = bounds;
    let m = Rat::from_integer(m.into());
    let big_m = Rat::from_integer(big_m.into());
    if !ratio.is_negative() {
        let geo = rat_pow(ratio, terms + 1) / (Rat::one() - ratio);
        RealEnclosure::new(&m * &geo, &big_m * &geo)
    } else {
        let r = -ratio.clone();
        let r2 = &r * &r;
        let first_odd = if (terms + 1) % 2 == 1 { terms + 1 } else { terms + 2 };
        let first_even = if (terms + 1) % 2 == 0 { terms + 1 } else { terms + 2 };
        let odd = rat_pow(&r, first_odd) / (Rat::one() - &r2);
        let even = rat_pow(&r, first_even) / (Rat::one() - &r2);
        // odd positions contribute -w_i r^i, even positions +w_i r^i
        let lo = -(&big_m * &odd) + &m * &even;
        let hi = -(&m * &odd) + &big_m * &even;
        RealEnclosure::new(lo, hi)
    }
}

/// Smallest term count whose tail enclosure is no wider than 2^-bits.
pub fn terms_for_bits(ratio: &Rat, bounds: (Letter, Letter), bits: u32) -> usize {
    let (m, big_m) = bounds;
    if m == big_m {
        return 1;
    }
    let r = ratio.abs();
    let target = pow2_neg(bits);
    // float estimate, then exact verification
    let rf: f64 = {
        let n = r.numer().to_string().parse::<f64>().unwrap_or(1.0);
        let d = r.denom().to_string().parse::<f64>().unwrap_or(2.0);
        n / d
    };
    let spread = (big_m - m) as f64;
    let est = ((bits as f64) + spread.log2().max(0.0) + 2.0) / -(rf.log2());
    let mut n = est.ceil().max(1.0) as usize;
    while tail_enclosure(bounds, ratio, n).width() > target {
        n += 4;
    }
    while n > 1 && tail_enclosure(bounds, ratio, n - 1).width() <= target {
        n -= 1;
    }
    n
}

/// A series evaluation request: word, signed ratio, explicit term count.
#[derive(Debug, Clone)]
pub struct SeriesQuery {
    pub ratio: Rat,
    pub word: WordStream,
    pub terms: usize,
}

/// Enclosure of sum_i w_i ratio^i using `terms` exact terms.
pub fn eval_t(q: &SeriesQuery) -> Result<RealEnclosure> {
    check_ratio(&q.ratio)?;
    assert!(q.terms >= 1);
    Ok(eval_shifted(&q.word, 0, q.terms, &q.ratio))
}

/// Enclosure of the series of the shifted word T^shift w.
pub fn eval_shifted(w: &WordStream, shift: usize, terms: usize, ratio: &Rat) -> RealEnclosure {
    let partial = w.with_prefix(shift + terms, |p| eval_finite(&p[shift..], ratio));
    let tail = tail_enclosure(w.bounds(), ratio, terms);
    tail.add_rat(&partial)
}

/// Enclosure with tail width <= 2^-bits.
pub fn eval_bits(w: &WordStream, shift: usize, ratio: &Rat, bits: u32) -> Result<RealEnclosure> {
    check_ratio(ratio)?;
    Ok(eval_shifted(w, shift, terms_for_bits(ratio, w.bounds(), bits), ratio))
}

/// Exact value of the constant word a^infinity: a * ratio / (1 - ratio).
pub fn const_tail(letter: Letter, ratio: &Rat) -> Result<Rat> {
    check_ratio(ratio)?;
    Ok(Rat::from_integer(letter.into()) * ratio / (Rat::one() - ratio))
}

/// The symbolic gap t_{-r}(011u) - t_{-r}(100u) = r + r^2 - r^3, independent
/// of the shared tail u.
pub fn endpoint_gap(r: &Rat) -> Rat {
    r + r * r - r * r * r
}

/// Same gap computed the long way from two finite words with matched tails.
pub fn endpoint_gap_finite(tail: &[Letter], r: &Rat) -> Rat {
    let neg = -r.clone();
    let mut upper = vec![0, 1, 1];
    upper.extend_from_slice(tail);
    let mut lower = vec![1, 0, 0];
    lower.extend_from_slice(tail);
    eval_finite(&upper, &neg) - eval_finite(&lower, &neg)
}

// ---------------------------------------------------------------------------
// identity residuals

/// t_r(uv) - r^k t_r(v) - t_r(u); encloses zero for every word v.
pub fn concat_identity_residual(
    u: &FiniteWord,
    v: &WordStream,
    ratio: &Rat,
    terms: usize,
) -> Result<RealEnclosure> {
    check_ratio(ratio)?;
    let k = u.len();
    let uv = v.prepend(u);
    let whole = eval_shifted(&uv, 0, terms + k, ratio);
    let tail_val = eval_shifted(v, 0, terms, ratio);
    let exact_u = eval_finite(u.letters(), ratio);
    Ok(whole.sub(&tail_val.scale(&rat_pow(ratio, k))).add_rat(&-exact_u))
}

/// Telescoping residual for two shifts of one word:
/// (t(T^n w) - t(T^m w)) - r^k (t(T^{n+k} w) - t(T^{m+k} w)) - (t(u) - t(u'))
/// where u, u' are the length-k factors at the two shifts.
pub fn telescope_identity_residual(
    w: &WordStream,
    n: usize,
    m: usize,
    k: usize,
    ratio: &Rat,
    terms: usize,
) -> Result<RealEnclosure> {
    check_ratio(ratio)?;
    let need = n.max(m) + k + terms;
    let (u, u2) = w.with_prefix(need, |p| (p[n..n + k].to_vec(), p[m..m + k].to_vec()));
    let head = eval_shifted(w, n, terms + k, ratio).sub(&eval_shifted(w, m, terms + k, ratio));
    let deep = eval_shifted(w, n + k, terms, ratio).sub(&eval_shifted(w, m + k, terms, ratio));
    let exact = eval_finite(&u, ratio) - eval_finite(&u2, ratio);
    Ok(head.sub(&deep.scale(&rat_pow(ratio, k))).add_rat(&-exact))
}

/// Doubling residuals, r in (0,1):
/// t_{-r}(D u) + (1/r - 1) t_{r^2}(u), and with a leading letter a,
/// t_{-r}(a D u) - (-a r + (1 - r) t_{r^2}(u)).
pub fn doubling_identity_residual(
    u: &WordStream,
    lead: Option<Letter>,
    r: &Rat,
    terms: usize,
) -> Result<RealEnclosure> {
    if !r.is_positive() || r >= &Rat::one() {
        return Err(Error::RatioOutOfRange(r.to_string()));
    }
    let neg_r = -r.clone();
    let r2 = r * r;
    let inner = eval_shifted(u, 0, terms, &r2);
    match lead {
        None => {
            let lhs = eval_shifted(&u.double(), 0, 2 * terms, &neg_r);
            let factor = (Rat::one() / r.clone()) - Rat::one();
            Ok(lhs.add(&inner.scale(&factor)))
        }
        Some(a) => {
            let word = u.double().prepend(&FiniteWord::new(vec![a]));
            let lhs = eval_shifted(&word, 0, 2 * terms + 1, &neg_r);
            let rhs = inner
                .scale(&(Rat::one() - r))
                .add_rat(&(-Rat::from_integer(a.into()) * r));
            Ok(lhs.sub(&rhs))
        }
    }
}

// ---------------------------------------------------------------------------
// certified comparison of two series values through the difference word

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffSign {
    /// First series value certifiedly above the second; split is the first
    /// differing letter index.
    Positive { split: usize },
    Negative { split: usize },
    /// No differing letter within the scan horizon.
    EqualUpToHorizon(usize),
    /// Sign not certified within the escalation budget.
    Inconclusive { split: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct DiffOptions {
    pub terms: usize,
    pub scan_horizon: usize,
    pub escalations: u32,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions { terms: 96, scan_horizon: 1 << 14, escalations: 4 }
    }
}

fn window(w: &WordStream, start: usize, len: usize) -> Vec<Letter> {
    w.with_prefix(start + len, |p| p[start..].to_vec())
}

/// First index i >= 1 with a_{ashift+i} != b_{bshift+i}, up to the horizon.
fn first_difference(
    a: &WordStream,
    ashift: usize,
    b: &WordStream,
    bshift: usize,
    horizon: usize,
) -> Option<usize> {
    const BLOCK: usize = 1024;
    let mut done = 0usize;
    while done < horizon {
        let len = BLOCK.min(horizon - done);
        let wa = window(a, ashift + done, len);
        let wb = window(b, bshift + done, len);
        for i in 0..len {
            if wa[i] != wb[i] {
                return Some(done + i + 1);
            }
        }
        done += len;
    }
    None
}

/// Certified sign of t_ratio(T^ashift a) - t_ratio(T^bshift b).
///
/// The difference series is ratio^split * (delta_split + local remainder);
/// only the local remainder needs enclosure bounds, so deep agreement costs
/// a scan but never precision.
pub fn certified_diff_sign(
    a: &WordStream,
    ashift: usize,
    b: &WordStream,
    bshift: usize,
    ratio: &Rat,
    opts: &DiffOptions,
) -> DiffSign {
    let split = match first_difference(a, ashift, b, bshift, opts.scan_horizon) {
        None => return DiffSign::EqualUpToHorizon(opts.scan_horizon),
        Some(s) => s,
    };
    let (mut lo_a, mut hi_a) = a.bounds();
    let (lo_b, hi_b) = b.bounds();
    lo_a -= hi_b;
    hi_a -= lo_b;
    let delta_bounds = (lo_a, hi_a);
    let mut terms = opts.terms;
    for _ in 0..=opts.escalations {
        let local = local_diff_enclosure(a, ashift, b, bshift, split, terms, ratio, delta_bounds);
        if let Some(sign) = local.sign_certain() {
            let flip = ratio.is_negative() && split % 2 == 1;
            let ord = if flip { sign.reverse() } else { sign };
            return match ord {
                std::cmp::Ordering::Greater => DiffSign::Positive { split },
                std::cmp::Ordering::Less => DiffSign::Negative { split },
                std::cmp::Ordering::Equal => DiffSign::EqualUpToHorizon(split),
            };
        }
        terms *= 2;
    }
    DiffSign::Inconclusive { split }
}

/// Enclosure of delta_split + sum_{j>=1} delta_{split+j} ratio^j, the factor
/// multiplying ratio^split in the difference series.
#[allow(clippy::too_many_arguments)]
fn local_diff_enclosure(
    a: &WordStream,
    ashift: usize,
    b: &WordStream,
    bshift: usize,
    split: usize,
    terms: usize,
    ratio: &Rat,
    delta_bounds: (Letter, Letter),
) -> RealEnclosure {
    let wa = window(a, ashift + split - 1, terms + 1);
    let wb = window(b, bshift + split - 1, terms + 1);
    let lead = wa[0] - wb[0];
    let deltas: Vec<Letter> = wa[1..].iter().zip(&wb[1..]).map(|(x, y)| x - y).collect();
    let partial = eval_finite(&deltas, ratio);
    let tail = tail_enclosure(delta_bounds, ratio, terms);
    tail.add_rat(&(partial + Rat::from_integer(lead.into())))
}

/// Full enclosure of the difference t(T^ashift a) - t(T^bshift b), scaled by
/// the split power. Used when a magnitude, not just a sign, is needed.
pub fn diff_enclosure(
    a: &WordStream,
    ashift: usize,
    b: &WordStream,
    bshift: usize,
    ratio: &Rat,
    opts: &DiffOptions,
) -> Option<RealEnclosure> {
    let split = first_difference(a, ashift, b, bshift, opts.scan_horizon)?;
    let (mut lo_a, mut hi_a) = a.bounds();
    let (lo_b, hi_b) = b.bounds();
    lo_a -= hi_b;
    hi_a -= lo_b;
    let local = local_diff_enclosure(a, ashift, b, bshift, split, opts.terms, ratio, (lo_a, hi_a));
    Some(local.scale(&rat_pow(ratio, split)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadratic::golden_slope;
    use crate::exact::rational::{rat, rat_int};
    use crate::sturmian::{c_representative, characteristic, CVariant};

    #[test]
    fn constant_words_close_form() {
        let ones = WordStream::constant(1);
        let e = eval_t(&SeriesQuery { ratio: rat(1, 2), word: ones.clone(), terms: 5 }).unwrap();
        assert_eq!(e, RealEnclosure::point(rat_int(1)));
        let e = eval_t(&SeriesQuery { ratio: rat(-1, 2), word: ones, terms: 5 }).unwrap();
        assert_eq!(e, RealEnclosure::point(rat(-1, 3)));
        assert_eq!(const_tail(1, &rat(1, 2)).unwrap(), rat_int(1));
        assert_eq!(const_tail(1, &rat(-1, 2)).unwrap(), rat(-1, 3));
        assert_eq!(const_tail(2, &rat(-1, 2)).unwrap(), rat(-2, 3));
    }

    #[test]
    fn ratio_validation() {
        let w = WordStream::constant(1);
        assert!(eval_t(&SeriesQuery { ratio: rat_int(1), word: w, terms: 3 }).is_err());
    }

    #[test]
    fn upper_extremal_value() {
        // t_{-1/2}(011 D c) = 0.132942320897...
        let w = c_representative(CVariant::E011, &golden_slope()).unwrap();
        let e = eval_bits(&w, 0, &rat(-1, 2), 40).unwrap();
        assert!(e.width() <= pow2_neg(38));
        let lo_ref = rat(132942320897, 1_000_000_000_000);
        let hi_ref = rat(132942320898, 1_000_000_000_000);
        assert!(e.lo() <= &hi_ref && &lo_ref <= e.hi());
    }

    #[test]
    fn gaps() {
        assert_eq!(endpoint_gap(&rat(1, 2)), rat(5, 8));
        assert_eq!(endpoint_gap(&rat(1, 3)), rat(11, 27));
        assert_eq!(endpoint_gap(&rat(2, 5)), rat(62, 125));
        let tail = [0, 1, 1, 0, 1, 0, 0, 1];
        assert_eq!(endpoint_gap_finite(&tail, &rat(2, 5)), rat(62, 125));
        assert_eq!(endpoint_gap_finite(&[], &rat(1, 2)), rat(5, 8));
    }

    #[test]
    fn concat_identity() {
        // u = 01, v = 1^inf, r = 1/2: t(011^inf) - (1/4) t(1^inf) = t(01)
        let u = FiniteWord::from_digits("01").unwrap();
        let v = WordStream::constant(1);
        let res = concat_identity_residual(&u, &v, &rat(1, 2), 40).unwrap();
        assert!(res.contains_zero());
        assert!(res.width() <= pow2_neg(36));
    }

    #[test]
    fn doubling_identity() {
        let ones = WordStream::constant(1);
        let res = doubling_identity_residual(&ones, None, &rat(1, 2), 40).unwrap();
        assert!(res.contains_zero());
        let c = characteristic(&golden_slope()).unwrap();
        let res = doubling_identity_residual(&c, None, &rat(1, 2), 60).unwrap();
        assert!(res.contains_zero());
        assert!(res.width() < pow2_neg(55));
        let res = doubling_identity_residual(&c, Some(1), &rat(1, 2), 60).unwrap();
        assert!(res.contains_zero());
    }

    #[test]
    fn telescoping_identity() {
        let c = characteristic(&golden_slope()).unwrap();
        let res = telescope_identity_residual(&c, 3, 8, 5, &rat(-1, 2), 70).unwrap();
        assert!(res.contains_zero());
        assert!(res.width() < pow2_neg(55));
    }

    #[test]
    fn certified_signs() {
        let theta = golden_slope();
        let dc = characteristic(&theta).unwrap().double();
        let upper = c_representative(CVariant::E011, &theta).unwrap();
        let lower = c_representative(CVariant::E100, &theta).unwrap();
        let r = rat(-1, 2);
        let opts = DiffOptions::default();
        for n in 0..50 {
            assert!(matches!(
                certified_diff_sign(&upper, 0, &dc, n, &r, &opts),
                DiffSign::Positive { .. }
            ));
            assert!(matches!(
                certified_diff_sign(&dc, n, &lower, 0, &r, &opts),
                DiffSign::Positive { .. }
            ));
        }
        // equality detected
        assert!(matches!(
            certified_diff_sign(&upper, 0, &upper, 0, &r, &opts),
            DiffSign::EqualUpToHorizon(_)
        ));
    }

    #[test]
    fn terms_estimate_is_tight_enough() {
        for (num, den) in [(1i64, 2i64), (-1, 2), (2, 5), (3, 5), (-1, 3)] {
            let r = rat(num, den);
            let n = terms_for_bits(&r, (0, 1), 64);
            assert!(tail_enclosure((0, 1), &r, n).width() <= pow2_neg(64));
        }
    }
}
