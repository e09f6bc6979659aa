//! Containment, extremal-order and monotonicity suites.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::rational::{dec_string, Rat};
use crate::series::{
    certified_diff_sign, endpoint_gap, eval_finite, tail_enclosure, terms_for_bits, DiffOptions,
    DiffSign,
};
use crate::verify::VerdictReport;
use crate::words::{compare_slices, BuiltClass, Letter, OrderVerdict, WordOrder, WordStream};


#[derive(Debug, Clone)]
pub struct ContainmentSuiteParams {
    pub n_max: usize,
    pub bits: u32,
    /// When set, require width lower bound > gap - delta at the last
    /// checkpoint and nondecreasing width across checkpoints.
    pub width_delta: Option<Rat>,
    pub width_checkpoints: Vec<usize>,
}

impl ContainmentSuiteParams {
    pub fn new(n_max: usize, bits: u32) -> Self {
        ContainmentSuiteParams { n_max, bits, width_delta: None, width_checkpoints: Vec::new() }
    }
}

/// Machine-readable side of a containment run.
#[derive(Debug, Clone)]
pub struct ContainmentOutcome {
    pub violations: Vec<usize>,
    pub inconclusive: Vec<usize>,
    pub lower_attained: Vec<usize>,
    pub upper_attained: Vec<usize>,
    /// (checkpoint, certified width lower bound)
    pub widths: Vec<(usize, Rat)>,
    pub gap: Rat,
}

fn diff_opts_for(ratio: &Rat, bits: u32, n_max: usize) -> DiffOptions {
    DiffOptions {
        terms: terms_for_bits(ratio, (-1, 1), bits),
        scan_horizon: 2 * n_max + 512,
        escalations: 4,
    }
}

/// Shared engine: certify lower <= t_ratio(T^n w) <= upper for n <= n_max by
/// difference-series sign, recording attainments (word equality through the
/// scan horizon) separately.
fn containment_run(
    w: &WordStream,
    lower: &WordStream,
    upper: &WordStream,
    ratio: &Rat,
    params: &ContainmentSuiteParams,
) -> ContainmentOutcome {
    let opts = diff_opts_for(ratio, params.bits, params.n_max);
    let mut out = ContainmentOutcome {
        violations: Vec::new(),
        inconclusive: Vec::new(),
        lower_attained: Vec::new(),
        upper_attained: Vec::new(),
        widths: Vec::new(),
        gap: Rat::zero(),
    };
    for n in 0..=params.n_max {
        match certified_diff_sign(w, n, lower, 0, ratio, &opts) {
            DiffSign::Positive { .. } => {}
            DiffSign::EqualUpToHorizon(_) => out.lower_attained.push(n),
            DiffSign::Negative { .. } => out.violations.push(n),
            DiffSign::Inconclusive { .. } => out.inconclusive.push(n),
        }
        match certified_diff_sign(upper, 0, w, n, ratio, &opts) {
            DiffSign::Positive { .. } => {}
            DiffSign::EqualUpToHorizon(_) => out.upper_attained.push(n),
            DiffSign::Negative { .. } => out.violations.push(n),
            DiffSign::Inconclusive { .. } => out.inconclusive.push(n),
        }
    }
    if !params.width_checkpoints.is_empty() {
        let terms = terms_for_bits(ratio, w.bounds(), params.bits);
        let tail_width = tail_enclosure(w.bounds(), ratio, terms).width();
        let partials: Vec<Rat> = w.with_prefix(params.n_max + terms, |p| {
            (0..=params.n_max).map(|n| eval_finite(&p[n..n + terms], ratio)).collect()
        });
        let mut cps = params.width_checkpoints.clone();
        cps.sort_unstable();
        let mut hi = partials[0].clone();
        let mut lo = partials[0].clone();
        let mut next = 0usize;
        for (n, v) in partials.iter().enumerate() {
            if v > &hi {
                hi = v.clone();
            }
            if v < &lo {
                lo = v.clone();
            }
            while next < cps.len() && cps[next] == n {
                // certified lower bound: partial sums are midpoints up to tail width
                let width = &hi - &lo - &tail_width - &tail_width;
                out.widths.push((n, if width.is_negative() { Rat::zero() } else { width }));
                next += 1;
            }
        }
    }
    out
}

fn report_containment(
    report: &mut VerdictReport,
    out: &ContainmentOutcome,
    expect_attained: Option<usize>,
) {
    let head = |v: &[usize]| {
        let shown: Vec<String> = v.iter().take(8).map(|n| n.to_string()).collect();
        shown.join(",")
    };
    if !out.violations.is_empty() {
        report.fail(
            "containment",
            format!("{} orbit values escaped the interval", out.violations.len()),
            format!("n in [{}]", head(&out.violations)),
        );
    } else if !out.inconclusive.is_empty() {
        report.inconclusive(
            "containment",
            format!("{} comparisons undecided after escalation", out.inconclusive.len()),
            format!("n in [{}]", head(&out.inconclusive)),
        );
    } else {
        report.pass("containment", "all shifted values certified inside the interval");
    }

    let attained = out.lower_attained.len() + out.upper_attained.len();
    report.verdict(
        "semiopen",
        format!(
            "at most one endpoint attained (lower at [{}], upper at [{}])",
            head(&out.lower_attained),
            head(&out.upper_attained)
        ),
        attained <= 1,
        format!("{attained} attainments"),
    );
    if let Some(expected) = expect_attained {
        report.verdict(
            "open-iff-construction",
            format!("expected {expected} endpoint attainments by construction, saw {attained}"),
            attained == expected,
            format!("lower [{}] upper [{}]", head(&out.lower_attained), head(&out.upper_attained)),
        );
    }
}

fn report_width(report: &mut VerdictReport, out: &ContainmentOutcome, delta: &Rat) {
    let monotone = out.widths.windows(2).all(|w| w[0].1 <= w[1].1);
    let widths_str: Vec<String> = out
        .widths
        .iter()
        .map(|(n, w)| format!("N={n}:{}", dec_string(w, 10)))
        .collect();
    report.verdict(
        "width-monotone",
        format!("certified width nondecreasing over checkpoints: {}", widths_str.join(" ")),
        monotone,
        widths_str.join(" "),
    );
    if let Some((_, last)) = out.widths.last() {
        let threshold = &out.gap - delta;
        report.verdict(
            "width-threshold",
            format!(
                "final width {} exceeds gap - delta = {}",
                dec_string(last, 12),
                dec_string(&threshold, 12)
            ),
            last > &threshold,
            dec_string(last, 16),
        );
    }
}

/// Containment of (t_{-r}(T^n w)) in the interval spanned by the two
/// extremal words of w's slope, with semiopen and sharpness checks.
pub fn suite_negative(
    r: &Rat,
    w: &WordStream,
    params: &ContainmentSuiteParams,
) -> Result<(VerdictReport, ContainmentOutcome)> {
    if !(r.is_positive() && r < &Rat::one()) {
        return Err(Error::RatioOutOfRange(r.to_string()));
    }
    if !w.built_class().is_d_class() {
        return Err(Error::BadWord(format!(
            "negative suite needs a doubled-class word, got {:?}",
            w.built_class()
        )));
    }
    let theta = w
        .slope()
        .ok_or_else(|| Error::BadWord("word has no recoverable slope".into()))?;
    let lower = crate::sturmian::c_representative(crate::sturmian::CVariant::E100, &theta)?;
    let upper = crate::sturmian::c_representative(crate::sturmian::CVariant::E011, &theta)?;
    let ratio = -r.clone();
    let mut out = containment_run(w, &lower, &upper, &ratio, params);
    out.gap = endpoint_gap(r);
    let mut report = VerdictReport::new(
        "negative",
        format!("r={r} n_max={} bits={} word={}", params.n_max, params.bits, w.describe()),
    );
    let expect = usize::from(w.built_class().is_c_representative());
    report_containment(&mut report, &out, Some(expect));
    if let Some(delta) = &params.width_delta {
        report_width(&mut report, &out, delta);
    }
    Ok((report.finish(), out))
}

/// Positive-ratio analogue: containment of (t_r(T^n s)) between the two
/// intercept-shifted mechanical words of the same slope; runs for any
/// r in (0,1), including r > 1/2.
pub fn suite_positive(
    r: &Rat,
    s: &WordStream,
    params: &ContainmentSuiteParams,
) -> Result<(VerdictReport, ContainmentOutcome)> {
    if !(r.is_positive() && r < &Rat::one()) {
        return Err(Error::RatioOutOfRange(r.to_string()));
    }
    if s.built_class() != BuiltClass::Sturmian {
        return Err(Error::BadWord(format!(
            "positive suite needs a Sturmian-built word, got {:?}",
            s.built_class()
        )));
    }
    let theta = s
        .slope()
        .ok_or_else(|| Error::BadWord("word has no recoverable slope".into()))?;
    let lower = crate::sturmian::mechanical(&crate::sturmian::MechanicalSpec {
        theta: theta.clone(),
        rho: theta.neg(),
        variant: crate::words::Rounding::Floor,
    })?;
    let upper = crate::sturmian::mechanical(&crate::sturmian::MechanicalSpec {
        theta: theta.clone(),
        rho: theta.neg(),
        variant: crate::words::Rounding::Ceil,
    })?;
    let mut out = containment_run(s, &lower, &upper, r, params);
    out.gap = r.clone();
    let mut report = VerdictReport::new(
        "positive",
        format!("r={r} n_max={} bits={} word={}", params.n_max, params.bits, s.describe()),
    );
    report_containment(&mut report, &out, None);
    let only_at_zero = out
        .lower_attained
        .iter()
        .chain(&out.upper_attained)
        .all(|&n| n == 0);
    report.verdict(
        "attain-only-at-zero",
        "endpoint values reached only by the word itself",
        only_at_zero,
        format!("lower {:?} upper {:?}", out.lower_attained, out.upper_attained),
    );
    if let Some(delta) = &params.width_delta {
        report_width(&mut report, &out, delta);
    }
    Ok((report.finish(), out))
}

// ---------------------------------------------------------------------------
// extremal order suite

#[derive(Debug, Clone)]
pub struct ExtremalOutcome {
    pub violations: Vec<usize>,
    /// (checkpoint, deepest agreement with lower, deepest agreement with upper)
    pub depths: Vec<(usize, usize, usize)>,
}

/// Word-order sandwich: every shift stays between the two extremal words,
/// and the deepest agreement with each extremal word grows with the horizon
/// (the shifts approach the endpoints in order).
pub fn suite_extremal(
    w: &WordStream,
    n_max: usize,
    min_final_depth: usize,
) -> Result<(VerdictReport, ExtremalOutcome)> {
    let theta = w
        .slope()
        .ok_or_else(|| Error::BadWord("word has no recoverable slope".into()))?;
    let class = w.built_class();
    let (order, lower, upper) = if class.is_d_class() {
        (
            WordOrder::Alt,
            crate::sturmian::c_representative(crate::sturmian::CVariant::E100, &theta)?,
            crate::sturmian::c_representative(crate::sturmian::CVariant::E011, &theta)?,
        )
    } else if class == BuiltClass::Sturmian || class == BuiltClass::S {
        (
            WordOrder::Lex,
            crate::sturmian::mechanical(&crate::sturmian::MechanicalSpec {
                theta: theta.clone(),
                rho: theta.neg(),
                variant: crate::words::Rounding::Floor,
            })?,
            crate::sturmian::mechanical(&crate::sturmian::MechanicalSpec {
                theta: theta.clone(),
                rho: theta.neg(),
                variant: crate::words::Rounding::Ceil,
            })?,
        )
    } else {
        return Err(Error::BadWord(format!("extremal suite cannot classify {class:?}")));
    };

    let horizon = 2 * n_max + 512;
    let wp = w.prefix(n_max + horizon);
    let lp = lower.prefix(horizon);
    let up = upper.prefix(horizon);
    let checkpoints = [n_max / 4, n_max / 2, n_max];

    let mut out = ExtremalOutcome { violations: Vec::new(), depths: Vec::new() };
    let mut deep_lo = 0usize;
    let mut deep_hi = 0usize;
    let mut next = 0usize;
    for n in 0..=n_max {
        let shifted = &wp.letters()[n..n + horizon];
        let (vs_lower, split_lo) = match compare_slices(shifted, lp.letters(), order) {
            OrderVerdict::Less { index } => (false, index - 1),
            OrderVerdict::Greater { index } => (true, index - 1),
            OrderVerdict::EqualUpToHorizon(h) => (true, h),
        };
        let (vs_upper, split_hi) = match compare_slices(shifted, up.letters(), order) {
            OrderVerdict::Greater { index } => (false, index - 1),
            OrderVerdict::Less { index } => (true, index - 1),
            OrderVerdict::EqualUpToHorizon(h) => (true, h),
        };
        if !(vs_lower && vs_upper) {
            out.violations.push(n);
        }
        deep_lo = deep_lo.max(split_lo);
        deep_hi = deep_hi.max(split_hi);
        while next < checkpoints.len() && checkpoints[next] == n {
            out.depths.push((n, deep_lo, deep_hi));
            next += 1;
        }
    }

    let mut report = VerdictReport::new(
        "extremal",
        format!("n_max={n_max} order={order:?} word={}", w.describe()),
    );
    report.verdict(
        "order-sandwich",
        format!("lower <= T^n w <= upper in {order:?} order for all n <= {n_max}"),
        out.violations.is_empty(),
        format!("violations at {:?}", &out.violations[..out.violations.len().min(8)]),
    );
    let monotone = out.depths.windows(2).all(|d| d[0].1 <= d[1].1 && d[0].2 <= d[1].2);
    let final_depths = out.depths.last().copied().unwrap_or((0, 0, 0));
    report.verdict(
        "depth-growth",
        format!("deepest extremal agreement grows over checkpoints {:?}", out.depths),
        monotone && final_depths.1 >= min_final_depth && final_depths.2 >= min_final_depth,
        format!("{:?}", out.depths),
    );
    Ok((report.finish(), out))
}

// ---------------------------------------------------------------------------
// order-value monotonicity suite

/// Seeded random pairs with matched tails: the word order must agree with the
/// sign of the exact series difference, lexicographic against ratio +r and
/// alternate against ratio -r; plus the doubling-map order spot checks.
pub fn monotone_suite(
    r: &Rat,
    pairs: usize,
    seed: u64,
    len: usize,
) -> Result<VerdictReport> {
    if !(r.is_positive() && r < &Rat::new(1.into(), 2.into())) {
        return Err(Error::RatioOutOfRange(format!("{r} (need 0 < r < 1/2)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let neg = -r.clone();
    let mut lex_bad = 0usize;
    let mut alt_bad = 0usize;
    let mut map_bad = 0usize;
    let mut first_witness = String::new();

    for trial in 0..pairs {
        let u: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..=1)).collect();
        let v: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..=1)).collect();
        let lex = compare_slices(&u, &v, WordOrder::Lex);
        let alt = compare_slices(&u, &v, WordOrder::Alt);
        let d_pos = eval_finite(&u, r) - eval_finite(&v, r);
        let d_neg = eval_finite(&u, &neg) - eval_finite(&v, &neg);
        let ok_lex = match lex {
            OrderVerdict::Less { .. } => d_pos.is_negative(),
            OrderVerdict::Greater { .. } => d_pos.is_positive(),
            OrderVerdict::EqualUpToHorizon(_) => d_pos.is_zero(),
        };
        let ok_alt = match alt {
            OrderVerdict::Less { .. } => d_neg.is_negative(),
            OrderVerdict::Greater { .. } => d_neg.is_positive(),
            OrderVerdict::EqualUpToHorizon(_) => d_neg.is_zero(),
        };
        if !ok_lex {
            lex_bad += 1;
        }
        if !ok_alt {
            alt_bad += 1;
        }
        if (!ok_lex || !ok_alt) && first_witness.is_empty() {
            first_witness = format!("trial {trial}: u={u:?} v={v:?}");
        }

        // doubling maps: 1Du preserves, Du reverses, 0Du preserves
        if lex != OrderVerdict::EqualUpToHorizon(len) {
            let du: Vec<Letter> = u.iter().flat_map(|&c| [c, c]).collect();
            let dv: Vec<Letter> = v.iter().flat_map(|&c| [c, c]).collect();
            let with_lead = |a: Letter, w: &[Letter]| {
                let mut out = vec![a];
                out.extend_from_slice(w);
                out
            };
            let expect = match lex {
                OrderVerdict::Less { .. } => OrderVerdict::Less { index: 0 },
                _ => OrderVerdict::Greater { index: 0 },
            };
            let same = |a: &OrderVerdict, b: &OrderVerdict| {
                matches!(
                    (a, b),
                    (OrderVerdict::Less { .. }, OrderVerdict::Less { .. })
                        | (OrderVerdict::Greater { .. }, OrderVerdict::Greater { .. })
                )
            };
            let flipped = |a: &OrderVerdict| match a {
                OrderVerdict::Less { index } => OrderVerdict::Greater { index: *index },
                OrderVerdict::Greater { index } => OrderVerdict::Less { index: *index },
                e => *e,
            };
            let one_d = compare_slices(&with_lead(1, &du), &with_lead(1, &dv), WordOrder::Alt);
            let plain_d = compare_slices(&du, &dv, WordOrder::Alt);
            let zero_d = compare_slices(&with_lead(0, &du), &with_lead(0, &dv), WordOrder::Alt);
            if !(same(&one_d, &expect) && same(&flipped(&plain_d), &expect) && same(&zero_d, &expect))
            {
                map_bad += 1;
                if first_witness.is_empty() {
                    first_witness = format!("map trial {trial}: u={u:?} v={v:?}");
                }
            }
        }
    }

    let mut report = VerdictReport::new(
        "monotone",
        format!("r={r} pairs={pairs} seed={seed} len={len}"),
    );
    report.verdict(
        "lex-value-agree",
        format!("{pairs} random pairs: lex order vs sign of positive-ratio difference"),
        lex_bad == 0,
        format!("{lex_bad} disagreements; {first_witness}"),
    );
    report.verdict(
        "alt-value-agree",
        format!("{pairs} random pairs: alt order vs sign of negative-ratio difference"),
        alt_bad == 0,
        format!("{alt_bad} disagreements; {first_witness}"),
    );
    report.verdict(
        "doubling-maps",
        "1Du preserves, Du reverses, 0Du preserves the order",
        map_bad == 0,
        format!("{map_bad} disagreements; {first_witness}"),
    );

    // fixed instances: constants
    let ones = vec![1; 64];
    let zeros = vec![0; 64];
    let alt_const = compare_slices(&ones, &zeros, WordOrder::Alt);
    let t_ones = eval_finite(&ones, &neg);
    let fixed_ok = matches!(alt_const, OrderVerdict::Less { index: 1 }) && t_ones.is_negative();
    report.verdict(
        "constant-words",
        "all-ones word sits below all-zeros in alt order and in value",
        fixed_ok,
        format!("t = {t_ones}"),
    );
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadratic::golden_slope;
    use crate::exact::rational::rat;
    use crate::sturmian::characteristic;
    use crate::words::BuiltClass;

    #[test]
    fn mutated_member_fails_containment() {
        // flip one letter of the doubled word: the suite must notice
        let theta = golden_slope();
        let dc = characteristic(&theta).unwrap().double();
        let reference = dc.prefix(4096);
        let flipped = WordStream::custom("flipped", (0, 1), move |n| {
            let mut p = if n <= 4096 {
                reference.letters()[..n].to_vec()
            } else {
                unreachable!("test horizon")
            };
            if n > 5 {
                p[5] = 1 - p[5];
            }
            p
        })
        .with_class(BuiltClass::D)
        .with_slope(theta);
        let (report, out) =
            suite_negative(&rat(1, 2), &flipped, &ContainmentSuiteParams::new(200, 64)).unwrap();
        assert!(report.failed() > 0, "mutation went unnoticed: {report}");
        assert!(!out.violations.is_empty());
    }

    #[test]
    fn class_validation() {
        let raw = WordStream::periodic(vec![0, 1]);
        assert!(suite_negative(&rat(1, 2), &raw, &ContainmentSuiteParams::new(10, 32)).is_err());
        assert!(suite_positive(&rat(1, 2), &raw, &ContainmentSuiteParams::new(10, 32)).is_err());
        let c = characteristic(&golden_slope()).unwrap();
        assert!(suite_negative(&rat(3, 2), &c.double(), &ContainmentSuiteParams::new(10, 32)).is_err());
    }

    #[test]
    fn extremal_suite_small_run() {
        let dc = characteristic(&golden_slope()).unwrap().double();
        let (report, out) = suite_extremal(&dc, 500, 20).unwrap();
        assert!(report.all_pass(), "{report}");
        assert!(out.violations.is_empty());
        let c = characteristic(&golden_slope()).unwrap();
        let (report, _) = suite_extremal(&c, 500, 20).unwrap();
        assert!(report.all_pass(), "{report}");
    }
}
