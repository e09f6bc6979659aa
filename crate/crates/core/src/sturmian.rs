//! Constructors for mechanical and characteristic words, the classes built
//! from them (constant run + Sturmian, constant run + doubled Sturmian, and
//! the two extremal representatives), plus prefix-level class classifiers.

use crate::error::{Error, Result};
use crate::exact::cf::{detect_period, CfExpansion};
use crate::exact::quadratic::QuadraticReal;
use crate::words::{
    s_defect_slice, BuiltClass, FiniteWord, Kind, Letter, Rounding, WordStream,
};

/// theta irrational in (0,1), rho in the same field (or rational).
#[derive(Debug, Clone)]
pub struct MechanicalSpec {
    pub theta: QuadraticReal,
    pub rho: QuadraticReal,
    pub variant: Rounding,
}

fn check_slope(theta: &QuadraticReal) -> Result<()> {
    if theta.is_rational() {
        return Err(Error::RationalInput(format!("slope {theta}")));
    }
    let zero = QuadraticReal::from_int(0);
    let one = QuadraticReal::from_int(1);
    if theta.cmp_exact(&zero)? != std::cmp::Ordering::Greater
        || theta.cmp_exact(&one)? != std::cmp::Ordering::Less
    {
        return Err(Error::BadWord(format!("slope {theta} outside (0,1)")));
    }
    Ok(())
}

/// Letters floor((n+1)theta + rho) - floor(n theta + rho) (or the ceiling
/// analogue), n >= 1.
pub fn mechanical(spec: &MechanicalSpec) -> Result<WordStream> {
    check_slope(&spec.theta)?;
    spec.theta.compatible(&spec.rho)?;
    Ok(WordStream::from_kind(
        Kind::Mechanical { theta: spec.theta.clone(), rho: spec.rho.clone(), variant: spec.variant },
        (0, 1),
        Some(spec.theta.clone()),
        BuiltClass::Sturmian,
    ))
}

/// The characteristic word of slope theta (intercept 0). The floor and
/// ceiling variants agree for every n >= 1 and the generator asserts that.
pub fn characteristic(theta: &QuadraticReal) -> Result<WordStream> {
    check_slope(theta)?;
    Ok(WordStream::from_kind(
        Kind::Characteristic { theta: theta.clone() },
        (0, 1),
        Some(theta.clone()),
        BuiltClass::Sturmian,
    ))
}

/// Characteristic word rebuilt from a partial-quotient stream via the
/// standard-word recurrence; letterwise equal to `characteristic` (tested).
pub fn characteristic_directive(quotients: CfExpansion) -> WordStream {
    WordStream::from_kind(
        Kind::Directive { quotients },
        (0, 1),
        None,
        BuiltClass::Sturmian,
    )
}

/// Convenience: directive construction straight from the slope.
pub fn characteristic_directive_of(theta: &QuadraticReal) -> Result<WordStream> {
    check_slope(theta)?;
    let e = detect_period(theta, 4096)?;
    Ok(characteristic_directive(e).with_slope(theta.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordClass {
    /// Constant run then Sturmian.
    S,
    /// Constant run then doubled Sturmian.
    D,
}

/// a^l then s (class S) or a^l then D(s) (class D).
#[derive(Debug, Clone)]
pub struct ClassSpec {
    pub letter: Letter,
    pub run: usize,
    pub inner: WordStream,
    pub class: WordClass,
}

pub fn build_class(spec: &ClassSpec) -> Result<WordStream> {
    if spec.letter != 0 && spec.letter != 1 {
        return Err(Error::BadWord(format!("run letter {} not in {{0,1}}", spec.letter)));
    }
    let base = match spec.class {
        WordClass::S => spec.inner.clone(),
        WordClass::D => spec.inner.double(),
    };
    let head = FiniteWord::new(vec![spec.letter; spec.run]);
    let tag = match spec.class {
        WordClass::S => BuiltClass::S,
        WordClass::D => BuiltClass::D,
    };
    Ok(base.prepend(&head).with_class(tag))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CVariant {
    /// 011 then the doubled characteristic word: the upper extremal word.
    E011,
    /// 100 then the doubled characteristic word: the lower extremal word.
    E100,
}

/// The two extremal words of slope theta. Both lie in the doubled class:
/// 011(Dc) = 0 D(1c) and 100(Dc) = 1 D(0c), and 0c, 1c are Sturmian.
pub fn c_representative(variant: CVariant, theta: &QuadraticReal) -> Result<WordStream> {
    let c = characteristic(theta)?;
    let (head, tag) = match variant {
        CVariant::E011 => (FiniteWord::from_digits("011").unwrap(), BuiltClass::C011),
        CVariant::E100 => (FiniteWord::from_digits("100").unwrap(), BuiltClass::C100),
    };
    Ok(c.double().prepend(&head).with_class(tag))
}

// ---------------------------------------------------------------------------
// prefix-level classification

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassVerdict {
    /// The prefix can extend to no member of the class; carries a witness.
    Inconsistent(FiniteWord),
    /// No obstruction found within the prefix.
    ConsistentUpToLength(usize),
    /// The stream was built as a member.
    ByConstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifyTarget {
    Sturmian,
    S,
    D,
}

/// Test a finite prefix against a class. Membership of an infinite word is
/// only semi-decidable from a prefix, so the positive answer is
/// ConsistentUpToLength.
pub fn classify_prefix(p: &FiniteWord, target: ClassifyTarget) -> ClassVerdict {
    if !p.is_binary() {
        return ClassVerdict::Inconsistent(p.clone());
    }
    match target {
        ClassifyTarget::Sturmian => match crate::words::balance_defect_slice(p.letters()) {
            Some(witness) => ClassVerdict::Inconsistent(witness),
            None => ClassVerdict::ConsistentUpToLength(p.len()),
        },
        ClassifyTarget::S => match s_defect_slice(p.letters()) {
            Some(witness) => ClassVerdict::Inconsistent(witness),
            None => ClassVerdict::ConsistentUpToLength(p.len()),
        },
        ClassifyTarget::D => classify_d_prefix(p),
    }
}

/// Both pairing parses of a prefix as a doubled word. `offset = 0` pairs
/// (1,2)(3,4)...; `offset = 1` treats letter 1 as the tail of a pair cut by
/// the shift and pairs (2,3)(4,5)... A trailing unpaired letter is accepted.
pub fn undouble_parse(p: &[Letter], offset: usize) -> Option<Vec<Letter>> {
    let mut inner = Vec::with_capacity(p.len() / 2 + 1);
    if offset == 1 {
        if p.is_empty() {
            return Some(inner);
        }
        inner.push(p[0]);
    }
    let body = &p[offset..];
    for pair in body.chunks(2) {
        if pair.len() == 2 && pair[0] != pair[1] {
            return None;
        }
        inner.push(pair[0]);
    }
    Some(inner)
}

fn classify_d_prefix(p: &FiniteWord) -> ClassVerdict {
    if p.is_empty() {
        return ClassVerdict::ConsistentUpToLength(0);
    }
    // Try the two pairing offsets; the doubled class is exactly the union of
    // doubled words and their one-step shifts, so one of the two must work.
    let mut best_witness: Option<FiniteWord> = None;
    for offset in [0usize, 1] {
        match undouble_parse(p.letters(), offset) {
            None => continue,
            Some(inner) => match s_defect_slice(&inner) {
                None => return ClassVerdict::ConsistentUpToLength(p.len()),
                Some(w) => {
                    if best_witness.is_none() {
                        best_witness = Some(w);
                    }
                }
            },
        }
    }
    ClassVerdict::Inconsistent(best_witness.unwrap_or_else(|| p.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadratic::golden_slope;
    use crate::exact::rational::rat;
    use crate::words::{balance_defect, compare, s_defect, OrderVerdict, WordOrder};

    fn theta() -> QuadraticReal {
        golden_slope()
    }

    #[test]
    fn characteristic_prefixes() {
        let c = characteristic(&theta()).unwrap();
        assert_eq!(c.prefix(13).to_string(), "0100101001001");
        let comp = QuadraticReal::new(-1, 1, 2, 5).unwrap(); // (sqrt5-1)/2
        let c2 = characteristic(&comp).unwrap();
        assert_eq!(c2.prefix(5).to_string(), "10110");
    }

    #[test]
    fn mechanical_variants() {
        let m = mechanical(&MechanicalSpec {
            theta: theta(),
            rho: QuadraticReal::from_int(0),
            variant: Rounding::Floor,
        })
        .unwrap();
        assert_eq!(m.prefix(10).to_string(), "0100101001");
        // rho = -theta gives 0c (floor) and 1c (ceil)
        let c = characteristic(&theta()).unwrap();
        let zero_c = mechanical(&MechanicalSpec {
            theta: theta(),
            rho: theta().neg(),
            variant: Rounding::Floor,
        })
        .unwrap();
        let one_c = mechanical(&MechanicalSpec {
            theta: theta(),
            rho: theta().neg(),
            variant: Rounding::Ceil,
        })
        .unwrap();
        assert_eq!(zero_c.prefix(32), FiniteWord::new(vec![0]).concat(&c.prefix(31)));
        assert_eq!(one_c.prefix(32), FiniteWord::new(vec![1]).concat(&c.prefix(31)));
    }

    #[test]
    fn rational_slope_rejected() {
        let half = QuadraticReal::from_rational(&rat(1, 2));
        assert!(characteristic(&half).is_err());
        assert!(mechanical(&MechanicalSpec {
            theta: half,
            rho: QuadraticReal::from_int(0),
            variant: Rounding::Floor
        })
        .is_err());
    }

    #[test]
    fn directive_matches_floor_formula() {
        let c = characteristic(&theta()).unwrap();
        let d = characteristic_directive_of(&theta()).unwrap();
        assert_eq!(d.prefix(13).to_string(), "0100101001001");
        assert_eq!(c.prefix(5000), d.prefix(5000));
        let r2 = QuadraticReal::new(-1, 1, 1, 2).unwrap(); // sqrt2 - 1
        let c2 = characteristic(&r2).unwrap();
        let d2 = characteristic_directive_of(&r2).unwrap();
        assert_eq!(c2.prefix(5000), d2.prefix(5000));
    }

    #[test]
    fn class_builders() {
        let c = characteristic(&theta()).unwrap();
        let d0 = build_class(&ClassSpec { letter: 0, run: 0, inner: c.clone(), class: WordClass::D })
            .unwrap();
        assert_eq!(d0.prefix(10).to_string(), "0011000011");
        assert!(d0.built_class().is_d_class());
        let s3 = build_class(&ClassSpec { letter: 1, run: 3, inner: c.clone(), class: WordClass::S })
            .unwrap();
        assert_eq!(s3.prefix(5).to_string(), "11101");
        // even run: 0^2 D(s) = D(0^1 s)
        let left = build_class(&ClassSpec { letter: 0, run: 2, inner: c.clone(), class: WordClass::D })
            .unwrap();
        let zero_s =
            build_class(&ClassSpec { letter: 0, run: 1, inner: c, class: WordClass::S }).unwrap();
        assert_eq!(left.prefix(64), zero_s.double().prefix(64));
    }

    #[test]
    fn c_representatives() {
        let upper = c_representative(CVariant::E011, &theta()).unwrap();
        assert_eq!(upper.prefix(13).to_string(), "0110011000011");
        let lower = c_representative(CVariant::E100, &theta()).unwrap();
        assert_eq!(lower.prefix(7).to_string(), "1000011");
        assert_eq!(
            compare(&lower, &upper, WordOrder::Alt, 3),
            OrderVerdict::Less { index: 1 }
        );
        // the doubled interior contains 011 and 100, so it sits outside the
        // run-then-Sturmian class while still parsing as a doubled word
        assert_eq!(s_defect(&upper.shift(3), 1000), Some(FiniteWord::empty()));
        assert!(balance_defect(&upper.shift(3), 4).is_some());
    }

    #[test]
    fn d_classifier() {
        let c = characteristic(&theta()).unwrap();
        let d = c.double();
        let verdict = classify_prefix(&d.prefix(64), ClassifyTarget::D);
        assert_eq!(verdict, ClassVerdict::ConsistentUpToLength(64));
        // 010 cannot extend to any run-then-doubled word
        let p010 = FiniteWord::from_digits("010").unwrap();
        assert!(matches!(classify_prefix(&p010, ClassifyTarget::D), ClassVerdict::Inconsistent(_)));
        // 0011 fails the balance test
        let p = FiniteWord::from_digits("0011").unwrap();
        assert!(matches!(
            classify_prefix(&p, ClassifyTarget::Sturmian),
            ClassVerdict::Inconsistent(w) if w.is_empty()
        ));
        // shifts of constructed members stay consistent
        for n in 0..24 {
            let v = classify_prefix(&d.shift(n).prefix(128), ClassifyTarget::D);
            assert_eq!(v, ClassVerdict::ConsistentUpToLength(128), "shift {n}");
        }
        // constant prefixes extend to members of every class
        let zeros = FiniteWord::from_digits("0000").unwrap();
        assert!(matches!(
            classify_prefix(&zeros, ClassifyTarget::D),
            ClassVerdict::ConsistentUpToLength(4)
        ));
    }
}
