//! Finite and lazy infinite words over small integer alphabets.
//!
//! Words are 1-indexed throughout, matching the usual w_1 w_2 ... convention;
//! every public index argument and result uses that convention. Streams are
//! immutable after construction except for the prefix memo, which is filled
//! idempotently under a lock and is safe for concurrent readers.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;

use crate::exact::cf::CfExpansion;
use crate::exact::quadratic::QuadraticReal;
use crate::exact::rational::{rat_int, Rat};

pub type Letter = i64;

// ---------------------------------------------------------------------------
// finite words

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn from_digits(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as Letter))
            .collect::<Option<Vec<_>>>()
            .map(FiniteWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// 1-indexed letter access.
    pub fn letter(&self, i: usize) -> Letter {
        self.0[i - 1]
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&c| c == 0 || c == 1)
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    pub fn contains_factor(&self, factor: &[Letter]) -> bool {
        if factor.is_empty() {
            return true;
        }
        self.0.windows(factor.len()).any(|w| w == factor)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&c| (0..=9).contains(&c)) {
            for &c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

// ---------------------------------------------------------------------------
// infinite streams

/// How a stream was built; carries enough structure to recover the slope and
/// the class the construction guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltClass {
    /// Mechanical or characteristic construction.
    Sturmian,
    /// Constant run then a Sturmian word.
    S,
    /// Constant run then a doubled Sturmian word.
    D,
    /// 011 then a doubled characteristic word.
    C011,
    /// 100 then a doubled characteristic word.
    C100,
    Raw,
}

impl BuiltClass {
    pub fn is_d_class(self) -> bool {
        matches!(self, BuiltClass::D | BuiltClass::C011 | BuiltClass::C100)
    }

    pub fn is_c_representative(self) -> bool {
        matches!(self, BuiltClass::C011 | BuiltClass::C100)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

pub(crate) enum Kind {
    Periodic { block: Vec<Letter> },
    Custom { name: String, fill: Box<dyn Fn(usize) -> Vec<Letter> + Send + Sync> },
    Mechanical { theta: QuadraticReal, rho: QuadraticReal, variant: Rounding },
    Characteristic { theta: QuadraticReal },
    Directive { quotients: CfExpansion },
    Shift { parent: WordStream, by: usize },
    Double { parent: WordStream },
    AltNegate { parent: WordStream },
    Prefixed { head: Vec<Letter>, parent: WordStream },
}

pub(crate) struct Inner {
    kind: Kind,
    memo: Mutex<Vec<Letter>>,
    bounds: (Letter, Letter),
    slope: Option<QuadraticReal>,
    class: BuiltClass,
}

#[derive(Clone)]
pub struct WordStream {
    inner: Arc<Inner>,
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordStream({})", self.describe())
    }
}

fn compute_prefix(kind: &Kind, n: usize) -> Vec<Letter> {
    match kind {
        Kind::Periodic { block } => (0..n).map(|i| block[i % block.len()]).collect(),
        Kind::Custom { fill, .. } => {
            let mut v = fill(n);
            v.truncate(n);
            assert!(v.len() == n, "custom fill returned a short prefix");
            v
        }
        Kind::Mechanical { theta, rho, variant } => {
            let mut out = Vec::with_capacity(n);
            let mut prev = mech_floor(theta, rho, 1, *variant);
            for i in 1..=n {
                let next = mech_floor(theta, rho, i as i64 + 1, *variant);
                out.push((&next - &prev).to_i64().expect("letter fits i64"));
                prev = next;
            }
            out
        }
        Kind::Characteristic { theta } => {
            let zero = QuadraticReal::from_int(0);
            let floor_word = compute_prefix(
                &Kind::Mechanical { theta: theta.clone(), rho: zero.clone(), variant: Rounding::Floor },
                n,
            );
            let ceil_word = compute_prefix(
                &Kind::Mechanical { theta: theta.clone(), rho: zero, variant: Rounding::Ceil },
                n,
            );
            assert_eq!(floor_word, ceil_word, "floor and ceil characteristic words diverged");
            floor_word
        }
        Kind::Directive { quotients } => directive_prefix(quotients, n),
        Kind::Shift { parent, by } => parent.with_prefix(n + by, |p| p[*by..].to_vec()),
        Kind::Double { parent } => parent.with_prefix(n.div_ceil(2), |p| {
            let mut out = Vec::with_capacity(n);
            for &c in p {
                out.push(c);
                out.push(c);
            }
            out.truncate(n);
            out
        }),
        Kind::AltNegate { parent } => parent.with_prefix(n, |p| {
            p.iter()
                .enumerate()
                .map(|(i0, &c)| if i0 % 2 == 0 { -c } else { c })
                .collect()
        }),
        Kind::Prefixed { head, parent } => {
            if n <= head.len() {
                head[..n].to_vec()
            } else {
                let mut out = head.clone();
                parent.with_prefix(n - head.len(), |p| out.extend_from_slice(p));
                out
            }
        }
    }
}

/// floor(k*theta + rho) or the ceiling analogue, exactly.
fn mech_floor(theta: &QuadraticReal, rho: &QuadraticReal, k: i64, variant: Rounding) -> num_bigint::BigInt {
    let x = theta.mul_rat(&rat_int(k)).add(rho).expect("same field");
    match variant {
        Rounding::Floor => x.floor(),
        Rounding::Ceil => -x.neg().floor(),
    }
}

/// Standard-word recurrence pinned against the floor formula by tests:
/// with theta = [0; a1, a2, ...], set s(-1) = 1, s(0) = 0,
/// s(1) = 0^(a1-1) 1 and s(n) = s(n-1)^(a_n) s(n-2); the prefixes of s(n),
/// n >= 1, stabilize to the characteristic word.
fn directive_prefix(quotients: &CfExpansion, n: usize) -> Vec<Letter> {
    let a1 = quotients
        .quotient(1)
        .to_usize()
        .expect("partial quotient fits usize");
    assert!(a1 >= 1, "slope must lie in (0,1)");
    let mut prev: Vec<Letter> = vec![1]; // s(-1)... replaced below by s(0) pairing
    let mut cur: Vec<Letter> = vec![0]; // s(0)
    // s(1)
    let mut s1 = vec![0; a1 - 1];
    s1.push(1);
    prev = std::mem::replace(&mut cur, s1);
    let mut k = 2usize;
    while cur.len() < n {
        let a = quotients
            .quotient(k)
            .to_usize()
            .expect("partial quotient fits usize");
        let mut next = Vec::with_capacity(cur.len() * a + prev.len());
        for _ in 0..a {
            next.extend_from_slice(&cur);
        }
        next.extend_from_slice(&prev);
        prev = std::mem::replace(&mut cur, next);
        k += 1;
    }
    cur.truncate(n);
    cur
}

impl WordStream {
    pub(crate) fn from_kind(
        kind: Kind,
        bounds: (Letter, Letter),
        slope: Option<QuadraticReal>,
        class: BuiltClass,
    ) -> Self {
        WordStream {
            inner: Arc::new(Inner { kind, memo: Mutex::new(Vec::new()), bounds, slope, class }),
        }
    }

    pub fn periodic(block: Vec<Letter>) -> Self {
        assert!(!block.is_empty(), "periodic block must be nonempty");
        let lo = *block.iter().min().unwrap();
        let hi = *block.iter().max().unwrap();
        Self::from_kind(Kind::Periodic { block }, (lo, hi), None, BuiltClass::Raw)
    }

    pub fn constant(letter: Letter) -> Self {
        Self::periodic(vec![letter])
    }

    /// Deterministic generator stream; `fill(n)` must return the same first n
    /// letters on every call and must not touch this stream.
    pub fn custom(
        name: impl Into<String>,
        bounds: (Letter, Letter),
        fill: impl Fn(usize) -> Vec<Letter> + Send + Sync + 'static,
    ) -> Self {
        Self::from_kind(
            Kind::Custom { name: name.into(), fill: Box::new(fill) },
            bounds,
            None,
            BuiltClass::Raw,
        )
    }

    fn ensure(&self, n: usize) {
        let mut memo = self.inner.memo.lock().unwrap();
        if memo.len() < n {
            let target = n.max(memo.len() * 2).max(32);
            let fresh = compute_prefix(&self.inner.kind, target);
            debug_assert!(fresh[..memo.len()] == memo[..], "generator is not pure");
            *memo = fresh;
        }
    }

    /// Borrow the first n letters without cloning. The closure must not call
    /// back into this same stream.
    pub fn with_prefix<R>(&self, n: usize, f: impl FnOnce(&[Letter]) -> R) -> R {
        self.ensure(n);
        let memo = self.inner.memo.lock().unwrap();
        f(&memo[..n])
    }

    pub fn prefix(&self, n: usize) -> FiniteWord {
        self.with_prefix(n, |p| FiniteWord::new(p.to_vec()))
    }

    /// 1-indexed letter.
    pub fn letter(&self, i: usize) -> Letter {
        assert!(i >= 1, "letters are 1-indexed");
        self.with_prefix(i, |p| p[i - 1])
    }

    pub fn bounds(&self) -> (Letter, Letter) {
        self.inner.bounds
    }

    pub fn slope(&self) -> Option<QuadraticReal> {
        self.inner.slope.clone()
    }

    pub fn built_class(&self) -> BuiltClass {
        self.inner.class
    }

    pub fn describe(&self) -> String {
        match &self.inner.kind {
            Kind::Periodic { block } => {
                format!("periodic({})", FiniteWord::new(block.clone()))
            }
            Kind::Custom { name, .. } => format!("custom({name})"),
            Kind::Mechanical { theta, rho, variant } => {
                let v = if *variant == Rounding::Floor { "floor" } else { "ceil" };
                format!("mech({theta},{rho},{v})")
            }
            Kind::Characteristic { theta } => format!("c({theta})"),
            Kind::Directive { quotients } => format!("directive({quotients})"),
            Kind::Shift { parent, by } => format!("T^{by} {}", parent.describe()),
            Kind::Double { parent } => format!("D {}", parent.describe()),
            Kind::AltNegate { parent } => format!("N {}", parent.describe()),
            Kind::Prefixed { head, parent } => {
                format!("{} {}", FiniteWord::new(head.clone()), parent.describe())
            }
        }
    }

    // -- operators ---------------------------------------------------------

    /// T^n: drop the first n letters.
    pub fn shift(&self, n: usize) -> WordStream {
        if n == 0 {
            return self.clone();
        }
        // collapse nested shifts so T^a (T^b w) = T^(a+b) w shares one parent
        if let Kind::Shift { parent, by } = &self.inner.kind {
            return parent.shift(by + n);
        }
        let class = match self.inner.class {
            BuiltClass::Sturmian => BuiltClass::Sturmian,
            BuiltClass::S => BuiltClass::S,
            c if c.is_d_class() => BuiltClass::D,
            _ => BuiltClass::Raw,
        };
        WordStream::from_kind(
            Kind::Shift { parent: self.clone(), by: n },
            self.inner.bounds,
            self.inner.slope.clone(),
            class,
        )
    }

    /// D: repeat every letter twice. Preserves the slope.
    pub fn double(&self) -> WordStream {
        let class = match self.inner.class {
            BuiltClass::Sturmian | BuiltClass::S => BuiltClass::D,
            _ => BuiltClass::Raw,
        };
        WordStream::from_kind(
            Kind::Double { parent: self.clone() },
            self.inner.bounds,
            self.inner.slope.clone(),
            class,
        )
    }

    /// N: negate the letters at odd positions. An involution.
    pub fn alt_negate(&self) -> WordStream {
        if let Kind::AltNegate { parent } = &self.inner.kind {
            return parent.clone();
        }
        let (m, hi) = self.inner.bounds;
        let bounds = (m.min(-hi), hi.max(-m));
        WordStream::from_kind(Kind::AltNegate { parent: self.clone() }, bounds, None, BuiltClass::Raw)
    }

    /// Prepend a finite word.
    pub fn prepend(&self, head: &FiniteWord) -> WordStream {
        if head.is_empty() {
            return self.clone();
        }
        let (m, hi) = self.inner.bounds;
        let hm = head.letters().iter().copied().min().unwrap();
        let hx = head.letters().iter().copied().max().unwrap();
        WordStream::from_kind(
            Kind::Prefixed { head: head.letters().to_vec(), parent: self.clone() },
            (m.min(hm), hi.max(hx)),
            self.inner.slope.clone(),
            BuiltClass::Raw,
        )
    }

    pub(crate) fn with_class(self, class: BuiltClass) -> WordStream {
        WordStream {
            inner: Arc::new(Inner {
                kind: Kind::Shift { parent: self.clone(), by: 0 },
                memo: Mutex::new(Vec::new()),
                bounds: self.inner.bounds,
                slope: self.inner.slope.clone(),
                class,
            }),
        }
    }

    pub(crate) fn with_slope(self, slope: QuadraticReal) -> WordStream {
        WordStream {
            inner: Arc::new(Inner {
                kind: Kind::Shift { parent: self.clone(), by: 0 },
                memo: Mutex::new(Vec::new()),
                bounds: self.inner.bounds,
                slope: Some(slope),
                class: self.inner.class,
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// orders

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordOrder {
    Lex,
    Alt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderVerdict {
    Less { index: usize },
    Greater { index: usize },
    EqualUpToHorizon(usize),
}

/// Compare two streams up to `horizon` letters. Alt order compares the
/// alt-negated letters lexicographically.
pub fn compare(u: &WordStream, v: &WordStream, order: WordOrder, horizon: usize) -> OrderVerdict {
    assert!(horizon >= 1);
    let pu = u.prefix(horizon);
    let pv = v.prefix(horizon);
    compare_slices(pu.letters(), pv.letters(), order)
}

pub fn compare_slices(pu: &[Letter], pv: &[Letter], order: WordOrder) -> OrderVerdict {
    let horizon = pu.len().min(pv.len());
    for i in 1..=horizon {
        let (mut a, mut b) = (pu[i - 1], pv[i - 1]);
        if order == WordOrder::Alt && i % 2 == 1 {
            a = -a;
            b = -b;
        }
        match a.cmp(&b) {
            Ordering::Less => return OrderVerdict::Less { index: i },
            Ordering::Greater => return OrderVerdict::Greater { index: i },
            Ordering::Equal => {}
        }
    }
    OrderVerdict::EqualUpToHorizon(horizon)
}

// ---------------------------------------------------------------------------
// factors and defect searches

/// All distinct length-k factors of the first N letters.
pub fn factor_set(w: &WordStream, k: usize, n: usize) -> BTreeSet<FiniteWord> {
    assert!(k >= 1 && k <= n, "need 1 <= k <= N");
    w.with_prefix(n, |p| {
        p.windows(k).map(|win| FiniteWord::new(win.to_vec())).collect()
    })
}

/// Rolling polynomial hash over the letters (mod 2^61 - 1) for O(1)
/// substring digests; every digest hit is verified letterwise.
struct PolyHash {
    pre: Vec<u64>,
    pows: Vec<u64>,
}

const HASH_MOD: u128 = (1 << 61) - 1;
const HASH_BASE: u128 = 131;

impl PolyHash {
    fn new(p: &[Letter]) -> Self {
        let mut pre = Vec::with_capacity(p.len() + 1);
        let mut pows = Vec::with_capacity(p.len() + 1);
        pre.push(0u64);
        pows.push(1u64);
        for (i, &c) in p.iter().enumerate() {
            let x = (c as i128 + 8) as u128; // small letters shifted positive
            pre.push((((pre[i] as u128) * HASH_BASE + x) % HASH_MOD) as u64);
            pows.push((((pows[i] as u128) * HASH_BASE) % HASH_MOD) as u64);
        }
        PolyHash { pre, pows }
    }

    /// digest of p[start..start+len] (0-indexed)
    fn digest(&self, start: usize, len: usize) -> u64 {
        let hi = self.pre[start + len] as u128;
        let lo = (self.pre[start] as u128) * (self.pows[len] as u128) % HASH_MOD;
        ((hi + HASH_MOD - lo) % HASH_MOD) as u64
    }
}

/// Search for a finite word u such that both `l0 u r0` and `l1 u r1` occur in
/// `p`. Returns the shortest such u, scanning lengths upward.
fn paired_pattern_defect(
    p: &[Letter],
    left0: &[Letter],
    right0: &[Letter],
    left1: &[Letter],
    right1: &[Letter],
) -> Option<FiniteWord> {
    let hash = PolyHash::new(p);
    let pad0 = left0.len() + right0.len();
    let pad1 = left1.len() + right1.len();
    let matches_at = |pos: usize, pat: &[Letter]| p[pos..pos + pat.len()] == *pat;
    for k in 0..p.len().saturating_sub(pad0.min(pad1) + 1) {
        let m0 = k + pad0;
        let m1 = k + pad1;
        if m0 > p.len() && m1 > p.len() {
            break;
        }
        let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
        if m0 <= p.len() {
            for i in 0..=p.len() - m0 {
                if matches_at(i, left0) && matches_at(i + left0.len() + k, right0) {
                    seen.entry(hash.digest(i + left0.len(), k)).or_default().push(i);
                }
            }
        }
        if m1 <= p.len() && !seen.is_empty() {
            for j in 0..=p.len() - m1 {
                if matches_at(j, left1) && matches_at(j + left1.len() + k, right1) {
                    let d = hash.digest(j + left1.len(), k);
                    if let Some(cands) = seen.get(&d) {
                        for &i in cands {
                            if p[i + left0.len()..i + left0.len() + k]
                                == p[j + left1.len()..j + left1.len() + k]
                            {
                                return Some(FiniteWord::new(
                                    p[i + left0.len()..i + left0.len() + k].to_vec(),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn assert_binary(p: &[Letter], what: &str) {
    assert!(p.iter().all(|&c| c == 0 || c == 1), "{what} requires a 0/1 word");
}

/// Witness u with both 0u0 and 1u1 among the factors of the first N letters,
/// or None. None on a long prefix is the balance half of the Sturmian test.
pub fn balance_defect(w: &WordStream, n: usize) -> Option<FiniteWord> {
    w.with_prefix(n, |p| balance_defect_slice(p))
}

pub fn balance_defect_slice(p: &[Letter]) -> Option<FiniteWord> {
    assert_binary(p, "balance_defect");
    paired_pattern_defect(p, &[0], &[0], &[1], &[1])
}

/// Equivalent balance test via window-sum spread: for every factor length,
/// max window sum - min window sum must stay <= 1. Returns the first failing
/// length.
pub fn balance_spread_violation(p: &[Letter]) -> Option<usize> {
    assert_binary(p, "balance_spread");
    let mut sums: Vec<i64> = Vec::with_capacity(p.len() + 1);
    sums.push(0);
    for (i, &c) in p.iter().enumerate() {
        sums.push(sums[i] + c);
    }
    for m in 1..=p.len() {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for i in 0..=p.len() - m {
            let s = sums[i + m] - sums[i];
            lo = lo.min(s);
            hi = hi.max(s);
        }
        if hi - lo >= 2 {
            return Some(m);
        }
    }
    None
}

/// Witness u with both 01u1 and 10u0 among the factors, or None. None on a
/// long prefix is the membership test for constant-run-then-Sturmian words.
pub fn s_defect(w: &WordStream, n: usize) -> Option<FiniteWord> {
    w.with_prefix(n, |p| s_defect_slice(p))
}

pub fn s_defect_slice(p: &[Letter]) -> Option<FiniteWord> {
    assert_binary(p, "s_defect");
    paired_pattern_defect(p, &[0, 1], &[1], &[1, 0], &[0])
}

/// Cross-word variant: u with 0u0 in the first word and 1u1 in the second.
pub fn cross_balance_defect(a: &WordStream, b: &WordStream, n: usize) -> Option<FiniteWord> {
    let pa = a.prefix(n);
    let pb = b.prefix(n);
    cross_balance_defect_slices(pa.letters(), pb.letters())
}

pub fn cross_balance_defect_slices(pa: &[Letter], pb: &[Letter]) -> Option<FiniteWord> {
    assert_binary(pa, "cross_balance");
    assert_binary(pb, "cross_balance");
    // join with a separator letter that can never participate in a match
    let mut joined = Vec::with_capacity(pa.len() + pb.len() + 1);
    joined.extend_from_slice(pa);
    joined.push(5);
    let offset = joined.len();
    joined.extend_from_slice(pb);
    let hash = PolyHash::new(&joined);
    for k in 0..pa.len().max(pb.len()) {
        let m = k + 2;
        let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
        if m <= pa.len() {
            for i in 0..=pa.len() - m {
                if pa[i] == 0 && pa[i + m - 1] == 0 {
                    seen.entry(hash.digest(i + 1, k)).or_default().push(i);
                }
            }
        }
        if m <= pb.len() && !seen.is_empty() {
            for j in 0..=pb.len() - m {
                if pb[j] == 1 && pb[j + m - 1] == 1 {
                    let d = hash.digest(offset + j + 1, k);
                    if let Some(cands) = seen.get(&d) {
                        for &i in cands {
                            if pa[i + 1..i + 1 + k] == pb[j + 1..j + 1 + k] {
                                return Some(FiniteWord::new(pa[i + 1..i + 1 + k].to_vec()));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Exact average of the first N letters.
pub fn slope_estimate(w: &WordStream, n: usize) -> Rat {
    assert!(n >= 1);
    let sum: i64 = w.with_prefix(n, |p| p.iter().sum());
    Rat::new(sum.into(), (n as i64).into())
}

// ---------------------------------------------------------------------------
// brute-force oracles (slow, obviously-correct): kept public so the test
// suites can cross-check the indexed implementations against them.

pub mod brute {
    use super::{FiniteWord, Letter};

    /// Quadratic-time witness search for 0u0 / 1u1.
    pub fn balance_defect(p: &[Letter]) -> Option<FiniteWord> {
        for k in 0..p.len().saturating_sub(1) {
            let m = k + 2;
            for i in 0..p.len().saturating_sub(m - 1) {
                if p[i] != 0 || p[i + m - 1] != 0 {
                    continue;
                }
                for j in 0..p.len().saturating_sub(m - 1) {
                    if p[j] == 1 && p[j + m - 1] == 1 && p[i + 1..i + m - 1] == p[j + 1..j + m - 1] {
                        return Some(FiniteWord::new(p[i + 1..i + m - 1].to_vec()));
                    }
                }
            }
        }
        None
    }

    /// Quadratic-time witness search for 01u1 / 10u0.
    pub fn s_defect(p: &[Letter]) -> Option<FiniteWord> {
        for k in 0..p.len().saturating_sub(2) {
            let m = k + 3;
            for i in 0..p.len().saturating_sub(m - 1) {
                if !(p[i] == 0 && p[i + 1] == 1 && p[i + m - 1] == 1) {
                    continue;
                }
                for j in 0..p.len().saturating_sub(m - 1) {
                    if p[j] == 1
                        && p[j + 1] == 0
                        && p[j + m - 1] == 0
                        && p[i + 2..i + m - 1] == p[j + 2..j + m - 1]
                    {
                        return Some(FiniteWord::new(p[i + 2..i + m - 1].to_vec()));
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadratic::golden_slope;

    fn fib_stream() -> WordStream {
        // independent route: substitution 0 -> 01, 1 -> 0
        WordStream::custom("fib-substitution", (0, 1), |n| {
            let mut w = vec![0i64];
            while w.len() < n {
                let mut next = Vec::with_capacity(w.len() * 2);
                for &c in &w {
                    if c == 0 {
                        next.push(0);
                        next.push(1);
                    } else {
                        next.push(0);
                    }
                }
                w = next;
            }
            w.truncate(n);
            w
        })
    }

    #[test]
    fn prefix_basics() {
        let z = WordStream::constant(0);
        assert_eq!(z.prefix(3).to_string(), "000");
        assert_eq!(z.prefix(0), FiniteWord::empty());
        let w = WordStream::periodic(vec![0, 1]);
        assert_eq!(w.prefix(5).to_string(), "01010");
    }

    #[test]
    fn shift_and_double() {
        let w = fib_stream();
        assert_eq!(w.shift(1).prefix(3).to_string(), "100");
        assert_eq!(w.shift(0).prefix(4), w.prefix(4));
        let d = w.double();
        assert_eq!(d.prefix(10).to_string(), "0011000011");
        assert_eq!(d.shift(2).prefix(4).to_string(), "1100");
        // composition
        assert_eq!(w.shift(3).shift(4).prefix(16), w.shift(7).prefix(16));
    }

    #[test]
    fn alt_negate_involution() {
        let w = fib_stream();
        let n = w.alt_negate();
        assert_eq!(n.prefix(4).letters(), &[0, 1, 0, 0]);
        let ones = WordStream::constant(1).alt_negate();
        assert_eq!(ones.prefix(4).letters(), &[-1, 1, -1, 1]);
        assert_eq!(w.alt_negate().alt_negate().prefix(100), w.prefix(100));
    }

    #[test]
    fn compare_orders() {
        let ones = WordStream::constant(1);
        let zeros = WordStream::constant(0);
        assert_eq!(compare(&ones, &zeros, WordOrder::Alt, 1), OrderVerdict::Less { index: 1 });
        let a = WordStream::periodic(vec![0, 0]);
        let b = WordStream::periodic(vec![0, 1]);
        assert_eq!(compare(&a, &b, WordOrder::Alt, 2), OrderVerdict::Less { index: 2 });
        let w = fib_stream();
        assert_eq!(compare(&w, &w.clone(), WordOrder::Lex, 1000), OrderVerdict::EqualUpToHorizon(1000));
    }

    #[test]
    fn factor_sets() {
        let z = WordStream::constant(0);
        let fs = factor_set(&z, 2, 10);
        assert_eq!(fs.len(), 1);
        let p2 = WordStream::periodic(vec![0, 1]);
        assert_eq!(factor_set(&p2, 2, 10).len(), 2);
        // Sturmian factor complexity k+1
        assert_eq!(factor_set(&fib_stream(), 4, 500).len(), 5);
    }

    #[test]
    fn balance_search() {
        let d = fib_stream().double();
        let w = d.prefix(4);
        let got = balance_defect_slice(w.letters());
        assert_eq!(got, Some(FiniteWord::empty())); // 00 and 11 both occur
        assert_eq!(balance_defect(&fib_stream(), 2000), None);
        // 010110: balanced, no witness
        assert_eq!(balance_defect_slice(&[0, 1, 0, 1, 1, 0]), None);
        assert_eq!(balance_spread_violation(&[0, 1, 0, 1, 1, 0]), None);
        assert!(balance_spread_violation(&[0, 0, 1, 1]).is_some());
    }

    #[test]
    fn s_defect_search() {
        assert_eq!(s_defect_slice(&[0, 1, 1, 1, 0, 0]), Some(FiniteWord::empty()));
        // doubled words contain 011 and 100
        let d = fib_stream().double();
        assert_eq!(s_defect(&d, 2000), Some(FiniteWord::empty()));
        // 0^l then Sturmian stays clean
        let s = fib_stream().prepend(&FiniteWord::from_digits("000").unwrap());
        assert_eq!(s_defect(&s, 2000), None);
    }

    #[test]
    fn brute_agreement_random() {
        // all binary words of length 10
        for code in 0u32..(1 << 10) {
            let p: Vec<Letter> = (0..10).map(|i| ((code >> i) & 1) as Letter).collect();
            assert_eq!(
                balance_defect_slice(&p).is_some(),
                brute::balance_defect(&p).is_some(),
                "balance mismatch on {p:?}"
            );
            assert_eq!(
                balance_defect_slice(&p).is_some(),
                balance_spread_violation(&p).is_some(),
                "spread mismatch on {p:?}"
            );
            assert_eq!(
                s_defect_slice(&p).is_some(),
                brute::s_defect(&p).is_some(),
                "s-defect mismatch on {p:?}"
            );
        }
    }

    #[test]
    fn slope_estimates() {
        assert_eq!(slope_estimate(&WordStream::constant(1), 10), rat_int(1));
        let w = fib_stream();
        let est = slope_estimate(&w, 1000);
        let theta = golden_slope();
        let err = theta.add_rat(&-est);
        let bound = Rat::new(1.into(), 1000.into());
        let abs = if err.sign() == Ordering::Less { err.neg() } else { err };
        assert_eq!(abs.cmp_rat(&bound), Ordering::Less);
    }

    #[test]
    fn doubling_shift_interplay() {
        // T(D(s)) = s_1 D(T(s))
        let s = fib_stream();
        let lhs = s.double().shift(1);
        let rhs = s.shift(1).double().prepend(&FiniteWord::new(vec![s.letter(1)]));
        assert_eq!(lhs.prefix(200), rhs.prefix(200));
    }
}
