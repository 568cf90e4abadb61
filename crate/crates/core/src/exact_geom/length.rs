use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::arc::PLArc;
use super::rational::{format_rational, parse_rational, to_f64, Rational};

/// Bits of absolute precision per term used when a length is first built.
const DEFAULT_BITS: u64 = 64;
/// Escalation stops here; at this width every comparison the crate makes is
/// far below any tie gap that can be requested.
const MAX_BITS: u64 = 1 << 14;

/// A length of the form `Σ √tᵢ` with certified rational bounds.
#[derive(Clone, PartialEq, Eq)]
pub struct LengthValue {
    pub lower: Rational,
    pub upper: Rational,
    /// Squared lengths of the pieces; the value is the sum of their roots.
    pub terms: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LengthOrdering {
    Less,
    Greater,
    Tie,
}

impl LengthOrdering {
    /// `Tie` maps to `Equal`; callers use this to chain a lexicographic tie-break.
    pub fn to_ordering(self) -> Ordering {
        match self {
            LengthOrdering::Less => Ordering::Less,
            LengthOrdering::Greater => Ordering::Greater,
            LengthOrdering::Tie => Ordering::Equal,
        }
    }
}

impl LengthValue {
    pub fn zero() -> Self {
        Self { lower: Rational::zero(), upper: Rational::zero(), terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<Rational>) -> Self {
        let mut terms: Vec<Rational> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        assert!(terms.iter().all(|t| t.is_positive()), "negative squared length");
        terms.sort();
        let (lower, upper) = bounds_at(&terms, DEFAULT_BITS);
        Self { lower, upper, terms }
    }

    /// The exact nonnegative rational `r`.
    pub fn from_rational(r: &Rational) -> Self {
        assert!(!r.is_negative());
        Self::from_terms(vec![r * r])
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    /// Bounds tightened so the width is at most `width` (or exact).
    pub fn refine(&self, width: &Rational) -> LengthValue {
        let mut bits = DEFAULT_BITS;
        let mut out = self.clone();
        while out.width() > *width && bits < MAX_BITS {
            bits *= 2;
            let (lower, upper) = bounds_at(&self.terms, bits);
            out.lower = lower;
            out.upper = upper;
        }
        out
    }

    fn refined_bits(&self, bits: u64) -> LengthValue {
        let (lower, upper) = bounds_at(&self.terms, bits);
        LengthValue { lower, upper, terms: self.terms.clone() }
    }

    pub fn add(&self, other: &LengthValue) -> LengthValue {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        terms.sort();
        LengthValue { lower: &self.lower + &other.lower, upper: &self.upper + &other.upper, terms }
    }

    /// Exact value when every term is the square of a rational.
    pub fn exact_value(&self) -> Option<Rational> {
        let mut acc = Rational::zero();
        for t in &self.terms {
            acc += rational_sqrt_exact(t)?;
        }
        Some(acc)
    }

    /// Exact comparison with a rational. A sum of square roots of positive
    /// rationals is rational only when every root is, so refinement always
    /// separates in the irrational case.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let mut exact = Rational::zero();
        let mut irrational = Vec::new();
        for t in &self.terms {
            match rational_sqrt_exact(t) {
                Some(v) => exact += v,
                None => irrational.push(t.clone()),
            }
        }
        if irrational.is_empty() {
            return exact.cmp(r);
        }
        let target = r - &exact;
        let mut bits = DEFAULT_BITS;
        loop {
            let (lo, hi) = bounds_at(&irrational, bits);
            if hi < target {
                return Ordering::Less;
            }
            if lo > target {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mid = (&self.lower + &self.upper) / Rational::from_integer(2.into());
        to_f64(&mid)
    }
}

impl fmt::Debug for LengthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Length[{:.12}; {} terms]", self.to_f64(), self.terms.len())
    }
}

impl PartialOrd for LengthValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LengthValue {
    /// Values closer than 1e-40 compare equal.
    fn cmp(&self, other: &Self) -> Ordering {
        match compare_lengths(self, other, &super::rational::ten_pow_neg(40)) {
            LengthOrdering::Less => Ordering::Less,
            LengthOrdering::Greater => Ordering::Greater,
            LengthOrdering::Tie => Ordering::Equal,
        }
    }
}

pub fn arc_length(a: &PLArc) -> LengthValue {
    LengthValue::from_terms(a.segments().map(|s| s.len2()).collect())
}

/// Orders two lengths, reporting `Tie` when they cannot be separated at
/// `min(tie_gap, 1e-30)`. Identical term multisets are an exact tie.
pub fn compare_lengths(a: &LengthValue, b: &LengthValue, tie_gap: &Rational) -> LengthOrdering {
    assert!(tie_gap.is_positive(), "tie_gap must be positive");
    if a.terms == b.terms {
        return LengthOrdering::Tie;
    }
    if let (Some(x), Some(y)) = (a.exact_value(), b.exact_value()) {
        return match x.cmp(&y) {
            Ordering::Less => LengthOrdering::Less,
            Ordering::Greater => LengthOrdering::Greater,
            Ordering::Equal => LengthOrdering::Tie,
        };
    }
    let floor = super::rational::ten_pow_neg(30);
    let final_gap = if *tie_gap < floor { tie_gap.clone() } else { floor };
    let mut bits = DEFAULT_BITS;
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        if a.upper < b.lower {
            return LengthOrdering::Less;
        }
        if b.upper < a.lower {
            return LengthOrdering::Greater;
        }
        if (a.width() < final_gap && b.width() < final_gap) || bits >= MAX_BITS {
            return LengthOrdering::Tie;
        }
        bits *= 2;
        a = a.refined_bits(bits);
        b = b.refined_bits(bits);
    }
}

/// Bounds on `Σ √tᵢ`, each term within `2^-bits` of its root.
fn bounds_at(terms: &[Rational], bits: u64) -> (Rational, Rational) {
    let mut lower = Rational::zero();
    let mut upper = Rational::zero();
    for t in terms {
        if let Some(v) = rational_sqrt_exact(t) {
            lower += &v;
            upper += v;
            continue;
        }
        let (lo, hi) = sqrt_bounds(t, bits);
        lower += lo;
        upper += hi;
    }
    (lower, upper)
}

/// `floor(√(p q 4^k)) / (q 2^k)` and the next step up.
fn sqrt_bounds(t: &Rational, bits: u64) -> (Rational, Rational) {
    let p = t.numer();
    let q = t.denom();
    let scaled: BigInt = (p * q) << (2 * bits as usize);
    let s = to_uint(&scaled).sqrt();
    let denom: BigInt = q << bits as usize;
    let s = BigInt::from_biguint(Sign::Plus, s);
    let lo = Rational::new(s.clone(), denom.clone());
    let hi = Rational::new(s + BigInt::one(), denom);
    (lo, hi)
}

fn to_uint(v: &BigInt) -> BigUint {
    v.to_biguint().expect("nonnegative")
}

/// `√t` when it is rational.
pub fn rational_sqrt_exact(t: &Rational) -> Option<Rational> {
    if t.is_zero() {
        return Some(Rational::zero());
    }
    let p = to_uint(t.numer());
    let q = to_uint(t.denom());
    let sp = p.sqrt();
    if &sp * &sp != p {
        return None;
    }
    let sq = q.sqrt();
    if &sq * &sq != q {
        return None;
    }
    Some(Rational::new(BigInt::from(sp), BigInt::from(sq)))
}

#[derive(Serialize, Deserialize)]
struct LengthRepr {
    lower: String,
    upper: String,
    terms: Vec<String>,
}

impl Serialize for LengthValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LengthRepr {
            lower: format_rational(&self.lower),
            upper: format_rational(&self.upper),
            terms: self.terms.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LengthValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LengthRepr::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in &r.terms {
            terms.push(p(t)?);
        }
        Ok(LengthValue { lower: p(&r.lower)?, upper: p(&r.upper)?, terms })
    }
}
