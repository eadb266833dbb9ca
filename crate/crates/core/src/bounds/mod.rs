//! Maximum deck sizes and upper bounds, in exact arithmetic.

mod sequences;
mod tables;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use sequences::{emit_sequence, emit_sequence_u64, SequenceForm, SequenceId};
pub use tables::{emit_table, Table, TableId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    LineAudience,
    CircleAudience,
    LineAssistant,
    CircleAssistant,
    Cheney,
    MulcahyFlip,
    FlipRotateAssistant,
    FlipAudience,
    DupAudience,
    DupAssistant,
    DupSignal,
    MultiAudience,
    MultiAssistant,
    BctmTwoHidden,
}

impl Variant {
    pub const ALL: [Variant; 14] = [
        Variant::LineAudience,
        Variant::CircleAudience,
        Variant::LineAssistant,
        Variant::CircleAssistant,
        Variant::Cheney,
        Variant::MulcahyFlip,
        Variant::FlipRotateAssistant,
        Variant::FlipAudience,
        Variant::DupAudience,
        Variant::DupAssistant,
        Variant::DupSignal,
        Variant::MultiAudience,
        Variant::MultiAssistant,
        Variant::BctmTwoHidden,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::LineAudience => "line-audience",
            Variant::CircleAudience => "circle-audience",
            Variant::LineAssistant => "line-assistant",
            Variant::CircleAssistant => "circle-assistant",
            Variant::Cheney => "cheney",
            Variant::MulcahyFlip => "mulcahy-flip",
            Variant::FlipRotateAssistant => "flip-rotate",
            Variant::FlipAudience => "flip-audience",
            Variant::DupAudience => "dup-audience",
            Variant::DupAssistant => "dup-assistant",
            Variant::DupSignal => "dup-signal",
            Variant::MultiAudience => "multi-audience",
            Variant::MultiAssistant => "multi-assistant",
            Variant::BctmTwoHidden => "bctm",
        }
    }

    /// Evaluates the variant. `r` defaults to 1 and `c` to 2 where unused.
    pub fn evaluate(self, k: u64, r: u64, c: u64) -> Result<BoundsResult> {
        match self {
            Variant::LineAudience => max_line_audience(k, r),
            Variant::CircleAudience => max_circle_audience(k, r),
            Variant::LineAssistant => max_line_assistant(k, r),
            Variant::CircleAssistant => max_circle_assistant(k, r),
            Variant::Cheney => max_cheney(k),
            Variant::MulcahyFlip => max_mulcahy_flip(k),
            Variant::FlipRotateAssistant => max_flip_rotate_assistant(k, r),
            Variant::FlipAudience => bound_flip_audience(k, r),
            Variant::DupAudience => max_dup_audience(k),
            Variant::DupAssistant => bound_dup_assistant(k),
            Variant::DupSignal => max_dup_signal_strategy(k),
            Variant::MultiAudience => bound_multi_audience(k, r, c),
            Variant::MultiAssistant => bound_multi_assistant(k, r, c),
            Variant::BctmTwoHidden => max_bctm_two_hidden(k, r),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::unknown("bounds variant", s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tightness {
    Exact,
    UpperBound,
}

/// How a value splits into a maximum signaling number `m` and an excluded
/// count `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decomposition {
    /// `m + e`
    Sum {
        #[serde(serialize_with = "serialize_big")]
        m: BigUint,
        #[serde(serialize_with = "serialize_big")]
        e: BigUint,
    },
    /// `k*m + e`
    Scaled {
        #[serde(serialize_with = "serialize_big")]
        k: BigUint,
        #[serde(serialize_with = "serialize_big")]
        m: BigUint,
        #[serde(serialize_with = "serialize_big")]
        e: BigUint,
    },
    /// `groups*(2m + 1) + extra`
    Grouped {
        #[serde(serialize_with = "serialize_big")]
        groups: BigUint,
        #[serde(serialize_with = "serialize_big")]
        m: BigUint,
        #[serde(serialize_with = "serialize_big")]
        extra: BigUint,
    },
    /// Twice the inner value.
    Doubled(Box<Decomposition>),
}

impl Decomposition {
    pub fn evaluate(&self) -> BigUint {
        match self {
            Decomposition::Sum { m, e } => m + e,
            Decomposition::Scaled { k, m, e } => k * m + e,
            Decomposition::Grouped { groups, m, extra } => {
                groups * (m * 2u32 + 1u32) + extra
            }
            Decomposition::Doubled(inner) => inner.evaluate() * 2u32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsResult {
    pub variant: Variant,
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
    pub decomposition: Option<Decomposition>,
    pub tight: Tightness,
}

/// Numbers that fit `u64` serialize as integers, larger ones as decimal
/// strings.
pub(crate) fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

pub(crate) fn serialize_big_grid<S: serde::Serializer>(
    v: &[Vec<BigUint>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Row<'a>(&'a [BigUint]);
    impl Serialize for Row<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(self.0.len()))?;
            for x in self.0 {
                match x.to_u64() {
                    Some(v) => seq.serialize_element(&v)?,
                    None => seq.serialize_element(&x.to_string())?,
                }
            }
            seq.end()
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&Row(row))?;
    }
    seq.end()
}

impl BoundsResult {
    fn exact(variant: Variant, d: Decomposition) -> Self {
        BoundsResult {
            variant,
            value: d.evaluate(),
            decomposition: Some(d),
            tight: Tightness::Exact,
        }
    }

    fn plain(variant: Variant, value: BigUint, tight: Tightness) -> Self {
        BoundsResult {
            variant,
            value,
            decomposition: None,
            tight,
        }
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }
}

pub(crate) fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

pub fn pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(big(base), exp as usize)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn check_kr(k: u64, r: u64) -> Result<()> {
    require(k >= 1, || "K must be at least 1".into())?;
    require(r >= 1, || "R must be at least 1".into())
}

pub fn max_line_audience(k: u64, r: u64) -> Result<BoundsResult> {
    check_kr(k, r)?;
    Ok(BoundsResult::exact(
        Variant::LineAudience,
        Decomposition::Sum {
            m: pow(r, k - 1) * factorial(k - 1),
            e: big(k - 1),
        },
    ))
}

pub fn max_circle_audience(k: u64, r: u64) -> Result<BoundsResult> {
    check_kr(k, r)?;
    require(k >= 2, || "a circle needs K >= 2".into())?;
    Ok(BoundsResult::exact(
        Variant::CircleAudience,
        Decomposition::Sum {
            m: pow(r, k - 1) * factorial(k - 2),
            e: big(k - 1),
        },
    ))
}

pub fn max_line_assistant(k: u64, r: u64) -> Result<BoundsResult> {
    check_kr(k, r)?;
    Ok(BoundsResult::exact(
        Variant::LineAssistant,
        Decomposition::Scaled {
            k: big(k),
            m: pow(r, k - 1) * factorial(k - 1),
            e: big(k - 1),
        },
    ))
}

pub fn max_circle_assistant(k: u64, r: u64) -> Result<BoundsResult> {
    check_kr(k, r)?;
    require(k >= 2, || "a circle needs K >= 2".into())?;
    Ok(BoundsResult::exact(
        Variant::CircleAssistant,
        Decomposition::Scaled {
            k: big(k),
            m: pow(r, k - 1) * factorial(k - 2),
            e: big(k - 1),
        },
    ))
}

pub fn max_cheney(k: u64) -> Result<BoundsResult> {
    require(k >= 2, || "Cheney's method needs K >= 2".into())?;
    Ok(BoundsResult::exact(
        Variant::Cheney,
        Decomposition::Grouped {
            groups: big(k - 1),
            m: factorial(k - 2),
            extra: BigUint::zero(),
        },
    ))
}

/// Signaling capacity of the flip-and-rotate method with `K-1` shown cards:
/// `R^(K-1) * sum_{i=1}^{K-1} C(K-1, i) (i-1)!`.
pub fn flip_signal_capacity(k: u64, r: u64) -> BigUint {
    let s: BigUint = (1..k).map(|i| binomial(k - 1, i) * factorial(i - 1)).sum();
    pow(r, k - 1) * s
}

pub fn max_mulcahy_flip(k: u64) -> Result<BoundsResult> {
    require(k >= 1, || "K must be at least 1".into())?;
    Ok(BoundsResult::exact(
        Variant::MulcahyFlip,
        Decomposition::Grouped {
            groups: big(k - 1),
            m: flip_signal_capacity(k, 1),
            extra: BigUint::one(),
        },
    ))
}

pub fn max_flip_rotate_assistant(k: u64, r: u64) -> Result<BoundsResult> {
    check_kr(k, r)?;
    Ok(BoundsResult::exact(
        Variant::FlipRotateAssistant,
        Decomposition::Grouped {
            groups: big(k - 1),
            m: flip_signal_capacity(k, r),
            extra: pow(r, k - 1),
        },
    ))
}

/// Distinct observed messages for a fixed set of `K-1` shown cards when
/// cards may be flipped: `R^(K-1) * sum_i C(K-1, i)^2 (K-1-i)!`.
pub fn flip_audience_messages(k: u64, r: u64) -> BigUint {
    let s: BigUint = (0..k)
        .map(|i| binomial(k - 1, i).pow(2) * factorial(k - 1 - i))
        .sum();
    pow(r, k - 1) * s
}

pub fn bound_flip_audience(k: u64, r: u64) -> Result<BoundsResult> {
    check_kr(k, r)?;
    let tight = if k <= 2 || (k == 3 && r == 1) {
        Tightness::Exact
    } else {
        Tightness::UpperBound
    };
    Ok(BoundsResult::plain(
        Variant::FlipAudience,
        flip_audience_messages(k, r),
        tight,
    ))
}

pub fn max_dup_audience(k: u64) -> Result<BoundsResult> {
    require(k >= 1, || "K must be at least 1".into())?;
    let half = (k - 1) / 2;
    let m = factorial(k - 1) / pow(2, half);
    Ok(BoundsResult::exact(
        Variant::DupAudience,
        Decomposition::Doubled(Box::new(Decomposition::Sum { m, e: big(half) })),
    ))
}

/// Hands of `K` cards from a deck of `D` values with two copies each.
pub fn dup_hand_count(d: u64, k: u64) -> BigUint {
    (0..=k / 2)
        .map(|i| binomial(d, i) * binomial(d.saturating_sub(i), k - 2 * i))
        .sum()
}

/// Observed messages of `K-1` face-up cards over a duplicate deck.
pub fn dup_message_count(d: u64, k: u64) -> BigUint {
    if k == 0 {
        return BigUint::zero();
    }
    let f = factorial(k - 1);
    (0..=(k - 1) / 2)
        .map(|i| {
            binomial(d, i) * binomial(d.saturating_sub(i), k - 2 * i - 1) * (&f / pow(2, i))
        })
        .sum()
}

/// Largest `D` with as many messages as hands. Scans upward and requires the
/// inequality to keep failing for `2*D` further steps after the last success.
pub fn bound_dup_assistant(k: u64) -> Result<BoundsResult> {
    require(k >= 1, || "K must be at least 1".into())?;
    let holds = |d: u64| dup_hand_count(d, k) <= dup_message_count(d, k);
    let mut best = 0u64;
    let mut d = 1u64;
    loop {
        if holds(d) {
            best = d;
        } else if d > 2 * best.max(1) + best {
            break;
        }
        d += 1;
        if d > 1_000_000 {
            return Err(Error::InvalidParameter(format!(
                "duplicate-assistant scan did not settle for K={k}"
            )));
        }
    }
    Ok(BoundsResult::plain(
        Variant::DupAssistant,
        big(best),
        Tightness::UpperBound,
    ))
}

pub fn max_dup_signal_strategy(k: u64) -> Result<BoundsResult> {
    require(k >= 1, || "K must be at least 1".into())?;
    let m = factorial(k - 1) + 1u32 - big(k);
    Ok(BoundsResult::exact(
        Variant::DupSignal,
        Decomposition::Doubled(Box::new(Decomposition::Scaled {
            k: big(k),
            m,
            e: big(k - 1),
        })),
    ))
}

/// Largest `n >= lo` with `pred(n)`, for `pred` true at `lo` and monotone
/// (true then false).
fn largest_satisfying(lo: u64, pred: impl Fn(u64) -> bool) -> u64 {
    let mut good = lo;
    let mut step = 1u64;
    while pred(good + step) {
        good += step;
        step *= 2;
    }
    let mut bad = good + step;
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Largest `N >= K` with `C(N-K+C, C) <= R^(K-C) (K-C)!`. Accepts `C = K`.
pub fn multi_audience_scan(k: u64, r: u64, c: u64) -> u64 {
    let cap = pow(r, k - c) * factorial(k - c);
    largest_satisfying(k, |n| binomial(n - k + c, c) <= cap)
}

/// Largest `N >= K` with `prod_{i=1}^{C} (N-K+i) <= R^(K-C) K!`. Accepts `C = K`.
pub fn multi_assistant_scan(k: u64, r: u64, c: u64) -> u64 {
    let cap = pow(r, k - c) * factorial(k);
    largest_satisfying(k, |n| {
        (1..=c).fold(BigUint::one(), |acc, i| acc * (n - k + i)) <= cap
    })
}

fn check_multi(k: u64, r: u64, c: u64) -> Result<()> {
    check_kr(k, r)?;
    require(c >= 1, || "C must be at least 1".into())?;
    require(c < k, || format!("C={c} must be smaller than K={k}"))
}

pub fn bound_multi_audience(k: u64, r: u64, c: u64) -> Result<BoundsResult> {
    check_multi(k, r, c)?;
    Ok(BoundsResult::plain(
        Variant::MultiAudience,
        big(multi_audience_scan(k, r, c)),
        Tightness::Exact,
    ))
}

pub fn bound_multi_assistant(k: u64, r: u64, c: u64) -> Result<BoundsResult> {
    check_multi(k, r, c)?;
    Ok(BoundsResult::plain(
        Variant::MultiAssistant,
        big(multi_assistant_scan(k, r, c)),
        Tightness::UpperBound,
    ))
}

/// `floor((2K - 3 + isqrt(1 + coef * R^(K-2) * f)) / 2)` in signed arithmetic;
/// `R^(K-2)` is read as 1 when `K < 2`, which only arises with `R = 1`.
fn two_hidden_closed_form(k: u64, r: u64, coef: u64, f: BigUint) -> BigInt {
    let p = if k >= 2 { pow(r, k - 2) } else { BigUint::one() };
    let root = (BigUint::one() + p * f * coef).sqrt();
    let num = BigInt::from(2 * k as i64 - 3) + BigInt::from(root);
    num_integer::Integer::div_floor(&num, &BigInt::from(2))
}

/// Closed form for two audience-chosen hidden cards.
pub fn multi_audience_closed_form(k: u64, r: u64) -> BigInt {
    two_hidden_closed_form(k, r, 8, factorial(k.saturating_sub(2)))
}

/// Closed form for two assistant-chosen hidden cards.
pub fn multi_assistant_closed_form(k: u64, r: u64) -> BigInt {
    two_hidden_closed_form(k, r, 4, factorial(k))
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Largest `N` with `ceil((N-K+1)/K) * ceil((N-K+2)/(K-1)) <= R^(K-2) (K-2)!`,
/// scanning down from the two-hidden assistant bound. Accepts `K = 2`.
pub fn bctm_scan(k: u64, r: u64) -> u64 {
    let cap = pow(r, k - 2) * factorial(k - 2);
    let fits = |n: u64| {
        let a = ceil_div((n + 1).saturating_sub(k), k);
        let b = ceil_div((n + 2).saturating_sub(k), k - 1);
        big(a) * big(b) <= cap
    };
    let mut n = multi_assistant_scan(k, r, 2);
    while n > 0 && !fits(n) {
        n -= 1;
    }
    n
}

pub fn max_bctm_two_hidden(k: u64, r: u64) -> Result<BoundsResult> {
    check_kr(k, r)?;
    require(k >= 3, || "the two-hidden best-trick method needs K >= 3".into())?;
    Ok(BoundsResult::plain(
        Variant::BctmTwoHidden,
        big(bctm_scan(k, r)),
        Tightness::Exact,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(r: Result<BoundsResult>) -> u64 {
        r.unwrap().value_u64().unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(v(max_line_audience(4, 2)), 51);
        assert_eq!(v(max_circle_audience(6, 5)), 75005);
        assert_eq!(v(max_line_assistant(5, 1)), 124);
        assert_eq!(v(max_circle_assistant(7, 1)), 846);
        assert_eq!(v(max_cheney(10)), 725769);
        assert_eq!(v(max_mulcahy_flip(6)), 896);
        assert_eq!(v(max_flip_rotate_assistant(5, 3)), 15637);
        assert_eq!(v(bound_flip_audience(5, 1)), 209);
        assert_eq!(v(max_dup_audience(6)), 64);
        assert_eq!(v(bound_dup_assistant(4)), 18);
        assert_eq!(v(max_dup_signal_strategy(5)), 208);
        assert_eq!(v(bound_multi_audience(6, 5, 2)), 177);
        assert_eq!(v(bound_multi_assistant(7, 1, 2)), 76);
        assert_eq!(v(max_bctm_two_hidden(6, 2)), 109);
    }

    #[test]
    fn parameter_errors() {
        assert!(max_circle_audience(1, 1).is_err());
        assert!(max_cheney(1).is_err());
        assert!(bound_multi_audience(2, 1, 2).is_err());
        assert!(max_bctm_two_hidden(2, 1).is_err());
        assert!(max_line_audience(3, 0).is_err());
    }

    #[test]
    fn decomposition_reproduces_value() {
        for variant in Variant::ALL {
            for k in 3..=8 {
                let res = variant.evaluate(k, 2, 2).unwrap();
                if let Some(d) = &res.decomposition {
                    assert_eq!(d.evaluate(), res.value, "{variant} K={k}");
                }
            }
        }
    }

    #[test]
    fn variant_names_roundtrip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("nope".parse::<Variant>().is_err());
    }

    #[test]
    fn closed_forms_handle_small_k() {
        assert_eq!(multi_assistant_closed_form(1, 1), BigInt::from(0));
        assert_eq!(multi_assistant_closed_form(2, 1), BigInt::from(2));
        assert_eq!(multi_audience_closed_form(2, 1), BigInt::from(2));
    }
}
