//! Exact arithmetic on dyadic rationals m/2^e.
//!
//! A [`Dyadic`] stores an arbitrary-size integer numerator together with a
//! denominator exponent, so deep compositions that push exponents into the
//! hundreds never materialize the denominator itself. The canonical form
//! (odd numerator unless the value is an integer, zero stored as 0/2^0)
//! makes value equality coincide with structural equality.
//!
//! Numerators that fit in an i128 are kept inline; chain verification
//! composes maps with millions of breakpoints, and the inline path keeps
//! that allocation-free. Values escape to a boxed big integer exactly when
//! they must, and demote again as soon as they fit.
//!
//! There is deliberately no general division: every slope in this crate is a
//! power of two, so [`Dyadic::mul_pow2`] is the only scaling operation needed
//! and the type stays closed under all exposed arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Num {
    Small(i128),
    Big(Box<BigInt>),
}

/// Shift left without overflow surprises; `None` when the result would not
/// fit in an i128.
fn shl_checked(a: i128, k: u64) -> Option<i128> {
    if k == 0 {
        return Some(a);
    }
    if k > 126 {
        return (a == 0).then_some(0);
    }
    a.checked_mul(1i128 << k)
}

/// An exact dyadic rational `num / 2^exp` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: Num,
    exp: u64,
}

impl Dyadic {
    /// Canonicalizes `numerator / 2^exponent`.
    pub fn new(numerator: impl Into<BigInt>, exponent: u64) -> Self {
        Self::normalize_big(numerator.into(), exponent)
    }

    fn normalize_small(num: i128, mut exp: u64) -> Self {
        if num == 0 {
            return Dyadic {
                num: Num::Small(0),
                exp: 0,
            };
        }
        let mut num = num;
        if exp > 0 {
            let shift = (num.trailing_zeros() as u64).min(exp);
            num >>= shift;
            exp -= shift;
        }
        Dyadic {
            num: Num::Small(num),
            exp,
        }
    }

    fn normalize_big(mut num: BigInt, mut exp: u64) -> Self {
        if num.is_zero() {
            return Dyadic {
                num: Num::Small(0),
                exp: 0,
            };
        }
        if exp > 0 {
            let shift = num.trailing_zeros().unwrap_or(0).min(exp);
            if shift > 0 {
                num >>= shift;
                exp -= shift;
            }
        }
        match i128::try_from(&num) {
            Ok(small) => Dyadic {
                num: Num::Small(small),
                exp,
            },
            Err(_) => Dyadic {
                num: Num::Big(Box::new(num)),
                exp,
            },
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: Num::Small(0),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: Num::Small(1),
            exp: 0,
        }
    }

    /// The power 2^k, for any sign of `k`.
    pub fn pow2(k: i64) -> Self {
        if k < 0 {
            Dyadic {
                num: Num::Small(1),
                exp: k.unsigned_abs(),
            }
        } else if k <= 126 {
            Dyadic {
                num: Num::Small(1i128 << k),
                exp: 0,
            }
        } else {
            Dyadic {
                num: Num::Big(Box::new(BigInt::one() << (k as u64))),
                exp: 0,
            }
        }
    }

    /// The numerator of the canonical form, as a big integer.
    pub fn numerator_bigint(&self) -> BigInt {
        match &self.num {
            Num::Small(v) => BigInt::from(*v),
            Num::Big(b) => (**b).clone(),
        }
    }

    /// Denominator exponent: the value is `numerator / 2^exponent`.
    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.num, Num::Small(0))
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_positive(&self) -> bool {
        match &self.num {
            Num::Small(v) => *v > 0,
            Num::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.num {
            Num::Small(v) => *v < 0,
            Num::Big(b) => b.is_negative(),
        }
    }

    fn sign_num(&self) -> i8 {
        match &self.num {
            Num::Small(v) => match v.cmp(&0) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            },
            Num::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1 // a boxed zero never exists in canonical form
                }
            }
        }
    }

    /// Exact product by 2^k; negative `k` deepens the exponent.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            let cancel = k.min(self.exp);
            let left = k - cancel;
            let exp = self.exp - cancel;
            match &self.num {
                Num::Small(v) => {
                    if let Some(shifted) = shl_checked(*v, left) {
                        return Dyadic {
                            num: Num::Small(shifted),
                            exp,
                        };
                    }
                    Dyadic {
                        num: Num::Big(Box::new(BigInt::from(*v) << left)),
                        exp,
                    }
                }
                Num::Big(b) => Dyadic {
                    num: Num::Big(Box::new(&**b << left)),
                    exp,
                },
            }
        } else {
            // numerators can carry trailing zeros when exp was 0
            match &self.num {
                Num::Small(v) => Dyadic::normalize_small(*v, self.exp + k.unsigned_abs()),
                Num::Big(b) => Dyadic::normalize_big((**b).clone(), self.exp + k.unsigned_abs()),
            }
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor_int(&self) -> BigInt {
        match &self.num {
            Num::Small(v) => {
                if self.exp >= 127 {
                    // |value| < 1 here because |v| < 2^127
                    BigInt::from(if *v < 0 { -1 } else { 0 })
                } else {
                    // arithmetic shift rounds toward negative infinity
                    BigInt::from(v >> self.exp)
                }
            }
            Num::Big(b) => &**b >> self.exp,
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -((-self.clone()).floor_int())
    }

    /// Fractional part in [0, 1): `self - floor(self)`.
    pub fn fract(&self) -> Dyadic {
        if self.exp == 0 {
            return Dyadic::zero();
        }
        self - &Dyadic::from(self.floor_int())
    }

    /// If `self / other = 2^k` exactly (both nonzero, same sign), returns k.
    ///
    /// Canonical numerators are odd whenever the exponent is positive, but
    /// integer values may carry trailing zeros, so the comparison is between
    /// odd parts.
    pub fn ratio_exponent(&self, other: &Dyadic) -> Option<i64> {
        match (&self.num, &other.num) {
            (Num::Small(a), Num::Small(b)) => {
                if *a == 0 || *b == 0 {
                    return None;
                }
                let ta = a.trailing_zeros() as u64;
                let tb = b.trailing_zeros() as u64;
                if (a >> ta) != (b >> tb) {
                    return None;
                }
                Some((ta as i64 - self.exp as i64) - (tb as i64 - other.exp as i64))
            }
            _ => {
                let a = self.numerator_bigint();
                let b = other.numerator_bigint();
                let ta = a.trailing_zeros()?;
                let tb = b.trailing_zeros()?;
                if (a >> ta) != (b >> tb) {
                    return None;
                }
                Some((ta as i64 - self.exp as i64) - (tb as i64 - other.exp as i64))
            }
        }
    }

    fn add_impl(&self, other: &Dyadic) -> Dyadic {
        if let (Num::Small(a), Num::Small(b)) = (&self.num, &other.num) {
            let (hi_exp, hi, lo) = if self.exp >= other.exp {
                (self.exp, *a, (*b, self.exp - other.exp))
            } else {
                (other.exp, *b, (*a, other.exp - self.exp))
            };
            if let Some(shifted) = shl_checked(lo.0, lo.1) {
                if let Some(sum) = hi.checked_add(shifted) {
                    return Dyadic::normalize_small(sum, hi_exp);
                }
            }
        }
        let (num, exp) = if self.exp >= other.exp {
            (
                self.numerator_bigint() + (other.numerator_bigint() << (self.exp - other.exp)),
                self.exp,
            )
        } else {
            (
                (self.numerator_bigint() << (other.exp - self.exp)) + other.numerator_bigint(),
                other.exp,
            )
        };
        Dyadic::normalize_big(num, exp)
    }

    fn mul_impl(&self, other: &Dyadic) -> Dyadic {
        if let (Num::Small(a), Num::Small(b)) = (&self.num, &other.num) {
            if let Some(prod) = a.checked_mul(*b) {
                return Dyadic::normalize_small(prod, self.exp + other.exp);
            }
        }
        Dyadic::normalize_big(
            self.numerator_bigint() * other.numerator_bigint(),
            self.exp + other.exp,
        )
    }

    fn neg_impl(&self) -> Dyadic {
        match &self.num {
            Num::Small(v) => match v.checked_neg() {
                Some(n) => Dyadic {
                    num: Num::Small(n),
                    exp: self.exp,
                },
                None => Dyadic {
                    num: Num::Big(Box::new(-BigInt::from(*v))),
                    exp: self.exp,
                },
            },
            Num::Big(b) => Dyadic::normalize_big(-&**b, self.exp),
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic {
            num: Num::Small(v as i128),
            exp: 0,
        }
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::normalize_big(v, 0)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.sign_num(), other.sign_num());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if let (Num::Small(a), Num::Small(b)) = (&self.num, &other.num) {
            if self.exp == other.exp {
                return a.cmp(b);
            }
            if self.exp > other.exp {
                if let Some(shifted) = shl_checked(*b, self.exp - other.exp) {
                    return a.cmp(&shifted);
                }
            } else if let Some(shifted) = shl_checked(*a, other.exp - self.exp) {
                return shifted.cmp(b);
            }
        }
        if self.exp == other.exp {
            self.numerator_bigint().cmp(&other.numerator_bigint())
        } else if self.exp > other.exp {
            self.numerator_bigint()
                .cmp(&(other.numerator_bigint() << (self.exp - other.exp)))
        } else {
            (self.numerator_bigint() << (other.exp - self.exp)).cmp(&other.numerator_bigint())
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait for &Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                self.$impl_fn(rhs)
            }
        }
        impl $trait for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                self.$impl_fn(&rhs)
            }
        }
        impl $trait<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                self.$impl_fn(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        self.neg_impl()
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        self.neg_impl()
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self.add_impl(&rhs.neg_impl())
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        (&self).sub(&rhs)
    }
}

impl Sub<&Dyadic> for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        (&self).sub(rhs)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.num, self.exp) {
            (Num::Small(v), 0) => write!(f, "{v}"),
            (Num::Big(b), 0) => write!(f, "{b}"),
            (Num::Small(v), e) => write!(f, "{v}/{}", BigInt::one() << e),
            (Num::Big(b), e) => write!(f, "{b}/{}", BigInt::one() << e),
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts the textual grammar used everywhere in this crate: an integer
    /// (`"1"`, `"-2"`) or `"m/d"` where `d` is a positive power of two.
    fn from_str(s: &str) -> Result<Self> {
        fn parse_int(tok: &str, what: &str) -> Result<BigInt> {
            let digits = tok.strip_prefix('-').unwrap_or(tok);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("bad {what} `{tok}`")));
            }
            BigInt::from_str(tok).map_err(|e| Error::Parse(format!("bad {what} `{tok}`: {e}")))
        }

        match s.split_once('/') {
            None => Ok(Dyadic::from(parse_int(s, "integer")?)),
            Some((num_s, den_s)) => {
                let num = parse_int(num_s, "numerator")?;
                if den_s.starts_with('-') {
                    return Err(Error::Parse(format!("bad denominator `{den_s}`")));
                }
                let den = parse_int(den_s, "denominator")?;
                if den.is_zero() {
                    return Err(Error::Parse("denominator is zero".into()));
                }
                let tz = den.trailing_zeros().unwrap_or(0);
                if (&den >> tz) != BigInt::one() {
                    return Err(Error::Parse(format!(
                        "denominator `{den_s}` is not a power of two"
                    )));
                }
                Ok(Dyadic::new(num, tz))
            }
        }
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used heavily in tests and frozen tables.
pub fn dy(s: &str) -> Dyadic {
    s.parse().expect("literal dyadic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn normalize_examples() {
        assert_eq!(Dyadic::new(2, 2), dy("1/2"));
        assert_eq!(Dyadic::new(0, 7), Dyadic::zero());
        assert_eq!(Dyadic::new(0, 7).exponent(), 0);
        assert_eq!(Dyadic::new(3, 3), dy("3/8"));
        assert_eq!(Dyadic::new(3, 3).to_string(), "3/8");
    }

    #[test]
    fn add_examples() {
        assert_eq!(dy("1/2") + dy("1/4"), dy("3/4"));
        assert_eq!(dy("-7/8") + Dyadic::zero(), dy("-7/8"));
        assert_eq!(dy("3/8") + dy("5/8"), Dyadic::one());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(dy("1/2") * dy("3/4"), dy("3/8"));
        assert_eq!(dy("1/8").mul_pow2(3), Dyadic::one());
        assert_eq!(dy("1/8").mul_pow2(-2), dy("1/32"));
        assert_eq!(Dyadic::one() * dy("-5/4"), dy("-5/4"));
    }

    #[test]
    fn compare_examples() {
        assert!(dy("3/8") < dy("1/2"));
        assert_eq!(Dyadic::new(2, 2), dy("1/2"));
        assert!(dy("-1/2") < Dyadic::zero());
        assert!(dy("-3/4") < dy("-1/2"));
    }

    #[test]
    fn floor_rounds_toward_negative_infinity() {
        assert_eq!(dy("-1/2").floor_int(), BigInt::from(-1));
        assert_eq!(dy("1/2").floor_int(), BigInt::from(0));
        assert_eq!(dy("-2").floor_int(), BigInt::from(-2));
        assert_eq!(dy("15/8").floor_int(), BigInt::from(1));
        assert_eq!(dy("-5/4").fract(), dy("3/4"));
        assert_eq!(dy("-3/2").ceil_int(), BigInt::from(-1));
    }

    #[test]
    fn ratio_exponent_examples() {
        assert_eq!(dy("1/2").ratio_exponent(&dy("1/8")), Some(2));
        assert_eq!(dy("2").ratio_exponent(&dy("1")), Some(1));
        assert_eq!(dy("3/8").ratio_exponent(&dy("3/4")), Some(-1));
        assert_eq!(dy("3/8").ratio_exponent(&dy("1/4")), None);
        assert_eq!(dy("12").ratio_exponent(&dy("3")), Some(2));
    }

    #[test]
    fn big_values_escape_and_demote() {
        // force an overflow of the inline path and come back down
        let huge = Dyadic::pow2(200);
        let one = Dyadic::one();
        let back = &(&huge + &one) - &huge;
        assert_eq!(back, one);
        assert_eq!(huge.mul_pow2(-200), one);
        assert!(&huge * &huge > huge);
        assert_eq!(Dyadic::pow2(130).floor_int(), BigInt::one() << 130);
        // tiny values floor correctly through the small path
        assert_eq!(Dyadic::pow2(-200).floor_int(), BigInt::from(0));
        assert_eq!((-Dyadic::pow2(-200)).floor_int(), BigInt::from(-1));
    }

    #[test]
    fn parse_rejects_bad_grammar() {
        for bad in [
            "", "/", "3/", "/8", "3/5", "1/0", "0x3", "1.5", "+3", "3/-8", "3 /8",
        ] {
            assert!(bad.parse::<Dyadic>().is_err(), "accepted `{bad}`");
        }
        assert_eq!("2/4".parse::<Dyadic>().unwrap(), dy("1/2"));
        assert_eq!("-2".parse::<Dyadic>().unwrap(), Dyadic::from(-2));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0", "1", "-2", "3/8", "-13/16", "1/1024"] {
            assert_eq!(dy(s).to_string(), s);
        }
    }

    fn to_rational(x: &Dyadic) -> BigRational {
        BigRational::new(x.numerator_bigint(), BigInt::one() << x.exponent())
    }

    // Independent oracle: num-rational agrees on 10,000 random pairs.
    #[test]
    fn agrees_with_rational_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x_d1ad1c);
        for _ in 0..10_000 {
            let x = Dyadic::new(
                rng.gen_range(-1_000_000i64..=1_000_000),
                rng.gen_range(0..40),
            );
            let y = Dyadic::new(
                rng.gen_range(-1_000_000i64..=1_000_000),
                rng.gen_range(0..40),
            );
            assert_eq!(to_rational(&(&x + &y)), to_rational(&x) + to_rational(&y));
            assert_eq!(to_rational(&(&x * &y)), to_rational(&x) * to_rational(&y));
            assert_eq!(x.cmp(&y), to_rational(&x).cmp(&to_rational(&y)));
        }
    }

    // Same oracle across the i128/bigint boundary.
    #[test]
    fn oracle_agreement_near_the_inline_boundary() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x_b1b0);
        for _ in 0..2_000 {
            let scale = Dyadic::pow2(rng.gen_range(100..140));
            let x = &Dyadic::new(rng.gen_range(-1_000i64..=1_000), rng.gen_range(0..8)) * &scale;
            let y = Dyadic::new(
                rng.gen_range(-1_000_000i64..=1_000_000),
                rng.gen_range(0..40),
            );
            assert_eq!(to_rational(&(&x + &y)), to_rational(&x) + to_rational(&y));
            assert_eq!(to_rational(&(&x * &y)), to_rational(&x) * to_rational(&y));
            assert_eq!(x.cmp(&y), to_rational(&x).cmp(&to_rational(&y)));
            assert_eq!(to_rational(&(&y - &x)), to_rational(&y) - to_rational(&x));
        }
    }

    fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
        (any::<i64>(), 0u64..64).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    proptest! {
        #[test]
        fn add_is_commutative_and_associative(x in arb_dyadic(), y in arb_dyadic(), z in arb_dyadic()) {
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        }

        #[test]
        fn mul_distributes_over_add(x in arb_dyadic(), y in arb_dyadic(), z in arb_dyadic()) {
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn normalize_is_idempotent(x in arb_dyadic()) {
            let renorm = Dyadic::new(x.numerator_bigint(), x.exponent());
            prop_assert_eq!(renorm, x);
        }

        #[test]
        fn equal_iff_structurally_identical(x in arb_dyadic(), y in arb_dyadic()) {
            let eq = x.cmp(&y) == std::cmp::Ordering::Equal;
            prop_assert_eq!(eq, x.numerator_bigint() == y.numerator_bigint() && x.exponent() == y.exponent());
        }

        #[test]
        fn canonical_form_has_odd_numerator(n in any::<i64>(), e in 0u64..64) {
            let x = Dyadic::new(n, e);
            if x.exponent() > 0 {
                prop_assert!(x.numerator_bigint().trailing_zeros() == Some(0));
            }
            if x.numerator_bigint().is_zero() {
                prop_assert_eq!(x.exponent(), 0);
            }
        }
    }
}
