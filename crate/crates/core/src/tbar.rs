//! Elements of the group of lifts of Thompson's group T to the real line.
//!
//! An element is a homeomorphism of R that is piecewise linear with finitely
//! many breakpoints per compact interval, has power-of-two slopes and dyadic
//! breakpoints, and commutes with the unit translation z(x) = x + 1. Such a
//! map is determined by its restriction to [0, 1], so a [`TBarElement`]
//! stores exactly that restriction (the "fundamental" map) with anchor
//! samples at 0 and 1 always present. Equality of group elements is
//! structural equality of canonical fundamentals, which is sound and
//! complete for this group.

use num_bigint::BigInt;
use num_traits::One;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::plmap::{Interval, PLMap};

/// Strict sign of the displacement x -> f(x) - x of a fixed-point-free map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisplacementSign {
    Positive,
    Negative,
}

/// A lift of an element of Thompson's group T, stored by its behavior on
/// [0, 1] and extended everywhere by f(x + k) = f(x) + k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TBarElement {
    fundamental: PLMap,
}

impl TBarElement {
    /// Validates a map on [0, 1] as the fundamental part of a group element.
    ///
    /// Requires domain exactly [0, 1] and f(1) = f(0) + 1; slope and
    /// monotonicity constraints are inherited from [`PLMap`].
    pub fn from_fundamental(m: PLMap) -> Result<Self> {
        let dom = m.domain();
        if !dom.lo().is_zero() || *dom.hi() != Dyadic::one() {
            return Err(Error::BadFundamentalDomain);
        }
        let ran = m.range();
        if &(ran.lo() + &Dyadic::one()) != ran.hi() {
            return Err(Error::NotPeriodic);
        }
        Ok(TBarElement { fundamental: m })
    }

    /// Rebases a one-period window (domain [c, c+1], f(c+1) = f(c) + 1) to
    /// the fundamental domain [0, 1].
    pub(crate) fn from_period_window(w: &PLMap) -> Result<Self> {
        let dom = w.domain();
        let ran = w.range();
        if &(dom.lo() + &Dyadic::one()) != dom.hi() || &(ran.lo() + &Dyadic::one()) != ran.hi() {
            return Err(Error::NotPeriodic);
        }

        let j = dom.lo().ceil_int();
        let jd = Dyadic::from(j);
        let v0 = &w.eval(&jd)? - &jd;

        let mut interior: Vec<(Dyadic, Dyadic)> = Vec::with_capacity(w.points().len());
        for (bx, by) in w.points() {
            let t = bx.fract();
            if t.is_zero() {
                continue;
            }
            interior.push((t, by - &Dyadic::from(bx.floor_int())));
        }
        interior.sort_by(|p, q| p.0.cmp(&q.0));
        interior.dedup();

        let mut points = Vec::with_capacity(interior.len() + 2);
        points.push((Dyadic::zero(), v0.clone()));
        points.extend(interior);
        points.push((Dyadic::one(), &v0 + &Dyadic::one()));
        Self::from_fundamental(PLMap::new(points)?)
    }

    pub fn identity() -> Self {
        TBarElement {
            fundamental: PLMap::identity(&Interval::unit()),
        }
    }

    /// The unit translation z(x) = x + 1, which generates the center.
    pub fn z() -> Self {
        Self::translation(&Dyadic::one())
    }

    /// The translation x -> x + d for a dyadic d.
    pub fn translation(d: &Dyadic) -> Self {
        TBarElement {
            fundamental: PLMap::from_canonical_points(vec![
                (Dyadic::zero(), d.clone()),
                (Dyadic::one(), d + &Dyadic::one()),
            ]),
        }
    }

    pub fn fundamental(&self) -> &PLMap {
        &self.fundamental
    }

    /// Exact image of any point of the real line.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        let k = x.floor_int();
        let frac = x - &Dyadic::from(k.clone());
        let y = self.fundamental.eval(&frac).expect("frac lies in [0,1)");
        &y + &Dyadic::from(k)
    }

    /// The periodic extension restricted to an arbitrary dyadic interval.
    pub fn window(&self, iv: &Interval) -> PLMap {
        PLMap::new(self.window_points(iv)).expect("periodic restriction is a valid map")
    }

    /// Like [`TBarElement::window`] but without canonicalization; the seam
    /// samples at the interval ends may be collinear with their neighbors.
    /// Intended as a composition operand only.
    pub(crate) fn window_raw(&self, iv: &Interval) -> PLMap {
        PLMap::from_canonical_points(self.window_points(iv))
    }

    fn window_points(&self, iv: &Interval) -> Vec<(Dyadic, Dyadic)> {
        // Skip the trailing x = 1 sample: it is the shifted image of x = 0.
        let pts = &self.fundamental.points()[..self.fundamental.points().len() - 1];
        let mut points = Vec::new();
        points.push((iv.lo().clone(), self.eval(iv.lo())));

        let k_hi = iv.hi().floor_int();
        let mut k = iv.lo().floor_int();
        while k <= k_hi {
            let kd = Dyadic::from(k.clone());
            let lo_local = iv.lo() - &kd;
            let hi_local = iv.hi() - &kd;
            let start = pts.partition_point(|p| p.0 <= lo_local);
            if kd.is_zero() {
                for (bx, by) in &pts[start..] {
                    if *bx >= hi_local {
                        break;
                    }
                    points.push((bx.clone(), by.clone()));
                }
            } else {
                for (bx, by) in &pts[start..] {
                    if *bx >= hi_local {
                        break;
                    }
                    points.push((bx + &kd, by + &kd));
                }
            }
            k += BigInt::one();
        }

        points.push((iv.hi().clone(), self.eval(iv.hi())));
        points
    }

    /// Group product (self after other): x -> self(other(x)).
    pub fn compose(&self, other: &TBarElement) -> TBarElement {
        let outer = self.window_raw(&other.fundamental.range());
        let composite = outer
            .compose(&other.fundamental)
            .expect("window was built over the inner range");
        TBarElement::from_fundamental(composite).expect("composite of group elements")
    }

    pub fn invert(&self) -> TBarElement {
        Self::from_period_window(&self.fundamental.invert()).expect("inverse of a group element")
    }

    /// Integer power by binary exponentiation; `power(e, 0)` is the identity
    /// and negative exponents invert first.
    pub fn power(&self, k: i64) -> TBarElement {
        if k == 0 {
            return TBarElement::identity();
        }
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut remaining = k.unsigned_abs();
        let mut acc: Option<TBarElement> = None;
        let mut sq = base;
        loop {
            if remaining & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(f) => f.compose(&sq),
                });
            }
            remaining >>= 1;
            if remaining == 0 {
                break;
            }
            sq = sq.compose(&sq);
        }
        acc.expect("nonzero exponent")
    }

    pub fn is_identity(&self) -> bool {
        self.fundamental.points().len() == 2 && self.fundamental.points()[0].1.is_zero()
    }

    /// Returns `n` when the element is exactly z^n (including n = 0 for the
    /// identity), `None` otherwise.
    ///
    /// A two-point fundamental is forced to have slope 1 by periodicity, so
    /// the element is a translation exactly when no interior breakpoint
    /// survives canonicalization; it is a power of z when the offset is an
    /// integer.
    pub fn is_power_of_z(&self) -> Option<BigInt> {
        if self.fundamental.points().len() != 2 {
            return None;
        }
        let offset = &self.fundamental.points()[0].1;
        offset.is_integer().then(|| offset.numerator_bigint())
    }

    /// Classifies the displacement f(x) - x: `Some(sign)` when it keeps one
    /// strict sign everywhere (no fixed point), `None` otherwise.
    ///
    /// The displacement is piecewise linear and periodic, so its extrema
    /// occur at breakpoints of the fundamental; a zero displacement at a
    /// breakpoint is a genuine fixed point and classifies as `None`.
    pub fn fixed_point_free(&self) -> Option<DisplacementSign> {
        let mut pos = true;
        let mut neg = true;
        for (x, y) in self.fundamental.points() {
            let d = y - x;
            pos &= d.is_positive();
            neg &= d.is_negative();
        }
        match (pos, neg) {
            (true, _) => Some(DisplacementSign::Positive),
            (_, true) => Some(DisplacementSign::Negative),
            _ => None,
        }
    }
}

mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        #[serde(rename = "type")]
        kind: String,
        breakpoints: Vec<(Dyadic, Dyadic)>,
    }

    impl Serialize for TBarElement {
        fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
            Repr {
                kind: "tbar".to_string(),
                breakpoints: self.fundamental.points().to_vec(),
            }
            .serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for TBarElement {
        fn deserialize<D: Deserializer<'de>>(
            deserializer: D,
        ) -> std::result::Result<Self, D::Error> {
            let repr = Repr::deserialize(deserializer)?;
            if repr.kind != "tbar" {
                return Err(serde::de::Error::custom(format!(
                    "expected type `tbar`, got `{}`",
                    repr.kind
                )));
            }
            let map = PLMap::new(repr.breakpoints).map_err(serde::de::Error::custom)?;
            TBarElement::from_fundamental(map).map_err(serde::de::Error::custom)
        }
    }
}
