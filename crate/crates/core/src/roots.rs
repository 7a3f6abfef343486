//! Exact nth roots of fixed-point-free elements.
//!
//! Given g without fixed points (moving points upward) and n >= 2, pick
//! dyadic rationals 0 = p_0 < p_1 < ... < p_n = g(0) and Thompson-like
//! pieces f_i: [p_{i-1}, p_i] -> [p_i, p_{i+1}] for i < n. The closing piece
//! is forced:
//!
//! ```text
//! f_n = g f_1^{-1} f_2^{-1} ... f_{n-1}^{-1}
//! ```
//!
//! and the map f that agrees with the pieces on [0, g(0)] and with
//! g^k f g^{-k} on [g^k(0), g^{k+1}(0)] satisfies f^n = g exactly. Every
//! free choice of partition and pieces gives a different root; a
//! [`ChoiceSeed`] picks one construction out of this countable family.

use num_bigint::BigInt;
use num_traits::One;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::plmap::{ChoiceSeed, Interval, PLMap};
use crate::tbar::{DisplacementSign, TBarElement};

/// The data determining an nth root on [0, g(0)]: the partition points and
/// the piece maps, including the forced closing piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootGerm {
    n: u64,
    partition: Vec<Dyadic>,
    pieces: Vec<PLMap>,
}

impl RootGerm {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The points p_0 = 0 < p_1 < ... < p_n = g(0).
    pub fn partition(&self) -> &[Dyadic] {
        &self.partition
    }

    pub fn pieces(&self) -> &[PLMap] {
        &self.pieces
    }

    /// The pieces glued into one map [0, g(0)] -> [p_1, g(p_1)].
    pub fn glued(&self) -> PLMap {
        PLMap::concat(&self.pieces).expect("germ pieces abut by construction")
    }

    fn build(g: &TBarElement, n: u64, partition: Vec<Dyadic>, choice: ChoiceSeed) -> Result<Self> {
        let nn = n as usize;
        debug_assert_eq!(partition.len(), nn + 1);

        let mut pieces = Vec::with_capacity(nn);
        for i in 1..nn {
            let src = Interval::new(partition[i - 1].clone(), partition[i].clone())?;
            let dst = Interval::new(partition[i].clone(), partition[i + 1].clone())?;
            pieces.push(PLMap::canonical_map(&src, &dst, choice));
        }

        // Closing piece: g composed with the inverses of the others, read
        // right to left, lands [p_{n-1}, p_n] onto [p_n, g(p_1)].
        let last_iv = Interval::new(partition[nn - 1].clone(), partition[nn].clone())?;
        let mut acc = PLMap::identity(&last_iv);
        for piece in pieces.iter().rev() {
            acc = piece.invert().compose(&acc)?;
        }
        let first_iv = Interval::new(partition[0].clone(), partition[1].clone())?;
        let closing = g.window(&first_iv).compose(&acc)?;
        pieces.push(closing);

        let germ = RootGerm {
            n,
            partition,
            pieces,
        };
        germ.check_consistency(g)?;
        Ok(germ)
    }

    /// The n-fold piece composition must reproduce g on [0, p_1].
    fn check_consistency(&self, g: &TBarElement) -> Result<()> {
        let mut acc = self.pieces[0].clone();
        for piece in &self.pieces[1..] {
            acc = piece.compose(&acc)?;
        }
        let first_iv = Interval::new(self.partition[0].clone(), self.partition[1].clone())?;
        if acc != g.window(&first_iv) {
            return Err(Error::ConcatMismatch(
                "germ pieces do not recompose to g on [0, p_1]".into(),
            ));
        }
        Ok(())
    }
}

/// Builds the root data for an nth root of g with the default partition
/// p_i = g(0) * 2^(i-n), whose seed-0 pieces are a translation followed by
/// doublings.
pub fn root_germ(g: &TBarElement, n: u64, choice: ChoiceSeed) -> Result<RootGerm> {
    if n < 2 {
        return Err(Error::RootDegreeTooSmall(n));
    }
    match g.fixed_point_free() {
        Some(DisplacementSign::Positive) => {}
        Some(DisplacementSign::Negative) => return Err(Error::NegativeDisplacement),
        None => return Err(Error::HasFixedPoint),
    }

    let c = g.eval(&Dyadic::zero());
    let mut partition = Vec::with_capacity(n as usize + 1);
    partition.push(Dyadic::zero());
    for i in 1..=n {
        partition.push(c.mul_pow2(i as i64 - n as i64));
    }
    RootGerm::build(g, n, partition, choice)
}

/// Builds the germ with p_1 prescribed and the interior partition points
/// spread along [v, g(0)] in doubling proportions, rounded down to the
/// dyadic grid of exponent max(exp(v), exp(g(0))) + n. The grid is fine
/// enough that strict monotonicity always survives the rounding, and it is
/// re-checked anyway.
fn root_germ_with_value(g: &TBarElement, n: u64, v: &Dyadic) -> Result<RootGerm> {
    if n < 2 {
        return Err(Error::RootDegreeTooSmall(n));
    }
    if g.fixed_point_free() != Some(DisplacementSign::Positive) {
        return Err(Error::HasFixedPoint);
    }
    let c = g.eval(&Dyadic::zero());
    if !v.is_positive() || *v >= c {
        return Err(Error::ValueOutOfRange {
            value: v.clone(),
            limit: c,
        });
    }

    let nn = n as usize;
    let mut partition = Vec::with_capacity(nn + 1);
    partition.push(Dyadic::zero());
    partition.push(v.clone());
    if nn > 2 {
        let grid = v.exponent().max(c.exponent()) + n;
        let span = &c - v;
        let v_scaled = v.mul_pow2(grid as i64).numerator_bigint();
        let span_scaled = span.mul_pow2(grid as i64).numerator_bigint();
        let denom = (BigInt::one() << (n - 1)) - BigInt::one();
        for i in 2..nn {
            let weight = (BigInt::one() << (i as u64 - 1)) - BigInt::one();
            // positive operands, so truncating division is floor
            let scaled = &v_scaled + (&span_scaled * weight) / &denom;
            partition.push(Dyadic::new(scaled, grid));
        }
    }
    partition.push(c);

    for w in partition.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::NotMonotone);
        }
    }
    RootGerm::build(g, n, partition, ChoiceSeed(0))
}

/// Evaluates the root determined by a germ at any point of the real line,
/// without materializing the full element.
///
/// Finds the k with g^k(0) <= x < g^(k+1)(0) by iterating g (or its inverse)
/// from 0 — the strictly positive displacement bounds the step count — and
/// returns g^k(f(g^{-k}(x))) with f the glued germ.
pub fn eval_root(g: &TBarElement, germ: &RootGerm, x: &Dyadic) -> Dyadic {
    let glued = germ.glued();
    let g_inv = g.invert();

    let mut k: i64 = 0;
    let mut t = x.clone();
    let c = g.eval(&Dyadic::zero());
    while t.is_negative() {
        t = g.eval(&t);
        k -= 1;
    }
    while t >= c {
        t = g_inv.eval(&t);
        k += 1;
    }

    let mut y = glued.eval(&t).expect("reduced point lies in [0, g(0)]");
    for _ in 0..k.max(0) {
        y = g.eval(&y);
    }
    for _ in 0..(-k).max(0) {
        y = g_inv.eval(&y);
    }
    y
}

/// Extends the germ to a full group element by walking the conjugate tiles
/// [g^k(0), g^(k+1)(0)] across the fundamental domain.
fn materialize(g: &TBarElement, germ: &RootGerm) -> Result<TBarElement> {
    let one = Dyadic::one();
    let g_inv = g.invert();

    let mut points: Vec<(Dyadic, Dyadic)> = Vec::new();
    let mut tile = germ.glued();
    loop {
        for (x, y) in tile.points() {
            if *x >= one {
                break;
            }
            if points.last().map_or(true, |last| *x > last.0) {
                points.push((x.clone(), y.clone()));
            }
        }
        let dom = tile.domain();
        if *dom.hi() >= one {
            break;
        }
        // next tile map: g . tile . g^{-1} on [g^{k+1}(0), g^{k+2}(0)]
        let next_dom = Interval::new(dom.hi().clone(), g.eval(dom.hi()))?;
        let shifted = tile.compose(&g_inv.window_raw(&next_dom))?;
        tile = g.window_raw(&shifted.range()).compose(&shifted)?;
    }
    points.push((one.clone(), tile.eval(&one)?));

    TBarElement::from_fundamental(PLMap::new(points)?)
}

fn validate_order(g: &TBarElement, m: u64) -> Result<()> {
    let m_i64 = i64::try_from(m).map_err(|_| Error::OrderMismatch(m))?;
    if g.power(m_i64) != TBarElement::z() {
        return Err(Error::OrderMismatch(m));
    }
    Ok(())
}

/// An nth root f of g with f^n = g, for g of known order m over the center
/// (g^m = z, validated).
///
/// Negative-displacement g is handled by rooting the inverse and inverting
/// the result.
pub fn nth_root(g: &TBarElement, n: u64, m: u64, choice: ChoiceSeed) -> Result<TBarElement> {
    if n < 2 {
        return Err(Error::RootDegreeTooSmall(n));
    }
    match g.fixed_point_free() {
        None => Err(Error::HasFixedPoint),
        Some(DisplacementSign::Negative) => Ok(nth_root(&g.invert(), n, m, choice)?.invert()),
        Some(DisplacementSign::Positive) => {
            validate_order(g, m)?;
            nth_root_trusted(g, n, choice)
        }
    }
}

/// Same construction as [`nth_root`] but without the g^m = z validation;
/// used where the order is already known from a verified chain.
pub(crate) fn nth_root_trusted(g: &TBarElement, n: u64, choice: ChoiceSeed) -> Result<TBarElement> {
    let germ = root_germ(g, n, choice)?;
    materialize(g, &germ)
}

/// An nth root f of g with the prescribed value f(0) = v, 0 < v < g(0).
pub fn nth_root_with_value(g: &TBarElement, n: u64, m: u64, v: &Dyadic) -> Result<TBarElement> {
    validate_order(g, m)?;
    nth_root_with_value_trusted(g, n, v)
}

pub(crate) fn nth_root_with_value_trusted(
    g: &TBarElement,
    n: u64,
    v: &Dyadic,
) -> Result<TBarElement> {
    let germ = root_germ_with_value(g, n, v)?;
    materialize(g, &germ)
}

/// Smallest m <= max_m with g^m = z, if any. Convenience search for callers
/// that do not track orders.
pub fn find_z_order(g: &TBarElement, max_m: u64) -> Option<u64> {
    let z = TBarElement::z();
    let mut acc = g.clone();
    for m in 1..=max_m {
        if acc == z {
            return Some(m);
        }
        acc = acc.compose(g);
    }
    None
}

mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        n: u64,
        partition: Vec<Dyadic>,
        pieces: Vec<PLMap>,
    }

    impl Serialize for RootGerm {
        fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
            Repr {
                n: self.n,
                partition: self.partition.clone(),
                pieces: self.pieces.clone(),
            }
            .serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for RootGerm {
        fn deserialize<D: Deserializer<'de>>(
            deserializer: D,
        ) -> std::result::Result<Self, D::Error> {
            let repr = Repr::deserialize(deserializer)?;
            if repr.n < 2
                || repr.partition.len() != repr.n as usize + 1
                || repr.pieces.len() != repr.n as usize
            {
                return Err(serde::de::Error::custom("inconsistent germ shape"));
            }
            for (i, piece) in repr.pieces.iter().enumerate() {
                let dom = piece.domain();
                if dom.lo() != &repr.partition[i] || dom.hi() != &repr.partition[i + 1] {
                    return Err(serde::de::Error::custom(
                        "piece domains do not match the partition",
                    ));
                }
            }
            Ok(RootGerm {
                n: repr.n,
                partition: repr.partition,
                pieces: repr.pieces,
            })
        }
    }
}
