//! Chains realizing the additive rationals inside the lift group.
//!
//! A chain is a sequence s_1, s_2, ..., s_N with s_1 = z and s_n^n = s_{n-1}
//! for n >= 2; the subgroup its members generate is isomorphic to Q, with
//! s_n playing the role of 1/n!. The standard chain takes the default nth
//! root at every level, which reproduces the explicit family with
//! s_n(0) = d_n = 2^(-n(n-1)/2); the exotic chain prescribes
//! s_n(0) = 1/2 + 2^(-n) instead, so the orbit of 0 never meets (0, 1/2]
//! and the action is not conjugate to the translation action.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::plmap::ChoiceSeed;
use crate::report::{Check, VerificationReport};
use crate::roots;
use crate::tbar::TBarElement;

/// d_n = 2^(-n(n-1)/2), the closed form of d_1 = 1, d_n = d_{n-1}/2^(n-1).
pub fn d(n: u64) -> Result<Dyadic> {
    if n < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: n });
    }
    Ok(Dyadic::pow2(-((n * (n - 1) / 2) as i64)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Standard,
    Exotic,
    /// Standard construction with a nonzero root seed at every level.
    Custom(u64),
}

/// A verified-by-construction sequence s_1..s_N with s_n^n = s_{n-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    kind: ChainKind,
    elements: Vec<TBarElement>,
}

impl Chain {
    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn elements(&self) -> &[TBarElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The element s_n (1-based, s_1 = z).
    pub fn s(&self, n: usize) -> &TBarElement {
        &self.elements[n - 1]
    }

    /// Assembles a chain from raw elements without any checking; intended
    /// for deserialization and for deliberately corrupted test inputs.
    pub fn from_elements(kind: ChainKind, elements: Vec<TBarElement>) -> Self {
        Chain { kind, elements }
    }
}

/// Root orders are validated against z only while the powers are cheap; the
/// later levels rest on the telescoped identities certified by
/// [`verify_chain`].
const VALIDATE_ORDER_UP_TO: u64 = 6;

fn build_chain(
    n_max: u64,
    kind: ChainKind,
    mut next: impl FnMut(&TBarElement, u64) -> Result<TBarElement>,
) -> Result<Chain> {
    if n_max < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: n_max });
    }
    let mut elements = vec![TBarElement::z()];
    for n in 2..=n_max {
        let s = next(elements.last().unwrap(), n)?;
        elements.push(s);
    }
    Ok(Chain { kind, elements })
}

fn factorial(n: u64) -> u64 {
    (2..=n).product()
}

/// The chain of default nth roots: s_1 = z and s_n the seed-0 root of
/// s_{n-1}, which satisfies s_n(x) = x + d_n on [0, d_n] and s_n(x) = 2x on
/// [d_n, d_{n-1}/2].
pub fn standard_chain(n_max: u64) -> Result<Chain> {
    seeded_chain_inner(n_max, ChainKind::Standard, ChoiceSeed(0))
}

/// The standard construction with a custom root seed; distinct seeds give
/// distinct chains level by level.
pub fn seeded_chain(n_max: u64, seed: u64) -> Result<Chain> {
    seeded_chain_inner(n_max, ChainKind::Custom(seed), ChoiceSeed(seed))
}

fn seeded_chain_inner(n_max: u64, kind: ChainKind, choice: ChoiceSeed) -> Result<Chain> {
    build_chain(n_max, kind, |prev, n| {
        if n <= VALIDATE_ORDER_UP_TO {
            roots::nth_root(prev, n, factorial(n - 1), choice)
        } else {
            roots::nth_root_trusted(prev, n, choice)
        }
    })
}

/// The exotic chain: s_n is the root of s_{n-1} with the prescribed value
/// s_n(0) = 1/2 + 2^(-n).
pub fn exotic_chain(n_max: u64) -> Result<Chain> {
    build_chain(n_max, ChainKind::Exotic, |prev, n| {
        let v = &Dyadic::new(1, 1) + &Dyadic::pow2(-(n as i64));
        if n <= VALIDATE_ORDER_UP_TO {
            roots::nth_root_with_value(prev, n, factorial(n - 1), &v)
        } else {
            roots::nth_root_with_value_trusted(prev, n, &v)
        }
    })
}

/// Recomputes every chain invariant exactly: s_1 = z, s_n^n = s_{n-1} for
/// every level, and (derived from those by telescoping, not recomputed) the
/// center membership s_N^{N!} = z.
pub fn verify_chain(chain: &Chain) -> VerificationReport {
    let mut checks = Vec::new();

    let s1_ok = chain
        .elements
        .first()
        .and_then(|s1| s1.is_power_of_z())
        .map_or(false, |k| k == BigInt::one());
    checks.push(Check::new(
        "s_1 = z",
        s1_ok,
        "the chain starts at the unit translation, which has infinite order",
    ));

    let mut all_steps = true;
    for n in 2..=chain.len() {
        let ok = chain.s(n).power(n as i64) == *chain.s(n - 1);
        all_steps &= ok;
        checks.push(Check::new(
            format!("s_{n}^{n} = s_{}", n - 1),
            ok,
            if ok {
                "exact recomposition".to_string()
            } else {
                format!("power of s_{n} differs from s_{}", n - 1)
            },
        ));
    }

    let n = chain.len();
    checks.push(Check::new(
        "center containment",
        s1_ok && all_steps,
        format!("s_{n}^{n}! = z telescopes from the verified root steps, so the subgroup contains the center"),
    ));

    VerificationReport::new(checks)
}

/// All points w(0) for words w of length <= depth over the first
/// min(levels, N) chain elements and their inverses, deduplicated.
pub fn orbit_sample(chain: &Chain, depth: u32, levels: usize) -> BTreeSet<Dyadic> {
    let mut gens: Vec<TBarElement> = Vec::new();
    for s in chain.elements.iter().take(levels) {
        gens.push(s.clone());
        gens.push(s.invert());
    }

    let mut seen: BTreeSet<Dyadic> = BTreeSet::new();
    seen.insert(Dyadic::zero());
    let mut frontier: Vec<Dyadic> = vec![Dyadic::zero()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = g.eval(x);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Default orbit sampling over the first four chain levels.
pub fn orbit_sample_default(chain: &Chain, depth: u32) -> BTreeSet<Dyadic> {
    orbit_sample(chain, depth, 4)
}

/// True when the fractional part of x lies in (0, 1/2]; the exotic orbit
/// must avoid such points.
pub fn frac_in_left_half(x: &Dyadic) -> bool {
    let f = x.fract();
    f.is_positive() && f <= Dyadic::new(1, 1)
}

mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        kind: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        seed: Option<u64>,
        elements: Vec<TBarElement>,
    }

    impl Serialize for Chain {
        fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
            let (kind, seed) = match self.kind {
                ChainKind::Standard => ("standard", None),
                ChainKind::Exotic => ("exotic", None),
                ChainKind::Custom(s) => ("custom", Some(s)),
            };
            Repr {
                kind: kind.to_string(),
                seed,
                elements: self.elements.clone(),
            }
            .serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for Chain {
        fn deserialize<D: Deserializer<'de>>(
            deserializer: D,
        ) -> std::result::Result<Self, D::Error> {
            let repr = Repr::deserialize(deserializer)?;
            let kind = match (repr.kind.as_str(), repr.seed) {
                ("standard", None) => ChainKind::Standard,
                ("exotic", None) => ChainKind::Exotic,
                ("custom", Some(s)) => ChainKind::Custom(s),
                _ => return Err(serde::de::Error::custom("unknown chain kind")),
            };
            Ok(Chain {
                kind,
                elements: repr.elements,
            })
        }
    }
}
