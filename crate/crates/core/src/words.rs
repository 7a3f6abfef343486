//! Free words over the two group generators and their evaluation.
//!
//! The group has a presentation with two generators a, b and four relators
//!
//! ```text
//! a^4 = b^3,  (ba)^5 = b^9,  [bab, a^2baba^2] = 1,  [bab, a^2b^2a^2baba^2ba^2] = 1
//! ```
//!
//! where the generators act on [0, 1] by the tables frozen in
//! [`gen_a`]/[`gen_b`]. Products of words act by composition with the
//! rightmost factor applied first: the word `xy` denotes the map
//! x after y. This convention is not a free choice — it is the unique one
//! under which the displayed table for the element r and the interval
//! semantics of the t_n family come out right (see the calibration tests) —
//! and it can be overridden per evaluation via [`Convention`].
//!
//! Word equality is decided by evaluating to group elements, which is sound
//! and complete because the action on the line is faithful.

use std::fmt;
use std::sync::OnceLock;

use crate::dyadic::{dy, Dyadic};
use crate::error::{Error, Result};
use crate::plmap::{Interval, PLMap};
use crate::qembed;
use crate::report::{Check, VerificationReport};
use crate::tbar::TBarElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A,
    B,
}

/// A generator or its inverse; uppercase renders as the inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    fn chr(&self) -> char {
        match (self.generator, self.inverse) {
            (Generator::A, false) => 'a',
            (Generator::A, true) => 'A',
            (Generator::B, false) => 'b',
            (Generator::B, true) => 'B',
        }
    }

    fn flipped(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// Which side of a product acts first under evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `xy` means x after y (the calibrated default).
    #[default]
    Composition,
    /// `xy` means y after x.
    Flipped,
}

/// A freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|last| *last == l.flipped()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Parses whitespace-separated tokens `a`, `b`, `A`, `B`, optionally
    /// with an integer exponent as in `a^-3` (uppercase with a positive
    /// exponent still means the inverse letter repeated).
    pub fn parse(text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let mut chars = tok.chars();
            let head = chars
                .next()
                .ok_or_else(|| Error::Parse("empty token".into()))?;
            let letter = match head {
                'a' => Letter {
                    generator: Generator::A,
                    inverse: false,
                },
                'A' => Letter {
                    generator: Generator::A,
                    inverse: true,
                },
                'b' => Letter {
                    generator: Generator::B,
                    inverse: false,
                },
                'B' => Letter {
                    generator: Generator::B,
                    inverse: true,
                },
                other => return Err(Error::Parse(format!("unknown generator `{other}`"))),
            };
            let rest = chars.as_str();
            let count: i64 = if rest.is_empty() {
                1
            } else {
                let exp = rest
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("bad token `{tok}`")))?;
                exp.parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?
            };
            let l = if count < 0 { letter.flipped() } else { letter };
            for _ in 0..count.unsigned_abs() {
                letters.push(l);
            }
        }
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", l.chr())?;
            first = false;
        }
        Ok(())
    }
}

pub fn multiply(u: &Word, v: &Word) -> Word {
    Word::from_letters(u.letters.iter().chain(v.letters.iter()).copied())
}

pub fn invert_word(w: &Word) -> Word {
    Word::from_letters(w.letters.iter().rev().map(|l| l.flipped()))
}

pub fn power_word(w: &Word, k: i64) -> Word {
    let base = if k < 0 { invert_word(w) } else { w.clone() };
    let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        letters.extend_from_slice(&base.letters);
    }
    Word::from_letters(letters)
}

/// x conjugated by y: y^{-1} x y.
pub fn conjugate(x: &Word, y: &Word) -> Word {
    multiply(&multiply(&invert_word(y), x), y)
}

/// The commutator x y x^{-1} y^{-1}.
pub fn commutator(x: &Word, y: &Word) -> Word {
    multiply(&multiply(x, y), &multiply(&invert_word(x), &invert_word(y)))
}

fn letter_element(l: Letter) -> &'static TBarElement {
    static TABLES: OnceLock<[TBarElement; 4]> = OnceLock::new();
    let t = TABLES.get_or_init(|| {
        let a = gen_a();
        let b = gen_b();
        let a_inv = a.invert();
        let b_inv = b.invert();
        [a, b, a_inv, b_inv]
    });
    let idx = match (l.generator, l.inverse) {
        (Generator::A, false) => 0,
        (Generator::B, false) => 1,
        (Generator::A, true) => 2,
        (Generator::B, true) => 3,
    };
    &t[idx]
}

/// The generator a: slope 1/2 up to 3/4, a unit-slope nudge, then slope 4.
pub fn gen_a() -> TBarElement {
    let pts = [("0", "1/2"), ("3/4", "7/8"), ("7/8", "1"), ("1", "3/2")];
    table(&pts)
}

/// The generator b: slope 1/2 up to 1/2, a unit-slope nudge, then slope 2.
pub fn gen_b() -> TBarElement {
    let pts = [("0", "1/2"), ("1/2", "3/4"), ("3/4", "1"), ("1", "3/2")];
    table(&pts)
}

fn table(pts: &[(&str, &str)]) -> TBarElement {
    let points = pts.iter().map(|(x, y)| (dy(x), dy(y))).collect();
    TBarElement::from_fundamental(PLMap::new(points).expect("frozen table"))
        .expect("frozen table is a group element")
}

/// Evaluates a word under the calibrated composition convention.
pub fn evaluate(w: &Word) -> TBarElement {
    evaluate_with(w, Convention::Composition)
}

/// Evaluates under an explicit convention.
///
/// The product is computed as a balanced tree rather than a linear fold;
/// this is the same element by associativity, and it keeps the closed-form
/// chain words (whose letter counts grow factorially while their values
/// stay small) cheap to evaluate.
pub fn evaluate_with(w: &Word, convention: Convention) -> TBarElement {
    fn eval_slice(letters: &[Letter], convention: Convention) -> TBarElement {
        match letters.len() {
            0 => TBarElement::identity(),
            1 => letter_element(letters[0]).clone(),
            n => {
                let (l, r) = letters.split_at(n / 2);
                let (el, er) = (eval_slice(l, convention), eval_slice(r, convention));
                match convention {
                    Convention::Composition => el.compose(&er),
                    Convention::Flipped => er.compose(&el),
                }
            }
        }
    }
    eval_slice(&w.letters, convention)
}

/// The three auxiliary elements used to assemble the t_n family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    P,
    Q,
    R,
}

/// Frozen defining words: p = a^{-1}b, q = a^{-1}ba^2b^{-1}, and
/// r = b^{-1}aba^2(ab)^{-2}ba^{-1}b.
pub fn named(which: Named) -> Word {
    let text = match which {
        Named::P => "A b",
        Named::Q => "A b a a B",
        Named::R => "B a b a a B A B A b A b",
    };
    Word::parse(text).expect("frozen word")
}

/// The displayed table for r: identity outside [1/4, 5/8], slope 1/2 then 2
/// inside.
pub fn r_table() -> TBarElement {
    table(&[
        ("0", "0"),
        ("1/4", "1/4"),
        ("1/2", "3/8"),
        ("5/8", "5/8"),
        ("1", "1"),
    ])
}

/// Checks the four relators as exact element equalities, plus the
/// consequences b^3 = a^4 = z.
pub fn relator_report() -> VerificationReport {
    let w = |s: &str| Word::parse(s).expect("relator word");
    let mut checks = Vec::new();

    let a4 = evaluate(&w("a^4"));
    let b3 = evaluate(&w("b^3"));
    checks.push(Check::new(
        "a^4 = b^3",
        a4 == b3,
        "fourth power of a equals third power of b",
    ));

    let ba5 = evaluate(&power_word(&w("b a"), 5));
    let b9 = evaluate(&w("b^9"));
    checks.push(Check::new(
        "(ba)^5 = b^9",
        ba5 == b9,
        "fifth power of ba equals ninth power of b",
    ));

    let comm1 = commutator(&w("b a b"), &w("a a b a b a a"));
    checks.push(Check::new(
        "[bab, a^2baba^2] = 1",
        evaluate(&comm1).is_identity(),
        "first commutator relator evaluates to the identity",
    ));

    let comm2 = commutator(&w("b a b"), &w("a a b b a a b a b a a b a a"));
    checks.push(Check::new(
        "[bab, a^2b^2a^2baba^2ba^2] = 1",
        evaluate(&comm2).is_identity(),
        "second commutator relator evaluates to the identity",
    ));

    let one = num_bigint::BigInt::from(1);
    checks.push(Check::new(
        "b^3 = z",
        b3.is_power_of_z() == Some(one.clone()),
        "b cubed is the unit translation",
    ));
    checks.push(Check::new(
        "a^4 = z",
        a4.is_power_of_z() == Some(one),
        "a to the fourth is the unit translation",
    ));

    VerificationReport::new(checks)
}

/// The word t_n: t_3 = b^2a(ab)^{-2}b and, for n >= 4,
/// t_n = (t_{n-1} conjugated by q^{n-2}) (r conjugated by p^{n-4} q^{n(n-3)/2}).
pub fn t_word(n: u64) -> Result<Word> {
    if n < 3 {
        return Err(Error::IndexTooSmall { min: 3, got: n });
    }
    let p = named(Named::P);
    let q = named(Named::Q);
    let r = named(Named::R);
    let mut t = Word::parse("b b a B A B A b").expect("frozen t_3");
    for m in 4..=n {
        let left = conjugate(&t, &power_word(&q, (m - 2) as i64));
        let shift = multiply(
            &power_word(&p, (m - 4) as i64),
            &power_word(&q, (m * (m - 3) / 2) as i64),
        );
        let right = conjugate(&r, &shift);
        t = multiply(&left, &right);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordForm {
    /// The explicit product of (n-1)! conjugates of t_n; supported for
    /// n <= 5 where the factor count stays small.
    Product,
    /// The commutator-plus-power closed form; supported for n <= 6, beyond
    /// which the flattened word itself outgrows memory.
    Closed,
}

const PRODUCT_MAX: u64 = 5;
const CLOSED_MAX: u64 = 6;

fn factorial(n: u64) -> i64 {
    (2..=n).product::<u64>() as i64
}

/// The word s_n in either displayed form. Both forms evaluate to the same
/// group element, and that element is the level-n entry of the standard
/// chain.
pub fn s_word(n: u64, form: WordForm) -> Result<Word> {
    let (name, max) = match form {
        WordForm::Product => ("product", PRODUCT_MAX),
        WordForm::Closed => ("closed", CLOSED_MAX),
    };
    if n < 1 || n > max {
        return Err(Error::WordFormRange {
            form: name,
            lo: 1,
            hi: max,
            n,
        });
    }
    Ok(match n {
        1 => Word::parse("b b b").expect("frozen s_1"),
        2 => Word::parse("b a a B").expect("frozen s_2"),
        3 => Word::parse("B a b A A b a b A B").expect("frozen s_3"),
        _ => {
            let t = t_word(n)?;
            let prev = s_word(n - 1, WordForm::Closed)?;
            let comm = commutator(&t, &conjugate(&t, &prev));
            match form {
                WordForm::Closed => {
                    let step = multiply(&invert_word(&prev), &t);
                    let tail = power_word(&step, factorial(n - 1));
                    multiply(&multiply(&comm, &s_word(1, form)?), &tail)
                }
                WordForm::Product => {
                    let mut acc = comm;
                    for j in (1..factorial(n - 1)).rev() {
                        acc = multiply(&acc, &conjugate(&t, &power_word(&prev, -j)));
                    }
                    multiply(&acc, &t)
                }
            }
        }
    })
}

fn window_equals_linear(e: &TBarElement, src: (&Dyadic, &Dyadic), dst: (&Dyadic, &Dyadic)) -> bool {
    let iv = Interval::new(src.0.clone(), src.1.clone()).expect("nonempty clause interval");
    e.window(&iv).points()
        == [
            (src.0.clone(), dst.0.clone()),
            (src.1.clone(), dst.1.clone()),
        ]
}

fn window_is_identity(e: &TBarElement, lo: &Dyadic, hi: &Dyadic) -> bool {
    let iv = Interval::new(lo.clone(), hi.clone()).expect("nonempty clause interval");
    e.window(&iv) == PLMap::identity(&iv)
}

fn t_clause_checks(e: &TBarElement, n: u64) -> Vec<Check> {
    let big = qembed::d(n - 1).expect("n >= 3");
    let small = qembed::d(n).expect("n >= 3");
    let zero = Dyadic::zero();
    let one = Dyadic::one();
    let half_big = big.mul_pow2(-1);
    let mid = &big + &small.mul_pow2(-1);
    let end = &big + &small;

    vec![
        Check::new(
            format!(
                "t_{n} maps [0, d_{}/2] linearly onto [0, d_{}]",
                n - 1,
                n - 1
            ),
            window_equals_linear(e, (&zero, &half_big), (&zero, &big)),
            "left half of the support doubles onto the whole base interval",
        ),
        Check::new(
            format!(
                "t_{n} maps [d_{}/2, d_{}] linearly onto the left half above",
                n - 1,
                n - 1
            ),
            window_equals_linear(e, (&half_big, &big), (&big, &mid)),
            "right half lands on the left half of the next block",
        ),
        Check::new(
            format!("t_{n} maps the next block linearly onto its right half"),
            window_equals_linear(e, (&big, &end), (&mid, &end)),
            "the block above the base interval compresses onto its right half",
        ),
        Check::new(
            format!("t_{n} is the identity on [d_{} + d_{n}, 1]", n - 1),
            window_is_identity(e, &end, &one),
            "no support above the two blocks",
        ),
    ]
}

/// Verifies the four-clause interval description of t_n exactly.
pub fn t_semantics_report(n: u64) -> Result<VerificationReport> {
    let e = evaluate(&t_word(n)?);
    Ok(VerificationReport::new(t_clause_checks(&e, n)))
}

/// Verifies the defining properties of the named elements p, q, r.
pub fn named_report() -> VerificationReport {
    let p = evaluate(&named(Named::P));
    let q = evaluate(&named(Named::Q));
    let r = evaluate(&named(Named::R));

    let checks = vec![
        Check::new(
            "p is the identity on [0, 1/2]",
            window_is_identity(&p, &Dyadic::zero(), &dy("1/2")),
            "exact piecewise identity on the left half",
        ),
        Check::new(
            "q maps [0, 3/8] linearly onto [0, 3/4]",
            window_equals_linear(
                &q,
                (&Dyadic::zero(), &dy("3/8")),
                (&Dyadic::zero(), &dy("3/4")),
            ),
            "a single slope-2 piece",
        ),
        Check::new(
            "r matches its displayed table",
            r == r_table(),
            "word evaluation reproduces the four-piece table exactly",
        ),
    ];
    VerificationReport::new(checks)
}

/// Runs the s_word checks for one level: the root step as elements, form
/// agreement when requested, and agreement with the geometric chain.
pub fn words_report(
    n: u64,
    both_forms: bool,
    compare_geometric: bool,
) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let closed = evaluate(&s_word(n, WordForm::Closed)?);

    if n == 1 {
        checks.push(Check::new(
            "s_1 = z",
            closed.is_power_of_z() == Some(num_bigint::BigInt::from(1)),
            "the base word b^3 is the unit translation",
        ));
    } else {
        let prev = evaluate(&s_word(n - 1, WordForm::Closed)?);
        checks.push(Check::new(
            format!("s_{n}^{n} = s_{}", n - 1),
            closed.power(n as i64) == prev,
            "root step holds for the word evaluations",
        ));
    }

    if both_forms {
        let product = evaluate(&s_word(n, WordForm::Product)?);
        checks.push(Check::new(
            format!("product and closed forms of s_{n} agree"),
            product == closed,
            "both displayed forms evaluate to the same element",
        ));
    }

    if compare_geometric {
        let chain = qembed::standard_chain(n)?;
        checks.push(Check::new(
            format!("s_{n} word matches the geometric chain element"),
            closed == *chain.s(n as usize),
            "word construction and root construction agree exactly",
        ));
    }

    Ok(VerificationReport::new(checks))
}

mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Word {
        fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
            let tokens: Vec<String> = self.letters.iter().map(|l| l.chr().to_string()).collect();
            tokens.serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for Word {
        fn deserialize<D: Deserializer<'de>>(
            deserializer: D,
        ) -> std::result::Result<Self, D::Error> {
            let tokens = Vec::<String>::deserialize(deserializer)?;
            Word::parse(&tokens.join(" ")).map_err(serde::de::Error::custom)
        }
    }
}
