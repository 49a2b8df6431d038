//! Interacting Fock space raw material.
//!
//! An interacting Fock space is fixed by its Jacobi sequence: positive
//! weights `omega(1), omega(2), ...` with `a Phi_n = sqrt(omega(n)) Phi_{n-1}`
//! and `a* Phi_n = sqrt(omega(n+1)) Phi_{n+1}`. Moments are polynomials in
//! the weights with integer coefficients, so nothing here ever takes a
//! square root.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_exact, int, parse_exact, ExactScalar};

/// Largest `m` accepted by [`enumerate_balanced_words`]; `C(24, 12) = 2_704_156`.
pub const WORD_ENUMERATION_CAP: usize = 12;

/// `[n]_q = 1 + q + ... + q^(n-1)`, zero for `n = 0`.
pub fn q_integer(n: usize, q: &ExactScalar) -> Result<ExactScalar> {
    check_q(q)?;
    let mut sum = ExactScalar::zero();
    let mut term = ExactScalar::one();
    for _ in 0..n {
        sum += &term;
        term *= q;
    }
    Ok(sum)
}

fn check_q(q: &ExactScalar) -> Result<()> {
    if q.is_negative() || q > &ExactScalar::one() {
        return Err(Error::QOutOfRange(format_exact(q)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JacobiKind {
    Standard,
    QDeformed(ExactScalar),
    Explicit(Vec<ExactScalar>),
}

/// Squared ladder coefficients of an interacting Fock space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "JacobiJson", into = "JacobiJson")]
pub struct JacobiSequence {
    kind: JacobiKind,
}

impl JacobiSequence {
    pub fn standard() -> Self {
        Self {
            kind: JacobiKind::Standard,
        }
    }

    pub fn q_deformed(q: ExactScalar) -> Result<Self> {
        check_q(&q)?;
        Ok(Self {
            kind: JacobiKind::QDeformed(q),
        })
    }

    /// A finite weight list; `omega[0]` is `omega(1)`.
    pub fn explicit(omega: Vec<ExactScalar>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidJacobi("explicit weight list is empty".into()));
        }
        if let Some((i, w)) = omega.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(Error::NonPositiveWeight {
                index: i + 1,
                value: format_exact(w),
            });
        }
        Ok(Self {
            kind: JacobiKind::Explicit(omega),
        })
    }

    pub fn kind(&self) -> &JacobiKind {
        &self.kind
    }

    pub fn is_standard(&self) -> bool {
        matches!(self.kind, JacobiKind::Standard)
    }

    /// `omega(n)` for `n >= 1`.
    pub fn weight(&self, n: usize) -> Result<ExactScalar> {
        if n == 0 {
            return Err(Error::ZeroWeightIndex);
        }
        match &self.kind {
            JacobiKind::Standard => Ok(int(n as i64)),
            JacobiKind::QDeformed(q) => q_integer(n, q),
            JacobiKind::Explicit(omega) => {
                omega
                    .get(n - 1)
                    .cloned()
                    .ok_or(Error::WeightIndexOutOfRange {
                        index: n,
                        len: omega.len(),
                    })
            }
        }
    }

    /// `omega(1..=n)` as a vector indexed from zero.
    pub fn weights_up_to(&self, n: usize) -> Result<Vec<ExactScalar>> {
        (1..=n).map(|k| self.weight(k)).collect()
    }

    /// Canonical scale for state `N`: `N`, `[N]_q`, or `1` for explicit
    /// lists. The vacuum is left unscaled (`s = 1`).
    pub fn canonical_scale(&self, state: NumberState) -> Result<ExactScalar> {
        if state.index() == 0 {
            return Ok(ExactScalar::one());
        }
        let s = match &self.kind {
            JacobiKind::Standard => int(state.index() as i64),
            JacobiKind::QDeformed(q) => q_integer(state.index(), q)?,
            JacobiKind::Explicit(_) => ExactScalar::one(),
        };
        if !s.is_positive() {
            return Err(Error::NonPositiveScale(format_exact(&s)));
        }
        Ok(s)
    }

    /// Accepts the JSON object form, or the shorthands `standard` and `q=VAL`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("standard") {
            return Ok(Self::standard());
        }
        if let Some(q) = t.strip_prefix("q=") {
            return Self::q_deformed(parse_exact(q)?);
        }
        serde_json::from_str(t).map_err(|e| Error::InvalidJacobi(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("jacobi sequence serializes")
    }
}

impl fmt::Display for JacobiSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            JacobiKind::Standard => write!(f, "standard"),
            JacobiKind::QDeformed(q) => write!(f, "q={q}"),
            JacobiKind::Explicit(w) => write!(f, "explicit[{}]", w.len()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum JacobiJson {
    Standard,
    Q { q: String },
    Explicit { omega: Vec<String> },
}

impl TryFrom<JacobiJson> for JacobiSequence {
    type Error = Error;

    fn try_from(raw: JacobiJson) -> Result<Self> {
        match raw {
            JacobiJson::Standard => Ok(Self::standard()),
            JacobiJson::Q { q } => Self::q_deformed(parse_exact(&q)?),
            JacobiJson::Explicit { omega } => Self::explicit(
                omega
                    .iter()
                    .map(|s| parse_exact(s))
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

impl From<JacobiSequence> for JacobiJson {
    fn from(seq: JacobiSequence) -> Self {
        match seq.kind {
            JacobiKind::Standard => JacobiJson::Standard,
            JacobiKind::QDeformed(q) => JacobiJson::Q {
                q: format_exact(&q),
            },
            JacobiKind::Explicit(w) => JacobiJson::Explicit {
                omega: w.iter().map(format_exact).collect(),
            },
        }
    }
}

/// The number state `Phi_N`, carrying the vector state `<Phi_N, . Phi_N>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NumberState(usize);

impl NumberState {
    pub const VACUUM: NumberState = NumberState(0);

    pub fn new(index: usize) -> Self {
        Self(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NumberState {
    fn from(n: usize) -> Self {
        Self(n)
    }
}

/// How a scaled observable `X / sqrt(s)` picks `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaleRule {
    Canonical,
    Fixed(ExactScalar),
}

impl ScaleRule {
    pub fn resolve(&self, seq: &JacobiSequence, state: NumberState) -> Result<ExactScalar> {
        match self {
            ScaleRule::Canonical => seq.canonical_scale(state),
            ScaleRule::Fixed(s) if s.is_positive() => Ok(s.clone()),
            ScaleRule::Fixed(s) => Err(Error::NonPositiveScale(format_exact(s))),
        }
    }

    /// `canonical` or a positive rational.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("canonical") {
            return Ok(ScaleRule::Canonical);
        }
        let s = parse_exact(t)?;
        if !s.is_positive() {
            return Err(Error::NonPositiveScale(format_exact(&s)));
        }
        Ok(ScaleRule::Fixed(s))
    }
}

impl fmt::Display for ScaleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleRule::Canonical => write!(f, "canonical"),
            ScaleRule::Fixed(s) => write!(f, "{s}"),
        }
    }
}

/// Position `X = (a + a*) / sqrt(2)` divided by `sqrt(scale)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledObservable {
    jacobi: JacobiSequence,
    scale: ExactScalar,
}

impl ScaledObservable {
    pub fn new(jacobi: JacobiSequence, scale: ExactScalar) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::NonPositiveScale(format_exact(&scale)));
        }
        Ok(Self { jacobi, scale })
    }

    pub fn canonical(jacobi: JacobiSequence, state: NumberState) -> Result<Self> {
        let scale = jacobi.canonical_scale(state)?;
        Ok(Self { jacobi, scale })
    }

    pub fn jacobi(&self) -> &JacobiSequence {
        &self.jacobi
    }

    pub fn scale(&self) -> &ExactScalar {
        &self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `a`, written `1` in the word notation.
    Annihilate,
    /// `a*`.
    Create,
}

/// A product of ladder operators, stored left to right.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LadderWord {
    letters: Vec<Letter>,
}

impl LadderWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
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

    pub fn balanced(&self) -> bool {
        let creates = self
            .letters
            .iter()
            .filter(|&&l| l == Letter::Create)
            .count();
        2 * creates == self.letters.len()
    }
}

impl fmt::Display for LadderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::Annihilate => "1",
                Letter::Create => "*",
            })?;
        }
        Ok(())
    }
}

/// All length-`2m` words with `m` letters of each kind, lexicographic with
/// `Annihilate < Create`.
pub fn enumerate_balanced_words(m: usize) -> Result<Vec<LadderWord>> {
    Ok(BalancedWords::new(m)?.collect())
}

/// Lazy lexicographic enumeration of balanced words.
#[derive(Debug, Clone)]
pub struct BalancedWords {
    current: Option<Vec<Letter>>,
}

impl BalancedWords {
    pub fn new(m: usize) -> Result<Self> {
        if m > WORD_ENUMERATION_CAP {
            return Err(Error::WordCapExceeded {
                m,
                cap: WORD_ENUMERATION_CAP,
            });
        }
        let mut first = vec![Letter::Annihilate; m];
        first.extend(std::iter::repeat_n(Letter::Create, m));
        Ok(Self {
            current: Some(first),
        })
    }
}

impl Iterator for BalancedWords {
    type Item = LadderWord;

    fn next(&mut self) -> Option<LadderWord> {
        let word = self.current.take()?;
        let mut next = word.clone();
        // Next multiset permutation: rightmost ascent, swap, reverse tail.
        if let Some(i) = (0..next.len().saturating_sub(1))
            .rev()
            .find(|&i| next[i] < next[i + 1])
        {
            // next[i] is Annihilate; the tail after i is descending.
            let j = (i + 1..next.len())
                .rev()
                .find(|&j| next[j] > next[i])
                .expect("ascent has a larger element");
            next.swap(i, j);
            next[i + 1..].reverse();
            self.current = Some(next);
        }
        Some(LadderWord::new(word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{binomial, ratio};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn q_integer_examples() {
        assert_eq!(q_integer(3, &ratio(1, 2)).unwrap(), ratio(7, 4));
        assert_eq!(q_integer(5, &int(1)).unwrap(), int(5));
        assert_eq!(q_integer(4, &int(0)).unwrap(), int(1));
        assert_eq!(q_integer(0, &ratio(1, 3)).unwrap(), int(0));
    }

    #[test]
    fn q_out_of_range() {
        assert!(matches!(
            q_integer(2, &ratio(3, 2)),
            Err(Error::QOutOfRange(_))
        ));
        assert!(q_integer(2, &ratio(-1, 2)).is_err());
        assert!(JacobiSequence::q_deformed(int(2)).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(JacobiSequence::standard().weight(7).unwrap(), int(7));
        let q = JacobiSequence::q_deformed(ratio(1, 2)).unwrap();
        assert_eq!(q.weight(3).unwrap(), ratio(7, 4));
        let e = JacobiSequence::explicit(vec![int(1), int(1), int(1)]).unwrap();
        assert_eq!(e.weight(2).unwrap(), int(1));
    }

    #[test]
    fn explicit_errors() {
        let e = JacobiSequence::explicit(vec![int(1), int(2)]).unwrap();
        assert_eq!(
            e.weight(3),
            Err(Error::WeightIndexOutOfRange { index: 3, len: 2 })
        );
        assert_eq!(e.weight(0), Err(Error::ZeroWeightIndex));
        assert!(matches!(
            JacobiSequence::explicit(vec![int(1), int(0)]),
            Err(Error::NonPositiveWeight { index: 2, .. })
        ));
        assert!(JacobiSequence::explicit(vec![]).is_err());
    }

    #[test]
    fn json_forms() {
        let s = JacobiSequence::parse(r#"{"kind":"standard"}"#).unwrap();
        assert!(s.is_standard());
        let q = JacobiSequence::parse(r#"{"kind":"q","q":"1/2"}"#).unwrap();
        assert_eq!(q.kind(), &JacobiKind::QDeformed(ratio(1, 2)));
        let e = JacobiSequence::parse(r#"{"kind":"explicit","omega":["1","3/2","2"]}"#).unwrap();
        assert_eq!(e.weight(2).unwrap(), ratio(3, 2));
        assert_eq!(
            JacobiSequence::parse(&e.to_json()).unwrap(),
            e,
            "json round trip"
        );
        assert_eq!(
            JacobiSequence::parse("q=1/4").unwrap().weight(2).unwrap(),
            ratio(5, 4)
        );
        assert!(JacobiSequence::parse(r#"{"kind":"q","q":"5/4"}"#).is_err());
        assert!(JacobiSequence::parse(r#"{"kind":"explicit","omega":["1","-1"]}"#).is_err());
        assert!(JacobiSequence::parse(r#"{"kind":"hermite"}"#).is_err());
    }

    #[test]
    fn canonical_scales() {
        let n = NumberState::new(3);
        assert_eq!(
            JacobiSequence::standard().canonical_scale(n).unwrap(),
            int(3)
        );
        let q = JacobiSequence::q_deformed(ratio(1, 2)).unwrap();
        assert_eq!(q.canonical_scale(n).unwrap(), ratio(7, 4));
        assert_eq!(
            JacobiSequence::standard()
                .canonical_scale(NumberState::VACUUM)
                .unwrap(),
            int(1)
        );
        assert!(ScaledObservable::new(JacobiSequence::standard(), int(0)).is_err());
        assert_eq!(ScaleRule::parse("canonical").unwrap(), ScaleRule::Canonical);
        assert_eq!(
            ScaleRule::parse("5/2").unwrap(),
            ScaleRule::Fixed(ratio(5, 2))
        );
        assert!(ScaleRule::parse("-1").is_err());
    }

    #[test]
    fn word_counts() {
        assert_eq!(enumerate_balanced_words(1).unwrap().len(), 2);
        assert_eq!(enumerate_balanced_words(2).unwrap().len(), 6);
        assert_eq!(enumerate_balanced_words(3).unwrap().len(), 20);
        assert_eq!(
            enumerate_balanced_words(13).unwrap_err(),
            Error::WordCapExceeded { m: 13, cap: 12 }
        );
    }

    #[test]
    fn words_lexicographic() {
        let w: Vec<String> = enumerate_balanced_words(2)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(w, ["11**", "1*1*", "1**1", "*11*", "*1*1", "**11"]);
    }

    #[test]
    fn unbalanced_word() {
        let w = LadderWord::new(vec![Letter::Create, Letter::Create, Letter::Annihilate]);
        assert!(!w.balanced());
    }

    #[test]
    fn counts_match_binomial() {
        for m in 1..=8 {
            let words = enumerate_balanced_words(m).unwrap();
            assert_eq!(BigInt::from(words.len()), binomial(2 * m as u64, m as u64));
            assert!(words.iter().all(|w| w.balanced() && w.len() == 2 * m));
            assert!(words.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn q_one_is_standard() {
        let q1 = JacobiSequence::q_deformed(int(1)).unwrap();
        let std = JacobiSequence::standard();
        for n in 1..=64 {
            assert_eq!(q1.weight(n).unwrap(), std.weight(n).unwrap());
            assert_eq!(q_integer(n, &int(1)).unwrap(), int(n as i64));
        }
    }

    proptest! {
        #[test]
        fn q_integer_increasing(n in 1usize..60, qi in 0usize..5) {
            let q = ratio(qi as i64, 4);
            let (a, b) = (q_integer(n, &q).unwrap(), q_integer(n + 1, &q).unwrap());
            // [n]_0 = 1 for every n >= 1.
            if qi == 0 {
                prop_assert_eq!(a, b);
            } else {
                prop_assert!(b > a);
            }
        }
    }
}
