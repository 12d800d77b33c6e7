//! Words over named generators, kept freely reduced.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `generator^exponent` with a nonzero exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "(String, i64)", try_from = "(String, i64)")]
pub struct Syllable {
    pub generator: String,
    pub exponent: i64,
}

impl From<Syllable> for (String, i64) {
    fn from(s: Syllable) -> Self {
        (s.generator, s.exponent)
    }
}

impl TryFrom<(String, i64)> for Syllable {
    type Error = Error;

    fn try_from((generator, exponent): (String, i64)) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::WordParse {
                input: generator,
                reason: "zero exponent".into(),
            });
        }
        Ok(Syllable {
            generator,
            exponent,
        })
    }
}

/// A freely reduced word: no zero exponents and no two adjacent syllables on
/// the same generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Syllable>", into = "Vec<Syllable>")]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl From<Vec<Syllable>> for Word {
    fn from(v: Vec<Syllable>) -> Self {
        Word::from_syllables(v)
    }
}

impl From<Word> for Vec<Syllable> {
    fn from(w: Word) -> Self {
        w.syllables
    }
}

/// A single letter `g` or `g^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Letter<'a> {
    generator: &'a str,
    inverse: bool,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(name: &str) -> Self {
        Word::power(name, 1)
    }

    pub fn power(name: &str, exponent: i64) -> Self {
        Word::from_syllables([Syllable {
            generator: name.to_string(),
            exponent,
        }])
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = Syllable>) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for s in syllables {
            push_reduced(&mut out, s);
        }
        Word { syllables: out }
    }

    /// Convenience constructor from `(name, exponent)` pairs.
    pub fn from_pairs(pairs: &[(&str, i64)]) -> Self {
        Word::from_syllables(pairs.iter().map(|&(g, e)| Syllable {
            generator: g.to_string(),
            exponent: e,
        }))
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Length in letters.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator.clone(),
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.syllables.clone();
        for s in &other.syllables {
            push_reduced(&mut out, s.clone());
        }
        Word { syllables: out }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Commutator `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    pub fn exponent_sum(&self, generator: &str) -> i64 {
        self.syllables
            .iter()
            .filter(|s| s.generator == generator)
            .map(|s| s.exponent)
            .sum()
    }

    /// Number of letters (with either sign) on `generator`.
    pub fn occurrences(&self, generator: &str) -> usize {
        self.syllables
            .iter()
            .filter(|s| s.generator == generator)
            .map(|s| s.exponent.unsigned_abs() as usize)
            .sum()
    }

    pub fn generators(&self) -> BTreeSet<&str> {
        self.syllables
            .iter()
            .map(|s| s.generator.as_str())
            .collect()
    }

    /// Replaces every occurrence of `generator` by `image`.
    pub fn substitute(&self, generator: &str, image: &Word) -> Word {
        let mut out = Word::identity();
        for s in &self.syllables {
            let piece = if s.generator == generator {
                image.pow(s.exponent)
            } else {
                Word {
                    syllables: vec![s.clone()],
                }
            };
            out = out.mul(&piece);
        }
        out
    }

    /// Applies `f` to every generator name.
    pub fn rename(&self, mut f: impl FnMut(&str) -> String) -> Word {
        Word::from_syllables(self.syllables.iter().map(|s| Syllable {
            generator: f(&s.generator),
            exponent: s.exponent,
        }))
    }

    /// Conjugates away matching first and last syllables.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.syllables.clone();
        while s.len() >= 2 && s[0].generator == s[s.len() - 1].generator {
            let last = s.pop().unwrap();
            s[0].exponent += last.exponent;
            if s[0].exponent == 0 {
                s.remove(0);
            }
        }
        Word { syllables: s }
    }

    fn letters(&self) -> Vec<Letter<'_>> {
        let mut out = Vec::with_capacity(self.len());
        for s in &self.syllables {
            for _ in 0..s.exponent.unsigned_abs() {
                out.push(Letter {
                    generator: &s.generator,
                    inverse: s.exponent < 0,
                });
            }
        }
        out
    }

    fn from_letters(letters: &[Letter<'_>]) -> Word {
        Word::from_syllables(letters.iter().map(|l| Syllable {
            generator: l.generator.to_string(),
            exponent: if l.inverse { -1 } else { 1 },
        }))
    }

    /// Cyclic rotation by `k` letters: the first `k` letters move to the end.
    pub fn rotate_letters(&self, k: usize) -> Word {
        let letters = self.letters();
        if letters.is_empty() {
            return Word::identity();
        }
        let k = k % letters.len();
        let mut rotated = letters[k..].to_vec();
        rotated.extend_from_slice(&letters[..k]);
        Word::from_letters(&rotated)
    }

    /// Canonical representative of the relator up to cyclic rotation and
    /// inversion: the lexicographically least rotation of the cyclically
    /// reduced word or its inverse, with `g` ordered before `g^-1`.
    pub fn canonical_relator(&self) -> Word {
        let reduced = self.cyclically_reduced();
        let inv = reduced.inverse();
        let mut best: Option<Vec<Letter<'_>>> = None;
        for w in [&reduced, &inv] {
            let letters = w.letters();
            let n = letters.len();
            for k in 0..n.max(1) {
                let mut rot = letters[k.min(n)..].to_vec();
                rot.extend_from_slice(&letters[..k.min(n)]);
                let better = match &best {
                    None => true,
                    Some(b) => letter_key(&rot) < letter_key(b),
                };
                if better {
                    best = Some(rot);
                }
            }
        }
        Word::from_letters(&best.unwrap_or_default())
    }

    /// Two relators define the same normal closure-level relation if one is a
    /// cyclic rotation of the other or of its inverse, after free reduction.
    pub fn same_relator(&self, other: &Word) -> bool {
        self.canonical_relator() == other.canonical_relator()
    }

    /// Parses `x1 x2^-1 x1^3`: whitespace separated generators with optional
    /// caret exponents. The empty string and `1` denote the identity.
    pub fn parse(input: &str) -> Result<Word> {
        let trimmed = input.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::identity());
        }
        let mut syllables = Vec::new();
        for token in trimmed.split_whitespace() {
            let (name, exponent) = match token.split_once('^') {
                Some((name, exp)) => {
                    let e: i64 = exp.parse().map_err(|_| Error::WordParse {
                        input: input.to_string(),
                        reason: format!("bad exponent in `{token}`"),
                    })?;
                    (name, e)
                }
                None => (token, 1),
            };
            if !is_identifier(name) {
                return Err(Error::WordParse {
                    input: input.to_string(),
                    reason: format!("bad generator name in `{token}`"),
                });
            }
            if exponent == 0 {
                return Err(Error::WordParse {
                    input: input.to_string(),
                    reason: format!("zero exponent in `{token}`"),
                });
            }
            syllables.push(Syllable {
                generator: name.to_string(),
                exponent,
            });
        }
        Ok(Word::from_syllables(syllables))
    }
}

fn letter_key<'a>(letters: &'a [Letter<'a>]) -> Vec<(&'a str, bool)> {
    letters.iter().map(|l| (l.generator, l.inverse)).collect()
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn push_reduced(out: &mut Vec<Syllable>, s: Syllable) {
    if s.exponent == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.generator == s.generator {
            last.exponent += s.exponent;
            if last.exponent == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push(s);
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if s.exponent == 1 {
                write!(f, "{}", s.generator)?;
            } else {
                write!(f, "{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("x1 x2^-1 x1^3").to_string(), "x1 x2^-1 x1^3");
        assert_eq!(w("a a a^-1"), w("a"));
        assert_eq!(w(""), Word::identity());
        assert!(Word::parse("x1^0").is_err());
        assert!(Word::parse("x1^a").is_err());
        assert!(Word::parse("1x").is_err());
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w("a b a^-1").cyclically_reduced(), w("b"));
        assert_eq!(w("a^2 b a").cyclically_reduced(), w("a^3 b"));
        assert_eq!(w("a b^-1 a^-1 b").cyclically_reduced(), w("a b^-1 a^-1 b"));
    }

    #[test]
    fn relator_comparator() {
        let r = w("a b a^-1 b^-1");
        assert!(r.same_relator(&w("b a^-1 b^-1 a")));
        assert!(r.same_relator(&w("b a b^-1 a^-1")));
        assert!(r.same_relator(&w("c a b a^-1 b^-1 c^-1")));
        assert!(!r.same_relator(&w("a b a^-1 b")));
        assert_eq!(w("x^-3").canonical_relator(), w("x^3"));
    }

    #[test]
    fn substitution() {
        let r = w("a b a^-1 b^-1 x");
        let x = Word::commutator(&w("a"), &w("b")).inverse();
        assert_eq!(r.substitute("x", &x), Word::identity());
        assert_eq!(w("x^2").substitute("x", &w("a b")), w("a b a b"));
    }

    #[test]
    fn json_shape() {
        let r = w("a b a^-1 b^-1");
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(j, r#"[["a",1],["b",1],["a",-1],["b",-1]]"#);
        let back: Word = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<Word>(r#"[["a",0]]"#).is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(
            (
                0..3usize,
                prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)],
            ),
            0..10,
        )
        .prop_map(|v| {
            Word::from_syllables(v.into_iter().map(|(g, e)| Syllable {
                generator: ["a", "b", "c"][g].to_string(),
                exponent: e,
            }))
        })
    }

    proptest! {
        #[test]
        fn canonical_relator_is_rotation_invariant(r in arb_word(), k in 0usize..12) {
            let c = r.cyclically_reduced();
            prop_assert_eq!(c.rotate_letters(k).canonical_relator(), r.canonical_relator());
            prop_assert_eq!(r.inverse().canonical_relator(), r.canonical_relator());
        }

        #[test]
        fn inverse_cancels(r in arb_word(), s in arb_word()) {
            prop_assert!(r.mul(&r.inverse()).is_identity());
            prop_assert_eq!(r.mul(&s).inverse(), s.inverse().mul(&r.inverse()));
        }
    }
}
