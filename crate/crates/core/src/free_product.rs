//! Normal forms, element orders and bounded centralizer searches in free
//! products of cyclic groups `Z_q1 * … * Z_qk` (with `Z` allowed as a
//! factor). The generator of factor `i` is named `x{i+1}`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// Order of a cyclic factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorOrder {
    Finite(u32),
    Infinite,
}

impl Serialize for FactorOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FactorOrder::Finite(q) => s.serialize_u32(*q),
            FactorOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for FactorOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(q) if q >= 2 && q <= i64::from(u32::MAX) => Ok(FactorOrder::Finite(q as u32)),
            Raw::Int(q) => Err(serde::de::Error::custom(format!(
                "factor order {q} violates `factor_order_at_least_two`"
            ))),
            Raw::Str(s) if matches!(s.as_str(), "inf" | "infinity" | "∞") => {
                Ok(FactorOrder::Infinite)
            }
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "unknown factor order `{s}`"
            ))),
        }
    }
}

/// A free product of at least one cyclic group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawContext")]
pub struct FreeProductContext {
    pub factor_orders: Vec<FactorOrder>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    factor_orders: Vec<FactorOrder>,
}

impl TryFrom<RawContext> for FreeProductContext {
    type Error = Error;

    fn try_from(raw: RawContext) -> Result<Self> {
        FreeProductContext::new(raw.factor_orders)
    }
}

/// Element order: a positive integer or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementOrder::Finite(n) => write!(f, "{n}"),
            ElementOrder::Infinite => f.write_str("infinite"),
        }
    }
}

/// Syllables `(factor index, exponent)` with exponents reduced to the least
/// absolute residue (ties toward positive) and adjacent factors distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct NormalWord {
    pub syllables: Vec<(usize, i64)>,
}

impl NormalWord {
    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word::from_syllables(self.syllables.iter().map(|&(i, e)| crate::word::Syllable {
            generator: format!("x{}", i + 1),
            exponent: e,
        }))
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

impl FreeProductContext {
    pub fn new(factor_orders: Vec<FactorOrder>) -> Result<Self> {
        if factor_orders.is_empty() {
            return Err(Error::Precondition(
                "at_least_one_factor",
                "empty free product".into(),
            ));
        }
        if let Some(FactorOrder::Finite(q)) = factor_orders
            .iter()
            .find(|o| matches!(o, FactorOrder::Finite(q) if *q < 2))
        {
            return Err(Error::Precondition(
                "factor_order_at_least_two",
                format!("factor order {q}"),
            ));
        }
        Ok(FreeProductContext { factor_orders })
    }

    pub fn finite(orders: &[u32]) -> Result<Self> {
        Self::new(orders.iter().map(|&q| FactorOrder::Finite(q)).collect())
    }

    pub fn factor_count(&self) -> usize {
        self.factor_orders.len()
    }

    /// Least absolute residue, ties toward positive; unchanged for `Z`.
    pub fn reduce_exponent(&self, factor: usize, e: i64) -> i64 {
        match self.factor_orders[factor] {
            FactorOrder::Infinite => e,
            FactorOrder::Finite(q) => {
                let q = i64::from(q);
                let r = e.rem_euclid(q);
                if 2 * r > q {
                    r - q
                } else {
                    r
                }
            }
        }
    }

    fn factor_of(&self, generator: &str) -> Result<usize> {
        generator
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= self.factor_orders.len())
            .map(|i| i - 1)
            .ok_or_else(|| Error::UnknownGenerator(generator.to_string()))
    }

    fn push(&self, out: &mut Vec<(usize, i64)>, (factor, e): (usize, i64)) {
        if let Some(last) = out.last_mut() {
            if last.0 == factor {
                let merged = self.reduce_exponent(factor, last.1 + e);
                if merged == 0 {
                    out.pop();
                } else {
                    last.1 = merged;
                }
                return;
            }
        }
        let e = self.reduce_exponent(factor, e);
        if e != 0 {
            out.push((factor, e));
        }
    }

    pub fn normal_form(&self, w: &Word) -> Result<NormalWord> {
        let mut out = Vec::new();
        for s in w.syllables() {
            let factor = self.factor_of(&s.generator)?;
            self.push(&mut out, (factor, s.exponent));
        }
        Ok(NormalWord { syllables: out })
    }

    pub fn multiply(&self, u: &NormalWord, v: &NormalWord) -> NormalWord {
        let mut out = u.syllables.clone();
        for &s in &v.syllables {
            self.push(&mut out, s);
        }
        NormalWord { syllables: out }
    }

    pub fn inverse(&self, u: &NormalWord) -> NormalWord {
        let mut out = Vec::with_capacity(u.len());
        for &(i, e) in u.syllables.iter().rev() {
            self.push(&mut out, (i, -e));
        }
        NormalWord { syllables: out }
    }

    /// Repeatedly conjugates away equal first and last factors.
    pub fn cyclically_reduce(&self, u: &NormalWord) -> NormalWord {
        let mut s = u.syllables.clone();
        while s.len() >= 2 && s[0].0 == s[s.len() - 1].0 {
            let (_, last) = s.pop().unwrap();
            let merged = self.reduce_exponent(s[0].0, s[0].1 + last);
            if merged == 0 {
                s.remove(0);
            } else {
                s[0].1 = merged;
            }
        }
        NormalWord { syllables: s }
    }

    pub fn element_order(&self, w: &Word) -> Result<ElementOrder> {
        let nf = self.normal_form(w)?;
        Ok(self.order_of(&nf))
    }

    pub fn order_of(&self, nf: &NormalWord) -> ElementOrder {
        let c = self.cyclically_reduce(nf);
        match c.syllables[..] {
            [] => ElementOrder::Finite(1),
            [(i, e)] => match self.factor_orders[i] {
                FactorOrder::Infinite => ElementOrder::Infinite,
                FactorOrder::Finite(q) => {
                    let q = u64::from(q);
                    ElementOrder::Finite(q / q.gcd(&e.unsigned_abs()))
                }
            },
            _ => ElementOrder::Infinite,
        }
    }

    /// The boundary word `x1 x2 … xk`.
    pub fn boundary_word(&self) -> Word {
        Word::from_syllables((1..=self.factor_count()).map(|i| crate::word::Syllable {
            generator: format!("x{i}"),
            exponent: 1,
        }))
    }

    /// Nonzero reduced exponents available for a syllable on `factor`.
    fn exponent_choices(&self, factor: usize, infinite_bound: u32) -> Vec<i64> {
        let mut v: Vec<i64> = match self.factor_orders[factor] {
            FactorOrder::Finite(q) => (1..i64::from(q))
                .map(|e| self.reduce_exponent(factor, e))
                .collect(),
            FactorOrder::Infinite => {
                let b = i64::from(infinite_bound);
                (-b..=b).filter(|&e| e != 0).collect()
            }
        };
        v.sort_unstable();
        v
    }

    /// Number of normal words with at most `max_syllables` syllables.
    pub fn count_normal_words(&self, max_syllables: usize, infinite_bound: u32) -> u128 {
        let choices: Vec<u128> = (0..self.factor_count())
            .map(|i| self.exponent_choices(i, infinite_bound).len() as u128)
            .collect();
        // ending[i] = number of words of the current length ending in factor i
        let mut ending = choices.clone();
        let mut total = 1 + ending.iter().sum::<u128>();
        for _ in 1..max_syllables {
            let sum: u128 = ending.iter().sum();
            ending = (0..choices.len())
                .map(|i| (sum - ending[i]).saturating_mul(choices[i]))
                .collect();
            total = total.saturating_add(ending.iter().sum());
        }
        if max_syllables == 0 {
            1
        } else {
            total
        }
    }

    /// All normal words of syllable length at most `config.max_syllables`
    /// commuting with `w`, in lexicographic order of their syllable lists.
    pub fn bounded_centralizer_search(
        &self,
        w: &Word,
        config: &SearchConfig,
    ) -> Result<Vec<NormalWord>> {
        let target = self.normal_form(w)?;
        let mut found = Vec::new();
        self.enumerate(config, |u| {
            if self.multiply(u, &target) == self.multiply(&target, u) {
                found.push(u.clone());
            }
        })?;
        found.sort();
        Ok(found)
    }

    /// Visits every normal word of syllable length at most
    /// `config.max_syllables`.
    pub fn enumerate(
        &self,
        config: &SearchConfig,
        mut visit: impl FnMut(&NormalWord),
    ) -> Result<()> {
        if config.max_syllables == 0 {
            return Err(Error::Precondition(
                "max_syllables_positive",
                "bound must be at least 1".into(),
            ));
        }
        let size = self.count_normal_words(config.max_syllables, config.infinite_exponent_bound);
        if size > config.cap {
            return Err(Error::EnumerationCap {
                size,
                cap: config.cap,
            });
        }
        let choices: Vec<Vec<i64>> = (0..self.factor_count())
            .map(|i| self.exponent_choices(i, config.infinite_exponent_bound))
            .collect();
        let mut current = NormalWord::default();
        self.extend(&choices, config.max_syllables, &mut current, &mut visit);
        Ok(())
    }

    fn extend(
        &self,
        choices: &[Vec<i64>],
        remaining: usize,
        current: &mut NormalWord,
        visit: &mut impl FnMut(&NormalWord),
    ) {
        visit(current);
        if remaining == 0 {
            return;
        }
        let last = current.syllables.last().map(|s| s.0);
        for (i, exps) in choices.iter().enumerate() {
            if Some(i) == last {
                continue;
            }
            for &e in exps {
                current.syllables.push((i, e));
                self.extend(choices, remaining - 1, current, visit);
                current.syllables.pop();
            }
        }
    }
}

/// Limits for [`FreeProductContext::bounded_centralizer_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_syllables: usize,
    /// Refuse enumerations larger than this.
    pub cap: u128,
    /// Exponents on infinite cyclic factors range over `±1..=±bound`.
    pub infinite_exponent_bound: u32,
}

impl SearchConfig {
    pub const DEFAULT_CAP: u128 = 10_000_000;

    pub fn with_bound(max_syllables: usize) -> Self {
        SearchConfig {
            max_syllables,
            cap: Self::DEFAULT_CAP,
            infinite_exponent_bound: 2,
        }
    }
}

/// Normal words of length at most the bound commuting with every generator
/// `x1, …, xk`; only the identity for a free product of at least two
/// nontrivial finite cyclic groups.
pub fn central_candidates(
    ctx: &FreeProductContext,
    config: &SearchConfig,
) -> Result<Vec<NormalWord>> {
    let mut result: Option<Vec<NormalWord>> = None;
    for i in 1..=ctx.factor_count() {
        let c = ctx.bounded_centralizer_search(&Word::generator(&format!("x{i}")), config)?;
        result = Some(match result {
            None => c,
            Some(prev) => prev
                .into_iter()
                .filter(|u| c.binary_search(u).is_ok())
                .collect(),
        });
    }
    Ok(result.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let ctx = FreeProductContext::finite(&[2, 3]).unwrap();
        assert_eq!(ctx.normal_form(&w("x1^3")).unwrap().syllables, vec![(0, 1)]);
        assert!(ctx.normal_form(&w("x1 x2 x2^2 x1")).unwrap().is_identity());
        let ctx = FreeProductContext::finite(&[5]).unwrap();
        assert!(ctx.normal_form(&w("x1^5")).unwrap().is_identity());
        assert!(ctx.normal_form(&w("x2")).is_err());
    }

    #[test]
    fn residues() {
        let ctx = FreeProductContext::finite(&[4, 6, 2, 3]).unwrap();
        assert_eq!(ctx.reduce_exponent(0, 2), 2);
        assert_eq!(ctx.reduce_exponent(0, -2), 2);
        assert_eq!(ctx.reduce_exponent(1, 3), 3);
        assert_eq!(ctx.reduce_exponent(2, 2), 0);
        assert_eq!(ctx.reduce_exponent(3, 2), -1);
        assert_eq!(ctx.reduce_exponent(1, 5), -1);
    }

    #[test]
    fn orders() {
        let ctx = FreeProductContext::finite(&[2, 3, 5]).unwrap();
        assert_eq!(
            ctx.element_order(&ctx.boundary_word()).unwrap(),
            ElementOrder::Infinite
        );
        let ctx = FreeProductContext::finite(&[6]).unwrap();
        assert_eq!(
            ctx.element_order(&w("x1^2")).unwrap(),
            ElementOrder::Finite(3)
        );
        let ctx = FreeProductContext::finite(&[2, 2]).unwrap();
        assert_eq!(
            ctx.element_order(&w("x1 x2 x1")).unwrap(),
            ElementOrder::Finite(2)
        );
        assert_eq!(ctx.element_order(&w("")).unwrap(), ElementOrder::Finite(1));
        let ctx = FreeProductContext::new(vec![FactorOrder::Infinite]).unwrap();
        assert_eq!(
            ctx.element_order(&w("x1^3")).unwrap(),
            ElementOrder::Infinite
        );
    }

    #[test]
    fn centralizer_examples() {
        let ctx = FreeProductContext::finite(&[2, 3]).unwrap();
        let c = ctx
            .bounded_centralizer_search(&w("x1"), &SearchConfig::with_bound(6))
            .unwrap();
        assert_eq!(
            c,
            vec![
                NormalWord::default(),
                NormalWord {
                    syllables: vec![(0, 1)]
                }
            ]
        );

        let all = ctx
            .bounded_centralizer_search(&w(""), &SearchConfig::with_bound(2))
            .unwrap();
        // 1 + (1 + 2) + (1*2 + 2*1)
        assert_eq!(all.len(), 8);
        assert_eq!(all.len() as u128, ctx.count_normal_words(2, 2));
    }

    #[test]
    fn counting_matches_enumeration() {
        let ctx = FreeProductContext::new(vec![
            FactorOrder::Finite(3),
            FactorOrder::Infinite,
            FactorOrder::Finite(4),
        ])
        .unwrap();
        let config = SearchConfig::with_bound(4);
        let mut n = 0u128;
        ctx.enumerate(&config, |_| n += 1).unwrap();
        assert_eq!(n, ctx.count_normal_words(4, 2));
    }

    #[test]
    fn cap_is_enforced() {
        let ctx = FreeProductContext::finite(&[5, 5, 5, 5]).unwrap();
        let config = SearchConfig {
            max_syllables: 8,
            cap: 1000,
            infinite_exponent_bound: 2,
        };
        assert!(matches!(
            ctx.bounded_centralizer_search(&w("x1"), &config),
            Err(Error::EnumerationCap { .. })
        ));
        assert!(ctx
            .bounded_centralizer_search(&w("x1"), &SearchConfig::with_bound(0))
            .is_err());
    }

    #[test]
    fn json_context() {
        let ctx: FreeProductContext =
            serde_json::from_str(r#"{"factor_orders":[2,"inf",3]}"#).unwrap();
        assert_eq!(ctx.factor_orders[1], FactorOrder::Infinite);
        assert!(serde_json::from_str::<FreeProductContext>(r#"{"factor_orders":[1]}"#).is_err());
        assert!(serde_json::from_str::<FreeProductContext>(r#"{"factor_orders":[]}"#).is_err());
    }

    fn arb_case() -> impl Strategy<Value = (Vec<u32>, Word, Word)> {
        prop::collection::vec(2u32..=5, 1..=4).prop_flat_map(|orders| {
            let k = orders.len();
            let word = prop::collection::vec((1..=k, -6i64..=6), 0..8).prop_map(|pairs| {
                Word::from_syllables(pairs.into_iter().filter(|&(_, e)| e != 0).map(|(i, e)| {
                    crate::word::Syllable {
                        generator: format!("x{i}"),
                        exponent: e,
                    }
                }))
            });
            (Just(orders), word.clone(), word)
        })
    }

    /// Smallest k ≤ 60 with u^k = 1, by repeated multiplication.
    fn order_by_powers(ctx: &FreeProductContext, u: &NormalWord) -> ElementOrder {
        let mut acc = u.clone();
        for k in 1..=60u64 {
            if acc.is_identity() {
                return ElementOrder::Finite(k);
            }
            acc = ctx.multiply(&acc, u);
        }
        ElementOrder::Infinite
    }

    proptest! {
        #[test]
        fn normal_form_is_a_homomorphism((orders, a, b) in arb_case()) {
            let ctx = FreeProductContext::finite(&orders).unwrap();
            let joined = ctx.normal_form(&a.mul(&b)).unwrap();
            let product = ctx.multiply(&ctx.normal_form(&a).unwrap(), &ctx.normal_form(&b).unwrap());
            prop_assert_eq!(&joined, &product);
            let inv = ctx.inverse(&ctx.normal_form(&a).unwrap());
            prop_assert!(ctx.multiply(&ctx.normal_form(&a).unwrap(), &inv).is_identity());
            prop_assert_eq!(ctx.normal_form(&joined.to_word()).unwrap(), joined);
        }

        #[test]
        fn order_agrees_with_repeated_multiplication((orders, a, _b) in arb_case()) {
            let ctx = FreeProductContext::finite(&orders).unwrap();
            let u = ctx.normal_form(&a).unwrap();
            prop_assert_eq!(ctx.order_of(&u), order_by_powers(&ctx, &u));
        }

        #[test]
        fn order_is_conjugation_invariant((orders, a, b) in arb_case()) {
            let ctx = FreeProductContext::finite(&orders).unwrap();
            let conj = b.mul(&a).mul(&b.inverse());
            prop_assert_eq!(ctx.element_order(&a).unwrap(), ctx.element_order(&conj).unwrap());
        }
    }
}
