//! Proof traces: ordered inference steps that a verifier can replay.
//!
//! Every step names a [`Rule`], lists its input propositions and states a
//! conclusion. An input must either be the conclusion of an earlier step or
//! a *recorded fact*: a proposition about concrete data (a spec, a
//! presentation, an embedding) that [`verify_fact`] re-establishes from
//! scratch. Replaying a trace re-checks every fact and re-applies every rule.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::symmetric_center_size;
use crate::center::{amalgam_splitting, maximal_root};
use crate::free_product::{ElementOrder, FreeProductContext};
use crate::orbifold::{
    classify, hypothesis_failure, is_nice, remove_regular_points, OrbifoldSpec,
    SuborbifoldEmbedding, SurfaceKind,
};
use crate::presentation::{
    abelianization, is_cyclic, stored_presentation, AbelianInvariants, Presentation,
    StoredPresentation,
};
use crate::word::Word;

/// A group appearing in a proof. Braid groups on one string are normalized to
/// the orbifold fundamental group `PureBraid { n: 1 }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Group {
    PureBraid {
        base: OrbifoldSpec,
        n: u32,
    },
    Braid {
        base: OrbifoldSpec,
        n: u32,
    },
    Symmetric {
        n: u32,
    },
    /// Free product of finite cyclic groups of the given orders.
    FreeProduct {
        factor_orders: Vec<u32>,
    },
    Free {
        rank: u32,
    },
    InfiniteCyclic,
    /// A piece of a splitting that is only described, never computed with.
    Piece {
        description: String,
    },
}

impl Group {
    pub fn orbifold(spec: &OrbifoldSpec) -> Group {
        Group::PureBraid {
            base: spec.clone(),
            n: 1,
        }
    }

    pub fn pure_braid(spec: &OrbifoldSpec, n: u32) -> Group {
        Group::PureBraid {
            base: spec.clone(),
            n,
        }
    }

    pub fn braid(spec: &OrbifoldSpec, n: u32) -> Group {
        if n == 1 {
            Group::orbifold(spec)
        } else {
            Group::Braid {
                base: spec.clone(),
                n,
            }
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::PureBraid { base, n: 1 } => write!(f, "pi1orb({base})"),
            Group::PureBraid { base, n } => write!(f, "PB_{n}({base})"),
            Group::Braid { base, n } => write!(f, "B_{n}({base})"),
            Group::Symmetric { n } => write!(f, "S_{n}"),
            Group::FreeProduct { factor_orders } => {
                let parts: Vec<String> = factor_orders.iter().map(|q| format!("Z_{q}")).collect();
                if parts.is_empty() {
                    f.write_str("1")
                } else {
                    f.write_str(&parts.join(" * "))
                }
            }
            Group::Free { rank } => write!(f, "F_{rank}"),
            Group::InfiniteCyclic => f.write_str("Z"),
            Group::Piece { description } => write!(f, "[{description}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Proposition {
    CenterTrivial {
        group: Group,
    },
    CenterNontrivial {
        group: Group,
    },
    WholeGroupIsCenter {
        group: Group,
    },
    Injective {
        source: Group,
        target: Group,
    },
    TheoremInapplicable {
        reason: String,
    },
    Note {
        text: String,
    },

    // Recorded facts, checked by `verify_fact`.
    Hypotheses {
        spec: OrbifoldSpec,
        holds: bool,
    },
    UnderlyingSurface {
        spec: OrbifoldSpec,
        surface: SurfaceKind,
    },
    CyclicFreeProduct {
        group: Group,
        factor_orders: Vec<u32>,
    },
    NontrivialGroup {
        group: Group,
    },
    AmalgamSplitting {
        group: Group,
        left: Group,
        right: Group,
        over: Group,
    },
    ExactSequence {
        kernel: Group,
        middle: Group,
        quotient: Group,
    },
    OneRelatorPresentation {
        group: Group,
        presentation: Presentation,
    },
    ProperPower {
        relator: Word,
        root: Word,
        exponent: u32,
    },
    Abelianization {
        presentation: Presentation,
        invariants: AbelianInvariants,
    },
    Niceness {
        embedding: SuborbifoldEmbedding,
        nice: bool,
    },
    BoundaryWordOrder {
        factor_orders: Vec<u32>,
        order: ElementOrder,
    },
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Proposition::*;
        match self {
            CenterTrivial { group } => write!(f, "Z({group}) = 1"),
            CenterNontrivial { group } => write!(f, "Z({group}) != 1"),
            WholeGroupIsCenter { group } => write!(f, "Z({group}) = {group}"),
            Injective { source, target } => write!(f, "{source} -> {target} is injective"),
            TheoremInapplicable { reason } => write!(f, "hypotheses fail: {reason}"),
            Note { text } => f.write_str(text),
            Hypotheses { spec, holds } => write!(
                f,
                "center hypotheses {} for {spec}",
                if *holds { "hold" } else { "fail" }
            ),
            UnderlyingSurface { spec, surface } => {
                write!(f, "underlying surface of {spec} is {surface:?}")
            }
            CyclicFreeProduct {
                group,
                factor_orders,
            } => {
                write!(
                    f,
                    "{group} = {}",
                    Group::FreeProduct {
                        factor_orders: factor_orders.clone()
                    }
                )
            }
            NontrivialGroup { group } => write!(f, "{group} != 1"),
            AmalgamSplitting {
                group,
                left,
                right,
                over,
            } => write!(f, "{group} = {left} *_{over} {right}"),
            ExactSequence {
                kernel,
                middle,
                quotient,
            } => write!(f, "1 -> {kernel} -> {middle} -> {quotient} -> 1"),
            OneRelatorPresentation {
                group,
                presentation,
            } => write!(f, "{group} = {presentation}"),
            ProperPower {
                relator,
                root,
                exponent,
            } => write!(f, "{relator} = ({root})^{exponent}"),
            Abelianization {
                presentation,
                invariants,
            } => write!(f, "abelianization of {presentation} is {invariants}"),
            Niceness { embedding, nice } => write!(
                f,
                "{} is {}nice in {}",
                embedding.sub,
                if *nice { "" } else { "not " },
                embedding.ambient
            ),
            BoundaryWordOrder {
                factor_orders,
                order,
            } => {
                write!(
                    f,
                    "x1...x{} has order {order} in {}",
                    factor_orders.len(),
                    Group::FreeProduct {
                        factor_orders: factor_orders.clone()
                    }
                )
            }
        }
    }
}

/// Inference rules. The serialized names are a stable public contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    FreeProductOfCyclics,
    AmalgamRule,
    ExtensionRule,
    OneRelatorTorsion,
    SimpleSurfaceTable,
    HypothesisFailure,
    LiteratureCitation,
    BruteForceCenter,
    SubOrbifoldInjectivity,
    PunctureNiceness,
    DiagramChase,
    ProjectionFactor,
    SymmetricInclusion,
    Annotation,
}

impl Rule {
    pub fn anchor(self) -> &'static str {
        match self {
            Rule::FreeProductOfCyclics => "free-product-of-cyclics",
            Rule::AmalgamRule => "amalgam-center-lemma",
            Rule::ExtensionRule => "extension-center-lemma",
            Rule::OneRelatorTorsion => "one-relator-torsion-theorem",
            Rule::SimpleSurfaceTable => "simple-surface-definition",
            Rule::HypothesisFailure => "center-and-niceness-hypotheses",
            Rule::LiteratureCitation => "literature",
            Rule::BruteForceCenter => "symmetric-group-enumeration",
            Rule::SubOrbifoldInjectivity => "suborbifold-pi1-injectivity",
            Rule::PunctureNiceness => "niceness-under-puncturing",
            Rule::DiagramChase => "exact-sequence-diagram-chase",
            Rule::ProjectionFactor => "projection-to-first-coordinates",
            Rule::SymmetricInclusion => "symmetric-group-inclusion",
            Rule::Annotation => "annotation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    pub anchor: String,
    pub inputs: Vec<Proposition>,
    pub conclusion: Proposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProofTrace {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step} ({rule:?}): {message}")]
pub struct ReplayError {
    pub step: usize,
    pub rule: Rule,
    pub message: String,
}

impl ProofTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        rule: Rule,
        inputs: Vec<Proposition>,
        conclusion: Proposition,
    ) -> &Proposition {
        self.steps.push(Step {
            rule,
            anchor: rule.anchor().to_string(),
            inputs,
            conclusion,
        });
        &self.steps.last().unwrap().conclusion
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.push(
            Rule::Annotation,
            vec![],
            Proposition::Note { text: text.into() },
        );
    }

    pub fn append(&mut self, other: &ProofTrace) {
        self.steps.extend(other.steps.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn concludes(&self, p: &Proposition) -> bool {
        self.steps.iter().any(|s| &s.conclusion == p)
    }

    pub fn count(&self, rule: Rule) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }

    /// Re-checks every step: inputs must be earlier conclusions or verified
    /// facts, and the rule applied to the inputs must yield the conclusion.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let mut known: HashSet<&Proposition> = HashSet::new();
        for (i, step) in self.steps.iter().enumerate() {
            let fail = |message: String| ReplayError {
                step: i,
                rule: step.rule,
                message,
            };
            if step.anchor != step.rule.anchor() {
                return Err(fail(format!(
                    "anchor `{}` does not belong to the rule",
                    step.anchor
                )));
            }
            for input in &step.inputs {
                if known.contains(input) {
                    continue;
                }
                match verify_fact(input) {
                    Some(true) => {
                        known.insert(input);
                    }
                    Some(false) => return Err(fail(format!("recorded fact is false: {input}"))),
                    None => return Err(fail(format!("unreferenced input: {input}"))),
                }
            }
            check_rule(step.rule, &step.inputs, &step.conclusion).map_err(fail)?;
            known.insert(&step.conclusion);
        }
        Ok(())
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3}. [{:?}] {}", i + 1, s.rule, s.conclusion)?;
            for input in &s.inputs {
                writeln!(f, "       from: {input}")?;
            }
        }
        Ok(())
    }
}

/// Which axiomatic exact sequence a triple instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceFamily {
    /// `1 → PB_{n−r}(M − r points) → PB_n(M) → PB_r(M) → 1`
    ForgetStrings { r: u32 },
    /// `1 → PB_n(M) → B_n(M) → S_n → 1`
    Permutation,
}

pub fn sequence_family(kernel: &Group, middle: &Group, quotient: &Group) -> Option<SequenceFamily> {
    match (kernel, middle, quotient) {
        (
            Group::PureBraid { base: kb, n: kn },
            Group::PureBraid { base, n },
            Group::Symmetric { n: sn },
        ) if *n == 1 && *kn == 1 && *sn == 1 && kb == base && classify(base).is_supported() => {
            Some(SequenceFamily::Permutation)
        }
        (
            Group::PureBraid { base: kb, n: kn },
            Group::Braid { base, n },
            Group::Symmetric { n: sn },
        ) if *n >= 2 && kn == n && sn == n && kb == base && classify(base).is_supported() => {
            Some(SequenceFamily::Permutation)
        }
        (
            Group::PureBraid { base: kb, n: kn },
            Group::PureBraid { base, n },
            Group::PureBraid { base: qb, n: r },
        ) if qb == base
            && *r >= 1
            && r < n
            && *kn == n - r
            && classify(base).is_supported()
            && remove_regular_points(base, *r).ok().as_ref() == Some(kb) =>
        {
            Some(SequenceFamily::ForgetStrings { r: *r })
        }
        _ => None,
    }
}

/// Human-readable reason attached to a failed niceness check.
pub fn niceness_failure_reason(embedding: &SuborbifoldEmbedding) -> String {
    let report = is_nice(embedding);
    let parts: Vec<String> = report
        .violations
        .iter()
        .map(|v| format!("complement component {} violates {:?}", v.component, v.kind))
        .collect();
    format!("sub-orbifold is not nice: {}", parts.join("; "))
}

/// Re-establishes a recorded fact. Returns `None` for propositions that can
/// only be obtained as conclusions.
pub fn verify_fact(p: &Proposition) -> Option<bool> {
    use Proposition::*;
    let ok = match p {
        Hypotheses { spec, holds } => {
            classify(spec).is_supported() && (hypothesis_failure(spec).is_none()) == *holds
        }
        UnderlyingSurface { spec, surface } => spec.surface_kind() == *surface,
        CyclicFreeProduct {
            group,
            factor_orders,
        } => match group {
            Group::FreeProduct { factor_orders: f } => f == factor_orders,
            Group::PureBraid { base, n: 1 } => {
                base.surface_kind() == SurfaceKind::Disc && &base.cone_orders == factor_orders
            }
            _ => false,
        },
        NontrivialGroup { group } => match group {
            Group::FreeProduct { factor_orders } => !factor_orders.is_empty(),
            Group::Free { rank } => *rank >= 1,
            Group::InfiniteCyclic => true,
            Group::Symmetric { n } => *n >= 2,
            _ => false,
        },
        AmalgamSplitting {
            group,
            left,
            right,
            over,
        } => match group {
            Group::PureBraid { base, n: 1 } => amalgam_splitting(base)
                .is_some_and(|s| &s.left == left && &s.right == right && &s.over == over),
            _ => false,
        },
        ExactSequence {
            kernel,
            middle,
            quotient,
        } => sequence_family(kernel, middle, quotient).is_some(),
        OneRelatorPresentation {
            group,
            presentation,
        } => match group {
            Group::PureBraid { base, n: 1 } => StoredPresentation::for_spec(base)
                .and_then(|(kind, q)| stored_presentation(kind, q).ok())
                .is_some_and(|p| &p == presentation),
            _ => false,
        },
        ProperPower {
            relator,
            root,
            exponent,
        } => {
            let (r, e) = maximal_root(relator);
            &r == root && e == *exponent
        }
        Abelianization {
            presentation,
            invariants,
        } => &abelianization(presentation) == invariants,
        Niceness { embedding, nice } => is_nice(embedding).nice == *nice,
        BoundaryWordOrder {
            factor_orders,
            order,
        } => {
            FreeProductContext::finite(factor_orders)
                .ok()
                .and_then(|ctx| ctx.element_order(&ctx.boundary_word()).ok())
                == Some(*order)
        }
        CenterTrivial { .. }
        | CenterNontrivial { .. }
        | WholeGroupIsCenter { .. }
        | Injective { .. }
        | TheoremInapplicable { .. }
        | Note { .. } => return None,
    };
    Some(ok)
}

/// Conclusions the literature supplies without proof in this library.
fn is_literature_fact(p: &Proposition) -> bool {
    match p {
        Proposition::CenterTrivial {
            group: Group::Free { rank },
        } => *rank >= 2,
        Proposition::CenterTrivial {
            group: Group::Symmetric { n },
        } => *n >= 3,
        // The full twist generates an infinite cyclic center for braid
        // groups of the disc and the plane.
        Proposition::CenterNontrivial {
            group: Group::Braid { base, n } | Group::PureBraid { base, n },
        } => *n >= 2 && base.is_smooth() && base.surface_kind() == SurfaceKind::Disc,
        _ => false,
    }
}

fn check_rule(rule: Rule, inputs: &[Proposition], conclusion: &Proposition) -> Result<(), String> {
    use Proposition as P;
    let mismatch = || {
        Err(format!(
            "{rule:?} does not yield `{conclusion}` from the given inputs"
        ))
    };
    match rule {
        Rule::FreeProductOfCyclics => match inputs {
            [P::CyclicFreeProduct {
                group,
                factor_orders,
            }] => {
                let expected = if factor_orders.len() == 1 {
                    P::WholeGroupIsCenter {
                        group: group.clone(),
                    }
                } else {
                    P::CenterTrivial {
                        group: group.clone(),
                    }
                };
                if &expected == conclusion {
                    Ok(())
                } else {
                    mismatch()
                }
            }
            _ => mismatch(),
        },
        Rule::SimpleSurfaceTable => match (inputs, conclusion) {
            ([P::UnderlyingSurface { spec, surface }], P::CenterNontrivial { group })
                if surface.is_simple() && spec.is_smooth() && *group == Group::orbifold(spec) =>
            {
                Ok(())
            }
            _ => mismatch(),
        },
        Rule::AmalgamRule => match (inputs, conclusion) {
            (
                [P::AmalgamSplitting {
                    group, left, right, ..
                }, P::CenterTrivial { group: a }, P::NontrivialGroup { group: b }],
                P::CenterTrivial { group: c },
            ) if a == b && (a == left || a == right) && c == group => Ok(()),
            _ => mismatch(),
        },
        Rule::ExtensionRule => match (inputs, conclusion) {
            (
                [P::ExactSequence {
                    kernel,
                    middle,
                    quotient,
                }, P::CenterTrivial { group: k }, P::CenterTrivial { group: h }],
                P::CenterTrivial { group: g },
            ) if k == kernel && h == quotient && g == middle => Ok(()),
            _ => mismatch(),
        },
        Rule::OneRelatorTorsion => match (inputs, conclusion) {
            (
                [P::OneRelatorPresentation {
                    group,
                    presentation,
                }, P::ProperPower {
                    relator, exponent, ..
                }, P::Abelianization {
                    presentation: p2,
                    invariants,
                }],
                P::CenterTrivial { group: g },
            ) if presentation.relators().len() == 1
                && &presentation.relators()[0] == relator
                && *exponent >= 2
                && p2 == presentation
                && !is_cyclic(invariants)
                && g == group =>
            {
                Ok(())
            }
            _ => mismatch(),
        },
        Rule::HypothesisFailure => match (inputs, conclusion) {
            ([P::Hypotheses { spec, holds: false }], P::TheoremInapplicable { reason }) => {
                if hypothesis_failure(spec) == Some(reason.as_str()) {
                    Ok(())
                } else {
                    mismatch()
                }
            }
            (
                [P::Niceness {
                    embedding,
                    nice: false,
                }],
                P::TheoremInapplicable { reason },
            ) => {
                if &niceness_failure_reason(embedding) == reason {
                    Ok(())
                } else {
                    mismatch()
                }
            }
            _ => mismatch(),
        },
        Rule::LiteratureCitation => {
            if inputs.is_empty() && is_literature_fact(conclusion) {
                Ok(())
            } else {
                mismatch()
            }
        }
        Rule::BruteForceCenter => match (inputs, conclusion) {
            (
                [],
                P::CenterTrivial {
                    group: Group::Symmetric { n },
                },
            ) if (1..=8).contains(n) => {
                if symmetric_center_size(*n) == 1 {
                    Ok(())
                } else {
                    mismatch()
                }
            }
            (
                [],
                P::CenterNontrivial {
                    group: Group::Symmetric { n },
                },
            ) if (1..=8).contains(n) => {
                if symmetric_center_size(*n) > 1 {
                    Ok(())
                } else {
                    mismatch()
                }
            }
            _ => mismatch(),
        },
        Rule::SubOrbifoldInjectivity => {
            let P::Injective { source, target } = conclusion else {
                return mismatch();
            };
            let (embedding, rest) = match inputs {
                [P::Niceness {
                    embedding,
                    nice: true,
                }, rest @ ..] => (embedding, rest),
                _ => return mismatch(),
            };
            let sub = &embedding.sub;
            let needs_boundary_order =
                sub.surface_kind() == SurfaceKind::Disc && sub.cone_count() >= 2;
            let rest_ok = if needs_boundary_order {
                matches!(rest, [P::BoundaryWordOrder { factor_orders, order: ElementOrder::Infinite }] if factor_orders == &sub.cone_orders)
            } else {
                rest.is_empty()
            };
            if rest_ok
                && *source == Group::orbifold(sub)
                && *target == Group::orbifold(&embedding.ambient)
            {
                Ok(())
            } else {
                mismatch()
            }
        }
        Rule::PunctureNiceness => match (inputs, conclusion) {
            (
                [P::Niceness {
                    embedding,
                    nice: true,
                }],
                P::Niceness {
                    embedding: e2,
                    nice: true,
                },
            ) if &embedding.punctured() == e2 => Ok(()),
            _ => mismatch(),
        },
        Rule::DiagramChase => match (inputs, conclusion) {
            (
                [P::ExactSequence {
                    kernel: k1,
                    middle: g1,
                    quotient: h1,
                }, P::ExactSequence {
                    kernel: k2,
                    middle: g2,
                    quotient: h2,
                }, P::Injective {
                    source: ks,
                    target: kt,
                }, P::Injective {
                    source: hs,
                    target: ht,
                }],
                P::Injective { source, target },
            ) => {
                let f1 = sequence_family(k1, g1, h1);
                let f2 = sequence_family(k2, g2, h2);
                let same_family = match (f1, f2) {
                    (
                        Some(SequenceFamily::ForgetStrings { r: a }),
                        Some(SequenceFamily::ForgetStrings { r: b }),
                    ) => a == b && braid_strings(g1) == braid_strings(g2),
                    (Some(SequenceFamily::Permutation), Some(SequenceFamily::Permutation)) => true,
                    _ => false,
                };
                if same_family
                    && ks == k1
                    && kt == k2
                    && hs == h1
                    && ht == h2
                    && source == g1
                    && target == g2
                {
                    Ok(())
                } else {
                    mismatch()
                }
            }
            _ => mismatch(),
        },
        Rule::ProjectionFactor => match (inputs, conclusion) {
            (
                [P::Injective {
                    source: Group::PureBraid { base: sb, n: sn },
                    target: Group::PureBraid { base: tb, n: tn },
                }],
                P::Injective {
                    source: Group::PureBraid { base: cb, n: cn },
                    target: Group::PureBraid { base: db, n: m },
                },
            ) if sn == tn && cn == sn && cb == sb && db == tb && m > sn => Ok(()),
            _ => mismatch(),
        },
        Rule::SymmetricInclusion => match (inputs, conclusion) {
            (
                [],
                P::Injective {
                    source: Group::Symmetric { n },
                    target: Group::Symmetric { n: m },
                },
            ) if n <= m => Ok(()),
            _ => mismatch(),
        },
        Rule::Annotation => match (inputs, conclusion) {
            ([], P::Note { .. }) => Ok(()),
            _ => mismatch(),
        },
    }
}

fn braid_strings(g: &Group) -> Option<u32> {
    match g {
        Group::PureBraid { n, .. } | Group::Braid { n, .. } => Some(*n),
        _ => None,
    }
}
