//! Center of the orbifold fundamental group for orbifolds in C0 ∪ C1.
//!
//! [`center_pi1`] follows the case analysis on the underlying surface and the
//! number of cone points, and records each inference as a trace step. The
//! amalgam, extension and one-relator rules are also exposed on their own.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbifold::{hypothesis_failure, require_supported, OrbifoldSpec, SurfaceKind};
use crate::presentation::{
    abelianization, is_cyclic, pi1_orb, stored_presentation, Presentation, StoredPresentation,
};
use crate::trace::{sequence_family, Group, ProofTrace, Proposition, Rule};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CenterStatus {
    Trivial,
    Nontrivial,
    WholeGroupIsCenter,
    /// The theory leaves the center undetermined (two-string braid groups).
    #[serde(rename = "UnknownPerPaper")]
    Undetermined,
    /// Outside the theorem; the answer is known from other sources.
    #[serde(rename = "OutOfScopeSeeLiterature")]
    OutOfScope,
}

impl CenterStatus {
    /// Statuses that are honest non-answers rather than decisions.
    pub fn is_open(self) -> bool {
        matches!(self, CenterStatus::Undetermined | CenterStatus::OutOfScope)
    }
}

impl fmt::Display for CenterStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CenterStatus::Trivial => "Trivial",
            CenterStatus::Nontrivial => "Nontrivial",
            CenterStatus::WholeGroupIsCenter => "WholeGroupIsCenter",
            CenterStatus::Undetermined => "UnknownPerPaper",
            CenterStatus::OutOfScope => "OutOfScopeSeeLiterature",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterVerdict {
    pub group: Group,
    pub status: CenterStatus,
    pub trace: ProofTrace,
}

impl CenterVerdict {
    /// The proposition a decided status must be backed by.
    pub fn claim(&self) -> Option<Proposition> {
        let group = self.group.clone();
        match self.status {
            CenterStatus::Trivial => Some(Proposition::CenterTrivial { group }),
            CenterStatus::Nontrivial => Some(Proposition::CenterNontrivial { group }),
            CenterStatus::WholeGroupIsCenter => Some(Proposition::WholeGroupIsCenter { group }),
            CenterStatus::Undetermined | CenterStatus::OutOfScope => None,
        }
    }

    /// Replays the trace and checks that it concludes the claimed status.
    pub fn verify(&self) -> std::result::Result<(), String> {
        self.trace.replay().map_err(|e| e.to_string())?;
        match self.claim() {
            Some(claim) if !self.trace.concludes(&claim) => {
                Err(format!("trace never concludes `{claim}`"))
            }
            _ => Ok(()),
        }
    }
}

/// A splitting `group = left *_over right` used by the amalgam rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub left: Group,
    pub right: Group,
    pub over: Group,
}

impl Splitting {
    pub fn proposition(&self, spec: &OrbifoldSpec) -> Proposition {
        Proposition::AmalgamSplitting {
            group: Group::orbifold(spec),
            left: self.left.clone(),
            right: self.right.clone(),
            over: self.over.clone(),
        }
    }
}

/// Splitting of the orbifold fundamental group along a separating circle.
///
/// - Simple underlying surface with at least two cone points: cut along the
///   boundary of a disc containing all cone points. The disc side is a free
///   product of the cone groups, the other side is the smooth surface with
///   one more boundary circle, amalgamated over `Z`.
/// - Underlying surface neither simple nor simply connected: cut off a
///   smooth genus-one piece with one boundary circle (a pair of pants in
///   genus zero), whose group is free of rank two, amalgamated over `Z` with
///   the remainder carrying every cone point.
pub fn amalgam_splitting(spec: &OrbifoldSpec) -> Option<Splitting> {
    if require_supported(spec).is_err() {
        return None;
    }
    let kind = spec.surface_kind();
    if kind.is_simple() && spec.cone_count() >= 2 {
        let mut rest = spec.underlying();
        rest.boundary += 1;
        Some(Splitting {
            left: Group::FreeProduct {
                factor_orders: spec.cone_orders.clone(),
            },
            right: Group::orbifold(&rest),
            over: Group::InfiniteCyclic,
        })
    } else if kind == SurfaceKind::Large {
        Some(Splitting {
            left: Group::Free { rank: 2 },
            right: Group::Piece {
                description: "remainder containing all cone points".into(),
            },
            over: Group::InfiniteCyclic,
        })
    } else {
        None
    }
}

/// Maximal root of a relator: `(root, q)` with the cyclically reduced
/// relator equal to `root^q` and `q` as large as possible.
pub fn maximal_root(relator: &Word) -> (Word, u32) {
    let reduced = relator.cyclically_reduced();
    let n = reduced.len();
    if n == 0 {
        return (reduced, 1);
    }
    // The smallest period p dividing n with rotate(p) == word.
    for p in 1..=n {
        if n.is_multiple_of(p) && reduced.rotate_letters(p) == reduced {
            let root = first_letters(&reduced, p);
            return (root, (n / p) as u32);
        }
    }
    unreachable!("the full length is always a period")
}

fn first_letters(w: &Word, k: usize) -> Word {
    let mut out = Vec::new();
    let mut left = k;
    for s in w.syllables() {
        if left == 0 {
            break;
        }
        let take = (s.exponent.unsigned_abs() as usize).min(left);
        out.push(crate::word::Syllable {
            generator: s.generator.clone(),
            exponent: s.exponent.signum() * take as i64,
        });
        left -= take;
    }
    Word::from_syllables(out)
}

/// Outcome of applying one inference rule outside a full decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleConclusion {
    pub fires: bool,
    pub justification: String,
}

/// The amalgam rule: an amalgamated product in which one factor is a
/// nontrivial group with trivial center has trivial center, since
/// `Z(G1 *_H G2) = Z(G1) ∩ Z(G2) ∩ H`.
pub fn amalgam_center_rule(factor_center_trivial: bool, factor_nontrivial: bool) -> RuleConclusion {
    let fires = factor_center_trivial && factor_nontrivial;
    RuleConclusion {
        fires,
        justification: if fires {
            "Z(G) = Z(G1) ∩ Z(G2) ∩ H, and Z(G1) = 1".into()
        } else {
            "needs a nontrivial factor with trivial center".into()
        },
    }
}

/// The extension rule: for `1 → K → G → H → 1`, trivial centers of `K` and
/// `H` force a trivial center of `G`. Returns `None` when the rule does not
/// apply; the converse is never claimed.
pub fn extension_center_rule(
    middle: &Group,
    kernel: &CenterVerdict,
    quotient: &CenterVerdict,
) -> Result<Option<CenterVerdict>> {
    if sequence_family(&kernel.group, middle, &quotient.group).is_none() {
        return Err(Error::Precondition(
            "exact_sequence_axiom",
            format!(
                "1 -> {} -> {middle} -> {} -> 1 is not a recorded exact sequence",
                kernel.group, quotient.group
            ),
        ));
    }
    if kernel.status != CenterStatus::Trivial || quotient.status != CenterStatus::Trivial {
        return Ok(None);
    }
    let mut trace = ProofTrace::new();
    trace.append(&kernel.trace);
    trace.append(&quotient.trace);
    trace.push(
        Rule::ExtensionRule,
        vec![
            Proposition::ExactSequence {
                kernel: kernel.group.clone(),
                middle: middle.clone(),
                quotient: quotient.group.clone(),
            },
            Proposition::CenterTrivial {
                group: kernel.group.clone(),
            },
            Proposition::CenterTrivial {
                group: quotient.group.clone(),
            },
        ],
        Proposition::CenterTrivial {
            group: middle.clone(),
        },
    );
    Ok(Some(CenterVerdict {
        group: middle.clone(),
        status: CenterStatus::Trivial,
        trace,
    }))
}

/// A non-cyclic one-relator group whose relator is a proper power has
/// trivial center.
pub fn one_relator_rule(p: &Presentation) -> Result<RuleConclusion> {
    if p.relators().len() != 1 {
        return Err(Error::RelatorCount(p.relators().len()));
    }
    let (root, q) = maximal_root(&p.relators()[0]);
    let inv = abelianization(p);
    let fires = q >= 2 && !is_cyclic(&inv);
    let justification = if q < 2 {
        format!("relator is not a proper power (maximal root exponent {q})")
    } else if is_cyclic(&inv) {
        format!("abelianization {inv} is cyclic")
    } else {
        format!("relator is ({root})^{q} and the abelianization {inv} is not cyclic")
    };
    Ok(RuleConclusion {
        fires,
        justification,
    })
}

/// Decides whether the orbifold fundamental group has trivial center.
pub fn center_pi1(spec: &OrbifoldSpec) -> Result<CenterVerdict> {
    require_supported(spec)?;
    let group = Group::orbifold(spec);
    let kind = spec.surface_kind();
    let cones = spec.cone_count();
    let mut trace = ProofTrace::new();

    if let Some(reason) = hypothesis_failure(spec) {
        trace.push(
            Rule::HypothesisFailure,
            vec![Proposition::Hypotheses {
                spec: spec.clone(),
                holds: false,
            }],
            Proposition::TheoremInapplicable {
                reason: reason.to_string(),
            },
        );
        let status = if kind.is_simple() {
            trace.push(
                Rule::SimpleSurfaceTable,
                vec![Proposition::UnderlyingSurface {
                    spec: spec.clone(),
                    surface: kind,
                }],
                Proposition::CenterNontrivial {
                    group: group.clone(),
                },
            );
            CenterStatus::Nontrivial
        } else {
            // disc or plane with at most one cone point: trivial or cyclic
            let concl = trace
                .push(
                    Rule::FreeProductOfCyclics,
                    vec![Proposition::CyclicFreeProduct {
                        group: group.clone(),
                        factor_orders: spec.cone_orders.clone(),
                    }],
                    if cones == 1 {
                        Proposition::WholeGroupIsCenter {
                            group: group.clone(),
                        }
                    } else {
                        Proposition::CenterTrivial {
                            group: group.clone(),
                        }
                    },
                )
                .clone();
            match concl {
                Proposition::WholeGroupIsCenter { .. } => CenterStatus::WholeGroupIsCenter,
                _ => CenterStatus::Trivial,
            }
        };
        return Ok(CenterVerdict {
            group,
            status,
            trace,
        });
    }

    if kind == SurfaceKind::Disc {
        trace.push(
            Rule::FreeProductOfCyclics,
            vec![Proposition::CyclicFreeProduct {
                group: group.clone(),
                factor_orders: spec.cone_orders.clone(),
            }],
            Proposition::CenterTrivial {
                group: group.clone(),
            },
        );
    } else if kind.is_simple() && cones == 1 {
        one_relator_steps(spec, &mut trace)?;
    } else {
        let split = amalgam_splitting(spec).expect("hypotheses guarantee a splitting");
        let factor = split.left.clone();
        match &factor {
            Group::FreeProduct { factor_orders } => {
                trace.push(
                    Rule::FreeProductOfCyclics,
                    vec![Proposition::CyclicFreeProduct {
                        group: factor.clone(),
                        factor_orders: factor_orders.clone(),
                    }],
                    Proposition::CenterTrivial {
                        group: factor.clone(),
                    },
                );
            }
            _ => {
                trace.push(
                    Rule::LiteratureCitation,
                    vec![],
                    Proposition::CenterTrivial {
                        group: factor.clone(),
                    },
                );
            }
        }
        trace.push(
            Rule::AmalgamRule,
            vec![
                split.proposition(spec),
                Proposition::CenterTrivial {
                    group: factor.clone(),
                },
                Proposition::NontrivialGroup { group: factor },
            ],
            Proposition::CenterTrivial {
                group: group.clone(),
            },
        );
    }
    Ok(CenterVerdict {
        group,
        status: CenterStatus::Trivial,
        trace,
    })
}

fn one_relator_steps(spec: &OrbifoldSpec, trace: &mut ProofTrace) -> Result<()> {
    let group = Group::orbifold(spec);
    let (kind, q) = StoredPresentation::for_spec(spec).expect("one cone on a simple surface");
    let stored = stored_presentation(kind, q)?;
    let relator = stored.relators()[0].clone();
    let (root, exponent) = maximal_root(&relator);
    let invariants = abelianization(&stored);
    let built = abelianization(&pi1_orb(spec)?);
    if built != invariants {
        trace.note(format!(
            "the Van Kampen presentation abelianizes to {built}, the stored {kind} presentation to {invariants}; the stored presentation is used"
        ));
    }
    trace.push(
        Rule::OneRelatorTorsion,
        vec![
            Proposition::OneRelatorPresentation {
                group: group.clone(),
                presentation: stored.clone(),
            },
            Proposition::ProperPower {
                relator,
                root,
                exponent,
            },
            Proposition::Abelianization {
                presentation: stored,
                invariants,
            },
        ],
        Proposition::CenterTrivial { group },
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_product::{central_candidates, FreeProductContext, SearchConfig};
    use crate::orbifold::remove_regular_points;
    use proptest::prelude::*;

    fn spec(orientable: bool, g: u32, b: u32, p: u32, cones: &[u32]) -> OrbifoldSpec {
        OrbifoldSpec::new(orientable, g, b, p, cones.to_vec()).unwrap()
    }

    #[test]
    fn center_examples() {
        let v = center_pi1(&spec(true, 0, 1, 0, &[2, 3])).unwrap();
        assert_eq!(v.status, CenterStatus::Trivial);
        assert_eq!(
            v.trace.steps.last().unwrap().rule,
            Rule::FreeProductOfCyclics
        );
        v.verify().unwrap();

        let v = center_pi1(&spec(true, 1, 0, 0, &[3])).unwrap();
        assert_eq!(v.status, CenterStatus::Trivial);
        assert_eq!(v.trace.count(Rule::OneRelatorTorsion), 1);
        v.verify().unwrap();

        let v = center_pi1(&spec(true, 0, 1, 0, &[4])).unwrap();
        assert_eq!(v.status, CenterStatus::WholeGroupIsCenter);
        v.verify().unwrap();

        let v = center_pi1(&spec(true, 1, 0, 0, &[])).unwrap();
        assert_eq!(v.status, CenterStatus::Nontrivial);
        v.verify().unwrap();

        let v = center_pi1(&spec(true, 0, 1, 0, &[])).unwrap();
        assert_eq!(v.status, CenterStatus::Trivial);
        v.verify().unwrap();

        assert!(center_pi1(&spec(true, 0, 0, 0, &[2, 3])).is_err());
    }

    #[test]
    fn cylinder_cone_trace_carries_discrepancy_note() {
        let v = center_pi1(&spec(true, 0, 2, 0, &[5])).unwrap();
        assert_eq!(v.status, CenterStatus::Trivial);
        assert_eq!(v.trace.count(Rule::Annotation), 1);
        let v = center_pi1(&spec(true, 1, 0, 0, &[5])).unwrap();
        assert_eq!(v.trace.count(Rule::Annotation), 0);
    }

    #[test]
    fn amalgam_rule_examples() {
        assert!(amalgam_center_rule(true, true).fires);
        assert!(!amalgam_center_rule(false, true).fires);
        // Z2 * Z3: bounded search finds no nontrivial central element
        let ctx = FreeProductContext::finite(&[2, 3]).unwrap();
        let central = central_candidates(&ctx, &SearchConfig::with_bound(6)).unwrap();
        let center_trivial = central.len() == 1 && central[0].is_identity();
        assert!(amalgam_center_rule(center_trivial, true).fires);
    }

    #[test]
    fn extension_rule_examples() {
        let m = spec(true, 0, 1, 0, &[2, 3]);
        let kernel = center_pi1(&remove_regular_points(&m, 1).unwrap()).unwrap();
        let quotient = center_pi1(&m).unwrap();
        let middle = Group::pure_braid(&m, 2);
        let v = extension_center_rule(&middle, &kernel, &quotient)
            .unwrap()
            .unwrap();
        assert_eq!(v.status, CenterStatus::Trivial);
        v.verify().unwrap();

        let cyl = spec(true, 0, 2, 0, &[]);
        let nontrivial = center_pi1(&cyl).unwrap();
        let k = center_pi1(&remove_regular_points(&cyl, 1).unwrap()).unwrap();
        assert!(
            extension_center_rule(&Group::pure_braid(&cyl, 2), &k, &nontrivial)
                .unwrap()
                .is_none()
        );

        // not an exact sequence of the recorded shape
        assert!(extension_center_rule(&Group::pure_braid(&m, 3), &kernel, &quotient).is_err());
    }

    #[test]
    fn one_relator_examples() {
        let tc = stored_presentation(StoredPresentation::Tc, 2).unwrap();
        assert!(one_relator_rule(&tc).unwrap().fires);
        let a = Presentation::plain(&["a"], vec![Word::generator("a")]).unwrap();
        assert!(!one_relator_rule(&a).unwrap().fires);
        let mbc = stored_presentation(StoredPresentation::Mbc, 3).unwrap();
        assert!(one_relator_rule(&mbc).unwrap().fires);
        let two =
            Presentation::plain(&["a"], vec![Word::power("a", 2), Word::power("a", 3)]).unwrap();
        assert_eq!(one_relator_rule(&two).unwrap_err(), Error::RelatorCount(2));
        // Z_q is cyclic
        let cyc = Presentation::plain(&["a"], vec![Word::power("a", 4)]).unwrap();
        assert!(!one_relator_rule(&cyc).unwrap().fires);
    }

    #[test]
    fn roots() {
        let w = Word::parse("a b a b a b").unwrap();
        assert_eq!(maximal_root(&w), (Word::parse("a b").unwrap(), 3));
        let w = Word::parse("c a b a b c^-1").unwrap();
        assert_eq!(maximal_root(&w), (Word::parse("a b").unwrap(), 2));
        let w = Word::parse("a b a^2 b").unwrap();
        assert_eq!(maximal_root(&w).1, 1);
        assert_eq!(
            maximal_root(&Word::parse("a^6").unwrap()),
            (Word::parse("a").unwrap(), 6)
        );
        assert_eq!(maximal_root(&Word::identity()).1, 1);
    }

    fn letters(w: &Word) -> Vec<(String, i64)> {
        w.syllables()
            .iter()
            .flat_map(|s| {
                std::iter::repeat_n(
                    (s.generator.clone(), s.exponent.signum()),
                    s.exponent.unsigned_abs() as usize,
                )
            })
            .collect()
    }

    /// Largest d dividing the length such that the letter string is a
    /// d-fold repetition of its prefix.
    fn repetition_oracle(w: &Word) -> u32 {
        let l = letters(w);
        let n = l.len();
        (1..=n)
            .filter(|d| n.is_multiple_of(*d) && l.chunks(n / d).all(|c| c == &l[..n / d]))
            .max()
            .unwrap_or(1) as u32
    }

    proptest! {
        #[test]
        fn maximal_root_matches_repetition_oracle(
            pairs in prop::collection::vec((prop::sample::select(vec!["a", "b", "c"]), -2i64..=2), 1..5),
            q in 1i64..=4,
            k in 0usize..20,
        ) {
            let root = Word::from_syllables(pairs.into_iter().filter(|&(_, e)| e != 0).map(|(g, e)| crate::word::Syllable {
                generator: g.to_string(),
                exponent: e,
            }))
            .cyclically_reduced();
            prop_assume!(!root.is_identity());
            let w = root.pow(q).cyclically_reduced();
            let rotated = w.rotate_letters(k % w.len());
            let (r, e) = maximal_root(&rotated);
            prop_assert_eq!(e, repetition_oracle(&rotated.cyclically_reduced()));
            prop_assert_eq!(e as i64 % q, 0);
            prop_assert_eq!(r.pow(i64::from(e)), rotated.cyclically_reduced());
        }
    }
}
