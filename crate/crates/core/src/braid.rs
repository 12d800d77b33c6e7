//! Braid-level verdicts: centers of pure and full orbifold braid groups and
//! injectivity of inclusion-induced maps, unrolled as inductions over the
//! forgetful and permutation exact sequences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::center::{center_pi1, extension_center_rule, CenterStatus, CenterVerdict};
use crate::error::{Error, Result};
use crate::free_product::ElementOrder;
use crate::orbifold::{
    hypothesis_failure, is_nice, remove_regular_points, require_supported, NicenessViolation,
    OrbifoldSpec, SuborbifoldEmbedding, SurfaceKind,
};
use crate::trace::{niceness_failure_reason, Group, ProofTrace, Proposition, Rule};

/// Names a (pure) orbifold braid group on `n` strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBraidGroupId")]
pub struct BraidGroupId {
    pub base: OrbifoldSpec,
    pub n: u32,
    pub pure: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBraidGroupId {
    base: OrbifoldSpec,
    n: u32,
    pure: bool,
}

impl TryFrom<RawBraidGroupId> for BraidGroupId {
    type Error = Error;

    fn try_from(raw: RawBraidGroupId) -> Result<Self> {
        BraidGroupId::new(raw.base, raw.n, raw.pure)
    }
}

impl BraidGroupId {
    pub fn new(base: OrbifoldSpec, n: u32, pure: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition(
                "n_positive",
                "braid groups need at least one string".into(),
            ));
        }
        Ok(Self { base, n, pure })
    }

    pub fn group(&self) -> Group {
        if self.pure {
            Group::pure_braid(&self.base, self.n)
        } else {
            Group::braid(&self.base, self.n)
        }
    }
}

impl fmt::Display for BraidGroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.pure { "PB" } else { "B" };
        write!(f, "{prefix}_{}({})", self.n, self.base)
    }
}

/// A permutation of `{0, …, n−1}` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidSpec {
                    invariant: "bijective",
                    detail: format!("{images:?} is not a permutation"),
                });
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Swaps `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i, j);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degrees differ");
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// Disjoint cycles of length at least two, each starting at its
    /// smallest element, numbered from 1.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut i = self.images[start];
            while i != start {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Image of a braid word under `B_n → S_n`. Crossings are generator indices
/// `±i` with `1 ≤ i ≤ n − 1`; the sign is ignored. A strand starting at
/// position `p` ends at position `image(p)`.
pub fn permutation_of_braid(n: usize, crossings: &[i64]) -> Result<Permutation> {
    let mut p = Permutation::identity(n);
    for &c in crossings {
        let i = c.unsigned_abs() as usize;
        if i == 0 || i >= n {
            return Err(Error::CrossingOutOfRange {
                index: c,
                strings: n,
            });
        }
        p = p.then(&Permutation::transposition(n, i - 1, i));
    }
    Ok(p)
}

/// A braid word is pure when every strand returns to its starting position.
pub fn is_pure(n: usize, crossings: &[i64]) -> Result<bool> {
    Ok(permutation_of_braid(n, crossings)?.is_identity())
}

/// Rearranges `v` into the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Number of elements of `S_n` commuting with the generators `(1 2)` and
/// `(1 2 … n)`, by enumeration of the whole group.
pub fn symmetric_center_size(n: u32) -> u64 {
    let n = n as usize;
    if n <= 1 {
        return 1;
    }
    let swap = Permutation::transposition(n, 0, 1);
    let cycle = Permutation {
        images: (0..n).map(|i| (i + 1) % n).collect(),
    };
    let mut images: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        let p = Permutation {
            images: images.clone(),
        };
        if p.then(&swap) == swap.then(&p) && p.then(&cycle) == cycle.then(&p) {
            count += 1;
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    count
}

/// Largest degree for which the symmetric-group center is enumerated.
pub const BRUTE_FORCE_LIMIT: u32 = 8;

pub fn symmetric_center(n: u32) -> Result<CenterVerdict> {
    if n == 0 {
        return Err(Error::Precondition(
            "n_positive",
            "S_0 is not considered".into(),
        ));
    }
    let group = Group::Symmetric { n };
    let mut trace = ProofTrace::new();
    let status = if n <= BRUTE_FORCE_LIMIT {
        if symmetric_center_size(n) == 1 {
            trace.push(
                Rule::BruteForceCenter,
                vec![],
                Proposition::CenterTrivial {
                    group: group.clone(),
                },
            );
            CenterStatus::Trivial
        } else {
            trace.push(
                Rule::BruteForceCenter,
                vec![],
                Proposition::CenterNontrivial {
                    group: group.clone(),
                },
            );
            CenterStatus::Nontrivial
        }
    } else {
        trace.push(
            Rule::LiteratureCitation,
            vec![],
            Proposition::CenterTrivial {
                group: group.clone(),
            },
        );
        CenterStatus::Trivial
    };
    Ok(CenterVerdict {
        group,
        status,
        trace,
    })
}

fn require_strings(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition(
            "n_positive",
            "braid groups need at least one string".into(),
        ));
    }
    Ok(())
}

/// Verdict for `n ≥ 2` strings on a supported base that fails the center
/// hypotheses.
fn out_of_scope(spec: &OrbifoldSpec, group: Group, reason: &str) -> CenterVerdict {
    let mut trace = ProofTrace::new();
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
    if spec.surface_kind() == SurfaceKind::Disc && spec.is_smooth() {
        // the full twist generates an infinite cyclic center
        trace.push(
            Rule::LiteratureCitation,
            vec![],
            Proposition::CenterNontrivial {
                group: group.clone(),
            },
        );
    } else if spec.surface_kind() == SurfaceKind::Disc {
        trace.note(format!(
            "with one cone point PB_1 = B_1 = Z_{}; for more strings the center is not decided here",
            spec.cone_orders[0]
        ));
    } else {
        trace.note("braid groups of smooth simple surfaces have nontrivial center in general; not decided here");
    }
    CenterVerdict {
        group,
        status: CenterStatus::OutOfScope,
        trace,
    }
}

/// Center of the pure orbifold braid group `PB_n(M)`.
///
/// Under the center hypotheses this unrolls the induction over
/// `1 → PB_1(M − (n−1) points) → PB_n(M) → PB_{n−1}(M) → 1`.
pub fn center_pure_braid(spec: &OrbifoldSpec, n: u32) -> Result<CenterVerdict> {
    require_supported(spec)?;
    require_strings(n)?;
    let mut verdict = center_pi1(spec)?;
    if n == 1 {
        return Ok(verdict);
    }
    if let Some(reason) = hypothesis_failure(spec) {
        return Ok(out_of_scope(spec, Group::pure_braid(spec, n), reason));
    }
    for j in 2..=n {
        let kernel = center_pi1(&remove_regular_points(spec, j - 1)?)?;
        verdict = extension_center_rule(&Group::pure_braid(spec, j), &kernel, &verdict)?
            .expect("punctured hypothesized orbifolds have trivial center");
    }
    Ok(verdict)
}

/// Center of the full orbifold braid group `B_n(M)`.
pub fn center_full_braid(spec: &OrbifoldSpec, n: u32) -> Result<CenterVerdict> {
    require_supported(spec)?;
    require_strings(n)?;
    if n == 1 {
        return center_pi1(spec);
    }
    let group = Group::braid(spec, n);
    if let Some(reason) = hypothesis_failure(spec) {
        return Ok(out_of_scope(spec, group, reason));
    }
    if n == 2 {
        let mut trace = ProofTrace::new();
        trace.note(
            "S_2 has nontrivial center, so the extension argument gives no information about B_2",
        );
        return Ok(CenterVerdict {
            group,
            status: CenterStatus::Undetermined,
            trace,
        });
    }
    let pure = center_pure_braid(spec, n)?;
    let symmetric = symmetric_center(n)?;
    Ok(extension_center_rule(&group, &pure, &symmetric)?
        .expect("both ends of the sequence have trivial center"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InjectivityStatus {
    Injective,
    /// The theorem does not apply. This is not a claim of non-injectivity.
    TheoremInapplicable,
}

impl fmt::Display for InjectivityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InjectivityStatus::Injective => "Injective",
            InjectivityStatus::TheoremInapplicable => "TheoremInapplicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityVerdict {
    pub source: Group,
    pub target: Group,
    pub status: InjectivityStatus,
    pub trace: ProofTrace,
    pub violations: Vec<NicenessViolation>,
}

impl InjectivityVerdict {
    pub fn claim(&self) -> Proposition {
        Proposition::Injective {
            source: self.source.clone(),
            target: self.target.clone(),
        }
    }

    pub fn verify(&self) -> std::result::Result<(), String> {
        self.trace.replay().map_err(|e| e.to_string())?;
        if self.status == InjectivityStatus::Injective && !self.trace.concludes(&self.claim()) {
            return Err(format!("trace never concludes `{}`", self.claim()));
        }
        Ok(())
    }
}

fn forget_one_string(spec: &OrbifoldSpec, k: u32) -> Proposition {
    Proposition::ExactSequence {
        kernel: Group::pure_braid(&remove_regular_points(spec, 1).expect("r = 1"), k - 1),
        middle: Group::pure_braid(spec, k),
        quotient: Group::orbifold(spec),
    }
}

/// Injectivity of `PB_n(N) → PB_m(M)` (or `B_n(N) → B_m(M)` when `pure` is
/// false) induced by a sub-orbifold embedding.
pub fn injectivity(
    embedding: &SuborbifoldEmbedding,
    n: u32,
    m: u32,
    pure: bool,
) -> Result<InjectivityVerdict> {
    require_strings(n)?;
    if n > m {
        return Err(Error::Precondition(
            "n_at_most_m",
            format!("n = {n} exceeds m = {m}"),
        ));
    }
    let (sub, ambient) = (&embedding.sub, &embedding.ambient);
    let (source, target) = if pure {
        (Group::pure_braid(sub, n), Group::pure_braid(ambient, m))
    } else {
        (Group::braid(sub, n), Group::braid(ambient, m))
    };
    let report = is_nice(embedding);
    let mut trace = ProofTrace::new();

    if !report.nice {
        trace.push(
            Rule::HypothesisFailure,
            vec![Proposition::Niceness {
                embedding: embedding.clone(),
                nice: false,
            }],
            Proposition::TheoremInapplicable {
                reason: niceness_failure_reason(embedding),
            },
        );
        if !embedding.sub_group_is_finite() {
            trace.note(
                "the sub-orbifold group is infinite, so niceness is needed already for one string",
            );
        }
        return Ok(InjectivityVerdict {
            source,
            target,
            status: InjectivityStatus::TheoremInapplicable,
            trace,
            violations: report.violations,
        });
    }

    trace.note(format!(
        "base points: {n} of the {m} ambient base points lie in the sub-orbifold; they carry no further data"
    ));

    // Level one: every sub-orbifold obtained by puncturing k < n times
    // injects on orbifold fundamental groups.
    let mut punctured = vec![embedding.clone()];
    for k in 0..n as usize {
        let e = punctured[k].clone();
        if k > 0 {
            trace.push(
                Rule::PunctureNiceness,
                vec![Proposition::Niceness {
                    embedding: punctured[k - 1].clone(),
                    nice: true,
                }],
                Proposition::Niceness {
                    embedding: e.clone(),
                    nice: true,
                },
            );
        }
        let mut inputs = vec![Proposition::Niceness {
            embedding: e.clone(),
            nice: true,
        }];
        if e.sub.surface_kind() == SurfaceKind::Disc && e.sub.cone_count() >= 2 {
            inputs.push(Proposition::BoundaryWordOrder {
                factor_orders: e.sub.cone_orders.clone(),
                order: ElementOrder::Infinite,
            });
        }
        trace.push(
            Rule::SubOrbifoldInjectivity,
            inputs,
            Proposition::Injective {
                source: Group::orbifold(&e.sub),
                target: Group::orbifold(&e.ambient),
            },
        );
        punctured.push(e.punctured());
    }

    // Level k: forget all strings but the first, over the embedding
    // punctured n − k times.
    for k in 2..=n {
        let e = &punctured[(n - k) as usize];
        let inner = &punctured[(n - k + 1) as usize];
        trace.push(
            Rule::DiagramChase,
            vec![
                forget_one_string(&e.sub, k),
                forget_one_string(&e.ambient, k),
                Proposition::Injective {
                    source: Group::pure_braid(&inner.sub, k - 1),
                    target: Group::pure_braid(&inner.ambient, k - 1),
                },
                Proposition::Injective {
                    source: Group::orbifold(&e.sub),
                    target: Group::orbifold(&e.ambient),
                },
            ],
            Proposition::Injective {
                source: Group::pure_braid(&e.sub, k),
                target: Group::pure_braid(&e.ambient, k),
            },
        );
    }

    let pure_level = Proposition::Injective {
        source: Group::pure_braid(sub, n),
        target: Group::pure_braid(ambient, m),
    };
    if n < m {
        trace.push(
            Rule::ProjectionFactor,
            vec![Proposition::Injective {
                source: Group::pure_braid(sub, n),
                target: Group::pure_braid(ambient, n),
            }],
            pure_level.clone(),
        );
    }

    if !pure {
        let symmetric = Proposition::Injective {
            source: Group::Symmetric { n },
            target: Group::Symmetric { n: m },
        };
        trace.push(Rule::SymmetricInclusion, vec![], symmetric.clone());
        trace.push(
            Rule::DiagramChase,
            vec![
                Proposition::ExactSequence {
                    kernel: Group::pure_braid(sub, n),
                    middle: Group::braid(sub, n),
                    quotient: Group::Symmetric { n },
                },
                Proposition::ExactSequence {
                    kernel: Group::pure_braid(ambient, m),
                    middle: Group::braid(ambient, m),
                    quotient: Group::Symmetric { n: m },
                },
                pure_level,
                symmetric,
            ],
            Proposition::Injective {
                source: source.clone(),
                target: target.clone(),
            },
        );
    }

    Ok(InjectivityVerdict {
        source,
        target,
        status: InjectivityStatus::Injective,
        trace,
        violations: Vec::new(),
    })
}
