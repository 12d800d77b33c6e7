//! Combinatorial model of connected 2-orbifolds whose only singularities are
//! cone points, together with the surface-class classifiers used by the
//! center and injectivity engines.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A connected 2-orbifold with finitely many cone points.
///
/// `genus` is the orientable genus when `orientable` is set and the number of
/// crosscaps otherwise. Boundary circles and punctures are tracked separately
/// even though they contribute identically to the fundamental group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct OrbifoldSpec {
    pub orientable: bool,
    pub genus: u32,
    pub boundary: u32,
    pub punctures: u32,
    pub cone_orders: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    orientable: bool,
    genus: u32,
    boundary: u32,
    punctures: u32,
    cone_orders: Vec<u32>,
}

impl TryFrom<RawSpec> for OrbifoldSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        OrbifoldSpec::new(
            raw.orientable,
            raw.genus,
            raw.boundary,
            raw.punctures,
            raw.cone_orders,
        )
    }
}

impl OrbifoldSpec {
    pub fn new(
        orientable: bool,
        genus: u32,
        boundary: u32,
        punctures: u32,
        cone_orders: Vec<u32>,
    ) -> Result<Self> {
        if let Some(q) = cone_orders.iter().find(|&&q| q < 2) {
            return Err(Error::InvalidSpec {
                invariant: "cone_order_at_least_two",
                detail: format!("cone order {q} is below 2"),
            });
        }
        if !orientable && genus == 0 {
            return Err(Error::InvalidSpec {
                invariant: "nonorientable_genus_positive",
                detail: "a non-orientable surface needs at least one crosscap".into(),
            });
        }
        Ok(OrbifoldSpec {
            orientable,
            genus,
            boundary,
            punctures,
            cone_orders,
        })
    }

    /// Compact disc with the given cone points.
    pub fn disc(cone_orders: Vec<u32>) -> Result<Self> {
        Self::new(true, 0, 1, 0, cone_orders)
    }

    pub fn closed_orientable(genus: u32, cone_orders: Vec<u32>) -> Result<Self> {
        Self::new(true, genus, 0, 0, cone_orders)
    }

    pub fn closed_nonorientable(crosscaps: u32, cone_orders: Vec<u32>) -> Result<Self> {
        Self::new(false, crosscaps, 0, 0, cone_orders)
    }

    /// Boundary circles plus punctures.
    pub fn ends(&self) -> u32 {
        self.boundary + self.punctures
    }

    pub fn cone_count(&self) -> usize {
        self.cone_orders.len()
    }

    pub fn is_smooth(&self) -> bool {
        self.cone_orders.is_empty()
    }

    /// The same underlying surface with every cone point forgotten.
    pub fn underlying(&self) -> OrbifoldSpec {
        OrbifoldSpec {
            cone_orders: Vec::new(),
            ..self.clone()
        }
    }

    pub fn surface_kind(&self) -> SurfaceKind {
        SurfaceKind::of(self)
    }

    pub fn has_simply_connected_underlying(&self) -> bool {
        self.surface_kind() == SurfaceKind::Disc
    }
}

impl fmt::Display for OrbifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.orientable {
            "orientable"
        } else {
            "non-orientable"
        };
        let genus = if self.orientable {
            "genus"
        } else {
            "crosscaps"
        };
        write!(
            f,
            "{kind} {genus}={} boundary={} punctures={} cones={:?}",
            self.genus, self.boundary, self.punctures, self.cone_orders
        )
    }
}

/// Underlying surface type, ignoring cone points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    Sphere,
    ProjectivePlane,
    /// Disc or open plane.
    Disc,
    /// Annulus, punctured disc or punctured plane.
    Cylinder,
    Torus,
    MobiusBand,
    KleinBottle,
    /// Everything else: the fundamental group is non-abelian free or a
    /// surface group of higher complexity.
    Large,
}

impl SurfaceKind {
    pub fn of(spec: &OrbifoldSpec) -> SurfaceKind {
        let ends = spec.ends();
        match (spec.orientable, spec.genus, ends) {
            (true, 0, 0) => SurfaceKind::Sphere,
            (true, 0, 1) => SurfaceKind::Disc,
            (true, 0, 2) => SurfaceKind::Cylinder,
            (true, 1, 0) => SurfaceKind::Torus,
            (false, 1, 0) => SurfaceKind::ProjectivePlane,
            (false, 1, 1) => SurfaceKind::MobiusBand,
            (false, 2, 0) => SurfaceKind::KleinBottle,
            _ => SurfaceKind::Large,
        }
    }

    /// Surfaces whose fundamental group has nontrivial center.
    pub fn is_simple(self) -> bool {
        matches!(
            self,
            SurfaceKind::ProjectivePlane
                | SurfaceKind::Cylinder
                | SurfaceKind::Torus
                | SurfaceKind::MobiusBand
                | SurfaceKind::KleinBottle
        )
    }
}

/// Membership in the two classes of orbifolds the theory covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassMembership {
    /// Genus zero, orientable, at least one boundary circle or puncture.
    C0,
    /// Genus at least one.
    C1,
    Excluded(String),
}

impl ClassMembership {
    pub fn is_supported(&self) -> bool {
        !matches!(self, ClassMembership::Excluded(_))
    }
}

pub fn classify(spec: &OrbifoldSpec) -> ClassMembership {
    match spec.surface_kind() {
        SurfaceKind::Sphere => {
            ClassMembership::Excluded("closed genus-zero orientable surface (sphere)".into())
        }
        SurfaceKind::ProjectivePlane => ClassMembership::Excluded("closed projective plane".into()),
        _ if spec.orientable && spec.genus == 0 => ClassMembership::C0,
        _ => ClassMembership::C1,
    }
}

/// Fails with [`Error::Excluded`] unless the spec lies in C0 or C1.
pub fn require_supported(spec: &OrbifoldSpec) -> Result<()> {
    match classify(spec) {
        ClassMembership::Excluded(reason) => Err(Error::Excluded(reason)),
        _ => Ok(()),
    }
}

/// Whether a cone-free spec is (the interior of) a cylinder, torus, Möbius
/// band, Klein bottle or projective plane.
pub fn is_simple_surface(spec: &OrbifoldSpec) -> Result<bool> {
    if !spec.is_smooth() {
        return Err(Error::Precondition(
            "cone_orders_empty",
            "simplicity is a property of surfaces without cone points".into(),
        ));
    }
    Ok(spec.surface_kind().is_simple())
}

/// The three hypotheses under which the (pure) braid groups have trivial
/// center:
/// - no cone points implies the surface is not simple;
/// - a simple underlying surface carries at least one cone point;
/// - a simply connected underlying surface carries at least two.
pub fn satisfies_center_hypotheses(spec: &OrbifoldSpec) -> Result<bool> {
    require_supported(spec)?;
    Ok(hypothesis_failure(spec).is_none())
}

/// The first violated center hypothesis, if any. Assumes a supported spec.
pub fn hypothesis_failure(spec: &OrbifoldSpec) -> Option<&'static str> {
    let kind = spec.surface_kind();
    let cones = spec.cone_count();
    // The first two hypotheses coincide: both reject a cone-free simple surface.
    if cones == 0 && kind.is_simple() {
        Some("smooth simple surface")
    } else if kind == SurfaceKind::Disc && cones < 2 {
        Some("simply connected underlying surface with fewer than two cone points")
    } else {
        None
    }
}

/// Removes `r` regular points.
pub fn remove_regular_points(spec: &OrbifoldSpec, r: u32) -> Result<OrbifoldSpec> {
    if r == 0 {
        return Err(Error::Precondition(
            "r_positive",
            "must remove at least one point".into(),
        ));
    }
    Ok(OrbifoldSpec {
        punctures: spec.punctures + r,
        ..spec.clone()
    })
}

/// A component of the closure of the complement of a sub-orbifold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplementComponent {
    pub simply_connected_underlying: bool,
    pub spec: OrbifoldSpec,
}

impl ComplementComponent {
    pub fn new(spec: OrbifoldSpec) -> Self {
        ComplementComponent {
            simply_connected_underlying: spec_is_simply_connected_piece(&spec),
            spec,
        }
    }

    pub fn cone_orders(&self) -> &[u32] {
        &self.spec.cone_orders
    }
}

fn spec_is_simply_connected_piece(spec: &OrbifoldSpec) -> bool {
    spec.orientable && spec.genus == 0 && spec.ends() == 1
}

/// A connected sub-orbifold together with the components of its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEmbedding")]
pub struct SuborbifoldEmbedding {
    pub ambient: OrbifoldSpec,
    pub sub: OrbifoldSpec,
    pub complement_components: Vec<ComplementComponent>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmbedding {
    ambient: OrbifoldSpec,
    sub: OrbifoldSpec,
    complement_components: Vec<ComplementComponent>,
}

impl TryFrom<RawEmbedding> for SuborbifoldEmbedding {
    type Error = Error;

    fn try_from(raw: RawEmbedding) -> Result<Self> {
        SuborbifoldEmbedding::new(raw.ambient, raw.sub, raw.complement_components)
    }
}

impl SuborbifoldEmbedding {
    pub fn new(
        ambient: OrbifoldSpec,
        sub: OrbifoldSpec,
        complement_components: Vec<ComplementComponent>,
    ) -> Result<Self> {
        if let ClassMembership::Excluded(reason) = classify(&ambient) {
            return Err(Error::InvalidEmbedding {
                invariant: "ambient_supported",
                detail: reason,
            });
        }
        if let ClassMembership::Excluded(reason) = classify(&sub) {
            return Err(Error::InvalidEmbedding {
                invariant: "sub_supported",
                detail: reason,
            });
        }
        for (i, c) in complement_components.iter().enumerate() {
            if c.simply_connected_underlying != spec_is_simply_connected_piece(&c.spec) {
                return Err(Error::InvalidEmbedding {
                    invariant: "simply_connected_flag_agrees",
                    detail: format!(
                        "component {i} is flagged simply_connected_underlying={} but its spec says otherwise",
                        c.simply_connected_underlying
                    ),
                });
            }
            if c.spec.boundary == 0 {
                return Err(Error::InvalidEmbedding {
                    invariant: "component_has_gluing_circle",
                    detail: format!("component {i} has no boundary circle"),
                });
            }
        }
        let mut expected = ambient.cone_orders.clone();
        let mut found = sub.cone_orders.clone();
        for c in &complement_components {
            found.extend_from_slice(&c.spec.cone_orders);
        }
        expected.sort_unstable();
        found.sort_unstable();
        if expected != found {
            return Err(Error::InvalidEmbedding {
                invariant: "cone_multiset_partition",
                detail: format!(
                    "ambient cones {expected:?} differ from sub plus complement cones {found:?}"
                ),
            });
        }
        Ok(SuborbifoldEmbedding {
            ambient,
            sub,
            complement_components,
        })
    }

    /// Removes the same interior regular point of the sub-orbifold from both
    /// the sub-orbifold and the ambient orbifold. Complement components are
    /// untouched.
    pub fn punctured(&self) -> SuborbifoldEmbedding {
        SuborbifoldEmbedding {
            ambient: OrbifoldSpec {
                punctures: self.ambient.punctures + 1,
                ..self.ambient.clone()
            },
            sub: OrbifoldSpec {
                punctures: self.sub.punctures + 1,
                ..self.sub.clone()
            },
            complement_components: self.complement_components.clone(),
        }
    }

    /// Whether the orbifold fundamental group of the sub-orbifold is finite,
    /// i.e. it is a disc with at most one cone point.
    pub fn sub_group_is_finite(&self) -> bool {
        self.sub.surface_kind() == SurfaceKind::Disc && self.sub.cone_count() <= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A cone-free component that is simply connected.
    SmoothSimplyConnected,
    /// A component with simply connected underlying space and fewer than two
    /// cone points.
    TooFewCones,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NicenessViolation {
    pub component: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicenessReport {
    pub nice: bool,
    pub violations: Vec<NicenessViolation>,
}

pub fn is_nice(embedding: &SuborbifoldEmbedding) -> NicenessReport {
    let mut violations = Vec::new();
    for (component, c) in embedding.complement_components.iter().enumerate() {
        let cones = c.cone_orders().len();
        if cones == 0 && c.simply_connected_underlying {
            violations.push(NicenessViolation {
                component,
                kind: ViolationKind::SmoothSimplyConnected,
            });
        }
        if c.simply_connected_underlying && cones < 2 {
            violations.push(NicenessViolation {
                component,
                kind: ViolationKind::TooFewCones,
            });
        }
    }
    NicenessReport {
        nice: violations.is_empty(),
        violations,
    }
}

/// Enumerates every valid spec with genus (or crosscap count) at most
/// `max_genus`, at most `max_ends` boundary circles plus punctures, and at
/// most `max_cones` cone points of order at most `max_order`. Cone orders
/// are listed as non-decreasing multisets. Excluded specs are included.
pub fn spec_grid(
    max_genus: u32,
    max_ends: u32,
    max_cones: usize,
    max_order: u32,
) -> Vec<OrbifoldSpec> {
    let mut multisets = vec![Vec::new()];
    let mut frontier = vec![Vec::<u32>::new()];
    for _ in 0..max_cones {
        let mut next = Vec::new();
        for m in &frontier {
            let lo = m.last().copied().unwrap_or(2);
            for q in lo..=max_order {
                let mut ext = m.clone();
                ext.push(q);
                next.push(ext);
            }
        }
        multisets.extend(next.iter().cloned());
        frontier = next;
    }

    let mut out = Vec::new();
    for orientable in [true, false] {
        let genus_range = if orientable {
            0..=max_genus
        } else {
            1..=max_genus
        };
        for genus in genus_range {
            for boundary in 0..=max_ends {
                for punctures in 0..=(max_ends - boundary) {
                    for cones in &multisets {
                        out.push(OrbifoldSpec {
                            orientable,
                            genus,
                            boundary,
                            punctures,
                            cone_orders: cones.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(orientable: bool, g: u32, b: u32, p: u32, cones: &[u32]) -> OrbifoldSpec {
        OrbifoldSpec::new(orientable, g, b, p, cones.to_vec()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&spec(true, 0, 1, 0, &[])), ClassMembership::C0);
        assert_eq!(classify(&spec(true, 1, 0, 0, &[2])), ClassMembership::C1);
        assert!(matches!(
            classify(&spec(true, 0, 0, 0, &[])),
            ClassMembership::Excluded(_)
        ));
        assert!(matches!(
            classify(&spec(false, 1, 0, 0, &[3])),
            ClassMembership::Excluded(_)
        ));
        assert_eq!(classify(&spec(false, 1, 1, 0, &[])), ClassMembership::C1);
        assert_eq!(classify(&spec(true, 0, 0, 1, &[2, 2])), ClassMembership::C0);
    }

    #[test]
    fn rejects_bad_specs() {
        let err = OrbifoldSpec::new(true, 0, 1, 0, vec![1]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidSpec {
                invariant: "cone_order_at_least_two",
                ..
            }
        ));
        let err = OrbifoldSpec::new(false, 0, 1, 0, vec![]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidSpec {
                invariant: "nonorientable_genus_positive",
                ..
            }
        ));
        let json = r#"{"orientable":true,"genus":0,"boundary":1,"punctures":0,"cone_orders":[0]}"#;
        assert!(serde_json::from_str::<OrbifoldSpec>(json).is_err());
        let json = r#"{"orientable":true,"genus":0,"boundary":1,"punctures":-1,"cone_orders":[]}"#;
        assert!(serde_json::from_str::<OrbifoldSpec>(json).is_err());
    }

    #[test]
    fn simple_surfaces() {
        assert!(is_simple_surface(&spec(true, 0, 2, 0, &[])).unwrap());
        assert!(is_simple_surface(&spec(true, 0, 1, 1, &[])).unwrap());
        assert!(!is_simple_surface(&spec(true, 0, 1, 0, &[])).unwrap());
        assert!(!is_simple_surface(&spec(true, 2, 0, 0, &[])).unwrap());
        assert!(is_simple_surface(&spec(false, 2, 0, 0, &[])).unwrap());
        assert!(is_simple_surface(&spec(false, 1, 0, 1, &[])).unwrap());
        assert!(!is_simple_surface(&spec(false, 1, 2, 0, &[])).unwrap());
        assert!(is_simple_surface(&spec(true, 1, 0, 0, &[2])).is_err());
    }

    #[test]
    fn center_hypotheses() {
        assert!(satisfies_center_hypotheses(&spec(true, 0, 1, 0, &[2, 3])).unwrap());
        assert!(!satisfies_center_hypotheses(&spec(true, 1, 0, 0, &[])).unwrap());
        assert!(satisfies_center_hypotheses(&spec(true, 0, 2, 0, &[5])).unwrap());
        assert!(!satisfies_center_hypotheses(&spec(true, 0, 1, 0, &[5])).unwrap());
        assert!(satisfies_center_hypotheses(&spec(true, 0, 0, 0, &[2, 3, 5])).is_err());
    }

    #[test]
    fn puncturing() {
        let d = spec(true, 0, 1, 0, &[3]);
        assert_eq!(
            remove_regular_points(&d, 1).unwrap(),
            spec(true, 0, 1, 1, &[3])
        );
        let t = spec(true, 1, 0, 0, &[]);
        assert_eq!(
            remove_regular_points(&t, 2).unwrap(),
            spec(true, 1, 0, 2, &[])
        );
        assert!(remove_regular_points(&t, 0).is_err());
    }

    #[test]
    fn puncturing_preserves_class_and_hypotheses_on_grid() {
        for s in spec_grid(3, 3, 3, 5) {
            let class = classify(&s);
            let p = remove_regular_points(&s, 1).unwrap();
            if class.is_supported() {
                assert_eq!(classify(&p), class, "{s}");
                if satisfies_center_hypotheses(&s).unwrap() {
                    assert!(satisfies_center_hypotheses(&p).unwrap(), "{s}");
                }
            }
        }
    }

    fn component(g: u32, b: u32, p: u32, cones: &[u32]) -> ComplementComponent {
        ComplementComponent::new(spec(true, g, b, p, cones))
    }

    #[test]
    fn niceness_examples() {
        let ambient = spec(true, 0, 1, 0, &[2, 2]);
        let sub = spec(true, 0, 2, 0, &[]);
        let e = SuborbifoldEmbedding::new(ambient, sub, vec![component(0, 1, 0, &[2, 2])]).unwrap();
        assert!(is_nice(&e).nice);

        let ambient = spec(true, 1, 0, 0, &[]);
        let sub = spec(true, 1, 1, 0, &[]);
        let e = SuborbifoldEmbedding::new(ambient, sub, vec![component(0, 1, 0, &[])]).unwrap();
        let report = is_nice(&e);
        assert!(!report.nice);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::SmoothSimplyConnected));

        let ambient = spec(true, 0, 1, 0, &[]);
        let sub = spec(true, 0, 1, 0, &[]);
        let e = SuborbifoldEmbedding::new(ambient, sub, vec![component(0, 2, 0, &[])]).unwrap();
        assert!(is_nice(&e).nice);
    }

    #[test]
    fn embedding_invariants() {
        let ambient = spec(true, 0, 1, 0, &[2, 3, 5]);
        let sub = spec(true, 0, 1, 0, &[2, 3]);
        let bad =
            SuborbifoldEmbedding::new(ambient.clone(), sub.clone(), vec![component(0, 2, 0, &[7])]);
        assert!(matches!(
            bad,
            Err(Error::InvalidEmbedding {
                invariant: "cone_multiset_partition",
                ..
            })
        ));
        let mut flagged = component(0, 2, 0, &[5]);
        flagged.simply_connected_underlying = true;
        let bad = SuborbifoldEmbedding::new(ambient.clone(), sub.clone(), vec![flagged]);
        assert!(matches!(
            bad,
            Err(Error::InvalidEmbedding {
                invariant: "simply_connected_flag_agrees",
                ..
            })
        ));
        let bad =
            SuborbifoldEmbedding::new(ambient.clone(), sub.clone(), vec![component(0, 0, 2, &[5])]);
        assert!(matches!(
            bad,
            Err(Error::InvalidEmbedding {
                invariant: "component_has_gluing_circle",
                ..
            })
        ));
        assert!(SuborbifoldEmbedding::new(ambient, sub, vec![component(0, 2, 0, &[5])]).is_ok());
    }

    #[test]
    fn niceness_survives_puncturing() {
        let ambient = spec(true, 0, 1, 0, &[2, 3, 5]);
        let sub = spec(true, 0, 1, 0, &[2, 3]);
        let e = SuborbifoldEmbedding::new(ambient, sub, vec![component(0, 2, 0, &[5])]).unwrap();
        let mut cur = e.clone();
        for _ in 0..5 {
            cur = cur.punctured();
            assert_eq!(is_nice(&cur), is_nice(&e));
        }
    }

    #[test]
    fn grid_size() {
        // 7 surfaces x 10 (boundary, puncture) pairs x 35 cone multisets
        assert_eq!(spec_grid(3, 3, 3, 5).len(), 7 * 10 * 35);
    }
}
