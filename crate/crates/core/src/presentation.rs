//! Finite presentations of orbifold fundamental groups, Tietze
//! simplification and abelianization.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbifold::{require_supported, OrbifoldSpec, SurfaceKind};
use crate::snf::smith_normal_form_i64;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    HandleA,
    HandleB,
    Crosscap,
    Boundary,
    Cone {
        order: u32,
    },
    /// No geometric meaning recorded (e.g. parsed from JSON).
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub kind: GeneratorKind,
}

impl Generator {
    pub fn new(name: impl Into<String>, kind: GeneratorKind) -> Self {
        Generator {
            name: name.into(),
            kind,
        }
    }
}

/// A finite presentation. Every generator used by a relator is declared and
/// generator names are unique.
///
/// Generator kinds are not part of the JSON form, so they come back as
/// [`GeneratorKind::Plain`] after a round trip.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PresentationWire", into = "PresentationWire")]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationWire {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl TryFrom<PresentationWire> for Presentation {
    type Error = Error;

    fn try_from(w: PresentationWire) -> Result<Self> {
        Presentation::plain(
            &w.generators.iter().map(String::as_str).collect::<Vec<_>>(),
            w.relators,
        )
    }
}

impl From<Presentation> for PresentationWire {
    fn from(p: Presentation) -> Self {
        PresentationWire {
            generators: p.generators.into_iter().map(|g| g.name).collect(),
            relators: p.relators,
        }
    }
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::Precondition(
                    "generator_names_unique",
                    format!("generator `{}` declared twice", g.name),
                ));
            }
        }
        for r in &relators {
            for g in r.generators() {
                if !seen.contains(g) {
                    return Err(Error::UnknownGenerator(g.to_string()));
                }
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    pub fn plain(names: &[&str], relators: Vec<Word>) -> Result<Self> {
        Self::new(
            names
                .iter()
                .map(|n| Generator::new(*n, GeneratorKind::Plain))
                .collect(),
            relators,
        )
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relators × generators matrix of exponent sums.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                self.generators
                    .iter()
                    .map(|g| r.exponent_sum(&g.name))
                    .collect()
            })
            .collect()
    }

    /// Removes `generator` using relator `relator_index`, in which it must
    /// occur exactly once: the relator is solved for the generator and the
    /// solution substituted into every other relator.
    pub fn eliminate(&self, generator: &str, relator_index: usize) -> Result<Presentation> {
        let relator = self.relators.get(relator_index).ok_or_else(|| {
            Error::Precondition("relator_exists", format!("no relator {relator_index}"))
        })?;
        if relator.occurrences(generator) != 1 {
            return Err(Error::Precondition(
                "generator_occurs_once",
                format!("`{generator}` does not occur exactly once in `{relator}`"),
            ));
        }
        let image = solve_for(relator, generator);
        let relators = self
            .relators
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != relator_index)
            .map(|(_, r)| r.substitute(generator, &image))
            .collect();
        let generators = self
            .generators
            .iter()
            .filter(|g| g.name != generator)
            .cloned()
            .collect();
        Presentation::new(generators, relators)
    }

    /// Renames generators; kinds are kept.
    pub fn rename(&self, mut f: impl FnMut(&str) -> String) -> Result<Presentation> {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(f(&g.name), g.kind))
            .collect();
        let relators = self.relators.iter().map(|r| r.rename(&mut f)).collect();
        Presentation::new(generators, relators)
    }

    /// Whether both presentations have the same generator names in order and
    /// the same relators up to order, cyclic rotation and inversion.
    pub fn same_as(&self, other: &Presentation) -> bool {
        if self.generator_names() != other.generator_names() {
            return false;
        }
        let mut a: Vec<Word> = self.relators.iter().map(Word::canonical_relator).collect();
        let mut b: Vec<Word> = other.relators.iter().map(Word::canonical_relator).collect();
        a.sort();
        b.sort();
        a == b
    }
}

/// Solves `relator = 1` for a generator occurring exactly once.
fn solve_for(relator: &Word, generator: &str) -> Word {
    // relator = u g^e v with e = ±1, so g^e = u^-1 v^-1
    let syllables = relator.syllables();
    let pos = syllables
        .iter()
        .position(|s| s.generator == generator)
        .unwrap();
    let e = syllables[pos].exponent;
    let u = Word::from_syllables(syllables[..pos].iter().cloned());
    let v = Word::from_syllables(syllables[pos + 1..].iter().cloned());
    let rhs = u.inverse().mul(&v.inverse());
    if e > 0 {
        rhs
    } else {
        rhs.inverse()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.generator_names().join(", ");
        let rels: Vec<String> = self.relators.iter().map(Word::to_string).collect();
        write!(f, "< {gens} | {} >", rels.join(", "))
    }
}

/// Orbifold fundamental group by the Van Kampen construction.
///
/// Orientable genus g: `a1, b1, …, ag, bg`; non-orientable: crosscaps
/// `v1, …, vg`; boundary circles and punctures `c1, …, ce`; cone points
/// `x1, …, xk`. Relators are `xj^qj` followed by the surface relation
/// `∏[ai, bi] · ∏cl · ∏xj` (or `∏vi² · ∏cl · ∏xj`). When there is at least
/// one end the surface relation is used to eliminate `ce`.
pub fn pi1_orb(spec: &OrbifoldSpec) -> Result<Presentation> {
    require_supported(spec)?;
    let mut generators = Vec::new();
    let mut surface = Word::identity();
    for i in 1..=spec.genus {
        if spec.orientable {
            let a = format!("a{i}");
            let b = format!("b{i}");
            surface = surface.mul(&Word::commutator(
                &Word::generator(&a),
                &Word::generator(&b),
            ));
            generators.push(Generator::new(a, GeneratorKind::HandleA));
            generators.push(Generator::new(b, GeneratorKind::HandleB));
        } else {
            let v = format!("v{i}");
            surface = surface.mul(&Word::power(&v, 2));
            generators.push(Generator::new(v, GeneratorKind::Crosscap));
        }
    }
    for l in 1..=spec.ends() {
        let c = format!("c{l}");
        surface = surface.mul(&Word::generator(&c));
        generators.push(Generator::new(c, GeneratorKind::Boundary));
    }
    let mut relators = Vec::new();
    for (j, &q) in spec.cone_orders.iter().enumerate() {
        let x = format!("x{}", j + 1);
        surface = surface.mul(&Word::generator(&x));
        relators.push(Word::power(&x, i64::from(q)));
        generators.push(Generator::new(x, GeneratorKind::Cone { order: q }));
    }
    relators.push(surface);
    let p = Presentation::new(generators, relators)?;
    if spec.ends() >= 1 {
        let last = format!("c{}", spec.ends());
        let idx = p.relators.len() - 1;
        p.eliminate(&last, idx)
    } else {
        Ok(p)
    }
}

/// Rewrites a presentation built by [`pi1_orb`] into the conventions of the
/// stored one-cone presentations: the torus handle `a1, b1` becomes `a, b`,
/// and for the closed Klein bottle the crosscap basis `v1, v2` is replaced by
/// `a = v1`, `b = v1 v2`, turning `v1² v2²` into `a b a⁻¹ b`. Other specs are
/// returned unchanged.
pub fn to_reference_convention(spec: &OrbifoldSpec, p: &Presentation) -> Result<Presentation> {
    match spec.surface_kind() {
        SurfaceKind::Torus => p.rename(|g| match g {
            "a1" => "a".into(),
            "b1" => "b".into(),
            other => other.into(),
        }),
        SurfaceKind::KleinBottle => {
            // v1 = a, v2 = a^-1 b
            let v2 = Word::from_pairs(&[("a", -1), ("b", 1)]);
            let relators = p
                .relators
                .iter()
                .map(|r| {
                    r.substitute("v1", &Word::generator("a"))
                        .substitute("v2", &v2)
                })
                .collect();
            let generators = p
                .generators
                .iter()
                .map(|g| match g.name.as_str() {
                    "v1" => Generator::new("a", GeneratorKind::Plain),
                    "v2" => Generator::new("b", GeneratorKind::Plain),
                    _ => g.clone(),
                })
                .collect();
            Presentation::new(generators, relators)
        }
        _ => Ok(p.clone()),
    }
}

/// Tietze simplification restricted to generator elimination, free and
/// cyclic reduction, and removal of trivial or repeated relators. Runs to a
/// fixpoint; the output relators are canonical under
/// [`Word::canonical_relator`].
pub fn tietze_simplify(p: &Presentation) -> Presentation {
    let mut cur = p.clone();
    loop {
        let mut seen = HashSet::new();
        cur.relators = cur
            .relators
            .iter()
            .map(Word::cyclically_reduced)
            .filter(|r| !r.is_identity())
            .filter(|r| seen.insert(r.canonical_relator()))
            .collect();

        let mut pick = None;
        'search: for (ri, r) in cur.relators.iter().enumerate() {
            // prefer the most recently declared generator
            for g in cur.generators.iter().rev() {
                if r.occurrences(&g.name) == 1 {
                    pick = Some((g.name.clone(), ri));
                    break 'search;
                }
            }
        }
        match pick {
            Some((g, ri)) => {
                cur = cur
                    .eliminate(&g, ri)
                    .expect("generator occurs exactly once in the chosen relator");
            }
            None => break,
        }
    }
    cur.relators = cur.relators.iter().map(Word::canonical_relator).collect();
    cur
}

/// Rank and invariant factors (each at least 2, each dividing the next) of
/// an abelianization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, torsion {:?}", self.rank, self.torsion)
    }
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let m = p.exponent_matrix();
    let snf = smith_normal_form_i64(&m, false).expect("exponent matrix is rectangular");
    let rank = p.generators.len() - snf.factors.len();
    let torsion = snf
        .factors
        .iter()
        .filter(|&&d| d > 1)
        .map(|&d| u64::try_from(d).expect("invariant factor fits in u64"))
        .collect();
    AbelianInvariants { rank, torsion }
}

pub fn is_cyclic(inv: &AbelianInvariants) -> bool {
    matches!((inv.rank, inv.torsion.len()), (0, 0) | (1, 0) | (0, 1))
}

/// The four explicitly stored one-cone presentations over simple surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StoredPresentation {
    /// Cylinder with one cone point: `<a, b, c | (a b a⁻¹ c)^q>`.
    Cc,
    /// Möbius band with one cone point: `<a, b, c | (a b a c)^q>`.
    Mbc,
    /// Torus with one cone point: `<a, b | (a b a⁻¹ b⁻¹)^q>`.
    Tc,
    /// Klein bottle with one cone point: `<a, b | (a b a⁻¹ b)^q>`.
    Kc,
}

impl FromStr for StoredPresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Cc" => Ok(Self::Cc),
            "Mbc" => Ok(Self::Mbc),
            "Tc" => Ok(Self::Tc),
            "Kc" => Ok(Self::Kc),
            other => Err(Error::UnknownPresentation(other.to_string())),
        }
    }
}

impl fmt::Display for StoredPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Cc => "Cc",
            Self::Mbc => "Mbc",
            Self::Tc => "Tc",
            Self::Kc => "Kc",
        };
        f.write_str(s)
    }
}

impl StoredPresentation {
    /// Which stored presentation describes a spec, if it has exactly one cone
    /// point on a simple underlying surface (open variants included).
    pub fn for_spec(spec: &OrbifoldSpec) -> Option<(StoredPresentation, u32)> {
        let [q] = spec.cone_orders[..] else {
            return None;
        };
        let kind = match spec.surface_kind() {
            SurfaceKind::Cylinder => Self::Cc,
            SurfaceKind::MobiusBand => Self::Mbc,
            SurfaceKind::Torus => Self::Tc,
            SurfaceKind::KleinBottle => Self::Kc,
            _ => return None,
        };
        Some((kind, q))
    }

    pub fn root(self) -> (Vec<&'static str>, Word) {
        match self {
            Self::Cc => (
                vec!["a", "b", "c"],
                Word::from_pairs(&[("a", 1), ("b", 1), ("a", -1), ("c", 1)]),
            ),
            Self::Mbc => (
                vec!["a", "b", "c"],
                Word::from_pairs(&[("a", 1), ("b", 1), ("a", 1), ("c", 1)]),
            ),
            Self::Tc => (
                vec!["a", "b"],
                Word::from_pairs(&[("a", 1), ("b", 1), ("a", -1), ("b", -1)]),
            ),
            Self::Kc => (
                vec!["a", "b"],
                Word::from_pairs(&[("a", 1), ("b", 1), ("a", -1), ("b", 1)]),
            ),
        }
    }
}

pub fn stored_presentation(kind: StoredPresentation, q: u32) -> Result<Presentation> {
    if q < 2 {
        return Err(Error::Precondition(
            "cone_order_at_least_two",
            format!("q = {q}"),
        ));
    }
    let (names, root) = kind.root();
    Presentation::plain(&names, vec![root.pow(i64::from(q))])
}
