//! Construction of exact sofic-approximation certificates.
//!
//! Every certificate built here carries a genuine homomorphism
//! `φ: G → Sym(A)` with `S = A`, so it verifies at `ε = 0` whatever `ε` was
//! requested.

mod biregular;
mod finite;
mod product;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::actions::{orbit_partition, Action, ActionSpec, GroupElement, GroupShape, Point, Stabilizer, DEFAULT_ORBIT_BOUND};
use crate::error::{Error, Result, StageExt};
use crate::perm::Perm;
use crate::stallings::DEFAULT_CORE_CAP;
use crate::Rational;

pub use biregular::biregular_approx;
pub use finite::{build_finite_index_approx, chabouty_lift, coset_approx};
pub use product::combine_orbits;

/// How the finite-index base case picks its carrier.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// `A = Sym(G/K)`, `π_s(x) = s⁻¹x`. Needs index at most 6.
    Literal,
    /// `A = Q`, the image of `G` in `Sym(G/K)`, acting on itself by left
    /// translation.
    #[default]
    Core,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Literal => "literal",
            Strategy::Core => "core",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Strategy::Literal),
            "core" => Ok(Strategy::Core),
            other => Err(Error::malformed("strategy", format!("expected literal or core, got {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub strategy: Strategy,
    /// Cap on image-group orders.
    pub core_cap: usize,
    /// Largest degree tried by the small-quotient fallback.
    pub search_degree: usize,
    /// Word-length bound for orbit detection by search.
    pub orbit_bound: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            strategy: Strategy::Core,
            core_cap: DEFAULT_CORE_CAP,
            search_degree: 5,
            orbit_bound: DEFAULT_ORBIT_BOUND,
        }
    }
}

/// `φ: G → Sym(A)` given by generator images, optionally overridden on
/// individual elements.
///
/// For `F_k × F_k` the first `k` images belong to the left factor and the
/// last `k` to the right factor, and `φ(h, k) = φ(h, 1) ∘ φ(1, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoficApproximation {
    pub shape: GroupShape,
    pub carrier_size: usize,
    pub generator_images: Vec<Perm>,
    pub strategy: Strategy,
    /// Values of `φ` forced on specific elements. Always empty for built
    /// certificates; lets externally supplied tables fail unitality or
    /// multiplicativity.
    pub overrides: BTreeMap<GroupElement, Perm>,
}

impl SoficApproximation {
    pub fn new(shape: GroupShape, carrier_size: usize, generator_images: Vec<Perm>, strategy: Strategy) -> Result<Self> {
        if carrier_size == 0 {
            return Err(Error::InvalidPermutation("carrier must be non-empty".into()));
        }
        if generator_images.len() != shape.generator_count() {
            return Err(Error::InvalidPermutation(format!(
                "{} generator images for {shape}",
                generator_images.len()
            )));
        }
        if let Some(p) = generator_images.iter().find(|p| p.len() != carrier_size) {
            return Err(Error::InvalidPermutation(format!("image on {} points, carrier {carrier_size}", p.len())));
        }
        Ok(SoficApproximation { shape, carrier_size, generator_images, strategy, overrides: BTreeMap::new() })
    }

    /// `φ(w)` for a word over the generator block starting at `offset`.
    fn word_image(&self, letters: &[i32], offset: usize) -> Perm {
        let mut out = Perm::identity(self.carrier_size);
        for &l in letters.iter().rev() {
            let image = &self.generator_images[offset + l.unsigned_abs() as usize - 1];
            out = if l > 0 { image.compose(&out) } else { image.inverse().compose(&out) };
        }
        out
    }

    /// `φ(g)` from the generator images alone.
    pub fn homomorphic_image(&self, g: &GroupElement) -> Result<Perm> {
        g.check_shape(self.shape)?;
        Ok(match g {
            GroupElement::Single(w) => self.word_image(w.letters(), 0),
            GroupElement::Pair(h, k) => {
                self.word_image(h.letters(), 0).compose(&self.word_image(k.letters(), self.shape.rank()))
            }
        })
    }

    /// `φ(g)`, honouring overrides.
    pub fn phi(&self, g: &GroupElement) -> Result<Perm> {
        match self.overrides.get(g) {
            Some(p) => Ok(p.clone()),
            None => self.homomorphic_image(g),
        }
    }
}

/// `S ⊆ A`, labels `B`, and `π_s: E → B` for each `s ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitWitness {
    pub support: Vec<usize>,
    pub labels: Vec<String>,
    /// `pi[i][j]` is the label index of `π_{support[i]}(E[j])`.
    pub pi: Vec<Vec<usize>>,
}

/// Separator used for one orbit.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SeparatorTrace {
    /// The `E`-points of the orbit.
    pub orbit: Vec<String>,
    /// `hall_completion` or `quotient_search`.
    pub method: String,
    pub index: usize,
    pub table: Vec<Vec<usize>>,
    /// Canonical representatives of the orbit's points, as coset words.
    pub sigma: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub strategy: Strategy,
    pub stages: Vec<String>,
    pub separators: Vec<SeparatorTrace>,
}

/// Self-contained record of `(α, F, E, ε)` with `φ`, `S`, `B` and `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub action: ActionSpec,
    pub f: Vec<GroupElement>,
    pub e: Vec<Point>,
    pub epsilon: Rational,
    pub approx: SoficApproximation,
    pub witness: OrbitWitness,
    pub provenance: Provenance,
}

/// Result of the finite-index base case on `E = G/K`, all table points.
#[derive(Clone, Debug)]
pub struct BaseApprox {
    pub approx: SoficApproximation,
    /// Rows indexed like `A`, columns by table point.
    pub witness: OrbitWitness,
    /// `carrier[s]` is the permutation of table points that carrier point `s`
    /// stands for; `φ(g)(s) = λ(g) ∘ carrier[s]` and `π_s = carrier[s]⁻¹`.
    pub carrier: Vec<Perm>,
}

fn canonical_inputs(action: &Action, f: &[GroupElement], e: &[Point]) -> Result<Vec<Point>> {
    let shape = action.group();
    for g in f {
        g.check_shape(shape)?;
    }
    let e: Vec<Point> = e.iter().map(|x| action.canonical_point(x)).collect::<Result<_>>()?;
    let mut seen = std::collections::HashSet::new();
    for x in &e {
        if !seen.insert(x) {
            return Err(Error::DuplicatePoint(x.to_string()));
        }
    }
    Ok(e)
}

/// Builds a certificate for `(spec, F, E, ε)`.
///
/// Coset actions run separation, Hall completion, the finite-index base
/// case and the lift. The biregular action goes through [`biregular_approx`].
/// Conjugation is split into orbits, each handled as the coset action on the
/// centraliser of its first point. Other restrictions are built for the
/// inner action and restricted; disjoint unions are built part by part and
/// combined.
pub fn approximate(spec: &ActionSpec, f: &[GroupElement], e: &[Point], epsilon: Rational, options: &BuildOptions) -> Result<Certificate> {
    let action = Action::new(spec).stage("parse")?;
    let e = canonical_inputs(&action, f, e).stage("parse")?;
    match spec {
        ActionSpec::Coset { .. } => coset_approx(&action, f, &e, epsilon, options),
        ActionSpec::Biregular { rank } => {
            let words = e.iter().map(|x| x.word().cloned().unwrap()).collect::<Vec<_>>();
            biregular_approx(*rank, f, &words, epsilon, options)
        }
        _ if spec.is_conjugation() => conjugation_approx(&action, f, &e, epsilon, options),
        ActionSpec::Restricted { inner, images } => {
            let inner_f = f
                .iter()
                .map(|g| action.inner_element(g))
                .collect::<Result<Vec<_>>>()
                .stage("restrict")?;
            let mut dedup = Vec::new();
            for g in inner_f {
                if !dedup.contains(&g) {
                    dedup.push(g);
                }
            }
            let base = approximate(inner, &dedup, &e, epsilon, options)?;
            restrict_approx(&base, images, f).stage("restrict")
        }
        ActionSpec::DisjointUnion { parts } => {
            let mut certs = Vec::with_capacity(parts.len());
            let mut origin = vec![(0, 0); e.len()];
            for (tag, part) in parts.iter().enumerate() {
                let mut points = Vec::new();
                for (i, x) in e.iter().enumerate() {
                    if let Point::Tagged(t, p) = x {
                        if *t == tag {
                            origin[i] = (tag, points.len());
                            points.push((**p).clone());
                        }
                    }
                }
                certs.push(approximate(part, f, &points, epsilon, options)?);
            }
            product::assemble(&certs, spec.clone(), e.clone(), &origin).stage("combine_orbits")
        }
    }
}

fn conjugation_approx(action: &Action, f: &[GroupElement], e: &[Point], epsilon: Rational, options: &BuildOptions) -> Result<Certificate> {
    let rank = action.group().rank();
    let classes = orbit_partition(action, e, f, options.orbit_bound).stage("orbit_partition")?;
    let mut parts = Vec::with_capacity(classes.len());
    let mut origin = vec![(0, 0); e.len()];
    for (j, class) in classes.iter().enumerate() {
        let Stabilizer::Subgroup { generators, transports, .. } = &class.stabilizer else {
            return Err(Error::Internal("conjugation classes carry centralisers".into())).stage("orbit_partition");
        };
        let coset = Action::new(&ActionSpec::Coset { rank, subgroup: generators.clone() }).stage("orbit_partition")?;
        let points = transports.iter().map(|t| coset.point_of(t)).collect::<Result<Vec<_>>>().stage("orbit_partition")?;
        let mut part = coset_approx(&coset, f, &points, epsilon, options)?;
        // Transport along tC ↦ t x t⁻¹, a G-equivariant bijection onto the orbit.
        part.action = action.spec().clone();
        part.e = class.members.iter().map(|&i| e[i].clone()).collect();
        for trace in &mut part.provenance.separators {
            trace.orbit = part.e.iter().map(Point::to_string).collect();
        }
        for (column, &i) in class.members.iter().enumerate() {
            origin[i] = (j, column);
        }
        parts.push(part);
    }
    if parts.is_empty() {
        let mut cert = coset_approx(&Action::new(&ActionSpec::Coset { rank, subgroup: Vec::new() })?, f, &[], epsilon, options)?;
        cert.action = action.spec().clone();
        return Ok(cert);
    }
    product::assemble(&parts, action.spec().clone(), e.to_vec(), &origin).stage("combine_orbits")
}

/// Restriction along `G → G'` with `a_i ↦ images[i]`: `φ'(g) = φ(image(g))`,
/// witness unchanged.
pub fn restrict_approx(cert: &Certificate, images: &[GroupElement], f: &[GroupElement]) -> Result<Certificate> {
    let spec = ActionSpec::Restricted { inner: Box::new(cert.action.clone()), images: images.to_vec() };
    let action = Action::new(&spec)?;
    for g in f {
        let image = action.inner_element(g)?;
        if !image.is_identity() && !cert.f.contains(&image) {
            return Err(Error::RebuildRequired { element: g.to_string(), image: image.to_string() });
        }
    }
    let generator_images = images.iter().map(|g| cert.approx.phi(g)).collect::<Result<Vec<_>>>()?;
    let approx = SoficApproximation::new(action.group(), cert.approx.carrier_size, generator_images, cert.approx.strategy)?;
    let mut provenance = cert.provenance.clone();
    provenance.stages.push("restrict".into());
    Ok(Certificate {
        action: spec,
        f: f.to_vec(),
        e: cert.e.clone(),
        epsilon: cert.epsilon,
        approx,
        witness: cert.witness.clone(),
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn phi_is_a_homomorphism_on_pairs() {
        let a = Perm::from_images(vec![1, 0, 2]).unwrap();
        let b = Perm::from_images(vec![0, 2, 1]).unwrap();
        let approx = SoficApproximation::new(
            GroupShape::Square { rank: 1 },
            3,
            vec![a.clone(), b.clone()],
            Strategy::Core,
        )
        .unwrap();
        let one = Word::identity(1);
        let x = Word::parse("a", 1).unwrap();
        let xx = Word::parse("aa", 1).unwrap();
        assert_eq!(approx.phi(&GroupElement::Pair(x.clone(), one.clone())).unwrap(), a);
        assert_eq!(approx.phi(&GroupElement::Pair(one.clone(), x.clone())).unwrap(), b);
        assert_eq!(approx.phi(&GroupElement::Pair(x.clone(), x.clone())).unwrap(), a.compose(&b));
        assert!(approx.phi(&GroupElement::Pair(xx, one)).unwrap().is_identity());
    }

    #[test]
    fn word_image_composes_left_to_right() {
        let a = Perm::from_images(vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(vec![1, 0, 2]).unwrap();
        let approx = SoficApproximation::new(GroupShape::Free { rank: 2 }, 3, vec![a.clone(), b.clone()], Strategy::Core).unwrap();
        assert_eq!(approx.phi(&GroupElement::Single(w("ab"))).unwrap(), a.compose(&b));
        assert_eq!(approx.phi(&GroupElement::Single(w("A"))).unwrap(), a.inverse());
        assert!(approx.phi(&GroupElement::Single(w("1"))).unwrap().is_identity());
    }

    #[test]
    fn new_rejects_bad_shapes() {
        let id = Perm::identity(2);
        assert!(SoficApproximation::new(GroupShape::Free { rank: 2 }, 2, vec![id.clone()], Strategy::Core).is_err());
        assert!(SoficApproximation::new(GroupShape::Free { rank: 1 }, 3, vec![id], Strategy::Core).is_err());
    }

    #[test]
    fn strategy_round_trip() {
        for s in [Strategy::Literal, Strategy::Core] {
            assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
        }
        assert!("fast".parse::<Strategy>().is_err());
    }
}
