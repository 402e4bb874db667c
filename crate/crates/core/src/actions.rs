//! Actions of `F_k` and `F_k × F_k`: coset actions `G ↷ G/H`, the biregular
//! action `G × G ↷ G`, restrictions along homomorphisms, and disjoint
//! unions of those.
//!
//! Left cosets throughout: `g · xH = gxH`, and `(h, k) · x = h x k⁻¹`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::stallings::{core_graph, StallingsGraph};
use crate::word::{letters_in_order, Word};

/// Default word-length bound for orbit detection by search.
pub const DEFAULT_ORBIT_BOUND: usize = 6;

/// The acting group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroupShape {
    /// `F_k`.
    Free { rank: usize },
    /// `F_k × F_k`.
    Square { rank: usize },
}

impl GroupShape {
    pub fn rank(&self) -> usize {
        match *self {
            GroupShape::Free { rank } | GroupShape::Square { rank } => rank,
        }
    }

    /// Number of generator images a homomorphism into `Sym(A)` needs.
    pub fn generator_count(&self) -> usize {
        match *self {
            GroupShape::Free { rank } => rank,
            GroupShape::Square { rank } => 2 * rank,
        }
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupShape::Free { rank } => write!(f, "F_{rank}"),
            GroupShape::Square { rank } => write!(f, "F_{rank} x F_{rank}"),
        }
    }
}

/// An element of `F_k` or of `F_k × F_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum GroupElement {
    Single(Word),
    Pair(Word, Word),
}

impl GroupElement {
    pub fn identity(shape: GroupShape) -> Self {
        match shape {
            GroupShape::Free { rank } => GroupElement::Single(Word::identity(rank)),
            GroupShape::Square { rank } => {
                GroupElement::Pair(Word::identity(rank), Word::identity(rank))
            }
        }
    }

    pub fn shape(&self) -> GroupShape {
        match self {
            GroupElement::Single(w) => GroupShape::Free { rank: w.rank() },
            GroupElement::Pair(h, _) => GroupShape::Square { rank: h.rank() },
        }
    }

    /// Parses `w` for `F_k` and `(h,k)` for `F_k × F_k`.
    pub fn parse(text: &str, shape: GroupShape) -> Result<Self> {
        let text = text.trim();
        match shape {
            GroupShape::Free { rank } => Ok(GroupElement::Single(Word::parse(text, rank)?)),
            GroupShape::Square { rank } => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::TypeMismatch(format!("expected a pair (h,k), got {text:?}")))?;
                let (h, k) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::TypeMismatch(format!("expected a pair (h,k), got {text:?}")))?;
                Ok(GroupElement::Pair(Word::parse(h, rank)?, Word::parse(k, rank)?))
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Single(w) => w.is_identity(),
            GroupElement::Pair(h, k) => h.is_identity() && k.is_identity(),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Single(w) => GroupElement::Single(w.inverse()),
            GroupElement::Pair(h, k) => GroupElement::Pair(h.inverse(), k.inverse()),
        }
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<Self> {
        match (self, other) {
            (GroupElement::Single(u), GroupElement::Single(v)) => Ok(GroupElement::Single(u.multiply(v)?)),
            (GroupElement::Pair(h, k), GroupElement::Pair(h2, k2)) => {
                Ok(GroupElement::Pair(h.multiply(h2)?, k.multiply(k2)?))
            }
            _ => Err(Error::TypeMismatch(format!("cannot multiply {self} by {other}"))),
        }
    }

    pub(crate) fn check_shape(&self, shape: GroupShape) -> Result<()> {
        if self.shape() != shape {
            return Err(Error::TypeMismatch(format!("element {self} is not in {shape}")));
        }
        Ok(())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Single(w) => write!(f, "{w}"),
            GroupElement::Pair(h, k) => write!(f, "({h},{k})"),
        }
    }
}

/// A point of an action. Words name cosets by their shortlex-minimal
/// representative or, for the biregular action, group elements; tags select
/// a component of a disjoint union.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Point {
    Word(Word),
    Tagged(usize, Box<Point>),
}

impl Point {
    pub fn word(&self) -> Option<&Word> {
        match self {
            Point::Word(w) => Some(w),
            Point::Tagged(..) => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Word(w) => write!(f, "{w}"),
            Point::Tagged(tag, p) => write!(f, "{tag}:{p}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ActionSpec {
    /// `F_k ↷ F_k/H` by left multiplication, `H = ⟨subgroup⟩`.
    Coset { rank: usize, subgroup: Vec<Word> },
    /// `F_k × F_k ↷ F_k`, `(h, k) · x = h x k⁻¹`.
    Biregular { rank: usize },
    /// Restriction of `inner` along the homomorphism `F_m → G'` sending the
    /// `i`-th generator to `images[i]`.
    Restricted { inner: Box<ActionSpec>, images: Vec<GroupElement> },
    /// Disjoint union of actions of one group; points carry component tags.
    DisjointUnion { parts: Vec<ActionSpec> },
}

impl ActionSpec {
    /// Restriction of the biregular action along `g ↦ (g, g)`: conjugation.
    pub fn conjugation(rank: usize) -> Self {
        let images = (1..=rank)
            .map(|i| {
                let g = Word::reduced(rank, [i as i32]);
                GroupElement::Pair(g.clone(), g)
            })
            .collect();
        ActionSpec::Restricted { inner: Box::new(ActionSpec::Biregular { rank }), images }
    }

    pub fn group(&self) -> GroupShape {
        match self {
            ActionSpec::Coset { rank, .. } => GroupShape::Free { rank: *rank },
            ActionSpec::Biregular { rank } => GroupShape::Square { rank: *rank },
            ActionSpec::Restricted { images, .. } => GroupShape::Free { rank: images.len() },
            ActionSpec::DisjointUnion { parts } => {
                parts.first().map(ActionSpec::group).unwrap_or(GroupShape::Free { rank: 1 })
            }
        }
    }

    /// Restriction along the diagonal `F_k → F_k × F_k` of the biregular
    /// action.
    pub fn is_conjugation(&self) -> bool {
        match self {
            ActionSpec::Restricted { inner, images } => match inner.as_ref() {
                ActionSpec::Biregular { rank } => {
                    images.len() == *rank
                        && images.iter().enumerate().all(|(i, g)| match g {
                            GroupElement::Pair(h, k) => h == k && h.letters() == [i as i32 + 1],
                            _ => false,
                        })
                }
                _ => false,
            },
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ActionSpec::Coset { rank, subgroup } => {
                if *rank == 0 {
                    return Err(Error::InvalidRank(0));
                }
                for h in subgroup {
                    if h.rank() != *rank {
                        return Err(Error::RankMismatch { left: *rank, right: h.rank() });
                    }
                }
                Ok(())
            }
            ActionSpec::Biregular { rank } => {
                if *rank == 0 {
                    return Err(Error::InvalidRank(0));
                }
                Ok(())
            }
            ActionSpec::Restricted { inner, images } => {
                inner.validate()?;
                if images.is_empty() {
                    return Err(Error::InvalidRank(0));
                }
                let shape = inner.group();
                images.iter().try_for_each(|g| g.check_shape(shape))
            }
            ActionSpec::DisjointUnion { parts } => {
                let Some(first) = parts.first() else {
                    return Err(Error::TypeMismatch("disjoint union of no actions".into()));
                };
                for part in parts {
                    part.validate()?;
                    if part.group() != first.group() {
                        return Err(Error::TypeMismatch(format!(
                            "components act by {} and {}",
                            first.group(),
                            part.group()
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Coset { graph: StallingsGraph },
    Biregular { rank: usize },
    Restricted { inner: Box<Action>, images: Vec<GroupElement> },
    Disjoint { parts: Vec<Action> },
}

/// An [`ActionSpec`] prepared for evaluation (subgroup graphs folded).
#[derive(Clone, Debug)]
pub struct Action {
    spec: ActionSpec,
    kind: Kind,
}

impl Action {
    pub fn new(spec: &ActionSpec) -> Result<Self> {
        spec.validate()?;
        let kind = match spec {
            ActionSpec::Coset { rank, subgroup } => Kind::Coset { graph: core_graph(subgroup, *rank)? },
            ActionSpec::Biregular { rank } => Kind::Biregular { rank: *rank },
            ActionSpec::Restricted { inner, images } => {
                Kind::Restricted { inner: Box::new(Action::new(inner)?), images: images.clone() }
            }
            ActionSpec::DisjointUnion { parts } => {
                Kind::Disjoint { parts: parts.iter().map(Action::new).collect::<Result<_>>()? }
            }
        };
        Ok(Action { spec: spec.clone(), kind })
    }

    pub fn spec(&self) -> &ActionSpec {
        &self.spec
    }

    pub fn group(&self) -> GroupShape {
        self.spec.group()
    }

    /// Subgroup graph of a coset action.
    pub fn subgroup_graph(&self) -> Option<&StallingsGraph> {
        match &self.kind {
            Kind::Coset { graph } => Some(graph),
            _ => None,
        }
    }

    /// Rank of the free group whose words name points.
    fn point_rank(&self) -> Option<usize> {
        match &self.kind {
            Kind::Coset { graph } => Some(graph.rank()),
            Kind::Biregular { rank } => Some(*rank),
            Kind::Restricted { inner, .. } => inner.point_rank(),
            Kind::Disjoint { .. } => None,
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        GroupElement::parse(text, self.group())
    }

    /// Parses a point (`word`, or `tag:point` for disjoint unions) and
    /// canonicalises it.
    pub fn parse_point(&self, text: &str) -> Result<Point> {
        let point = match &self.kind {
            Kind::Disjoint { parts } => {
                let (tag, rest) = text
                    .split_once(':')
                    .ok_or_else(|| Error::TypeMismatch(format!("expected tag:point, got {text:?}")))?;
                let tag: usize = tag
                    .trim()
                    .parse()
                    .map_err(|_| Error::TypeMismatch(format!("bad component tag in {text:?}")))?;
                let part = parts
                    .get(tag)
                    .ok_or_else(|| Error::TypeMismatch(format!("no component {tag}")))?;
                Point::Tagged(tag, Box::new(part.parse_point(rest)?))
            }
            _ => Point::Word(Word::parse(text, self.point_rank().expect("word points"))?),
        };
        self.canonical_point(&point)
    }

    /// Canonical representative: equal points of the action give equal
    /// values.
    pub fn canonical_point(&self, point: &Point) -> Result<Point> {
        match (&self.kind, point) {
            (Kind::Coset { graph }, Point::Word(w)) => {
                check_rank(graph.rank(), w)?;
                Ok(Point::Word(graph.coset_representative(w)))
            }
            (Kind::Biregular { rank }, Point::Word(w)) => {
                check_rank(*rank, w)?;
                Ok(point.clone())
            }
            (Kind::Restricted { inner, .. }, _) => inner.canonical_point(point),
            (Kind::Disjoint { parts }, Point::Tagged(tag, p)) => {
                let part = parts
                    .get(*tag)
                    .ok_or_else(|| Error::TypeMismatch(format!("no component {tag}")))?;
                Ok(Point::Tagged(*tag, Box::new(part.canonical_point(p)?)))
            }
            _ => Err(Error::TypeMismatch(format!("point {point} does not belong to this action"))),
        }
    }

    /// Canonical point named by a word.
    pub fn point_of(&self, w: &Word) -> Result<Point> {
        self.canonical_point(&Point::Word(w.clone()))
    }

    /// Image of the `F_m`-element `g` under the restriction homomorphism.
    fn restricted_image(images: &[GroupElement], inner: GroupShape, g: &Word) -> GroupElement {
        let mut out = GroupElement::identity(inner);
        for &l in g.letters() {
            let image = &images[l.unsigned_abs() as usize - 1];
            let factor = if l > 0 { image.clone() } else { image.inverse() };
            out = out.multiply(&factor).expect("validated shapes");
        }
        out
    }

    /// Image of `g` in the group acting on the innermost action, for
    /// restricted actions; `g` itself otherwise.
    pub fn inner_element(&self, g: &GroupElement) -> Result<GroupElement> {
        g.check_shape(self.group())?;
        match (&self.kind, g) {
            (Kind::Restricted { inner, images }, GroupElement::Single(w)) => {
                Ok(Self::restricted_image(images, inner.group(), w))
            }
            _ => Ok(g.clone()),
        }
    }

    /// `α(g) x`, canonicalised.
    pub fn act(&self, g: &GroupElement, x: &Point) -> Result<Point> {
        g.check_shape(self.group())?;
        match (&self.kind, g, x) {
            (Kind::Coset { graph }, GroupElement::Single(g), Point::Word(x)) => {
                check_rank(graph.rank(), x)?;
                Ok(Point::Word(graph.coset_representative(&g.mul_unchecked(x))))
            }
            (Kind::Biregular { rank }, GroupElement::Pair(h, k), Point::Word(x)) => {
                check_rank(*rank, x)?;
                Ok(Point::Word(h.mul_unchecked(x).mul_unchecked(&k.inverse())))
            }
            (Kind::Restricted { inner, images }, GroupElement::Single(w), _) => {
                inner.act(&Self::restricted_image(images, inner.group(), w), x)
            }
            (Kind::Disjoint { parts }, _, Point::Tagged(tag, p)) => {
                let part = parts
                    .get(*tag)
                    .ok_or_else(|| Error::TypeMismatch(format!("no component {tag}")))?;
                Ok(Point::Tagged(*tag, Box::new(part.act(g, p)?)))
            }
            _ => Err(Error::TypeMismatch(format!("cannot act by {g} on {x}"))),
        }
    }
}

fn check_rank(rank: usize, w: &Word) -> Result<()> {
    if w.rank() != rank {
        return Err(Error::RankMismatch { left: rank, right: w.rank() });
    }
    Ok(())
}

fn push_unique(list: &mut Vec<Word>, seen: &mut HashSet<Word>, w: Word) {
    if seen.insert(w.clone()) {
        list.push(w);
    }
}

/// Words a separating subgroup `K` must avoid and contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationTargets {
    /// `σ(x)⁻¹σ(y)` for distinct `x, y ∈ E`; none lie in `H`.
    pub avoid: Vec<Word>,
    /// `σ(α(g⁻¹)x)⁻¹ g⁻¹ σ(x)` for `x ∈ E`, `g ∈ F`; all lie in `H`.
    pub contain: Vec<Word>,
}

impl SeparationTargets {
    /// Avoid set with each inverse pair represented once, by its
    /// shortlex-smaller member; `w ∉ K` iff `w⁻¹ ∉ K`.
    pub fn avoid_up_to_inverse(&self) -> Vec<Word> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in &self.avoid {
            let inv = w.inverse();
            let rep = if inv < *w { inv } else { w.clone() };
            push_unique(&mut out, &mut seen, rep);
        }
        out
    }
}

/// Separation targets for a coset action, with `σ` the canonical
/// representative.
pub fn separation_targets(action: &Action, f: &[GroupElement], e: &[Point]) -> Result<SeparationTargets> {
    let graph = action
        .subgroup_graph()
        .ok_or_else(|| Error::TypeMismatch("separation targets need a coset action".into()))?;
    let sigma: Vec<Word> = e
        .iter()
        .map(|x| action.canonical_point(x).map(|p| p.word().cloned().unwrap()))
        .collect::<Result<_>>()?;
    let mut distinct = HashSet::new();
    for (x, s) in e.iter().zip(&sigma) {
        if !distinct.insert(s) {
            return Err(Error::DuplicatePoint(x.to_string()));
        }
    }

    let mut avoid = Vec::new();
    let mut seen = HashSet::new();
    for (i, sx) in sigma.iter().enumerate() {
        for (j, sy) in sigma.iter().enumerate() {
            if i != j {
                push_unique(&mut avoid, &mut seen, sx.inverse().mul_unchecked(sy));
            }
        }
    }

    let mut contain = Vec::new();
    let mut seen = HashSet::new();
    for (x, sx) in e.iter().zip(&sigma) {
        for g in f {
            let GroupElement::Single(gw) = g else {
                return Err(Error::TypeMismatch(format!("element {g} does not act on cosets")));
            };
            let g_inv = gw.inverse();
            let moved = action.act(&GroupElement::Single(g_inv.clone()), x)?;
            let s_moved = moved.word().unwrap();
            push_unique(&mut contain, &mut seen, s_moved.inverse().mul_unchecked(&g_inv).mul_unchecked(sx));
        }
    }

    if let Some(w) = avoid.iter().find(|w| w.is_identity() || graph.contains(w)) {
        return Err(Error::Internal(format!("avoid word {w} lies in H")));
    }
    if let Some(w) = contain.iter().find(|w| !graph.contains(w)) {
        return Err(Error::Internal(format!("contain word {w} is not in H")));
    }
    Ok(SeparationTargets { avoid, contain })
}

/// Stabilizer data attached to an orbit class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    /// The orbit is isomorphic to `F_k/K` with `K = ⟨generators⟩` the
    /// stabilizer of the first member; member `i` is the image of the coset
    /// `transports[i]·K`.
    Subgroup { rank: usize, generators: Vec<Word>, transports: Vec<Word> },
    /// `{(h, k) : h · point · k⁻¹ = point}` in `F_k × F_k`.
    Biregular { point: Word },
    /// Orbit established by search; no stabilizer description.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    /// Indices into `E`, ascending.
    pub members: Vec<usize>,
    pub stabilizer: Stabilizer,
}

/// Partitions `E` into orbits.
///
/// Coset and biregular actions are transitive. Conjugation is decided
/// exactly by cyclic reduction, with centralisers `⟨root(x)⟩`. Other actions
/// fall back to a search over words of length at most `bound` in the
/// generators and `F`, failing when two classes cannot be joined.
pub fn orbit_partition(action: &Action, e: &[Point], f: &[GroupElement], bound: usize) -> Result<Vec<OrbitClass>> {
    if e.is_empty() {
        return Ok(Vec::new());
    }
    let e: Vec<Point> = e.iter().map(|x| action.canonical_point(x)).collect::<Result<_>>()?;
    match &action.kind {
        Kind::Coset { graph } => {
            let rank = graph.rank();
            let rep = e[0].word().unwrap().clone();
            let subgroup = match action.spec() {
                ActionSpec::Coset { subgroup, .. } => subgroup,
                _ => unreachable!(),
            };
            let generators = subgroup.iter().map(|h| h.conjugate_by(&rep)).collect::<Result<_>>()?;
            let rep_inv = rep.inverse();
            let transports = e.iter().map(|x| x.word().unwrap().mul_unchecked(&rep_inv)).collect();
            Ok(vec![OrbitClass {
                members: (0..e.len()).collect(),
                stabilizer: Stabilizer::Subgroup { rank, generators, transports },
            }])
        }
        Kind::Biregular { .. } => Ok(vec![OrbitClass {
            members: (0..e.len()).collect(),
            stabilizer: Stabilizer::Biregular { point: e[0].word().unwrap().clone() },
        }]),
        _ if action.spec().is_conjugation() => conjugacy_classes(action.group().rank(), &e),
        Kind::Disjoint { parts } => {
            let mut classes = Vec::new();
            for (tag, part) in parts.iter().enumerate() {
                let members: Vec<usize> =
                    (0..e.len()).filter(|&i| matches!(&e[i], Point::Tagged(t, _) if *t == tag)).collect();
                let points: Vec<Point> = members
                    .iter()
                    .map(|&i| match &e[i] {
                        Point::Tagged(_, p) => (**p).clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                for class in orbit_partition(part, &points, f, bound)? {
                    classes.push(OrbitClass {
                        members: class.members.iter().map(|&j| members[j]).collect(),
                        stabilizer: class.stabilizer,
                    });
                }
            }
            Ok(classes)
        }
        _ => bounded_orbits(action, &e, f, bound),
    }
}

fn conjugacy_classes(rank: usize, e: &[Point]) -> Result<Vec<OrbitClass>> {
    let mut classes: Vec<(Word, Vec<usize>, Vec<Word>)> = Vec::new();
    'points: for (i, p) in e.iter().enumerate() {
        let y = p.word().unwrap();
        for (rep, members, transports) in classes.iter_mut() {
            if let Some(t) = rep.conjugator_to(y)? {
                members.push(i);
                transports.push(t);
                continue 'points;
            }
        }
        classes.push((y.clone(), vec![i], vec![Word::identity(rank)]));
    }
    Ok(classes
        .into_iter()
        .map(|(rep, members, transports)| {
            let generators = if rep.is_identity() {
                (1..=rank).map(|i| Word::reduced(rank, [i as i32])).collect()
            } else {
                vec![rep.root()]
            };
            OrbitClass { members, stabilizer: Stabilizer::Subgroup { rank, generators, transports } }
        })
        .collect())
}

fn bounded_orbits(action: &Action, e: &[Point], f: &[GroupElement], bound: usize) -> Result<Vec<OrbitClass>> {
    let shape = action.group();
    let mut moves: Vec<GroupElement> = match shape {
        GroupShape::Free { rank } => letters_in_order(rank)
            .map(|l| GroupElement::Single(Word::reduced(rank, [l])))
            .collect(),
        GroupShape::Square { rank } => letters_in_order(rank)
            .flat_map(|l| {
                let g = Word::reduced(rank, [l]);
                let one = Word::identity(rank);
                [GroupElement::Pair(g.clone(), one.clone()), GroupElement::Pair(one, g)]
            })
            .collect(),
    };
    for g in f {
        moves.push(g.clone());
        moves.push(g.inverse());
    }
    let index: HashMap<&Point, usize> = e.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..e.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for (i, start) in e.iter().enumerate() {
        let mut seen: HashSet<Point> = HashSet::from([start.clone()]);
        let mut frontier = vec![start.clone()];
        for _ in 0..bound {
            let mut next = Vec::new();
            for p in &frontier {
                for g in &moves {
                    let q = action.act(g, p)?;
                    if seen.insert(q.clone()) {
                        if let Some(&j) = index.get(&q) {
                            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                            parent[a.max(b)] = a.min(b);
                        }
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
    }
    let mut classes: Vec<OrbitClass> = Vec::new();
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    for i in 0..e.len() {
        let root = find(&mut parent, i);
        let slot = *by_root.entry(root).or_insert_with(|| {
            classes.push(OrbitClass { members: Vec::new(), stabilizer: Stabilizer::Unknown });
            classes.len() - 1
        });
        classes[slot].members.push(i);
    }
    if classes.len() > 1 {
        return Err(Error::OrbitUndecidable {
            left: e[classes[0].members[0]].to_string(),
            right: e[classes[1].members[0]].to_string(),
            bound,
        });
    }
    Ok(classes)
}
