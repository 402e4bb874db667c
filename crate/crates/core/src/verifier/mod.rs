//! Independent checker for certificates.
//!
//! Nothing here trusts the builder: `φ` is recomputed from the stored
//! generator images (or overrides), points of `E` are re-canonicalised, and
//! every clause is evaluated exactly.
//!
//! At `ε > 0` the clauses are strict: `d(φ(gh), φ(g)φ(h)) < ε` and
//! `|S| > (1 − ε)|A|`. At `ε = 0` they read as equalities: defect `0` and
//! `S = A`.

mod mutate;
mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use crate::actions::{Action, GroupElement, Point};
use crate::builder::{Certificate, OrbitWitness, SoficApproximation};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::Rational;

pub use mutate::{invalidating_mutations, Mutation, MutationKind};
pub use oracle::{brute_force_witness, ORACLE_MAX_B, ORACLE_MAX_CARRIER, ORACLE_MAX_E};

/// Violations recorded in full per report; the rest are only counted.
const RECORDED_VIOLATIONS: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Clause {
    Unital,
    Multiplicative,
    Cardinality,
    Injectivity,
    Equivariance,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Unital => "unital",
            Clause::Multiplicative => "multiplicative",
            Clause::Cardinality => "cardinality",
            Clause::Injectivity => "injectivity",
            Clause::Equivariance => "equivariance",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// First failing clause, in the order unital, multiplicative,
    /// cardinality, injectivity, equivariance.
    Reject { clause: Clause, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub epsilon: Rational,
    pub carrier_size: usize,
    pub support_size: usize,
    pub unital: bool,
    /// Largest `d(φ(gh), φ(g)φ(h))` over `F × F`.
    pub defect: Rational,
    pub worst_pair: Option<(String, String)>,
    /// `|S| / |A|`.
    pub support_ratio: Rational,
    pub injective_rows: usize,
    /// Number of `(s, g, x)` with `φ(g)s ∈ S` and `α(g⁻¹)x ∈ E`.
    pub equivariance_checked: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    /// Cardinality, injectivity and equivariance all hold.
    pub fn orbit_ok(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v.clause, Clause::Cardinality | Clause::Injectivity | Clause::Equivariance))
    }

    pub fn failing_clause(&self) -> Option<Clause> {
        match &self.verdict {
            Verdict::Accept => None,
            Verdict::Reject { clause, .. } => Some(*clause),
        }
    }

    pub fn to_json(&self) -> Value {
        let (verdict, clause, detail) = match &self.verdict {
            Verdict::Accept => ("accept", Value::Null, Value::Null),
            Verdict::Reject { clause, detail } => ("reject", json!(clause.to_string()), json!(detail)),
        };
        json!({
            "verdict": verdict,
            "failing_clause": clause,
            "detail": detail,
            "epsilon": self.epsilon.to_string(),
            "carrier_size": self.carrier_size,
            "support_size": self.support_size,
            "unital": self.unital,
            "multiplicativity_defect": self.defect.to_string(),
            "worst_pair": self.worst_pair.as_ref().map(|(g, h)| json!([g, h])),
            "support_ratio": self.support_ratio.to_string(),
            "injective_rows": self.injective_rows,
            "equivariance_checked": self.equivariance_checked,
            "violation_count": self.violation_count,
            "violations": self.violations.iter().map(|v| json!({"clause": v.clause.to_string(), "detail": v.detail})).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Accept => writeln!(f, "verdict: accept")?,
            Verdict::Reject { clause, detail } => writeln!(f, "verdict: reject ({clause}: {detail})")?,
        }
        writeln!(f, "epsilon: {}", self.epsilon)?;
        writeln!(f, "unital: {}", self.unital)?;
        writeln!(f, "multiplicativity_defect: {}", self.defect)?;
        writeln!(f, "support: {}/{} = {}", self.support_size, self.carrier_size, self.support_ratio)?;
        writeln!(f, "injective_rows: {}/{}", self.injective_rows, self.support_size)?;
        writeln!(f, "equivariance_checked: {}", self.equivariance_checked)?;
        writeln!(f, "violations: {}", self.violation_count)?;
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.clause, v.detail)?;
        }
        Ok(())
    }
}

/// Normalised Hamming distance `|{i : p(i) ≠ q(i)}| / |A|`.
pub fn hamming(p: &Perm, q: &Perm) -> Result<Rational> {
    if p.len() != q.len() {
        return Err(Error::Mismatch(format!("permutations of {} and {} points", p.len(), q.len())));
    }
    if p.is_empty() {
        return Ok(Rational::from_integer(0));
    }
    Ok(Rational::new(p.disagreements(q) as u64, p.len() as u64))
}

/// `φ(1) = 1`.
pub fn check_unital(approx: &SoficApproximation) -> bool {
    approx
        .phi(&GroupElement::identity(approx.shape))
        .map(|p| p.is_identity())
        .unwrap_or(false)
}

/// Largest `d(φ(gh), φ(g) ∘ φ(h))` over `(g, h) ∈ F × F`, with the first pair
/// attaining it.
pub fn check_multiplicative(approx: &SoficApproximation, f: &[GroupElement]) -> Result<(Rational, Option<(usize, usize)>)> {
    let images = f.iter().map(|g| approx.phi(g)).collect::<Result<Vec<_>>>()?;
    let mut worst = (Rational::from_integer(0), None);
    for (i, g) in f.iter().enumerate() {
        for (j, h) in f.iter().enumerate() {
            let product = approx.phi(&g.multiply(h)?)?;
            let d = hamming(&product, &images[i].compose(&images[j]))?;
            if d > worst.0 || worst.1.is_none() {
                worst = (d, Some((i, j)));
            }
        }
    }
    if worst.0 == Rational::from_integer(0) {
        worst.1 = None;
    }
    Ok(worst)
}

fn check_witness_shape(n: usize, e: usize, witness: &OrbitWitness) -> Result<()> {
    let mut seen = vec![false; n];
    for (i, &s) in witness.support.iter().enumerate() {
        if s >= n {
            return Err(Error::malformed(format!("S[{i}]"), format!("{s} is outside 0..{n}")));
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::malformed(format!("S[{i}]"), format!("{s} is repeated")));
        }
    }
    if witness.pi.len() != witness.support.len() {
        return Err(Error::malformed("pi", "one row per entry of S is required"));
    }
    for (i, row) in witness.pi.iter().enumerate() {
        if row.len() != e {
            return Err(Error::malformed(format!("pi[{i}]"), format!("{} entries for {e} points", row.len())));
        }
        if let Some(j) = row.iter().position(|&b| b >= witness.labels.len()) {
            return Err(Error::malformed(format!("pi[{i}][{j}]"), "label outside B"));
        }
    }
    Ok(())
}

fn cardinality_holds(support: usize, carrier: usize, epsilon: Rational) -> bool {
    let zero = Rational::from_integer(0);
    if epsilon == zero {
        support == carrier
    } else {
        Rational::from_integer(support as u64) + epsilon * Rational::from_integer(carrier as u64)
            > Rational::from_integer(carrier as u64)
    }
}

fn defect_ok(defect: Rational, epsilon: Rational) -> bool {
    let zero = Rational::from_integer(0);
    if epsilon == zero {
        defect == zero
    } else {
        defect < epsilon
    }
}

/// Index in `E` of `α(g⁻¹)x` for every `g ∈ F`, `x ∈ E`, or `None` outside `E`.
pub(crate) fn moved_points(action: &Action, f: &[GroupElement], e: &[Point]) -> Result<Vec<Vec<Option<usize>>>> {
    let index: HashMap<&Point, usize> = e.iter().enumerate().map(|(i, p)| (p, i)).collect();
    f.iter()
        .map(|g| {
            let inv = g.inverse();
            e.iter().map(|x| Ok(index.get(&action.act(&inv, x)?).copied())).collect()
        })
        .collect()
}

/// Checks every clause for `(α, φ, F, E, S, B, π, ε)`.
pub fn check_orbit_witness(
    action: &Action,
    approx: &SoficApproximation,
    f: &[GroupElement],
    e: &[Point],
    witness: &OrbitWitness,
    epsilon: Rational,
) -> Result<VerificationReport> {
    let n = approx.carrier_size;
    check_witness_shape(n, e.len(), witness)?;
    for g in f {
        g.check_shape(action.group())?;
    }
    let e: Vec<Point> = e.iter().map(|x| action.canonical_point(x)).collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let unital = check_unital(approx);
    if !unital {
        violations.push(Violation { clause: Clause::Unital, detail: "phi(1) is not the identity".into() });
    }
    let (defect, worst) = check_multiplicative(approx, f)?;
    let worst_pair = worst.map(|(i, j)| (f[i].to_string(), f[j].to_string()));
    if !defect_ok(defect, epsilon) {
        let (g, h) = worst_pair.clone().unwrap_or_default();
        violations.push(Violation {
            clause: Clause::Multiplicative,
            detail: format!("d(phi({g}{h}), phi({g})phi({h})) = {defect}, epsilon {epsilon}"),
        });
    }
    let support_size = witness.support.len();
    if !cardinality_holds(support_size, n, epsilon) {
        violations.push(Violation {
            clause: Clause::Cardinality,
            detail: format!("|S| = {support_size} against |A| = {n} at epsilon {epsilon}"),
        });
    }

    let mut injective_rows = 0;
    for (i, row) in witness.pi.iter().enumerate() {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut clash = None;
        for (x, &b) in row.iter().enumerate() {
            if let Some(&y) = first.get(&b) {
                clash = Some((y, x, b));
                break;
            }
            first.insert(b, x);
        }
        match clash {
            None => injective_rows += 1,
            Some((y, x, b)) => violations.push(Violation {
                clause: Clause::Injectivity,
                detail: format!(
                    "pi_{} sends {} and {} to {}",
                    witness.support[i], e[y], e[x], witness.labels[b]
                ),
            }),
        }
    }

    let images = f.iter().map(|g| approx.phi(g)).collect::<Result<Vec<_>>>()?;
    let moved = moved_points(action, f, &e)?;
    let mut row_of = vec![None; n];
    for (i, &s) in witness.support.iter().enumerate() {
        row_of[s] = Some(i);
    }
    let mut checked = 0;
    for (si, &s) in witness.support.iter().enumerate() {
        for (gi, g) in f.iter().enumerate() {
            let t = images[gi].apply(s);
            let Some(ti) = row_of[t] else { continue };
            for (xi, x) in e.iter().enumerate() {
                let Some(yi) = moved[gi][xi] else { continue };
                checked += 1;
                let (left, right) = (witness.pi[ti][xi], witness.pi[si][yi]);
                if left != right {
                    violations.push(Violation {
                        clause: Clause::Equivariance,
                        detail: format!(
                            "(s, g, x) = ({s}, {g}, {x}): pi_{t}({x}) = {} but pi_{s}({}) = {}",
                            witness.labels[left], e[yi], witness.labels[right]
                        ),
                    });
                }
            }
        }
    }

    violations.sort_by_key(|v| v.clause);
    let verdict = match violations.first() {
        None => Verdict::Accept,
        Some(v) => Verdict::Reject { clause: v.clause, detail: v.detail.clone() },
    };
    let violation_count = violations.len();
    violations.truncate(RECORDED_VIOLATIONS);
    Ok(VerificationReport {
        epsilon,
        carrier_size: n,
        support_size,
        unital,
        defect,
        worst_pair,
        support_ratio: Rational::new(support_size as u64, n as u64),
        injective_rows,
        equivariance_checked: checked,
        violation_count,
        violations,
        verdict,
    })
}

/// Verifies a parsed certificate.
pub fn verify(cert: &Certificate) -> Result<VerificationReport> {
    let action = Action::new(&cert.action)?;
    check_orbit_witness(&action, &cert.approx, &cert.f, &cert.e, &cert.witness, cert.epsilon)
}

/// Verifies certificate JSON text; schema violations are `Malformed` errors
/// naming the field.
pub fn verify_certificate(text: &str) -> Result<VerificationReport> {
    verify(&Certificate::from_json(text)?)
}

pub fn verify_certificate_file(path: impl AsRef<Path>) -> Result<VerificationReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    verify_certificate(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{ActionSpec, GroupShape};
    use crate::builder::{approximate, BuildOptions, Strategy as Carrier};
    use crate::word::Word;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn cyclic_cert(epsilon: Rational) -> Certificate {
        let spec = ActionSpec::Coset { rank: 2, subgroup: vec![w("a")] };
        let f = vec![GroupElement::Single(w("a")), GroupElement::Single(w("b"))];
        let e = vec![Point::Word(w("1")), Point::Word(w("b"))];
        approximate(&spec, &f, &e, epsilon, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn hamming_examples() {
        let id2 = Perm::identity(2);
        assert_eq!(hamming(&id2, &id2).unwrap(), Rational::from_integer(0));
        assert_eq!(hamming(&id2, &Perm::transposition(2, 0, 1)).unwrap(), Rational::from_integer(1));
        assert_eq!(hamming(&Perm::identity(5), &Perm::transposition(5, 1, 3)).unwrap(), Rational::new(2, 5));
        assert!(hamming(&id2, &Perm::identity(3)).is_err());
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric((p, q, r) in (1usize..9).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n), perm_strategy(n)))) {
            let zero = Rational::from_integer(0);
            prop_assert_eq!(hamming(&p, &q).unwrap(), hamming(&q, &p).unwrap());
            prop_assert_eq!(hamming(&p, &q).unwrap() == zero, p == q);
            prop_assert!(hamming(&p, &r).unwrap() <= hamming(&p, &q).unwrap() + hamming(&q, &r).unwrap());
        }
    }

    #[test]
    fn built_certificate_is_accepted() {
        for epsilon in [Rational::from_integer(0), Rational::new(1, 10)] {
            let report = verify(&cyclic_cert(epsilon)).unwrap();
            assert!(report.accepted(), "{report}");
            assert_eq!(report.defect, Rational::from_integer(0));
            assert!(report.equivariance_checked > 0);
        }
    }

    #[test]
    fn multiplicativity_of_builder_output_is_zero_for_any_f() {
        let cert = cyclic_cert(Rational::from_integer(0));
        let f: Vec<GroupElement> = ["1", "a", "B", "abA", "bbb"].iter().map(|s| GroupElement::Single(w(s))).collect();
        assert_eq!(check_multiplicative(&cert.approx, &f).unwrap().0, Rational::from_integer(0));
        assert_eq!(check_multiplicative(&cert.approx, &[]).unwrap(), (Rational::from_integer(0), None));
    }

    #[test]
    fn mutated_generator_image_breaks_multiplicativity() {
        let approx = SoficApproximation::new(GroupShape::Free { rank: 1 }, 2, vec![Perm::identity(2)], Carrier::Core).unwrap();
        let a = GroupElement::Single(Word::parse("a", 1).unwrap());
        let mut mutated = approx.clone();
        mutated.overrides.insert(a.clone(), Perm::transposition(2, 0, 1));
        let f = vec![a.clone(), a.inverse()];
        assert_eq!(check_multiplicative(&mutated, &f).unwrap().0, Rational::from_integer(1));
        assert_eq!(check_multiplicative(&approx, &f).unwrap().0, Rational::from_integer(0));
    }

    #[test]
    fn overridden_identity_is_not_unital() {
        let mut approx = SoficApproximation::new(GroupShape::Free { rank: 1 }, 2, vec![Perm::identity(2)], Carrier::Core).unwrap();
        assert!(check_unital(&approx));
        approx.overrides.insert(GroupElement::identity(approx.shape), Perm::transposition(2, 0, 1));
        assert!(!check_unital(&approx));
        let one = SoficApproximation::new(GroupShape::Free { rank: 1 }, 1, vec![Perm::identity(1)], Carrier::Core).unwrap();
        assert!(check_unital(&one));
    }

    #[test]
    fn swapped_pi_values_are_rejected() {
        let mut cert = cyclic_cert(Rational::from_integer(0));
        cert.witness.pi[0].swap(0, 1);
        let report = verify(&cert).unwrap();
        assert_eq!(report.failing_clause(), Some(Clause::Equivariance), "{report}");
        assert!(report.violations[0].detail.contains("(s, g, x)"));
        cert.witness.pi[0][1] = cert.witness.pi[0][0];
        assert_eq!(verify(&cert).unwrap().failing_clause(), Some(Clause::Injectivity));
    }

    #[test]
    fn trivial_instance_is_accepted() {
        let spec = ActionSpec::Coset { rank: 2, subgroup: vec![w("a")] };
        let action = Action::new(&spec).unwrap();
        let approx = SoficApproximation::new(GroupShape::Free { rank: 2 }, 1, vec![Perm::identity(1); 2], Carrier::Core).unwrap();
        let witness = OrbitWitness { support: vec![0], labels: vec!["0".into()], pi: vec![vec![0]] };
        let report = check_orbit_witness(&action, &approx, &[], &[Point::Word(w("1"))], &witness, Rational::from_integer(0)).unwrap();
        assert!(report.accepted());
    }

    #[test]
    fn epsilon_boundaries() {
        assert!(cardinality_holds(4, 4, Rational::from_integer(0)));
        assert!(!cardinality_holds(3, 4, Rational::from_integer(0)));
        assert!(cardinality_holds(3, 4, Rational::new(1, 2)));
        // |S| > (1 - 1/4)|A| is strict.
        assert!(!cardinality_holds(3, 4, Rational::new(1, 4)));
        assert!(cardinality_holds(0, 4, Rational::from_integer(2)));
        assert!(defect_ok(Rational::from_integer(0), Rational::from_integer(0)));
        assert!(!defect_ok(Rational::new(1, 10), Rational::new(1, 10)));
    }

    #[test]
    fn malformed_witnesses_are_schema_errors() {
        let mut cert = cyclic_cert(Rational::from_integer(0));
        cert.witness.pi[0].pop();
        assert!(matches!(verify(&cert), Err(Error::Malformed { .. })));
        let mut cert = cyclic_cert(Rational::from_integer(0));
        cert.witness.support[0] = 99;
        assert!(matches!(verify(&cert), Err(Error::Malformed { .. })));
    }

    #[test]
    fn membership_in_e_uses_canonical_points() {
        // aH = H for H = ⟨a⟩, so listing E as the non-canonical "a" still
        // triggers the equivariance check at g = a.
        let mut cert = cyclic_cert(Rational::from_integer(0));
        cert.e[0] = Point::Word(w("a"));
        let report = verify(&cert).unwrap();
        assert!(report.accepted());
        assert_eq!(report.equivariance_checked, verify(&cyclic_cert(Rational::from_integer(0))).unwrap().equivariance_checked);
    }
}
