use std::fmt;

use super::moved_points;
use crate::actions::{Action, GroupElement};
use crate::builder::Certificate;
use crate::error::{Error, Result};
use crate::word::Word;
use crate::Rational;

/// Mutations produced per kind.
const PER_KIND: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MutationKind {
    /// Two entries of one generator image swapped.
    GeneratorImage,
    /// One `π_s` value overwritten.
    PiValue,
    /// One point removed from `S`.
    SupportShrink,
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationKind::GeneratorImage => "generator_image",
            MutationKind::PiValue => "pi_value",
            MutationKind::SupportShrink => "support_shrink",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub kind: MutationKind,
    pub description: String,
    pub certificate: Certificate,
}

/// Generator block index of `g` when `φ(g)` is a single stored image.
fn generator_slot(g: &GroupElement) -> Option<usize> {
    let single = |w: &Word| match w.letters() {
        [l] if *l > 0 => Some(*l as usize - 1),
        _ => None,
    };
    match g {
        GroupElement::Single(w) => single(w),
        GroupElement::Pair(h, k) if k.is_identity() => single(h),
        GroupElement::Pair(h, k) if h.is_identity() => single(k).map(|i| i + k.rank()),
        GroupElement::Pair(..) => None,
    }
}

/// Single-entry mutations of an accepted, homomorphism-backed certificate,
/// each of which provably breaks a clause.
///
/// * Generator image: for a generator `a ∈ F`, a point `x` with
///   `α(a⁻¹)x ∈ E` and carrier points `s₁, s₂` whose images `tᵢ = φ(a)sᵢ`
///   have `π_{t₁}(x) ≠ π_{t₂}(x)`, swap `φ(a)s₁` and `φ(a)s₂`; equivariance
///   then fails at `(s₁, a, x)`. Needs `S = A`.
/// * π value: set `π_s(x) := π_s(y)` for `x ≠ y`; injectivity fails.
/// * Support shrink at `ε = 0`: drop one point of `S`; cardinality fails.
pub fn invalidating_mutations(cert: &Certificate) -> Result<Vec<Mutation>> {
    if !cert.approx.overrides.is_empty() {
        return Err(Error::Mismatch("mutations need a homomorphism-backed certificate".into()));
    }
    let action = Action::new(&cert.action)?;
    let e: Vec<_> = cert.e.iter().map(|x| action.canonical_point(x)).collect::<Result<_>>()?;
    let n = cert.approx.carrier_size;
    let mut out = Vec::new();

    if cert.witness.support.len() == n && cert.witness.support.iter().enumerate().all(|(i, &s)| i == s) {
        let moved = moved_points(&action, &cert.f, &e)?;
        let pi = &cert.witness.pi;
        let mut count = 0;
        'images: for (gi, g) in cert.f.iter().enumerate() {
            let Some(slot) = generator_slot(g) else { continue };
            if slot >= cert.approx.generator_images.len() {
                continue;
            }
            let image = &cert.approx.generator_images[slot];
            for x in (0..e.len()).filter(|&x| moved[gi][x].is_some()) {
                for s1 in 0..n {
                    let t1 = image.apply(s1);
                    let Some(s2) = (0..n).find(|&s2| pi[image.apply(s2)][x] != pi[t1][x]) else { continue };
                    let mut mutated = cert.clone();
                    mutated.approx.generator_images[slot].swap_images(s1, s2);
                    out.push(Mutation {
                        kind: MutationKind::GeneratorImage,
                        description: format!("swap images of {s1} and {s2} under generator {slot} ({g}), breaking x = {}", e[x]),
                        certificate: mutated,
                    });
                    count += 1;
                    if count == PER_KIND {
                        break 'images;
                    }
                }
            }
        }
    }

    let mut count = 0;
    'rows: for (i, row) in cert.witness.pi.iter().enumerate() {
        for x in 0..row.len() {
            for y in (0..row.len()).filter(|&y| y != x) {
                let mut mutated = cert.clone();
                mutated.witness.pi[i][x] = row[y];
                out.push(Mutation {
                    kind: MutationKind::PiValue,
                    description: format!("pi_{}({}) := pi_{}({})", cert.witness.support[i], e[x], cert.witness.support[i], e[y]),
                    certificate: mutated,
                });
                count += 1;
                if count == PER_KIND {
                    break 'rows;
                }
            }
        }
    }

    if cert.epsilon == Rational::from_integer(0) {
        for i in 0..cert.witness.support.len().min(PER_KIND) {
            let mut mutated = cert.clone();
            let s = mutated.witness.support.remove(i);
            mutated.witness.pi.remove(i);
            out.push(Mutation {
                kind: MutationKind::SupportShrink,
                description: format!("remove {s} from S"),
                certificate: mutated,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{ActionSpec, Point};
    use crate::builder::{approximate, BuildOptions};
    use crate::verifier::verify;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn every_mutation_is_rejected() {
        let spec = ActionSpec::Coset { rank: 2, subgroup: vec![w("a")] };
        let f = vec![GroupElement::Single(w("a")), GroupElement::Single(w("b"))];
        let e = vec![Point::Word(w("1")), Point::Word(w("b"))];
        let cert = approximate(&spec, &f, &e, Rational::from_integer(0), &BuildOptions::default()).unwrap();
        let mutations = invalidating_mutations(&cert).unwrap();
        for kind in [MutationKind::GeneratorImage, MutationKind::PiValue, MutationKind::SupportShrink] {
            assert!(mutations.iter().any(|m| m.kind == kind), "no {kind} mutation");
        }
        for m in &mutations {
            let report = verify(&m.certificate).unwrap();
            assert!(!report.accepted(), "{} survived", m.description);
        }
    }

    #[test]
    fn generator_slots() {
        assert_eq!(generator_slot(&GroupElement::Single(w("b"))), Some(1));
        assert_eq!(generator_slot(&GroupElement::Single(w("B"))), None);
        assert_eq!(generator_slot(&GroupElement::Pair(w("1"), w("a"))), Some(2));
        assert_eq!(generator_slot(&GroupElement::Pair(w("a"), w("a"))), None);
    }
}
