use std::collections::HashMap;

use itertools::Itertools;

use super::{BaseApprox, BuildOptions, Certificate, OrbitWitness, Provenance, SeparatorTrace, SoficApproximation, Strategy};
use crate::actions::{separation_targets, Action, GroupElement, GroupShape, Point};
use crate::error::{Error, Result, StageExt};
use crate::perm::Perm;
use crate::stallings::{hall_completion, search_separating_table, CosetTable};
use crate::word::Word;
use crate::Rational;

/// Largest index the literal strategy accepts (`6! = 720` carrier points).
pub const LITERAL_MAX_INDEX: usize = 6;

fn point_labels(n: usize) -> Vec<String> {
    (0..n).map(|p| p.to_string()).collect()
}

/// Exact approximation of `G ↷ G/K` on every coset, for the finite-index `K`
/// of `table`.
pub fn build_finite_index_approx(table: &CosetTable, strategy: Strategy, core_cap: usize) -> Result<BaseApprox> {
    let n = table.size();
    let rank = table.rank();
    let lambda: Vec<Perm> = (1..=rank).map(|i| table.left_action(&Word::reduced(rank, [i as i32]))).collect();
    let (carrier, generator_images) = match strategy {
        Strategy::Literal => {
            if n > LITERAL_MAX_INDEX {
                return Err(Error::LiteralTooLarge { index: n, max: LITERAL_MAX_INDEX });
            }
            let carrier: Vec<Perm> = (0..n as u32)
                .permutations(n)
                .map(Perm::from_u32_unchecked)
                .collect();
            let index: HashMap<&Perm, usize> = carrier.iter().enumerate().map(|(i, p)| (p, i)).collect();
            let images = lambda
                .iter()
                .map(|l| {
                    Perm::from_u32_unchecked(carrier.iter().map(|s| index[&l.compose(s)] as u32).collect())
                })
                .collect();
            (carrier, images)
        }
        Strategy::Core => {
            let q = table.image_group(core_cap)?;
            // Element i acts on the right as ρ_i = p ↦ p·ū; on the left ū
            // acts by ρ_i⁻¹.
            let carrier: Vec<Perm> = q.elements().iter().map(Perm::inverse).collect();
            let images = (1..=rank)
                .map(|i| {
                    let g = q.of_word(&Word::reduced(rank, [i as i32]));
                    Perm::from_u32_unchecked((0..q.order()).map(|s| q.mul(g, s) as u32).collect())
                })
                .collect();
            (carrier, images)
        }
    };
    let approx = SoficApproximation::new(GroupShape::Free { rank }, carrier.len(), generator_images, strategy)?;
    let witness = OrbitWitness {
        support: (0..carrier.len()).collect(),
        labels: point_labels(n),
        pi: carrier.iter().map(|s| s.inverse().to_vec()).collect(),
    };
    Ok(BaseApprox { approx, witness, carrier })
}

/// Lifts `base` (for `G ↷ G/K`) to `G ↷ G/H` on `E`:
/// `π_s(x) = π'_s(q(σ(x)))` with `q(y) = yK`.
pub fn chabouty_lift(base: &BaseApprox, table: &CosetTable, action: &Action, f: &[GroupElement], e: &[Point]) -> Result<OrbitWitness> {
    let targets = separation_targets(action, f, e)?;
    if let Some(w) = targets.avoid.iter().find(|w| table.contains(w)) {
        return Err(Error::SeparatorInvalid { word: w.to_string(), reason: "avoid word lies in K".into() });
    }
    if let Some(w) = targets.contain.iter().find(|w| !table.contains(w)) {
        return Err(Error::SeparatorInvalid { word: w.to_string(), reason: "required word is not in K".into() });
    }
    if base.witness.labels.len() != table.size() || base.approx.shape.rank() != table.rank() {
        return Err(Error::Mismatch("base approximation was built for another table".into()));
    }
    let columns: Vec<usize> = e
        .iter()
        .map(|x| {
            let sigma = action.canonical_point(x)?;
            Ok(table.left_coset_of(sigma.word().expect("coset points are words")))
        })
        .collect::<Result<_>>()?;
    let pi = base.witness.pi.iter().map(|row| columns.iter().map(|&c| row[c]).collect()).collect();
    Ok(OrbitWitness { support: base.witness.support.clone(), labels: base.witness.labels.clone(), pi })
}

fn table_arrays(table: &CosetTable) -> Vec<Vec<usize>> {
    table.images().iter().map(Perm::to_vec).collect()
}

/// The full coset pipeline on one transitive coset action.
pub fn coset_approx(action: &Action, f: &[GroupElement], e: &[Point], epsilon: Rational, options: &BuildOptions) -> Result<Certificate> {
    let graph = action
        .subgroup_graph()
        .ok_or_else(|| Error::TypeMismatch("expected a coset action".into()))
        .stage("parse")?;
    let targets = separation_targets(action, f, e).stage("separation_targets")?;
    let avoid = targets.avoid_up_to_inverse();
    let (mut method, mut table) = if avoid.is_empty() {
        ("trivial_separator", CosetTable::trivial(graph.rank()))
    } else {
        ("hall_completion", hall_completion(graph, &avoid).stage("hall_completion")?)
    };
    let base = match build_finite_index_approx(&table, options.strategy, options.core_cap) {
        Ok(base) => base,
        Err(err @ (Error::CoreTooLarge { .. } | Error::LiteralTooLarge { .. })) => {
            let Some(small) = search_separating_table(graph, &avoid, options.search_degree) else {
                return Err(err).stage("build_finite_index_approx");
            };
            method = "quotient_search";
            table = small;
            build_finite_index_approx(&table, options.strategy, options.core_cap).stage("build_finite_index_approx")?
        }
        Err(err) => return Err(err).stage("build_finite_index_approx"),
    };
    let witness = chabouty_lift(&base, &table, action, f, e).stage("chabouty_lift")?;

    let quotient_order = (options.strategy == Strategy::Core).then_some(base.approx.carrier_size);
    let trace = SeparatorTrace {
        orbit: e.iter().map(Point::to_string).collect(),
        method: method.into(),
        index: table.size(),
        table: table_arrays(&table),
        sigma: e.iter().map(Point::to_string).collect(),
        quotient_order,
    };
    let stages = ["separation_targets", method, "build_finite_index_approx", "chabouty_lift"];
    Ok(Certificate {
        action: action.spec().clone(),
        f: f.to_vec(),
        e: e.to_vec(),
        epsilon,
        approx: base.approx,
        witness,
        provenance: Provenance {
            strategy: options.strategy,
            stages: stages.iter().map(|s| s.to_string()).collect(),
            separators: vec![trace],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::ActionSpec;
    use crate::stallings::{core_graph, DEFAULT_CORE_CAP};

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn swap_table() -> CosetTable {
        CosetTable::from_arrays(2, vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn trivial_table() {
        for strategy in [Strategy::Literal, Strategy::Core] {
            let base = build_finite_index_approx(&CosetTable::trivial(2), strategy, DEFAULT_CORE_CAP).unwrap();
            assert_eq!(base.approx.carrier_size, 1);
            assert_eq!(base.witness.pi, vec![vec![0]]);
        }
    }

    #[test]
    fn literal_on_two_points() {
        let base = build_finite_index_approx(&swap_table(), Strategy::Literal, DEFAULT_CORE_CAP).unwrap();
        assert_eq!(base.approx.carrier_size, 2);
        assert_eq!(base.carrier, vec![Perm::identity(2), Perm::transposition(2, 0, 1)]);
        assert_eq!(base.witness.pi, vec![vec![0, 1], vec![1, 0]]);
        assert!(base.approx.generator_images[0].is_identity());
        assert_eq!(base.approx.generator_images[1].to_vec(), vec![1, 0]);
    }

    #[test]
    fn core_on_two_points_matches_literal() {
        let literal = build_finite_index_approx(&swap_table(), Strategy::Literal, DEFAULT_CORE_CAP).unwrap();
        let core = build_finite_index_approx(&swap_table(), Strategy::Core, DEFAULT_CORE_CAP).unwrap();
        assert_eq!(core.approx.carrier_size, 2);
        assert_eq!(core.witness.pi, literal.witness.pi);
    }

    #[test]
    fn literal_refuses_large_index() {
        let cycle: Vec<usize> = (1..=7).map(|i| i % 7).collect();
        let t = CosetTable::from_arrays(2, vec![cycle, (0..7).collect()]).unwrap();
        assert!(matches!(
            build_finite_index_approx(&t, Strategy::Literal, DEFAULT_CORE_CAP),
            Err(Error::LiteralTooLarge { index: 7, .. })
        ));
    }

    /// Embedding `Q → Sym(n)` carries core rows onto literal rows.
    #[test]
    fn core_rows_embed_into_literal_rows() {
        let t = CosetTable::from_arrays(2, vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let literal = build_finite_index_approx(&t, Strategy::Literal, DEFAULT_CORE_CAP).unwrap();
        let core = build_finite_index_approx(&t, Strategy::Core, DEFAULT_CORE_CAP).unwrap();
        for (i, s) in core.carrier.iter().enumerate() {
            let j = literal.carrier.iter().position(|p| p == s).unwrap();
            assert_eq!(core.witness.pi[i], literal.witness.pi[j]);
        }
    }

    #[test]
    fn lift_for_cyclic_subgroup() {
        let spec = ActionSpec::Coset { rank: 2, subgroup: vec![w("a")] };
        let action = Action::new(&spec).unwrap();
        let e = vec![action.point_of(&w("1")).unwrap(), action.point_of(&w("b")).unwrap()];
        let f = vec![GroupElement::Single(w("a")), GroupElement::Single(w("b"))];
        let table = hall_completion(action.subgroup_graph().unwrap(), &[w("b")]).unwrap();
        let base = build_finite_index_approx(&table, Strategy::Core, DEFAULT_CORE_CAP).unwrap();
        let lifted = chabouty_lift(&base, &table, &action, &f, &e).unwrap();
        for row in &lifted.pi {
            assert_ne!(row[0], row[1]);
        }
        // Exhaustive equivariance check.
        for (si, &s) in lifted.support.iter().enumerate() {
            for g in &f {
                let t = base.approx.phi(g).unwrap().apply(s);
                for (xi, x) in e.iter().enumerate() {
                    let y = action.act(&g.inverse(), x).unwrap();
                    if let Some(yi) = e.iter().position(|p| *p == y) {
                        assert_eq!(lifted.pi[t][xi], lifted.pi[si][yi]);
                    }
                }
            }
        }
    }

    #[test]
    fn lift_through_itself_is_identity() {
        let spec = ActionSpec::Coset { rank: 2, subgroup: vec![w("aa"), w("b"), w("abA")] };
        let action = Action::new(&spec).unwrap();
        let table = action.subgroup_graph().unwrap().to_coset_table().unwrap();
        let base = build_finite_index_approx(&table, Strategy::Core, DEFAULT_CORE_CAP).unwrap();
        let e = vec![action.point_of(&w("1")).unwrap(), action.point_of(&w("a")).unwrap()];
        let lifted = chabouty_lift(&base, &table, &action, &[], &e).unwrap();
        assert_eq!(lifted, base.witness);
    }

    #[test]
    fn lift_rejects_bad_separator() {
        let action = Action::new(&ActionSpec::Coset { rank: 2, subgroup: vec![w("a")] }).unwrap();
        let e = vec![action.point_of(&w("1")).unwrap(), action.point_of(&w("b")).unwrap()];
        let table = CosetTable::trivial(2);
        let base = build_finite_index_approx(&table, Strategy::Core, DEFAULT_CORE_CAP).unwrap();
        let err = chabouty_lift(&base, &table, &action, &[], &e).unwrap_err();
        assert!(matches!(err, Error::SeparatorInvalid { .. }), "{err}");
        let wrong = core_graph(&[w("b")], 2).unwrap();
        let wrong = hall_completion(&wrong, &[w("a")]).unwrap();
        let base = build_finite_index_approx(&wrong, Strategy::Core, DEFAULT_CORE_CAP).unwrap();
        let f = vec![GroupElement::Single(w("a"))];
        assert!(matches!(
            chabouty_lift(&base, &wrong, &action, &f, &e[..1]),
            Err(Error::SeparatorInvalid { .. })
        ));
    }
}
