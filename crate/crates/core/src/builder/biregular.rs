use std::collections::HashSet;

use super::{BuildOptions, Certificate, OrbitWitness, Provenance, SeparatorTrace, SoficApproximation, Strategy};
use crate::actions::{ActionSpec, GroupElement, GroupShape, Point};
use crate::error::{Error, Result, StageExt};
use crate::perm::Perm;
use crate::stallings::{hall_completion, search_faithful_quotient, CosetTable, StallingsGraph};
use crate::word::Word;
use crate::Rational;

/// Exact approximation of `F_k × F_k ↷ F_k`, `(h, k) · x = h x k⁻¹`.
///
/// A finite quotient `q: G → Q` injective on `E` is taken from the normal
/// core of a Hall separator for `{x⁻¹y}`, or from a small-quotient search when
/// that core is too large. Then `A = Q × Q` with `φ(h, k)(s₁, s₂) =
/// (q(h)s₁, q(k)s₂)`, `B = Q` and `π_{(s₁,s₂)}(x) = s₁⁻¹ q(x) s₂`.
pub fn biregular_approx(rank: usize, f: &[GroupElement], e: &[Word], epsilon: Rational, options: &BuildOptions) -> Result<Certificate> {
    let shape = GroupShape::Square { rank };
    let spec = ActionSpec::Biregular { rank };
    let mut seen = HashSet::new();
    for x in e {
        if x.rank() != rank {
            return Err(Error::RankMismatch { left: rank, right: x.rank() }).stage("parse");
        }
        if !seen.insert(x) {
            return Err(Error::DuplicatePoint(x.to_string())).stage("parse");
        }
    }
    for g in f {
        g.check_shape(shape).stage("parse")?;
    }

    let mut avoid = Vec::new();
    for (i, x) in e.iter().enumerate() {
        for y in &e[i + 1..] {
            let d = x.inverse().mul_unchecked(y);
            let d = d.clone().min(d.inverse());
            if !avoid.contains(&d) {
                avoid.push(d);
            }
        }
    }
    // |A| = |Q|² stays within the core cap.
    let cap = options.core_cap.isqrt();
    let hall = hall_completion(&StallingsGraph::trivial(rank), &avoid).stage("hall_completion")?;
    let (method, table, q) = match hall.image_group(cap) {
        Ok(q) => ("hall_completion", hall, q),
        Err(err @ Error::CoreTooLarge { .. }) => {
            let table: CosetTable = search_faithful_quotient(rank, &avoid, options.search_degree)
                .ok_or(err)
                .stage("normal_core")?;
            let q = table.image_group(cap).stage("normal_core")?;
            ("quotient_search", table, q)
        }
        Err(err) => return Err(err).stage("normal_core"),
    };

    let m = q.order();
    let generators: Vec<usize> = (1..=rank).map(|i| q.of_word(&Word::reduced(rank, [i as i32]))).collect();
    let mut generator_images = Vec::with_capacity(2 * rank);
    for &g in &generators {
        let images = (0..m * m).map(|s| (q.mul(g, s / m) * m + s % m) as u32).collect();
        generator_images.push(Perm::from_u32_unchecked(images));
    }
    for &g in &generators {
        let images = (0..m * m).map(|s| ((s / m) * m + q.mul(g, s % m)) as u32).collect();
        generator_images.push(Perm::from_u32_unchecked(images));
    }
    let approx = SoficApproximation::new(shape, m * m, generator_images, Strategy::Core).stage("biregular")?;

    let images: Vec<usize> = e.iter().map(|x| q.of_word(x)).collect();
    let inverses: Vec<usize> = (0..m).map(|u| q.inverse(u)).collect();
    let pi = (0..m * m)
        .map(|s| {
            let (s1, s2) = (s / m, s % m);
            images.iter().map(|&x| q.mul(q.mul(inverses[s1], x), s2)).collect()
        })
        .collect();
    let labels = q.core_table().transversal().iter().map(Word::to_string).collect();
    let witness = OrbitWitness { support: (0..m * m).collect(), labels, pi };

    let trace = SeparatorTrace {
        orbit: e.iter().map(Word::to_string).collect(),
        method: method.into(),
        index: table.size(),
        table: table.images().iter().map(Perm::to_vec).collect(),
        sigma: e.iter().map(Word::to_string).collect(),
        quotient_order: Some(m),
    };
    Ok(Certificate {
        action: spec,
        f: f.to_vec(),
        e: e.iter().cloned().map(Point::Word).collect(),
        epsilon,
        approx,
        witness,
        provenance: Provenance {
            strategy: Strategy::Core,
            stages: vec!["hall_completion".into(), method.into(), "normal_core".into(), "biregular".into()],
            separators: vec![trace],
        },
    })
}
