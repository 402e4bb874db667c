use super::{Certificate, OrbitWitness, Provenance, SoficApproximation};
use crate::actions::{ActionSpec, Point};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Largest product carrier assembled.
pub const PRODUCT_CAP: usize = 1 << 22;

/// Product of `parts` as a certificate for `spec` on `e`, where `origin[i]`
/// names the part and the column of `e[i]`.
///
/// `A = ∏ A_j` in mixed radix with part `0` least significant, `φ` acts
/// componentwise, `B` is the tagged disjoint union of the `B_j` and `π_s(x)`
/// is the tagged `π^{(j)}_{s_j}(x)` for `x` in part `j`.
pub(crate) fn assemble(parts: &[Certificate], spec: ActionSpec, e: Vec<Point>, origin: &[(usize, usize)]) -> Result<Certificate> {
    let Some(first) = parts.first() else {
        return Err(Error::Mismatch("no parts to combine".into()));
    };
    for part in &parts[1..] {
        if part.approx.shape != first.approx.shape {
            return Err(Error::Mismatch(format!("groups {} and {}", first.approx.shape, part.approx.shape)));
        }
        if part.f != first.f {
            return Err(Error::Mismatch("parts were built for different F".into()));
        }
        if part.epsilon != first.epsilon {
            return Err(Error::Mismatch("parts declare different epsilon".into()));
        }
    }
    if parts.iter().any(|p| !p.approx.overrides.is_empty()) {
        return Err(Error::Mismatch("parts with overridden values of phi".into()));
    }
    let sizes: Vec<usize> = parts.iter().map(|p| p.approx.carrier_size).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n).filter(|&t| t <= PRODUCT_CAP));
    let Some(total) = total else {
        return Err(Error::CoreTooLarge { cap: PRODUCT_CAP });
    };
    let digits = |mut s: usize| -> Vec<usize> {
        sizes
            .iter()
            .map(|&n| {
                let d = s % n;
                s /= n;
                d
            })
            .collect()
    };
    let compose_digits = |ds: &[usize]| ds.iter().zip(&sizes).rev().fold(0, |acc, (&d, &n)| acc * n + d);

    let generator_images = (0..first.approx.generator_images.len())
        .map(|g| {
            let images = (0..total)
                .map(|s| {
                    let ds: Vec<usize> = digits(s)
                        .iter()
                        .zip(parts)
                        .map(|(&d, p)| p.approx.generator_images[g].apply(d))
                        .collect();
                    compose_digits(&ds) as u32
                })
                .collect();
            Perm::from_u32_unchecked(images)
        })
        .collect();
    let approx = SoficApproximation::new(first.approx.shape, total, generator_images, first.approx.strategy)?;

    let mut offsets = Vec::with_capacity(parts.len());
    let mut labels = Vec::new();
    for (j, part) in parts.iter().enumerate() {
        offsets.push(labels.len());
        labels.extend(part.witness.labels.iter().map(|l| format!("{j}:{l}")));
    }
    // Row of each part's support, or None outside it.
    let rows: Vec<Vec<Option<usize>>> = parts
        .iter()
        .map(|p| {
            let mut row = vec![None; p.approx.carrier_size];
            for (i, &s) in p.witness.support.iter().enumerate() {
                row[s] = Some(i);
            }
            row
        })
        .collect();
    let mut support = Vec::new();
    let mut pi = Vec::new();
    for s in 0..total {
        let ds = digits(s);
        let Some(part_rows) = ds.iter().zip(&rows).map(|(&d, r)| r[d]).collect::<Option<Vec<usize>>>() else {
            continue;
        };
        support.push(s);
        pi.push(
            origin
                .iter()
                .map(|&(j, column)| offsets[j] + parts[j].witness.pi[part_rows[j]][column])
                .collect(),
        );
    }

    let mut provenance = Provenance { strategy: first.provenance.strategy, ..Provenance::default() };
    for part in parts {
        provenance.separators.extend(part.provenance.separators.iter().cloned());
    }
    provenance.stages = first.provenance.stages.clone();
    provenance.stages.push("combine_orbits".into());
    Ok(Certificate {
        action: spec,
        f: first.f.clone(),
        e,
        epsilon: first.epsilon,
        approx,
        witness: OrbitWitness { support, labels, pi },
        provenance,
    })
}

/// Disjoint union of certificates over the same `G`, `F` and `ε`: the action
/// is the disjoint union of the parts' actions, with `E` tagged by part.
pub fn combine_orbits(parts: &[Certificate]) -> Result<Certificate> {
    let spec = ActionSpec::DisjointUnion { parts: parts.iter().map(|p| p.action.clone()).collect() };
    let mut e = Vec::new();
    let mut origin = Vec::new();
    for (j, part) in parts.iter().enumerate() {
        for (column, x) in part.e.iter().enumerate() {
            e.push(Point::Tagged(j, Box::new(x.clone())));
            origin.push((j, column));
        }
    }
    assemble(parts, spec, e, &origin)
}
