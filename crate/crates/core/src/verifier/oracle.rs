use itertools::Itertools;

use super::{cardinality_holds, check_orbit_witness, moved_points};
use crate::actions::{Action, GroupElement, Point};
use crate::builder::{OrbitWitness, SoficApproximation};
use crate::error::{Error, Result};
use crate::Rational;

pub const ORACLE_MAX_CARRIER: usize = 8;
pub const ORACLE_MAX_E: usize = 3;
pub const ORACLE_MAX_B: usize = 5;

/// `(row t, column x) == (row s, column y)` for an assignment to be valid.
struct Link {
    s: usize,
    t: usize,
    x: usize,
    y: usize,
}

/// Exhaustive search for `S`, `B`, `π` making `(α, φ, F, E, ε)` an orbit
/// approximation, independent of how `φ` was built.
///
/// Subsets `S` are tried largest first, then `|B| = |E|..=max_b` with labels
/// `0..|B|`, then injective rows by backtracking. Any witness found is
/// re-checked with [`check_orbit_witness`] before it is returned.
pub fn brute_force_witness(
    action: &Action,
    approx: &SoficApproximation,
    f: &[GroupElement],
    e: &[Point],
    epsilon: Rational,
    max_b: usize,
) -> Result<Option<OrbitWitness>> {
    let n = approx.carrier_size;
    if n > ORACLE_MAX_CARRIER || e.len() > ORACLE_MAX_E || max_b > ORACLE_MAX_B {
        return Err(Error::SearchSpace(format!(
            "|A| = {n}, |E| = {}, max_B = {max_b}; limits are {ORACLE_MAX_CARRIER}, {ORACLE_MAX_E}, {ORACLE_MAX_B}",
            e.len()
        )));
    }
    let e: Vec<Point> = e.iter().map(|x| action.canonical_point(x)).collect::<Result<_>>()?;
    let images = f.iter().map(|g| approx.phi(g)).collect::<Result<Vec<_>>>()?;
    let moved = moved_points(action, f, &e)?;

    for size in (0..=n).rev() {
        if !cardinality_holds(size, n, epsilon) {
            break;
        }
        for support in (0..n).combinations(size) {
            let mut row_of = vec![None; n];
            for (i, &s) in support.iter().enumerate() {
                row_of[s] = Some(i);
            }
            let mut links = Vec::new();
            for (si, &s) in support.iter().enumerate() {
                for (gi, image) in images.iter().enumerate() {
                    let Some(ti) = row_of[image.apply(s)] else { continue };
                    for (x, y) in moved[gi].iter().enumerate() {
                        if let Some(y) = *y {
                            links.push(Link { s: si, t: ti, x, y });
                        }
                    }
                }
            }
            for b in e.len()..=max_b {
                let rows: Vec<Vec<usize>> = (0..b).permutations(e.len()).collect();
                let mut pi: Vec<Option<&Vec<usize>>> = vec![None; support.len()];
                if assign(0, &rows, &links, &mut pi) {
                    let witness = OrbitWitness {
                        support: support.clone(),
                        labels: (0..b).map(|l| l.to_string()).collect(),
                        pi: pi.into_iter().map(|r| r.unwrap().clone()).collect(),
                    };
                    let report = check_orbit_witness(action, approx, f, &e, &witness, epsilon)?;
                    if !report.orbit_ok() {
                        return Err(Error::Internal(format!("oracle witness fails verification: {report}")));
                    }
                    return Ok(Some(witness));
                }
            }
        }
    }
    Ok(None)
}

fn consistent(links: &[Link], pi: &[Option<&Vec<usize>>], row: usize) -> bool {
    links.iter().filter(|l| l.s == row || l.t == row).all(|l| match (pi[l.t], pi[l.s]) {
        (Some(t), Some(s)) => t[l.x] == s[l.y],
        _ => true,
    })
}

fn assign<'a>(row: usize, rows: &'a [Vec<usize>], links: &[Link], pi: &mut Vec<Option<&'a Vec<usize>>>) -> bool {
    if row == pi.len() {
        return true;
    }
    for candidate in rows {
        pi[row] = Some(candidate);
        if consistent(links, pi, row) && assign(row + 1, rows, links, pi) {
            return true;
        }
    }
    pi[row] = None;
    false
}
