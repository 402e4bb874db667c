//! Exhaustive search for small permutation quotients.
//!
//! Hall completion can produce separators whose image group is far too large
//! to serve as a carrier. These searches enumerate generator tuples in
//! `Sym(n)` for increasing `n` and return the first transitive table meeting
//! the separation conditions, so the resulting image group has order at most
//! `n!`.

use itertools::Itertools;

use super::{slot, CosetTable, StallingsGraph};
use crate::perm::Perm;
use crate::word::Word;

/// Upper bound on enumerated tuples per search.
const TUPLE_BUDGET: usize = 4_000_000;

fn symmetric_group(n: usize) -> Vec<Vec<u32>> {
    (0..n as u32).permutations(n).collect()
}

fn walk(images: &[&Vec<u32>], inverses: &[Vec<u32>], start: usize, w: &Word) -> usize {
    w.letters().iter().fold(start, |p, &l| {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            images[i][p] as usize
        } else {
            inverses[i][p] as usize
        }
    })
}

fn inverse(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn transitive(images: &[&Vec<u32>], n: usize) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for img in images {
            for q in [img[p] as usize, img.iter().position(|&x| x as usize == p).unwrap()] {
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
    }
    count == n
}

/// Does the labelled graph map into the action with basepoint at `0`?
/// Equivalent to `H ≤ Stab(0)`.
fn graph_maps(graph: &StallingsGraph, images: &[&Vec<u32>]) -> bool {
    let mut image = vec![usize::MAX; graph.vertex_count()];
    image[0] = 0;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        for label in 1..=graph.rank() {
            let forward = graph.adjacency()[v][slot(label as i32)];
            if let Some(t) = forward {
                let p = images[label - 1][image[v]] as usize;
                if image[t] == usize::MAX {
                    image[t] = p;
                    stack.push(t);
                } else if image[t] != p {
                    return false;
                }
            }
            if let Some(s) = graph.adjacency()[v][slot(-(label as i32))] {
                let p = images[label - 1].iter().position(|&x| x as usize == image[v]).unwrap();
                if image[s] == usize::MAX {
                    image[s] = p;
                    stack.push(s);
                } else if image[s] != p {
                    return false;
                }
            }
        }
    }
    true
}

fn search(
    rank: usize,
    max_degree: usize,
    mut accept: impl FnMut(&[&Vec<u32>], &[Vec<u32>], usize) -> bool,
) -> Option<CosetTable> {
    let mut spent = 0usize;
    for n in 1..=max_degree {
        let sym = symmetric_group(n);
        let inverses: Vec<Vec<u32>> = sym.iter().map(|p| inverse(p)).collect();
        let tuples = (0..rank).map(|_| 0..sym.len()).multi_cartesian_product();
        for choice in tuples {
            spent += 1;
            if spent > TUPLE_BUDGET {
                return None;
            }
            let images: Vec<&Vec<u32>> = choice.iter().map(|&i| &sym[i]).collect();
            let inv: Vec<Vec<u32>> = choice.iter().map(|&i| inverses[i].clone()).collect();
            if transitive(&images, n) && accept(&images, &inv, n) {
                let perms = images
                    .iter()
                    .map(|p| Perm::from_u32_unchecked(p.to_vec()))
                    .collect();
                return CosetTable::new(rank, perms).ok();
            }
        }
    }
    None
}

/// Smallest-degree transitive table with `H ≤ K = Stab(0)` and every avoid
/// word outside `K`.
pub fn search_separating_table(
    graph: &StallingsGraph,
    avoid: &[Word],
    max_degree: usize,
) -> Option<CosetTable> {
    search(graph.rank(), max_degree, |images, inv, _| {
        avoid.iter().all(|w| walk(images, inv, 0, w) != 0) && graph_maps(graph, images)
    })
}

/// Smallest-degree transitive table in which no avoid word acts trivially,
/// i.e. the normal core excludes every avoid word.
pub fn search_faithful_quotient(rank: usize, avoid: &[Word], max_degree: usize) -> Option<CosetTable> {
    search(rank, max_degree, |images, inv, n| {
        avoid.iter().all(|w| (0..n).any(|p| walk(images, inv, p, w) != p))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stallings::{core_graph, DEFAULT_CORE_CAP};

    fn words(list: &[&str], rank: usize) -> Vec<Word> {
        list.iter().map(|s| Word::parse(s, rank).unwrap()).collect()
    }

    #[test]
    fn separating_table_meets_conditions() {
        let gens = words(&["ab", "ba"], 2);
        let g = core_graph(&gens, 2).unwrap();
        let avoid = words(&["a", "b", "Ab"], 2);
        let t = search_separating_table(&g, &avoid, 5).unwrap();
        assert!(gens.iter().all(|h| t.contains(h)));
        assert!(avoid.iter().all(|w| !t.contains(w)));
    }

    #[test]
    fn nonabelian_quotient_for_conjugates() {
        // Separating 1, a, b, baB needs a non-abelian quotient.
        let points = words(&["1", "a", "b", "baB"], 2);
        let mut avoid = Vec::new();
        for x in &points {
            for y in &points {
                if x != y {
                    avoid.push(x.inverse().multiply(y).unwrap());
                }
            }
        }
        let t = search_faithful_quotient(2, &avoid, 5).unwrap();
        let q = t.image_group(DEFAULT_CORE_CAP).unwrap();
        assert_eq!(t.size(), 3);
        assert_eq!(q.order(), 6);
        let images: Vec<usize> = points.iter().map(|p| q.of_word(p)).collect();
        assert!(images.iter().all_unique());
    }

    #[test]
    fn members_cannot_be_separated() {
        let g = core_graph(&words(&["a"], 2), 2).unwrap();
        assert_eq!(search_separating_table(&g, &words(&["aa"], 2), 3), None);
    }
}
