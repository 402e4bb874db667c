use super::{slot, CosetTable, Folder, StallingsGraph};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::word::Word;

/// Finite-index overgroup `K ≥ H` avoiding every word in `avoid`.
///
/// A fresh path spelling each avoid word is attached at the basepoint and
/// the union is folded; an avoid endpoint folding onto the basepoint means
/// the word lies in `H`. Each generator's partial injection is then
/// completed to a permutation, matching unmatched sources to unmatched
/// targets in ascending vertex order. The index equals the vertex count of
/// the folded union.
pub fn hall_completion(graph: &StallingsGraph, avoid: &[Word]) -> Result<CosetTable> {
    let rank = graph.rank();
    for w in avoid {
        if w.rank() != rank {
            return Err(Error::RankMismatch { left: rank, right: w.rank() });
        }
        if w.is_identity() {
            return Err(Error::Inseparable {
                word: w.to_string(),
                reason: "the identity lies in every subgroup".into(),
            });
        }
        if graph.contains(w) {
            return Err(Error::Inseparable { word: w.to_string(), reason: "lies in the subgroup".into() });
        }
    }

    let mut folder = Folder::from_graph(graph);
    let endpoints: Vec<usize> = avoid.iter().map(|w| folder.add_path(0, w.letters())).collect();
    let base = folder.find(0);
    for (w, &end) in avoid.iter().zip(&endpoints) {
        if folder.find(end) == base {
            return Err(Error::Inseparable {
                word: w.to_string(),
                reason: "its path folds onto the basepoint".into(),
            });
        }
    }
    let (union, _) = folder.finish(0, false);
    Ok(complete(&union))
}

/// Completes every partial injection of a folded graph to a permutation.
pub(crate) fn complete(graph: &StallingsGraph) -> CosetTable {
    let n = graph.vertex_count();
    let adj = graph.adjacency();
    let images = (1..=graph.rank() as i32)
        .map(|label| {
            let mut image: Vec<Option<usize>> = adj.iter().map(|s| s[slot(label)]).collect();
            let sources = (0..n).filter(|&v| image[v].is_none());
            let targets: Vec<usize> = (0..n).filter(|&v| adj[v][slot(-label)].is_none()).collect();
            for (source, target) in sources.collect::<Vec<_>>().into_iter().zip(targets) {
                image[source] = Some(target);
            }
            Perm::from_images(image.into_iter().map(Option::unwrap).collect())
                .expect("completion of a partial injection is a bijection")
        })
        .collect();
    CosetTable::new(graph.rank(), images).expect("folded graphs are connected")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stallings::core_graph;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| Word::parse(s, 2).unwrap()).collect()
    }

    fn images(t: &CosetTable) -> Vec<Vec<usize>> {
        t.images().iter().map(Perm::to_vec).collect()
    }

    #[test]
    fn separates_b_from_cyclic_subgroup() {
        let t = hall_completion(&core_graph(&words(&["a"]), 2).unwrap(), &words(&["b"])).unwrap();
        assert_eq!(images(&t), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn separates_a_from_trivial_subgroup() {
        let t = hall_completion(&core_graph(&[], 2).unwrap(), &words(&["a"])).unwrap();
        assert_eq!(images(&t), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn powers_of_a_give_a_cycle() {
        let t = hall_completion(&core_graph(&[], 2).unwrap(), &words(&["a", "aa"])).unwrap();
        assert_eq!(images(&t), vec![vec![1, 2, 0], vec![0, 1, 2]]);
        let t = hall_completion(&core_graph(&[], 2).unwrap(), &words(&["a", "A", "aa", "AA"])).unwrap();
        assert_eq!(t.size(), 5);
    }

    #[test]
    fn members_are_inseparable() {
        let g = core_graph(&words(&["a"]), 2).unwrap();
        let err = hall_completion(&g, &words(&["a"])).unwrap_err();
        assert!(matches!(err, Error::Inseparable { ref word, .. } if word == "a"), "{err}");
        assert!(matches!(hall_completion(&g, &words(&["1"])), Err(Error::Inseparable { .. })));
        let g = core_graph(&words(&["aa", "b"]), 2).unwrap();
        assert!(hall_completion(&g, &words(&["bAAb"])).is_err());
    }

    #[test]
    fn finite_index_graph_completes_to_itself() {
        let g = core_graph(&words(&["aa", "b", "abA"]), 2).unwrap();
        let t = hall_completion(&g, &words(&["a"])).unwrap();
        assert_eq!(Some(t), g.to_coset_table());
    }
}
