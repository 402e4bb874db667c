//! Subgroups of `F_k`: folded core graphs, membership, coset tables, Hall
//! completion and normal cores.
//!
//! Convention shared by every module: a coset table is a *right* action of
//! `F_k` on `{0..n-1}`, words are applied letter by letter from the left
//! starting at coset `0`, and `coset_of(w) = 0` iff `w ∈ K`. The left coset
//! `xK` corresponds to the table point `coset_of(x⁻¹)`.

mod fold;
mod hall;
mod search;
mod table;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{letter_char, letters_in_order, Word};

pub(crate) use fold::Folder;
pub use hall::hall_completion;
pub use search::{search_faithful_quotient, search_separating_table};
pub use table::{CosetTable, ImageGroup, DEFAULT_CORE_CAP};

/// Adjacency slot of a signed letter: `2(i-1)` for `a_i`, `2(i-1)+1` for its
/// inverse.
#[inline]
pub(crate) fn slot(letter: i32) -> usize {
    let i = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * i
    } else {
        2 * i + 1
    }
}

#[inline]
pub(crate) fn slot_letter(slot: usize) -> i32 {
    let i = (slot / 2 + 1) as i32;
    if slot.is_multiple_of(2) {
        i
    } else {
        -i
    }
}

/// A folded, connected, based graph with edges labelled by generators.
///
/// Vertices are numbered breadth-first from the basepoint `0`, exploring
/// letters in shortlex order, so equal subgroups give equal values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StallingsGraph {
    rank: usize,
    /// `adj[v][slot(l)]` is the end of the `l`-edge leaving `v`.
    adj: Vec<Vec<Option<usize>>>,
}

/// Folded core graph of `⟨generators⟩`.
pub fn core_graph(generators: &[Word], rank: usize) -> Result<StallingsGraph> {
    if rank == 0 {
        return Err(Error::InvalidRank(rank));
    }
    let mut folder = Folder::new(rank);
    let base = folder.add_vertex();
    for generator in generators {
        if generator.rank() != rank {
            return Err(Error::RankMismatch { left: rank, right: generator.rank() });
        }
        folder.add_loop(base, generator.letters());
    }
    Ok(folder.finish(base, true).0)
}

impl StallingsGraph {
    pub(crate) fn from_adjacency(rank: usize, adj: Vec<Vec<Option<usize>>>) -> Self {
        StallingsGraph { rank, adj }
    }

    /// Graph of the trivial subgroup: one vertex, no edges.
    pub fn trivial(rank: usize) -> Self {
        StallingsGraph { rank, adj: vec![vec![None; 2 * rank]] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// End of the `letter`-edge at `vertex`.
    #[inline]
    pub fn target(&self, vertex: usize, letter: i32) -> Option<usize> {
        if letter == 0 || letter.unsigned_abs() as usize > self.rank {
            return None;
        }
        self.adj[vertex][slot(letter)]
    }

    /// Edges `(source, label, target)` with positive labels, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut edges = Vec::new();
        for (v, slots) in self.adj.iter().enumerate() {
            for label in 1..=self.rank {
                if let Some(t) = slots[slot(label as i32)] {
                    edges.push((v, label, t));
                }
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.iter().step_by(2).flatten().count()).sum()
    }

    /// Reads letters from `start` as far as edges exist; returns the vertex
    /// reached and the number of letters consumed.
    pub fn read(&self, start: usize, letters: &[i32]) -> (usize, usize) {
        let mut vertex = start;
        for (i, &letter) in letters.iter().enumerate() {
            match self.target(vertex, letter) {
                Some(next) => vertex = next,
                None => return (vertex, i),
            }
        }
        (vertex, letters.len())
    }

    /// Membership: `w` reads a closed path at the basepoint.
    pub fn contains(&self, w: &Word) -> bool {
        let (end, consumed) = self.read(0, w.letters());
        consumed == w.len() && end == 0
    }

    /// Every vertex has every outgoing and incoming label: the subgroup has
    /// finite index equal to the vertex count.
    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|slots| slots.iter().all(Option::is_some))
    }

    /// The coset table of a finite-index subgroup.
    pub fn to_coset_table(&self) -> Option<CosetTable> {
        if !self.is_complete() {
            return None;
        }
        let images = (1..=self.rank as i32)
            .map(|l| self.adj.iter().map(|s| s[slot(l)].unwrap()).collect())
            .collect();
        CosetTable::from_arrays(self.rank, images).ok()
    }

    pub(crate) fn adjacency(&self) -> &[Vec<Option<usize>>] {
        &self.adj
    }

    fn distances_to_base(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::from([0]);
        dist[0] = 0;
        while let Some(v) = queue.pop_front() {
            for t in self.adj[v].iter().flatten() {
                if dist[*t] == usize::MAX {
                    dist[*t] = dist[v] + 1;
                    queue.push_back(*t);
                }
            }
        }
        dist
    }

    /// Shortlex-minimal element of the left coset `xH`.
    ///
    /// Elements of `xH` label the paths from the vertex of `x⁻¹` in the
    /// Schreier graph back to the basepoint. Reading `x⁻¹` stops at core
    /// vertex `v` with an unread tail `y`; every such path first retraces
    /// `y⁻¹` to `v` and then follows a shortest path to the basepoint, chosen
    /// greedily in letter order.
    pub fn coset_representative(&self, x: &Word) -> Word {
        let inv = x.inverse();
        let (mut vertex, consumed) = self.read(0, inv.letters());
        let mut letters: Vec<i32> = inv.letters()[consumed..].iter().rev().map(|l| -l).collect();
        let dist = self.distances_to_base();
        while vertex != 0 {
            let step = letters_in_order(self.rank)
                .find_map(|l| {
                    self.target(vertex, l).filter(|&t| dist[t] + 1 == dist[vertex]).map(|t| (l, t))
                })
                .expect("connected graph has a descending edge");
            letters.push(step.0);
            vertex = step.1;
        }
        Word::reduced(self.rank, letters)
    }

    /// Vertices in breadth-first order together with shortlex-minimal words
    /// reaching them from the basepoint.
    pub fn spanning_words(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.vertex_count()];
        words[0] = Some(Word::identity(self.rank));
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let here = words[v].clone().unwrap();
            for l in letters_in_order(self.rank) {
                if let Some(t) = self.target(v, l) {
                    if words[t].is_none() {
                        words[t] = Some(Word::reduced(self.rank, here.letters().iter().copied().chain([l])));
                        queue.push_back(t);
                    }
                }
            }
        }
        words.into_iter().map(Option::unwrap).collect()
    }
}

impl fmt::Display for StallingsGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "stallings graph: rank {}, {} vertices, {} edges, basepoint 0{}",
            self.rank,
            self.vertex_count(),
            self.edge_count(),
            if self.is_complete() { " (finite index)" } else { "" }
        )?;
        for (source, label, target) in self.edges() {
            writeln!(f, "  {source} -{}-> {target}", letter_char(label as i32))?;
        }
        Ok(())
    }
}
