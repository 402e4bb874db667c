use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::word::{letter_char, letters_in_order, Word};

/// Default cap on the order of an image group.
pub const DEFAULT_CORE_CAP: usize = 1_000_000;

/// Complete, transitive action of the `k` generators on cosets
/// `{0..n-1}` of a finite-index subgroup `K`; coset `0` is `K` itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CosetTable {
    rank: usize,
    forward: Vec<Perm>,
    backward: Vec<Perm>,
}

impl CosetTable {
    pub fn new(rank: usize, images: Vec<Perm>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(rank));
        }
        if images.len() != rank {
            return Err(Error::InvalidTable(format!(
                "{} generator images for rank {rank}",
                images.len()
            )));
        }
        let n = images[0].len();
        if n == 0 {
            return Err(Error::InvalidTable("empty coset table".into()));
        }
        if let Some(bad) = images.iter().position(|p| p.len() != n) {
            return Err(Error::InvalidTable(format!(
                "generator {} acts on {} points, expected {n}",
                letter_char(bad as i32 + 1),
                images[bad].len()
            )));
        }
        let backward = images.iter().map(Perm::inverse).collect();
        let table = CosetTable { rank, forward: images, backward };
        if !table.is_transitive() {
            return Err(Error::InvalidTable("generator action is not transitive".into()));
        }
        Ok(table)
    }

    pub fn from_arrays(rank: usize, images: Vec<Vec<usize>>) -> Result<Self> {
        let perms = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                Perm::from_images(img).map_err(|e| {
                    Error::InvalidTable(format!("generator {}: {e}", letter_char(i as i32 + 1)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CosetTable::new(rank, perms)
    }

    /// Table of the whole group: one coset.
    pub fn trivial(rank: usize) -> Self {
        CosetTable::new(rank, vec![Perm::identity(1); rank]).expect("one point is transitive")
    }

    fn is_transitive(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(p) = stack.pop() {
            for perm in self.forward.iter().chain(&self.backward) {
                let q = perm.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
        count == n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Index `n` of the subgroup.
    pub fn size(&self) -> usize {
        self.forward[0].len()
    }

    /// Permutation of the generator `a_label` (1-based).
    pub fn image(&self, label: usize) -> &Perm {
        &self.forward[label - 1]
    }

    pub fn images(&self) -> &[Perm] {
        &self.forward
    }

    #[inline]
    pub fn act(&self, coset: usize, letter: i32) -> usize {
        let i = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            self.forward[i].apply(coset)
        } else {
            self.backward[i].apply(coset)
        }
    }

    /// Walks `w` letter by letter from `coset`.
    pub fn walk(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// The coset reached from `0`; `0` iff `w ∈ K`.
    pub fn coset_of(&self, w: &Word) -> usize {
        self.walk(0, w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.coset_of(w) == 0
    }

    /// Table point of the left coset `xK`, i.e. `coset_of(x⁻¹)`. This is the
    /// quotient map `G → G/K` in the left-coset convention.
    pub fn left_coset_of(&self, x: &Word) -> usize {
        self.coset_of(&x.inverse())
    }

    /// Permutation `λ(w)` of table points induced by left multiplication:
    /// `λ(w)(p) = walk(p, w⁻¹)`, a homomorphism `G → Sym(n)`.
    pub fn left_action(&self, w: &Word) -> Perm {
        let inv = w.inverse();
        let images = (0..self.size()).map(|p| self.walk(p, &inv) as u32).collect();
        Perm::from_u32_unchecked(images)
    }

    /// Shortlex-minimal words reaching every coset from `0`.
    pub fn transversal(&self) -> Vec<Word> {
        let n = self.size();
        let mut reps: Vec<Option<Word>> = vec![None; n];
        reps[0] = Some(Word::identity(self.rank));
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            let here = reps[c].clone().unwrap();
            for l in letters_in_order(self.rank) {
                let next = self.act(c, l);
                if reps[next].is_none() {
                    reps[next] =
                        Some(Word::reduced(self.rank, here.letters().iter().copied().chain([l])));
                    queue.push_back(next);
                }
            }
        }
        reps.into_iter().map(Option::unwrap).collect()
    }

    pub fn schreier_representative(&self, coset: usize) -> Result<Word> {
        if coset >= self.size() {
            return Err(Error::InvalidTable(format!("coset {coset} outside 0..{}", self.size())));
        }
        Ok(self.transversal().swap_remove(coset))
    }

    /// Image of `F_k` in `Sym(n)` as right-action permutations, closed by
    /// breadth-first products; fails past `cap` elements.
    pub fn image_group(&self, cap: usize) -> Result<ImageGroup> {
        let n = self.size();
        let identity = Perm::identity(n);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut table: Vec<Vec<usize>> = vec![Vec::new(); self.rank];
        let mut head = 0;
        while head < elements.len() {
            for (l, generator) in self.forward.iter().enumerate() {
                let product = elements[head].then(generator);
                let next = match index.get(&product) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CoreTooLarge { cap });
                        }
                        let i = elements.len();
                        index.insert(product.clone(), i);
                        elements.push(product);
                        i
                    }
                };
                table[l].push(next);
            }
            head += 1;
        }
        let core = CosetTable::from_arrays(self.rank, table)?;
        Ok(ImageGroup { elements, index, core })
    }

    /// Table of the normal core `N = ⋂ gKg⁻¹`, the kernel of the action.
    pub fn normal_core(&self, cap: usize) -> Result<CosetTable> {
        Ok(self.image_group(cap)?.core)
    }
}

impl fmt::Display for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "coset table: rank {}, index {}", self.rank, self.size())?;
        for (i, p) in self.forward.iter().enumerate() {
            writeln!(f, "  {}: {:?}", letter_char(i as i32 + 1), p)?;
        }
        Ok(())
    }
}

/// Finite quotient `Q = F_k / N` of a coset table, with `N` the normal core.
///
/// Element `i` is stored as the permutation `ρ_i(p) = p · ū` of table points
/// for any word `ū` in the class; element `0` is the identity. The regular
/// right action of `Q` on itself is the coset table of `N`.
#[derive(Clone, Debug)]
pub struct ImageGroup {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    core: CosetTable,
}

impl ImageGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Coset table of the normal core.
    pub fn core_table(&self) -> &CosetTable {
        &self.core
    }

    /// The quotient map `q: F_k → Q`.
    pub fn of_word(&self, w: &Word) -> usize {
        self.core.coset_of(w)
    }

    /// Product `q(ū · v̄)`.
    pub fn mul(&self, u: usize, v: usize) -> usize {
        self.index[&self.elements[u].then(&self.elements[v])]
    }

    pub fn inverse(&self, u: usize) -> usize {
        self.index[&self.elements[u].inverse()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stallings::core_graph;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn table(images: Vec<Vec<usize>>) -> CosetTable {
        CosetTable::from_arrays(2, images).unwrap()
    }

    #[test]
    fn coset_of_examples() {
        let t = table(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(t.coset_of(&w("1")), 0);
        assert_eq!(t.coset_of(&w("b")), 1);
        assert_eq!(t.coset_of(&w("bab")), 0);
    }

    #[test]
    fn rejects_invalid_tables() {
        assert!(CosetTable::from_arrays(2, vec![vec![0, 0], vec![1, 0]]).is_err());
        assert!(CosetTable::from_arrays(2, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(CosetTable::from_arrays(2, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn schreier_representatives() {
        let t = table(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(t.schreier_representative(0).unwrap(), w("1"));
        assert_eq!(t.schreier_representative(1).unwrap(), w("b"));
        let regular = core_graph(&[w("aa"), w("b"), w("abA")], 2).unwrap().to_coset_table().unwrap();
        let coset = regular.coset_of(&w("a"));
        assert_eq!(regular.schreier_representative(coset).unwrap(), w("a"));
        assert!(t.schreier_representative(2).is_err());
    }

    #[test]
    fn normal_core_examples() {
        let t = table(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(t.normal_core(DEFAULT_CORE_CAP).unwrap().size(), 2);
        let trivial = CosetTable::trivial(2);
        assert_eq!(trivial.normal_core(DEFAULT_CORE_CAP).unwrap(), trivial);
        let s3 = table(vec![vec![1, 2, 0], vec![1, 0, 2]]);
        assert_eq!(s3.normal_core(DEFAULT_CORE_CAP).unwrap().size(), 6);
        assert_eq!(s3.normal_core(5), Err(Error::CoreTooLarge { cap: 5 }));
    }

    #[test]
    fn image_group_arithmetic() {
        let s3 = table(vec![vec![1, 2, 0], vec![1, 0, 2]]);
        let q = s3.image_group(DEFAULT_CORE_CAP).unwrap();
        let (a, b) = (q.of_word(&w("a")), q.of_word(&w("b")));
        assert_eq!(q.mul(a, b), q.of_word(&w("ab")));
        assert_eq!(q.inverse(a), q.of_word(&w("A")));
        assert_ne!(q.of_word(&w("ab")), q.of_word(&w("ba")));
        assert_eq!(q.of_word(&w("aaa")), 0);
    }

    #[test]
    fn walking_is_a_right_action() {
        let t = table(vec![vec![1, 2, 3, 0], vec![1, 0, 3, 2]]);
        for (u, v) in [("ab", "Ba"), ("aab", "b"), ("1", "aB")] {
            let (u, v) = (w(u), w(v));
            for p in 0..4 {
                assert_eq!(t.walk(t.walk(p, &u), &v), t.walk(p, &u.multiply(&v).unwrap()));
            }
            // λ is a left action: λ(uv) = λ(u) ∘ λ(v)
            assert_eq!(t.left_action(&u.multiply(&v).unwrap()), t.left_action(&u).compose(&t.left_action(&v)));
        }
    }
}
