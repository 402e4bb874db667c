//! Permutations of `{0..n-1}` as image arrays.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0..n-1}`, stored as its image array: `p[i]` is the image
/// of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Box<[u32]>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &image) in images.iter().enumerate() {
            if image >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {image} of {i} is outside 0..{n}"
                )));
            }
            if seen[image] {
                return Err(Error::InvalidPermutation(format!("image {image} is repeated")));
            }
            seen[image] = true;
        }
        Ok(Perm(images.into_iter().map(|i| i as u32).collect()))
    }

    pub(crate) fn from_u32_unchecked(images: Vec<u32>) -> Self {
        Perm(images.into_boxed_slice())
    }

    /// Transposition `(i j)` on `n` points.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.swap(i, j);
        Perm(images.into_boxed_slice())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &Perm) -> Perm {
        other.compose(self)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Perm(inv.into_boxed_slice())
    }

    /// Points where `self` and `other` disagree.
    pub fn disagreements(&self, other: &Perm) -> usize {
        self.0.iter().zip(other.0.iter()).filter(|(a, b)| a != b).count()
    }

    /// Swaps the images of two points; used by mutation tooling.
    pub(crate) fn swap_images(&mut self, i: usize, j: usize) {
        self.0.swap(i, j);
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_first() {
        let p = Perm::from_images(vec![1, 2, 0]).unwrap();
        let q = Perm::transposition(3, 0, 1);
        // (p ∘ q)(0) = p(q(0)) = p(1) = 2
        assert_eq!(p.compose(&q).apply(0), 2);
        assert_eq!(p.then(&q).apply(0), q.apply(p.apply(0)));
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![0, 2]).is_err());
    }
}
