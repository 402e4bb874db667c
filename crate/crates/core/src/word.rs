//! Reduced words in the free group `F_k`.
//!
//! Letters are signed generator indices: `i > 0` is the generator `a_i`,
//! `-i` its inverse. Textually `a..z` are generators and `A..Z` their
//! inverses; the identity prints as `1`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest rank expressible in the textual alphabet.
pub const MAX_TEXT_RANK: usize = 26;

/// Sort key of a letter: generators in ascending order, then inverses in
/// ascending order (`a < b < … < A < B < …`).
pub fn letter_key(letter: i32) -> (u8, u32) {
    if letter > 0 {
        (0, letter as u32)
    } else {
        (1, letter.unsigned_abs())
    }
}

/// All letters of rank `rank` in [`letter_key`] order.
pub fn letters_in_order(rank: usize) -> impl Iterator<Item = i32> + Clone {
    let k = rank as i32;
    (1..=k).chain((1..=k).map(|i| -i))
}

pub fn letter_char(letter: i32) -> char {
    let offset = (letter.unsigned_abs() - 1) as u8;
    if letter > 0 {
        (b'a' + offset) as char
    } else {
        (b'A' + offset) as char
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: usize,
    letters: Vec<i32>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    /// The generator `a_index` (1-based).
    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        Word::new(rank, vec![index as i32])
    }

    /// Freely reduces `letters`, checking every index against `rank`.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = i32>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(rank));
        }
        let mut stack: Vec<i32> = Vec::new();
        for letter in letters {
            if letter == 0 || letter.unsigned_abs() as usize > rank {
                return Err(Error::IndexOutOfRange { index: letter as i64, rank });
            }
            if stack.last() == Some(&-letter) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Ok(Word { rank, letters: stack })
    }

    /// Same as [`Word::new`] for letters already known to be in range.
    pub(crate) fn reduced(rank: usize, letters: impl IntoIterator<Item = i32>) -> Self {
        let mut stack: Vec<i32> = Vec::new();
        for letter in letters {
            debug_assert!(letter != 0 && letter.unsigned_abs() as usize <= rank);
            if stack.last() == Some(&-letter) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Word { rank, letters: stack }
    }

    /// Parses `a..z` / `A..Z` text. `""` and `"1"` denote the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_TEXT_RANK {
            return Err(Error::InvalidRank(rank));
        }
        let text = text.trim();
        if text == "1" {
            return Ok(Word::identity(rank));
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let letter = match c {
                'a'..='z' => (c as u8 - b'a' + 1) as i32,
                'A'..='Z' => -((c as u8 - b'A' + 1) as i32),
                _ => return Err(Error::InvalidCharacter(c)),
            };
            if letter.unsigned_abs() as usize > rank {
                return Err(Error::LetterOutOfRange { letter: c, rank });
            }
            letters.push(letter);
        }
        Ok(Word::reduced(rank, letters))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        // Cancel the longest suffix of self against the prefix of other.
        let mut cancel = 0;
        while cancel < self.len()
            && cancel < other.len()
            && self.letters[self.len() - 1 - cancel] == -other.letters[cancel]
        {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&other.letters[cancel..]);
        Word { rank: self.rank, letters }
    }

    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// `conjugator · self · conjugator⁻¹`.
    pub fn conjugate_by(&self, conjugator: &Word) -> Result<Word> {
        conjugator.multiply(self)?.multiply(&conjugator.inverse())
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..exponent.unsigned_abs() {
            out = out.mul_unchecked(&base);
        }
        out
    }

    /// Splits `self = u · core · u⁻¹` with `core` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let letters = &self.letters;
        let mut i = 0;
        while i < letters.len() / 2 && letters[i] == -letters[letters.len() - 1 - i] {
            i += 1;
        }
        let outer = Word { rank: self.rank, letters: letters[..i].to_vec() };
        let core = Word { rank: self.rank, letters: letters[i..letters.len() - i].to_vec() };
        (outer, core)
    }

    /// The unique `r` with `self = r^m`, `m ≥ 1` maximal; generates the
    /// centraliser of a non-trivial element.
    pub fn root(&self) -> Word {
        if self.is_identity() {
            return self.clone();
        }
        let (outer, core) = self.cyclic_decomposition();
        let n = core.len();
        let period = (1..=n)
            .find(|&d| n % d == 0 && (d..n).all(|i| core.letters[i] == core.letters[i - d]))
            .unwrap_or(n);
        let root_core = Word { rank: self.rank, letters: core.letters[..period].to_vec() };
        outer.mul_unchecked(&root_core).mul_unchecked(&outer.inverse())
    }

    /// Some `t` with `other = t · self · t⁻¹`, if the two are conjugate.
    pub fn conjugator_to(&self, other: &Word) -> Result<Option<Word>> {
        self.check_rank(other)?;
        let (u, x) = self.cyclic_decomposition();
        let (v, y) = other.cyclic_decomposition();
        if x.len() != y.len() {
            return Ok(None);
        }
        if x.is_identity() {
            return Ok(Some(Word::identity(self.rank)));
        }
        let n = x.len();
        // y = q·p where x = p·q, so y = p⁻¹ x p.
        for split in 0..n {
            let rotated = x.letters[split..].iter().chain(&x.letters[..split]);
            if rotated.eq(y.letters.iter()) {
                let p = Word { rank: self.rank, letters: x.letters[..split].to_vec() };
                // other = v y v⁻¹ = v p⁻¹ u⁻¹ self u p v⁻¹
                let t = v.mul_unchecked(&p.inverse()).mul_unchecked(&u.inverse());
                return Ok(Some(t));
            }
        }
        Ok(None)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order with letters ordered by [`letter_key`].
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.letters
                .iter()
                .map(|&l| letter_key(l))
                .cmp(other.letters.iter().map(|&l| letter_key(l)))
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        if self.rank > MAX_TEXT_RANK {
            let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            return write!(f, "[{}]", parts.join(" "));
        }
        for &l in &self.letters {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}
