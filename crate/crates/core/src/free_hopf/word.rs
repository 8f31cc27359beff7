use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Longest word that fits the packed representation.
pub const MAX_WORD_LEN: usize = 16;
/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 256;

/// A monomial in the free algebra, packed one byte per letter with the first
/// letter in the most significant occupied byte. Letters are 0-based.
///
/// Ordering is by length first, then lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u128,
    len: u8,
}

impl Word {
    pub const fn empty() -> Self {
        Word { bits: 0, len: 0 }
    }

    pub fn letter(i: usize) -> Self {
        assert!(i < MAX_GENERATORS, "letter {i} out of range");
        Word { bits: i as u128, len: 1 }
    }

    pub fn repeat(i: usize, k: usize) -> Self {
        assert!(k <= MAX_WORD_LEN, "word length {k} exceeds {MAX_WORD_LEN}");
        let mut w = Word::empty();
        for _ in 0..k {
            w = w.push(i);
        }
        w
    }

    pub fn from_letters(letters: &[usize]) -> Result<Self> {
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::OutOfRange(format!(
                "word length {} exceeds {MAX_WORD_LEN}",
                letters.len()
            )));
        }
        let mut w = Word::empty();
        for &l in letters {
            if l >= MAX_GENERATORS {
                return Err(Error::OutOfRange(format!("letter {l} exceeds {}", MAX_GENERATORS - 1)));
            }
            w = w.push(l);
        }
        Ok(w)
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(self, i: usize) -> usize {
        debug_assert!(i < self.len());
        ((self.bits >> (8 * (self.len() - 1 - i))) & 0xff) as usize
    }

    pub fn first(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.get(0))
    }

    pub fn last(self) -> Option<usize> {
        (!self.is_empty()).then(|| (self.bits & 0xff) as usize)
    }

    #[inline]
    pub fn push(self, i: usize) -> Self {
        debug_assert!(self.len() < MAX_WORD_LEN && i < MAX_GENERATORS);
        Word { bits: (self.bits << 8) | i as u128, len: self.len + 1 }
    }

    #[inline]
    pub fn concat(self, other: Word) -> Self {
        if other.len == 0 {
            return self;
        }
        if self.len == 0 {
            return other;
        }
        debug_assert!(self.len() + other.len() <= MAX_WORD_LEN);
        Word { bits: (self.bits << (8 * other.len())) | other.bits, len: self.len + other.len }
    }

    /// Letters `[start, end)`.
    #[inline]
    pub fn slice(self, start: usize, end: usize) -> Self {
        debug_assert!(start <= end && end <= self.len());
        let k = end - start;
        if k == 0 {
            return Word::empty();
        }
        let shifted = self.bits >> (8 * (self.len() - end));
        let mask = if k == MAX_WORD_LEN { u128::MAX } else { (1u128 << (8 * k)) - 1 };
        Word { bits: shifted & mask, len: k as u8 }
    }

    #[inline]
    pub fn split_at(self, k: usize) -> (Word, Word) {
        (self.slice(0, k), self.slice(k, self.len()))
    }

    /// Word with the letter at position `i` removed.
    pub fn remove(self, i: usize) -> Word {
        self.slice(0, i).concat(self.slice(i + 1, self.len()))
    }

    pub fn letters(self) -> impl Iterator<Item = usize> {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.letters().collect()
    }

    pub fn reverse(self) -> Word {
        let mut w = Word::empty();
        for i in (0..self.len()).rev() {
            w = w.push(self.get(i));
        }
        w
    }

    pub fn rotate(self, k: usize) -> Word {
        if self.is_empty() {
            return self;
        }
        let (a, b) = self.split_at(k % self.len());
        b.concat(a)
    }

    /// Lexicographically smallest rotation; the canonical key of a cyclic word.
    pub fn min_rotation(self) -> Word {
        // same length, so numeric order is lexicographic order
        (0..self.len().max(1)).map(|k| self.rotate(k)).min().unwrap_or(self)
    }

    pub fn max_letter(self) -> Option<usize> {
        self.letters().max()
    }

    pub fn count_letter(self, l: usize) -> usize {
        self.letters().filter(|&x| x == l).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters().map(|l| format!("x{}", l + 1)).collect();
        write!(f, "{}", parts.join(""))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All words of length exactly `k` over `n` letters, in lexicographic order.
pub fn words_of_length(n: usize, k: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|w| (0..n).map(move |l| w.push(l))).collect();
    }
    out
}

/// All words of length at most `d`, ordered by (length, lex).
pub fn words_up_to(n: usize, d: usize) -> Vec<Word> {
    (0..=d).flat_map(|k| words_of_length(n, k)).collect()
}
