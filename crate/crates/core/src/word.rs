//! Freely reduced words over a finite alphabet of generators and their inverses.
//!
//! Words serialize over `a..z` / `A..Z`: lowercase letter `k` is generator `k`,
//! uppercase is its inverse, and the empty string is the identity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator or its inverse. `index` is 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    index: u16,
    inverse: bool,
}

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Self {
        assert!(index >= 1 && index <= u16::MAX as usize, "generator index {index} out of range");
        Letter { index: index as u16, inverse }
    }

    pub fn generator(index: usize) -> Self {
        Letter::new(index, false)
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    /// Position in the shortlex alphabet `a, A, b, B, ...`; also the column of a coset table.
    pub fn slot(self) -> usize {
        2 * (self.index as usize - 1) + self.inverse as usize
    }

    pub fn from_slot(slot: usize) -> Self {
        Letter::new(slot / 2 + 1, slot % 2 == 1)
    }

    pub fn to_char(self) -> Option<char> {
        if self.index > 26 {
            return None;
        }
        let base = if self.inverse { b'A' } else { b'a' };
        Some((base + (self.index - 1) as u8) as char)
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a'..='z' => Ok(Letter::new(c as usize - 'a' as usize + 1, false)),
            'A'..='Z' => Ok(Letter::new(c as usize - 'A' as usize + 1, true)),
            _ => Err(Error::BadLetter(c)),
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slot().cmp(&other.slot())
    }
}

/// A freely reduced word. The empty word is the identity.
///
/// Ordering is shortlex: shorter words first, then lexicographic in the
/// alphabet order `a < A < b < B < ...`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(index: usize) -> Self {
        Word::letter(Letter::generator(index))
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest generator index used, 0 for the identity.
    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut cancel = 0;
        while cancel < self.0.len() && cancel < other.0.len() && self.0[self.0.len() - 1 - cancel] == other.0[cancel].inverse() {
            cancel += 1;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len() - 2 * cancel);
        out.extend_from_slice(&self.0[..self.0.len() - cancel]);
        out.extend_from_slice(&other.0[cancel..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// `self · w · self⁻¹`.
    pub fn conjugate(&self, w: &Word) -> Word {
        self.multiply(w).multiply(&self.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Prefix of length `n` (or the whole word when shorter).
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Substitutes `images[i-1]` for generator `i` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = &images[l.index() - 1];
            out = if l.is_inverse() { out.multiply(&img.inverse()) } else { out.multiply(img) };
        }
        out
    }

    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        Word(letters)
    }

    pub(crate) fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// Word-string form; fails only for generator indices beyond 26.
    pub fn try_to_string(&self) -> Result<String> {
        self.0.iter().map(|l| l.to_char().ok_or(Error::LetterOutOfRange { index: l.index(), rank: 26 })).collect()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            match l.to_char() {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "[{}{}]", l.index(), if l.is_inverse() { "'" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "e")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses and freely reduces a word string.
    fn from_str(s: &str) -> Result<Word> {
        let letters = s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = self.try_to_string().map_err(serde::ser::Error::custom)?;
        s.serialize_str(&text)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
