//! Concrete groups: free groups of finite rank and finite permutation groups
//! presented by generating permutations. Elements are always [`Word`]s.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::word::{Letter, Word};

pub const DEFAULT_BALL_CAP: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupContext {
    Free { rank: usize },
    Permutation { degree: usize, generators: Vec<Perm> },
}

impl GroupContext {
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidGroup("free group rank must be at least 1".into()));
        }
        Ok(GroupContext::Free { rank })
    }

    pub fn permutation(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidGroup("permutation group needs at least one generator".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!("{g:?} does not have degree {degree}")));
        }
        Ok(GroupContext::Permutation { degree, generators })
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        match self {
            GroupContext::Free { rank } => *rank,
            GroupContext::Permutation { generators, .. } => generators.len(),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, GroupContext::Free { .. })
    }

    /// All letters in shortlex order `a, A, b, B, ...`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..2 * self.rank()).map(Letter::from_slot)
    }

    pub fn generators(&self) -> impl Iterator<Item = Word> {
        (1..=self.rank()).map(Word::generator)
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_index() {
            i if i > self.rank() => Err(Error::LetterOutOfRange { index: i, rank: self.rank() }),
            _ => Ok(()),
        }
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let w: Word = s.parse()?;
        self.check_word(&w)?;
        Ok(w)
    }

    pub fn reduce<I: IntoIterator<Item = Letter>>(&self, letters: I) -> Result<Word> {
        let w = Word::reduce(letters);
        self.check_word(&w)?;
        Ok(w)
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.check_word(u)?;
        self.check_word(v)?;
        Ok(u.multiply(v))
    }

    /// Composite permutation of a word: `perm(uv) = perm(u) ∘ perm(v)`.
    pub fn permutation_of(&self, w: &Word) -> Result<Perm> {
        let GroupContext::Permutation { degree, generators } = self else {
            return Err(Error::NotFinite);
        };
        self.check_word(w)?;
        let mut p = Perm::identity(*degree);
        for l in w.letters() {
            let g = &generators[l.index() - 1];
            let g = if l.is_inverse() { g.inverse() } else { g.clone() };
            p = p.compose(&g);
        }
        Ok(p)
    }

    /// Equality of group elements: literal for free groups, by permutation otherwise.
    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        match self {
            GroupContext::Free { .. } => Ok(u == v),
            GroupContext::Permutation { .. } => Ok(self.permutation_of(u)? == self.permutation_of(v)?),
        }
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        match self {
            GroupContext::Free { .. } => Ok(w.is_identity()),
            GroupContext::Permutation { .. } => Ok(self.permutation_of(w)?.is_identity()),
        }
    }

    pub fn ball(&self, radius: usize) -> Result<Vec<Word>> {
        self.ball_with_cap(radius, DEFAULT_BALL_CAP)
    }

    /// Reduced words of length `<= radius` in shortlex order. For permutation
    /// groups only the shortlex-least word of each element is kept.
    pub fn ball_with_cap(&self, radius: usize, cap: usize) -> Result<Vec<Word>> {
        if let GroupContext::Free { rank } = self {
            let size = free_ball_size(*rank, radius);
            if size.is_none_or(|s| s > cap as u128) {
                return Err(Error::BallCapExceeded { radius, cap });
            }
        }
        let perms = self.perm_table();
        let mut seen: HashSet<Perm> = HashSet::new();
        let mut out = vec![Word::identity()];
        if let Some(ref perms) = perms {
            seen.insert(Perm::identity(perms[0].degree()));
        }
        let mut frontier: Vec<(Word, Option<Perm>)> = vec![(Word::identity(), perms.as_ref().map(|p| Perm::identity(p[0].degree())))];
        for _ in 0..radius {
            let mut next = Vec::new();
            for (w, p) in &frontier {
                for l in self.letters() {
                    if w.last() == Some(l.inverse()) {
                        continue;
                    }
                    let np = match (p, &perms) {
                        (Some(p), Some(table)) => {
                            let np = p.compose(&table[l.slot()]);
                            if !seen.insert(np.clone()) {
                                continue;
                            }
                            Some(np)
                        }
                        _ => None,
                    };
                    let nw = w.multiply(&Word::letter(l));
                    next.push((nw, np));
                    if out.len() + next.len() > cap {
                        return Err(Error::BallCapExceeded { radius, cap });
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Ok(out)
    }

    /// For permutation groups: every element with its shortlex-least word, in
    /// shortlex order of those words.
    pub fn elements(&self, cap: usize) -> Result<Vec<(Word, Perm)>> {
        let Some(table) = self.perm_table() else {
            return Err(Error::NotFinite);
        };
        let id = Perm::identity(table[0].degree());
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(id.clone(), 0);
        let mut out = vec![(Word::identity(), id)];
        let mut head = 0;
        while head < out.len() {
            let (w, p) = out[head].clone();
            head += 1;
            for l in self.letters() {
                let np = p.compose(&table[l.slot()]);
                if index.contains_key(&np) {
                    continue;
                }
                if out.len() >= cap {
                    return Err(Error::BallCapExceeded { radius: w.len() + 1, cap });
                }
                index.insert(np.clone(), out.len());
                out.push((w.multiply(&Word::letter(l)), np));
            }
        }
        Ok(out)
    }

    /// Permutation of every letter, indexed by slot.
    pub(crate) fn perm_table(&self) -> Option<Vec<Perm>> {
        match self {
            GroupContext::Free { .. } => None,
            GroupContext::Permutation { generators, .. } => Some(generators.iter().flat_map(|g| [g.clone(), g.inverse()]).collect()),
        }
    }
}

/// `1 + Σ_{ℓ=1..R} 2k(2k−1)^{ℓ−1}`, or `None` on overflow.
pub fn free_ball_size(rank: usize, radius: usize) -> Option<u128> {
    let k = rank as u128;
    let mut total: u128 = 1;
    let mut sphere: u128 = 2 * k;
    for l in 1..=radius {
        if l > 1 {
            sphere = sphere.checked_mul(2 * k - 1)?;
        }
        total = total.checked_add(sphere)?;
    }
    Some(total)
}
