//! Reidemeister–Schreier for finite-index subgroups of free groups.
//!
//! For left cosets the Schreier generator of `(i, x)` is `t_j⁻¹·x·t_i` with
//! `j = x·i`; it equals `α(x, i)⁻¹`. The shortlex transversal is suffix-closed,
//! so the nontrivial generators form a free basis of Λ of rank `1 + n(k−1)`.

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::word::{Letter, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SchreierBasis {
    generators: Vec<Word>,
    /// `letter_of[c-1][x-1]`: basis index (1-based) of `s_{c,x}`, `None` when trivial.
    letter_of: Vec<Vec<Option<usize>>>,
}

impl SchreierBasis {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    /// The free group on the basis.
    pub fn context(&self) -> GroupContext {
        GroupContext::Free { rank: self.rank() }
    }

    /// Substitutes basis words into a word over the basis letters.
    pub fn evaluate(&self, w: &Word) -> Word {
        w.substitute(&self.generators)
    }
}

pub fn schreier_basis(table: &CosetTable) -> Result<SchreierBasis> {
    let GroupContext::Free { rank } = table.ambient() else {
        return Err(Error::NotFree);
    };
    let mut generators = Vec::new();
    let mut letter_of = vec![vec![None; *rank]; table.index()];
    for i in 1..=table.index() {
        for x in 1..=*rank {
            let letter = Letter::generator(x);
            let j = table.act_letter(letter, i);
            let s = table.representative(j).inverse().multiply(&Word::letter(letter)).multiply(table.representative(i));
            if !s.is_identity() {
                generators.push(s);
                letter_of[i - 1][x - 1] = Some(generators.len());
            }
        }
    }
    Ok(SchreierBasis { generators, letter_of })
}

/// Rewrites λ ∈ Λ as a reduced word in the Schreier basis.
pub fn rewrite_in_basis(table: &CosetTable, basis: &SchreierBasis, lambda: &Word) -> Result<Word> {
    if !table.contains(lambda) {
        return Err(Error::NotInSubgroup(lambda.to_string()));
    }
    // λ·t_1 = t_{c_m}·σ_1⋯σ_m, peeling letters off the right.
    let mut coset = 1;
    let mut emitted = Vec::with_capacity(lambda.len());
    for &l in lambda.letters().iter().rev() {
        let x = l.index();
        if l.is_inverse() {
            let prev = table.act_letter(l, coset);
            if let Some(b) = basis.letter_of[prev - 1][x - 1] {
                emitted.push(Letter::new(b, true));
            }
            coset = prev;
        } else {
            if let Some(b) = basis.letter_of[coset - 1][x - 1] {
                emitted.push(Letter::generator(b));
            }
            coset = table.act_letter(l, coset);
        }
    }
    debug_assert_eq!(coset, 1);
    Ok(Word::reduce(emitted.into_iter().rev()))
}
