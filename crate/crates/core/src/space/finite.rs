use std::collections::{HashMap, HashSet, VecDeque};

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::group::{GroupContext, DEFAULT_BALL_CAP};
use crate::perm::Perm;
use crate::space::{Cylinder, GammaSpace};
use crate::word::{Letter, Word};

/// A finite Γ-space on points `1..=n`, given by one permutation per generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSpace {
    ambient: GroupContext,
    /// Indexed by letter slot, 0-based images.
    letters: Vec<Perm>,
}

impl FiniteSpace {
    /// `generators[k]` is the action of generator `k+1` on `{0..n-1}`. For a
    /// permutation-group ambient the assignment must respect its relations.
    pub fn new(ambient: GroupContext, generators: Vec<Perm>) -> Result<Self> {
        if generators.len() != ambient.rank() {
            return Err(Error::InvalidSpace(format!(
                "{} generator permutations for a group with {} generators",
                generators.len(),
                ambient.rank()
            )));
        }
        let n = generators.first().map(Perm::degree).unwrap_or(0);
        if n == 0 || generators.iter().any(|g| g.degree() != n) {
            return Err(Error::InvalidSpace("generator permutations must share a positive degree".into()));
        }
        let letters = generators.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        let space = FiniteSpace { ambient, letters };
        space.check_relations()?;
        Ok(space)
    }

    /// The coset space `Γ/Λ`.
    pub fn from_coset_table(table: &CosetTable) -> Self {
        let letters = table.ambient().letters().map(|l| table.letter_permutation(l)).collect();
        FiniteSpace { ambient: table.ambient().clone(), letters }
    }

    pub fn size(&self) -> usize {
        self.letters[0].degree()
    }

    pub fn points(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.size()
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x == 0 || x > self.size() {
            return Err(Error::BadPoint(format!("point {x} outside 1..={}", self.size())));
        }
        Ok(())
    }

    pub fn generator_permutations(&self) -> Vec<Perm> {
        self.letters.iter().step_by(2).cloned().collect()
    }

    pub fn act_letter(&self, l: Letter, x: usize) -> usize {
        self.letters[l.slot()].apply(x - 1) + 1
    }

    pub fn act_point(&self, g: &Word, x: usize) -> usize {
        g.letters().iter().rev().fold(x, |p, &l| self.act_letter(l, p))
    }

    /// Orbit of `x` with a word `u_y` for each orbit point, `u_y·x = y`,
    /// discovered breadth-first in shortlex letter order.
    pub fn orbit_words(&self, x: usize) -> Vec<(usize, Word)> {
        let mut seen = HashSet::from([x]);
        let mut out = vec![(x, Word::identity())];
        let mut queue = VecDeque::from([(x, Word::identity())]);
        while let Some((y, u)) = queue.pop_front() {
            for l in self.ambient.letters() {
                let z = self.act_letter(l, y);
                if seen.insert(z) {
                    let w = Word::letter(l).multiply(&u);
                    out.push((z, w.clone()));
                    queue.push_back((z, w));
                }
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_words(1).len() == self.size()
    }

    /// Disjoint union; points of `other` are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &FiniteSpace) -> Result<FiniteSpace> {
        if self.ambient != other.ambient {
            return Err(Error::InvalidSpace("disjoint union of spaces over different groups".into()));
        }
        let n = self.size();
        let generators = self
            .generator_permutations()
            .iter()
            .zip(other.generator_permutations())
            .map(|(p, q)| {
                let mut images = p.images().to_vec();
                images.extend(q.images().iter().map(|y| y + n));
                Perm::new(images)
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteSpace::new(self.ambient.clone(), generators)
    }

    fn check_relations(&self) -> Result<()> {
        let GroupContext::Permutation { .. } = self.ambient else {
            return Ok(());
        };
        // Two words with the same ambient permutation must act identically.
        let elements = self.ambient.elements(DEFAULT_BALL_CAP)?;
        let table = self.ambient.perm_table().expect("finite ambient");
        let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, (_, p))| (p, i)).collect();
        let action: Vec<Perm> = elements.iter().map(|(w, _)| self.word_perm(w)).collect();
        for (i, (_, p)) in elements.iter().enumerate() {
            for l in self.ambient.letters() {
                let j = index[&table[l.slot()].compose(p)];
                if self.letters[l.slot()].compose(&action[i]) != action[j] {
                    return Err(Error::InvalidSpace(format!(
                        "generator permutations do not define an action of the group (fails at {})",
                        Word::letter(l).multiply(&elements[i].0)
                    )));
                }
            }
        }
        Ok(())
    }

    fn word_perm(&self, w: &Word) -> Perm {
        w.letters().iter().fold(Perm::identity(self.size()), |acc, l| acc.compose(&self.letters[l.slot()]))
    }
}

impl GammaSpace for FiniteSpace {
    type Point = usize;

    fn ambient(&self) -> &GroupContext {
        &self.ambient
    }

    fn act(&self, g: &Word, x: &usize) -> Result<usize> {
        self.ambient.check_word(g)?;
        self.check_point(*x)?;
        Ok(self.act_point(g, *x))
    }

    fn cylinder(&self, x: &usize, _depth: usize) -> Cylinder {
        Cylinder::Point(*x)
    }

    fn cylinder_count(&self, _depth: usize) -> Option<u128> {
        Some(self.size() as u128)
    }

    fn format_point(&self, x: &usize) -> String {
        x.to_string()
    }

    fn parse_point(&self, s: &str) -> Result<usize> {
        let x: usize = s.trim().parse().map_err(|_| Error::BadPoint(format!("{s:?} is not a point index")))?;
        self.check_point(x)?;
        Ok(x)
    }
}
