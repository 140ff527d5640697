//! Finite-index subgroups: coset enumeration, the shortlex transversal, the
//! coset action on `Γ/Λ`, and the cocycle `α : Γ × Γ/Λ → Λ`.
//!
//! Cosets are left cosets `t_iΛ`, numbered `1..=n` with coset 1 = Λ and the
//! rest ordered by their shortlex-least representative.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GroupContext, DEFAULT_BALL_CAP};
use crate::perm::Perm;
use crate::word::{Letter, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupHandle {
    ambient: GroupContext,
    generators: Vec<Word>,
}

impl SubgroupHandle {
    /// Identity generators are dropped.
    pub fn new(ambient: GroupContext, generators: Vec<Word>) -> Result<Self> {
        for g in &generators {
            ambient.check_word(g)?;
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(SubgroupHandle { ambient, generators })
    }

    pub fn parse(ambient: GroupContext, generators: &[&str]) -> Result<Self> {
        let words = generators.iter().map(|s| ambient.parse_word(s)).collect::<Result<Vec<_>>>()?;
        SubgroupHandle::new(ambient, words)
    }

    pub fn whole(ambient: GroupContext) -> Self {
        let generators = ambient.generators().collect();
        SubgroupHandle { ambient, generators }
    }

    pub fn ambient(&self) -> &GroupContext {
        &self.ambient
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }
}

/// `t·Λ·t⁻¹`, generated by the conjugated generators.
pub fn conjugate_subgroup(sub: &SubgroupHandle, t: &Word) -> SubgroupHandle {
    SubgroupHandle {
        ambient: sub.ambient.clone(),
        generators: sub.generators.iter().map(|h| t.conjugate(h)).filter(|h| !h.is_identity()).collect(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CosetTable {
    subgroup: SubgroupHandle,
    /// `action[slot][c-1]` is the coset `letter · t_cΛ` (1-based).
    action: Vec<Vec<usize>>,
    transversal: Vec<Word>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    pub fn ambient(&self) -> &GroupContext {
        &self.subgroup.ambient
    }

    pub fn subgroup(&self) -> &SubgroupHandle {
        &self.subgroup
    }

    pub fn transversal(&self) -> &[Word] {
        &self.transversal
    }

    /// `t_i`, 1-based.
    pub fn representative(&self, coset: usize) -> &Word {
        &self.transversal[coset - 1]
    }

    pub fn act_letter(&self, l: Letter, coset: usize) -> usize {
        self.action[l.slot()][coset - 1]
    }

    /// Image of coset `i` under the left action of `w` (rightmost letter first).
    pub fn act(&self, w: &Word, coset: usize) -> usize {
        w.letters().iter().rev().fold(coset, |c, &l| self.act_letter(l, c))
    }

    pub fn coset_of(&self, w: &Word) -> usize {
        self.act(w, 1)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.coset_of(w) == 1
    }

    pub fn check_coset(&self, coset: usize) -> Result<()> {
        if coset == 0 || coset > self.index() {
            return Err(Error::CosetOutOfRange { index: coset, size: self.index() });
        }
        Ok(())
    }

    /// The unique λ ∈ Λ with `γ·t_i·λ ∈ T`, namely `(γ t_i)⁻¹ t_j` for `j = γ·i`.
    pub fn cocycle(&self, gamma: &Word, coset: usize) -> Word {
        let j = self.act(gamma, coset);
        self.representative(coset).inverse().multiply(&gamma.inverse()).multiply(self.representative(j))
    }

    pub fn cocycle_checked(&self, gamma: &Word, coset: usize) -> Result<Word> {
        self.ambient().check_word(gamma)?;
        self.check_coset(coset)?;
        Ok(self.cocycle(gamma, coset))
    }

    /// `{t_1 t⁻¹, ..., t_n t⁻¹}`, a transversal for `Γ/(tΛt⁻¹)`.
    pub fn conjugate_transversal(&self, t: &Word) -> Vec<Word> {
        let ti = t.inverse();
        self.transversal.iter().map(|r| r.multiply(&ti)).collect()
    }

    /// Permutation of `{0..n-1}` induced by a letter.
    pub fn letter_permutation(&self, l: Letter) -> Perm {
        Perm::new(self.action[l.slot()].iter().map(|c| c - 1).collect()).expect("coset action is a bijection")
    }

    fn from_left_action(subgroup: SubgroupHandle, left: Vec<Vec<usize>>) -> Self {
        // left[slot][c] 0-based, coset 0 = Λ. Shortlex-least representatives by
        // levels: t_c = x·t_{c'} with c = x·c'.
        let n = left[0].len();
        let slots = left.len();
        let mut rep: Vec<Option<Word>> = vec![None; n];
        rep[0] = Some(Word::identity());
        let mut level = vec![0usize];
        while !level.is_empty() {
            let mut best: HashMap<usize, Word> = HashMap::new();
            for &c in &level {
                let tc = rep[c].clone().unwrap();
                for (s, row) in left.iter().enumerate() {
                    let d = row[c];
                    if rep[d].is_some() {
                        continue;
                    }
                    let cand = Word::letter(Letter::from_slot(s)).multiply(&tc);
                    match best.get(&d) {
                        Some(w) if *w <= cand => {}
                        _ => {
                            best.insert(d, cand);
                        }
                    }
                }
            }
            level = best.keys().copied().collect();
            for (d, w) in best {
                rep[d] = Some(w);
            }
        }
        let reps: Vec<Word> = rep.into_iter().map(|r| r.expect("coset action is transitive")).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| reps[x].cmp(&reps[y]));
        let mut new_index = vec![0; n];
        for (pos, &old) in order.iter().enumerate() {
            new_index[old] = pos + 1;
        }
        let action = (0..slots).map(|s| order.iter().map(|&old| new_index[left[s][old]]).collect()).collect();
        let transversal = order.iter().map(|&old| reps[old].clone()).collect();
        CosetTable { subgroup, action, transversal }
    }
}

impl Serialize for CosetTable {
    /// `{index, transversal: [words], action: {letter: [cosets]}}`, letters in shortlex order.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Action<'a>(&'a [Vec<usize>]);
        impl Serialize for Action<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (slot, row) in self.0.iter().enumerate() {
                    let key = Letter::from_slot(slot).to_char().map(String::from).unwrap_or_else(|| slot.to_string());
                    m.serialize_entry(&key, row)?;
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("CosetTable", 3)?;
        st.serialize_field("index", &self.index())?;
        st.serialize_field("transversal", &self.transversal)?;
        st.serialize_field("action", &Action(&self.action))?;
        st.end()
    }
}

/// Enumerates the left cosets of a finite-index subgroup.
pub fn enumerate_cosets(sub: &SubgroupHandle, max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::InvalidParameter("max_cosets must be at least 1".into()));
    }
    let table = match &sub.ambient {
        GroupContext::Free { rank } => enumerate_free(sub, *rank, max_cosets)?,
        GroupContext::Permutation { .. } => enumerate_finite(sub, max_cosets)?,
    };
    Ok(table)
}

struct RightCosets {
    slots: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
}

impl RightCosets {
    fn find(&mut self, mut c: usize) -> usize {
        while self.parent[c] != c {
            self.parent[c] = self.parent[self.parent[c]];
            c = self.parent[c];
        }
        c
    }

    fn get(&mut self, c: usize, slot: usize) -> Option<usize> {
        let c = self.find(c);
        let d = self.table[c][slot]?;
        Some(self.find(d))
    }

    fn define(&mut self, c: usize, slot: usize) -> usize {
        let d = self.table.len();
        self.table.push(vec![None; self.slots]);
        self.parent.push(d);
        self.table[c][slot] = Some(d);
        self.table[d][slot ^ 1] = Some(c);
        d
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::from([(a, b)]);
        while let Some((x, y)) = queue.pop_front() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (keep, gone) = (x.min(y), x.max(y));
            self.parent[gone] = keep;
            for s in 0..self.slots {
                let Some(c) = self.table[gone][s].take() else { continue };
                let is = s ^ 1;
                if self.table[c][is] == Some(gone) {
                    self.table[c][is] = None;
                }
                let c = self.find(c);
                match self.table[keep][s] {
                    Some(d) => queue.push_back((d, c)),
                    None => self.table[keep][s] = Some(c),
                }
                match self.table[c][is] {
                    Some(d) => queue.push_back((d, keep)),
                    None => self.table[c][is] = Some(keep),
                }
            }
        }
    }

    /// Scans `w` as a relator at coset 0, defining cosets as needed.
    fn scan_and_fill(&mut self, w: &Word, definition_cap: usize, max_cosets: usize) -> Result<()> {
        let letters = w.letters();
        loop {
            let mut f = self.find(0);
            let mut i = 0;
            while i < letters.len() {
                match self.get(f, letters[i].slot()) {
                    Some(d) => {
                        f = d;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == letters.len() {
                self.merge(f, 0);
                return Ok(());
            }
            let mut b = self.find(0);
            let mut j = letters.len();
            while j > i {
                match self.get(b, letters[j - 1].inverse().slot()) {
                    Some(d) => {
                        b = d;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                self.merge(f, b);
                return Ok(());
            }
            if j == i + 1 {
                let s = letters[i].slot();
                self.table[f][s] = Some(b);
                self.table[b][s ^ 1] = Some(f);
                return Ok(());
            }
            if self.table.len() >= definition_cap {
                return Err(Error::CosetBudgetExhausted { max_cosets });
            }
            self.define(f, letters[i].slot());
        }
    }
}

fn enumerate_free(sub: &SubgroupHandle, rank: usize, max_cosets: usize) -> Result<CosetTable> {
    if sub.generators.is_empty() {
        return Err(Error::InfiniteIndex);
    }
    let slots = 2 * rank;
    let mut rc = RightCosets { slots, table: vec![vec![None; slots]], parent: vec![0] };
    // No relators: at most one definition per generator letter.
    let definition_cap = 1 + sub.generators.iter().map(Word::len).sum::<usize>();
    for h in &sub.generators {
        rc.scan_and_fill(h, definition_cap, max_cosets)?;
    }
    let live: Vec<usize> = (0..rc.table.len()).filter(|&c| rc.parent[c] == c).collect();
    if live.len() > max_cosets {
        return Err(Error::CosetBudgetExhausted { max_cosets });
    }
    let mut pos = vec![usize::MAX; rc.table.len()];
    for (i, &c) in live.iter().enumerate() {
        pos[c] = i;
    }
    // Right coset Λγ⁻¹ ↔ left coset γΛ, so the left action of x is the right action of x⁻¹.
    let mut left = vec![vec![0; live.len()]; slots];
    for (i, &c) in live.iter().enumerate() {
        for (s, row) in left.iter_mut().enumerate() {
            let Some(d) = rc.get(c, s ^ 1) else {
                return Err(Error::InfiniteIndex);
            };
            row[i] = pos[d];
        }
    }
    let table = CosetTable::from_left_action(sub.clone(), left);
    debug_assert!(sub.generators.iter().all(|h| table.contains(h)));
    Ok(table)
}

fn enumerate_finite(sub: &SubgroupHandle, max_cosets: usize) -> Result<CosetTable> {
    let ctx = &sub.ambient;
    let elements = ctx.elements(DEFAULT_BALL_CAP)?;
    let table = ctx.perm_table().expect("finite context");
    let degree = table[0].degree();
    // Λ as a set of permutations.
    let gens: Vec<Perm> = sub.generators.iter().map(|h| ctx.permutation_of(h)).collect::<Result<_>>()?;
    let mut lambda: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
    let mut queue = vec![Perm::identity(degree)];
    while let Some(p) = queue.pop() {
        for g in &gens {
            for q in [p.compose(g), p.compose(&g.inverse())] {
                if lambda.insert(q.clone()) {
                    queue.push(q);
                }
            }
        }
    }
    let mut lambda: Vec<Perm> = lambda.into_iter().collect();
    lambda.sort();
    let mut coset_of: HashMap<Perm, usize> = HashMap::new();
    let mut reps: Vec<(Word, Perm)> = Vec::new();
    for (w, p) in &elements {
        if coset_of.contains_key(p) {
            continue;
        }
        if reps.len() == max_cosets {
            return Err(Error::CosetBudgetExhausted { max_cosets });
        }
        for h in &lambda {
            coset_of.insert(p.compose(h), reps.len() + 1);
        }
        reps.push((w.clone(), p.clone()));
    }
    let action = table.iter().map(|g| reps.iter().map(|(_, p)| coset_of[&g.compose(p)]).collect()).collect();
    let transversal = reps.into_iter().map(|(w, _)| w).collect();
    Ok(CosetTable { subgroup: sub.clone(), action, transversal })
}
