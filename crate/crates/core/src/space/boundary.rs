use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::group::{free_ball_size, GroupContext};
use crate::schreier::{rewrite_in_basis, SchreierBasis};
use crate::space::{Cylinder, GammaSpace};
use crate::word::{Letter, Word};

/// An eventually periodic point `prefix · period^∞` of the boundary of a free group.
///
/// Always held in normal form: the seam is reduction-free, the period is
/// cyclically reduced and primitive, and the prefix is as short as possible.
/// Two points are equal iff their normal forms are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPoint {
    prefix: Word,
    period: Word,
}

impl BoundaryPoint {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::BadBoundaryPoint("period must be nonempty".into()));
        }
        // period = c·core·c⁻¹ with core cyclically reduced, so u·period^∞ = (u·c)·core^∞
        let letters = period.letters();
        let (mut lo, mut hi) = (0, letters.len());
        while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        let head = prefix.multiply(&Word::from_reduced(letters[..lo].to_vec()));
        let mut per: VecDeque<Letter> = letters[lo..hi].iter().copied().collect();
        let mut pre = head.into_letters();

        while let (Some(&l), Some(&f)) = (pre.last(), per.front()) {
            if l != f.inverse() {
                break;
            }
            pre.pop();
            per.rotate_left(1);
        }

        let per: Vec<Letter> = per.into_iter().collect();
        let root = primitive_root_len(&per);
        let mut per: VecDeque<Letter> = per[..root].iter().copied().collect();

        while let (Some(&l), Some(&b)) = (pre.last(), per.back()) {
            if l != b {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }

        Ok(BoundaryPoint { prefix: Word::from_reduced(pre), period: Word::from_reduced(per.into_iter().collect()) })
    }

    /// `w^∞` for a nonidentity `w`.
    pub fn periodic(w: Word) -> Result<Self> {
        BoundaryPoint::new(Word::identity(), w)
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// Letter at position `k` of the infinite expansion.
    pub fn letter_at(&self, k: usize) -> Letter {
        let u = self.prefix.letters();
        if k < u.len() {
            u[k]
        } else {
            let v = self.period.letters();
            v[(k - u.len()) % v.len()]
        }
    }

    /// First `n` letters of the expansion.
    pub fn expansion(&self, n: usize) -> Word {
        Word::from_reduced((0..n).map(|k| self.letter_at(k)).collect())
    }

    /// `g · self` in the free group on the same letters.
    pub fn translate(&self, g: &Word) -> BoundaryPoint {
        if g.is_identity() {
            return self.clone();
        }
        BoundaryPoint::new(g.multiply(&self.prefix), self.period.clone()).expect("period is nonempty")
    }

    pub fn max_index(&self) -> usize {
        self.prefix.max_index().max(self.period.max_index())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (u, v) = s.trim().split_once('|').ok_or_else(|| Error::BadBoundaryPoint(format!("{s:?} lacks '|'")))?;
        BoundaryPoint::new(u.parse()?, v.parse()?)
    }
}

fn primitive_root_len(v: &[Letter]) -> usize {
    let n = v.len();
    (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p])).unwrap_or(n)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.prefix, self.period)
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PrefixDepth {
    Equal,
    Depth(usize),
}

impl PrefixDepth {
    /// Depth with `Equal` capped at `cap`.
    pub fn capped(self, cap: usize) -> usize {
        match self {
            PrefixDepth::Equal => cap,
            PrefixDepth::Depth(d) => d.min(cap),
        }
    }
}

/// Length of the longest common prefix of two expansions.
pub fn common_prefix_depth(x: &BoundaryPoint, y: &BoundaryPoint) -> PrefixDepth {
    if x == y {
        return PrefixDepth::Equal;
    }
    let (p, q) = (x.period.len(), y.period.len());
    let bound = x.prefix.len().max(y.prefix.len()) + p / gcd(p, q) * q;
    match (0..bound).find(|&k| x.letter_at(k) != y.letter_at(k)) {
        Some(k) => PrefixDepth::Depth(k),
        None => unreachable!("distinct normal forms {x} and {y} agree to depth {bound}"),
    }
}

/// How group words reach the free group whose boundary this is.
#[derive(Clone, Debug)]
pub enum BoundaryLift {
    /// The ambient group is the free group itself.
    Free,
    /// The ambient group is Γ; only Λ acts, through its Schreier basis.
    Schreier { table: Arc<CosetTable>, basis: Arc<SchreierBasis> },
}

/// The Gromov boundary of a free group of rank ≥ 2, restricted to eventually
/// periodic points.
#[derive(Clone, Debug)]
pub struct BoundarySpace {
    rank: usize,
    ambient: GroupContext,
    lift: BoundaryLift,
    enabled: bool,
}

impl BoundarySpace {
    pub fn free(rank: usize) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidSpace(format!("boundary needs rank at least 2, got {rank}")));
        }
        Ok(BoundarySpace { rank, ambient: GroupContext::Free { rank }, lift: BoundaryLift::Free, enabled: true })
    }

    /// The boundary of Λ's Schreier free group, acted on by Λ ⊆ Γ.
    pub fn of_subgroup(table: Arc<CosetTable>, basis: Arc<SchreierBasis>) -> Result<Self> {
        let rank = basis.rank();
        if rank < 2 {
            return Err(Error::InvalidSpace(format!("subgroup has free rank {rank}; its boundary is not a boundary action")));
        }
        Ok(BoundarySpace { rank, ambient: table.ambient().clone(), lift: BoundaryLift::Schreier { table, basis }, enabled: true })
    }

    /// Same points, but every admissible word acts trivially (control runs).
    pub fn with_action_disabled(mut self) -> Self {
        self.enabled = false;
        self
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lift_kind(&self) -> &BoundaryLift {
        &self.lift
    }

    /// The free group whose boundary this is.
    pub fn fiber_group(&self) -> GroupContext {
        GroupContext::Free { rank: self.rank }
    }

    /// Ambient word realizing a fiber-group word.
    pub fn lift(&self, w: &Word) -> Word {
        match &self.lift {
            BoundaryLift::Free => w.clone(),
            BoundaryLift::Schreier { basis, .. } => basis.evaluate(w),
        }
    }

    /// Fiber-group word of an ambient word (must lie in Λ for subgroup actions).
    pub fn to_fiber_word(&self, g: &Word) -> Result<Word> {
        self.ambient.check_word(g)?;
        match &self.lift {
            BoundaryLift::Free => Ok(g.clone()),
            BoundaryLift::Schreier { table, basis } => rewrite_in_basis(table, basis, g),
        }
    }

    fn check_point(&self, p: &BoundaryPoint) -> Result<()> {
        if p.max_index() > self.rank {
            return Err(Error::BadBoundaryPoint(format!("{p} uses letters beyond rank {}", self.rank)));
        }
        Ok(())
    }
}

impl GammaSpace for BoundarySpace {
    type Point = BoundaryPoint;

    fn ambient(&self) -> &GroupContext {
        &self.ambient
    }

    fn act(&self, g: &Word, p: &BoundaryPoint) -> Result<BoundaryPoint> {
        let w = self.to_fiber_word(g)?;
        if !self.enabled {
            return Ok(p.clone());
        }
        Ok(p.translate(&w))
    }

    fn cylinder(&self, p: &BoundaryPoint, depth: usize) -> Cylinder {
        Cylinder::Prefix(p.expansion(depth))
    }

    fn cylinder_count(&self, depth: usize) -> Option<u128> {
        if depth == 0 {
            return Some(1);
        }
        Some(free_ball_size(self.rank, depth)? - free_ball_size(self.rank, depth - 1)?)
    }

    fn format_point(&self, p: &BoundaryPoint) -> String {
        p.to_string()
    }

    fn parse_point(&self, s: &str) -> Result<BoundaryPoint> {
        let p = BoundaryPoint::parse(s)?;
        self.check_point(&p)?;
        Ok(p)
    }
}
