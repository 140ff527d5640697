use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{AtomRecord, AtomicMeasure, Weight};
use crate::space::{common_prefix_depth, BoundaryPoint, BoundarySpace, GammaSpace, InducedSpace, PrefixDepth};
use crate::word::{Letter, Word};

/// A space whose points carry a free-group boundary coordinate, so that
/// contraction can be steered through the fiber group.
pub trait SymbolicSpace: GammaSpace {
    fn boundary(&self) -> &BoundarySpace;

    fn fiber_point<'a>(&self, p: &'a Self::Point) -> &'a BoundaryPoint;

    /// Coset coordinate, `None` for a bare boundary.
    fn coset(&self, p: &Self::Point) -> Option<usize>;

    /// An ambient word taking the fiber over `from` to the fiber over `to` and
    /// acting on fiber coordinates as the fiber-group word `w`.
    fn steer(&self, from: Option<usize>, to: Option<usize>, w: &Word) -> Word;

    /// The point with the given coordinates.
    fn make_point(&self, coset: Option<usize>, y: BoundaryPoint) -> Self::Point;

    /// Coset coordinates present in the space.
    fn cosets(&self) -> Vec<Option<usize>> {
        vec![None]
    }

    fn is_induced(&self) -> bool {
        false
    }
}

impl SymbolicSpace for BoundarySpace {
    fn boundary(&self) -> &BoundarySpace {
        self
    }

    fn fiber_point<'a>(&self, p: &'a BoundaryPoint) -> &'a BoundaryPoint {
        p
    }

    fn coset(&self, _p: &BoundaryPoint) -> Option<usize> {
        None
    }

    fn steer(&self, _from: Option<usize>, _to: Option<usize>, w: &Word) -> Word {
        self.lift(w)
    }

    fn make_point(&self, _coset: Option<usize>, y: BoundaryPoint) -> BoundaryPoint {
        y
    }
}

impl SymbolicSpace for InducedSpace<BoundarySpace> {
    fn boundary(&self) -> &BoundarySpace {
        self.fiber()
    }

    fn fiber_point<'a>(&self, p: &'a (usize, BoundaryPoint)) -> &'a BoundaryPoint {
        &p.1
    }

    fn coset(&self, p: &(usize, BoundaryPoint)) -> Option<usize> {
        Some(p.0)
    }

    /// `t_to · λ · t_from⁻¹` with λ the Λ-element of `w`: it sends `(from, y)`
    /// to `(to, w·y)`.
    fn steer(&self, from: Option<usize>, to: Option<usize>, w: &Word) -> Word {
        let t = self.table();
        let t_from = t.representative(from.unwrap_or(1));
        let t_to = t.representative(to.unwrap_or(1));
        t_to.multiply(&self.fiber().lift(w)).multiply(&t_from.inverse())
    }

    fn make_point(&self, coset: Option<usize>, y: BoundaryPoint) -> (usize, BoundaryPoint) {
        (coset.unwrap_or(1), y)
    }

    fn cosets(&self) -> Vec<Option<usize>> {
        (1..=self.index()).map(Some).collect()
    }

    fn is_induced(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Strategy {
    /// Powers of the first fiber generator, after at most one perturbing letter.
    AxisPower,
    /// Axis powers in the fiber, conjugated into Γ by the coset representative.
    PaperSequence,
    /// Repeatedly apply the best element of the fiber ball of the given radius.
    GreedyBall { radius: usize },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::AxisPower => write!(f, "axis-power"),
            Strategy::PaperSequence => write!(f, "paper-sequence"),
            Strategy::GreedyBall { radius } => write!(f, "greedy-ball:{radius}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "axis-power" => Ok(Strategy::AxisPower),
            "paper-sequence" => Ok(Strategy::PaperSequence),
            other => {
                let radius = other
                    .strip_prefix("greedy-ball")
                    .map(|r| r.strip_prefix(':').unwrap_or(if r.is_empty() { "2" } else { r }))
                    .and_then(|r| r.parse().ok())
                    .filter(|&r| r >= 1)
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown strategy {s:?}")))?;
                Ok(Strategy::GreedyBall { radius })
            }
        }
    }
}

impl TryFrom<String> for Strategy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Strategy> for String {
    fn from(s: Strategy) -> String {
        s.to_string()
    }
}

/// Replayable evidence that `δ_y` is approached by translates of a measure.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ContractionCertificate {
    #[serde(default)]
    pub id: String,
    #[serde(default)]
    pub space: String,
    pub strategy: Strategy,
    pub measure: Vec<AtomRecord>,
    pub steps: Vec<Word>,
    pub target_depth: usize,
    /// Common prefix depth after replay; a point mass counts as `target_depth`.
    pub achieved_depth: usize,
    pub exact_dirac: bool,
    pub limit_cylinder: String,
}

impl ContractionCertificate {
    /// Total word length of the steps.
    pub fn word_length(&self) -> usize {
        self.steps.iter().map(Word::len).sum()
    }

    /// `γ_L ⋯ γ_1`.
    pub fn product(&self) -> Word {
        self.steps.iter().fold(Word::identity(), |acc, g| g.multiply(&acc))
    }

    /// Replays from the serialized data and compares with the stored outcome.
    pub fn verify<S: SymbolicSpace>(&self, space: &S) -> Result<bool> {
        let r = replay(space, &self.measure, &self.steps, self.target_depth)?;
        Ok(r.achieved_depth == self.achieved_depth
            && r.exact_dirac == self.exact_dirac
            && r.limit_cylinder == self.limit_cylinder
            && self.achieved_depth >= self.target_depth)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Replay {
    pub achieved_depth: usize,
    pub exact_dirac: bool,
    pub limit_cylinder: String,
}

#[derive(Clone, Debug)]
pub enum ContractionOutcome {
    Certified(ContractionCertificate),
    Exhausted { reason: String, steps_tried: usize, best_depth: usize },
}

impl ContractionOutcome {
    pub fn certificate(&self) -> Option<&ContractionCertificate> {
        match self {
            ContractionOutcome::Certified(c) => Some(c),
            ContractionOutcome::Exhausted { .. } => None,
        }
    }
}

/// Common prefix depth of the fiber coordinates, `None` if the atoms lie over
/// different cosets (such a measure can never contract).
pub fn measure_depth<S: SymbolicSpace, W: Weight>(space: &S, nu: &AtomicMeasure<S::Point, W>) -> Option<PrefixDepth> {
    let mut atoms = nu.support();
    let first = atoms.next()?;
    let c = space.coset(first);
    let y0 = space.fiber_point(first);
    let mut depth = PrefixDepth::Equal;
    for p in atoms {
        if space.coset(p) != c {
            return None;
        }
        depth = match (depth, common_prefix_depth(y0, space.fiber_point(p))) {
            (PrefixDepth::Equal, d) => d,
            (d, PrefixDepth::Equal) => d,
            (PrefixDepth::Depth(a), PrefixDepth::Depth(b)) => PrefixDepth::Depth(a.min(b)),
        };
    }
    Some(depth)
}

fn summarize<S: SymbolicSpace, W: Weight>(space: &S, nu: &AtomicMeasure<S::Point, W>, target: usize) -> Option<Replay> {
    let depth = measure_depth(space, nu)?;
    let achieved_depth = match depth {
        PrefixDepth::Depth(d) => d,
        PrefixDepth::Equal => target,
    };
    let first = nu.support().next()?;
    Some(Replay {
        achieved_depth,
        exact_dirac: depth == PrefixDepth::Equal,
        limit_cylinder: space.cylinder(first, achieved_depth).to_string(),
    })
}

/// Applies `steps` in order to the serialized measure.
pub fn replay<S: SymbolicSpace>(space: &S, measure: &[AtomRecord], steps: &[Word], target: usize) -> Result<Replay> {
    let mut nu: AtomicMeasure<S::Point> = AtomicMeasure::from_records(space, measure)?;
    for g in steps {
        nu = nu.pushforward_group(space, g)?;
    }
    summarize(space, &nu, target).ok_or_else(|| Error::InvalidMeasure("replayed atoms lie over different cosets".into()))
}

/// Searches for steps concentrating `ν` to common prefix depth `target` within
/// `budget` steps.
pub fn contract_measure<S: SymbolicSpace>(
    space: &S,
    nu: &AtomicMeasure<S::Point>,
    strategy: Strategy,
    target: usize,
    budget: usize,
) -> Result<ContractionOutcome> {
    if target == 0 || budget == 0 {
        return Err(Error::InvalidParameter("target depth and step budget must be positive".into()));
    }
    if strategy == Strategy::AxisPower && space.is_induced() {
        return Err(Error::StrategyNotApplicable("axis-power acts on a bare boundary; use paper-sequence".into()));
    }
    let Some(first) = nu.support().next() else {
        return Err(Error::InvalidMeasure("empty measure".into()));
    };
    if measure_depth(space, nu).is_none() {
        return Err(Error::StrategyNotApplicable("atoms lie over different cosets, so no translate is near a point mass".into()));
    }
    let coset = space.coset(first);
    let certify = |steps: Vec<Word>, reached: &AtomicMeasure<S::Point>| {
        let r = summarize(space, reached, target).expect("cosets stay aligned");
        ContractionOutcome::Certified(ContractionCertificate {
            id: String::new(),
            space: String::new(),
            strategy,
            measure: nu.to_records(space),
            steps,
            target_depth: target,
            achieved_depth: r.achieved_depth,
            exact_dirac: r.exact_dirac,
            limit_cylinder: r.limit_cylinder,
        })
    };
    let depth_of = |m: &AtomicMeasure<S::Point>| measure_depth(space, m).expect("cosets stay aligned").capped(target);

    match strategy {
        Strategy::AxisPower | Strategy::PaperSequence => {
            let g = Word::generator(1);
            let repeller = BoundaryPoint::periodic(g.inverse()).expect("nonempty");
            let fibers: Vec<&BoundaryPoint> = nu.support().map(|p| space.fiber_point(p)).collect();
            let mut plan = Vec::new();
            if fibers.contains(&&repeller) {
                let h = space
                    .boundary()
                    .fiber_group()
                    .letters()
                    .find(|&h| fibers.iter().all(|y| y.translate(&Word::letter(h)) != repeller))
                    .expect("some generator moves every atom off the repelling point");
                plan.push(space.steer(coset, coset, &Word::letter(h)));
            }
            let step = space.steer(coset, coset, &g);
            let mut cur = nu.clone();
            let mut steps = Vec::new();
            loop {
                if depth_of(&cur) >= target {
                    return Ok(certify(steps, &cur));
                }
                if steps.len() == budget {
                    return Ok(ContractionOutcome::Exhausted {
                        reason: "step budget exhausted".into(),
                        steps_tried: steps.len(),
                        best_depth: depth_of(&cur),
                    });
                }
                let s = plan.get(steps.len()).cloned().unwrap_or_else(|| step.clone());
                let next = cur.pushforward_group(space, &s)?;
                steps.push(s);
                if next == cur && steps.len() > plan.len() {
                    return Ok(ContractionOutcome::Exhausted {
                        reason: "the axis step fixes the measure".into(),
                        steps_tried: steps.len(),
                        best_depth: depth_of(&cur),
                    });
                }
                cur = next;
            }
        }
        Strategy::GreedyBall { radius } => {
            let fiber = space.boundary().fiber_group();
            let candidates: Vec<Word> = fiber.ball(radius)?.into_iter().skip(1).map(|w| space.steer(coset, coset, &w)).collect();
            let score = |m: &AtomicMeasure<S::Point>| {
                let atoms: Vec<&BoundaryPoint> = m.support().map(|p| space.fiber_point(p)).collect();
                let spread: usize = atoms.iter().map(|y| common_prefix_depth(atoms[0], y).capped(target)).sum();
                (depth_of(m), spread)
            };
            let mut cur = nu.clone();
            let mut cur_score = score(&cur);
            let mut steps = Vec::new();
            loop {
                if cur_score.0 >= target {
                    return Ok(certify(steps, &cur));
                }
                if steps.len() == budget {
                    return Ok(ContractionOutcome::Exhausted {
                        reason: "step budget exhausted".into(),
                        steps_tried: steps.len(),
                        best_depth: cur_score.0,
                    });
                }
                let scored = candidates
                    .par_iter()
                    .map(|g| {
                        let m = cur.pushforward_group(space, g)?;
                        Ok((score(&m), m))
                    })
                    .collect::<Result<Vec<_>>>()?;
                // First maximum in shortlex order of the fiber words.
                let (k, best) = scored
                    .iter()
                    .enumerate()
                    .fold(None::<(usize, (usize, usize))>, |acc, (k, (s, _))| match acc {
                        Some((_, b)) if b >= *s => acc,
                        _ => Some((k, *s)),
                    })
                    .expect("fiber ball has nonidentity elements");
                if best <= cur_score {
                    return Ok(ContractionOutcome::Exhausted {
                        reason: format!("no element of the radius-{radius} ball improves the concentration"),
                        steps_tried: steps.len(),
                        best_depth: cur_score.0,
                    });
                }
                steps.push(candidates[k].clone());
                cur = scored.into_iter().nth(k).expect("index in range").1;
                cur_score = best;
            }
        }
    }
}

/// The letter order used when a word must avoid given letters.
pub(crate) fn first_letter_avoiding(rank: usize, avoid: &[Option<Letter>]) -> Letter {
    (0..2 * rank).map(Letter::from_slot).find(|l| !avoid.contains(&Some(*l))).expect("rank at least 2 leaves a free letter")
}
