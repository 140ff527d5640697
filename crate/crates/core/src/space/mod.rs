//! Γ-spaces. Finite permutation spaces and symbolic free-group boundaries are
//! the building blocks of induced spaces `Γ/Λ × Y`.

use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::word::Word;

mod boundary;
mod extension;
mod finite;
mod induced;

pub use boundary::{common_prefix_depth, BoundaryLift, BoundaryPoint, BoundarySpace, PrefixDepth};
pub use extension::{Extension, FiniteExtension, InducedProjection};
pub use finite::FiniteSpace;
pub use induced::{InducedPoint, InducedSpace};

/// A space with a left action of the words of an ambient group.
pub trait GammaSpace: Send + Sync {
    type Point: Clone + Ord + Hash + fmt::Debug + Send + Sync;

    fn ambient(&self) -> &GroupContext;

    fn act(&self, g: &Word, p: &Self::Point) -> Result<Self::Point>;

    /// The depth-`depth` cylinder containing `p` (finite coordinates are exact).
    fn cylinder(&self, p: &Self::Point, depth: usize) -> Cylinder;

    /// Number of depth-`depth` cylinders, `None` if it overflows.
    fn cylinder_count(&self, depth: usize) -> Option<u128>;

    fn format_point(&self, p: &Self::Point) -> String;

    fn parse_point(&self, s: &str) -> Result<Self::Point>;
}

/// A basic clopen set: a finite point, a prefix cylinder of a boundary, or a
/// fiber coordinate paired with one of those.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Cylinder {
    Point(usize),
    Prefix(Word),
    Fiber(usize, Box<Cylinder>),
}

impl Cylinder {
    pub fn coset(&self) -> Option<usize> {
        match self {
            Cylinder::Fiber(i, _) => Some(*i),
            _ => None,
        }
    }

    pub fn prefix(&self) -> Option<&Word> {
        match self {
            Cylinder::Prefix(w) => Some(w),
            Cylinder::Fiber(_, inner) => inner.prefix(),
            Cylinder::Point(_) => None,
        }
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cylinder::Point(x) => write!(f, "{x}"),
            Cylinder::Prefix(w) => write!(f, "{w}"),
            Cylinder::Fiber(i, inner) => write!(f, "({i}, {inner})"),
        }
    }
}

/// Splits `"(i, rest)"` into `(i, "rest")`.
pub(crate) fn split_pair(s: &str) -> Result<(usize, &str)> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::BadPoint(format!("expected \"(i, y)\", got {s:?}")))?;
    let (i, rest) = inner.split_once(',').ok_or_else(|| Error::BadPoint(format!("missing comma in {s:?}")))?;
    let i = i.trim().parse::<usize>().map_err(|_| Error::BadPoint(format!("bad coset index in {s:?}")))?;
    Ok((i, rest.trim()))
}
