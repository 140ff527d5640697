//! Finitely supported probability measures on Γ-spaces.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Extension, GammaSpace};
use crate::word::Word;

const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

/// A probability weight: exact rationals or doubles.
pub trait Weight: Clone + PartialOrd + Zero + One + Add<Output = Self> + fmt::Debug + Send + Sync + 'static {
    /// Whether a total mass counts as 1 (exactly for rationals, within 1e-12 for doubles).
    fn is_unit_mass(&self) -> bool;

    fn to_f64(&self) -> f64;

    fn format(&self) -> String;

    fn parse(s: &str) -> Result<Self>;
}

impl Weight for Rational64 {
    fn is_unit_mass(&self) -> bool {
        self.is_one()
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn format(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMeasure(format!("weight {s:?} is not a rational p/q"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
            None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
        };
        if q == 0 {
            return Err(bad());
        }
        Ok(Rational64::new(p, q))
    }
}

impl Weight for f64 {
    fn is_unit_mass(&self) -> bool {
        (self - 1.0).abs() <= FLOAT_MASS_TOLERANCE
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn format(&self) -> String {
        format!("{self}")
    }

    fn parse(s: &str) -> Result<Self> {
        s.trim().parse().map_err(|_| Error::InvalidMeasure(format!("weight {s:?} is not a number")))
    }
}

/// One atom in serialized form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AtomRecord {
    pub point: String,
    pub weight: String,
}

/// A probability measure with finitely many atoms, keyed by point.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AtomicMeasure<P, W = Rational64> {
    atoms: BTreeMap<P, W>,
}

impl<P: Ord + Clone + fmt::Debug, W: Weight> AtomicMeasure<P, W> {
    /// Coincident points are merged; weights must be positive with total mass 1.
    pub fn new(atoms: impl IntoIterator<Item = (P, W)>) -> Result<Self> {
        let mut merged: BTreeMap<P, W> = BTreeMap::new();
        for (p, w) in atoms {
            // Rejects NaN as well as nonpositive weights.
            if w.partial_cmp(&W::zero()) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::InvalidMeasure(format!("nonpositive weight {w:?} at {p:?}")));
            }
            let slot = merged.entry(p).or_insert_with(W::zero);
            *slot = slot.clone() + w;
        }
        let m = AtomicMeasure { atoms: merged };
        if !m.mass().is_unit_mass() {
            return Err(Error::InvalidMeasure(format!("total mass {:?} is not 1", m.mass())));
        }
        Ok(m)
    }

    pub fn dirac(p: P) -> Self {
        AtomicMeasure { atoms: BTreeMap::from([(p, W::one())]) }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&P, &W)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.atoms.keys()
    }

    pub fn weight_of(&self, p: &P) -> W {
        self.atoms.get(p).cloned().unwrap_or_else(W::zero)
    }

    pub fn mass(&self) -> W {
        self.atoms.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    /// The point if this is a point mass.
    pub fn as_dirac(&self) -> Option<&P> {
        match self.atoms.len() {
            1 => self.atoms.keys().next(),
            _ => None,
        }
    }

    /// Weights in increasing order; invariant under any bijective push-forward.
    pub fn weight_multiset(&self) -> Vec<W> {
        let mut ws: Vec<W> = self.atoms.values().cloned().collect();
        ws.sort_by(|a, b| a.partial_cmp(b).expect("weights are comparable"));
        ws
    }

    /// Image under a point map, merging atoms that collide.
    pub fn map_points<Q: Ord + Clone + fmt::Debug>(&self, mut f: impl FnMut(&P) -> Result<Q>) -> Result<AtomicMeasure<Q, W>> {
        let mut out: BTreeMap<Q, W> = BTreeMap::new();
        for (p, w) in &self.atoms {
            let slot = out.entry(f(p)?).or_insert_with(W::zero);
            *slot = slot.clone() + w.clone();
        }
        Ok(AtomicMeasure { atoms: out })
    }

    /// `γ_*ν`.
    pub fn pushforward_group<S: GammaSpace<Point = P>>(&self, space: &S, g: &Word) -> Result<Self> {
        self.map_points(|p| space.act(g, p))
    }

    /// `φ_*ν` on the base.
    pub fn pushforward_map<E: Extension>(&self, phi: &E) -> AtomicMeasure<usize, W>
    where
        E::Source: GammaSpace<Point = P>,
    {
        self.map_points(|p| Ok(phi.apply(p))).expect("extension maps are total")
    }

    /// The base point `x` with `supp(ν) ⊆ φ⁻¹(x)`, if any.
    pub fn is_fiber_supported<E: Extension>(&self, phi: &E) -> Option<usize>
    where
        E::Source: GammaSpace<Point = P>,
    {
        let mut images = self.atoms.keys().map(|p| phi.apply(p));
        let x = images.next()?;
        images.all(|y| y == x).then_some(x)
    }

    pub fn to_records<S: GammaSpace<Point = P>>(&self, space: &S) -> Vec<AtomRecord> {
        self.atoms.iter().map(|(p, w)| AtomRecord { point: space.format_point(p), weight: w.format() }).collect()
    }

    pub fn from_records<S: GammaSpace<Point = P>>(space: &S, records: &[AtomRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidMeasure("a measure needs at least one atom".into()));
        }
        let atoms = records.iter().map(|r| Ok((space.parse_point(&r.point)?, W::parse(&r.weight)?))).collect::<Result<Vec<_>>>()?;
        AtomicMeasure::new(atoms)
    }
}
