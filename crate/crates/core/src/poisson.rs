//! The Poisson transform `P_ν(f)(s) = Σ w·f(s·p)` of cylinder functions,
//! truncated to a ball, and its isometry defect.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, Weight};
use crate::space::{Cylinder, GammaSpace};
use crate::word::Word;

/// A locally constant function: explicit values on some depth-`d` cylinders,
/// `default` on the rest.
#[derive(Clone, PartialEq, Debug)]
pub struct CylinderFunction {
    depth: usize,
    values: BTreeMap<Cylinder, f64>,
    default: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CylinderEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cylinder: Option<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coset: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
    pub value: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CylinderFunctionRecord {
    pub depth: usize,
    #[serde(default)]
    pub default: f64,
    pub entries: Vec<CylinderEntry>,
}

impl CylinderFunction {
    pub fn constant(c: f64) -> Self {
        CylinderFunction { depth: 0, values: BTreeMap::new(), default: c }
    }

    /// `values` must all be depth-`depth` cylinders of the space.
    pub fn new<S: GammaSpace>(space: &S, depth: usize, values: BTreeMap<Cylinder, f64>, default: f64) -> Result<Self> {
        let f = CylinderFunction { depth, values, default };
        f.check_cylinders(space)?;
        Ok(f)
    }

    /// Indicator of the cylinder of depth `depth` around `p`.
    pub fn indicator<S: GammaSpace>(space: &S, p: &S::Point, depth: usize) -> Self {
        CylinderFunction { depth, values: BTreeMap::from([(space.cylinder(p, depth), 1.0)]), default: 0.0 }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &BTreeMap<Cylinder, f64> {
        &self.values
    }

    pub fn default_value(&self) -> f64 {
        self.default
    }

    pub fn evaluate<S: GammaSpace>(&self, space: &S, p: &S::Point) -> f64 {
        if self.values.is_empty() {
            return self.default;
        }
        self.values.get(&space.cylinder(p, self.depth)).copied().unwrap_or(self.default)
    }

    /// `‖f‖∞`; the default counts only if some cylinder is left to take it.
    pub fn norm<S: GammaSpace>(&self, space: &S) -> f64 {
        let listed = self.values.values().fold(0.0f64, |m, v| m.max(v.abs()));
        let covered = space.cylinder_count(self.depth).is_some_and(|c| c <= self.values.len() as u128);
        if covered {
            listed
        } else {
            listed.max(self.default.abs())
        }
    }

    /// An explicitly listed cylinder attaining the norm, if any.
    pub fn maximizing_cylinder<S: GammaSpace>(&self, space: &S) -> Option<&Cylinder> {
        let norm = self.norm(space);
        self.values.iter().find(|(_, v)| v.abs() == norm).map(|(c, _)| c)
    }

    fn check_cylinders<S: GammaSpace>(&self, space: &S) -> Result<()> {
        for (c, v) in &self.values {
            if !v.is_finite() {
                return Err(Error::InvalidFunction(format!("value {v} on {c} is not finite")));
            }
            if !cylinder_fits(c, self.depth) {
                return Err(Error::InvalidFunction(format!("cylinder {c} does not have depth {}", self.depth)));
            }
        }
        if space.cylinder_count(self.depth).is_some_and(|count| count < self.values.len() as u128) {
            return Err(Error::InvalidFunction("more entries than cylinders".into()));
        }
        if !self.default.is_finite() {
            return Err(Error::InvalidFunction("default value is not finite".into()));
        }
        Ok(())
    }

    pub fn to_record(&self) -> CylinderFunctionRecord {
        let entries = self
            .values
            .iter()
            .map(|(c, &value)| {
                let mut e = CylinderEntry { cylinder: None, coset: c.coset(), point: None, value };
                match c {
                    Cylinder::Fiber(_, inner) => fill_entry(&mut e, inner),
                    other => fill_entry(&mut e, other),
                }
                e
            })
            .collect();
        CylinderFunctionRecord { depth: self.depth, default: self.default, entries }
    }

    pub fn from_record<S: GammaSpace>(space: &S, record: &CylinderFunctionRecord) -> Result<Self> {
        let mut values = BTreeMap::new();
        for e in &record.entries {
            let inner = match (&e.cylinder, e.point) {
                (Some(w), None) => Cylinder::Prefix(w.clone()),
                (None, Some(x)) => Cylinder::Point(x),
                (None, None) if record.depth == 0 => Cylinder::Prefix(Word::identity()),
                _ => return Err(Error::InvalidFunction("each entry needs exactly one of cylinder or point".into())),
            };
            let c = match e.coset {
                Some(i) => Cylinder::Fiber(i, Box::new(inner)),
                None => inner,
            };
            if values.insert(c.clone(), e.value).is_some() {
                return Err(Error::InvalidFunction(format!("cylinder {c} listed twice")));
            }
        }
        CylinderFunction::new(space, record.depth, values, record.default)
    }
}

fn fill_entry(e: &mut CylinderEntry, c: &Cylinder) {
    match c {
        Cylinder::Prefix(w) => e.cylinder = Some(w.clone()),
        Cylinder::Point(x) => e.point = Some(*x),
        Cylinder::Fiber(..) => {}
    }
}

fn cylinder_fits(c: &Cylinder, depth: usize) -> bool {
    match c {
        Cylinder::Point(_) => true,
        Cylinder::Prefix(w) => w.len() == depth,
        Cylinder::Fiber(_, inner) => cylinder_fits(inner, depth),
    }
}

/// Values of a function on `ball(R)`, listed in shortlex order.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct BallFunction {
    pub radius: usize,
    pub entries: Vec<BallEntry>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct BallEntry {
    pub word: Word,
    pub value: f64,
}

impl BallFunction {
    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.value.abs()))
    }

    pub fn get(&self, w: &Word) -> Option<f64> {
        self.entries.binary_search_by(|e| e.word.cmp(w)).ok().map(|i| self.entries[i].value)
    }
}

/// `∫ f dν`.
///
/// Weights are summed exactly per cylinder before conversion, so a measure
/// concentrated in one cylinder integrates to exactly that cylinder's value.
pub fn integrate<S: GammaSpace, W: Weight>(space: &S, nu: &AtomicMeasure<S::Point, W>, f: &CylinderFunction) -> f64 {
    let mut mass: BTreeMap<Cylinder, W> = BTreeMap::new();
    for (p, w) in nu.atoms() {
        let slot = mass.entry(space.cylinder(p, f.depth)).or_insert_with(W::zero);
        *slot = slot.clone() + w.clone();
    }
    mass.iter().map(|(c, w)| w.to_f64() * f.values.get(c).copied().unwrap_or(f.default)).sum()
}

/// `P_ν(f)(s) = ∫ f(s·x) dν(x)`.
pub fn poisson_value<S: GammaSpace, W: Weight>(space: &S, nu: &AtomicMeasure<S::Point, W>, f: &CylinderFunction, s: &Word) -> Result<f64> {
    Ok(integrate(space, &nu.pushforward_group(space, s)?, f))
}

/// `P_ν(f)` on `ball(R)`.
pub fn poisson_transform<S: GammaSpace, W: Weight>(
    space: &S,
    nu: &AtomicMeasure<S::Point, W>,
    f: &CylinderFunction,
    radius: usize,
) -> Result<BallFunction> {
    let ball = space.ambient().ball(radius)?;
    let values = ball.par_iter().map(|s| poisson_value(space, nu, f, s)).collect::<Result<Vec<_>>>()?;
    let entries = ball.into_iter().zip(values).map(|(word, value)| BallEntry { word, value }).collect();
    Ok(BallFunction { radius, entries })
}

/// `max(0, ‖f‖ − max_{s ∈ ball(R)} |P_ν(f)(s)|)`.
pub fn isometry_defect<S: GammaSpace, W: Weight>(
    space: &S,
    nu: &AtomicMeasure<S::Point, W>,
    f: &CylinderFunction,
    radius: usize,
) -> Result<f64> {
    let norm = nonzero_norm(space, f)?;
    Ok((norm - poisson_transform(space, nu, f, radius)?.sup_norm()).max(0.0))
}

/// Defects for several functions along a ladder of radii, pushing `ν` once per
/// ball element. `out[k][r]` is the defect of `fs[k]` at `radii[r]`.
pub fn isometry_defect_ladder<S: GammaSpace, W: Weight>(
    space: &S,
    nu: &AtomicMeasure<S::Point, W>,
    fs: &[CylinderFunction],
    radii: &[usize],
) -> Result<Vec<Vec<f64>>> {
    let norms = fs.iter().map(|f| nonzero_norm(space, f)).collect::<Result<Vec<_>>>()?;
    let max_r = radii.iter().copied().max().unwrap_or(0);
    let ball = space.ambient().ball(max_r)?;
    // Per element: its length and |P_ν(f)| for every f.
    let rows = ball
        .par_iter()
        .map(|s| {
            let pushed = nu.pushforward_group(space, s)?;
            Ok((s.len(), fs.iter().map(|f| integrate(space, &pushed, f).abs()).collect::<Vec<_>>()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fs
        .iter()
        .enumerate()
        .map(|(k, _)| {
            radii
                .iter()
                .map(|&r| {
                    let best = rows.iter().filter(|(len, _)| *len <= r).fold(0.0f64, |m, (_, vals)| m.max(vals[k]));
                    (norms[k] - best).max(0.0)
                })
                .collect()
        })
        .collect())
}

fn nonzero_norm<S: GammaSpace>(space: &S, f: &CylinderFunction) -> Result<f64> {
    let norm = f.norm(space);
    if norm <= 0.0 {
        return Err(Error::InvalidFunction("isometry defect needs a function with positive norm".into()));
    }
    Ok(norm)
}
