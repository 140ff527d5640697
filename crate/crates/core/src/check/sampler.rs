//! Seeded random measures. Every sample draws from its own stream
//! `ChaCha8(seed ^ index)`, so samples are independent of scheduling.

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::check::SymbolicSpace;
use crate::measure::AtomicMeasure;
use crate::space::{BoundaryPoint, FiniteExtension};
use crate::word::{Letter, Word};

const MAX_WALK: usize = 8;
const MAX_NUMERATOR: i64 = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SamplerParams {
    /// Upper bound on the number of atoms.
    pub atoms: usize,
    pub samples: usize,
    pub seed: u64,
}

pub fn sample_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

pub(crate) fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sample_seed(seed, index))
}

/// Random reduced word of length `len` in the free group of rank `rank`.
pub(crate) fn random_reduced_word(rng: &mut impl Rng, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_slot(rng.gen_range(0..2 * rank));
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word::reduce(letters)
}

/// `w·x^∞` for a random letter `x` and a random walk `w` of length ≤ 8.
pub(crate) fn random_boundary_point(rng: &mut impl Rng, rank: usize) -> BoundaryPoint {
    let x = Letter::from_slot(rng.gen_range(0..2 * rank));
    let len = rng.gen_range(0..=MAX_WALK);
    let walk = random_reduced_word(rng, rank, len);
    BoundaryPoint::new(walk, Word::letter(x)).expect("nonempty period")
}

/// `k` positive rationals with numerators in `1..=64`, normalized to sum 1.
pub(crate) fn random_weights(rng: &mut impl Rng, k: usize) -> Vec<Rational64> {
    let nums: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=MAX_NUMERATOR)).collect();
    let total: i64 = nums.iter().sum();
    nums.into_iter().map(|n| Rational64::new(n, total)).collect()
}

fn atom_count(rng: &mut impl Rng, max: usize) -> usize {
    rng.gen_range(1..=max.max(1))
}

/// A measure supported in a single fiber (a random coset for induced spaces).
pub fn sample_fiber_measure<S: SymbolicSpace>(space: &S, params: &SamplerParams, index: usize) -> AtomicMeasure<S::Point> {
    let mut rng = sample_rng(params.seed, index);
    let cosets = space.cosets();
    let coset = cosets[rng.gen_range(0..cosets.len())];
    let rank = space.boundary().rank();
    let k = atom_count(&mut rng, params.atoms);
    let points: Vec<S::Point> = (0..k).map(|_| space.make_point(coset, random_boundary_point(&mut rng, rank))).collect();
    let weights = random_weights(&mut rng, k);
    AtomicMeasure::new(points.into_iter().zip(weights)).expect("positive weights summing to 1")
}

/// Half the time a fiber-supported measure, otherwise atoms over random cosets.
pub fn sample_induced_measure<S: SymbolicSpace>(space: &S, params: &SamplerParams, index: usize) -> AtomicMeasure<S::Point> {
    let mut rng = sample_rng(params.seed, index);
    if rng.gen_bool(0.5) {
        return sample_fiber_measure(space, &SamplerParams { seed: rng.gen(), ..*params }, index);
    }
    let cosets = space.cosets();
    let rank = space.boundary().rank();
    let k = atom_count(&mut rng, params.atoms);
    let points: Vec<S::Point> = (0..k)
        .map(|_| {
            let c = cosets[rng.gen_range(0..cosets.len())];
            space.make_point(c, random_boundary_point(&mut rng, rank))
        })
        .collect();
    let weights = random_weights(&mut rng, k);
    AtomicMeasure::new(points.into_iter().zip(weights)).expect("positive weights summing to 1")
}

/// Random points of a symbolic space, one stream per point.
pub fn sample_points<S: SymbolicSpace>(space: &S, count: usize, seed: u64) -> Vec<S::Point> {
    let cosets = space.cosets();
    let rank = space.boundary().rank();
    (0..count)
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let c = cosets[rng.gen_range(0..cosets.len())];
            space.make_point(c, random_boundary_point(&mut rng, rank))
        })
        .collect()
}

/// A measure on a random nonempty subset of one fiber of a finite extension.
pub fn sample_finite_fiber_measure(ext: &FiniteExtension, params: &SamplerParams, index: usize) -> AtomicMeasure<usize> {
    use crate::space::Extension;
    let mut rng = sample_rng(params.seed, index);
    let x = rng.gen_range(1..=ext.base().size());
    let mut fiber = ext.fiber(x);
    fiber.shuffle(&mut rng);
    fiber.truncate(atom_count(&mut rng, params.atoms.min(fiber.len())));
    let weights = random_weights(&mut rng, fiber.len());
    AtomicMeasure::new(fiber.into_iter().zip(weights)).expect("positive weights summing to 1")
}

/// A measure on random points of a finite space.
pub fn sample_finite_measure(size: usize, params: &SamplerParams, index: usize) -> AtomicMeasure<usize> {
    let mut rng = sample_rng(params.seed, index);
    let k = atom_count(&mut rng, params.atoms);
    let points: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=size)).collect();
    let weights = random_weights(&mut rng, k);
    AtomicMeasure::new(points.into_iter().zip(weights)).expect("positive weights summing to 1")
}
