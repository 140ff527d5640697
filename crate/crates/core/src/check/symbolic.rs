use std::collections::{BTreeMap, HashSet};

use num_rational::Rational64;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::check::contraction::first_letter_avoiding;
use crate::check::finite::{check_minimal_finite, finite_contractible, format_finite_measure, stabilizer_subgroup};
use crate::check::sampler::{random_reduced_word, sample_points, sample_rng};
use crate::check::{
    contract_measure, sample_fiber_measure, sample_induced_measure, CheckReport, ContractionCertificate, ContractionOutcome, Evidence,
    SamplerParams, Strategy, SymbolicSpace, Verdict,
};
use crate::coset::{conjugate_subgroup, enumerate_cosets};
use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, Weight};
use crate::poisson::{isometry_defect_ladder, poisson_value, CylinderFunction};
use crate::space::{BoundaryPoint, BoundarySpace, Cylinder, Extension, GammaSpace, InducedProjection};
use crate::word::Word;

/// Listing missing cylinders is skipped above this many cylinders.
const LISTABLE_CYLINDERS: u128 = 100_000;
const LISTED_MISSING: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ContractionParams {
    pub strategy: Strategy,
    /// Target common-prefix depth `m`.
    pub target: usize,
    /// Step budget `L`.
    pub steps: usize,
}

fn all_cylinders<S: SymbolicSpace>(space: &S, depth: usize) -> Result<Vec<Cylinder>> {
    let words: Vec<Word> = space.boundary().fiber_group().ball(depth)?.into_iter().filter(|w| w.len() == depth).collect();
    Ok(space
        .cosets()
        .into_iter()
        .flat_map(|c| {
            words.iter().map(move |w| match c {
                Some(i) => Cylinder::Fiber(i, Box::new(Cylinder::Prefix(w.clone()))),
                None => Cylinder::Prefix(w.clone()),
            })
        })
        .collect())
}

/// Cylinders visited by `g·p` for the given acting words; words outside the
/// acting subgroup are skipped.
fn visited<S: SymbolicSpace>(space: &S, start: &S::Point, words: &[Word], depth: usize) -> Result<HashSet<Cylinder>> {
    let mut seen = HashSet::new();
    for g in words {
        match space.act(g, start) {
            Ok(q) => {
                seen.insert(space.cylinder(&q, depth));
            }
            Err(Error::NotInSubgroup(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(seen)
}

fn coverage_evidence<S: SymbolicSpace>(
    space: &S,
    start: &S::Point,
    seen: &HashSet<Cylinder>,
    universe: Option<&[Cylinder]>,
    total: u128,
) -> Evidence {
    let missing = universe
        .map(|all| all.iter().filter(|c| !seen.contains(c)).take(LISTED_MISSING).map(Cylinder::to_string).collect())
        .unwrap_or_default();
    Evidence::Coverage { start: space.format_point(start), covered: seen.len() as u128, total, missing }
}

/// Orbit density checked as coverage: from every start, `ball(R)·p` must meet
/// every depth-`d` cylinder.
pub fn check_minimal_symbolic<S: SymbolicSpace>(space: &S, starts: &[S::Point], depth: usize, radius: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("minimal_symbolic").param("starts", starts.len()).depth("cylinder", depth).radius("ball", radius);
    let total = space.cylinder_count(depth).ok_or_else(|| Error::InvalidParameter(format!("too many cylinders at depth {depth}")))?;
    if radius == 0 {
        report.verdict = Verdict::Inconclusive;
        report.evidence.push(Evidence::Exhausted { reason: "radius 0 gives no motion".into(), budget: 0, data: json!(null) });
        return Ok(report);
    }
    let words = space.ambient().ball(radius)?;
    let universe = if total <= LISTABLE_CYLINDERS { Some(all_cylinders(space, depth)?) } else { None };
    let covers = starts.par_iter().map(|p| visited(space, p, &words, depth)).collect::<Result<Vec<_>>>()?;
    for (p, seen) in starts.iter().zip(&covers) {
        if (seen.len() as u128) < total {
            report.verdict = Verdict::Inconclusive;
        }
        report.evidence.push(coverage_evidence(space, p, seen, universe.as_deref(), total));
    }
    Ok(report.param("cylinders", total.to_string()))
}

/// Strong proximality of the induced extension, tested on sampled
/// fiber-supported measures of the induced space.
pub fn check_sp_extension_induced(
    phi: &InducedProjection<BoundarySpace>,
    sampler: &SamplerParams,
    params: &ContractionParams,
) -> Result<CheckReport> {
    let space = phi.source();
    let mut report = CheckReport::new("sp_extension")
        .param("strategy", params.strategy.to_string())
        .seed(sampler.seed)
        .depth("target", params.target)
        .budget("steps", params.steps)
        .budget("samples", sampler.samples)
        .budget("atoms", sampler.atoms);
    let runs = (0..sampler.samples)
        .into_par_iter()
        .map(|i| {
            let nu = sample_fiber_measure(space, sampler, i);
            let out = contract_measure(space, &nu, params.strategy, params.target, params.steps)?;
            Ok((i, nu, out))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut certified = 0usize;
    let mut longest = 0usize;
    for (i, nu, out) in runs {
        if nu.is_fiber_supported(phi).is_none() {
            report.verdict = Verdict::Fail;
            report.note(format!("sample {i} is not fiber-supported"));
        }
        match out {
            ContractionOutcome::Certified(mut cert) => {
                cert.id = format!("s{i}");
                if !cert.verify(space)? {
                    report.verdict = Verdict::Fail;
                    report.note(format!("certificate {} does not replay", cert.id));
                }
                certified += 1;
                longest = longest.max(cert.steps.len());
                report.evidence.push(Evidence::Certificate(cert));
            }
            ContractionOutcome::Exhausted { reason, steps_tried, best_depth } => {
                report.downgrade(Verdict::Inconclusive);
                report.evidence.push(Evidence::Exhausted {
                    reason,
                    budget: params.steps,
                    data: json!({ "sample": i, "measure": nu.to_records(space), "steps_tried": steps_tried, "best_depth": best_depth }),
                });
            }
        }
    }
    Ok(report.param("certified", certified).param("longest_certificate", longest))
}

/// Equivalence of contractibility and point-mass push-forward at desk scale: sampled measures whose push-forward is a
/// point mass must contract, the others carry no obligation; the base and the
/// induced space must pass their minimality checks.
pub fn check_theorem_a_34(
    phi: &InducedProjection<BoundarySpace>,
    sampler: &SamplerParams,
    params: &ContractionParams,
    min_depth: usize,
    min_radius: usize,
) -> Result<CheckReport> {
    let space = phi.source();
    let mut report = CheckReport::new("theorem_a_34")
        .param("strategy", params.strategy.to_string())
        .seed(sampler.seed)
        .depth("target", params.target)
        .budget("steps", params.steps)
        .budget("samples", sampler.samples);
    report.nest(check_minimal_finite(phi.base()));
    let starts = sample_points(space, sampler.samples.clamp(1, 10), sampler.seed);
    report.nest(check_minimal_symbolic(space, &starts, min_depth, min_radius)?);

    let runs = (0..sampler.samples)
        .into_par_iter()
        .map(|i| {
            let nu = sample_induced_measure(space, sampler, i);
            let out = match nu.is_fiber_supported(phi) {
                Some(_) => Some(contract_measure(space, &nu, params.strategy, params.target, params.steps)?),
                None => None,
            };
            Ok((i, nu, out))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut discharged, mut exempt) = (0usize, 0usize);
    for (i, nu, out) in runs {
        let pushed = nu.pushforward_map(phi);
        let base_verdict = finite_contractible(phi.base(), &pushed).verdict;
        let fiber = nu.is_fiber_supported(phi);
        if fiber.is_some() != (pushed.as_dirac().is_some()) || fiber.is_some() != (base_verdict == Verdict::Pass) {
            report.verdict = Verdict::Fail;
            report.note(format!("sample {i}: support, push-forward and base contractibility disagree"));
        }
        match out {
            None => exempt += 1,
            Some(ContractionOutcome::Certified(mut cert)) => {
                cert.id = format!("s{i}");
                if !cert.verify(space)? {
                    report.verdict = Verdict::Fail;
                    report.note(format!("certificate {} does not replay", cert.id));
                }
                discharged += 1;
                report.evidence.push(Evidence::Certificate(cert));
            }
            Some(ContractionOutcome::Exhausted { reason, steps_tried, best_depth }) => {
                report.downgrade(Verdict::Inconclusive);
                report.evidence.push(Evidence::Exhausted {
                    reason,
                    budget: params.steps,
                    data: json!({
                        "sample": i,
                        "measure": nu.to_records(space),
                        "base_measure": format_finite_measure(&pushed),
                        "steps_tried": steps_tried,
                        "best_depth": best_depth,
                    }),
                });
            }
        }
    }
    Ok(report.param("obligations_discharged", discharged).param("no_obligation", exempt))
}

/// One fiber `Y_i = φ⁻¹(x_i)` with its stabilizer.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FiberDescription {
    pub base_point: usize,
    pub representative: Word,
    pub fiber: String,
    /// Generators of `Λ_i = t_iΛt_i⁻¹`.
    pub stabilizer: Vec<Word>,
}

/// Fiber partition of the induced extension with the bookkeeping of the
/// converse direction: transport between fibers, `Λ_i`-invariance, agreement
/// of `Λ_i` with the base stabilizer, and sampled `Λ_i`-minimality of `Y_i`.
pub fn decompose_fibers(
    phi: &InducedProjection<BoundarySpace>,
    depth: usize,
    radius: usize,
    samples: usize,
    seed: u64,
) -> Result<(CheckReport, Vec<FiberDescription>)> {
    let space = phi.source();
    let table = space.table();
    let base = phi.base();
    let mut report =
        CheckReport::new("decompose_fibers").seed(seed).depth("cylinder", depth).radius("ball", radius).budget("samples", samples);
    let minimal = check_minimal_finite(base);
    if minimal.verdict != Verdict::Pass {
        return Err(Error::NotTransitive { start: 1, orbit: 0, size: base.size() });
    }
    let n = table.index();
    let ball = space.ambient().ball(radius)?;
    let fiber_total = space.fiber().cylinder_count(depth).ok_or_else(|| Error::InvalidParameter("depth too large".into()))?;
    let fiber_points: Vec<BoundaryPoint> = sample_points(space.fiber(), samples.max(1), seed);
    let mut fibers = Vec::new();
    for i in 1..=n {
        let ti = table.representative(i).clone();
        let lambda_i = conjugate_subgroup(table.subgroup(), &ti);
        let stab = stabilizer_subgroup(base, i)?;
        let stab_table = enumerate_cosets(&stab, n.max(1))?;
        let conj_table = enumerate_cosets(&lambda_i, n.max(1))?;
        let agree = stab_table.index() == n
            && lambda_i.generators().iter().all(|h| stab_table.contains(h))
            && stab.generators().iter().all(|h| conj_table.contains(h));
        if !agree {
            report.verdict = Verdict::Fail;
            report.note(format!("Λ_{i} = t_iΛt_i⁻¹ differs from the stabilizer of coset {i}"));
        }
        for y in &fiber_points {
            for j in 1..=n {
                let g = table.representative(j).multiply(&ti.inverse());
                if space.act(&g, &(i, y.clone()))?.0 != j {
                    report.verdict = Verdict::Fail;
                    report.note(format!("t_{j}t_{i}⁻¹ does not carry fiber {i} to fiber {j}"));
                }
            }
            for h in lambda_i.generators() {
                if space.act(h, &(i, y.clone()))?.0 != i {
                    report.verdict = Verdict::Fail;
                    report.note(format!("generator {h} of Λ_{i} moves fiber {i}"));
                }
            }
        }
        let words: Vec<Word> = ball.iter().filter(|g| table.act(g, i) == i).cloned().collect();
        for y in fiber_points.iter().take(samples.max(1)) {
            let start = (i, y.clone());
            let seen = visited(space, &start, &words, depth)?;
            if (seen.len() as u128) < fiber_total {
                report.downgrade(Verdict::Inconclusive);
            }
            report.evidence.push(coverage_evidence(space, &start, &seen, None, fiber_total));
        }
        fibers.push(FiberDescription {
            base_point: i,
            representative: ti,
            fiber: format!("{{{i}}} × ∂F_{}", space.fiber().rank()),
            stabilizer: lambda_i.generators().to_vec(),
        });
    }
    let report = report.param("fibers", serde_json::to_value(&fibers).expect("fibers serialize"));
    Ok((report, fibers))
}

/// The steering word, witness element and defect bound for one certificate
/// and one cylinder function.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct WitnessDefect {
    pub steering: Word,
    pub witness: Word,
    /// Total word length of the certificate plus the steering word.
    pub r_cert: usize,
    pub norm: f64,
    pub value: f64,
    /// `‖f‖ − |P_ν(f)(witness)|`, an upper bound for the defect on `ball(r_cert)`.
    pub defect: f64,
    /// Mass of the replayed measure inside the limit cylinder.
    pub concentrated_mass: f64,
}

/// Fiber word `u = c·x·z₀⁻¹` steering the limit cylinder `z₀ℓ` into the
/// cylinder `c`: `u·z₀ℓζ = c·x·ℓζ` is reduced whenever `x ∉ {last(c)⁻¹, ℓ⁻¹}`.
pub fn steering_word<S: SymbolicSpace>(space: &S, from: Option<usize>, limit: &Word, target: &Cylinder) -> Result<Word> {
    let (to, c) = match target {
        Cylinder::Fiber(i, inner) => (Some(*i), inner.prefix().cloned()),
        Cylinder::Prefix(w) => (None, Some(w.clone())),
        Cylinder::Point(_) => (None, None),
    };
    let c = c.ok_or_else(|| Error::InvalidFunction(format!("cylinder {target} has no boundary prefix")))?;
    let ell = limit.last().ok_or_else(|| Error::InvalidParameter("limit cylinder must have positive depth".into()))?;
    let z0 = limit.prefix(limit.len() - 1);
    let x = first_letter_avoiding(space.boundary().rank(), &[c.last().map(|l| l.inverse()), Some(ell.inverse())]);
    let u = c.multiply(&Word::letter(x)).multiply(&z0.inverse());
    Ok(space.steer(from, to, &u))
}

/// Defect of `f` at the single element `steering · γ_L⋯γ_1`.
pub fn witness_defect<S: SymbolicSpace>(space: &S, cert: &ContractionCertificate, f: &CylinderFunction) -> Result<WitnessDefect> {
    let nu: AtomicMeasure<S::Point> = AtomicMeasure::from_records(space, &cert.measure)?;
    let product = cert.product();
    let reached = nu.pushforward_group(space, &product)?;
    let first = reached.support().next().expect("nonempty").clone();
    let limit = space.fiber_point(&first).expansion(cert.achieved_depth.max(1));
    let limit_cyl = space.cylinder(&first, limit.len());
    let concentrated =
        reached.atoms().filter(|(p, _)| space.cylinder(p, limit.len()) == limit_cyl).fold(Rational64::zero(), |a, (_, w)| a + w).to_f64();
    let norm = f.norm(space);
    let target =
        f.maximizing_cylinder(space).ok_or_else(|| Error::InvalidFunction("the norm is not attained on a listed cylinder".into()))?;
    let steering = steering_word(space, space.coset(&first), &limit, target)?;
    let witness = steering.multiply(&product);
    let value = poisson_value(space, &nu, f, &witness)?;
    Ok(WitnessDefect {
        r_cert: cert.word_length() + steering.len(),
        steering,
        witness,
        norm,
        value,
        defect: (norm - value.abs()).max(0.0),
        concentrated_mass: concentrated,
    })
}

/// A function of depth `depth` with a few random values in `[-1, 1]` and 0 elsewhere.
pub(crate) fn random_cylinder_function<S: SymbolicSpace>(space: &S, rng: &mut impl Rng, depth: usize) -> Result<CylinderFunction> {
    let cosets = space.cosets();
    let rank = space.boundary().rank();
    let mut values = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=4) {
        let w = random_reduced_word(rng, rank, depth);
        let cyl = match cosets[rng.gen_range(0..cosets.len())] {
            Some(i) => Cylinder::Fiber(i, Box::new(Cylinder::Prefix(w))),
            None => Cylinder::Prefix(w),
        };
        let v: f64 = rng.gen_range(-1.0..=1.0);
        values.insert(cyl, if v == 0.0 { 1.0 } else { v });
    }
    CylinderFunction::new(space, depth, values, 0.0)
}

/// The bridge between contraction and the Poisson isometry criterion: for
/// certified measures the defect at the witness element is at most
/// `2·(1 − concentrated mass)`, and ball defects shrink along `radii`.
pub fn check_isometry_bridge<S: SymbolicSpace>(
    space: &S,
    sampler: &SamplerParams,
    params: &ContractionParams,
    functions: usize,
    max_depth: usize,
    radii: &[usize],
) -> Result<CheckReport> {
    let mut report = CheckReport::new("isometry_bridge")
        .param("functions", functions)
        .param("radii", json!(radii))
        .seed(sampler.seed)
        .depth("function", max_depth)
        .depth("target", params.target)
        .budget("steps", params.steps)
        .budget("samples", sampler.samples);
    let rows = (0..sampler.samples)
        .into_par_iter()
        .map(|i| {
            let nu = sample_fiber_measure(space, sampler, i);
            let Some(cert) = contract_measure(space, &nu, params.strategy, params.target, params.steps)?.certificate().cloned() else {
                return Ok((i, None, Vec::new(), Vec::new()));
            };
            let mut rng = sample_rng(sampler.seed.rotate_left(17), i);
            let d_max = max_depth.min(cert.achieved_depth).max(1);
            let fs = (0..functions)
                .map(|_| {
                    let d = rng.gen_range(1..=d_max);
                    random_cylinder_function(space, &mut rng, d)
                })
                .collect::<Result<Vec<_>>>()?;
            let witnesses = fs.iter().map(|f| witness_defect(space, &cert, f)).collect::<Result<Vec<_>>>()?;
            let ladder = isometry_defect_ladder(space, &nu, &fs, radii)?;
            Ok((i, Some(cert), witnesses, ladder))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Vec::new();
    for (i, cert, witnesses, ladder) in rows {
        let Some(mut cert) = cert else {
            report.downgrade(Verdict::Inconclusive);
            report.evidence.push(Evidence::Exhausted {
                reason: format!("sample {i} did not contract"),
                budget: params.steps,
                data: json!(i),
            });
            continue;
        };
        cert.id = format!("s{i}");
        let mut worst = 0.0f64;
        for w in &witnesses {
            if w.defect > 2.0 * (1.0 - w.concentrated_mass) {
                report.verdict = Verdict::Fail;
                report.note(format!("sample {i}: witness defect {} exceeds twice the escaped mass", w.defect));
            }
            worst = worst.max(w.defect / w.norm);
        }
        let monotone = ladder.iter().all(|row| row.windows(2).all(|p| p[1] <= p[0]));
        if !monotone {
            report.verdict = Verdict::Fail;
            report.note(format!("sample {i}: defect increases along the radius ladder"));
        }
        let ladder_max: Vec<f64> = (0..radii.len()).map(|r| ladder.iter().fold(0.0f64, |m, row| m.max(row[r]))).collect();
        table.push(json!({
            "certificate": cert.id,
            "r_cert": witnesses.iter().map(|w| w.r_cert).max().unwrap_or(0),
            "worst_relative_defect": worst,
            "ladder_max_defect": ladder_max,
        }));
        report.evidence.push(Evidence::Certificate(cert));
    }
    Ok(report.param("rows", table))
}
