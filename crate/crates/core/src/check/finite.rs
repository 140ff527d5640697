use std::collections::{HashSet, VecDeque};

use num_rational::Rational64;
use serde_json::json;

use crate::check::sampler::{sample_finite_fiber_measure, SamplerParams};
use crate::check::{CheckReport, Evidence, Verdict};
use crate::coset::SubgroupHandle;
use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, Weight};
use crate::space::{Extension, FiniteExtension, FiniteSpace, GammaSpace};

/// Orbits larger than this are not enumerated.
const ORBIT_CAP: usize = 200_000;
/// Orbit listings in reports are cut to this many measures.
const LISTED_ORBIT: usize = 64;

pub(crate) fn format_finite_measure(nu: &AtomicMeasure<usize>) -> String {
    let atoms: Vec<String> = nu.atoms().map(|(p, w)| format!("{p}: {}", w.format())).collect();
    format!("{{{}}}", atoms.join(", "))
}

/// PASS iff the generators act transitively; FAIL exhibits a proper invariant subset.
pub fn check_minimal_finite(x: &FiniteSpace) -> CheckReport {
    let mut report = CheckReport::new("minimal_finite").param("size", x.size());
    let mut orbit: Vec<usize> = x.orbit_words(1).into_iter().map(|(p, _)| p).collect();
    orbit.sort_unstable();
    let points = orbit.iter().map(usize::to_string).collect();
    if orbit.len() == x.size() {
        report.evidence.push(Evidence::Orbit { start: "1".into(), points });
    } else {
        report.verdict = Verdict::Fail;
        report.evidence.push(Evidence::Counterexample {
            reason: format!("the orbit of 1 is a proper invariant subset ({} of {} points)", orbit.len(), x.size()),
            data: json!(orbit),
        });
    }
    report
}

/// Exhaustive search of the orbit of `ν` for a point mass.
///
/// Since permutations preserve the weight multiset the answer is "ν is
/// already a point mass"; that shortcut is computed too and must agree.
pub fn finite_contractible(x: &FiniteSpace, nu: &AtomicMeasure<usize>) -> CheckReport {
    let mut report = CheckReport::new("finite_contractible").param("measure", format_finite_measure(nu)).budget("orbit", ORBIT_CAP);
    let mut seen: HashSet<AtomicMeasure<usize>> = HashSet::from([nu.clone()]);
    let mut order = vec![nu.clone()];
    let mut queue = VecDeque::from([nu.clone()]);
    let mut found = nu.as_dirac().map(|_| nu.clone());
    while let Some(m) = queue.pop_front() {
        if found.is_some() {
            break;
        }
        for l in x.ambient().letters() {
            let next = m.map_points(|&p| Ok(x.act_letter(l, p))).expect("finite action is total");
            if seen.insert(next.clone()) {
                if next.as_dirac().is_some() {
                    found = Some(next.clone());
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
        if seen.len() > ORBIT_CAP {
            report.verdict = Verdict::Inconclusive;
            report.evidence.push(Evidence::Exhausted {
                reason: "measure orbit exceeds the enumeration cap".into(),
                budget: ORBIT_CAP,
                data: json!(seen.len()),
            });
            return report;
        }
    }
    let exhaustive = found.is_some();
    let shortcut = nu.weight_multiset() == vec![Rational64::from_integer(1)];
    report = report.param("orbit_size", order.len()).param("multiset_shortcut", shortcut);
    if exhaustive != shortcut {
        report.verdict = Verdict::Fail;
        report.note("exhaustive orbit search and weight-multiset shortcut disagree");
        return report;
    }
    let listed: Vec<String> = order.iter().take(LISTED_ORBIT).map(format_finite_measure).collect();
    match found {
        Some(d) => report.evidence.push(Evidence::Orbit { start: format_finite_measure(&d), points: listed }),
        None => {
            report.verdict = Verdict::Fail;
            report.evidence.push(Evidence::Counterexample {
                reason: format!("no point mass among the {} measures of the orbit", order.len()),
                data: json!({ "measure": format_finite_measure(nu), "orbit": listed, "orbit_size": order.len() }),
            });
        }
    }
    report
}

/// `Λ_x = {γ : γx = x}` from the Schreier generators of the orbit transversal.
pub fn stabilizer_subgroup(x: &FiniteSpace, point: usize) -> Result<SubgroupHandle> {
    x.check_point(point)?;
    let orbit = x.orbit_words(point);
    if orbit.len() != x.size() {
        return Err(Error::NotTransitive { start: point, orbit: orbit.len(), size: x.size() });
    }
    let mut word_of = vec![None; x.size() + 1];
    for (y, u) in &orbit {
        word_of[*y] = Some(u.clone());
    }
    let ambient = x.ambient();
    let mut gens = Vec::new();
    for (y, u) in &orbit {
        for g in ambient.generators() {
            let z = x.act_point(&g, *y);
            let s = word_of[z].as_ref().expect("orbit is complete").inverse().multiply(&g).multiply(u);
            if !ambient.is_identity(&s)? && !gens.contains(&s) {
                gens.push(s);
            }
        }
    }
    SubgroupHandle::new(ambient.clone(), gens)
}

/// Strong proximality of a finite extension, by exhaustive orbit search on
/// the uniform measure of every fiber and on sampled fiber measures.
pub fn check_sp_extension_finite(ext: &FiniteExtension, sampler: &SamplerParams) -> CheckReport {
    let mut report = CheckReport::new("sp_extension")
        .param("source_size", ext.source().size())
        .param("base_size", ext.base().size())
        .seed(sampler.seed)
        .budget("samples", sampler.samples)
        .budget("atoms", sampler.atoms);
    if let Err(e) = ext.validate() {
        report.verdict = Verdict::Fail;
        report.evidence.push(Evidence::Counterexample { reason: format!("not an extension: {e}"), data: json!(ext.map()) });
        return report;
    }
    let mut measures: Vec<AtomicMeasure<usize>> = ext
        .base()
        .points()
        .map(|x| {
            let fiber = ext.fiber(x);
            let w = Rational64::new(1, fiber.len() as i64);
            AtomicMeasure::new(fiber.into_iter().map(|y| (y, w))).expect("uniform weights")
        })
        .collect();
    measures.extend((0..sampler.samples).map(|i| sample_finite_fiber_measure(ext, sampler, i)));
    let mut failures = 0;
    for nu in &measures {
        let Some(x) = nu.is_fiber_supported(ext) else {
            report.verdict = Verdict::Fail;
            report.note(format!("sampled measure {} is not fiber-supported", format_finite_measure(nu)));
            continue;
        };
        if nu.pushforward_map(ext) != AtomicMeasure::dirac(x) {
            report.verdict = Verdict::Fail;
            report.note("push-forward of a fiber-supported measure is not a point mass");
        }
        let sub = finite_contractible(ext.source(), nu);
        match sub.verdict {
            Verdict::Pass => {}
            Verdict::Fail => {
                failures += 1;
                if failures == 1 {
                    report.evidence.push(Evidence::Check { report: Box::new(sub) });
                }
                report.verdict = Verdict::Fail;
            }
            Verdict::Inconclusive => report.downgrade(Verdict::Inconclusive),
        }
    }
    report.param("measures", measures.len()).param("non_contractible", failures)
}

/// A named candidate `(Y, φ)` over a finite minimal `X`.
#[derive(Clone, Debug)]
pub struct AmenableCandidate {
    pub name: String,
    pub extension: FiniteExtension,
}

/// For a finite group, exactly the candidates with `|Y| = |X|` should be
/// strongly proximal extensions.
pub fn amenable_size_check(base: &FiniteSpace, candidates: &[AmenableCandidate], sampler: &SamplerParams) -> Result<CheckReport> {
    if base.ambient().is_free() {
        return Err(Error::NotFinite);
    }
    let mut report = CheckReport::new("amenable_size").param("n", base.size()).seed(sampler.seed);
    report.nest(check_minimal_finite(base));
    let mut table = Vec::new();
    for c in candidates {
        if c.extension.base() != base {
            return Err(Error::InvalidExtension(format!("candidate {} has a different base", c.name)));
        }
        let sub = check_sp_extension_finite(&c.extension, sampler);
        let valid = c.extension.validate().is_ok();
        let expected = valid && c.extension.source().size() == base.size();
        let passed = sub.verdict == Verdict::Pass;
        if passed != expected || sub.verdict == Verdict::Inconclusive {
            report.downgrade(if sub.verdict == Verdict::Inconclusive { Verdict::Inconclusive } else { Verdict::Fail });
        }
        table.push(json!({
            "candidate": c.name,
            "size": c.extension.source().size(),
            "extension": valid,
            "verdict": sub.verdict,
            "expected": if expected { Verdict::Pass } else { Verdict::Fail },
        }));
        report.evidence.push(Evidence::Check { report: Box::new(sub.param("candidate", c.name.clone())) });
    }
    Ok(report.param("candidates", table))
}
