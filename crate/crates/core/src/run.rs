//! Running scenarios into reports, and replaying certificates out of them.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::check::{
    amenable_size_check, check_coset_invariants, check_isometry_bridge, check_minimal_finite, check_minimal_symbolic,
    check_sp_extension_finite, check_sp_extension_induced, check_theorem_a_34, contract_measure, decompose_fibers, finite_contractible,
    sample_fiber_measure, sample_points, AmenableCandidate, CheckReport, ContractionCertificate, ContractionOutcome, ContractionParams,
    Evidence, SamplerParams, Strategy, SymbolicSpace, Verdict,
};
use crate::error::{Error, Result};
use crate::measure::AtomicMeasure;
use crate::scenario::{BuiltExtension, BuiltSpace, CheckDecl, CheckKind, Scenario, Workspace};
use crate::space::GammaSpace;

pub const SCHEMA: &str = "gboundary.report/v1";
pub const TOOL: &str = "gboundary";

/// Default radius ladder for the isometry bridge.
pub const DEFAULT_RADII: [usize; 4] = [2, 4, 6, 8];
pub const DEFAULT_FUNCTIONS: usize = 20;

/// Evaluates `$body` with `$y` bound to the named symbolic space at its
/// concrete type.
macro_rules! with_symbolic {
    ($ws:expr, $name:expr, |$y:ident| $body:expr) => {
        match $ws.spaces.get($name.as_str()) {
            Some(BuiltSpace::Boundary($y)) => $body,
            Some(BuiltSpace::Induced($y)) => $body,
            _ => Err(Error::InvalidParameter(format!("{} is not a symbolic space", $name))),
        }
    };
}

const BUNDLED: [(&str, &str); 5] = [
    ("f2-index2", include_str!("../scenarios/f2-index2.json")),
    ("f2-index3", include_str!("../scenarios/f2-index3.json")),
    ("f2-control", include_str!("../scenarios/f2-control.json")),
    ("s3-amenable", include_str!("../scenarios/s3-amenable.json")),
    ("z4-amenable", include_str!("../scenarios/z4-amenable.json")),
];

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn bundled_scenario(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CheckRun {
    pub id: String,
    pub wall_clock_ms: u64,
    pub report: CheckReport,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn verdict(&self) -> Verdict {
        if self.fail > 0 {
            Verdict::Fail
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub tool: ToolInfo,
    pub scenario: Scenario,
    pub coset_table: Option<Value>,
    pub checks: Vec<CheckRun>,
    pub summary: Summary,
}

impl RunReport {
    pub fn check(&self, id: &str) -> Option<&CheckRun> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// The report as JSON with wall-clock fields zeroed; equal for two runs of
    /// the same scenario.
    pub fn evidence_json(&self) -> String {
        let mut copy = self.clone();
        for c in &mut copy.checks {
            c.wall_clock_ms = 0;
        }
        serde_json::to_string_pretty(&copy).expect("reports serialize")
    }
}

/// Runs every check in declared order. A check that errors is reported
/// INCONCLUSIVE with the error as evidence. `workers` caps the thread pool.
pub fn run_scenario(scenario: &Scenario, workers: Option<usize>) -> Result<RunReport> {
    scenario.validate()?;
    let ws = scenario.build()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("workers: {e}")))?;
    let checks = pool.install(|| {
        scenario
            .checks
            .iter()
            .map(|decl| {
                let start = Instant::now();
                let report = match run_check(scenario, &ws, decl) {
                    Ok(r) => r,
                    Err(e) => errored(decl, e),
                };
                CheckRun { id: decl.id.clone(), wall_clock_ms: start.elapsed().as_millis() as u64, report }
            })
            .collect::<Vec<_>>()
    });
    let mut summary = Summary::default();
    for c in &checks {
        match c.report.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::Inconclusive => summary.inconclusive += 1,
        }
    }
    Ok(RunReport {
        schema: SCHEMA.into(),
        tool: ToolInfo { name: TOOL.into(), version: env!("CARGO_PKG_VERSION").into() },
        scenario: scenario.clone(),
        coset_table: ws.table.as_ref().map(|t| serde_json::to_value(t.as_ref()).expect("tables serialize")),
        checks,
        summary,
    })
}

fn errored(decl: &CheckDecl, e: Error) -> CheckReport {
    let name = serde_json::to_value(&decl.kind).ok().and_then(|v| v["check"].as_str().map(String::from)).unwrap_or_default();
    let mut r = CheckReport::new(&name);
    r.verdict = Verdict::Inconclusive;
    r.evidence.push(Evidence::Exhausted { reason: e.to_string(), budget: 0, data: Value::Null });
    r
}

fn sampler(scenario: &Scenario, samples: Option<usize>) -> SamplerParams {
    SamplerParams { atoms: scenario.budgets.atoms, samples: samples.unwrap_or(scenario.budgets.samples), seed: scenario.seed }
}

fn params(scenario: &Scenario, strategy: Option<Strategy>, default: Strategy) -> ContractionParams {
    ContractionParams { strategy: strategy.unwrap_or(default), target: scenario.depths.target, steps: scenario.budgets.steps }
}

fn default_strategy(space: &BuiltSpace) -> Strategy {
    match space {
        BuiltSpace::Boundary(_) => Strategy::AxisPower,
        _ => Strategy::PaperSequence,
    }
}

/// Fills in the space name of every certificate, nested reports included.
fn label_certificates(report: &mut CheckReport, space: &str) {
    for e in &mut report.evidence {
        match e {
            Evidence::Certificate(c) if c.space.is_empty() => c.space = space.to_string(),
            Evidence::Check { report } => label_certificates(report, space),
            _ => {}
        }
    }
}

fn run_check(scenario: &Scenario, ws: &Workspace, decl: &CheckDecl) -> Result<CheckReport> {
    let mut report = match &decl.kind {
        CheckKind::CosetInvariants { radius } => {
            let table = ws.table.as_ref().ok_or_else(|| Error::InvalidParameter("coset_invariants needs a subgroup".into()))?;
            check_coset_invariants(table, ws.basis.as_deref(), radius.unwrap_or(scenario.budgets.ball))?
        }
        CheckKind::MinimalFinite { space } => check_minimal_finite(finite(ws, space)?),
        CheckKind::MinimalSymbolic { space, depth, radius, samples, starts } => {
            let depth = depth.unwrap_or(scenario.depths.cylinder);
            let radius = radius.unwrap_or(scenario.budgets.ball);
            let count = samples.unwrap_or(scenario.budgets.samples);
            with_symbolic!(ws, space, |y| {
                let pts = match starts {
                    Some(s) => s.iter().map(|p| y.parse_point(p)).collect::<Result<Vec<_>>>()?,
                    None => sample_points(y, count, scenario.seed),
                };
                check_minimal_symbolic(y, &pts, depth, radius)
            })?
        }
        CheckKind::Contract { space, strategy, measure, samples } => {
            let p = params(scenario, *strategy, default_strategy(&ws.spaces[space]));
            let sp = sampler(scenario, *samples);
            with_symbolic!(ws, space, |y| contract_check(y, &p, &sp, measure.as_deref()))?
        }
        CheckKind::FiniteContractible { space, measure } => {
            let x = finite(ws, space)?;
            finite_contractible(x, &AtomicMeasure::from_records(x, measure)?)
        }
        CheckKind::SpExtension { extension, strategy, samples } => {
            let sp = sampler(scenario, *samples);
            match &ws.extensions[extension] {
                BuiltExtension::Induced { projection, .. } => {
                    check_sp_extension_induced(projection, &sp, &params(scenario, *strategy, Strategy::PaperSequence))?
                }
                BuiltExtension::Finite { extension, .. } => check_sp_extension_finite(extension, &sp),
            }
        }
        CheckKind::TheoremA34 { extension, strategy, samples } => {
            let phi = induced_extension(ws, extension)?;
            let p = params(scenario, *strategy, Strategy::PaperSequence);
            check_theorem_a_34(phi, &sampler(scenario, *samples), &p, scenario.depths.cylinder, scenario.budgets.ball)?
        }
        CheckKind::DecomposeFibers { extension, samples } => {
            let phi = induced_extension(ws, extension)?;
            let count = samples.unwrap_or(scenario.budgets.samples);
            let (r, fibers) = decompose_fibers(phi, scenario.depths.cylinder, scenario.budgets.ball, count, scenario.seed)?;
            r.param("fibers", json!(fibers))
        }
        CheckKind::AmenableSize { base, candidates } => {
            let cands = candidates
                .iter()
                .map(|name| match &ws.extensions[name] {
                    BuiltExtension::Finite { extension, .. } => Ok(AmenableCandidate { name: name.clone(), extension: extension.clone() }),
                    BuiltExtension::Induced { .. } => Err(Error::InvalidParameter(format!("{name} is not a finite extension"))),
                })
                .collect::<Result<Vec<_>>>()?;
            amenable_size_check(finite(ws, base)?, &cands, &sampler(scenario, None))?
        }
        CheckKind::IsometryBridge { space, samples, functions, max_depth, radii } => {
            let p = params(scenario, None, default_strategy(&ws.spaces[space]));
            let sp = sampler(scenario, *samples);
            let radii = radii.clone().unwrap_or_else(|| DEFAULT_RADII.to_vec());
            let f = functions.unwrap_or(DEFAULT_FUNCTIONS);
            let d = max_depth.unwrap_or(scenario.depths.cylinder);
            with_symbolic!(ws, space, |y| check_isometry_bridge(y, &sp, &p, f, d, &radii))?
        }
    };
    if let Some(subject) = decl.kind.subject() {
        let space = match ws.extensions.get(subject) {
            Some(e) => e.source_name(),
            None => subject,
        };
        label_certificates(&mut report, space);
    }
    Ok(report)
}

fn finite<'a>(ws: &'a Workspace, name: &str) -> Result<&'a crate::space::FiniteSpace> {
    ws.spaces.get(name).and_then(BuiltSpace::as_finite).ok_or_else(|| Error::InvalidParameter(format!("{name} is not a finite space")))
}

fn induced_extension<'a>(ws: &'a Workspace, name: &str) -> Result<&'a crate::space::InducedProjection<crate::space::BoundarySpace>> {
    match ws.extensions.get(name) {
        Some(BuiltExtension::Induced { projection, .. }) => Ok(projection),
        _ => Err(Error::InvalidParameter(format!("{name} is not an induced projection"))),
    }
}

/// Contracts the given measure, or `samples` sampled fiber measures.
fn contract_check<S: SymbolicSpace>(
    space: &S,
    p: &ContractionParams,
    sampler: &SamplerParams,
    measure: Option<&[crate::measure::AtomRecord]>,
) -> Result<CheckReport> {
    let measures = match measure {
        Some(records) => vec![AtomicMeasure::from_records(space, records)?],
        None => (0..sampler.samples).map(|i| sample_fiber_measure(space, sampler, i)).collect(),
    };
    let mut report = CheckReport::new("contract")
        .param("strategy", p.strategy.to_string())
        .depth("target", p.target)
        .budget("steps", p.steps)
        .budget("measures", measures.len());
    if measure.is_none() {
        report = report.seed(sampler.seed).budget("atoms", sampler.atoms);
    }
    for (i, nu) in measures.iter().enumerate() {
        match contract_measure(space, nu, p.strategy, p.target, p.steps)? {
            ContractionOutcome::Certified(mut cert) => {
                cert.id = format!("c{i}");
                if !cert.verify(space)? {
                    report.verdict = Verdict::Fail;
                    report
                        .evidence
                        .push(Evidence::Counterexample { reason: format!("certificate c{i} does not replay"), data: json!(cert) });
                } else {
                    report.evidence.push(Evidence::Certificate(cert));
                }
            }
            ContractionOutcome::Exhausted { reason, steps_tried, best_depth } => {
                report.downgrade(Verdict::Inconclusive);
                report.evidence.push(Evidence::Exhausted {
                    reason,
                    budget: p.steps,
                    data: json!({"measure": nu.to_records(space), "steps_tried": steps_tried, "best_depth": best_depth}),
                });
            }
        }
    }
    Ok(report)
}

fn find_certificate<'a>(report: &'a CheckReport, id: &str) -> Option<&'a ContractionCertificate> {
    report.evidence.iter().find_map(|e| match e {
        Evidence::Certificate(c) if c.id == id => Some(c),
        Evidence::Check { report } => find_certificate(report, id),
        _ => None,
    })
}

/// Rebuilds the spaces from the scenario echoed in `report` and replays one
/// certificate from its serialized data. A mismatch with the stored outcome,
/// or data that no longer replays at all, is a FAIL.
pub fn replay_certificate(report: &RunReport, check_id: &str, cert_id: &str) -> Result<CheckReport> {
    let run = report.check(check_id).ok_or_else(|| Error::InvalidParameter(format!("no check {check_id:?} in the report")))?;
    let cert = find_certificate(&run.report, cert_id)
        .ok_or_else(|| Error::InvalidParameter(format!("no certificate {cert_id:?} in check {check_id:?}")))?;
    let ws = report.scenario.build()?;
    let mut out = CheckReport::new("replay")
        .param("check", check_id)
        .param("certificate", cert_id)
        .param("space", cert.space.as_str())
        .param("stored_achieved_depth", cert.achieved_depth);
    let replayed = with_symbolic!(ws, cert.space, |y| Ok(crate::check::replay(y, &cert.measure, &cert.steps, cert.target_depth)))?;
    match replayed {
        Ok(r) => {
            out = out.param("replayed_achieved_depth", r.achieved_depth);
            let matches = r.achieved_depth == cert.achieved_depth
                && r.exact_dirac == cert.exact_dirac
                && r.limit_cylinder == cert.limit_cylinder
                && cert.achieved_depth >= cert.target_depth;
            if !matches {
                out.verdict = Verdict::Fail;
                out.evidence.push(Evidence::Counterexample {
                    reason: "replay does not reproduce the stored outcome".into(),
                    data: json!({
                        "stored": {"achieved_depth": cert.achieved_depth, "exact_dirac": cert.exact_dirac, "limit_cylinder": cert.limit_cylinder},
                        "replayed": {"achieved_depth": r.achieved_depth, "exact_dirac": r.exact_dirac, "limit_cylinder": r.limit_cylinder},
                    }),
                });
            }
        }
        Err(e) => {
            out.verdict = Verdict::Fail;
            out.evidence.push(Evidence::Counterexample { reason: format!("certificate does not replay: {e}"), data: Value::Null });
        }
    }
    Ok(out)
}

fn symbolic_space_name<'a>(ws: &'a Workspace, space: Option<&'a str>) -> Result<String> {
    match space {
        Some(s) => Ok(s.to_string()),
        None => ws
            .spaces
            .iter()
            .find(|(_, s)| matches!(s, BuiltSpace::Induced(_)))
            .or_else(|| ws.spaces.iter().find(|(_, s)| matches!(s, BuiltSpace::Boundary(_))))
            .map(|(n, _)| n.clone())
            .ok_or_else(|| Error::InvalidParameter("the scenario declares no symbolic space".into())),
    }
}

/// One-off contraction of an explicit measure on a space of the scenario
/// (the first induced or boundary space unless named). Budgets default to the
/// scenario's.
pub fn contract_in_scenario(
    scenario: &Scenario,
    space: Option<&str>,
    strategy: Option<Strategy>,
    target: Option<usize>,
    steps: Option<usize>,
    measure: &[crate::measure::AtomRecord],
) -> Result<CheckReport> {
    let ws = scenario.build()?;
    let name = symbolic_space_name(&ws, space)?;
    let built = ws.spaces.get(&name).ok_or_else(|| Error::InvalidParameter(format!("unknown space {name:?}")))?;
    let mut p = params(scenario, strategy, default_strategy(built));
    p.target = target.unwrap_or(p.target);
    p.steps = steps.unwrap_or(p.steps);
    let mut report = with_symbolic!(ws, name, |y| contract_check(y, &p, &sampler(scenario, None), Some(measure)))?;
    label_certificates(&mut report, &name);
    Ok(report.param("space", name.as_str()))
}

/// The coset table with a sample of the action on a space: the image of each
/// sampled point under every generator.
pub fn induce_sample(scenario: &Scenario, space: Option<&str>, samples: usize) -> Result<Value> {
    let ws = scenario.build()?;
    let name = symbolic_space_name(&ws, space)?;
    let gens: Vec<crate::word::Word> = ws.group.generators().collect();
    let rows = with_symbolic!(ws, name, |y| {
        sample_points(y, samples, scenario.seed)
            .iter()
            .map(|p| {
                let images = gens
                    .iter()
                    .map(|g| Ok((g.to_string(), Value::from(y.format_point(&y.act(g, p)?)))))
                    .collect::<Result<serde_json::Map<String, Value>>>()?;
                Ok(json!({"point": y.format_point(p), "images": images}))
            })
            .collect::<Result<Vec<Value>>>()
    })?;
    Ok(json!({
        "space": name,
        "coset_table": ws.table.as_deref(),
        "schreier_basis": ws.basis.as_deref().map(|b| b.generators().to_vec()),
        "seed": scenario.seed,
        "samples": rows,
    }))
}
