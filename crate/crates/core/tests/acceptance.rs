//! Acceptance criteria, one PASS/FAIL line each. Two criteria state identities
//! that do not hold under the cocycle's own definition; they are evaluated as
//! written, reported FAIL, and their corrected forms are checked alongside.
//! The process exits nonzero only if a criterion outside that pair fails.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gboundary::check::{
    amenable_size_check, check_minimal_symbolic, contract_measure, sample_fiber_measure, sample_induced_measure, sample_points,
    witness_defect, AmenableCandidate, ContractionOutcome, Evidence, SamplerParams, Strategy, Verdict,
};
use gboundary::poisson::{isometry_defect_ladder, CylinderFunction};
use gboundary::run::{bundled_names, bundled_scenario, run_scenario};
use gboundary::scenario::Scenario;
use gboundary::space::{BoundarySpace, Cylinder, Extension, FiniteExtension, GammaSpace, InducedProjection, InducedSpace};
use gboundary::{enumerate_cosets, rewrite_in_basis, schreier_basis, CosetTable, GroupContext, SubgroupHandle, Word};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

// ---------------------------------------------------------------------------
// Oracle free-group arithmetic on signed generator indices, independent of
// the library's word type.

type Raw = Vec<i32>;

fn raw(s: &str) -> Raw {
    s.chars()
        .map(|c| {
            let g = (c.to_ascii_lowercase() as u8 - b'a' + 1) as i32;
            if c.is_ascii_uppercase() {
                -g
            } else {
                g
            }
        })
        .collect()
}

fn reduce(w: impl IntoIterator<Item = i32>) -> Raw {
    let mut out: Raw = Vec::new();
    for x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn mul(parts: &[&Raw]) -> Raw {
    reduce(parts.iter().flat_map(|p| p.iter().copied()))
}

fn inv(w: &Raw) -> Raw {
    w.iter().rev().map(|x| -x).collect()
}

fn a_sum(w: &Raw) -> i64 {
    w.iter()
        .map(|&x| {
            if x == 1 {
                1
            } else if x == -1 {
                -1
            } else {
                0
            }
        })
        .sum()
}

/// The fixtures are `Λ_n = {w : a-exponent sum ≡ 0 mod n}`; the shortlex
/// representative of residue `r` is `a^r` or `A^(n-r)`.
struct Cyclic {
    n: i64,
}

impl Cyclic {
    fn rep(&self, coset: usize) -> Raw {
        let r = (coset as i64 - 1).rem_euclid(self.n);
        if 2 * r <= self.n {
            vec![1; r as usize]
        } else {
            vec![-1; (self.n - r) as usize]
        }
    }

    fn act(&self, g: &Raw, i: usize) -> usize {
        ((i as i64 - 1 + a_sum(g)).rem_euclid(self.n) + 1) as usize
    }

    /// `α(γ, i) = t_i⁻¹ γ⁻¹ t_{γ·i}`.
    fn alpha(&self, g: &Raw, i: usize) -> Raw {
        mul(&[&inv(&self.rep(i)), &inv(g), &self.rep(self.act(g, i))])
    }
}

fn all_words(rank: i32, radius: usize) -> Vec<Raw> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for g in (1..=rank).flat_map(|g| [g, -g]) {
                if w.last() != Some(&-g) {
                    let mut v: Raw = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn text(w: &Raw) -> String {
    w.iter()
        .map(|&x| {
            let c = (b'a' + (x.unsigned_abs() as u8) - 1) as char;
            if x < 0 {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

fn word(w: &Raw) -> Word {
    text(w).parse().unwrap()
}

// ---------------------------------------------------------------------------
// Fixtures.

const INDEX1: &[&str] = &["a", "b"];
const INDEX2: &[&str] = &["aa", "b", "abA"];
const INDEX3: &[&str] = &["aaa", "b", "abA", "aabAA"];

fn table(gens: &[&str]) -> Arc<CosetTable> {
    Arc::new(enumerate_cosets(&SubgroupHandle::parse(GroupContext::free(2).unwrap(), gens).unwrap(), 64).unwrap())
}

fn induced(gens: &[&str]) -> InducedProjection<BoundarySpace> {
    let t = table(gens);
    let basis = Arc::new(schreier_basis(&t).unwrap());
    InducedProjection::new(InducedSpace::new(t.clone(), BoundarySpace::of_subgroup(t, basis).unwrap()).unwrap())
}

fn random_raw(rng: &mut ChaCha8Rng, len: usize) -> Raw {
    reduce((0..len).map(|_| {
        let g = rng.gen_range(1..=2);
        if rng.gen_bool(0.5) {
            g
        } else {
            -g
        }
    }))
}

/// A random element of `Λ` as a product of its generators.
fn random_in_subgroup(rng: &mut ChaCha8Rng, gens: &[&str]) -> Raw {
    let k = rng.gen_range(1..=4);
    let mut w = Vec::new();
    for _ in 0..k {
        let g = raw(gens[rng.gen_range(0..gens.len())]);
        let g = if rng.gen_bool(0.5) { g } else { inv(&g) };
        w = mul(&[&w, &g]);
    }
    w
}

// ---------------------------------------------------------------------------

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

fn criterion_1() -> Vec<Line> {
    let mut literal_fail = 0usize;
    let mut reversed_fail = 0usize;
    let mut table_mismatch = 0usize;
    let mut checked = 0usize;
    let ball = all_words(2, 3);
    for (n, gens) in [(2i64, INDEX2), (3, INDEX3), (1, INDEX1)] {
        let t = table(gens);
        let oracle = Cyclic { n };
        for g in &ball {
            for i in 1..=n as usize {
                if text(&oracle.alpha(g, i)) != t.cocycle(&word(g), i).to_string() {
                    table_mismatch += 1;
                }
            }
        }
        for g1 in &ball {
            for g2 in &ball {
                let g12 = mul(&[g1, g2]);
                for i in 1..=n as usize {
                    checked += 1;
                    let lhs = oracle.alpha(&g12, i);
                    let a1 = oracle.alpha(g1, oracle.act(g2, i));
                    let a2 = oracle.alpha(g2, i);
                    if lhs != mul(&[&a1, &a2]) {
                        literal_fail += 1;
                    }
                    if lhs != mul(&[&a2, &a1]) {
                        reversed_fail += 1;
                    }
                }
            }
        }
    }
    vec![
        line(
            literal_fail == 0 && table_mismatch == 0,
            format!("α(γ₁γ₂,x)=α(γ₁,γ₂x)α(γ₂,x) as written: {literal_fail} of {checked} triples violate it"),
        ),
        line(
            reversed_fail == 0 && table_mismatch == 0,
            format!("α(γ₁γ₂,x)=α(γ₂,x)α(γ₁,γ₂x): {reversed_fail} of {checked} violations; library cocycle vs oracle: {table_mismatch} mismatches"),
        ),
    ]
}

fn criterion_2() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut first_bad = 0usize;
    let mut second_literal_bad = 0usize;
    let mut second_corrected_bad = 0usize;
    let mut samples = 0usize;
    for (n, gens) in [(2i64, INDEX2), (3, INDEX3)] {
        let t = table(gens);
        let oracle = Cyclic { n };
        for _ in 0..200 {
            let lambda = random_in_subgroup(&mut rng, gens);
            for tr in t.transversal() {
                let g = mul(&[&raw(&tr.to_string()), &lambda]);
                if t.cocycle(&word(&g), 1).to_string() != text(&inv(&lambda)) {
                    first_bad += 1;
                }
            }
        }
        for _ in 0..200 {
            samples += 1;
            let j = rng.gen_range(1..=n as usize);
            let i = rng.gen_range(1..=n as usize);
            let tj = oracle.rep(j);
            let lambda_j = mul(&[&tj, &random_in_subgroup(&mut rng, gens), &inv(&tj)]);
            let g = mul(&[&oracle.rep(i), &inv(&tj), &lambda_j]);
            let a = t.cocycle(&word(&g), j).to_string();
            if !a.is_empty() {
                second_literal_bad += 1;
            }
            if a != text(&mul(&[&inv(&tj), &inv(&lambda_j), &tj])) || t.act(&word(&g), j) != i {
                second_corrected_bad += 1;
            }
        }
    }
    vec![
        line(
            first_bad == 0 && second_literal_bad == 0,
            format!(
                "α(tλ,1)=λ⁻¹: {first_bad} violations; α(t_i t_j⁻¹λ_j, j)=e as written: {second_literal_bad} of {samples} samples violate it"
            ),
        ),
        line(
            first_bad == 0 && second_corrected_bad == 0,
            format!("α(t_i t_j⁻¹λ_j, j)=t_j⁻¹λ_j⁻¹t_j and lands on coset i: {second_corrected_bad} of {samples} violations"),
        ),
    ]
}

fn criterion_3() -> Vec<Line> {
    let mut bad = 0usize;
    let mut total = 0usize;
    for gens in [INDEX2, INDEX3] {
        let phi = induced(gens);
        let y = phi.source();
        let base = phi.base();
        let points = sample_points(y, 1000, SEED ^ 3);
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 33);
        for p in &points {
            total += 1;
            let g1 = word(&random_raw(&mut rng, 6));
            let g2 = word(&random_raw(&mut rng, 6));
            let identity_ok = y.act(&Word::identity(), p).unwrap() == *p;
            let assoc_ok = y.act(&g1.multiply(&g2), p).unwrap() == y.act(&g1, &y.act(&g2, p).unwrap()).unwrap();
            let q = y.act(&g1, p).unwrap();
            let equivariant = phi.apply(&q) == base.act_point(&g1, phi.apply(p));
            if !(identity_ok && assoc_ok && equivariant) {
                bad += 1;
            }
        }
    }
    vec![line(bad == 0, format!("identity, associativity and φ-equivariance on {total} triples: {bad} violations"))]
}

fn criterion_4() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut bad = 0usize;
    let mut ranks = Vec::new();
    let ball = all_words(2, 6);
    for (n, gens) in [(2i64, INDEX2), (3, INDEX3)] {
        let t = table(gens);
        let basis = schreier_basis(&t).unwrap();
        ranks.push((basis.rank(), 1 + n as usize));
        let members: Vec<&Raw> = ball.iter().filter(|w| a_sum(w).rem_euclid(n) == 0).collect();
        for _ in 0..1000 {
            let l1 = word(members[rng.gen_range(0..members.len())]);
            let l2 = word(members[rng.gen_range(0..members.len())]);
            let r1 = rewrite_in_basis(&t, &basis, &l1).unwrap();
            let r2 = rewrite_in_basis(&t, &basis, &l2).unwrap();
            let r12 = rewrite_in_basis(&t, &basis, &l1.multiply(&l2)).unwrap();
            let hom = text(&mul(&[&raw(&r1.to_string()), &raw(&r2.to_string())])) == r12.to_string();
            if basis.evaluate(&r1) != l1 || basis.evaluate(&r12) != l1.multiply(&l2) || !hom {
                bad += 1;
            }
        }
    }
    let ranks_ok = ranks.iter().all(|(got, want)| got == want);
    vec![line(
        bad == 0 && ranks_ok,
        format!("round trip and homomorphism on 2000 pairs: {bad} violations; ranks {ranks:?} (got, 1+n(k-1))"),
    )]
}

/// Expands "(i, u|v)" to the coset and the first `n` letters of `u v v ⋯`.
fn expand(point: &str, n: usize) -> (usize, String) {
    let inner = point.trim_start_matches('(').trim_end_matches(')');
    let (i, rest) = inner.split_once(", ").unwrap();
    let (u, v) = rest.split_once('|').unwrap();
    let mut s = u.to_string();
    while s.len() < n {
        s.push_str(v);
    }
    s.truncate(n);
    (i.parse().unwrap(), s)
}

fn common_depth(points: &[String], n: usize) -> usize {
    let expanded: Vec<(usize, String)> = points.iter().map(|p| expand(p, n)).collect();
    if expanded.iter().any(|(i, _)| *i != expanded[0].0) {
        return 0;
    }
    (0..n).take_while(|&k| expanded.iter().all(|(_, s)| s.as_bytes()[k] == expanded[0].1.as_bytes()[k])).count()
}

fn criterion_5() -> Vec<Line> {
    let phi = induced(INDEX2);
    let y = phi.source();
    let sampler = SamplerParams { atoms: 5, samples: 100, seed: SEED ^ 5 };
    let mut certified = 0usize;
    let mut replay_bad = 0usize;
    let mut min_depth = usize::MAX;
    let mut max_steps = 0usize;
    for i in 0..100 {
        let nu = sample_fiber_measure(y, &sampler, i);
        assert!(nu.is_fiber_supported(&phi).is_some() && nu.len() <= 5);
        let ContractionOutcome::Certified(cert) = contract_measure(y, &nu, Strategy::PaperSequence, 20, 64).unwrap() else { continue };
        certified += 1;
        max_steps = max_steps.max(cert.steps.len());
        min_depth = min_depth.min(cert.achieved_depth);
        // Independent replay through the string form of the points.
        let product = cert.product();
        let moved: Vec<String> = nu.support().map(|p| y.format_point(&y.act(&product, p).unwrap())).collect();
        let depth = if moved.len() == 1 { cert.target_depth } else { common_depth(&moved, 64) };
        if !cert.verify(y).unwrap() || depth < 20 || (moved.len() > 1 && depth != cert.achieved_depth.min(64)) {
            replay_bad += 1;
        }
    }
    vec![line(
        certified == 100 && replay_bad == 0 && max_steps <= 64 && min_depth >= 20,
        format!("{certified}/100 certified, min depth {min_depth}, max steps {max_steps}, replay mismatches {replay_bad}"),
    )]
}

fn criterion_6() -> Vec<Line> {
    let phi = induced(INDEX2);
    let y = phi.source();
    let starts = sample_points(y, 10, SEED ^ 6);
    let report = check_minimal_symbolic(y, &starts, 1, 4).unwrap();
    // Depth-1 cylinders: n cosets × 2r first letters of the rank-r fiber.
    let expected = 2 * 2 * 3u128;
    let full = report
        .evidence
        .iter()
        .filter(|e| matches!(e, Evidence::Coverage { covered, total, .. } if *covered == expected && *total == expected))
        .count();
    vec![line(report.verdict == Verdict::Pass && full == 10, format!("{full}/10 starts cover all {expected} (coset × cylinder) cells"))]
}

/// Exhaustive oracle: no translate of the uniform measure on a fiber is a point mass.
fn fiber_never_collapses(ext: &FiniteExtension) -> bool {
    let src = ext.source();
    let fiber = ext.fiber(1);
    let gens = src.generator_permutations();
    // The group is finite, so positive words in the generators reach every
    // element; walk the orbit of the fiber's point set.
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![fiber.clone()];
    while let Some(set) = stack.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        if set.len() < 2 {
            return false;
        }
        for g in &gens {
            let mut image: Vec<usize> = set.iter().map(|&p| g.apply(p - 1) + 1).collect();
            image.sort();
            image.dedup();
            stack.push(image);
        }
    }
    true
}

fn criterion_7() -> Vec<Line> {
    let sampler = SamplerParams { atoms: 4, samples: 20, seed: SEED ^ 7 };
    let mut lines = Vec::new();
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["s3-amenable", "z4-amenable"] {
        let s = Scenario::from_json(bundled_scenario(name).unwrap()).unwrap();
        let ws = s.build().unwrap();
        let base = ws.spaces["X"].as_finite().unwrap().clone();
        let mut cands = Vec::new();
        for (cname, e) in &ws.extensions {
            if let gboundary::scenario::BuiltExtension::Finite { extension, .. } = e {
                cands.push(AmenableCandidate { name: cname.clone(), extension: extension.clone() });
            }
        }
        let report = amenable_size_check(&base, &cands, &sampler).unwrap();
        ok &= report.verdict == Verdict::Pass;
        for c in &cands {
            let valid = c.extension.validate().is_ok();
            let size = c.extension.source().size();
            if valid && size > base.size() {
                ok &= fiber_never_collapses(&c.extension);
            }
            detail.push(format!("{name}/{}: |Y|={size}{}", c.name, if valid { "" } else { " (not an extension)" }));
        }
    }
    lines.push(line(ok, format!("amenable_size_check PASS on S₃ and Z/4; oracle orbits of fibers never collapse; {}", detail.join(", "))));
    lines
}

fn criterion_8() -> Vec<Line> {
    let mut bad = 0usize;
    let mut fiber_supported = 0usize;
    let mut total = 0usize;
    for gens in [INDEX2, INDEX3] {
        let phi = induced(gens);
        let y = phi.source();
        let sampler = SamplerParams { atoms: 5, samples: 200, seed: SEED ^ 8 };
        for i in 0..200 {
            total += 1;
            let nu = sample_induced_measure(y, &sampler, i);
            let push = nu.pushforward_map(&phi);
            let mut oracle: BTreeMap<usize, Rational64> = BTreeMap::new();
            for (p, w) in nu.atoms() {
                let (coset, _) = expand(&y.format_point(p), 1);
                *oracle.entry(coset).or_default() += w;
            }
            let supp = nu.is_fiber_supported(&phi);
            let dirac = push.as_dirac().copied();
            let oracle_dirac = (oracle.len() == 1).then(|| *oracle.keys().next().unwrap());
            let push_matches = push.atoms().map(|(x, w)| (*x, *w)).collect::<BTreeMap<_, _>>() == oracle;
            if supp != dirac || dirac != oracle_dirac || !push_matches {
                bad += 1;
            }
            fiber_supported += supp.is_some() as usize;
        }
    }
    // The finite side: S₃ induced sign extension, all measures on 6 points.
    let s = Scenario::from_json(bundled_scenario("s3-amenable").unwrap()).unwrap();
    let ws = s.build().unwrap();
    let gboundary::scenario::BuiltExtension::Finite { extension, .. } = &ws.extensions["induced-sign"] else { unreachable!() };
    let sampler = SamplerParams { atoms: 4, samples: 100, seed: SEED ^ 88 };
    for i in 0..100 {
        total += 1;
        let nu = if i % 2 == 0 {
            gboundary::check::sample_finite_fiber_measure(extension, &sampler, i)
        } else {
            gboundary::check::sample_finite_measure(extension.source().size(), &sampler, i)
        };
        let push = nu.pushforward_map(extension);
        let images: std::collections::BTreeSet<usize> = nu.support().map(|&p| extension.map()[p - 1]).collect();
        let oracle = (images.len() == 1).then(|| *images.iter().next().unwrap());
        if nu.is_fiber_supported(extension) != push.as_dirac().copied() || push.as_dirac().copied() != oracle {
            bad += 1;
        }
        fiber_supported += oracle.is_some() as usize;
    }
    vec![line(bad == 0 && total == 500, format!("{total} measures ({fiber_supported} fiber-supported): {bad} disagreements"))]
}

fn criterion_9() -> Vec<Line> {
    let phi = induced(INDEX2);
    let y = phi.source();
    let sampler = SamplerParams { atoms: 5, samples: 20, seed: SEED ^ 9 };
    let radii = [2usize, 4, 6, 8];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 99);
    let fs: Vec<CylinderFunction> = (0..20)
        .map(|_| {
            let depth = rng.gen_range(1..=10);
            let mut values = BTreeMap::new();
            for _ in 0..rng.gen_range(1..=4) {
                let coset = rng.gen_range(1..=2);
                let w = random_raw_rank(&mut rng, 3, depth);
                values.insert(
                    Cylinder::Fiber(coset, Box::new(Cylinder::Prefix(word(&w)))),
                    rng.gen_range(0.05..=1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                );
            }
            CylinderFunction::new(y, depth, values, 0.0).unwrap()
        })
        .collect();
    let ball4: Vec<Word> = all_words(2, 4).iter().map(word).collect();
    let mut certified = 0usize;
    let mut bound_bad = 0usize;
    let mut oracle_bad = 0usize;
    let mut ladder_bad = 0usize;
    let mut r_cert = 0usize;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let nu = sample_fiber_measure(y, &sampler, i);
        let Some(cert) = contract_measure(y, &nu, Strategy::PaperSequence, 20, 64).unwrap().certificate().cloned() else { continue };
        certified += 1;
        for f in &fs {
            let w = witness_defect(y, &cert, f).unwrap();
            r_cert = r_cert.max(w.r_cert);
            assert!(w.witness.len() <= w.r_cert);
            let norm = f.values().values().fold(0.0f64, |m, v| m.max(v.abs()));
            let value: f64 =
                nu.atoms().map(|(p, wt)| f.evaluate(y, &y.act(&w.witness, p).unwrap()) * (*wt.numer() as f64 / *wt.denom() as f64)).sum();
            if (value - w.value).abs() > 1e-12 || (norm - w.norm).abs() > 1e-12 {
                oracle_bad += 1;
            }
            let defect = (norm - value.abs()).max(0.0);
            worst = worst.max(defect / norm);
            if w.concentrated_mass >= 0.975 && defect > 0.05 * norm {
                bound_bad += 1;
            }
        }
        let ladder = isometry_defect_ladder(y, &nu, &fs, &radii).unwrap();
        for (f, row) in fs.iter().zip(&ladder) {
            if row.windows(2).any(|p| p[1] > p[0]) {
                ladder_bad += 1;
            }
            // Oracle at radius 4 by direct enumeration.
            let norm = f.values().values().fold(0.0f64, |m, v| m.max(v.abs()));
            let best = ball4
                .iter()
                .map(|g| {
                    nu.atoms()
                        .map(|(p, wt)| f.evaluate(y, &y.act(g, p).unwrap()) * (*wt.numer() as f64 / *wt.denom() as f64))
                        .sum::<f64>()
                        .abs()
                })
                .fold(0.0f64, f64::max);
            if ((norm - best).max(0.0) - row[1]).abs() > 1e-9 {
                oracle_bad += 1;
            }
        }
    }
    vec![line(
        certified == 20 && bound_bad == 0 && oracle_bad == 0 && ladder_bad == 0,
        format!(
            "{certified}/20 certified; worst defect/‖f‖ at the witness {worst:.3e} (R_cert ≤ {r_cert}); bound violations {bound_bad}; ladder {radii:?} increases {ladder_bad}; oracle mismatches {oracle_bad}"
        ),
    )]
}

fn random_raw_rank(rng: &mut ChaCha8Rng, rank: i32, len: usize) -> Raw {
    let mut w: Raw = Vec::new();
    while w.len() < len {
        let g = rng.gen_range(1..=rank) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if w.last() != Some(&-g) {
            w.push(g);
        }
    }
    w
}

fn criterion_10() -> Vec<Line> {
    let mut differing = Vec::new();
    let mut n = 0;
    for name in bundled_names() {
        n += 1;
        let s = Scenario::from_json(bundled_scenario(name).unwrap()).unwrap();
        let a = run_scenario(&s, Some(1)).unwrap().evidence_json();
        let b = run_scenario(&s, None).unwrap().evidence_json();
        if a != b {
            differing.push(name);
        }
    }
    vec![line(differing.is_empty(), format!("{n} bundled scenarios run twice (1 worker, default pool): differing {differing:?}"))]
}

type Criterion = (&'static str, fn() -> Vec<Line>, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1", criterion_1, Duration::from_secs(10)),
        ("2", criterion_2, Duration::from_secs(5)),
        ("3", criterion_3, Duration::from_secs(10)),
        ("4", criterion_4, Duration::from_secs(10)),
        ("5", criterion_5, Duration::from_secs(30)),
        ("6", criterion_6, Duration::from_secs(10)),
        ("7", criterion_7, Duration::from_secs(5)),
        ("8", criterion_8, Duration::from_secs(5)),
        ("9", criterion_9, Duration::from_secs(30)),
        ("10", criterion_10, Duration::from_secs(20)),
    ];
    // As-written forms known not to hold; their second line is the check that counts.
    let known_red = ["1", "2"];
    let mut unexpected = 0;
    for (id, run, limit) in criteria {
        let start = Instant::now();
        let lines = run();
        let elapsed = start.elapsed();
        let timely = elapsed <= limit;
        for (k, l) in lines.iter().enumerate() {
            let label = if lines.len() > 1 { format!("{id}{}", ["a", "b"][k]) } else { id.to_string() };
            let pass = l.pass && timely;
            let note = if !timely { format!(" [over time limit {limit:?}]") } else { String::new() };
            println!("{} criterion {label:<3} {:>8.2?}  {}{note}", if pass { "PASS" } else { "FAIL" }, elapsed, l.detail);
            let tolerated = known_red.contains(&id) && k == 0;
            if !pass && !tolerated {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
