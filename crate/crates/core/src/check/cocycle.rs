use serde_json::json;

use crate::check::{CheckReport, Evidence, Verdict};
use crate::coset::CosetTable;
use crate::error::Result;
use crate::schreier::{rewrite_in_basis, SchreierBasis};

const LISTED: usize = 8;

/// Table invariants and the cocycle identities over `ball(radius)²` and all
/// cosets. The identity holds in the order `α(γ₁γ₂,x) = α(γ₂,x)·α(γ₁,γ₂x)` for
/// `α(γ,i) = t_i⁻¹γ⁻¹t_j`; the reversed product is counted and reported but
/// does not affect the verdict.
pub fn check_coset_invariants(table: &CosetTable, basis: Option<&SchreierBasis>, radius: usize) -> Result<CheckReport> {
    let group = table.ambient();
    let n = table.index();
    let mut report = CheckReport::new("coset_invariants").param("index", n).radius("ball", radius);
    let mut failures: Vec<String> = Vec::new();

    for (i, t) in table.transversal().iter().enumerate() {
        if table.coset_of(t) != i + 1 {
            failures.push(format!("representative {t} of coset {} lies in coset {}", i + 1, table.coset_of(t)));
        }
    }
    let ball = group.ball(radius)?;
    // Defining property: γ t_i α(γ,i) = t_{γ·i} with α(γ,i) ∈ Λ.
    for g in &ball {
        for i in 1..=n {
            let a = table.cocycle(g, i);
            let j = table.act(g, i);
            if !table.contains(&a) || !group.equal(&g.multiply(table.representative(i)).multiply(&a), table.representative(j))? {
                failures.push(format!("α({g}, {i}) = {a} fails the defining property"));
            }
        }
    }
    let mut checked = 0usize;
    let mut reversed_mismatches = 0usize;
    for g1 in &ball {
        for g2 in &ball {
            let g12 = g1.multiply(g2);
            for i in 1..=n {
                checked += 1;
                let lhs = table.cocycle(&g12, i);
                let a2 = table.cocycle(g2, i);
                let a1 = table.cocycle(g1, table.act(g2, i));
                if !group.equal(&lhs, &a2.multiply(&a1))? {
                    failures.push(format!("α({g1}·{g2}, {i}) ≠ α({g2}, {i})·α({g1}, {g2}·{i})"));
                }
                if !group.equal(&lhs, &a1.multiply(&a2))? {
                    reversed_mismatches += 1;
                }
            }
        }
    }
    report = report.param("cocycle_pairs", checked).param("reversed_order_mismatches", reversed_mismatches);
    if reversed_mismatches > 0 {
        report.note(format!(
            "α(γ₁γ₂,x) = α(γ₁,γ₂x)·α(γ₂,x) fails on {reversed_mismatches} of {checked} triples; the product holds in the order α(γ₂,x)·α(γ₁,γ₂x)"
        ));
    }

    if let Some(basis) = basis {
        let k = group.rank();
        let expected = 1 + n * (k - 1);
        report = report.param("schreier_rank", basis.rank()).param("expected_rank", expected);
        if basis.rank() != expected {
            failures.push(format!("Schreier rank {} differs from 1 + n(k-1) = {expected}", basis.rank()));
        }
        for w in ball.iter().filter(|w| table.contains(w)) {
            let r = rewrite_in_basis(table, basis, w)?;
            if basis.evaluate(&r) != *w {
                failures.push(format!("rewriting {w} evaluates to {}", basis.evaluate(&r)));
            }
        }
    }

    if !failures.is_empty() {
        report.verdict = Verdict::Fail;
        report.evidence.push(Evidence::Counterexample {
            reason: format!("{} invariant violations", failures.len()),
            data: json!(failures.iter().take(LISTED).collect::<Vec<_>>()),
        });
    } else {
        report.evidence.push(Evidence::Note { text: format!("transversal {}", json!(table.transversal())) });
    }
    Ok(report)
}
