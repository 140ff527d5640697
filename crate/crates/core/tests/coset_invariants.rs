use gboundary::check::*;
use gboundary::coset::{enumerate_cosets, SubgroupHandle};
use gboundary::group::GroupContext;
use gboundary::perm::Perm;
use gboundary::schreier::schreier_basis;
use serde_json::json;

#[test]
fn free_index_two_passes_with_reversed_mismatches() {
    let sub = SubgroupHandle::parse(GroupContext::free(2).unwrap(), &["aa", "b", "abA"]).unwrap();
    let t = enumerate_cosets(&sub, 16).unwrap();
    let b = schreier_basis(&t).unwrap();
    let r = check_coset_invariants(&t, Some(&b), 2).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.parameters["schreier_rank"], json!(3));
    assert!(r.parameters["reversed_order_mismatches"].as_u64().unwrap() > 0);
}

#[test]
fn s3_over_transposition() {
    let g = GroupContext::permutation(3, vec![Perm::new(vec![1, 0, 2]).unwrap(), Perm::new(vec![1, 2, 0]).unwrap()]).unwrap();
    let sub = SubgroupHandle::parse(g, &["a"]).unwrap();
    let t = enumerate_cosets(&sub, 16).unwrap();
    let r = check_coset_invariants(&t, None, 2).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.parameters["index"], json!(3));
}
