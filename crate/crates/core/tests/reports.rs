use gboundary::check::*;

#[test]
fn verdict_lattice() {
    use Verdict::*;
    assert_eq!(Pass.combine(Inconclusive), Inconclusive);
    assert_eq!(Inconclusive.combine(Fail), Fail);
    assert_eq!(Pass.combine(Pass), Pass);
    assert_eq!(serde_json::to_string(&Inconclusive).unwrap(), "\"INCONCLUSIVE\"");
}

#[test]
fn wide_counts_round_trip() {
    for total in [24u128, u128::from(u64::MAX) + 1] {
        let e = Evidence::Coverage { start: "1".into(), covered: 3, total, missing: vec![] };
        let back: Evidence = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }
}
