use gboundary::scenario::*;

const MINIMAL: &str = r#"{
    "name": "t",
    "group": {"free": {"rank": 2}},
    "subgroup": ["aa", "b", "abA"],
    "depths": {"cylinder": 1, "target": 8},
    "budgets": {"ball": 3, "steps": 32, "samples": 4, "atoms": 3, "max_cosets": 16},
    "seed": 1,
    "spaces": {"X": {"kind": "coset_space"}, "Y": {"kind": "induced_boundary"}},
    "extensions": {"phi": {"kind": "projection", "space": "Y"}},
    "checks": [{"id": "m", "check": "minimal_finite", "space": "X"}]
}"#;

#[test]
fn parses_and_builds() {
    let s = Scenario::from_json(MINIMAL).unwrap();
    let ws = s.build().unwrap();
    assert_eq!(ws.table.as_ref().unwrap().index(), 2);
    assert_eq!(ws.spaces["Y"].kind(), "induced");
    assert!(matches!(ws.extensions["phi"], BuiltExtension::Induced { .. }));
    let round: Scenario = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(round, s);
}

#[test]
fn rejects_bad_references_and_budgets() {
    let bad = MINIMAL.replace(r#""space": "X"}]"#, r#""space": "Q"}]"#);
    assert!(Scenario::from_json(&bad).unwrap_err().to_string().contains("unknown name"));
    let zero = MINIMAL.replace(r#""steps": 32"#, r#""steps": 0"#);
    assert!(Scenario::from_json(&zero).unwrap_err().to_string().contains("budgets.steps"));
    let typo = MINIMAL.replace(r#""seed": 1"#, r#""seed": 1, "sead": 2"#);
    assert!(Scenario::from_json(&typo).is_err());
    let kind = MINIMAL.replace(r#""minimal_finite", "space": "X""#, r#""minimal_finite", "space": "Y""#);
    assert!(Scenario::from_json(&kind).unwrap().build().is_err());
}
