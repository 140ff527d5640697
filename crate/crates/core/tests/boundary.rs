use gboundary::space::*;
use gboundary::*;
use proptest::prelude::*;

fn pt(s: &str) -> BoundaryPoint {
    BoundaryPoint::parse(s).unwrap()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

/// Expansion of the raw (unnormalized) data by brute force: reduce u·v^N.
fn raw_expansion(u: &Word, v: &Word, n: usize) -> Word {
    let mut x = u.clone();
    for _ in 0..(n + u.len() + 2) {
        x = x.multiply(v);
    }
    x.prefix(n)
}

#[test]
fn normal_form_rules() {
    assert_eq!(pt("aaa|a"), pt("|a"));
    assert_eq!(pt("|abab"), pt("|ab"));
    assert_eq!(pt("b|ab"), pt("|ba"));
    assert_eq!(pt("ab|ba").to_string(), "ab|ba");
    assert_eq!(pt("aba|ba").to_string(), "|ab");
    assert_eq!(pt("abb|ab").to_string(), "ab|ba");
    assert_eq!(pt("A|abA").to_string(), "|b");
    assert_eq!(pt("aB|bab").to_string(), "a|abb");
    assert!(BoundaryPoint::parse("ab|").is_err());
    assert!(BoundaryPoint::parse("ab").is_err());
}

#[test]
fn action_examples() {
    let y = BoundarySpace::free(2).unwrap();
    let b = pt("|b");
    assert_eq!(y.act(&Word::identity(), &b).unwrap(), b);
    let ab = y.act(&w("a"), &b).unwrap();
    assert_eq!((ab.prefix().to_string(), ab.period().to_string()), ("a".into(), "b".into()));
    assert_eq!(y.act(&w("A"), &ab).unwrap(), b);
    assert_eq!(y.act(&w("A"), &ab).unwrap().expansion(10), raw_expansion(&w(""), &w("b"), 10));
}

#[test]
fn prefix_depth_examples() {
    assert_eq!(common_prefix_depth(&pt("|a"), &pt("|a")), PrefixDepth::Equal);
    assert_eq!(common_prefix_depth(&pt("|a"), &pt("aa|b")), PrefixDepth::Depth(2));
    assert_eq!(common_prefix_depth(&pt("|b"), &pt("|a")), PrefixDepth::Depth(0));
    assert_eq!(common_prefix_depth(&pt("|ab"), &pt("|abaB")), PrefixDepth::Depth(3));
}

#[test]
fn cylinder_counts() {
    let y = BoundarySpace::free(3).unwrap();
    assert_eq!(y.cylinder_count(1), Some(6));
    assert_eq!(y.cylinder_count(2), Some(30));
    assert!(BoundarySpace::free(1).is_err());
}

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0usize..4, 0..max).prop_map(|v| Word::reduce(v.into_iter().map(Letter::from_slot)))
}

fn point_strategy() -> impl Strategy<Value = (Word, Word)> {
    (word_strategy(6), word_strategy(5).prop_filter("nonempty", |v| !v.is_empty()))
}

proptest! {
    #[test]
    fn normal_form_is_faithful_and_idempotent((u, v) in point_strategy()) {
        let p = BoundaryPoint::new(u.clone(), v.clone()).unwrap();
        prop_assert_eq!(p.expansion(24), raw_expansion(&u, &v, 24));
        let again = BoundaryPoint::new(p.prefix().clone(), p.period().clone()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert!(p.period().is_cyclically_reduced());
    }

    #[test]
    fn equality_matches_expansion_bound((u1, v1) in point_strategy(), (u2, v2) in point_strategy()) {
        let (p, q) = (BoundaryPoint::new(u1, v1).unwrap(), BoundaryPoint::new(u2, v2).unwrap());
        let (a, b) = (p.period().len(), q.period().len());
        let bound = p.prefix().len().max(q.prefix().len()) + a * b;
        prop_assert_eq!(p == q, p.expansion(bound) == q.expansion(bound));
        if let PrefixDepth::Depth(d) = common_prefix_depth(&p, &q) {
            prop_assert_eq!(p.expansion(d), q.expansion(d));
            prop_assert_ne!(p.letter_at(d), q.letter_at(d));
        }
    }

    #[test]
    fn translation_is_an_action(g in word_strategy(6), h in word_strategy(6), (u, v) in point_strategy()) {
        let p = BoundaryPoint::new(u, v).unwrap();
        prop_assert_eq!(p.translate(&g.multiply(&h)), p.translate(&h).translate(&g));
        prop_assert_eq!(p.translate(&Word::identity()), p);
    }
}
