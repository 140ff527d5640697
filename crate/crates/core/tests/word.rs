use gboundary::*;
use proptest::prelude::*;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

/// Naive oracle: repeatedly delete the first adjacent cancelling pair.
fn naive_reduce(s: &str) -> String {
    let mut v: Vec<char> = s.chars().collect();
    loop {
        let pos = v.windows(2).position(|p| p[0] != p[1] && p[0].eq_ignore_ascii_case(&p[1]));
        match pos {
            Some(i) => {
                v.drain(i..i + 2);
            }
            None => return v.into_iter().collect(),
        }
    }
}

#[test]
fn reduce_examples() {
    assert_eq!(w("aA"), Word::identity());
    assert_eq!(w("abBa").to_string(), "aa");
    assert_eq!(naive_reduce("abBa"), "aa");
    let already = w("abAB");
    assert_eq!(Word::reduce(already.letters().to_vec()), already);
}

#[test]
fn multiply_and_inverse_examples() {
    assert_eq!(Word::identity().multiply(&w("abA")), w("abA"));
    assert_eq!(w("ab").multiply(&w("Ba")), w("aa"));
    assert_eq!(w("abA").multiply(&w("abA").inverse()), Word::identity());
    assert_eq!(w("aB").inverse(), w("bA"));
    assert_eq!(Word::identity().inverse(), Word::identity());
}

#[test]
fn shortlex_order() {
    let mut v = [w("b"), w("A"), w(""), w("aa"), w("a"), w("B")];
    v.sort();
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    assert_eq!(s, ["", "a", "A", "b", "B", "aa"]);
}

#[test]
fn rejects_bad_characters() {
    assert_eq!("ab1".parse::<Word>(), Err(Error::BadLetter('1')));
}

#[test]
fn cyclic_reduction_and_power() {
    assert!(w("ab").is_cyclically_reduced());
    assert!(!w("abA").is_cyclically_reduced());
    assert_eq!(w("ab").pow(-2), w("BABA"));
    assert_eq!(w("ab").pow(0), Word::identity());
}

fn raw_word() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('A'), Just('b'), Just('B'), Just('c'), Just('C')], 0..24)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn reduce_matches_naive_oracle(s in raw_word()) {
        let reduced = s.parse::<Word>().unwrap();
        prop_assert_eq!(reduced.to_string(), naive_reduce(&s));
        prop_assert!(reduced.len() <= s.len());
        prop_assert!(reduced.letters().windows(2).all(|p| p[0] != p[1].inverse()));
    }

    #[test]
    fn group_laws(a in raw_word(), b in raw_word(), c in raw_word()) {
        let (a, b, c) = (w(&a), w(&b), w(&c));
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        prop_assert!(a.multiply(&a.inverse()).is_identity());
        let concat = format!("{}{}", a, b);
        prop_assert_eq!(a.multiply(&b), w(&concat));
    }
}
