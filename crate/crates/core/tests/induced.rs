use gboundary::space::*;
use gboundary::*;
use std::sync::Arc;

fn index2() -> InducedSpace<BoundarySpace> {
    let f2 = GroupContext::free(2).unwrap();
    let table = Arc::new(enumerate_cosets(&SubgroupHandle::parse(f2, &["aa", "b", "abA"]).unwrap(), 8).unwrap());
    let basis = Arc::new(schreier_basis(&table).unwrap());
    let fiber = BoundarySpace::of_subgroup(table.clone(), basis).unwrap();
    InducedSpace::new(table, fiber).unwrap()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

#[test]
fn induced_action_examples() {
    let y = index2();
    let p = (1, BoundaryPoint::parse("|b").unwrap());
    assert_eq!(y.act(&Word::identity(), &p).unwrap(), p);
    assert_eq!(y.act(&w("a"), &p).unwrap(), (2, p.1.clone()));
    let q = (2, p.1.clone());
    let (img, lambda) = y.act_with_cocycle(&w("a"), &q).unwrap();
    assert_eq!(lambda, w("AA"));
    let expected = y.fiber().act(&w("aa"), &q.1).unwrap();
    assert_eq!(img, (1, expected));
}

#[test]
fn finite_fiber_flattens_to_a_finite_space() {
    let s3 = GroupContext::permutation(3, vec![Perm::new(vec![1, 0, 2]).unwrap(), Perm::new(vec![1, 2, 0]).unwrap()]).unwrap();
    let table = Arc::new(enumerate_cosets(&SubgroupHandle::parse(s3.clone(), &["a"]).unwrap(), 8).unwrap());
    // The sign character on two points.
    let sign = FiniteSpace::new(s3, vec![Perm::new(vec![1, 0]).unwrap(), Perm::identity(2)]).unwrap();
    let induced = InducedSpace::new(table, sign).unwrap();
    let (flat, proj) = induced.flatten().unwrap();
    assert_eq!(flat.size(), 6);
    assert_eq!(proj, vec![1, 1, 2, 2, 3, 3]);
    assert!(flat.is_transitive());
}

#[test]
fn format_round_trip() {
    let y = index2();
    let p = y.parse_point("(2, ab|c)").unwrap();
    assert_eq!(y.format_point(&p), "(2, ab|c)");
    assert!(y.parse_point("(3, |a)").is_err());
    assert!(y.parse_point("(1, |d)").is_err());
    assert_eq!(y.cylinder_count(1), Some(12));
}

#[test]
fn fibers_are_transported_and_stabilized() {
    let y = index2();
    let t = y.table().clone();
    let f2 = t.ambient().clone();
    let pt = BoundaryPoint::parse("a|bC").unwrap();
    for i in 1..=t.index() {
        let ti = t.representative(i).clone();
        assert_eq!(y.act(&ti, &(1, pt.clone())).unwrap().0, i);
        for g in f2.ball(4).unwrap() {
            if t.contains(&g) {
                assert_eq!(y.act(&ti.conjugate(&g), &(i, pt.clone())).unwrap().0, i);
            }
        }
    }
}
