use gboundary::check::*;
use gboundary::space::*;
use gboundary::*;
use num_rational::Rational64;
use std::sync::Arc;

fn pt(s: &str) -> BoundaryPoint {
    BoundaryPoint::parse(s).unwrap()
}

fn index2() -> InducedSpace<BoundarySpace> {
    let f2 = GroupContext::free(2).unwrap();
    let table = Arc::new(enumerate_cosets(&SubgroupHandle::parse(f2, &["aa", "b", "abA"]).unwrap(), 8).unwrap());
    let basis = Arc::new(schreier_basis(&table).unwrap());
    let fiber = BoundarySpace::of_subgroup(table.clone(), basis).unwrap();
    InducedSpace::new(table, fiber).unwrap()
}

#[test]
fn axis_power_example() {
    let y = BoundarySpace::free(2).unwrap();
    let half = Rational64::new(1, 2);
    let nu = AtomicMeasure::new([(pt("|a"), half), (pt("|b"), half)]).unwrap();
    let out = contract_measure(&y, &nu, Strategy::AxisPower, 7, 64).unwrap();
    let cert = out.certificate().unwrap();
    assert_eq!(cert.steps, vec![Word::generator(1); 7]);
    assert_eq!(cert.achieved_depth, 7);
    assert_eq!(cert.limit_cylinder, "aaaaaaa");
    assert!(cert.verify(&y).unwrap());
    let mut tampered = cert.clone();
    tampered.steps.pop();
    assert!(!tampered.verify(&y).unwrap());
}

#[test]
fn dirac_needs_no_steps() {
    let y = BoundarySpace::free(2).unwrap();
    let nu = AtomicMeasure::dirac(pt("b|a"));
    let cert = contract_measure(&y, &nu, Strategy::AxisPower, 5, 1).unwrap().certificate().unwrap().clone();
    assert!(cert.steps.is_empty());
    assert!(cert.exact_dirac);
    assert_eq!(cert.achieved_depth, 5);
    assert!(cert.verify(&y).unwrap());
}

#[test]
fn repelling_atom_is_perturbed() {
    let y = BoundarySpace::free(2).unwrap();
    let half = Rational64::new(1, 2);
    let nu = AtomicMeasure::new([(pt("|A"), half), (pt("|b"), half)]).unwrap();
    let cert = contract_measure(&y, &nu, Strategy::AxisPower, 10, 64).unwrap().certificate().unwrap().clone();
    assert_eq!(cert.steps[0], Word::generator(2));
    assert!(cert.verify(&y).unwrap());
}

#[test]
fn paper_sequence_on_induced_fixture() {
    let y = index2();
    let third = Rational64::new(1, 3);
    let nu = AtomicMeasure::new([(2, pt("|b")), (2, pt("C|a")), (2, pt("|A"))].into_iter().map(|p| (p, third))).unwrap();
    let cert = contract_measure(&y, &nu, Strategy::PaperSequence, 20, 64).unwrap().certificate().unwrap().clone();
    let t2 = y.table().representative(2).clone();
    for s in &cert.steps {
        let lambda = t2.inverse().multiply(s).multiply(&t2);
        assert!(y.table().contains(&lambda));
    }
    assert!(cert.achieved_depth >= 20 && cert.limit_cylinder.starts_with("(2, "));
    assert!(cert.verify(&y).unwrap());
    assert!(contract_measure(&y, &nu, Strategy::AxisPower, 20, 64).is_err());
}

#[test]
fn disabled_fiber_action_does_not_contract() {
    let y = index2();
    let control = InducedSpace::new(y.table().clone(), y.fiber().clone().with_action_disabled()).unwrap();
    let half = Rational64::new(1, 2);
    let nu = AtomicMeasure::new([((2, pt("|b")), half), ((2, pt("|c")), half)]).unwrap();
    let out = contract_measure(&control, &nu, Strategy::PaperSequence, 10, 64).unwrap();
    assert!(matches!(out, ContractionOutcome::Exhausted { .. }));
}

#[test]
fn greedy_ball_contracts_two_atoms() {
    let y = BoundarySpace::free(2).unwrap();
    let half = Rational64::new(1, 2);
    let nu = AtomicMeasure::new([(pt("|a"), half), (pt("|B"), half)]).unwrap();
    let cert = contract_measure(&y, &nu, Strategy::GreedyBall { radius: 2 }, 8, 32).unwrap().certificate().unwrap().clone();
    assert!(cert.verify(&y).unwrap());
}

#[test]
fn mixed_cosets_are_rejected() {
    let y = index2();
    let half = Rational64::new(1, 2);
    let nu = AtomicMeasure::new([((1, pt("|b")), half), ((2, pt("|b")), half)]).unwrap();
    assert!(matches!(contract_measure(&y, &nu, Strategy::PaperSequence, 4, 8), Err(Error::StrategyNotApplicable(_))));
    assert_eq!("greedy-ball:3".parse::<Strategy>().unwrap(), Strategy::GreedyBall { radius: 3 });
    assert!("spiral".parse::<Strategy>().is_err());
}
