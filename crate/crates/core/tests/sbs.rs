use blocksmith::caps::Caps;
use blocksmith::certificate::{verify_certificate, CheckStatus};
use blocksmith::codes::{extended_rs_generator, random_generator, rs_generator, to_projective_system};
use blocksmith::field::Field;
use blocksmith::graphs::{gnp_sample, Graph};
use blocksmith::integrity::integrity_exact;
use blocksmith::sbs::{
    check_avoidance, check_strong_blocking, construct_main, minimal_code_cross_check, random_lineset,
    theorem_avoidance_to_sbs, union_points, IntegrityEvidence,
};
use blocksmith::Error;
use proptest::prelude::*;

mod common;
use common::prime_field_sbs_oracle;

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn avoidance_never_without_strong_blocking() {
    let mut avoiding = 0;
    let mut total = 0;
    for (q, k) in [(2u64, 4usize), (3, 3)] {
        let f = Field::of_order(q).unwrap();
        for seed in 0..150u64 {
            let count = 2 + (seed as usize % 9);
            let lines = random_lineset(&f, k, count, seed, &caps()).unwrap();
            let cert = theorem_avoidance_to_sbs(&lines, &caps()).unwrap();
            assert!(
                !(cert.checks.avoidance == CheckStatus::Passed && cert.checks.strong == CheckStatus::Failed),
                "q = {q}, seed = {seed}"
            );
            let points: Vec<Vec<u32>> = union_points(&lines).iter().map(|p| p.coords().to_vec()).collect();
            let (oracle, _) = prime_field_sbs_oracle(q as u32, k, &points);
            assert_eq!(cert.checks.strong == CheckStatus::Passed, oracle, "q = {q}, seed = {seed}");
            avoiding += usize::from(cert.checks.avoidance == CheckStatus::Passed);
            total += 1;
        }
    }
    assert_eq!(total, 300);
    // the implication is only meaningful if avoidance actually occurs
    assert!(avoiding > 10, "{avoiding}");
}

#[test]
fn minimal_codes_are_strong_blocking_systems() {
    let mut checked = 0;
    let mut minimal = 0;
    for seed in 0..200u64 {
        let (q, k) = if seed % 2 == 0 { (2u64, 3 + seed as usize % 4) } else { (3, 3 + seed as usize % 3) };
        let n = k + 2 + (seed as usize % 7);
        let f = Field::of_order(q).unwrap();
        let g = random_generator(&f, k, n, seed).unwrap();
        match minimal_code_cross_check(&g, &caps()) {
            Ok((m, s)) => {
                assert_eq!(m, s);
                minimal += usize::from(m);
                checked += 1;
            }
            Err(Error::DegenerateCode(_)) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(checked >= 50, "{checked}");
    assert!(minimal > 0 && minimal < checked);
}

#[test]
fn rs_code_with_six_cycle() {
    let f5 = Field::of_order(5).unwrap();
    let sys = to_projective_system(&extended_rs_generator(&f5, 6, 3).unwrap(), 1 << 20, 1 << 20).unwrap();
    assert_eq!((sys.params().n, sys.params().k, sys.params().d), (6, 3, 4));
    let c6 = Graph::cycle(6).unwrap();
    let cert_i = integrity_exact(&c6, 25).unwrap();
    assert_eq!(cert_i.value, 4);
    let cert = construct_main(&sys, &c6, &IntegrityEvidence::Exact(cert_i), &caps()).unwrap();
    assert_eq!(cert.checks.strong, CheckStatus::Passed);
    assert!(cert.points.len() <= 30 && cert.points.len() >= 12);
    let (holds, hyperplanes) = prime_field_sbs_oracle(5, 3, &cert.points);
    assert!(holds);
    assert_eq!(hyperplanes, 31);
    assert!(verify_certificate(&cert, &caps()).unwrap().consistent());
}

#[test]
fn weak_integrity_is_refused() {
    let f5 = Field::of_order(5).unwrap();
    let sys = to_projective_system(&extended_rs_generator(&f5, 6, 3).unwrap(), 1 << 20, 1 << 20).unwrap();
    let p3 = Graph::new(6, vec![(0, 1), (1, 2)]).unwrap();
    let ev = IntegrityEvidence::Exact(integrity_exact(&p3, 25).unwrap());
    assert!(matches!(
        construct_main(&sys, &p3, &ev, &caps()),
        Err(Error::IntegrityHypothesisUnmet { .. })
    ));
}

#[test]
fn tampered_certificate_is_flagged() {
    let f5 = Field::of_order(5).unwrap();
    let sys = to_projective_system(&extended_rs_generator(&f5, 6, 3).unwrap(), 1 << 20, 1 << 20).unwrap();
    let c6 = Graph::cycle(6).unwrap();
    let ev = IntegrityEvidence::Exact(integrity_exact(&c6, 25).unwrap());
    let mut cert = construct_main(&sys, &c6, &ev, &caps()).unwrap();
    cert.points.pop();
    cert.size.points -= 1;
    let report = verify_certificate(&cert, &caps()).unwrap();
    assert!(!report.consistent());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_size_accounting(seed in 0u64..10_000, count in 1usize..8) {
        let f = Field::of_order(3).unwrap();
        let lines = random_lineset(&f, 3, count, seed, &caps()).unwrap();
        let union = union_points(&lines);
        prop_assert!(union.len() <= lines.len() * 4);
        let strong = check_strong_blocking(&f, 3, &union, 1 << 20).unwrap().holds;
        let avoid = check_avoidance(&lines, 1 << 20).unwrap().holds;
        prop_assert!(!avoid || strong);
    }

    #[test]
    fn graph_construction_size_bound(seed in 0u64..10_000) {
        let f7 = Field::of_order(7).unwrap();
        let sys = to_projective_system(&rs_generator(&f7, 7, 3).unwrap(), 1 << 20, 1 << 20).unwrap();
        let g = gnp_sample(7, 0.6, seed).unwrap();
        let ev = IntegrityEvidence::Exact(integrity_exact(&g, 25).unwrap());
        match construct_main(&sys, &g, &ev, &caps()) {
            Ok(cert) => {
                prop_assert!(cert.points.len() <= 7 + 6 * g.edge_count());
                prop_assert_eq!(cert.checks.strong, CheckStatus::Passed);
            }
            Err(Error::IntegrityHypothesisUnmet { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
