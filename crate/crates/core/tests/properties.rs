use bca_core::conditions::rank_profile_orders;
use bca_core::contraction::{cayley_image, contraction_roundtrip_defect, CONTRACTION_SLACK};
use bca_core::forms::{dissipativity_verdict, dual_classification, selfadjoint_verdict};
use bca_core::generate::{
    item_rng, random_contraction, random_dissipative_system, random_invertible, random_mixed_system,
};
use bca_core::numerics::{operator_norm, row_space_basis, subspace_distance};
use bca_core::{
    from_contraction, normalize, orders_multiset, regularity_verdict, structural_report, truncate_leading, BcError,
    BoundaryConditionSystem, TolerancePolicy,
};

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

#[test]
fn duality_of_gram_tests() {
    let t = TolerancePolicy::uniform(1e-8).unwrap();
    for m in 1..=4 {
        let mut dissipative = 0;
        for i in 0..100 {
            let sys = random_mixed_system(m, &mut item_rng(40 + m as u64, i)).unwrap();
            let verdict = dissipativity_verdict(&sys, &t).unwrap();
            let dual = dual_classification(&sys, &t).unwrap();
            assert_eq!(verdict.dissipative, dual.is_nonpositive(), "m = {m}, item {i}");
            dissipative += verdict.dissipative as usize;
        }
        assert!(
            dissipative > 20 && dissipative < 80,
            "m = {m}: {dissipative} dissipative"
        );
    }
}

#[test]
fn dissipative_iff_contraction() {
    let t = tol();
    for m in 1..=4 {
        for i in 0..100 {
            let sys = random_mixed_system(m, &mut item_rng(50 + m as u64, i)).unwrap();
            let dissipative = dissipativity_verdict(&sys, &t).unwrap().dissipative;
            let contraction = match cayley_image(&sys, &t) {
                Ok(v) => operator_norm(&v) <= 1.0 + CONTRACTION_SLACK,
                Err(BcError::RankDeficiency { .. }) => false,
                Err(e) => panic!("{e}"),
            };
            assert_eq!(dissipative, contraction, "m = {m}, item {i}");

            let sys = random_dissipative_system(m, &mut item_rng(60 + m as u64, i)).unwrap();
            assert!(contraction_roundtrip_defect(&sys, &t).unwrap() <= 1e-9);

            let back = from_contraction(&random_contraction(m, &mut item_rng(70 + m as u64, i))).unwrap();
            assert!(dissipativity_verdict(&back, &t).unwrap().dissipative);
        }
    }
}

#[test]
fn even_dissipative_systems_are_regular() {
    let t = TolerancePolicy::uniform(1e-8).unwrap();
    for m in [2, 4] {
        for i in 0..100 {
            let sys = random_dissipative_system(m, &mut item_rng(80 + m as u64, i)).unwrap();
            let rep = regularity_verdict(&normalize(&sys, &t).unwrap(), &t).unwrap();
            assert_eq!(rep.regular, Some(true), "m = {m}, item {i}: {rep:?}");
            assert_eq!(rep.regular_strict, Some(true), "m = {m}, item {i}: {rep:?}");
        }
    }
}

#[test]
fn normalization_invariants() {
    let t = tol();
    for m in 1..=6 {
        for i in 0..25 {
            let mut rng = item_rng(90 + m as u64, i);
            let sys = if i % 2 == 0 {
                random_dissipative_system(m, &mut rng).unwrap()
            } else {
                random_mixed_system(m, &mut rng).unwrap()
            };
            let orders = orders_multiset(&sys, &t).unwrap();
            assert_eq!(orders, rank_profile_orders(&sys, &t), "m = {m}, item {i}");
            for _ in 0..20 {
                let mixed = sys.recombined(&random_invertible(m, &mut rng)).unwrap();
                assert_eq!(orders_multiset(&mixed, &t).unwrap(), orders, "m = {m}, item {i}");
            }
            let norm = normalize(&sys, &t).unwrap();
            let again = normalize(norm.base(), &t).unwrap();
            assert_eq!(again.orders(), norm.orders());
            let span = |s: &BoundaryConditionSystem| row_space_basis(s.coeffs(), &t);
            assert!(subspace_distance(&span(&sys), &span(norm.base())).unwrap() <= 1e-9);
            assert!(subspace_distance(&span(norm.base()), &span(again.base())).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn rank_sums_and_pairings_for_even_dissipative_systems() {
    let t = tol();
    for i in 0..100u64 {
        let m = if i % 2 == 0 { 2 } else { 4 };
        let sys = random_dissipative_system(m, &mut item_rng(100, i)).unwrap();
        let norm = normalize(&sys, &t).unwrap();
        let rep = structural_report(&norm).unwrap();
        assert!(rep.rank_sums.iter().all(|&s| s == 2), "item {i}: {rep:?}");
        for d in &rep.pairing_defects {
            assert!(d.defect <= 1e-9 * d.scale, "item {i}: {d:?}");
        }
        assert!(selfadjoint_verdict(&truncate_leading(&norm), &t).unwrap(), "item {i}");
    }
}
