use exbox_core::exclusivity::{e1_check, lo_k_check, noise_threshold, LoOutcome};
use exbox_core::gm::{c_grid, certify_unphysicality};
use exbox_core::marginal::{global_extension, verify_certificate};
use exbox_core::polytope::{
    catalog_box, check_no_disturbance, enumerate_vertices, from_parameterization, three_input_scenario,
    NdParameterization,
};
use exbox_core::{bell::pr_box, q, ProbabilityBox, Rational};
use proptest::prelude::*;

fn mixture(w: &[i64]) -> ProbabilityBox {
    let vs = enumerate_vertices();
    let total: i64 = w.iter().sum();
    let params: [Rational; 6] =
        std::array::from_fn(|j| vs.iter().zip(w).map(|(v, k)| &v.params.to_array()[j] * &q(*k, total)).sum());
    from_parameterization(&NdParameterization::new(params)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // On three inputs every verdict agrees: joint extension, one copy, two copies.
    #[test]
    fn verdicts_agree_on_mixtures(w in proptest::collection::vec(0i64..6, 12)) {
        prop_assume!(w.iter().any(|k| *k > 0));
        let b = mixture(&w);
        prop_assert!(check_no_disturbance(&b).passes());
        let ext = global_extension(&b).unwrap();
        prop_assert!(verify_certificate(&ext.result, &ext.problem).unwrap());
        let local = ext.result.is_feasible();
        let one = e1_check(&b);
        prop_assert_eq!(one.passes(), local);
        match lo_k_check(&b, 2).unwrap() {
            LoOutcome::Pass => prop_assert!(local),
            LoOutcome::Violation { product, certificate } => {
                prop_assert!(!local);
                prop_assert!(certificate.verify(&product));
                prop_assert!(certificate.total > Rational::one());
            }
        }
    }
}

#[test]
fn noisy_vertex_at_threshold_passes_two_copies() {
    let i1 = catalog_box("I1").unwrap();
    let t = noise_threshold(&i1).unwrap();
    assert_eq!(t, q(1, 3));
    let w = ProbabilityBox::uniform(three_input_scenario());
    assert!(lo_k_check(&i1.mix(&t, &w).unwrap(), 2).unwrap().passes());
    let above = &t + &q(1, 100);
    assert!(!lo_k_check(&i1.mix(&above, &w).unwrap(), 2).unwrap().passes());
}

#[test]
fn pr_box_has_no_joint_and_fails_two_copies() {
    let pr = pr_box();
    let ext = global_extension(&pr).unwrap();
    assert!(!ext.result.is_feasible());
    assert!(verify_certificate(&ext.result, &ext.problem).unwrap());
    assert!(lo_k_check(&pr, 1).unwrap().passes());
    match lo_k_check(&pr, 2).unwrap() {
        LoOutcome::Violation { product, certificate } => {
            assert!(certificate.verify(&product));
            assert_eq!(certificate.total, q(5, 4));
        }
        LoOutcome::Pass => panic!("PR box passed two copies"),
    }
}

#[test]
fn gm_certificates_verify_on_grid() {
    for c in c_grid(6) {
        let cert = certify_unphysicality(&c).unwrap();
        assert!(cert.verify(), "certificate at c = {c}");
        let f = (Rational::one() - &c * &q(3, 1)) / q(6, 1);
        assert_eq!(cert.forced_point, [f.clone(), f.clone(), f]);
    }
}
