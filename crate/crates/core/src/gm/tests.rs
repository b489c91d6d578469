use super::*;
use crate::exclusivity::e1_check;
use crate::marginal::{ch_all, ch_values, global_extension, verify_certificate};
use crate::polytope::check_no_disturbance;
use alloc::vec;
use crate::rational::q;

fn row(b: &ProbabilityBox, a: &str, bb: &str) -> Vec<Rational> {
    let s = b.scenario();
    let k = s.contexts().iter().position(|c| s.join_labels(c.inputs()) == format!("{a},{bb}")).unwrap();
    b.table(k).to_vec()
}

#[test]
fn table_values() {
    let g = gm_box(&q(1, 6)).unwrap();
    assert_eq!(row(g.pbox(), "A1", "B1"), vec![q(5, 12), q(0, 1), q(0, 1), q(7, 12)]);
    assert_eq!(row(g.pbox(), "A2", "B2"), vec![q(5, 12), q(0, 1), q(0, 1), q(7, 12)]);
    assert_eq!(row(g.pbox(), "A3", "B3"), vec![q(1, 12), q(1, 3), q(1, 3), q(1, 4)]);
    let e = g.pbox().scenario().event(&[("A1", 1), ("B1", 1)]).unwrap();
    assert_eq!(g.pbox().event_probability(&e).unwrap(), q(7, 12));

    let g = gm_box(&q(1, 3)).unwrap();
    assert_eq!(row(g.pbox(), "A1", "B2"), vec![q(0, 1), q(1, 3), q(1, 3), q(1, 3)]);
}

#[test]
fn c_range() {
    assert!(gm_box(&Rational::zero()).is_err());
    assert!(gm_box(&q(1, 2)).is_err());
    assert!(gm_box(&q(-1, 6)).is_err());
    assert!(certify_unphysicality(&q(1, 2)).is_err());
}

#[test]
fn gm_is_no_disturbing_with_equal_marginals() {
    for c in c_grid(6) {
        let g = gm_box(&c).unwrap();
        assert!(check_no_disturbance(g.pbox()).passes());
        assert!(e1_check(g.pbox()).passes());
        let s = g.pbox().scenario();
        for i in 0..6 {
            let e = Event::new(vec![(i, 0)]);
            assert_eq!(g.pbox().event_probability(&e).unwrap(), marginal(&c));
        }
        let _ = s;
    }
}

#[test]
fn ch_premise() {
    for c in [q(1, 12), q(1, 6), q(1, 4), q(1, 3)] {
        let g = gm_box(&c).unwrap();
        assert_eq!(ch_values(g.pbox(), (1, 2, 1, 2)).unwrap()[0].value, q(-2, 3));
        let all = ch_all(g.pbox()).unwrap();
        assert_eq!(all.len(), 72);
        assert!(all.iter().all(|v| v.within_bounds()));
    }
}

#[test]
fn set_totals() {
    let c = q(1, 6);
    let sets = exclusive_sets(&c, Side::A).unwrap();
    assert_eq!(sets.len(), 4);
    assert!(sets.iter().all(ExclusiveSet::pairwise_exclusive));
    let z = Rational::zero();
    let one = Rational::one();
    // (1+c)/2 + 1/3 + α
    assert_eq!(sets[0].total, Affine { constant: q(7, 12) + q(1, 3), coeffs: [one.clone(), z.clone(), z.clone()] });
    assert_eq!(sets[1].total.coeffs, [z.clone(), one.clone(), z.clone()]);
    assert_eq!(sets[2].total.coeffs, [z.clone(), z.clone(), one.clone()]);
    // 3(1−c)/2 − (α+β+γ)
    assert_eq!(sets[3].total, Affine { constant: q(5, 4), coeffs: [-one.clone(), -one.clone(), -one] });
    assert_eq!(format!("{}", sets[3].total), "5/4 - alpha - beta - gamma");
    let s = extended_scenario();
    assert_eq!(s.format_event(&sets[0].events[2]), "(00|A1,A2)");
    assert!(exclusive_sets(&c, Side::B).unwrap().iter().all(ExclusiveSet::pairwise_exclusive));
}

#[test]
fn totals_match_extended_box() {
    let c = q(1, 6);
    let (a, b, g) = (q(1, 24), q(1, 12), q(1, 30));
    let gm = gm_box(&c).unwrap();
    let ea = GmSideExtension::new(Side::A, a.clone(), b.clone(), g.clone(), c.clone()).unwrap();
    let eb = GmSideExtension::new(Side::B, a.clone(), b.clone(), g.clone(), c.clone()).unwrap();
    let ext = gm.extended(&ea, &eb).unwrap();
    assert!(check_no_disturbance(&ext).passes());
    for side in [Side::A, Side::B] {
        for set in exclusive_sets(&c, side).unwrap() {
            let direct: Rational = set.events.iter().map(|e| ext.event_probability(e).unwrap()).sum();
            assert_eq!(direct, set.total.eval([&a, &b, &g]), "{}", set.name);
        }
    }
    assert!(gm.extended(&eb, &ea).is_err());
}

#[test]
fn bounds() {
    let d = derive_bounds(&q(1, 6), Side::A).unwrap();
    for (k, b) in d.upper.iter().enumerate() {
        assert_eq!(b.kind, BoundKind::Upper(k));
        assert_eq!(b.value, q(1, 12));
    }
    assert_eq!(d.lower.kind, BoundKind::LowerSum);
    assert_eq!(d.lower.value, q(1, 4));
    assert_eq!(d.forced_point(), Some([q(1, 12), q(1, 12), q(1, 12)]));

    let d = derive_bounds(&q(1, 3), Side::B).unwrap();
    assert_eq!(d.forced_point(), Some([Rational::zero(), Rational::zero(), Rational::zero()]));
}

#[test]
fn side_extension_range() {
    let c = q(1, 6);
    assert!(GmSideExtension::new(Side::A, q(5, 12), q(0, 1), q(0, 1), c.clone()).is_ok());
    assert!(GmSideExtension::new(Side::A, q(1, 2), q(0, 1), q(0, 1), c.clone()).is_err());
    assert!(GmSideExtension::new(Side::A, q(-1, 12), q(0, 1), q(0, 1), c).is_err());
}

#[test]
fn certificate_at_one_sixth() {
    let cert = certify_unphysicality(&q(1, 6)).unwrap();
    assert_eq!(cert.forced_point, [q(1, 12), q(1, 12), q(1, 12)]);
    assert!(cert.fine_check.all_satisfied());
    assert!(!cert.lhv_witness.result.is_feasible());
    assert!(cert.verify());
}

#[test]
fn certificate_at_boundary() {
    let cert = certify_unphysicality(&q(1, 3)).unwrap();
    assert_eq!(cert.forced_point, [Rational::zero(), Rational::zero(), Rational::zero()]);
    assert!(cert.verify());
}

#[test]
fn tampered_certificates_fail() {
    let cert = certify_unphysicality(&q(1, 6)).unwrap();

    let mut bad = cert.clone();
    bad.forced_point[0] = q(1, 13);
    assert!(!bad.verify());

    let mut bad = cert.clone();
    bad.c = q(1, 5);
    assert!(!bad.verify());

    let mut bad = cert.clone();
    bad.bounds.upper[1].witness.events.swap(0, 1);
    bad.bounds.upper[1].witness.events[0] = bad.bounds.upper[1].witness.events[1].clone();
    assert!(!bad.verify());

    let mut bad = cert.clone();
    if let crate::marginal::FeasibilityResult::Infeasible { farkas } = &mut bad.lhv_witness.result {
        for y in farkas.iter_mut() {
            *y = -y.clone();
        }
    }
    assert!(!bad.verify());
}

#[test]
fn lhv_infeasible_on_grid() {
    for c in c_grid(4) {
        let g = gm_box(&c).unwrap();
        let ext = global_extension(g.pbox()).unwrap();
        assert!(!ext.result.is_feasible());
        assert!(verify_certificate(&ext.result, &ext.problem).unwrap());
    }
}

#[test]
fn grid() {
    assert_eq!(c_grid(3), vec![q(1, 9), q(2, 9), q(1, 3)]);
}
