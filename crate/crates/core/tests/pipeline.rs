use std::time::Instant;

use frobx_core::adjunction::{build_balanced_tensor, check_triangle_identities, counit_epsilon, unit_eta, TensorSide};
use frobx_core::examples::{nilcoxeter_fixture, non_projective_fixture, symmetric_fixture, trivial_fixture, Fixture};
use frobx_core::extension::{
    check_bil_form, check_left_trace, check_right_trace, is_twisted_frobenius, left_to_right, nakayama_explicit,
    nakayama_isomorphism, SearchOptions, Stage, Verdict,
};

fn certify(fx: &Fixture) -> frobx_core::ExtensionCertificate {
    match is_twisted_frobenius(&fx.ext, Some(&fx.trace.map), SearchOptions::default()) {
        Verdict::Certified { certificate, .. } => *certificate,
        other => panic!("{} not certified: {other:?}", fx.name),
    }
}

#[test]
fn nilcoxeter_extensions_certify() {
    for (m, n) in [(1, 2), (2, 3), (1, 3), (0, 1)] {
        let fx = nilcoxeter_fixture(m, n).unwrap();
        let cert = certify(&fx);
        assert!(cert.verify().unwrap().holds());
    }
}

#[test]
fn nilcoxeter_three_four_certifies_in_time() {
    let start = Instant::now();
    let fx = nilcoxeter_fixture(3, 4).unwrap();
    let cert = certify(&fx);
    assert_eq!(cert.dual.x.len(), 4);
    eprintln!("certify (3,4): {:?}", start.elapsed());
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn symmetric_extension_certifies_with_all_side_checks() {
    let fx = symmetric_fixture(2, 3).unwrap();
    let cert = certify(&fx);
    let tr = &cert.trace.map;
    let right = left_to_right(&fx.ext, &cert.trace).unwrap();
    assert!(check_right_trace(&fx.ext, &right.map).unwrap().passes());
    assert!(check_bil_form(&fx.ext, tr).unwrap());
    let iso = nakayama_isomorphism(&fx.ext, tr).unwrap();
    assert!(iso.holds(), "{iso:?}");
    assert!(nakayama_explicit(&fx.ext, tr, &cert.dual).unwrap().holds());
    assert!(counit_epsilon(&fx.ext, tr).holds());
    assert!(unit_eta(&fx.ext, &cert.dual).is_bimodule_map());
    assert!(check_triangle_identities(&fx.ext, tr, &cert.dual).unwrap().holds());
}

#[test]
fn non_projective_pair_is_refuted_at_l1() {
    let fx = non_projective_fixture().unwrap();
    match is_twisted_frobenius(&fx.ext, Some(&fx.trace.map), SearchOptions::default()) {
        Verdict::Refuted { stage, .. } => assert_eq!(stage, Stage::L1),
        other => panic!("expected refutation, got {other:?}"),
    }
}

#[test]
fn trace_scan_finds_a_trace_without_a_hint() {
    let fx = nilcoxeter_fixture(2, 3).unwrap();
    match is_twisted_frobenius(&fx.ext, None, SearchOptions::default()) {
        Verdict::Certified { certificate, candidates_tried } => {
            assert!(candidates_tried >= 1);
            assert!(check_left_trace(&fx.ext, &certificate.trace.map).unwrap().passes());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn tensor_dimensions_match_free_rank() {
    let fx = nilcoxeter_fixture(2, 3).unwrap();
    assert_eq!(build_balanced_tensor(&fx.ext, TensorSide::One).dimension(), 3 * 6);
    let triv = trivial_fixture(&frobx_core::examples::nilcoxeter(3).unwrap());
    assert_eq!(build_balanced_tensor(&triv.ext, TensorSide::One).dimension(), 6);
}
