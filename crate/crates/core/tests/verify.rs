use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use taulink::exact::frac;
use taulink::ops::*;
use taulink::series::virasoro_a;
use taulink::tau::EndToEnd;
use taulink::verify::*;

#[test]
fn every_suite_passes_at_desk_scale() {
    let cfg = SuiteConfig::default();
    for name in SUITES {
        let r = run_suite(name, &cfg, false).unwrap();
        assert!(r.passed, "{name}: {:?}", &r.mismatches[..r.mismatches.len().min(5)]);
        assert!(r.checked > 0, "{name} checked nothing");
        assert!(r.seconds.is_none());
    }
    assert!(run_suite("nope", &cfg, false).is_err());
}

#[test]
fn theorem_needs_every_factor() {
    let run = EndToEnd::new(4, 9, 0).unwrap();
    let tr = run.trunc;
    let a = virasoro_a(4).unwrap();
    let l = build_virasoro_sum(a.coeffs(), 1, VirasoroPart::Full, &tr).unwrap();
    let x = build_virasoro_sum(a.coeffs(), 1, VirasoroPart::X, &tr).unwrap();
    let p = build_p(&tr).unwrap();
    let without_p = l.exp_apply(&run.fk_q).unwrap();
    let without_y = x.exp_apply(&p.exp_apply(&run.fk_q).unwrap()).unwrap();
    for wrong in [without_p, without_y] {
        assert!(!run.fh_q.window(4, 9).differences(&wrong.window(4, 9)).is_empty());
    }
    assert!(run.fh_q.window(4, 9).differences(&run.theorem1_rhs().unwrap().window(4, 9)).is_empty());
}

#[test]
fn corollary_rejects_theorem_coefficients() {
    let run = EndToEnd::new(4, 9, 0).unwrap();
    let a = virasoro_a(4).unwrap();
    let l = build_virasoro_sum(a.coeffs(), 1, VirasoroPart::Full, &run.trunc).unwrap();
    let wrong = l.exp_apply(&run.fk_q).unwrap();
    assert!(!run.fh_q.window(4, 9).differences(&wrong.window(4, 9)).is_empty());
}

#[test]
fn zassenhaus_w_needs_quadratic_part() {
    let tr = TruncationSpec::new(4, 9, 9).unwrap();
    let (w, bt, pt) = (build_w(&tr).unwrap(), build_bt(&tr).unwrap(), build_pt(&tr).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut differs = false;
    for _ in 0..20 {
        let p = GradedPoly::random(Alphabet::T, tr, 8, &mut rng);
        let wrong = bt.exp_apply(&pt.exp_apply(&p).unwrap()).unwrap();
        differs |= w.exp_apply(&p).unwrap() != wrong;
    }
    assert!(differs);
    let half = build_qtw(&tr).unwrap().scale(&frac(1, 2));
    assert!(!half.is_zero());
}

#[test]
fn report_json_shape() {
    let r = run_suite("lemma-c", &SuiteConfig { order: 3, ..SuiteConfig::default() }, false).unwrap();
    let js = serde_json::to_string(&r).unwrap();
    assert_eq!(js, r#"{"suite":"lemma-c","window":{"order":3},"checked":3,"mismatches":[],"passed":true}"#);
}

#[test]
fn suites_are_deterministic() {
    let cfg = SuiteConfig { seed: 5, ..SuiteConfig::default() };
    for name in ["zassenhaus-w", "xi-iso"] {
        assert_eq!(run_suite(name, &cfg, false).unwrap(), run_suite(name, &cfg, false).unwrap());
    }
}
