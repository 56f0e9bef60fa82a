use taulink::exact::{frac, int};
use taulink::ops::{Alphabet, Monomial, TruncationSpec};
use taulink::tau::*;

#[test]
fn first_correlators() {
    let t = solve_fk(15).unwrap();
    assert_eq!(t.get(&[0, 0, 0]), int(1));
    assert_eq!(t.get(&[1]), frac(1, 24));
    assert_eq!(t.get(&[0, 0, 0, 1]), int(1));
    assert_eq!(t.get(&[4]), frac(1, 1152));
    assert_eq!(t.get(&[1, 1]), frac(1, 24));
    for (ds, _) in t.entries() {
        assert!(admissible_genus(ds).is_some(), "{ds:?}");
    }
}

#[test]
fn strategies_agree() {
    assert_eq!(solve_fk(17).unwrap(), solve_fk_with(17, SolveStrategy::SecondLargest).unwrap());
}

#[test]
fn fk_low_terms() {
    let t = solve_fk(5).unwrap();
    let tr = TruncationSpec::new(0, 5, 5).unwrap();
    let f = fk_series(&t, Alphabet::T, tr).unwrap();
    assert_eq!(f.log_part.coeff(&Monomial::new(0, &[(0, 3)])), frac(1, 6));
    assert_eq!(f.log_part.coeff(&Monomial::new(0, &[(1, 1)])), frac(1, 24));
    assert_eq!(f.exp_part.constant_term(), int(1));
    let fq = fk_series(&t, Alphabet::Q, tr).unwrap();
    assert_eq!(fq.log_part.coeff(&Monomial::new(0, &[(1, 3)])), frac(1, 6));
    assert_eq!(fq.log_part.coeff(&Monomial::new(0, &[(3, 1)])), frac(1, 24));
    assert_eq!(fq.exp_part.log().unwrap(), fq.log_part);
    assert!(fk_series(&t, Alphabet::T, TruncationSpec::new(0, 9, 9).unwrap()).is_err());
}

#[test]
fn hodge_lambda1() {
    let tr = TruncationSpec::for_window(4, 9, 0);
    let t = solve_fk(tr.weight_max).unwrap();
    let (fh_t, fh_q) = build_fh(&t, tr).unwrap();
    assert_eq!(fh_t.log_part.coeff(&Monomial::new(2, &[(0, 1)])), frac(-1, 24));
    let fk_q = fk_series(&t, Alphabet::Q, tr).unwrap();
    assert_eq!(fh_q.log_part.u_slice(0), fk_q.log_part);
    for (m, _) in fh_t.log_part.window(4, 9).terms() {
        // weight = 2j + sum(2d+1) = 6g - 6 + 3n
        let w = Alphabet::T.weight(m);
        let n = m.degree() as i64;
        let six_g = w + 6 - 3 * n;
        assert!(six_g >= 0 && six_g % 6 == 0, "{}", m.display(Alphabet::T));
    }
}

#[test]
fn l_and_e() {
    let l = solve_l_from_btilde(4);
    assert_eq!(l[0], frac(1, 180));
    assert_eq!(l, l_from_theta(4).unwrap());
    assert_eq!(e_sequence(3).unwrap(), vec![frac(2, 3), frac(-4, 45), frac(2, 135)]);
    assert!(solve_l_from_btilde(0).is_empty());
    assert!(e_sequence(0).unwrap().is_empty());
}

#[test]
fn virasoro_residuals() {
    let r = verify_virasoro(13).unwrap();
    assert!(r.passed, "{:?}", r.mismatches);
}

#[test]
fn theorem_small_window() {
    let r = verify_theorem1(2, 5, 0).unwrap();
    assert!(r.passed, "{:?}", r.mismatches);
    let r = verify_corollary2(2, 5, 0).unwrap();
    assert!(r.passed, "{:?}", r.mismatches);
}
