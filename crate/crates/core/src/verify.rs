//! Named verification suites. Each returns a [`Report`] listing every mismatch.

use std::time::Instant;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bivariate::{check_double_factorial_link, eta_pde_residuals, series_q, series_q_via_h, series_t, series_t_closed_form};
use crate::error::{Error, Result};
use crate::exact::{c_sequence, double_factorial_rational, int, Rational};
use crate::ops::{
    build_bt, build_pt, build_qplus, build_qtw, build_virasoro_sum, build_w, lowering_generator, odd_substitution,
    phi_polynomials, phi_substitution, quadratic_generator, xi_map, Alphabet, GradedPoly, Monomial,
    TruncationSpec, VirasoroPart,
};
use crate::report::{Report, Window};
use crate::series::{
    apply_d, apply_derivation_exp, d_power_z, series_eta1, series_f, series_h, series_psi, series_theta, series_v,
    series_w, virasoro_a, DerivationCoeffs, LaurentSeries, Point,
};
use crate::tau::{verify_corollary2, verify_theorem1, verify_virasoro, EndToEnd};

pub const SUITES: &[&str] = &[
    "lemma-c",
    "lemma5",
    "functional",
    "prop-quadratic",
    "zassenhaus-w",
    "zassenhaus-l",
    "prop-p4",
    "thm1",
    "cor2",
    "virasoro",
    "eta-pde",
    "xi-iso",
    "stability",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub u_max: u32,
    pub weight_max: i64,
    pub order: usize,
    pub seed: u64,
    pub margin_extra: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { u_max: 4, weight_max: 9, order: 12, seed: 0, margin_extra: 0 }
    }
}

/// Runs one suite by name; `timed` records wall-clock seconds in the report.
pub fn run_suite(name: &str, cfg: &SuiteConfig, timed: bool) -> Result<Report> {
    let start = Instant::now();
    let mut report = match name {
        "lemma-c" => lemma_c(cfg.order.max(1)),
        "lemma5" => lemma5(5),
        "functional" => functional(cfg.order),
        "prop-quadratic" => prop_quadratic(4),
        "zassenhaus-w" => zassenhaus_w(cfg.u_max, cfg.weight_max, cfg.seed, 20),
        "zassenhaus-l" => zassenhaus_l(cfg.u_max, cfg.weight_max, cfg.seed, 20),
        "prop-p4" => prop_p4(),
        "thm1" => verify_theorem1(cfg.u_max, cfg.weight_max, cfg.margin_extra),
        "cor2" => verify_corollary2(cfg.u_max, cfg.weight_max, cfg.margin_extra),
        "virasoro" => verify_virasoro(TruncationSpec::for_window(cfg.u_max, cfg.weight_max, cfg.margin_extra).weight_max),
        "eta-pde" => eta_pde(cfg.order.max(2)),
        "xi-iso" => xi_iso(cfg.seed, 12),
        "stability" => stability(cfg.u_max, cfg.weight_max, cfg.margin_extra),
        other => Err(Error::InvalidArgument(format!("unknown suite '{other}'"))),
    }?;
    if timed {
        report.seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// sum_{i=0}^k (-1)^i C_i C_{k-i} = 0 for 1 <= k <= k_max.
pub fn lemma_c(k_max: usize) -> Result<Report> {
    let c = c_sequence(k_max)?;
    let mut report = Report::new("lemma-c", Window::order(k_max));
    for k in 1..=k_max as i64 {
        let mut s = Rational::zero();
        for i in 0..=k {
            let term = c.get(i).unwrap() * c.get(k - i).unwrap();
            if i % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        report.check("alternating convolution", format!("k={k}"), &s, &Rational::zero());
    }
    Ok(report)
}

fn lemma5_mismatch(a: &DerivationCoeffs, n: usize, c: &crate::exact::SequenceTable) -> Result<Vec<(i64, Rational, Rational)>> {
    let power = apply_derivation_exp(a, 2 * n as i64 + 1, 2 * n + 1)?;
    let lhs = power.plus_part()?;
    let mut rhs = LaurentSeries::zero(Point::Infinity);
    for i in 0..=n {
        rhs = rhs.add(&d_power_z(n - i)?.scale(c.get(i as i64).unwrap()))?;
    }
    let rhs = rhs.scale(&double_factorial_rational(2 * n as i64 - 1).recip());
    Ok((1..=2 * n as i64 + 1)
        .filter_map(|e| {
            let (x, y) = (lhs.coeff(e).unwrap_or_default(), rhs.coeff(e).unwrap_or_default());
            (x != y).then_some((e, x, y))
        })
        .collect())
}

/// (f^{2n+1})_+ = (1/(2n-1)!!) sum_i C_i D^{n-i} z, plus the check that
/// perturbing a_1 or a_2 breaks it.
pub fn lemma5(n_max: usize) -> Result<Report> {
    let a = virasoro_a(2 * n_max + 1)?;
    let c = c_sequence(n_max)?;
    let mut report = Report::new("lemma5", Window::order(n_max));
    for n in 0..=n_max {
        report.checked += 2 * n + 1;
        for (e, x, y) in lemma5_mismatch(&a, n, &c)? {
            report.fail("plus part of f^(2n+1)", format!("n={n} z^{e}"), x.to_string(), y.to_string());
        }
    }
    for k in 1..=2usize {
        let mut coeffs = a.coeffs().to_vec();
        coeffs[k - 1] += int(1);
        let perturbed = DerivationCoeffs::new(a.direction, coeffs);
        let mut broken = false;
        for n in 0..=n_max {
            if !lemma5_mismatch(&perturbed, n, &c)?.is_empty() {
                broken = true;
                break;
            }
        }
        report.checked += 1;
        if !broken {
            report.fail("uniqueness of a", format!("a_{k} + 1"), "identity holds".into(), "identity broken".into());
        }
    }
    Ok(report)
}

fn expect_series_zero(report: &mut Report, check: &str, r: &LaurentSeries, exps: impl IntoIterator<Item = i64>) {
    let var = if r.point() == Point::Zero { "x" } else { "z" };
    for e in exps {
        report.checked += 1;
        match r.coeff(e) {
            Some(c) if c.is_zero() => {}
            Some(c) => report.fail(check, format!("{var}^{e}"), c.to_string(), "0".into()),
            None => report.fail(check, format!("{var}^{e}"), "unknown".into(), "0".into()),
        }
    }
}

/// Residuals of the functional equations of f, v, w, h, psi, eta and theta
/// through |exponent| <= order.
pub fn functional(order: usize) -> Result<Report> {
    let k = order as i64;
    let mut report = Report::new("functional", Window::order(order));
    let f = series_f(order + 2)?;
    let r = apply_d(&f)?.sub(&f.mul(&f)?.mul(&f)?)?;
    expect_series_zero(&mut report, "D f - f^3", &r, (-k..=3).rev());

    let gauss = LaurentSeries::exact(Point::Zero, &[(2, Rational::new((-1).into(), 2.into()))])
        .truncate_local(k + 1)
        .exp()?;
    let v = series_v(order);
    let r = v.mul(&v.neg().add_scalar(&int(1))?.exp()?)?.sub(&gauss)?;
    expect_series_zero(&mut report, "v e^(1-v) - e^(-x^2/2)", &r, 0..=k);

    let w = series_w(order + 1);
    let x = LaurentSeries::var(Point::Zero);
    let r = w.derivative().mul(&w.add_scalar(&int(-1))?)?.sub(&x.mul(&w)?)?;
    expect_series_zero(&mut report, "w'(w-1) - x w", &r, 0..=k);

    // both sides carry e^{-1}; it is divided out
    let h = series_h(order)?;
    let inv = h.add_scalar(&int(1))?.inverse()?;
    let r = inv.mul(&inv.neg().add_scalar(&int(1))?.exp()?)?.sub(&gauss)?;
    expect_series_zero(&mut report, "e(1/(1+h)) e^(-1/(1+h)) - e^(-z^2/2-1)", &r, 0..=k);

    let psi = series_psi(order + 2);
    let r = LaurentSeries::compose(&psi, &series_f(order + 2)?)?.sub(&LaurentSeries::var(Point::Infinity))?;
    expect_series_zero(&mut report, "psi(f(z)) - z", &r, (-k..=1).rev());

    let r = LaurentSeries::compose(&series_h(order)?, &series_eta1(order)?)?.sub(&x)?;
    expect_series_zero(&mut report, "h(eta(1,z)) - z", &r, 0..=k);

    let theta = series_theta(order + 2)?;
    let b = crate::exact::b_sequence(2 * order + 3);
    let target = LaurentSeries::from_fn(Point::Infinity, 3, k + 4, |l| {
        if l % 2 == 0 {
            int(0)
        } else {
            b.get(l - 2).unwrap() * int(3) / int(l)
        }
    });
    let r = theta.pow_rational(-3, 1)?.sub(&target)?;
    expect_series_zero(&mut report, "theta^-3 - 3 sum b/(2k+3) z^(-2k-3)", &r, (-(k + 3)..=-3).rev());
    Ok(report)
}

/// Q^B_ij = (2i+1)!!(2j+1)!! Q_{2i+1,2j+1}, with Q and T each computed two ways.
pub fn prop_quadratic(max_sum: usize) -> Result<Report> {
    let mut report = Report::new("prop-quadratic", Window::order(max_sum));
    for c in check_double_factorial_link(max_sum)? {
        report.check("Q^B_ij vs (2i+1)!!(2j+1)!! Q", format!("({},{})", c.i, c.j), &c.qb, &c.scaled_q);
    }
    let cutoff = 2 * max_sum + 2;
    let (a, b) = (series_q(cutoff)?, series_q_via_h(cutoff)?);
    for (i, j, x) in a.entries() {
        report.check("Q two ways", format!("({i},{j})"), x, b.get(i, j).unwrap());
    }
    let (a, b) = (series_t(cutoff)?, series_t_closed_form(cutoff)?);
    for (i, j, x) in a.entries() {
        report.check("T two ways", format!("({i},{j})"), x, b.get(i, j).unwrap());
    }
    Ok(report)
}

fn sample_polys(alphabet: Alphabet, trunc: TruncationSpec, seed: u64, samples: usize) -> Vec<GradedPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| GradedPoly::random(alphabet, trunc, 8, &mut rng)).collect()
}

/// e^W p = e^{B_t} e^{Q_t^W/2} e^{P_t} p on seeded random t-polynomials.
pub fn zassenhaus_w(u_max: u32, weight_max: i64, seed: u64, samples: usize) -> Result<Report> {
    let trunc = TruncationSpec::new(u_max, weight_max, weight_max.max(0) as u32)?;
    let (w, bt, pt) = (build_w(&trunc)?, build_bt(&trunc)?, build_pt(&trunc)?);
    let half_q = build_qtw(&trunc)?.scale(&Rational::new(1.into(), 2.into()));
    let mut report = Report::new("zassenhaus-w", Window::graded(u_max, weight_max));
    for (n, p) in sample_polys(Alphabet::T, trunc, seed, samples).iter().enumerate() {
        let lhs = w.exp_apply(p)?;
        let rhs = bt.exp_apply(&half_q.exp_apply(&pt.exp_apply(p)?)?)?;
        report.compare_polys(&format!("seed {seed} sample {n}"), &lhs, &rhs, u_max, weight_max);
    }
    Ok(report)
}

/// e^{sum a L} p = e^{sum a X} e^{Q^+/2} p on seeded random q-polynomials.
pub fn zassenhaus_l(u_max: u32, weight_max: i64, seed: u64, samples: usize) -> Result<Report> {
    let trunc = TruncationSpec::new(u_max, weight_max, weight_max.max(0) as u32)?;
    let a = virasoro_a(u_max as usize)?;
    let l = build_virasoro_sum(a.coeffs(), 1, VirasoroPart::Full, &trunc)?;
    let x = build_virasoro_sum(a.coeffs(), 1, VirasoroPart::X, &trunc)?;
    let half_q = build_qplus(&trunc)?.scale(&Rational::new(1.into(), 2.into()));
    let mut report = Report::new("zassenhaus-l", Window::graded(u_max, weight_max));
    for (n, p) in sample_polys(Alphabet::Q, trunc, seed, samples).iter().enumerate() {
        let lhs = l.exp_apply(p)?;
        let rhs = x.exp_apply(&half_q.exp_apply(p)?)?;
        report.compare_polys(&format!("seed {seed} sample {n}"), &lhs, &rhs, u_max, weight_max);
    }
    Ok(report)
}

/// e^{sum a u^m X_m} (G at t_k = (2k-1)!! q_{2k+1}) = (e^{B_t} G) at t_k = phi~_k
/// for G in {t0, t1, t2, t0 t1}, and
/// e^{sum a u^m X_m} q_{2n+1} = (1/(2n-1)!!) sum_i C_i u^{2i} phi~_{n-i} for n <= 3.
pub fn prop_p4() -> Result<Report> {
    let trunc = TruncationSpec::new(9, 9, 9)?;
    let a = virasoro_a(trunc.u_max as usize)?;
    let x = build_virasoro_sum(a.coeffs(), 1, VirasoroPart::X, &trunc)?;
    let bt = build_bt(&trunc)?;
    let (odd, phi) = (odd_substitution(trunc)?, phi_substitution(trunc)?);
    let mut report = Report::new("prop-p4", Window::graded(trunc.u_max, trunc.weight_max));
    let samples: [(&str, &[(u32, u32)]); 4] = [("t0", &[(0, 1)]), ("t1", &[(1, 1)]), ("t2", &[(2, 1)]), ("t0 t1", &[(0, 1), (1, 1)])];
    for (name, vars) in samples {
        let g = GradedPoly::from_terms(Alphabet::T, trunc, [(Monomial::new(0, vars), int(1))]);
        let lhs = x.exp_apply(&odd.substitute(&g)?)?;
        let rhs = phi.substitute(&bt.exp_apply(&g)?)?;
        report.compare_polys(&format!("G = {name}"), &lhs, &rhs, trunc.u_max, trunc.weight_max);
    }
    let phis = phi_polynomials(3, trunc);
    let c = c_sequence(3)?;
    for n in 0..=3usize {
        let q = GradedPoly::var(Alphabet::Q, trunc, 2 * n as u32 + 1);
        let lhs = x.exp_apply(&q)?;
        let mut rhs = GradedPoly::zero(Alphabet::Q, trunc);
        for i in 0..=n {
            let shift = GradedPoly::from_terms(Alphabet::Q, trunc, [(Monomial::new(2 * i as u32, &[]), c.get(i as i64).unwrap().clone())]);
            rhs = rhs.add(&shift.mul(&phis[n - i])?)?;
        }
        let rhs = rhs.scale(&double_factorial_rational(2 * n as i64 - 1).recip());
        report.compare_polys(&format!("q_{}", 2 * n + 1), &lhs, &rhs, trunc.u_max, trunc.weight_max);
    }
    Ok(report)
}

/// eta(u,z) = eta1(uz)/u solves d_u eta = (sum d_{-n+1} u^{n-2} z^n) d_z eta.
pub fn eta_pde(order: usize) -> Result<Report> {
    let mut report = Report::new("eta-pde", Window::order(order));
    for (n, r) in eta_pde_residuals(order)? {
        report.check("eta PDE", format!("u^{} z^{n}", n - 2), &r, &Rational::zero());
    }
    Ok(report)
}

/// Xi([g1, g2]) = [Xi(g1), Xi(g2)] for sampled generators, compared as
/// operators and on random polynomials.
pub fn xi_iso(seed: u64, pairs: usize) -> Result<Report> {
    use rand::Rng;
    let trunc = TruncationSpec::new(0, 14, 14)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("xi-iso", Window::graded(0, trunc.weight_max));
    for n in 0..pairs {
        let g1 = lowering_generator(rng.gen_range(1..=4), rng.gen_range(1..=3));
        let g2 = if n % 3 == 2 {
            lowering_generator(rng.gen_range(1..=4), rng.gen_range(1..=3))
        } else {
            quadratic_generator(rng.gen_range(1..=4), rng.gen_range(1..=4))
        };
        let lhs = xi_map(&g1.commutator(&g2)?)?;
        let rhs = xi_map(&g1)?.commutator(&xi_map(&g2)?)?;
        report.checked += 1;
        if lhs != rhs {
            report.fail("Xi bracket", format!("[{g1}, {g2}]"), lhs.to_string(), rhs.to_string());
        }
        let p = GradedPoly::random(Alphabet::Q, trunc, 8, &mut rng);
        report.compare_polys(&format!("Xi bracket on sample {n}"), &lhs.apply(&p)?, &rhs.apply(&p)?, 0, trunc.weight_max);
    }
    Ok(report)
}

/// Every certified coefficient of both end-to-end comparisons is unchanged
/// when the margin grows by 3.
pub fn stability(u_cmp: u32, w_cmp: i64, margin_extra: i64) -> Result<Report> {
    let mut report = Report::new("stability", Window::graded(u_cmp, w_cmp));
    let sides = |margin: i64| -> Result<Vec<(String, GradedPoly)>> {
        let run = EndToEnd::new(u_cmp, w_cmp, margin)?;
        let (hl, hr) = run.hatb_sides()?;
        let win = |p: &GradedPoly| p.window(u_cmp, w_cmp);
        Ok(vec![
            ("exp F_H(u,q)".into(), win(&run.fh_q)),
            ("theorem rhs".into(), win(&run.theorem1_rhs()?)),
            ("corollary rhs".into(), win(&run.corollary2_rhs()?)),
            ("e^P exp F_K".into(), win(&hl)),
            ("e^{-sum l L} exp F_K".into(), win(&hr)),
        ])
    };
    let base = sides(margin_extra)?;
    let wider = sides(margin_extra + 3)?;
    for ((name, a), (_, b)) in base.iter().zip(&wider) {
        let widened = b.retruncate(a.trunc());
        report.compare_polys(&format!("{name}: margin {} vs {}", margin_extra, margin_extra + 3), a, &widened, u_cmp, w_cmp);
    }
    Ok(report)
}
