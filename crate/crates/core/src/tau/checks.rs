use num_traits::Zero;

use super::{build_fh, fk_series, solve_fk, CorrelatorTable};
use crate::error::Result;
use crate::exact::{b_sequence, Rational};
use crate::ops::{build_p, build_vhat, build_virasoro_sum, build_vtilde, Alphabet, GradedPoly, TruncationSpec, VirasoroPart};
use crate::report::{Report, Window};
use crate::series::{solve_derivation_coeffs, series_theta, virasoro_a, virasoro_e, Direction};

/// l_1..l_count solved upward from
/// b_{2k+1} = (2k+3) sum_n 1/n! sum_{m_1+..+m_n=k} l_{m_1} prod_{j>=2} (3 + 2(m_1+..+m_{j-1})) l_{m_j}.
pub fn solve_l_from_btilde(count: usize) -> Vec<Rational> {
    let b = b_sequence(2 * count + 1);
    let mut l: Vec<Rational> = Vec::with_capacity(count);
    for k in 1..=count {
        let mut higher = Rational::zero();
        let mut fact = Rational::from_integer(1.into());
        for n in 2..=k {
            fact *= Rational::from_integer((n as i64).into());
            let mut sum = Rational::zero();
            crate::exact::for_each_composition(k, n, &mut |parts: &[usize]| {
                let mut term = l[parts[0] - 1].clone();
                let mut partial = parts[0];
                for &p in &parts[1..] {
                    term *= &l[p - 1] * Rational::from_integer((3 + 2 * partial as i64).into());
                    partial += p;
                }
                sum += term;
            });
            higher += sum / &fact;
        }
        let bt = b.get(2 * k as i64 + 1).unwrap();
        l.push(bt / Rational::from_integer((2 * k as i64 + 3).into()) - higher);
    }
    l
}

/// l_m read off theta = exp(-sum l_m z^{1-2m} d/dz) z.
pub fn l_from_theta(count: usize) -> Result<Vec<Rational>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let d = solve_derivation_coeffs(&series_theta(2 * count - 1)?, Direction::Lowering)?;
    Ok((1..=count).map(|m| -d.get(2 * m).cloned().unwrap_or_else(Rational::zero)).collect())
}

pub fn e_sequence(count: usize) -> Result<Vec<Rational>> {
    Ok(virasoro_e(count)?.coeffs().to_vec())
}

/// Shared inputs for the end-to-end comparisons at one margin.
pub struct EndToEnd {
    pub trunc: TruncationSpec,
    pub fk_q: GradedPoly,
    pub fh_q: GradedPoly,
}

impl EndToEnd {
    pub fn new(u_cmp: u32, w_cmp: i64, margin_extra: i64) -> Result<Self> {
        let trunc = TruncationSpec::for_window(u_cmp, w_cmp, margin_extra);
        let table = solve_fk(trunc.weight_max.max(3))?;
        Self::with_table(&table, trunc)
    }

    pub fn with_table(table: &CorrelatorTable, trunc: TruncationSpec) -> Result<Self> {
        let fk_q = fk_series(table, Alphabet::Q, trunc)?.exp_part;
        let (_, fh) = build_fh(table, trunc)?;
        Ok(Self { trunc, fk_q, fh_q: fh.exp_part })
    }

    /// e^{sum a_m u^m L_m} e^P exp(F_K(q)).
    pub fn theorem1_rhs(&self) -> Result<GradedPoly> {
        let a = virasoro_a(self.trunc.u_max as usize)?;
        let l = build_virasoro_sum(a.coeffs(), 1, VirasoroPart::Full, &self.trunc)?;
        l.exp_apply(&build_p(&self.trunc)?.exp_apply(&self.fk_q)?)
    }

    /// e^{sum e_m u^m L_m} exp(F_K(q)).
    pub fn corollary2_rhs(&self) -> Result<GradedPoly> {
        let e = e_sequence(self.trunc.u_max as usize)?;
        build_virasoro_sum(&e, 1, VirasoroPart::Full, &self.trunc)?.exp_apply(&self.fk_q)
    }

    /// Both sides of e^P exp(F_K) = e^{-sum l_m u^{2m} L_{2m}} exp(F_K).
    pub fn hatb_sides(&self) -> Result<(GradedPoly, GradedPoly)> {
        let lhs = build_p(&self.trunc)?.exp_apply(&self.fk_q)?;
        let l: Vec<Rational> = solve_l_from_btilde((self.trunc.u_max / 2) as usize).into_iter().map(|x| -x).collect();
        let rhs = build_virasoro_sum(&l, 2, VirasoroPart::Full, &self.trunc)?.exp_apply(&self.fk_q)?;
        Ok((lhs, rhs))
    }
}

pub fn verify_theorem1(u_cmp: u32, w_cmp: i64, margin_extra: i64) -> Result<Report> {
    let run = EndToEnd::new(u_cmp, w_cmp, margin_extra)?;
    let mut report = Report::new("thm1", Window::graded(u_cmp, w_cmp));
    report.compare_polys("exp F_H(u,q) vs e^{sum a L} e^P exp F_K(q)", &run.fh_q, &run.theorem1_rhs()?, u_cmp, w_cmp);
    Ok(report)
}

pub fn verify_corollary2(u_cmp: u32, w_cmp: i64, margin_extra: i64) -> Result<Report> {
    let run = EndToEnd::new(u_cmp, w_cmp, margin_extra)?;
    let mut report = Report::new("cor2", Window::graded(u_cmp, w_cmp));
    let (lhs, rhs) = run.hatb_sides()?;
    report.compare_polys("e^P exp F_K vs e^{-sum l u^2m L_2m} exp F_K", &lhs, &rhs, u_cmp, w_cmp);
    report.compare_polys("exp F_H(u,q) vs e^{sum e L} exp F_K(q)", &run.fh_q, &run.corollary2_rhs()?, u_cmp, w_cmp);
    Ok(report)
}

/// Residuals of L^_m exp(F_K(t)), -1 <= m <= 3, and V~_{2m} exp(F_K(q)),
/// m = 1, 2, on the weights each operator certifies.
pub fn verify_virasoro(weight_bound: i64) -> Result<Report> {
    let table = solve_fk(weight_bound)?;
    let trunc = TruncationSpec { u_max: 0, weight_max: weight_bound, index_max: weight_bound as u32 };
    let mut report = Report::new("virasoro", Window::graded(0, weight_bound));
    let fk_t = fk_series(&table, Alphabet::T, trunc)?.exp_part;
    for m in -1..=3i64 {
        let r = build_vhat(m, &trunc)?.apply(&fk_t)?;
        report.expect_zero(&format!("L^_{m} exp F_K(t)"), &r, 0, weight_bound - (2 * m + 3));
    }
    let fk_q = fk_series(&table, Alphabet::Q, trunc)?.exp_part;
    for m in 1..=2u32 {
        let r = build_vtilde(m, &trunc)?.apply(&fk_q)?;
        report.expect_zero(&format!("V~_{} exp F_K(q)", 2 * m), &r, 0, weight_bound - (2 * m as i64 + 3));
    }
    Ok(report)
}
