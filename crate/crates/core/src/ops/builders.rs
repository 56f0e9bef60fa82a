//! Operators of the Hodge/Kontsevich-Witten correspondence, emitted only as far
//! as they can act within a truncation.

use num_traits::Zero;

use super::operator::{DiffOperator, OpKey};
use super::poly::{Alphabet, TruncationSpec};
use crate::bivariate::{series_q, series_qb};
use crate::error::{Error, Result};
use crate::exact::{b_sequence, bernoulli_tilde, c_sequence, double_factorial_rational, frac, int, Rational};

fn top_index(alphabet: Alphabet, trunc: &TruncationSpec) -> u32 {
    trunc.index_bound(alphabet).unwrap_or(0)
}

fn check_weights(op: &DiffOperator, allowed: &[i64], what: &str) -> Result<()> {
    match op.weights().into_iter().find(|w| !allowed.contains(w)) {
        Some(w) => Err(Error::Consistency(format!("{what} has a term of weight {w}, expected {allowed:?}"))),
        None => Ok(()),
    }
}

/// X_m = sum_{k>=1} (k+m) q_k d/dq_{k+m}, m >= 1.
pub fn build_xm(m: u32, trunc: &TruncationSpec) -> Result<DiffOperator> {
    if m == 0 {
        return Err(Error::InvalidArgument("X_m needs m >= 1".into()));
    }
    let top = top_index(Alphabet::Q, trunc);
    let mut op = DiffOperator::zero(Alphabet::Q);
    for k in 1..=top.saturating_sub(m) {
        op.add_term(OpKey::new(0, &[(k, 1)], &[k + m]), int((k + m) as i64));
    }
    Ok(op.prune(trunc))
}

/// Y_m = (1/2) sum_{a+b=m} ab d^2/dq_a dq_b over ordered pairs.
pub fn build_ym(m: u32, trunc: &TruncationSpec) -> Result<DiffOperator> {
    if m == 0 {
        return Err(Error::InvalidArgument("Y_m needs m >= 1".into()));
    }
    let mut op = DiffOperator::zero(Alphabet::Q);
    for a in 1..m {
        let b = m - a;
        op.add_term(OpKey::new(0, &[], &[a, b]), frac((a * b) as i64, 2));
    }
    Ok(op.prune(trunc))
}

/// L_m = X_m + Y_m.
pub fn build_lm(m: u32, trunc: &TruncationSpec) -> Result<DiffOperator> {
    build_xm(m, trunc)?.add(&build_ym(m, trunc)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VirasoroPart {
    Full,
    X,
    Y,
}

/// sum_{m>=1} c_m u^{stride m} L_{stride m} (or its X / Y part), with
/// `coeffs[m-1] = c_m`; terms beyond u_max are dropped.
pub fn build_virasoro_sum(coeffs: &[Rational], stride: u32, part: VirasoroPart, trunc: &TruncationSpec) -> Result<DiffOperator> {
    let mut op = DiffOperator::zero(Alphabet::Q);
    for (n, c) in coeffs.iter().enumerate() {
        let m = stride * (n as u32 + 1);
        if m > trunc.u_max || c.is_zero() {
            continue;
        }
        let l = match part {
            VirasoroPart::Full => build_lm(m, trunc)?,
            VirasoroPart::X => build_xm(m, trunc)?,
            VirasoroPart::Y => build_ym(m, trunc)?,
        };
        op = op.add(&l.scale(c).shift_u(m))?;
    }
    let op = op.prune(trunc);
    check_weights(&op, &[0], "sum of u^m L_m")?;
    Ok(op)
}

fn bernoulli_blocks(trunc: &TruncationSpec) -> impl Iterator<Item = (u32, u32, Rational)> {
    // (k, u-power 2(2k-1), B~_k)
    let u_max = trunc.u_max;
    (1u32..).map(|k| (k, 2 * (2 * k - 1))).take_while(move |&(_, u)| u <= u_max).map(|(k, u)| (k, u, bernoulli_tilde(k as usize)))
}

/// B_t = sum_k B~_k u^{2(2k-1)} sum_i t_i d/dt_{i+2k-1}.
pub fn build_bt(trunc: &TruncationSpec) -> Result<DiffOperator> {
    let top = top_index(Alphabet::T, trunc);
    let mut op = DiffOperator::zero(Alphabet::T);
    for (k, u, bk) in bernoulli_blocks(trunc) {
        let shift = 2 * k - 1;
        for i in 0..=top.saturating_sub(shift) {
            if i + shift <= top {
                op.add_term(OpKey::new(u, &[(i, 1)], &[i + shift]), bk.clone());
            }
        }
    }
    let op = op.prune(trunc);
    check_weights(&op, &[0], "B_t")?;
    Ok(op)
}

/// P_0 = -sum_k B~_k u^{2(2k-1)} d/dt_{2k}.
pub fn build_p0(trunc: &TruncationSpec) -> Result<DiffOperator> {
    let mut op = DiffOperator::zero(Alphabet::T);
    for (k, u, bk) in bernoulli_blocks(trunc) {
        op.add_term(OpKey::new(u, &[], &[2 * k]), -bk);
    }
    let op = op.prune(trunc);
    check_weights(&op, &[-3], "P_0")?;
    Ok(op)
}

/// Q_0^W = sum_k B~_k u^{2(2k-1)} sum_{i+j=2k-2} (-1)^{i+1} d^2/dt_i dt_j.
pub fn build_q0w(trunc: &TruncationSpec) -> Result<DiffOperator> {
    let mut op = DiffOperator::zero(Alphabet::T);
    for (k, u, bk) in bernoulli_blocks(trunc) {
        for i in 0..=(2 * k - 2) {
            let j = 2 * k - 2 - i;
            let sign = if i % 2 == 0 { -1 } else { 1 };
            op.add_term(OpKey::new(u, &[], &[i, j]), &bk * int(sign));
        }
    }
    let op = op.prune(trunc);
    check_weights(&op, &[0], "Q_0^W")?;
    Ok(op)
}

/// W = B_t + Q_0^W / 2 + P_0.
pub fn build_w(trunc: &TruncationSpec) -> Result<DiffOperator> {
    build_bt(trunc)?.add(&build_q0w(trunc)?.scale(&frac(1, 2)))?.add(&build_p0(trunc)?)
}

/// P_t = -sum_{i>=1} C_i u^{2i} d/dt_{i+1}.
pub fn build_pt(trunc: &TruncationSpec) -> Result<DiffOperator> {
    let n = (trunc.u_max / 2) as usize;
    let c = c_sequence(n.max(1))?;
    let mut op = DiffOperator::zero(Alphabet::T);
    for i in 1..=n {
        op.add_term(OpKey::new(2 * i as u32, &[], &[i as u32 + 1]), -c.get(i as i64).unwrap().clone());
    }
    let op = op.prune(trunc);
    check_weights(&op, &[-3], "P_t")?;
    Ok(op)
}

/// P = -sum_{k>=1} b_{2k+1} u^{2k} d/dq_{2k+3}.
pub fn build_p(trunc: &TruncationSpec) -> Result<DiffOperator> {
    let n = (trunc.u_max / 2) as usize;
    let b = b_sequence(2 * n + 1);
    let mut op = DiffOperator::zero(Alphabet::Q);
    for k in 1..=n {
        op.add_term(OpKey::new(2 * k as u32, &[], &[2 * k as u32 + 3]), -b.get(2 * k as i64 + 1).unwrap().clone());
    }
    let op = op.prune(trunc);
    check_weights(&op, &[-3], "P")?;
    Ok(op)
}

/// Q_t^W = sum_{i,j>=0} Q^B_ij u^{2i+2j+2} d^2/dt_i dt_j over ordered pairs.
pub fn build_qtw(trunc: &TruncationSpec) -> Result<DiffOperator> {
    let mut op = DiffOperator::zero(Alphabet::T);
    if trunc.u_max < 2 {
        return Ok(op);
    }
    let cutoff = ((trunc.u_max - 2) / 2) as usize;
    let qb = series_qb(cutoff)?;
    for (i, j, c) in qb.entries() {
        let mult = if i == j { int(1) } else { int(2) };
        op.add_term(OpKey::new(2 * (i + j) as u32 + 2, &[], &[i as u32, j as u32]), c * mult);
    }
    let op = op.prune(trunc);
    check_weights(&op, &[0], "Q_t^W")?;
    Ok(op)
}

/// Q^+ = sum_{i,j>=1} Q_ij u^{i+j} ij d^2/dq_i dq_j over ordered pairs.
pub fn build_qplus(trunc: &TruncationSpec) -> Result<DiffOperator> {
    let mut op = DiffOperator::zero(Alphabet::Q);
    let cutoff = trunc.u_max as usize;
    if cutoff < 2 {
        return Ok(op);
    }
    let q = series_q(cutoff)?;
    for (i, j, c) in q.entries() {
        let mult = if i == j { 1 } else { 2 };
        op.add_term(OpKey::new((i + j) as u32, &[], &[i as u32, j as u32]), c * int((mult * i * j) as i64));
    }
    let op = op.prune(trunc);
    check_weights(&op, &[0], "Q^+")?;
    Ok(op)
}

/// Virasoro constraint operator L^_m in the t variables, m >= -1.
pub fn build_vhat(m: i64, trunc: &TruncationSpec) -> Result<DiffOperator> {
    if m < -1 {
        return Err(Error::InvalidArgument("L^_m needs m >= -1".into()));
    }
    let df = |n: i64| double_factorial_rational(n);
    let top = top_index(Alphabet::T, trunc) as i64;
    let mut op = DiffOperator::zero(Alphabet::T);
    for k in m.max(0)..=top {
        let shifted = k - m;
        if shifted > top {
            continue;
        }
        op.add_term(OpKey::new(0, &[(shifted as u32, 1)], &[k as u32]), df(2 * k + 1) / df(2 * k - 2 * m - 1));
    }
    for k in 0..m {
        let l = m - 1 - k;
        op.add_term(OpKey::new(0, &[], &[k as u32, l as u32]), df(2 * k + 1) * df(2 * l + 1) / int(2));
    }
    op.add_term(OpKey::new(0, &[], &[(m + 1) as u32]), -df(2 * m + 3));
    match m {
        -1 => op.add_term(OpKey::new(0, &[(0, 2)], &[]), frac(1, 2)),
        0 => op.add_term(OpKey::new(0, &[], &[]), frac(1, 8)),
        _ => {}
    }
    Ok(op.prune(trunc))
}

/// V~_{2m} = L_{2m} - (2m+3) d/dq_{2m+3}, m >= 1.
pub fn build_vtilde(m: u32, trunc: &TruncationSpec) -> Result<DiffOperator> {
    if m == 0 {
        return Err(Error::InvalidArgument("V~_{2m} needs m >= 1".into()));
    }
    let shift = DiffOperator::term(Alphabet::Q, -int(2 * m as i64 + 3), 0, &[], &[2 * m + 3]);
    Ok(build_lm(2 * m, trunc)?.add(&shift)?.prune(trunc))
}
