//! Symmetric two-variable series: the Stirling quotient Q^B(x,y), the
//! logarithmic series Q(x,y), the quadratic generator T(x,y), and the
//! identities linking them.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{b_sequence, bernoulli_tilde, d_minus, double_factorial_rational, int, Rational};
use crate::series::{self, LaurentSeries, Point};

/// Dense bivariate polynomial stored by homogeneous degree:
/// `parts[d][i]` is the coefficient of x^i y^(d-i).
#[derive(Debug, Clone, PartialEq)]
struct Dense {
    parts: Vec<Vec<Rational>>,
}

impl Dense {
    fn zero(max_degree: usize) -> Self {
        Self { parts: (0..=max_degree).map(|d| vec![Rational::zero(); d + 1]).collect() }
    }

    fn max_degree(&self) -> usize {
        self.parts.len() - 1
    }

    fn add_term(&mut self, i: usize, j: usize, c: &Rational) {
        if let Some(part) = self.parts.get_mut(i + j) {
            part[i] += c;
        }
    }

    fn get(&self, i: usize, j: usize) -> Rational {
        self.parts.get(i + j).map_or_else(Rational::zero, |p| p[i].clone())
    }

    /// Product of homogeneous parts `a_d1 * b_d2` accumulated into `out`.
    fn mul_parts(a: &[Rational], b: &[Rational], scale: &Rational, out: &mut [Rational]) {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let xs = x * scale;
            for (k, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + k] += &xs * y;
                }
            }
        }
    }

    /// exp of a series without constant term, by the degree recurrence
    /// d E_d = sum_k k F_k E_{d-k}.
    fn exp(&self) -> Result<Self> {
        if self.parts[0].iter().any(|c| !c.is_zero()) {
            return Err(Error::Precondition("bivariate exp needs a series without constant term".into()));
        }
        let n = self.max_degree();
        let mut e = Self::zero(n);
        e.parts[0][0] = int(1);
        for d in 1..=n {
            let mut acc = vec![Rational::zero(); d + 1];
            for k in 1..=d {
                Self::mul_parts(&self.parts[k], &e.parts[d - k], &int(k as i64), &mut acc);
            }
            let inv = int(d as i64).recip();
            e.parts[d] = acc.into_iter().map(|c| c * &inv).collect();
        }
        Ok(e)
    }

    /// log(1 + self) for a series without constant term.
    fn log1p(&self) -> Result<Self> {
        if self.parts[0].iter().any(|c| !c.is_zero()) {
            return Err(Error::Precondition("bivariate log needs 1 + (no constant term)".into()));
        }
        let n = self.max_degree();
        let mut l = Self::zero(n);
        for d in 1..=n {
            let mut acc: Vec<Rational> = self.parts[d].iter().map(|c| c * int(d as i64)).collect();
            for k in 1..d {
                Self::mul_parts(&l.parts[k], &self.parts[d - k], &int(-(k as i64)), &mut acc);
            }
            let inv = int(d as i64).recip();
            l.parts[d] = acc.into_iter().map(|c| c * &inv).collect();
        }
        Ok(l)
    }
}

/// Symmetric coefficient table c_ij = c_ji for min_index <= i, j and
/// i + j <= cutoff; only i <= j is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBivariate {
    min_index: usize,
    cutoff: usize,
    coeffs: BTreeMap<(usize, usize), Rational>,
}

impl SymBivariate {
    fn from_dense(dense: &Dense, min_index: usize, cutoff: usize, what: &str) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for d in 0..=cutoff.min(dense.max_degree()) {
            for i in 0..=d {
                let j = d - i;
                let c = dense.get(i, j);
                if i < min_index || j < min_index {
                    if !c.is_zero() {
                        return Err(Error::Consistency(format!("{what}: unexpected coefficient at ({i},{j})")));
                    }
                    continue;
                }
                if i <= j {
                    if c != dense.get(j, i) {
                        return Err(Error::Consistency(format!("{what} is not symmetric at ({i},{j})")));
                    }
                    coeffs.insert((i, j), c);
                }
            }
        }
        Ok(Self { min_index, cutoff, coeffs })
    }

    pub fn min_index(&self) -> usize {
        self.min_index
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// c_ij (either order), or `None` outside the stored range.
    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        self.coeffs.get(&(i.min(j), i.max(j)))
    }

    /// Stored entries with i <= j in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }
}

#[derive(Serialize, Deserialize)]
struct SymWire {
    min_index: usize,
    cutoff: usize,
    coeffs: Vec<(usize, usize, String)>,
}

impl Serialize for SymBivariate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymWire {
            min_index: self.min_index,
            cutoff: self.cutoff,
            coeffs: self.entries().map(|(i, j, c)| (i, j, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymBivariate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SymWire::deserialize(d)?;
        let mut coeffs = BTreeMap::new();
        for (i, j, c) in w.coeffs {
            if i > j {
                return Err(D::Error::custom("entries must have i <= j"));
            }
            coeffs.insert((i, j), crate::exact::parse_rational(&c).map_err(D::Error::custom)?);
        }
        Ok(Self { min_index: w.min_index, cutoff: w.cutoff, coeffs })
    }
}

/// Q^B(x,y) = (1 - exp(sum_k B~_k (x^{2k-1} + y^{2k-1}))) / (x + y), with the
/// division done exactly degree by degree.
pub fn series_qb(cutoff: usize) -> Result<SymBivariate> {
    let n = cutoff + 1;
    let mut stirling = Dense::zero(n);
    for k in 1..=n.div_ceil(2) {
        let deg = 2 * k - 1;
        if deg > n {
            break;
        }
        let c = bernoulli_tilde(k);
        stirling.add_term(deg, 0, &c);
        stirling.add_term(0, deg, &c);
    }
    let e = stirling.exp()?;
    let mut quotient = Dense::zero(cutoff);
    for d in 1..=n {
        // h_i: coefficients of 1 - e at degree d
        let h: Vec<Rational> = e.parts[d].iter().map(|c| -c).collect();
        let q = &mut quotient.parts[d - 1];
        q[0] = h[0].clone();
        for i in 1..d {
            q[i] = &h[i] - &q[i - 1];
        }
        if h[d] != q[d - 1] {
            return Err(Error::Consistency(format!("numerator of Q^B is not divisible by x+y in degree {d}")));
        }
    }
    SymBivariate::from_dense(&quotient, 0, cutoff, "Q^B")
}

/// Q(x,y) = log(1 + sum_{i>=3} (-1)^i i b_i sum_{m=1}^{i-2} x^m y^{i-1-m}).
pub fn series_q(cutoff: usize) -> Result<SymBivariate> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument("Q(x,y) needs cutoff >= 2".into()));
    }
    let b = b_sequence(cutoff + 1);
    let mut k = Dense::zero(cutoff);
    for i in 3..=cutoff + 1 {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let c = b.get(i as i64).unwrap() * int(sign * i as i64);
        for m in 1..=i - 2 {
            k.add_term(m, i - 1 - m, &c);
        }
    }
    SymBivariate::from_dense(&k.log1p()?, 1, cutoff, "Q")
}

/// Q(x,y) recomputed from the one-variable series 1/h, using
/// (x^n - y^n) xy / (y - x) = -xy sum_{i+j=n-1} x^i y^j.
pub fn series_q_via_h(cutoff: usize) -> Result<SymBivariate> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument("Q(x,y) needs cutoff >= 2".into()));
    }
    let inv_h = series::series_h(cutoff + 1)?.inverse()?;
    let mut k = Dense::zero(cutoff);
    for n in 1..cutoff as i64 {
        let r = inv_h.coeff(n).ok_or_else(|| Error::Window("1/h window too short".into()))?;
        if r.is_zero() {
            continue;
        }
        let n = n as usize;
        for i in 0..n {
            k.add_term(i + 1, n - i, &-&r);
        }
    }
    // the constant term of 1/h cancels in the difference
    if inv_h.coeff(-1) != Some(int(1)) {
        return Err(Error::Consistency("1/h does not start with 1/z".into()));
    }
    SymBivariate::from_dense(&k.log1p()?, 1, cutoff, "Q via 1/h")
}

/// T(x,y) = sum_{n>=3} (1/2) d_{-n+1} sum_{i=1}^{n-2} x^i y^{n-1-i}.
pub fn series_t(cutoff: usize) -> Result<SymBivariate> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument("T(x,y) needs cutoff >= 2".into()));
    }
    let mut t = Dense::zero(cutoff);
    for n in 3..=cutoff + 1 {
        let c = d_minus(n) / int(2);
        for i in 1..=n - 2 {
            t.add_term(i, n - 1 - i, &c);
        }
    }
    SymBivariate::from_dense(&t, 1, cutoff, "T")
}

/// T(x,y) from its closed form xy (g(y) - g(x)) / (x - y), where
/// g(y) = (1+y)^2 log(1+y) / y^3 - 1/y^2 - 3/(2y) is a power series.
pub fn series_t_closed_form(cutoff: usize) -> Result<SymBivariate> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument("T(x,y) needs cutoff >= 2".into()));
    }
    let prec = cutoff as i64 + 3;
    let one_plus = LaurentSeries::exact(Point::Zero, &[(0, int(1)), (1, int(1))]);
    let log = one_plus.truncate_local(prec).log()?;
    let square = one_plus.mul(&one_plus)?;
    let poles = LaurentSeries::exact(Point::Zero, &[(-2, int(1)), (-1, Rational::new(3.into(), 2.into()))]);
    let g = square.mul(&log)?.mul_var_power(-3).sub(&poles)?;
    let mut t = Dense::zero(cutoff);
    // -xy sum_k g_k sum_{i+j=k-1} x^i y^j lands in degree k + 1
    for k in 1..cutoff as i64 {
        let gk = g.coeff(k).ok_or_else(|| Error::Window("g(y) window too short".into()))?;
        if gk.is_zero() {
            continue;
        }
        let k = k as usize;
        for i in 0..k {
            t.add_term(i + 1, k - i, &-&gk);
        }
    }
    if g.coeff(-1) != Some(Rational::zero()) || g.coeff(-2) != Some(Rational::zero()) {
        return Err(Error::Consistency("g(y) kept a pole".into()));
    }
    SymBivariate::from_dense(&t, 1, cutoff, "T closed form")
}

/// One checked pair of the double-factorial link.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkCheck {
    pub i: usize,
    pub j: usize,
    #[serde(with = "crate::exact::rational_str")]
    pub qb: Rational,
    /// (2i+1)!! (2j+1)!! Q_{2i+1,2j+1}
    #[serde(with = "crate::exact::rational_str")]
    pub scaled_q: Rational,
    pub passed: bool,
}

/// Q^B_ij = (2i+1)!! (2j+1)!! Q_{2i+1,2j+1} for all i <= j with i + j <= max_sum.
pub fn check_double_factorial_link(max_sum: usize) -> Result<Vec<LinkCheck>> {
    let qb = series_qb(max_sum)?;
    let q = series_q(2 * max_sum + 2)?;
    let mut out = Vec::new();
    for (i, j, lhs) in qb.entries() {
        let rhs = double_factorial_rational(2 * i as i64 + 1)
            * double_factorial_rational(2 * j as i64 + 1)
            * q.get(2 * i + 1, 2 * j + 1).unwrap();
        out.push(LinkCheck { i, j, passed: *lhs == rhs, qb: lhs.clone(), scaled_q: rhs });
    }
    Ok(out)
}

/// Residuals of d_u eta = (sum_{n>=2} d_{-n+1} u^{n-2} z^n) d_z eta for
/// eta(u,z) = eta1(uz)/u. Both sides are homogeneous: the u^{N-2} z^N
/// coefficient is (N-1) c_N - sum_{n+k-1=N} d_{-n+1} k c_k, where
/// eta1 = sum c_k z^k. Returns `(N, residual)` for 2 <= N <= order.
pub fn eta_pde_residuals(order: usize) -> Result<Vec<(usize, Rational)>> {
    let eta = series::series_eta1(order)?;
    let c = |k: usize| eta.coeff(k as i64).expect("eta1 window covers order");
    let mut out = Vec::new();
    for big_n in 2..=order {
        let mut r = c(big_n) * int(big_n as i64 - 1);
        for n in 2..=big_n {
            let k = big_n + 1 - n;
            r -= d_minus(n) * int(k as i64) * c(k);
        }
        out.push((big_n, r));
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{c_sequence, frac};

    #[test]
    fn qb_leading() {
        let qb = series_qb(4).unwrap();
        assert_eq!(qb.get(0, 0), Some(&frac(-1, 12)));
        for (i, j, c) in qb.entries() {
            assert_eq!(qb.get(j, i), Some(c));
        }
    }

    #[test]
    fn qb_diagonal_slice_matches_c() {
        // at y = 0 the quotient is (1 - e^{B(1/x)})/x = -sum_{i>=1} C_i x^{i-1}
        let qb = series_qb(5).unwrap();
        let c = c_sequence(6).unwrap();
        for i in 0..=5 {
            assert_eq!(qb.get(i, 0).unwrap(), &-c.get(i as i64 + 1).unwrap());
        }
    }

    #[test]
    fn q_two_routes() {
        let a = series_q(10).unwrap();
        let b = series_q_via_h(10).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(1, 1), Some(&frac(-1, 12)));
    }

    #[test]
    fn t_two_routes() {
        let a = series_t(9).unwrap();
        assert_eq!(a.get(1, 1), Some(&frac(1, 12)));
        assert_eq!(a, series_t_closed_form(9).unwrap());
    }

    #[test]
    fn link_holds() {
        let checks = check_double_factorial_link(4).unwrap();
        assert_eq!(checks.len(), 9);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn eta_pde() {
        assert!(eta_pde_residuals(10).unwrap().iter().all(|(_, r)| r.is_zero()));
    }

    #[test]
    fn json_roundtrip() {
        let q = series_q(5).unwrap();
        let js = serde_json::to_string(&q).unwrap();
        let back: SymBivariate = serde_json::from_str(&js).unwrap();
        assert_eq!(back, q);
        assert!(js.starts_with("{\"min_index\":1,\"cutoff\":5,\"coeffs\":[[1,1,\"-1/12\"]"));
    }

    #[test]
    fn small_cutoffs_rejected() {
        assert!(series_q(1).is_err());
        assert!(series_t(1).is_err());
    }
}
