use std::collections::BTreeMap;

use num_traits::Zero;

use super::operator::{DiffOperator, OpKey};
use super::poly::{Alphabet, GradedPoly, Monomial, TruncationSpec};
use crate::error::{Error, Result};
use crate::exact::{double_factorial_rational, int, Rational};

/// Replacement of every source variable by a polynomial in the target alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionMap {
    source: Alphabet,
    target: Alphabet,
    trunc: TruncationSpec,
    images: BTreeMap<u32, GradedPoly>,
}

impl SubstitutionMap {
    /// Each image must be homogeneous of the weight of the variable it replaces.
    pub fn new(source: Alphabet, images: BTreeMap<u32, GradedPoly>, trunc: TruncationSpec) -> Result<Self> {
        let target = images.values().next().map_or(Alphabet::Q, GradedPoly::alphabet);
        for (&i, img) in &images {
            if img.alphabet() != target {
                return Err(Error::AlphabetMismatch { expected: target.to_string(), found: img.alphabet().to_string() });
            }
            let w = source.degree(i);
            if let Some((m, _)) = img.terms().find(|(m, _)| target.weight(m) != w) {
                return Err(Error::InvalidArgument(format!(
                    "image of {source}{i} is not homogeneous of weight {w}: contains {}",
                    m.display(target)
                )));
            }
        }
        let images = images.into_iter().map(|(i, p)| (i, p.retruncate(trunc))).collect();
        Ok(Self { source, target, trunc, images })
    }

    pub fn source(&self) -> Alphabet {
        self.source
    }

    pub fn target(&self) -> Alphabet {
        self.target
    }

    pub fn image(&self, index: u32) -> Option<&GradedPoly> {
        self.images.get(&index)
    }

    /// p with every variable replaced, truncated to the map's truncation.
    pub fn substitute(&self, p: &GradedPoly) -> Result<GradedPoly> {
        if p.alphabet() != self.source {
            return Err(Error::AlphabetMismatch { expected: self.source.to_string(), found: p.alphabet().to_string() });
        }
        let one = GradedPoly::constant(self.target, self.trunc, int(1));
        let mut powers: BTreeMap<(u32, u32), GradedPoly> = BTreeMap::new();
        let mut out = GradedPoly::zero(self.target, self.trunc);
        for (m, c) in p.terms() {
            let mut acc = GradedPoly::from_terms(self.target, self.trunc, [(Monomial::new(m.u, &[]), c.clone())]);
            for &(i, e) in &m.vars {
                let img = self.images.get(&i).ok_or_else(|| Error::MissingImage(format!("{}{i}", self.source)))?;
                if !powers.contains_key(&(i, e)) {
                    let mut pw = one.clone();
                    for _ in 0..e {
                        pw = pw.mul(img)?;
                    }
                    powers.insert((i, e), pw);
                }
                acc = acc.mul(&powers[&(i, e)])?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

/// Coefficients alpha_j of phi_k(u, z) = sum_j alpha_j u^{2k+1-j} z^j, where
/// phi_0 = z and phi_{k+1} = (u+z)^2 z d/dz phi_k.
pub fn phi_coefficients(k: usize) -> Vec<Rational> {
    let mut alpha = vec![Rational::zero(), int(1)];
    for _ in 0..k {
        let mut next = vec![Rational::zero(); alpha.len() + 2];
        for (j, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ja = a * int(j as i64);
            next[j] += &ja;
            next[j + 1] += &ja * int(2);
            next[j + 2] += ja;
        }
        alpha = next;
    }
    alpha
}

/// phi~_k(u, q) for k <= k_max: phi_k with z^m replaced by q_m.
pub fn phi_polynomials(k_max: usize, trunc: TruncationSpec) -> Vec<GradedPoly> {
    (0..=k_max)
        .map(|k| {
            let alpha = phi_coefficients(k);
            GradedPoly::from_terms(
                Alphabet::Q,
                trunc,
                alpha.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(j, a)| {
                    (Monomial::new((2 * k + 1 - j) as u32, &[(j as u32, 1)]), a.clone())
                }),
            )
        })
        .collect()
}

/// t_k -> phi~_k(u, q) for every t_k that fits in `trunc`.
pub fn phi_substitution(trunc: TruncationSpec) -> Result<SubstitutionMap> {
    let k_max = Alphabet::T.max_index_for_weight(trunc.weight_max).unwrap_or(0);
    let images = phi_polynomials(k_max as usize, trunc).into_iter().enumerate().map(|(k, p)| (k as u32, p)).collect();
    SubstitutionMap::new(Alphabet::T, images, trunc)
}

/// t_k -> (2k-1)!! q_{2k+1} for every t_k that fits in `trunc`.
pub fn odd_substitution(trunc: TruncationSpec) -> Result<SubstitutionMap> {
    let k_max = Alphabet::T.max_index_for_weight(trunc.weight_max).unwrap_or(0);
    let images = (0..=k_max)
        .map(|k| {
            let c = double_factorial_rational(2 * k as i64 - 1);
            (k, GradedPoly::from_terms(Alphabet::Q, trunc, [(Monomial::var(2 * k + 1), c)]))
        })
        .collect();
    SubstitutionMap::new(Alphabet::T, images, trunc)
}

/// The t-operator rewritten in q under t_k = (2k-1)!! q_{2k+1}, so that
/// d/dt_k = (1/(2k-1)!!) d/dq_{2k+1}.
pub fn operator_t_to_q(op: &DiffOperator) -> Result<DiffOperator> {
    if op.alphabet() != Alphabet::T {
        return Err(Error::AlphabetMismatch { expected: "t".into(), found: op.alphabet().to_string() });
    }
    let df = |k: u32| double_factorial_rational(2 * k as i64 - 1);
    let mut out = DiffOperator::zero(Alphabet::Q);
    for (key, c) in op.terms() {
        let mut coeff = c.clone();
        let mut mult = Vec::new();
        for &(k, e) in &key.multiplier {
            for _ in 0..e {
                coeff *= df(k);
            }
            mult.push((2 * k + 1, e));
        }
        let mut derivs = Vec::new();
        for &k in &key.derivs {
            coeff /= df(k);
            derivs.push(2 * k + 1);
        }
        out.add_term(OpKey::new(key.u, &mult, &derivs), coeff);
    }
    Ok(out)
}
