use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::{diff_vars, mul_vars, normalize_vars, Alphabet, GradedPoly, Monomial, TruncationSpec};
use crate::error::{Error, Result};
use crate::exact::{int, Rational};

/// One operator term u^u * multiplier * prod of derivatives (without coefficient).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OpKey {
    pub u: u32,
    pub multiplier: Vec<(u32, u32)>,
    pub derivs: Vec<u32>,
}

impl OpKey {
    pub fn new(u: u32, multiplier: &[(u32, u32)], derivs: &[u32]) -> Self {
        let mut derivs = derivs.to_vec();
        derivs.sort_unstable();
        Self { u, multiplier: normalize_vars(multiplier), derivs }
    }

    pub fn order(&self) -> usize {
        self.derivs.len()
    }

    /// Weight change produced by this term.
    pub fn weight(&self, alphabet: Alphabet) -> i64 {
        self.u as i64 + alphabet.vars_weight(&self.multiplier)
            - self.derivs.iter().map(|&i| alphabet.degree(i)).sum::<i64>()
    }
}

/// Differential operator with polynomial coefficients, kept as a canonical
/// map from term shape to coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator {
    alphabet: Alphabet,
    terms: BTreeMap<OpKey, Rational>,
}

impl DiffOperator {
    pub fn zero(alphabet: Alphabet) -> Self {
        Self { alphabet, terms: BTreeMap::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &OpKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, key: OpKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// c * u^u * multiplier * d/dx_{derivs...}
    pub fn term(alphabet: Alphabet, c: Rational, u: u32, multiplier: &[(u32, u32)], derivs: &[u32]) -> Self {
        let mut op = Self::zero(alphabet);
        op.add_term(OpKey::new(u, multiplier, derivs), c);
        op
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch { expected: self.alphabet.to_string(), found: other.alphabet.to_string() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    /// Multiplies every term by u^k.
    pub fn shift_u(&self, k: u32) -> Self {
        Self {
            alphabet: self.alphabet,
            terms: self.terms.iter().map(|(key, c)| (OpKey { u: key.u + k, ..key.clone() }, c.clone())).collect(),
        }
    }

    /// Drops terms that cannot act nontrivially on, or produce, polynomials within `trunc`.
    pub fn prune(&self, trunc: &TruncationSpec) -> Self {
        let a = self.alphabet;
        let keep = |k: &OpKey| {
            let fits = |i: u32| i <= trunc.index_max && a.degree(i) <= trunc.weight_max;
            k.u <= trunc.u_max
                && k.u as i64 + a.vars_weight(&k.multiplier) <= trunc.weight_max
                && k.multiplier.iter().all(|&(i, _)| fits(i))
                && k.derivs.iter().all(|&i| fits(i))
                && k.derivs.iter().map(|&i| a.degree(i)).sum::<i64>() <= trunc.weight_max
        };
        Self {
            alphabet: a,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(OpKey::order).max().unwrap_or(0)
    }

    /// Set of distinct weights of the terms.
    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.terms.keys().map(|k| k.weight(self.alphabet)).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Single application, truncated to `p.trunc()`.
    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        if self.alphabet != p.alphabet() {
            return Err(Error::AlphabetMismatch { expected: self.alphabet.to_string(), found: p.alphabet().to_string() });
        }
        let trunc = p.trunc();
        let a = self.alphabet;
        let mut out = GradedPoly::zero(a, trunc);
        for (m, c) in p.terms() {
            let wm = a.weight(m);
            for (k, kc) in &self.terms {
                if m.u + k.u > trunc.u_max || wm + k.weight(a) > trunc.weight_max {
                    continue;
                }
                let mut vars = m.vars.clone();
                let mut factor: u64 = 1;
                let mut alive = true;
                for &i in &k.derivs {
                    match diff_vars(&vars, i) {
                        Some((e, v)) => {
                            factor *= e as u64;
                            vars = v;
                        }
                        None => {
                            alive = false;
                            break;
                        }
                    }
                }
                if !alive {
                    continue;
                }
                let mono = Monomial { u: m.u + k.u, vars: mul_vars(&vars, &k.multiplier) };
                out.add_term(mono, c * kc * int(factor as i64));
            }
        }
        Ok(out)
    }

    /// sum_n D^n p / n!, which is finite because every term carries u.
    pub fn exp_apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        if self.terms.keys().any(|k| k.u == 0) {
            return Err(Error::NotNilpotent);
        }
        let mut total = p.clone();
        let mut cur = p.clone();
        for n in 1..=p.trunc().u_max {
            cur = self.apply(&cur)?.scale(&int(n as i64).recip());
            if cur.is_zero() {
                break;
            }
            total = total.add(&cur)?;
        }
        Ok(total)
    }

    /// Operator product self * other (other acts first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.alphabet);
        for (ka, ca) in &self.terms {
            let r = ka.derivs.len();
            for (kb, cb) in &other.terms {
                // Leibniz: each subset of ka's derivatives hits kb's multiplier
                for mask in 0u32..(1 << r) {
                    let mut mult = kb.multiplier.clone();
                    let mut factor: u64 = 1;
                    let mut alive = true;
                    let mut rest = Vec::with_capacity(r + kb.derivs.len());
                    for (pos, &i) in ka.derivs.iter().enumerate() {
                        if mask & (1 << pos) != 0 {
                            match diff_vars(&mult, i) {
                                Some((e, v)) => {
                                    factor *= e as u64;
                                    mult = v;
                                }
                                None => {
                                    alive = false;
                                    break;
                                }
                            }
                        } else {
                            rest.push(i);
                        }
                    }
                    if !alive {
                        continue;
                    }
                    rest.extend_from_slice(&kb.derivs);
                    rest.sort_unstable();
                    let key = OpKey { u: ka.u + kb.u, multiplier: mul_vars(&ka.multiplier, &mult), derivs: rest };
                    out.add_term(key, ca * cb * int(factor as i64));
                }
            }
        }
        Ok(out)
    }

    /// [self, other] = self*other - other*self.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// sum_{n>=1} (-1)^{n-1}/n! ad_self^{n-1} y, with commutators pruned to `trunc`
    /// and stopping once a nested commutator vanishes.
    pub fn zassenhaus_tail(&self, y: &Self, trunc: &TruncationSpec) -> Result<Self> {
        let mut total = Self::zero(self.alphabet);
        let mut cur = y.prune(trunc);
        let mut n = 1i64;
        let mut fact = Rational::one();
        while !cur.is_zero() {
            fact *= int(n);
            let sign = if n % 2 == 1 { 1 } else { -1 };
            total = total.add(&cur.scale(&(int(sign) / &fact)))?;
            cur = self.commutator(&cur)?.prune(trunc);
            n += 1;
            if n > 4 * trunc.u_max as i64 + 8 {
                return Err(Error::NotNilpotent);
            }
        }
        Ok(total)
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let a = self.alphabet;
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            let m = Monomial { u: k.u, vars: k.multiplier.clone() };
            if !m.is_one() {
                write!(f, " {}", m.display(a))?;
            }
            for &i in &k.derivs {
                write!(f, " d/d{a}{i}")?;
            }
        }
        Ok(())
    }
}
