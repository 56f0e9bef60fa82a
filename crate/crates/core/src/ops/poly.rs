use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, parse_rational, Rational};

/// Variable family. `Q` has q_1, q_2, ... with deg q_j = j; `T` has t_0, t_1, ...
/// with deg t_k = 2k + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    Q,
    T,
}

impl Alphabet {
    pub fn first_index(self) -> u32 {
        match self {
            Alphabet::Q => 1,
            Alphabet::T => 0,
        }
    }

    pub fn degree(self, index: u32) -> i64 {
        match self {
            Alphabet::Q => index as i64,
            Alphabet::T => 2 * index as i64 + 1,
        }
    }

    pub fn weight(self, m: &Monomial) -> i64 {
        m.u as i64 + self.vars_weight(&m.vars)
    }

    pub fn vars_weight(self, vars: &[(u32, u32)]) -> i64 {
        vars.iter().map(|&(i, e)| self.degree(i) * e as i64).sum()
    }

    /// Largest index whose degree fits in `weight`.
    pub fn max_index_for_weight(self, weight: i64) -> Option<u32> {
        match self {
            Alphabet::Q if weight >= 1 => Some(weight as u32),
            Alphabet::T if weight >= 1 => Some(((weight - 1) / 2) as u32),
            _ => None,
        }
    }

    fn symbol(self) -> char {
        match self {
            Alphabet::Q => 'q',
            Alphabet::T => 't',
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub u_max: u32,
    pub weight_max: i64,
    pub index_max: u32,
}

impl TruncationSpec {
    pub fn new(u_max: u32, weight_max: i64, index_max: u32) -> Result<Self> {
        if weight_max < 0 {
            return Err(Error::InvalidArgument("weight_max must be nonnegative".into()));
        }
        Ok(Self { u_max, weight_max, index_max })
    }

    /// Bounds for certifying coefficients with u-power <= u_cmp and weight <= w_cmp:
    /// every weight-lowering operator term costs at least u^2 and lowers by 3.
    pub fn for_window(u_cmp: u32, w_cmp: i64, margin_extra: i64) -> Self {
        let weight_max = w_cmp + 3 * u_cmp.div_ceil(2) as i64 + margin_extra;
        Self { u_max: u_cmp, weight_max, index_max: weight_max.max(0) as u32 }
    }

    /// Largest index that can occur in a monomial within these bounds.
    pub fn index_bound(&self, alphabet: Alphabet) -> Option<u32> {
        alphabet.max_index_for_weight(self.weight_max).map(|i| i.min(self.index_max))
    }

    pub fn admits(&self, alphabet: Alphabet, m: &Monomial) -> bool {
        m.u <= self.u_max
            && alphabet.weight(m) <= self.weight_max
            && m.vars.last().is_none_or(|&(i, _)| i <= self.index_max)
    }
}

/// u^u times a product of variables; `vars` is sorted by index with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub u: u32,
    pub vars: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn new(u: u32, vars: &[(u32, u32)]) -> Self {
        Self { u, vars: normalize_vars(vars) }
    }

    pub fn one() -> Self {
        Self { u: 0, vars: Vec::new() }
    }

    pub fn var(index: u32) -> Self {
        Self { u: 0, vars: vec![(index, 1)] }
    }

    pub fn exponent(&self, index: u32) -> u32 {
        exponent_in(&self.vars, index)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { u: self.u + other.u, vars: mul_vars(&self.vars, &other.vars) }
    }

    pub fn is_one(&self) -> bool {
        self.u == 0 && self.vars.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|v| v.1).sum()
    }

    pub fn display(&self, alphabet: Alphabet) -> String {
        let mut parts = Vec::new();
        match self.u {
            0 => {}
            1 => parts.push("u".to_string()),
            k => parts.push(format!("u^{k}")),
        }
        for &(i, e) in &self.vars {
            if e == 1 {
                parts.push(format!("{alphabet}{i}"));
            } else {
                parts.push(format!("{alphabet}{i}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

pub(crate) fn normalize_vars(vars: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    for &(i, e) in vars {
        *map.entry(i).or_default() += e;
    }
    map.into_iter().filter(|&(_, e)| e > 0).collect()
}

pub(crate) fn exponent_in(vars: &[(u32, u32)], index: u32) -> u32 {
    vars.binary_search_by_key(&index, |v| v.0).map_or(0, |k| vars[k].1)
}

pub(crate) fn mul_vars(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Differentiates once in `index`; returns the falling factor and the new exponent vector.
pub(crate) fn diff_vars(vars: &[(u32, u32)], index: u32) -> Option<(u32, Vec<(u32, u32)>)> {
    let k = vars.binary_search_by_key(&index, |v| v.0).ok()?;
    let e = vars[k].1;
    let mut out = vars.to_vec();
    if e == 1 {
        out.remove(k);
    } else {
        out[k].1 = e - 1;
    }
    Some((e, out))
}

/// Sparse polynomial in u and one alphabet, truncated by `trunc`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedPoly {
    alphabet: Alphabet,
    trunc: TruncationSpec,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero(alphabet: Alphabet, trunc: TruncationSpec) -> Self {
        Self { alphabet, trunc, terms: BTreeMap::new() }
    }

    pub fn constant(alphabet: Alphabet, trunc: TruncationSpec, c: Rational) -> Self {
        Self::from_terms(alphabet, trunc, [(Monomial::one(), c)])
    }

    pub fn var(alphabet: Alphabet, trunc: TruncationSpec, index: u32) -> Self {
        Self::from_terms(alphabet, trunc, [(Monomial::var(index), int(1))])
    }

    /// Sums the given terms, dropping anything outside `trunc`.
    pub fn from_terms(
        alphabet: Alphabet,
        trunc: TruncationSpec,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(alphabet, trunc);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn trunc(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || !self.trunc.admits(self.alphabet, &m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch { expected: self.alphabet.to_string(), found: other.alphabet.to_string() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.alphabet, self.trunc);
        }
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(), ..self.clone() }
    }

    /// Product truncated to `self.trunc`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut out = Self::zero(self.alphabet, self.trunc);
        for (ma, ca) in &self.terms {
            let wa = self.alphabet.weight(ma);
            for (mb, cb) in &other.terms {
                if ma.u + mb.u > self.trunc.u_max || wa + self.alphabet.weight(mb) > self.trunc.weight_max {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Same terms under a different truncation (terms outside it are dropped).
    pub fn retruncate(&self, trunc: TruncationSpec) -> Self {
        Self::from_terms(self.alphabet, trunc, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Terms with u-power <= u_max and weight <= weight_max, keeping the truncation.
    pub fn window(&self, u_max: u32, weight_max: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.u <= u_max && self.alphabet.weight(m) <= weight_max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            ..self.clone()
        }
    }

    /// Terms with u-power exactly `u`, as a polynomial without u.
    pub fn u_slice(&self, u: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.u == u)
                .map(|(m, c)| (Monomial { u: 0, vars: m.vars.clone() }, c.clone()))
                .collect(),
            ..self.clone()
        }
    }

    fn by_weight(&self) -> Vec<Vec<(&Monomial, &Rational)>> {
        let mut parts = vec![Vec::new(); self.trunc.weight_max as usize + 1];
        for (m, c) in &self.terms {
            parts[self.alphabet.weight(m) as usize].push((m, c));
        }
        parts
    }

    fn accumulate(
        &self,
        out: &mut BTreeMap<Monomial, Rational>,
        a: &[(&Monomial, &Rational)],
        b: &[(Monomial, Rational)],
        scale: &Rational,
    ) {
        for (ma, ca) in a {
            let cas = *ca * scale;
            for (mb, cb) in b {
                if ma.u + mb.u > self.trunc.u_max {
                    continue;
                }
                let m = ma.mul(mb);
                if m.vars.last().is_some_and(|&(i, _)| i > self.trunc.index_max) {
                    continue;
                }
                *out.entry(m).or_insert_with(Rational::zero) += &cas * cb;
            }
        }
    }

    /// exp of a polynomial without constant term, by the weight recurrence
    /// w E_w = sum_k k F_k E_{w-k}.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Precondition("exp needs a polynomial without constant term".into()));
        }
        let f = self.by_weight();
        let wmax = self.trunc.weight_max as usize;
        let mut e: Vec<Vec<(Monomial, Rational)>> = vec![vec![(Monomial::one(), int(1))]];
        for w in 1..=wmax {
            let mut acc = BTreeMap::new();
            for k in 1..=w {
                self.accumulate(&mut acc, &f[k], &e[w - k], &int(k as i64));
            }
            let inv = int(w as i64).recip();
            e.push(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, c * &inv)).collect());
        }
        Ok(Self::from_terms(self.alphabet, self.trunc, e.into_iter().flatten()))
    }

    /// Logarithm of a polynomial with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let g = self.by_weight();
        let wmax = self.trunc.weight_max as usize;
        let mut l: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new()];
        for w in 1..=wmax {
            let mut acc: BTreeMap<Monomial, Rational> =
                g[w].iter().map(|(m, c)| ((*m).clone(), *c * int(w as i64))).collect();
            for k in 1..w {
                // L_k G_{w-k}, with the roles swapped so `accumulate` can borrow g
                self.accumulate(&mut acc, &g[w - k], &l[k], &int(-(k as i64)));
            }
            let inv = int(w as i64).recip();
            l.push(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, c * &inv)).collect());
        }
        Ok(Self::from_terms(self.alphabet, self.trunc, l.into_iter().flatten()))
    }

    /// Monomials on which this polynomial and `other` disagree, with both values.
    pub fn differences(&self, other: &Self) -> Vec<(Monomial, Rational, Rational)> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|m| {
                let (a, b) = (self.coeff(m), other.coeff(m));
                (a != b).then(|| (m.clone(), a, b))
            })
            .collect()
    }

    /// Random polynomial with `n_terms` monomials drawn from `trunc` and
    /// coefficients in -3..=3 (nonzero).
    pub fn random<R: Rng>(alphabet: Alphabet, trunc: TruncationSpec, n_terms: usize, rng: &mut R) -> Self {
        let pool = all_monomials(alphabet, trunc);
        let mut p = Self::zero(alphabet, trunc);
        if pool.is_empty() {
            return p;
        }
        for _ in 0..n_terms {
            let m = pool[rng.gen_range(0..pool.len())].clone();
            let mut c = rng.gen_range(-3i64..=2);
            if c >= 0 {
                c += 1;
            }
            p.add_term(m, int(c));
        }
        p
    }
}

/// Every monomial admitted by `trunc`, in the canonical order.
pub fn all_monomials(alphabet: Alphabet, trunc: TruncationSpec) -> Vec<Monomial> {
    fn rec(
        alphabet: Alphabet,
        idx: u32,
        top: u32,
        budget: i64,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if idx > top {
            out.push(cur.clone());
            return;
        }
        let d = alphabet.degree(idx);
        let mut e = 0;
        while d * e as i64 <= budget {
            if e > 0 {
                cur.push((idx, e));
            }
            rec(alphabet, idx + 1, top, budget - d * e as i64, cur, out);
            if e > 0 {
                cur.pop();
            }
            e += 1;
        }
    }
    let mut var_parts = Vec::new();
    if let Some(top) = trunc.index_bound(alphabet) {
        rec(alphabet, alphabet.first_index(), top, trunc.weight_max, &mut Vec::new(), &mut var_parts);
    } else {
        var_parts.push(Vec::new());
    }
    let mut out = Vec::new();
    for vars in var_parts {
        let w = alphabet.vars_weight(&vars);
        for u in 0..=trunc.u_max {
            if w + u as i64 <= trunc.weight_max {
                out.push(Monomial { u, vars: vars.clone() });
            }
        }
    }
    out.sort();
    out
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", m.display(self.alphabet))?;
            } else {
                write!(f, "{mag} {}", m.display(self.alphabet))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    u: u32,
    vars: Vec<(u32, u32)>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    alphabet: Alphabet,
    trunc: TruncationSpec,
    terms: Vec<TermWire>,
}

impl Serialize for GradedPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyWire {
            alphabet: self.alphabet,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermWire { u: m.u, vars: m.vars.clone(), coeff: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = PolyWire::deserialize(d)?;
        let mut p = GradedPoly::zero(w.alphabet, w.trunc);
        for t in w.terms {
            let m = Monomial::new(t.u, &t.vars);
            if !w.trunc.admits(w.alphabet, &m) {
                return Err(D::Error::custom(format!("term {} violates the truncation", m.display(w.alphabet))));
            }
            p.add_term(m, parse_rational(&t.coeff).map_err(D::Error::custom)?);
        }
        Ok(p)
    }
}
