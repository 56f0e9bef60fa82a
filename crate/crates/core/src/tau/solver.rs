use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{double_factorial_rational, factorial, frac, int, Rational};
use crate::ops::{all_monomials, Alphabet, GradedPoly, Monomial, TruncationSpec};

/// Which constraint fixes the coefficient of a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStrategy {
    /// Strip the largest index d and use the constraint with m = d - 1.
    LargestIndex,
    /// Strip the second-largest index when it is at least 1.
    SecondLargest,
}

/// Intersection numbers <tau_{d_1} ... tau_{d_n}> keyed by the sorted multiset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelatorTable {
    weight_bound: i64,
    #[serde(serialize_with = "ser_entries")]
    entries: BTreeMap<Vec<u32>, Rational>,
}

fn ser_entries<S: serde::Serializer>(e: &BTreeMap<Vec<u32>, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for (k, v) in e {
        seq.serialize_element(&(k, v.to_string()))?;
    }
    seq.end()
}

impl CorrelatorTable {
    pub fn weight_bound(&self) -> i64 {
        self.weight_bound
    }

    /// <tau_{d_1} ... tau_{d_n}>; zero for anything not stored.
    pub fn get(&self, ds: &[u32]) -> Rational {
        let mut key = ds.to_vec();
        key.sort_unstable();
        self.entries.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// F_K(t) = sum <...> prod t_k^{n_k}/n_k!, restricted to `trunc`.
    pub fn free_energy(&self, trunc: TruncationSpec) -> GradedPoly {
        GradedPoly::from_terms(
            Alphabet::T,
            trunc,
            self.entries.iter().map(|(ds, c)| {
                let m = multiset_to_monomial(ds);
                let denom: Rational = m.vars.iter().map(|&(_, e)| Rational::from(factorial(e as usize))).product();
                (m, c / denom)
            }),
        )
    }
}

fn multiset_to_monomial(ds: &[u32]) -> Monomial {
    Monomial::new(0, &ds.iter().map(|&d| (d, 1)).collect::<Vec<_>>())
}

fn monomial_to_multiset(m: &Monomial) -> Vec<u32> {
    m.vars.iter().flat_map(|&(i, e)| std::iter::repeat_n(i, e as usize)).collect()
}

/// Genus of the correlator when the dimension constraint sum d_i = 3g - 3 + n
/// has a stable solution.
pub fn admissible_genus(ds: &[u32]) -> Option<u32> {
    let n = ds.len() as i64;
    let s: i64 = ds.iter().map(|&d| d as i64).sum();
    let num = s - n + 3;
    if n == 0 || num < 0 || num % 3 != 0 {
        return None;
    }
    let g = num / 3;
    (2 * g - 2 + n > 0).then_some(g as u32)
}

fn remove_one(m: &Monomial, index: u32) -> Option<Monomial> {
    let k = m.vars.iter().position(|v| v.0 == index)?;
    let mut vars = m.vars.clone();
    if vars[k].1 == 1 {
        vars.remove(k);
    } else {
        vars[k].1 -= 1;
    }
    Some(Monomial { u: m.u, vars })
}

/// All (S1, S2) with S1 * S2 = S.
fn splittings(s: &Monomial) -> Vec<(Monomial, Monomial)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for &(i, e) in &s.vars {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for (a, b) in &out {
            for k in 0..=e {
                let mut a2: Vec<(u32, u32)> = a.clone();
                let mut b2: Vec<(u32, u32)> = b.clone();
                if k > 0 {
                    a2.push((i, k));
                }
                if k < e {
                    b2.push((i, e - k));
                }
                next.push((a2, b2));
            }
        }
        out = next;
    }
    out.into_iter().map(|(a, b)| (Monomial { u: 0, vars: a }, Monomial { u: 0, vars: b })).collect()
}

struct Coefficients {
    f: HashMap<Monomial, Rational>,
}

impl Coefficients {
    fn get(&self, m: &Monomial) -> Rational {
        self.f.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// [d/dt_k F] at monomial s.
    fn d1(&self, k: u32, s: &Monomial) -> Rational {
        let m = s.mul(&Monomial::var(k));
        self.get(&m) * int(m.exponent(k) as i64)
    }

    /// [d^2/dt_k dt_l F] at monomial s.
    fn d2(&self, k: u32, l: u32, s: &Monomial) -> Rational {
        let m = s.mul(&Monomial::new(0, &[(k, 1), (l, 1)]));
        let factor = if k == l {
            let e = m.exponent(k) as i64;
            e * (e - 1)
        } else {
            m.exponent(k) as i64 * m.exponent(l) as i64
        };
        self.get(&m) * int(factor)
    }
}

/// Solves for every coefficient of F_K(t) with weight <= weight_bound from the
/// constraints L^_m exp(F) = 0, m >= -1, with no seeded values.
pub fn solve_fk(weight_bound: i64) -> Result<CorrelatorTable> {
    solve_fk_with(weight_bound, SolveStrategy::LargestIndex)
}

pub fn solve_fk_with(weight_bound: i64, strategy: SolveStrategy) -> Result<CorrelatorTable> {
    if weight_bound < 3 {
        return Err(Error::InvalidArgument("weight_bound must be at least 3".into()));
    }
    let trunc = TruncationSpec { u_max: 0, weight_max: weight_bound, index_max: weight_bound as u32 };
    let mut monos = all_monomials(Alphabet::T, trunc);
    monos.retain(|m| !m.is_one());
    monos.sort_by_key(|m| (Alphabet::T.weight(m), m.clone()));
    let df = |n: i64| double_factorial_rational(n);
    let mut coeffs = Coefficients { f: HashMap::new() };
    for m in monos {
        let ds = monomial_to_multiset(&m);
        let d = match strategy {
            SolveStrategy::SecondLargest if ds.len() >= 2 && ds[ds.len() - 2] >= 1 => ds[ds.len() - 2],
            _ => *ds.last().unwrap(),
        };
        let mi = d as i64 - 1;
        let s = remove_one(&m, d).unwrap();
        let mut rhs = Rational::zero();
        // sum_k (2k+1)!!/(2k-2m-1)!! t_{k-m} d/dt_k
        for &(j, _) in &s.vars {
            let k = j as i64 + mi;
            if k < mi.max(0) {
                continue;
            }
            let rest = remove_one(&s, j).unwrap();
            rhs += df(2 * k + 1) / df(2 * k - 2 * mi - 1) * coeffs.d1(k as u32, &rest);
        }
        // (1/2) sum_{k+l=m-1} (2k+1)!!(2l+1)!! (F_kl + F_k F_l)
        for k in 0..mi.max(0) {
            let l = mi - 1 - k;
            let c = df(2 * k + 1) * df(2 * l + 1) / int(2);
            let mut inner = coeffs.d2(k as u32, l as u32, &s);
            for (s1, s2) in splittings(&s) {
                inner += coeffs.d1(k as u32, &s1) * coeffs.d1(l as u32, &s2);
            }
            rhs += c * inner;
        }
        if mi == -1 && s == Monomial::new(0, &[(0, 2)]) {
            rhs += frac(1, 2);
        }
        if mi == 0 && s.is_one() {
            rhs += frac(1, 8);
        }
        let value = rhs / (df(2 * mi + 3) * int(m.exponent(d) as i64));
        if !value.is_zero() {
            if admissible_genus(&ds).is_none() {
                return Err(Error::Consistency(format!(
                    "constraints give a nonzero coefficient to the non-admissible {}",
                    m.display(Alphabet::T)
                )));
            }
            coeffs.f.insert(m, value);
        }
    }
    let entries = coeffs
        .f
        .into_iter()
        .map(|(m, c)| {
            let mult: Rational = m.vars.iter().map(|&(_, e)| Rational::from(factorial(e as usize))).product();
            (monomial_to_multiset(&m), c * mult)
        })
        .collect();
    Ok(CorrelatorTable { weight_bound, entries })
}
