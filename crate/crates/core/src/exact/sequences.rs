use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::rational::{frac, int, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SequenceName {
    /// Bernoulli numbers B_n.
    Bernoulli,
    /// Coefficients of v(x) = 1 + sum b_i x^i.
    B,
    /// Stirling-series coefficients C_i.
    C,
    DoubleFactorial,
}

/// Append-only table `index -> value` for `first <= index <= computed_up_to`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTable {
    pub name: SequenceName,
    first: i64,
    values: Vec<Rational>,
}

impl SequenceTable {
    pub fn new(name: SequenceName, first: i64) -> Self {
        Self { name, first, values: Vec::new() }
    }

    pub fn first_index(&self) -> i64 {
        self.first
    }

    /// Largest index with a value, or `first - 1` when empty.
    pub fn computed_up_to(&self) -> i64 {
        self.first + self.values.len() as i64 - 1
    }

    pub fn get(&self, index: i64) -> Option<&Rational> {
        if index < self.first {
            return None;
        }
        self.values.get((index - self.first) as usize)
    }

    pub fn push(&mut self, value: Rational) {
        self.values.push(value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.values.iter().enumerate().map(move |(i, v)| (self.first + i as i64, v))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

fn bernoulli_cache() -> &'static Mutex<SequenceTable> {
    static CACHE: OnceLock<Mutex<SequenceTable>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(SequenceTable::new(SequenceName::Bernoulli, 0)))
}

/// B_n from the expansion of t/(e^t - 1) (so B_1 = -1/2).
///
/// The coefficients c_n of t/(e^t - 1) are the series inverse of
/// (e^t - 1)/t = sum t^k/(k+1)!, i.e. c_n = -sum_{k=1}^n c_{n-k}/(k+1)!,
/// and B_n = n! c_n.
pub fn bernoulli(n: usize) -> Rational {
    let mut table = bernoulli_cache().lock().expect("bernoulli cache poisoned");
    while table.computed_up_to() < n as i64 {
        let m = (table.computed_up_to() + 1) as usize;
        // recover c_j = B_j / j! for the already-known entries
        let mut c_m = if m == 0 { int(1) } else { int(0) };
        let mut fact_j = BigInt::one();
        let mut cs = Vec::with_capacity(m);
        for j in 0..m {
            if j > 0 {
                fact_j *= j;
            }
            cs.push(table.get(j as i64).unwrap() / Rational::from_integer(fact_j.clone()));
        }
        let mut inv_fact = BigInt::one(); // (k+1)!
        for k in 1..=m {
            inv_fact *= k + 1;
            c_m -= &cs[m - k] / Rational::from_integer(inv_fact.clone());
        }
        table.push(c_m * Rational::from_integer(factorial(m)));
    }
    table.get(n as i64).unwrap().clone()
}

/// B_{2k} / (2k (2k-1)), the coefficients of the Stirling series
/// sum_k B_{2k}/(2k(2k-1)) z^{1-2k}.
pub fn bernoulli_tilde(k: usize) -> Rational {
    assert!(k >= 1);
    let two_k = 2 * k as i64;
    bernoulli(2 * k) / int(two_k * (two_k - 1))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// n!! with (-1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("double factorial of {n}")));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// Convenience for call sites that only ever pass n >= -1.
pub fn double_factorial_rational(n: i64) -> Rational {
    Rational::from_integer(double_factorial(n).expect("double factorial index below -1"))
}

/// b_1..b_count from (n+1) b_n = b_{n-1} - sum_{k=2}^{n-1} k b_k b_{n+1-k},
/// with b_1 = 1 and b_2 = 1/3.
pub fn b_sequence(count: usize) -> SequenceTable {
    let mut table = SequenceTable::new(SequenceName::B, 1);
    for n in 1..=count as i64 {
        let value = match n {
            1 => int(1),
            2 => frac(1, 3),
            _ => {
                let b = |i: i64| table.get(i).unwrap();
                let mut rhs = b(n - 1).clone();
                for k in 2..n {
                    rhs -= int(k) * b(k) * b(n + 1 - k);
                }
                rhs / int(n + 1)
            }
        };
        table.push(value);
    }
    table
}

/// C_0..C_count summed directly over compositions:
/// C_i = sum_{m=1}^{i} 1/m! sum_{2(k_1+..+k_m) = i+m} prod B~_{k_j}.
pub fn c_sequence_via_b3(count: usize) -> SequenceTable {
    let mut table = SequenceTable::new(SequenceName::C, 0);
    table.push(int(1));
    for i in 1..=count {
        let mut total = Rational::zero();
        for m in 1..=i {
            if (i + m) % 2 != 0 {
                continue;
            }
            let half = (i + m) / 2;
            let mut inner = Rational::zero();
            for_each_composition(half, m, &mut |parts| {
                inner += parts.iter().map(|&k| bernoulli_tilde(k)).product::<Rational>();
            });
            total += inner / Rational::from_integer(factorial(m));
        }
        table.push(total);
    }
    table
}

/// Visits every ordered tuple of `parts` positive integers summing to `total`.
pub(crate) fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(remaining: usize, slots: usize, buf: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if slots == 0 {
            if remaining == 0 {
                f(buf);
            }
            return;
        }
        if remaining < slots {
            return;
        }
        for k in 1..=remaining - (slots - 1) {
            buf.push(k);
            rec(remaining - k, slots - 1, buf, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(parts);
    rec(total, parts, &mut buf, f);
}

/// C_0..C_count, computed from the Bernoulli-product formula and checked
/// against C_i = (2i+1)!! b_{2i+1}.
pub fn c_sequence(count: usize) -> Result<SequenceTable> {
    let table = c_sequence_via_b3(count);
    let b = b_sequence(2 * count + 1);
    for (i, c) in table.iter() {
        let expected = double_factorial_rational(2 * i + 1) * b.get(2 * i + 1).unwrap();
        if *c != expected {
            return Err(Error::Consistency(format!(
                "C_{i} = {c} but (2i+1)!! b_(2i+1) = {expected}"
            )));
        }
    }
    Ok(table)
}

/// d_{-n+1} = (-1)^{n-1} 4/((n+1) n (n-1)) for n >= 2.
pub fn d_minus(n: usize) -> Rational {
    assert!(n >= 2);
    let n = n as i64;
    let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    frac(sign * 4, (n + 1) * n * (n - 1))
}
