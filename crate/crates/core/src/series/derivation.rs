use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{LaurentSeries, Point};
use crate::error::{Error, Result};
use crate::exact::{factorial, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Φ⁻ = Σ d_k z^{1-k} ∂_z, expanded at infinity.
    Lowering,
    /// Φ⁺ = Σ d_k z^{1+k} ∂_z, expanded at zero.
    Raising,
}

impl Direction {
    pub fn point(self) -> Point {
        match self {
            Direction::Lowering => Point::Infinity,
            Direction::Raising => Point::Zero,
        }
    }
}

/// Coefficients d_1, d_2, ... of a one-variable derivation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationCoeffs {
    pub direction: Direction,
    #[serde(with = "rational_vec")]
    coeffs: Vec<Rational>,
}

mod rational_vec {
    use crate::exact::{parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

impl DerivationCoeffs {
    pub fn new(direction: Direction, coeffs: Vec<Rational>) -> Self {
        Self { direction, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// d_k for 1 <= k <= len.
    pub fn get(&self, k: usize) -> Option<&Rational> {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn with_direction(&self, direction: Direction) -> Self {
        Self { direction, coeffs: self.coeffs.clone() }
    }

    pub fn negated(&self) -> Self {
        Self { direction: self.direction, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// The first `len` coefficients.
    pub fn prefix(&self, len: usize) -> Self {
        Self { direction: self.direction, coeffs: self.coeffs.iter().take(len).cloned().collect() }
    }

    fn require(&self, terms: usize, n: i64) -> Result<()> {
        let needed = if n == 0 { 0 } else { terms.saturating_sub(1) };
        if self.coeffs.len() < needed {
            return Err(Error::InsufficientCoefficients { needed, available: self.coeffs.len() });
        }
        Ok(())
    }
}

/// e^Φ · z^n with `terms` known coefficients (z^n, z^{n∓1}, ...), by
/// iterating T_m = Φ T_{m-1} / m on the window.
pub fn apply_derivation_exp(d: &DerivationCoeffs, n: i64, terms: usize) -> Result<LaurentSeries> {
    d.require(terms, n)?;
    let point = d.direction.point();
    let l0 = point.local(n);
    if n == 0 {
        return Ok(LaurentSeries::from_fn(point, 0, terms as i64, |l| if l == 0 { int(1) } else { int(0) }));
    }
    // actual exponent of window slot i
    let exponent = |i: usize| match d.direction {
        Direction::Lowering => n - i as i64,
        Direction::Raising => n + i as i64,
    };
    let mut sum = vec![Rational::zero(); terms];
    let mut term = vec![Rational::zero(); terms];
    if terms > 0 {
        term[0] = int(1);
        sum[0] = int(1);
    }
    for m in 1..terms {
        let mut next = vec![Rational::zero(); terms];
        for (i, t) in term.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            let e = exponent(i);
            if e == 0 {
                continue;
            }
            let scaled = t * int(e);
            for k in 1..terms - i {
                let dk = &d.coeffs[k - 1];
                if !dk.is_zero() {
                    next[i + k] += &scaled * dk;
                }
            }
        }
        let inv_m = int(m as i64);
        for (s, x) in sum.iter_mut().zip(next.iter_mut()) {
            *x /= &inv_m;
            *s += &*x;
        }
        term = next;
    }
    Ok(LaurentSeries::from_local(point, l0, sum))
}

/// Same as [`apply_derivation_exp`], summed directly over compositions:
/// the coefficient of z^{n ∓ t} is Σ_m 1/m! Σ_{k_1+..+k_m = t}
/// Π_i (n ∓ k_1 ∓ .. ∓ k_{i-1}) d_{k_i}.
pub fn apply_derivation_exp_nested(d: &DerivationCoeffs, n: i64, terms: usize) -> Result<LaurentSeries> {
    d.require(terms, n)?;
    let point = d.direction.point();
    let sign = match d.direction {
        Direction::Lowering => -1,
        Direction::Raising => 1,
    };
    let mut coeffs = Vec::with_capacity(terms);
    for t in 0..terms {
        if t == 0 {
            coeffs.push(int(1));
            continue;
        }
        let mut total = Rational::zero();
        for m in 1..=t {
            let mut inner = Rational::zero();
            crate::exact::for_each_composition(t, m, &mut |parts| {
                let mut e = n;
                let mut prod = int(1);
                for &k in parts {
                    prod *= int(e) * &d.coeffs[k - 1];
                    e += sign * k as i64;
                }
                inner += prod;
            });
            total += inner / Rational::from_integer(factorial(m));
        }
        coeffs.push(total);
    }
    Ok(LaurentSeries::from_local(point, point.local(n), coeffs))
}

/// The unique d with e^Φ · z = target on the target's window.
pub fn solve_derivation_coeffs(target: &LaurentSeries, direction: Direction) -> Result<DerivationCoeffs> {
    let point = direction.point();
    if target.point() != point {
        return Err(Error::Precondition(format!("{direction:?} derivations act on series at {point:?}")));
    }
    let l0 = point.local(1);
    if target.local_start() != l0 || target.coeff(1) != Some(int(1)) {
        return Err(Error::Precondition("target must be z plus corrections".into()));
    }
    let prec = target
        .local_prec()
        .ok_or_else(|| Error::Window("solving needs a truncated target".into()))?;
    let terms = (prec - l0) as usize;
    let mut d = DerivationCoeffs::new(direction, Vec::with_capacity(terms.saturating_sub(1)));
    for k in 1..terms {
        d.coeffs.push(Rational::zero());
        let current = apply_derivation_exp(&d, 1, k + 1)?;
        let l = l0 + k as i64;
        let exp = match point {
            Point::Infinity => -l,
            Point::Zero => l,
        };
        d.coeffs[k - 1] = target.coeff(exp).unwrap() - current.coeff(exp).unwrap();
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn a2() -> DerivationCoeffs {
        DerivationCoeffs::new(Direction::Lowering, vec![frac(2, 3), frac(-1, 12)])
    }

    #[test]
    fn cube_plus_part() {
        let s = apply_derivation_exp(&a2(), 3, 3).unwrap();
        assert_eq!(s.terms(), vec![(3, int(1)), (2, int(2)), (1, frac(13, 12))]);
    }

    #[test]
    fn routes_agree() {
        let d = DerivationCoeffs::new(Direction::Raising, vec![frac(1, 2), frac(-3, 7), int(2), frac(5, 3), int(-1)]);
        for n in [-2, -1, 1, 2, 5] {
            assert_eq!(apply_derivation_exp(&d, n, 6).unwrap(), apply_derivation_exp_nested(&d, n, 6).unwrap());
            let low = d.with_direction(Direction::Lowering);
            assert_eq!(
                apply_derivation_exp(&low, n, 6).unwrap(),
                apply_derivation_exp_nested(&low, n, 6).unwrap()
            );
        }
    }

    #[test]
    fn constants_are_fixed() {
        let s = apply_derivation_exp(&a2(), 0, 3).unwrap();
        assert_eq!(s.coeff(0), Some(int(1)));
        assert!(s.coeff(-1).unwrap().is_zero());
        // n = 0 needs no coefficients at all
        let empty = DerivationCoeffs::new(Direction::Lowering, vec![]);
        assert!(apply_derivation_exp(&empty, 0, 5).is_ok());
    }

    #[test]
    fn insufficient_length() {
        assert_eq!(
            apply_derivation_exp(&a2(), 1, 5).unwrap_err(),
            Error::InsufficientCoefficients { needed: 4, available: 2 }
        );
    }

    #[test]
    fn solve_identity_target() {
        let z = LaurentSeries::var(Point::Infinity).truncate_order(4);
        let d = solve_derivation_coeffs(&z, Direction::Lowering).unwrap();
        assert_eq!(d.len(), 5);
        assert!(d.coeffs().iter().all(Zero::is_zero));
        let bad = LaurentSeries::at_infinity(1, vec![int(2), int(1)]);
        assert!(solve_derivation_coeffs(&bad, Direction::Lowering).is_err());
    }
}
