//! Truncated one-variable Laurent series with explicit precision.
//!
//! A series is stored in its *local parameter*: `s = z` for expansions at
//! zero and `s = 1/z` for expansions at infinity. Coefficients are known on
//! the local exponents `start .. prec`; everything at or past `prec` is
//! unknown (not zero). Exact (finite) series carry no `prec`.

mod derivation;
mod named;

pub use derivation::{
    apply_derivation_exp, apply_derivation_exp_nested, solve_derivation_coeffs, DerivationCoeffs, Direction,
};
pub use named::{
    apply_d, d_power_z, series_eta1, series_f, series_h, series_psi, series_stirling, series_theta,
    series_theta_of_f, series_v, series_w, virasoro_a, virasoro_e,
};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};

/// Where the expansion is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Point {
    /// Laurent series in 1/z, highest exponent first (f, psi, theta, ...).
    Infinity,
    /// Power series around 0 (v, w, h, eta, ...).
    Zero,
}

impl Point {
    fn local(self, exponent: i64) -> i64 {
        match self {
            Point::Zero => exponent,
            Point::Infinity => -exponent,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    point: Point,
    start: i64,
    coeffs: Vec<Rational>,
    prec: Option<i64>,
}

impl LaurentSeries {
    fn from_parts(point: Point, start: i64, coeffs: Vec<Rational>, prec: Option<i64>) -> Self {
        if let Some(p) = prec {
            debug_assert_eq!(start + coeffs.len() as i64, p);
        }
        let mut s = Self { point, start, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.prec.is_none() {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
            if self.coeffs.is_empty() {
                self.start = 0;
            }
        }
    }

    /// Exact finite sum of `(exponent, coefficient)` terms.
    pub fn exact(point: Point, terms: &[(i64, Rational)]) -> Self {
        if terms.is_empty() {
            return Self::zero(point);
        }
        let locals: Vec<i64> = terms.iter().map(|(e, _)| point.local(*e)).collect();
        let lo = *locals.iter().min().unwrap();
        let hi = *locals.iter().max().unwrap();
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (l, (_, c)) in locals.iter().zip(terms) {
            coeffs[(l - lo) as usize] += c;
        }
        Self::from_parts(point, lo, coeffs, None)
    }

    pub fn zero(point: Point) -> Self {
        Self { point, start: 0, coeffs: Vec::new(), prec: None }
    }

    pub fn one(point: Point) -> Self {
        Self::monomial(point, 0, int(1))
    }

    pub fn monomial(point: Point, exponent: i64, coeff: Rational) -> Self {
        Self::from_parts(point, point.local(exponent), vec![coeff], None)
    }

    /// The coordinate itself (`z`).
    pub fn var(point: Point) -> Self {
        Self::monomial(point, 1, int(1))
    }

    /// Truncated series from coefficients listed by increasing local
    /// exponent starting at `start`: for `Point::Infinity` that is
    /// descending actual exponent starting at `-start`.
    pub fn from_local(point: Point, start: i64, coeffs: Vec<Rational>) -> Self {
        let prec = start + coeffs.len() as i64;
        Self::from_parts(point, start, coeffs, Some(prec))
    }

    /// `z^top + ...` style constructor at infinity: `coeffs[i]` multiplies
    /// `z^(top - i)`.
    pub fn at_infinity(top: i64, coeffs: Vec<Rational>) -> Self {
        Self::from_local(Point::Infinity, -top, coeffs)
    }

    /// Power series `sum coeffs[i] x^(valuation + i)` known through the last
    /// listed exponent.
    pub fn at_zero(valuation: i64, coeffs: Vec<Rational>) -> Self {
        Self::from_local(Point::Zero, valuation, coeffs)
    }

    /// Truncated series whose local coefficients on `start..prec` come from `f`.
    pub fn from_fn(point: Point, start: i64, prec: i64, mut f: impl FnMut(i64) -> Rational) -> Self {
        let coeffs = (start..prec.max(start)).map(&mut f).collect();
        Self::from_parts(point, start, coeffs, Some(prec.max(start)))
    }

    pub fn point(&self) -> Point {
        self.point
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Lowest local exponent with a stored coefficient.
    pub fn local_start(&self) -> i64 {
        self.start
    }

    /// First unknown local exponent (`None` for exact series).
    pub fn local_prec(&self) -> Option<i64> {
        self.prec
    }

    /// Highest actual exponent carrying a stored coefficient.
    pub fn top(&self) -> i64 {
        match self.point {
            Point::Infinity => -self.start,
            Point::Zero => self.start + self.coeffs.len() as i64 - 1,
        }
    }

    /// Number of consecutive stored coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    fn local_coeff(&self, l: i64) -> Rational {
        if l < self.start {
            return Rational::zero();
        }
        self.coeffs.get((l - self.start) as usize).cloned().unwrap_or_else(|| {
            debug_assert!(self.prec.is_none(), "read past the known window");
            Rational::zero()
        })
    }

    fn knows_local(&self, l: i64) -> bool {
        self.prec.is_none_or(|p| l < p)
    }

    /// Coefficient of `z^exponent`, or `None` when it lies outside the
    /// known window.
    pub fn coeff(&self, exponent: i64) -> Option<Rational> {
        let l = self.point.local(exponent);
        self.knows_local(l).then(|| self.local_coeff(l))
    }

    /// `(exponent, coefficient)` over the stored window, highest exponent
    /// first.
    pub fn terms(&self) -> Vec<(i64, Rational)> {
        let mut out: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (self.point.local(self.start + i as i64), c.clone()))
            .collect();
        out.sort_by(|a, b| b.0.cmp(&a.0));
        out
    }

    /// True when every known coefficient vanishes.
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Keeps only local exponents below `prec`.
    pub fn truncate_local(&self, prec: i64) -> Self {
        let prec = match self.prec {
            Some(p) => p.min(prec),
            None => prec,
        };
        Self::from_fn(self.point, self.start.min(prec), prec, |l| self.local_coeff(l))
    }

    /// Exact through `|exponent| <= order` on the truncated side.
    pub fn truncate_order(&self, order: usize) -> Self {
        self.truncate_local(order as i64 + 1)
    }

    fn check_point(&self, other: &Self) -> Result<()> {
        if self.point != other.point {
            return Err(Error::Precondition(format!(
                "series expanded at different points ({:?} vs {:?})",
                self.point, other.point
            )));
        }
        Ok(())
    }

    fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_point(other)?;
        let prec = Self::min_prec(self.prec, other.prec);
        let start = self.start.min(other.start);
        let end = match prec {
            Some(p) => p,
            None => (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64),
        };
        let start = start.min(end);
        let coeffs = (start..end).map(|l| self.local_coeff(l) + other.local_coeff(l)).collect();
        Ok(Self::from_parts(self.point, start, coeffs, prec))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::from_parts(self.point, self.start, coeffs, self.prec)
    }

    pub fn add_scalar(&self, c: &Rational) -> Result<Self> {
        self.add(&Self::monomial(self.point, 0, c.clone()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_point(other)?;
        let start = self.start + other.start;
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            (Some(pa), None) => Some(pa + other.start),
            (None, Some(pb)) => Some(self.start + pb),
            (Some(pa), Some(pb)) => Some((pa + other.start).min(self.start + pb)),
        };
        let len = match prec {
            Some(p) => (p - start).max(0) as usize,
            None if self.coeffs.is_empty() || other.coeffs.is_empty() => 0,
            None => self.coeffs.len() + other.coeffs.len() - 1,
        };
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self::from_parts(self.point, start, coeffs, prec))
    }

    /// Multiplies by `z^k`.
    pub fn mul_var_power(&self, k: i64) -> Self {
        let shift = self.point.local(k);
        Self { start: self.start + shift, prec: self.prec.map(|p| p + shift), ..self.clone() }
    }

    /// d/dz in the actual coordinate.
    pub fn derivative(&self) -> Self {
        let (shift, sign) = match self.point {
            Point::Zero => (-1, 1),
            Point::Infinity => (1, -1),
        };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * int(sign * (self.start + i as i64)))
            .collect();
        Self::from_parts(self.point, self.start + shift, coeffs, self.prec.map(|p| p + shift))
    }

    fn require_truncated(&self, what: &str) -> Result<i64> {
        self.prec
            .ok_or_else(|| Error::Window(format!("{what} of an exact series has no finite window; truncate first")))
    }

    fn leading(&self, what: &str) -> Result<Rational> {
        self.coeffs
            .first()
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("{what}: no known nonzero leading coefficient")))
    }

    /// Multiplicative inverse; needs a nonzero leading coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self.leading("inverse")?;
        if self.prec.is_none() {
            if self.coeffs.len() == 1 {
                return Ok(Self::from_parts(self.point, -self.start, vec![lead.recip()], None));
            }
            self.require_truncated("inverse")?;
        }
        let k = self.coeffs.len();
        let inv_lead = lead.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(k);
        out.push(inv_lead.clone());
        for n in 1..k {
            let mut acc = Rational::zero();
            for j in 1..=n {
                acc += &self.coeffs[j] * &out[n - j];
            }
            out.push(-acc * &inv_lead);
        }
        Ok(Self::from_local(self.point, -self.start, out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    /// exp of a series with positive local valuation.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Ok(match self.prec {
                None => Self::one(self.point),
                Some(p) if p > 0 => Self::from_fn(self.point, 0, p, |l| if l == 0 { int(1) } else { int(0) }),
                Some(p) => Self::from_fn(self.point, p, p, |_| int(0)),
            });
        }
        if self.start < 1 {
            return Err(Error::Precondition("exp needs a series without constant or polar part".into()));
        }
        let prec = self.require_truncated("exp")?;
        let n_terms = prec.max(0) as usize;
        let mut e: Vec<Rational> = Vec::with_capacity(n_terms);
        e.push(int(1));
        for n in 1..n_terms {
            let mut acc = Rational::zero();
            for k in 1..=n {
                let a = self.local_coeff(k as i64);
                if !a.is_zero() {
                    acc += a * int(k as i64) * &e[n - k];
                }
            }
            e.push(acc / int(n as i64));
        }
        Ok(Self::from_local(self.point, 0, e))
    }

    /// log of a series of the form 1 + (positive valuation).
    pub fn log(&self) -> Result<Self> {
        if self.start != 0 || !self.leading("log")?.is_one() {
            return Err(Error::Precondition("log needs a series of the form 1 + O(s)".into()));
        }
        if self.prec.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::zero(self.point));
        }
        let prec = self.require_truncated("log")?;
        let n_terms = prec as usize;
        let mut l: Vec<Rational> = vec![Rational::zero(); n_terms];
        for n in 1..n_terms {
            let mut acc = &self.coeffs[n] * int(n as i64);
            for k in 1..n {
                acc -= &l[k] * int(k as i64) * &self.coeffs[n - k];
            }
            l[n] = acc / int(n as i64);
        }
        Ok(Self::from_local(self.point, 0, l))
    }

    /// `self^(num/den)` on the branch whose leading coefficient is the
    /// positive rational root.
    pub fn pow_rational(&self, num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument("root index must be positive".into()));
        }
        let lead = self.leading("pow")?;
        if (self.start * num) % den != 0 {
            return Err(Error::Precondition(format!(
                "valuation {} is not divisible for exponent {num}/{den}",
                self.start
            )));
        }
        let lead_pow = rational_power(&lead, num, den)?;
        let start = self.start * num / den;
        if self.prec.is_none() {
            if self.coeffs.len() == 1 {
                return Ok(Self::from_parts(self.point, start, vec![lead_pow], None));
            }
            if den == 1 && num >= 0 {
                let mut acc = Self::one(self.point);
                for _ in 0..num {
                    acc = acc.mul(self)?;
                }
                return Ok(acc);
            }
            self.require_truncated("pow")?;
        }
        let k = self.coeffs.len();
        let inv_lead = lead.recip();
        let a: Vec<Rational> = self.coeffs.iter().map(|c| c * &inv_lead).collect();
        let r = Rational::new(BigInt::from(num), BigInt::from(den));
        let mut b: Vec<Rational> = Vec::with_capacity(k);
        b.push(int(1));
        for n in 1..k {
            let mut acc = Rational::zero();
            for j in 1..=n {
                if a[j].is_zero() {
                    continue;
                }
                let factor = &r * int(j as i64) - int((n - j) as i64);
                acc += factor * &a[j] * &b[n - j];
            }
            b.push(acc / int(n as i64));
        }
        let coeffs = b.into_iter().map(|c| c * &lead_pow).collect();
        Ok(Self::from_local(self.point, start, coeffs))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.pow_rational(1, 2)
    }

    pub fn nth_root(&self, n: i64) -> Result<Self> {
        self.pow_rational(1, n)
    }

    /// `outer(inner(z))`. The local parameter of `outer` evaluated at
    /// `inner` must have positive valuation in `inner`'s local parameter.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        let g = match outer.point {
            Point::Zero => inner.clone(),
            Point::Infinity => inner.inverse()?,
        };
        if g.coeffs.is_empty() || g.start < 1 {
            return Err(Error::Precondition(
                "composition needs an inner argument that is small in the outer expansion".into(),
            ));
        }
        let point = inner.point;
        let mut acc = Self::zero(point);
        let mut positive = Self::one(point);
        let mut next_positive = 0i64;
        let mut negative: Option<(Self, Self)> = None;
        for (i, c) in outer.coeffs.iter().enumerate() {
            let j = outer.start + i as i64;
            if c.is_zero() {
                continue;
            }
            let power = if j >= 0 {
                while next_positive < j {
                    positive = positive.mul(&g)?;
                    next_positive += 1;
                }
                positive.clone()
            } else {
                let (ginv, _) = negative.get_or_insert_with(|| (g.inverse().unwrap(), Self::one(point)));
                let mut p = Self::one(point);
                for _ in 0..(-j) {
                    p = p.mul(ginv)?;
                }
                p
            };
            acc = acc.add(&power.scale(c))?;
        }
        if let Some(po) = outer.prec {
            acc = acc.truncate_local(po * g.start);
        }
        Ok(acc)
    }

    /// Compositional inverse of `z + ...` (at zero: valuation 1; at
    /// infinity: top exponent 1), by Lagrange inversion.
    pub fn revert(&self) -> Result<Self> {
        match self.point {
            Point::Zero => self.revert_local(),
            Point::Infinity => {
                if self.start != -1 {
                    return Err(Error::Precondition("reversion at infinity needs top exponent 1".into()));
                }
                let local = self.inverse()?;
                let as_zero = Self { point: Point::Zero, ..local };
                let r = as_zero.revert_local()?;
                let inv = r.inverse()?;
                Ok(Self { point: Point::Infinity, ..inv })
            }
        }
    }

    fn revert_local(&self) -> Result<Self> {
        if self.start != 1 {
            return Err(Error::Precondition("reversion needs local valuation exactly 1".into()));
        }
        let prec = self.require_truncated("reversion")?;
        let k = (prec - 1) as usize;
        // s / F(s) as a unit power series
        let unit = self.mul_var_power(match self.point {
            Point::Zero => -1,
            Point::Infinity => 1,
        });
        let phi = unit.inverse()?;
        let mut coeffs = Vec::with_capacity(k);
        let mut power = Self::one(self.point);
        for n in 1..=k {
            power = power.mul(&phi)?;
            let c = power.local_coeff(n as i64 - 1) / int(n as i64);
            coeffs.push(c);
        }
        Ok(Self::from_local(self.point, 1, coeffs))
    }

    /// Projection onto positive exponents. At infinity the window must reach
    /// down to z^1; the result is an exact polynomial.
    pub fn plus_part(&self) -> Result<Self> {
        match self.point {
            Point::Infinity => {
                if !self.knows_local(-1) && self.start <= -1 {
                    return Err(Error::Window("plus part needs the window to cover z^1".into()));
                }
                let terms: Vec<(i64, Rational)> = self.terms().into_iter().filter(|(e, _)| *e >= 1).collect();
                Ok(Self::exact(Point::Infinity, &terms))
            }
            Point::Zero => {
                self.require_truncated("plus part").err().map_or(Ok(()), |_| Ok::<(), Error>(()))?;
                if self.prec.is_some() {
                    return Err(Error::Window("plus part of a truncated power series is not finite".into()));
                }
                let terms: Vec<(i64, Rational)> = self.terms().into_iter().filter(|(e, _)| *e >= 1).collect();
                Ok(Self::exact(Point::Zero, &terms))
            }
        }
    }

    /// Same coefficients read in the other expansion point (z <-> 1/z).
    pub fn relabel(&self, point: Point) -> Self {
        Self { point, ..self.clone() }
    }
}

fn rational_power(c: &Rational, num: i64, den: i64) -> Result<Rational> {
    let base = if num >= 0 { c.clone() } else { c.recip() };
    let powered = num_traits::pow(base, num.unsigned_abs() as usize);
    if den == 1 {
        return Ok(powered);
    }
    if powered.is_negative() {
        return Err(Error::Precondition("even root of a negative leading coefficient".into()));
    }
    let d = den as u32;
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.nth_root(d);
        (num_traits::pow(r.clone(), d as usize) == *x).then_some(r)
    };
    match (root(powered.numer()), root(powered.denom())) {
        (Some(p), Some(q)) => Ok(Rational::new(p, q)),
        _ => Err(Error::Precondition(format!("leading coefficient {c} has no rational root of index {den}"))),
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mono = match e {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{e}"),
            };
            match (mag.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag} {mono}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(p) = self.prec {
            let e = self.point.local(p);
            write!(f, " + O(z^{e})")?;
        }
        Ok(())
    }
}

/// Wire form: `{"point", "top", "order", "exact", "coeffs": [[exp, "p/q"], ...]}`
/// with coefficients by descending exponent.
#[derive(Debug, Serialize, Deserialize)]
struct SeriesWire {
    point: Point,
    top: i64,
    order: usize,
    #[serde(default)]
    exact: bool,
    coeffs: Vec<(i64, String)>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire {
            point: self.point,
            top: self.top(),
            order: self.order(),
            exact: self.is_exact(),
            coeffs: self.terms().into_iter().map(|(e, c)| (e, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SeriesWire::deserialize(d)?;
        let mut terms = Vec::with_capacity(w.coeffs.len());
        for (e, c) in &w.coeffs {
            terms.push((*e, crate::exact::parse_rational(c).map_err(D::Error::custom)?));
        }
        if w.exact {
            return Ok(Self::exact(w.point, &terms));
        }
        let start = match w.point {
            Point::Infinity => -w.top,
            Point::Zero => w.top - w.order as i64 + 1,
        };
        let prec = start + w.order as i64;
        let mut coeffs = vec![Rational::zero(); w.order];
        for (e, c) in terms {
            let l = w.point.local(e);
            if l < start || l >= prec {
                return Err(D::Error::custom(format!("exponent {e} outside the declared window")));
            }
            coeffs[(l - start) as usize] = c;
        }
        Ok(Self::from_local(w.point, start, coeffs))
    }
}
