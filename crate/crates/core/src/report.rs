use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::ops::{Alphabet, GradedPoly};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

impl Window {
    pub fn graded(u_max: u32, weight_max: i64) -> Self {
        Self { u_max: Some(u_max), weight_max: Some(weight_max), order: None }
    }

    pub fn order(order: usize) -> Self {
        Self { order: Some(order), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: String,
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one verification suite. Mismatches are listed exhaustively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub window: Window,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl Report {
    pub fn new(suite: &str, window: Window) -> Self {
        Self { suite: suite.into(), window, checked: 0, mismatches: Vec::new(), passed: true, seconds: None }
    }

    /// Records one scalar comparison.
    pub fn check(&mut self, check: &str, item: impl Into<String>, lhs: &Rational, rhs: &Rational) {
        self.checked += 1;
        if lhs != rhs {
            self.fail(check, item, lhs.to_string(), rhs.to_string());
        }
    }

    /// Records a failed comparison whose sides are not plain rationals.
    pub fn fail(&mut self, check: &str, item: impl Into<String>, lhs: String, rhs: String) {
        self.mismatches.push(Mismatch { check: check.into(), monomial: item.into(), lhs, rhs });
        self.passed = false;
    }

    /// Compares two polynomials on every monomial of the window, counting
    /// `window_size` checks.
    pub fn compare_polys(&mut self, check: &str, lhs: &GradedPoly, rhs: &GradedPoly, u_max: u32, weight_max: i64) {
        let alphabet = lhs.alphabet();
        let (l, r) = (lhs.window(u_max, weight_max), rhs.window(u_max, weight_max));
        self.checked += window_size(alphabet, u_max, weight_max);
        for (m, a, b) in l.differences(&r) {
            self.fail(check, m.display(alphabet), a.to_string(), b.to_string());
        }
    }

    /// Treats every term of `residual` in the window as a mismatch against 0.
    pub fn expect_zero(&mut self, check: &str, residual: &GradedPoly, u_max: u32, weight_max: i64) {
        let zero = GradedPoly::zero(residual.alphabet(), residual.trunc());
        self.compare_polys(check, residual, &zero, u_max, weight_max);
    }

    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.passed &= other.passed;
        self.mismatches.extend(other.mismatches);
    }
}

fn window_size(alphabet: Alphabet, u_max: u32, weight_max: i64) -> usize {
    if weight_max < 0 {
        return 0;
    }
    let trunc = crate::ops::TruncationSpec { u_max, weight_max, index_max: weight_max as u32 };
    crate::ops::all_monomials(alphabet, trunc).len()
}
