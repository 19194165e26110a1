//! Integer power series truncated at a fixed order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncalg::Grading;

/// Coefficients of `t^0 .. t^N`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedSeries {
    coeffs: Vec<i64>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![0; order + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        TruncatedSeries { coeffs }
    }

    /// Sparse constructor: `(exponent, coefficient)` pairs beyond the order are dropped.
    pub fn from_terms(order: usize, terms: &[(usize, i64)]) -> Self {
        let mut s = TruncatedSeries::zero(order);
        for &(e, c) in terms {
            if e <= order {
                s.coeffs[e] += c;
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> i64 {
        self.coeffs.get(m).copied().unwrap_or(0)
    }

    pub fn set(&mut self, m: usize, c: i64) {
        self.coeffs[m] = c;
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn check_order(&self, o: &TruncatedSeries) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::DimensionMismatch(format!(
                "truncation orders {} and {} differ",
                self.order(),
                o.order()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_order(o)?;
        let n = self.order();
        let mut out = vec![0i64; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in o.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn add(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_order(o)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_order(o)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() })
    }

    /// Division by `1 - t^k`, i.e. multiplication by the geometric series.
    pub fn div_one_minus(&self, k: usize) -> TruncatedSeries {
        assert!(k > 0);
        let mut c = self.coeffs.clone();
        for i in k..c.len() {
            c[i] += c[i - k];
        }
        TruncatedSeries { coeffs: c }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "t^{e}")?,
                _ => write!(f, "{a}t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(t^s - t^d)(t^r - t^d) / ((1 - t^s)(1 - t^r))` up to `t^order`.
pub fn closed_form_hp(g: &Grading, d: u32, order: usize) -> TruncatedSeries {
    let (s, r, d) = (g.s as usize, g.r as usize, d as usize);
    let a = TruncatedSeries::from_terms(order, &[(s, 1), (d, -1)]);
    let b = TruncatedSeries::from_terms(order, &[(r, 1), (d, -1)]);
    a.mul(&b).expect("same order").div_one_minus(s).div_one_minus(r)
}

/// `(1 - t^{d-s})(1 - t^{d-r}) t^s t^r / ((1 - t^s)(1 - t^r))`; needs `d >= max(s, r)`.
pub fn eq2_hp(g: &Grading, d: u32, order: usize) -> Result<TruncatedSeries> {
    if d < g.s.max(g.r) {
        return Err(Error::InvalidParameters(format!("d = {d} is below max(s, r)")));
    }
    let (s, r, d) = (g.s as usize, g.r as usize, d as usize);
    let a = TruncatedSeries::from_terms(order, &[(0, 1), (d - s, -1)]);
    let b = TruncatedSeries::from_terms(order, &[(0, 1), (d - r, -1)]);
    let shift = TruncatedSeries::from_terms(order, &[(s + r, 1)]);
    Ok(a.mul(&b)?.mul(&shift)?.div_one_minus(s).div_one_minus(r))
}

/// Coefficientwise `f <= g`.
pub fn leq(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<bool> {
    f.check_order(g)?;
    Ok(f.coeffs.iter().zip(&g.coeffs).all(|(a, b)| a <= b))
}

/// `t^step + t^{2 step} + ... + t^{count step}`.
pub fn arithmetic_run(step: usize, count: usize, order: usize) -> TruncatedSeries {
    let terms: Vec<(usize, i64)> = (1..=count).map(|k| (k * step, 1)).collect();
    TruncatedSeries::from_terms(order, &terms)
}
