//! Commutative polynomials in `x, y` over the rationals, univariate helpers
//! (Sylvester matrix, resultant) and the quasihomogeneous shape data.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactla::{ExactMatrix, SparseEchelon};
use crate::ncalg::{Grading, NcPoly};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Sparse bivariate polynomial: `(i, j) -> coefficient of x^i y^j`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly::default()
    }

    pub fn one() -> Self {
        CPoly::monomial(0, 0, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        CPoly::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        CPoly::monomial(1, 0, Rational::one())
    }

    pub fn y() -> Self {
        CPoly::monomial(0, 1, Rational::one())
    }

    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut p = CPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = CPoly::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> CPoly {
        CPoly::from_terms(self.terms.iter().map(|(k, a)| (*k, a * c)))
    }

    /// Multiplies by `x^i y^j`.
    pub fn shift(&self, i: u32, j: u32) -> CPoly {
        CPoly { terms: self.terms.iter().map(|(&(a, b), c)| ((a + i, b + j), c.clone())).collect() }
    }

    /// Common weighted degree of all monomials; `None` for zero or mixed.
    pub fn homogeneous_degree(&self, g: &Grading) -> Option<u32> {
        let mut it = self.terms.keys().map(|&(i, j)| g.degree_of(i, j));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_quasihomogeneous(&self, g: &Grading, d: u32) -> bool {
        self.terms.keys().all(|&(i, j)| g.degree_of(i, j) == d)
    }

    pub fn partial(&self, var: Var) -> CPoly {
        CPoly::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| match var {
            Var::X if i > 0 => Some(((i - 1, j), c * Rational::from_integer(i.into()))),
            Var::Y if j > 0 => Some(((i, j - 1), c * Rational::from_integer(j.into()))),
            _ => None,
        }))
    }

    /// Largest `(U, V)` with `x^U y^V` dividing every monomial.
    pub fn monomial_content(&self) -> (u32, u32) {
        let u = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let v = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (u, v)
    }

    pub fn from_json_str(s: &str) -> Result<CPoly> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Image of a noncommutative polynomial in `Q[x, y]`.
pub fn abelianize(p: &NcPoly) -> CPoly {
    CPoly::from_terms(p.terms().map(|(w, c)| ((w.count_x(), w.count_y()), c.clone())))
}

pub fn partial(p: &CPoly, var: Var) -> CPoly {
    p.partial(var)
}

/// Checks the weighted Euler identity `d p = s x p_x + r y p_y`, which holds
/// exactly when every monomial of `p` has weighted degree `d`.
pub fn euler_check(p: &CPoly, g: &Grading, d: u32) -> bool {
    if p.is_zero() || d == 0 {
        return false;
    }
    let s = Rational::from_integer(g.s.into());
    let r = Rational::from_integer(g.r.into());
    let rhs = &p.partial(Var::X).shift(1, 0).scale(&s) + &p.partial(Var::Y).shift(0, 1).scale(&r);
    rhs == p.scale(&Rational::from_integer(d.into()))
}

/// `P_ab = x^u y^v * sum_k a_k x^{(n-k) r} y^{k s}` with `u, v` in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeParams {
    pub u: u32,
    pub v: u32,
    pub n: u32,
    pub d: u32,
    #[serde(with = "rat_vec")]
    pub a: Vec<Rational>,
}

impl ShapeParams {
    pub fn u_k(&self, g: &Grading, k: u32) -> u32 {
        self.u + (self.n - k) * g.r
    }

    pub fn v_k(&self, g: &Grading, k: u32) -> u32 {
        self.v + k * g.s
    }

    /// `h(x) = sum_k a_k x^{n-k}`.
    pub fn h(&self) -> UniPoly {
        UniPoly::new(self.a.iter().rev().cloned().collect())
    }

    pub fn reconstruct(&self, g: &Grading) -> CPoly {
        CPoly::from_terms(
            (0..=self.n).map(|k| ((self.u_k(g, k), self.v_k(g, k)), self.a[k as usize].clone())),
        )
    }

    /// Shape seen after exchanging the roles of `x` and `y`.
    pub fn swapped(&self) -> ShapeParams {
        ShapeParams {
            u: self.v,
            v: self.u,
            n: self.n,
            d: self.d,
            a: self.a.iter().rev().cloned().collect(),
        }
    }
}

pub fn shape_decompose(p: &CPoly, g: &Grading) -> Result<ShapeParams> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = p
        .homogeneous_degree(g)
        .ok_or_else(|| Error::NotQuasihomogeneous(format!("{p} under weights ({}, {})", g.s, g.r)))?;
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let (u, v) = p.monomial_content();
    if u >= 2 || v >= 2 {
        return Err(Error::SquarePart { u, v });
    }
    let rest = d - u * g.s - v * g.r;
    let rs = g.r * g.s;
    if !rest.is_multiple_of(rs) {
        return Err(Error::ShapeMismatch);
    }
    let n = rest / rs;
    let mut a = vec![Rational::zero(); n as usize + 1];
    for (&(i, j), c) in p.terms() {
        let (i, j) = (i - u, j - v);
        if j % g.s != 0 || i % g.r != 0 {
            return Err(Error::ShapeMismatch);
        }
        let k = j / g.s;
        if k > n || i != (n - k) * g.r {
            return Err(Error::ShapeMismatch);
        }
        a[k as usize] = c.clone();
    }
    if a[0].is_zero() || a[n as usize].is_zero() {
        return Err(Error::ShapeMismatch);
    }
    Ok(ShapeParams { u, v, n, d, a })
}

/// True iff the shape decomposition exists and `h` has no repeated root.
pub fn is_square_free(p: &CPoly, g: &Grading) -> bool {
    check_square_free(p, g).is_ok()
}

/// Like [`is_square_free`], but explains a negative answer.
pub fn check_square_free(p: &CPoly, g: &Grading) -> Result<ShapeParams> {
    let shape = match shape_decompose(p, g) {
        Ok(s) => s,
        Err(Error::ZeroPolynomial) => {
            return Err(Error::NotSquareFree("the abelianization is zero".into()))
        }
        Err(Error::SquarePart { u, v }) => {
            return Err(Error::NotSquareFree(format!(
                "x^{u} y^{v} divides the abelianization"
            )))
        }
        Err(e) => return Err(e),
    };
    if shape.n >= 1 {
        let h = shape.h();
        if resultant(&h, &h.derivative())?.is_zero() {
            return Err(Error::NotSquareFree(format!("h = {h} has a repeated root")));
        }
    }
    Ok(shape)
}

/// Dense univariate polynomial, coefficients in ascending degree, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    c: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.c.last()
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }

    fn rem(&self, other: &UniPoly) -> UniPoly {
        let dq = other.c.len() - 1;
        let lead = other.c[dq].clone();
        let mut r = self.c.clone();
        while r.len() > dq && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] / &lead;
            for (k, b) in other.c.iter().enumerate() {
                r[top - dq + k] -= &f * b;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => UniPoly::new(a.c.iter().map(|x| x / &l).collect()),
            None => a,
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = a.abs();
            match (i, m.is_one()) {
                (0, _) => write!(f, "{m}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{m}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{m}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

/// Sylvester matrix: `deg g` shifted rows of `f` (leading coefficient
/// first) followed by `deg f` shifted rows of `g`.
pub fn sylvester(f: &UniPoly, g: &UniPoly) -> Result<ExactMatrix> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let n = df + dg;
    let mut rows = Vec::with_capacity(n);
    for (p, shifts) in [(f, dg), (g, df)] {
        let desc: Vec<Rational> = p.c.iter().rev().cloned().collect();
        for t in 0..shifts {
            let mut row = vec![Rational::zero(); n];
            for (k, a) in desc.iter().enumerate() {
                row[t + k] = a.clone();
            }
            rows.push(row);
        }
    }
    ExactMatrix::with_shape(n, n, rows)
}

pub fn resultant(f: &UniPoly, g: &UniPoly) -> Result<Rational> {
    sylvester(f, g)?.det()
}

/// The degree-`e` piece of `Q[x, y] / (p_x, p_y)` with a fixed monomial
/// complement basis.
#[derive(Debug, Clone)]
pub struct JacobianQuotient {
    /// Monomials `(i, j)` of degree `e`, ordered by ascending `j`.
    monomials: Vec<(u32, u32)>,
    ideal: SparseEchelon,
    basis: Vec<usize>,
}

impl JacobianQuotient {
    pub fn new(p: &CPoly, g: &Grading, e: u32) -> Self {
        let monomials = monomials_of_degree(g, e);
        let col = |ij: &(u32, u32)| monomials.binary_search_by_key(&ij.1, |m| m.1).ok();
        let mut ideal = SparseEchelon::new();
        for q in [p.partial(Var::X), p.partial(Var::Y)] {
            let Some(dq) = q.homogeneous_degree(g) else { continue };
            if dq > e {
                continue;
            }
            for (i, j) in monomials_of_degree(g, e - dq) {
                let row: Vec<(usize, Rational)> = q
                    .shift(i, j)
                    .terms()
                    .map(|(ij, c)| (col(ij).expect("degree-e monomial"), c.clone()))
                    .collect();
                ideal.insert(&row);
            }
        }
        let mut basis = Vec::new();
        for c in 0..monomials.len() {
            let unit = [(c, Rational::one())];
            if ideal.reduce(&unit).first().map(|x| x.0) == Some(c) {
                basis.push(c);
            }
        }
        JacobianQuotient { monomials, ideal, basis }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len() - self.ideal.rank()
    }

    /// Complement basis monomials.
    pub fn basis(&self) -> Vec<(u32, u32)> {
        self.basis.iter().map(|&c| self.monomials[c]).collect()
    }

    /// Coordinates of the class of `f` (homogeneous of degree `e`, or zero).
    pub fn reduce(&self, f: &CPoly) -> Result<Vec<Rational>> {
        let mut row = Vec::with_capacity(f.num_terms());
        for (ij, c) in f.terms() {
            let c_idx = self
                .monomials
                .binary_search_by_key(&ij.1, |m| m.1)
                .ok()
                .filter(|&k| self.monomials[k] == *ij)
                .ok_or_else(|| Error::DimensionMismatch(format!("monomial x^{} y^{} has the wrong degree", ij.0, ij.1)))?;
            row.push((c_idx, c.clone()));
        }
        row.sort_by_key(|x| x.0);
        let res = self.ideal.reduce(&row);
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (c, v) in res {
            let k = self.basis.binary_search(&c).expect("residue lies on the complement");
            out[k] = v;
        }
        Ok(out)
    }
}

/// `(i, j)` with `s i + r j = e`, ascending in `j`.
pub fn monomials_of_degree(g: &Grading, e: u32) -> Vec<(u32, u32)> {
    (0..=e / g.r)
        .filter(|j| (e - j * g.r).is_multiple_of(g.s))
        .map(|j| ((e - j * g.r) / g.s, j))
        .collect()
}

/// `dim` of the degree-`m` piece of `Q[x,y]/(p_x, p_y) dx^dy`.
pub fn omega2_quotient_dim(p: &CPoly, g: &Grading, m: u32) -> usize {
    let sr = g.s + g.r;
    if m < sr {
        return 0;
    }
    JacobianQuotient::new(p, g, m - sr).dim()
}

fn monomial_string(i: u32, j: u32) -> String {
    match (i, j) {
        (0, 0) => "1".to_string(),
        _ => format!("x^{i} y^{j}"),
    }
}

fn parse_monomial(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("bad monomial {s:?}"));
    let (mut i, mut j) = (0u32, 0u32);
    let mut any = false;
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        any = true;
        if tok == "1" {
            continue;
        }
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
            None => (tok, 1),
        };
        match base {
            "x" => i += exp,
            "y" => j += exp,
            _ => return Err(bad()),
        }
    }
    if !any {
        return Err(bad());
    }
    Ok((i, j))
}

impl Serialize for CPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (&(i, j), c) in &self.terms {
            m.serialize_entry(&monomial_string(i, j), &rational::format(c))?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for CPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: BTreeMap<String, serde_json::Value> = BTreeMap::deserialize(d)?;
        let mut p = CPoly::zero();
        for (k, v) in raw {
            let (i, j) = parse_monomial(&k).map_err(D::Error::custom)?;
            let c = match v {
                serde_json::Value::String(s) => rational::parse(&s).map_err(D::Error::custom)?,
                serde_json::Value::Number(n) => rational::parse(&n.to_string()).map_err(D::Error::custom)?,
                other => return Err(D::Error::custom(format!("bad coefficient {other}"))),
            };
            p.add_term(i, j, c);
        }
        Ok(p)
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || (i, j) == (0, 0) {
                parts.push(a.to_string());
            }
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPoly({self})")
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, o: &CPoly) -> CPoly {
        let mut p = self.clone();
        for (&(i, j), c) in &o.terms {
            p.add_term(i, j, c.clone());
        }
        p
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, o: &CPoly) -> CPoly {
        let mut p = self.clone();
        for (&(i, j), c) in &o.terms {
            p.add_term(i, j, -c.clone());
        }
        p
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, o: &CPoly) -> CPoly {
        let mut p = CPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                p.add_term(i + k, j + l, a * b);
            }
        }
        p
    }
}

mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(rational::format).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter().map(|s| rational::parse(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::Word;
    use crate::rational::int;
    use proptest::prelude::*;

    fn nc(s: &[(&str, i64)]) -> NcPoly {
        NcPoly::from_terms(s.iter().map(|(w, c)| (Word::parse(w).unwrap(), int(*c))))
    }

    fn cp(s: &[((u32, u32), i64)]) -> CPoly {
        CPoly::from_terms(s.iter().map(|(k, c)| (*k, int(*c))))
    }

    fn g(s: u32, r: u32) -> Grading {
        Grading::new(s, r).unwrap()
    }

    #[test]
    fn abelianize_examples() {
        assert!(abelianize(&nc(&[("xy", 1), ("yx", -1)])).is_zero());
        assert_eq!(abelianize(&nc(&[("xyx", 1), ("yyy", 1)])), cp(&[((2, 1), 1), ((0, 3), 1)]));
        assert_eq!(abelianize(&nc(&[("xy", 1), ("yx", 1)])), cp(&[((1, 1), 2)]));
    }

    #[test]
    fn partial_examples() {
        let p = cp(&[((3, 0), 1), ((0, 2), 1)]);
        assert_eq!(p.partial(Var::X), cp(&[((2, 0), 3)]));
        assert_eq!(p.partial(Var::Y), cp(&[((0, 1), 2)]));
        assert_eq!(cp(&[((2, 1), 1)]).partial(Var::X), cp(&[((1, 1), 2)]));
    }

    #[test]
    fn euler_examples() {
        assert!(euler_check(&cp(&[((3, 0), 1), ((0, 2), 1)]), &g(2, 3), 6));
        assert!(euler_check(&cp(&[((2, 0), 1), ((0, 2), -1)]), &g(1, 1), 2));
        assert!(!euler_check(&cp(&[((1, 0), 1), ((0, 2), 1)]), &g(1, 1), 2));
    }

    #[test]
    fn shape_examples() {
        let s = shape_decompose(&cp(&[((3, 0), 1), ((0, 2), 1)]), &g(2, 3)).unwrap();
        assert_eq!((s.u, s.v, s.n, s.d), (0, 0, 1, 6));
        assert_eq!(s.a, vec![int(1), int(1)]);
        let s = shape_decompose(&cp(&[((2, 1), 1), ((0, 3), 1)]), &g(1, 1)).unwrap();
        assert_eq!((s.u, s.v, s.n, s.d), (0, 1, 2, 3));
        assert_eq!(s.a, vec![int(1), int(0), int(1)]);
        assert_eq!(
            shape_decompose(&cp(&[((2, 3), 1)]), &g(1, 1)),
            Err(Error::SquarePart { u: 2, v: 3 })
        );
        assert_eq!(shape_decompose(&CPoly::zero(), &g(1, 1)), Err(Error::ZeroPolynomial));
        assert!(matches!(
            shape_decompose(&cp(&[((1, 0), 1), ((0, 2), 1)]), &g(1, 1)),
            Err(Error::NotQuasihomogeneous(_))
        ));
    }

    #[test]
    fn sylvester_examples() {
        let f = UniPoly::from_i64(&[-1, 0, 1]);
        let g2 = UniPoly::from_i64(&[0, 2]);
        let m = sylvester(&f, &g2).unwrap();
        assert_eq!(m, ExactMatrix::from_i64(&[&[1, 0, -1], &[2, 0, 0], &[0, 2, 0]]));
        assert_eq!(m.rank(), 3);
        assert_eq!(resultant(&f, &g2).unwrap(), int(-4));
        // Res(x - a, x - b) = a - b, here a = 3, b = -5
        assert_eq!(resultant(&UniPoly::from_i64(&[-3, 1]), &UniPoly::from_i64(&[5, 1])).unwrap(), int(8));
        assert_eq!(resultant(&UniPoly::from_i64(&[-1, 1]), &UniPoly::from_i64(&[1, 1])).unwrap(), int(2));
        assert_eq!(resultant(&UniPoly::from_i64(&[0, 0, 1]), &g2).unwrap(), int(0));
        assert_eq!(resultant(&UniPoly::from_i64(&[1, -2, 1]), &UniPoly::from_i64(&[-2, 2])).unwrap(), int(0));
        assert_eq!(sylvester(&UniPoly::default(), &g2), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn square_free_examples() {
        assert!(is_square_free(&cp(&[((2, 0), 1), ((0, 2), -1)]), &g(1, 1)));
        assert!(!is_square_free(&cp(&[((2, 1), 1)]), &g(1, 1)));
        assert!(!is_square_free(&cp(&[((2, 0), 1), ((1, 1), -2), ((0, 2), 1)]), &g(1, 1)));
        assert!(!is_square_free(&CPoly::zero(), &g(1, 1)));
        assert!(is_square_free(&cp(&[((1, 1), 2)]), &g(1, 1)));
    }

    #[test]
    fn omega2_examples() {
        let p = cp(&[((3, 0), 1), ((0, 2), 1)]);
        let dims: Vec<usize> = (0..=20).map(|m| omega2_quotient_dim(&p, &g(2, 3), m)).collect();
        for (m, d) in dims.iter().enumerate() {
            assert_eq!(*d, usize::from(m == 5 || m == 7), "m = {m}");
        }
        let q = cp(&[((2, 0), 1), ((0, 2), -1)]);
        for m in 0..=12 {
            assert_eq!(omega2_quotient_dim(&q, &g(1, 1), m), usize::from(m == 2));
        }
        assert_eq!(omega2_quotient_dim(&p, &g(2, 3), 4), 0);
    }

    #[test]
    fn jacobian_quotient_reduces_onto_basis() {
        let p = cp(&[((3, 0), 1), ((0, 2), 1)]);
        let jq = JacobianQuotient::new(&p, &g(2, 3), 2);
        assert_eq!(jq.basis(), vec![(1, 0)]);
        assert_eq!(jq.reduce(&cp(&[((1, 0), 5)])).unwrap(), vec![int(5)]);
        let jq0 = JacobianQuotient::new(&p, &g(2, 3), 4);
        assert_eq!(jq0.dim(), 0);
        assert!(jq0.reduce(&cp(&[((2, 0), 1)])).unwrap().is_empty());
        assert!(jq.reduce(&cp(&[((0, 1), 1)])).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p = cp(&[((2, 1), 1), ((0, 0), -3)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"1":"-3","x^2 y^1":"1"}"#);
        assert_eq!(CPoly::from_json_str(&s).unwrap(), p);
        assert_eq!(CPoly::from_json_str(r#"{"x^2*y": 1, "y^3": "1/2"}"#).unwrap().coeff(0, 3), crate::rational::frac(1, 2));
        assert!(CPoly::from_json_str(r#"{"z": 1}"#).is_err());
    }

    fn arb_cpoly() -> impl Strategy<Value = CPoly> {
        proptest::collection::vec(((0u32..5, 0u32..5), -4i64..5), 0..6)
            .prop_map(|v| CPoly::from_terms(v.into_iter().map(|(k, c)| (k, int(c)))))
    }

    fn arb_ncpoly() -> impl Strategy<Value = NcPoly> {
        proptest::collection::vec(("[xy]{0,5}", -3i64..4), 0..5).prop_map(|v| {
            NcPoly::from_terms(v.into_iter().map(|(w, c)| (Word::parse(&w).unwrap(), int(c))))
        })
    }

    proptest! {
        #[test]
        fn abelianize_is_multiplicative(a in arb_ncpoly(), b in arb_ncpoly()) {
            prop_assert_eq!(abelianize(&(&a * &b)), &abelianize(&a) * &abelianize(&b));
        }

        #[test]
        fn euler_matches_degree_check(p in arb_cpoly(), s in 1u32..4, r in 1u32..4, d in 1u32..12) {
            prop_assume!(Grading::new(s, r).is_ok() && !p.is_zero());
            let gr = g(s, r);
            prop_assert_eq!(euler_check(&p, &gr, d), p.is_quasihomogeneous(&gr, d));
        }

        #[test]
        fn shape_roundtrip(s in 1u32..4, r in 1u32..4, u in 0u32..2, v in 0u32..2,
                           coeffs in proptest::collection::vec(-3i64..4, 1..5)) {
            prop_assume!(Grading::new(s, r).is_ok());
            prop_assume!(coeffs[0] != 0 && *coeffs.last().unwrap() != 0);
            let gr = g(s, r);
            let n = coeffs.len() as u32 - 1;
            prop_assume!(u * s + v * r + n * r * s > 0);
            let p = CPoly::from_terms(coeffs.iter().enumerate().map(|(k, &c)| {
                let k = k as u32;
                ((u + (n - k) * r, v + k * s), int(c))
            }));
            let shape = shape_decompose(&p, &gr).unwrap();
            prop_assert_eq!(shape.d, u * s + v * r + n * r * s);
            prop_assert_eq!(shape.reconstruct(&gr), p);
        }

        #[test]
        fn square_free_matches_gcd(coeffs in proptest::collection::vec(-3i64..4, 2..8)) {
            let h = UniPoly::from_i64(&coeffs);
            prop_assume!(h.degree().unwrap_or(0) >= 1);
            let by_res = !resultant(&h, &h.derivative()).unwrap().is_zero();
            let by_gcd = h.gcd(&h.derivative()).degree() == Some(0);
            prop_assert_eq!(by_res, by_gcd);
        }
    }
}
