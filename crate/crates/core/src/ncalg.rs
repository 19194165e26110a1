//! Graded noncommutative polynomials in two letters over the rationals.
//!
//! Words are packed into a `u64` (first letter in the most significant used
//! bit, `X = 0`, `Y = 1`), which keeps concatenation and hashing cheap for the
//! spanning-family sweeps done by the `lcs` engine.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Weights `s` of `x` and `r` of `y`; positive and coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grading {
    pub s: u32,
    pub r: u32,
}

impl Grading {
    pub fn new(s: u32, r: u32) -> Result<Self> {
        if s == 0 || r == 0 || s.gcd(&r) != 1 {
            return Err(Error::InvalidGrading { s, r });
        }
        Ok(Grading { s, r })
    }

    pub fn standard() -> Self {
        Grading { s: 1, r: 1 }
    }

    /// Weighted degree of a monomial with `i` x's and `j` y's.
    pub fn degree_of(&self, i: u32, j: u32) -> u32 {
        self.s * i + self.r * j
    }

    pub fn swapped(&self) -> Self {
        Grading { s: self.r, r: self.s }
    }

    /// `(i, j)` with `s i + r j = m` and `i, j >= 0`, by decreasing `i`.
    pub fn lattice(&self, m: u32) -> Vec<(u32, u32)> {
        (0..=m / self.s)
            .rev()
            .filter(|i| (m - self.s * i).is_multiple_of(self.r))
            .map(|i| (i, (m - self.s * i) / self.r))
            .collect()
    }

    /// The points of `lattice(m)` with both coordinates positive.
    pub fn lattice_positive(&self, m: u32) -> Vec<(u32, u32)> {
        self.lattice(m).into_iter().filter(|&(i, j)| i > 0 && j > 0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

pub const MAX_WORD_LEN: u8 = 63;

/// A word over `{X, Y}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn letter(l: Letter) -> Word {
        Word { len: 1, bits: (l == Letter::Y) as u64 }
    }

    pub fn x() -> Word {
        Word::letter(Letter::X)
    }

    pub fn y() -> Word {
        Word::letter(Letter::Y)
    }

    pub fn from_letters(letters: &[Letter]) -> Word {
        letters.iter().fold(Word::EMPTY, |w, &l| w.concat(&Word::letter(l)))
    }

    /// `x^i` or `y^j` style powers.
    pub fn power(l: Letter, k: usize) -> Word {
        Word::from_letters(&vec![l; k])
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_y(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn count_x(&self) -> u32 {
        self.len as u32 - self.count_y()
    }

    pub fn degree(&self, g: &Grading) -> u32 {
        g.degree_of(self.count_x(), self.count_y())
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        assert!(i < self.len());
        if (self.bits >> (self.len as usize - 1 - i)) & 1 == 1 {
            Letter::Y
        } else {
            Letter::X
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.letter_at(i))
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let len = self.len + other.len;
        assert!(len <= MAX_WORD_LEN, "word length {len} exceeds {MAX_WORD_LEN}");
        Word { len, bits: (self.bits << other.len) | other.bits }
    }

    /// Splits off the first letter.
    pub fn split_first(&self) -> Option<(Letter, Word)> {
        if self.len == 0 {
            return None;
        }
        let rest_len = self.len - 1;
        let first = if (self.bits >> rest_len) & 1 == 1 { Letter::Y } else { Letter::X };
        let mask = if rest_len == 0 { 0 } else { (1u64 << rest_len) - 1 };
        Some((first, Word { len: rest_len, bits: self.bits & mask }))
    }

    /// Splits off the last letter.
    pub fn split_last(&self) -> Option<(Word, Letter)> {
        if self.len == 0 {
            return None;
        }
        let last = if self.bits & 1 == 1 { Letter::Y } else { Letter::X };
        Some((Word { len: self.len - 1, bits: self.bits >> 1 }, last))
    }

    fn prefix_bits(&self, l: u8) -> u64 {
        if l == 0 {
            0
        } else {
            self.bits >> (self.len - l)
        }
    }

    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for c in s.chars() {
            match c {
                'x' | 'X' => letters.push(Letter::X),
                'y' | 'Y' => letters.push(Letter::Y),
                c if c.is_whitespace() => {}
                _ => return Err(Error::Parse(format!("invalid letter {c:?} in word {s:?}"))),
            }
        }
        if letters.len() > MAX_WORD_LEN as usize {
            return Err(Error::Parse(format!("word {s:?} is too long")));
        }
        Ok(Word::from_letters(&letters))
    }
}

impl Ord for Word {
    /// Lexicographic with `X < Y`; a proper prefix sorts first.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let l = self.len.min(other.len);
        self.prefix_bits(l)
            .cmp(&other.prefix_bits(l))
            .then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            f.write_str(if l == Letter::X { "x" } else { "y" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "Word(1)")
        } else {
            write!(f, "Word({self})")
        }
    }
}

/// All words of weighted degree exactly `m`, sorted lexicographically.
pub fn enumerate_words(g: &Grading, m: u32) -> Vec<Word> {
    words_up_to(g, m).pop().unwrap_or_default()
}

/// Table of `enumerate_words(g, k)` for `k = 0..=max`.
pub fn words_up_to(g: &Grading, max: u32) -> Vec<Vec<Word>> {
    let mut table: Vec<Vec<Word>> = Vec::with_capacity(max as usize + 1);
    for k in 0..=max {
        let mut out = Vec::new();
        if k == 0 {
            out.push(Word::EMPTY);
        } else {
            // X-prefixed words precede Y-prefixed ones, and prepending a letter
            // preserves order, so no sort is needed.
            if k >= g.s {
                out.extend(table[(k - g.s) as usize].iter().map(|w| Word::x().concat(w)));
            }
            if k >= g.r {
                out.extend(table[(k - g.r) as usize].iter().map(|w| Word::y().concat(w)));
            }
        }
        table.push(out);
    }
    table
}

/// Sparse noncommutative polynomial: word → nonzero rational.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Rational>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        NcPoly::from_word(Word::EMPTY)
    }

    pub fn from_word(w: Word) -> Self {
        NcPoly::monomial(w, Rational::one())
    }

    pub fn x() -> Self {
        NcPoly::from_word(Word::x())
    }

    pub fn y() -> Self {
        NcPoly::from_word(Word::y())
    }

    pub fn monomial(w: Word, c: Rational) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut p = NcPoly::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    /// Adds `c·w` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, a)| (*w, a * c)).collect() }
    }

    /// Terms of weighted degree exactly `m`.
    pub fn homogeneous_part(&self, g: &Grading, m: u32) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree(g) == m)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms, or `None` for zero / inhomogeneous input.
    pub fn homogeneous_degree(&self, g: &Grading) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| w.degree(g));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Parses the JSON object form `{"xy": "1", "yx": "-1"}`.
    pub fn from_json_str(s: &str) -> Result<NcPoly> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("NcPoly serializes")
    }
}

/// Bilinear extension of concatenation.
pub fn multiply(a: &NcPoly, b: &NcPoly) -> NcPoly {
    let mut out = NcPoly::zero();
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            out.add_term(wa.concat(wb), ca * cb);
        }
    }
    out
}

/// `ab − ba`.
pub fn commutator(a: &NcPoly, b: &NcPoly) -> NcPoly {
    &multiply(a, b) - &multiply(b, a)
}

/// `[w1, w2]` for words, without going through the generic product.
pub fn word_commutator(a: &Word, b: &Word) -> NcPoly {
    let mut p = NcPoly::zero();
    p.add_term(a.concat(b), Rational::one());
    p.add_term(b.concat(a), -Rational::one());
    p
}

/// `{[w1, w2] : deg w1 + deg w2 = m, both nonempty}`; spans `L2(A)[m]`.
pub fn span_l2(g: &Grading, m: u32) -> Vec<NcPoly> {
    let table = words_up_to(g, m);
    let mut out = Vec::new();
    for a in 1..m {
        for w1 in &table[a as usize] {
            for w2 in &table[(m - a) as usize] {
                out.push(word_commutator(w1, w2));
            }
        }
    }
    out
}

/// `{[w1, [w2, w3]]}` over nonempty words of total degree `m`; spans `L3(A)[m]`.
pub fn span_l3(g: &Grading, m: u32) -> Vec<NcPoly> {
    let table = words_up_to(g, m);
    let mut out = Vec::new();
    for a in 1..m {
        for b in 1..m.saturating_sub(a) {
            let c = m - a - b;
            if c == 0 {
                continue;
            }
            for w1 in &table[a as usize] {
                for w2 in &table[b as usize] {
                    for w3 in &table[c as usize] {
                        let inner = word_commutator(w2, w3);
                        out.push(commutator(&NcPoly::from_word(*w1), &inner));
                    }
                }
            }
        }
    }
    out
}

/// `{w1 · P · w2 : deg w1 + deg w2 = m − d}` spanning `⟨P⟩[m]`.
pub fn span_ideal(p: &NcPoly, g: &Grading, m: u32) -> Result<Vec<NcPoly>> {
    let d = p.homogeneous_degree(g).ok_or(Error::NotHomogeneous)?;
    if m < d {
        return Ok(Vec::new());
    }
    let rest = m - d;
    let table = words_up_to(g, rest);
    let mut out = Vec::new();
    for a in 0..=rest {
        for w1 in &table[a as usize] {
            for w2 in &table[(rest - a) as usize] {
                out.push(NcPoly::from_terms(
                    p.terms().map(|(u, c)| (w1.concat(u).concat(w2), c.clone())),
                ));
            }
        }
    }
    Ok(out)
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c.clone());
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect() }
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        multiply(self, rhs)
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let word = if w.is_empty() { "1".to_string() } else { w.to_string() };
            if abs.is_one() {
                f.write_str(&word)?;
            } else if w.is_empty() {
                write!(f, "{abs}")?;
            } else {
                write!(f, "({abs}){word}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

impl Serialize for NcPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> =
            self.terms.iter().map(|(w, c)| (w.to_string(), rational::format(c))).collect();
        map.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let map: BTreeMap<String, serde_json::Value> = BTreeMap::deserialize(de)?;
        let mut p = NcPoly::zero();
        for (k, v) in map {
            let w = Word::parse(&k).map_err(serde::de::Error::custom)?;
            let c = match &v {
                serde_json::Value::String(s) => rational::parse(s),
                serde_json::Value::Number(n) if n.is_i64() => {
                    Ok(rational::int(n.as_i64().unwrap()))
                }
                other => Err(Error::Parse(format!("coefficient {other} is not a rational string"))),
            }
            .map_err(serde::de::Error::custom)?;
            p.add_term(w, c);
        }
        Ok(p)
    }
}
