//! Exact linear algebra over the rationals.
//!
//! Dense [`ExactMatrix`] carries the small relation and Sylvester matrices;
//! rank and determinant go through fraction-free (Bareiss) elimination on an
//! integer-scaled copy. [`sparse::SparseEchelon`] handles long sparse
//! families, and [`modp`] holds the word-size prime field kernel used for
//! filtering before exact certification.

pub mod modp;
pub mod sparse;

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use sparse::SparseEchelon;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds from row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(ExactMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| rational::int(v)).collect()).collect())
            .expect("rectangular literal")
    }

    /// A `rows x cols` shape even when `rows == 0` (so the column count survives).
    pub fn with_shape(rows: usize, cols: usize, entries: Vec<Vec<Rational>>) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("expected {rows}x{cols}")));
        }
        let mut m = ExactMatrix::zeros(rows, cols);
        m.data = entries.into_iter().flatten().collect();
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Self {
        assert_eq!(rows.len(), self.rows);
        assert_eq!(cols.len(), self.cols);
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        self
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    /// The rows listed in `idx`, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(idx.len(), self.cols);
        for (a, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(a, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// Integer matrix with each row multiplied by the lcm of its denominators.
    /// Also returns the product of those scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut total = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = rational::common_denominator(row.iter());
                total *= &l;
                row.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        (rows, total)
    }

    /// Exact rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss_echelon(&mut a, self.cols).rank
    }

    /// Exact determinant (fraction-free elimination).
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (mut a, scale) = self.integer_rows();
        let e = bareiss_echelon(&mut a, self.cols);
        if e.rank < self.rows {
            return Ok(Rational::zero());
        }
        let mut d = a[self.rows - 1][self.cols - 1].clone();
        if e.swaps % 2 == 1 {
            d = -d;
        }
        Ok(Rational::new(d, scale))
    }

    /// Reduced row echelon form with the pivot column list.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in 0..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..self.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Applies `script` in order to a copy of `self`.
    pub fn apply_script(&self, script: &OpScript) -> Result<ExactMatrix> {
        let mut m = self.clone();
        for step in &script.steps {
            m.apply_step(step)?;
        }
        Ok(m)
    }

    pub fn apply_step(&mut self, step: &Step) -> Result<()> {
        let check = |i: usize, bound: usize| {
            if i >= bound {
                Err(Error::IndexOutOfRange { index: i, bound })
            } else {
                Ok(())
            }
        };
        match step {
            Step::ScaleRow { row, c } => {
                check(*row, self.rows)?;
                if c.is_zero() {
                    return Err(Error::ZeroScale);
                }
                for j in 0..self.cols {
                    let v = self.get(*row, j) * c;
                    self.set(*row, j, v);
                }
            }
            Step::ScaleCol { col, c } => {
                check(*col, self.cols)?;
                if c.is_zero() {
                    return Err(Error::ZeroScale);
                }
                for i in 0..self.rows {
                    let v = self.get(i, *col) * c;
                    self.set(i, *col, v);
                }
            }
            Step::AddRowMultiple { src, dst, c } => {
                check(*src, self.rows)?;
                check(*dst, self.rows)?;
                if src == dst {
                    return Err(Error::InvalidParameters("row added to itself".into()));
                }
                for j in 0..self.cols {
                    let v = self.get(*dst, j) + c * self.get(*src, j);
                    self.set(*dst, j, v);
                }
            }
            Step::AddColMultiple { src, dst, c } => {
                check(*src, self.cols)?;
                check(*dst, self.cols)?;
                if src == dst {
                    return Err(Error::InvalidParameters("column added to itself".into()));
                }
                for i in 0..self.rows {
                    let v = self.get(i, *dst) + c * self.get(i, *src);
                    self.set(i, *dst, v);
                }
            }
        }
        Ok(())
    }

    /// CSV dump of rational strings; labels (when present) become a header
    /// row and a leading column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        if let Some(cl) = &self.col_labels {
            let mut header = Vec::with_capacity(cl.len() + 1);
            if self.row_labels.is_some() {
                header.push(String::new());
            }
            header.extend(cl.iter().cloned());
            w.write_record(&header).map_err(io)?;
        }
        for i in 0..self.rows {
            let mut rec = Vec::with_capacity(self.cols + 1);
            if let Some(rl) = &self.row_labels {
                rec.push(rl[i].clone());
            }
            rec.extend(self.row(i).iter().map(rational::format));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("utf8 csv")
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(rational::format).collect()).collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(rational::format).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

struct Echelon {
    rank: usize,
    swaps: usize,
}

/// In-place fraction-free row echelon form of an integer matrix. Every
/// division is exact (Sylvester's identity), so entries stay integral.
fn bareiss_echelon(a: &mut [Vec<BigInt>], cols: usize) -> Echelon {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut swaps = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // smallest nonzero pivot keeps intermediate sizes down
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))
        else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = &piv * &row[j] - &f * &pivot_row[j];
                row[j] = v.div_floor(&prev);
            }
            row[c] = BigInt::zero();
        }
        // columns left of c in rows below are already zero
        prev = piv;
        r += 1;
    }
    Echelon { rank: r, swaps }
}

/// One elementary operation of an [`OpScript`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    ScaleRow {
        row: usize,
        #[serde(with = "rat_str")]
        c: Rational,
    },
    ScaleCol {
        col: usize,
        #[serde(with = "rat_str")]
        c: Rational,
    },
    AddRowMultiple {
        src: usize,
        dst: usize,
        #[serde(with = "rat_str")]
        c: Rational,
    },
    AddColMultiple {
        src: usize,
        dst: usize,
        #[serde(with = "rat_str")]
        c: Rational,
    },
}

/// Ordered list of rank-preserving row/column operations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpScript {
    pub steps: Vec<Step>,
}

impl OpScript {
    pub fn new() -> Self {
        OpScript::default()
    }

    pub fn push(&mut self, s: Step) {
        self.steps.push(s);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

pub(crate) mod rat_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        rational::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::from_i64(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(ExactMatrix::zeros(0, 3).rank(), 0);
        assert_eq!(ExactMatrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn det_examples() {
        assert_eq!(ExactMatrix::identity(3).det().unwrap(), int(1));
        let m = ExactMatrix::from_i64(&[&[1, 0, -1], &[2, 0, 0], &[0, 2, 0]]);
        assert_eq!(m.det().unwrap(), int(-4));
        let rep = ExactMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(rep.det().unwrap(), int(0));
        assert!(matches!(ExactMatrix::zeros(2, 3).det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_with_fractions() {
        let m = ExactMatrix::from_rows(vec![
            vec![frac(1, 2), frac(1, 3)],
            vec![frac(1, 4), frac(1, 5)],
        ])
        .unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(m.det().unwrap(), frac(1, 60));
    }

    #[test]
    fn script_examples() {
        let m = ExactMatrix::from_i64(&[&[1, 1]]);
        let s = OpScript { steps: vec![Step::ScaleRow { row: 0, c: int(2) }] };
        assert_eq!(m.apply_script(&s).unwrap(), ExactMatrix::from_i64(&[&[2, 2]]));

        let m = ExactMatrix::from_i64(&[&[1], &[1]]);
        let s = OpScript { steps: vec![Step::AddRowMultiple { src: 0, dst: 1, c: int(-1) }] };
        assert_eq!(m.apply_script(&s).unwrap(), ExactMatrix::from_i64(&[&[1], &[0]]));
    }

    #[test]
    fn script_errors() {
        let m = ExactMatrix::from_i64(&[&[1, 1]]);
        let bad = OpScript { steps: vec![Step::ScaleRow { row: 3, c: int(2) }] };
        assert!(matches!(m.apply_script(&bad), Err(Error::IndexOutOfRange { .. })));
        let zero = OpScript { steps: vec![Step::ScaleCol { col: 0, c: int(0) }] };
        assert_eq!(m.apply_script(&zero), Err(Error::ZeroScale));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = ExactMatrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 4 - m.rank());
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn csv_dump() {
        let m = ExactMatrix::from_rows(vec![vec![frac(1, 2), int(0)]])
            .unwrap()
            .with_labels(vec!["r0".into()], vec!["(1,1)".into(), "(2,0)".into()]);
        assert_eq!(m.to_csv_string(), ",\"(1,1)\",\"(2,0)\"\nr0,1/2,0\n");
        let plain = ExactMatrix::from_i64(&[&[1, -2]]);
        assert_eq!(plain.to_csv_string(), "1,-2\n");
    }
}
