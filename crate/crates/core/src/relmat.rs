//! Relation matrices among the brackets `[x^i, y^j]` and the rank
//! certificates behind the degree-wise upper bound on `dim B2`.
//!
//! Columns are the points of `S+_m`, ordered by decreasing `i`. Rows are the
//! bracket relations attached to the points `(p_t, q_t)` of `S_{m-d}`:
//! first every "x" relation (needs `p_t > 0`) by increasing `t`, then every
//! "y" relation (needs `q_t > 0`).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cpoly::{resultant, sylvester, ShapeParams};
use crate::error::{Error, Result};
use crate::exactla::{ExactMatrix, OpScript, Step};
use crate::ncalg::Grading;
use crate::rational::{self, Rational};
use crate::series::{arithmetic_run, TruncatedSeries};

/// Lattice data of one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmData {
    pub m: u32,
    pub s_m: Vec<(u32, u32)>,
    pub s_m_plus: Vec<(u32, u32)>,
    /// `(p, q, l)` with `S_{m-d} = {(p + (l-t) r, q + t s)}`; `None` when empty.
    pub sub: Option<(u32, u32, u32)>,
}

impl SmData {
    pub fn p_t(&self, g: &Grading, t: u32) -> u32 {
        let (p, _, l) = self.sub.expect("S_{m-d} nonempty");
        p + (l - t) * g.r
    }

    pub fn q_t(&self, g: &Grading, t: u32) -> u32 {
        let (_, q, _) = self.sub.expect("S_{m-d} nonempty");
        q + t * g.s
    }
}

pub fn compute_sm(g: &Grading, shape: &ShapeParams, m: u32) -> SmData {
    let sub = m.checked_sub(shape.d).and_then(|k| {
        let pts = g.lattice(k);
        let (p, _) = *pts.last()?;
        let (_, q) = pts[0];
        Some((p, q, pts.len() as u32 - 1))
    });
    SmData { m, s_m: g.lattice(m), s_m_plus: g.lattice_positive(m), sub }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    UV00,
    UV11,
    UV01,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PqCase {
    BothNonzero,
    PZero,
    QZero,
    BothZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTag {
    pub shape: Shape,
    pub pq_case: PqCase,
}

/// Coordinates in which the matrices are built: `x` and `y` may be exchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub g: Grading,
    pub shape: ShapeParams,
    pub sm: SmData,
    pub swapped: bool,
}

impl Frame {
    fn swap(&self) -> Frame {
        let g = self.g.swapped();
        let shape = self.shape.swapped();
        let sm = compute_sm(&g, &shape, self.sm.m);
        Frame { g, shape, sm, swapped: !self.swapped }
    }
}

fn pq_case(sm: &SmData) -> Option<PqCase> {
    let (p, q, _) = sm.sub?;
    Some(match (p != 0, q != 0) {
        (true, true) => PqCase::BothNonzero,
        (false, true) => PqCase::PZero,
        (true, false) => PqCase::QZero,
        (false, false) => PqCase::BothZero,
    })
}

/// Case of degree `m` and the frame its matrices live in. `(u, v) = (1, 0)`
/// is viewed as `(0, 1)` with `x` and `y` exchanged, and so is `q = 0, p != 0`
/// (which becomes `p = 0, q != 0`). `None` when `S_{m-d}` is empty.
pub fn classify(g: &Grading, shape: &ShapeParams, m: u32) -> Option<(CaseTag, Frame)> {
    let mut frame = Frame { g: *g, shape: shape.clone(), sm: compute_sm(g, shape, m), swapped: false };
    if (shape.u, shape.v) == (1, 0) {
        frame = frame.swap();
    }
    let kind = match (frame.shape.u, frame.shape.v) {
        (0, 0) => Shape::UV00,
        (1, 1) => Shape::UV11,
        _ => Shape::UV01,
    };
    let pq = pq_case(&frame.sm)?;
    if pq == PqCase::QZero {
        frame = frame.swap();
    }
    Some((CaseTag { shape: kind, pq_case: pq }, frame))
}

/// The relation matrix in the given coordinates; defined for every shape.
pub fn relation_matrix(g: &Grading, shape: &ShapeParams, sm: &SmData) -> ExactMatrix {
    let cols = &sm.s_m_plus;
    let col_of = |i: u32, j: u32| cols.iter().position(|&c| c == (i, j));
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut labels = Vec::new();
    if let Some((_, _, l)) = sm.sub {
        for which in 0..2 {
            for t in 0..=l {
                let (pt, qt) = (sm.p_t(g, t), sm.q_t(g, t));
                if (which == 0 && pt == 0) || (which == 1 && qt == 0) {
                    continue;
                }
                let mut row = vec![Rational::zero(); cols.len()];
                for k in 0..=shape.n {
                    let (i, j) = (shape.u_k(g, k) + pt, shape.v_k(g, k) + qt);
                    let Some(c) = col_of(i, j) else { continue };
                    let w = if which == 0 { i } else { j };
                    row[c] = &shape.a[k as usize] / Rational::from_integer(w.into());
                }
                rows.push(row);
                labels.push(format!("{},t={t}", if which == 0 { "x" } else { "y" }));
            }
        }
    }
    let col_labels = cols.iter().map(|(i, j)| format!("({i},{j})")).collect();
    ExactMatrix::with_shape(rows.len(), cols.len(), rows).expect("rectangular").with_labels(labels, col_labels)
}

fn require_matrix(shape: &ShapeParams, sm: &SmData) -> Result<()> {
    if sm.sub.is_none() {
        return Err(Error::InvalidParameters(format!("S_(m-d) is empty at m = {}", sm.m)));
    }
    if shape.n == 0 {
        return Err(Error::InvalidParameters("n = 0: single-term relations need no matrix".into()));
    }
    Ok(())
}

/// Relation matrix `A`; needs `S_{m-d}` nonempty and `n >= 1`.
pub fn build_a(g: &Grading, shape: &ShapeParams, sm: &SmData) -> Result<ExactMatrix> {
    require_matrix(shape, sm)?;
    Ok(relation_matrix(g, shape, sm))
}

/// Row/column operations taking `A` to `B` when `p, q != 0`.
pub fn case1_script(g: &Grading, shape: &ShapeParams, sm: &SmData) -> Result<OpScript> {
    require_matrix(shape, sm)?;
    let (p, q, l) = sm.sub.expect("checked");
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameters("the reduction script needs p != 0 and q != 0".into()));
    }
    let (l, n) = (l as usize, shape.n as usize);
    let int = |v: u32| Rational::from_integer(v.into());
    let mut script = OpScript::new();
    for (i, &(x, y)) in sm.s_m_plus.iter().enumerate() {
        script.push(Step::ScaleCol { col: i, c: int(x * y) });
    }
    debug_assert_eq!(sm.s_m_plus.len(), n + l + 1);
    let (r, s, m) = (int(g.r), int(g.s), int(sm.m));
    for j in 0..=l {
        let k = j + l + 1;
        script.push(Step::ScaleRow { row: j, c: r.clone() });
        script.push(Step::AddRowMultiple { src: k, dst: j, c: s.clone() });
        script.push(Step::ScaleRow { row: j, c: m.recip() });
        let shift = int(shape.u + sm.p_t(g, j as u32));
        script.push(Step::AddRowMultiple { src: j, dst: k, c: -shift });
        script.push(Step::ScaleRow { row: k, c: r.recip() });
    }
    Ok(script)
}

/// Banded rows: `coeffs[i]` placed at column `offset + i`.
fn band(rows: &mut Vec<Vec<Rational>>, cols: usize, offset: usize, coeffs: &[Rational]) {
    let mut row = vec![Rational::zero(); cols];
    for (i, c) in coeffs.iter().enumerate() {
        row[offset + i] = c.clone();
    }
    rows.push(row);
}

fn h_row(shape: &ShapeParams) -> Vec<Rational> {
    shape.a.clone()
}

/// `(n a_0, (n-1) a_1, ..., 0 a_n)`.
fn dh_row(shape: &ShapeParams) -> Vec<Rational> {
    let n = shape.n as i64;
    shape.a.iter().enumerate().map(|(k, a)| a * rational::int(n - k as i64)).collect()
}

/// `B` of the first case: `l+1` rows of `a`, then `l+1` rows of `(n-k) a_k`.
pub fn pattern_b1(shape: &ShapeParams, l: usize) -> ExactMatrix {
    let n = shape.n as usize;
    let cols = n + l + 1;
    let mut rows = Vec::new();
    for j in 0..=l {
        band(&mut rows, cols, j, &h_row(shape));
    }
    for j in 0..=l {
        band(&mut rows, cols, j, &dh_row(shape));
    }
    ExactMatrix::with_shape(2 * l + 2, cols, rows).expect("rectangular")
}

/// `l` rows of `a`, then `l+1` rows of `(n a_0, ..., a_{n-1})`; `n + l` columns.
pub fn pattern_b2(shape: &ShapeParams, l: usize) -> ExactMatrix {
    let n = shape.n as usize;
    let cols = n + l;
    let mut rows = Vec::new();
    for j in 0..l {
        band(&mut rows, cols, j, &h_row(shape));
    }
    let dh = dh_row(shape);
    for j in 0..=l {
        band(&mut rows, cols, j, &dh[..n]);
    }
    ExactMatrix::with_shape(2 * l + 1, cols, rows).expect("rectangular")
}

/// `l-1` rows of `a`, the row `(a_1, 2 a_2, ..., n a_n)`, then `l` rows of
/// `(n a_0, ..., a_{n-1})`; `n + l - 1` columns.
pub fn pattern_b3(shape: &ShapeParams, l: usize) -> ExactMatrix {
    let n = shape.n as usize;
    let cols = n + l - 1;
    let mut rows = Vec::new();
    if l >= 1 {
        for j in 0..l - 1 {
            band(&mut rows, cols, j, &h_row(shape));
        }
        let tail: Vec<Rational> = (1..=n).map(|k| &shape.a[k] * rational::int(k as i64)).collect();
        band(&mut rows, cols, 0, &tail);
        let dh = dh_row(shape);
        for j in 0..l {
            band(&mut rows, cols, j, &dh[..n]);
        }
    }
    ExactMatrix::with_shape(2 * l, cols, rows).expect("rectangular")
}

/// Appends unit columns with a 1 in the given rows.
fn adjoin_units(b: &ExactMatrix, rows: &[usize]) -> ExactMatrix {
    let mut data = b.to_rows();
    for (i, row) in data.iter_mut().enumerate() {
        for &r in rows {
            row.push(if r == i { Rational::one() } else { Rational::zero() });
        }
    }
    ExactMatrix::with_shape(b.rows(), b.cols() + rows.len(), data).expect("rectangular")
}

/// The banded matrix `A` reduces to, in the frame chosen by [`classify`].
pub fn build_b(frame: &Frame, tag: &CaseTag) -> Result<ExactMatrix> {
    require_matrix(&frame.shape, &frame.sm)?;
    let (_, _, l) = frame.sm.sub.expect("checked");
    let l = l as usize;
    let (u, v) = (frame.shape.u, frame.shape.v);
    Ok(match tag.pq_case {
        PqCase::BothNonzero => pattern_b1(&frame.shape, l),
        // q = 0 was exchanged into p = 0
        PqCase::PZero | PqCase::QZero => {
            let b = pattern_b2(&frame.shape, l);
            if u == 1 {
                adjoin_units(&b, &[2 * l])
            } else {
                b
            }
        }
        PqCase::BothZero => {
            let b = pattern_b3(&frame.shape, l);
            let units = (u + v) as usize;
            if l == 0 {
                // no rows for the unit entries to sit in
                return Ok(ExactMatrix::zeros(0, b.cols() + units));
            }
            let mut extra = Vec::new();
            if u == 1 {
                extra.push(2 * l - 1);
            }
            if v == 1 {
                extra.push(l - 1);
            }
            adjoin_units(&b, &extra)
        }
    })
}

/// `max(n - l + c, 0)` with the case's offset `c`.
pub fn case_bound(tag: &CaseTag, n: u32, l: u32) -> u32 {
    let c: i64 = match (tag.shape, tag.pq_case) {
        (Shape::UV00, _) => -1,
        (_, PqCase::BothNonzero) => -1,
        (Shape::UV11, PqCase::PZero | PqCase::QZero) => 0,
        (Shape::UV11, PqCase::BothZero) => 1,
        (Shape::UV01, PqCase::PZero) => -1,
        (Shape::UV01, PqCase::QZero | PqCase::BothZero) => 0,
    };
    (n as i64 - l as i64 + c).max(0) as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetCheck {
    pub name: String,
    #[serde(with = "crate::exactla::rat_str")]
    pub det: Rational,
    /// Claimed absolute value.
    #[serde(with = "crate::exactla::rat_str")]
    pub expected_abs: Rational,
    pub sign: i8,
    pub holds: bool,
}

fn det_check(name: &str, det: Rational, expected_abs: Rational) -> DetCheck {
    let sign = if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    };
    let holds = det.abs() == expected_abs.abs() && !det.is_zero();
    DetCheck { name: name.into(), det, expected_abs: expected_abs.abs(), sign, holds }
}

/// `Res(h, h')` and the coefficient `a_n`.
fn res_data(shape: &ShapeParams) -> Result<(Rational, Rational)> {
    let h = shape.h();
    Ok((resultant(&h, &h.derivative())?, shape.a[shape.n as usize].clone()))
}

fn pow(a: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * a)
}

/// Nonsingularity of `M` (the third pattern with `l = n - 1`), derived from
/// `Sylv(h, h')`: replace row `n-1` by `n` row 0 minus row `n-1`; the result
/// has determinant `a_0 det M`. Needs `n >= 2`.
pub fn seed_check(shape: &ShapeParams) -> Result<DetCheck> {
    let n = shape.n as usize;
    if n < 2 {
        return Err(Error::InvalidParameters("the seed matrix needs n >= 2".into()));
    }
    let h = shape.h();
    let syl = sylvester(&h, &h.derivative())?;
    let mut rows = syl.to_rows();
    let first = rows[0].clone();
    for (x, f) in rows[n - 1].iter_mut().zip(&first) {
        *x = f * rational::int(n as i64) - &*x;
    }
    let changed = ExactMatrix::from_rows(rows)?.det()?;
    let m = pattern_b3(shape, n - 1).det()?;
    let a0 = &shape.a[0];
    let mut c = det_check("seed", m.clone(), (&changed / a0).abs());
    c.holds = c.holds && changed == a0 * &m;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub m: u32,
    pub shape: Shape,
    pub pq_case: PqCase,
    pub swapped: bool,
    #[serde(rename = "A_dims")]
    pub a_dims: (usize, usize),
    pub rank: usize,
    pub expected_rank: usize,
    #[serde(rename = "B_rank")]
    pub b_rank: usize,
    /// Whether the scripted operations turn `A` into `B` (first case only).
    pub script_matches: Option<bool>,
    pub det_checks: Vec<DetCheck>,
    pub bound: u32,
    pub verdict: bool,
    /// Description and dump of the offending matrix when the verdict fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

fn dump(name: &str, a: &ExactMatrix) -> String {
    let rows: Vec<String> = a.to_string_rows().iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("{name} = [{}]", rows.join(", "))
}

/// Rank certificate at degree `m` (needs `n >= 1` and `S_{m-d}` nonempty).
pub fn certify_max_rank(g: &Grading, shape: &ShapeParams, m: u32) -> Result<RankCertificate> {
    let Some((tag, frame)) = classify(g, shape, m) else {
        return Err(Error::InvalidParameters(format!("S_(m-d) is empty at m = {m}")));
    };
    let a = build_a(&frame.g, &frame.shape, &frame.sm)?;
    let b = build_b(&frame, &tag)?;
    let (_, _, l) = frame.sm.sub.expect("classified");
    let n = frame.shape.n;
    let rank = a.rank();
    let expected_rank = a.rows().min(a.cols());
    let b_rank = b.rank();
    let mut failure = None;
    let script_matches = if tag.pq_case == PqCase::BothNonzero {
        let script = case1_script(&frame.g, &frame.shape, &frame.sm)?;
        let ok = a.apply_script(&script)?.to_rows() == b.to_rows();
        if !ok {
            failure = Some(dump("A", &a));
        }
        Some(ok)
    } else {
        None
    };

    let (res, an) = res_data(&frame.shape)?;
    let mut det_checks = Vec::new();
    let (l_, n_) = (l as usize, n as usize);
    if tag.pq_case == PqCase::BothNonzero && l_ + 1 >= n_ {
        let idx: Vec<usize> = (0..n_ + l_ + 1).collect();
        let det = b.select_rows(&idx).det()?;
        det_checks.push(det_check("first n+l+1 rows", det, pow(&an, l_ + 2 - n_) * &res));
    }
    if tag.shape == Shape::UV00 && tag.pq_case == PqCase::BothZero && l_ >= n_ && l_ >= 1 {
        let idx: Vec<usize> = (0..n_ + l_).filter(|&i| i != l_ - 1).collect();
        let det = b.select_rows(&idx).det()?;
        det_checks.push(det_check("first n+l rows without row l-1", det, pow(&an, l_ - n_) * &res));
    }

    let bound = case_bound(&tag, n, l);
    let consistent = a.cols() - rank == bound as usize && b.dims() == a.dims();
    let verdict = rank == expected_rank
        && b_rank == expected_rank
        && consistent
        && script_matches != Some(false)
        && det_checks.iter().all(|c| c.holds);
    if !verdict && failure.is_none() {
        failure = Some(if b.dims() != a.dims() {
            format!("A is {:?} but B is {:?}; {}", a.dims(), b.dims(), dump("A", &a))
        } else {
            dump("A", &a)
        });
    }
    Ok(RankCertificate {
        m,
        shape: tag.shape,
        pq_case: tag.pq_case,
        swapped: frame.swapped,
        a_dims: a.dims(),
        rank,
        expected_rank,
        b_rank,
        script_matches,
        det_checks,
        bound,
        verdict,
        failure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSource {
    /// `S_{m-d}` is empty: every bracket of `S+_m` may survive.
    Count,
    /// `n = 0`: each relation kills one bracket.
    SingleTerm,
    /// The per-case count, backed by a rank certificate.
    Certified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub m: u32,
    pub value: u32,
    pub source: BoundSource,
    pub certified: bool,
}

pub fn dim_bound(g: &Grading, shape: &ShapeParams, m: u32) -> Result<BoundEntry> {
    let sm = compute_sm(g, shape, m);
    let count = sm.s_m_plus.len() as u32;
    if sm.sub.is_none() {
        return Ok(BoundEntry { m, value: count, source: BoundSource::Count, certified: true });
    }
    if shape.n == 0 {
        let a = relation_matrix(g, shape, &sm);
        let value = count - a.rank() as u32;
        return Ok(BoundEntry { m, value, source: BoundSource::SingleTerm, certified: true });
    }
    let cert = certify_max_rank(g, shape, m)?;
    Ok(BoundEntry { m, value: cert.bound, source: BoundSource::Certified, certified: cert.verdict })
}

/// `sum_m dim_bound(m) t^m`; fails if any per-case bound lacks its certificate.
pub fn bound_series(g: &Grading, shape: &ShapeParams, order: usize) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::zero(order);
    for m in 0..=order as u32 {
        let e = dim_bound(g, shape, m)?;
        if !e.certified {
            return Err(Error::Certificate(format!("rank certificate failed at m = {m}")));
        }
        s.set(m as usize, e.value as i64);
    }
    Ok(s)
}

/// Product formula the per-case counts add up to; needs `n >= 1`.
pub fn product_formula(g: &Grading, shape: &ShapeParams, order: usize) -> Result<TruncatedSeries> {
    if shape.n == 0 {
        return Err(Error::InvalidParameters("the product formula needs n >= 1".into()));
    }
    let (s, r, n) = (g.s as usize, g.r as usize, shape.n as usize);
    let run = |step: usize, count: usize| arithmetic_run(step, count, order);
    match (shape.u, shape.v) {
        (0, 0) => run(r, n * s - 1).mul(&run(s, n * r - 1)),
        (1, 1) => run(r, n * s + 1).mul(&run(s, n * r + 1)),
        (0, 1) => {
            let t_d = TruncatedSeries::from_terms(order, &[(shape.d as usize, 1)]);
            t_d.add(&run(s, n * r - 1).mul(&run(r, n * s + 1))?)
        }
        _ => product_formula(&g.swapped(), &shape.swapped(), order),
    }
}

/// `|S_m ∩ [1, imax] x [1, jmax]|`.
pub fn box_count(g: &Grading, m: u32, imax: u32, jmax: u32) -> usize {
    g.lattice_positive(m).into_iter().filter(|&(i, j)| i <= imax && j <= jmax).count()
}
