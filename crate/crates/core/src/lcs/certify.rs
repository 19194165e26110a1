//! Exact certificates for one degree.
//!
//! The modular computation proposes integer functionals on `A[m]`. They
//! are accepted only after checking, in exact arithmetic, that each one
//! vanishes on the full generating family of its subspace and that they are
//! independent (diagonal on the pivot words). That proves each dimension is
//! at most the modular value; the modular rank bounds it from below.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::dual::ModDegree;
use super::tower::{Level, Tower};
use crate::error::{Error, Result};
use crate::exactla::modp::{crt, reconstruct, reconstruct_big};
use crate::exactla::ExactMatrix;
use crate::ncalg::{Grading, NcPoly, Word};
use crate::rational::Rational;

/// Integer rows of one block (columns are the block's words).
#[derive(Debug, Clone)]
pub enum IntRows {
    Small(Vec<Vec<i64>>),
    Big(Vec<Vec<BigInt>>),
}

impl IntRows {
    pub fn len(&self) -> usize {
        match self {
            IntRows::Small(r) => r.len(),
            IntRows::Big(r) => r.len(),
        }
    }

    fn get(&self, i: usize, w: usize) -> BigInt {
        match self {
            IntRows::Small(r) => BigInt::from(r[i][w]),
            IntRows::Big(r) => r[i][w].clone(),
        }
    }

    /// Whether every row vanishes on `sum c_w e_w`.
    fn annihilates(&self, terms: &[(u32, i64)]) -> bool {
        match self {
            IntRows::Small(rows) => rows.iter().all(|row| {
                let mut acc = 0i128;
                for &(w, c) in terms {
                    acc += row[w as usize] as i128 * c as i128;
                }
                acc == 0
            }),
            IntRows::Big(rows) => rows.iter().all(|row| {
                terms.iter().fold(BigInt::zero(), |acc, &(w, c)| acc + &row[w as usize] * c).is_zero()
            }),
        }
    }
}

/// Word layout of a degree: block and in-block position of every word.
#[derive(Debug, Clone)]
pub struct Layout {
    pub index: HashMap<Word, u32>,
    pub block: Vec<u32>,
    pub local: Vec<u32>,
}

impl Layout {
    fn of(lvl: &Level) -> Self {
        Layout { index: lvl.index.clone(), block: lvl.word_block.clone(), local: lvl.word_local.clone() }
    }

    fn place(&self, w: &Word) -> (u32, u32) {
        let i = self.index[w] as usize;
        (self.block[i], self.local[i])
    }
}

/// Exact functionals on `A[m]` whose common kernel is a given subspace.
#[derive(Debug, Clone)]
pub struct Functionals {
    pub blocks: Vec<IntRows>,
}

impl Functionals {
    pub fn count(&self) -> usize {
        self.blocks.iter().map(IntRows::len).sum()
    }

    /// Values of all functionals on a homogeneous polynomial of this degree.
    fn evaluate(&self, layout: &Layout, e: &NcPoly) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for (b, rows) in self.blocks.iter().enumerate() {
            let mut vals = vec![Rational::zero(); rows.len()];
            for (w, c) in e.terms() {
                let (wb, wl) = layout.place(w);
                if wb as usize != b {
                    continue;
                }
                for (i, v) in vals.iter_mut().enumerate() {
                    *v += c * Rational::from_integer(rows.get(i, wl as usize));
                }
            }
            out.extend(vals);
        }
        out
    }
}

/// Exact normal forms of every word of the degree.
#[derive(Debug, Clone)]
pub struct NormalForms {
    pub nf: Vec<Vec<(u32, Rational)>>,
}

/// Everything proven about one degree.
#[derive(Debug, Clone)]
pub struct DegreeCert {
    pub m: u32,
    pub n_words: usize,
    pub dim_quotient: usize,
    pub primes: usize,
    layout: Layout,
    pub l2: Functionals,
    pub l3: Functionals,
    ideal: Option<NormalForms>,
}

impl DegreeCert {
    /// Codimension of `L2 + I` in `A[m]`.
    pub fn codim_l2(&self) -> usize {
        self.l2.count()
    }

    pub fn codim_l3(&self) -> usize {
        self.l3.count()
    }

    pub fn dim_ideal(&self) -> usize {
        self.n_words - self.dim_quotient
    }

    pub fn dim_l2_plus(&self) -> usize {
        self.n_words - self.codim_l2()
    }

    pub fn dim_l3_plus(&self) -> usize {
        self.n_words - self.codim_l3()
    }

    pub fn dim_b2(&self) -> usize {
        self.codim_l3() - self.codim_l2()
    }

    fn check_degree(&self, e: &NcPoly, g: &Grading) -> Result<()> {
        if e.is_zero() {
            return Ok(());
        }
        match e.homogeneous_degree(g) {
            Some(d) if d == self.m => Ok(()),
            _ => Err(Error::NotHomogeneous),
        }
    }

    /// Class of `e` in `A[m] / (L3 + I)[m]`, as functional values. The
    /// classes of elements of `L2 + I` span a space of dimension `dim_b2`.
    pub fn b2_class(&self, e: &NcPoly, g: &Grading) -> Result<Vec<Rational>> {
        self.check_degree(e, g)?;
        Ok(self.l3.evaluate(&self.layout, e))
    }

    pub fn in_l3_plus(&self, e: &NcPoly, g: &Grading) -> Result<bool> {
        Ok(self.b2_class(e, g)?.iter().all(Zero::is_zero))
    }

    pub fn in_l2_plus(&self, e: &NcPoly, g: &Grading) -> Result<bool> {
        self.check_degree(e, g)?;
        Ok(self.l2.evaluate(&self.layout, e).iter().all(Zero::is_zero))
    }

    pub fn in_ideal(&self, e: &NcPoly, g: &Grading) -> Result<bool> {
        self.check_degree(e, g)?;
        let Some(nf) = &self.ideal else { return Ok(e.is_zero()) };
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (w, c) in e.terms() {
            for (j, a) in &nf.nf[self.layout.index[w] as usize] {
                *acc.entry(*j).or_insert_with(Rational::zero) += c * a;
            }
        }
        Ok(acc.values().all(Zero::is_zero))
    }

    /// Exact rank of a family modulo `L3 + I`.
    pub fn rank_mod_l3(&self, family: &[NcPoly], g: &Grading) -> Result<usize> {
        let rows = family.iter().map(|e| self.b2_class(e, g)).collect::<Result<Vec<_>>>()?;
        if rows.is_empty() || self.codim_l3() == 0 {
            return Ok(0);
        }
        Ok(ExactMatrix::from_rows(rows)?.rank())
    }
}

/// Integer relation `sum c_t t` with a nonzero constant-free support.
pub type IntRelation = Vec<(Word, i64)>;

/// Lifts residues (one slice per prime) to rationals.
fn lift_rationals(res: &[u64], primes: &[u64]) -> Option<Vec<Rational>> {
    if primes.len() == 1 {
        let p = primes[0];
        return res
            .iter()
            .map(|&a| reconstruct(a, p).map(|(n, d)| Rational::new(n.into(), d.into())))
            .collect();
    }
    let n = res.len() / primes.len();
    (0..n)
        .map(|i| {
            let r: Vec<u64> = (0..primes.len()).map(|k| res[k * n + i]).collect();
            let (x, m) = crt(&r, primes);
            reconstruct_big(&x, &m)
        })
        .collect()
}

/// Fast path for one prime: `(numerator, denominator)` pairs scaled to integers.
fn lift_row_small(res: &[u64], p: u64) -> Option<Option<Vec<i64>>> {
    let mut pairs = Vec::with_capacity(res.len());
    let mut den: i128 = 1;
    for &a in res {
        if a == 0 {
            pairs.push((0i64, 1i64));
            continue;
        }
        let (n, d) = reconstruct(a, p)?;
        den = den.lcm(&(d as i128));
        if den > i64::MAX as i128 {
            return Some(None);
        }
        pairs.push((n, d));
    }
    let mut out = Vec::with_capacity(pairs.len());
    for (n, d) in pairs {
        match i64::try_from(n as i128 * (den / d as i128)) {
            Ok(v) => out.push(v),
            Err(_) => return Some(None),
        }
    }
    let g = out.iter().fold(0i64, |g, &v| g.gcd(&v));
    if g > 1 {
        out.iter_mut().for_each(|v| *v /= g);
    }
    Some(Some(out))
}

fn integer_row(q: Vec<Rational>) -> Vec<BigInt> {
    let den = q.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
    let mut row: Vec<BigInt> = q.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g > BigInt::one() {
        row.iter_mut().for_each(|v| *v /= &g);
    }
    row
}

/// Residue tables of one block across primes, lifted to exact integer rows.
fn lift_block(tables: &[&Vec<Vec<u64>>], primes: &[u64]) -> Option<IntRows> {
    let rows = tables[0].len();
    if primes.len() == 1 {
        let mut small = Vec::with_capacity(rows);
        let mut overflow = false;
        for r in tables[0] {
            match lift_row_small(r, primes[0])? {
                Some(v) if !overflow => small.push(v),
                _ => {
                    overflow = true;
                    break;
                }
            }
        }
        if !overflow {
            return Some(IntRows::Small(small));
        }
    }
    let mut big = Vec::with_capacity(rows);
    for i in 0..rows {
        let res: Vec<u64> = tables.iter().flat_map(|t| t[i].iter().copied()).collect();
        big.push(integer_row(lift_rationals(&res, primes)?));
    }
    let fits = big.iter().all(|r| r.iter().all(|v| v.to_i64().is_some()));
    if fits {
        Some(IntRows::Small(big.into_iter().map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect()).collect()))
    } else {
        Some(IntRows::Big(big))
    }
}

fn lift_functionals(mods: &[&ModDegree], primes: &[u64], l3: bool) -> Option<Functionals> {
    let nb = mods[0].l2.len();
    let blocks = (0..nb)
        .map(|b| {
            let tables: Vec<&Vec<Vec<u64>>> =
                mods.iter().map(|d| if l3 { &d.l3[b].values } else { &d.l2[b].values }).collect();
            if tables[0].is_empty() {
                Some(IntRows::Small(Vec::new()))
            } else {
                lift_block(&tables, primes)
            }
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Functionals { blocks })
}

fn lift_normal_forms(levels: &[&Level], primes: &[u64]) -> Option<NormalForms> {
    let n = levels[0].nf.len();
    let nf = (0..n)
        .map(|w| {
            let mut cols: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
            for (k, lvl) in levels.iter().enumerate() {
                for &(j, a) in &lvl.nf[w] {
                    cols.entry(j).or_insert_with(|| vec![0; levels.len()])[k] = a;
                }
            }
            cols.into_iter()
                .map(|(j, r)| {
                    let q = lift_rationals(&r, primes)?;
                    Some((j, q.into_iter().next().unwrap()))
                })
                .filter(|e| e.as_ref().is_none_or(|(_, q)| !q.is_zero()))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(NormalForms { nf })
}

/// Calls `f` on each family element; stops at the first failure.
/// Elements are sparse `(word, coefficient)` lists, possibly with repeats.
fn all_l2_family(words: &[Vec<Word>], m: u32, f: impl Fn(&[(Word, i64)]) -> bool + Sync) -> bool {
    (1..m).into_par_iter().all(|a| {
        words[a as usize]
            .iter()
            .all(|w1| words[(m - a) as usize].iter().all(|w2| f(&[(w1.concat(w2), 1), (w2.concat(w1), -1)])))
    })
}

fn all_l3_family(words: &[Vec<Word>], m: u32, f: impl Fn(&[(Word, i64)]) -> bool + Sync) -> bool {
    let triples: Vec<(u32, u32)> = (1..m).flat_map(|a| (1..m - a).map(move |b| (a, b))).collect();
    triples.into_par_iter().all(|(a, b)| {
        let c = (m - a - b) as usize;
        words[a as usize].iter().all(|w1| {
            words[b as usize].iter().all(|w2| {
                words[c].iter().all(|w3| {
                    let w23 = w2.concat(w3);
                    let w32 = w3.concat(w2);
                    f(&[(w1.concat(&w23), 1), (w1.concat(&w32), -1), (w23.concat(w1), -1), (w32.concat(w1), 1)])
                })
            })
        })
    })
}

fn all_ideal_family(words: &[Vec<Word>], m: u32, rel: &IntRelation, d: u32, f: impl Fn(&[(Word, i64)]) -> bool + Sync) -> bool {
    if m < d {
        return true;
    }
    let rest = m - d;
    (0..=rest).into_par_iter().all(|a| {
        words[a as usize].iter().all(|w1| {
            words[(rest - a) as usize].iter().all(|w2| {
                let terms: Vec<(Word, i64)> = rel.iter().map(|(t, c)| (w1.concat(t).concat(w2), *c)).collect();
                f(&terms)
            })
        })
    })
}

/// Functionals vanish on an element given by words.
fn vanishes(fs: &Functionals, layout: &Layout, terms: &[(Word, i64)]) -> bool {
    let (b, _) = layout.place(&terms[0].0);
    let local: Vec<(u32, i64)> = terms
        .iter()
        .map(|(w, c)| {
            let (wb, wl) = layout.place(w);
            debug_assert_eq!(wb, b);
            (wl, *c)
        })
        .collect();
    fs.blocks[b as usize].annihilates(&local)
}

/// Rows restricted to the pivot standard words form a nonsingular diagonal.
fn independent(fs: &Functionals, mods: &ModDegree, l3: bool, lvl: &Level, layout: &Layout) -> bool {
    let duals = if l3 { &mods.l3 } else { &mods.l2 };
    // block-local standard index -> word
    let mut std_of: Vec<Vec<Word>> = vec![Vec::new(); lvl.block_keys.len()];
    for (j, w) in lvl.std.iter().enumerate() {
        std_of[lvl.std_block[j] as usize].push(*w);
    }
    duals.iter().enumerate().all(|(b, dual)| {
        let rows = &fs.blocks[b];
        dual.pivots.iter().enumerate().all(|(j, &c)| {
            let (_, wl) = layout.place(&std_of[b][c]);
            (0..rows.len()).all(|i| rows.get(i, wl as usize).is_zero() != (i == j))
        })
    })
}

/// Proposes and checks a certificate from the modular data of several primes.
/// `None` means the data did not lift consistently; more primes may help.
pub(crate) fn certify(
    towers: &[&Tower],
    mods: &[&ModDegree],
    m: u32,
    words: &[Vec<Word>],
    rel: Option<(&IntRelation, u32)>,
) -> Option<DegreeCert> {
    let primes: Vec<u64> = towers.iter().map(|t| t.field.modulus()).collect();
    let lvl = towers[0].level(m);
    let layout = Layout::of(lvl);
    let l2 = lift_functionals(mods, &primes, false)?;
    let l3 = lift_functionals(mods, &primes, true)?;

    if !independent(&l2, mods[0], false, lvl, &layout) || !independent(&l3, mods[0], true, lvl, &layout) {
        return None;
    }
    let ok2 = all_l2_family(words, m, |t| vanishes(&l2, &layout, t));
    let ok3 = all_l3_family(words, m, |t| vanishes(&l3, &layout, t));
    if !ok2 || !ok3 {
        return None;
    }

    let ideal = match rel {
        None => None,
        Some((rel, d)) => {
            let ok = all_ideal_family(words, m, rel, d, |t| vanishes(&l2, &layout, t) && vanishes(&l3, &layout, t));
            if !ok {
                return None;
            }
            let levels: Vec<&Level> = towers.iter().map(|t| t.level(m)).collect();
            let nf = lift_normal_forms(&levels, &primes)?;
            let unit = lvl.std.iter().enumerate().all(|(j, w)| {
                let v = &nf.nf[layout.index[w] as usize];
                v.len() == 1 && v[0].0 == j as u32 && v[0].1.is_one()
            });
            let kills = all_ideal_family(words, m, rel, d, |t| {
                let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
                for (w, c) in t {
                    for (j, a) in &nf.nf[layout.index[w] as usize] {
                        *acc.entry(*j).or_insert_with(Rational::zero) += a * Rational::from_integer((*c).into());
                    }
                }
                acc.values().all(Zero::is_zero)
            });
            if !unit || !kills {
                return None;
            }
            Some(nf)
        }
    };
    Some(DegreeCert {
        m,
        n_words: lvl.words.len(),
        dim_quotient: lvl.std.len(),
        primes: primes.len(),
        layout,
        l2,
        l3,
        ideal,
    })
}

/// Modular data whose shape agrees across primes. Unlucky primes can only
/// enlarge the quotient and the codimensions, so the smallest shape wins.
pub(crate) fn consistent<'a>(data: &'a [(&'a Tower, ModDegree)], m: u32) -> Vec<usize> {
    let key = |(t, d): &(&Tower, ModDegree)| {
        let (k2, k3) = d.codims();
        (t.level(m).std.len(), k2, k3)
    };
    let best = data.iter().map(key).min().expect("at least one prime");
    let sig = |(t, d): &(&Tower, ModDegree)| (t.level(m).std.clone(), d.signature());
    let reference = data.iter().find(|e| key(e) == best).map(sig).expect("present");
    (0..data.len()).filter(|&i| key(&data[i]) == best && sig(&data[i]) == reference).collect()
}
