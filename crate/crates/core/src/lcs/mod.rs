//! Exact dimensions of `B2 = L2/L3` for the free algebra and for `A/<P>`,
//! degree by degree.
//!
//! Everything is computed inside the free algebra:
//! `dim B2(A/P)[m] = dim (L2 + I)[m] - dim (L3 + I)[m]`. Dimensions come from
//! a modular computation and are then certified in exact arithmetic (see
//! [`certify`]).

mod certify;
mod dual;
pub mod lemmas;
pub mod naive;
mod tower;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use certify::DegreeCert;
use certify::IntRelation;
use tower::{Relation, Tower};

use crate::error::{Error, Result};
use crate::exactla::modp::{random_prime, Field};
use crate::ncalg::{words_up_to, Grading, NcPoly, Word};
use crate::rational::common_denominator;

pub const DEFAULT_SEED: u64 = 20_190_815;

/// Largest number of words in a single degree the engine accepts.
pub const WORD_LIMIT: usize = 1 << 14;

const MAX_PRIMES: usize = 6;

/// Dimensions at degree `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub m: u32,
    #[serde(rename = "dim_L2")]
    pub dim_l2: usize,
    #[serde(rename = "dim_L3")]
    pub dim_l3: usize,
    pub dim_ideal: usize,
    #[serde(rename = "dim_L2_plus_ideal")]
    pub dim_l2_plus_ideal: usize,
    #[serde(rename = "dim_L3_plus_ideal")]
    pub dim_l3_plus_ideal: usize,
    #[serde(rename = "dim_B2")]
    pub dim_b2: usize,
}

impl DegreeReport {
    fn from_certs(free: &DegreeCert, quot: &DegreeCert) -> Self {
        DegreeReport {
            m: quot.m,
            dim_l2: free.dim_l2_plus(),
            dim_l3: free.dim_l3_plus(),
            dim_ideal: quot.dim_ideal(),
            dim_l2_plus_ideal: quot.dim_l2_plus(),
            dim_l3_plus_ideal: quot.dim_l3_plus(),
            dim_b2: quot.dim_b2(),
        }
    }
}

/// Primitive integer multiple of `p`.
fn integer_relation(p: &NcPoly) -> Result<IntRelation> {
    let den = common_denominator(p.terms().map(|(_, c)| c));
    let nums: Vec<(Word, BigInt)> = p.terms().map(|(w, c)| (*w, (c * crate::rational::Rational::from_integer(den.clone())).to_integer())).collect();
    let g = nums.iter().fold(BigInt::zero(), |g, (_, c)| num_integer::Integer::gcd(&g, c));
    nums.into_iter()
        .map(|(w, c)| {
            (&c / &g)
                .to_i64()
                .map(|c| (w, c))
                .ok_or_else(|| Error::InvalidParameters("relation coefficients are too large".into()))
        })
        .collect()
}

/// Certified computations for the free algebra or one quotient `A/<P>`.
pub struct Analyzer {
    g: Grading,
    relation: Option<(IntRelation, u32)>,
    blocked: bool,
    rng: ChaCha8Rng,
    towers: Vec<Tower>,
    certs: BTreeMap<u32, DegreeCert>,
}

impl Analyzer {
    pub fn free(g: Grading) -> Self {
        Analyzer::build(g, None, DEFAULT_SEED)
    }

    /// Rejects the zero polynomial and inhomogeneous `p`.
    pub fn quotient(p: &NcPoly, g: Grading) -> Result<Self> {
        Analyzer::quotient_seeded(p, g, DEFAULT_SEED)
    }

    pub fn quotient_seeded(p: &NcPoly, g: Grading, seed: u64) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = p.homogeneous_degree(&g).ok_or(Error::NotHomogeneous)?;
        if d == 0 {
            return Err(Error::ConstantPolynomial);
        }
        Ok(Analyzer::build(g, Some((integer_relation(p)?, d)), seed))
    }

    pub fn free_seeded(g: Grading, seed: u64) -> Self {
        Analyzer::build(g, None, seed)
    }

    fn build(g: Grading, relation: Option<(IntRelation, u32)>, seed: u64) -> Self {
        // blocks by X-count are preserved when every term of P has the same one
        let blocked = match &relation {
            None => true,
            Some((rel, _)) => rel.iter().all(|(w, _)| w.count_x() == rel[0].0.count_x()),
        };
        Analyzer { g, relation, blocked, rng: ChaCha8Rng::seed_from_u64(seed), towers: Vec::new(), certs: BTreeMap::new() }
    }

    pub fn grading(&self) -> Grading {
        self.g
    }

    pub fn is_free(&self) -> bool {
        self.relation.is_none()
    }

    fn add_tower(&mut self, max: u32) {
        let used: Vec<u64> = self.towers.iter().map(|t| t.field.modulus()).collect();
        let p = loop {
            let p = random_prime(&mut self.rng);
            if !used.contains(&p) {
                break p;
            }
        };
        let field = Field::new(p);
        let rel = self.relation.as_ref().map(|(rel, d)| Relation {
            terms: rel.iter().map(|(w, c)| (*w, field.from_i64(*c))).collect(),
            degree: *d,
        });
        let mut t = Tower::new(field, self.g, rel, self.blocked);
        t.extend_to(max);
        self.towers.push(t);
    }

    /// Certifies all of `degrees` (in parallel).
    pub fn certify(&mut self, degrees: impl IntoIterator<Item = u32>) -> Result<()> {
        let mut todo: Vec<u32> = degrees.into_iter().filter(|m| !self.certs.contains_key(m)).collect();
        todo.sort_unstable();
        todo.dedup();
        let Some(&max) = todo.last() else { return Ok(()) };
        let words = words_up_to(&self.g, max);
        if let Some(m) = todo.iter().find(|&&m| words[m as usize].len() > WORD_LIMIT) {
            return Err(Error::DegreeLimit(format!(
                "degree {m} has {} words (limit {WORD_LIMIT})",
                words[*m as usize].len()
            )));
        }
        if self.towers.is_empty() {
            self.add_tower(max);
        }
        for t in &mut self.towers {
            t.extend_to(max);
        }
        loop {
            let towers = &self.towers;
            let rel = self.relation.as_ref().map(|(r, d)| (r, *d));
            let results: Vec<(u32, Option<DegreeCert>)> = todo
                .par_iter()
                .map(|&m| {
                    let data: Vec<(&Tower, dual::ModDegree)> =
                        towers.par_iter().map(|t| (t, dual::mod_degree(t, m))).collect();
                    let keep = certify::consistent(&data, m);
                    let ts: Vec<&Tower> = keep.iter().map(|&i| data[i].0).collect();
                    let ms: Vec<&dual::ModDegree> = keep.iter().map(|&i| &data[i].1).collect();
                    (m, certify::certify(&ts, &ms, m, &words, rel))
                })
                .collect();
            let mut failed = Vec::new();
            for (m, c) in results {
                match c {
                    Some(c) => {
                        self.certs.insert(m, c);
                    }
                    None => failed.push(m),
                }
            }
            if failed.is_empty() {
                return Ok(());
            }
            if self.towers.len() >= MAX_PRIMES {
                return Err(Error::Certificate(format!("degrees {failed:?} could not be certified")));
            }
            self.add_tower(max);
            todo = failed;
        }
    }

    pub fn cert(&mut self, m: u32) -> Result<&DegreeCert> {
        self.certify([m])?;
        Ok(&self.certs[&m])
    }
}

/// `dim B2(A)[m]` for the free algebra.
pub fn dim_b2_free(g: &Grading, m: u32) -> Result<usize> {
    Ok(Analyzer::free(*g).cert(m)?.dim_b2())
}

/// Full report at degree `m` for `A/<P>`.
pub fn dim_b2_quotient(p: &NcPoly, g: &Grading, m: u32) -> Result<DegreeReport> {
    Ok(degree_reports(p, g, m, DEFAULT_SEED)?.pop().expect("degree m present"))
}

/// Reports for `m = 1..=max`, ordered by degree.
pub fn degree_reports(p: &NcPoly, g: &Grading, max: u32, seed: u64) -> Result<Vec<DegreeReport>> {
    let mut quot = Analyzer::quotient_seeded(p, *g, seed)?;
    let mut free = Analyzer::free_seeded(*g, seed);
    reports_with(&mut free, &mut quot, max)
}

/// Reports for `m = 1..=max` from existing analyzers, reusing their work.
pub fn reports_with(free: &mut Analyzer, quot: &mut Analyzer, max: u32) -> Result<Vec<DegreeReport>> {
    let (a, b) = rayon::join(|| free.certify(1..=max), || quot.certify(1..=max));
    a?;
    b?;
    (1..=max).map(|m| Ok(DegreeReport::from_certs(&free.certs[&m], &quot.certs[&m]))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> NcPoly {
        NcPoly::from_json_str(s).unwrap()
    }

    #[test]
    fn free_examples() {
        let g = Grading::standard();
        assert_eq!(dim_b2_free(&g, 2).unwrap(), 1);
        assert_eq!(dim_b2_free(&g, 5).unwrap(), 4);
        assert_eq!(dim_b2_free(&Grading::new(2, 3).unwrap(), 4).unwrap(), 0);
    }

    #[test]
    fn quotient_reports_small() {
        let g = Grading::standard();
        let p = poly(r#"{"XY": 1, "YX": 1}"#);
        let reps = degree_reports(&p, &g, 7, DEFAULT_SEED).unwrap();
        let b2: Vec<usize> = reps.iter().map(|r| r.dim_b2).collect();
        assert_eq!(b2, vec![0, 1, 0, 0, 0, 0, 0]);
        for r in &reps {
            assert!(r.dim_l3 <= r.dim_l2);
            assert!(r.dim_l3_plus_ideal <= r.dim_l2_plus_ideal);
        }
    }

    #[test]
    fn rejects_bad_relations() {
        let g = Grading::standard();
        assert_eq!(Analyzer::quotient(&NcPoly::zero(), g).err(), Some(Error::ZeroPolynomial));
        assert_eq!(Analyzer::quotient(&poly(r#"{"XY": 1, "Y": 1}"#), g).err(), Some(Error::NotHomogeneous));
    }

    #[test]
    fn membership_is_exact() {
        let g = Grading::standard();
        let mut a = Analyzer::free(g);
        let c = a.cert(3).unwrap();
        // [X, [X, Y]] lies in L3, [XX, Y] does not
        let xxy = poly(r#"{"XXY": 1, "XYX": -2, "YXX": 1}"#);
        assert!(c.in_l3_plus(&xxy, &g).unwrap());
        let b = poly(r#"{"XXY": 1, "YXX": -1}"#);
        assert!(!c.in_l3_plus(&b, &g).unwrap());
        assert!(c.in_l2_plus(&b, &g).unwrap());
        assert!(!c.in_l2_plus(&poly(r#"{"XXY": 1}"#), &g).unwrap());
    }

    #[test]
    fn agrees_with_direct_ranks() {
        let cases = [
            (r#"{"XXX": 1, "YY": 1}"#, Grading::new(2, 3).unwrap(), 13),
            (r#"{"XX": 1, "YY": -1}"#, Grading::standard(), 6),
            (r#"{"XYX": 1, "YYY": 1}"#, Grading::standard(), 6),
            (r#"{"XY": 1, "YX": 1}"#, Grading::standard(), 6),
            (r#"{"XY": 2, "YX": -3, "XX": "1/2"}"#, Grading::standard(), 5),
            (r#"{"XXY": 1}"#, Grading::standard(), 6),
        ];
        for (p, g, max) in cases {
            let p = poly(p);
            let fast = degree_reports(&p, &g, max, 7).unwrap();
            for r in &fast {
                assert_eq!(*r, naive::naive_report(Some(&p), &g, r.m).unwrap(), "{p} at m = {}", r.m);
            }
        }
    }
}
