//! Identities among brackets in `B2`, checked by exact membership tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Analyzer, DEFAULT_SEED};
use crate::cpoly::{abelianize, check_square_free, ShapeParams};
use crate::error::{Error, Result};
use crate::ncalg::{commutator, multiply, Grading, Letter, NcPoly, Word};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub identity: String,
    pub instance: String,
    pub degree: u32,
    pub holds: bool,
}

fn pow(a: &NcPoly, k: u32) -> NcPoly {
    (0..k).fold(NcPoly::one(), |acc, _| multiply(&acc, a))
}

fn product<'a>(it: impl IntoIterator<Item = &'a NcPoly>) -> NcPoly {
    it.into_iter().fold(NcPoly::one(), |acc, q| multiply(&acc, q))
}

/// `[Q, q1...qn] - sum_i [q_{i+1}...q_n Q q_1...q_{i-1}, q_i]`.
pub fn identity_i(big_q: &NcPoly, qs: &[NcPoly]) -> NcPoly {
    let mut diff = commutator(big_q, &product(qs));
    for i in 0..qs.len() {
        let left = multiply(&multiply(&product(&qs[i + 1..]), big_q), &product(&qs[..i]));
        diff = &diff - &commutator(&left, &qs[i]);
    }
    diff
}

/// `[ab, c] - [ba, c]`.
pub fn identity_ii(a: &NcPoly, b: &NcPoly, c: &NcPoly) -> NcPoly {
    &commutator(&multiply(a, b), c) - &commutator(&multiply(b, a), c)
}

/// `(l + k)[a^l b, a^k] - k[b, a^{l+k}]`.
pub fn identity_iii(a: &NcPoly, b: &NcPoly, l: u32, k: u32) -> NcPoly {
    let lhs = commutator(&multiply(&pow(a, l), b), &pow(a, k)).scale(&rational::int((l + k) as i64));
    let rhs = commutator(b, &pow(a, l + k)).scale(&rational::int(k as i64));
    &lhs - &rhs
}

/// `[a^{i1} q1 ... a^{in} qn, a^i] - [a^{i1+...+in} q1...qn, a^i]`.
pub fn identity_iv(a: &NcPoly, qs: &[NcPoly], exps: &[u32], i: u32) -> NcPoly {
    assert_eq!(qs.len(), exps.len());
    let spread = qs.iter().zip(exps).fold(NcPoly::one(), |acc, (q, &e)| multiply(&multiply(&acc, &pow(a, e)), q));
    let gathered = multiply(&pow(a, exps.iter().sum()), &product(qs));
    let ai = pow(a, i);
    &commutator(&spread, &ai) - &commutator(&gathered, &ai)
}

/// Whether every homogeneous part of `e` lies in `L3 + I` of `analyzer`.
pub fn in_l3_plus(analyzer: &mut Analyzer, e: &NcPoly) -> Result<bool> {
    let g = analyzer.grading();
    let mut degrees: Vec<u32> = e.terms().map(|(w, _)| w.degree(&g)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    analyzer.certify(degrees.iter().copied())?;
    for m in degrees {
        let part = e.homogeneous_part(&g, m);
        if !analyzer.cert(m)?.in_l3_plus(&part, &g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<Letter> = (0..len).map(|_| if rng.gen() { Letter::X } else { Letter::Y }).collect();
    Word::from_letters(&letters)
}

fn words_str(ws: &[Word]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
}

/// One random instance of identity `which` of degree at most `bound`.
fn random_instance<R: Rng>(rng: &mut R, g: &Grading, bound: u32, which: usize) -> Option<(String, NcPoly)> {
    let p = NcPoly::from_word;
    let deg = |ws: &[(Word, u32)]| ws.iter().map(|(w, k)| w.degree(g) * k).sum::<u32>();
    for _ in 0..1000 {
        let out = match which {
            0 => {
                let q = random_word(rng, 3);
                let n = rng.gen_range(1..=3);
                let qs: Vec<Word> = (0..n).map(|_| random_word(rng, 2)).collect();
                let mut parts: Vec<(Word, u32)> = qs.iter().map(|w| (*w, 1)).collect();
                parts.push((q, 1));
                if deg(&parts) > bound {
                    continue;
                }
                let polys: Vec<NcPoly> = qs.iter().map(|w| p(*w)).collect();
                (format!("Q={q}; q={}", words_str(&qs)), identity_i(&p(q), &polys))
            }
            1 => {
                let (a, b, c) = (random_word(rng, 3), random_word(rng, 3), random_word(rng, 3));
                if deg(&[(a, 1), (b, 1), (c, 1)]) > bound {
                    continue;
                }
                (format!("a={a}; b={b}; c={c}"), identity_ii(&p(a), &p(b), &p(c)))
            }
            2 => {
                let (a, b) = (random_word(rng, 2), random_word(rng, 3));
                let (l, k) = (rng.gen_range(0..=3), rng.gen_range(1..=3));
                if deg(&[(a, l + k), (b, 1)]) > bound {
                    continue;
                }
                (format!("a={a}; b={b}; l={l}; k={k}"), identity_iii(&p(a), &p(b), l, k))
            }
            _ => {
                let a = random_word(rng, 2);
                let n = rng.gen_range(1..=3);
                let qs: Vec<Word> = (0..n).map(|_| random_word(rng, 2)).collect();
                let exps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                let i = rng.gen_range(1..=2);
                let mut parts: Vec<(Word, u32)> = qs.iter().map(|w| (*w, 1)).collect();
                parts.push((a, exps.iter().sum::<u32>() + i));
                if deg(&parts) > bound {
                    continue;
                }
                let polys: Vec<NcPoly> = qs.iter().map(|w| p(*w)).collect();
                (
                    format!("a={a}; q={}; exps={exps:?}; i={i}", words_str(&qs)),
                    identity_iv(&p(a), &polys, &exps, i),
                )
            }
        };
        return Some(out);
    }
    None
}

const NAMES: [&str; 4] = ["i", "ii", "iii", "iv"];

/// Random instances of identities (i)-(iv) in the free algebra, 30 each.
pub fn check_b2rels(g: &Grading, bound: u32) -> Result<Vec<LemmaVerdict>> {
    check_b2rels_with(g, bound, 30, DEFAULT_SEED)
}

pub fn check_b2rels_with(g: &Grading, bound: u32, per_identity: usize, seed: u64) -> Result<Vec<LemmaVerdict>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut free = Analyzer::free_seeded(*g, seed);
    free.certify(1..=bound)?;
    let mut out = Vec::new();
    for (which, name) in NAMES.iter().enumerate() {
        for _ in 0..per_identity {
            let Some((instance, diff)) = random_instance(&mut rng, g, bound, which) else {
                return Err(Error::InvalidParameters(format!("no instance of identity ({name}) fits degree {bound}")));
            };
            let degree = diff.terms().map(|(w, _)| w.degree(g)).max().unwrap_or(0);
            let holds = in_l3_plus(&mut free, &diff)?;
            out.push(LemmaVerdict { identity: name.to_string(), instance, degree, holds });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketDepVerdict {
    pub i: u32,
    pub j: u32,
    /// 1 for the `j + v_k` weights, 2 for the `i + u_k` weights.
    pub statement: u8,
    pub degree: u32,
    pub vanishes: bool,
}

/// `[X^a, Y^b]`.
pub fn xy_bracket(a: u32, b: u32) -> NcPoly {
    commutator(&NcPoly::from_word(Word::power(Letter::X, a as usize)), &NcPoly::from_word(Word::power(Letter::Y, b as usize)))
}

/// `sum_k a_k / w_k [X^{i+u_k}, Y^{j+v_k}]` with `w_k = j + v_k` (statement 1)
/// or `w_k = i + u_k` (statement 2).
pub fn bracketdep_combination(shape: &ShapeParams, g: &Grading, i: u32, j: u32, statement: u8) -> NcPoly {
    let mut out = NcPoly::zero();
    for (k, a) in shape.a.iter().enumerate() {
        let (uk, vk) = (shape.u_k(g, k as u32), shape.v_k(g, k as u32));
        let w = if statement == 1 { j + vk } else { i + uk };
        let c = a / Rational::from_integer(w.into());
        out = &out + &xy_bracket(i + uk, j + vk).scale(&c);
    }
    out
}

/// Bracket relations of `A/<P>`, tested against a shared analyzer.
pub struct BracketDepChecker {
    g: Grading,
    shape: ShapeParams,
    analyzer: Analyzer,
}

impl BracketDepChecker {
    /// Needs `P_ab` square-free for the grading.
    pub fn new(p: &NcPoly, g: &Grading, seed: u64) -> Result<Self> {
        let shape = check_square_free(&abelianize(p), g)?;
        Ok(BracketDepChecker { g: *g, shape, analyzer: Analyzer::quotient_seeded(p, *g, seed)? })
    }

    pub fn shape(&self) -> &ShapeParams {
        &self.shape
    }

    /// Every statement whose hypothesis `(i, j)` satisfies.
    pub fn check(&mut self, i: u32, j: u32) -> Result<Vec<BracketDepVerdict>> {
        let mut statements = Vec::new();
        if j >= 1 {
            statements.push(1);
        }
        if i >= 1 {
            statements.push(2);
        }
        if statements.is_empty() {
            return Err(Error::InvalidParameters("need j >= 1 or i >= 1".into()));
        }
        let degree = self.g.degree_of(i, j) + self.shape.d;
        statements
            .into_iter()
            .map(|st| {
                let e = bracketdep_combination(&self.shape, &self.g, i, j, st);
                let vanishes = self.analyzer.cert(degree)?.in_l3_plus(&e, &self.g)?;
                Ok(BracketDepVerdict { i, j, statement: st, degree, vanishes })
            })
            .collect()
    }

    /// `count` random admissible `(i, j)` with degree at most `max_degree`.
    pub fn check_random(&mut self, count: usize, max_degree: u32, seed: u64) -> Result<Vec<BracketDepVerdict>> {
        let d = self.shape.d;
        if max_degree < d + self.g.s.min(self.g.r) {
            return Err(Error::InvalidParameters(format!("max degree {max_degree} leaves no room above d = {d}")));
        }
        let room = max_degree - d;
        let pairs: Vec<(u32, u32)> = (0..=room)
            .flat_map(|m| self.g.lattice(m))
            .filter(|&(i, j)| i >= 1 || j >= 1)
            .collect();
        let g = self.g;
        self.analyzer.certify(pairs.iter().map(|&(i, j)| g.degree_of(i, j) + d))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for _ in 0..count {
            let (i, j) = pairs[rng.gen_range(0..pairs.len())];
            out.extend(self.check(i, j)?);
        }
        Ok(out)
    }
}

/// One-off form of [`BracketDepChecker::check`].
pub fn check_bracketdep(p: &NcPoly, g: &Grading, i: u32, j: u32) -> Result<Vec<BracketDepVerdict>> {
    BracketDepChecker::new(p, g, DEFAULT_SEED)?.check(i, j)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningVerdict {
    pub m: u32,
    pub brackets: usize,
    pub rank: usize,
    pub dim_b2: usize,
    pub holds: bool,
}

/// Whether `[X^i, Y^j]`, `(i, j)` in `S+_m`, span `(L2 + I)/(L3 + I)` at degree `m`.
pub fn check_spanning(analyzer: &mut Analyzer, m: u32) -> Result<SpanningVerdict> {
    let g = analyzer.grading();
    let family: Vec<NcPoly> = g.lattice_positive(m).into_iter().map(|(i, j)| xy_bracket(i, j)).collect();
    let cert = analyzer.cert(m)?;
    let rank = cert.rank_mod_l3(&family, &g)?;
    let dim_b2 = cert.dim_b2();
    Ok(SpanningVerdict { m, brackets: family.len(), rank, dim_b2, holds: rank == dim_b2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> NcPoly {
        NcPoly::from_word(Word::parse(s).unwrap())
    }

    #[test]
    fn named_instances() {
        let g = Grading::standard();
        let mut free = Analyzer::free(g);
        let d = identity_ii(&w("x"), &w("y"), &w("y"));
        assert!(!d.is_zero());
        assert!(in_l3_plus(&mut free, &d).unwrap());
        let d = identity_iii(&w("x"), &w("y"), 1, 1);
        assert!(in_l3_plus(&mut free, &d).unwrap());
        assert!(identity_i(&w("xy"), &[w("y")]).is_zero());
        // a false identity is caught
        let bad = &xy_bracket(2, 1) - &xy_bracket(1, 2);
        assert!(!in_l3_plus(&mut free, &bad).unwrap());
    }

    #[test]
    fn random_identities_hold() {
        let v = check_b2rels_with(&Grading::standard(), 7, 10, 3).unwrap();
        assert_eq!(v.len(), 40);
        assert!(v.iter().all(|x| x.holds), "{:?}", v.iter().find(|x| !x.holds));
        let v = check_b2rels_with(&Grading::new(2, 3).unwrap(), 12, 5, 3).unwrap();
        assert!(v.iter().all(|x| x.holds));
    }

    #[test]
    fn bracket_relations() {
        let g = Grading::new(2, 3).unwrap();
        let p = NcPoly::from_json_str(r#"{"XXX": 1, "YY": 1}"#).unwrap();
        let v = check_bracketdep(&p, &g, 0, 1).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].vanishes);
        let p = NcPoly::from_json_str(r#"{"XYX": 1, "YYY": 1}"#).unwrap();
        let v = check_bracketdep(&p, &Grading::standard(), 1, 0).unwrap();
        assert!(v.iter().all(|x| x.vanishes));
        assert!(check_bracketdep(&p, &Grading::standard(), 0, 0).is_err());
        let xy = NcPoly::from_json_str(r#"{"XY": 1, "YX": 1}"#).unwrap();
        let mut c = BracketDepChecker::new(&xy, &Grading::standard(), 1).unwrap();
        assert!(c.check_random(10, 9, 2).unwrap().iter().all(|x| x.vanishes));
    }

    #[test]
    fn brackets_span() {
        let mut free = Analyzer::free(Grading::standard());
        for m in 2..=7 {
            let v = check_spanning(&mut free, m).unwrap();
            assert!(v.holds);
            assert_eq!(v.dim_b2, m as usize - 1);
        }
        let p = NcPoly::from_json_str(r#"{"XX": 1, "YY": -1}"#).unwrap();
        let mut q = Analyzer::quotient(&p, Grading::standard()).unwrap();
        for m in 1..=6 {
            assert!(check_spanning(&mut q, m).unwrap().holds);
        }
    }
}
