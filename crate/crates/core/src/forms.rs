//! Even differential forms on the plane with the star product
//! `a * b = ab + (1/2) da db`, the homomorphism `psi` from the free algebra,
//! and the induced map on `L2` into the Jacobian quotient.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cpoly::{abelianize, check_square_free, CPoly, JacobianQuotient, Var};
use crate::error::{Error, Result};
use crate::exactla::sparse::SparseRow;
use crate::exactla::SparseEchelon;
use crate::ncalg::{self, Grading, Letter, NcPoly, Word};
use crate::rational::{self, Rational};

/// `f0 + f2 dx^dy`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EvenForm {
    pub f0: CPoly,
    pub f2: CPoly,
}

impl EvenForm {
    pub fn new(f0: CPoly, f2: CPoly) -> Self {
        EvenForm { f0, f2 }
    }

    pub fn zero() -> Self {
        EvenForm::default()
    }

    pub fn one() -> Self {
        EvenForm::new(CPoly::one(), CPoly::zero())
    }

    pub fn function(f0: CPoly) -> Self {
        EvenForm::new(f0, CPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f2.is_zero()
    }

    pub fn add(&self, o: &EvenForm) -> EvenForm {
        EvenForm::new(&self.f0 + &o.f0, &self.f2 + &o.f2)
    }

    pub fn sub(&self, o: &EvenForm) -> EvenForm {
        EvenForm::new(&self.f0 - &o.f0, &self.f2 - &o.f2)
    }

    pub fn scale(&self, c: &Rational) -> EvenForm {
        EvenForm::new(self.f0.scale(c), self.f2.scale(c))
    }
}

fn half() -> Rational {
    rational::frac(1, 2)
}

/// The star product; higher wedge powers vanish in two variables.
pub fn star(a: &EvenForm, b: &EvenForm) -> EvenForm {
    let f0 = &a.f0 * &b.f0;
    let jac = &(&a.f0.partial(Var::X) * &b.f0.partial(Var::Y)) - &(&a.f0.partial(Var::Y) * &b.f0.partial(Var::X));
    let f2 = &(&(&a.f0 * &b.f2) + &(&b.f0 * &a.f2)) + &jac.scale(&half());
    EvenForm::new(f0, f2)
}

/// `a * b - b * a`.
pub fn star_commutator(a: &EvenForm, b: &EvenForm) -> EvenForm {
    star(a, b).sub(&star(b, a))
}

fn letter_form(l: Letter) -> EvenForm {
    EvenForm::function(match l {
        Letter::X => CPoly::x(),
        Letter::Y => CPoly::y(),
    })
}

/// `psi` of a single word: left-to-right fold of the star product.
pub fn psi_word(w: &Word) -> EvenForm {
    w.letters().fold(EvenForm::one(), |acc, l| star(&acc, &letter_form(l)))
}

/// Memoized `psi` on words, keyed by prefix.
#[derive(Debug, Default, Clone)]
pub struct PsiCache {
    memo: HashMap<Word, EvenForm>,
}

impl PsiCache {
    pub fn new() -> Self {
        PsiCache::default()
    }

    pub fn word(&mut self, w: &Word) -> EvenForm {
        if let Some(f) = self.memo.get(w) {
            return f.clone();
        }
        let f = match w.split_last() {
            None => EvenForm::one(),
            Some((prefix, l)) => {
                let head = self.word(&prefix);
                star(&head, &letter_form(l))
            }
        };
        self.memo.insert(*w, f.clone());
        f
    }

    pub fn poly(&mut self, p: &NcPoly) -> EvenForm {
        let mut acc = EvenForm::zero();
        for (w, c) in p.terms() {
            acc = acc.add(&self.word(w).scale(c));
        }
        acc
    }
}

pub fn psi(p: &NcPoly) -> EvenForm {
    PsiCache::new().poly(p)
}

/// Exact test for membership in `L2(A)[m]` of the free algebra, by rank
/// against the generators `[X, w]`, `[Y, w]` (they span `L2`, since
/// `[ab, c] = [a, bc] + [b, ca]`).
#[derive(Debug, Clone)]
pub struct L2Membership {
    words: Vec<Word>,
    echelon: SparseEchelon,
}

impl L2Membership {
    pub fn new(g: &Grading, m: u32) -> Self {
        let words = ncalg::enumerate_words(g, m);
        let mut echelon = SparseEchelon::new();
        let col = |w: &Word| words.binary_search(w).expect("degree-m word");
        for (l, wl) in [(Word::x(), g.s), (Word::y(), g.r)] {
            if wl > m {
                continue;
            }
            for w in ncalg::enumerate_words(g, m - wl) {
                let (a, b) = (col(&l.concat(&w)), col(&w.concat(&l)));
                if a != b {
                    let mut row: SparseRow = vec![(a, Rational::one()), (b, -Rational::one())];
                    row.sort_by_key(|x| x.0);
                    echelon.insert(&row);
                }
            }
        }
        L2Membership { words, echelon }
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, p: &NcPoly) -> bool {
        let mut row = Vec::with_capacity(p.num_terms());
        for (w, c) in p.terms() {
            match self.words.binary_search(w) {
                Ok(i) => row.push((i, c.clone())),
                Err(_) => return false,
            }
        }
        row.sort_by_key(|x| x.0);
        self.echelon.contains(&row)
    }
}

/// The map induced by `psi_2` from `L2` of the quotient into
/// `Q[x,y]/(dP_ab/dx, dP_ab/dy) dx^dy`.
#[derive(Debug, Clone)]
pub struct PhiMap {
    g: Grading,
    p_ab: CPoly,
    psi: PsiCache,
    quotients: HashMap<u32, JacobianQuotient>,
    l2: HashMap<u32, L2Membership>,
}

impl PhiMap {
    pub fn new(p: &NcPoly, g: &Grading) -> Result<Self> {
        if p.homogeneous_degree(g).is_none() {
            return Err(Error::NotHomogeneous);
        }
        let p_ab = abelianize(p);
        check_square_free(&p_ab, g)?;
        Ok(PhiMap { g: *g, p_ab, psi: PsiCache::new(), quotients: HashMap::new(), l2: HashMap::new() })
    }

    fn quotient(&mut self, m: u32) -> Option<&JacobianQuotient> {
        let sr = self.g.s + self.g.r;
        if m < sr {
            return None;
        }
        let (p_ab, g) = (&self.p_ab, &self.g);
        Some(self.quotients.entry(m).or_insert_with(|| JacobianQuotient::new(p_ab, g, m - sr)))
    }

    /// Dimension of the target at degree `m`.
    pub fn target_dim(&mut self, m: u32) -> usize {
        self.quotient(m).map_or(0, |q| q.dim())
    }

    /// Coordinates of `phi(p)` in the complement basis of the target.
    pub fn phi_on_l2(&mut self, p: &NcPoly, m: u32) -> Result<Vec<Rational>> {
        if !p.is_zero() && p.homogeneous_degree(&self.g) != Some(m) {
            return Err(Error::NotHomogeneous);
        }
        let g = self.g;
        if !self.l2.entry(m).or_insert_with(|| L2Membership::new(&g, m)).contains(p) {
            return Err(Error::NotInL2);
        }
        let f2 = self.psi.poly(p).f2;
        match self.quotient(m) {
            None => Ok(Vec::new()),
            Some(q) => q.reduce(&f2),
        }
    }

    /// Rank of `phi` over the generators `[w1, w2]` of `L2[m]`.
    pub fn phi_rank(&mut self, m: u32) -> usize {
        let target = self.target_dim(m);
        if target == 0 {
            return 0;
        }
        let table = ncalg::words_up_to(&self.g, m);
        let mut ech = SparseEchelon::new();
        for a in 1..m {
            for w1 in &table[a as usize] {
                for w2 in &table[(m - a) as usize] {
                    let f2 = &self.psi.word(&w1.concat(w2)).f2 - &self.psi.word(&w2.concat(w1)).f2;
                    let q = self.quotient(m).expect("target is nonzero");
                    let v = q.reduce(&f2).expect("homogeneous image");
                    let row: SparseRow =
                        v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                    ech.insert(&row);
                    if ech.rank() == target {
                        return target;
                    }
                }
            }
        }
        ech.rank()
    }
}

pub fn phi_on_l2(p: &NcPoly, big_p: &NcPoly, g: &Grading, m: u32) -> Result<Vec<Rational>> {
    PhiMap::new(big_p, g)?.phi_on_l2(p, m)
}

pub fn phi_rank(big_p: &NcPoly, g: &Grading, m: u32) -> Result<usize> {
    Ok(PhiMap::new(big_p, g)?.phi_rank(m))
}

/// Rank of `psi_2` over the generators of `L2[m]` of the free algebra, in
/// the full space of 2-forms (no quotient).
pub fn psi2_rank_free(g: &Grading, m: u32) -> usize {
    let sr = g.s + g.r;
    if m < sr {
        return 0;
    }
    let monos = crate::cpoly::monomials_of_degree(g, m - sr);
    let mut cache = PsiCache::new();
    let table = ncalg::words_up_to(g, m);
    let mut ech = SparseEchelon::new();
    for a in 1..m {
        for w1 in &table[a as usize] {
            for w2 in &table[(m - a) as usize] {
                let f2 = &cache.word(&w1.concat(w2)).f2 - &cache.word(&w2.concat(w1)).f2;
                let mut row: SparseRow = f2
                    .terms()
                    .map(|(ij, c)| (monos.iter().position(|x| x == ij).expect("degree"), c.clone()))
                    .collect();
                row.sort_by_key(|x| x.0);
                ech.insert(&row);
                if ech.rank() == monos.len() {
                    return ech.rank();
                }
            }
        }
    }
    ech.rank()
}

/// Tallies of the random algebraic checks on forms and on `psi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormChecks {
    pub triples: usize,
    pub associative: usize,
    pub supercommutator: usize,
    pub l3_vanishes: usize,
    pub words: usize,
    pub psi0_abelian: usize,
}

impl FormChecks {
    pub fn all_hold(&self) -> bool {
        [self.associative, self.supercommutator, self.l3_vanishes].iter().all(|&n| n == self.triples)
            && self.psi0_abelian == self.words
    }
}

fn random_cpoly<R: Rng>(rng: &mut R) -> CPoly {
    let terms: Vec<_> = (0..rng.gen_range(0..4))
        .map(|_| ((rng.gen_range(0..4), rng.gen_range(0..4)), rational::int(rng.gen_range(-3..=3))))
        .collect();
    CPoly::from_terms(terms)
}

fn random_form<R: Rng>(rng: &mut R) -> EvenForm {
    EvenForm::new(random_cpoly(rng), random_cpoly(rng))
}

/// Associativity, `[a, b] = da db`, `[a, [b, c]] = 0` on `count` random
/// triples, and `psi_0 = ab` on `count` random words.
pub fn check_form_properties(count: usize, seed: u64) -> FormChecks {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FormChecks { triples: count, associative: 0, supercommutator: 0, l3_vanishes: 0, words: count, psi0_abelian: 0 };
    for _ in 0..count {
        let (a, b, c) = (random_form(&mut rng), random_form(&mut rng), random_form(&mut rng));
        out.associative += (star(&star(&a, &b), &c) == star(&a, &star(&b, &c))) as usize;
        let br = star_commutator(&a, &b);
        let jac = &(&a.f0.partial(Var::X) * &b.f0.partial(Var::Y)) - &(&a.f0.partial(Var::Y) * &b.f0.partial(Var::X));
        out.supercommutator += (br.f0.is_zero() && br.f2 == jac) as usize;
        out.l3_vanishes += star_commutator(&c, &br).is_zero() as usize;
    }
    for _ in 0..count {
        let letters: Vec<Letter> =
            (0..rng.gen_range(0..=10)).map(|_| if rng.gen() { Letter::X } else { Letter::Y }).collect();
        let p = NcPoly::from_word(Word::from_letters(&letters));
        out.psi0_abelian += (psi(&p).f0 == abelianize(&p)) as usize;
    }
    out
}
