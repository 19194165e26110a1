//! Graded pieces of `A/<P>` over `F_p`, built degree by degree.
//!
//! `I[k] = X I[k-s] + Y I[k-r] + P A[k-d]`, and `P I` already lies in the
//! first two summands, so `A[k]/I[k]` is the span of `X S[k-s]` and
//! `Y S[k-r]` (with `S` the standard words one level down) modulo
//! `{P z : z in S[k-d]}`. Each level keeps the normal form of every word.

use std::collections::HashMap;

use crate::exactla::modp::{Field, ModVec};
use crate::ncalg::{Grading, Letter, Word};

#[derive(Debug, Clone)]
pub struct Level {
    /// All words of this degree, sorted.
    pub words: Vec<Word>,
    pub index: HashMap<Word, u32>,
    /// Standard words (a basis of the quotient), sorted.
    pub std: Vec<Word>,
    /// Normal form of `words[i]` in the basis `std`.
    pub nf: Vec<ModVec>,
    /// Block of each standard word, and its position inside the block.
    pub std_block: Vec<u32>,
    pub std_local: Vec<u32>,
    /// Block of each word of `words`, and its position inside the block.
    pub word_block: Vec<u32>,
    pub word_local: Vec<u32>,
    pub block_keys: Vec<u32>,
    pub block_std_len: Vec<usize>,
}

impl Level {
    pub fn nf_of(&self, w: &Word) -> &ModVec {
        &self.nf[self.index[w] as usize]
    }
}

/// Relation polynomial with coefficients already reduced mod `p`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub terms: Vec<(Word, u64)>,
    pub degree: u32,
}

#[derive(Debug, Clone)]
pub struct Tower {
    pub field: Field,
    pub g: Grading,
    rel: Option<Relation>,
    /// Words are split into blocks by their number of `X`s when the ideal
    /// respects that finer grading.
    blocked: bool,
    pub levels: Vec<Level>,
}

impl Tower {
    pub fn new(field: Field, g: Grading, rel: Option<Relation>, blocked: bool) -> Self {
        Tower { field, g, rel, blocked, levels: Vec::new() }
    }

    pub fn level(&self, k: u32) -> &Level {
        &self.levels[k as usize]
    }

    pub fn extend_to(&mut self, max: u32) {
        while self.levels.len() <= max as usize {
            let k = self.levels.len() as u32;
            let lvl = self.build_level(k);
            self.levels.push(lvl);
        }
    }

    fn weight(&self, l: Letter) -> u32 {
        match l {
            Letter::X => self.g.s,
            Letter::Y => self.g.r,
        }
    }

    fn build_level(&self, k: u32) -> Level {
        let g = self.g;
        let mut words = Vec::new();
        if k == 0 {
            words.push(Word::EMPTY);
        } else {
            for (l, w) in [(Word::x(), g.s), (Word::y(), g.r)] {
                if k >= w {
                    words.extend(self.levels[(k - w) as usize].words.iter().map(|u| l.concat(u)));
                }
            }
        }
        let index: HashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (*w, i as u32)).collect();

        let (std, nf) = match &self.rel {
            Some(rel) if k > 0 => self.reduce_level(k, rel, &words),
            _ => {
                let nf = (0..words.len() as u32).map(|i| vec![(i, 1u64)]).collect();
                (words.clone(), nf)
            }
        };

        let key = |w: &Word| if self.blocked { w.count_x() } else { 0 };
        let mut block_keys: Vec<u32> = words.iter().map(key).collect();
        block_keys.sort_unstable();
        block_keys.dedup();
        let block_of = |w: &Word| block_keys.binary_search(&key(w)).expect("known key") as u32;
        let mut block_std_len = vec![0usize; block_keys.len()];
        let mut block_word_len = vec![0usize; block_keys.len()];
        let (mut std_block, mut std_local) = (Vec::new(), Vec::new());
        for w in &std {
            let b = block_of(w);
            std_block.push(b);
            std_local.push(block_std_len[b as usize] as u32);
            block_std_len[b as usize] += 1;
        }
        let (mut word_block, mut word_local) = (Vec::new(), Vec::new());
        for w in &words {
            let b = block_of(w);
            word_block.push(b);
            word_local.push(block_word_len[b as usize] as u32);
            block_word_len[b as usize] += 1;
        }
        Level {
            words,
            index,
            std,
            nf,
            std_block,
            std_local,
            word_block,
            word_local,
            block_keys,
            block_std_len,
        }
    }

    /// Standard words and normal forms at degree `k > 0`.
    fn reduce_level(&self, k: u32, rel: &Relation, words: &[Word]) -> (Vec<Word>, Vec<ModVec>) {
        let f = self.field;
        let g = self.g;
        // V = X S[k-s] followed by Y S[k-r]; already sorted.
        let mut v_words = Vec::new();
        let mut offset = [0usize; 2];
        for (slot, (l, w)) in [(Letter::X, g.s), (Letter::Y, g.r)].into_iter().enumerate() {
            offset[slot] = v_words.len();
            if k >= w {
                let lw = Word::letter(l);
                v_words.extend(self.levels[(k - w) as usize].std.iter().map(|u| lw.concat(u)));
            }
        }
        let nv = v_words.len();
        let slot = |l: Letter| if l == Letter::X { 0 } else { 1 };

        // l * (vector over S[k - w(l)]) as a vector over V
        let lift = |l: Letter, v: &ModVec| -> ModVec {
            let o = offset[slot(l)] as u32;
            v.iter().map(|&(j, a)| (o + j, a)).collect()
        };
        // normal form one level down of an arbitrary word
        let lower_nf = |w: &Word| -> &ModVec {
            let d = w.degree(&g);
            self.levels[d as usize].nf_of(w)
        };

        let mut rref = SparseRref::new(f, nv);
        if k >= rel.degree {
            for z in &self.levels[(k - rel.degree) as usize].std {
                let mut acc = Accumulator::new(nv);
                for (t, c) in &rel.terms {
                    let (l, rest) = t.split_first().expect("relation has no constant term");
                    let lifted = lift(l, lower_nf(&rest.concat(z)));
                    acc.add_scaled(f, &lifted, *c);
                }
                let v = acc.finish();
                rref.insert(v);
            }
        }

        let mut std_pos = vec![u32::MAX; nv];
        let mut std = Vec::new();
        for (i, w) in v_words.iter().enumerate() {
            if !rref.is_pivot(i as u32) {
                std_pos[i] = std.len() as u32;
                std.push(*w);
            }
        }

        let mut acc = Accumulator::new(nv);
        let nf = words
            .iter()
            .map(|w| {
                let (l, rest) = w.split_first().expect("positive degree");
                debug_assert_eq!(rest.degree(&g) + self.weight(l), k);
                let lifted = lift(l, lower_nf(&rest));
                rref.reduce_into(&lifted, &mut acc);
                acc.finish()
                    .into_iter()
                    .map(|(i, a)| {
                        let p = std_pos[i as usize];
                        debug_assert!(p != u32::MAX, "reduced vector touches a pivot");
                        (p, a)
                    })
                    .collect()
            })
            .collect();
        (std, nf)
    }
}

/// Dense scratch vector that remembers which entries were touched.
struct Accumulator {
    vals: Vec<u64>,
    touched: Vec<u32>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator { vals: vec![0; n], touched: Vec::new() }
    }

    fn add_scaled(&mut self, f: Field, v: &[(u32, u64)], c: u64) {
        for &(i, a) in v {
            let slot = &mut self.vals[i as usize];
            if *slot == 0 {
                self.touched.push(i);
            }
            *slot = f.add(*slot, f.mul(a, c));
        }
    }

    fn finish(&mut self) -> ModVec {
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = std::mem::take(&mut self.vals[i as usize]);
            if v != 0 {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

/// Fully reduced sparse echelon form whose pivots are the largest columns.
struct SparseRref {
    f: Field,
    rows: Vec<ModVec>,
    row_of_col: Vec<u32>,
    scratch: Accumulator,
}

impl SparseRref {
    fn new(f: Field, n: usize) -> Self {
        SparseRref { f, rows: Vec::new(), row_of_col: vec![u32::MAX; n], scratch: Accumulator::new(n) }
    }

    fn is_pivot(&self, c: u32) -> bool {
        self.row_of_col[c as usize] != u32::MAX
    }

    /// `v` minus the stored rows at its pivot entries; result left in `acc`.
    fn reduce_into(&self, v: &[(u32, u64)], acc: &mut Accumulator) {
        acc.add_scaled(self.f, v, 1);
        for &(c, a) in v {
            let r = self.row_of_col[c as usize];
            if r != u32::MAX {
                acc.add_scaled(self.f, &self.rows[r as usize], self.f.neg(a));
            }
        }
    }

    fn insert(&mut self, v: ModVec) {
        let mut acc = std::mem::replace(&mut self.scratch, Accumulator::new(0));
        self.reduce_into(&v, &mut acc);
        let mut r = acc.finish();
        let Some(&(piv, lead)) = r.last() else {
            self.scratch = acc;
            return;
        };
        let inv = self.f.inv(lead);
        for e in r.iter_mut() {
            e.1 = self.f.mul(e.1, inv);
        }
        // clear the new pivot column from the existing rows
        for row in self.rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&piv, |e| e.0) {
                let a = row[pos].1;
                acc.add_scaled(self.f, row, 1);
                acc.add_scaled(self.f, &r, self.f.neg(a));
                *row = acc.finish();
            }
        }
        self.row_of_col[piv as usize] = self.rows.len() as u32;
        self.rows.push(r);
        self.scratch = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 2305843009213693951;

    fn rel(terms: &[(&str, i64)], g: &Grading) -> Relation {
        let f = Field::new(P);
        let terms: Vec<(Word, u64)> = terms.iter().map(|(w, c)| (Word::parse(w).unwrap(), f.from_i64(*c))).collect();
        let degree = terms[0].0.degree(g);
        Relation { terms, degree }
    }

    #[test]
    fn free_levels_are_identity() {
        let mut t = Tower::new(Field::new(P), Grading::standard(), None, true);
        t.extend_to(5);
        assert_eq!(t.level(5).std.len(), 32);
        assert_eq!(t.level(5).block_keys, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(t.level(5).block_std_len[2], 10);
    }

    #[test]
    fn quotient_dimensions() {
        let g = Grading::standard();
        // one generic quadratic relation: dims m + 1
        let mut t = Tower::new(Field::new(P), g, Some(rel(&[("xx", 1), ("yy", -1)], &g)), false);
        t.extend_to(8);
        for m in 0..=8u32 {
            assert_eq!(t.level(m).std.len(), m as usize + 1, "m = {m}");
        }
        // a cubic: c_m = 2 c_{m-1} - c_{m-3}
        let mut t = Tower::new(Field::new(P), g, Some(rel(&[("xyx", 1), ("yyy", 1)], &g)), false);
        t.extend_to(10);
        let dims: Vec<usize> = (0..=10).map(|m| t.level(m).std.len()).collect();
        assert_eq!(dims, vec![1, 2, 4, 7, 12, 20, 33, 54, 88, 143, 232]);
    }

    #[test]
    fn normal_forms_of_standard_words_are_unit_vectors() {
        let g = Grading::new(2, 3).unwrap();
        let mut t = Tower::new(Field::new(P), g, Some(rel(&[("xxx", 1), ("yy", 1)], &g)), false);
        t.extend_to(14);
        for m in 0..=14 {
            let lvl = t.level(m);
            for (j, w) in lvl.std.iter().enumerate() {
                assert_eq!(lvl.nf_of(w), &vec![(j as u32, 1)]);
            }
        }
        // Y^2 = -X^3 in the quotient
        let lvl = t.level(6);
        assert_eq!(lvl.std, vec![Word::parse("xxx").unwrap()]);
        assert_eq!(lvl.nf_of(&Word::parse("yy").unwrap()), &vec![(0, P - 1)]);
    }
}
