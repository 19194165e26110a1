//! Arithmetic modulo a word-size prime.
//!
//! Ranks over `F_p` never exceed ranks over the rationals, so these routines
//! only ever supply lower bounds and candidate certificates; callers confirm
//! everything that matters exactly.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::rational::Rational;

/// Sparse vector over `F_p`: sorted `(index, value)` with nonzero values.
pub type ModVec = Vec<(u32, u64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    p: u64,
}

impl Field {
    /// `p` must be an odd prime below 2^63.
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 63), "modulus out of range");
        Field { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced residue fits")
    }

    /// Image of a rational whose denominator is prime to `p`.
    pub fn from_rational(&self, q: &Rational) -> Option<u64> {
        let d = self.from_bigint(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(q.numer()), self.inv(d)))
    }

    pub fn shoup(&self, w: u64) -> Shoup {
        Shoup { w, pre: (((w as u128) << 64) / self.p as u128) as u64, p: self.p }
    }

    /// `y[i] += c * x[i]` over the whole slice.
    pub fn axpy(&self, y: &mut [u64], c: u64, x: &[u64]) {
        if c == 0 {
            return;
        }
        let s = self.shoup(c);
        for (a, &b) in y.iter_mut().zip(x) {
            *a = self.add(*a, s.mul(b));
        }
    }
}

/// Multiplication by a fixed constant with a precomputed quotient
/// (Shoup's trick); avoids 128-bit division in inner loops.
#[derive(Debug, Clone, Copy)]
pub struct Shoup {
    w: u64,
    pre: u64,
    p: u64,
}

impl Shoup {
    #[inline]
    pub fn mul(&self, y: u64) -> u64 {
        let q = ((self.pre as u128 * y as u128) >> 64) as u64;
        let r = self.w.wrapping_mul(y).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, a);
            }
            a = mulm(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for &a in &SMALL {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform random prime in `[2^61, 2^62)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

/// Annihilator of a growing subspace of `F_p^dim`.
///
/// Rows of `y` always form a basis of the functionals vanishing on every
/// inserted vector, so `rank = dim - y.len()` and membership is a single
/// product `y v`. Cheap to test against sparse vectors, and the final rows
/// are exactly the functionals a certificate needs.
#[derive(Debug, Clone)]
pub struct Annihilator {
    field: Field,
    dim: usize,
    y: Vec<Vec<u64>>,
}

impl Annihilator {
    pub fn new(field: Field, dim: usize) -> Self {
        let y = (0..dim)
            .map(|i| {
                let mut r = vec![0; dim];
                r[i] = 1;
                r
            })
            .collect();
        Annihilator { field, dim, y }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.dim - self.y.len()
    }

    pub fn codim(&self) -> usize {
        self.y.len()
    }

    fn pair(&self, v: &[(u32, u64)]) -> Vec<u64> {
        let f = &self.field;
        self.y
            .iter()
            .map(|row| v.iter().fold(0, |acc, &(c, x)| f.add(acc, f.mul(row[c as usize], x))))
            .collect()
    }

    pub fn contains(&self, v: &[(u32, u64)]) -> bool {
        let f = &self.field;
        self.y.iter().all(|row| v.iter().fold(0, |acc, &(c, x)| f.add(acc, f.mul(row[c as usize], x))) == 0)
    }

    /// Adds `v` to the spanned subspace; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(u32, u64)]) -> bool {
        if self.y.is_empty() || v.is_empty() {
            return false;
        }
        let beta = self.pair(v);
        let Some(i) = beta.iter().position(|&b| b != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(beta[i]);
        let pivot = self.y.swap_remove(i);
        let last = beta.len() - 1;
        for (j, row) in self.y.iter_mut().enumerate() {
            // swap_remove moved the old last row into slot i
            let b = if j == i { beta[last] } else { beta[j] };
            if b != 0 {
                f.axpy(row, f.neg(f.mul(b, inv)), &pivot);
            }
        }
        true
    }

    /// The annihilator in reduced row echelon form, with its pivot columns.
    /// This basis depends only on the subspace, not on insertion order.
    pub fn canonical(&self) -> (Vec<Vec<u64>>, Vec<usize>) {
        rref(self.field, self.y.clone())
    }
}

/// Reduced row echelon form of dense rows over `F_p`.
pub fn rref(f: Field, mut rows: Vec<Vec<u64>>) -> (Vec<Vec<u64>>, Vec<usize>) {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let k = f.neg(row[c]);
                f.axpy(row, k, &pivot);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Wang's rational reconstruction: the unique `n/d` with `|n|, d <= sqrt(p/2)`
/// congruent to `a`, if one exists.
pub fn reconstruct(a: u64, p: u64) -> Option<(i64, i64)> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound || r1.gcd(&t1) != 1 {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some((n as i64, d as i64))
}

/// Rational reconstruction with an arbitrary-precision modulus.
pub fn reconstruct_big(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Chinese remaindering of residues modulo pairwise distinct primes.
/// Returns the representative in `[0, M)` together with `M`.
pub fn crt(residues: &[u64], primes: &[u64]) -> (BigInt, BigInt) {
    assert_eq!(residues.len(), primes.len());
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let f = Field::new(p);
        let xm = f.from_bigint(&x);
        let mm = f.from_bigint(&m);
        // x + m * k = r (mod p)
        let k = f.mul(f.sub(r, xm), f.inv(mm));
        x += &m * BigInt::from(k);
        m *= BigInt::from(p);
    }
    debug_assert!(x.sign() != Sign::Minus);
    (x, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 2305843009213693951; // 2^61 - 1

    #[test]
    fn primality() {
        assert!(is_prime(P));
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(3215031751));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = random_prime(&mut rng);
        assert!(is_prime(q) && (1 << 61..1 << 62).contains(&q));
    }

    #[test]
    fn reconstruction_examples() {
        let f = Field::new(P);
        let a = f.mul(f.from_i64(-3), f.inv(7));
        assert_eq!(reconstruct(a, P), Some((-3, 7)));
        assert_eq!(reconstruct(0, P), Some((0, 1)));
        let big = reconstruct_big(&BigInt::from(a), &BigInt::from(P)).unwrap();
        assert_eq!(big, crate::rational::frac(-3, 7));
    }

    #[test]
    fn crt_recovers_large_values() {
        let primes = [1000000007u64, 998244353, 1000000009];
        let v = BigInt::from(123456789012345678u64) * BigInt::from(1009);
        let res: Vec<u64> = primes.iter().map(|&p| Field::new(p).from_bigint(&v)).collect();
        let (x, m) = crt(&res, &primes);
        assert_eq!(x, v.mod_floor(&m));
    }

    #[test]
    fn annihilator_rank() {
        let f = Field::new(P);
        let mut a = Annihilator::new(f, 3);
        assert!(a.insert(&[(0, 1), (1, 1)]));
        assert!(!a.insert(&[(0, 2), (1, 2)]));
        assert!(a.insert(&[(2, 5)]));
        assert_eq!(a.rank(), 2);
        assert!(a.contains(&[(0, 3), (1, 3), (2, 1)]));
        assert!(!a.contains(&[(0, 1)]));
        let (rows, piv) = a.canonical();
        assert_eq!(piv, vec![0]);
        assert_eq!(rows[0], vec![1, P - 1, 0]);
    }

    proptest! {
        #[test]
        fn shoup_matches_plain(w in 0..P, y in 0..P) {
            let f = Field::new(P);
            prop_assert_eq!(f.shoup(w).mul(y), f.mul(w, y));
        }

        #[test]
        fn reconstruct_roundtrip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let f = Field::new(P);
            let a = f.mul(f.from_i64(n), f.inv(f.from_i64(d)));
            let g = n.gcd(&d);
            prop_assert_eq!(reconstruct(a, P), Some((n / g, d / g)));
        }

        #[test]
        fn annihilator_matches_dense_rank(rows in proptest::collection::vec(proptest::collection::vec(-2i64..3, 4), 0..6)) {
            let f = Field::new(P);
            let mut a = Annihilator::new(f, 4);
            for r in &rows {
                let v: ModVec = r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, f.from_i64(x))).collect();
                a.insert(&v);
            }
            let m = crate::exactla::ExactMatrix::from_rows(
                rows.iter().map(|r| r.iter().map(|&x| crate::rational::int(x)).collect()).collect(),
            ).unwrap();
            let exact = if rows.is_empty() { 0 } else { m.rank() };
            prop_assert_eq!(a.rank(), exact);
        }
    }
}
