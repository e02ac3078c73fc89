//! Multi-modular solver for rational systems with certificates.
//!
//! Rows are scaled to integers and reduced modulo word-sized primes. A prime
//! where the coefficient matrix has full column rank proves full rank over
//! `Q` (a nonvanishing minor mod p is nonzero over `Z`); the same prime then
//! also decides consistency. Solutions are recovered by CRT and rational
//! reconstruction and accepted only after an exact integer check, so every
//! answer returned here is one plain elimination would also give. `None`
//! means "not certified", never "no solution".

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinearSolution;

/// Primes tried before giving up on a rank-deficient-looking system.
const RANK_ATTEMPTS: usize = 3;
/// Upper bound on primes spent lifting a solution.
const MAX_PRIMES: usize = 256;

pub fn solve(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<LinearSolution<BigRational>> {
    let cols = matrix.first().map_or(0, Vec::len);
    if cols == 0 || matrix.len() < cols {
        return None;
    }
    let rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| integer_row(row, b))
        .collect();

    let mut primes = PrimeIter::new();
    let mut residues: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut misses = 0;
    let mut next_attempt = 1;
    while residues.len() < MAX_PRIMES {
        let p = primes.next()?;
        match solve_mod(&rows, cols, p) {
            ModOutcome::RankDeficient => {
                misses += 1;
                if misses >= RANK_ATTEMPTS && residues.is_empty() {
                    return None;
                }
            }
            ModOutcome::Inconsistent => {
                return Some(LinearSolution::Inconsistent { rank: cols });
            }
            ModOutcome::Solution(x) => {
                residues.push((p, x));
                if residues.len() == next_attempt {
                    next_attempt *= 2;
                    if let Some(x) = reconstruct(&residues).filter(|x| verify(&rows, x)) {
                        return Some(LinearSolution::Unique(x));
                    }
                }
            }
        }
    }
    None
}

/// Row and right-hand side scaled by the lcm of their denominators; the last
/// entry is the right-hand side.
fn integer_row(row: &[BigRational], b: &BigRational) -> Vec<BigInt> {
    let den = row
        .iter()
        .chain(std::iter::once(b))
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .chain(std::iter::once(b))
        .map(|x| x.numer() * (&den / x.denom()))
        .collect()
}

enum ModOutcome {
    RankDeficient,
    Inconsistent,
    Solution(Vec<u64>),
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

fn solve_mod(rows: &[Vec<BigInt>], cols: usize, p: u64) -> ModOutcome {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| reduce(x, p)).collect())
        .collect();
    for col in 0..cols {
        let Some(found) = (col..m.len()).find(|&r| m[r][col] != 0) else {
            return ModOutcome::RankDeficient;
        };
        m.swap(col, found);
        let inv = powmod(m[col][col], p - 2, p);
        for v in m[col][col..].iter_mut() {
            *v = mulmod(*v, inv, p);
        }
        let (before, from_pivot) = m.split_at_mut(col);
        let (pivot, after) = from_pivot.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for (v, &pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                *v = (*v + p - mulmod(factor, pv, p)) % p;
            }
        }
    }
    if m[cols..].iter().any(|r| r[cols] != 0) {
        return ModOutcome::Inconsistent;
    }
    ModOutcome::Solution(m[..cols].iter().map(|r| r[cols]).collect())
}

/// CRT-combine the residues and rationally reconstruct each component.
fn reconstruct(residues: &[(u64, Vec<u64>)]) -> Option<Vec<BigRational>> {
    let cols = residues[0].1.len();
    let mut modulus = BigInt::one();
    let mut values = vec![BigInt::zero(); cols];
    for (p, xs) in residues {
        let pb = BigInt::from(*p);
        let m_inv = BigInt::from(powmod(reduce(&modulus, *p), p - 2, *p));
        for (v, &x) in values.iter_mut().zip(xs) {
            // v + modulus * ((x - v) * modulus^-1 mod p)
            let delta = ((BigInt::from(x) - &*v) * &m_inv).mod_floor(&pb);
            *v += &modulus * delta;
        }
        modulus *= pb;
    }
    values
        .iter()
        .map(|v| rational_reconstruction(v, &modulus))
        .collect()
}

/// `a/b ≡ u (mod m)` with `|a|, b ≤ sqrt(m/2)`, if one exists.
fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.is_zero() && !r1.gcd(&t1).is_one() {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(num, den))
}

/// Exact check of `A x = b` on the integer-scaled rows.
fn verify(rows: &[Vec<BigInt>], x: &[BigRational]) -> bool {
    let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    rows.iter().all(|row| {
        let (lhs, b) = row.split_at(row.len() - 1);
        let dot: BigInt = lhs.iter().zip(&ints).map(|(a, v)| a * v).sum();
        dot == &b[0] * &den
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending primes below 2^62.
struct PrimeIter {
    next: u64,
}

impl PrimeIter {
    fn new() -> Self {
        PrimeIter { next: (1u64 << 62) - 1 }
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let n = self.next;
            self.next -= 2;
            if is_prime(n) {
                return Some(n);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1 << 61) + 1));
        let mut it = PrimeIter::new();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        assert!(a > b && a < (1 << 62));
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(1_000_000_007u64);
        for (n, d) in [(3i64, 7i64), (-5, 11), (0, 1), (12, 1)] {
            let d_inv = BigInt::from(d).modpow(&(&m - 2u32), &m);
            let u = (BigInt::from(n) * d_inv).mod_floor(&m);
            assert_eq!(
                rational_reconstruction(&u, &m),
                Some(BigRational::new(n.into(), d.into()))
            );
        }
    }
}
