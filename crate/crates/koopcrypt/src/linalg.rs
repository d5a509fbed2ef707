//! Exact linear algebra: fraction-free (Bareiss) rank over the integers,
//! rational Gaussian elimination, and a multi-modular solve with rational
//! reconstruction for the normal-equation systems of the EDMD fit. Every
//! fast path is certified by an exact residual check before it is returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMat = Vec<Vec<BigInt>>;
pub type RatMat = Vec<Vec<BigRational>>;

pub fn int_mat(rows: &[Vec<i64>]) -> IntMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn rat_from_int(m: &IntMat) -> RatMat {
    m.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

pub fn transpose(m: &IntMat) -> IntMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b.iter()).map(|(x, br)| x * &br[j]).sum())
                .collect()
        })
        .collect()
}

/// Rank of an integer matrix by fraction-free Gaussian elimination.
pub fn bareiss_rank(mut m: IntMat) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_vec = &head[rank];
        for row in tail.iter_mut() {
            for j in (col + 1)..cols {
                let num = &pivot_vec[col] * &row[j] - &row[col] * &pivot_vec[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Exact rank of a rational matrix: clear each row's denominators, then run
/// the fraction-free elimination.
pub fn rank_exact_rational(m: &RatMat) -> usize {
    let cleared: IntMat = m
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    bareiss_rank(cleared)
}

/// Plain rational Gaussian elimination solve of A X = B for square
/// nonsingular A. Exact but slow; the fallback behind the modular fast path.
pub fn solve_rational(a: &RatMat, b: &RatMat) -> Option<RatMat> {
    let n = a.len();
    let ncols = if b.is_empty() { 0 } else { b[0].len() };
    let mut m: RatMat = a
        .iter()
        .zip(b.iter())
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for j in col..n + ncols {
            m[col][j] = &m[col][j] * &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..n + ncols {
                    let delta = &f * &m[col][j];
                    m[i][j] = &m[i][j] - delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

const SOLVE_PRIMES: [u64; 24] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
    4611686018427387631,
    4611686018427387617,
    4611686018427387587,
    4611686018427387461,
    4611686018427387421,
    4611686018427387409,
    4611686018427387329,
    4611686018427387323,
    4611686018427387301,
    4611686018427387271,
    4611686018427387241,
    4611686018427387139,
    4611686018427387131,
    4611686018427387127,
    4611686018427387113,
];

fn mod_reduce(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.try_into().expect("reduced below p")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// Solve A X = B over Z_p; None if A is singular mod p.
fn solve_mod(a: &IntMat, b: &IntMat, p: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let ncols = if b.is_empty() { 0 } else { b[0].len() };
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .zip(b.iter())
        .map(|(ra, rb)| {
            ra.iter()
                .chain(rb.iter())
                .map(|x| mod_reduce(x, p))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| m[i][col] != 0)?;
        m.swap(col, pivot);
        let inv = pow_mod(m[col][col], p - 2, p);
        for j in col..n + ncols {
            m[col][j] = mul_mod(m[col][j], inv, p);
        }
        for i in 0..n {
            if i != col && m[i][col] != 0 {
                let f = m[i][col];
                for j in col..n + ncols {
                    let sub = mul_mod(f, m[col][j], p);
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Rational reconstruction of c mod m with |num|, den < sqrt(m/2).
fn rational_reconstruct(c: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), c.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1.abs() > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.is_negative() {
        r1 = -r1;
        t1 = -t1;
    }
    if num_integer::gcd(r1.clone(), t1.clone()).is_one() {
        Some(BigRational::new(r1, t1))
    } else {
        None
    }
}

/// Solve A X = B exactly for square nonsingular integer A: multi-modular
/// images with CRT + rational reconstruction, certified by an exact residual
/// check; falls back to rational elimination if reconstruction stalls.
pub fn solve_exact(a: &IntMat, b: &IntMat) -> Option<RatMat> {
    let n = a.len();
    let ncols = if b.is_empty() { 0 } else { b[0].len() };
    if n == 0 {
        return Some(Vec::new());
    }
    let mut crt: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); ncols]; n];
    let mut modulus = BigInt::one();
    for &p in SOLVE_PRIMES.iter() {
        let Some(img) = solve_mod(a, b, p) else {
            continue;
        };
        // CRT-combine the new image into the accumulator
        let bp = BigInt::from(p);
        if modulus.is_one() {
            for i in 0..n {
                for j in 0..ncols {
                    crt[i][j] = BigInt::from(img[i][j]);
                }
            }
            modulus = bp;
        } else {
            let m_inv = {
                let m_red = mod_reduce(&modulus, p);
                BigInt::from(pow_mod(m_red, p - 2, p))
            };
            for i in 0..n {
                for j in 0..ncols {
                    let cur = mod_reduce(&crt[i][j], p);
                    let diff = (BigInt::from(img[i][j]) - BigInt::from(cur)) * &m_inv;
                    let diff = ((diff % &bp) + &bp) % &bp;
                    crt[i][j] = &crt[i][j] + &modulus * diff;
                }
            }
            modulus *= &bp;
        }
        // try to reconstruct and certify
        let mut x: RatMat = Vec::with_capacity(n);
        let mut ok = true;
        'rows: for i in 0..n {
            let mut row = Vec::with_capacity(ncols);
            for j in 0..ncols {
                match rational_reconstruct(&crt[i][j], &modulus) {
                    Some(r) => row.push(r),
                    None => {
                        ok = false;
                        break 'rows;
                    }
                }
            }
            x.push(row);
        }
        if ok && verify_solution(a, b, &x) {
            return Some(x);
        }
    }
    // exact fallback
    solve_rational(&rat_from_int(a), &rat_from_int(b))
}

fn verify_solution(a: &IntMat, b: &IntMat, x: &RatMat) -> bool {
    let n = a.len();
    let ncols = if b.is_empty() { 0 } else { b[0].len() };
    for i in 0..n {
        for j in 0..ncols {
            let mut acc = BigRational::zero();
            for k in 0..n {
                acc += BigRational::from_integer(a[i][k].clone()) * &x[k][j];
            }
            if acc != BigRational::from_integer(b[i][j].clone()) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(bareiss_rank(int_mat(&[vec![0, 0], vec![0, 0]])), 0);
        assert_eq!(bareiss_rank(int_mat(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(bareiss_rank(int_mat(&[vec![1, 4], vec![4, 1]])), 2);
        assert_eq!(
            bareiss_rank(int_mat(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]])),
            2
        );
    }

    #[test]
    fn solve_small_system() {
        // [[2, 0], [1, 3]] X = [[4], [7]] -> X = [[2], [5/3]]
        let a = int_mat(&[vec![2, 0], vec![1, 3]]);
        let b = int_mat(&[vec![4], vec![7]]);
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x[0][0], BigRational::from_integer(2.into()));
        assert_eq!(x[1][0], BigRational::new(5.into(), 3.into()));
    }

    #[test]
    fn reconstruct_round_trip() {
        let m = BigInt::from(4611686018427387847u64);
        // image of 22/7 mod m
        let inv7 = BigInt::from(pow_mod(7, 4611686018427387847 - 2, 4611686018427387847));
        let c = (BigInt::from(22) * inv7) % &m;
        let r = rational_reconstruct(&c, &m).unwrap();
        assert_eq!(r, BigRational::new(22.into(), 7.into()));
    }
}
