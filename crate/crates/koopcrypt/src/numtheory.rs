//! Exact integer arithmetic and the number-theoretic facts the rest of the
//! crate is built on: Fermat/Euler/Carmichael, quadratic residues via Euler's
//! criterion, and its generalization to products of two distinct odd primes.
//!
//! All residues fit in `u64` at desk scale (moduli below 10^5 are enforced by
//! the CLI guard); intermediate products are carried in `u128`, so none of the
//! operations here can overflow.

use crate::error::{Error, Result};

/// A modulus together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    /// Factor `value` by trial division and build the modulus.
    pub fn new(value: u64) -> Result<Self> {
        if value < 3 {
            return Err(Error::Domain(format!("modulus {value} must be >= 3")));
        }
        Ok(Self { value, factors: factorize(value) })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Ordered `(prime, multiplicity)` pairs whose product is `value`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// True iff the modulus is a product of exactly two distinct odd primes.
    pub fn is_odd_semiprime(&self) -> bool {
        self.factors.len() == 2
            && self.factors.iter().all(|&(p, k)| k == 1 && p % 2 == 1)
    }
}

/// An element of the multiplicative group Z_p^*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    residue: u64,
    modulus: Modulus,
}

impl GroupElement {
    pub fn new(residue: u64, modulus: Modulus) -> Result<Self> {
        let r = residue % modulus.value();
        if r == 0 || gcd(r, modulus.value()) != 1 {
            return Err(Error::Domain(format!(
                "{residue} is not in the multiplicative group modulo {}",
                modulus.value()
            )));
        }
        Ok(Self { residue: r, modulus })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// base^exponent mod modulus by square-and-multiply.
pub fn mod_pow(base: u64, exponent: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::Domain(format!("modulus {modulus} must be >= 2")));
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = (base as u128) % m;
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    Ok(result as u64)
}

/// Multiplicative inverse via the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::Domain(format!("modulus {modulus} must be >= 2")));
    }
    let (mut r0, mut r1) = (modulus as i128, (a % modulus) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NoInverse { a, modulus });
    }
    Ok(t0.rem_euclid(modulus as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for n < 3.3 * 10^14.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = mod_pow(a, d, n).expect("n >= 2");
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial division up to sqrt(n).
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            factors.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Euler's totient, multiplicative over the prime factorization.
pub fn euler_totient(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    factorize(n)
        .iter()
        .map(|&(p, k)| (p - 1) * p.pow(k - 1))
        .product()
}

/// Carmichael function: lcm of the prime-power component exponents.
pub fn carmichael(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    factorize(n)
        .iter()
        .map(|&(p, k)| {
            if p == 2 && k >= 3 {
                // lambda(2^k) = 2^(k-2) for k >= 3
                1u64 << (k - 2)
            } else {
                (p - 1) * p.pow(k - 1)
            }
        })
        .fold(1, lcm)
}

/// Multiplicative order of `m` modulo `n` (requires gcd(m, n) = 1), found by
/// stripping prime factors off lambda(n).
pub fn multiplicative_order(m: u64, n: u64) -> Result<u64> {
    if gcd(m % n, n) != 1 {
        return Err(Error::Domain(format!("{m} is not coprime to {n}")));
    }
    let mut order = carmichael(n);
    for (p, _) in factorize(order) {
        while order % p == 0 && mod_pow(m, order / p, n)? == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// True iff the order of `m` modulo the prime `p` is p - 1.
pub fn is_primitive_root(m: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = m % p;
    if m == 0 {
        return Ok(false);
    }
    Ok(multiplicative_order(m, p)? == p - 1)
}

/// All generators of Z_p^* for prime p.
pub fn generators(p: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    (1..p)
        .filter_map(|m| match is_primitive_root(m, p) {
            Ok(true) => Some(Ok(m)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Euler's criterion: +1 iff `m` is a quadratic residue modulo the odd prime `p`.
pub fn euler_criterion(m: u64, p: u64) -> Result<i8> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    if gcd(m % p, p) != 1 {
        return Err(Error::Domain(format!("{m} is not coprime to {p}")));
    }
    let r = mod_pow(m, (p - 1) / 2, p)?;
    Ok(if r == 1 { 1 } else { -1 })
}

/// Generalized Euler's criterion for p = p1 * p2 with p1 an odd prime and p2
/// either 1 or an odd prime distinct from p1: the sign of m^(Phi(p)/2) mod p.
pub fn generalized_euler(m: u64, p1: u64, p2: u64) -> Result<i8> {
    if !is_prime(p1) || p1 == 2 {
        return Err(Error::Domain(format!("{p1} is not an odd prime")));
    }
    if p2 == p1 {
        return Err(Error::Domain("p1 and p2 must be distinct".into()));
    }
    if p2 != 1 && (!is_prime(p2) || p2 == 2) {
        return Err(Error::Domain(format!("{p2} is neither 1 nor an odd prime")));
    }
    let p = p1 * p2;
    if gcd(m % p, p) != 1 {
        return Err(Error::Domain(format!("{m} is not coprime to {p}")));
    }
    let r = mod_pow(m, euler_totient(p) / 2, p)?;
    if r == 1 {
        Ok(1)
    } else if r == p - 1 {
        Ok(-1)
    } else {
        // cannot happen for the admissible moduli
        Err(Error::Domain(format!("unexpected residue {r} for modulus {p}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // repeated-multiplication oracle for mod_pow
    fn pow_naive(base: u64, exp: u64, modulus: u64) -> u64 {
        (0..exp).fold(1u64, |acc, _| acc * base % modulus)
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(2, 18, 19).unwrap(), 1);
        assert_eq!(mod_pow(7, 0, 13).unwrap(), 1);
        assert_eq!(mod_pow(2, 9, 19).unwrap(), pow_naive(2, 9, 19));
        assert_eq!(mod_pow(2, 9, 19).unwrap(), 18);
        assert!(mod_pow(2, 3, 1).is_err());
    }

    // exhaustive-search oracle for inverses
    fn inverse_naive(a: u64, modulus: u64) -> Option<u64> {
        (1..modulus).find(|b| a * b % modulus == 1)
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(3, 8).unwrap(), inverse_naive(3, 8).unwrap());
        assert_eq!(mod_inverse(3, 8).unwrap(), 3);
        assert_eq!(mod_inverse(1, 7).unwrap(), 1);
        assert_eq!(mod_inverse(5, 8).unwrap(), 5);
        assert!(matches!(mod_inverse(2, 8), Err(Error::NoInverse { .. })));
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_totient(19), 18);
        let brute = (1..=15).filter(|&k| gcd(k, 15) == 1).count() as u64;
        assert_eq!(euler_totient(15), brute);
        assert_eq!(euler_totient(15), 8);
        assert_eq!(euler_totient(1), 1);
    }

    // smallest l with m^l = 1 for all coprime m
    fn carmichael_naive(n: u64) -> u64 {
        (1..).find(|&l| {
            (1..n)
                .filter(|&m| gcd(m, n) == 1)
                .all(|m| mod_pow(m, l, n).unwrap() == 1)
        })
        .unwrap()
    }

    #[test]
    fn carmichael_examples() {
        assert_eq!(carmichael(15), carmichael_naive(15));
        assert_eq!(carmichael(15), 4);
        assert_eq!(carmichael(19), 18);
        assert_eq!(carmichael(35), carmichael_naive(35));
        assert_eq!(carmichael(35), 12);
    }

    #[test]
    fn carmichael_minimality_small() {
        for n in 2..=200 {
            assert_eq!(carmichael(n), carmichael_naive(n), "n = {n}");
        }
    }

    #[test]
    fn primitive_root_examples() {
        assert!(is_primitive_root(2, 19).unwrap());
        assert!(!is_primitive_root(1, 19).unwrap());
        // 4 = 2^2 is a quadratic residue, so its order divides (p-1)/2
        let order = (1..).find(|&k| mod_pow(4, k, 19).unwrap() == 1).unwrap();
        assert!(order < 18);
        assert!(!is_primitive_root(4, 19).unwrap());
        assert!(is_primitive_root(2, 20).is_err());
    }

    #[test]
    fn euler_criterion_examples() {
        // brute-force quadratic residue sets
        let squares: Vec<u64> = (1..19).map(|x| x * x % 19).collect();
        assert!(!squares.contains(&2));
        assert_eq!(euler_criterion(2, 19).unwrap(), -1);
        assert_eq!(euler_criterion(4, 19).unwrap(), 1);
        assert!(squares.contains(&5));
        assert_eq!(euler_criterion(5, 19).unwrap(), 1);
        assert!(euler_criterion(19, 19).is_err());
    }

    #[test]
    fn euler_criterion_matches_enumeration() {
        for p in (3..=200u64).filter(|&p| is_prime(p)) {
            let squares: std::collections::HashSet<u64> =
                (1..p).map(|x| x * x % p).collect();
            for m in 1..p {
                let expected = if squares.contains(&m) { 1 } else { -1 };
                assert_eq!(euler_criterion(m, p).unwrap(), expected, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn generalized_euler_examples() {
        assert_eq!(generalized_euler(2, 3, 5).unwrap(), 1);
        assert_eq!(generalized_euler(2, 19, 1).unwrap(), -1);
        assert_eq!(mod_pow(7, 20, 55).unwrap(), 1);
        assert_eq!(generalized_euler(7, 5, 11).unwrap(), 1);
        assert!(generalized_euler(2, 5, 5).is_err());
        assert!(generalized_euler(2, 3, 9).is_err());
    }

    #[test]
    fn fermat_all_small_primes() {
        for p in (2..=200u64).filter(|&p| is_prime(p)) {
            for m in 1..p {
                assert_eq!(mod_pow(m, p - 1, p).unwrap(), 1);
            }
        }
    }

    #[test]
    fn euler_theorem_small() {
        for n in 2..=200u64 {
            for m in (1..n).filter(|&m| gcd(m, n) == 1) {
                assert_eq!(mod_pow(m, euler_totient(n), n).unwrap(), 1);
            }
        }
    }

    #[test]
    fn carmichael_bound_for_odd_semiprimes() {
        let odd_primes: Vec<u64> = (3..=500).filter(|&p| is_prime(p)).collect();
        for &p1 in &odd_primes {
            for &p2 in &odd_primes {
                if p1 < p2 && p1 * p2 <= 1000 {
                    let p = p1 * p2;
                    assert!(carmichael(p) <= euler_totient(p) / 2, "p = {p}");
                }
            }
        }
    }

    #[test]
    fn modulus_invariants() {
        let m = Modulus::new(15).unwrap();
        assert_eq!(m.factors(), &[(3, 1), (5, 1)]);
        assert!(m.is_odd_semiprime());
        assert!(Modulus::new(19).unwrap().is_prime());
        assert!(Modulus::new(2).is_err());
        assert!(GroupElement::new(5, Modulus::new(15).unwrap()).is_err());
        assert_eq!(GroupElement::new(7, Modulus::new(15).unwrap()).unwrap().residue(), 7);
    }
}
