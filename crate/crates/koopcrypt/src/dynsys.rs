//! The modular dynamical systems behind DH and RSA: x_{k+1} = m * x_k mod p
//! with x_0 = 1, their trajectories, periods, and key setup.

use crate::error::{Error, Result};
use crate::numtheory::{
    self, euler_totient, gcd, is_prime, is_primitive_root, mod_inverse, mod_pow,
    multiplicative_order, Modulus,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Dh,
    Rsa,
}

/// Public data of one cryptosystem instance.
#[derive(Debug, Clone)]
pub struct CryptoInstance {
    scheme: Scheme,
    modulus: Modulus,
    multiplier: u64,
    /// Ground-truth secret, carried by test fixtures only. Recovery code never
    /// reads it.
    secret_hint: Option<u64>,
}

impl CryptoInstance {
    /// DH instance: prime modulus, primitive-root multiplier.
    pub fn dh(p: u64, m: u64) -> Result<Self> {
        if !is_primitive_root(m, p)? {
            return Err(Error::Domain(format!("{m} is not a generator of Z_{p}^*")));
        }
        Ok(Self {
            scheme: Scheme::Dh,
            modulus: Modulus::new(p)?,
            multiplier: m % p,
            secret_hint: None,
        })
    }

    /// RSA instance with modulus p1 * p2 and a multiplier in Z_p^*
    /// (the message m for encryption, the ciphertext c for decryption).
    pub fn rsa(p1: u64, p2: u64, multiplier: u64) -> Result<Self> {
        if p1 == p2 || !is_prime(p1) || !is_prime(p2) || p1 == 2 || p2 == 2 {
            return Err(Error::Domain(format!(
                "{p1}, {p2} must be two distinct odd primes"
            )));
        }
        let p = p1 * p2;
        if gcd(multiplier % p, p) != 1 {
            return Err(Error::Domain(format!("{multiplier} is not in Z_{p}^*")));
        }
        Ok(Self {
            scheme: Scheme::Rsa,
            modulus: Modulus::new(p)?,
            multiplier: multiplier % p,
            secret_hint: None,
        })
    }

    pub fn with_secret_hint(mut self, secret: u64) -> Self {
        self.secret_hint = Some(secret);
        self
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn modulus(&self) -> u64 {
        self.modulus.value()
    }

    pub fn modulus_struct(&self) -> &Modulus {
        &self.modulus
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn secret_hint(&self) -> Option<u64> {
        self.secret_hint
    }
}

/// A stored trajectory of x_{k+1} = multiplier * x_k mod modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    values: Vec<u64>,
    multiplier: u64,
    modulus: u64,
    period: Option<u64>,
}

impl Trajectory {
    /// Wrap an externally supplied value sequence, e.g. parsed from a file.
    pub fn from_values(values: Vec<u64>, multiplier: u64, modulus: u64, period: Option<u64>) -> Self {
        Self { values, multiplier, modulus, period }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Minimal period zeta with x_{k+zeta} = x_k, when known.
    pub fn period(&self) -> Option<u64> {
        self.period
    }

    /// x_k, resolving indices beyond the stored range through the period.
    pub fn value_at(&self, k: usize) -> Result<u64> {
        if let Some(&v) = self.values.get(k) {
            return Ok(v);
        }
        match self.period {
            Some(z) => {
                let idx = k % z as usize;
                self.values.get(idx).copied().ok_or_else(|| {
                    Error::Range(format!("trajectory shorter than one period ({z})"))
                })
            }
            None => Err(Error::Range(format!(
                "index {k} beyond stored trajectory of length {} with unknown period",
                self.values.len()
            ))),
        }
    }

    /// One full period of values starting at x_0.
    pub fn period_values(&self) -> Result<Vec<u64>> {
        let z = self
            .period
            .ok_or_else(|| Error::Range("trajectory period unknown".into()))? as usize;
        (0..z).map(|k| self.value_at(k)).collect()
    }

    /// Newline-separated decimal integers, the CLI sequence-file format.
    pub fn to_lines(&self) -> String {
        self.values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Simulate `steps` steps of the instance's dynamical system from `x0`.
pub fn simulate(instance: &CryptoInstance, x0: u64, steps: u64) -> Result<Trajectory> {
    simulate_raw(instance.multiplier(), instance.modulus(), x0, steps)
}

/// Simulation on raw (multiplier, modulus) data; x0 defaults to 1 in callers.
pub fn simulate_raw(multiplier: u64, modulus: u64, x0: u64, steps: u64) -> Result<Trajectory> {
    if modulus < 3 {
        return Err(Error::Domain(format!("modulus {modulus} must be >= 3")));
    }
    if gcd(x0 % modulus, modulus) != 1 {
        return Err(Error::Domain(format!("x0 = {x0} is not coprime to {modulus}")));
    }
    if gcd(multiplier % modulus, modulus) != 1 {
        return Err(Error::Domain(format!(
            "multiplier {multiplier} is not coprime to {modulus}"
        )));
    }
    let m = multiplier as u128 % modulus as u128;
    let mut values = Vec::with_capacity(steps as usize + 1);
    let mut x = (x0 % modulus) as u128;
    values.push(x as u64);
    for _ in 0..steps {
        x = x * m % modulus as u128;
        values.push(x as u64);
    }
    let period = period_length(multiplier, modulus).ok();
    Ok(Trajectory { values, multiplier: multiplier % modulus, modulus, period })
}

/// Minimal zeta >= 1 with multiplier^zeta = 1 (mod modulus).
pub fn period_length(multiplier: u64, modulus: u64) -> Result<u64> {
    multiplicative_order(multiplier, modulus)
}

/// RSA key setup: given the secret `d`, return the public exponent
/// e = d^{-1} mod Phi(p1*p2) and the encryption instance.
pub fn rsa_keygen(p1: u64, p2: u64, d: u64) -> Result<(u64, CryptoInstance)> {
    if p1 == p2 || !is_prime(p1) || !is_prime(p2) || p1 == 2 || p2 == 2 {
        return Err(Error::Domain(format!(
            "{p1}, {p2} must be two distinct odd primes"
        )));
    }
    let phi = euler_totient(p1 * p2);
    let e = mod_inverse(d % phi, phi)
        .map_err(|_| Error::Key(format!("d = {d} is not coprime to Phi = {phi}")))?;
    // multiplier slot is filled per message at encryption time; use the
    // smallest group element as a placeholder
    let instance = CryptoInstance::rsa(p1, p2, 1)?.with_secret_hint(d);
    Ok((e, instance))
}

/// multiplier^exponent mod p, i.e. the trajectory endpoint x_exponent.
pub fn encrypt(instance: &CryptoInstance, exponent: u64) -> Result<u64> {
    mod_pow(instance.multiplier(), exponent, instance.modulus())
}

/// Convenience wrapper used by tests: m^e mod p for raw inputs.
pub fn encrypt_raw(m: u64, e: u64, p: u64) -> Result<u64> {
    mod_pow(m, e, p)
}

pub fn parse_sequence(text: &str) -> Result<Vec<i64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| Error::Domain(format!("malformed sequence entry {tok:?}")))
        })
        .collect()
}

pub use numtheory::generators;

#[cfg(test)]
mod tests {
    use super::*;

    fn dh19() -> CryptoInstance {
        CryptoInstance::dh(19, 2).unwrap()
    }

    #[test]
    fn simulate_examples() {
        let t = simulate(&dh19(), 1, 18).unwrap();
        assert_eq!(*t.values().last().unwrap(), 1);
        assert_eq!(t.values().len(), 19);

        let t0 = simulate(&dh19(), 1, 0).unwrap();
        assert_eq!(t0.values(), &[1]);

        // repeated modular multiplication oracle
        let mut oracle = vec![1u64];
        for _ in 0..5 {
            oracle.push(oracle.last().unwrap() * 2 % 19);
        }
        let t5 = simulate(&dh19(), 1, 5).unwrap();
        assert_eq!(t5.values(), &oracle[..]);
        assert_eq!(t5.values(), &[1, 2, 4, 8, 16, 13]);

        assert!(simulate_raw(2, 19, 19, 3).is_err());
    }

    #[test]
    fn period_examples() {
        assert_eq!(period_length(2, 19).unwrap(), 18);
        assert_eq!(period_length(1, 19).unwrap(), 1);
        assert_eq!(period_length(4, 15).unwrap(), 2);
        assert!(period_length(3, 15).is_err());
    }

    #[test]
    fn period_matches_naive_iteration() {
        for p in (3..=200u64).filter(|&p| is_prime(p)) {
            for m in 2..p {
                let naive = (1..)
                    .scan(1u64, |x, k| {
                        *x = *x * m % p;
                        Some((k, *x))
                    })
                    .find(|&(_, x)| x == 1)
                    .unwrap()
                    .0;
                assert_eq!(period_length(m, p).unwrap(), naive, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn rsa_keygen_examples() {
        let (e, inst) = rsa_keygen(3, 5, 3).unwrap();
        assert_eq!(e, 3);
        assert_eq!(inst.modulus(), 15);
        assert_eq!(rsa_keygen(3, 5, 1).unwrap().0, 1);
        assert_eq!(rsa_keygen(5, 11, 7).unwrap().0, 23);
        assert!(rsa_keygen(3, 5, 2).is_err());
        assert!(rsa_keygen(3, 3, 1).is_err());
    }

    #[test]
    fn encrypt_examples() {
        assert_eq!(encrypt(&dh19(), 5).unwrap(), 13);
        assert_eq!(encrypt(&dh19(), 18).unwrap(), 1);
        let inst = CryptoInstance::rsa(3, 5, 2).unwrap();
        assert_eq!(encrypt(&inst, 1).unwrap(), 2);
        // endpoint equals the simulated trajectory endpoint
        let t = simulate(&dh19(), 1, 5).unwrap();
        assert_eq!(encrypt(&dh19(), 5).unwrap(), *t.values().last().unwrap());
    }

    #[test]
    fn rsa_round_trip_small() {
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29];
        for &p1 in &primes {
            for &p2 in &primes {
                if p1 >= p2 {
                    continue;
                }
                let p = p1 * p2;
                let phi = euler_totient(p);
                for d in (2..phi).filter(|&d| gcd(d, phi) == 1) {
                    let (e, _) = rsa_keygen(p1, p2, d).unwrap();
                    for m in (1..p).filter(|&m| gcd(m, p) == 1) {
                        let c = mod_pow(m, e, p).unwrap();
                        assert_eq!(mod_pow(c, d, p).unwrap(), m);
                    }
                }
            }
        }
    }

    #[test]
    fn dh_trajectory_is_permutation() {
        for p in [5u64, 19, 97] {
            for m in generators(p).unwrap() {
                let t = simulate_raw(m, p, 1, p - 2).unwrap();
                let mut seen = t.values().to_vec();
                seen.sort_unstable();
                let expected: Vec<u64> = (1..p).collect();
                assert_eq!(seen, expected, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn dh_mirror_symmetry() {
        for p in [7u64, 19, 23, 97] {
            let q = (p - 1) / 2;
            for m in generators(p).unwrap() {
                let t = simulate_raw(m, p, 1, p - 1).unwrap();
                for k in 0..=(q as usize) {
                    assert_eq!(
                        t.values()[k + q as usize],
                        p - t.values()[k],
                        "p={p} m={m} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn wrap_via_period() {
        let t = simulate(&dh19(), 1, 5).unwrap();
        assert_eq!(t.period(), Some(18));
        assert_eq!(t.value_at(18).unwrap(), 1);
        assert_eq!(t.value_at(19).unwrap(), 2);
    }
}
