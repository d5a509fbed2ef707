//! Linear-complexity analysis: exact Berlekamp–Massey over the rationals,
//! LFSR replay, and the catalog of small nonlinear liftings that beat the
//! LFSR state dimension (cyclic counters, arithmetic progressions, affine
//! maps, power laws).
//!
//! Over an infinite field every length-n sequence admits some recurrence of
//! length ⌈n/2⌉, so "no LFSR exists" is decided by held-out extrapolation:
//! a register that only memorizes the data, rather than capturing its
//! generative law, fails to predict the withheld suffix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// x_k = Σ_{i=1..L} c_i·x_{k−i}; `seed` holds the first L values.
#[derive(Debug, Clone, PartialEq)]
pub struct Lfsr {
    pub coefficients: Vec<BigRational>,
    pub seed: Vec<BigRational>,
    pub length: usize,
}

impl Lfsr {
    pub fn replay(&self, n: usize) -> Vec<BigRational> {
        let mut out = self.seed.clone();
        out.truncate(n);
        while out.len() < n {
            let k = out.len();
            let next: BigRational = self
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| c * &out[k - 1 - i])
                .sum();
            out.push(next);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BmaResult {
    Lfsr(Lfsr),
    /// no register of certified length reproduces the generative law
    NoLfsr,
}

/// Classic Berlekamp–Massey over Q: shortest connection polynomial
/// C(x) = 1 + Σ c_i x^i with Σ_i C_i·x_{k−i} = 0. Returns (L, C).
fn bma_core(seq: &[BigRational]) -> (usize, Vec<BigRational>) {
    let n = seq.len();
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bb = BigRational::one();
    for k in 0..n {
        let mut d = seq[k].clone();
        for i in 1..=l {
            if i < c.len() {
                d += &c[i] * &seq[k - i];
            }
        }
        if d.is_zero() {
            m += 1;
        } else if 2 * l <= k {
            let t = c.clone();
            let coef = &d / &bb;
            if c.len() < b.len() + m {
                c.resize(b.len() + m, BigRational::zero());
            }
            for (i, bi) in b.iter().enumerate() {
                c[i + m] -= &coef * bi;
            }
            l = k + 1 - l;
            b = t;
            bb = d;
            m = 1;
        } else {
            let coef = &d / &bb;
            if c.len() < b.len() + m {
                c.resize(b.len() + m, BigRational::zero());
            }
            for (i, bi) in b.iter().enumerate() {
                c[i + m] -= &coef * bi;
            }
            m += 1;
        }
    }
    c.truncate(l + 1);
    c.resize(l + 1, BigRational::zero());
    (l, c)
}

fn to_lfsr(seq: &[BigRational], l: usize, c: &[BigRational]) -> Lfsr {
    Lfsr {
        coefficients: (1..=l).map(|i| -c[i].clone()).collect(),
        seed: seq[..l.min(seq.len())].to_vec(),
        length: l,
    }
}

/// Shortest linear recurrence generating the whole sequence (no holdout
/// certification — the raw BMA answer).
pub fn shortest_lfsr(seq: &[BigRational]) -> Result<Lfsr> {
    if seq.is_empty() {
        return Err(Error::Domain("empty sequence".into()));
    }
    let (l, c) = bma_core(seq);
    let lfsr = to_lfsr(seq, l, &c);
    debug_assert_eq!(lfsr.replay(seq.len()), seq);
    Ok(lfsr)
}

/// Shortest LFSR, or `NoLfsr` when no register certifies: a length below
/// n/2 is accepted outright; otherwise the register is refit on a prefix
/// with max(1, n/4) values held out and must extrapolate them exactly.
pub fn berlekamp_massey(seq: &[BigRational]) -> Result<BmaResult> {
    if seq.is_empty() {
        return Err(Error::Domain("empty sequence".into()));
    }
    let n = seq.len();
    let (l, c) = bma_core(seq);
    if 2 * l < n {
        return Ok(BmaResult::Lfsr(to_lfsr(seq, l, &c)));
    }
    let h = (n / 4).max(1);
    if n <= h {
        return Ok(BmaResult::NoLfsr);
    }
    let prefix = &seq[..n - h];
    let (lp, cp) = bma_core(prefix);
    let lfsr = to_lfsr(prefix, lp, &cp);
    if lfsr.replay(n) == seq {
        Ok(BmaResult::Lfsr(lfsr))
    } else {
        Ok(BmaResult::NoLfsr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RootOfUnity,
    Exponential,
    LogAffine,
    AffineAugmented,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::RootOfUnity, Family::Exponential, Family::LogAffine, Family::AffineAugmented];

    pub fn name(self) -> &'static str {
        match self {
            Family::RootOfUnity => "root_of_unity",
            Family::Exponential => "exponential",
            Family::LogAffine => "log_affine",
            Family::AffineAugmented => "affine_augmented",
        }
    }
}

/// A small linear system in a nonlinearly lifted coordinate, with the
/// parameters needed to replay the training sequence through the decode map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedModel {
    pub family: Family,
    pub parameters: BTreeMap<String, String>,
    pub state_dimension: usize,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Deterministic fit: solve the family's defining equations on the first
/// terms, then validate exactly on the remainder. None = sequence outside
/// the family.
pub fn fit_reduced(seq: &[i64], family: Family) -> Option<ReducedModel> {
    if seq.len() < 3 {
        return None;
    }
    match family {
        // x_{k+1} = x_k + a (mod n): z = exp(i·2π·x/n) evolves by the root
        // of unity exp(i·2π·a/n) — scalar linear dynamics
        Family::RootOfUnity => {
            let lo = *seq.iter().min().unwrap();
            let hi = *seq.iter().max().unwrap();
            let n = hi - lo + 1;
            if n < 2 {
                return None;
            }
            let a = (seq[1] - seq[0]).rem_euclid(n);
            if a == 0 {
                return None;
            }
            for w in seq.windows(2) {
                if (w[1] - w[0]).rem_euclid(n) != a || w[1] < lo || w[1] > hi {
                    return None;
                }
            }
            let mut parameters = BTreeMap::new();
            parameters.insert("a".into(), a.to_string());
            parameters.insert("n".into(), n.to_string());
            parameters.insert("multiplier".into(), format!("exp(i2pi*{}/{})", a, n));
            Some(ReducedModel { family, parameters, state_dimension: 1 })
        }
        // x_{k+1} = x_k + a: z = exp(x) evolves by the scalar e^a
        Family::Exponential => {
            let a = seq[1] - seq[0];
            if seq.windows(2).any(|w| w[1] - w[0] != a) {
                return None;
            }
            let mut parameters = BTreeMap::new();
            parameters.insert("a".into(), a.to_string());
            parameters.insert("multiplier".into(), format!("exp({})", a));
            Some(ReducedModel { family, parameters, state_dimension: 1 })
        }
        // x_{k+1} = m·x_k + a: lifted state z = (x, a), dimension 2
        Family::AffineAugmented => {
            if seq[1] == seq[0] {
                return None;
            }
            let m = BigRational::new(BigInt::from(seq[2] - seq[1]), BigInt::from(seq[1] - seq[0]));
            let a = rat(seq[1]) - &m * rat(seq[0]);
            for w in seq.windows(2) {
                if rat(w[1]) != &m * rat(w[0]) + &a {
                    return None;
                }
            }
            let mut parameters = BTreeMap::new();
            parameters.insert("m".into(), m.to_string());
            parameters.insert("a".into(), a.to_string());
            Some(ReducedModel { family, parameters, state_dimension: 2 })
        }
        // x_{k+1} = m·x_k^b: z = ln x is affine, scalar when m = 1
        Family::LogAffine => {
            if seq.iter().any(|&x| x <= 0) || seq[0] == seq[1] {
                return None;
            }
            for b in 0u32..=32 {
                let m = BigRational::new(BigInt::from(seq[1]), BigInt::from(seq[0]).pow(b));
                let fits = seq.windows(2).all(|w| {
                    BigRational::from_integer(BigInt::from(w[1]))
                        == &m * BigRational::from_integer(BigInt::from(w[0]).pow(b))
                });
                if fits {
                    let mut parameters = BTreeMap::new();
                    parameters.insert("b".into(), b.to_string());
                    parameters.insert("m".into(), m.to_string());
                    let state_dimension = if m.is_one() { 1 } else { 2 };
                    return Some(ReducedModel { family, parameters, state_dimension });
                }
            }
            None
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub id: String,
    pub length: usize,
    pub lfsr_length: Option<usize>,
    pub reduced_family: Option<Family>,
    pub reduced_dim: Option<usize>,
}

impl ComplexityReport {
    /// CSV row: id,length,lfsr_length,reduced_family,reduced_dim
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}\r\n",
            self.id,
            self.length,
            self.lfsr_length.map_or("none".into(), |l| l.to_string()),
            self.reduced_family.map_or("none", |f| f.name()),
            self.reduced_dim.map_or("none".into(), |d| d.to_string()),
        )
    }
}

/// Side-by-side comparison: BMA register length vs the smallest reduced
/// lifting dimension across all families.
pub fn compare_complexity(id: &str, seq: &[i64]) -> Result<ComplexityReport> {
    let rational: Vec<BigRational> = seq.iter().map(|&x| rat(x)).collect();
    let lfsr_length = match berlekamp_massey(&rational)? {
        BmaResult::Lfsr(l) => Some(l.length),
        BmaResult::NoLfsr => None,
    };
    let best = Family::ALL
        .iter()
        .filter_map(|&f| fit_reduced(seq, f))
        .min_by_key(|m| m.state_dimension);
    Ok(ComplexityReport {
        id: id.to_string(),
        length: seq.len(),
        lfsr_length,
        reduced_family: best.as_ref().map(|m| m.family),
        reduced_dim: best.map(|m| m.state_dimension),
    })
}
