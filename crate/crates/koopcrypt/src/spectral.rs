//! Companion-matrix representations of the lifted cryptosystems, their
//! analytic eigendecompositions, and the spectral secret-recovery routines.
//!
//! Eigenvalues of the analytic systems live on the unit circle at rational
//! fractions of a full turn, so angle comparisons are done on an exact
//! lattice: the measured ratio angle is snapped to the grid k/b and each
//! eigenvalue contributes the congruence e·a ≡ k (mod b). The congruences
//! are merged by CRT and the winner is certified with a modular-power check.

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numtheory::{
    self, is_prime, is_primitive_root, mod_inverse, mod_pow, multiplicative_order,
};
use crate::poly::{self, IntPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Dh,
    Rsa,
    Learned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulusContext {
    pub modulus: u64,
    pub multiplier: Option<u64>,
}

/// Companion matrix acting on the (q+1)-dimensional value-list lift: the
/// superdiagonal block is the identity and the last row is `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionSystem {
    pub alpha: Vec<BigRational>,
    pub q: u64,
    pub kind: SystemKind,
    pub context: Option<ModulusContext>,
}

impl CompanionSystem {
    /// Characteristic polynomial t^{q+1} − Σ α_j t^j, dense ascending.
    pub fn char_poly(&self) -> Vec<BigRational> {
        let mut c: Vec<BigRational> = self.alpha.iter().map(|a| -a).collect();
        c.push(BigRational::one());
        c
    }

    /// One companion step on a real state vector.
    pub fn step(&self, z: &[BigRational]) -> Result<Vec<BigRational>> {
        let dim = (self.q + 1) as usize;
        if z.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: z.len() });
        }
        let mut out: Vec<BigRational> = z[1..].to_vec();
        out.push(self.alpha.iter().zip(z).map(|(a, x)| a * x).sum());
        Ok(out)
    }
}

/// x_{k+q̃+1} = x_k − x_{k+1} + x_{k+q̃} with q̃ = (p−1)/2.
pub fn dh_companion(p: u64) -> Result<CompanionSystem> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::Domain(format!("p = {} must be a prime > 3", p)));
    }
    let q = (p - 1) / 2;
    let mut alpha = vec![BigRational::zero(); (q + 1) as usize];
    alpha[0] = BigRational::one();
    alpha[1] = -BigRational::one();
    alpha[q as usize] = BigRational::one();
    Ok(CompanionSystem {
        alpha,
        q,
        kind: SystemKind::Dh,
        context: Some(ModulusContext { modulus: p, multiplier: None }),
    })
}

/// Equivalent representation at any q ≥ q̃: α_{q−q̃} = 1, α_{q−q̃+1} = −1,
/// α_q = 1. At q = p−2 the recurrence collapses to the pure Fermat shift
/// x_{k+p−1} = x_k.
pub fn dh_companion_padded(p: u64, q: u64) -> Result<CompanionSystem> {
    let base = dh_companion(p)?;
    let q_tilde = base.q;
    if q < q_tilde {
        return Err(Error::InfeasibleDimension { q, minimal: q_tilde });
    }
    let mut alpha = vec![BigRational::zero(); (q + 1) as usize];
    let off = (q - q_tilde) as usize;
    alpha[off] += BigRational::one();
    alpha[off + 1] += -BigRational::one();
    alpha[q as usize] += BigRational::one();
    Ok(CompanionSystem {
        alpha,
        q,
        kind: SystemKind::Dh,
        context: Some(ModulusContext { modulus: p, multiplier: None }),
    })
}

/// Pure cyclic shift of dimension λ(p1·p2): alpha = [1, 0, ..., 0].
pub fn rsa_companion(p1: u64, p2: u64) -> Result<CompanionSystem> {
    if p1 == p2 {
        return Err(Error::Domain(format!("primes must be distinct, got {} twice", p1)));
    }
    if p1 < 3 || p2 < 3 || !is_prime(p1) || !is_prime(p2) {
        return Err(Error::Domain(format!("({}, {}) must be distinct odd primes", p1, p2)));
    }
    let n = p1 * p2;
    let lambda = numtheory::carmichael(n);
    let q = lambda - 1;
    let mut alpha = vec![BigRational::zero(); (q + 1) as usize];
    alpha[0] = BigRational::one();
    Ok(CompanionSystem {
        alpha,
        q,
        kind: SystemKind::Rsa,
        context: Some(ModulusContext { modulus: n, multiplier: None }),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum DimensionCheck {
    Feasible { alpha: Vec<BigRational> },
    Infeasible,
}

/// Existence of a dimension-(q+1) companion representation for the
/// trajectory of multiplier m mod p, decided exactly.
///
/// A coefficient vector α exists iff the characteristic polynomial
/// t^{q+1} − Σ α_j t^j annihilates the periodic value sequence, i.e. iff it
/// is a multiple of the sequence's minimal annihilator g(t). A monic
/// multiple of degree q+1 exists exactly when q+1 ≥ deg g — the same
/// predicate as the rank comparison of the Hankel system (Ã|b̃), computed
/// through the cyclotomic factorization of t^n − 1 instead of rational
/// elimination. The returned α is re-verified against the trajectory, so
/// the shortcut cannot silently go wrong.
pub fn check_dimension(p: u64, m: u64, q: u64) -> Result<DimensionCheck> {
    if p < 2 || num_integer::gcd(m % p, p) != 1 {
        return Err(Error::Domain(format!("gcd({}, {}) must be 1", m, p)));
    }
    let n_period = multiplicative_order(m, p)?;
    let period: Vec<i64> = {
        let mut x = 1u64;
        (0..n_period)
            .map(|_| {
                let v = x as i64;
                x = (x as u128 * m as u128 % p as u128) as u64;
                v
            })
            .collect()
    };
    let g = poly::cyclic_annihilator(&period);
    let deg = poly::degree(&g);
    if ((q + 1) as usize) < deg {
        return Ok(DimensionCheck::Infeasible);
    }
    // c(t) = t^{q+1−deg} · g(t), alpha_j = −c_j for j ≤ q
    let shift = (q + 1) as usize - deg;
    let mut c: IntPoly = vec![num_bigint::BigInt::zero(); shift];
    c.extend(g.iter().cloned());
    let alpha: Vec<BigRational> = c[..(q + 1) as usize]
        .iter()
        .map(|cj| BigRational::from_integer(-cj))
        .collect();
    // certify x_{k+q+1} = Σ α_j x_{k+j} over two periods (real arithmetic)
    let n = period.len();
    let at = |k: usize| period[k % n] as i128;
    for k in 0..2 * n {
        let mut acc: i128 = 0;
        for (j, a) in alpha.iter().enumerate() {
            let aj = i64::try_from(a.to_integer()).expect("small alpha") as i128;
            acc += aj * at(k + j);
        }
        if acc != at(k + (q + 1) as usize) {
            return Err(Error::Domain(format!(
                "annihilator certificate failed for (p={}, m={}, q={})",
                p, m, q
            )));
        }
    }
    Ok(DimensionCheck::Feasible { alpha })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    /// Exact position on the unit circle as a fraction of a full turn,
    /// reduced to [0, 1); None for numerically found (learned) roots.
    pub turn: Option<Rational64>,
    pub value: Complex64,
}

impl Eigenvalue {
    fn from_turn(num: i64, den: i64) -> Self {
        let t = Rational64::new(num.rem_euclid(den), den);
        let f = *t.numer() as f64 / *t.denom() as f64;
        Eigenvalue { turn: Some(t), value: Complex64::from_polar(1.0, TAU * f) }
    }

    pub fn is_real(&self) -> bool {
        match self.turn {
            Some(t) => *t.denom() <= 2,
            None => self.value.im.abs() < 1e-9,
        }
    }
}

/// Spectrum of a companion system. The eigenvector basis is the Vandermonde
/// structure generated by the eigenvalues (column j = powers of μ_j); it is
/// never formed densely — coordinate transforms go through the dual
/// polynomial evaluation of [`transform_coordinates`].
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<Eigenvalue>,
    pub has_minus_one: bool,
    pub minus_one_index: Option<usize>,
}

fn assemble(eigenvalues: Vec<Eigenvalue>) -> EigenSystem {
    let minus_one_index = eigenvalues
        .iter()
        .position(|e| e.turn == Some(Rational64::new(1, 2)));
    EigenSystem { eigenvalues, has_minus_one: minus_one_index.is_some(), minus_one_index }
}

/// All n-th roots of unity — the spectrum of the n-dimensional cyclic shift.
pub fn shift_eigensystem(n: u64) -> EigenSystem {
    assemble((0..n as i64).map(|j| Eigenvalue::from_turn(j, n as i64)).collect())
}

pub fn eigensystem(cs: &CompanionSystem) -> Result<EigenSystem> {
    match cs.kind {
        SystemKind::Dh => {
            let q_tilde = cs.context.as_ref().map(|c| (c.modulus - 1) / 2).unwrap_or(cs.q);
            if cs.q > q_tilde {
                // padding introduces nilpotent zero modes
                return Err(Error::NonDiagonalizable);
            }
            let q = cs.q as i64;
            // roots of (μ^q + 1)(μ − 1): 1 and exp(iπ(2k+1)/q)
            let mut eig = vec![Eigenvalue::from_turn(0, 1)];
            eig.extend((0..q).map(|k| Eigenvalue::from_turn(2 * k + 1, 2 * q)));
            Ok(assemble(eig))
        }
        SystemKind::Rsa => Ok(shift_eigensystem(cs.q + 1)),
        SystemKind::Learned => {
            use num_traits::ToPrimitive;
            let coeffs: Vec<Complex64> = cs
                .char_poly()
                .iter()
                .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
                .collect();
            let roots = durand_kerner(&coeffs);
            for (i, a) in roots.iter().enumerate() {
                for b in roots.iter().skip(i + 1) {
                    if (a - b).norm() < 1e-7 {
                        return Err(Error::NonDiagonalizable);
                    }
                }
            }
            Ok(assemble(
                roots.into_iter().map(|value| Eigenvalue { turn: None, value }).collect(),
            ))
        }
    }
}

/// Durand–Kerner iteration on a monic polynomial (dense ascending coeffs).
fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let eval =
        |x: Complex64| coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + c);
    // deterministic non-real, non-unit starting spread
    let seed = Complex64::from_polar(1.05, 0.4);
    let mut roots: Vec<Complex64> = (1..=n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut shift: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::one();
            for j in 0..n {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            shift = shift.max(step.norm());
            roots[i] -= step;
        }
        if shift < 1e-13 {
            break;
        }
    }
    roots
}

/// z̃ = V⁻¹z through interpolation duality instead of dense inversion.
///
/// With N(t) = Π_k (t − μ_k) and N_j = N/(t − μ_j) by synthetic division,
/// Σ_r N_j[r]·μ_k^r vanishes for k ≠ j and equals N'(μ_j) at k = j, so
/// z̃_j = (Σ_r N_j[r]·z_r) / N'(μ_j). O(n²) total.
pub fn transform_coordinates(es: &EigenSystem, z: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = es.eigenvalues.len();
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: z.len() });
    }
    let nodes: Vec<Complex64> = es.eigenvalues.iter().map(|e| e.value).collect();
    // N(t): monic, ascending coefficients, built by repeated (t − μ) products
    let mut coeffs = vec![Complex64::zero(); n + 1];
    coeffs[0] = Complex64::one();
    let mut deg = 0usize;
    for mu in &nodes {
        for r in (1..=deg + 1).rev() {
            coeffs[r] = coeffs[r - 1] - mu * coeffs[r];
        }
        coeffs[0] = -mu * coeffs[0];
        deg += 1;
    }
    let mut out = Vec::with_capacity(n);
    for mu in &nodes {
        // synthetic division: b_r = coeffs[r+1] + μ·b_{r+1}, descending r;
        // simultaneously dot with z and Horner-evaluate the quotient at μ
        let mut b = Complex64::zero();
        let mut acc = Complex64::zero();
        let mut nprime = Complex64::zero();
        for r in (0..n).rev() {
            b = coeffs[r + 1] + mu * b;
            acc += b * z[r];
            nprime = nprime * mu + b;
        }
        out.push(acc / nprime);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Per-eigenvalue record of the angle comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenCandidate {
    pub index: usize,
    /// turn of the eigenvalue as (numerator, denominator)
    pub turn: (i64, i64),
    pub magnitude: f64,
    /// recovered residue: exponent ≡ candidate (mod modulus)
    pub candidate: Option<u64>,
    pub modulus: u64,
    pub excluded: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveryResult {
    /// reported modulo `residue_class_modulus`; ciphertext 1 yields 0, the
    /// representative of the coset {0, λ, 2λ, ...}
    pub exponent: u64,
    pub parity: Option<Parity>,
    pub residue_class_modulus: u64,
    pub diagnostics: Vec<EigenCandidate>,
}

fn crt_merge(r1: u64, m1: u64, r2: u64, m2: u64) -> Option<(u64, u64)> {
    let g = num_integer::gcd(m1, m2);
    if r1 % g != r2 % g {
        return None;
    }
    let l = m1 / g * m2;
    // r = r1 + m1·t with t ≡ (r2 − r1)/g · (m1/g)⁻¹ (mod m2/g)
    let m2g = m2 / g;
    if m2g == 1 {
        return Some((r1, m1));
    }
    let diff = ((r2 as i128 - r1 as i128) / g as i128).rem_euclid(m2g as i128) as u64;
    let inv = mod_inverse(m1 / g % m2g, m2g).ok()?;
    let t = (diff as u128 * inv as u128 % m2g as u128) as u64;
    Some(((r1 as u128 + m1 as u128 * t as u128) as u64 % l, l))
}

/// Shared angle-comparison core: recover e with base^e ≡ target (mod n)
/// from the spectrum of a representation that is exact for the base's
/// trajectory. Returns (exponent, identifiability modulus, parity, diags).
fn recover_core(
    n: u64,
    base: u64,
    target: u64,
    es: &EigenSystem,
) -> Result<(u64, u64, Option<Parity>, Vec<EigenCandidate>)> {
    let dim = es.eigenvalues.len();
    // value-list windows of the two lifted states
    let mut z0 = Vec::with_capacity(dim);
    let mut ze = Vec::with_capacity(dim);
    let (mut x, mut y) = (1u64, target % n);
    for _ in 0..dim {
        z0.push(Complex64::new(x as f64, 0.0));
        ze.push(Complex64::new(y as f64, 0.0));
        x = (x as u128 * base as u128 % n as u128) as u64;
        y = (y as u128 * base as u128 % n as u128) as u64;
    }
    let zt0 = transform_coordinates(es, &z0)?;
    let zte = transform_coordinates(es, &ze)?;
    let max_mag = zt0.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let tol = 1e-8 * max_mag.max(f64::MIN_POSITIVE);

    let mut diags = Vec::with_capacity(dim);
    let mut merged: Option<(u64, u64)> = None;
    let mut excited_nonreal = false;
    for (j, ev) in es.eigenvalues.iter().enumerate() {
        let turn = ev.turn.ok_or_else(|| {
            Error::RecoveryFailure("recovery needs exact rational-angle spectrum".into())
        })?;
        let (a, b) = (*turn.numer(), *turn.denom());
        let mag = zt0[j].norm();
        let mut diag = EigenCandidate {
            index: j,
            turn: (a, b),
            magnitude: mag,
            candidate: None,
            modulus: b as u64,
            excluded: None,
        };
        if b <= 2 {
            diag.excluded = Some("real eigenvalue".into());
            diags.push(diag);
            continue;
        }
        excited_nonreal = true;
        if mag < tol {
            diag.excluded = Some("mode not excited".into());
            diags.push(diag);
            continue;
        }
        // ratio angle ≡ e·a/b turns; snap k = e·a mod b onto its lattice.
        // Numerically shaky modes (weakly excited, cancellation-heavy) are
        // excluded rather than fatal: the exact certification scan below
        // still pins the answer from the congruences that survive.
        let ratio = zte[j] / zt0[j];
        if (ratio.norm() - 1.0).abs() > 0.01 {
            diag.excluded = Some(format!("ratio magnitude {:.4} off the unit circle", ratio.norm()));
            diags.push(diag);
            continue;
        }
        let theta = ratio.arg() / TAU;
        let scaled = theta * b as f64;
        let k = scaled.round();
        if (scaled - k).abs() > 0.1 {
            diag.excluded = Some(format!(
                "ratio angle off the 1/{} lattice by {:.3} steps",
                b,
                (scaled - k).abs()
            ));
            diags.push(diag);
            continue;
        }
        let k = (k as i64).rem_euclid(b) as u64;
        let cand = (k as u128 * mod_inverse(a.rem_euclid(b) as u64, b as u64)? as u128
            % b as u128) as u64;
        diag.candidate = Some(cand);
        merged = Some(match merged {
            None => (cand, b as u64),
            Some((r, l)) => match crt_merge(r, l, cand, b as u64) {
                Some(next) => next,
                None => {
                    diag.excluded = Some("inconsistent with merged congruence".into());
                    diag.candidate = None;
                    (r, l)
                }
            },
        });
        diags.push(diag);
    }
    if !excited_nonreal {
        return Err(Error::InsufficientSpectrum);
    }
    let (e_hat, l) = merged.unwrap_or((0, 1));
    // certify within the identifiability class
    let zeta = multiplicative_order(base, n)?;
    let scan = |e_hat: u64, l: u64| -> Result<Option<u64>> {
        let mut cand = e_hat;
        while cand < zeta.max(e_hat + 1) {
            if mod_pow(base, cand, n)? == target % n {
                return Ok(Some(cand % zeta));
            }
            cand += l;
        }
        Ok(None)
    };
    let mut found = scan(e_hat, l)?;
    if found.is_none() && l > 1 {
        // a numerically wrong congruence slipped through the gates;
        // fall back to the exhaustive certified scan
        found = scan(0, 1)?;
    }
    let exponent = found.ok_or_else(|| {
        Error::RecoveryFailure(format!(
            "certification failed: no exponent ≡ {} (mod {}) maps {} to {}",
            e_hat, l, base, target
        ))
    })?;
    // parity = sign of the Nyquist-mode ratio: y_r = x_{r+e} makes the
    // alternating period sums satisfy S_y = (−1)^e S_x. Exact integer
    // arithmetic, so no float sign flips; None when the mode is absent
    // (odd period) or cancels exactly.
    let parity = if zeta % 2 == 0 {
        let (mut sx, mut sy) = (0i128, 0i128);
        let (mut x, mut y) = (1u64, target % n);
        for r in 0..zeta {
            let s = if r % 2 == 0 { 1 } else { -1 };
            sx += s * x as i128;
            sy += s * y as i128;
            x = (x as u128 * base as u128 % n as u128) as u64;
            y = (y as u128 * base as u128 % n as u128) as u64;
        }
        if sx == 0 || sy == 0 {
            None
        } else if (sx > 0) == (sy > 0) {
            Some(Parity::Even)
        } else {
            Some(Parity::Odd)
        }
    } else {
        None
    };
    Ok((exponent, zeta, parity, diags))
}

/// Algorithm-2 style recovery of e from c = m^e mod p.
///
/// For a generator m the minimal DH spectrum (1 and the odd 2q̃-th roots)
/// is exact; for non-generators the representation falls back to the
/// Fermat shift of dimension p−1, which is valid for every m coprime to p.
/// The answer is identifiable only modulo the order of m.
pub fn recover_exponent(p: u64, m: u64, ciphertext: u64) -> Result<RecoveryResult> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::Domain(format!("p = {} must be a prime > 3", p)));
    }
    let m = m % p;
    let c = ciphertext % p;
    if m == 0 || c == 0 {
        return Err(Error::Domain("m and ciphertext must be units mod p".into()));
    }
    let es = if is_primitive_root(m, p)? {
        eigensystem(&dh_companion(p)?)?
    } else {
        shift_eigensystem(p - 1)
    };
    let (exponent, zeta, parity, diagnostics) = recover_core(p, m, c, &es)?;
    Ok(RecoveryResult { exponent, parity, residue_class_modulus: zeta, diagnostics })
}

/// Key recovery for desk-scale RSA: probes the public map with a message of
/// maximal period, recovers d on the decryption system (multiplier ĉ,
/// target m̂) from the shift spectrum, and certifies the coset against a
/// second, independent probe.
pub fn recover_rsa_key(p1: u64, p2: u64, e: u64) -> Result<RecoveryResult> {
    let cs = rsa_companion(p1, p2)?;
    let n = p1 * p2;
    let lambda = cs.q + 1;
    if num_integer::gcd(e, lambda) != 1 {
        return Err(Error::Key(format!("gcd(e, λ) = gcd({}, {}) ≠ 1", e, lambda)));
    }
    // probe message of maximal period ζ(m̂) = λ(p1·p2)
    let probe = (2..n)
        .find(|&m| {
            num_integer::gcd(m, n) == 1
                && multiplicative_order(m, n).map(|o| o == lambda).unwrap_or(false)
        })
        .ok_or_else(|| Error::Key("no maximal-order probe message".into()))?;
    let c_hat = mod_pow(probe, e, n)?;
    let es = eigensystem(&cs)?;
    let (d_hat, zeta, parity, diagnostics) = recover_core(n, c_hat, probe, &es)?;
    // second probe: scan the coset d̂ + t·ζ for a key consistent across both
    let probe2 = (2..n)
        .find(|&m| m != probe && num_integer::gcd(m, n) == 1)
        .ok_or_else(|| Error::Key("no second probe message".into()))?;
    let c2 = mod_pow(probe2, e, n)?;
    let consistent = (0..=lambda / zeta + 1).any(|t| {
        let d = d_hat + t * zeta;
        mod_pow(c_hat, d, n).ok() == Some(probe) && mod_pow(c2, d, n).ok() == Some(probe2)
    });
    if !consistent {
        return Err(Error::RecoveryFailure(
            "recovered key class fails the two-probe consistency check".into(),
        ));
    }
    Ok(RecoveryResult { exponent: d_hat, parity, residue_class_modulus: zeta, diagnostics })
}

/// Even/odd test on the −1 eigenvalue: the coordinate ratio at that mode is
/// (−1)^e.
pub fn parity_test(
    es: &EigenSystem,
    zt0: &[Complex64],
    zte: &[Complex64],
) -> Result<Option<Parity>> {
    let Some(idx) = es.minus_one_index else {
        return Ok(None);
    };
    let max_mag = zt0.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if zt0[idx].norm() < 1e-8 * max_mag.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateCoordinate);
    }
    Ok(Some(if (zte[idx] / zt0[idx]).re > 0.0 { Parity::Even } else { Parity::Odd }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{self, CryptoInstance};
    use num_bigint::BigInt;

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn dh_companion_examples() {
        let cs = dh_companion(19).unwrap();
        assert_eq!(cs.q, 9);
        let mut want = vec![rat(1), rat(-1)];
        want.extend(std::iter::repeat(rat(0)).take(7));
        want.push(rat(1));
        assert_eq!(cs.alpha, want);

        assert_eq!(dh_companion(5).unwrap().alpha, vec![rat(1), rat(-1), rat(1)]);
        let cs23 = dh_companion(23).unwrap();
        assert_eq!(cs23.q, 11);
        assert_eq!(cs23.alpha[0], rat(1));
        assert_eq!(cs23.alpha[1], rat(-1));
        assert_eq!(cs23.alpha[11], rat(1));
        assert!(cs23.alpha[2..11].iter().all(|a| a.is_zero()));

        assert!(dh_companion(3).is_err());
        assert!(dh_companion(15).is_err());
    }

    /// recurrence x_{k+q̃+1} = x_k − x_{k+1} + x_{k+q̃}, all generators,
    /// two periods
    #[test]
    fn dh_recurrence_exactness() {
        for p in [5u64, 7, 11, 13, 19, 23, 97] {
            let q = ((p - 1) / 2) as usize;
            for m in dynsys::generators(p).unwrap() {
                let traj =
                    dynsys::simulate(&CryptoInstance::dh(p, m).unwrap(), 1, 3 * (p - 1)).unwrap();
                let x = |k: usize| traj.values()[k] as i64;
                for k in 0..2 * (p - 1) as usize {
                    assert_eq!(x(k + q + 1), x(k) - x(k + 1) + x(k + q), "p={} m={}", p, m);
                }
            }
        }
    }

    #[test]
    fn padded_companion_examples() {
        assert_eq!(dh_companion_padded(19, 9).unwrap(), dh_companion(19).unwrap());

        let cs = dh_companion_padded(19, 17).unwrap();
        assert_eq!(cs.alpha[8], rat(1));
        assert_eq!(cs.alpha[9], rat(-1));
        assert_eq!(cs.alpha[17], rat(1));
        assert_eq!(cs.alpha.iter().filter(|a| !a.is_zero()).count(), 3);

        match dh_companion_padded(19, 8) {
            Err(Error::InfeasibleDimension { q: 8, minimal: 9 }) => {}
            other => panic!("expected infeasible-dimension error, got {:?}", other),
        }
    }

    /// padded recurrence verified on simulated trajectories
    #[test]
    fn padded_recurrence_holds() {
        for (p, q) in [(19u64, 17u64), (11, 7), (19, 12)] {
            let cs = dh_companion_padded(p, q).unwrap();
            for m in dynsys::generators(p).unwrap() {
                let traj =
                    dynsys::simulate(&CryptoInstance::dh(p, m).unwrap(), 1, 3 * (p - 1)).unwrap();
                let x = |k: usize| rat(traj.values()[k] as i64);
                for k in 0..(p - 1) as usize {
                    let rhs: BigRational =
                        cs.alpha.iter().enumerate().map(|(j, a)| a * x(k + j)).sum();
                    assert_eq!(x(k + q as usize + 1), rhs, "p={} q={} m={}", p, q, m);
                }
            }
        }
    }

    #[test]
    fn rsa_companion_examples() {
        let cs = rsa_companion(3, 5).unwrap();
        assert_eq!(cs.q, 3);
        assert_eq!(cs.alpha, vec![rat(1), rat(0), rat(0), rat(0)]);

        assert_eq!(rsa_companion(3, 7).unwrap().q, 5);
        assert_eq!(rsa_companion(5, 11).unwrap().q, 19);
        assert!(rsa_companion(5, 5).is_err());
        assert!(rsa_companion(3, 9).is_err());
    }

    /// x_{k+λ(p)} = x_k for all odd semiprime moduli p ≤ 1000 and units m
    #[test]
    fn rsa_shift_exactness() {
        let primes: Vec<u64> = (3..32).filter(|&x| is_prime(x)).collect();
        for (i, &p1) in primes.iter().enumerate() {
            for &p2 in &primes[i + 1..] {
                let n = p1 * p2;
                if n > 1000 {
                    continue;
                }
                let lambda = numtheory::carmichael(n);
                for m in 2..n {
                    if num_integer::gcd(m, n) != 1 {
                        continue;
                    }
                    assert_eq!(mod_pow(m, lambda, n).unwrap(), 1, "n={} m={}", n, m);
                }
            }
        }
    }

    #[test]
    fn check_dimension_examples() {
        assert_eq!(check_dimension(19, 2, 8).unwrap(), DimensionCheck::Infeasible);
        match check_dimension(19, 2, 9).unwrap() {
            DimensionCheck::Feasible { alpha } => {
                assert_eq!(alpha, dh_companion(19).unwrap().alpha)
            }
            other => panic!("expected feasible, got {:?}", other),
        }
        match check_dimension(15, 4, 1).unwrap() {
            DimensionCheck::Feasible { alpha } => assert_eq!(alpha, vec![rat(1), rat(0)]),
            other => panic!("expected feasible, got {:?}", other),
        }
    }

    #[test]
    fn eigensystem_dh19() {
        let es = eigensystem(&dh_companion(19).unwrap()).unwrap();
        assert_eq!(es.eigenvalues.len(), 10);
        assert_eq!(es.eigenvalues[0].turn, Some(Rational64::new(0, 1)));
        for (k, ev) in es.eigenvalues[1..].iter().enumerate() {
            assert_eq!(ev.turn, Some(Rational64::new(2 * k as i64 + 1, 18)));
        }
        // −1 at k = 4: turn (2·4+1)/18 = 1/2
        assert!(es.has_minus_one);
        assert_eq!(es.minus_one_index, Some(5));
    }

    #[test]
    fn eigensystem_rsa_and_trivial() {
        let es = eigensystem(&rsa_companion(3, 5).unwrap()).unwrap();
        let turns: Vec<_> = es.eigenvalues.iter().map(|e| e.turn.unwrap()).collect();
        assert_eq!(
            turns,
            vec![
                Rational64::new(0, 1),
                Rational64::new(1, 4),
                Rational64::new(1, 2),
                Rational64::new(3, 4)
            ]
        );

        let trivial = CompanionSystem {
            alpha: vec![rat(1)],
            q: 0,
            kind: SystemKind::Rsa,
            context: None,
        };
        let es = eigensystem(&trivial).unwrap();
        assert_eq!(es.eigenvalues.len(), 1);
        assert_eq!(es.eigenvalues[0].turn, Some(Rational64::new(0, 1)));
    }

    /// exact rational-angle arithmetic: each eigenvalue kills its
    /// characteristic polynomial; all distinct; all on the unit circle
    #[test]
    fn spectrum_invariants() {
        for p in [5u64, 19, 97, 199] {
            let cs = dh_companion(p).unwrap();
            let es = eigensystem(&cs).unwrap();
            let q = cs.q as i64;
            let mut seen = std::collections::HashSet::new();
            for ev in &es.eigenvalues {
                let t = ev.turn.unwrap();
                assert!(seen.insert(t));
                assert!((ev.value.norm() - 1.0).abs() < 1e-12);
                // (μ^q + 1)(μ − 1) = 0 ⟺ q·t ≡ 1/2 or t ≡ 0 (mod 1)
                let qt = t * Rational64::from_integer(q);
                let is_neg_root = (qt - Rational64::new(1, 2)).fract().is_zero();
                let is_one = t.is_zero();
                assert!(is_neg_root || is_one, "turn {} fails char poly", t);
            }
        }
        let es = eigensystem(&rsa_companion(5, 11).unwrap()).unwrap();
        for ev in &es.eigenvalues {
            let t = ev.turn.unwrap();
            assert!((t * Rational64::from_integer(20)).fract().is_zero());
        }
    }

    #[test]
    fn learned_eigensystem_matches_analytic() {
        let mut cs = dh_companion(19).unwrap();
        cs.kind = SystemKind::Learned;
        cs.context = None;
        let es = eigensystem(&cs).unwrap();
        let analytic = eigensystem(&dh_companion(19).unwrap()).unwrap();
        assert_eq!(es.eigenvalues.len(), 10);
        for ev in &es.eigenvalues {
            let closest = analytic
                .eigenvalues
                .iter()
                .map(|a| (a.value - ev.value).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(closest < 1e-9, "spurious learned root {:?}", ev.value);
        }
    }

    #[test]
    fn learned_repeated_roots_rejected() {
        // t² − 2t + 1 = (t−1)²: alpha = [−1, 2]
        let cs = CompanionSystem {
            alpha: vec![rat(-1), rat(2)],
            q: 1,
            kind: SystemKind::Learned,
            context: None,
        };
        assert!(matches!(eigensystem(&cs), Err(Error::NonDiagonalizable)));
    }

    #[test]
    fn transform_eigenvector_gives_unit_coordinate() {
        let es = eigensystem(&dh_companion(19).unwrap()).unwrap();
        let n = es.eigenvalues.len();
        for j in [0usize, 3, 9] {
            let mu = es.eigenvalues[j].value;
            let v: Vec<Complex64> = (0..n).map(|r| mu.powu(r as u32)).collect();
            let zt = transform_coordinates(&es, &v).unwrap();
            for (i, c) in zt.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((c - want).norm() < 1e-9, "entry {} of e_{}", i, j);
            }
        }
        // sum of all eigenvectors → all-ones coordinates
        let ones: Vec<Complex64> = (0..n)
            .map(|r| {
                es.eigenvalues
                    .iter()
                    .map(|e| e.value.powu(r as u32))
                    .sum()
            })
            .collect();
        let zt = transform_coordinates(&es, &ones).unwrap();
        assert!(zt.iter().all(|c| (c - Complex64::one()).norm() < 1e-9));
    }

    #[test]
    fn transform_excites_every_mode() {
        let es = eigensystem(&dh_companion(19).unwrap()).unwrap();
        let z: Vec<Complex64> = (0..10)
            .map(|j| Complex64::new(mod_pow(2, j, 19).unwrap() as f64, 0.0))
            .collect();
        let zt = transform_coordinates(&es, &z).unwrap();
        assert!(zt.iter().all(|c| c.norm() > 1e-9));
        assert!(matches!(
            transform_coordinates(&es, &z[..5]),
            Err(Error::DimensionMismatch { expected: 10, got: 5 })
        ));
    }

    #[test]
    fn recover_exponent_examples() {
        assert_eq!(mod_pow(2, 5, 19).unwrap(), 13);
        let r = recover_exponent(19, 2, 13).unwrap();
        assert_eq!(r.exponent, 5);
        assert_eq!(r.parity, Some(Parity::Odd));
        assert_eq!(r.residue_class_modulus, 18);

        let r = recover_exponent(19, 2, 1).unwrap();
        assert_eq!(r.exponent, 0);
        assert_eq!(r.parity, Some(Parity::Even));

        let c = mod_pow(5, 71, 97).unwrap();
        assert_eq!(recover_exponent(97, 5, c).unwrap().exponent, 71);
    }

    /// scale invariance of the ratio machinery: common rescaling of both
    /// lifted states does not move the recovered congruences
    #[test]
    fn recovery_ratios_scale_invariant() {
        let es = eigensystem(&dh_companion(19).unwrap()).unwrap();
        let z0: Vec<Complex64> = (0..10)
            .map(|j| Complex64::new(mod_pow(2, j, 19).unwrap() as f64, 0.0))
            .collect();
        let ze: Vec<Complex64> = (0..10)
            .map(|j| Complex64::new((13 * mod_pow(2, j, 19).unwrap() % 19) as f64, 0.0))
            .collect();
        let s = Complex64::new(-2.25, 1.75);
        let z0s: Vec<_> = z0.iter().map(|z| z * s).collect();
        let zes: Vec<_> = ze.iter().map(|z| z * s).collect();
        let (a, b) = (
            transform_coordinates(&es, &z0).unwrap(),
            transform_coordinates(&es, &ze).unwrap(),
        );
        let (a2, b2) = (
            transform_coordinates(&es, &z0s).unwrap(),
            transform_coordinates(&es, &zes).unwrap(),
        );
        for j in 0..10 {
            assert!(((b[j] / a[j]) - (b2[j] / a2[j])).norm() < 1e-9);
        }
        assert_eq!(parity_test(&es, &a, &b).unwrap(), parity_test(&es, &a2, &b2).unwrap());
    }

    #[test]
    fn recover_exponent_non_generator() {
        // ord(7 mod 19) = 3: exponent identifiable mod 3 only
        assert_eq!(multiplicative_order(7, 19).unwrap(), 3);
        let c = mod_pow(7, 2, 19).unwrap();
        let r = recover_exponent(19, 7, c).unwrap();
        assert_eq!(r.exponent, 2);
        assert_eq!(r.residue_class_modulus, 3);
    }

    #[test]
    fn recover_rsa_examples() {
        let r = recover_rsa_key(3, 5, 3).unwrap();
        assert_eq!(r.exponent % r.residue_class_modulus, r.exponent);
        assert_eq!(r.exponent, 3 % r.residue_class_modulus);
        assert_eq!(r.parity, Some(Parity::Odd));

        let r = recover_rsa_key(3, 5, 1).unwrap();
        assert_eq!(r.exponent, 1);

        // d = 7 for (5, 11, e=23): e·d = 161 ≡ 1 (mod 20)
        let r = recover_rsa_key(5, 11, 23).unwrap();
        assert_eq!(r.exponent, 7 % r.residue_class_modulus);
        // the −1 mode cancels when ĉ^{ζ/2} = −1 (x_{j+ζ/2} = n − x_j pairs
        // sum to a constant), so parity may be unavailable here
        if let Some(par) = r.parity {
            assert_eq!(par, Parity::Odd);
        }
    }

    #[test]
    fn parity_examples() {
        let es = eigensystem(&dh_companion(19).unwrap()).unwrap();
        for (e, want) in [(5u64, Parity::Odd), (0, Parity::Even), (8, Parity::Even)] {
            let c = mod_pow(2, e, 19).unwrap();
            assert_eq!(recover_exponent(19, 2, c).unwrap().parity, Some(want), "e={}", e);
        }
        // no −1 in the spectrum when q̃ is even (p = 5, q̃ = 2)
        let es5 = eigensystem(&dh_companion(5).unwrap()).unwrap();
        assert!(!es5.has_minus_one);
        assert_eq!(recover_exponent(5, 2, 4).unwrap().parity, None);
        let _ = es;
    }

    #[test]
    fn crt_merge_behaviour() {
        assert_eq!(crt_merge(2, 3, 3, 5), Some((8, 15)));
        assert_eq!(crt_merge(1, 4, 3, 6), Some((9, 12)));
        assert_eq!(crt_merge(1, 4, 0, 6), None);
    }
}
