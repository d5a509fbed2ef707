//! Observable families that lift the modular dynamics into a space where they
//! evolve linearly: complex unit-circle observables h_j(x) = exp(i 2pi/p
//! m^{j+1} x) and plain value-list observables h_j(x_k) = x_{k+j}.
//!
//! Unit-circle components are stored as exact angle numerators modulo p
//! (the angle is 2*pi*numerator/p); complex floating values are derived on
//! demand. This keeps the integer reconstruction search exact.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::dynsys::Trajectory;
use crate::numtheory::{gcd, mod_pow};

/// Lift onto the complex unit circle. Component j carries the angle
/// (2 pi / p) * (m^{j+1} x mod p).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct UnitCircleLift {
    /// angle numerators: component j is exp(i 2 pi numerators[j] / p)
    pub numerators: Vec<u64>,
    pub p: u64,
    pub m: u64,
    pub q: usize,
}

impl UnitCircleLift {
    /// Floating-point view of component j.
    pub fn complex(&self, j: usize) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.numerators[j] as f64 / self.p as f64;
        Complex64::from_polar(1.0, theta)
    }

    pub fn components(&self) -> Vec<Complex64> {
        (0..self.numerators.len()).map(|j| self.complex(j)).collect()
    }
}

/// Lift as a list of subsequent state values (x_k, ..., x_{k+q}).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ValueListLift {
    pub components: Vec<u64>,
    pub q: usize,
}

/// h_j(x) = exp(i 2pi/p m^{j+1} x) for j = 0..q, stored by angle numerator.
pub fn lift_unit_circle(x: u64, m: u64, p: u64, q: usize) -> Result<UnitCircleLift> {
    if p < 3 || gcd(m % p, p) != 1 {
        return Err(Error::Domain(format!("m = {m} must be coprime to p = {p}")));
    }
    let mut numerators = Vec::with_capacity(q + 1);
    let mut factor = m as u128 % p as u128;
    for _ in 0..=q {
        numerators.push((factor * (x as u128) % p as u128) as u64);
        factor = factor * (m as u128) % p as u128;
    }
    Ok(UnitCircleLift { numerators, p, m: m % p, q })
}

/// Reconstruct x from component j of a unit-circle lift: increase the integer
/// shift until (numerator + shift * p) / (m^{j+1} mod p) is an integer in
/// [1, p-1]. A well-formed lift terminates in fewer than p iterations.
pub fn invert_unit_circle(z: &UnitCircleLift, j: usize) -> Result<u64> {
    let numerator = *z
        .numerators
        .get(j)
        .ok_or_else(|| Error::DimensionMismatch { expected: z.q + 1, got: j })?;
    let divisor = mod_pow(z.m, j as u64 + 1, z.p)?;
    for shift in 0..z.p {
        let candidate = numerator + shift * z.p;
        if candidate % divisor == 0 {
            let x = candidate / divisor;
            if (1..z.p).contains(&x) {
                return Ok(x);
            }
        }
    }
    Err(Error::InversionFailure)
}

/// (x_k, ..., x_{k+q}) from a trajectory; indices past the stored range are
/// resolved through the period.
pub fn lift_value_list(traj: &Trajectory, k: usize, q: usize) -> Result<ValueListLift> {
    let components = (k..=k + q)
        .map(|idx| traj.value_at(idx))
        .collect::<Result<Vec<_>>>()?;
    Ok(ValueListLift { components, q })
}

/// x_k = [1 0 ... 0] z_k.
pub fn invert_value_list(z: &ValueListLift) -> Result<u64> {
    z.components
        .first()
        .copied()
        .ok_or_else(|| Error::Range("empty value-list lift".into()))
}
