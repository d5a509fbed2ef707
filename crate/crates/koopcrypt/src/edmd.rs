//! Data-driven path: Hankel snapshot matrices from trajectories, the exact
//! rational least-squares fit of the Koopman companion matrix, rank-based
//! minimal-dimension detection, and the Willems-consistency check.
//!
//! Value-list lifts are integers, so all algebra is exact: ranks by
//! fraction-free elimination, normal equations by the certified
//! multi-modular solver in [`crate::linalg`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::dynsys::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMat, RatMat};
use crate::spectral::{CompanionSystem, ModulusContext, SystemKind};

/// Snapshot pair: column k of `z` is the value-list lift (x_k, ..., x_{k+q}),
/// column k of `z_plus` the lift one step later.
#[derive(Debug, Clone)]
pub struct HankelData {
    pub z: IntMat,
    pub z_plus: IntMat,
    pub q: u64,
    pub n: usize,
    modulus: u64,
}

impl HankelData {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

pub fn build_hankel(traj: &Trajectory, q: u64, n: usize) -> Result<HankelData> {
    if n == 0 {
        return Err(Error::Range("sample count must be positive".into()));
    }
    let rows = (q + 1) as usize;
    let need = n + rows; // x_0 .. x_{n+q}
    let xs: Vec<BigInt> = (0..need).map(|k| traj.value_at(k).map(BigInt::from)).collect::<Result<_>>()?;
    let z: IntMat = (0..rows).map(|r| (0..n).map(|k| xs[k + r].clone()).collect()).collect();
    let z_plus: IntMat =
        (0..rows).map(|r| (0..n).map(|k| xs[k + r + 1].clone()).collect()).collect();
    Ok(HankelData { z, z_plus, q, n, modulus: traj.modulus() })
}

/// Exact rank, no tolerance.
pub fn rank_exact(m: &RatMat) -> usize {
    linalg::rank_exact_rational(m)
}

pub fn rank_exact_int(m: &IntMat) -> usize {
    linalg::bareiss_rank(m.clone())
}

/// Least-squares fit Â = argmin ‖Z₊ − A·Z‖_F on full-row-rank data, via the
/// normal equations Â = (Z₊Zᵀ)(ZZᵀ)⁻¹ in exact rational arithmetic. Rank
/// deficiency is refused — reduce the dimension with [`minimal_dimension`]
/// instead of guessing through a pseudo-inverse.
pub fn edmd_fit(hd: &HankelData) -> Result<CompanionSystem> {
    let rows = (hd.q + 1) as usize;
    let rank = rank_exact_int(&hd.z);
    if rank < rows {
        return Err(Error::RankDeficient { rank, rows });
    }
    let zt = linalg::transpose(&hd.z);
    let gram = linalg::mat_mul(&hd.z, &zt); // Z Zᵀ
    let cross = linalg::mat_mul(&hd.z, &linalg::transpose(&hd.z_plus)); // Z Z₊ᵀ = (Z₊Zᵀ)ᵀ
    let x = linalg::solve_exact(&gram, &cross)
        .ok_or_else(|| Error::RankDeficient { rank, rows })?;
    // Â = Xᵀ; its companion coefficient vector is the last row
    let alpha: Vec<BigRational> = x.iter().map(|row| row[rows - 1].clone()).collect();
    Ok(CompanionSystem {
        alpha,
        q: hd.q,
        kind: SystemKind::Learned,
        context: Some(ModulusContext { modulus: hd.modulus, multiplier: None }),
    })
}

/// Smallest lifting dimension from data: q̌ = rank(full-period Hankel) − 1,
/// then a re-fit on the first q̌+1 rows.
pub fn minimal_dimension(traj: &Trajectory) -> Result<(u64, CompanionSystem)> {
    let n = traj
        .period()
        .ok_or_else(|| Error::Range("trajectory must cover a full period".into()))?
        as usize;
    let full = build_hankel(traj, n as u64 - 1, n)?;
    let rank = rank_exact_int(&full.z);
    let q_check = rank as u64 - 1;
    let reduced = build_hankel(traj, q_check, n)?;
    let cs = edmd_fit(&reduced)?;
    Ok((q_check, cs))
}

/// Willems-style consistency: `window` is a length-L trajectory of the LTI
/// system behind the recorded data iff it lies in the column span of the
/// depth-L Hankel matrix built from one period (with periodic wrap). Exact
/// rational rank test of the augmented system.
///
/// The test certifies membership in the LTI behavior, not in the specific
/// modular orbit: for L at most the system lag the depth-L Hankel has full
/// row rank and every window is consistent (it is realized by some real
/// initial state of the linear representation). Only windows of length
/// above the lag — e.g. a full period — can be rejected.
pub fn willems_check(traj: &Trajectory, l: usize, window: &[u64]) -> Result<bool> {
    if l == 0 || window.len() != l {
        return Err(Error::DimensionMismatch { expected: l.max(1), got: window.len() });
    }
    let n = traj
        .period()
        .ok_or_else(|| Error::Range("trajectory must cover a full period".into()))?
        as usize;
    let h: IntMat = (0..l)
        .map(|r| (0..n).map(|k| traj.value_at(k + r).map(BigInt::from)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let base_rank = linalg::bareiss_rank(h.clone());
    let augmented: IntMat = h
        .into_iter()
        .zip(window)
        .map(|(mut row, &w)| {
            row.push(BigInt::from(w));
            row
        })
        .collect();
    Ok(linalg::bareiss_rank(augmented) == base_rank)
}

/// Row-major CSV with exact "n/d" fractions (RFC-4180; no quoting needed).
pub fn rational_csv(m: &RatMat) -> String {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    if x.denom().is_one() {
                        x.numer().to_string()
                    } else {
                        format!("{}/{}", x.numer(), x.denom())
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        })
        .map(|line| line + "\r\n")
        .collect()
}

pub fn hankel_csv(hd: &HankelData) -> String {
    rational_csv(&linalg::rat_from_int(&hd.z))
}

pub fn alpha_csv(cs: &CompanionSystem) -> String {
    rational_csv(&vec![cs.alpha.clone()])
}
