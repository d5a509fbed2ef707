//! Integer polynomial helpers: exact division by monic polynomials,
//! cyclotomic polynomials, and the minimal cyclic annihilator of a periodic
//! integer sequence.
//!
//! A periodic sequence of period n satisfies the linear recurrence with
//! characteristic polynomial c(t) exactly when every "active" n-th root of
//! unity (a root of t^n - 1 that is not a root of the generating polynomial
//! S(t) = sum_k x_k t^k) is a root of c. The minimal such monic polynomial is
//! g(t) = (t^n - 1) / gcd(S(t), t^n - 1), and since the cyclotomic
//! polynomials are irreducible over Q, the gcd is the product of those
//! Phi_d (d | n) dividing S. This gives an exact, division-only route to the
//! rank of the period's circulant/Hankel matrix (= deg g) and to the
//! recurrence coefficients, with no elimination over big rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients in ascending order; no trailing-zero normalization is assumed
/// beyond what the constructors produce.
pub type IntPoly = Vec<BigInt>;

pub fn degree(p: &IntPoly) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

/// t^n - 1.
pub fn power_minus_one(n: usize) -> IntPoly {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    p
}

/// Divide `num` by the monic polynomial `den`; returns (quotient, remainder).
/// Exact integer arithmetic throughout (monic divisor keeps everything in Z).
pub fn divmod_monic(num: &IntPoly, den: &IntPoly) -> (IntPoly, IntPoly) {
    let dd = degree(den);
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: IntPoly = num.clone();
    let dn = degree(&rem);
    if dn < dd {
        return (vec![BigInt::zero()], trim(rem));
    }
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=dd {
            let delta = &c * &den[j];
            rem[k + j] -= delta;
        }
    }
    (quot, trim(rem))
}

pub fn divides(den: &IntPoly, num: &IntPoly) -> bool {
    let (_, rem) = divmod_monic(num, den);
    rem.iter().all(|c| c.is_zero())
}

fn divisors(n: usize) -> Vec<usize> {
    let mut ds: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    ds.sort_unstable();
    ds
}

/// Cyclotomic polynomials Phi_d for every d | n, by repeated exact division
/// of t^d - 1 by the lower-order Phi_e.
pub fn cyclotomics_dividing(n: usize) -> Vec<(usize, IntPoly)> {
    let mut table: Vec<(usize, IntPoly)> = Vec::new();
    for d in divisors(n) {
        let mut p = power_minus_one(d);
        for (e, phi) in &table {
            if d % e == 0 {
                let (q, r) = divmod_monic(&p, phi);
                debug_assert!(r.iter().all(|c| c.is_zero()));
                p = q;
            }
        }
        table.push((d, p));
    }
    table
}

/// Minimal monic annihilator g(t) of the cyclic sequence `period`:
/// the smallest-degree monic polynomial c with
/// sum_j c_j x_{k+j} = 0 (cyclically) for all k.
pub fn cyclic_annihilator(period: &[i64]) -> IntPoly {
    let n = period.len();
    let s: IntPoly = period.iter().map(|&x| BigInt::from(x)).collect();
    let mut g = power_minus_one(n);
    if s.iter().all(|c| c.is_zero()) {
        return vec![BigInt::one()];
    }
    for (_, phi) in cyclotomics_dividing(n) {
        if divides(&phi, &s) {
            let (q, r) = divmod_monic(&g, &phi);
            debug_assert!(r.iter().all(|c| c.is_zero()));
            g = q;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> IntPoly {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn division_exact() {
        // (t^2 - 1) / (t - 1) = t + 1
        let (q, r) = divmod_monic(&poly(&[-1, 0, 1]), &poly(&[-1, 1]));
        assert_eq!(q, poly(&[1, 1]));
        assert!(r.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn cyclotomics_for_12() {
        let table = cyclotomics_dividing(12);
        let by_d: std::collections::HashMap<usize, IntPoly> = table.into_iter().collect();
        assert_eq!(by_d[&1], poly(&[-1, 1]));
        assert_eq!(by_d[&2], poly(&[1, 1]));
        assert_eq!(by_d[&3], poly(&[1, 1, 1]));
        assert_eq!(by_d[&4], poly(&[1, 0, 1]));
        assert_eq!(by_d[&6], poly(&[1, -1, 1]));
        assert_eq!(by_d[&12], poly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn annihilator_of_dh19() {
        // period of x_{k+1} = 2 x_k mod 19: minimal recurrence is
        // t^10 - t^9 + t - 1 = (t^9 + 1)(t - 1)
        let mut seq = Vec::new();
        let mut x = 1i64;
        for _ in 0..18 {
            seq.push(x);
            x = x * 2 % 19;
        }
        let g = cyclic_annihilator(&seq);
        let mut expected = vec![BigInt::zero(); 11];
        expected[0] = BigInt::from(-1);
        expected[1] = BigInt::from(1);
        expected[9] = BigInt::from(-1);
        expected[10] = BigInt::from(1);
        assert_eq!(g, expected);
    }

    #[test]
    fn annihilator_of_shift_sequence() {
        // period [1,2,4,8] mod 15: full-rank circulant -> g = t^4 - 1
        let g = cyclic_annihilator(&[1, 2, 4, 8]);
        assert_eq!(g, power_minus_one(4));
        // period [1,4] mod 15: g = t^2 - 1
        let g = cyclic_annihilator(&[1, 4]);
        assert_eq!(g, power_minus_one(2));
    }
}
