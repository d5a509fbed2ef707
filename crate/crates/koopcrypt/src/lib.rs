//! koopcrypt — modular-exponentiation cryptosystems (Diffie–Hellman key
//! exchange, desk-scale RSA) viewed as discrete-time dynamical systems
//! x_{k+1} = m·x_k mod p, lifted to exact finite-dimensional linear
//! (Koopman) representations.
//!
//! The library builds the analytic companion-matrix representations and
//! their unit-circle spectra, recovers secret exponents and keys by
//! comparing eigencoordinate angles, learns the same representations from
//! trajectory data in exact rational arithmetic, and contrasts the
//! spectral view with classic linear-complexity analysis
//! (Berlekamp–Massey).

pub mod dynsys;
pub mod edmd;
pub mod error;
pub mod lifting;
pub mod linalg;
pub mod lincomp;
pub mod numtheory;
pub mod poly;
pub mod report;
pub mod spectral;

pub use dynsys::{simulate, CryptoInstance, Scheme, Trajectory};
pub use error::{Error, Result};
pub use numtheory::{mod_pow, Modulus};
pub use spectral::{
    dh_companion, recover_exponent, recover_rsa_key, rsa_companion, CompanionSystem,
    RecoveryResult,
};
