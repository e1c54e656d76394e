//! Dickson permutation polynomials over `Z_n`.
//!
//! * [`numth`]: gcd, lcm, modular powers, factorization, Euler's totient.
//! * [`dickson`]: coefficients and evaluation of `D_k(x, a)`.
//! * [`criteria`]: `v(n)`, `w(n)` and permutation tests.
//! * [`congruence`]: congruence systems with arbitrary moduli.
//! * [`group`]: the kernel `K_n` and the order of `G_n`.
//! * [`oracle`]: exhaustive ground truth for small `n`.
//!
//! Sweeps run through [`exec::Execution`]; with the default `parallel`
//! feature they use rayon.

pub mod congruence;
pub mod criteria;
pub mod dickson;
pub mod error;
pub mod exec;
pub mod group;
pub mod numth;
pub mod oracle;

pub use error::{Error, Result};
pub use exec::Execution;
pub use numth::{factorize, Factorization};
