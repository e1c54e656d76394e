//! The moduli `v(n)` and `w(n)` and the permutation criteria built on them.
//!
//! For `n = 2^e p_1^e_1 ... p_r^e_r` (odd `p_i`):
//!
//! * `l_i = p_i^(e_i - 1) (p_i^2 - 1) / 2`,
//! * `l_0 = 3 * 2^(e-1)` for `1 <= e < 3` and `3 * 2^(e-2)` for `e >= 3`,
//! * `w(n) = lcm(l_0, l_1, ..., l_r)` (no `l_0` when `n` is odd),
//! * `v(n) = lcm` of `p^(e-1) (p^2 - 1)` over every prime power, 2 included.
//!
//! `D_k(x, a)` with `a` a unit permutes `Z_n` iff `gcd(k, w(n)) = 1`, iff
//! `gcd(k, v(n)) = 1`.

use serde::{Deserialize, Serialize};

use crate::dickson::{eval_fast, DicksonParams, ImageSweep};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numth::{checked_mul, checked_pow, gcd, lcm_list, Factorization};

/// Default bound on `n` for exhaustive permutation checks.
pub const BRUTE_FORCE_CAP: u64 = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliProfile {
    pub n: u64,
    /// Exponent of 2 in `n`.
    pub e: u32,
    /// Present iff `e >= 1`.
    pub l0: Option<u64>,
    /// One entry per odd prime power, primes ascending.
    pub ls: Vec<u64>,
    pub w: u64,
    pub v: u64,
}

impl ModuliProfile {
    /// Component moduli in canonical order: `l_0` first when present.
    pub fn moduli(&self) -> Vec<u64> {
        self.l0.iter().chain(&self.ls).copied().collect()
    }
}

/// `l_0` for the power `2^e`, `e >= 1`.
pub fn l_two(e: u32) -> Result<u64> {
    debug_assert!(e >= 1);
    if e < 3 {
        checked_mul(3, 1 << (e - 1))
    } else {
        checked_mul(3, checked_pow(2, e - 2)?)
    }
}

/// `l_i = p^(e-1) (p^2 - 1) / 2` for an odd prime power.
pub fn l_odd(p: u64, e: u32) -> Result<u64> {
    debug_assert!(p % 2 == 1 && e >= 1);
    let half = checked_mul(p, p)? / 2; // (p^2 - 1)/2 since p is odd
    checked_mul(checked_pow(p, e - 1)?, half)
}

fn v_term(p: u64, e: u32) -> Result<u64> {
    checked_mul(checked_pow(p, e - 1)?, checked_mul(p, p)? - 1)
}

/// Builds the moduli profile of `n >= 2`.
pub fn profile(f: &Factorization) -> Result<ModuliProfile> {
    if f.value() < 2 {
        return Err(Error::InvalidInput("profile requires n >= 2".into()));
    }
    let e = f.two_exponent();
    let l0 = if e >= 1 { Some(l_two(e)?) } else { None };
    let ls = f
        .factors()
        .iter()
        .filter(|&&(p, _)| p != 2)
        .map(|&(p, e)| l_odd(p, e))
        .collect::<Result<Vec<_>>>()?;
    let w = lcm_list(&l0.iter().chain(&ls).copied().collect::<Vec<_>>())?;
    let v_terms = f
        .factors()
        .iter()
        .map(|&(p, e)| v_term(p, e))
        .collect::<Result<Vec<_>>>()?;
    let v = lcm_list(&v_terms)?;
    Ok(ModuliProfile {
        n: f.value(),
        e,
        l0,
        ls,
        w,
        v,
    })
}

/// `gcd(k, w(n)) = 1`. Every `D_k` permutes `Z_1`.
pub fn is_perm_w(k: u64, f: &Factorization) -> Result<bool> {
    if f.value() == 1 {
        return Ok(true);
    }
    Ok(gcd(k, profile(f)?.w) == 1)
}

/// `gcd(k, v(n)) = 1`.
pub fn is_perm_v(k: u64, f: &Factorization) -> Result<bool> {
    if f.value() == 1 {
        return Ok(true);
    }
    Ok(gcd(k, profile(f)?.v) == 1)
}

/// Evaluates `D_k(u, a)` at every `u` in `Z_n` and reports injectivity.
pub fn is_perm_brute(k: u64, a: i64, n: u64, cap: u64) -> Result<bool> {
    is_perm_brute_with(k, a, n, cap, Execution::default())
}

pub fn is_perm_brute_with(k: u64, a: i64, n: u64, cap: u64, exec: Execution) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let p = DicksonParams::new(k, a, n)?;
    let images = exec.map_range(0..n, |u| eval_fast(&p, u));
    let mut seen = vec![false; n as usize];
    Ok(images
        .into_iter()
        .all(|y| !std::mem::replace(&mut seen[y as usize], true)))
}

/// Brute-force permutation flags for every degree `0..=k_max` at once.
///
/// Runs the recurrence across all of `Z_n` degree by degree, so the whole
/// sweep costs `O(n * k_max)`. Entry `k` of the result is
/// `is_perm_brute(k, a, n)`.
pub fn brute_perm_sweep(a: i64, n: u64, k_max: u64, cap: u64) -> Result<Vec<bool>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut sweep = ImageSweep::new(a, n)?;
    let mut seen = vec![0u64; n as usize];
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        if k > 0 {
            sweep.advance();
        }
        let stamp = k + 1;
        let injective = sweep
            .images()
            .iter()
            .all(|&y| std::mem::replace(&mut seen[y as usize], stamp) != stamp);
        out.push(injective);
    }
    Ok(out)
}
