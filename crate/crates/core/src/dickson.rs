//! Dickson polynomials of the first kind, `D_k(x, a)`.
//!
//! `D_0 = 2`, `D_1 = x` and `D_k = x D_{k-1} - a D_{k-2}`. Three evaluators
//! are provided: the exact coefficient form (small `k`), the linear
//! recurrence (reference, `O(k)`) and Lucas-style doubling (`O(log k)`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{mul_mod, pow_mod};

/// Largest degree for which [`coeffs`] produces exact coefficients.
pub const COEFF_DEGREE_CAP: u64 = 64;

/// Largest modulus accepted by [`ImageSweep`]; keeps `2 n^2` inside `u32`.
pub const SWEEP_MAX_MODULUS: u64 = 46_340;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DicksonParams {
    pub k: u64,
    pub a: i64,
    pub n: u64,
}

impl DicksonParams {
    pub fn new(k: u64, a: i64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("modulus must be at least 1".into()));
        }
        Ok(Self { k, a, n })
    }

    /// The parameter `a` as a residue in `[0, n)`.
    pub fn a_mod_n(&self) -> u64 {
        reduce_signed(self.a, self.n)
    }
}

pub(crate) fn reduce_signed(a: i64, n: u64) -> u64 {
    (a as i128).rem_euclid(n as i128) as u64
}

/// Exact integer coefficients of `D_k(x, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicksonCoeffs {
    pub k: u64,
    /// `(power, coefficient)` with powers `k, k-2, k-4, ...`.
    pub terms: Vec<(u32, i64)>,
}

impl DicksonCoeffs {
    /// Evaluates the polynomial at `u` modulo `n` by Horner's rule.
    pub fn eval_mod(&self, u: u64, n: u64) -> u64 {
        if n == 1 {
            return 0;
        }
        let u = u % n;
        let u2 = mul_mod(u, u, n);
        // Horner in x^2, then one extra factor of x for odd degree.
        let mut acc = 0u64;
        for &(_, c) in &self.terms {
            acc = (mul_mod(acc, u2, n) + reduce_signed(c, n)) % n;
        }
        if self.k % 2 == 1 {
            acc = mul_mod(acc, u, n);
        }
        acc
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `sum_j k/(k-j) * C(k-j, j) * (-a)^j * x^(k-2j)` for `j = 0..=k/2`.
pub fn coeffs(k: u64, a: i64) -> Result<DicksonCoeffs> {
    if k > COEFF_DEGREE_CAP {
        return Err(Error::DegreeTooLarge {
            k,
            cap: COEFF_DEGREE_CAP,
        });
    }
    if k == 0 {
        return Ok(DicksonCoeffs {
            k,
            terms: vec![(0, 2)],
        });
    }
    let overflow = || Error::Overflow("Dickson coefficient exceeds 63 bits");
    let mut terms = Vec::with_capacity(k as usize / 2 + 1);
    let mut neg_a_pow: i128 = 1;
    for j in 0..=k / 2 {
        let magnitude = binomial(k - j, j) * k as u128 / (k - j) as u128;
        let c = i128::try_from(magnitude)
            .ok()
            .and_then(|m| m.checked_mul(neg_a_pow))
            .and_then(|c| i64::try_from(c).ok())
            .ok_or_else(overflow)?;
        terms.push(((k - 2 * j) as u32, c));
        if j < k / 2 {
            neg_a_pow = neg_a_pow
                .checked_mul(-(a as i128))
                .filter(|v| v.unsigned_abs() <= i64::MAX as u128)
                .ok_or_else(overflow)?;
        }
    }
    Ok(DicksonCoeffs { k, terms })
}

/// Reference evaluator: runs the three-term recurrence `k` times.
pub fn eval_recurrence(p: &DicksonParams, u: u64) -> u64 {
    let n = p.n;
    if n == 1 {
        return 0;
    }
    let x = u % n;
    if p.k == 0 {
        return 2 % n;
    }
    let a = p.a_mod_n();
    let (mut prev, mut cur) = (2 % n, x);
    for _ in 1..p.k {
        let next = (mul_mod(x, cur, n) + n - mul_mod(a, prev, n)) % n;
        prev = cur;
        cur = next;
    }
    cur
}

/// Doubling evaluator for degrees up to `u128::MAX`.
///
/// Walks the bits of `k` keeping `(D_m, D_{m+1}, a^m)`:
/// `D_{2m} = D_m^2 - 2a^m`, `D_{2m+1} = D_m D_{m+1} - a^m x`,
/// `D_{2m+2} = D_{m+1}^2 - 2a^{m+1}`.
pub fn eval_wide(k: u128, a: u64, n: u64, u: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let x = u % n;
    let a = a % n;
    let sub = |lhs: u64, rhs: u64| if lhs >= rhs { lhs - rhs } else { lhs + n - rhs };
    let (mut d0, mut d1, mut am) = (2 % n, x, 1 % n);
    let bits = 128 - k.leading_zeros();
    for i in (0..bits).rev() {
        let cross = sub(mul_mod(d0, d1, n), mul_mod(am, x, n));
        if (k >> i) & 1 == 0 {
            d0 = sub(mul_mod(d0, d0, n), mul_mod(2, am, n));
            d1 = cross;
            am = mul_mod(am, am, n);
        } else {
            let am1 = mul_mod(am, a, n);
            d1 = sub(mul_mod(d1, d1, n), mul_mod(2, am1, n));
            d0 = cross;
            am = mul_mod(am, am1, n);
        }
    }
    d0
}

/// `O(log k)` evaluation of `D_k(u, a) mod n`.
pub fn eval_fast(p: &DicksonParams, u: u64) -> u64 {
    eval_wide(p.k as u128, p.a_mod_n(), p.n, u)
}

/// Checks `D_{mk}(u, a) = D_m(D_k(u, a), a^k)` modulo `n`.
pub fn compose_check(m: u64, k: u64, a: i64, n: u64, u: u64) -> bool {
    if n == 1 {
        return true;
    }
    let a = reduce_signed(a, n);
    let lhs = eval_wide(m as u128 * k as u128, a, n, u);
    let inner = eval_wide(k as u128, a, n, u);
    let rhs = eval_wide(m as u128, pow_mod(a, k, n), n, inner);
    lhs == rhs
}

/// Image vectors `(D_k(0), ..., D_k(n-1))` for `k = 0, 1, 2, ...`, produced by
/// running the recurrence on all residues at once.
///
/// This is the recurrence evaluator in vector form: after `k` calls to
/// [`ImageSweep::advance`], `images()[u] == eval_recurrence(k, a, n, u)`.
#[derive(Debug, Clone)]
pub struct ImageSweep {
    n: u32,
    a: u32,
    k: u64,
    prev: Vec<u32>,
    cur: Vec<u32>,
}

impl ImageSweep {
    pub fn new(a: i64, n: u64) -> Result<Self> {
        if n == 0 || n > SWEEP_MAX_MODULUS {
            return Err(Error::InvalidInput(format!(
                "sweep modulus must be in 1..={SWEEP_MAX_MODULUS}, got {n}"
            )));
        }
        let len = n as usize;
        Ok(Self {
            n: n as u32,
            a: reduce_signed(a, n) as u32,
            k: 0,
            prev: vec![0; len],
            cur: vec![(2 % n) as u32; len],
        })
    }

    /// Degree of the current image vector.
    pub fn degree(&self) -> u64 {
        self.k
    }

    pub fn images(&self) -> &[u32] {
        &self.cur
    }

    pub fn advance(&mut self) -> &[u32] {
        let n = self.n;
        if self.k == 0 {
            std::mem::swap(&mut self.prev, &mut self.cur);
            for (u, c) in self.cur.iter_mut().enumerate() {
                *c = u as u32;
            }
        } else {
            let nn = n * n;
            let a = self.a;
            // Reuse `prev` as the output buffer.
            if a == 1 {
                for ((p, &c), u) in self.prev.iter_mut().zip(&self.cur).zip(0u32..) {
                    *p = (u * c + n - *p) % n;
                }
            } else {
                for ((p, &c), u) in self.prev.iter_mut().zip(&self.cur).zip(0u32..) {
                    *p = (u * c + nn - a * *p) % n;
                }
            }
            std::mem::swap(&mut self.prev, &mut self.cur);
        }
        self.k += 1;
        &self.cur
    }
}
