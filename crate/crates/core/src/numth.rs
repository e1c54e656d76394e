//! Exact integer arithmetic on 63-bit magnitudes.
//!
//! Products are formed in `u128`/`i128` and every result that can grow
//! (lcm, powers, products of prime powers) is checked against
//! [`MAX_MAGNITUDE`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest value any public quantity may take.
pub const MAX_MAGNITUDE: u64 = i64::MAX as u64;

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// `n` together with its prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from explicit `(prime, exponent)` pairs,
    /// checking every invariant.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        let mut last = 0;
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::InvalidInput(format!("zero exponent for prime {p}")));
            }
            if p <= last {
                return Err(Error::InvalidInput("primes must be strictly increasing".into()));
            }
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            last = p;
            value = checked_mul(value, checked_pow(p, e)?)?;
        }
        Ok(Self { value, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// `Some((p, e))` when the value is `p^e` with `e >= 1`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    /// Exponent of 2 in the value.
    pub fn two_exponent(&self) -> u32 {
        match self.factors.first() {
            Some(&(2, e)) => e,
            _ => 0,
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid: returns `(g, s, t)` with `g = gcd(|a|, |b|) >= 0` and
/// `a*s + b*t = g`.
pub fn ext_gcd(a: i64, b: i64) -> (u64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    // |s| <= |b|/g and |t| <= |a|/g, so both fit unless an input is i64::MIN
    // and the other is zero, where the cofactor is +-1 anyway.
    (r0 as u64, s0 as i64, t0 as i64)
}

pub fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .filter(|&x| x <= MAX_MAGNITUDE)
        .ok_or(Error::Overflow("product exceeds 63 bits"))
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = checked_mul(acc, base)?;
    }
    Ok(acc)
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("lcm of zero".into()));
    }
    checked_mul(a / gcd(a, b), b).map_err(|_| Error::Overflow("lcm exceeds 63 bits"))
}

/// Least common multiple of a non-empty list of positive integers.
pub fn lcm_list(ms: &[u64]) -> Result<u64> {
    if ms.is_empty() {
        return Err(Error::InvalidInput("lcm of an empty list".into()));
    }
    ms.iter().try_fold(1u64, |acc, &m| lcm(acc, m))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// `base^exp mod n`; `n = 1` gives 0.
pub fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut b = base % n;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (g, s, _) = ext_gcd((a % n) as i64, n as i64);
    (g == 1).then(|| (s as i128).rem_euclid(n as i128) as u64)
}

// Deterministic for all n < 2^64 with these bases.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho. Returns a non-trivial factor of a composite
// odd `n`, trying successive polynomial constants until one splits it.
fn pollard_rho(n: u64) -> u64 {
    const BATCH: u64 = 128;
    for c in 1.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (0u64, 2u64, 0u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // Batched product collapsed; retrace one step at a time.
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization: trial division up to 10^6, Pollard rho beyond.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    if n > MAX_MAGNITUDE {
        return Err(Error::Overflow("value exceeds 63 bits"));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut d = 3;
    while d <= TRIAL_DIVISION_BOUND && d * d <= m {
        push(d, &mut m);
        d += 2;
    }
    if m > 1 {
        let mut primes = Vec::new();
        split_into(m, &mut primes);
        primes.sort_unstable();
        for chunk in primes.chunk_by(|a, b| a == b) {
            factors.push((chunk[0], chunk.len() as u32));
        }
    }
    Ok(Factorization { value: n, factors })
}

/// Euler's totient, `prod p^(e-1) (p-1)`.
pub fn euler_phi(f: &Factorization) -> u64 {
    // Never larger than the value itself, so no overflow.
    f.factors
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

pub fn is_power_of_two(x: u64) -> bool {
    x != 0 && x & (x - 1) == 0
}
