//! Systems of linear congruences whose moduli need not be coprime.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{ext_gcd, lcm};

/// `x ≡ residue (mod modulus)` with `0 <= residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Congruence {
    residue: u64,
    modulus: u64,
}

impl Congruence {
    /// Normalizes `residue` into `[0, modulus)`. The modulus must be at least 2.
    pub fn new(residue: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 || modulus > i64::MAX as u64 {
            return Err(Error::InvalidInput(format!(
                "congruence modulus must be in 2..2^63, got {modulus}"
            )));
        }
        Ok(Self {
            residue: (residue as i128).rem_euclid(modulus as i128) as u64,
            modulus,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_satisfied_by(&self, x: u64) -> bool {
        x % self.modulus == self.residue
    }
}

/// The unique solution class `residue (mod modulus)` of a solvable system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceSolution {
    pub residue: u64,
    pub modulus: u64,
}

impl From<CongruenceSolution> for Congruence {
    fn from(s: CongruenceSolution) -> Self {
        Congruence {
            residue: s.residue,
            modulus: s.modulus,
        }
    }
}

/// Solves `x ≡ a (mod p)`, `x ≡ b (mod q)`.
///
/// Solvable iff `d = gcd(p, q)` divides `a - b`; then `x = a + p*t` where
/// `t ≡ -s (a - b)/d (mod q/d)` and `p*s + q*t' = d`. Returns `Ok(None)` when
/// there is no solution.
pub fn solve_pair(c1: &Congruence, c2: &Congruence) -> Result<Option<CongruenceSolution>> {
    let (a, p) = (c1.residue as i128, c1.modulus);
    let (b, q) = (c2.residue as i128, c2.modulus);
    let (g, s, _) = ext_gcd(p as i64, q as i64);
    let diff = a - b;
    if diff % g as i128 != 0 {
        return Ok(None);
    }
    let l = lcm(p, q)?;
    let step = (q / g) as i128;
    let d = diff / g as i128;
    // Reduce before multiplying by p so that a + p*t < l fits.
    let t = (-(s as i128 % step) * (d % step)).rem_euclid(step);
    let x = (a + p as i128 * t) as u64 % l;
    debug_assert!(c1.is_satisfied_by(x) && c2.is_satisfied_by(x));
    Ok(Some(CongruenceSolution {
        residue: x,
        modulus: l,
    }))
}

/// Left fold of [`solve_pair`] over a non-empty list.
pub fn solve_chain(cs: &[Congruence]) -> Result<Option<CongruenceSolution>> {
    let (first, rest) = cs
        .split_first()
        .ok_or_else(|| Error::InvalidInput("empty congruence system".into()))?;
    let mut acc = CongruenceSolution {
        residue: first.residue,
        modulus: first.modulus,
    };
    for c in rest {
        match solve_pair(&acc.into(), c)? {
            Some(s) => acc = s,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::gcd;
    use proptest::prelude::*;

    fn c(r: i64, m: u64) -> Congruence {
        Congruence::new(r, m).unwrap()
    }

    fn scan(cs: &[Congruence]) -> Vec<u64> {
        let l = cs.iter().fold(1, |acc, c| lcm(acc, c.modulus()).unwrap());
        (0..l)
            .filter(|&x| cs.iter().all(|c| c.is_satisfied_by(x)))
            .collect()
    }

    #[test]
    fn pair_examples() {
        assert_eq!(
            solve_pair(&c(2, 6), &c(5, 9)).unwrap(),
            Some(CongruenceSolution {
                residue: 14,
                modulus: 18
            })
        );
        assert_eq!(solve_pair(&c(1, 4), &c(2, 6)).unwrap(), None);
        assert_eq!(
            solve_pair(&c(7, 10), &c(7, 10)).unwrap(),
            Some(CongruenceSolution {
                residue: 7,
                modulus: 10
            })
        );
        assert_eq!(c(-1, 12).residue(), 11);
        assert!(Congruence::new(0, 1).is_err());
    }

    #[test]
    fn chain_examples() {
        let sol = |r, m| Some(CongruenceSolution { residue: r, modulus: m });
        assert_eq!(solve_chain(&[c(1, 4), c(1, 12), c(1, 24)]).unwrap(), sol(1, 24));
        assert_eq!(solve_chain(&[c(3, 4), c(11, 12), c(23, 24)]).unwrap(), sol(23, 24));
        assert_eq!(solve_chain(&[c(1, 4), c(5, 12), c(7, 24)]).unwrap(), None);
        assert_eq!(solve_chain(&[c(5, 9)]).unwrap(), sol(5, 9));
        assert!(solve_chain(&[]).is_err());
    }

    #[test]
    fn pair_matches_exhaustive_scan() {
        for p in 2..=30u64 {
            for q in 2..=30u64 {
                for a in 0..p {
                    for b in 0..q {
                        let cs = [c(a as i64, p), c(b as i64, q)];
                        let found = scan(&cs);
                        match solve_pair(&cs[0], &cs[1]).unwrap() {
                            Some(s) => {
                                assert_eq!(found, vec![s.residue]);
                                assert_eq!(s.modulus, lcm(p, q).unwrap());
                            }
                            None => assert!(found.is_empty()),
                        }
                        assert_eq!(found.is_empty(), (a as i64 - b as i64) % gcd(p, q) as i64 != 0);
                    }
                }
            }
        }
    }

    #[test]
    fn large_moduli_do_not_overflow() {
        let p = (1u64 << 31) - 1;
        let q = 1u64 << 31;
        let s = solve_pair(&c(12345, p), &c(-7, q)).unwrap().unwrap();
        assert_eq!(s.modulus, p * q);
        assert_eq!(s.residue % p, 12345);
        assert_eq!(s.residue % q, q - 7);
        let p = 3 * (1u64 << 40);
        let q = 5 * (1u64 << 40);
        let s = solve_pair(&c(9, p), &c(9 + (1 << 39), q));
        assert_eq!(s.unwrap(), None);
    }

    #[test]
    fn lcm_overflow_is_an_error() {
        let p = (1u64 << 61) - 1;
        let q = (1u64 << 62) - 57;
        assert!(matches!(solve_pair(&c(1, p), &c(1, q)), Err(Error::Overflow(_))));
    }

    // Reducing k mod m to its residues mod each b_i is injective on the units
    // of Z_m, m = lcm(b_i).
    #[test]
    fn residue_map_is_injective() {
        use std::collections::HashSet;
        let families: &[&[u64]] = &[&[4, 12, 24], &[6, 4, 12], &[3, 4], &[12, 12], &[6, 10, 15], &[24, 60, 84]];
        for bs in families {
            let m = bs.iter().fold(1, |acc, &b| lcm(acc, b).unwrap());
            let mut seen = HashSet::new();
            for k in (1..m).filter(|&k| gcd(k, m) == 1) {
                let image: Vec<u64> = bs.iter().map(|&b| k % b).collect();
                assert!(seen.insert(image), "bs={bs:?} k={k}");
            }
        }
        // Pairs of proper divisors whose lcm is m, for every m up to 5000.
        for m in 2..=5000u64 {
            let divs: Vec<u64> = (2..m).filter(|d| m % d == 0).collect();
            let bs: Vec<u64> = divs.iter().rev().take(2).copied().collect();
            if bs.iter().fold(1, |acc, &b| lcm(acc, b).unwrap()) != m {
                continue;
            }
            let mut seen = HashSet::new();
            for k in (1..m).filter(|&k| gcd(k, m) == 1) {
                assert!(seen.insert(bs.iter().map(|&b| k % b).collect::<Vec<_>>()));
            }
        }
    }

    proptest! {
        #[test]
        fn chain_is_order_independent(
            cs in proptest::collection::vec((0i64..100, 2u64..40), 1..5),
            seed in any::<u64>(),
        ) {
            let cs: Vec<Congruence> = cs.into_iter().map(|(r, m)| c(r, m)).collect();
            let base = solve_chain(&cs).unwrap();
            let mut shuffled = cs.clone();
            let len = shuffled.len();
            shuffled.rotate_left(seed as usize % len);
            if len > 1 {
                shuffled.swap(0, (seed as usize / 7) % len);
            }
            prop_assert_eq!(solve_chain(&shuffled).unwrap(), base);
            if let Some(s) = base {
                prop_assert!(cs.iter().all(|c| c.is_satisfied_by(s.residue)));
            }
        }

        #[test]
        fn solutions_are_unique_mod_lcm(a in 0i64..60, p in 2u64..60, b in 0i64..60, q in 2u64..60) {
            let (c1, c2) = (c(a, p), c(b, q));
            let l = lcm(p, q).unwrap();
            let sols: Vec<u64> = (0..3 * l).filter(|&x| c1.is_satisfied_by(x) && c2.is_satisfied_by(x)).collect();
            prop_assert!(sols.windows(2).all(|w| w[1] - w[0] == l));
        }
    }
}
