//! The group `G_n` of permutations of `Z_n` induced by `D_k(x, 1)`.
//!
//! `k -> D_k` maps the units of `Z_w(n)` onto `G_n`. Its kernel `K_n` is found
//! by solving, for every tuple `(a_0?, a_1, ..., a_r)` of per-prime-power
//! kernel elements, the system `k ≡ a_i (mod l_i)`; each solvable tuple gives
//! exactly one kernel element. Then `|G_n| = phi(w(n)) / |K_n|`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::congruence::{solve_chain, solve_pair, Congruence, CongruenceSolution};
use crate::criteria::{l_odd, l_two, profile, ModuliProfile};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numth::{checked_mul, checked_pow, euler_phi, factorize, gcd, Factorization};
use crate::oracle;

/// Kernel of `Z*_l -> G_{p^e}` for one prime power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelComponent {
    pub prime: u64,
    pub exponent: u32,
    /// `l_0` for `p = 2`, otherwise `l_i`.
    pub modulus: u64,
    /// Residues mod `modulus` in the order `1, -1[, p, -p]`.
    pub elements: Vec<u64>,
}

/// `K_{2^e} = K_{3^e} = {1, -1}`; for `p >= 5`, `{1, -1, p, -p}` if `e = 1`
/// and `{1, -1}` otherwise.
pub fn kernel_component(p: u64, e: u32) -> Result<KernelComponent> {
    if e == 0 || !crate::numth::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p}^{e} is not a prime power")));
    }
    let l = if p == 2 { l_two(e)? } else { l_odd(p, e)? };
    let mut elements = vec![1, l - 1];
    if p >= 5 && e == 1 {
        let pm = p % l;
        elements.extend([pm, l - pm]);
        let distinct: BTreeSet<u64> = elements.iter().copied().collect();
        if distinct.len() != 4 {
            return Err(Error::Internal(format!(
                "kernel component for {p} is not four distinct residues mod {l}: {elements:?}"
            )));
        }
    }
    Ok(KernelComponent {
        prime: p,
        exponent: e,
        modulus: l,
        elements,
    })
}

/// Components in canonical order: the 2-part first, then odd primes ascending.
pub fn kernel_components(f: &Factorization) -> Result<Vec<KernelComponent>> {
    f.factors()
        .iter()
        .map(|&(p, e)| kernel_component(p, e))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelResult {
    pub n: u64,
    pub profile: ModuliProfile,
    pub components: Vec<KernelComponent>,
    /// `K_n` as residues mod `w(n)`.
    pub kernel: BTreeSet<u64>,
    /// Each kernel element with the unique solvable tuple it solves.
    pub witnesses: BTreeMap<u64, Vec<u64>>,
}

// All solvable tuples whose first entry is `first`, with their solutions.
// Walks the remaining components as an odometer, pruning a prefix as soon as
// it has no solution.
fn walk_from(comps: &[KernelComponent], first: u64) -> Result<Vec<(Vec<u64>, u64)>> {
    let depth = comps.len();
    let root = CongruenceSolution {
        residue: first,
        modulus: comps[0].modulus,
    };
    if depth == 1 {
        return Ok(vec![(vec![first], first)]);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; depth];
    // partial[i] solves the first i + 1 congruences of the current prefix.
    let mut partial = vec![root];
    let mut level = 1;
    loop {
        if idx[level] == comps[level].elements.len() {
            idx[level] = 0;
            if level == 1 {
                break;
            }
            level -= 1;
            partial.pop();
            idx[level] += 1;
            continue;
        }
        let next = Congruence::new(comps[level].elements[idx[level]] as i64, comps[level].modulus)?;
        match solve_pair(&partial[level - 1].into(), &next)? {
            None => idx[level] += 1,
            Some(s) if level == depth - 1 => {
                let tuple = std::iter::once(first)
                    .chain((1..depth).map(|i| comps[i].elements[idx[i]]))
                    .collect();
                out.push((tuple, s.residue));
                idx[level] += 1;
            }
            Some(s) => {
                partial.push(s);
                level += 1;
            }
        }
    }
    Ok(out)
}

/// Enumerates `K_n` by solving every tuple system.
pub fn enumerate_kernel(f: &Factorization) -> Result<KernelResult> {
    enumerate_kernel_with(f, Execution::default())
}

pub fn enumerate_kernel_with(f: &Factorization, exec: Execution) -> Result<KernelResult> {
    let profile = profile(f)?;
    let components = kernel_components(f)?;
    let w = profile.w;
    let branches = exec.map_slice(&components[0].elements, |&a| walk_from(&components, a));
    let mut witnesses = BTreeMap::new();
    for branch in branches {
        for (tuple, k) in branch? {
            if gcd(k, w) != 1 {
                return Err(Error::Internal(format!("kernel element {k} is not a unit mod {w}")));
            }
            if let Some(prev) = witnesses.insert(k, tuple.clone()) {
                return Err(Error::Internal(format!(
                    "tuples {prev:?} and {tuple:?} both solve to {k} mod {w}"
                )));
            }
        }
    }
    Ok(KernelResult {
        n: f.value(),
        kernel: witnesses.keys().copied().collect(),
        profile,
        components,
        witnesses,
    })
}

/// Maps a tuple of component elements to the kernel element solving its
/// system.
pub fn rho(tuple: &[u64], f: &Factorization) -> Result<u64> {
    let comps = kernel_components(f)?;
    if tuple.len() != comps.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} tuple entries, got {}",
            comps.len(),
            tuple.len()
        )));
    }
    let system = tuple
        .iter()
        .zip(&comps)
        .map(|(&a, c)| {
            let r = a % c.modulus;
            if !c.elements.contains(&r) {
                return Err(Error::InvalidInput(format!(
                    "{a} is not in the kernel component for {}^{}",
                    c.prime, c.exponent
                )));
            }
            Congruence::new(r as i64, c.modulus)
        })
        .collect::<Result<Vec<_>>>()?;
    solve_chain(&system)?
        .map(|s| s.residue)
        .ok_or(Error::NotInA)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMethod {
    /// `n = 1`: only the identity map.
    Trivial,
    ClosedForm,
    KernelEnum,
    Oracle,
}

impl std::fmt::Display for OrderMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrderMethod::Trivial => "trivial",
            OrderMethod::ClosedForm => "closed_form",
            OrderMethod::KernelEnum => "kernel_enum",
            OrderMethod::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupOrderReport {
    pub n: u64,
    pub w: u64,
    pub phi_w: u64,
    pub kernel_size: u64,
    pub order: u64,
    pub method: OrderMethod,
}

impl GroupOrderReport {
    pub fn trivial() -> Self {
        Self {
            n: 1,
            w: 1,
            phi_w: 1,
            kernel_size: 1,
            order: 1,
            method: OrderMethod::Trivial,
        }
    }

    fn from_parts(n: u64, w: u64, kernel_size: u64, method: OrderMethod) -> Result<Self> {
        let phi_w = euler_phi(&factorize(w)?);
        if kernel_size == 0 || !phi_w.is_multiple_of(kernel_size) {
            return Err(Error::Internal(format!(
                "|K_{n}| = {kernel_size} does not divide phi({w}) = {phi_w}"
            )));
        }
        Ok(Self {
            n,
            w,
            phi_w,
            kernel_size,
            order: phi_w / kernel_size,
            method,
        })
    }
}

/// `|G_n| = phi(w(n)) / |K_n|` with `K_n` from [`enumerate_kernel`].
pub fn group_order(f: &Factorization) -> Result<GroupOrderReport> {
    let k = enumerate_kernel(f)?;
    GroupOrderReport::from_parts(f.value(), k.profile.w, k.kernel.len() as u64, OrderMethod::KernelEnum)
}

/// Closed form for `|G_{p^e}|`.
pub fn group_order_closed_pe(p: u64, e: u32) -> Result<u64> {
    if e == 0 || !crate::numth::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p}^{e} is not a prime power")));
    }
    match (p, e) {
        (2, e) if e < 3 => Ok(1),
        (2, e) => checked_pow(2, e - 3),
        (3, 1) => Ok(1),
        (3, e) => checked_mul(2, checked_pow(3, e - 2)?),
        (p, e) => {
            let half = l_odd(p, 1)?;
            let phi_half = euler_phi(&factorize(half)?);
            if e == 1 {
                if !phi_half.is_multiple_of(4) {
                    return Err(Error::Internal(format!("phi({half}) not divisible by 4")));
                }
                Ok(phi_half / 4)
            } else {
                checked_mul(checked_mul(checked_pow(p, e - 2)?, (p - 1) / 2)?, phi_half)
            }
        }
    }
}

/// Report for a prime power using the closed form; `kernel_size` is the
/// quotient `phi(w) / |G|`.
pub fn group_order_closed(f: &Factorization) -> Result<GroupOrderReport> {
    let (p, e) = f
        .as_prime_power()
        .ok_or_else(|| Error::InvalidInput(format!("{} is not a prime power", f.value())))?;
    let w = profile(f)?.w;
    let order = group_order_closed_pe(p, e)?;
    let phi_w = euler_phi(&factorize(w)?);
    if !phi_w.is_multiple_of(order) {
        return Err(Error::Internal(format!("|G| = {order} does not divide phi({w})")));
    }
    Ok(GroupOrderReport {
        n: f.value(),
        w,
        phi_w,
        kernel_size: phi_w / order,
        order,
        method: OrderMethod::ClosedForm,
    })
}

/// Closed form for prime powers, kernel enumeration otherwise; `n = 1` is
/// trivial.
pub fn group_order_auto(f: &Factorization) -> Result<GroupOrderReport> {
    match f.value() {
        1 => Ok(GroupOrderReport::trivial()),
        _ if f.as_prime_power().is_some() => group_order_closed(f),
        _ => group_order(f),
    }
}

/// `{k in Z*_w(n) : D_k(u) = u for all u in Z_n}` by direct evaluation.
pub fn kernel_oracle(n: u64, cap: u64) -> Result<BTreeSet<u64>> {
    Ok(oracle::build_table(n, cap)?.identity_exponents())
}

/// Number of distinct maps `u -> D_k(u)` over the units `k` of `Z_w(n)`.
pub fn group_order_oracle(n: u64, cap: u64) -> Result<u64> {
    Ok(oracle::distinct_maps(&oracle::build_table(n, cap)?))
}

/// Oracle-backed report; `kernel_size` counts identity maps directly.
pub fn group_order_oracle_report(n: u64, cap: u64) -> Result<GroupOrderReport> {
    let s = oracle::summarize(n, cap)?;
    let report =
        GroupOrderReport::from_parts(n, s.w, s.kernel.len() as u64, OrderMethod::Oracle)?;
    if report.order != s.distinct_maps {
        return Err(Error::Internal(format!(
            "n={n}: {} distinct maps but phi(w)/|K| = {}",
            s.distinct_maps, report.order
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickson::{eval_fast, DicksonParams};
    use crate::numth::inv_mod;
    use crate::oracle::ORACLE_CAP;

    fn f(n: u64) -> Factorization {
        factorize(n).unwrap()
    }

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn component_examples() {
        let c = kernel_component(5, 1).unwrap();
        assert_eq!((c.modulus, set(&c.elements)), (12, set(&[1, 11, 5, 7])));
        let c = kernel_component(3, 2).unwrap();
        assert_eq!((c.modulus, set(&c.elements)), (12, set(&[1, 11])));
        let c = kernel_component(2, 3).unwrap();
        assert_eq!((c.modulus, set(&c.elements)), (6, set(&[1, 5])));
        let c = kernel_component(2, 1).unwrap();
        assert_eq!((c.modulus, c.elements.clone()), (3, vec![1, 2]));
        let c = kernel_component(3, 1).unwrap();
        assert_eq!((c.modulus, c.elements.clone()), (4, vec![1, 3]));
        assert!(kernel_component(4, 1).is_err());
        assert!(kernel_component(5, 0).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_kernel(&f(15)).unwrap().kernel, set(&[1, 5, 7, 11]));
        assert_eq!(enumerate_kernel(&f(45)).unwrap().kernel, set(&[1, 11]));
        let k7 = enumerate_kernel(&f(7)).unwrap();
        assert_eq!(k7.profile.w, 24);
        assert_eq!(k7.kernel, set(&[1, 7, 17, 23]));
        assert_eq!(enumerate_kernel(&f(2)).unwrap().kernel, set(&[1, 2]));
        assert_eq!(enumerate_kernel(&f(3)).unwrap().kernel, set(&[1, 3]));
        assert!(enumerate_kernel(&f(1)).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(group_order(&f(7)).unwrap().order, 2);
        let r = group_order(&f(8)).unwrap();
        assert_eq!((r.phi_w, r.kernel_size, r.order), (2, 2, 1));
        let r = group_order(&f(105)).unwrap();
        assert_eq!((r.w, r.phi_w, r.kernel_size, r.order), (24, 8, 4, 2));
        assert_eq!(r.method, OrderMethod::KernelEnum);
        assert_eq!(group_order(&f(2)).unwrap().order, 1);
        assert_eq!(group_order(&f(3)).unwrap().order, 1);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(group_order_closed_pe(2, 2).unwrap(), 1);
        assert_eq!(group_order_closed_pe(3, 1).unwrap(), 1);
        assert_eq!(group_order_closed_pe(5, 2).unwrap(), 8);
        assert_eq!(group_order_closed_pe(2, 4).unwrap(), 2);
        assert_eq!(group_order_closed_pe(3, 2).unwrap(), 2);
        assert_eq!(group_order_closed_pe(7, 1).unwrap(), 2);
        assert!(group_order_closed_pe(6, 1).is_err());
        let r = group_order_auto(&f(9)).unwrap();
        assert_eq!((r.order, r.kernel_size, r.method), (2, 2, OrderMethod::ClosedForm));
        assert_eq!(group_order_auto(&f(1)).unwrap(), GroupOrderReport::trivial());
        assert_eq!(group_order_auto(&f(105)).unwrap().method, OrderMethod::KernelEnum);
    }

    #[test]
    fn rho_examples() {
        for n in [7u64, 15, 24, 105, 2 * 3 * 5 * 7 * 11] {
            let fac = f(n);
            let comps = kernel_components(&fac).unwrap();
            let w = profile(&fac).unwrap().w;
            assert_eq!(rho(&vec![1; comps.len()], &fac).unwrap(), 1);
            let minus: Vec<u64> = comps.iter().map(|c| c.modulus - 1).collect();
            assert_eq!(rho(&minus, &fac).unwrap(), w - 1);
        }
        assert_eq!(rho(&[1, 5], &f(15)).unwrap(), 5);
        // 45: l = (12, 12); (1, -1) cannot hold simultaneously.
        assert_eq!(rho(&[1, 11], &f(45)), Err(Error::NotInA));
        assert!(matches!(rho(&[2, 5], &f(15)), Err(Error::InvalidInput(_))));
        assert!(matches!(rho(&[1], &f(15)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(kernel_oracle(5, ORACLE_CAP).unwrap(), set(&[1, 5, 7, 11]));
        assert_eq!(kernel_oracle(4, ORACLE_CAP).unwrap(), set(&[1, 5]));
        assert_eq!(kernel_oracle(3, ORACLE_CAP).unwrap(), set(&[1, 3]));
        assert_eq!(group_order_oracle(5, ORACLE_CAP).unwrap(), 1);
        assert_eq!(group_order_oracle(9, ORACLE_CAP).unwrap(), 2);
        assert_eq!(group_order_oracle(15, ORACLE_CAP).unwrap(), 1);
        assert!(matches!(
            group_order_oracle(3000, ORACLE_CAP),
            Err(Error::CapExceeded { .. })
        ));
        let r = group_order_oracle_report(105, ORACLE_CAP).unwrap();
        assert_eq!((r.order, r.kernel_size, r.method), (2, 4, OrderMethod::Oracle));
    }

    #[test]
    fn enumeration_strategies_agree() {
        for n in 2..=300 {
            assert_eq!(
                enumerate_kernel_with(&f(n), Execution::Sequential).unwrap(),
                enumerate_kernel_with(&f(n), Execution::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn kernel_is_a_subgroup() {
        for n in 2..=2000 {
            let k = enumerate_kernel(&f(n)).unwrap();
            let w = k.profile.w;
            assert!(k.kernel.contains(&1) && k.kernel.contains(&(w - 1)), "n={n}");
            for &a in &k.kernel {
                assert!(k.kernel.contains(&inv_mod(a, w).unwrap()), "n={n}");
                for &b in &k.kernel {
                    assert!(k.kernel.contains(&crate::numth::mul_mod(a, b, w)), "n={n}");
                }
            }
        }
    }

    #[test]
    fn kernel_elements_fix_every_residue() {
        for n in 2..=500 {
            let k = enumerate_kernel(&f(n)).unwrap();
            for &e in &k.kernel {
                let p = DicksonParams::new(e, 1, n).unwrap();
                assert!((0..n).all(|u| eval_fast(&p, u) == u), "n={n} k={e}");
            }
        }
    }

    #[test]
    fn reduction_mod_w_needs_unit_exponents() {
        let map = |k: u64, n: u64| -> Vec<u64> {
            let p = DicksonParams::new(k, 1, n).unwrap();
            (0..n).map(|u| eval_fast(&p, u)).collect()
        };
        for n in 2..=150 {
            let w = profile(&f(n)).unwrap().w;
            for k in (1..w).filter(|&k| gcd(k, w) == 1) {
                assert_eq!(map(k, n), map(k + w, n), "n={n} k={k}");
                assert_eq!(map(k, n), map(k + 7 * w, n), "n={n} k={k}");
            }
        }
        // w(8) = 6, but D_22(0) = -2 and D_28(0) = 2 mod 8.
        assert_ne!(map(22, 8), map(28, 8));
    }

    #[test]
    fn inverse_exponent_undoes_the_map() {
        for n in 2..=500 {
            let w = profile(&f(n)).unwrap().w;
            for k in (1..w).filter(|&k| gcd(k, w) == 1).take(25) {
                let l = inv_mod(k, w).unwrap();
                let pk = DicksonParams::new(k, 1, n).unwrap();
                let pl = DicksonParams::new(l, 1, n).unwrap();
                assert!((0..n).all(|u| eval_fast(&pl, eval_fast(&pk, u)) == u), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn witness_tuples_round_trip_through_rho() {
        for n in [105u64, 385, 1155, 4 * 1155, 8 * 9 * 25 * 7] {
            let fac = f(n);
            let k = enumerate_kernel(&fac).unwrap();
            for (&e, tuple) in &k.witnesses {
                assert_eq!(rho(tuple, &fac).unwrap(), e);
            }
        }
    }

    #[test]
    fn large_moduli() {
        // Many small odd primes: 4^s tuples, deep systems.
        let fac = f(5 * 7 * 11 * 13 * 17 * 19 * 23 * 29 * 31 * 37 * 41);
        let k = enumerate_kernel(&fac).unwrap();
        assert_eq!(k.kernel.len(), k.witnesses.len());
        assert!(k.kernel.contains(&1) && k.kernel.contains(&(k.profile.w - 1)));
        let r = group_order(&fac).unwrap();
        assert_eq!(r.order * r.kernel_size, r.phi_w);
        // A 61-bit prime.
        let p = (1u64 << 61) - 1;
        assert!(matches!(group_order(&f(p)), Err(Error::Overflow(_))));
        let p = 3_037_000_493u64; // (p^2 - 1)/2 still fits
        let r = group_order(&f(p)).unwrap();
        assert_eq!(r.kernel_size, 4);
        assert_eq!(r.order, group_order_closed_pe(p, 1).unwrap());
    }
}
