//! Brute-force ground truth for the group computations.
//!
//! Everything here is derived from image vectors produced by the three-term
//! recurrence ([`ImageSweep`]); the doubling evaluator and the congruence
//! machinery are never used.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::criteria::profile;
use crate::dickson::ImageSweep;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numth::{factorize, gcd};

/// Default bound on `n` for table-based oracles.
pub const ORACLE_CAP: u64 = 2000;

/// The map `u -> D_k(u, 1) mod n` for every unit `k` of `Z_w(n)`.
///
/// Identical image vectors share storage.
#[derive(Debug, Clone)]
pub struct InducedMapTable {
    pub n: u64,
    pub w: u64,
    pub entries: BTreeMap<u64, Arc<[u32]>>,
}

impl InducedMapTable {
    /// Units `k` whose map is the identity on `Z_n`.
    pub fn identity_exponents(&self) -> BTreeSet<u64> {
        self.entries
            .iter()
            .filter(|(_, img)| img.iter().zip(0u32..).all(|(&y, u)| y == u))
            .map(|(&k, _)| k)
            .collect()
    }

    /// True iff every tabulated map is a bijection of `Z_n`.
    pub fn all_bijective(&self) -> bool {
        let mut seen = vec![false; self.n as usize];
        self.entries.values().all(|img| {
            seen.iter_mut().for_each(|s| *s = false);
            img.iter()
                .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
        })
    }
}

/// Tabulates `D_k` on `Z_n` for every unit `k` in `[1, w(n))`.
pub fn build_table(n: u64, cap: u64) -> Result<InducedMapTable> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let w = profile(&factorize(n)?)?.w;
    let mut sweep = ImageSweep::new(1, n)?;
    let mut interned: HashMap<Vec<u32>, Arc<[u32]>> = HashMap::new();
    let mut entries = BTreeMap::new();
    for k in 1..w {
        let img = sweep.advance();
        if gcd(k, w) != 1 {
            continue;
        }
        let shared = match interned.get(img) {
            Some(s) => s.clone(),
            None => {
                let s: Arc<[u32]> = img.into();
                interned.insert(img.to_vec(), s.clone());
                s
            }
        };
        entries.insert(k, shared);
    }
    Ok(InducedMapTable { n, w, entries })
}

/// Number of distinct image vectors in the table.
pub fn distinct_maps(t: &InducedMapTable) -> u64 {
    t.entries
        .values()
        .map(|img| &img[..])
        .collect::<HashSet<_>>()
        .len() as u64
}

/// Oracle answers for a single modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub n: u64,
    pub w: u64,
    pub kernel: BTreeSet<u64>,
    pub distinct_maps: u64,
    pub units: u64,
    pub all_bijective: bool,
}

pub fn summarize(n: u64, cap: u64) -> Result<OracleSummary> {
    let t = build_table(n, cap)?;
    Ok(OracleSummary {
        n,
        w: t.w,
        kernel: t.identity_exponents(),
        distinct_maps: distinct_maps(&t),
        units: t.entries.len() as u64,
        all_bijective: t.all_bijective(),
    })
}

/// [`summarize`] for every modulus in `ns`, in order.
pub fn summarize_all(ns: &[u64], cap: u64, exec: Execution) -> Result<Vec<OracleSummary>> {
    exec.map_slice(ns, |&n| summarize(n, cap))
        .into_iter()
        .collect()
}
