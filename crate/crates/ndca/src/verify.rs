//! Brute-force oracles and property reports: completeness, non-redundancy,
//! self-interest, balance, and the duplicate-structure theorem, checked
//! exhaustively at desk scale and via count arithmetic beyond it.

use std::collections::HashSet;

use serde::Serialize;

use crate::allocation::{
    allocation_counts, gen_coalition, kappa, ndca_allocate, vbfr_allocate, Coalition, Variant,
};
use crate::dcvc::{dcvc_allocate, dcvc_counts};
use crate::error::{Error, Result};
use crate::increment_array::{period, IncrementArray};
use crate::necklace::binomial;

pub const EXHAUSTIVE_LIMIT: u32 = 16;
pub const COUNTS_LIMIT: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    Ndca(Variant),
    Dcvc,
    Vbfr,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Ndca(v) => write!(f, "ndca-{v}"),
            Algorithm::Dcvc => write!(f, "dcvc"),
            Algorithm::Vbfr => write!(f, "vbfr"),
        }
    }
}

/// One property sweep over all agents of a single (n, algorithm) pair.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: u32,
    pub algorithm: Algorithm,
    /// Union over agents covers all 2^n - 1 non-empty subsets.  Always
    /// evaluated at count level; set-exact when `exhaustive` is set.
    pub complete: bool,
    pub exhaustive: bool,
    pub redundant_pairs: u64,
    pub self_interest_violations: u64,
    pub per_size_imbalance_max: u64,
    pub aggregate_imbalance: u64,
    pub kappa: u32,
    pub kappa_match: bool,
    pub per_agent_totals: Vec<u64>,
}

impl VerificationReport {
    /// Pass/fail under the algorithm's own contract: DCVC is allowed
    /// self-interest violations, everything else is not.
    pub fn passes(&self) -> bool {
        let base = self.complete && self.redundant_pairs == 0;
        match self.algorithm {
            Algorithm::Ndca(Variant::PerSizeOffset) => {
                base && self.self_interest_violations == 0
                    && self.per_size_imbalance_max <= 1
                    && self.kappa_match
            }
            Algorithm::Ndca(_) => base && self.self_interest_violations == 0,
            Algorithm::Dcvc => base && self.aggregate_imbalance <= 1,
            Algorithm::Vbfr => base && self.self_interest_violations == 0,
        }
    }
}

/// Recovers the (generator, increment array) pair of a coalition: the
/// generator is the minimum member and the offsets are the cyclic gaps.
pub fn coalition_to_ia(members: &[u32], n: u32) -> Result<(u32, IncrementArray)> {
    if members.is_empty() {
        return Err(Error::InvalidParameter("empty coalition".into()));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != members.len() || sorted[0] < 1 || *sorted.last().unwrap() > n {
        return Err(Error::InvalidParameter(format!(
            "coalition members must be distinct and within 1..={n}"
        )));
    }
    let s = sorted.len() as u32;
    let mut offsets = Vec::with_capacity(s as usize);
    let mut used = 0u32;
    for w in sorted.windows(2) {
        let t = w[1] - w[0] - 1;
        offsets.push(t);
        used += t;
    }
    offsets.push(n - s - used);
    let ia = IncrementArray::new(offsets, n)?;
    Ok((sorted[0], ia))
}

/// All non-empty subsets of {1..n} as bitmasks.
pub fn brute_force_powerset(n: u32) -> Result<Vec<u64>> {
    if n > COUNTS_LIMIT {
        return Err(Error::GuardViolation {
            n,
            limit: COUNTS_LIMIT,
        });
    }
    Ok((1..(1u64 << n)).collect())
}

fn all_coalitions(n: u32, algorithm: Algorithm, x: u32) -> Result<Vec<Coalition>> {
    let mut out = Vec::new();
    match algorithm {
        Algorithm::Ndca(variant) => {
            let alloc = ndca_allocate(x, n, variant)?;
            for cs in alloc.by_size.into_values() {
                out.extend(cs);
            }
        }
        Algorithm::Dcvc => {
            let alloc = dcvc_allocate(x, n)?;
            for cs in alloc.by_size.into_values() {
                out.extend(cs);
            }
        }
        Algorithm::Vbfr => {
            for s in 1..=n {
                out.extend(vbfr_allocate(x, n, s)?);
            }
        }
    }
    Ok(out)
}

fn per_size_count_matrix(n: u32, algorithm: Algorithm) -> Result<Vec<Vec<u64>>> {
    match algorithm {
        Algorithm::Ndca(variant) => Ok(allocation_counts(n, variant)),
        Algorithm::Dcvc => dcvc_counts(n),
        Algorithm::Vbfr => {
            // min-member shares: agent x gets C(n - x, s - 1) at size s
            let mut counts = vec![vec![0u64; n as usize]; n as usize];
            for x in 1..=n {
                for s in 1..=n {
                    counts[x as usize - 1][s as usize - 1] =
                        binomial((n - x) as u64, (s - 1) as u64)? as u64;
                }
            }
            Ok(counts)
        }
    }
}

/// Runs every agent of one (n, algorithm) pair and scores the property
/// checklist.  Set-level checks (union, duplicates, self-interest) run when
/// n is at or below the exhaustive limit; count-level checks always run.
pub fn check_allocation_properties(n: u32, algorithm: Algorithm) -> Result<VerificationReport> {
    check_allocation_properties_with(n, algorithm, false)
}

/// As [`check_allocation_properties`], with `counts_only` forcing the cheap
/// count-level sweep even below the exhaustive limit.
pub fn check_allocation_properties_with(
    n: u32,
    algorithm: Algorithm,
    counts_only: bool,
) -> Result<VerificationReport> {
    if n > COUNTS_LIMIT {
        return Err(Error::GuardViolation {
            n,
            limit: COUNTS_LIMIT,
        });
    }
    let exhaustive = n <= EXHAUSTIVE_LIMIT && !counts_only;
    let counts = per_size_count_matrix(n, algorithm)?;
    let per_agent_totals: Vec<u64> = counts.iter().map(|row| row.iter().sum()).collect();

    let mut complete = {
        let sum: u128 = per_agent_totals.iter().map(|&t| t as u128).sum();
        sum == (1u128 << n) - 1
    };
    let mut redundant_pairs = 0u64;
    let mut self_interest_violations = 0u64;
    if exhaustive {
        let mut seen: HashSet<u64> = HashSet::new();
        for x in 1..=n {
            for c in all_coalitions(n, algorithm, x)? {
                if !c.contains(x) {
                    self_interest_violations += 1;
                }
                if !seen.insert(c.bitmask()) {
                    redundant_pairs += 1;
                }
            }
        }
        complete = complete && seen.len() as u128 == (1u128 << n) - 1;
    }

    let per_size_imbalance_max = (1..=n as usize)
        .map(|s| {
            let col: Vec<u64> = counts.iter().map(|row| row[s - 1]).collect();
            col.iter().max().unwrap() - col.iter().min().unwrap()
        })
        .max()
        .unwrap_or(0);
    let aggregate_imbalance =
        per_agent_totals.iter().max().unwrap() - per_agent_totals.iter().min().unwrap();
    let kappa = kappa(n)?;

    Ok(VerificationReport {
        n,
        algorithm,
        complete,
        exhaustive,
        redundant_pairs,
        self_interest_violations,
        per_size_imbalance_max,
        aggregate_imbalance,
        kappa,
        kappa_match: aggregate_imbalance == kappa as u64,
        per_agent_totals,
    })
}

/// Duplicate-structure theorem for one increment array: rotating the
/// generator over all n agents yields exactly ϖ distinct coalitions, equal
/// precisely when the generators are congruent mod ϖ.
pub fn duplicate_structure_check(ia: &IncrementArray, n: u32) -> bool {
    debug_assert_eq!(ia.n(), n);
    let stride = period(ia).stride;
    let sets: Vec<Vec<u32>> = (1..=n).map(|x| gen_coalition(x, ia).sorted_members()).collect();
    let distinct: HashSet<&Vec<u32>> = sets.iter().collect();
    if distinct.len() as u32 != stride {
        return false;
    }
    for i in 1..=n {
        for j in 1..=n {
            let congruent = (i % stride) == (j % stride);
            if congruent != (sets[i as usize - 1] == sets[j as usize - 1]) {
                return false;
            }
        }
    }
    true
}

/// True iff every algorithm (all three N-DCA variants and DCVC) covers the
/// exact same global coalition set — the full powerset.
pub fn cross_algorithm_equivalence(n: u32) -> Result<bool> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::GuardViolation {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let oracle: HashSet<u64> = brute_force_powerset(n)?.into_iter().collect();
    for algorithm in [
        Algorithm::Ndca(Variant::PerSizeOffset),
        Algorithm::Ndca(Variant::GlobalOffset),
        Algorithm::Ndca(Variant::LowestId),
        Algorithm::Dcvc,
    ] {
        let mut union = HashSet::new();
        for x in 1..=n {
            for c in all_coalitions(n, algorithm, x)? {
                union.insert(c.bitmask());
            }
        }
        if union != oracle {
            return Ok(false);
        }
    }
    Ok(true)
}
