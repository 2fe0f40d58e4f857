//! Per-agent N-DCA allocation: coalition generation from (agent, increment
//! array) pairs, the designation test for periodic arrays, and the three
//! offset schemes that decide which agents handle the periodic leftovers.
//! Also hosts the VBFR reference allocator used in comparisons.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::increment_array::{gen_inc_array_into, period_of, IncrementArray};
use crate::necklace::{binomial, fkm_beads};

/// Offset scheme used to designate agents for periodic increment arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Separate offset per coalition size, reset to zero for each size.
    PerSizeOffset,
    /// Single offset carried across all sizes, smallest size first.
    GlobalOffset,
    /// No offset: the first ϖ agents take every periodic array.
    LowestId,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Variant> {
        match s {
            "per-size" => Ok(Variant::PerSizeOffset),
            "global" => Ok(Variant::GlobalOffset),
            "lowest-id" => Ok(Variant::LowestId),
            other => Err(Error::InvalidParameter(format!(
                "unknown variant {other:?}; expected per-size, global or lowest-id"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Variant::PerSizeOffset => "per-size",
            Variant::GlobalOffset => "global",
            Variant::LowestId => "lowest-id",
        };
        f.write_str(s)
    }
}

/// A coalition as an ordered member list.  N-DCA coalitions keep generation
/// order (the generating agent first); DCVC/VBFR coalitions are ascending
/// with no generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coalition {
    members: Vec<u32>,
    generator: Option<u32>,
}

impl Coalition {
    pub fn new(members: Vec<u32>, generator: Option<u32>) -> Self {
        debug_assert!(!members.is_empty());
        if let Some(x) = generator {
            debug_assert_eq!(members[0], x);
        }
        Coalition { members, generator }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn generator(&self) -> Option<u32> {
        self.generator
    }

    pub fn size(&self) -> u32 {
        self.members.len() as u32
    }

    pub fn contains(&self, agent: u32) -> bool {
        self.members.contains(&agent)
    }

    /// Members in ascending order, for set-equality comparisons.
    pub fn sorted_members(&self) -> Vec<u32> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    /// Bitmask over agents 1..=n (bit i-1 set iff agent i is a member).
    pub fn bitmask(&self) -> u64 {
        self.members.iter().fold(0u64, |m, &a| m | 1 << (a - 1))
    }
}

impl std::fmt::Display for Coalition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// Everything agent `agent` must compute for a given `n` and variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentAllocation {
    pub agent: u32,
    pub n: u32,
    /// Offset scheme for N-DCA allocations; `None` for the DCVC baseline.
    pub variant: Option<Variant>,
    pub by_size: BTreeMap<u32, Vec<Coalition>>,
    pub total: u64,
}

impl AgentAllocation {
    pub fn size_count(&self, s: u32) -> u64 {
        self.by_size.get(&s).map_or(0, |v| v.len() as u64)
    }
}

/// Maps a 0-based circular position to a 1-based agent id.  All "mod then
/// replace 0 by n" arithmetic funnels through here.
#[inline]
fn agent_id(zero_based: u64, n: u32) -> u32 {
    (zero_based % n as u64) as u32 + 1
}

/// Cumulative increments φ_1..φ_{s+1}: φ_1 = 0, each later entry adds
/// t_{i-2} + 1, and the closing entry always lands on n.
pub fn cumulative_increments(ia: &IncrementArray) -> Vec<u32> {
    let t = ia.offsets();
    assert!(!t.is_empty(), "cumulative increments need s >= 1");
    let mut phi = Vec::with_capacity(t.len() + 1);
    let mut acc = 0u32;
    phi.push(0);
    for &tk in t {
        acc += tk + 1;
        phi.push(acc);
    }
    debug_assert_eq!(*phi.last().unwrap(), ia.n());
    phi
}

/// GenCoalition: member_i = ((x - 1 + φ_i) mod n) + 1, starting at x itself.
pub fn gen_coalition(x: u32, ia: &IncrementArray) -> Coalition {
    let n = ia.n();
    let phi = cumulative_increments(ia);
    let members: Vec<u32> = phi[..phi.len() - 1]
        .iter()
        .map(|&p| agent_id((x - 1 + p) as u64, n))
        .collect();
    Coalition::new(members, Some(x))
}

/// Window membership: agent `x` is designated iff it lies in the window of
/// `d` consecutive agents starting just past offset `h`.
pub fn designation_test(x: u32, h: u64, d: u32, n: u32) -> bool {
    let pos = ((x as u64 - 1) + n as u64 - h % n as u64) % n as u64;
    pos < d as u64
}

// Offsets for the global scheme, indexed by periodic-IA encounter order.
// The single offset H accumulates over the periodic IAs in *reverse*
// generation order (largest necklace last-met first), which is what
// reproduces both the published n=6 designation windows and the published
// per-size imbalance figures.  One cheap collection pass keeps the main
// loop single-pass.
fn global_offsets_by_encounter(n: u32) -> Vec<u64> {
    let mut window_widths: Vec<u32> = Vec::new();
    let mut offsets = Vec::new();
    fkm_beads(n, 2, |beads| {
        offsets.clear();
        gen_inc_array_into(beads, &mut offsets);
        let s = offsets.len();
        if s == 0 {
            return;
        }
        let p = period_of(&offsets);
        if p < s {
            let mu = (s / p) as u32;
            window_widths.push(n / mu);
        }
    });
    let mut h = 0u64;
    let mut result = vec![0u64; window_widths.len()];
    for i in (0..window_widths.len()).rev() {
        result[i] = h;
        h += window_widths[i] as u64;
    }
    result
}

/// Full N-DCA run for one agent: walk every necklace, convert to its
/// increment array, generate directly when aperiodic, otherwise apply the
/// variant's designation rule.
pub fn ndca_allocate(x: u32, n: u32, variant: Variant) -> Result<AgentAllocation> {
    if x < 1 || x > n {
        return Err(Error::AgentOutOfRange { agent: x, n });
    }
    let global = match variant {
        Variant::GlobalOffset => global_offsets_by_encounter(n),
        _ => Vec::new(),
    };
    let mut by_size: BTreeMap<u32, Vec<Coalition>> = BTreeMap::new();
    let mut per_size_h = vec![0u64; n as usize + 1];
    let mut periodic_seen = 0usize;
    let mut offsets = Vec::new();
    fkm_beads(n, 2, |beads| {
        offsets.clear();
        gen_inc_array_into(beads, &mut offsets);
        let s = offsets.len();
        if s == 0 {
            return;
        }
        let p = period_of(&offsets);
        let designated = if p == s {
            true
        } else {
            let mu = (s / p) as u32;
            let d = n / mu;
            let hit = match variant {
                Variant::PerSizeOffset => {
                    let h = per_size_h[s];
                    per_size_h[s] += d as u64;
                    designation_test(x, h, d, n)
                }
                Variant::GlobalOffset => {
                    let h = global[periodic_seen];
                    designation_test(x, h, d, n)
                }
                Variant::LowestId => x <= d,
            };
            periodic_seen += 1;
            hit
        };
        if designated {
            let ia = IncrementArray::new(offsets.clone(), n).expect("offsets sum to n - s");
            by_size
                .entry(s as u32)
                .or_default()
                .push(gen_coalition(x, &ia));
        }
    });
    let total = by_size.values().map(|v| v.len() as u64).sum();
    Ok(AgentAllocation {
        agent: x,
        n,
        variant: Some(variant),
        by_size,
        total,
    })
}

/// Per-agent per-size allocation counts for every agent at once, without
/// materialising coalitions: one generation pass, counting aperiodic arrays
/// per size and accumulating each periodic window over its d agents.
/// Returned as `counts[agent - 1][s - 1]`.
pub fn allocation_counts(n: u32, variant: Variant) -> Vec<Vec<u64>> {
    let global = match variant {
        Variant::GlobalOffset => global_offsets_by_encounter(n),
        _ => Vec::new(),
    };
    let mut counts = vec![vec![0u64; n as usize]; n as usize];
    let mut aperiodic_per_size = vec![0u64; n as usize + 1];
    let mut per_size_h = vec![0u64; n as usize + 1];
    let mut periodic_seen = 0usize;
    let mut offsets = Vec::new();
    fkm_beads(n, 2, |beads| {
        offsets.clear();
        gen_inc_array_into(beads, &mut offsets);
        let s = offsets.len();
        if s == 0 {
            return;
        }
        let p = period_of(&offsets);
        if p == s {
            aperiodic_per_size[s] += 1;
            return;
        }
        let mu = (s / p) as u32;
        let d = n / mu;
        let h = match variant {
            Variant::PerSizeOffset => {
                let h = per_size_h[s];
                per_size_h[s] += d as u64;
                h
            }
            Variant::GlobalOffset => global[periodic_seen],
            Variant::LowestId => 0,
        };
        periodic_seen += 1;
        for k in 0..d as u64 {
            let agent = agent_id(h + k, n);
            counts[agent as usize - 1][s - 1] += 1;
        }
    });
    for row in counts.iter_mut() {
        for s in 1..=n as usize {
            row[s - 1] += aperiodic_per_size[s];
        }
    }
    counts
}

/// κ(n): the number of coalition sizes whose list does not divide evenly
/// over n agents.
pub fn kappa(n: u32) -> Result<u32> {
    let mut count = 0;
    for s in 1..=n {
        if binomial(n as u64, s as u64)? % n as u128 != 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// VBFR share on a fully connected graph: all size-s subsets whose minimum
/// member is x, largest-first.
pub fn vbfr_allocate(x: u32, n: u32, s: u32) -> Result<Vec<Coalition>> {
    if x < 1 || x > n {
        return Err(Error::AgentOutOfRange { agent: x, n });
    }
    if s < 1 || s > n {
        return Err(Error::InvalidParameter(format!(
            "size {s} out of range 1..={n}"
        )));
    }
    let mut out = Vec::new();
    if s == 1 {
        out.push(Coalition::new(vec![x], None));
        return Ok(out);
    }
    if n - x < s - 1 {
        return Ok(out);
    }
    // descending lex over the (s-1)-subsets of {x+1..n}
    let mut rest: Vec<u32> = (n - s + 2..=n).collect();
    loop {
        let mut members = vec![x];
        members.extend_from_slice(&rest);
        out.push(Coalition::new(members, None));
        // step to the predecessor within {x+1..n}
        let mut i = rest.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            let floor = if i == 1 { x } else { rest[i - 2] };
            if rest[i - 1] - 1 > floor {
                break;
            }
            i -= 1;
        }
        rest[i - 1] -= 1;
        for j in i..rest.len() {
            rest[j] = n - (rest.len() - 1 - j) as u32;
        }
    }
}
