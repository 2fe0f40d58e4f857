//! Measurement harness: warm-up + repeated timed runs with a running XOR
//! checksum as a dead-code-elimination and determinism guard, the
//! subtraction-method component profile, the amortised-cost ratio, and the
//! analytical per-agent memory model.

use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;

use crate::allocation::Variant;
use crate::dcvc::{binomial64, coalition_at_index, predecessor};
use crate::error::{Error, Result};
use crate::increment_array::period_of;
use crate::necklace::fkm_beads;

/// Summary of R timed runs of one task.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TimingStats {
    pub runs: u32,
    pub mean_ns: f64,
    /// Fastest run; robust against scheduler interference.
    pub min_ns: f64,
    pub stddev_ns: f64,
    pub ci95_half_width_ns: f64,
    pub checksum: u64,
}

/// Two-sided 95% t critical value for R - 1 degrees of freedom, at the two
/// run counts the methodology uses (normal approximation elsewhere).
pub fn t_crit(runs: u32) -> f64 {
    match runs {
        1000 => 1.962,
        100 => 1.984,
        _ => 1.96,
    }
}

/// Folds one coalition member (or any small token) into a running checksum.
#[inline]
pub fn checksum_mix(cs: u64, token: u32) -> u64 {
    cs.rotate_left(1) ^ token as u64
}

/// One untimed warm-up plus `runs` timed executions on the monotonic clock.
/// The task returns its checksum; any drift between runs is an error.
pub fn run_timed<F: FnMut() -> u64>(mut task: F, runs: u32) -> Result<TimingStats> {
    assert!(runs >= 2, "need at least two runs for a stddev");
    let first = black_box(task());
    let mut samples = Vec::with_capacity(runs as usize);
    for _ in 0..runs {
        let start = Instant::now();
        let cs = black_box(task());
        let elapsed = start.elapsed().as_nanos() as f64;
        if cs != first {
            return Err(Error::ChecksumMismatch {
                first,
                other: cs,
            });
        }
        samples.push(elapsed);
    }
    let mean = samples.iter().sum::<f64>() / runs as f64;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (runs as f64 - 1.0);
    let stddev = var.sqrt();
    Ok(TimingStats {
        runs,
        mean_ns: mean,
        min_ns: samples.iter().copied().fold(f64::INFINITY, f64::min),
        stddev_ns: stddev,
        ci95_half_width_ns: t_crit(runs) * stddev / (runs as f64).sqrt(),
        checksum: first,
    })
}

/// Truncation levels of the N-DCA pipeline, used by the subtraction method.
pub const PIPELINE_LEVELS: usize = 5;

/// Runs the N-DCA pipeline truncated at `level` (0 = FKM stepping only,
/// 1 = +GenIncArray, 2 = +period, 3 = +designation, 4 = full coalition
/// generation) and returns the checksum.  Per-size offsets throughout.
pub fn pipeline_level(x: u32, n: u32, level: usize) -> u64 {
    assert!(level < PIPELINE_LEVELS);
    let mut cs = 0u64;
    let mut offsets: Vec<u32> = Vec::new();
    let mut per_size_h = vec![0u64; n as usize + 1];
    fkm_beads(n, 2, |beads| {
        cs = checksum_mix(cs, beads[beads.len() - 1] as u32);
        if level < 1 {
            return;
        }
        offsets.clear();
        crate::increment_array::gen_inc_array_into(beads, &mut offsets);
        let s = offsets.len();
        cs = checksum_mix(cs, s as u32);
        if level < 2 || s == 0 {
            return;
        }
        let p = period_of(&offsets);
        cs = checksum_mix(cs, p as u32);
        if level < 3 {
            return;
        }
        let designated = if p == s {
            true
        } else {
            let d = n / (s / p) as u32;
            let h = per_size_h[s];
            per_size_h[s] += d as u64;
            crate::allocation::designation_test(x, h, d, n)
        };
        cs = checksum_mix(cs, designated as u32);
        if level < 4 || !designated {
            return;
        }
        // allocation-free GenCoalition: walk the cumulative increments in place
        let mut pos = x - 1;
        cs = checksum_mix(cs, pos % n + 1);
        for &t in &offsets[..s - 1] {
            pos += t + 1;
            cs = checksum_mix(cs, pos % n + 1);
        }
    });
    cs
}

/// Checksum over agent `x`'s full N-DCA allocation, for end-to-end timing.
pub fn ndca_checksum(x: u32, n: u32, variant: Variant) -> Result<u64> {
    let alloc = crate::allocation::ndca_allocate(x, n, variant)?;
    let mut cs = 0u64;
    for cs_list in alloc.by_size.values() {
        for c in cs_list {
            for &m in c.members() {
                cs = checksum_mix(cs, m);
            }
        }
    }
    Ok(cs)
}

/// Checksum over agent `x`'s DCVC share, walking each list with one unrank
/// plus predecessor steps.
pub fn dcvc_checksum(x: u32, n: u32) -> Result<u64> {
    let mut cs = 0u64;
    let mut alpha = 1u32;
    for s in 1..=n {
        let len = binomial64(n, s)?;
        let k = len / n as u64;
        if k > 0 {
            let mut c = coalition_at_index(n, s, (x as u64 - 1) * k + 1)?;
            for step in 0..k {
                if step > 0 {
                    c = predecessor(&c, n)?;
                }
                for &m in c.members() {
                    cs = checksum_mix(cs, m);
                }
            }
        }
        for idx in n as u64 * k + 1..=len {
            if alpha == x {
                for &m in coalition_at_index(n, s, idx)?.members() {
                    cs = checksum_mix(cs, m);
                }
            }
            alpha = if alpha == n { 1 } else { alpha + 1 };
        }
    }
    Ok(cs)
}

/// Five timed truncation levels plus their per-component differences.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentProfile {
    pub n: u32,
    pub agent: u32,
    pub level_stats: Vec<TimingStats>,
    /// T_i - T_{i-1} over the per-level floors (fastest runs), clamped at
    /// zero; index 0 = raw FKM.  Floors rather than means keep the
    /// subtraction stable under scheduler interference.
    pub component_ns: Vec<f64>,
    /// component_ns normalised by the full-pipeline floor.
    pub component_shares: Vec<f64>,
}

pub fn profile_components(x: u32, n: u32, runs: u32) -> Result<ComponentProfile> {
    if x < 1 || x > n {
        return Err(Error::AgentOutOfRange { agent: x, n });
    }
    let mut level_stats = Vec::with_capacity(PIPELINE_LEVELS);
    for level in 0..PIPELINE_LEVELS {
        level_stats.push(run_timed(|| pipeline_level(x, n, level), runs)?);
    }
    let full = level_stats[PIPELINE_LEVELS - 1].min_ns;
    let mut component_ns = Vec::with_capacity(PIPELINE_LEVELS);
    for i in 0..PIPELINE_LEVELS {
        let prev = if i == 0 { 0.0 } else { level_stats[i - 1].min_ns };
        component_ns.push((level_stats[i].min_ns - prev).max(0.0));
    }
    let component_shares = component_ns.iter().map(|&c| c / full).collect();
    Ok(ComponentProfile {
        n,
        agent: x,
        level_stats,
        component_ns,
        component_shares,
    })
}

/// Inputs to the amortised total-time ratio: generation times in seconds,
/// coalitions per agent, and the per-coalition evaluation cost in seconds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AmortisedInputs {
    pub t_ndca: f64,
    pub t_dcvc: f64,
    pub m: u64,
    pub c: f64,
}

/// η(c) = (T_ndca + m·c) / (T_dcvc + m·c).
pub fn amortised_ratio(inputs: &AmortisedInputs) -> f64 {
    assert!(inputs.m > 0 && inputs.c >= 0.0);
    let eval = inputs.m as f64 * inputs.c;
    (inputs.t_ndca + eval) / (inputs.t_dcvc + eval)
}

/// Analytical per-agent working memory in bytes: N-DCA keeps about 3n + 12
/// four-byte integers; the baseline's recursive index mapping grows as
/// 40n + 64.
pub fn memory_model(n: u32) -> (u64, u64) {
    (4 * (3 * n as u64 + 12), 40 * n as u64 + 64)
}
