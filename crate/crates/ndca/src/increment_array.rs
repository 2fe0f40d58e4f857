//! Increment arrays: the run-length encoding of a necklace as the sequence of
//! omitted-agent counts between consecutive white beads, plus period
//! detection and the inverse mapping.

use crate::error::{Error, Result};
use crate::necklace::Necklace;

/// An increment array `<t_0, ..., t_{s-1}>` of size `s` for `n` agents, with
/// the offsets summing to `n - s`.  The empty array (`s = 0`) represents the
/// all-black necklace and is rejected by allocation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncrementArray {
    offsets: Vec<u32>,
    n: u32,
}

/// Period structure of an increment array: `period` divides the size,
/// `repetition = s / period`, `stride = n / repetition`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodInfo {
    pub period: u32,
    pub repetition: u32,
    pub stride: u32,
}

impl PeriodInfo {
    pub fn is_aperiodic(&self) -> bool {
        self.repetition == 1
    }
}

impl IncrementArray {
    pub fn new(offsets: Vec<u32>, n: u32) -> Result<Self> {
        let s = offsets.len() as u32;
        if s > n {
            return Err(Error::InvalidParameter(format!(
                "increment array size {s} exceeds n={n}"
            )));
        }
        let sum: u32 = offsets.iter().sum();
        if sum != n - s {
            return Err(Error::BadOffsetSum {
                sum,
                expected: n - s,
            });
        }
        Ok(IncrementArray { offsets, n })
    }

    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub fn size(&self) -> u32 {
        self.offsets.len() as u32
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// True for the all-black necklace's encoding (empty coalition).
    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

impl std::fmt::Display for IncrementArray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<")?;
        for (i, t) in self.offsets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ">")
    }
}

/// Run-length encodes canonical necklace beads into an offset buffer.  The
/// i-th element counts the contiguous black beads after the (i+1)-th white
/// bead; the trailing black run wraps around as the final element.
pub fn gen_inc_array_into(beads: &[u8], out: &mut Vec<u32>) {
    out.clear();
    let mut blacks = 0u32;
    let mut whites = 0u32;
    for &b in beads {
        if b == 1 {
            blacks += 1;
        } else {
            if whites > 0 {
                out.push(blacks);
            }
            blacks = 0;
            whites += 1;
        }
    }
    if whites == 0 {
        return;
    }
    out.push(blacks);
}

/// Converts a canonical necklace to its increment array.  The all-black
/// necklace yields the empty array, flagged via [`IncrementArray::is_empty`].
pub fn gen_inc_array(necklace: &Necklace) -> Result<IncrementArray> {
    let beads = necklace.beads();
    if beads.iter().any(|&b| b == 0) && beads[0] != 0 {
        return Err(Error::NonCanonicalNecklace);
    }
    let mut offsets = Vec::new();
    gen_inc_array_into(beads, &mut offsets);
    Ok(IncrementArray {
        offsets,
        n: beads.len() as u32,
    })
}

/// Inverse mapping: builds the string `0 1^{t_0} 0 1^{t_1} ... 0 1^{t_{s-1}}`.
pub fn ia_to_necklace(ia: &IncrementArray) -> Result<Necklace> {
    if ia.is_empty() {
        return Err(Error::EmptyIncrementArray);
    }
    let mut beads = Vec::with_capacity(ia.n() as usize);
    for &t in ia.offsets() {
        beads.push(0);
        beads.extend(std::iter::repeat(1).take(t as usize));
    }
    debug_assert_eq!(beads.len(), ia.n() as usize);
    Necklace::from_beads(&beads)
}

/// Shortest period of the offsets, testing divisors of `s` in increasing
/// order with early exit on the first mismatch.
pub fn period(ia: &IncrementArray) -> PeriodInfo {
    let t = ia.offsets();
    let s = t.len();
    assert!(s >= 1, "period requires a non-empty increment array");
    let p = period_of(t);
    let repetition = (s / p) as u32;
    PeriodInfo {
        period: p as u32,
        repetition,
        stride: ia.n() / repetition,
    }
}

/// Hot-path variant of [`period`] over a raw offset slice.
pub fn period_of(t: &[u32]) -> usize {
    let s = t.len();
    for p in 1..=s {
        if s % p != 0 {
            continue;
        }
        if (p..s).all(|k| t[k] == t[k - p]) {
            return p;
        }
    }
    unreachable!("p = s always matches");
}

/// Lexicographically smallest circular shift of the offsets.
pub fn canonical_shift(ia: &IncrementArray) -> IncrementArray {
    let t = ia.offsets();
    let s = t.len();
    assert!(s >= 1);
    let best = (0..s)
        .map(|k| {
            let mut rot: Vec<u32> = t[k..].to_vec();
            rot.extend_from_slice(&t[..k]);
            rot
        })
        .min()
        .unwrap();
    IncrementArray {
        offsets: best,
        n: ia.n(),
    }
}
