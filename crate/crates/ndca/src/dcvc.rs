//! DCVC baseline: each size-s list is held in reverse-lexicographic order
//! ({n-s+1..n} first, {1..s} last) and split into contiguous per-agent
//! shares, with the leftover coalitions handed out one at a time through the
//! rotating α counter.

use std::collections::BTreeMap;

use crate::allocation::{AgentAllocation, Coalition};
use crate::error::{Error, Result};

/// Binomial coefficient in the 64-bit index arithmetic the list positions
/// use.  Overflow is the documented large-n failure mode and is surfaced as
/// an error instead of wrapping.
pub fn binomial64(n: u32, k: u32) -> Result<u64> {
    let wide =
        crate::necklace::binomial(n as u64, k as u64).map_err(|_| Error::BinomialOverflow { n, k })?;
    u64::try_from(wide).map_err(|_| Error::BinomialOverflow { n, k })
}

/// The `idx`-th (1-based) size-`s` coalition of the reverse-lexicographic
/// list, by unranking its ascending-lex complement rank.
pub fn coalition_at_index(n: u32, s: u32, idx: u64) -> Result<Coalition> {
    let len = binomial64(n, s)?;
    if idx < 1 || idx > len {
        return Err(Error::IndexOutOfRange { idx, len });
    }
    // 0-based rank in ascending lex order over ascending member tuples
    let mut rank = len - idx;
    let mut members = Vec::with_capacity(s as usize);
    let mut next = 1u32;
    for remaining in (1..=s).rev() {
        // advance `next` until the block of combinations starting with it
        // covers `rank`
        loop {
            let block = binomial64(n - next, remaining - 1)?;
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        members.push(next);
        next += 1;
    }
    Ok(Coalition::new(members, None))
}

/// Steps to the next coalition in reverse-lexicographic order (the classic
/// backwards scan: decrement the leftmost member that has room, then pack
/// the suffix against n).
pub fn predecessor(c: &Coalition, n: u32) -> Result<Coalition> {
    let mut m = c.sorted_members();
    let s = m.len();
    let mut i = s;
    loop {
        if i == 0 {
            return Err(Error::NoPredecessor);
        }
        let floor = if i == 1 { 0 } else { m[i - 2] };
        if m[i - 1] - 1 > floor {
            break;
        }
        i -= 1;
    }
    m[i - 1] -= 1;
    for j in i..s {
        m[j] = n - (s - 1 - j) as u32;
    }
    Ok(Coalition::new(m, None))
}

/// Full DCVC run for one agent: the contiguous k-share of every list plus
/// any α-assigned remainder coalitions.
pub fn dcvc_allocate(x: u32, n: u32) -> Result<AgentAllocation> {
    if x < 1 || x > n {
        return Err(Error::AgentOutOfRange { agent: x, n });
    }
    let mut by_size: BTreeMap<u32, Vec<Coalition>> = BTreeMap::new();
    let mut alpha = 1u32;
    for s in 1..=n {
        let len = binomial64(n, s)?;
        let k = len / n as u64;
        let mut share = Vec::new();
        if k > 0 {
            let mut c = coalition_at_index(n, s, (x as u64 - 1) * k + 1)?;
            for step in 0..k {
                if step > 0 {
                    c = predecessor(&c, n)?;
                }
                share.push(c.clone());
            }
        }
        for idx in n as u64 * k + 1..=len {
            if alpha == x {
                share.push(coalition_at_index(n, s, idx)?);
            }
            alpha = if alpha == n { 1 } else { alpha + 1 };
        }
        if !share.is_empty() {
            by_size.insert(s, share);
        }
    }
    let total = by_size.values().map(|v| v.len() as u64).sum();
    Ok(AgentAllocation {
        agent: x,
        n,
        variant: None,
        by_size,
        total,
    })
}

/// Per-agent per-size DCVC counts via share arithmetic alone, with the α
/// walk simulated symbolically.  Returned as `counts[agent - 1][s - 1]`.
pub fn dcvc_counts(n: u32) -> Result<Vec<Vec<u64>>> {
    let mut counts = vec![vec![0u64; n as usize]; n as usize];
    let mut alpha = 1u64;
    for s in 1..=n {
        let len = binomial64(n, s)?;
        let k = len / n as u64;
        let r = len - n as u64 * k;
        for row in counts.iter_mut() {
            row[s as usize - 1] = k;
        }
        for j in 0..r {
            let agent = (alpha - 1 + j) % n as u64;
            counts[agent as usize][s as usize - 1] += 1;
        }
        alpha = (alpha - 1 + r) % n as u64 + 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::binomial;
    use std::collections::HashSet;

    fn members(c: &Coalition) -> Vec<u32> {
        c.members().to_vec()
    }

    // Oracle: every size-s subset, sorted descending lexicographically.
    fn reverse_lex_list(n: u32, s: u32) -> Vec<Vec<u32>> {
        let mut all = Vec::new();
        for mask in 1u64..(1 << n) {
            if mask.count_ones() == s {
                let ms: Vec<u32> = (1..=n).filter(|&a| mask >> (a - 1) & 1 == 1).collect();
                all.push(ms);
            }
        }
        all.sort();
        all.reverse();
        all
    }

    #[test]
    fn index_examples() {
        assert_eq!(members(&coalition_at_index(6, 3, 1).unwrap()), vec![4, 5, 6]);
        assert_eq!(members(&coalition_at_index(6, 3, 20).unwrap()), vec![1, 2, 3]);
        assert_eq!(members(&coalition_at_index(6, 3, 4).unwrap()), vec![3, 4, 5]);
        assert!(matches!(
            coalition_at_index(6, 3, 21),
            Err(Error::IndexOutOfRange { idx: 21, len: 20 })
        ));
    }

    #[test]
    fn indexing_matches_brute_force_list() {
        for n in 1..=10u32 {
            for s in 1..=n {
                let oracle = reverse_lex_list(n, s);
                for (i, expect) in oracle.iter().enumerate() {
                    let c = coalition_at_index(n, s, i as u64 + 1).unwrap();
                    assert_eq!(&members(&c), expect, "n={n} s={s} idx={}", i + 1);
                }
            }
        }
    }

    #[test]
    fn predecessor_examples() {
        let p = |ms: &[u32]| predecessor(&Coalition::new(ms.to_vec(), None), 6).map(|c| members(&c));
        assert_eq!(p(&[4, 5, 6]).unwrap(), vec![3, 5, 6]);
        assert_eq!(p(&[2, 3, 4]).unwrap(), vec![1, 5, 6]);
        assert_eq!(p(&[1, 2, 4]).unwrap(), vec![1, 2, 3]);
        assert_eq!(p(&[1, 2, 3]).unwrap_err(), Error::NoPredecessor);
    }

    #[test]
    fn predecessor_walks_whole_list() {
        for n in 1..=9u32 {
            for s in 1..=n {
                let oracle = reverse_lex_list(n, s);
                let mut c = coalition_at_index(n, s, 1).unwrap();
                for (i, expect) in oracle.iter().enumerate() {
                    assert_eq!(&members(&c), expect);
                    if i + 1 < oracle.len() {
                        c = predecessor(&c, n).unwrap();
                    }
                }
                assert!(predecessor(&c, n).is_err());
            }
        }
    }

    #[test]
    fn published_n6_shares() {
        let a3 = dcvc_allocate(3, 6).unwrap();
        let s3: Vec<Vec<u32>> = a3.by_size[&3].iter().map(members).collect();
        assert_eq!(s3, vec![vec![2, 4, 5], vec![2, 3, 6], vec![2, 3, 5]]);

        let a4 = dcvc_allocate(4, 6).unwrap();
        let s4: Vec<Vec<u32>> = a4.by_size[&3].iter().map(members).collect();
        assert_eq!(
            s4,
            vec![vec![2, 3, 4], vec![1, 5, 6], vec![1, 4, 6], vec![1, 2, 4]]
        );

        // totals are aggregate-balanced and the grand coalition lands on 3
        let totals: Vec<u64> = (1..=6).map(|x| dcvc_allocate(x, 6).unwrap().total).collect();
        assert_eq!(totals, vec![11, 11, 11, 10, 10, 10]);
        assert_eq!(
            a3.by_size[&6].iter().map(members).collect::<Vec<_>>(),
            vec![vec![1, 2, 3, 4, 5, 6]]
        );
    }

    #[test]
    fn self_interest_violation_witness() {
        // the baseline is *not* self-interested: agent 3 computes {2,4,5}
        let a3 = dcvc_allocate(3, 6).unwrap();
        assert!(a3.by_size[&3].iter().any(|c| !c.contains(3)));
    }

    #[test]
    fn complete_disjoint_and_balanced() {
        for n in 1..=12u32 {
            let mut seen = HashSet::new();
            let mut totals = Vec::new();
            for x in 1..=n {
                let alloc = dcvc_allocate(x, n).unwrap();
                totals.push(alloc.total);
                for cs in alloc.by_size.values() {
                    for c in cs {
                        assert!(seen.insert(c.bitmask()), "duplicate n={n} x={x}");
                    }
                }
            }
            assert_eq!(seen.len() as u128, (1u128 << n) - 1, "n={n}");
            let (lo, hi) = (
                *totals.iter().min().unwrap(),
                *totals.iter().max().unwrap(),
            );
            assert!(hi - lo <= 1, "n={n} totals {totals:?}");
        }
    }

    #[test]
    fn counts_match_materialised_allocations() {
        for n in 1..=12u32 {
            let counts = dcvc_counts(n).unwrap();
            for x in 1..=n {
                let alloc = dcvc_allocate(x, n).unwrap();
                for s in 1..=n {
                    assert_eq!(
                        counts[x as usize - 1][s as usize - 1],
                        alloc.size_count(s),
                        "n={n} x={x} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn agent1_totals_at_published_scales() {
        let expect: &[(u32, u64)] = &[
            (5, 7),
            (8, 32),
            (10, 103),
            (12, 342),
            (14, 1171),
            (15, 2185),
            (17, 7711),
            (20, 52429),
            (22, 190651),
            (25, 1342178),
        ];
        for &(n, total) in expect {
            let counts = dcvc_counts(n).unwrap();
            assert_eq!(counts[0].iter().sum::<u64>(), total, "n={n}");
        }
    }

    #[test]
    fn overflow_surfaces_from_n68() {
        for n in 60..68u32 {
            assert!(binomial64(n, n / 2).is_ok(), "n={n}");
        }
        assert_eq!(
            binomial64(68, 34).unwrap_err(),
            Error::BinomialOverflow { n: 68, k: 34 }
        );
        // exact value still representable in 128-bit counting arithmetic
        assert_eq!(binomial(68, 34).unwrap(), 28453041475240576740);
        assert!(dcvc_counts(68).is_err());
    }
}
