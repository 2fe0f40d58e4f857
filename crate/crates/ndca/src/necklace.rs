//! Two-colour combinatorial necklace enumeration (FKM) and the closed-form
//! counting functions used as cross-checks.
//!
//! A necklace of `n` beads in `k` colours is an equivalence class of `k`-ary
//! strings under rotation; we work with the lexicographically least
//! representative of each class.  Bead value 0 (white) marks an agent that is
//! a coalition member, 1 (black) marks an omitted agent.

use crate::error::{Error, Result};

/// Canonical (lexicographically least) representative of a necklace class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Necklace {
    beads: Vec<u8>,
}

impl Necklace {
    /// Wraps a bead sequence, requiring it to be the canonical rotation.
    pub fn from_beads(beads: &[u8]) -> Result<Self> {
        if beads.is_empty() {
            return Err(Error::InvalidParameter("empty bead sequence".into()));
        }
        if !is_canonical_necklace(beads) {
            return Err(Error::NonCanonicalNecklace);
        }
        Ok(Necklace {
            beads: beads.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    pub fn beads(&self) -> &[u8] {
        &self.beads
    }

    /// Number of white (0) beads, i.e. the coalition size this necklace encodes.
    pub fn white_count(&self) -> usize {
        self.beads.iter().filter(|&&b| b == 0).count()
    }
}

impl std::fmt::Display for Necklace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.beads {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// True iff `beads` is lexicographically <= every one of its rotations.
pub fn is_canonical_necklace(beads: &[u8]) -> bool {
    let n = beads.len();
    for shift in 1..n {
        for i in 0..n {
            let rotated = beads[(i + shift) % n];
            match beads[i].cmp(&rotated) {
                std::cmp::Ordering::Less => break,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

/// Euler's totient: the number of x in 1..=d coprime with d.
pub fn euler_totient(d: u64) -> u64 {
    assert!(d >= 1, "totient requires d >= 1");
    let mut result = d;
    let mut m = d;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Exact binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::CountOverflow {
                n: n as u32,
                k: k as u32,
            })?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Total number of necklaces of length `n` with `k` colours:
/// (1/n) * sum over d|n of phi(d) * k^(n/d).
pub fn count_necklaces(n: u32, k: u32) -> Result<u128> {
    assert!(n >= 1 && k >= 1);
    let overflow = || Error::CountOverflow { n, k };
    let mut sum: u128 = 0;
    for d in divisors(n as u64) {
        let pow = (k as u128)
            .checked_pow((n as u64 / d) as u32)
            .ok_or_else(overflow)?;
        let term = (euler_totient(d) as u128)
            .checked_mul(pow)
            .ok_or_else(overflow)?;
        sum = sum.checked_add(term).ok_or_else(overflow)?;
    }
    debug_assert_eq!(sum % n as u128, 0);
    Ok(sum / n as u128)
}

/// Number of fixed-density two-colour necklaces of length `n` with `s` white
/// beads: (1/n) * sum over d|gcd(n,s) of phi(d) * C(n/d, s/d).
pub fn count_fixed_density_necklaces(n: u32, s: u32) -> Result<u128> {
    assert!(s <= n, "density s must satisfy 0 <= s <= n");
    let g = gcd(n as u64, s as u64);
    let mut sum: u128 = 0;
    for d in divisors(g) {
        let term = (euler_totient(d) as u128)
            .checked_mul(binomial(n as u64 / d, s as u64 / d)?)
            .ok_or(Error::CountOverflow { n, k: 2 })?;
        sum = sum.checked_add(term).ok_or(Error::CountOverflow { n, k: 2 })?;
    }
    debug_assert_eq!(sum % n as u128, 0);
    Ok(sum / n as u128)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// FKM generation over the raw bead array.  Invokes `visit` once per necklace
/// class with the canonical representative, in ascending lexicographic order,
/// starting with the all-zeros string.  The array is reused between visits.
pub fn fkm_beads<F: FnMut(&[u8])>(n: u32, k: u32, mut visit: F) {
    assert!(n >= 1 && k >= 2);
    let n = n as usize;
    let top = (k - 1) as u8;
    // a[0] = 0 is a sentinel; the necklace occupies a[1..=n].
    let mut a = vec![0u8; n + 1];
    let mut i = n;
    visit(&a[1..=n]);
    loop {
        a[i] += 1;
        for j in 1..=(n - i) {
            a[j + i] = a[j];
        }
        if n % i == 0 {
            visit(&a[1..=n]);
        }
        i = n;
        while a[i] == top {
            i -= 1;
        }
        if i == 0 {
            break;
        }
    }
}

/// FKM enumeration yielding owned [`Necklace`] values.
pub fn fkm_enumerate<F: FnMut(&Necklace)>(n: u32, k: u32, mut visitor: F) {
    fkm_beads(n, k, |beads| {
        let necklace = Necklace {
            beads: beads.to_vec(),
        };
        visitor(&necklace);
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    // Independent oracle: canonicalise every k-ary string of length n by
    // taking its lexicographically least rotation.
    fn brute_force_necklaces(n: u32, k: u32) -> Vec<Vec<u8>> {
        let n = n as usize;
        let total = (k as u64).pow(n as u32);
        let mut set = HashSet::new();
        for code in 0..total {
            let mut s = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                s.push((c % k as u64) as u8);
                c /= k as u64;
            }
            let canonical = (0..n)
                .map(|r| {
                    let mut rot: Vec<u8> = s[r..].to_vec();
                    rot.extend_from_slice(&s[..r]);
                    rot
                })
                .min()
                .unwrap();
            set.insert(canonical);
        }
        let mut out: Vec<Vec<u8>> = set.into_iter().collect();
        out.sort();
        out
    }

    fn brute_force_coprime_count(d: u64) -> u64 {
        (1..=d).filter(|&x| gcd(d, x) == 1).count() as u64
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(6), brute_force_coprime_count(6));
        assert_eq!(euler_totient(6), 2);
        assert_eq!(euler_totient(7), 6);
        for d in 1..=200 {
            assert_eq!(euler_totient(d), brute_force_coprime_count(d));
        }
    }

    #[test]
    fn necklace_counts() {
        assert_eq!(count_necklaces(6, 2).unwrap(), 14);
        assert_eq!(count_necklaces(1, 2).unwrap(), 2);
        // brute-force canonicalisation of all 32 binary strings of length 5
        assert_eq!(brute_force_necklaces(5, 2).len(), 8);
        assert_eq!(count_necklaces(5, 2).unwrap(), 8);
    }

    #[test]
    fn fixed_density_counts() {
        assert_eq!(count_fixed_density_necklaces(6, 3).unwrap(), 4);
        assert_eq!(count_fixed_density_necklaces(6, 2).unwrap(), 3);
        for n in 1..=12 {
            assert_eq!(count_fixed_density_necklaces(n, 0).unwrap(), 1);
        }
    }

    #[test]
    fn fixed_density_sums_to_total() {
        for n in 1..=16 {
            let total: u128 = (0..=n)
                .map(|s| count_fixed_density_necklaces(n, s).unwrap())
                .sum();
            assert_eq!(total, count_necklaces(n, 2).unwrap());
        }
    }

    #[test]
    fn fkm_n6_matches_published_order() {
        let expected = [
            "000000", "000001", "000011", "000101", "000111", "001001", "001011",
            "001101", "001111", "010101", "010111", "011011", "011111", "111111",
        ];
        let mut seen = Vec::new();
        fkm_enumerate(6, 2, |neck| seen.push(neck.to_string()));
        assert_eq!(seen, expected);
    }

    #[test]
    fn fkm_n1_visits_both_colours() {
        let mut seen = Vec::new();
        fkm_enumerate(1, 2, |neck| seen.push(neck.to_string()));
        assert_eq!(seen, vec!["0", "1"]);
    }

    #[test]
    fn fkm_matches_brute_force_and_counts() {
        for n in 1..=10 {
            let mut emitted = Vec::new();
            fkm_beads(n, 2, |b| emitted.push(b.to_vec()));
            assert_eq!(emitted, brute_force_necklaces(n, 2), "n={n}");
            assert_eq!(emitted.len() as u128, count_necklaces(n, 2).unwrap());
            // canonical, no duplicates, strictly increasing
            for w in emitted.windows(2) {
                assert!(w[0] < w[1]);
            }
            for b in &emitted {
                assert!(is_canonical_necklace(b));
            }
        }
        // spot-check k = 3
        for n in 1..=6 {
            let mut count = 0u128;
            fkm_beads(n, 3, |_| count += 1);
            assert_eq!(count, count_necklaces(n, 3).unwrap());
        }
    }

    #[test]
    fn fkm_density_counts_match_formula() {
        for n in 1..=14u32 {
            let mut by_density = vec![0u128; n as usize + 1];
            fkm_beads(n, 2, |b| {
                let s = b.iter().filter(|&&x| x == 0).count();
                by_density[s] += 1;
            });
            for s in 0..=n {
                assert_eq!(
                    by_density[s as usize],
                    count_fixed_density_necklaces(n, s).unwrap(),
                    "n={n} s={s}"
                );
            }
        }
    }

    #[test]
    fn canonicity_examples() {
        assert!(is_canonical_necklace(&[0, 0, 1, 1, 0, 1]));
        assert!(!is_canonical_necklace(&[0, 1, 0, 0, 1, 1]));
        assert!(is_canonical_necklace(&[0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn binomial_detects_overflow() {
        assert_eq!(binomial(6, 3).unwrap(), 20);
        assert_eq!(binomial(68, 34).unwrap(), 28453041475240576740);
        assert!(binomial(300, 150).is_err());
    }
}
