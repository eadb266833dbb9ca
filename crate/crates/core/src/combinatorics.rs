//! Exact counting, ranking and unranking helpers.
//!
//! All orders are lexicographic. Ranks are 0-based and fit in `u128`; the
//! callers guarantee the sizes involved are small enough (codec domains are
//! bounded by their deck capacity).

use crate::error::{Error, Result};

pub fn factorial(n: u64) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc = 1u128;
    for i in 1..=k {
        // acc == C(n - k + i - 1, i - 1) here, so the division is exact.
        acc = acc.checked_mul(n - k + i)? / i;
    }
    Some(acc)
}

pub fn checked_pow(base: u64, exp: u64) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base as u128))
}

pub(crate) fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

/// Lexicographic rank of a sequence of distinct items among all orderings
/// of the same items.
pub fn permutation_rank<T: Ord>(seq: &[T]) -> u128 {
    let n = seq.len();
    let mut rank = 0u128;
    for i in 0..n {
        let smaller_later = seq[i + 1..].iter().filter(|x| **x < seq[i]).count() as u128;
        rank = rank * (n - i) as u128 + smaller_later;
    }
    rank
}

/// Inverse of [`permutation_rank`]: orders `items` (any order on input) into
/// the arrangement with the given lexicographic rank.
pub fn permutation_unrank<T: Ord + Clone>(items: &[T], rank: u128) -> Result<Vec<T>> {
    let mut pool: Vec<T> = items.to_vec();
    pool.sort();
    let n = pool.len();
    let total = factorial(n as u64).ok_or_else(|| overflow("permutation count"))?;
    if rank >= total {
        return Err(Error::InvalidParameter(format!(
            "permutation rank {rank} out of range for {n} items"
        )));
    }
    let mut rank = rank;
    let mut block = total;
    let mut out = Vec::with_capacity(n);
    for remaining in (1..=n).rev() {
        block /= remaining as u128;
        let idx = (rank / block) as usize;
        rank %= block;
        out.push(pool.remove(idx));
    }
    Ok(out)
}

/// Number of distinct orderings of a multiset given its multiplicities.
pub fn multiset_permutation_count(multiplicities: &[usize]) -> Option<u128> {
    let total: usize = multiplicities.iter().sum();
    let mut acc = factorial(total as u64)?;
    for &m in multiplicities {
        acc /= factorial(m as u64)?;
    }
    Some(acc)
}

fn distinct_counts<T: Ord + Clone>(items: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut values: Vec<T> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for x in sorted {
        if values.last() == Some(&x) {
            *counts.last_mut().unwrap() += 1;
        } else {
            values.push(x);
            counts.push(1);
        }
    }
    (values, counts)
}

/// Lexicographic rank of `seq` among the distinct orderings of its multiset.
pub fn multiset_rank<T: Ord + Clone>(seq: &[T]) -> u128 {
    let (values, mut counts) = distinct_counts(seq);
    let mut rank = 0u128;
    for x in seq {
        let pos = values.binary_search(x).unwrap();
        for v in 0..pos {
            if counts[v] > 0 {
                counts[v] -= 1;
                rank += multiset_permutation_count(&counts).unwrap_or(0);
                counts[v] += 1;
            }
        }
        counts[pos] -= 1;
    }
    rank
}

/// Inverse of [`multiset_rank`].
pub fn multiset_unrank<T: Ord + Clone>(items: &[T], rank: u128) -> Result<Vec<T>> {
    let (values, mut counts) = distinct_counts(items);
    let total = multiset_permutation_count(&counts).ok_or_else(|| overflow("multiset count"))?;
    if rank >= total {
        return Err(Error::InvalidParameter(format!(
            "multiset permutation rank {rank} out of range ({total} arrangements)"
        )));
    }
    let mut rank = rank;
    let mut out = Vec::with_capacity(items.len());
    for _ in 0..items.len() {
        for v in 0..values.len() {
            if counts[v] == 0 {
                continue;
            }
            counts[v] -= 1;
            let block = multiset_permutation_count(&counts).unwrap();
            if rank < block {
                out.push(values[v].clone());
                break;
            }
            rank -= block;
            counts[v] += 1;
        }
    }
    Ok(out)
}

/// Lexicographic rank of a strictly increasing `k`-subset of `0..n`.
pub fn combination_rank(n: usize, subset: &[usize]) -> u128 {
    let k = subset.len();
    let mut rank = 0u128;
    let mut start = 0;
    for (i, &c) in subset.iter().enumerate() {
        for j in start..c {
            rank += binomial((n - j - 1) as u64, (k - i - 1) as u64).unwrap();
        }
        start = c + 1;
    }
    rank
}

pub fn combination_unrank(n: usize, k: usize, rank: u128) -> Result<Vec<usize>> {
    let total = binomial(n as u64, k as u64).ok_or_else(|| overflow("binomial"))?;
    if rank >= total {
        return Err(Error::InvalidParameter(format!(
            "combination rank {rank} out of range for C({n},{k})"
        )));
    }
    let mut rank = rank;
    let mut out = Vec::with_capacity(k);
    let mut c = 0usize;
    for i in 0..k {
        loop {
            let count = binomial((n - c - 1) as u64, (k - i - 1) as u64).unwrap();
            if rank < count {
                out.push(c);
                c += 1;
                break;
            }
            rank -= count;
            c += 1;
        }
    }
    Ok(out)
}

/// Reads `digits` (most significant first) in base `radix`.
pub fn digits_to_number(digits: &[u32], radix: u32) -> u128 {
    digits
        .iter()
        .fold(0u128, |acc, &d| acc * radix as u128 + d as u128)
}

/// Writes `value` as exactly `len` base-`radix` digits, most significant first.
pub fn number_to_digits(mut value: u128, radix: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (value % radix as u128) as u32;
        value /= radix as u128;
    }
    out
}

/// All `k`-subsets of `0..n` in lexicographic order, as index vectors.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let cur = current.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
