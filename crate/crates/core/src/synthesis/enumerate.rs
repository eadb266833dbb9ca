use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bounds::{binomial, dup_hand_count};
use crate::combinatorics::{checked_pow, combinations, number_to_digits};
use crate::deck::{
    Arrangement, Card, Hand, Message, Observe, ObservedMessage, Placement, TrickConfig,
};
use crate::error::{Error, Result};

fn max_copies(config: &TrickConfig) -> usize {
    if config.duplicates {
        2
    } else {
        1
    }
}

/// Number of hands, in closed form.
pub fn hand_count(config: &TrickConfig) -> BigUint {
    let k = config.hand_size as u64;
    if config.duplicates {
        dup_hand_count(config.distinct_values() as u64, k)
    } else {
        binomial(config.deck_size as u64, k)
    }
}

pub(crate) fn check_guard(size: &BigUint, guard: u64) -> Result<()> {
    let size = size.to_u128().unwrap_or(u128::MAX);
    if size <= guard as u128 {
        Ok(())
    } else {
        Err(Error::SizeGuard {
            size,
            guard: guard as u128,
        })
    }
}

/// Sorted multisets of `size` values from `0..values`, each value used at
/// most `copies` times, in lexicographic order.
pub(crate) fn multisets(values: u32, size: usize, copies: usize) -> Vec<Vec<Card>> {
    fn go(
        values: u32,
        size: usize,
        copies: usize,
        from: u32,
        cur: &mut Vec<Card>,
        out: &mut Vec<Vec<Card>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in from..values {
            let used = cur.iter().rev().take_while(|c| c.0 == v).count();
            if used >= copies {
                continue;
            }
            cur.push(Card(v));
            go(values, size, copies, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(values, size, copies, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Every hand, sorted, without materializing the whole list.
pub fn hands(config: &TrickConfig) -> Box<dyn Iterator<Item = Hand> + Send> {
    if config.duplicates {
        let all = multisets(config.distinct_values(), config.hand_size, 2);
        Box::new(all.into_iter().map(Hand::from_sorted))
    } else {
        Box::new(
            combinations(config.deck_size as usize, config.hand_size)
                .map(|c| Hand::from_sorted(c.into_iter().map(|i| Card(i as u32)).collect())),
        )
    }
}

pub fn enumerate_hands(config: &TrickConfig, guard: u64) -> Result<Vec<Hand>> {
    config.validate()?;
    check_guard(&hand_count(config), guard)?;
    Ok(hands(config).collect())
}

/// Distinct sub-multisets of a sorted multiset, sorted.
pub(crate) fn sub_multisets(cards: &[Card], size: usize) -> Vec<Vec<Card>> {
    let mut out: Vec<Vec<Card>> = combinations(cards.len(), size)
        .map(|idx| idx.into_iter().map(|i| cards[i]).collect())
        .collect();
    out.sort();
    out.dedup();
    out
}

fn next_permutation(v: &mut [Card]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every distinct observed message obtainable by laying out `shown`, with
/// one full message producing it. Sorted by observed message.
pub fn observed_arrangements(config: &TrickConfig, shown: &[Card]) -> Vec<(ObservedMessage, Message)> {
    let s = shown.len();
    let r = config.rotations;
    let rot_total = checked_pow(r as u64, s as u64).expect("rotation count fits") as u64;
    let masks: u32 = if config.flips_allowed { 1 << s } else { 1 };
    let mut order = shown.to_vec();
    order.sort();
    let mut seen: BTreeMap<ObservedMessage, Message> = BTreeMap::new();
    loop {
        for mask in 0..masks {
            for code in 0..rot_total {
                let digits = number_to_digits(code as u128, r, s);
                let placed: Vec<Placement> = (0..s)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            Placement::down(order[i], digits[i])
                        } else {
                            Placement::up(order[i], digits[i])
                        }
                    })
                    .collect();
                let message = match config.arrangement {
                    Arrangement::Line => Message::line(placed),
                    Arrangement::Circle => Message::circle(placed),
                };
                seen.entry(message.observe()).or_insert(message);
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    seen.into_iter().collect()
}

/// Multiplicity profile of a sorted multiset; observed-message counts for
/// face-up protocols depend only on it.
pub(crate) fn profile(cards: &[Card]) -> Vec<usize> {
    let mut counts: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < cards.len() {
        let j = cards[i..].iter().take_while(|&&c| c == cards[i]).count();
        counts.push(j);
        i += j;
    }
    counts.sort_unstable();
    counts
}

/// Cache of face-up arrangement counts keyed by multiplicity profile.
#[derive(Debug, Default)]
pub(crate) struct ArrangementCounts {
    cache: BTreeMap<Vec<usize>, u64>,
}

impl ArrangementCounts {
    pub fn get(&mut self, config: &TrickConfig, shown: &[Card]) -> u64 {
        let key = profile(shown);
        *self.cache.entry(key.clone()).or_insert_with(|| {
            let representative: Vec<Card> = key
                .iter()
                .enumerate()
                .flat_map(|(v, &m)| std::iter::repeat(Card(v as u32)).take(m))
                .collect();
            observed_arrangements(config, &representative).len() as u64
        })
    }
}

/// All observed messages over the whole deck.
pub fn enumerate_messages(config: &TrickConfig, guard: u64) -> Result<Vec<ObservedMessage>> {
    config.validate()?;
    let s = config.shown_count();
    let shown_sets = if config.duplicates {
        dup_hand_count(config.distinct_values() as u64, s as u64)
    } else {
        binomial(config.deck_size as u64, s as u64)
    };
    let per_set = observed_arrangements(config, &(0..s as u32).map(Card).collect::<Vec<_>>()).len();
    check_guard(&(shown_sets * per_set), guard)?;
    let mut all = BTreeSet::new();
    for shown in multisets(config.distinct_values(), s, max_copies(config)) {
        all.extend(observed_arrangements(config, &shown).into_iter().map(|(o, _)| o));
    }
    Ok(all.into_iter().collect())
}
