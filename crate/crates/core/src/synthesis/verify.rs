use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::enumerate::{hand_count, hands, sub_multisets};
use crate::codecs::Strategy;
use crate::deck::{multiset_difference, Card, Chooser, Hand, MessageKey, Observe};
use crate::error::Result;
use crate::wire::serialize_message;

const KEPT_FAILURES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { cases: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub hand: Vec<u32>,
    pub hidden: Vec<u32>,
    pub message: Option<String>,
    pub decoded: Option<Vec<u32>>,
    pub error: Option<String>,
}

/// Outcome of a verification run. Only the first failures are kept;
/// `failure_count` counts all of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub cases: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub collisions: u64,
    pub distinct_messages: u64,
    pub reserved_violations: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.collisions == 0 && self.reserved_violations == 0
    }
}

fn ids(cards: &[Card]) -> Vec<u32> {
    cards.iter().map(|c| c.0).collect()
}

/// Packs a short sorted card list into one word, or hashes a long one.
fn hidden_key(cards: &[Card]) -> u64 {
    if cards.len() <= 3 && cards.iter().all(|c| c.0 < (1 << 20)) {
        cards.iter().fold(cards.len() as u64, |acc, c| acc << 20 | c.0 as u64)
    } else {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        cards.hash(&mut h);
        h.finish() | 1 << 63
    }
}

struct Tally<'a> {
    strategy: &'a dyn Strategy,
    report: Report,
    small: Vec<(u128, u64)>,
    large: Vec<(Vec<u32>, u64)>,
}

impl<'a> Tally<'a> {
    fn fail(&mut self, failure: Failure) {
        self.report.failure_count += 1;
        if self.report.failures.len() < KEPT_FAILURES {
            self.report.failures.push(failure);
        }
    }

    fn run(&mut self, hand: &Hand, hidden: Option<&[Card]>) {
        self.report.cases += 1;
        let naming = self.strategy.naming();
        let base = |message: Option<String>, decoded: Option<Vec<u32>>, error: Option<String>| Failure {
            hand: ids(hand.cards()),
            hidden: hidden.map(ids).unwrap_or_default(),
            message,
            decoded,
            error,
        };
        let enc = match self.strategy.encode(hand, hidden) {
            Ok(e) => e,
            Err(e) => return self.fail(base(None, None, Some(e.to_string()))),
        };
        let text = serialize_message(&enc.message, naming);
        if self.strategy.reserved_violation(hand, &enc).is_some() {
            self.report.reserved_violations += 1;
        }
        let config = self.strategy.config();
        let shown: Vec<Card> = enc.message.cards();
        let legal = multiset_difference(hand.cards(), &enc.hidden)
            .map(|mut rest| {
                let mut s = shown.clone();
                s.sort();
                rest.sort();
                rest == s
            })
            .unwrap_or(false);
        let mut hidden_sorted = enc.hidden.clone();
        hidden_sorted.sort();
        if !legal || hidden.is_some_and(|h| h != hidden_sorted.as_slice()) {
            return self.fail(Failure {
                hidden: ids(&enc.hidden),
                ..base(Some(text), None, Some("illegal layout".into()))
            });
        }
        let observed = enc.message.observe();
        if let Err(e) = observed.validate(config) {
            return self.fail(base(Some(text), None, Some(e.to_string())));
        }
        match self.strategy.decode(&observed) {
            Ok(d) if d == hidden_sorted => {}
            Ok(d) => {
                let f = base(Some(text), Some(ids(&d)), None);
                self.fail(Failure {
                    hidden: ids(&hidden_sorted),
                    ..f
                })
            }
            Err(e) => self.fail(Failure {
                hidden: ids(&hidden_sorted),
                ..base(Some(text), None, Some(e.to_string()))
            }),
        }
        let hk = hidden_key(&hidden_sorted);
        match observed.key() {
            MessageKey::Small(k) => self.small.push((k, hk)),
            MessageKey::Large(k) => self.large.push((k, hk)),
        }
    }

    fn finish(mut self) -> Report {
        fn count<K: Ord + Clone>(v: &mut Vec<(K, u64)>) -> (u64, u64) {
            v.sort_unstable();
            v.dedup();
            let mut distinct = 0;
            let mut collisions = 0;
            let mut i = 0;
            while i < v.len() {
                let j = i + v[i..].iter().take_while(|(k, _)| *k == v[i].0).count();
                distinct += 1;
                collisions += (j - i - 1) as u64;
                i = j;
            }
            (distinct, collisions)
        }
        let (d1, c1) = count(&mut self.small);
        let (d2, c2) = count(&mut self.large);
        self.report.distinct_messages = d1 + d2;
        self.report.collisions = c1 + c2;
        self.report
    }
}

fn random_hand(config: &crate::deck::TrickConfig, rng: &mut ChaCha8Rng) -> Hand {
    let n = config.deck_size as usize;
    let picked = sample(rng, n, config.hand_size).into_vec();
    let cards = picked
        .into_iter()
        .map(|i| if config.duplicates { Card(i as u32 / 2) } else { Card(i as u32) })
        .collect();
    Hand::new(cards, config).expect("sampled hands are valid")
}

/// Encodes, observes and decodes every input (or a seeded sample of
/// inputs), checking legality, round-trips, message collisions and any
/// reserved-message law of the protocol.
pub fn verify_strategy(strategy: &dyn Strategy, mode: VerifyMode) -> Result<Report> {
    let config = *strategy.config();
    config.validate()?;
    let mut tally = Tally {
        strategy,
        report: Report {
            cases: 0,
            failure_count: 0,
            failures: Vec::new(),
            collisions: 0,
            distinct_messages: 0,
            reserved_violations: 0,
        },
        small: Vec::new(),
        large: Vec::new(),
    };
    let audience = config.chooser == Chooser::Audience;
    match mode {
        VerifyMode::Exhaustive => {
            if let Some(n) = num_traits::ToPrimitive::to_usize(&hand_count(&config)) {
                tally.small.reserve(n);
            }
            for hand in hands(&config) {
                if audience {
                    for h in sub_multisets(hand.cards(), config.hidden_count) {
                        tally.run(&hand, Some(&h));
                    }
                } else {
                    tally.run(&hand, None);
                }
            }
        }
        VerifyMode::Sampled { cases, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            tally.small.reserve(cases as usize);
            for _ in 0..cases {
                let hand = random_hand(&config, &mut rng);
                if audience {
                    let pos = sample(&mut rng, hand.len(), config.hidden_count).into_vec();
                    let mut h: Vec<Card> = pos.into_iter().map(|i| hand.cards()[i]).collect();
                    h.sort();
                    tally.run(&hand, Some(&h));
                } else {
                    tally.run(&hand, None);
                }
            }
        }
    }
    Ok(tally.finish())
}
