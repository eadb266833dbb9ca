//! Decks with two interchangeable copies of each value.

use super::{audience_hidden, check_capacity, check_hand, nth_excluding, sum_mod, Encoded, Strategy};
use crate::bounds::max_dup_signal_strategy;
use crate::combinatorics::{factorial, multiset_rank, multiset_unrank, permutation_rank, permutation_unrank};
use crate::deck::{Card, Chooser, Hand, Message, ObservedMessage, Placement, TrickConfig};
use crate::error::{Error, Result};

fn up_line(cards: impl IntoIterator<Item = Card>) -> Message {
    Message::line(cards.into_iter().map(|c| Placement::up(c, 0)).collect())
}

fn count(cards: &[Card], v: Card) -> usize {
    cards.iter().filter(|&&c| c == v).count()
}

fn has_duplicate(cards: &[Card]) -> bool {
    let mut s = cards.to_vec();
    s.sort();
    s.windows(2).any(|w| w[0] == w[1])
}

/// Audience picks a value; the order of the shown multiset is its rank
/// among the values that still have a copy off the table.
#[derive(Debug, Clone)]
pub struct DupAudience {
    config: TrickConfig,
}

impl DupAudience {
    pub fn new(hand_size: usize, deck_size: u32) -> Result<Self> {
        let config = TrickConfig::new(deck_size, hand_size)
            .with_duplicates(true)
            .with_chooser(Chooser::Audience);
        let shown = hand_size.saturating_sub(1) as u64;
        let f = factorial(shown).ok_or_else(|| Error::Overflow("arrangements".into()))?;
        check_capacity(deck_size as u64, capacity(shown, f))?;
        config.validate()?;
        Ok(DupAudience { config })
    }

    fn candidates(&self, shown: &[Card]) -> Vec<Card> {
        (0..self.config.distinct_values())
            .map(Card)
            .filter(|&v| count(shown, v) < 2)
            .collect()
    }
}

impl Strategy for DupAudience {
    fn name(&self) -> String {
        "dup-audience".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        let hidden = audience_hidden(&self.config, hand, hidden)?.unwrap();
        let shown = hand.without(&hidden)?;
        let rank = self
            .candidates(&shown)
            .iter()
            .position(|&c| c == hidden[0])
            .expect("the hidden copy is off the table") as u128;
        Ok(Encoded {
            hidden,
            message: up_line(multiset_unrank(&shown, rank)?),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let shown = observed.visible_cards();
        let rank = multiset_rank(&shown) as usize;
        self.candidates(&shown)
            .get(rank)
            .map(|&c| vec![c])
            .ok_or_else(|| super::unused_message(observed, self.naming()))
    }
}

/// Largest even deck where every shown multiset has enough orderings: with
/// `j` doubled values there are `D - j` candidates and `(K-1)!/2^j` orders.
fn capacity(shown: u64, f: u128) -> u64 {
    let fits = |d: u64| (0..=shown / 2).all(|j| d + j < shown || (d - j) as u128 <= f >> j);
    let mut d = 0u64;
    while fits(d + 1) {
        d += 1;
    }
    2 * d
}

/// Eight cards (values 0..3 twice), three dealt, assistant hides one.
#[derive(Debug, Clone)]
pub struct DupK3 {
    config: TrickConfig,
}

impl DupK3 {
    pub fn new() -> Self {
        DupK3 {
            config: TrickConfig::new(8, 3).with_duplicates(true),
        }
    }

    pub fn with_deck(deck_size: u32) -> Result<Self> {
        check_capacity(deck_size as u64, 8)?;
        if deck_size != 8 {
            return Err(Error::InvalidConfig("this strategy is defined for 8 cards".into()));
        }
        Ok(Self::new())
    }
}

impl Default for DupK3 {
    fn default() -> Self {
        Self::new()
    }
}

fn m4(v: u32) -> Card {
    Card(v % 4)
}

impl Strategy for DupK3 {
    fn name(&self) -> String {
        "dup-k3".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let c = hand.cards();
        let (shown, hidden) = if let Some(w) = c.windows(2).find(|w| w[0] == w[1]) {
            let a = w[0];
            let b = *c.iter().find(|&&x| x != a).unwrap();
            if b == m4(a.0 + 1) {
                ([a, a], b)
            } else {
                ([a, b], a)
            }
        } else {
            let missing = (0..4).find(|&v| !hand.contains(Card(v))).unwrap();
            let a = missing + 1;
            ([m4(a), m4(a + 1)], m4(a + 2))
        };
        Ok(Encoded {
            hidden: vec![hidden],
            message: up_line(shown),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let v = observed.visible_cards();
        let (u, w) = (v[0].0, v[1].0);
        let hidden = match (w + 4 - u) % 4 {
            0 => m4(u + 1),
            1 => m4(u + 2),
            _ => Card(u),
        };
        Ok(vec![hidden])
    }
}

/// A duplicated value is shown leftmost with everything else in order;
/// otherwise the best trick runs over the orders whose tail is not
/// increasing.
#[derive(Debug, Clone)]
pub struct DupSignal {
    config: TrickConfig,
    block: u128,
}

impl DupSignal {
    pub fn new(hand_size: usize, deck_size: u32) -> Result<Self> {
        let config = TrickConfig::new(deck_size, hand_size).with_duplicates(true);
        let cap = max_dup_signal_strategy(hand_size as u64)?;
        check_capacity(deck_size as u64, cap.value_u64().unwrap_or(u64::MAX))?;
        config.validate()?;
        let block = factorial(hand_size.saturating_sub(2) as u64)
            .ok_or_else(|| Error::Overflow("arrangements".into()))?;
        Ok(DupSignal { config, block })
    }

    /// Lexicographic rank of the `q`-th order whose tail is not increasing.
    fn allowed_to_rank(&self, q: u128) -> u128 {
        let per = self.block - 1;
        q / per * self.block + q % per + 1
    }

    fn rank_to_allowed(&self, r: u128) -> u128 {
        r - (r / self.block + 1)
    }
}

impl Strategy for DupSignal {
    fn name(&self) -> String {
        "dup-signal".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let c = hand.cards();
        if let Some(w) = c.windows(2).find(|w| w[0] == w[1]) {
            let d = w[0];
            let rest = hand.without(&[d, d])?;
            return Ok(Encoded {
                hidden: vec![d],
                message: up_line(std::iter::once(d).chain(rest)),
            });
        }
        let k = c.len() as u128;
        let i = (hand.sum() % c.len() as u64) as usize;
        let h = c[i];
        let shown = hand.without(&[h])?;
        let q = (h.0 as u128 - i as u128) / k;
        Ok(Encoded {
            hidden: vec![h],
            message: up_line(permutation_unrank(&shown, self.allowed_to_rank(q))?),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let v = observed.visible_cards();
        if v.is_empty() {
            return Ok(vec![Card(0)]);
        }
        let tail_increasing = v[1..].windows(2).all(|w| w[0] < w[1]);
        if tail_increasing || has_duplicate(&v) {
            return Ok(vec![v[0]]);
        }
        let k = self.config.hand_size as u64;
        let q = self.rank_to_allowed(permutation_rank(&v));
        let t = (k - sum_mod(&v, k)) % k;
        let rank = q * k as u128 + t as u128;
        nth_excluding(self.config.distinct_values(), &v, rank)
            .map(|c| vec![c])
            .ok_or_else(|| super::unused_message(observed, self.naming()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::Observe;

    fn hand(vals: &[u32], cfg: &TrickConfig) -> Hand {
        Hand::new(vals.iter().map(|&v| Card(v)).collect(), cfg).unwrap()
    }

    #[test]
    fn dup_k3_table_rows() {
        let codec = DupK3::new();
        let enc = codec.encode(&hand(&[0, 1, 2], codec.config()), None).unwrap();
        assert_eq!((enc.message.cards(), enc.hidden), (vec![Card(0), Card(1)], vec![Card(2)]));
        let enc = codec.encode(&hand(&[3, 3, 0], codec.config()), None).unwrap();
        assert_eq!((enc.message.cards(), enc.hidden), (vec![Card(3), Card(3)], vec![Card(0)]));
        let enc = codec.encode(&hand(&[1, 1, 3], codec.config()), None).unwrap();
        assert_eq!((enc.message.cards(), enc.hidden), (vec![Card(1), Card(3)], vec![Card(1)]));
        assert_eq!(codec.decode(&enc.message.observe()).unwrap(), vec![Card(1)]);
    }

    #[test]
    fn dup_signal_example() {
        // Values 6, 9, 10, 11 need a deck of at least 12 values; K=6 allows plenty.
        let codec = DupSignal::new(6, 40).unwrap();
        let enc = codec.encode(&hand(&[6, 9, 9, 10, 10, 11], codec.config()), None).unwrap();
        assert_eq!(
            enc.message.cards(),
            [9, 6, 10, 10, 11].map(Card).to_vec()
        );
        assert_eq!(enc.hidden, vec![Card(9)]);
        assert_eq!(codec.decode(&enc.message.observe()).unwrap(), vec![Card(9)]);
    }

    #[test]
    fn dup_audience_forced_case() {
        let codec = DupAudience::new(3, 4).unwrap();
        let enc = codec.encode(&hand(&[0, 0, 1], codec.config()), Some(&[Card(1)])).unwrap();
        assert_eq!(enc.message.cards(), vec![Card(0), Card(0)]);
        assert_eq!(codec.decode(&enc.message.observe()).unwrap(), vec![Card(1)]);
        assert!(DupAudience::new(3, 6).is_err());
        assert!(DupAudience::new(1, 2).is_ok());
        assert!(DupAudience::new(1, 4).is_err());
    }

    #[test]
    fn allowed_rank_mapping() {
        let codec = DupSignal::new(4, 30).unwrap();
        let ranks: Vec<u128> = (0..3).map(|q| codec.allowed_to_rank(q)).collect();
        assert_eq!(ranks, vec![1, 3, 5]);
        for q in 0..3 {
            assert_eq!(codec.rank_to_allowed(codec.allowed_to_rank(q)), q);
        }
        assert!(DupSignal::new(4, 31).is_err());
    }
}
