use super::{
    audience_hidden, check_capacity, check_hand, nth_excluding, rank_excluding, sum_mod, Encoded,
    FaceUpSpace, Strategy,
};
use crate::bounds::{max_bctm_two_hidden, multi_audience_scan};
use crate::combinatorics::{combination_rank, combination_unrank};
use crate::deck::{Card, Chooser, Hand, Message, ObservedMessage, Placement, TrickConfig};
use crate::error::Result;

/// Audience hides `C` cards; the arrangement index is the lexicographic rank
/// of the hidden set among all `C`-sets of cards not on the table.
#[derive(Debug, Clone)]
pub struct TwoHiddenAudience {
    config: TrickConfig,
    space: FaceUpSpace,
}

impl TwoHiddenAudience {
    pub fn new(hand_size: usize, rotations: u32, hidden: usize, deck_size: u32) -> Result<Self> {
        let config = TrickConfig::new(deck_size, hand_size)
            .with_rotations(rotations)
            .with_hidden(hidden)
            .with_chooser(Chooser::Audience);
        config.validate()?;
        let space = FaceUpSpace::of(&config);
        let cap = multi_audience_scan(hand_size as u64, rotations as u64, hidden as u64);
        check_capacity(deck_size as u64, cap)?;
        Ok(TwoHiddenAudience { config, space })
    }

    fn unseen(&self) -> usize {
        (self.config.deck_size as usize) - self.config.shown_count()
    }
}

impl Strategy for TwoHiddenAudience {
    fn name(&self) -> String {
        "two-hidden-audience".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        let hidden = audience_hidden(&self.config, hand, hidden)?.unwrap();
        let shown = hand.without(&hidden)?;
        let positions: Vec<usize> = hidden
            .iter()
            .map(|&c| rank_excluding(c, &shown) as usize)
            .collect();
        let rank = combination_rank(self.unseen(), &positions);
        Ok(Encoded {
            message: self.space.arrange(&shown, rank)?,
            hidden,
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let rank = self.space.index_of(observed)?;
        let shown = observed.visible_cards();
        let positions = combination_unrank(self.unseen(), self.config.hidden_count, rank)
            .map_err(|_| super::unused_message(observed, self.naming()))?;
        positions
            .into_iter()
            .map(|p| {
                nth_excluding(self.config.deck_size, &shown, p as u128)
                    .ok_or_else(|| super::unused_message(observed, self.naming()))
            })
            .collect()
    }
}

fn line(cards: &[Card]) -> Message {
    Message::line(cards.iter().map(|&c| Placement::up(c, 0)).collect())
}

/// Four cards, three dealt, assistant hides two: show the card after the
/// missing one.
#[derive(Debug, Clone)]
pub struct TwoHiddenK3N4 {
    config: TrickConfig,
}

impl TwoHiddenK3N4 {
    pub fn new() -> Self {
        TwoHiddenK3N4 {
            config: TrickConfig::new(4, 3).with_hidden(2),
        }
    }
}

impl Default for TwoHiddenK3N4 {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for TwoHiddenK3N4 {
    fn name(&self) -> String {
        "two-hidden-k3n4".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let a = (0..4).find(|&v| !hand.contains(Card(v))).unwrap();
        let mut hidden = vec![Card((a + 2) % 4), Card((a + 3) % 4)];
        hidden.sort();
        Ok(Encoded {
            hidden,
            message: line(&[Card((a + 1) % 4)]),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let shown = observed.visible_cards()[0].0;
        let mut hidden = vec![Card((shown + 1) % 4), Card((shown + 2) % 4)];
        hidden.sort();
        Ok(hidden)
    }
}

/// Seven cards, four dealt, assistant hides two. The shown pair `(u, u+d)`
/// names the hidden pair by `d`; `d = 4` is never shown.
#[derive(Debug, Clone)]
pub struct TwoHiddenK4N7 {
    config: TrickConfig,
}

/// `(d, hidden offsets from the first shown card)`, in the order tried.
const K4N7_ROWS: [(i64, [i64; 2]); 5] = [
    (1, [2, 3]),
    (-1, [1, 3]),
    (2, [1, -2]),
    (3, [-3, -1]),
    (-2, [1, 3]),
];

fn mod7(v: i64) -> u32 {
    v.rem_euclid(7) as u32
}

impl TwoHiddenK4N7 {
    pub fn new() -> Self {
        TwoHiddenK4N7 {
            config: TrickConfig::new(7, 4).with_hidden(2),
        }
    }

    fn hidden_for(first: u32, d: i64) -> Option<[u32; 2]> {
        K4N7_ROWS
            .iter()
            .find(|(row, _)| mod7(*row) == mod7(d))
            .map(|(_, h)| [mod7(first as i64 + h[0]), mod7(first as i64 + h[1])])
    }
}

impl Default for TwoHiddenK4N7 {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for TwoHiddenK4N7 {
    fn name(&self) -> String {
        "two-hidden-k4n7".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        for (d, _) in K4N7_ROWS {
            for a in hand.cards() {
                let b = mod7(a.0 as i64 + d);
                let Some(h) = Self::hidden_for(a.0, d) else { continue };
                let shown = [a.0, b];
                let cards = shown.iter().chain(&h);
                let mut all: Vec<u32> = cards.copied().collect();
                all.sort();
                all.dedup();
                if all.len() == 4 && all.iter().all(|&v| hand.contains(Card(v))) {
                    let mut hidden = vec![Card(h[0]), Card(h[1])];
                    hidden.sort();
                    return Ok(Encoded {
                        hidden,
                        message: line(&[Card(a.0), Card(b)]),
                    });
                }
            }
        }
        unreachable!("the five rows cover every four-card hand mod 7")
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let v = observed.visible_cards();
        let d = v[1].0 as i64 - v[0].0 as i64;
        let h = Self::hidden_for(v[0].0, d)
            .ok_or_else(|| super::unused_message(observed, self.naming()))?;
        let mut hidden = vec![Card(h[0]), Card(h[1])];
        hidden.sort();
        Ok(hidden)
    }
}

/// The best trick applied twice: `a` is hidden as if it were the only
/// hidden card, then `b` is chosen among the other `K-1`. The arrangement
/// index is `qb * A + qa` with `A = ceil((N-K+1)/K)`.
#[derive(Debug, Clone)]
pub struct Bctm2 {
    config: TrickConfig,
    space: FaceUpSpace,
    a_range: u128,
}

impl Bctm2 {
    pub fn new(hand_size: usize, rotations: u32, deck_size: u32) -> Result<Self> {
        let config = TrickConfig::new(deck_size, hand_size)
            .with_rotations(rotations)
            .with_hidden(2);
        let cap = max_bctm_two_hidden(hand_size as u64, rotations as u64)?;
        check_capacity(deck_size as u64, cap.value_u64().unwrap_or(u64::MAX))?;
        config.validate()?;
        let a_range = (deck_size as u128 + 1 - hand_size as u128).div_ceil(hand_size as u128);
        Ok(Bctm2 {
            space: FaceUpSpace::of(&config),
            config,
            a_range,
        })
    }
}

impl Strategy for Bctm2 {
    fn name(&self) -> String {
        "bctm2".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let k = hand.len();
        let i = (hand.sum() % k as u64) as usize;
        let a = hand.cards()[i];
        let rest = hand.without(&[a])?;
        let j = (sum_mod(&rest, k as u64 - 1)) as usize;
        let b = rest[j];
        let shown = hand.without(&[a, b])?;
        let qa = (a.0 as u128 - i as u128) / k as u128;
        let qb = (b.0 as u128 - j as u128) / (k as u128 - 1);
        let mut hidden = vec![a, b];
        hidden.sort();
        Ok(Encoded {
            message: self.space.arrange(&shown, qb * self.a_range + qa)?,
            hidden,
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let n = self.config.deck_size;
        let k = self.config.hand_size as u64;
        let index = self.space.index_of(observed)?;
        let (qb, qa) = (index / self.a_range, index % self.a_range);
        let mut seen = observed.visible_cards();
        let tb = (k - 1 - sum_mod(&seen, k - 1)) % (k - 1);
        let b = nth_excluding(n, &seen, qb * (k as u128 - 1) + tb as u128)
            .ok_or_else(|| super::unused_message(observed, self.naming()))?;
        seen.push(b);
        let ta = (k - sum_mod(&seen, k)) % k;
        let a = nth_excluding(n, &seen, qa * k as u128 + ta as u128)
            .ok_or_else(|| super::unused_message(observed, self.naming()))?;
        let mut hidden = vec![a, b];
        hidden.sort();
        Ok(hidden)
    }
}
