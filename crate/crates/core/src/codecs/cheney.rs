use super::{audience_hidden, check_capacity, check_hand, Encoded, Strategy};
use crate::combinatorics::{factorial, permutation_rank, permutation_unrank};
use crate::deck::{Card, Hand, Message, ObservedMessage, Placement, TrickConfig};
use crate::error::{Error, Result};
use crate::wire::CardNaming;

/// Consecutive blocks of `size` ids over `0..limit`; the last may be short.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Groups {
    pub size: u32,
    pub limit: u32,
}

impl Groups {
    pub fn bounds(&self, card: Card) -> (u32, u32) {
        let start = card.0 / self.size * self.size;
        (start, (start + self.size).min(self.limit) - start)
    }

    /// Picks the lowest group holding two of `cards` and orients the pair so
    /// that the hidden one is `s` steps after the shown one, `1 <= s <= m`.
    /// Returns `(shown, hidden, s)`.
    pub fn pair(&self, cards: &[Card], m: u32) -> Option<(Card, Card, u32)> {
        let mut sorted = cards.to_vec();
        sorted.sort();
        let w = sorted
            .windows(2)
            .find(|w| w[0].0 / self.size == w[1].0 / self.size)?;
        let (a, b) = (w[0], w[1]);
        let (_, len) = self.bounds(a);
        let d = b.0 - a.0;
        if d <= m {
            Some((a, b, d))
        } else {
            Some((b, a, len - d))
        }
    }

    pub fn step(&self, from: Card, s: u32) -> Card {
        let (start, len) = self.bounds(from);
        Card(start + (from.0 - start + s) % len)
    }
}

/// Cheney's method: `K-1` groups of `2(K-2)!+1` cards, the leftmost card
/// names the group and the order of the remaining cards gives the distance.
#[derive(Debug, Clone)]
pub struct Cheney {
    config: TrickConfig,
    groups: Groups,
    m: u32,
    naming: CardNaming,
}

impl Cheney {
    pub fn new(hand_size: usize, deck_size: u32) -> Result<Self> {
        if hand_size < 2 {
            return Err(Error::InvalidParameter("Cheney's method needs K >= 2".into()));
        }
        let config = TrickConfig::new(deck_size, hand_size);
        config.validate()?;
        let m = factorial(hand_size as u64 - 2)
            .and_then(|f| u32::try_from(f).ok())
            .ok_or_else(|| Error::Overflow("signal range".into()))?;
        let size = 2 * m + 1;
        check_capacity(deck_size as u64, (hand_size as u64 - 1) * size as u64)?;
        Ok(Cheney {
            config,
            groups: Groups {
                size,
                limit: deck_size,
            },
            m,
            naming: CardNaming::default(),
        })
    }

    /// The classic five-card trick on a standard deck; groups are suits.
    pub fn classic() -> Self {
        let mut c = Cheney::new(5, 52).expect("52 fits four suits of 13");
        c.naming = CardNaming::Standard;
        c
    }
}

impl Strategy for Cheney {
    fn name(&self) -> String {
        if self.naming == CardNaming::Standard {
            "cheney5".into()
        } else {
            format!("cheney-k{}", self.config.hand_size)
        }
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn naming(&self) -> CardNaming {
        self.naming
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let (a, b, s) = self
            .groups
            .pair(hand.cards(), self.m)
            .expect("K cards in K-1 groups share a group");
        let rest = hand.without(&[a, b])?;
        let mut placed = vec![Placement::up(a, 0)];
        placed.extend(
            permutation_unrank(&rest, (s - 1) as u128)?
                .into_iter()
                .map(|c| Placement::up(c, 0)),
        );
        Ok(Encoded {
            hidden: vec![b],
            message: Message::line(placed),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let cards = observed.visible_cards();
        let s = permutation_rank(&cards[1..]) as u32 + 1;
        if s > self.m {
            return Err(super::unused_message(observed, self.naming));
        }
        Ok(vec![self.groups.step(cards[0], s)])
    }
}
