//! Encoder/decoder pairs, one per protocol.
//!
//! `encode` is the assistant's side and sees the whole hand. `decode` is the
//! magician's side and only receives an [`ObservedMessage`].

mod audience;
mod best_trick;
mod cheney;
mod duplicates;
mod flip_audience;
mod flip_rotate;
mod multi;
mod registry;
mod three_card;

use crate::combinatorics::{
    digits_to_number, number_to_digits, permutation_rank, permutation_unrank,
};
use crate::deck::{Arrangement, Card, Chooser, Hand, Message, ObservedMessage, Placement, TrickConfig};
use crate::error::{Error, Result};
use crate::wire::CardNaming;

pub use audience::AudienceIndex;
pub use best_trick::BestTrick;
pub use cheney::Cheney;
pub use duplicates::{DupAudience, DupK3, DupSignal};
pub use flip_audience::FlipAudience7;
pub use flip_rotate::FlipRotate;
pub use multi::{Bctm2, TwoHiddenAudience, TwoHiddenK3N4, TwoHiddenK4N7};
pub use registry::{build_codec, CodecName, CodecParams};
pub use three_card::{SignalPlan, ThreeCard};

/// Result of the assistant's work: the cards kept back and the layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub hidden: Vec<Card>,
    pub message: Message,
}

pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    fn config(&self) -> &TrickConfig;

    fn naming(&self) -> CardNaming {
        CardNaming::default()
    }

    /// `hidden` must be given exactly when the audience chooses.
    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded>;

    /// Returns the hidden cards, sorted.
    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>>;

    /// Protocol-specific law on reserved messages, if the protocol has one.
    fn reserved_violation(&self, _hand: &Hand, _encoded: &Encoded) -> Option<String> {
        None
    }
}

/// Checks the hidden-card argument against the chooser and returns the
/// audience's choice, sorted.
pub(crate) fn audience_hidden(
    config: &TrickConfig,
    hand: &Hand,
    hidden: Option<&[Card]>,
) -> Result<Option<Vec<Card>>> {
    match (config.chooser, hidden) {
        (Chooser::Assistant, None) => Ok(None),
        (Chooser::Assistant, Some(_)) => Err(Error::HiddenNotAllowed),
        (Chooser::Audience, None) => Err(Error::HiddenRequired),
        (Chooser::Audience, Some(h)) => {
            if h.len() != config.hidden_count {
                return Err(Error::InvalidParameter(format!(
                    "expected {} hidden card(s), got {}",
                    config.hidden_count,
                    h.len()
                )));
            }
            hand.without(h)?;
            let mut h = h.to_vec();
            h.sort();
            Ok(Some(h))
        }
    }
}

pub(crate) fn check_hand(config: &TrickConfig, hand: &Hand) -> Result<()> {
    Hand::new(hand.cards().to_vec(), config).map(|_| ())
}

pub(crate) fn check_capacity(deck: u64, capacity: u64) -> Result<()> {
    if deck > capacity {
        Err(Error::Capacity { deck, capacity })
    } else {
        Ok(())
    }
}

/// The `rank`-th element (0-based) of `0..n` with `excluded` removed.
pub(crate) fn nth_excluding(n: u32, excluded: &[Card], rank: u128) -> Option<Card> {
    let mut ex: Vec<u32> = excluded.iter().map(|c| c.0).collect();
    ex.sort_unstable();
    ex.dedup();
    let mut v = u32::try_from(rank).ok()?;
    for e in ex {
        if e <= v {
            v += 1;
        }
    }
    (v < n).then_some(Card(v))
}

/// Position of `card` among `0..n` with `excluded` removed.
pub(crate) fn rank_excluding(card: Card, excluded: &[Card]) -> u128 {
    let below = excluded.iter().filter(|c| c.0 < card.0).count() as u128;
    card.0 as u128 - below
}

pub(crate) fn sum_mod(cards: &[Card], m: u64) -> u64 {
    cards.iter().map(|c| c.0 as u64).sum::<u64>() % m
}

/// Face-up arrangements of `m` distinct cards, with rotations.
///
/// Index layout: permutation rank times `R^m`, plus the rotation digits read
/// left to right in base `R`. A circle keeps its smallest card first and
/// ranks the order of the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct FaceUpSpace {
    pub shown: usize,
    pub rotations: u32,
    pub arrangement: Arrangement,
}

impl FaceUpSpace {
    pub fn of(config: &TrickConfig) -> Self {
        FaceUpSpace {
            shown: config.shown_count(),
            rotations: config.rotations,
            arrangement: config.arrangement,
        }
    }

    fn rotation_count(&self) -> Option<u128> {
        crate::combinatorics::checked_pow(self.rotations as u64, self.shown as u64)
    }

    #[cfg(test)]
    fn size(&self) -> Option<u128> {
        let free = match self.arrangement {
            Arrangement::Line => self.shown,
            Arrangement::Circle => self.shown.saturating_sub(1),
        };
        crate::combinatorics::factorial(free as u64)?.checked_mul(self.rotation_count()?)
    }

    pub fn arrange(&self, cards: &[Card], index: u128) -> Result<Message> {
        let rot = self.rotation_count().ok_or_else(|| Error::Overflow("rotations".into()))?;
        let digits = number_to_digits(index % rot, self.rotations, self.shown);
        let perm = index / rot;
        let mut sorted = cards.to_vec();
        sorted.sort();
        let order = match self.arrangement {
            Arrangement::Line => permutation_unrank(&sorted, perm)?,
            Arrangement::Circle => {
                let mut v = vec![sorted[0]];
                v.extend(permutation_unrank(&sorted[1..], perm)?);
                v
            }
        };
        let placed = order
            .into_iter()
            .zip(digits)
            .map(|(c, r)| Placement::up(c, r))
            .collect();
        Ok(match self.arrangement {
            Arrangement::Line => Message::line(placed),
            Arrangement::Circle => Message::circle(placed),
        })
    }

    /// Inverse of [`FaceUpSpace::arrange`]; expects a canonical message.
    pub fn index_of(&self, observed: &ObservedMessage) -> Result<u128> {
        let cards = observed.visible_cards();
        if cards.len() != self.shown {
            return Err(Error::InvalidMessage("face-down card in a face-up protocol".into()));
        }
        let rot = digits_to_number(&observed.rotations(), self.rotations);
        let perm = match self.arrangement {
            Arrangement::Line => permutation_rank(&cards),
            Arrangement::Circle if cards.is_empty() => 0,
            Arrangement::Circle => permutation_rank(&cards[1..]),
        };
        let size = self.rotation_count().ok_or_else(|| Error::Overflow("rotations".into()))?;
        Ok(perm * size + rot)
    }
}

pub(crate) fn unused_message(observed: &ObservedMessage, naming: CardNaming) -> Error {
    Error::UnusedMessage(crate::wire::serialize_observed(observed, naming))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::Observe;

    #[test]
    fn nth_excluding_skips() {
        let ex = [Card(0), Card(2), Card(8)];
        let got: Vec<u32> = (0..6).map(|r| nth_excluding(9, &ex, r).unwrap().0).collect();
        assert_eq!(got, vec![1, 3, 4, 5, 6, 7]);
        assert_eq!(nth_excluding(9, &ex, 6), None);
        assert_eq!(rank_excluding(Card(5), &ex), 3);
    }

    #[test]
    fn face_up_space_roundtrip() {
        for arrangement in [Arrangement::Line, Arrangement::Circle] {
            let space = FaceUpSpace {
                shown: 3,
                rotations: 2,
                arrangement,
            };
            let cards = [Card(7), Card(1), Card(4)];
            let n = space.size().unwrap();
            for i in 0..n {
                let m = space.arrange(&cards, i).unwrap();
                assert_eq!(space.index_of(&m.observe()).unwrap(), i);
            }
        }
    }
}
