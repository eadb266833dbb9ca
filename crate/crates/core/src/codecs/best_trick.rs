use super::{
    audience_hidden, check_capacity, check_hand, nth_excluding, sum_mod, Encoded, FaceUpSpace,
    Strategy,
};
use crate::bounds::{max_circle_assistant, max_line_assistant};
use crate::deck::{Arrangement, Card, Hand, ObservedMessage, TrickConfig};
use crate::error::{Error, Result};

/// Hide `c_i` with `i` the hand sum mod `K`; the visible sum gives the
/// residue of the hidden card's rank and the arrangement gives the quotient.
#[derive(Debug, Clone)]
pub struct BestTrick {
    config: TrickConfig,
    space: FaceUpSpace,
}

impl BestTrick {
    pub fn new(deck_size: u32, hand_size: usize, rotations: u32, arrangement: Arrangement) -> Result<Self> {
        let config = TrickConfig::new(deck_size, hand_size)
            .with_rotations(rotations)
            .with_arrangement(arrangement);
        config.validate()?;
        let (k, r) = (hand_size as u64, rotations as u64);
        let cap = match arrangement {
            Arrangement::Line => max_line_assistant(k, r)?,
            Arrangement::Circle => max_circle_assistant(k, r)?,
        };
        check_capacity(deck_size as u64, cap.value_u64().unwrap_or(u64::MAX))?;
        Ok(BestTrick {
            space: FaceUpSpace::of(&config),
            config,
        })
    }

    /// Index of the card the protocol hides.
    pub fn hidden_index(hand: &Hand) -> usize {
        (hand.sum() % hand.len() as u64) as usize
    }
}

impl Strategy for BestTrick {
    fn name(&self) -> String {
        match self.config.arrangement {
            Arrangement::Line => "best-trick".into(),
            Arrangement::Circle => "best-trick-circle".into(),
        }
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let k = hand.len() as u128;
        let i = Self::hidden_index(hand);
        let c = hand.cards()[i];
        let shown = hand.without(&[c])?;
        let v = c.0 as u128 - i as u128;
        Ok(Encoded {
            message: self.space.arrange(&shown, v / k)?,
            hidden: vec![c],
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let k = self.config.hand_size as u64;
        let q = self.space.index_of(observed)?;
        let shown = observed.visible_cards();
        let t = (k - sum_mod(&shown, k)) % k;
        let v = q * k as u128 + t as u128;
        nth_excluding(self.config.deck_size, &shown, v)
            .map(|c| vec![c])
            .ok_or_else(|| Error::InvalidMessage(format!("signal {v} exceeds the deck")))
    }
}
