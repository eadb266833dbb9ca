use super::{
    audience_hidden, check_capacity, check_hand, nth_excluding, rank_excluding, Encoded,
    FaceUpSpace, Strategy,
};
use crate::bounds::{max_circle_audience, max_line_audience};
use crate::deck::{Arrangement, Card, Chooser, Hand, ObservedMessage, TrickConfig};
use crate::error::{Error, Result};

/// Audience picks one card; the arrangement index is the hidden card's rank
/// among the cards not on the table.
#[derive(Debug, Clone)]
pub struct AudienceIndex {
    config: TrickConfig,
    space: FaceUpSpace,
}

impl AudienceIndex {
    pub fn new(deck_size: u32, hand_size: usize, rotations: u32, arrangement: Arrangement) -> Result<Self> {
        let config = TrickConfig::new(deck_size, hand_size)
            .with_rotations(rotations)
            .with_arrangement(arrangement)
            .with_chooser(Chooser::Audience);
        config.validate()?;
        let (k, r) = (hand_size as u64, rotations as u64);
        let cap = match arrangement {
            Arrangement::Line => max_line_audience(k, r)?,
            Arrangement::Circle => max_circle_audience(k, r)?,
        };
        check_capacity(deck_size as u64, cap.value_u64().unwrap_or(u64::MAX))?;
        Ok(AudienceIndex {
            space: FaceUpSpace::of(&config),
            config,
        })
    }
}

impl Strategy for AudienceIndex {
    fn name(&self) -> String {
        match self.config.arrangement {
            Arrangement::Line => "audience-line".into(),
            Arrangement::Circle => "audience-circle".into(),
        }
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        let hidden = audience_hidden(&self.config, hand, hidden)?.unwrap();
        let shown = hand.without(&hidden)?;
        let rank = rank_excluding(hidden[0], &shown);
        Ok(Encoded {
            message: self.space.arrange(&shown, rank)?,
            hidden,
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let rank = self.space.index_of(observed)?;
        let shown = observed.visible_cards();
        nth_excluding(self.config.deck_size, &shown, rank)
            .map(|c| vec![c])
            .ok_or_else(|| Error::InvalidMessage(format!("signal {rank} exceeds the deck")))
    }
}
