use super::{audience_hidden, check_capacity, check_hand, Encoded, Strategy};
use crate::deck::{Card, Chooser, Hand, Message, ObservedMessage, Placement, TrickConfig};
use crate::error::Result;

/// Seven cards, three dealt, audience hides one, cards may be turned over.
/// All arithmetic is mod 7 and the all-face-down message is never used.
#[derive(Debug, Clone)]
pub struct FlipAudience7 {
    config: TrickConfig,
}

fn add(a: u32, d: i64) -> u32 {
    (a as i64 + d).rem_euclid(7) as u32
}

/// Display orders for the six pairs that contain neither `b-1` nor `b-3`.
const PAIRS: [(i64, i64); 6] = [(-2, 1), (-2, 2), (3, -2), (2, 1), (3, 1), (2, 3)];

impl FlipAudience7 {
    pub fn new() -> Self {
        FlipAudience7 {
            config: TrickConfig::new(7, 3)
                .with_flips(true)
                .with_chooser(Chooser::Audience),
        }
    }

    pub fn with_deck(deck_size: u32) -> Result<Self> {
        check_capacity(deck_size as u64, 7)?;
        if deck_size != 7 {
            return Err(crate::Error::InvalidConfig("this strategy is defined for 7 cards".into()));
        }
        Ok(Self::new())
    }
}

impl Default for FlipAudience7 {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for FlipAudience7 {
    fn name(&self) -> String {
        "flip-audience-7".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        let hidden = audience_hidden(&self.config, hand, hidden)?.unwrap();
        let b = hidden[0].0;
        let rest = hand.without(&hidden)?;
        let has = |v: u32| rest.iter().any(|c| c.0 == v);
        let other = |v: u32| *rest.iter().find(|c| c.0 != v).unwrap();
        let placed = if has(add(b, -1)) {
            let a = Card(add(b, -1));
            vec![Placement::down(other(a.0), 0), Placement::up(a, 0)]
        } else if has(add(b, -3)) {
            let a = Card(add(b, -3));
            vec![Placement::up(a, 0), Placement::down(other(a.0), 0)]
        } else {
            let (x, y) = PAIRS
                .iter()
                .map(|&(dx, dy)| (add(b, dx), add(b, dy)))
                .find(|&(x, y)| has(x) && has(y))
                .expect("the six pairs cover every remaining case");
            vec![Placement::up(Card(x), 0), Placement::up(Card(y), 0)]
        };
        Ok(Encoded {
            hidden,
            message: Message::line(placed),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let p = &observed.placed;
        let hidden = match (p[0].card, p[1].card) {
            (None, Some(a)) => add(a.0, 1),
            (Some(a), None) => add(a.0, 3),
            (Some(a), Some(c)) => {
                let d = (c.0 as i64 - a.0 as i64).rem_euclid(7);
                match d {
                    1 | 6 => add(a.0, 5),
                    2 | 5 => add(a.0, 4),
                    _ => add(a.0, 2),
                }
            }
            (None, None) => return Err(super::unused_message(observed, self.naming())),
        };
        Ok(vec![Card(hidden)])
    }

    fn reserved_violation(&self, _hand: &Hand, encoded: &Encoded) -> Option<String> {
        encoded
            .message
            .placed
            .iter()
            .all(|p| !p.orientation.is_up())
            .then(|| "all-face-down message emitted".to_string())
    }
}
