use super::{audience_hidden, check_capacity, check_hand, Encoded, Strategy};
use crate::deck::{Card, Hand, Message, ObservedMessage, Placement, TrickConfig};
use crate::error::{Error, Result};
use crate::standard::{StandardCard, Suit};
use crate::wire::CardNaming;

/// The numbers a three-card message carries: `s = 4*flipping + rotating + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignalPlan {
    pub signaling: u32,
    pub flipping: u32,
    pub rotating: u32,
}

impl SignalPlan {
    pub fn from_signal(s: u32) -> Self {
        SignalPlan {
            signaling: s,
            flipping: (s - 1) / 4,
            rotating: (s - 1) % 4,
        }
    }

    pub fn from_parts(flipping: u32, rotating: u32) -> Self {
        SignalPlan {
            signaling: 4 * flipping + rotating + 1,
            flipping,
            rotating,
        }
    }
}

/// Three cards from a standard deck, two shown, cards may be turned over and
/// turned end for end. Rotation digit 1 means upright, 0 means rotated.
#[derive(Debug, Clone)]
pub struct ThreeCard {
    config: TrickConfig,
}

impl ThreeCard {
    pub fn new() -> Self {
        ThreeCard {
            config: TrickConfig::new(52, 3).with_rotations(2).with_flips(true),
        }
    }

    /// Only the standard 52-card deck is supported.
    pub fn with_deck(deck_size: u32) -> Result<Self> {
        check_capacity(deck_size as u64, 52)?;
        if deck_size != 52 {
            return Err(Error::InvalidConfig("the three-card trick uses the 52-card deck".into()));
        }
        Ok(Self::new())
    }

    /// Hidden card, signaling card, other card and the plan, for a hand
    /// without aces.
    pub fn plan(hand: &[StandardCard]) -> Option<(StandardCard, StandardCard, StandardCard, SignalPlan)> {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (p, q) = (hand[i], hand[j]);
            if p.suit.is_red() != q.suit.is_red() {
                continue;
            }
            let other = hand[3 - i - j];
            let (hi, lo) = if p.rank.value() >= q.rank.value() { (p, q) } else { (q, p) };
            let diff = (hi.rank.value() - lo.rank.value()) as u32;
            return Some(if p.suit == q.suit {
                (hi, lo, other, SignalPlan::from_signal(diff))
            } else {
                (lo, hi, other, SignalPlan::from_signal(12 - diff))
            });
        }
        None
    }
}

impl Default for ThreeCard {
    fn default() -> Self {
        Self::new()
    }
}

fn std_cards(cards: &[Card]) -> Result<Vec<StandardCard>> {
    cards.iter().map(|&c| StandardCard::from_card(c)).collect()
}

fn bits(value: u32) -> [u32; 2] {
    [value >> 1 & 1, value & 1]
}

impl Strategy for ThreeCard {
    fn name(&self) -> String {
        "three-card".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn naming(&self) -> CardNaming {
        CardNaming::Standard
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let cards = std_cards(hand.cards())?;
        if let Some(ace) = cards
            .iter()
            .filter(|c| c.rank.is_ace())
            .min_by_key(|c| c.suit.three_card_code())
        {
            let rest = hand.without(&[ace.card()])?;
            let [r0, r1] = bits(ace.suit.three_card_code());
            return Ok(Encoded {
                hidden: vec![ace.card()],
                message: Message::line(vec![
                    Placement::down(rest[0], r0),
                    Placement::down(rest[1], r1),
                ]),
            });
        }
        let (hidden, signal, other, plan) =
            Self::plan(&cards).expect("two of three cards share a color");
        let [r0, r1] = bits(plan.rotating);
        let (sig, oth) = (signal.card(), other.card());
        let placed = match plan.flipping {
            0 => vec![Placement::up(sig, r0), Placement::up(oth, r1)],
            1 => vec![Placement::up(sig, r0), Placement::down(oth, r1)],
            _ => vec![Placement::down(oth, r0), Placement::up(sig, r1)],
        };
        Ok(Encoded {
            hidden: vec![hidden.card()],
            message: Message::line(placed),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let rot = observed.rotations();
        let rotating = rot[0] << 1 | rot[1];
        if observed.all_face_down() {
            let suit = Suit::THREE_CARD_ORDER[rotating as usize];
            return Ok(vec![StandardCard::new(1, suit)?.card()]);
        }
        let up: Vec<bool> = observed.placed.iter().map(|p| p.orientation.is_up()).collect();
        let flipping = (!up[0]) as u32 * 2 + (!up[1]) as u32;
        let plan = SignalPlan::from_parts(flipping, rotating);
        let signal = StandardCard::from_card(observed.visible_cards()[0])?;
        let v = signal.rank.value() as u32;
        if signal.rank.is_ace() {
            return Err(super::unused_message(observed, self.naming()));
        }
        let (value, suit) = if v + plan.signaling <= 13 {
            (v + plan.signaling, signal.suit)
        } else {
            (v + plan.signaling - 12, signal.suit.partner())
        };
        if value < 2 || value > 13 || plan.signaling > 12 {
            return Err(super::unused_message(observed, self.naming()));
        }
        Ok(vec![StandardCard::new(value as u8, suit)?.card()])
    }

    fn reserved_violation(&self, _hand: &Hand, encoded: &Encoded) -> Option<String> {
        let ace_hidden = StandardCard::from_card(encoded.hidden[0]).ok()?.rank.is_ace();
        let all_down = encoded.message.placed.iter().all(|p| !p.orientation.is_up());
        (ace_hidden != all_down).then(|| {
            format!("both cards face down = {all_down}, hidden card is an ace = {ace_hidden}")
        })
    }
}
