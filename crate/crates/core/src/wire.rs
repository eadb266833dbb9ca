//! Canonical ASCII form of messages.
//!
//! `<A> <tok> <tok> ...` where `<A>` is `L` or `C` and each token is
//! `<idpart>:<f><r>`: the card id (decimal or a standard name such as `QH`),
//! or `?` for an observed face-down card; `f` is `u` or `d`; `r` is the
//! rotation. Circles are written from their canonical start.

use crate::deck::{Arrangement, Card, Message, ObservedMessage, ObservedPlacement, Orientation, Placement};
use crate::error::{Error, Result};
use crate::standard::StandardCard;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardNaming {
    /// Decimal ids, optionally shifted to 1-based on the wire.
    Numeric { one_based: bool },
    /// Standard card names, internal ids in Cheney order.
    Standard,
}

impl Default for CardNaming {
    fn default() -> Self {
        CardNaming::Numeric { one_based: false }
    }
}

impl CardNaming {
    pub fn format_card(self, card: Card) -> String {
        match self {
            CardNaming::Numeric { one_based: true } => (card.0 + 1).to_string(),
            CardNaming::Numeric { one_based: false } => card.0.to_string(),
            CardNaming::Standard => StandardCard::from_card(card)
                .map(|c| c.to_string())
                .unwrap_or_else(|_| card.0.to_string()),
        }
    }

    pub fn parse_card(self, s: &str) -> Result<Card> {
        match self {
            CardNaming::Standard => Ok(s.parse::<StandardCard>()?.card()),
            CardNaming::Numeric { one_based } => {
                let v: u32 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("`{s}` is not a card id")))?;
                if one_based {
                    v.checked_sub(1)
                        .map(Card)
                        .ok_or_else(|| Error::Parse("1-based ids start at 1".into()))
                } else {
                    Ok(Card(v))
                }
            }
        }
    }

    pub fn format_cards(self, cards: &[Card]) -> String {
        cards
            .iter()
            .map(|&c| self.format_card(c))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a whitespace- or comma-separated list of cards.
    pub fn parse_cards(self, s: &str) -> Result<Vec<Card>> {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_card(t))
            .collect()
    }
}

fn arrangement_tag(a: Arrangement) -> &'static str {
    match a {
        Arrangement::Line => "L",
        Arrangement::Circle => "C",
    }
}

fn token(id: String, o: Orientation) -> String {
    format!("{}:{}{}", id, if o.is_up() { 'u' } else { 'd' }, o.rotation)
}

pub fn serialize_message(m: &Message, naming: CardNaming) -> String {
    let m = m.clone().canonical();
    std::iter::once(arrangement_tag(m.arrangement).to_string())
        .chain(
            m.placed
                .iter()
                .map(|p| token(naming.format_card(p.card), p.orientation)),
        )
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn serialize_observed(m: &ObservedMessage, naming: CardNaming) -> String {
    let m = m.clone().canonical();
    std::iter::once(arrangement_tag(m.arrangement).to_string())
        .chain(m.placed.iter().map(|p| {
            let id = p.card.map_or_else(|| "?".to_string(), |c| naming.format_card(c));
            token(id, p.orientation)
        }))
        .collect::<Vec<_>>()
        .join(" ")
}

fn split_tokens(text: &str) -> Result<(Arrangement, Vec<(Option<&str>, Orientation)>)> {
    let mut parts = text.split_whitespace();
    let arrangement = match parts.next() {
        Some("L") | Some("l") => Arrangement::Line,
        Some("C") | Some("c") => Arrangement::Circle,
        other => {
            return Err(Error::Parse(format!(
                "message must start with L or C, found {:?}",
                other.unwrap_or("")
            )))
        }
    };
    let mut out = Vec::new();
    for tok in parts {
        let (id, rest) = tok
            .rsplit_once(':')
            .ok_or_else(|| Error::Parse(format!("token `{tok}` lacks `:`")))?;
        let mut chars = rest.chars();
        let face = match chars.next() {
            Some('u') | Some('U') => Orientation::up(0),
            Some('d') | Some('D') => Orientation::down(0),
            _ => return Err(Error::Parse(format!("token `{tok}` needs face u or d"))),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("token `{tok}` needs a rotation number")));
        }
        let rotation: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("rotation in `{tok}` too large")))?;
        let id = if id == "?" { None } else { Some(id) };
        out.push((
            id,
            Orientation {
                rotation,
                face: face.face,
            },
        ));
    }
    Ok((arrangement, out))
}

/// Parses a full (assistant-view) message; every card must carry an id.
pub fn parse_message(text: &str, naming: CardNaming) -> Result<Message> {
    let (arrangement, toks) = split_tokens(text)?;
    let placed = toks
        .into_iter()
        .map(|(id, orientation)| {
            let id = id.ok_or_else(|| Error::Parse("`?` is only valid in observed messages".into()))?;
            Ok(Placement {
                card: naming.parse_card(id)?,
                orientation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Message {
        arrangement,
        placed,
    }
    .canonical())
}

/// Parses what the magician sees. Ids given for face-down cards are dropped.
pub fn parse_observed(text: &str, naming: CardNaming) -> Result<ObservedMessage> {
    let (arrangement, toks) = split_tokens(text)?;
    let placed = toks
        .into_iter()
        .map(|(id, orientation)| {
            let card = match (id, orientation.is_up()) {
                (Some(id), true) => Some(naming.parse_card(id)?),
                (None, true) => return Err(Error::Parse("face-up card written as `?`".into())),
                (_, false) => None,
            };
            Ok(ObservedPlacement { card, orientation })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservedMessage {
        arrangement,
        placed,
    }
    .canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::Observe;

    const NUM: CardNaming = CardNaming::Numeric { one_based: false };

    #[test]
    fn line_observed_format() {
        let m = Message::line(vec![Placement::up(Card(12), 1), Placement::down(Card(3), 0)]);
        assert_eq!(serialize_message(&m, NUM), "L 12:u1 3:d0");
        assert_eq!(serialize_observed(&m.observe(), NUM), "L 12:u1 ?:d0");
    }

    #[test]
    fn circle_canonical_start() {
        let m = Message {
            arrangement: Arrangement::Circle,
            placed: vec![
                Placement::up(Card(4), 0),
                Placement::up(Card(6), 0),
                Placement::up(Card(2), 0),
            ],
        };
        assert_eq!(serialize_message(&m, NUM), "C 2:u0 4:u0 6:u0");
    }

    #[test]
    fn standard_names() {
        let qh: StandardCard = "QH".parse().unwrap();
        let m = Message::line(vec![Placement::up(qh.card(), 1)]);
        assert_eq!(serialize_message(&m, CardNaming::Standard), "L QH:u1");
        let parsed = parse_observed("L QH:u1 ?:d0", CardNaming::Standard).unwrap();
        assert_eq!(parsed.placed[0].card, Some(qh.card()));
        assert_eq!(parsed.placed[1].card, None);
    }

    #[test]
    fn one_based_shift() {
        let naming = CardNaming::Numeric { one_based: true };
        let m = Message::line(vec![Placement::up(Card(0), 0)]);
        assert_eq!(serialize_message(&m, naming), "L 1:u0");
        assert_eq!(parse_message("L 1:u0", naming).unwrap(), m);
        assert!(parse_message("L 0:u0", naming).is_err());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "X 1:u0", "L 1u0", "L 1:x0", "L 1:u", "L ?:u0"] {
            assert!(parse_observed(bad, NUM).is_err(), "{bad}");
        }
        assert!(parse_message("L ?:d0", NUM).is_err());
        assert_eq!(parse_observed("L", NUM).unwrap().placed.len(), 0);
    }

    #[test]
    fn observed_parse_drops_face_down_ids() {
        let a = parse_observed("L 12:u1 3:d0", NUM).unwrap();
        let b = parse_observed("L 12:u1 ?:d0", NUM).unwrap();
        assert_eq!(a, b);
    }
}
