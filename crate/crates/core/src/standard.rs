//! The standard 52-card deck and its two numbering schemes.
//!
//! `CheneyOrder` numbers the whole deck: clubs A..K = 0..12, then hearts,
//! diamonds and spades. This is also the internal id of a standard card in
//! every codec. `ThreeCardOrder` gives each card a value inside its suit
//! (2..13, with the ace as 1) and a suit code H=0, D=1, C=2, S=3.

use std::fmt;
use std::str::FromStr;

use crate::deck::Card;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suit {
    Clubs,
    Hearts,
    Diamonds,
    Spades,
}

impl Suit {
    pub const CHENEY_ORDER: [Suit; 4] = [Suit::Clubs, Suit::Hearts, Suit::Diamonds, Suit::Spades];
    pub const THREE_CARD_ORDER: [Suit; 4] =
        [Suit::Hearts, Suit::Diamonds, Suit::Clubs, Suit::Spades];

    pub fn letter(self) -> char {
        match self {
            Suit::Clubs => 'C',
            Suit::Hearts => 'H',
            Suit::Diamonds => 'D',
            Suit::Spades => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Suit> {
        match c.to_ascii_uppercase() {
            'C' => Some(Suit::Clubs),
            'H' => Some(Suit::Hearts),
            'D' => Some(Suit::Diamonds),
            'S' => Some(Suit::Spades),
            _ => None,
        }
    }

    pub fn cheney_index(self) -> u32 {
        Suit::CHENEY_ORDER.iter().position(|&s| s == self).unwrap() as u32
    }

    pub fn three_card_code(self) -> u32 {
        Suit::THREE_CARD_ORDER.iter().position(|&s| s == self).unwrap() as u32
    }

    pub fn is_red(self) -> bool {
        matches!(self, Suit::Hearts | Suit::Diamonds)
    }

    /// The other suit of the same color.
    pub fn partner(self) -> Suit {
        match self {
            Suit::Hearts => Suit::Diamonds,
            Suit::Diamonds => Suit::Hearts,
            Suit::Clubs => Suit::Spades,
            Suit::Spades => Suit::Clubs,
        }
    }
}

/// Rank 1 (ace) through 13 (king).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(u8);

impl Rank {
    pub fn new(value: u8) -> Result<Self> {
        if (1..=13).contains(&value) {
            Ok(Rank(value))
        } else {
            Err(Error::InvalidCard(format!("rank {value} outside 1..=13")))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_ace(self) -> bool {
        self.0 == 1
    }

    fn token(self) -> &'static str {
        ["A", "2", "3", "4", "5", "6", "7", "8", "9", "10", "J", "Q", "K"][self.0 as usize - 1]
    }

    fn from_token(s: &str) -> Option<Rank> {
        let v = match s.to_ascii_uppercase().as_str() {
            "A" => 1,
            "J" => 11,
            "Q" => 12,
            "K" => 13,
            n => n.parse::<u8>().ok().filter(|v| (2..=10).contains(v))?,
        };
        Some(Rank(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StandardCard {
    pub rank: Rank,
    pub suit: Suit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdScheme {
    CheneyOrder,
    ThreeCardOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardId {
    Cheney(u32),
    ThreeCard { value: u8, suit: u32 },
}

pub fn standard_id(rank: Rank, suit: Suit, scheme: IdScheme) -> StandardId {
    let card = StandardCard { rank, suit };
    match scheme {
        IdScheme::CheneyOrder => StandardId::Cheney(card.cheney_id()),
        IdScheme::ThreeCardOrder => StandardId::ThreeCard {
            value: rank.value(),
            suit: suit.three_card_code(),
        },
    }
}

impl StandardCard {
    pub fn new(rank: u8, suit: Suit) -> Result<Self> {
        Ok(StandardCard {
            rank: Rank::new(rank)?,
            suit,
        })
    }

    pub fn cheney_id(self) -> u32 {
        self.suit.cheney_index() * 13 + self.rank.value() as u32 - 1
    }

    pub fn from_cheney_id(id: u32) -> Result<Self> {
        if id >= 52 {
            return Err(Error::InvalidCard(format!("standard card id {id} outside 0..52")));
        }
        Ok(StandardCard {
            rank: Rank((id % 13) as u8 + 1),
            suit: Suit::CHENEY_ORDER[(id / 13) as usize],
        })
    }

    pub fn card(self) -> Card {
        Card(self.cheney_id())
    }

    pub fn from_card(card: Card) -> Result<Self> {
        Self::from_cheney_id(card.0)
    }
}

impl fmt::Display for StandardCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.rank.token(), self.suit.letter())
    }
}

impl FromStr for StandardCard {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let invalid = || Error::InvalidCard(format!("`{s}` is not a card name like QH or 10S"));
        let suit_char = s.chars().last().ok_or_else(invalid)?;
        let suit = Suit::from_letter(suit_char).ok_or_else(invalid)?;
        let rank = Rank::from_token(&s[..s.len() - suit_char.len_utf8()]).ok_or_else(invalid)?;
        Ok(StandardCard { rank, suit })
    }
}
