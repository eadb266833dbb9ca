//! Cards, hands, table placements and the two views of a message.
//!
//! Abstract decks use 0-based ids. In a duplicate deck the id is the card's
//! value and each value occurs twice; copies are interchangeable, so a hand
//! is simply a sorted multiset of values.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Card(pub u32);

impl Card {
    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Face {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orientation {
    pub rotation: u32,
    pub face: Face,
}

impl Orientation {
    pub fn up(rotation: u32) -> Self {
        Orientation {
            rotation,
            face: Face::Up,
        }
    }

    pub fn down(rotation: u32) -> Self {
        Orientation {
            rotation,
            face: Face::Down,
        }
    }

    pub fn is_up(self) -> bool {
        self.face == Face::Up
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arrangement {
    Line,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chooser {
    Audience,
    Assistant,
}

/// Complete description of a trick variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrickConfig {
    pub deck_size: u32,
    pub hand_size: usize,
    pub rotations: u32,
    pub hidden_count: usize,
    pub arrangement: Arrangement,
    pub flips_allowed: bool,
    pub duplicates: bool,
    pub chooser: Chooser,
}

impl TrickConfig {
    /// A line, face-up, single-hidden-card, assistant-chooses trick with
    /// unrotated cards. Adjust with the builder methods.
    pub fn new(deck_size: u32, hand_size: usize) -> Self {
        TrickConfig {
            deck_size,
            hand_size,
            rotations: 1,
            hidden_count: 1,
            arrangement: Arrangement::Line,
            flips_allowed: false,
            duplicates: false,
            chooser: Chooser::Assistant,
        }
    }

    pub fn with_rotations(mut self, r: u32) -> Self {
        self.rotations = r;
        self
    }

    pub fn with_hidden(mut self, c: usize) -> Self {
        self.hidden_count = c;
        self
    }

    pub fn with_arrangement(mut self, a: Arrangement) -> Self {
        self.arrangement = a;
        self
    }

    pub fn with_flips(mut self, flips: bool) -> Self {
        self.flips_allowed = flips;
        self
    }

    pub fn with_duplicates(mut self, dup: bool) -> Self {
        self.duplicates = dup;
        self
    }

    pub fn with_chooser(mut self, chooser: Chooser) -> Self {
        self.chooser = chooser;
        self
    }

    /// Number of distinct card values (N, or N/2 for a duplicate deck).
    pub fn distinct_values(&self) -> u32 {
        if self.duplicates {
            self.deck_size / 2
        } else {
            self.deck_size
        }
    }

    /// Placements in every message.
    pub fn shown_count(&self) -> usize {
        self.hand_size - self.hidden_count
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.deck_size == 0 {
            return bad("deck size must be at least 1".into());
        }
        if self.hand_size == 0 {
            return bad("hand size must be at least 1".into());
        }
        if self.rotations == 0 {
            return bad("rotation count must be at least 1".into());
        }
        if self.hidden_count == 0 || self.hidden_count > self.hand_size {
            return bad(format!(
                "hidden count {} must be in 1..={}",
                self.hidden_count, self.hand_size
            ));
        }
        if self.hidden_count == self.hand_size && self.hand_size > 1 {
            return bad("at least one card must be shown".into());
        }
        if self.duplicates {
            if self.deck_size % 2 != 0 {
                return bad(format!("duplicate deck size {} must be even", self.deck_size));
            }
            if self.hand_size as u64 > 2 * self.distinct_values() as u64 {
                return bad("hand larger than the deck".into());
            }
        } else if self.hand_size as u64 > self.deck_size as u64 {
            return bad(format!(
                "hand size {} exceeds deck size {}",
                self.hand_size, self.deck_size
            ));
        }
        if self.arrangement == Arrangement::Circle && self.shown_count() < 1 {
            return bad("a circle needs at least one shown card".into());
        }
        Ok(())
    }
}

/// Sorted multiset of cards dealt to the assistant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hand(Vec<Card>);

impl Hand {
    /// Validates size, id range and multiplicities against `config`.
    pub fn new(mut cards: Vec<Card>, config: &TrickConfig) -> Result<Self> {
        cards.sort();
        if cards.len() != config.hand_size {
            return Err(Error::InvalidHand(format!(
                "expected {} cards, got {}",
                config.hand_size,
                cards.len()
            )));
        }
        let limit = config.distinct_values();
        if let Some(c) = cards.iter().find(|c| c.0 >= limit) {
            return Err(Error::InvalidHand(format!("card {c} outside deck 0..{limit}")));
        }
        let max_copies = if config.duplicates { 2 } else { 1 };
        for w in cards.windows(max_copies + 1) {
            if w.iter().all(|c| *c == w[0]) {
                return Err(Error::InvalidHand(format!(
                    "card {} appears more than {} time(s)",
                    w[0], max_copies
                )));
            }
        }
        Ok(Hand(cards))
    }

    /// Caller guarantees `cards` is sorted and valid.
    pub fn from_sorted(cards: Vec<Card>) -> Self {
        debug_assert!(cards.windows(2).all(|w| w[0] <= w[1]));
        Hand(cards)
    }

    pub fn cards(&self) -> &[Card] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, card: Card) -> bool {
        self.0.binary_search(&card).is_ok()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|c| c.0 as u64).sum()
    }

    /// Removes one copy of each card in `removed`; errors if one is missing.
    pub fn without(&self, removed: &[Card]) -> Result<Vec<Card>> {
        multiset_difference(&self.0, removed)
            .ok_or_else(|| Error::HiddenNotInHand(join_cards(removed)))
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_cards(&self.0))
    }
}

pub(crate) fn join_cards(cards: &[Card]) -> String {
    cards
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `a - b` as multisets; `None` if `b` is not contained in `a`.
pub fn multiset_difference(a: &[Card], b: &[Card]) -> Option<Vec<Card>> {
    let mut rest = a.to_vec();
    for c in b {
        let pos = rest.iter().position(|x| x == c)?;
        rest.remove(pos);
    }
    rest.sort();
    Some(rest)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub card: Card,
    pub orientation: Orientation,
}

impl Placement {
    pub fn up(card: Card, rotation: u32) -> Self {
        Placement {
            card,
            orientation: Orientation::up(rotation),
        }
    }

    pub fn down(card: Card, rotation: u32) -> Self {
        Placement {
            card,
            orientation: Orientation::down(rotation),
        }
    }
}

/// A placement as the magician sees it: face-down cards have no identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObservedPlacement {
    pub card: Option<Card>,
    pub orientation: Orientation,
}

/// The full arrangement produced by the assistant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Message {
    pub arrangement: Arrangement,
    pub placed: Vec<Placement>,
}

/// What the magician sees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObservedMessage {
    pub arrangement: Arrangement,
    pub placed: Vec<ObservedPlacement>,
}

pub trait Observe {
    fn observe(&self) -> ObservedMessage;
}

impl Observe for Message {
    fn observe(&self) -> ObservedMessage {
        ObservedMessage {
            arrangement: self.arrangement,
            placed: self
                .placed
                .iter()
                .map(|p| ObservedPlacement {
                    card: p.orientation.is_up().then_some(p.card),
                    orientation: p.orientation,
                })
                .collect(),
        }
        .canonical()
    }
}

impl Observe for ObservedMessage {
    fn observe(&self) -> ObservedMessage {
        ObservedMessage {
            arrangement: self.arrangement,
            placed: self
                .placed
                .iter()
                .map(|p| ObservedPlacement {
                    card: if p.orientation.is_up() { p.card } else { None },
                    orientation: p.orientation,
                })
                .collect(),
        }
        .canonical()
    }
}

/// Index of the canonical starting placement of a circle. Candidates are
/// the positions holding the smallest face-up card (all positions if every
/// card is face down); among those the lexicographically smallest visible
/// sequence wins, then `tie` breaks remaining ties.
fn canonical_start<T: Ord>(
    visible: &[ObservedPlacement],
    tie: impl Fn(usize) -> T,
) -> usize {
    let n = visible.len();
    if n == 0 {
        return 0;
    }
    let min_up = visible.iter().filter_map(|p| p.card).min();
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| min_up.is_none() || visible[i].card == min_up)
        .collect();
    let rotated = |s: usize| (0..n).map(move |j| visible[(s + j) % n]);
    *candidates
        .iter()
        .min_by(|&&a, &&b| match rotated(a).cmp(rotated(b)) {
            Ordering::Equal => tie(a).cmp(&tie(b)),
            o => o,
        })
        .unwrap()
}

impl Message {
    pub fn line(placed: Vec<Placement>) -> Self {
        Message {
            arrangement: Arrangement::Line,
            placed,
        }
    }

    pub fn circle(placed: Vec<Placement>) -> Self {
        Message {
            arrangement: Arrangement::Circle,
            placed,
        }
        .canonical()
    }

    /// Circle messages rotated to their canonical start; lines unchanged.
    pub fn canonical(mut self) -> Self {
        if self.arrangement == Arrangement::Circle {
            let visible = self.observe_raw();
            let n = self.placed.len();
            let ids: Vec<Card> = self.placed.iter().map(|p| p.card).collect();
            let start = canonical_start(&visible, |s| {
                (0..n).map(|j| ids[(s + j) % n]).collect::<Vec<_>>()
            });
            self.placed.rotate_left(start);
        }
        self
    }

    fn observe_raw(&self) -> Vec<ObservedPlacement> {
        self.placed
            .iter()
            .map(|p| ObservedPlacement {
                card: p.orientation.is_up().then_some(p.card),
                orientation: p.orientation,
            })
            .collect()
    }

    pub fn cards(&self) -> Vec<Card> {
        self.placed.iter().map(|p| p.card).collect()
    }
}

impl ObservedMessage {
    pub fn canonical(mut self) -> Self {
        if self.arrangement == Arrangement::Circle {
            let start = canonical_start(&self.placed, |_| ());
            self.placed.rotate_left(start);
        }
        self
    }

    /// Face-up cards in placement order.
    pub fn visible_cards(&self) -> Vec<Card> {
        self.placed.iter().filter_map(|p| p.card).collect()
    }

    pub fn face_down_count(&self) -> usize {
        self.placed.iter().filter(|p| !p.orientation.is_up()).count()
    }

    pub fn all_face_down(&self) -> bool {
        self.placed.iter().all(|p| !p.orientation.is_up())
    }

    pub fn rotations(&self) -> Vec<u32> {
        self.placed.iter().map(|p| p.orientation.rotation).collect()
    }

    /// Checks placement count, rotations, faces and card ids against `config`.
    pub fn validate(&self, config: &TrickConfig) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMessage(m));
        if self.arrangement != config.arrangement {
            return bad(format!("expected a {:?} arrangement", config.arrangement));
        }
        if self.placed.len() != config.shown_count() {
            return bad(format!(
                "expected {} placements, got {}",
                config.shown_count(),
                self.placed.len()
            ));
        }
        for p in &self.placed {
            if p.orientation.rotation >= config.rotations {
                return bad(format!(
                    "rotation {} outside 0..{}",
                    p.orientation.rotation, config.rotations
                ));
            }
            if !p.orientation.is_up() && !config.flips_allowed {
                return bad("face-down cards are not allowed".into());
            }
            match p.card {
                Some(c) if c.0 >= config.distinct_values() => {
                    return bad(format!("card {c} outside the deck"))
                }
                None if p.orientation.is_up() => return bad("face-up card without identity".into()),
                _ => {}
            }
        }
        let mut visible = self.visible_cards();
        visible.sort();
        let max_copies = if config.duplicates { 2 } else { 1 };
        for w in visible.windows(max_copies + 1) {
            if w.iter().all(|c| *c == w[0]) {
                return bad(format!("card {} shown too many times", w[0]));
            }
        }
        Ok(())
    }

    /// Compact exact key, used for collision accounting over large domains.
    pub fn key(&self) -> MessageKey {
        let words: Vec<u32> = self
            .placed
            .iter()
            .map(|p| {
                let id = p.card.map_or(0, |c| c.0 + 1);
                debug_assert!(id < (1 << 19) && p.orientation.rotation < (1 << 11));
                (id << 12) | (p.orientation.rotation << 1) | (!p.orientation.is_up()) as u32
            })
            .collect();
        MessageKey::pack(&words)
    }
}

/// Exact packed identity of a small sequence of words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MessageKey {
    Small(u128),
    Large(Vec<u32>),
}

impl MessageKey {
    pub fn pack(words: &[u32]) -> Self {
        if words.len() <= 4 && words.iter().all(|&w| w < (1 << 31)) {
            let mut v = words.len() as u128;
            for &w in words {
                v = (v << 31) | w as u128;
            }
            MessageKey::Small(v)
        } else {
            MessageKey::Large(words.to_vec())
        }
    }

    pub fn of_cards(cards: &[Card]) -> Self {
        let words: Vec<u32> = cards.iter().map(|c| c.0).collect();
        MessageKey::pack(&words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: u32, r: u32) -> Placement {
        Placement::up(Card(c), r)
    }

    #[test]
    fn observe_erases_face_down_only() {
        let m = Message::line(vec![up(12, 1), Placement::down(Card(3), 0)]);
        let o = m.observe();
        assert_eq!(o.placed[0].card, Some(Card(12)));
        assert_eq!(o.placed[1].card, None);
        assert_eq!(o.placed[1].orientation, Orientation::down(0));
    }

    #[test]
    fn observe_identity_for_face_up() {
        let m = Message::line(vec![up(4, 0), up(6, 1), up(2, 0)]);
        let o = m.observe();
        assert_eq!(o.visible_cards(), vec![Card(4), Card(6), Card(2)]);
        assert_eq!(o.observe(), o);
    }

    #[test]
    fn all_face_down_keeps_rotations() {
        let m = Message::line(vec![
            Placement::down(Card(1), 1),
            Placement::down(Card(5), 0),
            Placement::down(Card(9), 2),
        ]);
        let o = m.observe();
        assert!(o.all_face_down());
        assert_eq!(o.rotations(), vec![1, 0, 2]);
        assert!(o.visible_cards().is_empty());
    }

    #[test]
    fn circle_starts_at_smallest_face_up() {
        let m = Message::circle(vec![up(4, 0), up(6, 0), up(2, 0)]);
        assert_eq!(m.cards(), vec![Card(2), Card(4), Card(6)]);
        let shifted = Message::circle(vec![up(6, 0), up(2, 0), up(4, 0)]);
        assert_eq!(m, shifted);
    }

    #[test]
    fn circle_all_face_down_uses_smallest_rotation_sequence() {
        let o = ObservedMessage {
            arrangement: Arrangement::Circle,
            placed: [2, 0, 1]
                .iter()
                .map(|&r| ObservedPlacement {
                    card: None,
                    orientation: Orientation::down(r),
                })
                .collect(),
        }
        .canonical();
        assert_eq!(o.rotations(), vec![0, 1, 2]);
    }

    #[test]
    fn hand_validation() {
        let cfg = TrickConfig::new(8, 3);
        assert!(Hand::new(vec![Card(1), Card(1), Card(2)], &cfg).is_err());
        assert!(Hand::new(vec![Card(1), Card(8), Card(2)], &cfg).is_err());
        assert!(Hand::new(vec![Card(1), Card(2)], &cfg).is_err());
        let dup = TrickConfig::new(8, 3).with_duplicates(true);
        assert!(Hand::new(vec![Card(1), Card(1), Card(2)], &dup).is_ok());
        assert!(Hand::new(vec![Card(1), Card(1), Card(1)], &dup).is_err());
        assert!(Hand::new(vec![Card(1), Card(4), Card(2)], &dup).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrickConfig::new(7, 3).validate().is_ok());
        assert!(TrickConfig::new(7, 0).validate().is_err());
        assert!(TrickConfig::new(3, 4).validate().is_err());
        assert!(TrickConfig::new(7, 3).with_duplicates(true).validate().is_err());
        assert!(TrickConfig::new(7, 3).with_hidden(3).validate().is_err());
        assert!(TrickConfig::new(2, 2)
            .with_arrangement(Arrangement::Circle)
            .validate()
            .is_ok());
    }

    #[test]
    fn keys_distinguish_faces_and_rotations() {
        let a = Message::line(vec![up(3, 0), Placement::down(Card(5), 1)]).observe();
        let b = Message::line(vec![up(3, 0), Placement::down(Card(7), 1)]).observe();
        let c = Message::line(vec![up(3, 1), Placement::down(Card(7), 1)]).observe();
        assert_eq!(a.key(), b.key());
        assert_ne!(a.key(), c.key());
    }
}
