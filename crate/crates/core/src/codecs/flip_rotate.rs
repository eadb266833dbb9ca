use super::cheney::Groups;
use super::{audience_hidden, check_capacity, check_hand, Encoded, Strategy};
use crate::combinatorics::{
    checked_pow, digits_to_number, factorial, number_to_digits, permutation_rank,
    permutation_unrank,
};
use crate::deck::{Card, Hand, Message, ObservedMessage, Placement, TrickConfig};
use crate::error::{Error, Result};

/// Mulcahy's method with rotations. The top `R^(K-1)` ids are specials,
/// shown by an all-face-down layout whose rotations spell the special's
/// index. Otherwise the leftmost face-up card names the group and the flip
/// pattern, face-up order and rotations spell the distance.
///
/// Flip patterns (face up = 1, leftmost bit most significant) are taken in
/// increasing binary order; a pattern with `i` face-up cards owns a block of
/// `(i-1)! * R^(K-1)` signals.
#[derive(Debug, Clone)]
pub struct FlipRotate {
    config: TrickConfig,
    groups: Groups,
    m: u128,
    rot: u128,
    regular: u32,
}

impl FlipRotate {
    pub fn new(hand_size: usize, rotations: u32, deck_size: u32) -> Result<Self> {
        let config = TrickConfig::new(deck_size, hand_size)
            .with_rotations(rotations)
            .with_flips(true);
        config.validate()?;
        let shown = hand_size - 1;
        let rot = checked_pow(rotations as u64, shown as u64).ok_or_else(|| Error::Overflow("rotations".into()))?;
        let mut m = 0u128;
        for pattern in 1u32..(1 << shown) {
            m += Self::block(pattern, rot)?;
        }
        let group = 2 * m + 1;
        let regular_cap = shown as u128 * group;
        check_capacity(deck_size as u64, (regular_cap + rot).min(u64::MAX as u128) as u64)?;
        let regular = regular_cap.min(deck_size as u128) as u32;
        Ok(FlipRotate {
            config,
            groups: Groups {
                size: u32::try_from(group).map_err(|_| Error::Overflow("group size".into()))?,
                limit: regular,
            },
            m,
            rot,
            regular,
        })
    }

    /// The four-card flip trick on ids 0..51; 51 is the special card.
    pub fn mulcahy4() -> Self {
        FlipRotate::new(4, 1, 52).expect("52 is the capacity for K=4")
    }

    fn block(pattern: u32, rot: u128) -> Result<u128> {
        let ups = pattern.count_ones() as u64;
        Ok(factorial(ups - 1).ok_or_else(|| Error::Overflow("block".into()))? * rot)
    }

    pub fn signal_capacity(&self) -> u128 {
        self.m
    }

    fn shown(&self) -> usize {
        self.config.hand_size - 1
    }

    fn is_up(&self, pattern: u32, pos: usize) -> bool {
        pattern >> (self.shown() - 1 - pos) & 1 == 1
    }

    fn layout(&self, signal: Card, others: &[Card], s: u128) -> Result<Message> {
        let r = self.config.rotations;
        let mut off = s - 1;
        let mut pattern = 1u32;
        loop {
            let b = Self::block(pattern, self.rot)?;
            if off < b {
                break;
            }
            off -= b;
            pattern += 1;
        }
        let digits = number_to_digits(off % self.rot, r, self.shown());
        let perm = off / self.rot;
        let ups = pattern.count_ones() as usize;
        let mut sorted = others.to_vec();
        sorted.sort();
        let (up_cards, down_cards) = sorted.split_at(ups - 1);
        let mut up_iter = std::iter::once(signal).chain(permutation_unrank(up_cards, perm)?);
        let mut down_iter = down_cards.iter().copied();
        let placed = (0..self.shown())
            .map(|pos| {
                if self.is_up(pattern, pos) {
                    Placement::up(up_iter.next().unwrap(), digits[pos])
                } else {
                    Placement::down(down_iter.next().unwrap(), digits[pos])
                }
            })
            .collect();
        Ok(Message::line(placed))
    }
}

impl Strategy for FlipRotate {
    fn name(&self) -> String {
        if self.config.hand_size == 4 && self.config.rotations == 1 && self.config.deck_size == 52 {
            "mulcahy4".into()
        } else {
            "flip-rotate".into()
        }
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        check_hand(&self.config, hand)?;
        audience_hidden(&self.config, hand, hidden)?;
        let cards = hand.cards();
        if let Some(&special) = cards.iter().rev().find(|c| c.0 >= self.regular) {
            let rest = hand.without(&[special])?;
            let digits = number_to_digits(
                (special.0 - self.regular) as u128,
                self.config.rotations,
                self.shown(),
            );
            let placed = rest
                .into_iter()
                .zip(digits)
                .map(|(c, r)| Placement::down(c, r))
                .collect();
            return Ok(Encoded {
                hidden: vec![special],
                message: Message::line(placed),
            });
        }
        let (a, b, s) = self
            .groups
            .pair(cards, self.m.min(u32::MAX as u128) as u32)
            .expect("K regular cards in K-1 groups share a group");
        let others = hand.without(&[a, b])?;
        Ok(Encoded {
            hidden: vec![b],
            message: self.layout(a, &others, s as u128)?,
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        let r = self.config.rotations;
        let rotations = observed.rotations();
        if observed.all_face_down() {
            let id = self.regular as u128 + digits_to_number(&rotations, r);
            if id >= self.config.deck_size as u128 {
                return Err(super::unused_message(observed, self.naming()));
            }
            return Ok(vec![Card(id as u32)]);
        }
        let pattern = observed
            .placed
            .iter()
            .fold(0u32, |acc, p| acc << 1 | p.orientation.is_up() as u32);
        let mut off = 0u128;
        for p in 1..pattern {
            off += Self::block(p, self.rot)?;
        }
        let visible = observed.visible_cards();
        off += permutation_rank(&visible[1..]) * self.rot + digits_to_number(&rotations, r);
        let s = off + 1;
        let signal = visible[0];
        if signal.0 >= self.regular || s > self.m {
            return Err(super::unused_message(observed, self.naming()));
        }
        let (_, len) = self.groups.bounds(signal);
        if s >= len as u128 {
            return Err(super::unused_message(observed, self.naming()));
        }
        Ok(vec![self.groups.step(signal, s as u32)])
    }

    fn reserved_violation(&self, hand: &Hand, encoded: &Encoded) -> Option<String> {
        let has_special = hand.cards().iter().any(|c| c.0 >= self.regular);
        let all_down = encoded.message.placed.iter().all(|p| !p.orientation.is_up());
        (has_special != all_down).then(|| {
            format!("all-face-down layout used = {all_down}, hand holds a special card = {has_special}")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::Observe;

    fn hand(ids: &[u32], codec: &FlipRotate) -> Hand {
        Hand::new(ids.iter().map(|&i| Card(i)).collect(), codec.config()).unwrap()
    }

    #[test]
    fn special_card_all_face_down() {
        let codec = FlipRotate::mulcahy4();
        let enc = codec.encode(&hand(&[10, 51, 20, 40], &codec), None).unwrap();
        assert_eq!(enc.hidden, vec![Card(51)]);
        assert_eq!(
            enc.message,
            Message::line(vec![
                Placement::down(Card(10), 0),
                Placement::down(Card(20), 0),
                Placement::down(Card(40), 0)
            ])
        );
        assert_eq!(codec.decode(&enc.message.observe()).unwrap(), vec![Card(51)]);
    }

    #[test]
    fn mulcahy_binary_patterns() {
        // A = 0 in group 0 and B = 0 + s; others 20 and 40 live in other groups.
        let codec = FlipRotate::mulcahy4();
        let expect = [
            (1, "ddu"),
            (2, "dud"),
            (3, "duu"),
            (4, "udd"),
            (5, "udu"),
            (6, "uud"),
            (7, "uuu"),
            (8, "uuu"),
        ];
        for (s, faces) in expect {
            let enc = codec.encode(&hand(&[0, s, 20, 40], &codec), None).unwrap();
            assert_eq!(enc.hidden, vec![Card(s)]);
            let got: String = enc
                .message
                .placed
                .iter()
                .map(|p| if p.orientation.is_up() { 'u' } else { 'd' })
                .collect();
            assert_eq!(got, faces, "S={s}");
            let first_up = enc.message.placed.iter().find(|p| p.orientation.is_up()).unwrap();
            assert_eq!(first_up.card, Card(0));
            if s >= 7 {
                let tail: Vec<Card> = enc.message.cards()[1..].to_vec();
                let ascending = tail[0] < tail[1];
                assert_eq!(ascending, s == 7);
            }
        }
    }

    #[test]
    fn rotations_name_specials() {
        let codec = FlipRotate::new(3, 2, 54).unwrap();
        assert_eq!(codec.regular, 50);
        let enc = codec.encode(&hand(&[1, 7, 51], &codec), None).unwrap();
        assert_eq!(enc.message.observe().rotations(), vec![0, 1]);
        assert!(FlipRotate::new(3, 2, 55).is_err());
    }
}
