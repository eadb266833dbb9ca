//! Decoder labelings for protocols whose messages can hide card identities.
//!
//! A face-down card makes one observed message reachable from many shown
//! sets, so per-set counting no longer decides feasibility. Instead each
//! observed message gets at most one hidden label and every hand (or every
//! audience choice) needs a reachable message carrying the right label.

use std::collections::HashMap;

use super::cdcl::{Lit, Solver};

use super::enumerate::{observed_arrangements, sub_multisets};
use crate::deck::{Card, Chooser, Hand, Message, ObservedMessage, TrickConfig};
use crate::deck::multiset_difference;
use crate::error::Result;

/// Observed messages interned per shown multiset, with a full message for each.
#[derive(Default)]
pub(crate) struct MessageBook {
    pub observed: Vec<ObservedMessage>,
    ids: HashMap<ObservedMessage, u32>,
    per_shown: HashMap<Vec<Card>, Vec<(u32, Message)>>,
}

impl MessageBook {
    pub fn shown(&mut self, config: &TrickConfig, shown: &[Card]) -> &[(u32, Message)] {
        if !self.per_shown.contains_key(shown) {
            let list = observed_arrangements(config, shown)
                .into_iter()
                .map(|(o, m)| {
                    let next = self.observed.len() as u32;
                    let id = *self.ids.entry(o.clone()).or_insert(next);
                    if id == next {
                        self.observed.push(o);
                    }
                    (id, m)
                })
                .collect();
            self.per_shown.insert(shown.to_vec(), list);
        }
        &self.per_shown[shown]
    }
}

/// Every (hidden, shown) split of a hand.
pub(crate) fn splits(config: &TrickConfig, hand: &Hand) -> Vec<(Vec<Card>, Vec<Card>)> {
    sub_multisets(hand.cards(), config.hidden_count)
        .into_iter()
        .map(|h| {
            let s = multiset_difference(hand.cards(), &h).expect("sub-multiset of the hand");
            (h, s)
        })
        .collect()
}

fn at_most_one(solver: &mut Solver, lits: &[Lit]) {
    if lits.len() <= 6 {
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                solver.add_clause(&[!lits[i], !lits[j]]);
            }
        }
        return;
    }
    // Sequential counter: s_i means one of the first i+1 literals is true.
    let s: Vec<Lit> = (0..lits.len() - 1).map(|_| solver.new_lit()).collect();
    solver.add_clause(&[!lits[0], s[0]]);
    for i in 1..lits.len() - 1 {
        solver.add_clause(&[!lits[i], s[i]]);
        solver.add_clause(&[!s[i - 1], s[i]]);
        solver.add_clause(&[!lits[i], !s[i - 1]]);
    }
    solver.add_clause(&[!lits[lits.len() - 1], !s[lits.len() - 2]]);
}

/// A satisfying labeling: for each message id, the hidden cards it decodes to.
pub(crate) struct Labeling {
    pub book: MessageBook,
    pub label: HashMap<u32, Vec<Card>>,
}

pub(crate) fn solve_labeling(config: &TrickConfig, hands: &[Hand]) -> Result<Option<Labeling>> {
    let mut book = MessageBook::default();
    let mut solver = Solver::new();
    let mut hidden_ids: HashMap<Vec<Card>, u32> = HashMap::new();
    let mut hidden_list: Vec<Vec<Card>> = Vec::new();
    let mut vars: HashMap<(u32, u32), Lit> = HashMap::new();
    let mut by_message: HashMap<u32, Vec<Lit>> = HashMap::new();
    let mut lit_owner: HashMap<Lit, (u32, u32)> = HashMap::new();

    let mut var_of = |solver: &mut Solver, o: u32, h: u32| -> Lit {
        *vars.entry((o, h)).or_insert_with(|| {
            let lit = solver.new_lit();
            by_message.entry(o).or_default().push(lit);
            lit_owner.insert(lit, (o, h));
            lit
        })
    };

    for hand in hands {
        let mut clause = Vec::new();
        for (hidden, shown) in splits(config, hand) {
            let next = hidden_list.len() as u32;
            let h = *hidden_ids.entry(hidden.clone()).or_insert(next);
            if h == next {
                hidden_list.push(hidden);
            }
            let ids: Vec<u32> = book.shown(config, &shown).iter().map(|(o, _)| *o).collect();
            let lits: Vec<Lit> = ids.into_iter().map(|o| var_of(&mut solver, o, h)).collect();
            match config.chooser {
                Chooser::Assistant => clause.extend(lits),
                Chooser::Audience => solver.add_clause(&lits),
            }
        }
        if config.chooser == Chooser::Assistant {
            solver.add_clause(&clause);
        }
    }
    let mut messages: Vec<_> = by_message.into_iter().collect();
    messages.sort_by_key(|(o, _)| *o);
    for (_, lits) in &messages {
        at_most_one(&mut solver, lits);
    }
    if !solver.solve() {
        return Ok(None);
    }
    let model = solver.model().unwrap_or_default();
    let mut label = HashMap::new();
    for lit in model {
        if let Some(&(o, h)) = lit_owner.get(&lit) {
            label.insert(o, hidden_list[h as usize].clone());
        }
    }
    Ok(Some(Labeling { book, label }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::enumerate::enumerate_hands;

    #[test]
    fn flip_audience_three_cards() {
        let feasible = |n| {
            let cfg = TrickConfig::new(n, 3).with_flips(true).with_chooser(Chooser::Audience);
            let hands = enumerate_hands(&cfg, 1_000).unwrap();
            solve_labeling(&cfg, &hands).unwrap().is_some()
        };
        assert!(feasible(7));
        assert!(!feasible(8));
    }
}
