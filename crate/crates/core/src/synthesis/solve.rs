use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::enumerate::{
    check_guard, enumerate_hands, hand_count, multisets, observed_arrangements, ArrangementCounts,
};
use super::matching::{hall_set, max_matching, CapacitatedGraph};
use super::sat::{solve_labeling, splits};
use super::table::{StrategyTable, TableOrigin, TableRow};
use crate::bounds::binomial;
use crate::deck::{Card, Chooser, Hand, TrickConfig};
use crate::error::{Error, Result};

/// A set of hands that together reach fewer observed messages than there
/// are hands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallWitness {
    pub hands: Vec<Hand>,
    pub messages: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    /// Assistant chooses: no hand-to-message assignment exists.
    Hall(HallWitness),
    /// Audience chooses: one shown set has more candidates than layouts.
    Crowded {
        shown: Vec<Card>,
        candidates: u64,
        arrangements: u64,
    },
    /// Face-down cards: no consistent decoder labeling exists.
    Unsatisfiable,
}

#[derive(Debug, Clone)]
pub enum Synthesis {
    Feasible(StrategyTable),
    Infeasible(Obstruction),
}

impl Synthesis {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Synthesis::Feasible(_))
    }
}

fn guard_u64(size: &BigUint) -> u64 {
    num_traits::ToPrimitive::to_u64(size).unwrap_or(u64::MAX)
}

/// Shown multisets of a face-up protocol grouped by multiplicity profile:
/// `(profile, how many shown sets have it)`.
pub(crate) fn shown_profiles(config: &TrickConfig) -> Vec<(Vec<usize>, BigUint)> {
    let s = config.shown_count() as u64;
    if !config.duplicates {
        return vec![(vec![1; s as usize], binomial(config.deck_size as u64, s))];
    }
    let d = config.distinct_values() as u64;
    (0..=s / 2)
        .filter(|&j| s - j <= d)
        .map(|j| {
            let mut p = vec![1; (s - 2 * j) as usize];
            p.extend(std::iter::repeat(2).take(j as usize));
            (p, binomial(d, j) * binomial(d - j, s - 2 * j))
        })
        .collect()
}

fn representative(profile: &[usize]) -> Vec<Card> {
    profile
        .iter()
        .enumerate()
        .flat_map(|(v, &m)| std::iter::repeat(Card(v as u32)).take(m))
        .collect()
}

/// Total observed messages of a face-up protocol.
pub(crate) fn face_up_message_count(config: &TrickConfig, counts: &mut ArrangementCounts) -> BigUint {
    shown_profiles(config)
        .into_iter()
        .map(|(p, n)| n * counts.get(config, &representative(&p)))
        .sum()
}

/// Hidden candidates for a shown multiset with the given profile.
pub(crate) fn candidate_count(config: &TrickConfig, profile: &[usize]) -> BigUint {
    let c = config.hidden_count as u64;
    let s = config.shown_count() as u64;
    if !config.duplicates {
        return binomial(config.deck_size as u64 - s, c);
    }
    let d = config.distinct_values() as u64;
    let doubled = profile.iter().filter(|&&m| m == 2).count() as u64;
    let singles = profile.iter().filter(|&&m| m == 1).count() as u64;
    let free = d - doubled - singles;
    // `a` cards from untouched values (up to two copies each), the rest
    // from values shown once.
    (0..=c)
        .map(|a| {
            let from_free: BigUint = (0..=a / 2)
                .map(|i| binomial(free, i) * binomial(free.saturating_sub(i), a - 2 * i))
                .sum();
            from_free * binomial(singles, c - a)
        })
        .sum()
}

/// Per-profile counting test for face-up audience protocols.
pub(crate) fn audience_obstruction(config: &TrickConfig, counts: &mut ArrangementCounts) -> Option<Obstruction> {
    for (profile, _) in shown_profiles(config) {
        let shown = representative(&profile);
        let arrangements = counts.get(config, &shown);
        let candidates = candidate_count(config, &profile);
        if candidates > BigUint::from(arrangements) {
            return Some(Obstruction::Crowded {
                shown,
                candidates: guard_u64(&candidates),
                arrangements,
            });
        }
    }
    None
}

/// Hidden multisets that can join `shown` to form a hand, sorted.
fn candidates(config: &TrickConfig, shown: &[Card]) -> Vec<Vec<Card>> {
    let copies = if config.duplicates { 2 } else { 1 };
    multisets(config.distinct_values(), config.hidden_count, copies)
        .into_iter()
        .filter(|h| {
            h.iter().all(|v| {
                let used = shown.iter().filter(|c| *c == v).count() + h.iter().filter(|c| *c == v).count();
                used <= copies
            })
        })
        .collect()
}

fn merge(a: &[Card], b: &[Card]) -> Hand {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v.sort();
    Hand::from_sorted(v)
}

/// Audience chooses: each shown set assigns its candidates to layouts in
/// order. Protocols with face-down cards go through the labeling solver.
pub fn synthesize_audience_strategy(config: &TrickConfig, guard: u64) -> Result<Synthesis> {
    config.validate()?;
    if config.chooser != Chooser::Audience {
        return Err(Error::InvalidConfig("the audience must choose the hidden cards".into()));
    }
    if config.flips_allowed {
        return labeling_synthesis(config, guard);
    }
    let mut counts = ArrangementCounts::default();
    if let Some(o) = audience_obstruction(config, &mut counts) {
        return Ok(Synthesis::Infeasible(o));
    }
    let rows_total = hand_count(config) * binomial(config.hand_size as u64, config.hidden_count as u64);
    check_guard(&rows_total, guard)?;
    let copies = if config.duplicates { 2 } else { 1 };
    let mut rows = Vec::new();
    for shown in multisets(config.distinct_values(), config.shown_count(), copies) {
        let layouts = observed_arrangements(config, &shown);
        for (hidden, (_, message)) in candidates(config, &shown).into_iter().zip(layouts) {
            rows.push(TableRow {
                hand: merge(&shown, &hidden),
                hidden,
                message,
            });
        }
    }
    rows.sort_by(|a, b| (&a.hand, &a.hidden).cmp(&(&b.hand, &b.hidden)));
    Ok(Synthesis::Feasible(StrategyTable::new(*config, TableOrigin::Synthesized, rows)?))
}

/// Explicit compatibility graph of a face-up assistant protocol: hands on
/// the left, shown multisets on the right with one unit of capacity per
/// layout.
pub(crate) struct ShownGraph {
    pub hands: Vec<Hand>,
    pub shown: Vec<Vec<Card>>,
    pub graph: CapacitatedGraph,
}

pub(crate) fn explicit_size(config: &TrickConfig, counts: &mut ArrangementCounts) -> BigUint {
    hand_count(config) + face_up_message_count(config, counts)
}

pub(crate) fn shown_graph(config: &TrickConfig, guard: u64) -> Result<ShownGraph> {
    let mut counts = ArrangementCounts::default();
    check_guard(&explicit_size(config, &mut counts), guard)?;
    let hands = enumerate_hands(config, guard)?;
    let mut ids: HashMap<Vec<Card>, u32> = HashMap::new();
    let mut shown = Vec::new();
    let mut graph = CapacitatedGraph::new(Vec::new());
    let mut nb = Vec::new();
    for hand in &hands {
        nb.clear();
        for (_, s) in splits(config, hand) {
            let id = match ids.get(&s) {
                Some(&id) => id,
                None => {
                    let cap = counts.get(config, &s) as u32;
                    let id = graph.add_right(cap);
                    ids.insert(s.clone(), id);
                    shown.push(s);
                    id
                }
            };
            nb.push(id);
        }
        graph.add_left(&nb);
    }
    Ok(ShownGraph { hands, shown, graph })
}

/// Assistant chooses: a maximum matching of hands into layouts, or a Hall
/// witness when some hands cannot be served. Protocols with face-down
/// cards go through the labeling solver.
pub fn synthesize_assistant_strategy(config: &TrickConfig, guard: u64) -> Result<Synthesis> {
    config.validate()?;
    if config.chooser != Chooser::Assistant {
        return Err(Error::InvalidConfig("the assistant must choose the hidden cards".into()));
    }
    if config.flips_allowed {
        return labeling_synthesis(config, guard);
    }
    let sg = shown_graph(config, guard)?;
    let m = max_matching(&sg.graph);
    if let Some((lefts, rights)) = hall_set(&sg.graph, &m) {
        let messages = rights.iter().map(|&v| sg.graph.capacity(v) as u64).sum();
        let hands = lefts.into_iter().map(|u| sg.hands[u].clone()).collect();
        return Ok(Synthesis::Infeasible(Obstruction::Hall(HallWitness { hands, messages })));
    }
    let mut used = vec![0usize; sg.shown.len()];
    let mut layouts: HashMap<u32, Vec<crate::deck::Message>> = HashMap::new();
    let mut rows = Vec::with_capacity(sg.hands.len());
    for (u, hand) in sg.hands.iter().enumerate() {
        let v = m.assigned[u].expect("perfect matching");
        let shown = &sg.shown[v as usize];
        let list = layouts.entry(v).or_insert_with(|| {
            observed_arrangements(config, shown).into_iter().map(|(_, m)| m).collect()
        });
        let message = list[used[v as usize]].clone();
        used[v as usize] += 1;
        let hidden = crate::deck::multiset_difference(hand.cards(), shown).expect("shown set of the hand");
        rows.push(TableRow {
            hand: hand.clone(),
            hidden,
            message,
        });
    }
    Ok(Synthesis::Feasible(StrategyTable::new(*config, TableOrigin::Synthesized, rows)?))
}

fn labeling_synthesis(config: &TrickConfig, guard: u64) -> Result<Synthesis> {
    let hands = enumerate_hands(config, guard)?;
    let Some(mut labeling) = solve_labeling(config, &hands)? else {
        return Ok(Synthesis::Infeasible(Obstruction::Unsatisfiable));
    };
    let mut rows = Vec::new();
    for hand in &hands {
        for (hidden, shown) in splits(config, hand) {
            let found = labeling
                .book
                .shown(config, &shown)
                .iter()
                .find(|(o, _)| labeling.label.get(o) == Some(&hidden))
                .map(|(_, m)| m.clone());
            if let Some(message) = found {
                rows.push(TableRow {
                    hand: hand.clone(),
                    hidden,
                    message,
                });
                if config.chooser == Chooser::Assistant {
                    break;
                }
            }
        }
    }
    Ok(Synthesis::Feasible(StrategyTable::new(*config, TableOrigin::Synthesized, rows)?))
}

pub fn synthesize(config: &TrickConfig, guard: u64) -> Result<Synthesis> {
    match config.chooser {
        Chooser::Assistant => synthesize_assistant_strategy(config, guard),
        Chooser::Audience => synthesize_audience_strategy(config, guard),
    }
}

/// Recomputes the witness's message neighborhood from scratch. True when
/// the claimed count is right and smaller than the number of hands.
pub fn check_hall_witness(config: &TrickConfig, witness: &HallWitness) -> Result<bool> {
    let mut hands = BTreeSet::new();
    let mut messages = BTreeSet::new();
    for hand in &witness.hands {
        let hand = Hand::new(hand.cards().to_vec(), config)?;
        for (_, shown) in splits(config, &hand) {
            messages.extend(observed_arrangements(config, &shown).into_iter().map(|(o, _)| o));
        }
        hands.insert(hand);
    }
    Ok(messages.len() as u64 == witness.messages && messages.len() < hands.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dup_pair_is_infeasible() {
        let cfg = TrickConfig::new(4, 2).with_duplicates(true);
        match synthesize_assistant_strategy(&cfg, 1000).unwrap() {
            Synthesis::Infeasible(Obstruction::Hall(w)) => {
                assert_eq!((w.hands.len(), w.messages), (3, 2));
                assert!(check_hall_witness(&cfg, &w).unwrap());
            }
            other => panic!("expected a Hall witness, got {other:?}"),
        }
    }

    #[test]
    fn line_three_cards() {
        let at = |n| synthesize_assistant_strategy(&TrickConfig::new(n, 3), 100_000).unwrap();
        assert!(at(8).is_feasible());
        assert!(!at(9).is_feasible());
    }

    #[test]
    fn audience_counts() {
        let at = |n| {
            let cfg = TrickConfig::new(n, 3).with_chooser(Chooser::Audience);
            synthesize_audience_strategy(&cfg, 100_000).unwrap()
        };
        assert!(at(4).is_feasible());
        assert!(!at(5).is_feasible());
    }

    #[test]
    fn dup_candidates() {
        let cfg = TrickConfig::new(8, 3).with_duplicates(true).with_chooser(Chooser::Audience);
        assert_eq!(candidate_count(&cfg, &[1, 1]), BigUint::from(4u32));
        assert_eq!(candidate_count(&cfg, &[2]), BigUint::from(3u32));
        assert_eq!(candidates(&cfg, &[Card(0), Card(0)]).len(), 3);
    }
}
