//! Largest deck for which a strategy exists.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::enumerate::{hand_count, ArrangementCounts};
use super::matching::{max_matching, CapacitatedGraph};
use super::solve::{audience_obstruction, explicit_size, face_up_message_count, shown_graph};
use super::sat::solve_labeling;
use super::enumerate::enumerate_hands;
use crate::combinatorics::combinations;
use crate::deck::{Arrangement, Card, Chooser, TrickConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Per-shown-set candidate count against layouts.
    Counting,
    /// Explicit matching of every hand.
    Matching,
    /// Matching of translation orbits mod N; success lifts to a strategy.
    Quotient,
    /// Decoder labeling by SAT.
    Sat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trial {
    pub deck: u32,
    pub feasible: bool,
    /// False when a sufficient-only test failed and nothing was proven.
    pub conclusive: bool,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckScan {
    pub max_deck: Option<u32>,
    /// Largest deck with at least as many messages as hands (assistant,
    /// face-up protocols only).
    pub counting_limit: Option<u32>,
    pub trials: Vec<Trial>,
    /// False if a feasible deck was found above an infeasible one.
    pub downward_closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub guard: u64,
    /// Largest deck size the scan may look at.
    pub limit: u32,
    /// Extra sizes tested after the first infeasible one in upward scans.
    pub confirm: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            guard: super::DEFAULT_GUARD,
            limit: 100_000,
            confirm: 1,
        }
    }
}

/// Smallest canonical translate of `set` in Z_n and the size of its
/// stabilizer.
fn canonical(set: &[u32], n: u32) -> (Vec<u32>, u32) {
    let mut best: Option<Vec<u32>> = None;
    let mut stab = 0;
    for &e in set {
        let mut t: Vec<u32> = set.iter().map(|&x| (x + n - e) % n).collect();
        t.sort_unstable();
        match &best {
            Some(b) if *b < t => {}
            Some(b) if *b == t => stab += 1,
            _ => {
                best = Some(t);
                stab = 1;
            }
        }
    }
    (best.unwrap_or_default(), stab.max(1))
}

/// Matching on orbits of the cyclic shift `x -> x+1 mod N`. Applies to
/// face-up, one-hidden, assistant protocols with `gcd(N, K) = 1`, where
/// every hand orbit has exactly `N` members. A shown-set orbit of size `s`
/// can take `floor(cap * s / N)` hand orbits.
pub(crate) fn quotient_feasible(config: &TrickConfig) -> Option<bool> {
    let (n, k) = (config.deck_size, config.hand_size);
    if config.duplicates
        || config.flips_allowed
        || config.hidden_count != 1
        || config.chooser != Chooser::Assistant
        || k < 2
        || n.gcd(&(k as u32)) != 1
    {
        return None;
    }
    let mut counts = ArrangementCounts::default();
    let cap = counts.get(config, &(0..k as u32 - 1).map(Card).collect::<Vec<_>>()) as u64;
    let mut rights: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut graph = CapacitatedGraph::new(Vec::new());
    let mut hand = vec![0u32; k];
    let mut nb = Vec::with_capacity(k);
    for rest in combinations(n as usize - 1, k - 1) {
        for (slot, r) in hand[1..].iter_mut().zip(&rest) {
            *slot = *r as u32 + 1;
        }
        if canonical(&hand, n).0 != hand {
            continue;
        }
        nb.clear();
        for skip in 0..k {
            let shown: Vec<u32> = (0..k).filter(|&i| i != skip).map(|i| hand[i]).collect();
            let (rep, stab) = canonical(&shown, n);
            let id = *rights.entry(rep).or_insert_with(|| {
                let orbit = (n / stab) as u64;
                graph.add_right((cap * orbit / n as u64) as u32)
            });
            nb.push(id);
        }
        graph.add_left(&nb);
    }
    Some(max_matching(&graph).is_left_perfect())
}

/// Decides whether a strategy exists for `config`, choosing the cheapest
/// sound method.
pub fn is_feasible(config: &TrickConfig, guard: u64) -> Result<Trial> {
    config.validate()?;
    let trial = |feasible, conclusive, method| Trial {
        deck: config.deck_size,
        feasible,
        conclusive,
        method,
    };
    if config.flips_allowed {
        let hands = enumerate_hands(config, guard)?;
        return Ok(trial(solve_labeling(config, &hands)?.is_some(), true, Method::Sat));
    }
    let mut counts = ArrangementCounts::default();
    if config.chooser == Chooser::Audience {
        let ok = audience_obstruction(config, &mut counts).is_none();
        return Ok(trial(ok, true, Method::Counting));
    }
    if hand_count(config) > face_up_message_count(config, &mut counts) {
        return Ok(trial(false, true, Method::Counting));
    }
    let size = explicit_size(config, &mut counts);
    if num_traits::ToPrimitive::to_u64(&size).is_some_and(|s| s <= guard) {
        let sg = shown_graph(config, guard)?;
        return Ok(trial(max_matching(&sg.graph).is_left_perfect(), true, Method::Matching));
    }
    match quotient_feasible(config) {
        Some(true) => Ok(trial(true, true, Method::Quotient)),
        Some(false) => Ok(trial(false, false, Method::Quotient)),
        None => Err(Error::SizeGuard {
            size: num_traits::ToPrimitive::to_u128(&size).unwrap_or(u128::MAX),
            guard: guard as u128,
        }),
    }
}

fn with_deck(template: &TrickConfig, n: u32) -> TrickConfig {
    TrickConfig {
        deck_size: n,
        ..*template
    }
}

/// Largest `N` with at least as many messages as hands. For duplicate decks
/// the comparison is not monotone at small sizes, so the scan stops only
/// after failures persist for `max(2, D)` further steps past the last pass.
fn counting_limit(template: &TrickConfig, first: u32, step: u32, limit: u32) -> Result<Option<u32>> {
    let mut counts = ArrangementCounts::default();
    let mut last = None;
    let mut n = first;
    loop {
        let cfg = with_deck(template, n);
        if hand_count(&cfg) <= face_up_message_count(&cfg, &mut counts) {
            last = Some(n);
        }
        let patience = if template.duplicates {
            2 * (last.unwrap_or(first) / 2).max(2)
        } else {
            1
        };
        if n >= last.unwrap_or(first) + patience {
            return Ok(last);
        }
        n += step;
        if n > limit {
            return Err(Error::SizeGuard {
                size: n as u128,
                guard: limit as u128,
            });
        }
    }
}

/// Scans deck sizes of the family `template` (its deck size is ignored) for
/// the largest one admitting a strategy. Duplicate decks move in steps of
/// two cards.
///
/// Face-up assistant families descend from the counting limit and take the
/// first size that succeeds. Other families scan upward until the first
/// failure, then test `confirm` more sizes to look for non-monotone
/// behaviour.
pub fn max_feasible_deck(template: &TrickConfig, opts: ScanOptions) -> Result<DeckScan> {
    let k = template.hand_size as u32;
    let (first, step) = if template.duplicates {
        (k.div_ceil(2).max(1) * 2, 2)
    } else {
        (k, 1)
    };
    with_deck(template, first).validate()?;
    let mut trials = Vec::new();
    let mut downward_closed = true;

    if template.chooser == Chooser::Assistant && !template.flips_allowed {
        let top = counting_limit(template, first, step, opts.limit)?;
        let mut best = None;
        let mut n = top;
        while let Some(deck) = n {
            let t = is_feasible(&with_deck(template, deck), opts.guard)?;
            trials.push(t);
            if t.feasible {
                best = Some(deck);
                break;
            }
            n = deck.checked_sub(step).filter(|&d| d >= first);
        }
        if let Some(b) = best.and_then(|b| b.checked_sub(step)).filter(|&d| d >= first) {
            let cfg = with_deck(template, b);
            let mut counts = ArrangementCounts::default();
            let cheap = num_traits::ToPrimitive::to_u64(&explicit_size(&cfg, &mut counts))
                .is_some_and(|s| s <= opts.guard / 10);
            if cheap {
                let t = is_feasible(&cfg, opts.guard)?;
                downward_closed &= t.feasible;
                trials.push(t);
            }
        }
        return Ok(DeckScan {
            max_deck: best,
            counting_limit: top,
            trials,
            downward_closed,
        });
    }

    let mut best = None;
    let mut failures = 0;
    let mut n = first;
    loop {
        let t = is_feasible(&with_deck(template, n), opts.guard)?;
        trials.push(t);
        if t.feasible {
            if failures > 0 {
                downward_closed = false;
            }
            best = Some(n);
            failures = 0;
        } else {
            failures += 1;
            if failures > opts.confirm {
                break;
            }
        }
        n += step;
        if n > opts.limit {
            return Err(Error::SizeGuard {
                size: n as u128,
                guard: opts.limit as u128,
            });
        }
    }
    Ok(DeckScan {
        max_deck: best,
        counting_limit: None,
        trials,
        downward_closed,
    })
}

/// Named protocol families for scans and synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LineAudience,
    CircleAudience,
    LineAssistant,
    CircleAssistant,
    FlipAssistant,
    FlipAudience,
    DupAudience,
    DupAssistant,
    MultiAudience,
    MultiAssistant,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::LineAudience,
        Family::CircleAudience,
        Family::LineAssistant,
        Family::CircleAssistant,
        Family::FlipAssistant,
        Family::FlipAudience,
        Family::DupAudience,
        Family::DupAssistant,
        Family::MultiAudience,
        Family::MultiAssistant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::LineAudience => "line-audience",
            Family::CircleAudience => "circle-audience",
            Family::LineAssistant => "line-assistant",
            Family::CircleAssistant => "circle-assistant",
            Family::FlipAssistant => "flip-assistant",
            Family::FlipAudience => "flip-audience",
            Family::DupAudience => "dup-audience",
            Family::DupAssistant => "dup-assistant",
            Family::MultiAudience => "multi-audience",
            Family::MultiAssistant => "multi-assistant",
        }
    }

    /// Configuration of the family with the given shape and deck size.
    /// `hidden` only matters for the multi families.
    pub fn config(self, n: u32, k: usize, r: u32, hidden: usize) -> TrickConfig {
        let base = TrickConfig::new(n, k).with_rotations(r);
        let audience = |c: TrickConfig| c.with_chooser(Chooser::Audience);
        match self {
            Family::LineAudience => audience(base),
            Family::CircleAudience => audience(base.with_arrangement(Arrangement::Circle)),
            Family::LineAssistant => base,
            Family::CircleAssistant => base.with_arrangement(Arrangement::Circle),
            Family::FlipAssistant => base.with_flips(true),
            Family::FlipAudience => audience(base.with_flips(true)),
            Family::DupAudience => audience(base.with_duplicates(true)),
            Family::DupAssistant => base.with_duplicates(true),
            Family::MultiAudience => audience(base.with_hidden(hidden)),
            Family::MultiAssistant => base.with_hidden(hidden),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::unknown("family", &s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(f: Family, k: usize, r: u32) -> Option<u32> {
        max_feasible_deck(&f.config(0, k, r, 1), ScanOptions::default()).unwrap().max_deck
    }

    #[test]
    fn canonical_translates() {
        assert_eq!(canonical(&[3, 5, 6], 7), (vec![0, 1, 5], 1));
        assert_eq!(canonical(&[1, 4, 7], 9), (vec![0, 3, 6], 3));
    }

    #[test]
    fn small_families() {
        assert_eq!(scan(Family::LineAssistant, 3, 1), Some(8));
        assert_eq!(scan(Family::LineAudience, 3, 1), Some(4));
        assert_eq!(scan(Family::CircleAudience, 4, 2), Some(19));
    }

    #[test]
    fn quotient_agrees_with_explicit_matching() {
        for (n, k, r) in [(8, 3, 1), (7, 3, 1), (9, 4, 1), (25, 4, 1), (27, 4, 1), (26, 3, 2)] {
            let cfg = TrickConfig::new(n, k).with_rotations(r);
            let Some(q) = quotient_feasible(&cfg) else { continue };
            let explicit = is_feasible(&cfg, 10_000_000).unwrap();
            assert_eq!(explicit.method, Method::Matching);
            if q {
                assert!(explicit.feasible, "quotient lifts at N={n}");
            }
        }
    }
}
