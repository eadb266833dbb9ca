//! Brute-force ground truth for small configurations.
//!
//! Hands and observed messages are enumerated outright. Assistant-chosen
//! face-up protocols become a matching problem, audience-chosen ones a
//! per-shown-set count, and protocols with face-down cards a SAT
//! labeling of the observed messages.

mod cdcl;
mod enumerate;
mod feasible;
pub mod matching;
mod sat;
mod solve;
mod table;
mod verify;

pub use enumerate::{enumerate_hands, enumerate_messages, hand_count, hands, observed_arrangements};
pub use feasible::{is_feasible, max_feasible_deck, DeckScan, Family, Method, ScanOptions, Trial};
pub use solve::{
    check_hall_witness, synthesize, synthesize_assistant_strategy, synthesize_audience_strategy,
    HallWitness, Obstruction, Synthesis,
};
pub use table::{StrategyTable, TableOrigin, TableRow};
pub use verify::{verify_strategy, Failure, Report, VerifyMode};

/// Default cap on enumerated hands plus messages.
pub const DEFAULT_GUARD: u64 = 10_000_000;
