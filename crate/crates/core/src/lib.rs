//! Card-trick encoding protocols, deck-size bounds and strategy synthesis.

pub mod bounds;
pub mod codecs;
pub mod combinatorics;
pub mod deck;
pub mod error;
pub mod standard;
pub mod synthesis;
pub mod wire;

pub use deck::{
    Arrangement, Card, Chooser, Face, Hand, Message, MessageKey, Observe, ObservedMessage,
    ObservedPlacement, Orientation, Placement, TrickConfig,
};
pub use error::{Error, Result};
