use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid card: {0}")]
    InvalidCard(String),

    #[error("invalid hand: {0}")]
    InvalidHand(String),

    #[error("invalid message: {0}")]
    InvalidMessage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("deck of {deck} cards exceeds the capacity {capacity} of this strategy")]
    Capacity { deck: u64, capacity: u64 },

    #[error("the hidden card(s) must be chosen by the audience for this strategy")]
    HiddenRequired,

    #[error("the assistant chooses the hidden card(s) for this strategy; none may be supplied")]
    HiddenNotAllowed,

    #[error("hidden card(s) {0} not in hand")]
    HiddenNotInHand(String),

    #[error("message is never emitted by this strategy: {0}")]
    UnusedMessage(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("instance size {size} exceeds the size guard {guard}")]
    SizeGuard { size: u128, guard: u128 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn unknown(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Unknown {
            kind,
            name: name.into(),
        }
    }
}
