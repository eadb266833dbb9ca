use std::fmt;
use std::str::FromStr;

use super::*;
use crate::bounds::{
    max_bctm_two_hidden, max_circle_assistant, max_circle_audience, max_dup_audience,
    max_dup_signal_strategy, max_flip_rotate_assistant, max_line_assistant, max_line_audience,
    multi_audience_scan, BoundsResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodecName {
    AudienceLine,
    AudienceCircle,
    BestTrick,
    BestTrickCircle,
    Cheney5,
    Mulcahy4,
    FlipRotate,
    ThreeCard,
    FlipAudience7,
    DupAudience,
    DupK3,
    DupSignal,
    TwoHiddenAudience,
    TwoHiddenK3N4,
    TwoHiddenK4N7,
    Bctm2,
}

impl CodecName {
    pub const ALL: [CodecName; 16] = [
        CodecName::AudienceLine,
        CodecName::AudienceCircle,
        CodecName::BestTrick,
        CodecName::BestTrickCircle,
        CodecName::Cheney5,
        CodecName::Mulcahy4,
        CodecName::FlipRotate,
        CodecName::ThreeCard,
        CodecName::FlipAudience7,
        CodecName::DupAudience,
        CodecName::DupK3,
        CodecName::DupSignal,
        CodecName::TwoHiddenAudience,
        CodecName::TwoHiddenK3N4,
        CodecName::TwoHiddenK4N7,
        CodecName::Bctm2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CodecName::AudienceLine => "audience-line",
            CodecName::AudienceCircle => "audience-circle",
            CodecName::BestTrick => "best-trick",
            CodecName::BestTrickCircle => "best-trick-circle",
            CodecName::Cheney5 => "cheney5",
            CodecName::Mulcahy4 => "mulcahy4",
            CodecName::FlipRotate => "flip-rotate",
            CodecName::ThreeCard => "three-card",
            CodecName::FlipAudience7 => "flip-audience-7",
            CodecName::DupAudience => "dup-audience",
            CodecName::DupK3 => "dup-k3",
            CodecName::DupSignal => "dup-signal",
            CodecName::TwoHiddenAudience => "two-hidden-audience",
            CodecName::TwoHiddenK3N4 => "two-hidden-k3n4",
            CodecName::TwoHiddenK4N7 => "two-hidden-k4n7",
            CodecName::Bctm2 => "bctm2",
        }
    }

    /// Default `(K, R, C)`.
    pub fn default_shape(self) -> (usize, u32, usize) {
        match self {
            CodecName::Cheney5 => (5, 1, 1),
            CodecName::Mulcahy4 => (4, 1, 1),
            CodecName::ThreeCard => (3, 2, 1),
            CodecName::FlipAudience7 | CodecName::DupK3 => (3, 1, 1),
            CodecName::DupAudience => (3, 1, 1),
            CodecName::TwoHiddenAudience | CodecName::Bctm2 => (5, 1, 2),
            CodecName::TwoHiddenK3N4 => (3, 1, 2),
            CodecName::TwoHiddenK4N7 => (4, 1, 2),
            _ => (4, 1, 1),
        }
    }
}

impl fmt::Display for CodecName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodecName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        CodecName::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::unknown("codec", &s))
    }
}

/// Unset fields take the codec's defaults; an unset deck size is the
/// largest deck the codec supports for the chosen shape.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CodecParams {
    pub k: Option<usize>,
    pub r: Option<u32>,
    pub c: Option<usize>,
    pub n: Option<u32>,
}

fn deck_from(n: Option<u32>, bound: Result<BoundsResult>) -> Result<u32> {
    match n {
        Some(n) => Ok(n),
        None => {
            let v = bound?.value_u64().ok_or_else(|| Error::Overflow("deck size".into()))?;
            u32::try_from(v).map_err(|_| Error::Overflow("deck size".into()))
        }
    }
}

fn fixed<T>(n: Option<u32>, build: impl FnOnce(u32) -> Result<T>, default: T) -> Result<T> {
    match n {
        Some(n) => build(n),
        None => Ok(default),
    }
}

pub fn build_codec(name: CodecName, params: CodecParams) -> Result<Box<dyn Strategy>> {
    let (dk, dr, dc) = name.default_shape();
    let k = params.k.unwrap_or(dk);
    let r = params.r.unwrap_or(dr);
    let c = params.c.unwrap_or(dc);
    let (k64, r64) = (k as u64, r as u64);
    let n = params.n;
    Ok(match name {
        CodecName::AudienceLine => Box::new(AudienceIndex::new(
            deck_from(n, max_line_audience(k64, r64))?,
            k,
            r,
            Arrangement::Line,
        )?),
        CodecName::AudienceCircle => Box::new(AudienceIndex::new(
            deck_from(n, max_circle_audience(k64, r64))?,
            k,
            r,
            Arrangement::Circle,
        )?),
        CodecName::BestTrick => Box::new(BestTrick::new(
            deck_from(n, max_line_assistant(k64, r64))?,
            k,
            r,
            Arrangement::Line,
        )?),
        CodecName::BestTrickCircle => Box::new(BestTrick::new(
            deck_from(n, max_circle_assistant(k64, r64))?,
            k,
            r,
            Arrangement::Circle,
        )?),
        CodecName::Cheney5 => Box::new(fixed(n, |n| Cheney::new(5, n), Cheney::classic())?),
        CodecName::Mulcahy4 => Box::new(fixed(n, |n| FlipRotate::new(4, 1, n), FlipRotate::mulcahy4())?),
        CodecName::FlipRotate => Box::new(FlipRotate::new(
            k,
            r,
            deck_from(n, max_flip_rotate_assistant(k64, r64))?,
        )?),
        CodecName::ThreeCard => Box::new(fixed(n, ThreeCard::with_deck, ThreeCard::new())?),
        CodecName::FlipAudience7 => {
            Box::new(fixed(n, FlipAudience7::with_deck, FlipAudience7::new())?)
        }
        CodecName::DupAudience => Box::new(DupAudience::new(k, deck_from(n, max_dup_audience(k64))?)?),
        CodecName::DupK3 => Box::new(fixed(n, DupK3::with_deck, DupK3::new())?),
        CodecName::DupSignal => {
            Box::new(DupSignal::new(k, deck_from(n, max_dup_signal_strategy(k64))?)?)
        }
        CodecName::TwoHiddenAudience => {
            let n = match n {
                Some(n) => n,
                None => u32::try_from(multi_audience_scan(k64, r64, c as u64))
                    .map_err(|_| Error::Overflow("deck size".into()))?,
            };
            Box::new(TwoHiddenAudience::new(k, r, c, n)?)
        }
        CodecName::TwoHiddenK3N4 => Box::new(fixed(
            n,
            |n| exact_deck(n, 4, TwoHiddenK3N4::new()),
            TwoHiddenK3N4::new(),
        )?),
        CodecName::TwoHiddenK4N7 => Box::new(fixed(
            n,
            |n| exact_deck(n, 7, TwoHiddenK4N7::new()),
            TwoHiddenK4N7::new(),
        )?),
        CodecName::Bctm2 => Box::new(Bctm2::new(k, r, deck_from(n, max_bctm_two_hidden(k64, r64))?)?),
    })
}

fn exact_deck<T>(n: u32, size: u32, codec: T) -> Result<T> {
    check_capacity(n as u64, size as u64)?;
    if n != size {
        return Err(Error::InvalidConfig(format!("this strategy is defined for {size} cards")));
    }
    Ok(codec)
}
