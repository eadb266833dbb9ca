use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{
    big, bound_flip_audience, max_cheney, max_circle_assistant, max_circle_audience,
    max_dup_audience, max_dup_signal_strategy, max_line_assistant, max_line_audience,
    max_mulcahy_flip, multi_assistant_closed_form, multi_audience_scan,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SequenceId {
    A005095,
    A213169,
    A030495,
    A372255,
    A370888,
    A371217,
    A002720,
    A372256,
    A372264,
    A372266,
    A372265,
}

impl SequenceId {
    pub const ALL: [SequenceId; 11] = [
        SequenceId::A005095,
        SequenceId::A213169,
        SequenceId::A030495,
        SequenceId::A372255,
        SequenceId::A370888,
        SequenceId::A371217,
        SequenceId::A002720,
        SequenceId::A372256,
        SequenceId::A372264,
        SequenceId::A372266,
        SequenceId::A372265,
    ];

    /// Hand size `K` of the first term.
    pub fn first_k(self) -> u64 {
        match self {
            SequenceId::A213169
            | SequenceId::A372255
            | SequenceId::A370888
            | SequenceId::A372266 => 2,
            _ => 1,
        }
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SequenceId::ALL
            .iter()
            .copied()
            .find(|id| format!("{id:?}").eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::unknown("sequence", s))
    }
}

/// `Oeis` gives the catalogued terms. `DeckSize` gives deck sizes by `K`:
/// doubled for the duplicate-deck sequences and, for A213169, preceded by
/// the `K = 1` circle value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SequenceForm {
    #[default]
    Oeis,
    DeckSize,
}

fn term(id: SequenceId, k: u64) -> Result<BigUint> {
    use SequenceId::*;
    Ok(match id {
        A005095 => max_line_audience(k, 1)?.value,
        A213169 => max_circle_audience(k, 1)?.value,
        A030495 => max_line_assistant(k, 1)?.value,
        A372255 => max_circle_assistant(k, 1)?.value,
        A370888 => max_cheney(k)?.value,
        A371217 => max_mulcahy_flip(k)?.value,
        A002720 => bound_flip_audience(k, 1)?.value,
        A372256 => max_dup_audience(k)?.value / 2u32,
        A372264 => max_dup_signal_strategy(k)?.value / 2u32,
        A372266 => big(multi_audience_scan(k, 1, 2)),
        A372265 => {
            let v: BigInt = multi_assistant_closed_form(k, 1);
            v.to_biguint().unwrap_or_default()
        }
    })
}

pub fn emit_sequence(id: SequenceId, count: usize, form: SequenceForm) -> Result<Vec<BigUint>> {
    if count > 40 {
        return Err(Error::InvalidParameter(format!(
            "at most 40 terms are available, {count} requested"
        )));
    }
    let mut out = Vec::with_capacity(count);
    if form == SequenceForm::DeckSize && id == SequenceId::A213169 && count > 0 {
        out.push(big(1));
    }
    let mut k = id.first_k();
    while out.len() < count {
        let t = term(id, k)?;
        out.push(match (form, id) {
            (SequenceForm::DeckSize, SequenceId::A372256 | SequenceId::A372264) => t * 2u32,
            _ => t,
        });
        k += 1;
    }
    Ok(out)
}

/// Terms small enough for `u64`, for callers that do not need big integers.
pub fn emit_sequence_u64(id: SequenceId, count: usize, form: SequenceForm) -> Result<Vec<u64>> {
    emit_sequence(id, count, form)?
        .iter()
        .map(|v| v.to_u64().ok_or_else(|| Error::Overflow(format!("{v} exceeds u64"))))
        .collect()
}
