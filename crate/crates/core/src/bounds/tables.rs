use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use super::{
    bctm_scan, big, bound_flip_audience, max_circle_assistant, max_circle_audience,
    max_flip_rotate_assistant, max_line_assistant, max_line_audience, multi_assistant_scan,
    multi_audience_scan,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use TableId::*;
        Ok(match s.to_ascii_uppercase().as_str() {
            "T1" => T1,
            "T2" => T2,
            "T3" => T3,
            "T4" => T4,
            "T5" => T5,
            "T6" => T6,
            "T7" => T7,
            "T8" => T8,
            "T9" => T9,
            "T10" => T10,
            "T11" => T11,
            "T12" => T12,
            _ => return Err(Error::unknown("table", s)),
        })
    }
}

/// A grid indexed by rows `R` and columns `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub id: TableId,
    pub caption: &'static str,
    pub rows: Vec<u64>,
    pub columns: Vec<u64>,
    #[serde(serialize_with = "super::serialize_big_grid")]
    pub cells: Vec<Vec<BigUint>>,
}

impl Table {
    pub fn cell(&self, r: u64, k: u64) -> Option<&BigUint> {
        let i = self.rows.iter().position(|&x| x == r)?;
        let j = self.columns.iter().position(|&x| x == k)?;
        Some(&self.cells[i][j])
    }

    /// Tab-separated, header `R/K`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("R/K");
        for k in &self.columns {
            write!(out, "\t{k}").unwrap();
        }
        out.push('\n');
        for (r, row) in self.rows.iter().zip(&self.cells) {
            write!(out, "{r}").unwrap();
            for v in row {
                write!(out, "\t{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

type Cell = fn(u64, u64) -> Result<BigUint>;

fn grid(id: TableId, caption: &'static str, ks: std::ops::RangeInclusive<u64>, f: Cell) -> Result<Table> {
    let rows: Vec<u64> = (1..=5).collect();
    let columns: Vec<u64> = ks.collect();
    let cells = rows
        .iter()
        .map(|&r| columns.iter().map(|&k| f(k, r)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        id,
        caption,
        rows,
        columns,
        cells,
    })
}

pub fn emit_table(id: TableId) -> Result<Table> {
    use TableId::*;
    match id {
        T1 => grid(id, "line, audience chooses", 1..=6, |k, r| {
            Ok(max_line_audience(k, r)?.value)
        }),
        T2 => grid(id, "circle, audience chooses", 2..=6, |k, r| {
            Ok(max_circle_audience(k, r)?.value)
        }),
        T3 => grid(id, "line, assistant chooses", 1..=6, |k, r| {
            Ok(max_line_assistant(k, r)?.value)
        }),
        T4 => grid(id, "circle, assistant chooses", 2..=6, |k, r| {
            Ok(max_circle_assistant(k, r)?.value)
        }),
        T5 => grid(id, "line with flips, assistant chooses", 1..=6, |k, r| {
            Ok(max_flip_rotate_assistant(k, r)?.value)
        }),
        T6 => grid(id, "flips, audience chooses (bound)", 1..=6, |k, r| {
            Ok(bound_flip_audience(k, r)?.value)
        }),
        T9 => grid(id, "two hidden cards, audience chooses", 2..=6, |k, r| {
            Ok(big(multi_audience_scan(k, r, 2)))
        }),
        T10 => grid(id, "two hidden cards, assistant chooses (bound)", 2..=7, |k, r| {
            Ok(big(multi_assistant_scan(k, r, 2)))
        }),
        T12 => grid(id, "two hidden cards, reused best-trick method", 2..=7, |k, r| {
            Ok(big(bctm_scan(k, r)))
        }),
        T7 | T8 | T11 => Err(Error::InvalidParameter(format!(
            "{id:?} is a strategy table, not a bounds grid"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_layout() {
        let t = emit_table(TableId::T1).unwrap();
        let tsv = t.to_tsv();
        let mut lines = tsv.lines();
        assert_eq!(lines.next().unwrap(), "R/K\t1\t2\t3\t4\t5\t6");
        assert_eq!(lines.next().unwrap(), "1\t1\t2\t4\t9\t28\t125");
    }

    #[test]
    fn strategy_tables_rejected() {
        for id in ["T7", "T8", "T11"] {
            assert!(emit_table(id.parse().unwrap()).is_err());
        }
        assert!("T13".parse::<TableId>().is_err());
    }
}
