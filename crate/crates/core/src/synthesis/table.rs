use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::codecs::{Encoded, Strategy};
use crate::deck::{Card, Chooser, Hand, Message, Observe, ObservedMessage, TrickConfig};
use crate::error::{Error, Result};
use crate::wire::{parse_message, serialize_message, CardNaming};

const NAMING: CardNaming = CardNaming::Numeric { one_based: false };

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub hand: Hand,
    pub hidden: Vec<Card>,
    pub message: Message,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableOrigin {
    Synthesized,
    Authored,
}

#[derive(Serialize, Deserialize)]
struct Header {
    config: TrickConfig,
    origin: TableOrigin,
}

#[derive(Serialize, Deserialize)]
struct Line {
    hand: Vec<u32>,
    hidden: Vec<u32>,
    message: String,
}

/// An explicit strategy: one row per hand (assistant chooses) or per
/// hand and hidden choice (audience chooses).
#[derive(Debug, Clone)]
pub struct StrategyTable {
    config: TrickConfig,
    origin: TableOrigin,
    rows: Vec<TableRow>,
    by_input: HashMap<(Hand, Vec<Card>), usize>,
    by_message: HashMap<ObservedMessage, usize>,
}

impl StrategyTable {
    pub fn new(config: TrickConfig, origin: TableOrigin, rows: Vec<TableRow>) -> Result<Self> {
        config.validate()?;
        let mut by_input = HashMap::with_capacity(rows.len());
        let mut by_message = HashMap::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let hand = Hand::new(row.hand.cards().to_vec(), &config)?;
            if row.hidden.len() != config.hidden_count {
                return Err(Error::InvalidHand(format!("row {i}: wrong number of hidden cards")));
            }
            hand.without(&row.hidden)?;
            let observed = row.message.observe();
            observed.validate(&config)?;
            let key = match config.chooser {
                Chooser::Assistant => Vec::new(),
                Chooser::Audience => row.hidden.clone(),
            };
            if by_input.insert((hand, key), i).is_some() {
                return Err(Error::InvalidHand(format!("row {i} repeats an earlier input")));
            }
            by_message.entry(observed).or_insert(i);
        }
        Ok(StrategyTable {
            config,
            origin,
            rows,
            by_input,
            by_message,
        })
    }

    pub fn origin(&self) -> TableOrigin {
        self.origin
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> std::io::Result<()> {
        let header = Header {
            config: self.config,
            origin: self.origin,
        };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        for row in &self.rows {
            let line = Line {
                hand: row.hand.cards().iter().map(|c| c.0).collect(),
                hidden: row.hidden.iter().map(|c| c.0).collect(),
                message: serialize_message(&row.message, NAMING),
            };
            writeln!(out, "{}", serde_json::to_string(&line)?)?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// Reads the format written by [`StrategyTable::write_jsonl`]: a header
    /// line with the configuration, then one row per line.
    pub fn read_jsonl(input: impl BufRead) -> Result<Self> {
        let mut lines = input.lines().enumerate().filter(|(_, l)| {
            l.as_ref().map_or(true, |l| !l.trim().is_empty())
        });
        let io = |e: std::io::Error| Error::Parse(e.to_string());
        let json = |n: usize| move |e: serde_json::Error| Error::Parse(format!("line {}: {e}", n + 1));
        let (n, first) = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
        let header: Header = serde_json::from_str(&first.map_err(io)?).map_err(json(n))?;
        let mut rows = Vec::new();
        for (n, line) in lines {
            let line: Line = serde_json::from_str(&line.map_err(io)?).map_err(json(n))?;
            let cards = |v: Vec<u32>| v.into_iter().map(Card).collect::<Vec<_>>();
            let mut hidden = cards(line.hidden);
            hidden.sort();
            rows.push(TableRow {
                hand: Hand::new(cards(line.hand), &header.config)?,
                hidden,
                message: parse_message(&line.message, NAMING)?,
            });
        }
        StrategyTable::new(header.config, header.origin, rows)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        Self::read_jsonl(text.as_bytes())
    }
}

impl Strategy for StrategyTable {
    fn name(&self) -> String {
        "table".into()
    }

    fn config(&self) -> &TrickConfig {
        &self.config
    }

    fn encode(&self, hand: &Hand, hidden: Option<&[Card]>) -> Result<Encoded> {
        let hidden = crate::codecs::audience_hidden(&self.config, hand, hidden)?;
        let key = (hand.clone(), hidden.unwrap_or_default());
        let row = self
            .by_input
            .get(&key)
            .map(|&i| &self.rows[i])
            .ok_or_else(|| Error::InvalidHand("no table row for this input".into()))?;
        Ok(Encoded {
            hidden: row.hidden.clone(),
            message: row.message.clone(),
        })
    }

    fn decode(&self, observed: &ObservedMessage) -> Result<Vec<Card>> {
        observed.validate(&self.config)?;
        self.by_message
            .get(&observed.observe())
            .map(|&i| self.rows[i].hidden.clone())
            .ok_or_else(|| crate::codecs::unused_message(observed, NAMING))
    }
}
