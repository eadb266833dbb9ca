//! Line-oriented interactive play with standard card names.

use std::io::{BufRead, Write};

use cardtricks::codecs::{build_codec, CodecName, CodecParams, Strategy};
use cardtricks::wire::{parse_observed, CardNaming};
use cardtricks::{Hand, Message, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

const NAMES: CardNaming = CardNaming::Standard;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Assistant,
    Magician,
}

fn ordinal(i: usize) -> String {
    let suffix = match (i % 10, i % 100) {
        (1, x) if x != 11 => "st",
        (2, x) if x != 12 => "nd",
        (3, x) if x != 13 => "rd",
        _ => "th",
    };
    format!("{i}{suffix}")
}

fn position(i: usize, n: usize) -> String {
    match (i, n) {
        (_, 1) => "on the table".into(),
        (0, _) => "leftmost".into(),
        (i, n) if i + 1 == n => "rightmost".into(),
        (i, _) => format!("{} from left", ordinal(i + 1)),
    }
}

fn rotation(r: u32, rotations: u32) -> Option<String> {
    match rotations {
        1 => None,
        2 => Some(if r == 1 { "upright" } else { "rotated" }.into()),
        _ => Some(format!("rotation {r}")),
    }
}

/// Plain-words placing instructions, one line per card.
pub fn instructions(message: &Message, rotations: u32) -> Vec<String> {
    let n = message.placed.len();
    message
        .placed
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut parts = vec![format!(
                "place {} {}",
                NAMES.format_card(p.card),
                if p.orientation.is_up() { "face up" } else { "face down" }
            )];
            parts.extend(rotation(p.orientation.rotation, rotations));
            parts.push(position(i, n));
            parts.join(", ")
        })
        .collect()
}

/// Accepts layouts with or without the leading `L`/`C`, and bare card names
/// as unrotated face-up cards.
fn normalize_layout(line: &str) -> String {
    let mut tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
    let tagged = matches!(tokens.first().map(|t| t.to_ascii_uppercase()), Some(t) if t == "L" || t == "C");
    for t in tokens.iter_mut().skip(usize::from(tagged)) {
        if !t.contains(':') {
            t.push_str(":u0");
        }
    }
    if !tagged {
        tokens.insert(0, "L".into());
    }
    tokens.join(" ")
}

fn assistant_turn(codec: &dyn Strategy, line: &str) -> Result<(String, Vec<String>)> {
    let hand = Hand::new(NAMES.parse_cards(line)?, codec.config())?;
    let enc = codec.encode(&hand, None)?;
    Ok((NAMES.format_cards(&enc.hidden), instructions(&enc.message, codec.config().rotations)))
}

fn magician_turn(codec: &dyn Strategy, line: &str) -> Result<String> {
    let observed = parse_observed(&normalize_layout(line), NAMES)?;
    Ok(NAMES.format_cards(&codec.decode(&observed)?))
}

/// Reads one hand (assistant) or one layout (magician) per line until end of
/// input. Unreadable lines are reported and skipped.
pub fn perform(
    role: Role,
    codec_name: CodecName,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    json: bool,
) -> std::io::Result<()> {
    let codec = build_codec(codec_name, CodecParams::default()).expect("standard-deck codecs build");
    let k = codec.config().hand_size;
    let prompt = match role {
        Role::Assistant => format!("deal {k} cards (e.g. 7D QH 3S):"),
        Role::Magician => "describe the layout (e.g. QH:u1 ?:d0):".to_string(),
    };
    let params = json!({ "role": role, "codec": codec_name.name() });
    if !json {
        writeln!(out, "{prompt}")?;
    }
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            return Ok(());
        }
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let (lines, result) = match role {
            Role::Assistant => match assistant_turn(codec.as_ref(), text) {
                Ok((hidden, steps)) => {
                    let mut lines = vec![format!("hidden: {hidden}")];
                    lines.extend(steps.iter().cloned());
                    (lines, json!({ "hidden": hidden, "instructions": steps }))
                }
                Err(e) => (
                    vec![format!("could not use that hand: {e}; try again")],
                    json!({ "error": e.to_string() }),
                ),
            },
            Role::Magician => match magician_turn(codec.as_ref(), text) {
                Ok(hidden) => (vec![hidden.clone()], json!({ "hidden": hidden })),
                Err(e) => (
                    vec![format!("could not read that layout: {e}; try again")],
                    json!({ "error": e.to_string() }),
                ),
            },
        };
        if json {
            let envelope = json!({ "command": "perform", "params": params, "result": result });
            writeln!(out, "{envelope}")?;
        } else {
            for l in lines {
                writeln!(out, "{l}")?;
            }
            writeln!(out, "{prompt}")?;
        }
        out.flush()?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_ordinals() {
        assert_eq!(position(0, 4), "leftmost");
        assert_eq!(position(1, 4), "2nd from left");
        assert_eq!(position(2, 4), "3rd from left");
        assert_eq!(position(3, 4), "rightmost");
        assert_eq!(ordinal(11), "11th");
        assert_eq!(ordinal(22), "22nd");
    }

    #[test]
    fn layouts_are_normalized() {
        assert_eq!(normalize_layout("QH:u1 ?:d0"), "L QH:u1 ?:d0");
        assert_eq!(normalize_layout("2c 3c"), "L 2c:u0 3c:u0");
        assert_eq!(normalize_layout("L QH:u1"), "L QH:u1");
    }
}
