//! Command-line front end: argument parsing, dispatch and output formatting.

mod perform;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};

use cardtricks::bounds::{emit_sequence, emit_table, SequenceForm, SequenceId, TableId, Variant};
use cardtricks::codecs::{build_codec, CodecName, CodecParams, Strategy};
use cardtricks::synthesis::{
    max_feasible_deck, synthesize, verify_strategy, Family, Obstruction, ScanOptions, StrategyTable,
    Synthesis, VerifyMode, DEFAULT_GUARD,
};
use cardtricks::wire::{parse_observed, serialize_message, CardNaming};
use cardtricks::{Chooser, Error, Hand};
use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

pub use perform::Role;

/// Seed used by sampled verification unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Parser, Debug)]
#[command(name = "cardtricks", version, about = "Card-trick protocols, deck-size bounds and strategy synthesis")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximum deck size or upper bound for a variant.
    Bounds(BoundsArgs),
    /// A table of deck sizes by rotations and hand size.
    Table(TableArgs),
    /// Leading terms of a deck-size sequence.
    Sequence(SequenceArgs),
    /// Encode a hand into a table layout.
    Encode(EncodeArgs),
    /// Recover the hidden card(s) from an observed layout.
    Decode(DecodeArgs),
    /// Check a codec or strategy table by exhaustive or sampled round-trips.
    Verify(VerifyArgs),
    /// Build a strategy by brute force, or find the largest feasible deck.
    Synthesize(SynthesizeArgs),
    /// Play the assistant or the magician interactively.
    Perform(PerformArgs),
}

fn names<T: Copy>(all: &[T], name: impl Fn(T) -> String) -> Vec<String> {
    all.iter().map(|&x| name(x)).collect()
}

fn variant_names() -> PossibleValuesParser {
    PossibleValuesParser::new(names(&Variant::ALL, |v| v.name().to_string()))
}

fn codec_names() -> PossibleValuesParser {
    PossibleValuesParser::new(names(&CodecName::ALL, |c| c.name().to_string()))
}

fn family_names() -> PossibleValuesParser {
    PossibleValuesParser::new(names(&Family::ALL, |f| f.name().to_string()))
}

fn table_names() -> PossibleValuesParser {
    PossibleValuesParser::new(["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "T11", "T12"])
}

fn sequence_names() -> PossibleValuesParser {
    PossibleValuesParser::new(names(&SequenceId::ALL, |s| format!("{s:?}")))
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, value_parser = variant_names())]
    variant: String,
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 1)]
    r: u64,
    /// Number of hidden cards, for the multi-card variants.
    #[arg(long, default_value_t = 2)]
    c: u64,
}

#[derive(Args, Debug, Serialize)]
struct TableArgs {
    #[arg(long, value_parser = table_names(), ignore_case = true)]
    id: String,
}

#[derive(Args, Debug, Serialize)]
struct SequenceArgs {
    #[arg(long, value_parser = sequence_names(), ignore_case = true)]
    id: String,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Print deck sizes instead of the catalogued terms where they differ.
    #[arg(long)]
    deck_sizes: bool,
}

#[derive(Args, Debug, Serialize)]
struct CodecArgs {
    #[arg(long, value_parser = codec_names())]
    codec: String,
    /// Hand size; defaults to the codec's usual shape.
    #[arg(long)]
    k: Option<usize>,
    /// Rotations per card.
    #[arg(long)]
    r: Option<u32>,
    /// Number of hidden cards.
    #[arg(long)]
    c: Option<usize>,
    /// Deck size; defaults to the largest the codec supports.
    #[arg(long)]
    n: Option<u32>,
    /// Read and write numeric card ids starting from 1.
    #[arg(long)]
    one_based: bool,
}

#[derive(Args, Debug, Serialize)]
struct EncodeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    codec: CodecArgs,
    /// Cards dealt, e.g. "QH 7D 3S" or "3 5 9".
    #[arg(long)]
    hand: String,
    /// Cards chosen by the audience, for audience-chooses codecs.
    #[arg(long)]
    hidden: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct DecodeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    codec: CodecArgs,
    /// Observed layout, e.g. "L QH:u1 ?:d0".
    #[arg(long)]
    message: String,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_parser = codec_names(), conflicts_with = "table", required_unless_present = "table")]
    codec: Option<String>,
    /// Strategy table in JSON-lines form.
    #[arg(long)]
    table: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    n: Option<u32>,
    /// Try every input (the default).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Try this many random inputs instead.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the full report as JSON to this file.
    #[arg(long)]
    report: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct SynthesizeArgs {
    #[arg(long, value_parser = family_names())]
    family: String,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Number of hidden cards, for the multi families.
    #[arg(long, default_value_t = 2)]
    c: usize,
    /// Deck size. Without it, the largest feasible deck is searched for.
    #[arg(long)]
    n: Option<u32>,
    /// Write the strategy table here instead of standard output.
    #[arg(long)]
    out: Option<String>,
    /// Largest enumeration (hands plus messages) attempted.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: u64,
}

#[derive(Args, Debug, Serialize)]
struct PerformArgs {
    #[arg(long, value_enum)]
    role: Role,
    #[arg(long, value_parser = PossibleValuesParser::new(["cheney5", "mulcahy4", "three-card"]))]
    codec: String,
}

/// Domain failures; reported with exit code 1.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Io(std::io::Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
            Failure::Check(s) => f.write_str(s),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn big_json(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

struct Output<'a> {
    format: Format,
    command: &'static str,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    /// Prints `text`, or the JSON envelope around `result`.
    fn emit(&mut self, params: &impl Serialize, text: &str, result: Value) -> std::io::Result<()> {
        match self.format {
            Format::Json => {
                let envelope = json!({
                    "command": self.command,
                    "params": params,
                    "result": result,
                });
                writeln!(self.out, "{}", serde_json::to_string(&envelope)?)
            }
            _ => {
                write!(self.out, "{text}")?;
                if !text.is_empty() && !text.ends_with('\n') {
                    writeln!(self.out)?;
                }
                Ok(())
            }
        }
    }
}

fn naming(strategy: &dyn Strategy, one_based: bool) -> CardNaming {
    match strategy.naming() {
        CardNaming::Numeric { .. } => CardNaming::Numeric { one_based },
        other => other,
    }
}

fn codec_from(args: &CodecArgs) -> Result<Box<dyn Strategy>, Error> {
    let name: CodecName = args.codec.parse()?;
    build_codec(
        name,
        CodecParams {
            k: args.k,
            r: args.r,
            c: args.c,
            n: args.n,
        },
    )
}

fn bounds(args: &BoundsArgs, out: &mut Output) -> Outcome {
    let variant: Variant = args.variant.parse()?;
    let result = variant.evaluate(args.k, args.r, args.c)?;
    let text = result.value.to_string();
    out.emit(args, &text, serde_json::to_value(&result).map_err(std::io::Error::from)?)?;
    Ok(())
}

fn table(args: &TableArgs, out: &mut Output) -> Outcome {
    let id: TableId = args.id.parse()?;
    let table = emit_table(id)?;
    out.emit(args, &table.to_tsv(), serde_json::to_value(&table).map_err(std::io::Error::from)?)?;
    Ok(())
}

fn sequence(args: &SequenceArgs, out: &mut Output) -> Outcome {
    let id: SequenceId = args.id.parse()?;
    let form = if args.deck_sizes {
        SequenceForm::DeckSize
    } else {
        SequenceForm::Oeis
    };
    let terms = emit_sequence(id, args.count, form)?;
    let sep = if out.format == Format::Tsv { "\t" } else { ", " };
    let text = terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(sep);
    out.emit(args, &text, Value::Array(terms.iter().map(big_json).collect()))?;
    Ok(())
}

fn encode(args: &EncodeArgs, out: &mut Output) -> Outcome {
    let codec = codec_from(&args.codec)?;
    let naming = naming(codec.as_ref(), args.codec.one_based);
    let hand = Hand::new(naming.parse_cards(&args.hand)?, codec.config())?;
    let hidden = args.hidden.as_deref().map(|h| naming.parse_cards(h)).transpose()?;
    let enc = codec.encode(&hand, hidden.as_deref())?;
    let message = serialize_message(&enc.message, naming);
    let hidden_text = naming.format_cards(&enc.hidden);
    let text = match codec.config().chooser {
        Chooser::Assistant => format!("hidden: {hidden_text}\n{message}\n"),
        Chooser::Audience => format!("{message}\n"),
    };
    let result = json!({ "hidden": hidden_text, "message": message });
    out.emit(args, &text, result)?;
    Ok(())
}

fn decode(args: &DecodeArgs, out: &mut Output) -> Outcome {
    let codec = codec_from(&args.codec)?;
    let naming = naming(codec.as_ref(), args.codec.one_based);
    let observed = parse_observed(&args.message, naming)?;
    let hidden = naming.format_cards(&codec.decode(&observed)?);
    out.emit(args, &hidden, json!({ "hidden": hidden }))?;
    Ok(())
}

fn verify(args: &VerifyArgs, out: &mut Output) -> Outcome {
    let strategy: Box<dyn Strategy> = match (&args.codec, &args.table) {
        (Some(name), _) => codec_from(&CodecArgs {
            codec: name.clone(),
            k: args.k,
            r: args.r,
            c: args.c,
            n: args.n,
            one_based: false,
        })?,
        (None, Some(path)) => Box::new(StrategyTable::read_jsonl(BufReader::new(File::open(path)?))?),
        (None, None) => unreachable!("clap requires --codec or --table"),
    };
    let mode = match args.sample {
        Some(cases) => VerifyMode::Sampled {
            cases,
            seed: args.seed,
        },
        None => VerifyMode::Exhaustive,
    };
    let report = verify_strategy(strategy.as_ref(), mode)?;
    let value = serde_json::to_value(&report).map_err(std::io::Error::from)?;
    if let Some(path) = &args.report {
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut f, &value).map_err(std::io::Error::from)?;
        writeln!(f)?;
    }
    let text = format!(
        "codec: {}\ncases: {}\nfailures: {}\ncollisions: {}\ndistinct messages: {}\nresult: {}\n",
        strategy.name(),
        report.cases,
        report.failure_count,
        report.collisions,
        report.distinct_messages,
        if report.passed() { "PASS" } else { "FAIL" }
    );
    out.emit(args, &text, value)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "verification failed: {} failures, {} collisions",
            report.failure_count, report.collisions
        )))
    }
}

fn describe(o: &Obstruction) -> String {
    match o {
        Obstruction::Hall(w) => format!(
            "infeasible: {} hands can only reach {} messages",
            w.hands.len(),
            w.messages
        ),
        Obstruction::Crowded {
            shown,
            candidates,
            arrangements,
        } => format!(
            "infeasible: shown cards {:?} leave {candidates} candidates for {arrangements} layouts",
            shown.iter().map(|c| c.0).collect::<Vec<_>>()
        ),
        Obstruction::Unsatisfiable => "infeasible: no decoder labeling exists".into(),
    }
}

fn synthesize_cmd(args: &SynthesizeArgs, out: &mut Output) -> Outcome {
    let family: Family = args.family.parse()?;
    let Some(n) = args.n else {
        let template = family.config(0, args.k, args.r, args.c);
        let scan = max_feasible_deck(
            &template,
            ScanOptions {
                guard: args.guard,
                ..Default::default()
            },
        )?;
        let text = match scan.max_deck {
            Some(n) => format!("max deck: {n}"),
            None => "max deck: none".to_string(),
        };
        out.emit(args, &text, serde_json::to_value(&scan).map_err(std::io::Error::from)?)?;
        return Ok(());
    };
    let config = family.config(n, args.k, args.r, args.c);
    match synthesize(&config, args.guard)? {
        Synthesis::Feasible(table) => {
            let rows = table.rows().len();
            let text = match &args.out {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(path)?);
                    table.write_jsonl(&mut f)?;
                    f.flush()?;
                    format!("feasible: {rows} rows written to {path}\n")
                }
                None => table.to_jsonl(),
            };
            let result = json!({ "feasible": true, "rows": rows, "out": args.out });
            if out.format == Format::Json && args.out.is_none() {
                let table: Vec<Value> = table
                    .to_jsonl()
                    .lines()
                    .map(|l| serde_json::from_str(l).expect("table lines are JSON"))
                    .collect();
                out.emit(args, "", json!({ "feasible": true, "rows": rows, "table": table }))?;
            } else {
                out.emit(args, &text, result)?;
            }
        }
        Synthesis::Infeasible(o) => {
            let value = json!({ "feasible": false, "obstruction": o });
            out.emit(args, &describe(&o), value)?;
        }
    }
    Ok(())
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code: 0 on success, 1 on a domain error, 2 on a usage error.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let command = match &cli.command {
        Command::Bounds(_) => "bounds",
        Command::Table(_) => "table",
        Command::Sequence(_) => "sequence",
        Command::Encode(_) => "encode",
        Command::Decode(_) => "decode",
        Command::Verify(_) => "verify",
        Command::Synthesize(_) => "synthesize",
        Command::Perform(_) => "perform",
    };
    let mut output = Output {
        format: cli.format,
        command,
        out,
    };
    let result = match &cli.command {
        Command::Bounds(a) => bounds(a, &mut output),
        Command::Table(a) => table(a, &mut output),
        Command::Sequence(a) => sequence(a, &mut output),
        Command::Encode(a) => encode(a, &mut output),
        Command::Decode(a) => decode(a, &mut output),
        Command::Verify(a) => verify(a, &mut output),
        Command::Synthesize(a) => synthesize_cmd(a, &mut output),
        Command::Perform(a) => {
            let codec: CodecName = a.codec.parse().expect("restricted by clap");
            perform::perform(a.role, codec, input, output.out, cli.format == Format::Json).map_err(Failure::from)
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
