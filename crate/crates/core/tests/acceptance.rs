use std::time::{Duration, Instant};

use cardtricks::bounds::{
    bound_dup_assistant, bound_multi_assistant, bound_multi_audience, emit_sequence, emit_table,
    max_circle_assistant, max_circle_audience, max_dup_audience, max_line_assistant,
    max_line_audience, multi_assistant_closed_form, multi_assistant_scan,
    multi_audience_closed_form, multi_audience_scan, SequenceForm, SequenceId, TableId,
};
use cardtricks::codecs::{
    build_codec, Bctm2, BestTrick, Cheney, CodecName, CodecParams, DupK3, DupSignal, FlipAudience7,
    FlipRotate, Strategy, ThreeCard, TwoHiddenAudience, TwoHiddenK4N7,
};
use cardtricks::synthesis::{
    check_hall_witness, max_feasible_deck, synthesize, verify_strategy, Family, Obstruction,
    ScanOptions, Synthesis, VerifyMode, DEFAULT_GUARD,
};
use cardtricks::wire::{serialize_message, CardNaming};
use cardtricks::{Arrangement, Card, Error, Hand, TrickConfig};
use num_bigint::BigInt;

type Check = std::result::Result<String, String>;

fn within(start: Instant, limit: Duration, what: &str) -> std::result::Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{what} took {took:.2?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn fixture(path: &str) -> String {
    let full = format!("{}/tests/fixtures/{path}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&full).unwrap_or_else(|e| panic!("{full}: {e}"))
}

fn tables() -> Check {
    let start = Instant::now();
    let mut cells = 0;
    for (id, file) in [
        (TableId::T1, "T1"),
        (TableId::T2, "T2"),
        (TableId::T3, "T3"),
        (TableId::T4, "T4"),
        (TableId::T5, "T5"),
        (TableId::T6, "T6"),
        (TableId::T9, "T9"),
        (TableId::T10, "T10"),
        (TableId::T12, "T12"),
    ] {
        let expected = fixture(&format!("tables/{file}.tsv"));
        let table = emit_table(id).map_err(|e| format!("{file}: {e}"))?;
        if table.to_tsv() != expected {
            return Err(format!("{file} differs:\n{}", table.to_tsv()));
        }
        cells += table.cells.iter().map(Vec::len).sum::<usize>();
    }
    within(start, Duration::from_secs(1), "tables")?;
    Ok(format!("{cells} cells"))
}

fn sequences() -> Check {
    let start = Instant::now();
    let text = fixture("sequences.tsv");
    let mut terms = 0;
    for line in text.lines() {
        let mut parts = line.split('\t');
        let (id, form, values) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
        let id: SequenceId = id.parse().map_err(|e: Error| e.to_string())?;
        let form = match form {
            "deck-size" => SequenceForm::DeckSize,
            _ => SequenceForm::Oeis,
        };
        let expected: Vec<&str> = values.split(',').collect();
        let got = emit_sequence(id, expected.len(), form).map_err(|e| e.to_string())?;
        let got: Vec<String> = got.iter().map(|v| v.to_string()).collect();
        if got != expected {
            return Err(format!("{id:?}: got {got:?}"));
        }
        terms += got.len();
    }
    within(start, Duration::from_secs(1), "sequences")?;
    Ok(format!("{terms} terms"))
}

fn exhaustive_codecs() -> Vec<(&'static str, Box<dyn Strategy>, u64, Option<Duration>)> {
    vec![
        ("cheney5", Box::new(Cheney::classic()), 2_598_960, Some(Duration::from_secs(60))),
        ("mulcahy4", Box::new(FlipRotate::mulcahy4()), 270_725, Some(Duration::from_secs(10))),
        ("three-card", Box::new(ThreeCard::new()), 22_100, Some(Duration::from_secs(1))),
        ("flip-audience-7", Box::new(FlipAudience7::new()), 105, None),
        ("dup-k3", Box::new(DupK3::new()), 16, None),
        ("two-hidden-k4n7", Box::new(TwoHiddenK4N7::new()), 35, None),
        ("bctm2", Box::new(Bctm2::new(5, 1, 14).unwrap()), 2002, None),
        ("dup-signal", Box::new(DupSignal::new(4, 30).unwrap()), 0, None),
        (
            "best-trick",
            Box::new(BestTrick::new(27, 4, 1, Arrangement::Line).unwrap()),
            17_550,
            None,
        ),
    ]
}

fn exhaustive() -> Check {
    let mut notes = Vec::new();
    for (name, codec, cases, limit) in exhaustive_codecs() {
        let start = Instant::now();
        let report = verify_strategy(codec.as_ref(), VerifyMode::Exhaustive).map_err(|e| e.to_string())?;
        if !report.passed() {
            return Err(format!("{name}: {:?}", &report.failures[..report.failures.len().min(3)]));
        }
        if cases != 0 && report.cases != cases {
            return Err(format!("{name}: {} cases, expected {cases}", report.cases));
        }
        if let Some(limit) = limit {
            within(start, limit, name)?;
        }
        notes.push(format!("{name} {} in {:.1?}", report.cases, start.elapsed()));
    }
    Ok(notes.join(", "))
}

fn sampled() -> Check {
    let mut notes = Vec::new();
    let codecs: [(&str, Box<dyn Strategy>); 2] = [
        ("best-trick K=5 N=124", Box::new(BestTrick::new(124, 5, 1, Arrangement::Line).unwrap())),
        ("flip-rotate K=3 R=2 N=54", Box::new(FlipRotate::new(3, 2, 54).unwrap())),
    ];
    for (name, codec) in codecs {
        let start = Instant::now();
        let mode = VerifyMode::Sampled {
            cases: 1_000_000,
            seed: 2024,
        };
        let report = verify_strategy(codec.as_ref(), mode).map_err(|e| e.to_string())?;
        if report.failure_count != 0 || report.reserved_violations != 0 {
            return Err(format!("{name}: {:?}", &report.failures[..report.failures.len().min(3)]));
        }
        within(start, Duration::from_secs(30), name)?;
        notes.push(format!("{name} in {:.1?}", start.elapsed()));
    }
    Ok(notes.join(", "))
}

fn saturation() -> Check {
    for (name, codec, _, _) in exhaustive_codecs() {
        let report = verify_strategy(codec.as_ref(), VerifyMode::Exhaustive).map_err(|e| e.to_string())?;
        if report.collisions != 0 {
            return Err(format!("{name}: {} collisions", report.collisions));
        }
    }
    let over: Vec<(&str, cardtricks::Result<()>)> = vec![
        ("cheney5", Cheney::new(5, 53).map(drop)),
        ("mulcahy4", FlipRotate::new(4, 1, 53).map(drop)),
        ("three-card", ThreeCard::with_deck(53).map(drop)),
        ("flip-audience-7", FlipAudience7::with_deck(8).map(drop)),
        ("dup-k3", DupK3::with_deck(9).map(drop)),
        (
            "two-hidden-k4n7",
            build_codec(
                CodecName::TwoHiddenK4N7,
                CodecParams {
                    n: Some(8),
                    ..Default::default()
                },
            )
            .map(drop),
        ),
        ("bctm2", Bctm2::new(5, 1, 15).map(drop)),
        ("dup-signal", DupSignal::new(4, 31).map(drop)),
        ("best-trick", BestTrick::new(28, 4, 1, Arrangement::Line).map(drop)),
    ];
    for (name, result) in over {
        match result {
            Err(Error::Capacity { .. }) => {}
            other => return Err(format!("{name} at N+1: {other:?}")),
        }
    }
    Ok("collision-free at capacity, capacity error one above".into())
}

fn oracle() -> Check {
    let start = Instant::now();
    let opts = ScanOptions {
        guard: DEFAULT_GUARD,
        ..Default::default()
    };
    let mut checked = 0;
    let families: [(Family, fn(u64, u64) -> cardtricks::Result<cardtricks::bounds::BoundsResult>, u64); 4] = [
        (Family::LineAudience, max_line_audience, 1),
        (Family::CircleAudience, max_circle_audience, 2),
        (Family::LineAssistant, max_line_assistant, 1),
        (Family::CircleAssistant, max_circle_assistant, 2),
    ];
    for (family, formula, k_min) in families {
        for k in k_min..=4 {
            for r in 1..=2 {
                let scan = max_feasible_deck(&family.config(0, k as usize, r as u32, 1), opts)
                    .map_err(|e| format!("{family} K={k} R={r}: {e}"))?;
                let exact = formula(k, r).unwrap().value_u64().unwrap();
                if scan.max_deck.map(u64::from) != Some(exact) {
                    return Err(format!("{family} K={k} R={r}: scan {:?}, formula {exact}", scan.max_deck));
                }
                checked += 1;
            }
        }
    }
    for k in 1..=4u64 {
        let scan = max_feasible_deck(&Family::DupAudience.config(0, k as usize, 1, 1), opts)
            .map_err(|e| format!("dup-audience K={k}: {e}"))?;
        let exact = max_dup_audience(k).unwrap().value_u64().unwrap();
        if scan.max_deck.map(u64::from) != Some(exact) {
            return Err(format!("dup-audience K={k}: scan {:?}, formula {exact}", scan.max_deck));
        }
        checked += 1;
    }
    let flip = max_feasible_deck(&Family::FlipAudience.config(0, 3, 1, 1), opts).map_err(|e| e.to_string())?;
    if flip.max_deck != Some(7) {
        return Err(format!("flip-audience K=3 R=1: {:?}", flip.max_deck));
    }
    checked += 1;
    within(start, Duration::from_secs(300), "oracle scans")?;
    Ok(format!("{checked} families and shapes in {:.1?}", start.elapsed()))
}

fn derivations() -> Check {
    let d4 = bound_dup_assistant(4).unwrap().value_u64();
    let d5 = bound_dup_assistant(5).unwrap().value_u64();
    if (d4, d5) != (Some(18), Some(110)) {
        return Err(format!("duplicate-assistant D: {d4:?}, {d5:?}"));
    }
    for k in 2..=8u64 {
        for r in 1..=5u64 {
            let (audience, assistant) = if k > 2 {
                (
                    BigInt::from(bound_multi_audience(k, r, 2).unwrap().value),
                    BigInt::from(bound_multi_assistant(k, r, 2).unwrap().value),
                )
            } else {
                (
                    BigInt::from(multi_audience_scan(k, r, 2)),
                    BigInt::from(multi_assistant_scan(k, r, 2)),
                )
            };
            if audience != multi_audience_closed_form(k, r) {
                return Err(format!("two-hidden audience K={k} R={r}: {audience}"));
            }
            if assistant != multi_assistant_closed_form(k, r) {
                return Err(format!("two-hidden assistant K={k} R={r}: {assistant}"));
            }
        }
    }
    Ok("D(4)=18, D(5)=110, two-hidden scans agree for K<=8, R<=5".into())
}

fn negative() -> Check {
    let config = TrickConfig::new(4, 2).with_duplicates(true);
    match synthesize(&config, DEFAULT_GUARD).map_err(|e| e.to_string())? {
        Synthesis::Infeasible(Obstruction::Hall(w)) => {
            if !check_hall_witness(&config, &w).map_err(|e| e.to_string())? {
                return Err(format!("witness rejected: {w:?}"));
            }
            Ok(format!("{} hands share {} messages", w.hands.len(), w.messages))
        }
        other => Err(format!("expected a Hall obstruction, got {other:?}")),
    }
}

fn worked_examples() -> Check {
    let std = CardNaming::Standard;
    let three = ThreeCard::new();
    let hand = Hand::new(std.parse_cards("7D QH 3S").unwrap(), three.config()).unwrap();
    let enc = three.encode(&hand, None).map_err(|e| e.to_string())?;
    let got = (std.format_cards(&enc.hidden), serialize_message(&enc.message, std));
    if got != ("7D".to_string(), "L QH:u1 3S:d0".to_string()) {
        return Err(format!("three-card: {got:?}"));
    }

    let ids = |v: &[u32]| v.iter().map(|&x| Card(x - 1)).collect::<Vec<_>>();
    let one_based = |m: &cardtricks::Message| m.cards().iter().map(|c| c.0 + 1).collect::<Vec<_>>();

    let audience = TwoHiddenAudience::new(5, 1, 2, 7).unwrap();
    let hand = Hand::new(ids(&[2, 3, 4, 5, 6]), audience.config()).unwrap();
    let enc = audience.encode(&hand, Some(&ids(&[3, 5]))).map_err(|e| e.to_string())?;
    if one_based(&enc.message) != [4, 6, 2] {
        return Err(format!("two hidden, audience: {:?}", one_based(&enc.message)));
    }

    let bctm = Bctm2::new(5, 1, 14).unwrap();
    let hand = Hand::new(ids(&[2, 3, 7, 9, 13]), bctm.config()).unwrap();
    let enc = bctm.encode(&hand, None).map_err(|e| e.to_string())?;
    if (one_based(&enc.message), enc.hidden.clone()) != (vec![2, 9, 7], ids(&[3, 13])) {
        return Err(format!("two hidden, assistant: {enc:?}"));
    }

    let dup = DupSignal::new(6, 40).unwrap();
    let hand = Hand::new([6, 9, 9, 10, 10, 11].map(Card).to_vec(), dup.config()).unwrap();
    let enc = dup.encode(&hand, None).map_err(|e| e.to_string())?;
    let shown: Vec<u32> = enc.message.cards().iter().map(|c| c.0).collect();
    if shown != [9, 6, 10, 10, 11] || enc.hidden != [Card(9)] {
        return Err(format!("duplicates: {shown:?} hiding {:?}", enc.hidden));
    }
    Ok("four worked examples reproduced".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("bound tables", tables),
        ("sequence prefixes", sequences),
        ("exhaustive round-trips", exhaustive),
        ("sampled round-trips", sampled),
        ("capacity saturation", saturation),
        ("oracle equivalence", oracle),
        ("bound derivations", derivations),
        ("negative result", negative),
        ("worked examples", worked_examples),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        match check() {
            Ok(note) => println!("PASS {} {name}: {note}", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
