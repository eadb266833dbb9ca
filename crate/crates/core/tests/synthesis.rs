use cardtricks::bounds::{max_line_assistant, max_mulcahy_flip};
use cardtricks::codecs::Strategy;
use cardtricks::synthesis::{
    check_hall_witness, enumerate_hands, hand_count, is_feasible, max_feasible_deck, synthesize,
    verify_strategy, Family, Method, Obstruction, ScanOptions, StrategyTable, Synthesis, VerifyMode,
    DEFAULT_GUARD,
};
use cardtricks::wire::{parse_observed, CardNaming};
use cardtricks::{Arrangement, Error, TrickConfig};
use num_traits::ToPrimitive;

fn feasible_table(config: &TrickConfig) -> StrategyTable {
    match synthesize(config, DEFAULT_GUARD).unwrap() {
        Synthesis::Feasible(t) => t,
        Synthesis::Infeasible(o) => panic!("{config:?}: {o:?}"),
    }
}

fn assert_verified(table: &StrategyTable) {
    let report = verify_strategy(table, VerifyMode::Exhaustive).unwrap();
    assert!(report.passed(), "{:?}", &report.failures[..report.failures.len().min(3)]);
}

#[test]
fn synthesized_tables_verify() {
    for family in [
        Family::LineAudience,
        Family::CircleAudience,
        Family::LineAssistant,
        Family::CircleAssistant,
        Family::DupAudience,
    ] {
        for (k, r) in [(2, 1), (3, 1), (3, 2)] {
            let template = family.config(0, k, r, 1);
            let max = max_feasible_deck(&template, ScanOptions::default())
                .unwrap()
                .max_deck
                .unwrap();
            let table = feasible_table(&family.config(max, k, r, 1));
            assert_verified(&table);
        }
    }
}

#[test]
fn flip_families_use_sat() {
    let table = feasible_table(&Family::FlipAudience.config(7, 3, 1, 1));
    assert_verified(&table);
    match synthesize(&Family::FlipAudience.config(8, 3, 1, 1), DEFAULT_GUARD).unwrap() {
        Synthesis::Infeasible(Obstruction::Unsatisfiable) => {}
        other => panic!("expected no labeling at N=8, got {other:?}"),
    }
    let n = max_mulcahy_flip(3).unwrap().value_u64().unwrap() as u32;
    let table = feasible_table(&Family::FlipAssistant.config(n, 3, 1, 1));
    assert_verified(&table);
    assert_eq!(is_feasible(&Family::FlipAssistant.config(n, 3, 1, 1), DEFAULT_GUARD).unwrap().method, Method::Sat);
}

#[test]
fn two_hidden_tables() {
    let table = feasible_table(&Family::MultiAudience.config(7, 5, 1, 2));
    assert_verified(&table);
    let table = feasible_table(&Family::MultiAssistant.config(4, 3, 1, 2));
    assert_verified(&table);
    let table = feasible_table(&Family::MultiAssistant.config(7, 4, 1, 2));
    assert_verified(&table);
}

#[test]
fn assistant_infeasibility_has_checked_witness() {
    let n = max_line_assistant(3, 1).unwrap().value_u64().unwrap() as u32;
    let config = Family::LineAssistant.config(n + 1, 3, 1, 1);
    match synthesize(&config, DEFAULT_GUARD).unwrap() {
        Synthesis::Infeasible(Obstruction::Hall(w)) => {
            assert!(check_hall_witness(&config, &w).unwrap());
            let mut fake = w.clone();
            fake.messages += 1;
            assert!(!check_hall_witness(&config, &fake).unwrap());
        }
        other => panic!("expected a Hall witness, got {other:?}"),
    }
}

#[test]
fn audience_infeasibility_names_a_crowded_set() {
    let config = Family::CircleAudience.config(6, 3, 1, 1);
    match synthesize(&config, DEFAULT_GUARD).unwrap() {
        Synthesis::Infeasible(Obstruction::Crowded {
            candidates,
            arrangements,
            ..
        }) => assert!(candidates > arrangements),
        other => panic!("expected a crowded shown set, got {other:?}"),
    }
}

#[test]
fn table_jsonl_roundtrip_and_unused_messages() {
    let config = TrickConfig::new(6, 3);
    let table = feasible_table(&config);
    let text = table.to_jsonl();
    assert_eq!(text.lines().count(), 1 + 20);
    let back = StrategyTable::from_jsonl(&text).unwrap();
    assert_eq!(back.rows(), table.rows());
    assert_verified(&back);

    let naming = CardNaming::Numeric { one_based: false };
    let used: std::collections::HashSet<String> = text.lines().skip(1).map(|l| l.to_string()).collect();
    let mut unused = 0;
    for a in 0..6 {
        for b in 0..6 {
            if a == b {
                continue;
            }
            let msg = format!("L {a}:u0 {b}:u0");
            if used.iter().any(|l| l.contains(&format!("\"{msg}\""))) {
                continue;
            }
            let observed = parse_observed(&msg, naming).unwrap();
            assert!(matches!(back.decode(&observed), Err(Error::UnusedMessage(_))));
            unused += 1;
        }
    }
    assert_eq!(unused, 30 - 20);
}

#[test]
fn circle_tables_accept_any_starting_point() {
    let config = TrickConfig::new(5, 3).with_arrangement(Arrangement::Circle);
    let table = feasible_table(&config);
    let naming = CardNaming::Numeric { one_based: false };
    for row in table.rows() {
        let placed = &row.message.placed;
        let rotated = format!(
            "C {}:u0 {}:u0",
            placed[1].card.0, placed[0].card.0
        );
        let observed = parse_observed(&rotated, naming).unwrap();
        assert_eq!(table.decode(&observed).unwrap(), row.hidden);
    }
}

#[test]
fn guard_refuses_large_enumerations() {
    let config = TrickConfig::new(52, 5);
    assert_eq!(hand_count(&config).to_u64(), Some(2_598_960));
    assert!(matches!(enumerate_hands(&config, 1000), Err(Error::SizeGuard { .. })));
}

#[test]
fn deck_scans_are_downward_closed_for_small_shapes() {
    for family in [Family::LineAssistant, Family::CircleAssistant, Family::DupAssistant] {
        for k in 2..=3 {
            let scan = max_feasible_deck(&family.config(0, k, 1, 1), ScanOptions::default()).unwrap();
            assert!(scan.downward_closed, "{family} K={k}: {scan:?}");
        }
    }
}
