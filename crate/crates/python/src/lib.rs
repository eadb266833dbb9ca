//! Python bindings: bounds, sequences, tables, codecs and synthesis.

use cardtricks::bounds::{emit_sequence, emit_table, SequenceForm, SequenceId, TableId, Variant};
use cardtricks::codecs::{build_codec, CodecName, CodecParams, Strategy};
use cardtricks::synthesis::{
    max_feasible_deck, synthesize as run_synthesis, verify_strategy, Family, ScanOptions, Synthesis,
    VerifyMode, DEFAULT_GUARD,
};
use cardtricks::wire::{parse_observed, serialize_message, CardNaming};
use cardtricks::{Chooser, Error, Hand};
use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(cardtricks_py, CardTrickError, PyValueError);

fn err(e: Error) -> PyErr {
    CardTrickError::new_err(e.to_string())
}

/// Largest deck (or message count) for a named bound variant.
#[pyfunction]
#[pyo3(signature = (variant, k, r = 1, c = 2))]
fn bounds(variant: &str, k: u64, r: u64, c: u64) -> PyResult<BigUint> {
    let variant: Variant = variant.parse().map_err(err)?;
    Ok(variant.evaluate(k, r, c).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (id, count, deck_sizes = false))]
fn sequence(id: &str, count: usize, deck_sizes: bool) -> PyResult<Vec<BigUint>> {
    let id: SequenceId = id.parse().map_err(err)?;
    let form = if deck_sizes { SequenceForm::DeckSize } else { SequenceForm::Oeis };
    emit_sequence(id, count, form).map_err(err)
}

/// The table as TSV text, rows by R and columns by K.
#[pyfunction]
fn table(id: &str) -> PyResult<String> {
    let id: TableId = id.parse().map_err(err)?;
    Ok(emit_table(id).map_err(err)?.to_tsv())
}

/// A built codec. Cards are written as standard names (`QH`) for the
/// standard-deck tricks and as integers otherwise.
#[pyclass(frozen)]
struct Codec {
    inner: Box<dyn Strategy>,
    naming: CardNaming,
}

#[pymethods]
impl Codec {
    #[new]
    #[pyo3(signature = (name, k = None, r = None, c = None, n = None, one_based = false))]
    fn new(
        name: &str,
        k: Option<usize>,
        r: Option<u32>,
        c: Option<usize>,
        n: Option<u32>,
        one_based: bool,
    ) -> PyResult<Self> {
        let name: CodecName = name.parse().map_err(err)?;
        let inner = build_codec(name, CodecParams { k, r, c, n }).map_err(err)?;
        let naming = match inner.naming() {
            CardNaming::Numeric { .. } => CardNaming::Numeric { one_based },
            other => other,
        };
        Ok(Codec { inner, naming })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn deck_size(&self) -> u32 {
        self.inner.config().deck_size
    }

    #[getter]
    fn hand_size(&self) -> usize {
        self.inner.config().hand_size
    }

    #[getter]
    fn audience_chooses(&self) -> bool {
        self.inner.config().chooser == Chooser::Audience
    }

    /// Returns `(hidden, message)`.
    #[pyo3(signature = (hand, hidden = None))]
    fn encode(&self, hand: &str, hidden: Option<&str>) -> PyResult<(String, String)> {
        let hand = Hand::new(self.naming.parse_cards(hand).map_err(err)?, self.inner.config()).map_err(err)?;
        let hidden = hidden.map(|h| self.naming.parse_cards(h)).transpose().map_err(err)?;
        let enc = self.inner.encode(&hand, hidden.as_deref()).map_err(err)?;
        Ok((self.naming.format_cards(&enc.hidden), serialize_message(&enc.message, self.naming)))
    }

    fn decode(&self, message: &str) -> PyResult<String> {
        let observed = parse_observed(message, self.naming).map_err(err)?;
        Ok(self.naming.format_cards(&self.inner.decode(&observed).map_err(err)?))
    }

    /// Exhaustive unless `sample` is given.
    #[pyo3(signature = (sample = None, seed = 2024))]
    fn verify<'py>(&self, py: Python<'py>, sample: Option<u64>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let mode = match sample {
            Some(cases) => VerifyMode::Sampled { cases, seed },
            None => VerifyMode::Exhaustive,
        };
        let report = verify_strategy(self.inner.as_ref(), mode).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("passed", report.passed())?;
        d.set_item("cases", report.cases)?;
        d.set_item("failures", report.failure_count)?;
        d.set_item("collisions", report.collisions)?;
        d.set_item("distinct_messages", report.distinct_messages)?;
        d.set_item("reserved_violations", report.reserved_violations)?;
        Ok(d)
    }
}

/// Strategy table as JSONL for a feasible deck, `None` when infeasible.
#[pyfunction]
#[pyo3(signature = (family, k, n, r = 1, c = 1, guard = DEFAULT_GUARD))]
fn synthesize(family: &str, k: usize, n: u32, r: u32, c: usize, guard: u64) -> PyResult<Option<String>> {
    let family: Family = family.parse().map_err(err)?;
    match run_synthesis(&family.config(n, k, r, c), guard).map_err(err)? {
        Synthesis::Feasible(table) => Ok(Some(table.to_jsonl())),
        Synthesis::Infeasible(_) => Ok(None),
    }
}

#[pyfunction]
#[pyo3(signature = (family, k, r = 1, c = 1, guard = DEFAULT_GUARD))]
fn max_deck(family: &str, k: usize, r: u32, c: usize, guard: u64) -> PyResult<Option<u32>> {
    let family: Family = family.parse().map_err(err)?;
    let opts = ScanOptions { guard, ..Default::default() };
    Ok(max_feasible_deck(&family.config(0, k, r, c), opts).map_err(err)?.max_deck)
}

#[pymodule]
fn cardtricks_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CardTrickError", m.py().get_type::<CardTrickError>())?;
    m.add_class::<Codec>()?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(sequence, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(max_deck, m)?)?;
    Ok(())
}
