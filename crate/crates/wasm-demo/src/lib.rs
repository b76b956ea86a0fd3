//! Browser playground: paste a model, run the detectors, convert between
//! the two canonical views, and draw the reachable state space.
//!
//! Every entry point returns a JSON string with either the result payload
//! or an `error` field, so the page script stays a few lines of vanilla
//! JavaScript. The functions are plain Rust and unit-tested on the host;
//! `wasm-bindgen` only adds the browser bindings.

mod svg;

use wasm_bindgen::prelude::*;

use imds::detect::check_all;
use imds::export::{build_report, report_json, text_report};
use imds::lts::{Lts, LtsLimits};
use imds::model::{validate_spec, SourceView, SystemSpec};
use imds::parse::{load_source, render};

/// The bundled two-semaphore example, preloaded by the page.
#[wasm_bindgen]
pub fn example_source() -> String {
    include_str!("../../core/testdata/two_semaphores.imds").to_string()
}

/// A second bundled example: three dining philosophers, whose state space
/// contains one reachable total-deadlock configuration.
#[wasm_bindgen]
pub fn philosophers_source() -> String {
    include_str!("../../core/testdata/philosophers_3.imds").to_string()
}

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

/// Parses, instantiates and validates, collecting warnings.
fn load(source: &str) -> Result<(SystemSpec, Vec<String>), String> {
    let loaded = load_source(source).map_err(|e| e.to_string())?;
    let mut warnings = loaded.warnings;
    let report = validate_spec(&loaded.spec);
    warnings.extend(report.warnings.iter().map(|w| w.to_string()));
    if !report.errors.is_empty() {
        return Err(report
            .errors
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("\n"));
    }
    Ok((loaded.spec, warnings))
}

fn build(spec: &SystemSpec, max_states: u32) -> Result<Lts, String> {
    Lts::build(
        spec,
        &LtsLimits {
            max_states: max_states as usize,
            max_transitions: 20 * max_states as usize,
        },
    )
    .map_err(|e| e.to_string())
}

/// Runs the full detector batch. Returns `{report, json, warnings}` where
/// `report` is the human-readable text and `json` the canonical record.
#[wasm_bindgen]
pub fn check_system(source: &str, max_states: u32) -> String {
    let (spec, warnings) = match load(source) {
        Ok(x) => x,
        Err(e) => return err_json(e),
    };
    let lts = match build(&spec, max_states) {
        Ok(l) => l,
        Err(e) => return err_json(e),
    };
    let analysis = check_all(&lts, &spec);
    serde_json::json!({
        "report": text_report(&spec, &lts, &analysis),
        "json": report_json(&build_report(&spec, &lts, &analysis)),
        "deadlock": analysis.any_deadlock(),
        "warnings": warnings,
    })
    .to_string()
}

/// Re-renders the model grouped by servers or by agents.
#[wasm_bindgen]
pub fn convert_view(source: &str, view: &str) -> String {
    let target = match view {
        "server" => SourceView::Server,
        "agent" => SourceView::Agent,
        other => return err_json(format!("unknown view `{other}`")),
    };
    let (spec, warnings) = match load(source) {
        Ok(x) => x,
        Err(e) => return err_json(e),
    };
    serde_json::json!({
        "text": render(&spec, target),
        "warnings": warnings,
    })
    .to_string()
}

/// Draws the reachable state space as an SVG document.
#[wasm_bindgen]
pub fn state_graph_svg(source: &str, max_states: u32) -> String {
    let (spec, _) = match load(source) {
        Ok(x) => x,
        Err(e) => return err_json(e),
    };
    let lts = match build(&spec, max_states) {
        Ok(l) => l,
        Err(e) => return err_json(e),
    };
    let terminals = lts.terminal_states();
    serde_json::json!({
        "svg": svg::render_svg(&lts, &spec),
        "states": lts.state_count(),
        "transitions": lts.transitions().len(),
        "clean_terminals": terminals.clean.len(),
        "stuck_terminals": terminals.stuck.len(),
    })
    .to_string()
}
