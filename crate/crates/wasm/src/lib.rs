//! Browser bindings: list roots, compile a root into automata, and sample its coefficients.
//!
//! The plain functions return JSON strings and are tested natively; the `#[wasm_bindgen]`
//! wrappers only convert errors into JavaScript exceptions.

use christol::automaton::Dfao;
use christol::gf::parse_field_spec;
use christol::pipeline::{compile as compile_root, select_root, Options, RootChoice};
use christol::polynomial::parse_poly;
use christol::prep::{degree_height, root_prefixes, MinimalData};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Automaton size ceiling for interactive use.
const DEMO_STATE_CAP: usize = 200_000;
/// Upper limit on sampled coefficients.
const MAX_SAMPLES: usize = 1 << 16;

fn setup(field: &str, poly: &str) -> christol::Result<MinimalData> {
    let f = parse_field_spec(field)?.build()?;
    degree_height(&parse_poly(&f, poly)?)
}

fn choice(root: Option<usize>) -> RootChoice {
    root.map_or(RootChoice::Unique, RootChoice::Index)
}

#[derive(Serialize)]
struct RootList {
    r: usize,
    roots: Vec<Vec<String>>,
}

/// `{"r": .., "roots": [["0","1",..], ..]}` with elements printed in field notation.
pub fn list_roots_json(field: &str, poly: &str) -> christol::Result<String> {
    let md = setup(field, poly)?;
    let (r, roots) = root_prefixes(&md)?;
    let f = md.field();
    let roots = roots.iter().map(|p| p.iter().map(|&c| f.format(c)).collect()).collect();
    Ok(serde_json::to_string(&RootList { r, roots }).expect("plain data"))
}

#[derive(Serialize)]
struct CompileOut {
    report: serde_json::Value,
    reverse: serde_json::Value,
    forward: Option<serde_json::Value>,
    reverse_dot: String,
    forward_dot: Option<String>,
}

fn automaton_value(a: &Dfao) -> serde_json::Value {
    serde_json::from_str(&a.to_json()).expect("automaton JSON parses")
}

/// Report plus minimal automata (JSON and DOT) for the chosen root.
pub fn compile_json(
    field: &str,
    poly: &str,
    root: Option<usize>,
    forward: bool,
    verify: usize,
) -> christol::Result<String> {
    let md = setup(field, poly)?;
    let prefix = select_root(&md, &choice(root))?;
    let opts = Options { forward, verify, precision: verify.max(256), state_cap: DEMO_STATE_CAP, ..Options::default() };
    let c = compile_root(&md, &prefix, &opts)?;
    let out = CompileOut {
        report: serde_json::to_value(&c.report).expect("plain data"),
        reverse: automaton_value(&c.reverse),
        forward: c.forward.as_ref().map(automaton_value),
        reverse_dot: c.reverse.to_dot(),
        forward_dot: c.forward.as_ref().map(Dfao::to_dot),
    };
    Ok(serde_json::to_string(&out).expect("plain data"))
}

/// Coefficient indices `a_0 .. a_{count-1}` of the chosen root, read off its minimal automaton.
pub fn coefficient_indices(field: &str, poly: &str, root: Option<usize>, count: usize) -> christol::Result<Vec<u32>> {
    let md = setup(field, poly)?;
    let prefix = select_root(&md, &choice(root))?;
    let opts = Options { verify: 0, state_cap: DEMO_STATE_CAP, ..Options::default() };
    let c = compile_root(&md, &prefix, &opts)?;
    Ok((0..count.min(MAX_SAMPLES) as u64).map(|n| c.reverse.eval(n).index()).collect())
}

fn js_err(e: christol::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn root_arg(root: i32) -> Option<usize> {
    usize::try_from(root).ok()
}

/// JSON listing of roots; throws on bad input.
#[wasm_bindgen(js_name = listRoots)]
pub fn list_roots(field: &str, poly: &str) -> Result<String, JsError> {
    list_roots_json(field, poly).map_err(js_err)
}

/// JSON report and automata; a negative `root` asks for the unique root.
#[wasm_bindgen]
pub fn compile(field: &str, poly: &str, root: i32, forward: bool, verify: usize) -> Result<String, JsError> {
    compile_json(field, poly, root_arg(root), forward, verify).map_err(js_err)
}

/// Coefficient indices for drawing; a negative `root` asks for the unique root.
#[wasm_bindgen]
pub fn coefficients(field: &str, poly: &str, root: i32, count: usize) -> Result<Vec<u32>, JsError> {
    coefficient_indices(field, poly, root_arg(root), count).map_err(js_err)
}
