//! Browser bindings: enumerate trees with their composition plans, build Hodge data and compute
//! minimal models from JSON text. Every export returns a JSON string or throws a message.

use hodge_core::commands::{cmd_build_hodge, cmd_transfer, CommandOutput, TransferOptions};
use hodge_core::tree::{enumerate_trees, CompositionPlan};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest leaf count the page will draw.
pub const MAX_DRAWN_LEAVES: usize = 6;

pub const EXAMPLES: [(&str, &str); 4] = [
    (
        "frobenius_dga",
        include_str!("../../core/data/frobenius_dga.json"),
    ),
    (
        "koszul_pair",
        include_str!("../../core/data/koszul_pair.json"),
    ),
    (
        "contractible",
        include_str!("../../core/data/contractible.json"),
    ),
    (
        "example_5dim",
        include_str!("../../core/data/example_5dim.json"),
    ),
];

fn finish(out: CommandOutput) -> String {
    out.render(true)
}

pub fn trees_json(n: usize) -> Result<String, String> {
    if n > MAX_DRAWN_LEAVES {
        return Err(format!("at most {MAX_DRAWN_LEAVES} leaves"));
    }
    let trees = enumerate_trees(n).map_err(|e| e.to_string())?;
    let items: Vec<_> = trees
        .iter()
        .map(|t| {
            let plan = CompositionPlan::of(t).map_err(|e| e.to_string())?;
            Ok(json!({ "tree": t.canonical(), "plan": plan.render(), "height": t.height() }))
        })
        .collect::<Result<_, String>>()?;
    Ok(json!({ "n": n, "count": trees.len(), "trees": items }).to_string())
}

pub fn build_hodge_json(text: &str) -> String {
    finish(cmd_build_hodge(text))
}

pub fn transfer_json(text: &str, cutoff: Option<usize>) -> String {
    finish(cmd_transfer(
        text,
        TransferOptions {
            cutoff,
            require_harmonious: Some(true),
            parallel: false,
        },
    ))
}

pub fn examples_json() -> String {
    let map: serde_json::Map<String, serde_json::Value> = EXAMPLES
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    serde_json::Value::Object(map).to_string()
}

#[wasm_bindgen]
pub fn trees(n: usize) -> Result<String, JsError> {
    trees_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = buildHodge)]
pub fn build_hodge(text: &str) -> String {
    build_hodge_json(text)
}

/// `cutoff = 0` uses the file's default.
#[wasm_bindgen]
pub fn transfer(text: &str, cutoff: usize) -> String {
    transfer_json(text, (cutoff > 0).then_some(cutoff))
}

#[wasm_bindgen]
pub fn examples() -> String {
    examples_json()
}
