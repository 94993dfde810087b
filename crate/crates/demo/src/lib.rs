//! Browser bindings for the three operations of the demo page. Each returns
//! a JSON string; errors come back as a thrown string.
//!
//! The plain functions are usable (and tested) without a browser.

use nuset::parametricity::{iterate_types, TelescopeReport};
use nuset::shapes::{standard_shape, word_label};
use nuset::word::{compose, hom_count, Arity, Word};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn arity(nu: u32) -> Result<Arity, String> {
    Arity::new(nu as usize).map_err(|e| e.to_string())
}

/// Cells of the standard shape by dimension, each with its codimension-one
/// faces. With `geometric`, `n` is the geometric dimension and for ν = 1 the
/// augmentation level is hidden.
pub fn shape(nu: u32, n: u32, geometric: bool) -> Result<Value, String> {
    let nu = arity(nu)?;
    if n > 6 {
        return Err("the explorer stops at dimension 6".into());
    }
    let skip = usize::from(geometric && nu == Arity::SIMPLICIAL);
    let p = standard_shape(nu, n as usize + skip);
    let mut dims = Vec::new();
    for m in skip..=p.truncation() {
        let here = p.carrier(m);
        let cells: Vec<Value> = (0..here.size)
            .map(|i| {
                let faces: Vec<Value> = if m > skip {
                    p.face_tables()[m]
                        .iter()
                        .map(|(w, col)| json!({ "word": word_label(w), "face": p.carrier(m - 1).label(col[i]) }))
                        .collect()
                } else {
                    Vec::new()
                };
                json!({ "label": here.label(i), "faces": faces })
            })
            .collect();
        dims.push(json!({ "dim": m - skip, "cells": cells }));
    }
    let inventory: Vec<usize> = (skip..=p.truncation()).map(|m| p.carrier(m).size).collect();
    Ok(json!({ "nu": nu.get(), "inventory": inventory, "dims": dims }))
}

/// `g ∘ f`, with the sizes of the hom-sets involved.
pub fn compose_words(nu: u32, g: &str, f: &str) -> Result<Value, String> {
    let nu = arity(nu)?;
    let g = Word::parse(nu, g.trim()).map_err(|e| format!("g: {e}"))?;
    let f = Word::parse(nu, f.trim()).map_err(|e| format!("f: {e}"))?;
    let gf = compose(&g, &f).map_err(|e| e.to_string())?;
    let hom =
        |w: &Word| json!({ "from": w.stars(), "to": w.len(), "size": hom_count(nu, w.stars(), w.len()).to_string() });
    Ok(json!({
        "g": word_label(&g),
        "f": word_label(&f),
        "composite": word_label(&gf),
        "hom_g": hom(&g),
        "hom_f": hom(&f),
        "hom_composite": hom(&gf),
    }))
}

/// The iterated translation of the universe, flattened to a telescope.
pub fn telescope(nu: u32, steps: u32) -> Result<Value, String> {
    let nu = arity(nu)?;
    if steps > 4 {
        return Err("the telescope stops at 4 steps".into());
    }
    let report = TelescopeReport::new(&iterate_types(nu, steps as usize)).map_err(|e| e.to_string())?;
    serde_json::to_value(report).map_err(|e| e.to_string())
}

fn js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = shapeExplorer)]
pub fn shape_explorer(nu: u32, n: u32, geometric: bool) -> Result<String, JsValue> {
    js(shape(nu, n, geometric))
}

#[wasm_bindgen(js_name = composeWords)]
pub fn compose_js(nu: u32, g: &str, f: &str) -> Result<String, JsValue> {
    js(compose_words(nu, g, f))
}

#[wasm_bindgen(js_name = parametricityTelescope)]
pub fn telescope_js(nu: u32, steps: u32) -> Result<String, JsValue> {
    js(telescope(nu, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_inventory() {
        let v = shape(1, 2, true).unwrap();
        assert_eq!(v["inventory"], json!([3, 3, 1]));
        let top = &v["dims"][2]["cells"][0];
        assert_eq!(top["faces"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn square_faces() {
        let v = shape(2, 2, false).unwrap();
        assert_eq!(v["inventory"], json!([4, 4, 1]));
        assert!(v["dims"][0]["cells"][0]["faces"].as_array().unwrap().is_empty());
    }

    #[test]
    fn composes() {
        let v = compose_words(1, "**0", "*0").unwrap();
        assert_eq!(v["composite"], "*00");
        assert!(compose_words(2, "L*", "**").is_err());
    }

    #[test]
    fn square_telescope() {
        let v = telescope(2, 2).unwrap();
        assert_eq!(v["stats"], json!({ "0": 4, "1": 4 }));
        assert!(telescope(2, 9).is_err());
    }
}
