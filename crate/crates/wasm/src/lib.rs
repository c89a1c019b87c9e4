//! Browser bindings. Every export takes and returns strings: JSON out,
//! plain text or a catalogue name in. The page in `www/` is the only
//! intended caller, but the functions are ordinary Rust on native
//! targets, which is how the tests below exercise them.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use viability::filtration::{viability_sequence, Iter, ViabilityReport};
use viability::gallery::{build_example, gallery_names};
use viability::instance::{parse_instance, Instance};
use viability::report::{run_report, ReportOptions};
use viability::set::PointSet;
use viability::space::Space;

fn iter_value(i: Iter) -> Value {
    match i {
        Iter::Finite(n) => json!(n),
        Iter::Infinite => json!("infinity"),
    }
}

/// Positions for the page's Hasse drawing: one row per poset depth,
/// cells tagged with their layer index (`null` for the stable core).
fn structure(space: &Space, c: &PointSet, v: &ViabilityReport) -> Value {
    let mut layer = vec![None; space.len()];
    for (n, a) in v.layers.iter().enumerate() {
        for x in a.iter() {
            layer[x.index()] = Some(n);
        }
    }
    let mut depth = vec![0usize; space.len()];
    let mut changed = true;
    while changed {
        changed = false;
        for &(face, cell) in space.covers() {
            if depth[cell.index()] <= depth[face.index()] {
                depth[cell.index()] = depth[face.index()] + 1;
                changed = true;
            }
        }
    }
    json!({
        "cells": space
            .cells()
            .map(|x| json!({
                "name": space.name(x),
                "layer": layer[x.index()],
                "depth": depth[x.index()],
                "constraint": c.contains(x),
            }))
            .collect::<Vec<_>>(),
        "covers": space
            .covers()
            .iter()
            .map(|&(f, g)| json!([space.name(f), space.name(g)]))
            .collect::<Vec<_>>(),
    })
}

fn payload(inst: &Instance, warnings: Vec<String>) -> String {
    let report = match run_report(inst, ReportOptions::everything()) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let value = json!({
        "ok": true,
        "warnings": warnings,
        "report": report.json(),
        "text": report.text(),
        "dot": viability::dot_graph(&inst.space, &report.viability),
        "structure": structure(&inst.space, &inst.c, &report.viability),
    });
    value.to_string()
}

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "ok": false, "error": msg.to_string() }).to_string()
}

/// The built-in catalogue with headline numbers, for the example picker.
#[wasm_bindgen]
pub fn catalogue() -> String {
    let rows: Vec<Value> = gallery_names()
        .iter()
        .map(|name| {
            let inst = build_example(name).expect("catalogue builds");
            let v = viability_sequence(&inst.c, &inst.dynamics).expect("catalogue runs");
            json!({
                "name": name,
                "cells": inst.space.len(),
                "constraint": inst.c.len(),
                "iter": iter_value(v.iter),
            })
        })
        .collect();
    Value::Array(rows).to_string()
}

/// Full run of one catalogue entry. Accepts the parametric names too,
/// e.g. `circle_9` or `torus_3_5`.
#[wasm_bindgen]
pub fn run_example(name: &str) -> String {
    match build_example(name) {
        Ok(g) => payload(&Instance::from_gallery(&g), Vec::new()),
        Err(e) => error(e),
    }
}

/// Parse and analyze a pasted instance in the text format.
#[wasm_bindgen]
pub fn analyze(text: &str) -> String {
    match parse_instance(text) {
        Ok((inst, warnings)) => {
            let warnings = warnings.iter().map(|w| w.to_string()).collect();
            payload(&inst, warnings)
        }
        Err(e) => error(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use viability::instance::emit_instance;

    fn parsed(s: &str) -> Value {
        serde_json::from_str(s).expect("valid json")
    }

    #[test]
    fn catalogue_rows_carry_the_picker_fields() {
        let rows = parsed(&catalogue());
        let rows = rows.as_array().unwrap();
        assert_eq!(rows.len(), gallery_names().len());
        for row in rows {
            assert!(row["name"].is_string());
            assert!(row["cells"].is_u64());
            assert!(row["constraint"].is_u64());
            assert!(row["iter"].is_u64() || row["iter"] == json!("infinity"));
        }
        assert_eq!(rows[0]["name"], json!("two_points"));
        assert_eq!(rows[0]["iter"], json!(2));
    }

    #[test]
    fn run_example_payload_matches_the_page_contract() {
        let v = parsed(&run_example("parabola_trap"));
        assert_eq!(v["ok"], json!(true));
        assert_eq!(v["report"]["iter"], json!(3));
        assert_eq!(v["report"]["expected_iter"]["match"], json!(true));
        assert!(v["text"].as_str().unwrap().contains("iter: 3"));
        assert!(v["dot"].as_str().unwrap().starts_with("digraph"));

        let cells = v["structure"]["cells"].as_array().unwrap();
        assert_eq!(cells.len(), 13);
        for cell in cells {
            assert!(cell["name"].is_string());
            assert!(cell["depth"].is_u64());
            assert!(cell["constraint"].is_boolean());
            assert!(cell["layer"].is_u64() || cell["layer"].is_null());
        }
        // Vertices sit below edges in the drawing.
        let depth_of = |n: &str| {
            cells
                .iter()
                .find(|c| c["name"] == json!(n))
                .unwrap()["depth"]
                .as_u64()
                .unwrap()
        };
        assert_eq!(depth_of("p2"), 0);
        assert_eq!(depth_of("s2"), 1);
        // The stable core is empty here, so every cell has a layer.
        assert!(cells.iter().all(|c| c["layer"].is_u64()));

        let covers = v["structure"]["covers"].as_array().unwrap();
        assert!(covers.contains(&json!(["p2", "s2"])));

        let parametric = parsed(&run_example("circle_9"));
        assert_eq!(parametric["report"]["iter"], json!(8));
    }

    #[test]
    fn run_example_rejects_unknown_names() {
        let v = parsed(&run_example("klein_bottle"));
        assert_eq!(v["ok"], json!(false));
        assert!(v["error"].as_str().unwrap().contains("klein_bottle"));
    }

    #[test]
    fn analyze_accepts_emitted_instances_and_rejects_noise() {
        let inst = Instance::from_gallery(&build_example("split_images").unwrap());
        let v = parsed(&analyze(&emit_instance(&inst)));
        assert_eq!(v["ok"], json!(true));
        assert_eq!(v["warnings"], json!([]));
        assert_eq!(v["report"]["iter"], json!(2));

        let v = parsed(&analyze("points: a b\nhasse: a c\n"));
        assert_eq!(v["ok"], json!(false));
        assert!(v["error"].is_string());
    }
}
