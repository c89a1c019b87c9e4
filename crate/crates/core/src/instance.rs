//! Self-contained text format for problem instances.
//!
//! One `key: value` pair per line. `points` fixes the cell order, `hasse`
//! lists face/cell pairs generating the order, `C` the constraint set,
//! `map` the dynamics (one line per constraint cell, image cells after the
//! argument), `stage` the rows of an optional deformation chain, and the
//! `expected_*` keys pin values a run is checked against. Blank lines and
//! lines starting with `#` are skipped. Emission is canonical: parsing an
//! emitted file and emitting again reproduces it byte for byte.

use crate::filtration::Iter;
use crate::gallery::{ExpectedHypotheses, GalleryInstance};
use crate::homotopy::HomotopyCertificate;
use crate::map::{CellMap, Dynamics, SetValuedMap};
use crate::set::PointSet;
use crate::space::{build_space, Cell, Space};

#[derive(thiserror::Error, Debug)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unknown cell `{cell}`")]
    UnknownCell { line: usize, cell: String },
    #[error("map misses {count} constraint cells, `{first}` first")]
    PartialMap { first: String, count: usize },
    #[error("line {line}: empty image list for `{cell}`")]
    EmptyImage { line: usize, cell: String },
}

/// Non-fatal oddities surfaced next to a successful parse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceWarning {
    /// Problems are posed for closed constraint sets; a non-closed C still
    /// yields a well-defined sequence, so this only warns.
    NonClosedC { missing: Vec<String> },
}

impl std::fmt::Display for InstanceWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InstanceWarning::NonClosedC { missing } => write!(
                f,
                "C is not closed: its closure adds {}",
                missing.join(" ")
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub iter: Option<Iter>,
    pub hypotheses: Option<ExpectedHypotheses>,
}

#[derive(Clone)]
pub struct Instance {
    pub name: Option<String>,
    pub space: Space,
    pub c: PointSet,
    pub dynamics: Dynamics,
    pub certificate: Option<HomotopyCertificate>,
    pub expected: Option<Expected>,
}

impl Instance {
    pub fn from_gallery(g: &GalleryInstance) -> Instance {
        Instance {
            name: Some(g.name.clone()),
            space: g.space.clone(),
            c: g.c.clone(),
            dynamics: g.dynamics.clone(),
            certificate: g.certificate.clone(),
            expected: Some(Expected {
                iter: Some(g.expected_iter),
                hypotheses: Some(g.expected_hypotheses),
            }),
        }
    }
}

const HYPOTHESIS_KEYS: [&str; 6] = [
    "continuous",
    "bdr_function",
    "usc",
    "conn",
    "bdr_weak",
    "bdr_strong",
];

fn hypothesis_fields(h: &ExpectedHypotheses) -> [Option<bool>; 6] {
    [
        h.continuous,
        h.bdr_function,
        h.usc,
        h.conn,
        h.bdr_weak,
        h.bdr_strong,
    ]
}

pub fn parse_instance(text: &str) -> Result<(Instance, Vec<InstanceWarning>), InstanceError> {
    let err = |line: usize, msg: String| InstanceError::Parse { line, msg };

    let mut name: Option<(usize, String)> = None;
    let mut points: Vec<(usize, String)> = Vec::new();
    let mut hasse: Vec<(usize, String, String)> = Vec::new();
    let mut c_names: Vec<(usize, String)> = Vec::new();
    let mut map_kind: Option<(usize, String)> = None;
    let mut map_rows: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut stage_rows: Vec<(usize, usize, String, String)> = Vec::new();
    let mut expected_iter: Option<(usize, String)> = None;
    let mut expected_hyp: Option<(usize, Vec<String>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, rest) = trimmed
            .split_once(':')
            .ok_or_else(|| err(line, format!("expected `key: value`, got `{trimmed}`")))?;
        let tokens: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        let scalar = |slot: &mut Option<(usize, String)>, what: &str| -> Result<(), InstanceError> {
            if slot.is_some() {
                return Err(err(line, format!("duplicate `{what}`")));
            }
            if tokens.len() != 1 {
                return Err(err(line, format!("`{what}` takes exactly one value")));
            }
            *slot = Some((line, tokens[0].clone()));
            Ok(())
        };
        match key.trim() {
            "name" => scalar(&mut name, "name")?,
            "points" => points.extend(tokens.iter().map(|t| (line, t.clone()))),
            "hasse" => {
                if tokens.len() != 2 {
                    return Err(err(line, "`hasse` takes a face and a cell".into()));
                }
                hasse.push((line, tokens[0].clone(), tokens[1].clone()));
            }
            "C" => c_names.extend(tokens.iter().map(|t| (line, t.clone()))),
            "map_kind" => scalar(&mut map_kind, "map_kind")?,
            "map" => {
                if tokens.is_empty() {
                    return Err(err(line, "`map` needs an argument cell".into()));
                }
                map_rows.push((line, tokens[0].clone(), tokens[1..].to_vec()));
            }
            "stage" => {
                if tokens.len() != 3 {
                    return Err(err(
                        line,
                        "`stage` takes an index, an argument and its image".into(),
                    ));
                }
                let idx: usize = tokens[0]
                    .parse()
                    .map_err(|_| err(line, format!("bad stage index `{}`", tokens[0])))?;
                stage_rows.push((line, idx, tokens[1].clone(), tokens[2].clone()));
            }
            "expected_iter" => scalar(&mut expected_iter, "expected_iter")?,
            "expected_hypotheses" => {
                if expected_hyp.is_some() {
                    return Err(err(line, "duplicate `expected_hypotheses`".into()));
                }
                expected_hyp = Some((line, tokens));
            }
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }

    if points.is_empty() {
        return Err(err(0, "no `points` line".into()));
    }
    let first_hasse_line = hasse.first().map(|(l, _, _)| *l).unwrap_or(0);
    let point_names: Vec<String> = points.iter().map(|(_, n)| n.clone()).collect();
    let pair_refs: Vec<(&str, &str)> = hasse.iter().map(|(_, f, c)| (f.as_str(), c.as_str())).collect();
    let space = build_space(point_names, &pair_refs).map_err(|e| InstanceError::Parse {
        line: first_hasse_line,
        msg: e.to_string(),
    })?;

    let resolve = |line: usize, name: &str| -> Result<Cell, InstanceError> {
        space.cell(name).ok_or(InstanceError::UnknownCell {
            line,
            cell: name.to_string(),
        })
    };

    let mut c = PointSet::new(space.clone());
    for (line, n) in &c_names {
        c.insert(resolve(*line, n)?);
    }

    let (kind_line, kind) = map_kind.ok_or_else(|| err(0, "no `map_kind` line".into()))?;
    let setvalued = match kind.as_str() {
        "function" => false,
        "setvalued" => true,
        other => {
            return Err(err(
                kind_line,
                format!("map_kind must be `function` or `setvalued`, got `{other}`"),
            ))
        }
    };

    let mut fn_pairs: Vec<(Cell, Cell)> = Vec::new();
    let mut set_pairs: Vec<(Cell, PointSet)> = Vec::new();
    let mut covered = PointSet::new(space.clone());
    for (line, arg, images) in &map_rows {
        let x = resolve(*line, arg)?;
        if !c.contains(x) {
            return Err(err(*line, format!("map argument `{arg}` is outside C")));
        }
        if covered.contains(x) {
            return Err(err(*line, format!("duplicate map entry for `{arg}`")));
        }
        covered.insert(x);
        if images.is_empty() {
            return Err(InstanceError::EmptyImage {
                line: *line,
                cell: arg.clone(),
            });
        }
        if setvalued {
            let mut img = PointSet::new(space.clone());
            for n in images {
                img.insert(resolve(*line, n)?);
            }
            set_pairs.push((x, img));
        } else {
            if images.len() != 1 {
                return Err(err(
                    *line,
                    format!("function images must be single cells, `{arg}` has {}", images.len()),
                ));
            }
            fn_pairs.push((x, resolve(*line, &images[0])?));
        }
    }
    let missing = c.difference(&covered);
    if !missing.is_empty() {
        return Err(InstanceError::PartialMap {
            first: space.name(missing.iter().next().unwrap()).to_string(),
            count: missing.len(),
        });
    }
    let dynamics = if setvalued {
        Dynamics::SetValued(SetValuedMap::from_pairs(c.clone(), &set_pairs).expect("rows checked"))
    } else {
        Dynamics::Function(CellMap::from_pairs(c.clone(), &fn_pairs).expect("rows checked"))
    };

    let certificate = if stage_rows.is_empty() {
        None
    } else {
        let count = stage_rows.iter().map(|(_, i, _, _)| i + 1).max().unwrap();
        let mut tables: Vec<Vec<(Cell, Cell)>> = vec![Vec::new(); count];
        for (line, i, arg, image) in &stage_rows {
            let x = resolve(*line, arg)?;
            if !c.contains(x) {
                return Err(err(*line, format!("stage argument `{arg}` is outside C")));
            }
            tables[*i].push((x, resolve(*line, image)?));
        }
        let mut stages = Vec::with_capacity(count);
        for (i, table) in tables.iter().enumerate() {
            let stage = CellMap::from_pairs(c.clone(), table).map_err(|e| {
                err(0, format!("stage {i}: {e}"))
            })?;
            stages.push(stage);
        }
        Some(HomotopyCertificate { stages })
    };

    let expected_iter = match expected_iter {
        None => None,
        Some((_, ref s)) if s == "infinity" => Some(Iter::Infinite),
        Some((line, s)) => Some(Iter::Finite(s.parse().map_err(|_| {
            err(line, format!("expected_iter must be a count or `infinity`, got `{s}`"))
        })?)),
    };
    let expected_hypotheses = match expected_hyp {
        None => None,
        Some((line, tokens)) => {
            let mut fields = [None; 6];
            for t in &tokens {
                let (k, v) = t
                    .split_once('=')
                    .ok_or_else(|| err(line, format!("expected `name=yes|no`, got `{t}`")))?;
                let slot = HYPOTHESIS_KEYS
                    .iter()
                    .position(|&h| h == k)
                    .ok_or_else(|| err(line, format!("unknown hypothesis `{k}`")))?;
                let val = match v {
                    "yes" => true,
                    "no" => false,
                    other => return Err(err(line, format!("hypothesis value must be yes or no, got `{other}`"))),
                };
                if fields[slot].is_some() {
                    return Err(err(line, format!("duplicate hypothesis `{k}`")));
                }
                fields[slot] = Some(val);
            }
            Some(ExpectedHypotheses {
                continuous: fields[0],
                bdr_function: fields[1],
                usc: fields[2],
                conn: fields[3],
                bdr_weak: fields[4],
                bdr_strong: fields[5],
            })
        }
    };
    let expected = if expected_iter.is_none() && expected_hypotheses.is_none() {
        None
    } else {
        Some(Expected {
            iter: expected_iter,
            hypotheses: expected_hypotheses,
        })
    };

    let mut warnings = Vec::new();
    if !c.is_closed() {
        let extra = c.closure().difference(&c);
        warnings.push(InstanceWarning::NonClosedC {
            missing: extra.iter().map(|x| space.name(x).to_string()).collect(),
        });
    }

    Ok((
        Instance {
            name: name.map(|(_, n)| n),
            space,
            c,
            dynamics,
            certificate,
            expected,
        },
        warnings,
    ))
}

/// Canonical emission: cells in declaration order, cover pairs sorted by
/// face then cell, map and stage rows ascending by argument.
pub fn emit_instance(inst: &Instance) -> String {
    let space = &inst.space;
    let mut out = String::new();
    if let Some(name) = &inst.name {
        out.push_str(&format!("name: {name}\n"));
    }
    let all: Vec<&str> = space.cells().map(|x| space.name(x)).collect();
    out.push_str(&format!("points: {}\n", all.join(" ")));
    let mut covers: Vec<(Cell, Cell)> = space.covers().to_vec();
    covers.sort();
    for (face, cell) in covers {
        out.push_str(&format!("hasse: {} {}\n", space.name(face), space.name(cell)));
    }
    let c_names: Vec<&str> = inst.c.iter().map(|x| space.name(x)).collect();
    out.push_str(&format!("C: {}\n", c_names.join(" ")));
    match &inst.dynamics {
        Dynamics::Function(f) => {
            out.push_str("map_kind: function\n");
            for x in inst.c.iter() {
                out.push_str(&format!(
                    "map: {} {}\n",
                    space.name(x),
                    space.name(f.apply(x))
                ));
            }
        }
        Dynamics::SetValued(f) => {
            out.push_str("map_kind: setvalued\n");
            for x in inst.c.iter() {
                let images: Vec<&str> = f.apply(x).iter().map(|y| space.name(y)).collect();
                out.push_str(&format!("map: {} {}\n", space.name(x), images.join(" ")));
            }
        }
    }
    if let Some(cert) = &inst.certificate {
        for (i, stage) in cert.stages.iter().enumerate() {
            for x in inst.c.iter() {
                out.push_str(&format!(
                    "stage: {i} {} {}\n",
                    space.name(x),
                    space.name(stage.apply(x))
                ));
            }
        }
    }
    if let Some(expected) = &inst.expected {
        if let Some(iter) = expected.iter {
            out.push_str(&format!("expected_iter: {iter}\n"));
        }
        if let Some(h) = &expected.hypotheses {
            let parts: Vec<String> = HYPOTHESIS_KEYS
                .iter()
                .zip(hypothesis_fields(h))
                .filter_map(|(k, v)| v.map(|b| format!("{k}={}", if b { "yes" } else { "no" })))
                .collect();
            if !parts.is_empty() {
                out.push_str(&format!("expected_hypotheses: {}\n", parts.join(" ")));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::viability_sequence;
    use crate::gallery::{build_example, gallery_names};

    #[test]
    fn gallery_round_trips_byte_identically() {
        for name in gallery_names() {
            let inst = Instance::from_gallery(&build_example(name).unwrap());
            let text = emit_instance(&inst);
            let (parsed, warnings) = parse_instance(&text).unwrap();
            assert!(warnings.is_empty(), "{name} should parse clean");
            assert_eq!(emit_instance(&parsed), text, "round trip for {name}");
            let orig = viability_sequence(&inst.c, &inst.dynamics).unwrap();
            let back = viability_sequence(&parsed.c, &parsed.dynamics).unwrap();
            assert_eq!(orig.iter, back.iter, "count changed for {name}");
        }
    }

    #[test]
    fn partial_map_is_detected() {
        let text = "points: a b s\nhasse: a s\nhasse: b s\nC: a b\nmap_kind: function\nmap: a b\n";
        match parse_instance(text) {
            Err(InstanceError::PartialMap { first, count }) => {
                assert_eq!(first, "b");
                assert_eq!(count, 1);
            }
            other => panic!("expected PartialMap, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn empty_image_is_detected() {
        let text =
            "points: a b s\nhasse: a s\nhasse: b s\nC: a b\nmap_kind: setvalued\nmap: a\nmap: b a\n";
        match parse_instance(text) {
            Err(InstanceError::EmptyImage { line, cell }) => {
                assert_eq!(line, 6);
                assert_eq!(cell, "a");
            }
            other => panic!("expected EmptyImage, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn unknown_cells_carry_line_context() {
        let text = "points: a b s\nhasse: a s\nhasse: b s\nC: a zzz\nmap_kind: function\nmap: a a\n";
        match parse_instance(text) {
            Err(InstanceError::UnknownCell { line, cell }) => {
                assert_eq!(line, 4);
                assert_eq!(cell, "zzz");
            }
            other => panic!("expected UnknownCell, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn non_closed_constraint_warns_but_parses() {
        let text = "points: a b s\nhasse: a s\nhasse: b s\nC: a s\nmap_kind: function\nmap: a a\nmap: s s\n";
        let (inst, warnings) = parse_instance(text).unwrap();
        assert_eq!(
            warnings,
            vec![InstanceWarning::NonClosedC {
                missing: vec!["b".into()]
            }]
        );
        assert_eq!(inst.c.len(), 2);
    }

    #[test]
    fn certificates_and_expectations_survive_the_trip() {
        let text = concat!(
            "name: tiny\n",
            "points: a b s\n",
            "hasse: a s\n",
            "hasse: b s\n",
            "C: a b s\n",
            "map_kind: function\n",
            "map: a b\n",
            "map: b a\n",
            "map: s s\n",
            "stage: 0 a a\n",
            "stage: 0 b b\n",
            "stage: 0 s s\n",
            "stage: 1 a b\n",
            "stage: 1 b a\n",
            "stage: 1 s s\n",
            "expected_iter: infinity\n",
            "expected_hypotheses: continuous=yes bdr_function=yes\n",
        );
        let (inst, warnings) = parse_instance(text).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(inst.certificate.as_ref().unwrap().stages.len(), 2);
        assert_eq!(
            inst.expected.unwrap().iter,
            Some(crate::filtration::Iter::Infinite)
        );
        assert_eq!(emit_instance(&inst), text);
    }

    #[test]
    fn syntax_errors_name_the_line() {
        for (text, needle) in [
            ("points: a\nnonsense\n", "key: value"),
            ("points: a\nwhat: ever\n", "unknown key"),
            ("points: a\nmap_kind: f\nmap_kind: g\n", "duplicate"),
            ("points: a\nC: a\nmap_kind: maybe\nmap: a a\n", "map_kind"),
            ("points: a a\nC: a\nmap_kind: function\nmap: a a\n", "duplicate cell"),
        ] {
            match parse_instance(text) {
                Err(InstanceError::Parse { msg, .. }) => {
                    assert!(msg.contains(needle), "`{msg}` should mention `{needle}`")
                }
                other => panic!("expected a parse error for {text:?}, got {:?}", other.map(|_| ())),
            }
        }
    }
}
