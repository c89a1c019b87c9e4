//! Machine checks for the structural statements about the filtration.
//!
//! Three groups. The set-theoretic statements (`st.*`) hold for any total
//! map and are asserted unconditionally. The topological statements for
//! functions (`top.*`) additionally need a closed constraint set, a
//! continuous map and the boundary condition; the set-valued ones (`sv.*`)
//! need a closed constraint set plus usc, the weak boundary condition and
//! connected images. When the hypotheses fail the dependent statements are
//! reported as not applicable rather than evaluated: a genuine Fail on a
//! hypothesis-satisfying instance falsifies either the engine or the
//! statement itself, and the harness treats it as a stop-the-world event.

use crate::filtration::{max_orbit_bruteforce, Iter, ViabilityReport};
use crate::map::Dynamics;
use crate::set::PointSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropOutcome {
    Pass,
    Fail(String),
    NotApplicable(String),
}

impl PropOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, PropOutcome::Pass)
    }

    pub fn failed(&self) -> bool {
        matches!(self, PropOutcome::Fail(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropositionCheck {
    pub id: &'static str,
    pub outcome: PropOutcome,
}

fn check(id: &'static str, outcome: PropOutcome) -> PropositionCheck {
    PropositionCheck { id, outcome }
}

fn pass_or(id: &'static str, fail: Option<String>) -> PropositionCheck {
    check(
        id,
        match fail {
            None => PropOutcome::Pass,
            Some(msg) => PropOutcome::Fail(msg),
        },
    )
}

/// Stage `n`, extending past the computed list: after emptiness or
/// stabilization every later stage repeats the last one.
fn stage(report: &ViabilityReport, n: usize) -> &PointSet {
    let last = report.filtration.len() - 1;
    &report.filtration[n.min(last)]
}

/// Layer `n`; layers past the computed list are empty.
fn layer(report: &ViabilityReport, n: usize) -> PointSet {
    report
        .layers
        .get(n)
        .cloned()
        .unwrap_or_else(|| report.core().space().empty_set())
}

fn name_of(set: &PointSet, idx: usize) -> String {
    let space = set.space();
    set.iter()
        .nth(idx)
        .map(|c| space.name(c).to_string())
        .unwrap_or_default()
}

/// The set-theoretic statements, common core of both tracks.
fn set_theoretic(report: &ViabilityReport, dynamics: &Dynamics) -> Vec<PropositionCheck> {
    let mut out = Vec::new();
    let c = dynamics.domain();
    let is_fn = dynamics.is_function();

    // st.1 / st.1': the step-count equals the longest orbit.
    let oracle = max_orbit_bruteforce(c, dynamics).expect("same inputs as the sequence");
    out.push(pass_or(
        if is_fn { "st.1" } else { "st.1'" },
        (oracle != report.iter)
            .then(|| format!("longest orbit {oracle} but filtration says {}", report.iter)),
    ));

    // st.2: descending chain.
    let mut fail = None;
    for (n, w) in report.filtration.windows(2).enumerate() {
        if !w[1].is_subset(&w[0]) {
            fail = Some(format!("stage {} not inside stage {n}", n + 1));
            break;
        }
    }
    out.push(pass_or("st.2", fail));

    // st.3: a repeated stage repeats forever. One more application of the
    // step operator must fix the last stage.
    let last = report.filtration.last().unwrap();
    let again = dynamics.entering(last);
    out.push(pass_or(
        "st.3",
        match report.iter {
            Iter::Infinite => (&again != last).then(|| "stable core moved".to_string()),
            Iter::Finite(_) => (!again.is_empty()).then(|| "empty stage refilled".to_string()),
        },
    ));

    // st.4 / st.4': members of a stage step into the previous stage.
    let mut fail = None;
    'outer4: for n in 1..report.filtration.len() {
        let prev = stage(report, n - 1);
        for x in stage(report, n).iter() {
            let ok = match dynamics {
                Dynamics::Function(f) => prev.contains(f.apply(x)),
                Dynamics::SetValued(f) => !f.apply(x).is_disjoint(prev),
            };
            if !ok {
                fail = Some(format!(
                    "{} in stage {n} cannot step into stage {}",
                    c.space().name(x),
                    n - 1
                ));
                break 'outer4;
            }
        }
    }
    out.push(pass_or(if is_fn { "st.4" } else { "st.4'" }, fail));

    // st.5: layer members step into the layer below. Set-valued st.5':
    // the image stays in layers 0..n and meets layer n.
    let mut fail = None;
    'outer5: for n in 1..report.layers.len() {
        let below = layer(report, n - 1);
        for x in layer(report, n).iter() {
            let bad = match dynamics {
                Dynamics::Function(f) => (!below.contains(f.apply(x)))
                    .then(|| format!("f({}) leaves layer {}", c.space().name(x), n - 1)),
                Dynamics::SetValued(f) => {
                    let img = f.apply(x);
                    let mut shallow = c.space().empty_set();
                    for i in 0..n {
                        shallow = shallow.union(&layer(report, i));
                    }
                    if !img.is_subset(&shallow) {
                        Some(format!(
                            "image of {} leaves layers 0..{}",
                            c.space().name(x),
                            n - 1
                        ))
                    } else if img.is_disjoint(&below) {
                        Some(format!(
                            "image of {} misses layer {}",
                            c.space().name(x),
                            n - 1
                        ))
                    } else {
                        None
                    }
                }
            };
            if let Some(msg) = bad {
                fail = Some(msg);
                break 'outer5;
            }
        }
    }
    out.push(pass_or(if is_fn { "st.5" } else { "st.5'" }, fail));

    // st.6: with a finite count k, exactly layers 0..=k are nonempty.
    let fail = match report.iter {
        Iter::Infinite => None,
        Iter::Finite(k) => {
            debug_assert_eq!(report.layers.len(), k + 1);
            (0..=k)
                .find(|&i| layer(report, i).is_empty())
                .map(|i| format!("layer {i} empty below the step-count {k}"))
        }
    };
    out.push(pass_or("st.6", fail));

    out
}

/// Relative boundary of stage `n+1` inside stage `n`.
fn stage_boundary(report: &ViabilityReport, n: usize) -> PointSet {
    stage(report, n + 1)
        .relative_boundary(stage(report, n))
        .expect("stages are nested")
}

/// Topological statements for continuous functions with the boundary
/// condition, evaluated without gating (the caller decides applicability).
fn topological_function(report: &ViabilityReport, dynamics: &Dynamics) -> Vec<PropositionCheck> {
    let f = match dynamics {
        Dynamics::Function(f) => f,
        Dynamics::SetValued(_) => unreachable!("function track"),
    };
    let mut out = Vec::new();
    let horizon = report.filtration.len() + 1;

    // top.1: every stage closed.
    let fail = (0..report.filtration.len())
        .find(|&n| !report.filtration[n].is_closed())
        .map(|n| format!("stage {n} is not closed"));
    out.push(pass_or("top.1", fail));

    // top.2: f maps the rim of stage n+2 into the rim of stage n+1.
    let mut fail = None;
    for n in 0..horizon {
        let rim_above = stage_boundary(report, n + 1);
        let rim_below = stage_boundary(report, n);
        let img = f.image(&rim_above).expect("rims lie inside the domain");
        if !img.is_subset(&rim_below) {
            let stray = img.difference(&rim_below);
            fail = Some(format!(
                "n={n}: rim image reaches {} outside the lower rim",
                name_of(&stray, 0)
            ));
            break;
        }
    }
    out.push(pass_or("top.2", fail));

    // top.3: the rim of stage n+1 survives into stage n+2.
    let mut fail = None;
    for n in 0..horizon {
        let rim = stage_boundary(report, n);
        if !rim.is_subset(stage(report, n + 2)) {
            let stray = rim.difference(stage(report, n + 2));
            fail = Some(format!(
                "n={n}: rim cell {} not in stage {}",
                name_of(&stray, 0),
                n + 2
            ));
            break;
        }
    }
    out.push(pass_or("top.3", fail));

    // top.4: layer n together with stage n+2 is closed.
    let mut fail = None;
    for n in 0..report.layers.len() {
        if !layer(report, n).union(stage(report, n + 2)).is_closed() {
            fail = Some(format!("layer {n} plus stage {} is not closed", n + 2));
            break;
        }
    }
    out.push(pass_or("top.4", fail));

    out
}

/// Topological statements for set-valued maps under usc, the weak boundary
/// condition and connected images; evaluated without gating.
fn topological_setvalued(report: &ViabilityReport, dynamics: &Dynamics) -> Vec<PropositionCheck> {
    let f = match dynamics {
        Dynamics::SetValued(f) => f,
        Dynamics::Function(_) => unreachable!("set-valued track"),
    };
    let mut out = Vec::new();

    let fail = (0..report.filtration.len())
        .find(|&n| !report.filtration[n].is_closed())
        .map(|n| format!("stage {n} is not closed"));
    out.push(pass_or("sv.1", fail));

    let fail = [0usize, 1]
        .into_iter()
        .find(|&n| !layer(report, n).is_open())
        .map(|n| format!("layer {n} is not open"));
    out.push(pass_or("sv.2", fail));

    let rim1 = stage_boundary(report, 1);
    out.push(pass_or(
        "sv.3",
        (!rim1.is_subset(stage(report, 3))).then(|| {
            format!(
                "rim cell {} of stage 2 not in stage 3",
                name_of(&rim1.difference(stage(report, 3)), 0)
            )
        }),
    ));

    let a1c3 = layer(report, 1).union(stage(report, 3));
    let a0a2 = layer(report, 0).union(&layer(report, 2));
    out.push(pass_or(
        "sv.4",
        if !a1c3.is_closed() {
            Some("layer 1 plus stage 3 is not closed".to_string())
        } else if !a0a2.is_open() {
            Some("layers 0 and 2 do not form an open set".to_string())
        } else {
            None
        },
    ));

    let rim2 = stage_boundary(report, 2);
    out.push(pass_or(
        "sv.5",
        (!rim2.is_subset(stage(report, 4))).then(|| {
            format!(
                "rim cell {} of stage 3 not in stage 4",
                name_of(&rim2.difference(stage(report, 4)), 0)
            )
        }),
    ));

    let a2c4 = layer(report, 2).union(stage(report, 4));
    let a0a1a3 = layer(report, 0)
        .union(&layer(report, 1))
        .union(&layer(report, 3));
    out.push(pass_or(
        "sv.6",
        if !a2c4.is_closed() {
            Some("layer 2 plus stage 4 is not closed".to_string())
        } else if !a0a1a3.is_open() {
            Some("layers 0, 1 and 3 do not form an open set".to_string())
        } else {
            None
        },
    ));

    // sv.7: cells on the rim of stage 4 that sit in layer 4 reach both
    // layer 2 and layer 3.
    let mut fail = None;
    let pocket = stage_boundary(report, 3).intersection(&layer(report, 4));
    for x in pocket.iter() {
        let img = f.apply(x);
        if img.is_disjoint(&layer(report, 2)) || img.is_disjoint(&layer(report, 3)) {
            fail = Some(format!(
                "image of {} misses layer 2 or 3",
                f.space().name(x)
            ));
            break;
        }
    }
    out.push(pass_or("sv.7", fail));

    out
}

/// Full checklist for the instance: set-theoretic statements always, the
/// topological group gated on the hypotheses recorded in the report.
pub fn verify_propositions(report: &ViabilityReport, dynamics: &Dynamics) -> Vec<PropositionCheck> {
    let mut out = set_theoretic(report, dynamics);
    let hyp = &report.hypotheses;
    let c_closed = dynamics.domain().is_closed();

    match dynamics {
        Dynamics::Function(_) => {
            let mut blockers = Vec::new();
            if !c_closed {
                blockers.push("constraint set not closed");
            }
            if !hyp.continuous.holds() {
                blockers.push("map not continuous");
            }
            if !hyp.bdr_function.holds() {
                blockers.push("boundary condition fails");
            }
            if blockers.is_empty() {
                out.extend(topological_function(report, dynamics));
            } else {
                let reason = blockers.join("; ");
                for id in ["top.1", "top.2", "top.3", "top.4"] {
                    out.push(check(id, PropOutcome::NotApplicable(reason.clone())));
                }
            }
        }
        Dynamics::SetValued(_) => {
            let mut blockers = Vec::new();
            if !c_closed {
                blockers.push("constraint set not closed");
            }
            if !hyp.usc.holds() {
                blockers.push("not upper semicontinuous");
            }
            if !hyp.bdr_weak.holds() {
                blockers.push("weak boundary condition fails");
            }
            if !hyp.conn.holds() {
                blockers.push("images not all connected");
            }
            if blockers.is_empty() {
                out.extend(topological_setvalued(report, dynamics));
            } else {
                let reason = blockers.join("; ");
                for id in ["sv.1", "sv.2", "sv.3", "sv.4", "sv.5", "sv.6", "sv.7"] {
                    out.push(check(id, PropOutcome::NotApplicable(reason.clone())));
                }
            }
        }
    }
    out
}

/// Evaluates the topological group without gating; test hook for making
/// sure the detectors can actually fail on hypothesis-violating inputs.
pub fn evaluate_ungated(report: &ViabilityReport, dynamics: &Dynamics) -> Vec<PropositionCheck> {
    let mut out = set_theoretic(report, dynamics);
    match dynamics {
        Dynamics::Function(_) => out.extend(topological_function(report, dynamics)),
        Dynamics::SetValued(_) => out.extend(topological_setvalued(report, dynamics)),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::viability_sequence;
    use crate::map::CellMap;
    use crate::space::circle_model;
    use crate::testutil::rng_from_seed;

    fn all_pass(checks: &[PropositionCheck]) -> bool {
        checks.iter().all(|c| c.outcome.passed())
    }

    #[test]
    fn circle_rotation_passes_everything() {
        let s = circle_model(5).unwrap();
        let c = s.named(&["v1", "e1", "v2", "e2", "v3", "e3", "v4"]);
        let f = CellMap::from_fn(c.clone(), |x| {
            let (kind, idx) = s.name(x).split_at(1);
            let idx: usize = idx.parse().unwrap();
            s.cell(&format!("{kind}{}", (idx + 2) % 5)).unwrap()
        });
        let dynamics = Dynamics::Function(f);
        let report = viability_sequence(&c, &dynamics).unwrap();
        let checks = verify_propositions(&report, &dynamics);
        assert!(all_pass(&checks), "{checks:?}");
        let ids: Vec<_> = checks.iter().map(|c| c.id).collect();
        assert_eq!(
            ids,
            ["st.1", "st.2", "st.3", "st.4", "st.5", "st.6", "top.1", "top.2", "top.3", "top.4"]
        );
    }

    #[test]
    fn hypothesis_violations_gate_the_topological_group() {
        // Collapsing an edge is not continuous, so top.* must be skipped.
        let s = circle_model(5).unwrap();
        let c = s.named(&["v0", "e0", "v1"]);
        let v0 = s.cell("v0").unwrap();
        let f = Dynamics::Function(CellMap::from_fn(c.clone(), |x| {
            if s.name(x) == "e0" {
                v0
            } else {
                x
            }
        }));
        let report = viability_sequence(&c, &f).unwrap();
        let checks = verify_propositions(&report, &f);
        for c in &checks {
            if c.id.starts_with("top.") {
                assert!(matches!(c.outcome, PropOutcome::NotApplicable(_)));
            } else {
                assert!(c.outcome.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn detectors_fire_on_hypothesis_violations() {
        // A discontinuous map can make a stage non-closed; the ungated
        // evaluation must report a genuine failure somewhere.
        let s = circle_model(5).unwrap();
        let c = s.named(&["v1", "e1", "v2", "e2", "v3", "e3", "v4"]);
        let v2 = s.cell("v2").unwrap();
        let e1 = s.cell("e1").unwrap();
        let f = Dynamics::Function(CellMap::from_fn(c.clone(), |x| {
            // Only the open edge e1 returns to C: stage 2 = {e1} is open,
            // not closed.
            if x == e1 {
                v2
            } else {
                s.cell("e4").unwrap()
            }
        }));
        let report = viability_sequence(&c, &f).unwrap();
        assert_eq!(report.filtration[2], s.named(&["e1"]));
        let checks = evaluate_ungated(&report, &f);
        let top1 = checks.iter().find(|c| c.id == "top.1").unwrap();
        assert!(top1.outcome.failed(), "{top1:?}");
        // The gated checklist skips it instead.
        let gated = verify_propositions(&report, &f);
        let top1 = gated.iter().find(|c| c.id == "top.1").unwrap();
        assert!(matches!(top1.outcome, PropOutcome::NotApplicable(_)));
    }

    #[test]
    fn random_function_instances_with_hypotheses_pass() {
        let mut rng = rng_from_seed(41);
        let mut applicable = 0;
        for round in 0..600 {
            let s = crate::random::random_space(&mut rng, 9);
            let c = crate::random::random_closed_set(&mut rng, &s);
            let f = Dynamics::Function(crate::random::random_monotone_boundary_map(
                &mut rng,
                c.clone(),
            ));
            let report = viability_sequence(&c, &f).unwrap();
            let checks = verify_propositions(&report, &f);
            for c in &checks {
                assert!(!c.outcome.failed(), "round {round}: {c:?}");
            }
            if checks.iter().any(|c| c.id == "top.1" && c.outcome.passed()) {
                applicable += 1;
            }
        }
        assert!(applicable > 300, "only {applicable} applicable instances");
    }

    #[test]
    fn random_setvalued_instances_with_hypotheses_pass() {
        let mut rng = rng_from_seed(42);
        let mut applicable = 0;
        for round in 0..600 {
            let s = crate::random::random_space(&mut rng, 9);
            let c = crate::random::random_closed_set(&mut rng, &s);
            let f = Dynamics::SetValued(crate::random::random_setvalued_viable(
                &mut rng,
                c.clone(),
            ));
            let report = viability_sequence(&c, &f).unwrap();
            let checks = verify_propositions(&report, &f);
            for c in &checks {
                assert!(!c.outcome.failed(), "round {round}: {c:?}");
            }
            if checks.iter().any(|c| c.id == "sv.1" && c.outcome.passed()) {
                applicable += 1;
            }
        }
        assert!(applicable > 300, "only {applicable} applicable instances");
    }

    #[test]
    fn arbitrary_maps_still_pass_the_set_theoretic_group() {
        let mut rng = rng_from_seed(43);
        for _ in 0..400 {
            let s = crate::random::random_space(&mut rng, 8);
            let c = crate::random::random_closed_set(&mut rng, &s);
            let f = Dynamics::SetValued(crate::random::random_setvalued_any(&mut rng, c.clone()));
            let report = viability_sequence(&c, &f).unwrap();
            for check in set_theoretic(&report, &f) {
                assert!(check.outcome.passed(), "{check:?}");
            }
        }
    }
}
