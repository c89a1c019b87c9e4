//! Full run report for one instance: text and structured emission.
//!
//! Both renderings are pure functions of the instance and the option set,
//! so repeated runs produce identical bytes.

use serde_json::{json, Value};

use crate::bounds::{check_theorem_bounds, BoundReport};
use crate::filtration::{viability_sequence, FiltrationError, Iter, ViabilityReport};
use crate::gallery::ExpectedHypotheses;
use crate::homology::{betti1, gate_boundary_connectedness, GateReport};
use crate::homotopy::{verify_certificate, CertificateCheck, CertificateFailure};
use crate::instance::Instance;
use crate::map::{Check, Dynamics};
use crate::propositions::{verify_propositions, PropOutcome, PropositionCheck};
use crate::set::PointSet;
use crate::space::Space;

/// Cap for the open-set enumerations behind the gate and bound checks.
pub const REPORT_GATE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub orbit: bool,
    pub propositions: bool,
    pub bounds: bool,
    pub betti: bool,
    pub gate: bool,
}

impl ReportOptions {
    pub fn everything() -> Self {
        ReportOptions {
            orbit: true,
            propositions: true,
            bounds: true,
            betti: true,
            gate: true,
        }
    }
}

#[derive(Clone, Debug)]
pub enum CertificateOutcome {
    Pass { iter: Iter, bound_met: bool },
    Fail(CertificateFailure),
    /// Certificates certify functions; the instance is set-valued.
    SetValuedDynamics,
}

pub struct RunReport {
    pub name: Option<String>,
    pub viability: ViabilityReport,
    pub expected_iter: Option<(Iter, bool)>,
    pub expected_hypotheses: Option<(ExpectedHypotheses, bool)>,
    pub certificate: Option<(usize, CertificateOutcome)>,
    pub propositions: Vec<PropositionCheck>,
    pub bounds: Option<BoundReport>,
    pub betti1: Option<usize>,
    pub gate: Option<Result<GateReport, String>>,
    options: ReportOptions,
    space: Space,
    constraint: PointSet,
}

pub fn run_report(inst: &Instance, options: ReportOptions) -> Result<RunReport, FiltrationError> {
    let viability = viability_sequence(&inst.c, &inst.dynamics)?;
    let expected = inst.expected.as_ref();
    let expected_iter = expected
        .and_then(|e| e.iter)
        .map(|want| (want, want == viability.iter));
    let expected_hypotheses = expected.and_then(|e| e.hypotheses).map(|want| {
        let got = ExpectedHypotheses::of_report(&viability.hypotheses);
        (want, want == got)
    });
    let certificate = inst.certificate.as_ref().map(|cert| {
        let outcome = match &inst.dynamics {
            Dynamics::Function(f) => match verify_certificate(cert, &inst.c, f) {
                CertificateCheck::Pass => CertificateOutcome::Pass {
                    iter: viability.iter,
                    bound_met: viability.iter.at_least(5),
                },
                CertificateCheck::Fail(failure) => CertificateOutcome::Fail(failure),
            },
            Dynamics::SetValued(_) => CertificateOutcome::SetValuedDynamics,
        };
        (cert.stages.len(), outcome)
    });
    let propositions = verify_propositions(&viability, &inst.dynamics);
    let bounds = options
        .bounds
        .then(|| check_theorem_bounds(&viability, &inst.dynamics, REPORT_GATE_CAP));
    let betti = options.betti.then(|| betti1(&inst.space));
    let gate = options.gate.then(|| {
        gate_boundary_connectedness(&inst.space, REPORT_GATE_CAP).map_err(|e| e.to_string())
    });
    Ok(RunReport {
        name: inst.name.clone(),
        viability,
        expected_iter,
        expected_hypotheses,
        certificate,
        propositions,
        bounds,
        betti1: betti,
        gate,
        options,
        space: inst.space.clone(),
        constraint: inst.c.clone(),
    })
}

impl RunReport {
    /// A proven statement failed while its hypotheses were satisfied.
    pub fn falsified(&self) -> bool {
        self.propositions.iter().any(|p| p.outcome.failed())
            || self
                .bounds
                .as_ref()
                .is_some_and(|b| b.asserted.is_some_and(|n| !self.viability.iter.at_least(n)))
    }

    /// An `expected` block is present and disagrees with the run.
    pub fn mismatched(&self) -> bool {
        self.expected_iter.is_some_and(|(_, ok)| !ok)
            || self.expected_hypotheses.is_some_and(|(_, ok)| !ok)
    }

    fn members(&self, set: &PointSet) -> String {
        let names: Vec<&str> = set.iter().map(|x| self.space.name(x)).collect();
        names.join(" ")
    }

    fn check_line(&self, c: &Check) -> String {
        match c {
            Check::Holds => "holds".into(),
            Check::Fails(w) => format!("fails at {}", w.describe(&self.space)),
            Check::NotApplicable => "not applicable".into(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        if let Some(name) = &self.name {
            line(format!("instance: {name}"));
        }
        line(format!(
            "space: {} cells, constraint: {} cells",
            self.space.len(),
            self.constraint.len()
        ));
        line("hypotheses:".into());
        let h = &self.viability.hypotheses;
        for (key, check) in [
            ("continuous", &h.continuous),
            ("bdr_function", &h.bdr_function),
            ("usc", &h.usc),
            ("conn", &h.conn),
            ("bdr_weak", &h.bdr_weak),
            ("bdr_strong", &h.bdr_strong),
        ] {
            line(format!("  {key}: {}", self.check_line(check)));
        }
        line(format!("iter: {}", self.viability.iter));
        line("filtration:".into());
        for (n, level) in self.viability.filtration.iter().enumerate() {
            line(format!(
                "  C{n}: {} cells{}{}",
                level.len(),
                if level.is_empty() { "" } else { " = " },
                self.members(level)
            ));
        }
        line("layers:".into());
        for (n, layer) in self.viability.layers.iter().enumerate() {
            line(format!(
                "  A{n}: {} cells{}{}",
                layer.len(),
                if layer.is_empty() { "" } else { " = " },
                self.members(layer)
            ));
        }
        let core = self.viability.core();
        line(format!(
            "  core: {} cells{}{}",
            core.len(),
            if core.is_empty() { "" } else { " = " },
            self.members(core)
        ));
        if self.options.orbit {
            let w = &self.viability.witness;
            let path: Vec<&str> = w.prefix.iter().map(|&x| self.space.name(x)).collect();
            line(format!("witness orbit: {}", path.join(" -> ")));
            if let Some(cycle) = &w.cycle {
                let loop_path: Vec<&str> = cycle.iter().map(|&x| self.space.name(x)).collect();
                line(format!("witness cycle: {} -> repeat", loop_path.join(" -> ")));
            }
        }
        if let Some((want, ok)) = self.expected_iter {
            line(format!(
                "expected iter: {want} ({})",
                if ok { "match" } else { "MISMATCH" }
            ));
        }
        if let Some((_, ok)) = self.expected_hypotheses {
            line(format!(
                "expected hypotheses: {}",
                if ok { "match" } else { "MISMATCH" }
            ));
        }
        if let Some((stages, outcome)) = &self.certificate {
            let what = match outcome {
                CertificateOutcome::Pass { iter, bound_met } => format!(
                    "pass; iter {iter}, bound of 5 {}",
                    if *bound_met { "met" } else { "NOT met" }
                ),
                CertificateOutcome::Fail(f) => format!(
                    "FAIL at stage {}: {:?}{}",
                    f.stage,
                    f.clause,
                    f.cell
                        .map(|x| format!(" ({})", self.space.name(x)))
                        .unwrap_or_default()
                ),
                CertificateOutcome::SetValuedDynamics => {
                    "not applicable to set-valued dynamics".into()
                }
            };
            line(format!("certificate: {stages} stages, {what}"));
        }
        if self.options.propositions {
            line("propositions:".into());
            for p in &self.propositions {
                let outcome = match &p.outcome {
                    PropOutcome::Pass => "pass".into(),
                    PropOutcome::Fail(msg) => format!("FAIL: {msg}"),
                    PropOutcome::NotApplicable(msg) => format!("n/a: {msg}"),
                };
                line(format!("  {}: {outcome}", p.id));
            }
        }
        if let Some(bounds) = &self.bounds {
            line("bounds:".into());
            for s in &bounds.statements {
                let status = if s.missing.is_empty() {
                    format!(
                        "asserted, {}",
                        if self.viability.iter.at_least(s.bound) {
                            "met"
                        } else {
                            "VIOLATED"
                        }
                    )
                } else {
                    format!("not applicable, missing {}", s.missing.join(", "))
                };
                line(format!(
                    "  iter >= {} (needs {}): {status}",
                    s.bound,
                    s.hypotheses.join(", ")
                ));
            }
            if let Some(gate) = &bounds.gate {
                line(format!(
                    "  gate property: {}",
                    if gate.holds { "holds" } else { "fails" }
                ));
            } else {
                line("  gate property: skipped, space above enumeration cap".into());
            }
        }
        if let Some(b1) = self.betti1 {
            line(format!("betti1: {b1}"));
        }
        if let Some(gate) = &self.gate {
            match gate {
                Ok(g) if g.holds => line("gate: holds".into()),
                Ok(g) => line(format!(
                    "gate: fails at open set {}",
                    g.counterexample
                        .as_ref()
                        .map(|s| self.members(s))
                        .unwrap_or_default()
                )),
                Err(reason) => line(format!("gate: skipped ({reason})")),
            }
        }
        out
    }

    pub fn json(&self) -> Value {
        let names = |set: &PointSet| -> Value {
            Value::Array(
                set.iter()
                    .map(|x| Value::String(self.space.name(x).to_string()))
                    .collect(),
            )
        };
        let iter_value = |i: Iter| match i {
            Iter::Finite(n) => json!(n),
            Iter::Infinite => json!("infinity"),
        };
        let h = &self.viability.hypotheses;
        let check_value = |c: &Check| match c {
            Check::Holds => json!(true),
            Check::Fails(w) => json!({ "witness": w.describe(&self.space) }),
            Check::NotApplicable => Value::Null,
        };
        let mut root = serde_json::Map::new();
        if let Some(name) = &self.name {
            root.insert("name".into(), json!(name));
        }
        root.insert("space_cells".into(), json!(self.space.len()));
        root.insert("constraint_cells".into(), json!(self.constraint.len()));
        root.insert(
            "hypotheses".into(),
            json!({
                "continuous": check_value(&h.continuous),
                "bdr_function": check_value(&h.bdr_function),
                "usc": check_value(&h.usc),
                "conn": check_value(&h.conn),
                "bdr_weak": check_value(&h.bdr_weak),
                "bdr_strong": check_value(&h.bdr_strong),
            }),
        );
        root.insert("iter".into(), iter_value(self.viability.iter));
        root.insert(
            "filtration".into(),
            Value::Array(
                self.viability
                    .filtration
                    .iter()
                    .map(|l| json!({ "size": l.len(), "members": names(l) }))
                    .collect(),
            ),
        );
        root.insert(
            "layers".into(),
            Value::Array(
                self.viability
                    .layers
                    .iter()
                    .map(|l| json!({ "size": l.len(), "members": names(l) }))
                    .collect(),
            ),
        );
        root.insert(
            "core".into(),
            json!({ "size": self.viability.core().len(), "members": names(self.viability.core()) }),
        );
        if self.options.orbit {
            let w = &self.viability.witness;
            root.insert(
                "witness".into(),
                json!({
                    "prefix": names(&self.space.set_of(w.prefix.iter().copied())),
                    "cycle": w.cycle.as_ref().map(|c| names(&self.space.set_of(c.iter().copied()))),
                }),
            );
        }
        if let Some((want, ok)) = self.expected_iter {
            root.insert(
                "expected_iter".into(),
                json!({ "value": iter_value(want), "match": ok }),
            );
        }
        if let Some((_, ok)) = self.expected_hypotheses {
            root.insert("expected_hypotheses_match".into(), json!(ok));
        }
        if let Some((stages, outcome)) = &self.certificate {
            let value = match outcome {
                CertificateOutcome::Pass { iter, bound_met } => json!({
                    "stages": stages, "outcome": "pass",
                    "iter": iter_value(*iter), "bound_met": bound_met,
                }),
                CertificateOutcome::Fail(f) => json!({
                    "stages": stages, "outcome": "fail",
                    "stage": f.stage, "clause": format!("{:?}", f.clause),
                    "cell": f.cell.map(|x| self.space.name(x).to_string()),
                }),
                CertificateOutcome::SetValuedDynamics => json!({
                    "stages": stages, "outcome": "not applicable",
                }),
            };
            root.insert("certificate".into(), value);
        }
        if self.options.propositions {
            root.insert(
                "propositions".into(),
                Value::Array(
                    self.propositions
                        .iter()
                        .map(|p| {
                            let outcome = match &p.outcome {
                                PropOutcome::Pass => json!("pass"),
                                PropOutcome::Fail(m) => json!({ "fail": m }),
                                PropOutcome::NotApplicable(m) => json!({ "n/a": m }),
                            };
                            json!({ "id": p.id, "outcome": outcome })
                        })
                        .collect(),
                ),
            );
        }
        if let Some(bounds) = &self.bounds {
            root.insert(
                "bounds".into(),
                json!({
                    "statements": Value::Array(bounds.statements.iter().map(|s| json!({
                        "bound": s.bound,
                        "hypotheses": s.hypotheses,
                        "missing": s.missing,
                        "met": s.missing.is_empty().then(|| self.viability.iter.at_least(s.bound)),
                    })).collect()),
                    "asserted": bounds.asserted,
                    "gate": bounds.gate.as_ref().map(|g| g.holds),
                }),
            );
        }
        if let Some(b1) = self.betti1 {
            root.insert("betti1".into(), json!(b1));
        }
        if let Some(gate) = &self.gate {
            let value = match gate {
                Ok(g) => json!({
                    "holds": g.holds,
                    "counterexample": g.counterexample.as_ref().map(|s| names(s)),
                }),
                Err(reason) => json!({ "skipped": reason }),
            };
            root.insert("gate".into(), value);
        }
        Value::Object(root)
    }
}
