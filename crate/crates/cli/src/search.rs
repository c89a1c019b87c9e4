//! Randomized falsification harness.
//!
//! Every instance is generated from its own deterministic stream, so runs
//! reproduce exactly for a fixed seed regardless of thread scheduling. A
//! violation in props or theorem4 mode means a proven statement broke on a
//! concrete instance: the instance is dumped as a replayable file and the
//! run fails. Homotopy mode records findings about a conjectured bound and
//! never fails.

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use viability::filtration::viability_sequence;
use viability::homotopy::homotopy_bound_check;
use viability::instance::{emit_instance, Instance};
use viability::map::Dynamics;
use viability::propositions::verify_propositions;
use viability::random::{
    random_closed_set, random_monotone_boundary_map, random_monotone_map, random_setvalued_any,
    random_setvalued_strong, random_setvalued_usc, random_setvalued_viable, random_space,
    rng_from_seed,
};
use viability::report::REPORT_GATE_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Props,
    Theorem4,
    Homotopy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Props => "props",
            Mode::Theorem4 => "theorem4",
            Mode::Homotopy => "homotopy",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    pub instances: usize,
    pub max_cells: usize,
    pub mode: Mode,
    pub dump_dir: PathBuf,
}

pub struct SearchResult {
    pub summary: String,
    pub violations: usize,
    pub findings: usize,
    pub dumped: Vec<PathBuf>,
}

struct Outcome {
    index: usize,
    events: Vec<String>,
    dump: Option<(String, String)>,
    violation: bool,
    finding: bool,
}

fn evaluate(config: &SearchConfig, index: usize) -> Outcome {
    let mut rng = rng_from_seed(config.seed);
    rng.set_stream(index as u64 + 1);
    let space = random_space(&mut rng, config.max_cells);
    let c = random_closed_set(&mut rng, &space);

    let (dynamics, certificate) = match config.mode {
        Mode::Homotopy => {
            let fence = viability::homotopy::random_fence(&mut rng, &c, 1 + index % 4);
            let f = fence.stages.last().expect("fence never empty").clone();
            (Dynamics::Function(f), Some(fence))
        }
        _ => {
            let dynamics = match index % 6 {
                0 => Dynamics::Function(random_monotone_map(&mut rng, c.clone())),
                1 => Dynamics::Function(random_monotone_boundary_map(&mut rng, c.clone())),
                2 => Dynamics::SetValued(random_setvalued_usc(&mut rng, c.clone())),
                3 => Dynamics::SetValued(random_setvalued_viable(&mut rng, c.clone())),
                4 => Dynamics::SetValued(random_setvalued_strong(&mut rng, c.clone())),
                _ => Dynamics::SetValued(random_setvalued_any(&mut rng, c.clone())),
            };
            (dynamics, None)
        }
    };

    let report = viability_sequence(&c, &dynamics).expect("generated C is nonempty");
    let mut events = Vec::new();
    let mut violation = false;
    let mut finding = false;

    match config.mode {
        Mode::Props => {
            for p in verify_propositions(&report, &dynamics) {
                if let viability::propositions::PropOutcome::Fail(msg) = &p.outcome {
                    violation = true;
                    events.push(format!("proposition {} FAILED: {msg}", p.id));
                }
            }
        }
        Mode::Theorem4 => {
            let bounds =
                viability::bounds::check_theorem_bounds(&report, &dynamics, REPORT_GATE_CAP);
            for s in &bounds.statements {
                if s.missing.is_empty() && !report.iter.at_least(s.bound) {
                    violation = true;
                    events.push(format!(
                        "bound {} asserted under {} but iter = {}",
                        s.bound,
                        s.hypotheses.join(", "),
                        report.iter
                    ));
                }
            }
        }
        Mode::Homotopy => {
            let cert = certificate.as_ref().expect("homotopy mode builds a fence");
            let f = match &dynamics {
                Dynamics::Function(f) => f,
                Dynamics::SetValued(_) => unreachable!("fences certify functions"),
            };
            let checked = homotopy_bound_check(cert, &c, f, &report)
                .expect("generated fence verifies by construction");
            if !checked.bound_met {
                finding = true;
                events.push(format!("certified instance with iter = {}", report.iter));
            }
        }
    }

    let dump = (violation || finding).then(|| {
        let kind = if violation { "counterexample" } else { "finding" };
        let stem = format!("{kind}-{}-{}-{index}", config.mode, config.seed);
        let instance = Instance {
            name: Some(stem.clone()),
            space: space.clone(),
            c: c.clone(),
            dynamics: dynamics.clone(),
            certificate,
            expected: None,
        };
        (format!("{stem}.txt"), emit_instance(&instance))
    });

    Outcome {
        index,
        events,
        dump,
        violation,
        finding,
    }
}

pub fn run_search(config: &SearchConfig) -> anyhow::Result<SearchResult> {
    let outcomes: Vec<Outcome> = (0..config.instances)
        .into_par_iter()
        .map(|i| evaluate(config, i))
        .collect();

    let mut summary = format!(
        "search mode={} seed={} instances={} max-cells={}\n",
        config.mode, config.seed, config.instances, config.max_cells
    );
    let mut violations = 0;
    let mut findings = 0;
    let mut dumped = Vec::new();
    for outcome in &outcomes {
        violations += outcome.violation as usize;
        findings += outcome.finding as usize;
        for event in &outcome.events {
            summary.push_str(&format!("instance {}: {event}\n", outcome.index));
        }
        if let Some((file, contents)) = &outcome.dump {
            let path = config.dump_dir.join(file);
            write_dump(&path, contents)?;
            summary.push_str(&format!("instance {}: dumped {file}\n", outcome.index));
            dumped.push(path);
        }
    }
    summary.push_str(&format!("violations: {violations}\n"));
    if config.mode == Mode::Homotopy {
        summary.push_str(&format!("findings: {findings}\n"));
    }
    Ok(SearchResult {
        summary,
        violations,
        findings,
        dumped,
    })
}

fn write_dump(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}
