//! The viability filtration and its step-count.
//!
//! Starting from `C0 = X`, each stage keeps the cells of `C` that can step
//! into the previous stage: `C{n+1} = {x in C : f(x) meets Cn}`. The stages
//! form a descending chain, so on a finite space the sequence either hits
//! the empty set or stabilizes; a nonempty stable core means the dynamics
//! can run forever. `max_orbit_bruteforce` recomputes the step-count by
//! longest-path search on the step graph and must agree everywhere.

use fixedbitset::FixedBitSet;

use crate::map::{hypothesis_report, Dynamics, HypothesisReport};
use crate::set::PointSet;
use crate::space::Cell;

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("the constraint set is empty")]
    EmptyC,
    #[error("the map's domain differs from the constraint set")]
    DomainMismatch,
}

/// Step-count of the dynamics inside the constraint set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Iter {
    Finite(usize),
    Infinite,
}

impl Iter {
    pub fn at_least(self, n: usize) -> bool {
        match self {
            Iter::Finite(k) => k >= n,
            Iter::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Iter::Finite(k) => Some(k),
            Iter::Infinite => None,
        }
    }
}

impl std::fmt::Display for Iter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Iter::Finite(k) => write!(f, "{k}"),
            Iter::Infinite => write!(f, "infinity"),
        }
    }
}

/// A longest (or eventually periodic) trajectory witnessing the step-count.
/// `prefix` walks into the cycle when one exists, sharing its entry cell
/// with `cycle`; for a finite count the prefix alone realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub prefix: Vec<Cell>,
    pub cycle: Option<Vec<Cell>>,
}

#[derive(Clone, Debug)]
pub struct ViabilityReport {
    /// `C0 = X` down to the first empty or first repeated stage.
    pub filtration: Vec<PointSet>,
    /// `A_n = C_n \ C_{n+1}`; together with the stable core these partition X.
    pub layers: Vec<PointSet>,
    pub iter: Iter,
    pub witness: Orbit,
    pub hypotheses: HypothesisReport,
    /// Smallest `n` with `C_{n+1} = C_n`, when the sequence stabilizes.
    pub stabilized_at: Option<usize>,
}

impl ViabilityReport {
    /// The stable core (empty when the count is finite).
    pub fn core(&self) -> &PointSet {
        self.filtration.last().expect("filtration never empty")
    }
}

/// Computes the exact filtration, its step-count and a witness orbit.
/// Hypothesis checks are recorded but never block: the sequence is defined
/// for any total map.
pub fn viability_sequence(
    c: &PointSet,
    dynamics: &Dynamics,
) -> Result<ViabilityReport, FiltrationError> {
    if c.is_empty() {
        return Err(FiltrationError::EmptyC);
    }
    if dynamics.domain() != c {
        return Err(FiltrationError::DomainMismatch);
    }
    let space = c.space();

    let mut filtration = vec![space.full_set()];
    let (iter, stabilized_at) = loop {
        let prev = filtration.last().unwrap();
        let next = dynamics.entering(prev);
        if &next == prev {
            break (Iter::Infinite, Some(filtration.len() - 1));
        }
        let emptied = next.is_empty();
        filtration.push(next);
        if emptied {
            break (Iter::Finite(filtration.len() - 2), None);
        }
    };

    let layers = filtration
        .windows(2)
        .map(|w| w[0].difference(&w[1]))
        .collect();

    let witness = extract_orbit(&filtration, iter, dynamics);
    Ok(ViabilityReport {
        filtration,
        layers,
        iter,
        witness,
        hypotheses: hypothesis_report(dynamics),
        stabilized_at,
    })
}

fn smallest(set: &PointSet) -> Cell {
    set.iter().next().expect("nonempty set")
}

/// Deterministic witness orbit: start at the smallest cell of the deepest
/// nonempty stage and always step to the smallest admissible successor.
fn extract_orbit(filtration: &[PointSet], iter: Iter, dynamics: &Dynamics) -> Orbit {
    match iter {
        Iter::Finite(k) => {
            // filtration = [C0, ..., Ck, empty]; walk down the stages.
            let mut prefix = vec![smallest(&filtration[k])];
            for i in 0..k {
                let x = *prefix.last().unwrap();
                let next = match dynamics {
                    Dynamics::Function(f) => f.apply(x),
                    Dynamics::SetValued(f) => {
                        let stage = &filtration[k - i - 1];
                        smallest(&f.apply(x).intersection(stage))
                    }
                };
                prefix.push(next);
            }
            Orbit {
                prefix,
                cycle: None,
            }
        }
        Iter::Infinite => {
            // Walk inside the stable core until a cell repeats.
            let core = filtration.last().unwrap();
            let mut walk = vec![smallest(core)];
            let mut seen = FixedBitSet::with_capacity(core.space().len());
            seen.insert(walk[0].index());
            loop {
                let x = *walk.last().unwrap();
                let next = match dynamics {
                    Dynamics::Function(f) => f.apply(x),
                    Dynamics::SetValued(f) => smallest(&f.apply(x).intersection(core)),
                };
                debug_assert!(core.contains(next), "core is forward invariant");
                if seen.contains(next.index()) {
                    let entry = walk.iter().position(|&y| y == next).unwrap();
                    let cycle = walk[entry..].to_vec();
                    walk.truncate(entry + 1);
                    return Orbit {
                        prefix: walk,
                        cycle: Some(cycle),
                    };
                }
                seen.insert(next.index());
                walk.push(next);
            }
        }
    }
}

/// Independent step-count: longest path in the step graph whose edges leave
/// only cells of `C`, with any reachable cycle counting as infinity.
pub fn max_orbit_bruteforce(c: &PointSet, dynamics: &Dynamics) -> Result<Iter, FiltrationError> {
    if c.is_empty() {
        return Err(FiltrationError::EmptyC);
    }
    if dynamics.domain() != c {
        return Err(FiltrationError::DomainMismatch);
    }
    let space = c.space();
    let n = space.len();

    // steps[x]: longest orbit starting at x; None while unvisited.
    // on_stack marks the current DFS chain for cycle detection.
    let mut steps: Vec<Option<usize>> = vec![None; n];
    let mut on_stack = vec![false; n];

    fn dfs(
        x: Cell,
        c: &PointSet,
        dynamics: &Dynamics,
        steps: &mut Vec<Option<usize>>,
        on_stack: &mut Vec<bool>,
    ) -> Option<usize> {
        if !c.contains(x) {
            return Some(0);
        }
        if let Some(v) = steps[x.index()] {
            return Some(v);
        }
        if on_stack[x.index()] {
            return None; // cycle through C
        }
        on_stack[x.index()] = true;
        let mut best = 0usize;
        let succ: Vec<Cell> = match dynamics {
            Dynamics::Function(f) => vec![f.apply(x)],
            Dynamics::SetValued(f) => f.apply(x).iter().collect(),
        };
        for y in succ {
            match dfs(y, c, dynamics, steps, on_stack) {
                Some(v) => best = best.max(v + 1),
                None => {
                    on_stack[x.index()] = false;
                    return None;
                }
            }
        }
        on_stack[x.index()] = false;
        steps[x.index()] = Some(best);
        Some(best)
    }

    let mut best = 0usize;
    for x in c.iter() {
        match dfs(x, c, dynamics, &mut steps, &mut on_stack) {
            Some(v) => best = best.max(v),
            None => return Ok(Iter::Infinite),
        }
    }
    Ok(Iter::Finite(best))
}

/// Checks an orbit against the dynamics: consecutive steps admissible,
/// every stepping cell inside `C`, and the cycle (when present) closing on
/// itself with the prefix ending at its entry cell.
pub fn orbit_is_valid(orbit: &Orbit, c: &PointSet, dynamics: &Dynamics) -> bool {
    let admissible = |x: Cell, y: Cell| match dynamics {
        Dynamics::Function(f) => f.value(x) == Some(y),
        Dynamics::SetValued(f) => f.value(x).is_some_and(|img| img.contains(y)),
    };
    let steps_ok = |walk: &[Cell]| walk.windows(2).all(|w| admissible(w[0], w[1]));
    if !steps_ok(&orbit.prefix) {
        return false;
    }
    // Every cell that steps must lie in C.
    let stepping = &orbit.prefix[..orbit.prefix.len().saturating_sub(1)];
    if !stepping.iter().all(|&x| c.contains(x)) {
        return false;
    }
    match &orbit.cycle {
        None => true,
        Some(cycle) => {
            !cycle.is_empty()
                && cycle.iter().all(|&x| c.contains(x))
                && steps_ok(cycle)
                && admissible(*cycle.last().unwrap(), cycle[0])
                && orbit.prefix.last() == cycle.first()
        }
    }
}
