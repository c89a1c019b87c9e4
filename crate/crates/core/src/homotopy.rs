//! Deformation certificates: fences of comparable monotone maps.
//!
//! A continuous deformation of the identity into `f` is witnessed on a
//! finite model by a fence: maps `f_0 = id, f_1, ..., f_k = f`, each
//! monotone, consecutive ones pointwise comparable, and every stage
//! sending the constraint set's rim back into the constraint set. A
//! valid certificate feeds a conjecture harness for the bound
//! `iter >= 5`: the bound is proven for the continuous notion, the fence
//! analogue is open, so a violation here is a finding to report, never a
//! crash.

use crate::filtration::{Iter, ViabilityReport};
use crate::map::{check_continuous, CellMap, Check};
use crate::set::PointSet;
use crate::space::Cell;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct HomotopyCertificate {
    pub stages: Vec<CellMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateClause {
    /// A stage's domain is not the constraint set.
    WrongDomain,
    /// The constraint set is not closed, so its rim escapes it.
    ConstraintNotClosed,
    /// No stages at all.
    Empty,
    /// The first stage moves a cell.
    StartsAtIdentity,
    /// The last stage disagrees with the map under certification.
    EndsAtMap,
    /// A stage is not monotone.
    StageNotContinuous,
    /// Consecutive stages assign incomparable values to a cell.
    NotComparable,
    /// A stage sends a rim cell outside the constraint set.
    RimLeavesConstraint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFailure {
    pub stage: usize,
    pub cell: Option<Cell>,
    pub clause: CertificateClause,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateCheck {
    Pass,
    Fail(CertificateFailure),
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        matches!(self, CertificateCheck::Pass)
    }
}

fn fail(stage: usize, cell: Option<Cell>, clause: CertificateClause) -> CertificateCheck {
    CertificateCheck::Fail(CertificateFailure { stage, cell, clause })
}

/// Checks the three invariant groups of a certificate for `f` on `c`:
/// endpoints (identity to `f`), stagewise continuity with consecutive
/// pointwise comparability, and the rim condition at every stage.
pub fn verify_certificate(
    cert: &HomotopyCertificate,
    c: &PointSet,
    f: &CellMap,
) -> CertificateCheck {
    use CertificateClause::*;
    let space = c.space();
    if cert.stages.is_empty() {
        return fail(0, None, Empty);
    }
    for (i, stage) in cert.stages.iter().enumerate() {
        if stage.domain() != c {
            return fail(i, None, WrongDomain);
        }
    }
    let rim = c.boundary();
    if !rim.is_subset(c) {
        return fail(0, rim.difference(c).iter().next(), ConstraintNotClosed);
    }

    let first = &cert.stages[0];
    if let Some(x) = c.iter().find(|&x| first.apply(x) != x) {
        return fail(0, Some(x), StartsAtIdentity);
    }
    let last = cert.stages.last().unwrap();
    if let Some(x) = c.iter().find(|&x| last.apply(x) != f.apply(x)) {
        return fail(cert.stages.len() - 1, Some(x), EndsAtMap);
    }

    for (i, stage) in cert.stages.iter().enumerate() {
        if let Check::Fails(w) = check_continuous(stage) {
            return fail(i, w.cells().first().copied(), StageNotContinuous);
        }
        if let Some(x) = rim.iter().find(|&x| !c.contains(stage.apply(x))) {
            return fail(i, Some(x), RimLeavesConstraint);
        }
    }
    for (i, pair) in cert.stages.windows(2).enumerate() {
        if let Some(x) = c
            .iter()
            .find(|&x| !space.comparable(pair[0].apply(x), pair[1].apply(x)))
        {
            return fail(i, Some(x), NotComparable);
        }
    }
    CertificateCheck::Pass
}

#[derive(thiserror::Error, Debug)]
pub enum HomotopyError {
    #[error("certificate invalid at stage {}: {:?}", .0.stage, .0.clause)]
    CertificateInvalid(CertificateFailure),
}

/// Outcome of the conjecture harness on one certified instance.
#[derive(Clone, Debug)]
pub struct HomotopyFinding {
    pub iter: Iter,
    /// Whether the conjectured bound `iter >= 5` held.
    pub bound_met: bool,
}

/// Runs the conjectured bound on a certified instance. The certificate
/// must verify; whether the bound holds is recorded, not asserted.
pub fn homotopy_bound_check(
    cert: &HomotopyCertificate,
    c: &PointSet,
    f: &CellMap,
    report: &ViabilityReport,
) -> Result<HomotopyFinding, HomotopyError> {
    match verify_certificate(cert, c, f) {
        CertificateCheck::Pass => Ok(HomotopyFinding {
            iter: report.iter,
            bound_met: report.iter.at_least(5),
        }),
        CertificateCheck::Fail(failure) => Err(HomotopyError::CertificateInvalid(failure)),
    }
}

/// Grows a random fence from the identity on `c`: each stage perturbs
/// the previous one cellwise within comparability, keeping monotonicity
/// and the rim condition. The final stage is the generated map; the
/// fence itself is its certificate. Stages may stutter.
pub fn random_fence<R: Rng>(rng: &mut R, c: &PointSet, steps: usize) -> HomotopyCertificate {
    let space = c.space().clone();
    let rim = c.boundary();
    let mut stages = vec![CellMap::from_fn(c.clone(), |x| x)];
    for _ in 0..steps {
        let prev = stages.last().unwrap();
        let order = {
            let mut v: Vec<Cell> = c.iter().collect();
            v.sort_by_key(|&x| (space.cell_closure(x).len(), x));
            v
        };
        let mut values: Vec<Option<Cell>> = vec![None; space.len()];
        let mut ok = true;
        for &x in &order {
            let anchor = prev.apply(x);
            // Candidates stay comparable to the previous stage's value and
            // above the images of already-assigned faces.
            let mut allowed = space
                .minimal_open(anchor)
                .union(&space.cell_closure(anchor));
            for &p in &order {
                if p == x {
                    break;
                }
                if space.leq(p, x) {
                    let fp = values[p.index()].expect("faces assigned first");
                    allowed = allowed.intersection(&space.minimal_open(fp));
                }
            }
            if rim.contains(x) {
                allowed = allowed.intersection(c);
            }
            if allowed.is_empty() {
                ok = false;
                break;
            }
            let pick = if allowed.contains(anchor) && rng.gen_bool(0.6) {
                anchor
            } else {
                let nth = rng.gen_range(0..allowed.len());
                allowed.iter().nth(nth).unwrap()
            };
            values[x.index()] = Some(pick);
        }
        let next = if ok {
            CellMap::from_fn(c.clone(), |x| values[x.index()].unwrap())
        } else {
            prev.clone()
        };
        stages.push(next);
    }
    HomotopyCertificate { stages }
}
