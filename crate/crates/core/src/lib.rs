//! Exact analysis of discrete dynamics on finite topological spaces.
//!
//! A finite space is a poset of cells; closed sets are down-sets, open sets
//! are up-sets. Given a self-map (or set-valued map) and a constraint
//! region `C`, the central object is the shrinking sequence
//! `C0 = X`, `C{n+1} = {x in C : f(x) meets Cn}` and the number of steps
//! until it empties or stabilizes. The other modules check order-theoretic
//! hypotheses on the map, verify structural statements about the sequence,
//! compute lower bounds for the step count from connectivity and boundary
//! data, compute low-degree Betti numbers of the order complex, and check
//! deformation certificates that upgrade those bounds.

pub mod bounds;
pub mod dot;
pub mod filtration;
pub mod gallery;
pub mod homology;
pub mod homotopy;
pub mod instance;
pub mod map;
pub mod propositions;
pub mod random;
pub mod report;
pub mod set;
pub mod space;

#[cfg(test)]
mod testutil;

pub use bounds::{
    check_theorem_bounds, decompose_open_set, fixed_point_via_retraction,
    has_fixed_point_property, BoundReport, BoundStatement, DecomposeError, Decomposition,
    RetractionError, FPP_BRUTE_FORCE_CAP,
};
pub use dot::dot_graph;
pub use gallery::{build_example, gallery_names, ExpectedHypotheses, GalleryError, GalleryInstance};
pub use instance::{emit_instance, parse_instance, Expected, Instance, InstanceError, InstanceWarning};
pub use report::{run_report, CertificateOutcome, ReportOptions, RunReport, REPORT_GATE_CAP};
pub use filtration::{
    max_orbit_bruteforce, orbit_is_valid, viability_sequence, FiltrationError, Iter, Orbit,
    ViabilityReport,
};
pub use homotopy::{
    homotopy_bound_check, random_fence, verify_certificate, CertificateCheck, CertificateClause,
    CertificateFailure, HomotopyCertificate, HomotopyError, HomotopyFinding,
};
pub use homology::{
    betti1, gate_boundary_connectedness, CohomologyError, GateReport, OrderComplex,
    GATE_ENUMERATION_CAP,
};
pub use map::{check_usc_via_open_sets,
    check_boundary_conditions, check_conn, check_continuous, check_usc, hypothesis_report,
    CellMap, Check, Dynamics, HypothesisReport, MapError, SetValuedMap, Witness,
};
pub use propositions::{verify_propositions, PropOutcome, PropositionCheck};
pub use set::{PointSet, SubspaceView};
pub use space::{
    build_space, circle_model, grid_model, path_model, product_space, Cell, FiniteSpace, Space,
    SpaceError,
};
