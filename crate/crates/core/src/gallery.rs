//! Catalogue of worked instances with known step-counts.
//!
//! Each builder returns a space, a constraint set, dynamics, and the values
//! the engine must reproduce exactly. The Euclidean originals are encoded on
//! the coarsest cell grid whose vertices contain every breakpoint of the
//! piecewise map definitions (and of their value kinks), so that every cell
//! maps into a single cell and the induced cell map is monotone.

use crate::filtration::Iter;
use crate::homotopy::HomotopyCertificate;
use crate::map::{CellMap, Check, Dynamics, HypothesisReport, SetValuedMap};
use crate::set::PointSet;
use crate::space::{build_space, circle_model, path_model, product_space, Space};

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum GalleryError {
    #[error("no catalogue instance named `{0}`")]
    UnknownExample(String),
    #[error("bad parameter in `{0}`: {1}")]
    BadParameter(String, String),
}

/// Which hypothesis checks are expected to hold (`Some`) or to not apply to
/// the map's kind (`None`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedHypotheses {
    pub continuous: Option<bool>,
    pub bdr_function: Option<bool>,
    pub usc: Option<bool>,
    pub conn: Option<bool>,
    pub bdr_weak: Option<bool>,
    pub bdr_strong: Option<bool>,
}

impl ExpectedHypotheses {
    pub fn function(continuous: bool, bdr: bool) -> Self {
        ExpectedHypotheses {
            continuous: Some(continuous),
            bdr_function: Some(bdr),
            usc: None,
            conn: None,
            bdr_weak: None,
            bdr_strong: None,
        }
    }

    pub fn setvalued(usc: bool, conn: bool, weak: bool, strong: bool) -> Self {
        ExpectedHypotheses {
            continuous: None,
            bdr_function: None,
            usc: Some(usc),
            conn: Some(conn),
            bdr_weak: Some(weak),
            bdr_strong: Some(strong),
        }
    }

    /// Collapses a tri-state report to the same shape for comparison.
    pub fn of_report(report: &HypothesisReport) -> Self {
        fn state(c: &Check) -> Option<bool> {
            match c {
                Check::Holds => Some(true),
                Check::Fails(_) => Some(false),
                Check::NotApplicable => None,
            }
        }
        ExpectedHypotheses {
            continuous: state(&report.continuous),
            bdr_function: state(&report.bdr_function),
            usc: state(&report.usc),
            conn: state(&report.conn),
            bdr_weak: state(&report.bdr_weak),
            bdr_strong: state(&report.bdr_strong),
        }
    }
}

pub struct GalleryInstance {
    pub name: String,
    pub space: Space,
    pub c: PointSet,
    pub dynamics: Dynamics,
    pub expected_iter: Iter,
    pub expected_hypotheses: ExpectedHypotheses,
    /// A deformation chain from the identity to the map, when one exists.
    /// The two spiral instances and the windowed drift carry none: see the
    /// rigidity tests below for why no chain can reach a rotation.
    pub certificate: Option<HomotopyCertificate>,
    pub notes: &'static str,
}

/// Concrete names `build_example` accepts, in catalogue order. The circle
/// and torus families are parametric; the listed members are the ones the
/// test suites pin down.
pub fn gallery_names() -> Vec<&'static str> {
    vec![
        "two_points",
        "parabola_trap",
        "circle_5",
        "circle_7",
        "stripes",
        "annulus_spiral",
        "plane_spiral",
        "torus_5_7",
        "split_images",
        "square_handle",
    ]
}

pub fn build_example(name: &str) -> Result<GalleryInstance, GalleryError> {
    if let Some(d) = name.strip_prefix("circle_") {
        let d: usize = d
            .parse()
            .map_err(|_| GalleryError::UnknownExample(name.to_string()))?;
        if d < 5 || d % 2 == 0 {
            return Err(GalleryError::BadParameter(
                name.to_string(),
                "the arc construction needs an odd sector count of at least 5".into(),
            ));
        }
        return Ok(circle_arc_rotation(d));
    }
    if let Some(rest) = name.strip_prefix("torus_") {
        let parts: Vec<&str> = rest.splitn(2, '_').collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| GalleryError::UnknownExample(name.to_string()))
        };
        if parts.len() != 2 {
            return Err(GalleryError::UnknownExample(name.to_string()));
        }
        let (d1, d2) = (parse(parts[0])?, parse(parts[1])?);
        if d1 < 3 || d2 < 3 || d1 % 2 == 0 || d2 % 2 == 0 || gcd(d1, d2) != 1 {
            return Err(GalleryError::BadParameter(
                name.to_string(),
                "needs two coprime odd sector counts of at least 3".into(),
            ));
        }
        if 4 * d1 * d2 > 4000 {
            return Err(GalleryError::BadParameter(
                name.to_string(),
                "product model too large".into(),
            ));
        }
        return Ok(torus_rotation(d1, d2));
    }
    match name {
        "two_points" => Ok(two_points()),
        "parabola_trap" => Ok(parabola_trap()),
        "stripes" => Ok(stripes(3)),
        "annulus_spiral" => Ok(annulus_spiral()),
        "plane_spiral" => Ok(plane_spiral()),
        "split_images" => Ok(split_images()),
        "square_handle" => Ok(square_handle()),
        _ => Err(GalleryError::UnknownExample(name.to_string())),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An isolated point and a segment; the two constraint cells feed each
/// other across the gap until the segment's midpoint (outside C) is hit.
/// The ambient space is disconnected, so only the rim-based floor of two
/// steps applies, and it is attained.
fn two_points() -> GalleryInstance {
    let space = build_space(
        vec!["q0", "p2", "s2", "p3", "s3", "p4"],
        &[("p2", "s2"), ("p3", "s2"), ("p3", "s3"), ("p4", "s3")],
    )
    .expect("static cell list");
    let c = space.named(&["q0", "p4"]);
    let f = CellMap::from_fn(c.clone(), |x| {
        let target = match space.name(x) {
            "q0" => "p3",
            "p4" => "q0",
            other => unreachable!("no rule for {other}"),
        };
        space.cell(target).unwrap()
    });
    GalleryInstance {
        name: "two_points".into(),
        space: space.clone(),
        c,
        dynamics: Dynamics::Function(f),
        expected_iter: Iter::Finite(2),
        expected_hypotheses: ExpectedHypotheses::function(true, true),
        certificate: None,
        notes: "isolated point plus segment; disconnected ambient space, so two steps is already optimal",
    }
}

/// A point and an interval on a line, with a fold: the interval's endpoints
/// map to the point, the point maps into the interval, and the interval's
/// inside falls below the line segment that carries C.
fn parabola_trap() -> GalleryInstance {
    let space = build_space(
        vec![
            "pm1", "p0", "p1", "p2", "p3", "p4", "p5", "sm1", "s0", "s1", "s2", "s3", "s4",
        ],
        &[
            ("pm1", "sm1"),
            ("p0", "sm1"),
            ("p0", "s0"),
            ("p1", "s0"),
            ("p1", "s1"),
            ("p2", "s1"),
            ("p2", "s2"),
            ("p3", "s2"),
            ("p3", "s3"),
            ("p4", "s3"),
            ("p4", "s4"),
            ("p5", "s4"),
        ],
    )
    .expect("static cell list");
    let c = space.named(&["p0", "p2", "s2", "p3", "s3", "p4"]);
    let f = CellMap::from_fn(c.clone(), |x| {
        let target = match space.name(x) {
            "p0" => "s2",
            "p2" | "p4" => "p0",
            "s2" | "p3" | "s3" => "sm1",
            other => unreachable!("no rule for {other}"),
        };
        space.cell(target).unwrap()
    });
    GalleryInstance {
        name: "parabola_trap".into(),
        space: space.clone(),
        c,
        dynamics: Dynamics::Function(f),
        expected_iter: Iter::Finite(3),
        expected_hypotheses: ExpectedHypotheses::function(true, true),
        certificate: None,
        notes: "fold map on a point plus an interval; the whole rim survives one step, its endpoints two",
    }
}

/// Rotation by two sectors on a circle with `d` sectors, constrained to the
/// closed arc complementary to the two sectors after angle zero. Every
/// vertex orbit is a single d-cycle with one hole, so the count is d-1.
fn circle_arc_rotation(d: usize) -> GalleryInstance {
    let space = circle_model(d).expect("parameter validated by caller");
    let mut arc: Vec<String> = (1..d).map(|i| format!("v{i}")).collect();
    arc.extend((1..d - 1).map(|i| format!("e{i}")));
    let refs: Vec<&str> = arc.iter().map(|s| s.as_str()).collect();
    let c = space.named(&refs);
    let f = CellMap::from_fn(c.clone(), |x| {
        let name = space.name(x);
        let (kind, idx) = name.split_at(1);
        let idx: usize = idx.parse().unwrap();
        space.cell(&format!("{kind}{}", (idx + 2) % d)).unwrap()
    });
    GalleryInstance {
        name: format!("circle_{d}"),
        space: space.clone(),
        c,
        dynamics: Dynamics::Function(f),
        expected_iter: Iter::Finite(d - 1),
        expected_hypotheses: ExpectedHypotheses::function(true, true),
        certificate: None,
        notes: "two-sector rotation against a closed arc missing two sectors; the vertex orbit has a single hole",
    }
}

/// Window parameters for the periodic drift instance: `periods` full
/// repetitions of the pattern plus a protective right margin. The margin is
/// sized so that truncation effects (which travel left two units per step)
/// never reach the central period within the five steps the count lasts.
fn stripes_parts(periods: usize) -> (Space, PointSet, CellMap) {
    let width = 5 * periods + 5;
    let c_end = 5 * periods + 3;

    let mut cells: Vec<String> = Vec::new();
    let mut hasse: Vec<(String, String)> = Vec::new();
    let face = |f: String, c: String, hasse: &mut Vec<(String, String)>| {
        hasse.push((f, c));
    };

    for x in 0..=width {
        cells.push(format!("ax{x}"));
    }
    for x in 0..width {
        cells.push(format!("ae{x}"));
        face(format!("ax{x}"), format!("ae{x}"), &mut hasse);
        face(format!("ax{}", x + 1), format!("ae{x}"), &mut hasse);
    }
    // One pocket of two unit squares hangs below each stripe footprint.
    for k in 0..=periods {
        let s = 5 * k;
        for x in s..=s + 2 {
            cells.push(format!("b{x}"));
            cells.push(format!("vt{x}"));
            face(format!("b{x}"), format!("vt{x}"), &mut hasse);
            face(format!("ax{x}"), format!("vt{x}"), &mut hasse);
        }
        for x in s..=s + 1 {
            cells.push(format!("bh{x}"));
            cells.push(format!("sq{x}"));
            face(format!("b{x}"), format!("bh{x}"), &mut hasse);
            face(format!("b{}", x + 1), format!("bh{x}"), &mut hasse);
            face(format!("ae{x}"), format!("sq{x}"), &mut hasse);
            face(format!("bh{x}"), format!("sq{x}"), &mut hasse);
            face(format!("vt{x}"), format!("sq{x}"), &mut hasse);
            face(format!("vt{}", x + 1), format!("sq{x}"), &mut hasse);
        }
    }
    let pairs: Vec<(&str, &str)> = hasse.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let space = build_space(cells, &pairs).expect("generated cell list");

    let mut c_cells: Vec<String> = (0..=c_end).map(|x| format!("ax{x}")).collect();
    c_cells.extend((0..c_end).map(|x| format!("ae{x}")));
    let refs: Vec<&str> = c_cells.iter().map(|s| s.as_str()).collect();
    let c = space.named(&refs);

    // On the axis the drift is x+2; feeding into a pocket the vertical dip
    // |5k+4-x|-1 lands edge cells in the pocket squares and the one vertex
    // at the dip bottom.
    let f = CellMap::from_fn(c.clone(), |cell| {
        let name = space.name(cell);
        let target = if let Some(x) = name.strip_prefix("ax") {
            let x: usize = x.parse().unwrap();
            match x % 5 {
                4 => format!("b{}", x + 2),
                _ => format!("ax{}", x + 2),
            }
        } else {
            let x: usize = name.strip_prefix("ae").unwrap().parse().unwrap();
            match x % 5 {
                3 | 4 => format!("sq{}", x + 2),
                _ => format!("ae{}", x + 2),
            }
        };
        space.cell(&target).unwrap()
    });
    (space, c, f)
}

/// Rightward drift on a line with pockets hanging below every fifth unit.
/// The window cuts an infinite pattern: the rim condition fails on the last
/// three rim cells before the right seam (their true images lie beyond the
/// window), which is why no deformation chain to the map can exist here.
fn stripes(periods: usize) -> GalleryInstance {
    let (space, c, f) = stripes_parts(periods);
    GalleryInstance {
        name: "stripes".into(),
        space,
        c,
        dynamics: Dynamics::Function(f),
        expected_iter: Iter::Finite(5),
        expected_hypotheses: ExpectedHypotheses::function(true, false),
        certificate: None,
        notes: "windowed periodic drift; the seam artifact breaks the rim condition on three right-edge cells",
    }
}

const ANGULAR_SECTORS: usize = 5;

/// Angular cells covering the closed arc from the first to the last spoke,
/// the long way round: the constraint arc of both spiral instances.
fn spiral_arc_names() -> Vec<String> {
    let mut names: Vec<String> = (1..ANGULAR_SECTORS).map(|i| format!("v{i}")).collect();
    names.extend((1..ANGULAR_SECTORS - 1).map(|i| format!("e{i}")));
    names
}

fn rotate_two(name: &str) -> String {
    let (kind, idx) = name.split_at(1);
    let idx: usize = idx.parse().unwrap();
    format!("{kind}{}", (idx + 2) % ANGULAR_SECTORS)
}

/// Inner band of three radial cells times the full circle, plus the outer
/// band over the constraint arc.
fn spiral_constraint(space: &Space) -> PointSet {
    let mut names: Vec<String> = Vec::new();
    for r in ["r1", "r1_2", "r2"] {
        for i in 0..ANGULAR_SECTORS {
            names.push(format!("({r},v{i})"));
            names.push(format!("({r},e{i})"));
        }
    }
    for r in ["r2", "r2_25", "r25", "r25_3", "r3"] {
        for a in spiral_arc_names() {
            names.push(format!("({r},{a})"));
        }
    }
    names.sort();
    names.dedup();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    space.named(&refs)
}

fn radial_path() -> Space {
    build_space(
        vec!["r1", "r1_2", "r2", "r2_25", "r25", "r25_3", "r3"],
        &[
            ("r1", "r1_2"),
            ("r2", "r1_2"),
            ("r2", "r2_25"),
            ("r25", "r2_25"),
            ("r25", "r25_3"),
            ("r3", "r25_3"),
        ],
    )
    .expect("static cell list")
}

fn split_pair(name: &str) -> (&str, &str) {
    let inner = &name[1..name.len() - 1];
    inner.split_once(',').expect("product cell name")
}

/// Rigid spiral on an annulus: snap every radius to the 2.5 vertex and
/// rotate two sectors. The constraint is the inner band plus the outer arc,
/// so the inner circle is interior and the rim rotates safely inside.
fn annulus_spiral() -> GalleryInstance {
    let space = product_space(&radial_path(), &circle_model(ANGULAR_SECTORS).unwrap());
    let c = spiral_constraint(&space);
    let f = CellMap::from_fn(c.clone(), |cell| {
        let (_, a) = split_pair(space.name(cell));
        space.cell(&format!("(r25,{})", rotate_two(a))).unwrap()
    });
    GalleryInstance {
        name: "annulus_spiral".into(),
        space: space.clone(),
        c,
        dynamics: Dynamics::Function(f),
        expected_iter: Iter::Finite(5),
        expected_hypotheses: ExpectedHypotheses::function(true, true),
        certificate: None,
        notes: "radius-snapping rotation on an annulus; no deformation chain from the identity exists (see the rigidity test)",
    }
}

/// The annulus embedded in a filled disk with an outer collar: a hub cell
/// above the whole inner circle and one more radial band outside. Both
/// circles of the annulus become rim cells of the same constraint set.
fn disk_with_collar() -> Space {
    let radial = [
        "r1", "r1_2", "r2", "r2_25", "r25", "r25_3", "r3", "r3_4", "r4",
    ];
    let radial_covers = [
        ("r1", "r1_2"),
        ("r2", "r1_2"),
        ("r2", "r2_25"),
        ("r25", "r2_25"),
        ("r25", "r25_3"),
        ("r3", "r25_3"),
        ("r3", "r3_4"),
        ("r4", "r3_4"),
    ];
    let ang = circle_model(ANGULAR_SECTORS).unwrap();
    let mut cells: Vec<String> = vec!["hub".into()];
    for r in radial {
        for a in ang.cells() {
            cells.push(format!("({r},{})", ang.name(a)));
        }
    }
    let mut hasse: Vec<(String, String)> = Vec::new();
    for (rf, rc) in radial_covers {
        for a in ang.cells() {
            hasse.push((
                format!("({rf},{})", ang.name(a)),
                format!("({rc},{})", ang.name(a)),
            ));
        }
    }
    for &(af, ac) in ang.covers() {
        for r in radial {
            hasse.push((
                format!("({r},{})", ang.name(af)),
                format!("({r},{})", ang.name(ac)),
            ));
        }
    }
    for a in ang.cells() {
        hasse.push((format!("(r1,{})", ang.name(a)), "hub".into()));
    }
    let pairs: Vec<(&str, &str)> = hasse.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    build_space(cells, &pairs).expect("generated cell list")
}

/// Same constraint set inside the filled disk, with the folded radial map:
/// both boundary circles land on the radius-2 vertex, everything already
/// inside the band contracts into the open interval between 2 and 2.5.
/// The fold buys one extra step over the rigid spiral.
fn plane_spiral() -> GalleryInstance {
    let space = disk_with_collar();
    let c = spiral_constraint(&space);
    let f = CellMap::from_fn(c.clone(), |cell| {
        let (r, a) = split_pair(space.name(cell));
        let fr = match r {
            "r1" | "r3" => "r2",
            "r2" => "r25",
            _ => "r2_25",
        };
        space.cell(&format!("({fr},{})", rotate_two(a))).unwrap()
    });
    GalleryInstance {
        name: "plane_spiral".into(),
        space: space.clone(),
        c,
        dynamics: Dynamics::Function(f),
        expected_iter: Iter::Finite(6),
        expected_hypotheses: ExpectedHypotheses::function(true, true),
        certificate: None,
        notes: "folded spiral in a filled disk; both circles are rim cells yet map to the full-circle band",
    }
}

/// Componentwise two-sector rotation on a product of two odd circles,
/// constrained to the complement of an open box of three cells by three
/// cells. Each of the four orbit classes is a single cycle of length d1*d2
/// with at least one hole, so the count is d1*d2 - 1, attained by the
/// vertex-vertex class whose box hole is unique.
fn torus_rotation(d1: usize, d2: usize) -> GalleryInstance {
    let left = circle_model(d1).unwrap();
    let right = circle_model(d2).unwrap();
    let space = product_space(&left, &right);
    let hole = ["e0", "v1", "e1"];
    let mut c = space.full_set();
    for a in hole {
        for b in hole {
            c.remove(space.cell(&format!("({a},{b})")).unwrap());
        }
    }
    let f = CellMap::from_fn(c.clone(), |cell| {
        let (a, b) = split_pair(space.name(cell));
        let rot = |name: &str, d: usize| {
            let (kind, idx) = name.split_at(1);
            let idx: usize = idx.parse().unwrap();
            format!("{kind}{}", (idx + 2) % d)
        };
        space
            .cell(&format!("({},{})", rot(a, d1), rot(b, d2)))
            .unwrap()
    });
    GalleryInstance {
        name: format!("torus_{d1}_{d2}"),
        space: space.clone(),
        c,
        dynamics: Dynamics::Function(f),
        expected_iter: Iter::Finite(d1 * d2 - 1),
        expected_hypotheses: ExpectedHypotheses::function(true, true),
        certificate: None,
        notes: "product rotation dodging an open box; every orbit class is one full cycle with a hole",
    }
}

/// Set-valued map on an interval whose middle jumps out of the constraint
/// while the two flanks aim at the middle: images are upper semicontinuous
/// and the rim maps strictly inside, but the two-point images at the
/// junctions are disconnected, and the count stops at two.
fn split_images() -> GalleryInstance {
    let space = path_model(6).expect("static parameter");
    let c = space.named(&["v1", "e1", "v2", "e2", "v3", "e3", "v4", "e4", "v5"]);
    let f = SetValuedMap::from_fn(c.clone(), |cell| {
        let names: &[&str] = match space.name(cell) {
            "v1" | "e1" | "e4" | "v5" => &["v3"],
            "v2" | "v4" => &["v3", "v6"],
            "e2" | "v3" | "e3" => &["v6"],
            other => unreachable!("no rule for {other}"),
        };
        space.named(names)
    })
    .expect("images nonempty");
    GalleryInstance {
        name: "split_images".into(),
        space: space.clone(),
        c,
        dynamics: Dynamics::SetValued(f),
        expected_iter: Iter::Finite(2),
        expected_hypotheses: ExpectedHypotheses::setvalued(true, false, true, true),
        certificate: None,
        notes: "disconnected two-point images at the junctions cap the count at the rim floor",
    }
}

/// A filled square with a handle segment sticking out of one corner. The
/// square's outline feeds the handle, the handle feeds the square's center,
/// the inside leaks out along the handle's line; the corner where handle
/// meets square needs a connected multi-cell image to stay upper
/// semicontinuous, and that image is not contained in the constraint.
fn square_handle() -> GalleryInstance {
    let space = product_space(&path_model(5).unwrap(), &path_model(4).unwrap());
    let x_range = ["v1", "e1", "v2", "e2", "v3"];
    let interior = ["e1", "v2", "e2"];
    let mut names: Vec<String> = Vec::new();
    for cx in x_range {
        for cy in x_range {
            names.push(format!("({cx},{cy})"));
        }
    }
    names.push("(e3,v1)".into());
    names.push("(v4,v1)".into());
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let c = space.named(&refs);

    let f = SetValuedMap::from_fn(c.clone(), |cell| {
        let (cx, cy) = split_pair(space.name(cell));
        let images: &[&str] = match (cx, cy) {
            ("v3", "v1") => &["(v2,v2)", "(e2,e1)", "(v3,e1)", "(e3,e1)", "(v4,v1)"],
            ("e3", _) | ("v4", _) => &["(v2,v2)"],
            ("v2", "v2") => &["(v4,v2)"],
            _ if interior.contains(&cx) && interior.contains(&cy) => &["(v4,e1)"],
            _ => &["(v4,v1)"],
        };
        space.named(images)
    })
    .expect("images nonempty");
    GalleryInstance {
        name: "square_handle".into(),
        space: space.clone(),
        c,
        dynamics: Dynamics::SetValued(f),
        expected_iter: Iter::Finite(4),
        expected_hypotheses: ExpectedHypotheses::setvalued(true, true, true, false),
        certificate: None,
        notes: "square outline, handle and center chase each other; the corner image crosses outside the constraint",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{max_orbit_bruteforce, viability_sequence};
    use crate::homology::betti1;
    use crate::map::hypothesis_report;

    fn run(name: &str) -> (GalleryInstance, crate::filtration::ViabilityReport) {
        let inst = build_example(name).unwrap();
        let report = viability_sequence(&inst.c, &inst.dynamics).unwrap();
        (inst, report)
    }

    #[test]
    fn catalogue_builds_and_counts_match() {
        for name in gallery_names() {
            let (inst, report) = run(name);
            assert_eq!(report.iter, inst.expected_iter, "count for {name}");
            let oracle = max_orbit_bruteforce(&inst.c, &inst.dynamics).unwrap();
            assert_eq!(report.iter, oracle, "oracle disagrees on {name}");
        }
    }

    #[test]
    fn hypothesis_profiles_match() {
        for name in gallery_names() {
            let (inst, _) = run(name);
            let profile = ExpectedHypotheses::of_report(&hypothesis_report(&inst.dynamics));
            assert_eq!(profile, inst.expected_hypotheses, "profile for {name}");
        }
    }

    #[test]
    fn unknown_and_malformed_names_are_rejected() {
        assert!(matches!(
            build_example("nonsense"),
            Err(GalleryError::UnknownExample(_))
        ));
        assert!(matches!(
            build_example("circle_4"),
            Err(GalleryError::BadParameter(..))
        ));
        assert!(matches!(
            build_example("torus_3_9"),
            Err(GalleryError::BadParameter(..))
        ));
        assert!(matches!(
            build_example("torus_5_x"),
            Err(GalleryError::UnknownExample(_))
        ));
    }

    #[test]
    fn two_points_levels() {
        let (inst, report) = run("two_points");
        let s = &inst.space;
        assert_eq!(report.filtration[1], s.named(&["q0", "p4"]));
        assert_eq!(report.filtration[2], s.named(&["p4"]));
        assert!(report.filtration[3].is_empty());
        // The isolated point is open, so the rim is the segment endpoint.
        assert_eq!(inst.c.boundary(), s.named(&["p4"]));
    }

    #[test]
    fn parabola_trap_levels() {
        let (inst, report) = run("parabola_trap");
        let s = &inst.space;
        assert_eq!(inst.c.boundary(), s.named(&["p0", "p2", "p4"]));
        assert_eq!(report.filtration[2], s.named(&["p0", "p2", "p4"]));
        assert_eq!(report.filtration[3], s.named(&["p2", "p4"]));
        assert!(report.filtration[4].is_empty());
    }

    #[test]
    fn circle_5_levels() {
        let (inst, report) = run("circle_5");
        let s = &inst.space;
        assert_eq!(report.filtration[2], s.named(&["v1", "e1", "v2", "v4"]));
        assert_eq!(report.filtration[3], s.named(&["v2", "v4"]));
        assert_eq!(report.filtration[4], s.named(&["v2"]));
        assert!(report.filtration[5].is_empty());
    }

    #[test]
    fn circle_counts_follow_the_sector_parameter() {
        for d in [5, 7, 9, 11] {
            let inst = build_example(&format!("circle_{d}")).unwrap();
            let report = viability_sequence(&inst.c, &inst.dynamics).unwrap();
            assert_eq!(report.iter, Iter::Finite(d - 1));
        }
    }

    #[test]
    fn stripes_levels_and_seam() {
        let (inst, report) = run("stripes");
        let s = &inst.space;
        let seg = |ranges: &[(usize, usize)]| {
            let mut names: Vec<String> = Vec::new();
            for &(a, b) in ranges {
                for x in a..=b {
                    names.push(format!("ax{x}"));
                }
                for x in a..b {
                    names.push(format!("ae{x}"));
                }
            }
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            s.named(&refs)
        };
        assert_eq!(
            report.filtration[2],
            seg(&[(0, 3), (5, 8), (10, 13), (15, 16)])
        );
        assert_eq!(
            report.filtration[3],
            seg(&[(0, 1), (3, 3), (5, 6), (8, 8), (10, 11), (13, 13)])
        );
        assert_eq!(
            report.filtration[4],
            s.named(&["ax1", "ax3", "ax6", "ax8", "ax11"])
        );
        assert_eq!(report.filtration[5], s.named(&["ax1", "ax6"]));
        assert!(report.filtration[6].is_empty());

        // The ambient window is contractible, like the plane it cuts out.
        assert_eq!(betti1(s), 0);

        // The rim condition fails exactly on the last three rim cells
        // before the seam, whose true images lie beyond the window.
        let rim = inst.c.boundary();
        let f = match &inst.dynamics {
            Dynamics::Function(f) => f,
            _ => unreachable!(),
        };
        let mut violating: Vec<&str> = rim
            .iter()
            .filter(|&x| !inst.c.contains(f.apply(x)))
            .map(|x| s.name(x))
            .collect();
        violating.sort_unstable();
        assert_eq!(violating, vec!["ae16", "ax17", "ax18"]);
    }

    /// Widening the window must not change the central period: truncation
    /// effects travel left two units per step and the margin absorbs them.
    #[test]
    fn stripes_window_is_wide_enough() {
        let narrow = stripes_parts(3);
        let wide = stripes_parts(5);
        let narrow_report =
            viability_sequence(&narrow.1, &Dynamics::Function(narrow.2.clone())).unwrap();
        let wide_report =
            viability_sequence(&wide.1, &Dynamics::Function(wide.2.clone())).unwrap();
        assert_eq!(narrow_report.iter, wide_report.iter);

        // Compare the central period of each window: cells over [5,10) in
        // the narrow window against cells over [10,15) in the wide one.
        let member = |report: &crate::filtration::ViabilityReport,
                      space: &Space,
                      level: usize,
                      name: &str| {
            report.filtration[level].contains(space.cell(name).unwrap())
        };
        for level in 1..=5 {
            for offset in 0..5 {
                let narrow_v = format!("ax{}", 5 + offset);
                let wide_v = format!("ax{}", 10 + offset);
                assert_eq!(
                    member(&narrow_report, &narrow.0, level, &narrow_v),
                    member(&wide_report, &wide.0, level, &wide_v),
                    "vertex {offset} at level {level}"
                );
                if offset < 4 {
                    let narrow_e = format!("ae{}", 5 + offset);
                    let wide_e = format!("ae{}", 10 + offset);
                    assert_eq!(
                        member(&narrow_report, &narrow.0, level, &narrow_e),
                        member(&wide_report, &wide.0, level, &wide_e),
                        "edge {offset} at level {level}"
                    );
                }
            }
        }
    }

    #[test]
    fn annulus_spiral_levels() {
        let (inst, report) = run("annulus_spiral");
        let s = &inst.space;
        assert_eq!(inst.c.len(), 58);
        let sizes: Vec<usize> = report.filtration.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, vec![70, 58, 37, 20, 10, 3, 0]);
        assert_eq!(
            report.filtration[5],
            s.named(&["(r1,v0)", "(r1_2,v0)", "(r2,v0)"])
        );
        // The inner circle is interior here: the rim is the radius-2 arc
        // opposite the constraint arc plus the two radial whiskers.
        let rim = inst.c.boundary();
        assert!(rim.contains(s.cell("(r2,v0)").unwrap()));
        assert!(!rim.contains(s.cell("(r1,v0)").unwrap()));
        assert!(rim.contains(s.cell("(r3,v1)").unwrap()));
        // The ambient annulus keeps its hole.
        assert_eq!(betti1(s), 1);
    }

    #[test]
    fn plane_spiral_levels_and_components() {
        let (inst, report) = run("plane_spiral");
        let s = &inst.space;
        let sizes: Vec<usize> = report.filtration.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, vec![91, 58, 43, 26, 14, 5, 2, 0]);
        assert_eq!(report.filtration[6], s.named(&["(r1,v3)", "(r3,v3)"]));
        assert_eq!(
            report.filtration[5],
            s.named(&["(r1,v0)", "(r1_2,v0)", "(r2,v0)", "(r1,v3)", "(r3,v3)"])
        );
        let components: Vec<usize> = (2..=6)
            .map(|k| report.filtration[k].components().len())
            .collect();
        assert_eq!(components, vec![1, 1, 2, 3, 2]);
        // Filling the disk makes both circles rim cells.
        let rim = inst.c.boundary();
        assert!(rim.contains(s.cell("(r1,v0)").unwrap()));
        assert!(rim.contains(s.cell("(r3,v1)").unwrap()));
        // The filled disk with its collar is simply connected.
        assert_eq!(betti1(s), 0);
    }

    /// The orbit structure behind the torus count: four orbit classes, each
    /// a single cycle of length 35; the vertex-vertex class contains exactly
    /// one cell of the removed box, the others more. The longest viable run
    /// in a 35-cycle with a hole is 34, and it is attained.
    #[test]
    fn torus_orbit_classes_cap_the_count() {
        let (inst, report) = run("torus_5_7");
        let s = &inst.space;
        assert_eq!(inst.c.len(), 131);
        assert_eq!(report.iter, Iter::Finite(34));

        let f = match &inst.dynamics {
            Dynamics::Function(f) => f,
            _ => unreachable!(),
        };
        // Walk the vertex-vertex orbit from (v0,v0): one full cycle of 35.
        let start = s.cell("(v0,v0)").unwrap();
        let mut seen = vec![start];
        let mut cur = start;
        loop {
            // Total rotation exists on every cell; extend beyond C by name.
            let (a, b) = split_pair(s.name(cur));
            let rot = |name: &str, d: usize| {
                let (kind, idx) = name.split_at(1);
                let idx: usize = idx.parse().unwrap();
                format!("{kind}{}", (idx + 2) % d)
            };
            cur = s.cell(&format!("({},{})", rot(a, 5), rot(b, 7))).unwrap();
            if cur == start {
                break;
            }
            seen.push(cur);
        }
        assert_eq!(seen.len(), 35);
        let holes = seen.iter().filter(|&&x| !inst.c.contains(x)).count();
        assert_eq!(holes, 1);

        // The cell after the hole realizes the 34-step run.
        let hole_pos = seen.iter().position(|&x| !inst.c.contains(x)).unwrap();
        let after = seen[(hole_pos + 1) % 35];
        let mut x = after;
        let mut run = 0;
        while inst.c.contains(x) {
            run += 1;
            x = f
                .value(x)
                .unwrap_or_else(|| panic!("left C after {run} steps"));
            if run > 35 {
                break;
            }
        }
        assert_eq!(run, 34);
    }

    #[test]
    fn split_images_levels() {
        let (inst, report) = run("split_images");
        let s = &inst.space;
        assert_eq!(inst.c.boundary(), s.named(&["v1", "v5"]));
        assert_eq!(
            report.filtration[2],
            s.named(&["v1", "e1", "v2", "v4", "e4", "v5"])
        );
        assert!(report.filtration[3].is_empty());
    }

    #[test]
    fn square_handle_levels() {
        let (inst, report) = run("square_handle");
        let s = &inst.space;
        assert_eq!(inst.c.len(), 27);
        let sizes: Vec<usize> = report.filtration.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, vec![99, 27, 18, 16, 1, 0]);
        assert_eq!(report.filtration[4], s.named(&["(v3,v1)"]));
        // Level two is the square's outline plus the handle; the nine
        // inside cells leak out immediately.
        assert!(!report.filtration[2].contains(s.cell("(v2,v2)").unwrap()));
        assert!(report.filtration[2].contains(s.cell("(e3,v1)").unwrap()));
    }

    /// Why the spiral instances carry no deformation chain: on the circle
    /// factor, any monotone self-map pointwise comparable to the identity
    /// is the identity. A chain of comparable stages from the identity can
    /// therefore never leave it after projecting to the inner ring, while
    /// both spiral maps project to a genuine rotation there.
    #[test]
    fn identity_is_isolated_among_comparable_circle_maps() {
        let s = circle_model(ANGULAR_SECTORS).unwrap();
        let cells: Vec<_> = s.cells().collect();
        // Enumerate all self-assignments where each cell goes to a
        // comparable cell, and keep the monotone ones.
        let mut stack = vec![Vec::<usize>::new()];
        let mut found = Vec::new();
        while let Some(partial) = stack.pop() {
            if partial.len() == cells.len() {
                found.push(partial);
                continue;
            }
            let x = cells[partial.len()];
            for &cand in &cells {
                if !s.comparable(x, cand) {
                    continue;
                }
                // Monotonicity against already assigned cells.
                let consistent = partial.iter().enumerate().all(|(i, &img)| {
                    let y = cells[i];
                    let gimg = cells[img];
                    (!s.leq(x, y) || s.leq(cand, gimg))
                        && (!s.leq(y, x) || s.leq(gimg, cand))
                });
                if consistent {
                    let mut next = partial.clone();
                    next.push(cells.iter().position(|&c| c == cand).unwrap());
                    stack.push(next);
                }
            }
        }
        assert_eq!(found.len(), 1, "only the identity survives");
        let only = &found[0];
        assert!(only.iter().enumerate().all(|(i, &img)| i == img));

        // Consequently the catalogue attaches no certificate anywhere.
        for name in gallery_names() {
            assert!(build_example(name).unwrap().certificate.is_none());
        }
    }
}
