//! Cell maps, set-valued maps and the order-theoretic hypothesis checks.
//!
//! On finite spaces continuity of `f` is exactly monotonicity, and upper
//! semicontinuity of a set-valued map reduces to a pointwise condition on
//! minimal open sets: for all `x <= y`, `f(y)` must lie inside the union of
//! `up(z)` over `z in f(x)`. The definitional all-open-sets criterion
//! survives as a test oracle.

use std::fmt;

use crate::set::PointSet;
use crate::space::{Cell, Space};

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum MapError {
    #[error("map not defined on `{0}`")]
    PartialMap(String),
    #[error("empty image at `{0}`")]
    EmptyImage(String),
    #[error("`{0}` is outside the map's domain")]
    NotInDomain(String),
}

/// A total function from the cells of `domain` into the ambient space.
#[derive(Clone)]
pub struct CellMap {
    domain: PointSet,
    values: Vec<Option<Cell>>,
}

impl CellMap {
    pub fn from_fn(domain: PointSet, mut f: impl FnMut(Cell) -> Cell) -> Self {
        let mut values = vec![None; domain.space().len()];
        for x in domain.iter() {
            values[x.index()] = Some(f(x));
        }
        CellMap { domain, values }
    }

    pub fn from_pairs(domain: PointSet, pairs: &[(Cell, Cell)]) -> Result<Self, MapError> {
        let space = domain.space().clone();
        let mut values = vec![None; space.len()];
        for &(x, y) in pairs {
            values[x.index()] = Some(y);
        }
        for x in domain.iter() {
            if values[x.index()].is_none() {
                return Err(MapError::PartialMap(space.name(x).to_string()));
            }
        }
        Ok(CellMap { domain, values })
    }

    pub fn domain(&self) -> &PointSet {
        &self.domain
    }

    pub fn space(&self) -> &Space {
        self.domain.space()
    }

    pub fn value(&self, x: Cell) -> Option<Cell> {
        if self.domain.contains(x) {
            self.values[x.index()]
        } else {
            None
        }
    }

    pub fn apply(&self, x: Cell) -> Cell {
        self.value(x).expect("cell outside the map's domain")
    }

    pub fn image(&self, a: &PointSet) -> Result<PointSet, MapError> {
        if !a.is_subset(&self.domain) {
            let stray = a
                .iter()
                .find(|&x| !self.domain.contains(x))
                .expect("non-subset has a stray cell");
            return Err(MapError::NotInDomain(self.space().name(stray).to_string()));
        }
        Ok(self.space().set_of(a.iter().map(|x| self.apply(x))))
    }

    /// The same assignment with singleton images.
    pub fn as_setvalued(&self) -> SetValuedMap {
        SetValuedMap::from_fn(self.domain.clone(), |x| {
            self.space().set_of([self.apply(x)])
        })
        .expect("singleton images are nonempty")
    }
}

impl fmt::Debug for CellMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = self.space();
        f.debug_map()
            .entries(
                self.domain
                    .iter()
                    .map(|x| (space.name(x), space.name(self.apply(x)))),
            )
            .finish()
    }
}

/// A total map from the cells of `domain` to nonempty point sets.
#[derive(Clone)]
pub struct SetValuedMap {
    domain: PointSet,
    values: Vec<Option<PointSet>>,
}

impl SetValuedMap {
    pub fn from_fn(
        domain: PointSet,
        mut f: impl FnMut(Cell) -> PointSet,
    ) -> Result<Self, MapError> {
        let space = domain.space().clone();
        let mut values = vec![None; space.len()];
        for x in domain.iter() {
            let img = f(x);
            if img.is_empty() {
                return Err(MapError::EmptyImage(space.name(x).to_string()));
            }
            values[x.index()] = Some(img);
        }
        Ok(SetValuedMap { domain, values })
    }

    pub fn from_pairs(domain: PointSet, pairs: &[(Cell, PointSet)]) -> Result<Self, MapError> {
        let space = domain.space().clone();
        let mut values = vec![None; space.len()];
        for (x, img) in pairs {
            if img.is_empty() {
                return Err(MapError::EmptyImage(space.name(*x).to_string()));
            }
            values[x.index()] = Some(img.clone());
        }
        for x in domain.iter() {
            if values[x.index()].is_none() {
                return Err(MapError::PartialMap(space.name(x).to_string()));
            }
        }
        Ok(SetValuedMap { domain, values })
    }

    pub fn domain(&self) -> &PointSet {
        &self.domain
    }

    pub fn space(&self) -> &Space {
        self.domain.space()
    }

    pub fn value(&self, x: Cell) -> Option<&PointSet> {
        if self.domain.contains(x) {
            self.values[x.index()].as_ref()
        } else {
            None
        }
    }

    pub fn apply(&self, x: Cell) -> &PointSet {
        self.value(x).expect("cell outside the map's domain")
    }

    pub fn image(&self, a: &PointSet) -> Result<PointSet, MapError> {
        if !a.is_subset(&self.domain) {
            let stray = a
                .iter()
                .find(|&x| !self.domain.contains(x))
                .expect("non-subset has a stray cell");
            return Err(MapError::NotInDomain(self.space().name(stray).to_string()));
        }
        let mut out = self.space().empty_set();
        for x in a.iter() {
            out = out.union(self.apply(x));
        }
        Ok(out)
    }
}

impl fmt::Debug for SetValuedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = self.space();
        f.debug_map()
            .entries(self.domain.iter().map(|x| (space.name(x), self.apply(x))))
            .finish()
    }
}

/// Either kind of dynamics on a constraint set.
#[derive(Clone)]
pub enum Dynamics {
    Function(CellMap),
    SetValued(SetValuedMap),
}

impl Dynamics {
    pub fn domain(&self) -> &PointSet {
        match self {
            Dynamics::Function(f) => f.domain(),
            Dynamics::SetValued(f) => f.domain(),
        }
    }

    pub fn space(&self) -> &Space {
        self.domain().space()
    }

    pub fn is_function(&self) -> bool {
        matches!(self, Dynamics::Function(_))
    }

    pub fn image(&self, a: &PointSet) -> Result<PointSet, MapError> {
        match self {
            Dynamics::Function(f) => f.image(a),
            Dynamics::SetValued(f) => f.image(a),
        }
    }

    /// Cells of the domain whose image meets `target` (for functions: lands
    /// in `target`). One step of the viability operator.
    pub fn entering(&self, target: &PointSet) -> PointSet {
        let dom = self.domain();
        match self {
            Dynamics::Function(f) => dom
                .space()
                .set_of(dom.iter().filter(|&x| target.contains(f.apply(x)))),
            Dynamics::SetValued(f) => dom
                .space()
                .set_of(dom.iter().filter(|&x| !f.apply(x).is_disjoint(target))),
        }
    }
}

/// Outcome of one hypothesis check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    Fails(Witness),
    NotApplicable,
}

impl Check {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn failed(&self) -> bool {
        matches!(self, Check::Fails(_))
    }
}

/// A cell (or ordered pair) at which a hypothesis breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    At(Cell),
    Pair(Cell, Cell),
}

impl Witness {
    pub fn describe(&self, space: &Space) -> String {
        match *self {
            Witness::At(x) => space.name(x).to_string(),
            Witness::Pair(x, y) => format!("{} <= {}", space.name(x), space.name(y)),
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        match *self {
            Witness::At(x) => vec![x],
            Witness::Pair(x, y) => vec![x, y],
        }
    }
}

/// Tri-state results for every hypothesis; fields that do not apply to the
/// map's kind are `NotApplicable`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub continuous: Check,
    pub bdr_function: Check,
    pub usc: Check,
    pub conn: Check,
    pub bdr_weak: Check,
    pub bdr_strong: Check,
}

/// Monotonicity on the induced order of the domain; the witness is the
/// first pair `x <= y` (ascending scan) with `f(x) !<= f(y)`.
pub fn check_continuous(f: &CellMap) -> Check {
    let space = f.space();
    for x in f.domain().iter() {
        for y in f.domain().iter() {
            if x != y && space.leq(x, y) && !space.leq(f.apply(x), f.apply(y)) {
                return Check::Fails(Witness::Pair(x, y));
            }
        }
    }
    Check::Holds
}

/// Upper semicontinuity via minimal opens: for `x <= y` in the domain,
/// `f(y)` must lie in the union of `up(z)` over `z in f(x)`.
pub fn check_usc(f: &SetValuedMap) -> Check {
    let space = f.space();
    for x in f.domain().iter() {
        let mut hull = space.empty_set();
        for z in f.apply(x).iter() {
            hull = hull.union(&space.minimal_open(z));
        }
        for y in f.domain().iter() {
            if x != y && space.leq(x, y) && !f.apply(y).is_subset(&hull) {
                return Check::Fails(Witness::Pair(x, y));
            }
        }
    }
    Check::Holds
}

/// Definitional upper semicontinuity: for every open set, the cells
/// whose whole image lies inside it form an open subset of the domain
/// subspace. Enumerates all open sets, so it is exponential; `None` when
/// the space exceeds `cap` cells. [`check_usc`] is the equivalent fast
/// form; the two validate each other in the suites.
pub fn check_usc_via_open_sets(f: &SetValuedMap, cap: usize) -> Option<bool> {
    let space = f.space().clone();
    let n = space.len();
    if n > cap || n > 30 {
        return None;
    }
    for mask in 0u32..(1u32 << n) {
        let u = space.set_of(space.cells().filter(|c| mask >> c.index() & 1 == 1));
        if !u.is_open() {
            continue;
        }
        let pre = space.set_of(f.domain().iter().filter(|&x| f.apply(x).is_subset(&u)));
        let open_in_dom = pre.iter().all(|x| {
            space
                .minimal_open(x)
                .intersection(f.domain())
                .is_subset(&pre)
        });
        if !open_in_dom {
            return Some(false);
        }
    }
    Some(true)
}

/// Every image connected; the witness is the first cell whose image is not.
pub fn check_conn(f: &SetValuedMap) -> Check {
    for x in f.domain().iter() {
        if !f.apply(x).is_connected() {
            return Check::Fails(Witness::At(x));
        }
    }
    Check::Holds
}

/// Boundary conditions on `∂C` where `C` is the domain. Functions get the
/// single condition `f(∂C) ⊆ C`; set-valued maps get the weak form
/// (`f(x)` meets `C`) and the strong form (`f(x) ⊆ C`) separately.
pub fn check_boundary_conditions(dynamics: &Dynamics) -> HypothesisReport {
    let c = dynamics.domain();
    let rim = c.boundary();
    let na = Check::NotApplicable;
    // A non-closed domain leaves the map undefined on part of its rim, so
    // the rim conditions cannot even be stated.
    if !rim.is_subset(c) {
        return HypothesisReport {
            continuous: na.clone(),
            bdr_function: na.clone(),
            usc: na.clone(),
            conn: na.clone(),
            bdr_weak: na.clone(),
            bdr_strong: na,
        };
    }
    match dynamics {
        Dynamics::Function(f) => {
            let mut bdr = Check::Holds;
            for x in rim.iter() {
                if !c.contains(f.apply(x)) {
                    bdr = Check::Fails(Witness::At(x));
                    break;
                }
            }
            HypothesisReport {
                continuous: na,
                bdr_function: bdr,
                usc: na,
                conn: na,
                bdr_weak: na,
                bdr_strong: na,
            }
        }
        Dynamics::SetValued(f) => {
            let mut weak = Check::Holds;
            let mut strong = Check::Holds;
            for x in rim.iter() {
                if weak.holds() && f.apply(x).is_disjoint(c) {
                    weak = Check::Fails(Witness::At(x));
                }
                if strong.holds() && !f.apply(x).is_subset(c) {
                    strong = Check::Fails(Witness::At(x));
                }
            }
            HypothesisReport {
                continuous: na,
                bdr_function: na,
                usc: na,
                conn: na,
                bdr_weak: weak,
                bdr_strong: strong,
            }
        }
    }
}

/// All applicable checks for the map's kind in one report.
pub fn hypothesis_report(dynamics: &Dynamics) -> HypothesisReport {
    let mut report = check_boundary_conditions(dynamics);
    match dynamics {
        Dynamics::Function(f) => {
            report.continuous = check_continuous(f);
        }
        Dynamics::SetValued(f) => {
            report.usc = check_usc(f);
            report.conn = check_conn(f);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_space, circle_model};
    use crate::testutil::rng_from_seed;
    use rand::Rng;

    fn interval() -> Space {
        build_space(vec!["v0", "v1", "e"], &[("v0", "e"), ("v1", "e")]).unwrap()
    }

    fn rotation(d: usize, k: usize) -> (Space, CellMap) {
        let s = circle_model(d).unwrap();
        let arc: Vec<String> = (1..d)
            .map(|i| format!("v{i}"))
            .chain((1..d - 1).map(|i| format!("e{i}")))
            .collect();
        let refs: Vec<&str> = arc.iter().map(|x| x.as_str()).collect();
        let c = s.named(&refs);
        let f = CellMap::from_fn(c, |x| {
            let name = s.name(x);
            let (kind, idx) = name.split_at(1);
            let idx: usize = idx.parse().unwrap();
            s.cell(&format!("{kind}{}", (idx + k) % d)).unwrap()
        });
        (s, f)
    }

    fn usc_oracle(f: &SetValuedMap) -> bool {
        check_usc_via_open_sets(f, 12).expect("corpus spaces stay small")
    }

    #[test]
    fn identity_is_continuous() {
        let mut rng = rng_from_seed(21);
        for _ in 0..30 {
            let s = crate::random::random_space(&mut rng, 10);
            let id = CellMap::from_fn(s.full_set(), |x| x);
            assert_eq!(check_continuous(&id), Check::Holds);
        }
    }

    #[test]
    fn rotation_on_arc_is_continuous_with_boundary_inside() {
        let (s, f) = rotation(5, 2);
        assert_eq!(check_continuous(&f), Check::Holds);
        let report = check_boundary_conditions(&Dynamics::Function(f.clone()));
        assert_eq!(report.bdr_function, Check::Holds);
        // The arc's rim maps back inside: f(v1)=v3, f(v4)=v1.
        assert_eq!(f.apply(s.cell("v1").unwrap()), s.cell("v3").unwrap());
        assert_eq!(f.apply(s.cell("v4").unwrap()), s.cell("v1").unwrap());
        // Image of the whole arc is the rotated arc.
        let img = f.image(f.domain()).unwrap();
        assert_eq!(img, s.named(&["v3", "e3", "v4", "e4", "v0", "e0", "v1"]));
    }

    #[test]
    fn collapsing_an_edge_is_discontinuous() {
        let s = interval();
        let f = CellMap::from_fn(s.full_set(), |x| {
            if s.name(x) == "e" {
                s.cell("v0").unwrap()
            } else {
                x
            }
        });
        let v1 = s.cell("v1").unwrap();
        let e = s.cell("e").unwrap();
        assert_eq!(check_continuous(&f), Check::Fails(Witness::Pair(v1, e)));
    }

    #[test]
    fn partial_and_empty_maps_are_rejected() {
        let s = interval();
        let dom = s.full_set();
        let v0 = s.cell("v0").unwrap();
        assert_eq!(
            CellMap::from_pairs(dom.clone(), &[(v0, v0)]).unwrap_err(),
            MapError::PartialMap("v1".into())
        );
        assert_eq!(
            SetValuedMap::from_fn(dom.clone(), |_| s.empty_set()).unwrap_err(),
            MapError::EmptyImage("v0".into())
        );
        let f = CellMap::from_fn(s.named(&["v0"]), |x| x);
        assert_eq!(
            f.image(&s.named(&["v0", "v1"])).unwrap_err(),
            MapError::NotInDomain("v1".into())
        );
        assert_eq!(f.image(&s.empty_set()).unwrap(), s.empty_set());
    }

    #[test]
    fn conn_flags_disconnected_images() {
        let s = interval();
        let f = SetValuedMap::from_fn(s.full_set(), |x| {
            if s.name(x) == "v0" {
                s.named(&["v0", "v1"])
            } else {
                s.named(&["e"])
            }
        })
        .unwrap();
        let v0 = s.cell("v0").unwrap();
        assert_eq!(check_conn(&f), Check::Fails(Witness::At(v0)));
        let g = SetValuedMap::from_fn(s.full_set(), |_| s.full_set()).unwrap();
        assert_eq!(check_conn(&g), Check::Holds);
    }

    #[test]
    fn weak_and_strong_boundary_conditions_differ() {
        // Domain = one closed edge of the circle; images on its rim meet C
        // without staying inside it.
        let s = circle_model(5).unwrap();
        let c = s.named(&["v0", "e0", "v1"]);
        let f = SetValuedMap::from_fn(c.clone(), |_| s.named(&["v0", "e4"])).unwrap();
        let report = check_boundary_conditions(&Dynamics::SetValued(f));
        assert_eq!(report.bdr_weak, Check::Holds);
        let v0 = s.cell("v0").unwrap();
        assert_eq!(report.bdr_strong, Check::Fails(Witness::At(v0)));
        // Full space: no rim, both hold.
        let g = SetValuedMap::from_fn(s.full_set(), |_| s.named(&["e4"])).unwrap();
        let report = check_boundary_conditions(&Dynamics::SetValued(g));
        assert_eq!(report.bdr_weak, Check::Holds);
        assert_eq!(report.bdr_strong, Check::Holds);
    }

    #[test]
    fn usc_matches_the_open_set_oracle() {
        let mut rng = rng_from_seed(22);
        let mut holds = 0;
        let mut fails = 0;
        for round in 0..400 {
            let s = crate::random::random_space(&mut rng, 6);
            let dom = if round % 3 == 0 {
                s.full_set()
            } else {
                crate::random::random_closed_set(&mut rng, &s)
            };
            let f = if round % 2 == 0 {
                crate::random::random_setvalued_any(&mut rng, dom)
            } else {
                crate::random::random_setvalued_usc(&mut rng, dom)
            };
            let fast = check_usc(&f).holds();
            assert_eq!(fast, usc_oracle(&f), "round {round}");
            if fast {
                holds += 1
            } else {
                fails += 1
            }
        }
        // The comparison only means something if both outcomes occur.
        assert!(holds > 50 && fails > 50, "holds={holds} fails={fails}");
    }

    #[test]
    fn generated_usc_maps_pass_and_singletons_match_continuity() {
        let mut rng = rng_from_seed(23);
        for _ in 0..200 {
            let s = crate::random::random_space(&mut rng, 10);
            let dom = crate::random::random_closed_set(&mut rng, &s);
            let f = crate::random::random_setvalued_usc(&mut rng, dom.clone());
            assert_eq!(check_usc(&f), Check::Holds);

            let g = crate::random::random_monotone_map(&mut rng, dom.clone());
            assert_eq!(check_continuous(&g), Check::Holds);
            assert_eq!(check_usc(&g.as_setvalued()), Check::Holds);

            // An arbitrary assignment agrees across the two views.
            let h = CellMap::from_fn(dom, |_| {
                let i = rng.gen_range(0..s.len());
                crate::space::Cell(i as u32)
            });
            assert_eq!(
                check_continuous(&h).holds(),
                check_usc(&h.as_setvalued()).holds()
            );
        }
    }

    #[test]
    fn connected_images_of_connected_sets_under_usc_conn_maps() {
        let mut rng = rng_from_seed(24);
        let mut tested = 0;
        for _ in 0..300 {
            let s = crate::random::random_space(&mut rng, 9);
            let dom = crate::random::random_closed_set(&mut rng, &s);
            let f = crate::random::random_setvalued_usc(&mut rng, dom.clone());
            if !check_conn(&f).holds() {
                continue;
            }
            for a in dom.components() {
                let img = f.image(&a).unwrap();
                assert!(img.is_connected(), "image {img:?} of {a:?}");
                tested += 1;
            }
        }
        assert!(tested > 100);
    }

    #[test]
    fn failure_witnesses_reproduce_the_violation() {
        let mut rng = rng_from_seed(25);
        let mut seen = 0;
        for _ in 0..300 {
            let s = crate::random::random_space(&mut rng, 7);
            let dom = crate::random::random_closed_set(&mut rng, &s);
            let f = crate::random::random_setvalued_any(&mut rng, dom.clone());
            if let Check::Fails(Witness::Pair(x, y)) = check_usc(&f) {
                assert!(s.leq(x, y));
                let mut hull = s.empty_set();
                for z in f.apply(x).iter() {
                    hull = hull.union(&s.minimal_open(z));
                }
                assert!(!f.apply(y).is_subset(&hull));
                seen += 1;
            }
            if let Check::Fails(Witness::At(x)) = check_conn(&f) {
                assert!(!f.apply(x).is_connected());
                seen += 1;
            }
        }
        assert!(seen > 50);
    }
}
