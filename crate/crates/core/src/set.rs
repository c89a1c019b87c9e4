//! Point sets and their topology.
//!
//! A [`PointSet`] is a bitset over the cells of one space. Closure and
//! interior come straight from the order: closure adds every face of a
//! member, the interior keeps a cell only if its minimal open set stays
//! inside. Connectivity is reachability along comparable pairs, which in a
//! finite space agrees with topological connectedness.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::space::{build_space, Cell, Space, SpaceError};

#[derive(Clone)]
pub struct PointSet {
    space: Space,
    bits: FixedBitSet,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_space(&other.space) && self.bits == other.bits
    }
}
impl Eq for PointSet {}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|c| self.space.name(c)))
            .finish()
    }
}

impl PointSet {
    pub(crate) fn new(space: Space) -> Self {
        let n = space.len();
        PointSet {
            space,
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub(crate) fn from_bits(space: Space, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), space.len());
        PointSet { space, bits }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    fn check_space(&self, other: &PointSet) {
        assert!(
            self.space.same_space(&other.space),
            "point sets from different spaces"
        );
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.bits.contains(c.index())
    }

    pub fn insert(&mut self, c: Cell) {
        self.bits.insert(c.index());
    }

    pub fn remove(&mut self, c: Cell) {
        self.bits.set(c.index(), false);
    }

    pub(crate) fn insert_all(&mut self) {
        self.bits.insert_range(..);
    }

    /// Cells in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.bits.ones().map(|i| Cell(i as u32))
    }

    /// Cell names in ascending index order.
    pub fn names(&self) -> Vec<&str> {
        self.iter().map(|c| self.space.name(c)).collect()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.check_space(other);
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        PointSet::from_bits(self.space.clone(), bits)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.check_space(other);
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        PointSet::from_bits(self.space.clone(), bits)
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.check_space(other);
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        PointSet::from_bits(self.space.clone(), bits)
    }

    pub fn complement(&self) -> PointSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        PointSet::from_bits(self.space.clone(), bits)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.check_space(other);
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.check_space(other);
        self.bits.is_disjoint(&other.bits)
    }

    /// Union of the closures of the members: the smallest closed superset.
    pub fn closure(&self) -> PointSet {
        let mut bits = FixedBitSet::with_capacity(self.space.len());
        for i in self.bits.ones() {
            bits.union_with(self.space.down_bits(i));
        }
        PointSet::from_bits(self.space.clone(), bits)
    }

    /// Cells whose minimal open set lies inside: the largest open subset.
    pub fn interior(&self) -> PointSet {
        let mut bits = FixedBitSet::with_capacity(self.space.len());
        for i in self.bits.ones() {
            if self.space.up_bits(i).is_subset(&self.bits) {
                bits.insert(i);
            }
        }
        PointSet::from_bits(self.space.clone(), bits)
    }

    pub fn is_closed(&self) -> bool {
        self.bits
            .ones()
            .all(|i| self.space.down_bits(i).is_subset(&self.bits))
    }

    pub fn is_open(&self) -> bool {
        self.bits
            .ones()
            .all(|i| self.space.up_bits(i).is_subset(&self.bits))
    }

    /// Topological boundary in the whole space: `Clos(A) ∩ Clos(X \ A)`.
    pub fn boundary(&self) -> PointSet {
        self.closure().intersection(&self.complement().closure())
    }

    /// Boundary of `self` inside the subspace `ambient`:
    /// `Clos(A) ∩ Y ∩ Clos(Y \ A)`, taken in the subspace topology of `Y`.
    /// Requires `self ⊆ ambient`.
    pub fn relative_boundary(&self, ambient: &PointSet) -> Result<PointSet, SpaceError> {
        let view = SubspaceView::new(ambient.clone(), "ambient")?;
        view.boundary(self)
    }

    /// Connected components, each a maximal subset whose comparability
    /// graph is connected. Sorted by their smallest cell.
    pub fn components(&self) -> Vec<PointSet> {
        let mut seen = FixedBitSet::with_capacity(self.space.len());
        let mut out = Vec::new();
        for start in self.bits.ones() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = FixedBitSet::with_capacity(self.space.len());
            let mut stack = vec![start];
            comp.insert(start);
            seen.insert(start);
            while let Some(i) = stack.pop() {
                // Neighbours of i inside the set: anything comparable to i.
                let mut reach = self.space.up_bits(i).clone();
                reach.union_with(self.space.down_bits(i));
                reach.intersect_with(&self.bits);
                for j in reach.ones() {
                    if !seen.contains(j) {
                        seen.insert(j);
                        comp.insert(j);
                        stack.push(j);
                    }
                }
            }
            out.push(PointSet::from_bits(self.space.clone(), comp));
        }
        out
    }

    /// Empty sets and singletons count as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// A subspace `Y` of an ambient space, with topology induced by the order.
/// Closure, interior and boundary of subsets are taken relative to `Y`.
pub struct SubspaceView {
    carrier: PointSet,
}

impl SubspaceView {
    pub fn new(carrier: PointSet, _role: &str) -> Result<Self, SpaceError> {
        Ok(SubspaceView { carrier })
    }

    pub fn carrier(&self) -> &PointSet {
        &self.carrier
    }

    fn check_subset(&self, a: &PointSet) -> Result<(), SpaceError> {
        if a.is_subset(&self.carrier) {
            Ok(())
        } else {
            Err(SpaceError::NotASubset(
                format!("{a:?}"),
                format!("{:?}", self.carrier),
            ))
        }
    }

    /// `Clos_Y(A) = Clos(A) ∩ Y`.
    pub fn closure(&self, a: &PointSet) -> Result<PointSet, SpaceError> {
        self.check_subset(a)?;
        Ok(a.closure().intersection(&self.carrier))
    }

    /// `Int_Y(A) = Y \ Clos_Y(Y \ A)`.
    pub fn interior(&self, a: &PointSet) -> Result<PointSet, SpaceError> {
        self.check_subset(a)?;
        let rest = self.carrier.difference(a);
        Ok(self.carrier.difference(&self.closure(&rest)?))
    }

    /// `∂_Y A = Clos_Y(A) ∩ Clos_Y(Y \ A)`.
    pub fn boundary(&self, a: &PointSet) -> Result<PointSet, SpaceError> {
        self.check_subset(a)?;
        let rest = self.carrier.difference(a);
        Ok(self.closure(a)?.intersection(&self.closure(&rest)?))
    }

    /// Standalone copy of the subspace with the induced order. Returns the
    /// new space together with the map from its cells back to ambient cells.
    pub fn materialize(&self) -> (Space, Vec<Cell>) {
        let ambient = self.carrier.space();
        let back: Vec<Cell> = self.carrier.iter().collect();
        let names: Vec<String> = back.iter().map(|&c| ambient.name(c).to_string()).collect();
        let mut pairs = Vec::new();
        for (i, &a) in back.iter().enumerate() {
            for (j, &b) in back.iter().enumerate() {
                if i != j && ambient.leq(a, b) {
                    pairs.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let space = build_space(names.clone(), &refs).expect("induced order is valid");
        (space, back)
    }
}
