//! Finite topological spaces as posets of cells.
//!
//! Convention: `p <= q` means `p` lies in the closure of `q` (a vertex is
//! below the edges it bounds). Open sets are exactly the up-sets of the
//! order, so the minimal open neighbourhood of a cell `x` is `up(x)` and
//! the closure of `{x}` is `down(x)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::set::PointSet;

/// Index of a cell inside its space. Only meaningful together with the
/// space that produced it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell(pub(crate) u32);

impl Cell {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum SpaceError {
    #[error("duplicate cell `{0}`")]
    DuplicateCell(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("the face relation has a cycle through `{0}`")]
    CyclicOrder(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("`{0}` is not a subset of `{1}`")]
    NotASubset(String, String),
}

/// A finite space: named cells plus the reflexive-transitive closure of a
/// face relation, stored as one bitset row per cell in each direction.
pub struct FiniteSpace {
    names: Vec<String>,
    index: HashMap<String, Cell>,
    /// `up[i]` = every `j` with `i <= j`; the minimal open set of `i`.
    up: Vec<FixedBitSet>,
    /// `down[i]` = every `j` with `j <= i`; the closure of `{i}`.
    down: Vec<FixedBitSet>,
    /// Covering pairs `(face, cell)`: the transitive reduction of the order.
    covers: Vec<(Cell, Cell)>,
}

/// Shared handle to a [`FiniteSpace`]. Cheap to clone; all derived data
/// (point sets, maps, reports) keeps one of these so that cross-space mixups
/// can be detected.
#[derive(Clone)]
pub struct Space(Arc<FiniteSpace>);

impl Deref for Space {
    type Target = FiniteSpace;
    fn deref(&self) -> &FiniteSpace {
        &self.0
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({} cells)", self.len())
    }
}

impl Space {
    pub fn same_space(&self, other: &Space) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::new(self.clone())
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = PointSet::new(self.clone());
        s.insert_all();
        s
    }

    pub fn set_of(&self, cells: impl IntoIterator<Item = Cell>) -> PointSet {
        let mut s = PointSet::new(self.clone());
        for c in cells {
            s.insert(c);
        }
        s
    }

    /// Test and gallery helper; panics on an unknown name.
    pub fn named(&self, names: &[&str]) -> PointSet {
        self.set_of(names.iter().map(|n| {
            self.cell(n)
                .unwrap_or_else(|| panic!("no cell named `{n}`"))
        }))
    }

    /// The minimal open neighbourhood `up(x)`.
    pub fn minimal_open(&self, x: Cell) -> PointSet {
        PointSet::from_bits(self.clone(), self.up[x.index()].clone())
    }

    /// Closure of the single cell `x`.
    pub fn cell_closure(&self, x: Cell) -> PointSet {
        PointSet::from_bits(self.clone(), self.down[x.index()].clone())
    }
}

impl FiniteSpace {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.names.len() as u32).map(Cell)
    }

    pub fn name(&self, c: Cell) -> &str {
        &self.names[c.index()]
    }

    pub fn cell(&self, name: &str) -> Option<Cell> {
        self.index.get(name).copied()
    }

    /// `a <= b` in the specialisation order: `a` lies in the closure of `b`.
    pub fn leq(&self, a: Cell, b: Cell) -> bool {
        self.up[a.index()].contains(b.index())
    }

    pub fn comparable(&self, a: Cell, b: Cell) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Covering pairs `(face, cell)` of the order, sorted by index.
    pub fn covers(&self) -> &[(Cell, Cell)] {
        &self.covers
    }

    pub(crate) fn up_bits(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    pub(crate) fn down_bits(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }
}

/// Builds a space from named cells and face pairs `(face, cell)` meaning
/// `face <= cell`. The order is the reflexive-transitive closure of the
/// pairs; reflexive pairs are ignored, a cycle is an error.
pub fn build_space<S: Into<String>>(
    cells: Vec<S>,
    hasse: &[(&str, &str)],
) -> Result<Space, SpaceError> {
    let names: Vec<String> = cells.into_iter().map(Into::into).collect();
    let n = names.len();
    let mut index = HashMap::with_capacity(n);
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), Cell(i as u32)).is_some() {
            return Err(SpaceError::DuplicateCell(name.clone()));
        }
    }

    // Direct successor lists from the input pairs, self-loops dropped.
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (face, cell) in hasse {
        let f = *index
            .get(*face)
            .ok_or_else(|| SpaceError::UnknownCell((*face).to_string()))?;
        let c = *index
            .get(*cell)
            .ok_or_else(|| SpaceError::UnknownCell((*cell).to_string()))?;
        if f == c {
            continue;
        }
        above[f.index()].push(c.index());
        below[c.index()].push(f.index());
    }

    // Kahn's algorithm: a leftover cell witnesses a cycle.
    let mut indeg: Vec<usize> = below.iter().map(Vec::len).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(i) = queue.pop() {
        topo.push(i);
        for &j in &above[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                queue.push(j);
            }
        }
    }
    if topo.len() < n {
        let witness = (0..n).find(|&i| indeg[i] > 0).unwrap();
        return Err(SpaceError::CyclicOrder(names[witness].clone()));
    }

    // Transitive closure, processed in topological order so that each row
    // only needs its direct neighbours' finished rows.
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    let mut down = vec![FixedBitSet::with_capacity(n); n];
    for &i in topo.iter().rev() {
        up[i].insert(i);
        let mut row = up[i].clone();
        for &j in &above[i] {
            row.union_with(&up[j]);
        }
        up[i] = row;
    }
    for &i in topo.iter() {
        down[i].insert(i);
        let mut row = down[i].clone();
        for &j in &below[i] {
            row.union_with(&down[j]);
        }
        down[i] = row;
    }

    // Covering pairs: q covers p iff p < q and no r has p < r < q.
    let mut covers = Vec::new();
    for p in 0..n {
        for q in up[p].ones() {
            if q == p {
                continue;
            }
            let strict_between = up[p]
                .ones()
                .any(|r| r != p && r != q && up[r].contains(q));
            if !strict_between {
                covers.push((Cell(p as u32), Cell(q as u32)));
            }
        }
    }
    covers.sort();

    Ok(Space(Arc::new(FiniteSpace {
        names,
        index,
        up,
        down,
        covers,
    })))
}

/// Cell model of a circle with `d` vertices `v0..v{d-1}` and `d` edges
/// `e0..e{d-1}`, the edge `ei` bounded by `vi` and `v{i+1 mod d}`.
pub fn circle_model(d: usize) -> Result<Space, SpaceError> {
    if d < 3 {
        return Err(SpaceError::BadParameter(format!(
            "circle model needs at least 3 sectors, got {d}"
        )));
    }
    let mut cells: Vec<String> = (0..d).map(|i| format!("v{i}")).collect();
    cells.extend((0..d).map(|i| format!("e{i}")));
    let mut hasse = Vec::with_capacity(2 * d);
    for i in 0..d {
        hasse.push((format!("v{i}"), format!("e{i}")));
        hasse.push((format!("v{}", (i + 1) % d), format!("e{i}")));
    }
    let pairs: Vec<(&str, &str)> = hasse.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    build_space(cells, &pairs)
}

/// Cell model of an interval with `n` edges: vertices `v0..vn`, edges
/// `e0..e{n-1}`, `ei` bounded by `vi` and `v{i+1}`.
pub fn path_model(n: usize) -> Result<Space, SpaceError> {
    if n < 1 {
        return Err(SpaceError::BadParameter(format!(
            "path model needs at least 1 edge, got {n}"
        )));
    }
    let mut cells: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
    cells.extend((0..n).map(|i| format!("e{i}")));
    let mut hasse = Vec::with_capacity(2 * n);
    for i in 0..n {
        hasse.push((format!("v{i}"), format!("e{i}")));
        hasse.push((format!("v{}", i + 1), format!("e{i}")));
    }
    let pairs: Vec<(&str, &str)> = hasse.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    build_space(cells, &pairs)
}

/// Product space with the componentwise order; the cell `(a,b)` is open
/// iff both factors are. Cell names are `(a,b)`.
pub fn product_space(left: &Space, right: &Space) -> Space {
    let nl = left.len();
    let nr = right.len();
    let pair = |a: usize, b: usize| format!("({},{})", left.names[a], right.names[b]);
    let mut cells = Vec::with_capacity(nl * nr);
    for a in 0..nl {
        for b in 0..nr {
            cells.push(pair(a, b));
        }
    }
    // Face pairs from each factor's covers; their closure is the product order.
    let mut hasse: Vec<(String, String)> = Vec::new();
    for &(f, c) in left.covers() {
        for b in 0..nr {
            hasse.push((pair(f.index(), b), pair(c.index(), b)));
        }
    }
    for &(f, c) in right.covers() {
        for a in 0..nl {
            hasse.push((pair(a, f.index()), pair(a, c.index())));
        }
    }
    let pairs: Vec<(&str, &str)> = hasse.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    build_space(cells, &pairs).expect("product of valid spaces is valid")
}

/// Grid of unit squares: the product of two path models.
pub fn grid_model(nx: usize, ny: usize) -> Result<Space, SpaceError> {
    let px = path_model(nx)?;
    let py = path_model(ny)?;
    Ok(product_space(&px, &py))
}
