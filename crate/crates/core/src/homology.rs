//! Low-degree invariants of the order complex, and the gate property.
//!
//! The order complex has one k-simplex per strict chain of k+1 cells; its
//! geometric realization is weakly equivalent to the space, so b0 counts
//! components and b1 detects loops. Ranks are computed exactly:
//! fraction-free elimination in i128, restarted with big integers on
//! overflow (incidence minors stay small in practice, so the fallback is
//! idle on everything we build).
//!
//! The gate property is the loop-freeness consequence the step-count
//! theorems actually consume: every open set that splits the space into
//! two connected pieces has a connected boundary. It is decided by direct
//! enumeration, so it only runs on small spaces.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::set::PointSet;
use crate::space::{Cell, Space};

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("space has {cells} cells, enumeration capped at {cap}")]
    TooLarge { cells: usize, cap: usize },
}

/// 2-skeleton of the order complex: enough for b0 and b1.
pub struct OrderComplex {
    vertices: usize,
    edges: Vec<(Cell, Cell)>,
    triangles: Vec<(Cell, Cell, Cell)>,
}

impl OrderComplex {
    pub fn new(space: &Space) -> Self {
        let mut edges = Vec::new();
        let mut triangles = Vec::new();
        for a in space.cells() {
            for b in space.cells() {
                if a != b && space.leq(a, b) {
                    edges.push((a, b));
                    for c in space.cells() {
                        if b != c && c != a && space.leq(b, c) {
                            triangles.push((a, b, c));
                        }
                    }
                }
            }
        }
        OrderComplex {
            vertices: space.len(),
            edges,
            triangles,
        }
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices, self.edges.len(), self.triangles.len())
    }

    /// Vertex-by-edge incidence matrix: column (a,b) is b - a.
    pub fn boundary1(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.edges.len()]; self.vertices];
        for (j, &(a, b)) in self.edges.iter().enumerate() {
            m[a.index()][j] -= 1;
            m[b.index()][j] += 1;
        }
        m
    }

    /// Edge-by-triangle incidence: column (a,b,c) is (b,c) - (a,c) + (a,b).
    pub fn boundary2(&self) -> Vec<Vec<i64>> {
        let edge_index = |a: Cell, b: Cell| {
            self.edges
                .binary_search(&(a, b))
                .expect("faces of a chain are chains")
        };
        let mut m = vec![vec![0i64; self.triangles.len()]; self.edges.len()];
        for (j, &(a, b, c)) in self.triangles.iter().enumerate() {
            m[edge_index(b, c)][j] += 1;
            m[edge_index(a, c)][j] -= 1;
            m[edge_index(a, b)][j] += 1;
        }
        m
    }

    pub fn b0(&self) -> usize {
        self.vertices - rank(self.boundary1())
    }

    pub fn b1(&self) -> usize {
        self.edges.len() - rank(self.boundary1()) - rank(self.boundary2())
    }
}

/// First Betti number of the space's order complex.
pub fn betti1(space: &Space) -> usize {
    assert!(!space.is_empty(), "empty space");
    OrderComplex::new(space).b1()
}

/// Exact rank over the rationals of an integer matrix.
pub fn rank(matrix: Vec<Vec<i64>>) -> usize {
    match rank_i128(&matrix) {
        Some(r) => r,
        None => rank_bigint(&matrix),
    }
}

/// Fraction-free elimination; `None` on overflow.
fn rank_i128(matrix: &[Vec<i64>]) -> Option<usize> {
    let rows = matrix.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| row.iter().map(|&v| v as i128).collect())
        .collect();
    let mut rank = 0usize;
    let mut prev: i128 = 1;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let a = m[rank][col].checked_mul(m[i][j])?;
                let b = m[i][col].checked_mul(m[rank][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

fn rank_bigint(matrix: &[Vec<i64>]) -> usize {
    let rows = matrix.len();
    let cols = matrix[0].len();
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut rank = 0usize;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                m[i][j] = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        debug_assert!(prev.is_positive() || prev.is_negative());
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub const GATE_ENUMERATION_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct GateReport {
    pub holds: bool,
    /// Open set with both sides connected but a disconnected boundary.
    pub counterexample: Option<PointSet>,
}

/// Decides whether every open `A` with `A` and `X \ A` nonempty and
/// connected has a connected boundary. Counterexamples are reported in
/// ascending bitmask order, so reruns agree.
pub fn gate_boundary_connectedness(
    space: &Space,
    cap: usize,
) -> Result<GateReport, CohomologyError> {
    let n = space.len();
    if n > cap {
        return Err(CohomologyError::TooLarge { cells: n, cap });
    }
    for mask in 1u32..(1u32 << n) - 1 {
        let a = space.set_of((0..n).filter(|i| mask >> i & 1 == 1).map(|i| Cell(i as u32)));
        if !a.is_open() || !a.is_connected() {
            continue;
        }
        if !a.complement().is_connected() {
            continue;
        }
        if !a.boundary().is_connected() {
            return Ok(GateReport {
                holds: false,
                counterexample: Some(a),
            });
        }
    }
    Ok(GateReport {
        holds: true,
        counterexample: None,
    })
}
