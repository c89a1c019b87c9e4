//! Seeded random generators for spaces, subsets and dynamics.
//!
//! Everything here is driven by a caller-supplied [`Rng`] so runs are
//! reproducible from a single seed. Spaces are generated as graded posets
//! (faces only point to strictly lower grades), which guarantees acyclicity
//! while still covering antichains, fans and towers.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::map::{CellMap, SetValuedMap};
use crate::set::PointSet;
use crate::space::{build_space, Cell, Space};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_space<R: Rng>(rng: &mut R, max_cells: usize) -> Space {
    let n = rng.gen_range(1..=max_cells.max(1));
    let grades: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        if grades[i] == 0 {
            continue;
        }
        let mut lower: Vec<usize> = (0..n).filter(|&j| grades[j] < grades[i]).collect();
        if lower.is_empty() {
            continue;
        }
        let k = rng.gen_range(0..=3usize.min(lower.len()));
        for _ in 0..k {
            let j = lower.swap_remove(rng.gen_range(0..lower.len()));
            pairs.push((j, i));
        }
    }
    let refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|&(a, b)| (names[a].as_str(), names[b].as_str()))
        .collect();
    build_space(names.clone(), &refs).expect("graded face pairs are acyclic")
}

/// Each cell kept independently with probability `density`.
pub fn random_subset<R: Rng>(rng: &mut R, space: &Space, density: f64) -> PointSet {
    space.set_of(space.cells().filter(|_| rng.gen_bool(density)))
}

/// A nonempty closed subset: the closure of a random nonempty sample.
pub fn random_closed_set<R: Rng>(rng: &mut R, space: &Space) -> PointSet {
    loop {
        let seed = random_subset(rng, space, 0.4);
        if !seed.is_empty() {
            return seed.closure();
        }
    }
}

fn choose_cell<R: Rng>(rng: &mut R, set: &PointSet) -> Cell {
    let nth = rng.gen_range(0..set.len());
    set.iter().nth(nth).expect("nonempty set")
}

/// Domain cells sorted along a linear extension of the induced order
/// (ascending closure size, ties by index).
fn linear_extension(domain: &PointSet) -> Vec<Cell> {
    let space = domain.space();
    let mut order: Vec<Cell> = domain.iter().collect();
    order.sort_by_key(|&x| (space.cell_closure(x).intersection(domain).len(), x));
    order
}

/// Monotone map on `domain` into the ambient space. Values are sampled
/// along a linear extension, each constrained to the intersection of the
/// minimal opens of the already-fixed values below it; a dead end restarts
/// the sample, and after too many restarts a constant map is returned
/// (constants are always monotone).
pub fn random_monotone_map<R: Rng>(rng: &mut R, domain: PointSet) -> CellMap {
    let space = domain.space().clone();
    let order = linear_extension(&domain);
    'retry: for _ in 0..24 {
        let mut values: Vec<Option<Cell>> = vec![None; space.len()];
        for &x in &order {
            let mut allowed = space.full_set();
            for p in domain.iter() {
                if p != x && space.leq(p, x) {
                    let fp = values[p.index()].expect("predecessors already assigned");
                    allowed = allowed.intersection(&space.minimal_open(fp));
                }
            }
            if allowed.is_empty() {
                continue 'retry;
            }
            values[x.index()] = Some(choose_cell(rng, &allowed));
        }
        return CellMap::from_fn(domain, |x| values[x.index()].unwrap());
    }
    let z = choose_cell(rng, &space.full_set());
    CellMap::from_fn(domain, |_| z)
}

/// Upper semicontinuous set-valued map on `domain`: along a linear
/// extension, each image is a nonempty subset of the intersection of the
/// open hulls of the images already fixed strictly below.
pub fn random_setvalued_usc<R: Rng>(rng: &mut R, domain: PointSet) -> SetValuedMap {
    let space = domain.space().clone();
    let order = linear_extension(&domain);
    'retry: for _ in 0..24 {
        let mut values: Vec<Option<PointSet>> = vec![None; space.len()];
        for &x in &order {
            let mut allowed = space.full_set();
            for p in domain.iter() {
                if p != x && space.leq(p, x) {
                    let fp = values[p.index()].as_ref().expect("assigned below");
                    let mut hull = space.empty_set();
                    for z in fp.iter() {
                        hull = hull.union(&space.minimal_open(z));
                    }
                    allowed = allowed.intersection(&hull);
                }
            }
            if allowed.is_empty() {
                continue 'retry;
            }
            let mut img = space.set_of(allowed.iter().filter(|_| rng.gen_bool(0.4)));
            if img.is_empty() {
                img.insert(choose_cell(rng, &allowed));
            }
            values[x.index()] = Some(img);
        }
        return SetValuedMap::from_fn(domain, |x| values[x.index()].clone().unwrap())
            .expect("images nonempty by construction");
    }
    let z = choose_cell(rng, &space.full_set());
    let singleton = space.set_of([z]);
    SetValuedMap::from_fn(domain, |_| singleton.clone()).expect("nonempty")
}

/// Monotone map that additionally sends the rim of its domain back into
/// the domain; the workhorse for the function-track suites.
pub fn random_monotone_boundary_map<R: Rng>(rng: &mut R, domain: PointSet) -> CellMap {
    let space = domain.space().clone();
    let rim = domain.boundary();
    let order = linear_extension(&domain);
    'retry: for _ in 0..40 {
        let mut values: Vec<Option<Cell>> = vec![None; space.len()];
        for &x in &order {
            let mut allowed = if rim.contains(x) {
                domain.clone()
            } else {
                space.full_set()
            };
            for p in domain.iter() {
                if p != x && space.leq(p, x) {
                    let fp = values[p.index()].expect("predecessors already assigned");
                    allowed = allowed.intersection(&space.minimal_open(fp));
                }
            }
            if allowed.is_empty() {
                continue 'retry;
            }
            values[x.index()] = Some(choose_cell(rng, &allowed));
        }
        return CellMap::from_fn(domain, |x| values[x.index()].unwrap());
    }
    let z = choose_cell(rng, &domain);
    CellMap::from_fn(domain, |_| z)
}

/// Grows a connected subset of `allowed` from the seed cell: every added
/// cell is comparable to one already chosen.
fn grow_connected<R: Rng>(rng: &mut R, allowed: &PointSet, seed: Cell) -> PointSet {
    let space = allowed.space().clone();
    let mut img = space.set_of([seed]);
    while rng.gen_bool(0.5) {
        let frontier = space.set_of(allowed.iter().filter(|&y| {
            !img.contains(y) && img.iter().any(|z| space.comparable(y, z))
        }));
        if frontier.is_empty() {
            break;
        }
        img.insert(choose_cell(rng, &frontier));
    }
    img
}

/// Upper semicontinuous map with connected images whose rim images meet
/// the domain: an instance for the set-valued topological statements.
pub fn random_setvalued_viable<R: Rng>(rng: &mut R, domain: PointSet) -> SetValuedMap {
    setvalued_with_rim_discipline(rng, domain, false)
}

/// Like [`random_setvalued_viable`] but rim images stay entirely inside
/// the domain, which is what the strongest bound statement asks for.
pub fn random_setvalued_strong<R: Rng>(rng: &mut R, domain: PointSet) -> SetValuedMap {
    setvalued_with_rim_discipline(rng, domain, true)
}

fn setvalued_with_rim_discipline<R: Rng>(
    rng: &mut R,
    domain: PointSet,
    strong: bool,
) -> SetValuedMap {
    let space = domain.space().clone();
    let rim = domain.boundary();
    let order = linear_extension(&domain);
    'retry: for _ in 0..40 {
        let mut values: Vec<Option<PointSet>> = vec![None; space.len()];
        for &x in &order {
            let mut allowed = space.full_set();
            for p in domain.iter() {
                if p != x && space.leq(p, x) {
                    let fp = values[p.index()].as_ref().expect("assigned below");
                    let mut hull = space.empty_set();
                    for z in fp.iter() {
                        hull = hull.union(&space.minimal_open(z));
                    }
                    allowed = allowed.intersection(&hull);
                }
            }
            if strong && rim.contains(x) {
                allowed = allowed.intersection(&domain);
            }
            let seed_pool = if rim.contains(x) {
                allowed.intersection(&domain)
            } else {
                allowed.clone()
            };
            if seed_pool.is_empty() {
                continue 'retry;
            }
            let seed = choose_cell(rng, &seed_pool);
            values[x.index()] = Some(grow_connected(rng, &allowed, seed));
        }
        return SetValuedMap::from_fn(domain, |x| values[x.index()].clone().unwrap())
            .expect("images nonempty by construction");
    }
    let z = choose_cell(rng, &domain);
    let singleton = space.set_of([z]);
    SetValuedMap::from_fn(domain, |_| singleton.clone()).expect("nonempty")
}

/// Unconstrained set-valued map: every image an independent nonempty sample.
pub fn random_setvalued_any<R: Rng>(rng: &mut R, domain: PointSet) -> SetValuedMap {
    let space = domain.space().clone();
    SetValuedMap::from_fn(domain, |_| {
        let mut img = random_subset(rng, &space, 0.3);
        if img.is_empty() {
            img.insert(choose_cell(rng, &space.full_set()));
        }
        img
    })
    .expect("images nonempty by construction")
}
