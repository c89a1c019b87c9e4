//! Helpers shared by the unit tests. The random generators live in
//! [`crate::random`] so the falsification harness uses the same ones.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::set::PointSet;
use crate::space::{Cell, Space};

pub use crate::random::random_space;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    crate::random::rng_from_seed(seed)
}

pub fn random_subsets<R: Rng>(rng: &mut R, space: &Space, count: usize) -> Vec<PointSet> {
    (0..count)
        .map(|_| crate::random::random_subset(rng, space, 0.5))
        .collect()
}

/// Powerset of a small slice, in mask order.
pub fn subsets_of(members: &[Cell]) -> impl Iterator<Item = Vec<Cell>> + '_ {
    assert!(members.len() <= 20, "powerset too large");
    (0u32..(1u32 << members.len())).map(move |mask| {
        members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c)
            .collect()
    })
}
