#![allow(dead_code)]

use hdakit_core::base_cats::Label;
use hdakit_core::paths::{successors, Path};
use hdakit_core::precubical::{product_of_chains, CellRef, Hda};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A product of 1 to `max_chains` chains, each with 1 to `max_edges` edges labelled
/// from `alphabet`.
pub fn random_chains(rng: &mut ChaCha8Rng, max_chains: usize, max_edges: usize, alphabet: &[&str]) -> Hda {
    let chains: Vec<Vec<Label>> = (0..rng.gen_range(1..=max_chains))
        .map(|_| (0..rng.gen_range(1..=max_edges)).map(|_| Label::from(*alphabet.choose(rng).unwrap())).collect())
        .collect();
    let x = product_of_chains(&chains);
    let initial = vec!["0"; chains.len()].join("_");
    Hda::new(x, &initial).unwrap()
}

/// A uniform random walk of at most `max_len` steps from the initial cell.
pub fn random_execution(rng: &mut ChaCha8Rng, h: &Hda, max_len: usize) -> Path<CellRef> {
    let len = rng.gen_range(0..=max_len);
    let mut p = Path::single(h.initial);
    for _ in 0..len {
        let next = successors(&h.complex, *p.last());
        let Some(&(step, cell)) = next.choose(rng) else { break };
        p = p.extended(step, cell);
    }
    p
}
