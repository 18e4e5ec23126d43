//! Reference implementation over `u64` masks, independent of the engine's
//! bit sets. Objects and attributes are limited to 64 each.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gccl_core::{BitSet, ConceptSpace, FormalContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct Naive {
    pub n_objects: usize,
    pub n_attributes: usize,
    /// rows[g] has bit m set iff g has m.
    pub rows: Vec<u64>,
}

pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

impl Naive {
    pub fn random(rng: &mut ChaCha8Rng, max_objects: usize, max_attributes: usize) -> Self {
        let n_objects = rng.gen_range(0..=max_objects);
        let n_attributes = rng.gen_range(0..=max_attributes);
        let density: f64 = rng.gen_range(0.1..0.9);
        let rows = (0..n_objects)
            .map(|_| {
                (0..n_attributes)
                    .filter(|_| rng.gen_bool(density))
                    .fold(0, |r, m| r | 1 << m)
            })
            .collect();
        Naive {
            n_objects,
            n_attributes,
            rows,
        }
    }

    pub fn seeded(seed: u64, max_objects: usize, max_attributes: usize) -> Self {
        Naive::random(
            &mut ChaCha8Rng::seed_from_u64(seed),
            max_objects,
            max_attributes,
        )
    }

    pub fn column(&self, m: usize) -> u64 {
        (0..self.n_objects)
            .filter(|&g| self.rows[g] >> m & 1 == 1)
            .fold(0, |c, g| c | 1 << g)
    }

    /// Common attributes of the objects in `a`.
    pub fn f(&self, a: u64) -> u64 {
        (0..self.n_objects)
            .filter(|&g| a >> g & 1 == 1)
            .fold(full(self.n_attributes), |b, g| b & self.rows[g])
    }

    /// Objects having all attributes in `b`.
    pub fn h(&self, b: u64) -> u64 {
        (0..self.n_objects)
            .filter(|&g| is_subset(b, self.rows[g]))
            .fold(0, |a, g| a | 1 << g)
    }

    /// Every (extent, intent) pair, by closing every object subset.
    pub fn concepts(&self) -> BTreeSet<(u64, u64)> {
        (0..1u64 << self.n_objects)
            .map(|a| {
                let b = self.f(a);
                (self.h(b), b)
            })
            .collect()
    }

    pub fn to_context(&self) -> FormalContext {
        FormalContext::new(
            (0..self.n_objects).map(|g| format!("g{g}")).collect(),
            (0..self.n_attributes).map(|m| format!("m{m}")).collect(),
            self.rows
                .iter()
                .map(|&r| mask_to_bits(r, self.n_attributes))
                .collect(),
        )
        .unwrap()
    }

    /// Context restricted to the given object and attribute indices, keeping
    /// the original names.
    pub fn restrict(&self, objects: &[usize], attributes: &[usize]) -> FormalContext {
        FormalContext::new(
            objects.iter().map(|g| format!("g{g}")).collect(),
            attributes.iter().map(|m| format!("m{m}")).collect(),
            objects
                .iter()
                .map(|&g| {
                    BitSet::from_bools(
                        &attributes
                            .iter()
                            .map(|&m| self.rows[g] >> m & 1 == 1)
                            .collect::<Vec<_>>(),
                    )
                })
                .collect(),
        )
        .unwrap()
    }
}

pub fn mask_to_bits(mask: u64, len: usize) -> BitSet {
    BitSet::from_indices(len, (0..len).filter(|i| mask >> i & 1 == 1))
}

pub fn bits_to_mask(bits: &BitSet) -> u64 {
    bits.ones().fold(0, |m, i| m | 1 << i)
}

pub fn space_masks(space: &ConceptSpace) -> BTreeSet<(u64, u64)> {
    space
        .raw_iter()
        .map(|(e, i)| (bits_to_mask(e), bits_to_mask(i)))
        .collect()
}
