//! Benchmark fixtures.

use trop_core::cpl::{product, support_function};
use trop_core::verify::random_polytope;
use trop_core::{ConewisePoly, Polytope};

/// A seeded tuple of `dim` polytopes with `nverts` points each.
pub fn tuple(dim: usize, nverts: usize, seed: u64) -> Vec<Polytope> {
    (0..dim).map(|i| random_polytope(dim, nverts, seed + i as u64).unwrap()).collect()
}

pub fn support_product(ps: &[Polytope]) -> ConewisePoly {
    product(&ps.iter().map(support_function).collect::<Vec<_>>()).unwrap()
}
