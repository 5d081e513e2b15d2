//! Instance builders shared by the criterion benches.

use densesat_core::{random_instance, ClauseWidth, DensityType, Formula, GenSpec};

pub fn density_instance(n: u32, m: usize, dt: DensityType, seed: u64) -> Formula {
    random_instance(&GenSpec {
        num_vars: n,
        num_clauses: m,
        width: ClauseWidth::Density(dt),
        seed,
    })
    .expect("standard densities give a valid width")
}
