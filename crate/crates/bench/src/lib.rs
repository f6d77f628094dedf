//! Fixtures shared by the criterion benches.

use proprep_core::instances::gen_random_block;
use proprep_core::{Instance, Norm};

/// Block-only random L1 instance in the plane.
pub fn plane(n: usize, m: usize, k: usize, seed: u64) -> Instance {
    gen_random_block(n, m, k, 2, Norm::L1, seed).expect("valid random parameters")
}
