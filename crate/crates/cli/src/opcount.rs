//! Neighborhood-event counts of both rules on growing random instances.

use std::time::Instant;

use crate::args::Format;
use crate::table;
use proprep_core::instances::gen_random_block;
use proprep_core::{derive_rankings, ear_select, tgc_select, Algorithm, Norm, Result};

/// Events allowed per voter/candidate pair.
pub const EVENTS_PER_PAIR: u64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpcountRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub algorithm: Algorithm,
    pub inserts: u64,
    pub removals: u64,
    pub probes: u64,
    pub wall_micros: u128,
}

impl OpcountRow {
    pub fn events(&self) -> u64 {
        self.inserts + self.removals + self.probes
    }

    pub fn limit(&self) -> u64 {
        EVENTS_PER_PAIR * (self.n * self.m) as u64
    }

    pub fn within_limit(&self) -> bool {
        self.events() <= self.limit()
    }
}

pub fn default_k(m: usize) -> usize {
    5.min(m - 1).max(1)
}

/// One row per size and rule. Wall time covers selection only, not
/// instance generation or ranking derivation.
pub fn opcount_bench(
    sizes: &[(usize, usize)],
    k: Option<usize>,
    seed: u64,
) -> Result<Vec<OpcountRow>> {
    let mut rows = Vec::with_capacity(2 * sizes.len());
    for &(n, m) in sizes {
        let k = k.unwrap_or_else(|| default_k(m));
        let inst = gen_random_block(n, m, k, 2, Norm::L1, seed)?;
        let profile = derive_rankings(&inst);
        let start = Instant::now();
        let ear = ear_select(&profile, n, m, k)?;
        let ear_time = start.elapsed().as_micros();
        let start = Instant::now();
        let tgc = tgc_select(&inst)?;
        let tgc_time = start.elapsed().as_micros();
        for (rec, wall_micros) in [(ear, ear_time), (tgc, tgc_time)] {
            rows.push(OpcountRow {
                n,
                m,
                k,
                algorithm: rec.algorithm,
                inserts: rec.ops.inserts,
                removals: rec.ops.removals,
                probes: rec.ops.probes,
                wall_micros,
            });
        }
    }
    Ok(rows)
}

pub const OPCOUNT_HEADER: [&str; 12] = [
    "n",
    "m",
    "k",
    "algorithm",
    "inserts",
    "removals",
    "probes",
    "events",
    "limit",
    "events_per_nm",
    "within",
    "wall_us",
];

pub fn opcount_rows(rows: &[OpcountRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.m.to_string(),
                r.k.to_string(),
                r.algorithm.to_string(),
                r.inserts.to_string(),
                r.removals.to_string(),
                r.probes.to_string(),
                r.events().to_string(),
                r.limit().to_string(),
                format!("{:.3}", r.events() as f64 / (r.n * r.m) as f64),
                if r.within_limit() { "yes" } else { "EXCEEDED" }.to_string(),
                r.wall_micros.to_string(),
            ]
        })
        .collect()
}

pub fn render(rows: &[OpcountRow], format: Format) -> String {
    table::render(&OPCOUNT_HEADER, &opcount_rows(rows), format)
}
