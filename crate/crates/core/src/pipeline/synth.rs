//! Deterministic synthetic pair-table data for demos and end-to-end tests.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::pipeline::{exclusion_set, PairTableRecord};
use crate::sim::rng::substream;
use crate::sim::sample_table;

const ITEMS: u32 = 17;
const YEARS: std::ops::RangeInclusive<i32> = 2004..=2014;

fn truncated_normal(sd: f64, half_width: f64, rng: &mut impl Rng) -> f64 {
    let dist = Normal::new(0.0, sd).expect("positive sd");
    loop {
        let draw = dist.sample(rng);
        if draw.abs() <= half_width {
            return draw;
        }
    }
}

/// Generates a 17-item dataset of 128 pairs × years 2004–2014: every
/// unordered pair except the 8 the default report blanks out, which have no
/// data at all (mirroring the situation the default exclusion list exists
/// for). Each pair holds a latent log odds ratio fixed across years — an
/// exact null with probability ½, otherwise a wide truncated-normal draw —
/// and each year cross-classifies a fresh sample of a few hundred to a few
/// thousand subjects. Fully determined by `seed`; each pair draws from its
/// own substream keyed by its position among all 136 combinations.
pub fn synthesize_pair_tables(seed: u64) -> Vec<PairTableRecord> {
    let skipped = exclusion_set(true);
    let mut records = Vec::new();
    let mut pair_index = 0u64;
    for item_i in 1..=ITEMS {
        for item_j in item_i + 1..=ITEMS {
            let mut rng = substream(seed, pair_index);
            pair_index += 1;
            if skipped.contains(&(item_i, item_j)) {
                continue;
            }
            let log_or = if rng.random_bool(0.5) {
                truncated_normal(0.001, 0.01, &mut rng)
            } else {
                truncated_normal(0.67, 4.8, &mut rng)
            };
            for year in YEARS {
                let n_cases = rng.random_range(200..=2000);
                let ratio = rng.random_range(0.5..4.0);
                let q = rng.random_range(0.05..0.5);
                let table = sample_table(log_or, n_cases, ratio, q, &mut rng)
                    .expect("interior nuisance parameters");
                records.push(PairTableRecord {
                    year,
                    item_i,
                    item_j,
                    n11: table.n11() as u64,
                    n12: table.n12() as u64,
                    n21: table.n21() as u64,
                    n22: table.n22() as u64,
                });
            }
        }
    }
    records
}
