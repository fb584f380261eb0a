//! Seeded synthetic data with a deliberately biased black box.
//!
//! Columns (all binary):
//!
//! | column     | distribution                                   |
//! |------------|------------------------------------------------|
//! | `group`    | sensitive attribute, `P(group=1) = 0.5`         |
//! | `skill`    | `P = 0.30`, independent of `group`              |
//! | `referral` | `P = 0.30`, independent of `group`              |
//! | `district` | copies `group` with probability 0.9 (a proxy)   |
//! | `tenure`   | `P = 0.40`                                      |
//! | `n1`..`n5` | independent noise, `P = 0.5`                    |
//!
//! The black box accepts `skill OR (district AND referral)`: it never reads
//! `group`, but discriminates through the proxy. Its demographic-parity gap
//! is about `0.7 · 0.3 · (0.9 − 0.1) = 0.168`, while the fair rule `skill`
//! alone agrees with it on about 89.5% of rows. Since the decision is a
//! function of the non-sensitive columns, rows that agree on those columns
//! always get the same decision. The label column holds the black-box
//! decision with 10% of entries flipped, playing the role of ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::rule_list::PredictionVector;

pub const SENSITIVE: &str = "group";
pub const LABEL: &str = "outcome";
pub const COLUMNS: [&str; 10] = [
    "group", "skill", "referral", "district", "tenure", "n1", "n2", "n3", "n4", "n5",
];

/// Column indices of the black-box rule.
const GROUP: usize = 0;
const SKILL: usize = 1;
const REFERRAL: usize = 2;
const DISTRICT: usize = 3;

/// The black-box decision for one row of the synthetic schema.
pub fn blackbox_rule(row: &[u8]) -> u8 {
    row[SKILL] | (row[DISTRICT] & row[REFERRAL])
}

/// Draws `n_rows` rows from `seed`.
pub fn generate(n_rows: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_rows);
    let mut labels = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let group = rng.gen_bool(0.5) as u8;
        let skill = rng.gen_bool(0.30) as u8;
        let referral = rng.gen_bool(0.30) as u8;
        let district = if rng.gen_bool(0.9) { group } else { 1 - group };
        let tenure = rng.gen_bool(0.40) as u8;
        let mut row = vec![group, skill, referral, district, tenure];
        row.extend((0..5).map(|_| rng.gen_bool(0.5) as u8));
        let flip = rng.gen_bool(0.1) as u8;
        labels.push(blackbox_rule(&row) ^ flip);
        rows.push(row);
    }
    let names = COLUMNS.iter().map(|s| s.to_string()).collect();
    Dataset::from_rows(format!("synthetic-{seed}"), names, &rows, GROUP, &labels).expect("generator emits binary rows")
}

/// Black-box predictions for every row of a synthetic dataset.
pub fn blackbox_predictions(d: &Dataset) -> PredictionVector {
    PredictionVector((0..d.n_rows()).map(|r| blackbox_rule(&d.row(r))).collect())
}
