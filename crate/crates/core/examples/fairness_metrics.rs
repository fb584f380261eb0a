//! The four group metrics on a hand-made confusion table, and the effect of
//! swapping the group encoding.
//!
//! cargo run --example fairness_metrics

use fairwash::fairness::unfairness_with;
use fairwash::{group_counts, MetricKind, RateMode};

fn main() -> fairwash::Result<()> {
    //             group 0 rows        group 1 rows
    let s = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1];
    let labels = [1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0];
    let preds = [1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0];

    let counts = group_counts(&preds, Some(&labels), &s)?;
    let swapped_s: Vec<u8> = s.iter().map(|g| 1 - g).collect();
    let swapped = group_counts(&preds, Some(&labels), &swapped_s)?;
    for (g, c) in counts.groups.iter().enumerate() {
        println!(
            "group {g}: n={} positive={} tp={} fp={} tn={} fn={}",
            c.n, c.predicted_positive, c.tp, c.fp, c.tn, c.fn_
        );
    }
    for kind in MetricKind::ALL {
        let u = unfairness_with(kind, &counts, RateMode::Strict)?;
        let v = unfairness_with(kind, &swapped, RateMode::Strict)?;
        println!("{kind:>3}: {u:.4}  (groups swapped: {v:.4})");
    }
    Ok(())
}
