//! Model rationalization on the synthetic suing group: enumerate rule lists
//! for several fairness weights and pick the most faithful one that is at
//! least twice as fair as the black box.
//!
//! cargo run --release --example global_rationalization

use std::time::Instant;

use fairwash::audit::{flip_influence, LookupOracle, RuleListOracle};
use fairwash::rationalize::{laundryml_global, BlackBoxPredictions};
use fairwash::{synthetic, SearchConfig};

fn main() -> fairwash::Result<()> {
    let suing = synthetic::generate(1000, 2019);
    let b = BlackBoxPredictions::new(synthetic::blackbox_predictions(&suing).0, "synthetic-rule")?;
    // The black box never reads `group` directly; `district` is its proxy.
    // Zero-score ties in the audit are ordered by column index.
    let t = suing.with_labels(&b.preds)?;
    let proxy = suing.feature_names().iter().position(|n| n == "district").unwrap();
    let bb_proxy_rank = flip_influence(&LookupOracle::new(&t, &b.preds)?, &t, "black box")?.rank_of(proxy);
    for beta in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9] {
        let cfg = SearchConfig {
            lambda: 0.005,
            beta,
            ..Default::default()
        };
        let t0 = Instant::now();
        let report = laundryml_global(&suing, &b, &cfg, 50)?;
        println!(
            "beta={beta:.1}  models={}  black-box unfairness={:.3}  ({:.1?})",
            report.models.len(),
            report.baseline_unfairness,
            t0.elapsed()
        );
        match report.selected_model() {
            Some(m) => {
                println!(
                    "  best #{:<2} fidelity={:.3} unfairness={:.3} K={}",
                    m.index,
                    m.fidelity(),
                    m.unfairness(),
                    m.len()
                );
                for line in m.model.model.render(&report.antecedents)?.lines() {
                    println!("    {line}");
                }
                if let Some(r) = &report.sensitive_ranks {
                    println!(
                        "  rank of `{}` (flip audit, of {}): black box {} -> surrogate {}",
                        synthetic::SENSITIVE,
                        r.n_features,
                        r.blackbox,
                        r.surrogate
                    );
                }
                let oracle = RuleListOracle {
                    list: &m.model.model,
                    ants: &report.antecedents,
                };
                let rank = flip_influence(&oracle, &t, "surrogate")?.rank_of(proxy);
                println!("  rank of `district`: black box {bb_proxy_rank} -> surrogate {rank}");
            }
            None => println!("  no model passes the selection rule"),
        }
    }
    Ok(())
}
