//! Exact search for one rule list, first for accuracy alone and then with an
//! unfairness penalty. Also shows how much work the pruning bounds save.
//!
//! cargo run --release --example learn_rule_list

use std::collections::BTreeSet;

use fairwash::{corels_optimize, mine_antecedents, synthetic, BoundSwitches, SearchConfig};

fn main() -> fairwash::Result<()> {
    let d = synthetic::generate(1000, 1);
    let ants = mine_antecedents(&d, 0.05, true)?;
    let all: BTreeSet<usize> = ants.ids().collect();
    let none = BTreeSet::new();

    for beta in [0.0, 0.5] {
        let cfg = SearchConfig {
            lambda: 0.005,
            beta,
            ..Default::default()
        };
        let r = corels_optimize(&ants, &d, &cfg, &all, &none)?;
        println!(
            "beta={beta}: objective {:.4}, error {:.3}, unfairness {:.3}, {} nodes, certified {}",
            r.objective, r.misc, r.unfairness, r.nodes_evaluated, r.certified_optimal
        );
        println!("{}\n", r.best.render(&ants)?);
    }

    let cfg = SearchConfig {
        max_length: 3,
        ..Default::default()
    };
    let on = corels_optimize(&ants, &d, &cfg, &all, &none)?;
    let off = corels_optimize(
        &ants,
        &d,
        &SearchConfig {
            bounds: BoundSwitches::ALL_OFF,
            ..cfg
        },
        &all,
        &none,
    )?;
    println!(
        "max length 3: {} nodes with all bounds, {} without (same objective: {})",
        on.nodes_evaluated,
        off.nodes_evaluated,
        on.objective == off.objective
    );
    Ok(())
}
