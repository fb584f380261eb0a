//! Best-first enumeration of distinct rule lists. The objective never
//! decreases along the sequence; many near-optimal lists differ sharply in
//! unfairness.
//!
//! cargo run --release --example enumerate_models

use fairwash::{enumerate_models, mine_antecedents, synthetic, SearchConfig};

fn main() -> fairwash::Result<()> {
    let d = synthetic::generate(1000, 2019);
    let bb = synthetic::blackbox_predictions(&d);
    let t = d.with_labels(&bb)?;
    let ants = mine_antecedents(&t, 0.05, true)?;
    let cfg = SearchConfig {
        lambda: 0.005,
        beta: 0.2,
        ..Default::default()
    };
    let models = enumerate_models(&ants, &t, &cfg, 15)?;
    println!(" #  objective  fidelity  unfairness  list");
    for (i, m) in models.iter().enumerate() {
        let text = m.model.render(&ants)?.replace('\n', " / ");
        println!(
            "{i:>2}  {:.5}    {:.3}     {:.3}       {text}",
            m.objective, m.fidelity, m.unfairness
        );
    }
    Ok(())
}
