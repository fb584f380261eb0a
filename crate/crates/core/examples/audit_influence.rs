//! Flip-influence audit of the synthetic black box and of a rule list that
//! mimics it. The black box discriminates through the `district` proxy; the
//! surrogate hides that column.
//!
//! cargo run --release --example audit_influence

use fairwash::audit::{flip_influence, InfluenceRanking, LookupOracle, RuleListOracle, ESTIMATOR};
use fairwash::{mine_antecedents, synthetic, RuleList};

fn show(r: &InfluenceRanking) {
    println!("{} ({ESTIMATOR} estimator):", r.model_tag);
    let mut rows: Vec<_> = r.entries.iter().collect();
    rows.sort_by_key(|e| e.rank);
    for e in rows {
        println!("  {:>2}. {:<9} {:+.3}", e.rank, e.name, e.score);
    }
}

fn main() -> fairwash::Result<()> {
    let d = synthetic::generate(1000, 2019);
    let bb = synthetic::blackbox_predictions(&d);
    let t = d.with_labels(&bb)?;

    // The black box is only known through its recorded predictions.
    show(&flip_influence(&LookupOracle::new(&t, &bb)?, &t, "black box")?);

    let ants = mine_antecedents(&t, 0.05, true)?;
    let skill = ants.iter().find(|a| a.name == "skill").map(|a| a.id).unwrap();
    let surrogate = RuleList::parse(&format!("{skill}:1 default:0"))?;
    println!("\nsurrogate: {}", surrogate.render(&ants)?.replace('\n', " / "));
    show(&flip_influence(
        &RuleListOracle {
            list: &surrogate,
            ants: &ants,
        },
        &t,
        "surrogate",
    )?);
    Ok(())
}
