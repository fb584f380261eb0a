//! Outcome rationalization: for every rejected minority subject whose
//! neighborhood looks unfair, enumerate rule lists on the neighborhood and
//! keep the fairest one that still reproduces the subject's outcome.
//!
//! cargo run --release --example local_rationalization

use std::time::Instant;

use fairwash::rationalize::{
    default_k, local_cohort_for, select_cohort, BlackBoxPredictions, CohortSpec, RationalizeOptions,
};
use fairwash::{synthetic, SearchConfig};

fn main() -> fairwash::Result<()> {
    let suing = synthetic::generate(1000, 2019);
    let b = BlackBoxPredictions::new(synthetic::blackbox_predictions(&suing).0, "synthetic-rule")?;
    let k = default_k(suing.n_rows());
    let spec = CohortSpec::default();
    let cohort = select_cohort(&suing, &b, &SearchConfig::default(), k, &spec)?;
    println!("k={k}, cohort of {} rejected minority subjects", cohort.len());
    for beta in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let cfg = SearchConfig {
            lambda: 0.005,
            beta,
            ..Default::default()
        };
        let t0 = Instant::now();
        let report = local_cohort_for(&suing, &b, &cfg, k, &RationalizeOptions::models(50), &cohort)?;
        let fairer = report.subjects.iter().filter(|s| s.rationalizes()).count();
        let cdf = report.cdf();
        let median = cdf.get(cdf.len() / 2).map(|c| c.0).unwrap_or(f64::NAN);
        println!(
            "beta={beta:.1}  coverage={:.4}  fairer than black box: {fairer}/{}  median best unfairness={median:.3}  ({:.1?})",
            report.coverage,
            report.subjects.len(),
            t0.elapsed()
        );
    }
    Ok(())
}
