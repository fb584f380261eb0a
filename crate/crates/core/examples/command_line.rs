//! Drives the command-line front end in-process: prepare synthetic data,
//! run a small global grid, then audit the first model of one cell.
//!
//! cargo run --release --example command_line

use fairwash::cli::run;

fn fw(args: &[&str]) -> i32 {
    let argv = std::iter::once("fairwash").chain(args.iter().copied());
    run(argv.map(String::from))
}

fn main() {
    let dir = std::env::temp_dir().join("fairwash-example");
    let out = |s: &str| dir.join(s).display().to_string();
    let (data, grid, audit) = (out("data"), out("global"), out("audit"));

    assert_eq!(fw(&["prep", "--synthetic", "600", "--seed", "5", "--out", &data]), 0);
    let csv = format!("{data}/data.csv");
    let bb = format!("{data}/data_blackbox.csv");
    let columns = ["--sensitive", "group", "--label", "outcome"];

    let mut args = vec!["global", "--data", &csv, "--blackbox", &bb];
    args.extend(columns);
    args.extend([
        "--lambda", "0.005", "--lambda", "0.01", "--beta", "0.2", "--beta", "0.7", "--out", &grid,
    ]);
    assert_eq!(fw(&args), 0);

    let models = format!("{grid}/l0.005_b0.7/models.txt");
    let mut args = vec!["audit", "--data", &csv, "--blackbox", &bb, "--models", &models];
    args.extend(columns);
    args.extend(["--out", &audit]);
    assert_eq!(fw(&args), 0);

    println!("\n{grid}/selection.csv:");
    print!("{}", std::fs::read_to_string(format!("{grid}/selection.csv")).unwrap());
}
