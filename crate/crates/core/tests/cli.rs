use std::fs;
use std::path::{Path, PathBuf};

use fairwash::cli::{manifest_args, run, EXIT_DATA, EXIT_OK, EXIT_UNCERTIFIED, EXIT_USAGE};
use fairwash::report::parse_models_txt;

fn fw(args: &[&str]) -> i32 {
    let mut argv = vec!["fairwash".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn read(path: PathBuf) -> String {
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "o");
    assert_eq!(fw(&["nonsense"]), EXIT_USAGE);
    assert_eq!(fw(&["--help"]), EXIT_OK);
    assert_eq!(
        fw(&["learn", "--synthetic", "50", "--out", &out, "--metric", "xyz"]),
        EXIT_USAGE
    );
    assert_eq!(
        fw(&["learn", "--synthetic", "50", "--out", &out, "--beta", "1.5"]),
        EXIT_USAGE
    );
    assert_eq!(fw(&["learn", "--out", &out]), EXIT_USAGE);
    assert_eq!(
        fw(&[
            "learn",
            "--data",
            "/nonexistent.csv",
            "--sensitive",
            "s",
            "--label",
            "y",
            "--out",
            &out
        ]),
        EXIT_DATA
    );
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a,s,y\n1,0,1\n2,1,0\n").unwrap();
    let bad = bad.display().to_string();
    assert_eq!(
        fw(&[
            "mine",
            "--data",
            &bad,
            "--sensitive",
            "s",
            "--label",
            "y",
            "--out",
            &out
        ]),
        EXIT_DATA
    );
    assert_eq!(
        fw(&["learn", "--synthetic", "300", "--out", &out, "--node-budget", "3"]),
        EXIT_OK
    );
    assert_eq!(
        fw(&[
            "learn",
            "--synthetic",
            "300",
            "--out",
            &out,
            "--node-budget",
            "3",
            "--strict"
        ]),
        EXIT_UNCERTIFIED
    );
    assert_eq!(
        fw(&[
            "enumerate",
            "--synthetic",
            "300",
            "--out",
            &out,
            "--node-budget",
            "3",
            "--strict"
        ]),
        EXIT_UNCERTIFIED
    );
}

#[test]
fn enumerate_one_model_equals_learn() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(dir.path(), "learn"), p(dir.path(), "enum"));
    let common = ["--synthetic", "500", "--seed", "3", "--beta", "0", "--lambda", "0.005"];
    let mut learn = vec!["learn"];
    learn.extend(common);
    learn.extend(["--out", &a]);
    let mut enumerate = vec!["enumerate", "--max-models", "1"];
    enumerate.extend(common);
    enumerate.extend(["--out", &b]);
    assert_eq!(fw(&learn), EXIT_OK);
    assert_eq!(fw(&enumerate), EXIT_OK);
    let cell = Path::new(&b).join("l0.005_b0");
    assert_eq!(read(Path::new(&a).join("models.txt")), read(cell.join("models.txt")));
    assert_eq!(
        read(Path::new(&a).join("tradeoff.csv")),
        read(cell.join("tradeoff.csv"))
    );
}

#[test]
fn manifest_rerun_reproduces_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let first = p(dir.path(), "first");
    let args = [
        "global",
        "--synthetic",
        "400",
        "--seed",
        "9",
        "--lambda",
        "0.005",
        "--beta",
        "0.2",
        "--beta",
        "0.8",
        "--max-models",
        "10",
        "--out",
        &first,
    ];
    assert_eq!(fw(&args), EXIT_OK);
    let manifest = read(Path::new(&first).join("manifest.txt"));
    let mut again = manifest_args(&manifest).unwrap();
    assert_eq!(again.iter().map(String::as_str).collect::<Vec<_>>(), args);
    let second = p(dir.path(), "second");
    let pos = again.iter().position(|a| a == "--out").unwrap();
    again[pos + 1] = second.clone();
    let mut argv = vec!["fairwash".to_string()];
    argv.extend(again);
    assert_eq!(run(argv), EXIT_OK);
    for f in [
        "tradeoff.csv",
        "selection.csv",
        "l0.005_b0.2/models.txt",
        "l0.005_b0.8/tradeoff.csv",
        "l0.005_b0.2/audit.csv",
    ] {
        assert_eq!(read(Path::new(&first).join(f)), read(Path::new(&second).join(f)), "{f}");
    }
}

#[test]
fn prep_recipe_split_and_mine() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.csv");
    let mut text = String::from("age,job,sex,income\n");
    for i in 0..60 {
        let job = ["clerk", "nurse", "smith"][i % 3];
        let sex = if i % 2 == 0 { "F" } else { "M" };
        let income = if (i * 7) % 5 < 2 { ">50K" } else { "<=50K" };
        text.push_str(&format!("{},{job},{sex},{income}\n", 18 + i));
    }
    fs::write(&raw, text).unwrap();
    let recipe = dir.path().join("recipe.txt");
    fs::write(
        &recipe,
        "age: buckets=[30,50]\njob: onehot\nsex: sensitive=M\nincome: label=>50K\n",
    )
    .unwrap();
    let out = p(dir.path(), "prep");
    let code = fw(&[
        "prep",
        "--raw",
        &raw.display().to_string(),
        "--recipe",
        &recipe.display().to_string(),
        "--split",
        "0.5,0.3,0.2",
        "--seed",
        "4",
        "--out",
        &out,
    ]);
    assert_eq!(code, EXIT_OK);
    let data = read(Path::new(&out).join("data.csv"));
    let header = data.lines().next().unwrap();
    assert!(
        header.contains("job=nurse") && header.contains("sex") && header.ends_with("income"),
        "{header}"
    );
    let parts: usize = ["train.csv", "suing.csv", "test.csv"]
        .iter()
        .map(|f| read(Path::new(&out).join(f)).lines().count() - 1)
        .sum();
    assert_eq!(parts, 60);

    let mined = p(dir.path(), "mine");
    let code = fw(&[
        "mine",
        "--data",
        &p(Path::new(&out), "data.csv"),
        "--sensitive",
        "sex",
        "--label",
        "income",
        "--out",
        &mined,
    ]);
    assert_eq!(code, EXIT_OK);
    let ants = read(Path::new(&mined).join("antecedents.txt"));
    assert!(ants.lines().any(|l| l.contains("\tjob=smith\t")));
    assert!(!ants.lines().any(|l| l.split('\t').nth(1) == Some("sex")));
}

#[test]
fn prep_synthetic_feeds_global_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let data = p(dir.path(), "data");
    assert_eq!(
        fw(&["prep", "--synthetic", "400", "--seed", "2", "--out", &data]),
        EXIT_OK
    );
    let csv = p(Path::new(&data), "data.csv");
    let bb = p(Path::new(&data), "data_blackbox.csv");
    let g = p(dir.path(), "g");
    let code = fw(&[
        "global",
        "--data",
        &csv,
        "--blackbox",
        &bb,
        "--sensitive",
        "group",
        "--label",
        "outcome",
        "--beta",
        "0.5",
        "--max-models",
        "10",
        "--out",
        &g,
    ]);
    assert_eq!(code, EXIT_OK);
    let models = parse_models_txt(&read(Path::new(&g).join("l0.005_b0.5/models.txt"))).unwrap();
    assert!(!models.is_empty());
    for w in models.windows(2) {
        assert!(w[0].objective <= w[1].objective);
    }

    // Same data through --synthetic gives the same files.
    let g2 = p(dir.path(), "g2");
    let code = fw(&[
        "global",
        "--synthetic",
        "400",
        "--seed",
        "2",
        "--beta",
        "0.5",
        "--max-models",
        "10",
        "--out",
        &g2,
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        read(Path::new(&g).join("l0.005_b0.5/models.txt")),
        read(Path::new(&g2).join("l0.005_b0.5/models.txt"))
    );

    let a = p(dir.path(), "a");
    let code = fw(&[
        "audit",
        "--data",
        &csv,
        "--blackbox",
        &bb,
        "--sensitive",
        "group",
        "--label",
        "outcome",
        "--models",
        &p(Path::new(&g), "l0.005_b0.5/models.txt"),
        "--model-id",
        "0",
        "--out",
        &a,
    ]);
    assert_eq!(code, EXIT_OK);
    let audit = read(Path::new(&a).join("audit.csv"));
    assert_eq!(audit.lines().next(), Some("feature,score,rank,model_tag"));
    assert_eq!(audit.lines().count(), 1 + 2 * 10);
    assert!(audit.lines().any(|l| l.ends_with(",model0")) && audit.lines().any(|l| l.ends_with(",blackbox")));
}

#[test]
fn local_writes_coverage_and_report_rebuilds_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "local");
    let code = fw(&[
        "local",
        "--synthetic",
        "300",
        "--seed",
        "2019",
        "--beta",
        "0.1",
        "--beta",
        "0.9",
        "--max-models",
        "10",
        "--out",
        &out,
    ]);
    assert_eq!(code, EXIT_OK);
    let coverage = read(Path::new(&out).join("coverage.csv"));
    assert!(coverage.starts_with("beta,coverage\n0.1,"), "{coverage}");
    let cdf = read(Path::new(&out).join("l0.005_b0.9/cdf.csv"));
    let fractions: Vec<f64> = cdf
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(fractions.last(), Some(&1.0));

    fs::remove_file(Path::new(&out).join("coverage.csv")).unwrap();
    assert_eq!(fw(&["report", "--dir", &out]), EXIT_OK);
    assert_eq!(read(Path::new(&out).join("coverage.csv")), coverage);
    assert_eq!(fw(&["report", "--dir", &p(dir.path(), "missing")]), EXIT_DATA);
    assert_eq!(
        fw(&[
            "local",
            "--synthetic",
            "300",
            "--lambda",
            "0.1",
            "--lambda",
            "0.2",
            "--out",
            &out
        ]),
        EXIT_USAGE
    );
}
