//! Output files.
//!
//! Writers return the file contents as a `String` so runs can be compared
//! byte for byte. Floats use Rust's shortest round-trip formatting.

use std::fs;
use std::path::Path;

use crate::antecedent::AntecedentSet;
use crate::audit::InfluenceRanking;
use crate::enumerate::EnumeratedModel;
use crate::error::{Error, Result};
use crate::rationalize::{GlobalReport, LocalReport};

pub const MODELS: &str = "models.txt";
pub const TRADEOFF: &str = "tradeoff.csv";
pub const CDF: &str = "cdf.csv";
pub const COVERAGE: &str = "coverage.csv";
pub const AUDIT: &str = "audit.csv";
pub const MANIFEST: &str = "manifest.txt";
pub const ANTECEDENTS: &str = "antecedents.txt";
pub const SUBJECTS: &str = "subjects.csv";
pub const SELECTION: &str = "selection.csv";

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Name of the output subdirectory for one grid cell.
pub fn cell_dir(lambda: f64, beta: f64) -> String {
    format!("l{}_b{}", num(lambda), num(beta))
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// `model_id  objective  misc  unfairness  fidelity  K  canonical`, tab separated.
pub fn models_txt(models: &[EnumeratedModel]) -> String {
    let mut out = String::new();
    for (id, m) in models.iter().enumerate() {
        out.push_str(&format!(
            "{id}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            num(m.objective),
            num(m.misc),
            num(m.unfairness),
            num(m.fidelity),
            m.model.len(),
            m.model.canonical_form()
        ));
    }
    out
}

/// One parsed line of a models file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelLine {
    pub model_id: usize,
    pub objective: f64,
    pub misc: f64,
    pub unfairness: f64,
    pub fidelity: f64,
    pub k: usize,
    pub canonical: String,
}

pub fn parse_models_txt(text: &str) -> Result<Vec<ModelLine>> {
    let bad = |line: usize, what: &str| Error::Parse(format!("models line {}: {what}", line + 1));
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 7 {
            return Err(bad(i, "expected 7 tab-separated fields"));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad(i, "bad number"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(i, "bad integer"));
        out.push(ModelLine {
            model_id: int(f[0])?,
            objective: float(f[1])?,
            misc: float(f[2])?,
            unfairness: float(f[3])?,
            fidelity: float(f[4])?,
            k: int(f[5])?,
            canonical: f[6].to_string(),
        });
    }
    Ok(out)
}

pub fn tradeoff_rows(models: &[EnumeratedModel], lambda: f64, beta: f64) -> Vec<Vec<String>> {
    models
        .iter()
        .enumerate()
        .map(|(id, m)| {
            vec![
                id.to_string(),
                num(lambda),
                num(beta),
                num(m.objective),
                num(m.fidelity),
                num(m.unfairness),
                m.model.len().to_string(),
            ]
        })
        .collect()
}

pub const TRADEOFF_HEADER: [&str; 7] = ["model_id", "lambda", "beta", "objective", "fidelity", "unfairness", "K"];

pub fn tradeoff_csv(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    csv_string(&TRADEOFF_HEADER, rows)
}

pub fn cdf_csv(report: &LocalReport) -> String {
    csv_string(
        &["unfairness", "cumulative_fraction"],
        report.cdf().into_iter().map(|(u, f)| vec![num(u), num(f)]),
    )
}

pub fn coverage_csv(rows: &[(f64, f64)]) -> String {
    csv_string(&["beta", "coverage"], rows.iter().map(|&(b, c)| vec![num(b), num(c)]))
}

pub fn audit_csv(rankings: &[&InfluenceRanking]) -> String {
    csv_string(
        &["feature", "score", "rank", "model_tag"],
        rankings.iter().flat_map(|r| {
            r.entries
                .iter()
                .map(|e| vec![e.name.clone(), num(e.score), e.rank.to_string(), r.model_tag.clone()])
        }),
    )
}

pub fn antecedents_txt(ants: &AntecedentSet) -> String {
    let mut out = String::new();
    for a in ants.iter() {
        out.push_str(&format!("{}\t{}\t{}\n", a.id, a.name, a.support));
    }
    out
}

/// One row per cohort subject; `covered` is 1 when some enumerated model
/// agrees with the black box at the subject.
pub fn subjects_csv(report: &LocalReport) -> String {
    csv_string(
        &[
            "subject",
            "row_id",
            "blackbox_outcome",
            "blackbox_unfairness",
            "models",
            "covered",
            "model_id",
            "unfairness",
            "fidelity",
            "model",
        ],
        report.subjects.iter().map(|s| {
            let mut row = vec![
                s.subject.to_string(),
                s.row_id.to_string(),
                s.blackbox_outcome.to_string(),
                num(s.blackbox_unfairness),
                s.models_enumerated.to_string(),
            ];
            match &s.best {
                Some(m) => row.extend([
                    "1".into(),
                    m.index.to_string(),
                    num(m.model.unfairness),
                    num(m.model.fidelity),
                    m.model.model.canonical_form(),
                ]),
                None => row.extend(["0".into(), String::new(), String::new(), String::new(), String::new()]),
            }
            row
        }),
    )
}

/// Coverage recomputed from a subjects file.
pub fn coverage_from_subjects(text: &str) -> Result<f64> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let col = r
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .position(|h| h == "covered")
        .ok_or_else(|| Error::MissingColumn("covered".into()))?;
    let (mut n, mut hit) = (0usize, 0usize);
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        n += 1;
        hit += (rec.get(col) == Some("1")) as usize;
    }
    if n == 0 {
        return Err(Error::EmptyCohort);
    }
    Ok(hit as f64 / n as f64)
}

pub const SELECTION_HEADER: [&str; 11] = [
    "lambda",
    "beta",
    "baseline_unfairness",
    "models",
    "model_id",
    "fidelity",
    "unfairness",
    "test_fidelity",
    "test_unfairness",
    "blackbox_sensitive_rank",
    "surrogate_sensitive_rank",
];

/// Selection outcome of one global cell; empty fields when nothing passes.
pub fn selection_row(report: &GlobalReport) -> Vec<String> {
    let c = &report.config;
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let mut row = vec![
        num(c.lambda),
        num(c.beta),
        num(report.baseline_unfairness),
        report.models.len().to_string(),
    ];
    match report.selected_model() {
        Some(m) => row.extend([
            m.index.to_string(),
            num(m.fidelity()),
            num(m.unfairness()),
            opt(m.test_fidelity),
            opt(m.test_unfairness),
        ]),
        None => row.extend(std::iter::repeat_n(String::new(), 5)),
    }
    match &report.sensitive_ranks {
        Some(r) => row.extend([r.blackbox.to_string(), r.surrogate.to_string()]),
        None => row.extend([String::new(), String::new()]),
    }
    row
}

pub fn selection_csv(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    csv_string(&SELECTION_HEADER, rows)
}

/// Ordered `key=value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Manifest> {
        let mut m = Manifest::default();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("manifest line {}: missing `=`", i + 1)))?;
            m.push(k, v);
        }
        Ok(m)
    }
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
