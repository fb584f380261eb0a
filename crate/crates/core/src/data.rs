//! Tabular binary datasets: CSV ingestion, one-hot encoding driven by a
//! preprocessing recipe, and the seeded three-way split.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Row-aligned binary features, sensitive attribute and labels.
///
/// Features are stored column-major as bitvectors. The sensitive attribute
/// is one of the feature columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    columns: Vec<Bits>,
    feature_names: Vec<String>,
    sensitive_col: usize,
    labels: Bits,
    row_ids: Vec<usize>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        columns: Vec<Bits>,
        feature_names: Vec<String>,
        sensitive_col: usize,
        labels: Bits,
    ) -> Result<Self> {
        let n = labels.len();
        if columns.len() != feature_names.len() {
            return Err(Error::LengthMismatch {
                expected: columns.len(),
                actual: feature_names.len(),
            });
        }
        if sensitive_col >= columns.len() {
            return Err(Error::InvalidConfig(format!(
                "sensitive column index {sensitive_col} out of range"
            )));
        }
        if let Some(c) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: c.len(),
            });
        }
        Ok(Dataset {
            name: name.into(),
            columns,
            feature_names,
            sensitive_col,
            labels,
            row_ids: (0..n).collect(),
        })
    }

    /// Builds a dataset from dense rows. Every cell must be 0 or 1.
    pub fn from_rows(
        name: impl Into<String>,
        feature_names: Vec<String>,
        rows: &[Vec<u8>],
        sensitive_col: usize,
        labels: &[u8],
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: rows.len(),
                actual: labels.len(),
            });
        }
        let m = feature_names.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    actual: row.len(),
                });
            }
            if let Some((c, v)) = row.iter().enumerate().find(|(_, &v)| v > 1) {
                return Err(Error::NonBinaryCell {
                    row: r,
                    column: feature_names[c].clone(),
                    value: v.to_string(),
                });
            }
        }
        if let Some(r) = labels.iter().position(|&v| v > 1) {
            return Err(Error::NonBinaryCell {
                row: r,
                column: "<label>".into(),
                value: labels[r].to_string(),
            });
        }
        let columns = (0..m).map(|c| Bits::from_fn(rows.len(), |r| rows[r][c] == 1)).collect();
        let labels = Bits::from_fn(labels.len(), |r| labels[r] == 1);
        Dataset::new(name, columns, feature_names, sensitive_col, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &Bits {
        &self.columns[c]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn sensitive_col(&self) -> usize {
        self.sensitive_col
    }

    pub fn sensitive(&self) -> &Bits {
        &self.columns[self.sensitive_col]
    }

    pub fn labels(&self) -> &Bits {
        &self.labels
    }

    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub fn cell(&self, row: usize, col: usize) -> u8 {
        self.columns[col].get(row) as u8
    }

    pub fn row(&self, row: usize) -> Vec<u8> {
        (0..self.n_cols()).map(|c| self.cell(row, c)).collect()
    }

    pub fn label_vec(&self) -> Vec<u8> {
        (0..self.n_rows()).map(|r| self.labels.get(r) as u8).collect()
    }

    pub fn sensitive_vec(&self) -> Vec<u8> {
        (0..self.n_rows()).map(|r| self.sensitive().get(r) as u8).collect()
    }

    /// Same rows and features, new labels (e.g. black-box predictions).
    pub fn with_labels(&self, labels: &[u8]) -> Result<Dataset> {
        if labels.len() != self.n_rows() {
            return Err(Error::LengthMismatch {
                expected: self.n_rows(),
                actual: labels.len(),
            });
        }
        if let Some(r) = labels.iter().position(|&v| v > 1) {
            return Err(Error::NonBinaryCell {
                row: r,
                column: "<label>".into(),
                value: labels[r].to_string(),
            });
        }
        let mut d = self.clone();
        d.labels = Bits::from_fn(labels.len(), |r| labels[r] == 1);
        Ok(d)
    }

    /// Rows at the given positions, in that order; row ids are carried over.
    pub fn subset(&self, positions: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            columns: self.columns.iter().map(|c| c.select(positions)).collect(),
            feature_names: self.feature_names.clone(),
            sensitive_col: self.sensitive_col,
            labels: self.labels.select(positions),
            row_ids: positions.iter().map(|&p| self.row_ids[p]).collect(),
        }
    }

    pub fn to_csv_string(&self, label_name: &str) -> String {
        let mut out = self.feature_names.join(",");
        out.push(',');
        out.push_str(label_name);
        out.push('\n');
        for r in 0..self.n_rows() {
            for c in 0..self.n_cols() {
                out.push(if self.cell(r, c) == 1 { '1' } else { '0' });
                out.push(',');
            }
            out.push(if self.labels.get(r) { '1' } else { '0' });
            out.push('\n');
        }
        out
    }
}

/// Reads a binary CSV. Every column except `label` becomes a feature; the
/// `sensitive` column stays among the features.
pub fn load_csv(path: impl AsRef<Path>, sensitive: &str, label: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_csv(&name, &text, sensitive, label)
}

pub fn parse_csv(name: &str, text: &str, sensitive: &str, label: &str) -> Result<Dataset> {
    let table = RawTable::parse(text).map_err(|e| match e {
        Error::EmptyFile(_) => Error::EmptyFile(name.to_string()),
        other => other,
    })?;
    let label_idx = table.column_index(label)?;
    let sens_idx = table.column_index(sensitive)?;
    let feature_idx: Vec<usize> = (0..table.headers.len()).filter(|&c| c != label_idx).collect();
    let feature_names = feature_idx.iter().map(|&c| table.headers[c].clone()).collect();
    let sensitive_col = feature_idx.iter().position(|&c| c == sens_idx).unwrap();

    let mut rows = Vec::with_capacity(table.rows.len());
    let mut labels = Vec::with_capacity(table.rows.len());
    for (r, raw) in table.rows.iter().enumerate() {
        let cell = |c: usize| -> Result<u8> {
            match raw[c].trim() {
                "0" => Ok(0),
                "1" => Ok(1),
                "" => Err(Error::MissingCell {
                    row: r,
                    column: table.headers[c].clone(),
                }),
                v => Err(Error::NonBinaryCell {
                    row: r,
                    column: table.headers[c].clone(),
                    value: v.to_string(),
                }),
            }
        };
        rows.push(feature_idx.iter().map(|&c| cell(c)).collect::<Result<Vec<u8>>>()?);
        labels.push(cell(label_idx)?);
    }
    Dataset::from_rows(name, feature_names, &rows, sensitive_col, &labels)
}

/// Untyped CSV content.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn parse(text: &str) -> Result<RawTable> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.is_empty() || headers.iter().all(String::is_empty) {
            return Err(Error::EmptyFile(String::new()));
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err(Error::EmptyFile(String::new()));
        }
        Ok(RawTable { headers, rows })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<RawTable> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RawTable::parse(&text).map_err(|e| match e {
            Error::EmptyFile(_) => Error::EmptyFile(path.display().to_string()),
            other => other,
        })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = &str> {
        self.rows.iter().map(move |r| r[c].as_str())
    }
}

pub const DEFAULT_CATEGORY_CAP: usize = 32;

/// One-hot encodes the named columns; other columns pass through unchanged.
///
/// Output columns are named `<column>=<category>` in first-appearance order.
pub fn one_hot(raw: &RawTable, categorical: &[&str], cap: usize) -> Result<RawTable> {
    let targets: Vec<usize> = categorical.iter().map(|c| raw.column_index(c)).collect::<Result<_>>()?;
    let mut headers = Vec::new();
    let mut plan: Vec<(usize, Option<Vec<String>>)> = Vec::new();
    for (c, h) in raw.headers.iter().enumerate() {
        if !targets.contains(&c) {
            headers.push(h.clone());
            plan.push((c, None));
            continue;
        }
        let mut cats: Vec<String> = Vec::new();
        for (r, v) in raw.column(c).enumerate() {
            if v.is_empty() {
                return Err(Error::MissingCell {
                    row: r,
                    column: h.clone(),
                });
            }
            if !cats.iter().any(|k| k == v) {
                cats.push(v.to_string());
            }
        }
        if cats.len() < 2 {
            return Err(Error::SingleCategory(h.clone()));
        }
        if cats.len() > cap {
            return Err(Error::TooManyCategories {
                column: h.clone(),
                count: cats.len(),
                cap,
            });
        }
        headers.extend(cats.iter().map(|k| format!("{h}={k}")));
        plan.push((c, Some(cats)));
    }
    let rows = raw
        .rows
        .iter()
        .map(|row| {
            let mut out = Vec::with_capacity(headers.len());
            for (c, cats) in &plan {
                match cats {
                    None => out.push(row[*c].clone()),
                    Some(cats) => out.extend(cats.iter().map(|k| if row[*c] == *k { "1" } else { "0" }.to_string())),
                }
            }
            out
        })
        .collect();
    Ok(RawTable { headers, rows })
}

/// Per-column preprocessing directive.
#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    OneHot,
    Buckets(Vec<f64>),
    Drop,
    /// Label column; cells equal to the given value (if any) map to 1.
    Label(Option<String>),
    /// Sensitive column; cells equal to the given value (if any) map to 1.
    Sensitive(Option<String>),
}

/// Column directives, one per line as `column: directive`. Lines starting
/// with `#` are comments. Columns without a directive must already be 0/1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Recipe {
    pub directives: Vec<(String, Directive)>,
}

impl Recipe {
    pub fn parse(text: &str) -> Result<Recipe> {
        let mut directives = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Recipe { line: i + 1, message };
            let (col, dir) = line
                .rsplit_once(':')
                .ok_or_else(|| err("expected `column: directive`".into()))?;
            let (col, dir) = (col.trim().to_string(), dir.trim());
            let (key, value) = match dir.split_once('=') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (dir, None),
            };
            let d = match (key, value) {
                ("onehot", None) => Directive::OneHot,
                ("drop", None) => Directive::Drop,
                ("label", v) => Directive::Label(v.map(str::to_string)),
                ("sensitive", v) => Directive::Sensitive(v.map(str::to_string)),
                ("buckets", Some(v)) => {
                    let inner = v
                        .strip_prefix('[')
                        .and_then(|v| v.strip_suffix(']'))
                        .ok_or_else(|| err("buckets must be written as [e1,e2,...]".into()))?;
                    let edges = inner
                        .split(',')
                        .map(|e| e.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| err(format!("bad bucket edge: {e}")))?;
                    if edges.is_empty() || edges.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(err("bucket edges must be strictly increasing".into()));
                    }
                    Directive::Buckets(edges)
                }
                _ => return Err(err(format!("unknown directive `{dir}`"))),
            };
            directives.push((col, d));
        }
        let count = |f: fn(&Directive) -> bool| directives.iter().filter(|(_, d)| f(d)).count();
        if count(|d| matches!(d, Directive::Label(_))) != 1 {
            return Err(Error::Recipe {
                line: 0,
                message: "exactly one `label` directive required".into(),
            });
        }
        if count(|d| matches!(d, Directive::Sensitive(_))) != 1 {
            return Err(Error::Recipe {
                line: 0,
                message: "exactly one `sensitive` directive required".into(),
            });
        }
        Ok(Recipe { directives })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Recipe> {
        let path = path.as_ref();
        Recipe::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    pub fn label_column(&self) -> &str {
        self.directives
            .iter()
            .find(|(_, d)| matches!(d, Directive::Label(_)))
            .map(|(c, _)| c.as_str())
            .unwrap()
    }

    pub fn sensitive_column(&self) -> &str {
        self.directives
            .iter()
            .find(|(_, d)| matches!(d, Directive::Sensitive(_)))
            .map(|(c, _)| c.as_str())
            .unwrap()
    }

    /// Applies the recipe, producing an all-binary table whose label and
    /// sensitive columns keep their original names.
    pub fn apply(&self, raw: &RawTable, cap: usize) -> Result<RawTable> {
        let lookup: HashMap<&str, &Directive> = self.directives.iter().map(|(c, d)| (c.as_str(), d)).collect();
        for (c, _) in &self.directives {
            raw.column_index(c)?;
        }
        let mut staged = raw.clone();
        // Numeric buckets and value-mapped columns first, then one-hot.
        let mut headers = Vec::new();
        let mut cols: Vec<Vec<String>> = Vec::new();
        let mut onehot = Vec::new();
        for (c, h) in raw.headers.iter().enumerate() {
            let values: Vec<&str> = raw.column(c).collect();
            if let Some(r) = values.iter().position(|v| v.is_empty()) {
                return Err(Error::MissingCell {
                    row: r,
                    column: h.clone(),
                });
            }
            match lookup.get(h.as_str()) {
                Some(Directive::Drop) => {}
                Some(Directive::OneHot) => {
                    onehot.push(h.clone());
                    headers.push(h.clone());
                    cols.push(values.iter().map(|v| v.to_string()).collect());
                }
                Some(Directive::Label(Some(pos))) | Some(Directive::Sensitive(Some(pos))) => {
                    headers.push(h.clone());
                    cols.push(
                        values
                            .iter()
                            .map(|v| if v == pos { "1" } else { "0" }.to_string())
                            .collect(),
                    );
                }
                Some(Directive::Buckets(edges)) => {
                    let nums = values
                        .iter()
                        .enumerate()
                        .map(|(r, v)| {
                            v.parse::<f64>().map_err(|_| Error::NonBinaryCell {
                                row: r,
                                column: h.clone(),
                                value: v.to_string(),
                            })
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    for b in 0..=edges.len() {
                        let lo = if b == 0 { None } else { Some(edges[b - 1]) };
                        let hi = edges.get(b).copied();
                        headers.push(match (lo, hi) {
                            (None, Some(hi)) => format!("{h}<{hi}"),
                            (Some(lo), Some(hi)) => format!("{lo}<={h}<{hi}"),
                            (Some(lo), None) => format!("{h}>={lo}"),
                            (None, None) => unreachable!(),
                        });
                        cols.push(
                            nums.iter()
                                .map(|&x| {
                                    let inside = lo.is_none_or(|lo| x >= lo) && hi.is_none_or(|hi| x < hi);
                                    if inside { "1" } else { "0" }.to_string()
                                })
                                .collect(),
                        );
                    }
                }
                Some(Directive::Label(None)) | Some(Directive::Sensitive(None)) | None => {
                    headers.push(h.clone());
                    cols.push(values.iter().map(|v| v.to_string()).collect());
                }
            }
        }
        staged.headers = headers;
        staged.rows = (0..raw.rows.len())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let names: Vec<&str> = onehot.iter().map(String::as_str).collect();
        one_hot(&staged, &names, cap)
    }
}

/// Fractions for the train / suing-group / test partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train: f64,
    pub suing: f64,
    pub test: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train: f64, suing: f64, test: f64, seed: u64) -> Result<SplitSpec> {
        let s = SplitSpec {
            train,
            suing,
            test,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for f in [self.train, self.suing, self.test] {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidSplit(format!("fraction {f} outside (0,1)")));
            }
        }
        let total = self.train + self.suing + self.test;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSplit(format!("fractions sum to {total}")));
        }
        Ok(())
    }
}

/// Seeded shuffle followed by a contiguous partition. Each part keeps the
/// original row order.
pub fn split_dataset(d: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset, Dataset)> {
    spec.validate()?;
    let n = d.n_rows();
    let n_train = (n as f64 * spec.train).round() as usize;
    let n_suing = (n as f64 * spec.suing).round() as usize;
    if n_train == 0 {
        return Err(Error::EmptyPart("train"));
    }
    if n_suing == 0 {
        return Err(Error::EmptyPart("suing"));
    }
    if n_train + n_suing >= n {
        return Err(Error::EmptyPart("test"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
    let part = |range: std::ops::Range<usize>| {
        let mut rows = order[range].to_vec();
        rows.sort_unstable();
        d.subset(&rows)
    };
    let train = part(0..n_train);
    let suing = part(n_train..n_train + n_suing);
    let test = part(n_train + n_suing..n);
    Ok((train, suing, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    const SMALL: &str = "a,b,s,y\n1,0,1,1\n0,1,0,0\n1,1,0,1\n0,0,1,0\n";

    #[test]
    fn parses_four_rows() {
        let d = parse_csv("small", SMALL, "s", "y").unwrap();
        assert_eq!(d.n_rows(), 4);
        assert_eq!(d.n_cols(), 3);
        assert_eq!(d.feature_names(), ["a", "b", "s"]);
        assert_eq!(d.sensitive_col(), 2);
        assert_eq!(d.label_vec(), vec![1, 0, 1, 0]);
        assert_eq!(d.row_ids(), [0, 1, 2, 3]);
        assert_eq!(d.row(2), vec![1, 1, 0]);
    }

    #[test]
    fn missing_column() {
        let text = "a,b,y\n1,0,1\n";
        assert_eq!(parse_csv("x", text, "s", "y"), Err(Error::MissingColumn("s".into())));
    }

    #[test]
    fn non_binary_and_missing_cells() {
        let text = "a,s,y\n1,0,1\n2,1,0\n";
        assert!(matches!(
            parse_csv("x", text, "s", "y"),
            Err(Error::NonBinaryCell { row: 1, .. })
        ));
        let text = "a,s,y\n1,,1\n";
        assert!(matches!(
            parse_csv("x", text, "s", "y"),
            Err(Error::MissingCell { row: 0, .. })
        ));
    }

    #[test]
    fn empty_file() {
        assert!(matches!(parse_csv("x", "", "s", "y"), Err(Error::EmptyFile(_))));
        assert!(matches!(parse_csv("x", "a,s,y\n", "s", "y"), Err(Error::EmptyFile(_))));
    }

    fn raw(text: &str) -> RawTable {
        RawTable::parse(text).unwrap()
    }

    #[test]
    fn one_hot_single_column() {
        let t = one_hot(&raw("color\nr\ng\nr\n"), &["color"], 32).unwrap();
        assert_eq!(t.headers, ["color=r", "color=g"]);
        let col = |c| t.column(c).collect::<Vec<_>>();
        assert_eq!(col(0), ["1", "0", "1"]);
        assert_eq!(col(1), ["0", "1", "0"]);
    }

    #[test]
    fn one_hot_counts_and_errors() {
        let t = one_hot(&raw("p,q\nx,u\ny,v\nz,u\n"), &["p", "q"], 32).unwrap();
        assert_eq!(t.headers.len(), 5);
        assert_eq!(
            one_hot(&raw("p\nx\nx\n"), &["p"], 32),
            Err(Error::SingleCategory("p".into()))
        );
        assert!(matches!(
            one_hot(&raw("p\nx\ny\nz\n"), &["p"], 2),
            Err(Error::TooManyCategories { count: 3, .. })
        ));
    }

    #[test]
    fn recipe_applies_directives() {
        let recipe = Recipe::parse(
            "# demo\nage: buckets=[30,50]\njob: onehot\nid: drop\nsex: sensitive=F\nincome: label=high\n",
        )
        .unwrap();
        let t = recipe
            .apply(
                &raw("id,age,job,sex,income\n1,25,a,F,low\n2,40,b,M,high\n3,61,a,M,high\n"),
                32,
            )
            .unwrap();
        assert_eq!(
            t.headers,
            ["age<30", "30<=age<50", "age>=50", "job=a", "job=b", "sex", "income"]
        );
        assert_eq!(t.rows[0], ["1", "0", "0", "1", "0", "1", "0"]);
        assert_eq!(t.rows[2], ["0", "0", "1", "1", "0", "0", "1"]);
        let text = {
            let mut s = t.headers.join(",") + "\n";
            for r in &t.rows {
                s += &(r.join(",") + "\n");
            }
            s
        };
        let d = parse_csv("x", &text, recipe.sensitive_column(), recipe.label_column()).unwrap();
        assert_eq!(d.n_cols(), 6);
    }

    #[test]
    fn recipe_rejects_bad_lines() {
        assert!(Recipe::parse("x: frobnicate\ny: label\ns: sensitive\n").is_err());
        assert!(Recipe::parse("x: buckets=[3,1]\ny: label\ns: sensitive\n").is_err());
        assert!(Recipe::parse("x: onehot\n").is_err());
    }

    fn ten_rows() -> Dataset {
        let rows: Vec<Vec<u8>> = (0..10).map(|i| vec![(i % 2) as u8, (i % 3 == 0) as u8]).collect();
        let labels: Vec<u8> = (0..10).map(|i| (i % 4 == 0) as u8).collect();
        Dataset::from_rows("t", vec!["a".into(), "s".into()], &rows, 1, &labels).unwrap()
    }

    #[test]
    fn split_sizes_and_determinism() {
        let d = ten_rows();
        let spec = SplitSpec::new(0.5, 0.3, 0.2, 7).unwrap();
        let (a, b, c) = split_dataset(&d, &spec).unwrap();
        assert_eq!((a.n_rows(), b.n_rows(), c.n_rows()), (5, 3, 2));
        let again = split_dataset(&d, &spec).unwrap();
        assert_eq!((a, b, c), again);
    }

    #[test]
    fn split_rejects_bad_fractions() {
        assert!(SplitSpec::new(0.5, 0.5, 0.0, 1).is_err());
        assert!(SplitSpec::new(0.5, 0.3, 0.3, 1).is_err());
        let d = ten_rows();
        let spec = SplitSpec {
            train: 0.9,
            suing: 0.05,
            test: 0.05,
            seed: 1,
        };
        assert_eq!(split_dataset(&d, &spec), Err(Error::EmptyPart("test")));
    }

    #[test]
    fn split_partitions_for_many_seeds() {
        let rows: Vec<Vec<u8>> = (0..100).map(|i| vec![(i % 2) as u8, (i % 7 == 0) as u8]).collect();
        let labels = vec![0u8; 100];
        let d = Dataset::from_rows("h", vec!["a".into(), "s".into()], &rows, 1, &labels).unwrap();
        for seed in 0..50 {
            let spec = SplitSpec::new(0.6, 0.25, 0.15, seed).unwrap();
            let (a, b, c) = split_dataset(&d, &spec).unwrap();
            let mut all = BTreeSet::new();
            for part in [&a, &b, &c] {
                for &id in part.row_ids() {
                    assert!(all.insert(id), "row {id} appears twice");
                    // Carried rows keep their content.
                    let p = part.row_ids().iter().position(|&x| x == id).unwrap();
                    assert_eq!(part.row(p), d.row(id));
                }
            }
            assert_eq!(all, (0..100).collect());
        }
    }
}
