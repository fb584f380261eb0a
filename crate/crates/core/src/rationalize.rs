//! Model rationalization over a suing group and outcome rationalization
//! over per-subject neighborhoods.
//!
//! Both drivers relabel their rows with the black-box predictions, enumerate
//! fairness-regularized rule lists on them, and then pick a convenient one.
//! A surrogate "rationalizes" the black box when its unfairness is strictly
//! below the black box's on the same rows.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::antecedent::{mine_antecedents_with, AntecedentSet, MiningConfig};
use crate::audit::{flip_influence, LookupOracle, RuleListOracle};
use crate::data::Dataset;
use crate::enumerate::{enumerate_models_with, EnumeratedModel, EnumerationOptions};
use crate::error::{Error, Result};
use crate::fairness::{group_counts, unfairness_with, MetricKind, RateMode};
use crate::rule_list::{fidelity, predict, PredictionVector};
use crate::search::{optimize_over, SearchConfig};

/// Predictions of an external model, aligned with a dataset's rows.
#[derive(Debug, Clone, PartialEq)]
pub struct BlackBoxPredictions {
    pub preds: PredictionVector,
    pub source: String,
}

impl BlackBoxPredictions {
    pub fn new(preds: Vec<u8>, source: impl Into<String>) -> Result<Self> {
        if let Some(r) = preds.iter().position(|&v| v > 1) {
            return Err(Error::NonBinaryCell {
                row: r,
                column: "<prediction>".into(),
                value: preds[r].to_string(),
            });
        }
        Ok(BlackBoxPredictions {
            preds: PredictionVector(preds),
            source: source.into(),
        })
    }

    /// One prediction per line; a non-numeric first line is a header.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut preds = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let cell = line.split(',').next().unwrap_or("").trim();
            match cell {
                "0" => preds.push(0),
                "1" => preds.push(1),
                "" if line.trim().is_empty() => continue,
                _ if i == 0 => continue,
                v => {
                    return Err(Error::NonBinaryCell {
                        row: preds.len(),
                        column: "<prediction>".into(),
                        value: v.to_string(),
                    })
                }
            }
        }
        if preds.is_empty() {
            return Err(Error::EmptyFile(source.to_string()));
        }
        BlackBoxPredictions::new(preds, source)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        BlackBoxPredictions::parse(&text, &path.display().to_string())
    }

    pub fn check_aligned(&self, d: &Dataset) -> Result<()> {
        if self.preds.len() != d.n_rows() {
            return Err(Error::LengthMismatch {
                expected: d.n_rows(),
                actual: self.preds.len(),
            });
        }
        Ok(())
    }

    pub fn select(&self, rows: &[usize]) -> BlackBoxPredictions {
        BlackBoxPredictions {
            preds: PredictionVector(rows.iter().map(|&r| self.preds[r]).collect()),
            source: self.source.clone(),
        }
    }
}

/// Knobs shared by both drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalizeOptions {
    pub mining: MiningConfig,
    pub enumeration: EnumerationOptions,
}

impl RationalizeOptions {
    pub fn models(max_models: usize) -> Self {
        RationalizeOptions {
            mining: MiningConfig::default(),
            enumeration: EnumerationOptions::models(max_models),
        }
    }
}

/// Unfairness of `preds` on `d`, with `labels` used by label-dependent metrics.
pub fn unfairness_on(d: &Dataset, preds: &[u8], labels: &[u8], metric: MetricKind, mode: RateMode) -> Result<f64> {
    let counts = group_counts(preds, Some(labels), &d.sensitive_vec())?;
    unfairness_with(metric, &counts, mode)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalModel {
    pub index: usize,
    pub model: EnumeratedModel,
    /// Strictly fairer than the black box on the suing group.
    pub rationalizes: bool,
    pub test_fidelity: Option<f64>,
    pub test_unfairness: Option<f64>,
}

impl GlobalModel {
    pub fn fidelity(&self) -> f64 {
        self.model.fidelity
    }

    pub fn unfairness(&self) -> f64 {
        self.model.unfairness
    }

    pub fn len(&self) -> usize {
        self.model.model.len()
    }

    pub fn is_empty(&self) -> bool {
        self.model.model.is_empty()
    }
}

/// Sensitive-attribute rank under the flip audit, for the black box and the
/// selected surrogate.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitiveRanks {
    pub blackbox: usize,
    pub surrogate: usize,
    pub n_features: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalReport {
    pub config: SearchConfig,
    pub antecedents: AntecedentSet,
    pub models: Vec<GlobalModel>,
    pub baseline_unfairness: f64,
    pub selected: Option<usize>,
    /// False when the black box is already perfectly fair on the suing group.
    pub rationalization_possible: bool,
    pub sensitive_ranks: Option<SensitiveRanks>,
    pub blackbox_test_unfairness: Option<f64>,
}

impl GlobalReport {
    pub fn selected_model(&self) -> Option<&GlobalModel> {
        self.selected.map(|i| &self.models[i])
    }
}

pub fn laundryml_global(
    x: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    max_models: usize,
) -> Result<GlobalReport> {
    laundryml_global_with(x, b, cfg, &RationalizeOptions::models(max_models))
}

pub fn laundryml_global_with(
    x: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    opts: &RationalizeOptions,
) -> Result<GlobalReport> {
    b.check_aligned(x)?;
    let t = x.with_labels(&b.preds)?;
    let ants = mine_antecedents_with(&t, &opts.mining)?;
    let enumerated = enumerate_models_with(&ants, &t, cfg, &opts.enumeration)?;
    let baseline = unfairness_on(&t, &b.preds, &b.preds, cfg.metric, cfg.rate_mode)?;
    let mut models = Vec::with_capacity(enumerated.len());
    for (index, model) in enumerated.into_iter().enumerate() {
        models.push(GlobalModel {
            index,
            rationalizes: model.unfairness < baseline,
            model,
            test_fidelity: None,
            test_unfairness: None,
        });
    }
    let mut report = GlobalReport {
        config: *cfg,
        antecedents: ants,
        models,
        baseline_unfairness: baseline,
        selected: None,
        rationalization_possible: baseline > 0.0,
        sensitive_ranks: None,
        blackbox_test_unfairness: None,
    };
    report.selected = select_best_global(&report, baseline);
    if let Some(sel) = report.selected_model() {
        let bb = LookupOracle::new(&t, &b.preds)?;
        let bb_rank = flip_influence(&bb, &t, &b.source)?;
        let surrogate = RuleListOracle {
            list: &sel.model.model,
            ants: &report.antecedents,
        };
        let sur_rank = flip_influence(&surrogate, &t, "surrogate")?;
        let s = t.sensitive_col();
        report.sensitive_ranks = Some(SensitiveRanks {
            blackbox: bb_rank.rank_of(s),
            surrogate: sur_rank.rank_of(s),
            n_features: t.n_cols(),
        });
    }
    Ok(report)
}

/// Fills in held-out fidelity and unfairness for every model.
pub fn evaluate_on_test(report: &mut GlobalReport, test: &Dataset, b: &BlackBoxPredictions) -> Result<()> {
    b.check_aligned(test)?;
    let metric = report.config.metric;
    let mode = report.config.rate_mode;
    let ants = report.antecedents.rebind(test);
    report.blackbox_test_unfairness = Some(unfairness_on(test, &b.preds, &b.preds, metric, mode)?);
    for m in &mut report.models {
        let preds = predict(&m.model.model, &ants, test)?;
        m.test_fidelity = Some(fidelity(&preds, &b.preds)?);
        m.test_unfairness = Some(unfairness_on(test, &preds, &b.preds, metric, mode)?);
    }
    Ok(())
}

/// Keeps models at most half as unfair as the black box and returns the most
/// faithful one (ties: lower objective, then lower index).
pub fn select_best_global(report: &GlobalReport, baseline_unfairness: f64) -> Option<usize> {
    let limit = baseline_unfairness / 2.0;
    report
        .models
        .iter()
        .filter(|m| m.unfairness() <= limit)
        .min_by(|a, b| {
            b.fidelity()
                .partial_cmp(&a.fidelity())
                .unwrap()
                .then(a.model.objective.partial_cmp(&b.model.objective).unwrap())
                .then(a.index.cmp(&b.index))
        })
        .map(|m| m.index)
}

/// `center` followed by its `k − 1` nearest rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub center: usize,
    pub members: Vec<usize>,
    pub k: usize,
}

/// Default neighborhood size: 10% of the rows, rounded up.
pub fn default_k(n_rows: usize) -> usize {
    (n_rows as f64 * 0.10).ceil().max(1.0) as usize
}

/// `k` rows closest to row `x` in Hamming distance over the binary features
/// (sensitive column excluded unless `include_sensitive`). The center always
/// comes first; other ties go to the lower row index.
pub fn knn_neighborhood(x: usize, t: &Dataset, k: usize) -> Result<Neighborhood> {
    knn_neighborhood_with(x, t, k, false)
}

pub fn knn_neighborhood_with(x: usize, t: &Dataset, k: usize, include_sensitive: bool) -> Result<Neighborhood> {
    let n = t.n_rows();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if x >= n {
        return Err(Error::KOutOfRange { k: x, n });
    }
    let mut dist = vec![0u32; n];
    for c in 0..t.n_cols() {
        if c == t.sensitive_col() && !include_sensitive {
            continue;
        }
        let col = t.column(c);
        let xv = col.get(x);
        for (r, d) in dist.iter_mut().enumerate() {
            *d += (col.get(r) != xv) as u32;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&r| r != x).collect();
    order.sort_by_key(|&r| (dist[r], r));
    let mut members = Vec::with_capacity(k);
    members.push(x);
    members.extend(order.into_iter().take(k - 1));
    Ok(Neighborhood { center: x, members, k })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalModel {
    pub index: usize,
    pub model: EnumeratedModel,
    pub prediction_at_center: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalOutcome {
    pub subject: usize,
    pub row_id: usize,
    pub neighborhood: Neighborhood,
    pub blackbox_outcome: u8,
    pub blackbox_unfairness: f64,
    pub models_enumerated: usize,
    /// Agreeing model with the lowest neighborhood unfairness.
    pub best: Option<LocalModel>,
    pub antecedents: Option<AntecedentSet>,
}

impl LocalOutcome {
    pub fn rationalizes(&self) -> bool {
        self.best
            .as_ref()
            .is_some_and(|m| m.model.unfairness < self.blackbox_unfairness)
    }
}

/// Black-box unfairness inside `x`'s neighborhood, if both groups occur.
pub fn neighborhood_unfairness(
    nb: &Neighborhood,
    t: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
) -> Result<f64> {
    let local = t.subset(&nb.members);
    let bl = b.select(&nb.members);
    unfairness_on(&local, &bl.preds, &bl.preds, cfg.metric, cfg.rate_mode)
}

pub fn laundryml_local(
    x: usize,
    t: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    k: usize,
    max_models: usize,
) -> Result<LocalOutcome> {
    laundryml_local_with(x, t, b, cfg, k, &RationalizeOptions::models(max_models))
}

pub fn laundryml_local_with(
    x: usize,
    t: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    k: usize,
    opts: &RationalizeOptions,
) -> Result<LocalOutcome> {
    b.check_aligned(t)?;
    let nb = knn_neighborhood(x, t, k)?;
    let bl = b.select(&nb.members);
    let tx = t.subset(&nb.members).with_labels(&bl.preds)?;
    let blackbox_unfairness = unfairness_on(&tx, &bl.preds, &bl.preds, cfg.metric, cfg.rate_mode)?;
    let (ants, models) = match mine_antecedents_with(&tx, &opts.mining) {
        Ok(ants) => {
            let models = enumerate_models_with(&ants, &tx, cfg, &opts.enumeration)?;
            (ants, models)
        }
        Err(Error::NoAntecedents) => {
            // Every feature is constant here: only the default-only list exists.
            let ants = AntecedentSet::empty_for(&tx);
            let r = optimize_over(&ants, &tx, cfg, &[])?;
            let m = EnumeratedModel {
                model: r.best,
                objective: r.objective,
                misc: r.misc,
                unfairness: r.unfairness,
                fidelity: 1.0 - r.misc,
                certified_optimal: r.certified_optimal,
            };
            (ants, vec![m])
        }
        Err(e) => return Err(e),
    };
    let center_row = tx.row(0);
    let outcome = bl.preds[0];
    let mut best: Option<LocalModel> = None;
    for (index, m) in models.iter().enumerate() {
        let p = m.model.predict_row(&ants, &center_row)?;
        if p != outcome {
            continue;
        }
        let better = match &best {
            None => true,
            Some(cur) => {
                m.unfairness < cur.model.unfairness
                    || (m.unfairness == cur.model.unfairness && m.fidelity > cur.model.fidelity)
            }
        };
        if better {
            best = Some(LocalModel {
                index,
                model: m.clone(),
                prediction_at_center: p,
            });
        }
    }
    Ok(LocalOutcome {
        subject: x,
        row_id: t.row_ids()[x],
        neighborhood: nb,
        blackbox_outcome: outcome,
        blackbox_unfairness,
        models_enumerated: models.len(),
        best,
        antecedents: Some(ants),
    })
}

/// Which subjects get an outcome rationalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CohortSpec {
    pub minority: u8,
    pub negative: u8,
    /// Subjects qualify when the neighborhood black-box unfairness exceeds this.
    pub threshold: f64,
}

impl Default for CohortSpec {
    fn default() -> Self {
        CohortSpec {
            minority: 0,
            negative: 0,
            threshold: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalReport {
    pub beta: f64,
    pub subjects: Vec<LocalOutcome>,
    pub coverage: f64,
}

impl LocalReport {
    /// Sorted best-model unfairness values with cumulative fractions, over
    /// subjects that received an agreeing model.
    pub fn cdf(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<f64> = self
            .subjects
            .iter()
            .filter_map(|s| s.best.as_ref().map(|m| m.model.unfairness))
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = v.len() as f64;
        v.iter().enumerate().map(|(i, &u)| (u, (i + 1) as f64 / n)).collect()
    }
}

/// Rows that are rejected members of the minority group with a neighborhood
/// black-box unfairness above the threshold. Neighborhoods missing a group
/// are skipped.
pub fn select_cohort(
    t: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    k: usize,
    spec: &CohortSpec,
) -> Result<Vec<usize>> {
    b.check_aligned(t)?;
    let s = t.sensitive_vec();
    let candidates: Vec<usize> = (0..t.n_rows())
        .filter(|&x| b.preds[x] == spec.negative && s[x] == spec.minority)
        .collect();
    let verdicts = candidates
        .par_iter()
        .map(|&x| -> Result<bool> {
            let nb = knn_neighborhood(x, t, k)?;
            match neighborhood_unfairness(&nb, t, b, cfg) {
                Ok(u) => Ok(u > spec.threshold),
                Err(Error::EmptyGroup(_)) | Err(Error::UndefinedRate { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(candidates
        .into_iter()
        .zip(verdicts)
        .filter_map(|(x, keep)| keep.then_some(x))
        .collect())
}

/// Runs the local driver for every cohort subject. Subjects are processed in
/// parallel on the current rayon pool; results keep cohort order.
pub fn local_cohort(
    t: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    k: usize,
    max_models: usize,
    spec: &CohortSpec,
) -> Result<LocalReport> {
    local_cohort_with(t, b, cfg, k, &RationalizeOptions::models(max_models), spec)
}

pub fn local_cohort_with(
    t: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    k: usize,
    opts: &RationalizeOptions,
    spec: &CohortSpec,
) -> Result<LocalReport> {
    let cohort = select_cohort(t, b, cfg, k, spec)?;
    local_cohort_for(t, b, cfg, k, opts, &cohort)
}

/// As [`local_cohort_with`] for an already selected cohort.
pub fn local_cohort_for(
    t: &Dataset,
    b: &BlackBoxPredictions,
    cfg: &SearchConfig,
    k: usize,
    opts: &RationalizeOptions,
    cohort: &[usize],
) -> Result<LocalReport> {
    if cohort.is_empty() {
        return Err(Error::EmptyCohort);
    }
    let subjects = cohort
        .par_iter()
        .map(|&x| {
            let mut o = laundryml_local_with(x, t, b, cfg, k, opts)?;
            o.antecedents = None;
            Ok(o)
        })
        .collect::<Result<Vec<_>>>()?;
    let covered = subjects.iter().filter(|s| s.best.is_some()).count();
    Ok(LocalReport {
        beta: cfg.beta,
        coverage: covered as f64 / subjects.len() as f64,
        subjects,
    })
}
