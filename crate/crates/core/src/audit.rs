//! Attribute-flip influence ranking.
//!
//! The score of feature `j` is the mean, over rows, of
//! `pred(row with j = 1) − pred(row with j = 0)`. It is a simple
//! perturbation estimator, not FairML's orthogonal projection; reports label
//! it `flip`.

use std::collections::HashMap;

use crate::antecedent::AntecedentSet;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rule_list::RuleList;

pub const ESTIMATOR: &str = "flip";

/// Anything that can label a binary row. `None` means the row is unknown.
pub trait RowOracle {
    fn predict(&self, row: &[u8]) -> Option<u8>;
}

pub struct RuleListOracle<'a> {
    pub list: &'a RuleList,
    pub ants: &'a AntecedentSet,
}

impl RowOracle for RuleListOracle<'_> {
    fn predict(&self, row: &[u8]) -> Option<u8> {
        self.list.predict_row(self.ants, row).ok()
    }
}

/// Black-box access through recorded predictions, keyed by row content.
/// The first prediction recorded for a row wins.
pub struct LookupOracle {
    table: HashMap<Vec<u8>, u8>,
}

impl LookupOracle {
    pub fn new(d: &Dataset, preds: &[u8]) -> Result<Self> {
        if preds.len() != d.n_rows() {
            return Err(Error::LengthMismatch {
                expected: d.n_rows(),
                actual: preds.len(),
            });
        }
        let mut table = HashMap::new();
        for (r, &p) in preds.iter().enumerate() {
            table.entry(d.row(r)).or_insert(p);
        }
        Ok(LookupOracle { table })
    }
}

impl RowOracle for LookupOracle {
    fn predict(&self, row: &[u8]) -> Option<u8> {
        self.table.get(row).copied()
    }
}

impl<F: Fn(&[u8]) -> Option<u8>> RowOracle for F {
    fn predict(&self, row: &[u8]) -> Option<u8> {
        self(row)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Influence {
    pub feature: usize,
    pub name: String,
    pub score: f64,
    /// 1 is the most influential.
    pub rank: usize,
    /// Rows whose two flipped versions were both answered.
    pub rows_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceRanking {
    pub model_tag: String,
    /// In feature order.
    pub entries: Vec<Influence>,
}

impl InfluenceRanking {
    pub fn rank_of(&self, feature: usize) -> usize {
        self.entries[feature].rank
    }
}

pub fn flip_influence(oracle: &dyn RowOracle, d: &Dataset, model_tag: impl Into<String>) -> Result<InfluenceRanking> {
    let m = d.n_cols();
    let mut entries = Vec::with_capacity(m);
    let mut any = false;
    for j in 0..m {
        let mut total = 0i64;
        let mut used = 0usize;
        for r in 0..d.n_rows() {
            let mut row = d.row(r);
            row[j] = 1;
            let hi = oracle.predict(&row);
            row[j] = 0;
            let lo = oracle.predict(&row);
            if let (Some(hi), Some(lo)) = (hi, lo) {
                total += hi as i64 - lo as i64;
                used += 1;
            }
        }
        any |= used > 0;
        entries.push(Influence {
            feature: j,
            name: d.feature_names()[j].clone(),
            score: if used == 0 { 0.0 } else { total as f64 / used as f64 },
            rank: 0,
            rows_used: used,
        });
    }
    if !any {
        return Err(Error::OracleMissingRow);
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        entries[b]
            .score
            .abs()
            .partial_cmp(&entries[a].score.abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    for (rank, &j) in order.iter().enumerate() {
        entries[j].rank = rank + 1;
    }
    Ok(InfluenceRanking {
        model_tag: model_tag.into(),
        entries,
    })
}
