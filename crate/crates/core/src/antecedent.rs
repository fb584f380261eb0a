//! Single-literal antecedents and their capture bitvectors.

use std::collections::HashSet;

use crate::bits::Bits;
use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negated,
}

/// A literal over one binary feature column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub feature: usize,
    pub polarity: Polarity,
}

impl Predicate {
    pub fn holds(&self, row: &[u8]) -> bool {
        (row[self.feature] == 1) == (self.polarity == Polarity::Positive)
    }

    pub fn capture_on(&self, d: &Dataset) -> Bits {
        let col = d.column(self.feature);
        match self.polarity {
            Polarity::Positive => col.clone(),
            Polarity::Negated => col.not(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Antecedent {
    pub id: usize,
    pub predicate: Predicate,
    pub name: String,
    /// Rows of the mining dataset satisfying the predicate.
    pub capture: Bits,
    pub support: f64,
}

/// The candidate antecedents fed to the search, with ids `0..len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntecedentSet {
    antecedents: Vec<Antecedent>,
    n_rows: usize,
    source: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningConfig {
    pub min_support: f64,
    pub include_negations: bool,
    pub include_sensitive: bool,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: 0.05,
            include_negations: true,
            include_sensitive: false,
        }
    }
}

/// Mines one literal per feature column (plus its negation when requested),
/// keeping those whose support and complement support both reach
/// `min_support`. The sensitive column is skipped.
pub fn mine_antecedents(d: &Dataset, min_support: f64, include_negations: bool) -> Result<AntecedentSet> {
    mine_antecedents_with(
        d,
        &MiningConfig {
            min_support,
            include_negations,
            include_sensitive: false,
        },
    )
}

pub fn mine_antecedents_with(d: &Dataset, cfg: &MiningConfig) -> Result<AntecedentSet> {
    if !(0.0..=0.5).contains(&cfg.min_support) {
        return Err(Error::InvalidSupport(cfg.min_support));
    }
    let n = d.n_rows();
    let mut antecedents = Vec::new();
    let mut seen: HashSet<Bits> = HashSet::new();
    for feature in 0..d.n_cols() {
        if feature == d.sensitive_col() && !cfg.include_sensitive {
            continue;
        }
        let polarities: &[Polarity] = if cfg.include_negations {
            &[Polarity::Positive, Polarity::Negated]
        } else {
            &[Polarity::Positive]
        };
        for &polarity in polarities {
            let predicate = Predicate { feature, polarity };
            let capture = predicate.capture_on(d);
            let hits = capture.count();
            let support = hits as f64 / n as f64;
            let complement = (n - hits) as f64 / n as f64;
            if support < cfg.min_support || complement < cfg.min_support {
                continue;
            }
            if !seen.insert(capture.clone()) {
                continue;
            }
            let fname = &d.feature_names()[feature];
            antecedents.push(Antecedent {
                id: antecedents.len(),
                predicate,
                name: match polarity {
                    Polarity::Positive => fname.clone(),
                    Polarity::Negated => format!("not {fname}"),
                },
                capture,
                support,
            });
        }
    }
    if antecedents.is_empty() {
        return Err(Error::NoAntecedents);
    }
    Ok(AntecedentSet {
        antecedents,
        n_rows: n,
        source: d.name.clone(),
    })
}

impl AntecedentSet {
    /// A set with no antecedents; only the default-only list is expressible.
    pub(crate) fn empty_for(d: &Dataset) -> AntecedentSet {
        AntecedentSet {
            antecedents: Vec::new(),
            n_rows: d.n_rows(),
            source: d.name.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.antecedents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antecedents.is_empty()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn get(&self, id: usize) -> Result<&Antecedent> {
        self.antecedents.get(id).ok_or(Error::UnknownAntecedent(id))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Antecedent> {
        self.antecedents.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        0..self.antecedents.len()
    }

    /// Recomputes every capture on another dataset with the same columns.
    pub fn rebind(&self, d: &Dataset) -> AntecedentSet {
        AntecedentSet {
            antecedents: self
                .antecedents
                .iter()
                .map(|a| {
                    let capture = a.predicate.capture_on(d);
                    let support = capture.count() as f64 / d.n_rows().max(1) as f64;
                    Antecedent {
                        capture,
                        support,
                        ..a.clone()
                    }
                })
                .collect(),
            n_rows: d.n_rows(),
            source: d.name.clone(),
        }
    }
}
