//! Best-first enumeration of distinct rule lists by re-solving restricted
//! subproblems (Lawler's scheme).
//!
//! Each heap entry holds the optimal list over an allowed antecedent set `S`
//! together with a set `F` of antecedents that must not be branched on
//! again. Extracting `(m, S, F)` emits `m` if unseen, then for every
//! antecedent `t` of `m` not in `F` pushes the optimum over `S ∖ {t}` and
//! adds `t` to `F` for the following siblings.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use crate::antecedent::AntecedentSet;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rule_list::RuleList;
use crate::search::{optimize_over, rank_cmp, SearchConfig, SearchResult};

/// One emitted model. `fidelity` is agreement with the dataset labels,
/// which in rationalization runs are the black-box predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedModel {
    pub model: RuleList,
    pub objective: f64,
    pub misc: f64,
    pub unfairness: f64,
    pub fidelity: f64,
    pub certified_optimal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_models: usize,
    pub time_limit: Option<Duration>,
}

impl EnumerationOptions {
    pub fn models(max_models: usize) -> Self {
        EnumerationOptions {
            max_models,
            time_limit: None,
        }
    }
}

/// A restricted problem together with its solution.
#[derive(Debug, Clone)]
pub struct Subproblem {
    pub result: SearchResult,
    pub allowed: Vec<usize>,
    pub forbidden: BTreeSet<usize>,
    ids: Vec<usize>,
    seq: u64,
}

impl Subproblem {
    fn new(result: SearchResult, allowed: Vec<usize>, forbidden: BTreeSet<usize>, seq: u64) -> Self {
        let ids = result.best.antecedent_ids();
        Subproblem {
            result,
            allowed,
            forbidden,
            ids,
            seq,
        }
    }
}

impl PartialEq for Subproblem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Subproblem {}

impl PartialOrd for Subproblem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subproblem {
    // Reversed so that `BinaryHeap` pops the smallest objective first.
    fn cmp(&self, other: &Self) -> Ordering {
        rank_cmp(other.result.objective, &other.ids, self.result.objective, &self.ids)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Heap of pending subproblems plus the models emitted so far.
#[derive(Debug, Default)]
pub struct EnumerationState {
    heap: BinaryHeap<Subproblem>,
    pub models: Vec<EnumeratedModel>,
    seen: HashSet<String>,
    pushed: u64,
}

impl EnumerationState {
    fn push(&mut self, result: SearchResult, allowed: Vec<usize>, forbidden: BTreeSet<usize>) {
        self.heap.push(Subproblem::new(result, allowed, forbidden, self.pushed));
        self.pushed += 1;
    }

    pub fn pending(&self) -> usize {
        self.heap.len()
    }

    fn emit(&mut self, r: &SearchResult) {
        if self.seen.insert(r.best.canonical_form()) {
            self.models.push(EnumeratedModel {
                model: r.best.clone(),
                objective: r.objective,
                misc: r.misc,
                unfairness: r.unfairness,
                fidelity: 1.0 - r.misc,
                certified_optimal: r.certified_optimal,
            });
        }
    }
}

/// Emits up to `max_models` distinct rule lists in non-decreasing objective
/// order. Returns fewer when the branching tree is exhausted.
pub fn enumerate_models(
    ants: &AntecedentSet,
    d: &Dataset,
    cfg: &SearchConfig,
    max_models: usize,
) -> Result<Vec<EnumeratedModel>> {
    enumerate_models_with(ants, d, cfg, &EnumerationOptions::models(max_models))
}

pub fn enumerate_models_with(
    ants: &AntecedentSet,
    d: &Dataset,
    cfg: &SearchConfig,
    opts: &EnumerationOptions,
) -> Result<Vec<EnumeratedModel>> {
    if opts.max_models == 0 {
        return Err(Error::InvalidConfig("max_models must be at least 1".into()));
    }
    if ants.is_empty() {
        return Err(Error::NoAntecedents);
    }
    let started = Instant::now();
    let all: Vec<usize> = ants.ids().collect();
    let mut state = EnumerationState::default();
    let root = optimize_over(ants, d, cfg, &all)?;
    state.push(root, all, BTreeSet::new());

    while let Some(sub) = state.heap.pop() {
        state.emit(&sub.result);
        if state.models.len() >= opts.max_models {
            break;
        }
        if opts.time_limit.is_some_and(|t| started.elapsed() >= t) {
            break;
        }
        let mut forbidden = sub.forbidden.clone();
        for &t in &sub.ids {
            if forbidden.contains(&t) {
                continue;
            }
            let allowed: Vec<usize> = sub.allowed.iter().copied().filter(|&a| a != t).collect();
            let child = optimize_over(ants, d, cfg, &allowed)?;
            state.push(child, allowed, forbidden.clone());
            forbidden.insert(t);
        }
    }
    Ok(state.models)
}
