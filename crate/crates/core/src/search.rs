//! Exact branch-and-bound over rule lists for the objective
//! `(1 − β)·misc + β·unfairness + λ·K`.
//!
//! The search walks the prefix trie depth-first with children in ascending
//! antecedent id, so prefixes are visited in lexicographic order. Rule
//! consequents and the default are the majority label of the rows they
//! decide (ties predict 0). Among lists whose objectives agree within
//! [`OBJECTIVE_TIE_EPS`], the shorter one wins, then the lexicographically
//! smaller id sequence.
//!
//! Unfairness is not monotone in the prefix, so every bound only uses the
//! `(1 − β)·misc + λ·K` part and takes the unfairness term as 0.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::antecedent::AntecedentSet;
use crate::bits::Bits;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fairness::{check_defined, unfairness_with, Group, GroupCounts, MetricKind, RateMode};
use crate::rule_list::{Rule, RuleList};

pub const OBJECTIVE_TIE_EPS: f64 = 1e-12;

/// Optional pruning rules. Turning any of them off never changes the
/// returned model, only how many prefixes get evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundSwitches {
    /// Children of a prefix pay at least one more `λ`.
    pub lookahead: bool,
    /// Skip rules that capture nothing, and with `β = 0` rules that classify
    /// fewer than `λ·n` of their captured rows correctly.
    pub support: bool,
    /// Skip a prefix when a permutation of it decides the same rows with no
    /// more errors (and, for `β > 0`, identical per-group confusion counts).
    pub permutation: bool,
    /// Rows that no allowed antecedent can tell apart but that carry
    /// different labels contribute unavoidable errors.
    pub equivalent_points: bool,
}

impl BoundSwitches {
    pub const ALL_ON: BoundSwitches = BoundSwitches {
        lookahead: true,
        support: true,
        permutation: true,
        equivalent_points: true,
    };
    pub const ALL_OFF: BoundSwitches = BoundSwitches {
        lookahead: false,
        support: false,
        permutation: false,
        equivalent_points: false,
    };
}

impl Default for BoundSwitches {
    fn default() -> Self {
        BoundSwitches::ALL_ON
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub lambda: f64,
    pub beta: f64,
    pub metric: MetricKind,
    pub rate_mode: RateMode,
    pub max_length: usize,
    pub node_budget: u64,
    pub bounds: BoundSwitches,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            lambda: 0.005,
            beta: 0.0,
            metric: MetricKind::DemographicParity,
            rate_mode: RateMode::Strict,
            max_length: 5,
            node_budget: 10_000_000,
            bounds: BoundSwitches::ALL_ON,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidConfig(format!("lambda {} must be >= 0", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidConfig(format!("beta {} outside [0, 1]", self.beta)));
        }
        if self.node_budget == 0 {
            return Err(Error::BudgetZero);
        }
        Ok(())
    }
}

pub fn objective(misc: f64, unfairness: f64, k: usize, cfg: &SearchConfig) -> f64 {
    (1.0 - cfg.beta) * misc + cfg.beta * unfairness + cfg.lambda * k as f64
}

/// Total order used for ties: objective (within [`OBJECTIVE_TIE_EPS`]),
/// then length, then the antecedent id sequence.
pub fn rank_cmp(a_obj: f64, a_ids: &[usize], b_obj: f64, b_ids: &[usize]) -> Ordering {
    if (a_obj - b_obj).abs() > OBJECTIVE_TIE_EPS {
        return a_obj.partial_cmp(&b_obj).unwrap_or(Ordering::Equal);
    }
    a_ids.len().cmp(&b_ids.len()).then_with(|| a_ids.cmp(b_ids))
}

/// A node of the prefix trie.
#[derive(Debug, Clone, PartialEq)]
pub struct Prefix {
    pub ids: Vec<usize>,
    pub consequents: Vec<u8>,
    /// Rows decided by some rule of the prefix.
    pub captured: Bits,
    /// Errors on captured rows, divided by the dataset size.
    pub misc_captured: f64,
}

impl Prefix {
    /// Builds the prefix for an id sequence with majority consequents.
    pub fn new(ants: &AntecedentSet, d: &Dataset, ids: &[usize]) -> Result<Prefix> {
        let n = d.n_rows();
        let mut captured = Bits::zeros(n);
        let mut errors = 0;
        let mut consequents = Vec::with_capacity(ids.len());
        for &id in ids {
            let cap = ants.get(id)?.predicate.capture_on(d).and_not(&captured);
            let pos = cap.and_count(d.labels());
            let neg = cap.count() - pos;
            let q = (pos > neg) as u8;
            errors += pos.min(neg);
            consequents.push(q);
            captured = captured.or(&cap);
        }
        Ok(Prefix {
            ids: ids.to_vec(),
            consequents,
            captured,
            misc_captured: errors as f64 / n as f64,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Lower bound on the objective of every rule list that starts with `p`.
/// With lookahead on it bounds the strict extensions of `p` instead.
pub fn lower_bound(p: &Prefix, cfg: &SearchConfig) -> f64 {
    let k = p.len() + cfg.bounds.lookahead as usize;
    (1.0 - cfg.beta) * p.misc_captured + cfg.lambda * k as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best: RuleList,
    pub objective: f64,
    pub misc: f64,
    pub unfairness: f64,
    pub nodes_evaluated: u64,
    /// False when the node budget ran out before the trie was exhausted.
    pub certified_optimal: bool,
}

/// Finds the rule list over `allowed ∖ forbidden` minimizing the objective.
pub fn corels_optimize(
    ants: &AntecedentSet,
    d: &Dataset,
    cfg: &SearchConfig,
    allowed: &BTreeSet<usize>,
    forbidden: &BTreeSet<usize>,
) -> Result<SearchResult> {
    if let Some(&id) = allowed.iter().chain(forbidden).find(|&&id| id >= ants.len()) {
        return Err(Error::UnknownAntecedent(id));
    }
    if let Some(id) = allowed.intersection(forbidden).next() {
        return Err(Error::InvalidConfig(format!(
            "antecedent {id} is both allowed and forbidden"
        )));
    }
    if allowed.is_empty() {
        return Err(Error::NoAntecedentsAllowed);
    }
    let ids: Vec<usize> = allowed.iter().copied().collect();
    optimize_over(ants, d, cfg, &ids)
}

/// Search over an explicit id list, which may be empty (the result is then
/// the default-only list).
pub(crate) fn optimize_over(
    ants: &AntecedentSet,
    d: &Dataset,
    cfg: &SearchConfig,
    ids: &[usize],
) -> Result<SearchResult> {
    cfg.validate()?;
    let ctx = Context::new(ants, d, cfg, ids)?;
    Ok(ctx.run())
}

struct Context<'a> {
    cfg: &'a SearchConfig,
    n: usize,
    labels: &'a Bits,
    g1: Bits,
    g0: Bits,
    ids: Vec<usize>,
    captures: Vec<&'a Bits>,
    /// Mixed-label classes of rows indistinguishable by the allowed antecedents.
    mixed_classes: Vec<Bits>,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    errors: usize,
    groups: [Group; 2],
}

struct State {
    path: Vec<usize>,
    best_obj: f64,
    best_ids: Vec<usize>,
    best_misc: f64,
    best_unf: f64,
    nodes: u64,
    exhausted_budget: bool,
    seen_sets: HashMap<(Vec<u64>, [usize; 4]), usize>,
    error: Option<Error>,
}

impl<'a> Context<'a> {
    fn new(ants: &'a AntecedentSet, d: &'a Dataset, cfg: &'a SearchConfig, ids: &[usize]) -> Result<Self> {
        if ants.n_rows() != d.n_rows() {
            return Err(Error::LengthMismatch {
                expected: d.n_rows(),
                actual: ants.n_rows(),
            });
        }
        let s = d.sensitive_vec();
        for v in 0..2u8 {
            if !s.contains(&v) {
                return Err(Error::EmptyGroup(v));
            }
        }
        if cfg.metric.needs_labels() {
            check_defined(cfg.metric, &d.label_vec(), &s, cfg.rate_mode)?;
        }
        let captures = ids
            .iter()
            .map(|&id| ants.get(id).map(|a| &a.capture))
            .collect::<Result<Vec<_>>>()?;
        let n = d.n_rows();
        let mut ctx = Context {
            cfg,
            n,
            labels: d.labels(),
            g1: d.sensitive().clone(),
            g0: d.sensitive().not(),
            ids: ids.to_vec(),
            captures,
            mixed_classes: Vec::new(),
        };
        if cfg.bounds.equivalent_points {
            ctx.mixed_classes = ctx.equivalence_classes();
        }
        Ok(ctx)
    }

    fn equivalence_classes(&self) -> Vec<Bits> {
        let mut classes: HashMap<Vec<bool>, Vec<usize>> = HashMap::new();
        for r in 0..self.n {
            let sig = self.captures.iter().map(|c| c.get(r)).collect();
            classes.entry(sig).or_default().push(r);
        }
        let mut mixed: Vec<Bits> = classes
            .into_values()
            .filter(|rows| {
                let pos = rows.iter().filter(|&&r| self.labels.get(r)).count();
                pos > 0 && pos < rows.len()
            })
            .map(|rows| {
                let mut b = Bits::zeros(self.n);
                rows.iter().for_each(|&r| b.set(r));
                b
            })
            .collect();
        mixed.sort();
        mixed
    }

    fn equivalent_errors(&self, remaining: &Bits) -> usize {
        self.mixed_classes
            .iter()
            .map(|c| {
                let u = c.and_count(remaining);
                if u == 0 {
                    return 0;
                }
                let p = c.and2_count(remaining, self.labels);
                p.min(u - p)
            })
            .sum()
    }

    /// Adds rows `rows` predicted as `q` to the tally.
    fn decide(&self, tally: &mut Tally, rows: &Bits, q: u8) -> usize {
        let mut errors = 0;
        for (g, mask) in [(0, &self.g0), (1, &self.g1)] {
            let n_g = rows.and_count(mask);
            let pos_g = rows.and2_count(mask, self.labels);
            let grp = &mut tally.groups[g];
            grp.n += n_g;
            if q == 1 {
                grp.predicted_positive += n_g;
                grp.tp += pos_g;
                grp.fp += n_g - pos_g;
                errors += n_g - pos_g;
            } else {
                grp.tn += n_g - pos_g;
                grp.fn_ += pos_g;
                errors += pos_g;
            }
        }
        tally.errors += errors;
        errors
    }

    fn majority(&self, rows: &Bits) -> (u8, usize, usize) {
        let pos = rows.and_count(self.labels);
        let neg = rows.count() - pos;
        ((pos > neg) as u8, pos, neg)
    }

    fn run(&self) -> SearchResult {
        let mut st = State {
            path: Vec::new(),
            best_obj: f64::INFINITY,
            best_ids: Vec::new(),
            best_misc: 0.0,
            best_unf: 0.0,
            nodes: 0,
            exhausted_budget: false,
            seen_sets: HashMap::new(),
            error: None,
        };
        let all = Bits::ones(self.n);
        self.visit(&mut st, &all, Tally::default());
        debug_assert!(st.error.is_none());
        let best = self.materialize(&st.best_ids);
        SearchResult {
            best,
            objective: st.best_obj,
            misc: st.best_misc,
            unfairness: st.best_unf,
            nodes_evaluated: st.nodes,
            certified_optimal: !st.exhausted_budget,
        }
    }

    fn materialize(&self, ids: &[usize]) -> RuleList {
        let mut remaining = Bits::ones(self.n);
        let mut rules = Vec::with_capacity(ids.len());
        for &id in ids {
            let k = self.ids.iter().position(|&x| x == id).unwrap();
            let cap = self.captures[k].and(&remaining);
            rules.push(Rule {
                antecedent: id,
                consequent: self.majority(&cap).0,
            });
            remaining = remaining.and_not(&cap);
        }
        RuleList::new(rules, self.majority(&remaining).0).unwrap()
    }

    fn visit(&self, st: &mut State, remaining: &Bits, captured: Tally) {
        if st.exhausted_budget || st.error.is_some() {
            return;
        }
        if st.nodes >= self.cfg.node_budget {
            st.exhausted_budget = true;
            return;
        }
        st.nodes += 1;
        let k = st.path.len();
        let cfg = self.cfg;

        // The prefix as a complete list.
        let mut full = captured;
        let (default, _, _) = self.majority(remaining);
        self.decide(&mut full, remaining, default);
        let misc = full.errors as f64 / self.n as f64;
        let counts = GroupCounts {
            groups: full.groups,
            labeled: true,
        };
        let unf = match unfairness_with(cfg.metric, &counts, cfg.rate_mode) {
            Ok(u) => u,
            Err(e) => {
                st.error = Some(e);
                return;
            }
        };
        let obj = objective(misc, unf, k, cfg);
        if rank_cmp(obj, &st.path, st.best_obj, &st.best_ids) == Ordering::Less {
            st.best_obj = obj;
            st.best_ids = st.path.clone();
            st.best_misc = misc;
            st.best_unf = unf;
        }

        if k >= cfg.max_length {
            return;
        }
        let mut floor_errors = captured.errors;
        if cfg.bounds.equivalent_points {
            floor_errors += self.equivalent_errors(remaining);
        }
        let child_k = k + cfg.bounds.lookahead as usize;
        let lb = (1.0 - cfg.beta) * floor_errors as f64 / self.n as f64 + cfg.lambda * child_k as f64;
        if self.dominated(lb, k, st) {
            return;
        }

        let mut child_remaining = Bits::zeros(0);
        for (slot, &id) in self.ids.iter().enumerate() {
            if st.path.contains(&id) {
                continue;
            }
            let cap = self.captures[slot].and(remaining);
            let (q, pos, neg) = self.majority(&cap);
            if cfg.bounds.support {
                if pos + neg == 0 {
                    continue;
                }
                if cfg.beta == 0.0 && (pos.max(neg) as f64) < cfg.lambda * self.n as f64 {
                    continue;
                }
            }
            let mut next = captured;
            self.decide(&mut next, &cap, q);
            // Even the child's own objective cannot beat the incumbent.
            let child_lb = (1.0 - cfg.beta) * next.errors as f64 / self.n as f64 + cfg.lambda * (k + 1) as f64;
            if self.dominated(child_lb, k, st) {
                continue;
            }
            st.path.push(id);
            if cfg.bounds.permutation && st.path.len() >= 2 && self.permutation_dominated(st, &next) {
                st.path.pop();
                continue;
            }
            remaining.and_not_into(&cap, &mut child_remaining);
            let r = child_remaining.clone();
            self.visit(st, &r, next);
            st.path.pop();
            if st.exhausted_budget || st.error.is_some() {
                return;
            }
        }
    }

    /// True when every list with more than `k` rules and objective at least
    /// `lb` loses to the incumbent.
    fn dominated(&self, lb: f64, k: usize, st: &State) -> bool {
        lb > st.best_obj + OBJECTIVE_TIE_EPS || (lb >= st.best_obj - OBJECTIVE_TIE_EPS && st.best_ids.len() <= k)
    }

    fn permutation_dominated(&self, st: &mut State, tally: &Tally) -> bool {
        let mut mask = vec![0u64; self.ids.len().div_ceil(64)];
        for id in &st.path {
            let slot = self.ids.binary_search(id).unwrap();
            mask[slot / 64] |= 1 << (slot % 64);
        }
        let [g0, g1] = tally.groups;
        let stats = if self.cfg.beta == 0.0 {
            [0; 4]
        } else {
            match self.cfg.metric {
                MetricKind::DemographicParity | MetricKind::StatisticalParity => {
                    [g0.predicted_positive, g1.predicted_positive, 0, 0]
                }
                _ => [g0.tp, g0.tn, g1.tp, g1.tn],
            }
        };
        match st.seen_sets.get_mut(&(mask.clone(), stats)) {
            Some(errors) if *errors <= tally.errors => true,
            Some(errors) => {
                *errors = tally.errors;
                false
            }
            None => {
                st.seen_sets.insert((mask, stats), tally.errors);
                false
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antecedent::mine_antecedents;
    use crate::rule_list::predict;

    fn all_ids(ants: &AntecedentSet) -> BTreeSet<usize> {
        ants.ids().collect()
    }

    /// Feature 0 equals the label; feature 1 is noise; feature 2 is `s`.
    fn separable() -> (Dataset, AntecedentSet) {
        let rows: Vec<Vec<u8>> = (0..20)
            .map(|i| vec![(i % 2) as u8, (i % 3 == 0) as u8, (i % 4 < 2) as u8])
            .collect();
        let labels: Vec<u8> = rows.iter().map(|r| r[0]).collect();
        let names = vec!["f0".into(), "f1".into(), "s".into()];
        let d = Dataset::from_rows("sep", names, &rows, 2, &labels).unwrap();
        let ants = mine_antecedents(&d, 0.0, true).unwrap();
        (d, ants)
    }

    #[test]
    fn objective_arithmetic() {
        let cfg = SearchConfig {
            lambda: 0.005,
            ..Default::default()
        };
        assert!((objective(0.0, 0.0, 2, &cfg) - 0.01).abs() < 1e-15);
        assert_eq!(objective(0.3, 0.0, 1, &cfg), objective(0.3, 0.9, 1, &cfg));
        let cfg = SearchConfig {
            lambda: 0.01,
            beta: 0.5,
            ..Default::default()
        };
        assert!((objective(0.2, 0.1, 1, &cfg) - 0.16).abs() < 1e-15);
    }

    #[test]
    fn lower_bound_cases() {
        let (d, ants) = separable();
        let cfg = SearchConfig {
            lambda: 0.01,
            bounds: BoundSwitches {
                lookahead: false,
                ..BoundSwitches::ALL_ON
            },
            ..Default::default()
        };
        let empty = Prefix::new(&ants, &d, &[]).unwrap();
        assert_eq!(lower_bound(&empty, &cfg), 0.0);
        // f0 then not f0: both rules are pure, so no captured errors.
        let p = Prefix::new(&ants, &d, &[0, 1]).unwrap();
        assert_eq!(p.misc_captured, 0.0);
        assert_eq!(p.consequents, vec![1, 0]);
        let on = SearchConfig {
            bounds: BoundSwitches::ALL_ON,
            ..cfg
        };
        assert!((lower_bound(&p, &on) - 0.03).abs() < 1e-15);
    }

    #[test]
    fn large_lambda_gives_majority_default() {
        let (d, ants) = separable();
        let cfg = SearchConfig {
            lambda: 0.6,
            ..Default::default()
        };
        let r = corels_optimize(&ants, &d, &cfg, &all_ids(&ants), &BTreeSet::new()).unwrap();
        assert!(r.best.is_empty());
        // Labels are balanced, so the tie predicts 0.
        assert_eq!(r.best.default_label(), 0);
        assert!((r.objective - 0.5).abs() < 1e-15);
        assert!(r.certified_optimal);
    }

    #[test]
    fn perfect_split_found() {
        let (d, ants) = separable();
        let cfg = SearchConfig::default();
        let r = corels_optimize(&ants, &d, &cfg, &all_ids(&ants), &BTreeSet::new()).unwrap();
        assert_eq!(r.best.len(), 1);
        assert!((r.objective - 0.005).abs() < 1e-15);
        let p = predict(&r.best, &ants, &d).unwrap();
        assert_eq!(p.0, d.label_vec());
    }

    #[test]
    fn restriction_errors() {
        let (d, ants) = separable();
        let cfg = SearchConfig::default();
        let none = BTreeSet::new();
        assert_eq!(
            corels_optimize(&ants, &d, &cfg, &none, &none),
            Err(Error::NoAntecedentsAllowed)
        );
        let a: BTreeSet<usize> = [0, 1].into();
        let f: BTreeSet<usize> = [1].into();
        assert!(matches!(
            corels_optimize(&ants, &d, &cfg, &a, &f),
            Err(Error::InvalidConfig(_))
        ));
        let zero = SearchConfig { node_budget: 0, ..cfg };
        assert_eq!(corels_optimize(&ants, &d, &zero, &a, &none), Err(Error::BudgetZero));
        let unknown: BTreeSet<usize> = [99].into();
        assert_eq!(
            corels_optimize(&ants, &d, &cfg, &unknown, &none),
            Err(Error::UnknownAntecedent(99))
        );
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let (d, ants) = separable();
        let cfg = SearchConfig {
            lambda: 0.0,
            node_budget: 1,
            bounds: BoundSwitches::ALL_OFF,
            ..Default::default()
        };
        let r = corels_optimize(&ants, &d, &cfg, &all_ids(&ants), &BTreeSet::new()).unwrap();
        assert!(!r.certified_optimal);
        assert_eq!(r.nodes_evaluated, 1);
    }

    #[test]
    fn restricted_search_avoids_removed_antecedent() {
        let (d, ants) = separable();
        let cfg = SearchConfig::default();
        let allowed: BTreeSet<usize> = ants.ids().filter(|&i| i != 0).collect();
        let r = corels_optimize(&ants, &d, &cfg, &allowed, &BTreeSet::new()).unwrap();
        assert!(!r.best.antecedent_ids().contains(&0));
        // `not f0` splits just as well.
        assert!((r.objective - 0.005).abs() < 1e-15);
    }
}
