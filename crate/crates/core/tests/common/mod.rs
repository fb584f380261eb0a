//! Brute-force oracles shared by the integration tests. Everything here is
//! evaluated row by row and never calls into the search or enumeration code.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use fairwash::antecedent::{AntecedentSet, Predicate};
use fairwash::{Dataset, MetricKind, RuleList};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TIE_EPS: f64 = 1e-12;

/// A random instance: binary features with `s` as the last column.
pub struct Instance {
    pub dataset: Dataset,
    pub rows: Vec<Vec<u8>>,
    pub labels: Vec<u8>,
    pub s: Vec<u8>,
    pub sensitive_col: usize,
}

/// Both groups hold both labels, so every metric's rates are defined.
pub fn random_instance(seed: u64, max_rows: usize, n_features: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(16..=max_rows);
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..=n_features).map(|_| rng.gen_range(0..2u8)).collect())
            .collect();
        let w: Vec<f64> = (0..=n_features).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let labels: Vec<u8> = rows
            .iter()
            .map(|r| {
                let z: f64 = r.iter().zip(&w).map(|(&x, &w)| x as f64 * w).sum();
                (z + rng.gen_range(-0.6..0.6) > 0.0) as u8
            })
            .collect();
        let s: Vec<u8> = rows.iter().map(|r| r[n_features]).collect();
        let defined = (0..2u8).all(|g| (0..2u8).all(|l| (0..n).any(|i| s[i] == g && labels[i] == l)));
        if !defined {
            continue;
        }
        let mut names: Vec<String> = (0..n_features).map(|i| format!("f{i}")).collect();
        names.push("s".into());
        let dataset = Dataset::from_rows(format!("rand{seed}"), names, &rows, n_features, &labels).unwrap();
        return Instance {
            dataset,
            rows,
            labels,
            s,
            sensitive_col: n_features,
        };
    }
}

/// Naive unfairness from per-row loops.
pub fn naive_unfairness(kind: MetricKind, preds: &[u8], labels: &[u8], s: &[u8]) -> f64 {
    let rate = |g: u8, num: &dyn Fn(usize) -> bool, den: &dyn Fn(usize) -> bool| -> f64 {
        let mut a = 0.0;
        let mut b = 0.0;
        for i in 0..preds.len() {
            if s[i] == g && den(i) {
                b += 1.0;
                if num(i) {
                    a += 1.0;
                }
            }
        }
        a / b
    };
    let all = |_: usize| true;
    let pos = |i: usize| preds[i] == 1;
    let correct = |i: usize| preds[i] == labels[i];
    let lab_pos = |i: usize| labels[i] == 1;
    let lab_neg = |i: usize| labels[i] == 0;
    let neg = |i: usize| preds[i] == 0;
    match kind {
        MetricKind::DemographicParity | MetricKind::StatisticalParity => {
            (rate(1, &pos, &all) - rate(0, &pos, &all)).abs()
        }
        MetricKind::OverallAccuracyEquality => (rate(1, &correct, &all) - rate(0, &correct, &all)).abs(),
        MetricKind::ConditionalProcedureAccuracy => {
            let tpr = (rate(1, &pos, &lab_pos) - rate(0, &pos, &lab_pos)).abs();
            let tnr = (rate(1, &neg, &lab_neg) - rate(0, &neg, &lab_neg)).abs();
            tpr.max(tnr)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scored {
    pub ids: Vec<usize>,
    pub list: RuleList,
    pub objective: f64,
    pub misc: f64,
    pub unfairness: f64,
}

pub struct Oracle<'a> {
    pub inst: &'a Instance,
    pub predicates: Vec<Predicate>,
    pub lambda: f64,
    pub beta: f64,
    pub metric: MetricKind,
}

impl<'a> Oracle<'a> {
    pub fn new(inst: &'a Instance, ants: &AntecedentSet, lambda: f64, beta: f64, metric: MetricKind) -> Self {
        Oracle {
            inst,
            predicates: ants.iter().map(|a| a.predicate).collect(),
            lambda,
            beta,
            metric,
        }
    }

    /// Scores an id sequence with majority consequents (ties predict 0).
    pub fn score(&self, ids: &[usize]) -> Scored {
        let rows = &self.inst.rows;
        let labels = &self.inst.labels;
        let n = rows.len();
        let mut owner = vec![ids.len(); n];
        for i in 0..n {
            for (k, &id) in ids.iter().enumerate() {
                if self.predicates[id].holds(&rows[i]) {
                    owner[i] = k;
                    break;
                }
            }
        }
        let majority = |k: usize| -> u8 {
            let (mut p, mut q) = (0, 0);
            for i in 0..n {
                if owner[i] == k {
                    if labels[i] == 1 {
                        p += 1
                    } else {
                        q += 1
                    }
                }
            }
            (p > q) as u8
        };
        let cons: Vec<u8> = (0..=ids.len()).map(majority).collect();
        let preds: Vec<u8> = owner.iter().map(|&k| cons[k]).collect();
        let misc = preds.iter().zip(labels).filter(|(a, b)| a != b).count() as f64 / n as f64;
        let unfairness = naive_unfairness(self.metric, &preds, labels, &self.inst.s);
        let objective = (1.0 - self.beta) * misc + self.beta * unfairness + self.lambda * ids.len() as f64;
        let rules = ids
            .iter()
            .zip(&cons)
            .map(|(&antecedent, &consequent)| fairwash::Rule { antecedent, consequent })
            .collect();
        Scored {
            ids: ids.to_vec(),
            list: RuleList::new(rules, cons[ids.len()]).unwrap(),
            objective,
            misc,
            unfairness,
        }
    }

    /// Every sequence of distinct ids from `pool` up to `max_len` long.
    pub fn all_sequences(pool: &[usize], max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for seq in &frontier {
                for &id in pool {
                    if !seq.contains(&id) {
                        let mut s: Vec<usize> = seq.clone();
                        s.push(id);
                        next.push(s);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn all_scored(&self, max_len: usize) -> Vec<Scored> {
        let pool: Vec<usize> = (0..self.predicates.len()).collect();
        Self::all_sequences(&pool, max_len)
            .iter()
            .map(|s| self.score(s))
            .collect()
    }

    pub fn exhaustive_best(&self, max_len: usize) -> Scored {
        best_of(self.all_scored(max_len).into_iter())
    }

    /// Distinct optimal lists over every antecedent subset, best first.
    pub fn subset_optima(&self, max_len: usize) -> Vec<Scored> {
        let scored = self.all_scored(max_len);
        let m = self.predicates.len();
        let mut distinct: BTreeMap<String, Scored> = BTreeMap::new();
        for mask in 0u32..(1 << m) {
            let within = scored
                .iter()
                .filter(|s| s.ids.iter().all(|&id| mask >> id & 1 == 1))
                .cloned();
            let b = best_of(within);
            distinct.entry(b.list.canonical_form()).or_insert(b);
        }
        let mut v: Vec<Scored> = distinct.into_values().collect();
        v.sort_by(order);
        v
    }
}

pub fn order(a: &Scored, b: &Scored) -> std::cmp::Ordering {
    if (a.objective - b.objective).abs() > TIE_EPS {
        return a.objective.partial_cmp(&b.objective).unwrap();
    }
    a.ids.len().cmp(&b.ids.len()).then_with(|| a.ids.cmp(&b.ids))
}

pub fn best_of(it: impl Iterator<Item = Scored>) -> Scored {
    it.min_by(order).unwrap()
}

/// Checks that `got` (canonical form, objective) pairs equal the first
/// `got.len()` oracle entries up to reordering inside equal-objective ties.
/// Returns a description of the first mismatch.
pub fn compare_top_k(got: &[(String, f64)], want: &[Scored], tol: f64) -> Result<(), String> {
    if got.len() > want.len() {
        return Err(format!("emitted {} models, oracle has {}", got.len(), want.len()));
    }
    for (i, ((_, g), w)) in got.iter().zip(want).enumerate() {
        if (g - w.objective).abs() > tol {
            return Err(format!("model {i}: objective {g} vs oracle {}", w.objective));
        }
    }
    // Group by objective value and compare as sets.
    let mut i = 0;
    while i < got.len() {
        let v = got[i].1;
        let j = (i..got.len())
            .find(|&j| (got[j].1 - v).abs() > tol)
            .unwrap_or(got.len());
        let got_set: BTreeSet<&str> = got[i..j].iter().map(|(c, _)| c.as_str()).collect();
        let tie_class: BTreeSet<String> = want
            .iter()
            .filter(|w| (w.objective - v).abs() <= tol)
            .map(|w| w.list.canonical_form())
            .collect();
        let want_prefix: BTreeSet<String> = want[i..j].iter().map(|w| w.list.canonical_form()).collect();
        let ok = if j < got.len() {
            got_set.iter().all(|c| want_prefix.contains(*c))
        } else {
            got_set.iter().all(|c| tie_class.contains(*c))
        };
        if !ok {
            return Err(format!("tie group at objective {v}: {got_set:?} vs {want_prefix:?}"));
        }
        i = j;
    }
    Ok(())
}
