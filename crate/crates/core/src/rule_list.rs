//! Ordered rule lists: first triggered rule wins, otherwise the default.

use std::fmt;
use std::ops::Deref;

use crate::antecedent::AntecedentSet;
use crate::bits::Bits;
use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub antecedent: usize,
    pub consequent: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleList {
    rules: Vec<Rule>,
    default: u8,
}

impl RuleList {
    pub fn new(rules: Vec<Rule>, default: u8) -> Result<RuleList> {
        for (i, r) in rules.iter().enumerate() {
            if rules[..i].iter().any(|p| p.antecedent == r.antecedent) {
                return Err(Error::DuplicateAntecedent(r.antecedent));
            }
            if r.consequent > 1 {
                return Err(Error::Parse(format!("consequent {} not in {{0,1}}", r.consequent)));
            }
        }
        if default > 1 {
            return Err(Error::Parse(format!("default {default} not in {{0,1}}")));
        }
        Ok(RuleList { rules, default })
    }

    pub fn empty(default: u8) -> RuleList {
        RuleList {
            rules: Vec::new(),
            default,
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn default_label(&self) -> u8 {
        self.default
    }

    /// Number of rules, `K`.
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn antecedent_ids(&self) -> Vec<usize> {
        self.rules.iter().map(|r| r.antecedent).collect()
    }

    /// Ids, consequents and the default in order, e.g. `3:1 0:0 default:1`.
    pub fn canonical_form(&self) -> String {
        let mut s = String::new();
        for r in &self.rules {
            s.push_str(&format!("{}:{} ", r.antecedent, r.consequent));
        }
        s.push_str(&format!("default:{}", self.default));
        s
    }

    pub fn parse(text: &str) -> Result<RuleList> {
        let mut rules = Vec::new();
        let mut default = None;
        for tok in text.split_whitespace() {
            if default.is_some() {
                return Err(Error::Parse(format!("token `{tok}` after default")));
            }
            let (a, q) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad token `{tok}`")))?;
            let q: u8 = q
                .parse()
                .map_err(|_| Error::Parse(format!("bad consequent in `{tok}`")))?;
            if a == "default" {
                default = Some(q);
            } else {
                let antecedent = a
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad antecedent id in `{tok}`")))?;
                rules.push(Rule {
                    antecedent,
                    consequent: q,
                });
            }
        }
        let default = default.ok_or_else(|| Error::Parse("missing default".into()))?;
        RuleList::new(rules, default)
    }

    /// `if <p1> then <q1> else if ... else <q0>`, one clause per line.
    pub fn render(&self, ants: &AntecedentSet) -> Result<String> {
        let mut out = String::new();
        for (i, r) in self.rules.iter().enumerate() {
            let a = ants.get(r.antecedent)?;
            if i > 0 {
                out.push_str("else ");
            }
            out.push_str(&format!("if {} then {}\n", a.name, r.consequent));
        }
        out.push_str(&format!("else {}", self.default));
        if self.rules.is_empty() {
            out = format!("predict {}", self.default);
        }
        Ok(out)
    }

    pub fn predict_row(&self, ants: &AntecedentSet, row: &[u8]) -> Result<u8> {
        for r in &self.rules {
            if ants.get(r.antecedent)?.predicate.holds(row) {
                return Ok(r.consequent);
            }
        }
        Ok(self.default)
    }
}

impl fmt::Display for RuleList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_form())
    }
}

/// Predicted labels aligned with dataset rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredictionVector(pub Vec<u8>);

impl PredictionVector {
    pub fn from_bits(b: &Bits) -> Self {
        PredictionVector((0..b.len()).map(|i| b.get(i) as u8).collect())
    }

    pub fn complement(&self) -> Self {
        PredictionVector(self.0.iter().map(|&v| 1 - v).collect())
    }
}

impl Deref for PredictionVector {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

/// Evaluates the list on `d`. Each rule claims the rows it captures that no
/// earlier rule claimed; the rest fall to the default.
pub fn predict(r: &RuleList, ants: &AntecedentSet, d: &Dataset) -> Result<PredictionVector> {
    let n = d.n_rows();
    let mut remaining = Bits::ones(n);
    let mut positive = Bits::zeros(n);
    for rule in r.rules() {
        let capture = ants.get(rule.antecedent)?.predicate.capture_on(d).and(&remaining);
        if rule.consequent == 1 {
            positive = positive.or(&capture);
        }
        remaining = remaining.and_not(&capture);
    }
    if r.default_label() == 1 {
        positive = positive.or(&remaining);
    }
    Ok(PredictionVector::from_bits(&positive))
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { expected: a, actual: b });
    }
    Ok(())
}

/// Fraction of rows where `preds` and `labels` disagree.
pub fn misclassification(preds: &[u8], labels: &[u8]) -> Result<f64> {
    check_len(preds.len(), labels.len())?;
    if preds.is_empty() {
        return Ok(0.0);
    }
    let wrong = preds.iter().zip(labels).filter(|(p, l)| p != l).count();
    Ok(wrong as f64 / preds.len() as f64)
}

/// Agreement rate between a surrogate and the black box. For a single
/// instance this is 1 or 0.
pub fn fidelity(surrogate: &[u8], blackbox: &[u8]) -> Result<f64> {
    check_len(surrogate.len(), blackbox.len())?;
    if surrogate.is_empty() {
        return Ok(1.0);
    }
    let same = surrogate.iter().zip(blackbox).filter(|(p, l)| p == l).count();
    Ok(same as f64 / surrogate.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antecedent::mine_antecedents;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rule(a: usize, q: u8) -> Rule {
        Rule {
            antecedent: a,
            consequent: q,
        }
    }

    fn single_col(a: &[u8]) -> (Dataset, AntecedentSet) {
        let rows: Vec<Vec<u8>> = a.iter().map(|&v| vec![v, 0]).collect();
        let d = Dataset::from_rows("t", vec!["a".into(), "s".into()], &rows, 1, &vec![0; a.len()]).unwrap();
        let ants = mine_antecedents(&d, 0.0, false).unwrap();
        (d, ants)
    }

    #[test]
    fn default_only() {
        let (d, ants) = single_col(&[1, 0, 1]);
        let p = predict(&RuleList::empty(1), &ants, &d).unwrap();
        assert_eq!(p.0, vec![1, 1, 1]);
    }

    #[test]
    fn single_rule() {
        let (d, ants) = single_col(&[1, 0, 1]);
        let r = RuleList::new(vec![rule(0, 1)], 0).unwrap();
        assert_eq!(predict(&r, &ants, &d).unwrap().0, vec![1, 0, 1]);
        let bad = RuleList::new(vec![rule(9, 1)], 0).unwrap();
        assert_eq!(predict(&bad, &ants, &d), Err(Error::UnknownAntecedent(9)));
    }

    #[test]
    fn bitvector_prediction_matches_row_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rows: Vec<Vec<u8>> = (0..16).map(|_| (0..5).map(|_| rng.gen_range(0..2)).collect()).collect();
            let names = (0..5).map(|i| format!("f{i}")).collect();
            let d = Dataset::from_rows("r", names, &rows, 4, &[0; 16]).unwrap();
            let ants = mine_antecedents(&d, 0.0, true).unwrap();
            let mut ids: Vec<usize> = ants.ids().collect();
            let mut picked = Vec::new();
            for _ in 0..3.min(ids.len()) {
                picked.push(ids.swap_remove(rng.gen_range(0..ids.len())));
            }
            let r = RuleList::new(
                picked.iter().map(|&a| rule(a, rng.gen_range(0..2))).collect(),
                rng.gen_range(0..2),
            )
            .unwrap();
            let fast = predict(&r, &ants, &d).unwrap();
            for (i, row) in rows.iter().enumerate() {
                // Naive sequential evaluation.
                let mut out = r.default_label();
                for rl in r.rules() {
                    if ants.get(rl.antecedent).unwrap().predicate.holds(row) {
                        out = rl.consequent;
                        break;
                    }
                }
                assert_eq!(fast[i], out);
                assert_eq!(r.predict_row(&ants, row).unwrap(), out);
            }
        }
    }

    #[test]
    fn misclassification_cases() {
        assert_eq!(misclassification(&[1, 0, 1], &[1, 0, 1]).unwrap(), 0.0);
        assert_eq!(misclassification(&[1, 0, 1], &[0, 1, 0]).unwrap(), 1.0);
        assert_eq!(misclassification(&[1, 0, 1, 1], &[1, 1, 1, 0]).unwrap(), 0.5);
        assert!(matches!(
            misclassification(&[1], &[1, 0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn fidelity_cases() {
        assert_eq!(fidelity(&[1, 0, 0], &[1, 0, 0]).unwrap(), 1.0);
        assert_eq!(fidelity(&[1], &[1]).unwrap(), 1.0);
        assert_eq!(fidelity(&[1], &[0]).unwrap(), 0.0);
        assert!(fidelity(&[1], &[]).is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(RuleList::empty(0).canonical_form(), "default:0");
        let a = RuleList::new(vec![rule(1, 1), rule(2, 0)], 1).unwrap();
        let b = RuleList::new(vec![rule(2, 0), rule(1, 1)], 1).unwrap();
        assert_ne!(a.canonical_form(), b.canonical_form());
        assert_eq!(a.canonical_form(), "1:1 2:0 default:1");
        assert!(RuleList::parse("1:1 1:0 default:0").is_err());
        assert!(RuleList::parse("1:1").is_err());
    }

    #[test]
    fn renders_readably() {
        let (_, ants) = single_col(&[1, 0, 1]);
        let r = RuleList::new(vec![rule(0, 1)], 0).unwrap();
        assert_eq!(r.render(&ants).unwrap(), "if a then 1\nelse 0");
        assert_eq!(RuleList::empty(1).render(&ants).unwrap(), "predict 1");
    }

    proptest! {
        #[test]
        fn canonical_round_trip(ids in proptest::sample::subsequence((0usize..40).collect::<Vec<_>>(), 0..6),
                                qs in proptest::collection::vec(0u8..2, 6),
                                default in 0u8..2) {
            let rules = ids.iter().zip(&qs).map(|(&a, &q)| rule(a, q)).collect();
            let r = RuleList::new(rules, default).unwrap();
            prop_assert_eq!(RuleList::parse(&r.canonical_form()).unwrap(), r);
        }

        #[test]
        fn fidelity_identity_and_complement(p in proptest::collection::vec(0u8..2, 1..50)) {
            let p = PredictionVector(p);
            prop_assert_eq!(fidelity(&p, &p).unwrap(), 1.0);
            prop_assert_eq!(fidelity(&p, &p.complement()).unwrap(), 0.0);
        }
    }
}
