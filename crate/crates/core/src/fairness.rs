//! Group-fairness metrics over a binary sensitive attribute.
//!
//! Every metric is an absolute gap between the two groups, so each lies in
//! `[0, 1]` and is unchanged when the group encoding is swapped.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MetricKind {
    /// `|P(ŷ=1 | s=1) − P(ŷ=1 | s=0)|`.
    #[default]
    DemographicParity,
    /// Same gap as demographic parity, reported under its own name.
    StatisticalParity,
    /// `|acc(s=1) − acc(s=0)|`. Needs labels.
    OverallAccuracyEquality,
    /// `max(|TPR₁ − TPR₀|, |TNR₁ − TNR₀|)`. Needs labels.
    ConditionalProcedureAccuracy,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::DemographicParity,
        MetricKind::StatisticalParity,
        MetricKind::OverallAccuracyEquality,
        MetricKind::ConditionalProcedureAccuracy,
    ];

    pub fn needs_labels(self) -> bool {
        matches!(
            self,
            MetricKind::OverallAccuracyEquality | MetricKind::ConditionalProcedureAccuracy
        )
    }

    pub fn code(self) -> &'static str {
        match self {
            MetricKind::DemographicParity => "dp",
            MetricKind::StatisticalParity => "sp",
            MetricKind::OverallAccuracyEquality => "oae",
            MetricKind::ConditionalProcedureAccuracy => "cpa",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for MetricKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.code() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown metric `{s}` (dp, sp, oae, cpa)")))
    }
}

/// Counts for one sensitive group. Confusion counts are zero when no labels
/// were supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Group {
    pub n: usize,
    pub predicted_positive: usize,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Group {
    pub fn positive_rate(&self) -> f64 {
        self.predicted_positive as f64 / self.n as f64
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.n as f64
    }

    fn tpr(&self) -> Option<f64> {
        let d = self.tp + self.fn_;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }

    fn tnr(&self) -> Option<f64> {
        let d = self.tn + self.fp;
        (d > 0).then(|| self.tn as f64 / d as f64)
    }
}

/// Per-group counts, indexed by the sensitive value (`groups[0]` is `s=0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GroupCounts {
    pub groups: [Group; 2],
    pub labeled: bool,
}

impl GroupCounts {
    pub fn swapped(&self) -> GroupCounts {
        GroupCounts {
            groups: [self.groups[1], self.groups[0]],
            labeled: self.labeled,
        }
    }
}

pub fn group_counts(preds: &[u8], labels: Option<&[u8]>, s: &[u8]) -> Result<GroupCounts> {
    if preds.len() != s.len() {
        return Err(Error::LengthMismatch {
            expected: s.len(),
            actual: preds.len(),
        });
    }
    if let Some(l) = labels {
        if l.len() != s.len() {
            return Err(Error::LengthMismatch {
                expected: s.len(),
                actual: l.len(),
            });
        }
    }
    let mut c = GroupCounts {
        labeled: labels.is_some(),
        ..Default::default()
    };
    for i in 0..preds.len() {
        let g = &mut c.groups[(s[i] == 1) as usize];
        let p = preds[i] == 1;
        g.n += 1;
        g.predicted_positive += p as usize;
        if let Some(l) = labels {
            match (p, l[i] == 1) {
                (true, true) => g.tp += 1,
                (true, false) => g.fp += 1,
                (false, false) => g.tn += 1,
                (false, true) => g.fn_ += 1,
            }
        }
    }
    for (v, g) in c.groups.iter().enumerate() {
        if g.n == 0 {
            return Err(Error::EmptyGroup(v as u8));
        }
    }
    Ok(c)
}

/// How to treat a conditional rate whose denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateMode {
    /// Fail with `UndefinedRate`.
    #[default]
    Strict,
    /// Treat the affected gap term as 0.
    Lenient,
}

pub fn unfairness(kind: MetricKind, counts: &GroupCounts) -> Result<f64> {
    unfairness_with(kind, counts, RateMode::Strict)
}

pub fn unfairness_with(kind: MetricKind, counts: &GroupCounts, mode: RateMode) -> Result<f64> {
    let [g0, g1] = &counts.groups;
    for (v, g) in counts.groups.iter().enumerate() {
        if g.n == 0 {
            return Err(Error::EmptyGroup(v as u8));
        }
    }
    if kind.needs_labels() && !counts.labeled {
        return Err(Error::LabelsRequired(kind.code()));
    }
    let gap = |rate: &'static str, f: fn(&Group) -> Option<f64>| -> Result<f64> {
        match (f(g1), f(g0)) {
            (Some(a), Some(b)) => Ok((a - b).abs()),
            _ if mode == RateMode::Lenient => Ok(0.0),
            (None, _) => Err(Error::UndefinedRate { rate, group: 1 }),
            (_, None) => Err(Error::UndefinedRate { rate, group: 0 }),
        }
    };
    Ok(match kind {
        MetricKind::DemographicParity | MetricKind::StatisticalParity => {
            (g1.positive_rate() - g0.positive_rate()).abs()
        }
        MetricKind::OverallAccuracyEquality => (g1.accuracy() - g0.accuracy()).abs(),
        MetricKind::ConditionalProcedureAccuracy => gap("TPR", Group::tpr)?.max(gap("TNR", Group::tnr)?),
    })
}

/// Checks up front whether a label-dependent metric is defined for the given
/// labels and groups. Conditional rate denominators depend only on labels.
pub fn check_defined(kind: MetricKind, labels: &[u8], s: &[u8], mode: RateMode) -> Result<()> {
    let counts = group_counts(labels, Some(labels), s)?;
    unfairness_with(kind, &counts, mode).map(|_| ())
}
