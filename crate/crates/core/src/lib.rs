//! Fairness-regularized rule-list learning and enumeration.
//!
//! Given a dataset labelled by some black-box model, this crate searches for
//! short rule lists that mimic the black box (high fidelity) while showing a
//! much smaller gap between sensitive groups. The pieces:
//!
//! - [`data`] and [`antecedent`]: binary datasets, preprocessing recipes,
//!   splits and single-literal antecedents.
//! - [`rule_list`] and [`fairness`]: rule lists, fidelity and the group
//!   metrics.
//! - [`search`]: exact branch-and-bound for one optimal rule list.
//! - [`enumerate`]: best-first enumeration of distinct rule lists.
//! - [`rationalize`]: the suing-group (global) and per-subject (local)
//!   drivers plus model selection.
//! - [`audit`]: attribute-flip influence ranking.
//! - [`report`] and [`cli`]: output files and the command-line front end.

pub mod antecedent;
pub mod audit;
pub mod bits;
pub mod cli;
pub mod data;
pub mod enumerate;
pub mod error;
pub mod fairness;
pub mod rationalize;
pub mod report;
pub mod rule_list;
pub mod search;
pub mod synthetic;

pub use antecedent::{mine_antecedents, mine_antecedents_with, Antecedent, AntecedentSet, MiningConfig};
pub use data::{load_csv, split_dataset, Dataset, SplitSpec};
pub use enumerate::{enumerate_models, EnumeratedModel};
pub use error::{Error, Result};
pub use fairness::{group_counts, unfairness, GroupCounts, MetricKind, RateMode};
pub use rule_list::{fidelity, misclassification, predict, PredictionVector, Rule, RuleList};
pub use search::{corels_optimize, objective, BoundSwitches, SearchConfig, SearchResult};
