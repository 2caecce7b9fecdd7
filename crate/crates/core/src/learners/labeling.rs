use std::collections::BTreeMap;

use rand::seq::index::sample as sample_indices;
use rand::Rng as _;

use super::ledger::QueryLedger;
use crate::clustering::majority;
use crate::error::Result;
use crate::geometry::ClassId;
use crate::problems::LabeledOracle;
use crate::rng;

/// How a selected group (cluster, pruning node or cell) gets its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPolicy {
    /// One query on the smallest member index.
    First,
    /// `t` queries on seeded random members, majority vote with ties to the
    /// smaller class id. `t == 1` is identical to `First`.
    Majority { t: usize, seed: u64 },
}

impl LabelPolicy {
    pub fn queries_per_group(self) -> usize {
        match self {
            LabelPolicy::First => 1,
            LabelPolicy::Majority { t, .. } => t,
        }
    }

    /// Members queried for group `group`; `members` must be ascending.
    pub(crate) fn pick(self, members: &[usize], group: u64) -> Vec<usize> {
        match self {
            LabelPolicy::First | LabelPolicy::Majority { t: 1, .. } => members.first().copied().into_iter().collect(),
            LabelPolicy::Majority { t, seed } => {
                let mut r = rng::indexed_stream(rng::derive_seed(seed, "group"), group);
                if members.len() >= t {
                    sample_indices(&mut r, members.len(), t).into_iter().map(|k| members[k]).collect()
                } else {
                    (0..t).map(|_| members[r.random_range(0..members.len())]).collect()
                }
            }
        }
    }

    /// Queries the chosen members and returns the group label. Empty groups
    /// are skipped with a ledger note.
    pub(crate) fn label_group(
        self,
        oracle: &mut LabeledOracle,
        ledger: &mut QueryLedger,
        members: &[usize],
        group: u64,
        purpose: &str,
    ) -> Result<Option<ClassId>> {
        if members.is_empty() {
            ledger.note(format!("{purpose}: empty group skipped"));
            return Ok(None);
        }
        let mut counts: BTreeMap<ClassId, usize> = BTreeMap::new();
        for i in self.pick(members, group) {
            *counts.entry(ledger.query(oracle, i, purpose)?).or_default() += 1;
        }
        Ok(majority(&counts).map(|(c, _)| c))
    }
}
