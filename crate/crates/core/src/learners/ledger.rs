use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ClassId;
use crate::problems::LabeledOracle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub step: usize,
    pub point_index: usize,
    pub label: ClassId,
    pub purpose: String,
}

/// Ordered record of every label query issued by a learner run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QueryLedger {
    pub entries: Vec<LedgerEntry>,
    /// Free-form warnings (skipped groups, fewer cells than requested, ...).
    pub notes: Vec<String>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// Queries `index` through `oracle` and records the answer. A budget
    /// error becomes a partial-result error carrying the ledger so far.
    pub fn query(&mut self, oracle: &mut LabeledOracle, index: usize, purpose: impl Into<String>) -> Result<ClassId> {
        match oracle.query(index) {
            Ok(label) => {
                self.entries.push(LedgerEntry { step: self.entries.len(), point_index: index, label, purpose: purpose.into() });
                Ok(label)
            }
            Err(e @ Error::BudgetExhausted { .. }) => Err(Error::Partial {
                reason: e.to_string(),
                ledger: Box::new(self.clone()),
            }),
            Err(e) => Err(e),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.entries.is_empty() {
            w.write_record(["step", "point_index", "label", "purpose"])?;
        }
        for e in &self.entries {
            w.serialize(e)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let entries = r.deserialize().collect::<Result<Vec<LedgerEntry>, _>>()?;
        Ok(QueryLedger { entries, notes: Vec::new() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::problems::{draw_sample, generate_ecoc, RegionShape};

    #[test]
    fn records_and_round_trips() {
        let inst = Arc::new(generate_ecoc(2, 2, 0.3, RegionShape::Ball, 1).unwrap());
        let pts = Arc::new(draw_sample(&inst, 20, 2).unwrap().points);
        let mut oracle = LabeledOracle::new(inst, pts, 0.0, 0).unwrap();
        let mut ledger = QueryLedger::new();
        ledger.query(&mut oracle, 3, "cluster:0").unwrap();
        ledger.query(&mut oracle, 7, "cluster:1").unwrap();
        assert_eq!(ledger.total() as u64, oracle.query_count());
        let mut buf = Vec::new();
        ledger.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("step,point_index,label,purpose\n0,3,"));
        assert_eq!(QueryLedger::read_csv(buf.as_slice()).unwrap().entries, ledger.entries);
    }

    #[test]
    fn budget_exhaustion_is_partial() {
        let inst = Arc::new(generate_ecoc(2, 2, 0.3, RegionShape::Ball, 1).unwrap());
        let pts = Arc::new(draw_sample(&inst, 5, 2).unwrap().points);
        let mut oracle = LabeledOracle::new(inst, pts, 0.0, 0).unwrap().with_budget(1);
        let mut ledger = QueryLedger::new();
        ledger.query(&mut oracle, 0, "a").unwrap();
        match ledger.query(&mut oracle, 1, "b") {
            Err(Error::Partial { ledger, .. }) => assert_eq!(ledger.total(), 1),
            other => panic!("expected partial result, got {other:?}"),
        }
    }
}
