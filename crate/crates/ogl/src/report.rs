//! Campaign reports: deterministic JSON with one record per trial.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one verification campaign. With a fixed lemma, parameters and
/// seed the serialised report is byte-identical across runs except for
/// `wall_ms`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma: String,
    /// The claim under test, self-contained, quoted verbatim from the
    /// catalog so failures cite what was checked.
    pub claim: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Aggregate verdict: true iff zero failed trials.
    pub pass: bool,
    pub trial_records: Vec<TrialRecord>,
    /// Exemplar witnesses (constructed subspaces, counts, paths).
    pub witnesses: Vec<Value>,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub verdict: String,
    pub note: String,
}

/// Accumulator used by the campaign implementations.
pub struct RunAccumulator {
    records: Vec<TrialRecord>,
    witnesses: Vec<Value>,
    witness_cap: usize,
}

impl RunAccumulator {
    pub fn new(witness_cap: usize) -> Self {
        RunAccumulator {
            records: Vec::new(),
            witnesses: Vec::new(),
            witness_cap,
        }
    }

    pub fn pass(&mut self, seed: u64, note: impl Into<String>) {
        let index = self.records.len();
        self.records.push(TrialRecord {
            index,
            seed,
            verdict: "pass".into(),
            note: note.into(),
        });
    }

    pub fn fail(&mut self, seed: u64, note: impl Into<String>) {
        let index = self.records.len();
        self.records.push(TrialRecord {
            index,
            seed,
            verdict: "fail".into(),
            note: note.into(),
        });
    }

    /// Records the outcome of a fallible trial body.
    pub fn outcome(
        &mut self,
        seed: u64,
        result: std::result::Result<String, String>,
    ) {
        match result {
            Ok(note) => self.pass(seed, note),
            Err(note) => self.fail(seed, note),
        }
    }

    pub fn witness(&mut self, value: Value) {
        if self.witnesses.len() < self.witness_cap {
            self.witnesses.push(value);
        }
    }

    pub fn failed_count(&self) -> usize {
        self.records.iter().filter(|r| r.verdict == "fail").count()
    }

    pub fn finish(
        self,
        lemma: &str,
        claim: &str,
        params: BTreeMap<String, Value>,
        seed: u64,
        wall_ms: u128,
    ) -> VerificationReport {
        let failed = self.failed_count();
        let trials = self.records.len();
        VerificationReport {
            lemma: lemma.to_string(),
            claim: claim.to_string(),
            params,
            seed,
            trials,
            passed: trials - failed,
            failed,
            pass: failed == 0,
            trial_records: self.records,
            witnesses: self.witnesses,
            wall_ms,
        }
    }
}

impl VerificationReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "lemma: {}\nclaim: {}\nseed: {}\n",
            self.lemma, self.claim, self.seed
        ));
        for (key, value) in &self.params {
            out.push_str(&format!("param {key}: {value}\n"));
        }
        out.push_str(&format!(
            "trials: {} passed: {} failed: {}\n",
            self.trials, self.passed, self.failed
        ));
        for record in self.trial_records.iter().filter(|r| r.verdict == "fail") {
            out.push_str(&format!(
                "  trial {} (seed {}): {}\n",
                record.index, record.seed, record.note
            ));
        }
        out.push_str(&format!(
            "result: {} ({} ms)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.wall_ms
        ));
        out
    }
}
