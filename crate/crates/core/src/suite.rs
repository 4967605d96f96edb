//! Batch runs of a checker over generated instances, with a JSON report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::block4::check_block_theorem;
use crate::error::{Error, Result};
use crate::gen::{generate_indexed, name_hash, Family, GenConfig, Instance};
use crate::matrix::Tolerance;
use crate::pierce::{check_lemma_2_1, check_lemma_2_3};
use crate::theorems::check_pair;
use crate::verdict::{Condition, Outcome, TheoremId, TheoremVerdict};

/// Runs the checker for `theorem` on an instance of the matching shape.
pub fn check_instance(theorem: TheoremId, inst: &Instance, tol: Tolerance) -> Result<TheoremVerdict> {
    let found = match inst {
        Instance::Pair { a, b } => check_pair(theorem, a, b, tol),
        Instance::Pierce { p, a } => match theorem {
            TheoremId::Lemma2_1 => Some(check_lemma_2_1(p, a, tol)),
            TheoremId::Lemma2_3 => Some(check_lemma_2_3(p, a, tol)),
            _ => None,
        },
        Instance::Antidiag { b, c } => match theorem {
            TheoremId::Lemma4_1 => Some(crate::block4::check_lemma_4_1(b, c, tol)),
            _ => None,
        },
        Instance::Block(m) => check_block_theorem(theorem, m, tol),
        Instance::Single(_) => None,
    };
    found.unwrap_or_else(|| {
        Err(Error::NotApplicable {
            family: "instance shape".into(),
            hypothesis: theorem.as_str().into(),
        })
    })
}

/// A single result id or every result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteId {
    One(TheoremId),
    All,
}

impl SuiteId {
    pub fn theorems(self) -> Vec<TheoremId> {
        match self {
            SuiteId::One(t) => vec![t],
            SuiteId::All => TheoremId::ALL.to_vec(),
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteId::One(t) => write!(f, "{t}"),
            SuiteId::All => f.write_str("all"),
        }
    }
}

impl FromStr for SuiteId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            Ok(SuiteId::All)
        } else {
            s.parse().map(SuiteId::One).map_err(|_| format!("unknown suite `{s}`"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub suite: SuiteId,
    /// Instances per result.
    pub instances: usize,
    pub seed: u64,
    pub dims: (usize, usize),
    pub tol: Tolerance,
}

impl SuiteConfig {
    pub fn new(suite: SuiteId, instances: usize, seed: u64) -> Self {
        Self {
            suite,
            instances,
            seed,
            dims: (1, 8),
            tol: Tolerance::default(),
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.instances == 0 {
            return Err("--instances must be positive".into());
        }
        GenConfig {
            seed: self.seed,
            dim_range: self.dims,
            rank_range: (0, usize::MAX),
            count: self.instances,
        }
        .validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub theorem: TheoremId,
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub hypotheses: BTreeMap<String, Condition>,
    pub side1: bool,
    /// `None` for one-directional results.
    pub side2: Option<bool>,
    pub pass: bool,
    pub outcome: Outcome,
    pub ill_conditioned: bool,
    pub max_residual: f64,
    pub witness_norms: BTreeMap<String, f64>,
    pub recorded: BTreeMap<String, Condition>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub pass: usize,
    pub fail: usize,
    pub not_met: usize,
    pub ambiguous: usize,
}

impl Aggregate {
    fn add(&mut self, o: Outcome) {
        match o {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::NotMet => self.not_met += 1,
            Outcome::Ambiguous => self.ambiguous += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.not_met + self.ambiguous
    }
}

/// Per-result counts with the observed `(side1, side2)` distribution over
/// decided instances, keyed `"TT"`, `"TF"`, `"FT"`, `"FF"` (or `"T"`, `"F"`
/// for one-directional results).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremSummary {
    #[serde(flatten)]
    pub counts: Aggregate,
    pub truth_table: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub dims: [usize; 2],
    pub instances: usize,
    pub rtol: f64,
    pub atol: f64,
    pub results: Vec<InstanceResult>,
    pub aggregate: Aggregate,
    pub per_theorem: BTreeMap<String, TheoremSummary>,
    pub duration_ms: u64,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without its timing field, for reproducibility checks.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("duration_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn ok(&self) -> bool {
        self.aggregate.fail == 0
    }
}

fn truth_key(side1: bool, side2: Option<bool>) -> String {
    let c = |b: bool| if b { 'T' } else { 'F' };
    match side2 {
        Some(s2) => format!("{}{}", c(side1), c(s2)),
        None => c(side1).to_string(),
    }
}

fn evaluate(theorem: TheoremId, index: usize, cfg: &SuiteConfig) -> InstanceResult {
    let gen_cfg = GenConfig {
        seed: cfg.seed,
        dim_range: cfg.dims,
        rank_range: (0, usize::MAX),
        count: cfg.instances,
    };
    let g = generate_indexed(Family::for_theorem(theorem), &gen_cfg, name_hash(theorem.as_str()), index);
    let mut result = InstanceResult {
        theorem,
        index,
        seed: g.seed,
        n: g.n,
        hypotheses: BTreeMap::new(),
        side1: false,
        side2: None,
        pass: false,
        outcome: Outcome::NotMet,
        ill_conditioned: false,
        max_residual: 0.0,
        witness_norms: BTreeMap::new(),
        recorded: BTreeMap::new(),
        error: None,
    };
    match check_instance(theorem, &g.instance, cfg.tol) {
        Ok(v) => {
            let outcome = v.outcome();
            result.side1 = v.side1_holds();
            result.side2 = v.side2_holds();
            result.pass = outcome == Outcome::Pass;
            result.outcome = outcome;
            result.ill_conditioned = v.ill_conditioned;
            result.max_residual = v.max_residual();
            result.witness_norms = v.witness_norms();
            result.recorded = v.recorded;
            result.hypotheses = v.hypotheses;
        }
        Err(e) => result.error = Some(e.to_string()),
    }
    result
}

/// Runs every instance of the configured suite in parallel; results are
/// ordered by result id, then instance index.
pub fn run_suite(cfg: &SuiteConfig) -> std::result::Result<SuiteReport, String> {
    cfg.validate()?;
    let start = Instant::now();
    let jobs: Vec<(TheoremId, usize)> = cfg
        .suite
        .theorems()
        .into_iter()
        .flat_map(|t| (0..cfg.instances).map(move |i| (t, i)))
        .collect();
    let results: Vec<InstanceResult> = jobs.par_iter().map(|&(t, i)| evaluate(t, i, cfg)).collect();

    let mut aggregate = Aggregate::default();
    let mut per_theorem: BTreeMap<String, TheoremSummary> = BTreeMap::new();
    for r in &results {
        aggregate.add(r.outcome);
        let s = per_theorem.entry(r.theorem.as_str().to_owned()).or_default();
        s.counts.add(r.outcome);
        if matches!(r.outcome, Outcome::Pass | Outcome::Fail) {
            *s.truth_table.entry(truth_key(r.side1, r.side2)).or_default() += 1;
        }
    }
    Ok(SuiteReport {
        suite: cfg.suite.to_string(),
        seed: cfg.seed,
        dims: [cfg.dims.0, cfg.dims.1],
        instances: cfg.instances,
        rtol: cfg.tol.rtol,
        atol: cfg.tol.atol,
        results,
        aggregate,
        per_theorem,
        duration_ms: start.elapsed().as_millis() as u64,
    })
}
