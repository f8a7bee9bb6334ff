//! Reports printed by each command, in a text and a JSON ("machine") form.
//!
//! Field order is fixed by declaration order. Fields named `wall_time_ms` or
//! `seconds` hold timings and are the only nondeterministic content.

use std::fmt::Write;

use fptprop::{Domain, Value};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

pub trait Render: Serialize {
    fn text(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn braces(values: &[Value]) -> String {
    Domain::new(values.iter().copied()).to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarChange {
    pub name: String,
    pub before: Vec<Value>,
    pub after: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetChange {
    pub name: String,
    pub lb_before: Vec<Value>,
    pub ub_before: Vec<Value>,
    pub lb_after: Vec<Value>,
    pub ub_after: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintStats {
    pub name: String,
    pub kind: String,
    pub k: u64,
    pub invocations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagateReport {
    /// `pruned`, `unchanged` or `wipeout`.
    pub status: String,
    /// Label of the constraint that emptied a domain.
    pub failed: Option<String>,
    pub variables: Vec<VarChange>,
    pub sets: Vec<SetChange>,
    pub constraints: Vec<ConstraintStats>,
    pub wall_time_ms: f64,
}

impl PropagateReport {
    pub fn find(&self, name: &str) -> Option<&VarChange> {
        self.variables.iter().find(|v| v.name == name)
    }
}

impl Render for PropagateReport {
    fn text(&self) -> String {
        let mut out = String::new();
        match &self.failed {
            Some(c) => writeln!(out, "status: {} (constraint `{c}`)", self.status),
            None => writeln!(out, "status: {}", self.status),
        }
        .unwrap();
        for v in &self.variables {
            writeln!(
                out,
                "{}: {} -> {}",
                v.name,
                braces(&v.before),
                braces(&v.after)
            )
            .unwrap();
        }
        for s in &self.sets {
            writeln!(
                out,
                "{}: lb {} ub {} -> lb {} ub {}",
                s.name,
                braces(&s.lb_before),
                braces(&s.ub_before),
                braces(&s.lb_after),
                braces(&s.ub_after)
            )
            .unwrap();
        }
        for c in &self.constraints {
            writeln!(
                out,
                "constraint {} ({}): k={} invocations={}",
                c.name, c.kind, c.k, c.invocations
            )
            .unwrap();
        }
        writeln!(out, "wall_time_ms: {:.3}", self.wall_time_ms).unwrap();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarComparison {
    pub name: String,
    pub original: Vec<Value>,
    pub propagator: Vec<Value>,
    pub oracle: Vec<Value>,
    /// `MATCH` or `MISMATCH`.
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintComparison {
    pub name: String,
    pub kind: String,
    pub k: u64,
    pub verdict: String,
    pub variables: Vec<VarComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    /// `match` when every variable of every constraint agrees.
    pub status: String,
    pub constraints: Vec<ConstraintComparison>,
    pub wall_time_ms: f64,
}

impl CompareReport {
    pub fn matches(&self) -> bool {
        self.status == "match"
    }

    /// `(constraint, variable)` labels of every disagreement.
    pub fn mismatches(&self) -> Vec<(String, String)> {
        self.constraints
            .iter()
            .flat_map(|c| {
                c.variables
                    .iter()
                    .filter(|v| v.verdict != "MATCH")
                    .map(|v| (c.name.clone(), v.name.clone()))
            })
            .collect()
    }
}

impl Render for CompareReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "status: {}", self.status).unwrap();
        for c in &self.constraints {
            writeln!(
                out,
                "constraint {} ({}, k={}): {}",
                c.name, c.kind, c.k, c.verdict
            )
            .unwrap();
            for v in &c.variables {
                writeln!(
                    out,
                    "  {}: {} propagator {} oracle {} {}",
                    v.name,
                    braces(&v.original),
                    braces(&v.propagator),
                    braces(&v.oracle),
                    v.verdict
                )
                .unwrap();
            }
        }
        writeln!(out, "wall_time_ms: {:.3}", self.wall_time_ms).unwrap();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub kind: String,
    pub instances: usize,
    pub matches: usize,
    pub mismatches: usize,
    /// Instances the oracle proves infeasible.
    pub wipeouts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomSummary {
    pub status: String,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub rows: Vec<SummaryRow>,
    /// Instance file of the first disagreement, for replay.
    pub first_mismatch: Option<String>,
    pub wall_time_ms: f64,
}

impl RandomSummary {
    pub fn matches(&self) -> bool {
        self.status == "match"
    }
}

impl Render for RandomSummary {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "status: {} (seed {}, n<={}, d<={}, k<={})",
            self.status, self.seed, self.n, self.d, self.k
        )
        .unwrap();
        writeln!(
            out,
            "{:<12} {:>9} {:>7} {:>10} {:>8}",
            "kind", "instances", "match", "mismatch", "wipeout"
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:<12} {:>9} {:>7} {:>10} {:>8}",
                r.kind, r.instances, r.matches, r.mismatches, r.wipeouts
            )
            .unwrap();
        }
        if let Some(file) = &self.first_mismatch {
            writeln!(out, "first mismatch:\n{file}").unwrap();
        }
        writeln!(out, "wall_time_ms: {:.3}", self.wall_time_ms).unwrap();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub kind: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Median seconds per filter call.
    pub seconds: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn seconds(&self, n: usize, k: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.k == k)
            .map(|r| r.seconds)
    }
}

impl Render for BenchReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "kind\tn\tk\td\tseconds\tsamples").unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.9}\t{}",
                r.kind, r.n, r.k, r.d, r.seconds, r.samples
            )
            .unwrap();
        }
        out
    }
}
