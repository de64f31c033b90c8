//! Domain types: stances, stance matrices, source strategies, world
//! configuration and the structural-assumption check.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A source's position on one claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stance {
    Support,
    Contradict,
    Abstain,
}

impl Stance {
    /// Coverage indicator: true unless the source abstains.
    pub fn is_polar(self) -> bool {
        !matches!(self, Stance::Abstain)
    }

    /// Polar stance for a binary report (1 = support).
    pub fn from_report(report: bool) -> Self {
        if report {
            Stance::Support
        } else {
            Stance::Contradict
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stance::Support => "support",
            Stance::Contradict => "contradict",
            Stance::Abstain => "abstain",
        }
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "support" | "s" | "1" => Ok(Stance::Support),
            "contradict" | "c" | "0" => Ok(Stance::Contradict),
            "abstain" | "a" | "no_stance" | "none" => Ok(Stance::Abstain),
            other => Err(Error::shape(format!("unknown stance {other:?}"))),
        }
    }
}

/// Rectangular sources × claims table of stances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StanceMatrixWire", into = "StanceMatrixWire")]
pub struct StanceMatrix {
    source_ids: Vec<String>,
    n_claims: usize,
    entries: Vec<Stance>,
}

#[derive(Serialize, Deserialize)]
struct StanceMatrixWire {
    source_ids: Vec<String>,
    claims: usize,
    rows: Vec<Vec<Stance>>,
}

impl TryFrom<StanceMatrixWire> for StanceMatrix {
    type Error = Error;

    fn try_from(wire: StanceMatrixWire) -> Result<Self> {
        let matrix = StanceMatrix::new(wire.source_ids, wire.rows)?;
        if matrix.n_claims != wire.claims {
            return Err(Error::shape(format!(
                "declared {} claims but rows have {}",
                wire.claims, matrix.n_claims
            )));
        }
        Ok(matrix)
    }
}

impl From<StanceMatrix> for StanceMatrixWire {
    fn from(m: StanceMatrix) -> Self {
        let rows = (0..m.n_sources()).map(|i| m.row(i).to_vec()).collect();
        StanceMatrixWire {
            claims: m.n_claims,
            source_ids: m.source_ids,
            rows,
        }
    }
}

impl StanceMatrix {
    /// Build from per-source rows; every row must have the same length and
    /// source ids must be unique.
    pub fn new(source_ids: Vec<String>, rows: Vec<Vec<Stance>>) -> Result<Self> {
        if source_ids.len() != rows.len() {
            return Err(Error::shape(format!(
                "{} source ids for {} rows",
                source_ids.len(),
                rows.len()
            )));
        }
        let mut seen = HashSet::new();
        for id in &source_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::shape(format!("duplicate source id {id:?}")));
            }
        }
        let n_claims = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_claims) {
            return Err(Error::shape(format!(
                "row {i} has {} entries, expected {n_claims}",
                row.len()
            )));
        }
        Ok(StanceMatrix {
            source_ids,
            n_claims,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Build with generated ids `s0, s1, ...`.
    pub fn from_rows(rows: Vec<Vec<Stance>>) -> Result<Self> {
        let ids = (0..rows.len()).map(|i| format!("s{i}")).collect();
        Self::new(ids, rows)
    }

    pub(crate) fn from_flat(source_ids: Vec<String>, n_claims: usize, entries: Vec<Stance>) -> Self {
        debug_assert_eq!(source_ids.len() * n_claims, entries.len());
        StanceMatrix {
            source_ids,
            n_claims,
            entries,
        }
    }

    pub fn n_sources(&self) -> usize {
        self.source_ids.len()
    }

    pub fn n_claims(&self) -> usize {
        self.n_claims
    }

    pub fn source_ids(&self) -> &[String] {
        &self.source_ids
    }

    pub fn row(&self, source: usize) -> &[Stance] {
        &self.entries[source * self.n_claims..(source + 1) * self.n_claims]
    }

    pub fn get(&self, source: usize, claim: usize) -> Stance {
        self.entries[source * self.n_claims + claim]
    }

    pub fn set(&mut self, source: usize, claim: usize, stance: Stance) {
        self.entries[source * self.n_claims + claim] = stance;
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Scripted behaviour that overrides the generic `(q1, q0)` reporting rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Script {
    /// Report the private signal on every spoken claim.
    Truthful,
    /// Report the signal, flipped independently with probability `fraction`.
    Flip { fraction: f64 },
    /// Support with probability `p`, ignoring the signal.
    UninformedRandom { p: f64 },
    /// Same stance on every spoken claim.
    Constant { stance: Stance },
}

/// Generative behaviour of one source.
///
/// Coverage gates the source: with probability `coverage` it takes a polar
/// stance on a claim, otherwise it abstains. Conditional on speaking, the
/// stance follows the script if one is set, else the `(q1, q0)` rule applied
/// to the private signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceStrategy {
    pub effort: bool,
    /// `s1 = Pr(z = 1 | θ = 1)`
    pub signal_accuracy_true: f64,
    /// `s0 = Pr(z = 1 | θ = 0)`
    pub signal_accuracy_false: f64,
    /// `q1 = Pr(r = 1 | z = 1)`
    pub report_given_one: f64,
    /// `q0 = Pr(r = 1 | z = 0)`
    pub report_given_zero: f64,
    pub coverage: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub script: Option<Script>,
}

impl SourceStrategy {
    /// Effort plus truthful reporting of a signal with accuracies `(s1, s0)`.
    pub fn truthful(s1: f64, s0: f64, coverage: f64) -> Self {
        SourceStrategy {
            effort: true,
            signal_accuracy_true: s1,
            signal_accuracy_false: s0,
            report_given_one: 1.0,
            report_given_zero: 0.0,
            coverage,
            script: Some(Script::Truthful),
        }
    }

    /// Effort, then the generic reporting rule `(q1, q0)`.
    pub fn reporting(q1: f64, q0: f64, s1: f64, s0: f64, coverage: f64) -> Self {
        SourceStrategy {
            effort: true,
            signal_accuracy_true: s1,
            signal_accuracy_false: s0,
            report_given_one: q1,
            report_given_zero: q0,
            coverage,
            script: None,
        }
    }

    /// Truthful reporting with a fraction `phi` of stances flipped.
    pub fn flipping(phi: f64, s1: f64, s0: f64, coverage: f64) -> Self {
        SourceStrategy {
            script: Some(Script::Flip { fraction: phi }),
            ..Self::truthful(s1, s0, coverage)
        }
    }

    /// No effort: the signal carries no information about the claim.
    pub fn no_effort(q1: f64, q0: f64, coverage: f64) -> Self {
        SourceStrategy {
            effort: false,
            signal_accuracy_true: 0.5,
            signal_accuracy_false: 0.5,
            report_given_one: q1,
            report_given_zero: q0,
            coverage,
            script: None,
        }
    }

    pub fn uninformed_random(p: f64, coverage: f64) -> Self {
        SourceStrategy {
            effort: false,
            script: Some(Script::UninformedRandom { p }),
            ..Self::no_effort(p, p, coverage)
        }
    }

    pub fn constant(stance: Stance, coverage: f64) -> Self {
        let p = if stance == Stance::Support { 1.0 } else { 0.0 };
        SourceStrategy {
            effort: false,
            script: Some(Script::Constant { stance }),
            ..Self::no_effort(p, p, coverage)
        }
    }

    /// `s1 - s0` under effort, zero without it.
    pub fn signal_informativeness(&self) -> f64 {
        if self.effort {
            self.signal_accuracy_true - self.signal_accuracy_false
        } else {
            0.0
        }
    }

    /// Multiplier mapping signal informativeness to report informativeness.
    pub fn reporting_factor(&self) -> f64 {
        if !self.effort {
            return 0.0;
        }
        match self.script {
            Some(Script::Truthful) => 1.0,
            Some(Script::Flip { fraction }) => 1.0 - 2.0 * fraction,
            Some(Script::UninformedRandom { .. }) | Some(Script::Constant { .. }) => 0.0,
            None => self.report_given_one - self.report_given_zero,
        }
    }

    /// Is this a colluding constant-polar-stance script?
    pub fn is_constant_polar(&self) -> bool {
        matches!(self.script, Some(Script::Constant { stance }) if stance.is_polar())
    }

    /// Probability of a SUPPORT report given the private signal, on a spoken claim.
    pub(crate) fn support_probability(&self, signal: bool) -> f64 {
        match self.script {
            Some(Script::Truthful) => f64::from(u8::from(signal)),
            Some(Script::Flip { fraction }) => {
                if signal {
                    1.0 - fraction
                } else {
                    fraction
                }
            }
            Some(Script::UninformedRandom { p }) => p,
            Some(Script::Constant { stance }) => f64::from(u8::from(stance == Stance::Support)),
            None => {
                if signal {
                    self.report_given_one
                } else {
                    self.report_given_zero
                }
            }
        }
    }

    /// Structural problems with this strategy's parameters.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let probs = [
            ("signal_accuracy_true", self.signal_accuracy_true),
            ("signal_accuracy_false", self.signal_accuracy_false),
            ("report_given_one", self.report_given_one),
            ("report_given_zero", self.report_given_zero),
            ("coverage", self.coverage),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                out.push(format!("{name} = {p} outside [0, 1]"));
            }
        }
        match self.script {
            Some(Script::Flip { fraction }) if !(0.0..=0.5).contains(&fraction) => {
                out.push(format!("flip fraction {fraction} outside [0, 0.5]"));
            }
            Some(Script::UninformedRandom { p }) if !(0.0..=1.0).contains(&p) => {
                out.push(format!("uninformed support probability {p} outside [0, 1]"));
            }
            Some(Script::Truthful)
                if !self.effort || self.report_given_one != 1.0 || self.report_given_zero != 0.0 =>
            {
                out.push("truthful script requires effort and (q1, q0) = (1, 0)".into());
            }
            _ => {}
        }
        out
    }
}

/// Report informativeness `η = (q1 − q0)(s1 − s0)` induced by a strategy.
///
/// Flipping a fraction φ attenuates it to `(1 − 2φ)(s1 − s0)`; uninformed,
/// constant and no-effort strategies give zero.
pub fn policy_informativeness(strategy: &SourceStrategy) -> f64 {
    strategy.reporting_factor() * strategy.signal_informativeness()
}

/// Full parameterization of a synthetic world.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub prior: f64,
    pub n_claims: usize,
    pub strategies: Vec<SourceStrategy>,
    /// Per-(source, claim) coverage; overrides each strategy's scalar coverage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peer_coverage: Option<Vec<Vec<f64>>>,
    /// Per-(source, claim) signal informativeness in [−1, 1]. When present a
    /// source's signal on claim k has accuracies `((1+η)/2, (1−η)/2)` and its
    /// reporting rule is applied on top.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peer_informativeness: Option<Vec<Vec<f64>>>,
    /// Benefit of inclusion per source; empty means 1 for everyone.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub value_of_inclusion: Vec<f64>,
    /// Effort cost per source; empty means 0 for everyone.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub effort_cost: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reputation_weights: Option<Vec<f64>>,
    pub seed: u64,
}

impl WorldConfig {
    pub fn new(prior: f64, n_claims: usize, strategies: Vec<SourceStrategy>, seed: u64) -> Self {
        WorldConfig {
            name: None,
            prior,
            n_claims,
            strategies,
            peer_coverage: None,
            peer_informativeness: None,
            value_of_inclusion: Vec::new(),
            effort_cost: Vec::new(),
            reputation_weights: None,
            seed,
        }
    }

    pub fn n_sources(&self) -> usize {
        self.strategies.len()
    }

    pub fn value(&self, source: usize) -> f64 {
        self.value_of_inclusion.get(source).copied().unwrap_or(1.0)
    }

    pub fn cost(&self, source: usize) -> f64 {
        self.effort_cost.get(source).copied().unwrap_or(0.0)
    }

    fn matrix_ok(&self, m: &Option<Vec<Vec<f64>>>) -> bool {
        m.as_ref().is_none_or(|rows| {
            rows.len() == self.n_sources() && rows.iter().all(|r| r.len() == self.n_claims)
        })
    }

    /// Coverage `α_jk`; malformed matrices fall back to the scalar strategy value.
    pub fn coverage(&self, source: usize, claim: usize) -> f64 {
        match &self.peer_coverage {
            Some(m) if self.matrix_ok(&self.peer_coverage) => m[source][claim],
            _ => self.strategies[source].coverage,
        }
    }

    /// Signal informativeness on claim `k` (zero without effort).
    pub fn signal_informativeness(&self, source: usize, claim: usize) -> f64 {
        let strategy = &self.strategies[source];
        match &self.peer_informativeness {
            Some(m) if self.matrix_ok(&self.peer_informativeness) => {
                if strategy.effort {
                    m[source][claim]
                } else {
                    0.0
                }
            }
            _ => strategy.signal_informativeness(),
        }
    }

    /// Report informativeness `η_jk`.
    pub fn report_informativeness(&self, source: usize, claim: usize) -> f64 {
        self.strategies[source].reporting_factor() * self.signal_informativeness(source, claim)
    }

    /// Signal accuracies `(s1, s0)` of `source` on `claim`.
    pub(crate) fn signal_accuracies(&self, source: usize, claim: usize) -> (f64, f64) {
        let strategy = &self.strategies[source];
        if !strategy.effort {
            return (0.5, 0.5);
        }
        match &self.peer_informativeness {
            Some(m) if self.matrix_ok(&self.peer_informativeness) => {
                let eta = m[source][claim];
                ((1.0 + eta) / 2.0, (1.0 - eta) / 2.0)
            }
            _ => (strategy.signal_accuracy_true, strategy.signal_accuracy_false),
        }
    }

    /// Copy with source `i`'s strategy replaced.
    pub fn with_strategy(&self, source: usize, strategy: SourceStrategy) -> Self {
        let mut out = self.clone();
        out.strategies[source] = strategy;
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, serde_json::to_string_pretty(self)?).map_err(|e| Error::io(path, e))
    }

    /// Errors that make sampling impossible (as opposed to violated modelling
    /// assumptions, which `validate_config` only reports).
    pub(crate) fn check_structure(&self) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(Error::shape("world has no sources"));
        }
        if self.n_claims == 0 {
            return Err(Error::shape("world has no claims"));
        }
        if !(0.0..=1.0).contains(&self.prior) {
            return Err(Error::shape(format!("prior {} outside [0, 1]", self.prior)));
        }
        if !self.matrix_ok(&self.peer_coverage) {
            return Err(Error::shape("peer_coverage must be n_sources x n_claims"));
        }
        if !self.matrix_ok(&self.peer_informativeness) {
            return Err(Error::shape("peer_informativeness must be n_sources x n_claims"));
        }
        for (i, s) in self.strategies.iter().enumerate() {
            if let Some(v) = s.violations().into_iter().next() {
                return Err(Error::shape(format!("strategy {i}: {v}")));
            }
        }
        Ok(())
    }
}

/// A modelling assumption the configuration fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Violation {
    PriorOutOfRange(f64),
    TooFewSources(usize),
    TooFewClaims(usize),
    MalformedMatrix(String),
    InvalidStrategy { source: usize, message: String },
    ValueNotAboveCost { source: usize, value: f64, cost: f64 },
    MarginNonpositive(f64),
    InvalidWeights(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PriorOutOfRange(p) => write!(f, "prior {p} must lie in (0, 1)"),
            Violation::TooFewSources(n) => write!(f, "need at least 2 sources, got {n}"),
            Violation::TooFewClaims(k) => write!(f, "need at least 3 claims, got {k}"),
            Violation::MalformedMatrix(m) => write!(f, "malformed matrix: {m}"),
            Violation::InvalidStrategy { source, message } => {
                write!(f, "strategy {source}: {message}")
            }
            Violation::ValueNotAboveCost { source, value, cost } => {
                write!(f, "value of inclusion must exceed effort cost (source {source}: v = {value}, c = {cost})")
            }
            Violation::MarginNonpositive(g) => write!(f, "peer margin nonpositive (gamma = {g})"),
            Violation::InvalidWeights(m) => write!(f, "invalid reputation weights: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Minimum over scored sources of the average peer margin.
    pub margin: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check a world against the model's assumptions and compute the peer margin
/// `γ = min_i (1/K) Σ_k 2π(1−π) Γ_i(k)`, where `Γ_i(k)` is the (weighted)
/// mean of `α_jk η_jk` over peers `j ≠ i`.
pub fn validate_config(config: &WorldConfig) -> ValidationReport {
    let mut violations = Vec::new();
    let n = config.n_sources();
    let k = config.n_claims;
    if !(config.prior > 0.0 && config.prior < 1.0) {
        violations.push(Violation::PriorOutOfRange(config.prior));
    }
    if n < 2 {
        violations.push(Violation::TooFewSources(n));
    }
    if k < 3 {
        violations.push(Violation::TooFewClaims(k));
    }
    for (name, m, lo) in [
        ("peer_coverage", &config.peer_coverage, 0.0),
        ("peer_informativeness", &config.peer_informativeness, -1.0),
    ] {
        if let Some(rows) = m {
            if !config.matrix_ok(m) {
                violations.push(Violation::MalformedMatrix(format!(
                    "{name} must have shape {n} x {k}"
                )));
            } else if rows.iter().flatten().any(|x| !(lo..=1.0).contains(x)) {
                violations.push(Violation::MalformedMatrix(format!(
                    "{name} entries must lie in [{lo}, 1]"
                )));
            }
        }
    }
    for (i, s) in config.strategies.iter().enumerate() {
        for message in s.violations() {
            violations.push(Violation::InvalidStrategy { source: i, message });
        }
    }
    for (name, v) in [("value_of_inclusion", &config.value_of_inclusion), ("effort_cost", &config.effort_cost)] {
        if !v.is_empty() && v.len() != n {
            violations.push(Violation::MalformedMatrix(format!("{name} must have {n} entries")));
        }
    }
    for i in 0..n {
        let (value, cost) = (config.value(i), config.cost(i));
        if value <= cost || value <= 0.0 || cost < 0.0 {
            violations.push(Violation::ValueNotAboveCost { source: i, value, cost });
        }
    }
    let weights = config.reputation_weights.as_deref();
    if let Some(w) = weights {
        if w.len() != n {
            violations.push(Violation::InvalidWeights(format!("expected {n} weights, got {}", w.len())));
        } else if w.iter().any(|x| !(0.0..=1.0).contains(x)) {
            violations.push(Violation::InvalidWeights("weights must lie in [0, 1]".into()));
        }
    }
    let weights = weights.filter(|w| w.len() == n);

    let margin = if n < 2 || k == 0 {
        0.0
    } else {
        let scale = 2.0 * config.prior * (1.0 - config.prior);
        (0..n)
            .map(|i| {
                let total: f64 = (0..k)
                    .map(|c| {
                        let mut num = 0.0;
                        let mut den = 0.0;
                        for j in (0..n).filter(|&j| j != i) {
                            let w = weights.map_or(1.0, |w| w[j]);
                            num += w * config.coverage(j, c) * config.report_informativeness(j, c);
                            den += w;
                        }
                        if den > 0.0 {
                            scale * num / den
                        } else {
                            0.0
                        }
                    })
                    .sum();
                total / k as f64
            })
            .fold(f64::INFINITY, f64::min)
    };
    if margin <= 0.0 {
        violations.push(Violation::MarginNonpositive(margin));
    }
    ValidationReport { violations, margin }
}

/// Scores and inclusion decisions for every source in a pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    /// `ŵ_i` per source id.
    pub scores: IndexMap<String, f64>,
    pub included: IndexMap<String, bool>,
    pub threshold: f64,
    /// `σ̄_ij` per scored source, keyed by peer id.
    pub peer_components: IndexMap<String, IndexMap<String, f64>>,
    /// Off-task permutation (0-based) used for each scored source.
    pub permutations: IndexMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility: Option<IndexMap<String, f64>>,
}

/// One atomic claim in a held-out claim set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub text: String,
}

/// Claims a source is judged on, built without that source's document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSet {
    pub scored_source: String,
    pub claims: Vec<Claim>,
    /// Documents that produced the draft the claims came from.
    pub provenance: Vec<String>,
}

impl ClaimSet {
    pub fn new(scored_source: String, claims: Vec<Claim>, provenance: Vec<String>) -> Result<Self> {
        if provenance.iter().any(|p| *p == scored_source) {
            return Err(Error::shape(format!(
                "claim set for {scored_source} lists itself in provenance"
            )));
        }
        let mut ids = HashSet::new();
        for c in &claims {
            if !ids.insert(c.id.as_str()) {
                return Err(Error::shape(format!("duplicate claim id {:?}", c.id)));
            }
        }
        Ok(ClaimSet {
            scored_source,
            claims,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }
}
