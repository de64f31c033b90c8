//! Synthetic worlds and Monte Carlo experiments.
//!
//! Claims are independent blocks: each draws a latent truth, then every source
//! independently draws a coverage gate, a private signal and a report. All
//! randomness flows from counter-derived ChaCha streams, so an experiment is
//! bit-identical however its replications are scheduled.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::{expected_source_score, mcdiarmid_tail, ExpectedScoreParams};
use crate::error::{Error, Result};
use crate::mechanism::{majority_score, scores_only};
use crate::model::{Script, SourceStrategy, Stance, StanceMatrix, WorldConfig};
use crate::rng::{derive_seed, stream_rng};

const SCORE_SALT: u64 = 0x5C0F_E5EE_D000_0001;

/// Statistical checks allow this many standard errors of slack.
pub const SE_SLACK: f64 = 4.0;

/// One realized world.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorldSample {
    /// `θ_k`
    pub truths: Vec<bool>,
    /// `z_ik`, row-major by source.
    pub signals: Vec<bool>,
    /// `Q_ik`, row-major by source.
    pub gates: Vec<bool>,
    pub stances: StanceMatrix,
}

impl WorldSample {
    pub fn signal(&self, source: usize, claim: usize) -> bool {
        self.signals[source * self.truths.len() + claim]
    }

    pub fn gate(&self, source: usize, claim: usize) -> bool {
        self.gates[source * self.truths.len() + claim]
    }
}

/// Sample a world. Accepts any prior in [0, 1]; modelling assumptions are
/// `validate_config`'s job.
pub fn sample_world(config: &WorldConfig, seed: u64) -> Result<WorldSample> {
    config.check_structure()?;
    let n = config.n_sources();
    let k = config.n_claims;
    let mut rng = stream_rng(seed, 0);
    let mut truths = Vec::with_capacity(k);
    let mut signals = vec![false; n * k];
    let mut gates = vec![false; n * k];
    let mut entries = vec![Stance::Abstain; n * k];
    for c in 0..k {
        let theta = rng.gen::<f64>() < config.prior;
        truths.push(theta);
        for j in 0..n {
            // Fixed draw count per cell keeps streams aligned across strategies.
            let (u_gate, u_signal, u_report): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
            let idx = j * k + c;
            let gate = u_gate < config.coverage(j, c);
            let (s1, s0) = config.signal_accuracies(j, c);
            let signal = u_signal < if theta { s1 } else { s0 };
            gates[idx] = gate;
            signals[idx] = signal;
            if gate {
                let p = config.strategies[j].support_probability(signal);
                entries[idx] = Stance::from_report(u_report < p);
            }
        }
    }
    let ids = (0..n).map(|i| format!("s{i}")).collect();
    Ok(WorldSample {
        truths,
        signals,
        gates,
        stances: StanceMatrix::from_flat(ids, k, entries),
    })
}

/// Aggregate statistics for one experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub cell: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<(String, f64)>,
    pub replications: usize,
    pub mean: f64,
    /// Sample standard deviation over √R; absent for a single replication.
    pub se: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inclusion_frequency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utility: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<f64>>,
}

impl CellResult {
    fn from_samples(cell: String, samples: Vec<f64>) -> Self {
        let (mean, se) = mean_and_se(&samples);
        CellResult {
            cell,
            source: None,
            parameter: None,
            replications: samples.len(),
            mean,
            se,
            inclusion_frequency: None,
            utility: None,
            analytic: None,
            bound: None,
            raw: Some(samples),
        }
    }

    /// `|mean − analytic| ≤ slack·SE`; None without an analytic value.
    pub fn within_se_of_analytic(&self, slack: f64) -> Option<bool> {
        let analytic = self.analytic?;
        Some((self.mean - analytic).abs() <= slack * self.se.unwrap_or(0.0))
    }
}

/// Fixed-order mean and standard error.
pub fn mean_and_se(samples: &[f64]) -> (f64, Option<f64>) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, None);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, None);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Some((var / n as f64).sqrt()))
}

/// Histogram of `values` over `[lo, hi)` with `bins` equal bins, as densities.
pub fn density_histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v >= lo && v <= hi {
            let b = (((v - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
    }
    let total = values.len().max(1) as f64;
    counts
        .iter()
        .enumerate()
        .map(|(b, &c)| (lo + (b as f64 + 0.5) * width, c as f64 / (total * width)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub cells: Vec<CellResult>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    cell: &'a str,
    source: Option<usize>,
    param_name: Option<&'a str>,
    param_value: Option<f64>,
    replications: usize,
    mean: f64,
    se: Option<f64>,
    inclusion_frequency: Option<f64>,
    utility: Option<f64>,
    analytic: Option<f64>,
    bound: Option<f64>,
}

/// Column order of the experiment CSV.
pub const CSV_COLUMNS: &[&str] = &[
    "experiment",
    "cell",
    "source",
    "param_name",
    "param_value",
    "replications",
    "mean",
    "se",
    "inclusion_frequency",
    "utility",
    "analytic",
    "bound",
];

impl ExperimentResult {
    /// Drop per-replication samples.
    pub fn without_raw(mut self) -> Self {
        for c in &mut self.cells {
            c.raw = None;
        }
        self
    }

    pub fn cell(&self, name: &str) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.cell == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        for c in &self.cells {
            writer.serialize(CsvRow {
                experiment: &self.experiment,
                cell: &c.cell,
                source: c.source,
                param_name: c.parameter.as_ref().map(|p| p.0.as_str()),
                param_value: c.parameter.as_ref().map(|p| p.1),
                replications: c.replications,
                mean: c.mean,
                se: c.se,
                inclusion_frequency: c.inclusion_frequency,
                utility: c.utility,
                analytic: c.analytic,
                bound: c.bound,
            })?;
        }
        if self.cells.is_empty() {
            writer.write_record(CSV_COLUMNS)?;
        }
        writer.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Run `R` replications, returning `metric(world, score_seed)` for each in
/// replication order.
fn replicate<F>(config: &WorldConfig, replications: usize, metric: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&WorldSample, u64) -> Result<Vec<f64>> + Sync,
{
    if replications == 0 {
        return Err(Error::domain("need at least one replication"));
    }
    config.check_structure()?;
    (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let world = sample_world(config, derive_seed(config.seed, r))?;
            metric(&world, derive_seed(config.seed ^ SCORE_SALT, r))
        })
        .collect()
}

fn column(rows: &[Vec<f64>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i]).collect()
}

fn analytic_score(config: &WorldConfig, source: usize) -> Option<f64> {
    let params = ExpectedScoreParams::from_world(config, source);
    let weights = config
        .reputation_weights
        .as_ref()
        .map(|w| (0..config.n_sources()).filter(|&j| j != source).map(|j| w[j]).collect::<Vec<_>>());
    expected_source_score(&params, weights.as_deref()).ok()
}

fn inclusion_frequency(samples: &[f64], threshold: f64) -> f64 {
    samples.iter().filter(|&&s| s >= threshold).count() as f64 / samples.len() as f64
}

/// Per-source score statistics over `R` sampled worlds, alongside the
/// closed-form expectation and the inclusion-frequency utility estimate.
pub fn run_replications(config: &WorldConfig, replications: usize, threshold: f64) -> Result<ExperimentResult> {
    let weights = config.reputation_weights.clone();
    let rows = replicate(config, replications, |world, seed| scores_only(&world.stances, seed, weights.as_deref()))?;
    let cells = (0..config.n_sources())
        .map(|i| {
            let samples = column(&rows, i);
            let freq = inclusion_frequency(&samples, threshold);
            let effort = config.strategies[i].effort;
            let mut cell = CellResult::from_samples(format!("source={i}"), samples);
            cell.source = Some(i);
            cell.inclusion_frequency = Some(freq);
            cell.utility = Some(config.value(i) * freq - if effort { config.cost(i) } else { 0.0 });
            cell.analytic = analytic_score(config, i);
            cell
        })
        .collect();
    Ok(ExperimentResult {
        experiment: "replicate".into(),
        cells,
    })
}

/// Score the `scored` source under FLIP(φ) for each φ while peers keep their
/// strategies. Each φ reuses the same world seeds.
pub fn incentive_sweep(
    config: &WorldConfig,
    scored: usize,
    flip_fractions: &[f64],
    replications: usize,
    threshold: f64,
) -> Result<ExperimentResult> {
    let base = config
        .strategies
        .get(scored)
        .ok_or_else(|| Error::OutOfRange(format!("scored source {scored}")))?;
    if let Some(phi) = flip_fractions.iter().find(|p| !(0.0..=0.5).contains(*p)) {
        return Err(Error::domain(format!("flip fraction {phi} outside [0, 0.5]")));
    }
    let (s1, s0, coverage) = (base.signal_accuracy_true, base.signal_accuracy_false, base.coverage);
    let truthful_config = config.with_strategy(scored, SourceStrategy::truthful(s1, s0, coverage));
    let truthful_mean = analytic_score(&truthful_config, scored);
    let weights = config.reputation_weights.clone();
    let mut cells = Vec::with_capacity(flip_fractions.len());
    for &phi in flip_fractions {
        let cfg = config.with_strategy(scored, SourceStrategy::flipping(phi, s1, s0, coverage));
        let rows = replicate(&cfg, replications, |world, seed| {
            let perm = crate::mechanism::source_permutation(world.stances.n_claims(), seed, scored)?;
            Ok(vec![crate::mechanism::source_score(scored, &world.stances, &perm, weights.as_deref())?])
        })?;
        let samples = column(&rows, 0);
        let freq = inclusion_frequency(&samples, threshold);
        let mut cell = CellResult::from_samples(format!("phi={phi}"), samples);
        cell.source = Some(scored);
        cell.parameter = Some(("phi".into(), phi));
        cell.inclusion_frequency = Some(freq);
        cell.utility = Some(cfg.value(scored) * freq - cfg.cost(scored));
        cell.analytic = truthful_mean.map(|m| (1.0 - 2.0 * phi) * m);
        cells.push(cell);
    }
    Ok(ExperimentResult {
        experiment: "incentive-sweep".into(),
        cells,
    })
}

/// Correlated-agreement vs majority scores in a world with a colluding bloc.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollusionResult {
    pub tts: ExperimentResult,
    pub majority: ExperimentResult,
    pub colluders: Vec<usize>,
    pub truthful: Vec<usize>,
    /// Truthful sources outscore colluders under CA scoring.
    pub tts_ordering_holds: bool,
    /// Colluders outscore truthful sources under majority scoring.
    pub majority_ordering_holds: bool,
}

impl CollusionResult {
    pub fn ordering_holds(&self) -> bool {
        self.tts_ordering_holds && self.majority_ordering_holds
    }
}

fn extremes(result: &ExperimentResult, group: &[usize]) -> (f64, f64) {
    group.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
        let m = result.cells[i].mean;
        (lo.min(m), hi.max(m))
    })
}

pub fn collusion_experiment(config: &WorldConfig, replications: usize, threshold: f64) -> Result<CollusionResult> {
    let colluders: Vec<usize> = (0..config.n_sources()).filter(|&i| config.strategies[i].is_constant_polar()).collect();
    if colluders.len() < 2 {
        return Err(Error::domain("no colluders configured: need at least two constant-stance sources"));
    }
    let truthful: Vec<usize> = (0..config.n_sources())
        .filter(|&i| config.strategies[i].script == Some(Script::Truthful))
        .collect();
    let n = config.n_sources();
    let weights = config.reputation_weights.clone();
    let rows = replicate(config, replications, |world, seed| {
        let mut out = scores_only(&world.stances, seed, weights.as_deref())?;
        for i in 0..n {
            out.push(majority_score(i, &world.stances)?);
        }
        Ok(out)
    })?;
    let build = |offset: usize, name: &str, with_analytic: bool| ExperimentResult {
        experiment: name.into(),
        cells: (0..n)
            .map(|i| {
                let samples = column(&rows, offset + i);
                let freq = inclusion_frequency(&samples, threshold);
                let mut cell = CellResult::from_samples(format!("source={i}"), samples);
                cell.source = Some(i);
                cell.inclusion_frequency = Some(freq);
                if with_analytic {
                    cell.analytic = analytic_score(config, i);
                }
                cell
            })
            .collect(),
    };
    let tts = build(0, "collusion-tts", true);
    let majority = build(n, "collusion-majority", false);
    let (tts_ordering_holds, majority_ordering_holds) = if truthful.is_empty() {
        (false, false)
    } else {
        let (truthful_min, _) = extremes(&tts, &truthful);
        let (_, colluder_max) = extremes(&tts, &colluders);
        let (_, truthful_majority_max) = extremes(&majority, &truthful);
        let (colluder_majority_min, _) = extremes(&majority, &colluders);
        (truthful_min > colluder_max, colluder_majority_min > truthful_majority_max)
    };
    Ok(CollusionResult {
        tts,
        majority,
        colluders,
        truthful,
        tts_ordering_holds,
        majority_ordering_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationResult {
    pub result: ExperimentResult,
    /// Every empirical tail is at most bound + 4·SE.
    pub holds: bool,
}

/// Empirical `Pr(|ŵ − E ŵ| ≥ t)` for the `scored` source next to the
/// McDiarmid bound. The centre is the closed-form mean when the prior is
/// interior, else the empirical mean.
pub fn concentration_experiment(
    config: &WorldConfig,
    scored: usize,
    deviations: &[f64],
    replications: usize,
) -> Result<ConcentrationResult> {
    if scored >= config.n_sources() {
        return Err(Error::OutOfRange(format!("scored source {scored}")));
    }
    if let Some(t) = deviations.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::domain(format!("deviation {t} must be positive")));
    }
    let weights = config.reputation_weights.clone();
    let rows = replicate(config, replications, |world, seed| {
        let perm = crate::mechanism::source_permutation(world.stances.n_claims(), seed, scored)?;
        Ok(vec![crate::mechanism::source_score(scored, &world.stances, &perm, weights.as_deref())?])
    })?;
    let samples = column(&rows, 0);
    let analytic = analytic_score(config, scored);
    let centre = analytic.unwrap_or_else(|| mean_and_se(&samples).0);
    let r = samples.len() as f64;
    let mut holds = true;
    let mut cells = Vec::with_capacity(deviations.len());
    for &t in deviations {
        let p = samples.iter().filter(|&&s| (s - centre).abs() >= t).count() as f64 / r;
        let se = (p * (1.0 - p) / r).sqrt();
        let bound = mcdiarmid_tail(config.n_claims, t)?;
        holds &= p <= bound + SE_SLACK * se;
        cells.push(CellResult {
            cell: format!("t={t}"),
            source: Some(scored),
            parameter: Some(("t".into(), t)),
            replications: samples.len(),
            mean: p,
            se: Some(se),
            inclusion_frequency: None,
            utility: None,
            analytic,
            bound: Some(bound),
            raw: None,
        });
    }
    Ok(ConcentrationResult {
        result: ExperimentResult {
            experiment: "concentration".into(),
            cells,
        },
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanism::{source_permutation, source_score};
    use crate::model::SourceStrategy;

    fn truthful_world(n: usize, k: usize, seed: u64) -> WorldConfig {
        WorldConfig::new(0.5, k, vec![SourceStrategy::truthful(0.9, 0.1, 1.0); n], seed)
    }

    #[test]
    fn zero_coverage_abstains() {
        let mut config = truthful_world(3, 20, 1);
        config.strategies[1].coverage = 0.0;
        let w = sample_world(&config, 5).unwrap();
        assert!(w.stances.row(1).iter().all(|&s| s == Stance::Abstain));
        assert!(w.stances.row(0).iter().all(|&s| s.is_polar()));
    }

    #[test]
    fn noiseless_truthful_reports_truth() {
        let config = WorldConfig::new(0.4, 30, vec![SourceStrategy::truthful(1.0, 0.0, 1.0); 2], 2);
        let w = sample_world(&config, 9).unwrap();
        for (k, &theta) in w.truths.iter().enumerate() {
            assert_eq!(w.stances.get(0, k), Stance::from_report(theta));
            assert_eq!(w.signal(0, k), theta);
            assert!(w.gate(1, k));
        }
    }

    #[test]
    fn near_one_prior_is_accepted() {
        let config = WorldConfig::new(0.999, 10, vec![SourceStrategy::truthful(0.9, 0.1, 1.0); 2], 2);
        let w = sample_world(&config, 1).unwrap();
        assert_eq!(w.truths.len(), 10);
        let bad = WorldConfig { prior: 1.5, ..config };
        assert!(sample_world(&bad, 1).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let config = truthful_world(4, 25, 3);
        assert_eq!(sample_world(&config, 77).unwrap(), sample_world(&config, 77).unwrap());
        assert_ne!(sample_world(&config, 77).unwrap().truths, sample_world(&config, 78).unwrap().truths);
    }

    #[test]
    fn single_replication_has_no_se() {
        let config = truthful_world(3, 10, 4);
        let r = run_replications(&config, 1, 0.06).unwrap();
        assert!(r.cells.iter().all(|c| c.se.is_none() && c.replications == 1));
        assert_eq!(r.cells[0].mean, r.cells[0].raw.as_ref().unwrap()[0]);
        assert!(run_replications(&config, 0, 0.06).is_err());
    }

    #[test]
    fn replications_are_bit_reproducible() {
        let config = truthful_world(4, 20, 11);
        let a = run_replications(&config, 300, 0.06).unwrap();
        let b = run_replications(&config, 300, 0.06).unwrap();
        assert_eq!(a, b);
        let serial: Vec<f64> = (0..300u64)
            .map(|r| {
                let world = sample_world(&config, derive_seed(config.seed, r)).unwrap();
                scores_only(&world.stances, derive_seed(config.seed ^ SCORE_SALT, r), None).unwrap()[0]
            })
            .collect();
        assert_eq!(a.cells[0].raw.as_ref().unwrap(), &serial);
    }

    #[test]
    fn truthful_mean_matches_closed_form() {
        let config = truthful_world(4, 50, 12);
        let r = run_replications(&config, 4000, 0.06).unwrap();
        for c in &r.cells {
            assert!((c.analytic.unwrap() - 0.32).abs() < 1e-12);
            assert!(c.within_se_of_analytic(SE_SLACK).unwrap(), "{c:?}");
        }
    }

    #[test]
    fn sweep_rejects_bad_phi() {
        let config = truthful_world(4, 10, 1);
        assert!(incentive_sweep(&config, 0, &[0.6], 10, 0.06).is_err());
        let r = incentive_sweep(&config, 0, &[0.0, 0.25, 0.5], 2000, 0.06).unwrap();
        assert_eq!(r.cells.len(), 3);
        for c in &r.cells {
            assert!(c.within_se_of_analytic(SE_SLACK).unwrap(), "{c:?}");
        }
        assert!(r.cells[0].mean > r.cells[1].mean && r.cells[1].mean > r.cells[2].mean);
    }

    #[test]
    fn collusion_requires_colluders() {
        let config = truthful_world(4, 10, 1);
        assert!(collusion_experiment(&config, 10, 0.06).is_err());
    }

    #[test]
    fn support_colluders_still_cancel() {
        let mut strategies = vec![SourceStrategy::truthful(0.9, 0.1, 1.0); 2];
        strategies.extend(vec![SourceStrategy::constant(Stance::Support, 1.0); 4]);
        let config = WorldConfig::new(0.5, 50, strategies, 21);
        let r = collusion_experiment(&config, 2000, 0.06).unwrap();
        for &c in &r.colluders {
            let cell = &r.tts.cells[c];
            assert!(cell.mean.abs() <= SE_SLACK * cell.se.unwrap(), "{cell:?}");
        }
        assert!(r.ordering_holds());
    }

    #[test]
    fn concentration_trivial_deviation() {
        let config = truthful_world(4, 50, 5);
        let r = concentration_experiment(&config, 0, &[0.5, 2.0], 2000).unwrap();
        assert!(r.holds);
        assert_eq!(r.result.cells[1].mean, 0.0);
        assert!((r.result.cells[0].bound.unwrap() - 2.0 * (-25.0f64 / 9.0).exp()).abs() < 1e-15);
        assert!(concentration_experiment(&config, 0, &[0.0], 10).is_err());
    }

    #[test]
    fn sampled_worlds_respect_lipschitz() {
        let config = truthful_world(5, 12, 8);
        let mut rng = stream_rng(1, 1);
        for r in 0..30 {
            let world = sample_world(&config, r).unwrap();
            for i in 0..5 {
                let perm = source_permutation(12, r, i).unwrap();
                let before = source_score(i, &world.stances, &perm, None).unwrap();
                let mut changed = world.stances.clone();
                let col = rng.gen_range(0..12);
                for j in 0..5 {
                    let s = [Stance::Support, Stance::Contradict, Stance::Abstain][rng.gen_range(0..3)];
                    changed.set(j, col, s);
                }
                let after = source_score(i, &changed, &perm, None).unwrap();
                assert!((before - after).abs() <= 3.0 / 12.0 + 1e-12);
            }
        }
    }

    #[test]
    fn histogram_integrates_to_one() {
        let values: Vec<f64> = (0..1000).map(|i| (i as f64 / 1000.0) * 2.0 - 1.0).collect();
        let h = density_histogram(&values, 20, -1.0, 1.0);
        let mass: f64 = h.iter().map(|(_, d)| d * 0.1).sum();
        assert!((mass - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_header_is_stable() {
        let r = ExperimentResult { experiment: "x".into(), cells: vec![] };
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), CSV_COLUMNS.join(","));
    }
}
