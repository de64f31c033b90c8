//! The `tts` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 provider error,
//! 5 experiment assertion failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analytics::{lipschitz_delta, mcdiarmid_tail, min_claims};
use crate::error::{Error, Result};
use crate::mechanism::{score_all, DEFAULT_THRESHOLD};
use crate::model::{validate_config, StanceMatrix, WorldConfig};
use crate::pipeline::llm::ProviderConfig;
use crate::pipeline::{run_tts, DocumentPool, PipelineOptions};
use crate::simulator::{self, ExperimentResult};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 24301;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tts", version, about = "Peer-prediction source scoring and filtered summarization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Replicate,
    IncentiveSweep,
    Collusion,
    Concentration,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Replicate => "replicate",
            Experiment::IncentiveSweep => "incentive-sweep",
            Experiment::Collusion => "collusion",
            Experiment::Concentration => "concentration",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every source in a stance matrix.
    Score {
        #[arg(long)]
        stances: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated reputation weights, one per source.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample-size and concentration calculators.
    Bounds {
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        value: f64,
        #[arg(long, default_value_t = 0.0)]
        cost: f64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        claims: Option<usize>,
        #[arg(long)]
        deviation: Option<f64>,
    },
    /// Validate a world configuration.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a Monte Carlo experiment on a synthetic world.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        experiment: Experiment,
        #[arg(long, default_value_t = 1000)]
        replications: usize,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for `<experiment>.csv` and `<experiment>.json`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Format of the per-cell lines on stdout.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        scored: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5")]
        phis: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3")]
        deviations: Vec<f64>,
        /// Keep per-replication samples in the JSON output.
        #[arg(long)]
        raw: bool,
    },
    /// Run the two-pass summarization pipeline over a document pool.
    Pipeline {
        /// JSON manifest, or a directory with query.txt and one .txt per document.
        #[arg(long)]
        manifest: PathBuf,
        /// `mock`, or a provider configuration file.
        #[arg(long, default_value = "mock")]
        provider: String,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output directory for result.json and summary.txt.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e)),
    }
}

fn line(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e))
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Score {
            stances,
            threshold,
            seed,
            weights,
            format,
            out: path,
        } => {
            let matrix = StanceMatrix::load(&stances)?;
            let report = score_all(&matrix, seed, threshold, weights.as_deref())?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["source", "score", "included"])?;
                    for (id, score) in &report.scores {
                        w.write_record([id.as_str(), &score.to_string(), &report.included[id].to_string()])?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?)
                        .expect("csv output is utf-8")
                }
            };
            emit(out, path.as_deref(), text.trim_end())
        }
        Command::Bounds {
            gap,
            margin,
            value,
            cost,
            epsilon,
            claims,
            deviation,
        } => {
            let mut result = serde_json::Map::new();
            let mut any = false;
            if gap.is_some() || margin.is_some() || epsilon.is_some() {
                let (Some(g), Some(m), Some(e)) = (gap, margin, epsilon) else {
                    return Err(Error::domain("min_claims needs --gap, --margin and --epsilon"));
                };
                result.insert("min_claims".into(), json!(min_claims(g, m, value, cost, e)?));
                any = true;
            }
            if claims.is_some() || deviation.is_some() {
                let (Some(k), Some(t)) = (claims, deviation) else {
                    return Err(Error::domain("mcdiarmid_tail needs --claims and --deviation"));
                };
                result.insert("mcdiarmid_tail".into(), json!(mcdiarmid_tail(k, t)?));
                result.insert("lipschitz_delta".into(), json!(lipschitz_delta(k)?));
                any = true;
            }
            if !any {
                return Err(Error::domain(
                    "nothing to compute: pass --gap/--margin/--epsilon and/or --claims/--deviation",
                ));
            }
            line(out, serde_json::to_string_pretty(&result)?)
        }
        Command::Validate { config } => {
            let config = WorldConfig::load(&config)?;
            let report = validate_config(&config);
            let messages: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            let summary = json!({"valid": report.is_valid(), "margin": report.margin, "violations": messages});
            line(out, serde_json::to_string_pretty(&summary)?)?;
            if report.is_valid() {
                Ok(())
            } else {
                Err(Error::Assertion(format!("{} violation(s)", report.violations.len())))
            }
        }
        Command::Simulate {
            config,
            experiment,
            replications,
            threshold,
            seed,
            out: dir,
            format,
            scored,
            phis,
            deviations,
            raw,
        } => {
            let mut config = WorldConfig::load(&config)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            let mut assertion = None;
            let results: Vec<ExperimentResult> = match experiment {
                Experiment::Replicate => vec![simulator::run_replications(&config, replications, threshold)?],
                Experiment::IncentiveSweep => {
                    let r = simulator::incentive_sweep(&config, scored, &phis, replications, threshold)?;
                    let means: Vec<f64> = r.cells.iter().map(|c| c.mean).collect();
                    let sorted = phis.windows(2).all(|w| w[0] <= w[1]);
                    if sorted && means.windows(2).any(|w| w[1] > w[0]) {
                        assertion = Some("mean score is not nonincreasing in the flip fraction".to_string());
                    }
                    vec![r]
                }
                Experiment::Collusion => {
                    let r = simulator::collusion_experiment(&config, replications, threshold)?;
                    if !r.tts_ordering_holds {
                        assertion = Some("colluders are not outscored by truthful sources".into());
                    } else if !r.majority_ordering_holds {
                        assertion = Some("majority baseline does not favour the colluders".into());
                    }
                    vec![r.tts, r.majority]
                }
                Experiment::Concentration => {
                    let r = simulator::concentration_experiment(&config, scored, &deviations, replications)?;
                    if !r.holds {
                        assertion = Some("an empirical tail exceeds the bound".into());
                    }
                    vec![r.result]
                }
            };
            let results: Vec<ExperimentResult> = if raw {
                results
            } else {
                results.into_iter().map(ExperimentResult::without_raw).collect()
            };

            let mut csv_bytes = Vec::new();
            {
                let mut w = csv::Writer::from_writer(&mut csv_bytes);
                w.write_record(simulator::CSV_COLUMNS)?;
                w.flush().map_err(|e| Error::io("<csv>", e))?;
            }
            for r in &results {
                let mut body = Vec::new();
                r.write_csv(&mut body)?;
                let text = String::from_utf8(body).expect("csv output is utf-8");
                csv_bytes.extend(text.lines().skip(1).flat_map(|l| format!("{l}\n").into_bytes()));
            }
            let name = experiment.name();
            write_file(&dir.join(format!("{name}.csv")), &String::from_utf8(csv_bytes).expect("utf-8"))?;
            let json = serde_json::to_string_pretty(&json!({
                "experiment": name,
                "seed": config.seed,
                "replications": replications,
                "threshold": threshold,
                "results": results,
            }))?;
            write_file(&dir.join(format!("{name}.json")), &json)?;

            for r in &results {
                for c in &r.cells {
                    match format {
                        Format::Csv => line(
                            out,
                            format_args!(
                                "{},{},{},{},{}",
                                r.experiment,
                                c.cell,
                                c.mean,
                                c.se.map(|s| s.to_string()).unwrap_or_default(),
                                c.analytic.or(c.bound).map(|s| s.to_string()).unwrap_or_default()
                            ),
                        )?,
                        Format::Json => line(out, serde_json::to_string(c)?)?,
                    }
                }
            }
            match assertion {
                Some(msg) => Err(Error::Assertion(msg)),
                None => Ok(()),
            }
        }
        Command::Pipeline {
            manifest,
            provider,
            threshold,
            seed,
            out: dir,
        } => {
            let pool = DocumentPool::load(&manifest)?;
            let providers = if provider == "mock" {
                ProviderConfig::mock().build(Path::new("."))?
            } else {
                let path = PathBuf::from(&provider);
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                ProviderConfig::load(&path)?.build(&base)?
            };
            let result = run_tts(
                &pool.query,
                &pool.documents,
                threshold,
                &providers,
                seed,
                &PipelineOptions::default(),
            )?;
            write_file(&dir.join("result.json"), &serde_json::to_string_pretty(&result)?)?;
            write_file(&dir.join("summary.txt"), &format!("{}\n", result.final_summary))?;
            for (id, score) in &result.report.scores {
                let verdict = if result.report.included[id] { "kept" } else { "dropped" };
                line(out, format_args!("{id}\t{score:.4}\t{verdict}"))?;
            }
            if result.abstained {
                line(out, "abstained: no source reached the threshold")?;
            }
            Ok(())
        }
    }
}
