//! Two-pass summarization: score each source on claims drafted from its
//! peers, drop the low scorers, then summarize what remains.
//!
//! Language-model work goes through three small traits so the same pipeline
//! runs against the deterministic providers in [`mock`] or an HTTP endpoint
//! in [`llm`].

pub mod llm;
pub mod mock;

use std::collections::HashSet;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ExtractionFailure, ExtractionRecord, Result};
use crate::mechanism::{hard_threshold_include, score_with_components, source_permutation};
use crate::model::{Claim, ClaimSet, ScoreReport, Stance, StanceMatrix};

/// Text shown when no source survives filtering.
pub const DEFAULT_ABSTENTION: &str = "No reliable answer could be produced: every retrieved source was filtered out.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub source_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
}

impl Document {
    pub fn new(source_id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            source_id: source_id.into(),
            text: text.into(),
            role: None,
        }
    }
}

/// Lowercase and collapse runs of whitespace.
pub fn normalize_text(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ProviderError(pub String);

pub trait Summarizer: Send + Sync {
    fn summarize(&self, query: &str, documents: &[&Document]) -> std::result::Result<String, ProviderError>;
}

pub trait Decomposer: Send + Sync {
    fn decompose(&self, draft: &str) -> std::result::Result<Vec<String>, ProviderError>;
}

pub trait StanceExtractor: Send + Sync {
    fn extract(&self, document: &Document, claim: &str) -> std::result::Result<Stance, ProviderError>;
}

#[derive(Clone)]
pub struct Providers {
    pub summarizer: Arc<dyn Summarizer>,
    pub decomposer: Arc<dyn Decomposer>,
    pub extractor: Arc<dyn StanceExtractor>,
}

impl Providers {
    /// Sentence-concatenating summarizer, sentence decomposer, keyed-fact extractor.
    pub fn mock() -> Self {
        Providers {
            summarizer: Arc::new(mock::ConcatSummarizer),
            decomposer: Arc::new(mock::SentenceDecomposer),
            extractor: Arc::new(mock::KeyedFactExtractor),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    /// Extra attempts per failed extraction call.
    pub extractor_retries: u32,
    /// Upper bound on concurrent extraction calls.
    pub max_in_flight: usize,
    pub abstention_text: String,
    /// One reputation weight per document, in pool order.
    pub weights: Option<Vec<f64>>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            extractor_retries: 3,
            max_in_flight: 8,
            abstention_text: DEFAULT_ABSTENTION.into(),
            weights: None,
        }
    }
}

fn provider_error(source_id: &str, stage: &'static str, e: ProviderError) -> Error {
    Error::Provider {
        source_id: source_id.to_string(),
        stage,
        message: e.0,
    }
}

/// Claims for scoring document `i`, drafted from every other document.
///
/// Claims are deduplicated on whitespace- and case-normalized text and get
/// ids `c0`, `c1`, ... in draft order.
pub fn build_loo_claimset(i: usize, query: &str, documents: &[Document], providers: &Providers) -> Result<ClaimSet> {
    if documents.len() < 2 {
        return Err(Error::NoPeers { source_index: i });
    }
    let scored = documents
        .get(i)
        .ok_or_else(|| Error::OutOfRange(format!("document index {i} >= {}", documents.len())))?;
    let peers: Vec<&Document> = documents.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, d)| d).collect();
    let draft = providers
        .summarizer
        .summarize(query, &peers)
        .map_err(|e| provider_error(&scored.source_id, "summarize", e))?;
    let raw = providers
        .decomposer
        .decompose(&draft)
        .map_err(|e| provider_error(&scored.source_id, "decompose", e))?;

    let mut seen = HashSet::new();
    let claims: Vec<Claim> = raw
        .into_iter()
        .map(|c| c.trim().to_string())
        .filter(|c| !c.is_empty() && seen.insert(normalize_text(c)))
        .enumerate()
        .map(|(n, text)| Claim { id: format!("c{n}"), text })
        .collect();
    if claims.len() < 3 {
        return Err(Error::InsufficientClaims {
            source_id: scored.source_id.clone(),
            count: claims.len(),
        });
    }
    ClaimSet::new(
        scored.source_id.clone(),
        claims,
        peers.iter().map(|d| d.source_id.clone()).collect(),
    )
}

/// Stance of every document toward every claim in `claim_set`.
///
/// Calls run on at most `max_in_flight` threads. If any call still fails after
/// its retries, the error carries every completed and failed cell.
pub fn extract_stance_matrix(
    documents: &[Document],
    claim_set: &ClaimSet,
    extractor: &dyn StanceExtractor,
    options: &PipelineOptions,
) -> Result<StanceMatrix> {
    let k = claim_set.len();
    let cells = documents.len() * k;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<std::result::Result<Stance, String>>>> = Mutex::new(vec![None; cells]);
    let workers = options.max_in_flight.max(1).min(cells.max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let cell = next.fetch_add(1, Ordering::Relaxed);
                if cell >= cells {
                    break;
                }
                let (d, c) = (cell / k, cell % k);
                let claim = &claim_set.claims[c].text;
                let mut outcome = Err(String::new());
                for attempt in 0..=options.extractor_retries {
                    match extractor.extract(&documents[d], claim) {
                        Ok(s) => {
                            outcome = Ok(s);
                            break;
                        }
                        Err(e) => {
                            log::warn!(
                                "extraction attempt {} for {} on {} failed: {e}",
                                attempt + 1,
                                documents[d].source_id,
                                claim_set.claims[c].id
                            );
                            outcome = Err(e.0);
                        }
                    }
                }
                results.lock().unwrap()[cell] = Some(outcome);
            });
        }
    });

    let results = results.into_inner().unwrap();
    let mut completed = Vec::new();
    let mut failed = Vec::new();
    let mut entries = Vec::with_capacity(cells);
    for (cell, r) in results.into_iter().enumerate() {
        let source_id = documents[cell / k].source_id.clone();
        let claim_id = claim_set.claims[cell % k].id.clone();
        match r.expect("every cell is visited") {
            Ok(stance) => {
                entries.push(stance);
                completed.push(ExtractionRecord { source_id, claim_id, stance });
            }
            Err(message) => {
                entries.push(Stance::Abstain);
                failed.push(ExtractionFailure { source_id, claim_id, message });
            }
        }
    }
    if !failed.is_empty() {
        return Err(Error::Extraction { completed, failed });
    }
    Ok(StanceMatrix::from_flat(
        documents.iter().map(|d| d.source_id.clone()).collect(),
        k,
        entries,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineResult {
    pub query: String,
    pub claim_sets: IndexMap<String, ClaimSet>,
    pub stance_matrices: IndexMap<String, StanceMatrix>,
    pub report: ScoreReport,
    pub reliable_set: Vec<String>,
    pub final_summary: String,
    pub abstained: bool,
}

/// Score every document on its held-out claims, keep those at or above
/// `threshold`, and summarize the kept documents.
pub fn run_tts(
    query: &str,
    documents: &[Document],
    threshold: f64,
    providers: &Providers,
    seed: u64,
    options: &PipelineOptions,
) -> Result<PipelineResult> {
    if !threshold.is_finite() {
        return Err(Error::domain("threshold must be finite"));
    }
    let mut ids = HashSet::new();
    for d in documents {
        if !ids.insert(d.source_id.as_str()) {
            return Err(Error::shape(format!("duplicate source id {:?}", d.source_id)));
        }
    }
    if let Some(w) = &options.weights {
        if w.len() != documents.len() {
            return Err(Error::shape(format!(
                "expected {} weights, got {}",
                documents.len(),
                w.len()
            )));
        }
    }

    let mut report = ScoreReport {
        scores: IndexMap::new(),
        included: IndexMap::new(),
        threshold,
        peer_components: IndexMap::new(),
        permutations: IndexMap::new(),
        utility: None,
    };
    let mut claim_sets = IndexMap::new();
    let mut stance_matrices = IndexMap::new();
    for (i, doc) in documents.iter().enumerate() {
        let claim_set = build_loo_claimset(i, query, documents, providers)?;
        let matrix = extract_stance_matrix(documents, &claim_set, providers.extractor.as_ref(), options)?;
        let perm = source_permutation(claim_set.len(), seed, i)?;
        let (score, comps) = score_with_components(i, &matrix, &perm, options.weights.as_deref())?;
        log::info!("source {} scored {score:.4} on {} claims", doc.source_id, claim_set.len());

        let id = doc.source_id.clone();
        report.included.insert(id.clone(), hard_threshold_include(score, threshold)?);
        report.scores.insert(id.clone(), score);
        report.peer_components.insert(
            id.clone(),
            comps.into_iter().map(|(j, s)| (documents[j].source_id.clone(), s)).collect(),
        );
        report.permutations.insert(id.clone(), perm.as_slice().to_vec());
        claim_sets.insert(id.clone(), claim_set);
        stance_matrices.insert(id, matrix);
    }

    let reliable: Vec<&Document> = documents.iter().filter(|d| report.included[&d.source_id]).collect();
    let (final_summary, abstained) = if reliable.is_empty() {
        (options.abstention_text.clone(), true)
    } else {
        let summary = providers
            .summarizer
            .summarize(query, &reliable)
            .map_err(|e| provider_error("<reliable set>", "final summary", e))?;
        (summary, false)
    };
    Ok(PipelineResult {
        query: query.to_string(),
        claim_sets,
        stance_matrices,
        reliable_set: reliable.iter().map(|d| d.source_id.clone()).collect(),
        report,
        final_summary,
        abstained,
    })
}

/// A query and its retrieved documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentPool {
    pub query: String,
    pub documents: Vec<Document>,
}

impl DocumentPool {
    /// Load a JSON manifest, or a directory holding `query.txt` plus one
    /// `.txt` file per document (source id = file stem, sorted by name).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if path.is_dir() {
            return Self::load_dir(path);
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let pool: DocumentPool = serde_json::from_str(&text)?;
        if pool.documents.is_empty() {
            return Err(Error::shape("document pool is empty"));
        }
        Ok(pool)
    }

    fn load_dir(dir: &Path) -> Result<Self> {
        let query_path = dir.join("query.txt");
        let query = std::fs::read_to_string(&query_path).map_err(|e| Error::io(&query_path, e))?;
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt") && p.file_name().is_some_and(|n| n != "query.txt"))
            .collect();
        paths.sort();
        let documents = paths
            .iter()
            .map(|p| {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                Ok(Document::new(id, text.trim()))
            })
            .collect::<Result<Vec<_>>>()?;
        if documents.is_empty() {
            return Err(Error::shape(format!("no .txt documents in {}", dir.display())));
        }
        Ok(DocumentPool {
            query: query.trim().to_string(),
            documents,
        })
    }
}
