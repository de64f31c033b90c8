//! Deterministic providers for tests, fixtures and offline runs.
//!
//! Documents are treated as lists of sentences. The summarizer concatenates
//! distinct sentences, the decomposer splits a draft back into sentences, and
//! the extractors decide stances from a lookup table or from simple
//! `"<subject> is <value>"` facts.

use std::collections::HashMap;

use super::{normalize_text, Decomposer, Document, ProviderError, StanceExtractor, Summarizer};
use crate::model::Stance;

/// Split prose on sentence terminators followed by whitespace or end of text.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        current.push(ch);
        if matches!(ch, '.' | '!' | '?') && chars.peek().is_none_or(|c| c.is_whitespace()) {
            let s = current.trim();
            if !s.is_empty() {
                out.push(s.to_string());
            }
            current.clear();
        }
    }
    let s = current.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
    out
}

/// Concatenates the distinct sentences of the given documents, in order.
#[derive(Debug, Default, Clone)]
pub struct ConcatSummarizer;

impl Summarizer for ConcatSummarizer {
    fn summarize(&self, _query: &str, documents: &[&Document]) -> Result<String, ProviderError> {
        let mut seen = std::collections::HashSet::new();
        let mut parts = Vec::new();
        for doc in documents {
            for sentence in split_sentences(&doc.text) {
                if seen.insert(normalize_text(&sentence)) {
                    parts.push(sentence);
                }
            }
        }
        Ok(parts.join(" "))
    }
}

/// One claim per sentence, terminal punctuation removed.
#[derive(Debug, Default, Clone)]
pub struct SentenceDecomposer;

impl Decomposer for SentenceDecomposer {
    fn decompose(&self, draft: &str) -> Result<Vec<String>, ProviderError> {
        Ok(split_sentences(draft)
            .into_iter()
            .map(|s| s.trim_end_matches(['.', '!', '?']).trim().to_string())
            .filter(|s| !s.is_empty())
            .collect())
    }
}

/// Stances looked up by `(source_id, normalized claim)`; missing entries abstain.
#[derive(Debug, Default, Clone)]
pub struct TableExtractor {
    table: HashMap<(String, String), Stance>,
}

impl TableExtractor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source_id: &str, claim: &str, stance: Stance) {
        self.table.insert((source_id.to_string(), normalize_text(claim)), stance);
    }
}

impl StanceExtractor for TableExtractor {
    fn extract(&self, document: &Document, claim: &str) -> Result<Stance, ProviderError> {
        Ok(self
            .table
            .get(&(document.source_id.clone(), normalize_text(claim)))
            .copied()
            .unwrap_or(Stance::Abstain))
    }
}

/// Reads sentences of the form `"<subject> is <value>"` as keyed facts.
///
/// A document supports a claim when it states the same value for the same
/// subject, contradicts it when it states only other values, and abstains
/// when it never mentions the subject (or states conflicting values).
#[derive(Debug, Default, Clone)]
pub struct KeyedFactExtractor;

const COPULAS: [&str; 3] = [" is ", " are ", " was "];

/// `(subject, value)` for a fact sentence.
pub fn parse_fact(sentence: &str) -> Option<(String, String)> {
    let norm = normalize_text(sentence.trim_end_matches(['.', '!', '?']));
    COPULAS.iter().filter_map(|c| norm.find(c).map(|p| (p, c.len()))).min().map(|(p, len)| {
        (norm[..p].trim().to_string(), norm[p + len..].trim().to_string())
    })
}

impl StanceExtractor for KeyedFactExtractor {
    fn extract(&self, document: &Document, claim: &str) -> Result<Stance, ProviderError> {
        let sentences = split_sentences(&document.text);
        let Some((key, value)) = parse_fact(claim) else {
            let target = normalize_text(claim.trim_end_matches(['.', '!', '?']));
            let found = sentences
                .iter()
                .any(|s| normalize_text(s.trim_end_matches(['.', '!', '?'])) == target);
            return Ok(if found { Stance::Support } else { Stance::Abstain });
        };
        let (mut same, mut other) = (false, false);
        for (k, v) in sentences.iter().filter_map(|s| parse_fact(s)) {
            if k == key {
                if v == value {
                    same = true;
                } else {
                    other = true;
                }
            }
        }
        Ok(match (same, other) {
            (true, false) => Stance::Support,
            (false, true) => Stance::Contradict,
            _ => Stance::Abstain,
        })
    }
}
