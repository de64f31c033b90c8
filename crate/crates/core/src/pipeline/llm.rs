//! HTTP-backed providers talking to an OpenAI-compatible chat endpoint.

use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Decomposer, Document, ProviderError, Providers, StanceExtractor, Summarizer};
use crate::error::{Error, Result};
use crate::model::Stance;

pub const DEFAULT_CREDENTIAL_ENV: &str = "TTS_API_KEY";
pub const DEFAULT_MAX_RETRIES: u32 = 3;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

pub const SUMMARIZE_TEMPLATE: &str = "\
Answer the question below using only the numbered source documents. Start with a \
direct answer, then give a complete, detailed account that combines every relevant \
claim the sources make. Do not add facts that are not in the sources.

QUESTION: {query}

SOURCES:
{sources}

ANSWER:
";

pub const DECOMPOSE_TEMPLATE: &str = "\
Break the passage below into atomic claims. Each claim must be one self-contained, \
checkable statement about the world. Cover every statement in the passage. Drop any \
attribution to sources and keep each competing version of a fact as its own claim.

PASSAGE:
{draft}

Respond with a JSON object of the form {\"claims\": [\"...\", \"...\"]} and nothing else.
";

pub const EXTRACT_TEMPLATE: &str = "\
Decide the stance of the document toward the claim.
SUPPORT: the document states the claim explicitly, including any numbers or dates.
CONTRADICT: the document states something that makes the claim impossible, such as \
a different value for the same attribute or a direct negation.
NO_STANCE: the document does not address the claim or lacks the key details.
Think briefly, then give the answer inside stance tags, for example <stance>SUPPORT</stance>.

DOCUMENT:
{document}

CLAIM:
{claim}
";

/// Prompt text plus generation parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionRequest {
    pub prompt: String,
    pub temperature: Option<f64>,
    pub max_tokens: Option<u32>,
}

impl CompletionRequest {
    pub fn new(prompt: impl Into<String>) -> Self {
        CompletionRequest {
            prompt: prompt.into(),
            temperature: None,
            max_tokens: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransportError {
    Timeout,
    Network(String),
}

/// Minimal blocking POST used by [`LlmClient`]; swapped out in tests.
pub trait HttpTransport: Send + Sync {
    fn post_json(
        &self,
        url: &str,
        headers: &[(String, String)],
        body: &str,
        timeout: Duration,
    ) -> std::result::Result<HttpResponse, TransportError>;
}

/// [`HttpTransport`] over `ureq`.
#[derive(Debug, Default, Clone)]
pub struct UreqTransport;

impl HttpTransport for UreqTransport {
    fn post_json(
        &self,
        url: &str,
        headers: &[(String, String)],
        body: &str,
        timeout: Duration,
    ) -> std::result::Result<HttpResponse, TransportError> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let mut request = agent.post(url).header("content-type", "application/json");
        for (k, v) in headers {
            request = request.header(k.as_str(), v.as_str());
        }
        match request.send(body) {
            Ok(mut response) => {
                let status = response.status().as_u16();
                let body = response
                    .body_mut()
                    .read_to_string()
                    .map_err(|e| TransportError::Network(e.to_string()))?;
                Ok(HttpResponse { status, body })
            }
            Err(ureq::Error::Timeout(_)) => Err(TransportError::Timeout),
            Err(e) => Err(TransportError::Network(e.to_string())),
        }
    }
}

/// Where and how to reach the model.
#[derive(Debug, Clone, PartialEq)]
pub struct LlmEndpoint {
    pub base_url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub max_retries: u32,
    pub timeout: Duration,
    pub initial_backoff: Duration,
    pub max_backoff: Duration,
}

impl LlmEndpoint {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        LlmEndpoint {
            base_url: base_url.into(),
            model: model.into(),
            api_key: None,
            max_retries: DEFAULT_MAX_RETRIES,
            timeout: DEFAULT_TIMEOUT,
            initial_backoff: Duration::from_millis(500),
            max_backoff: Duration::from_secs(30),
        }
    }
}

pub struct LlmClient {
    endpoint: LlmEndpoint,
    transport: Arc<dyn HttpTransport>,
}

fn truncate(s: &str, max: usize) -> String {
    if s.len() <= max {
        return s.to_string();
    }
    let mut end = max;
    while !s.is_char_boundary(end) {
        end -= 1;
    }
    format!("{}...", &s[..end])
}

impl LlmClient {
    pub fn new(endpoint: LlmEndpoint, transport: Arc<dyn HttpTransport>) -> Self {
        LlmClient { endpoint, transport }
    }

    pub fn endpoint(&self) -> &LlmEndpoint {
        &self.endpoint
    }

    /// Send one chat completion, retrying timeouts, network errors, 429 and
    /// 5xx with exponential backoff. Returns the message content verbatim.
    pub fn complete(&self, request: &CompletionRequest) -> Result<String> {
        let url = format!("{}/chat/completions", self.endpoint.base_url.trim_end_matches('/'));
        let mut body = json!({
            "model": self.endpoint.model,
            "messages": [{"role": "user", "content": request.prompt}],
        });
        if let Some(t) = request.temperature {
            body["temperature"] = json!(t);
        }
        if let Some(m) = request.max_tokens {
            body["max_tokens"] = json!(m);
        }
        let body = body.to_string();
        let mut headers = Vec::new();
        if let Some(key) = &self.endpoint.api_key {
            headers.push(("authorization".to_string(), format!("Bearer {key}")));
        }

        let attempts = self.endpoint.max_retries + 1;
        let mut last_error = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                let factor = 2u32.saturating_pow(attempt - 1);
                let delay = self.endpoint.initial_backoff.saturating_mul(factor).min(self.endpoint.max_backoff);
                std::thread::sleep(delay);
            }
            match self.transport.post_json(&url, &headers, &body, self.endpoint.timeout) {
                Ok(resp) if (200..300).contains(&resp.status) => return extract_content(&resp.body),
                Ok(resp) if resp.status == 429 || resp.status >= 500 => {
                    last_error = format!("status {}: {}", resp.status, truncate(&resp.body, 200));
                    log::warn!("llm attempt {} of {attempts} failed with {last_error}", attempt + 1);
                }
                Ok(resp) => {
                    return Err(Error::Llm(format!("status {}: {}", resp.status, truncate(&resp.body, 200))));
                }
                Err(TransportError::Timeout) => {
                    last_error = format!("timed out after {:?}", self.endpoint.timeout);
                    log::warn!("llm attempt {} of {attempts} timed out", attempt + 1);
                }
                Err(TransportError::Network(e)) => {
                    last_error = e;
                    log::warn!("llm attempt {} of {attempts} failed: {last_error}", attempt + 1);
                }
            }
        }
        Err(Error::Llm(format!("gave up after {attempts} attempts; last error: {last_error}")))
    }
}

/// `llm_complete` over the default transport.
pub fn llm_complete(endpoint: &LlmEndpoint, request: &CompletionRequest) -> Result<String> {
    LlmClient::new(endpoint.clone(), Arc::new(UreqTransport)).complete(request)
}

fn extract_content(body: &str) -> Result<String> {
    let value: serde_json::Value =
        serde_json::from_str(body).map_err(|e| Error::Llm(format!("response is not JSON: {e}")))?;
    value["choices"][0]["message"]["content"]
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| Error::Llm(format!("response has no message content: {}", truncate(body, 200))))
}

/// Stance from an `<stance>...</stance>` tag; None when absent or unknown.
pub fn parse_stance(text: &str) -> Option<Stance> {
    let lower = text.to_ascii_lowercase();
    let start = lower.rfind("<stance>")? + "<stance>".len();
    let end = start + lower[start..].find("</stance>")?;
    match text[start..end].trim().to_ascii_uppercase().as_str() {
        "SUPPORT" => Some(Stance::Support),
        "CONTRADICT" => Some(Stance::Contradict),
        "NO_STANCE" | "NO STANCE" | "ABSTAIN" => Some(Stance::Abstain),
        _ => None,
    }
}

/// Claims from a `{"claims": [...]}` reply, tolerating surrounding prose or
/// code fences; falls back to bullet lines.
pub fn parse_claims(text: &str) -> Option<Vec<String>> {
    if let (Some(start), Some(end)) = (text.find('{'), text.rfind('}')) {
        if start < end {
            #[derive(Deserialize)]
            struct Claims {
                claims: Vec<String>,
            }
            if let Ok(parsed) = serde_json::from_str::<Claims>(&text[start..=end]) {
                return Some(parsed.claims);
            }
        }
    }
    let bullets: Vec<String> = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix("- ").or_else(|| l.trim().strip_prefix("* ")))
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    (!bullets.is_empty()).then_some(bullets)
}

/// Prompt templates with `{query}`, `{sources}`, `{draft}`, `{document}`
/// and `{claim}` placeholders.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptTemplates {
    pub summarize: String,
    pub decompose: String,
    pub extract: String,
}

impl Default for PromptTemplates {
    fn default() -> Self {
        PromptTemplates {
            summarize: SUMMARIZE_TEMPLATE.into(),
            decompose: DECOMPOSE_TEMPLATE.into(),
            extract: EXTRACT_TEMPLATE.into(),
        }
    }
}

/// Summarizer, decomposer and extractor backed by one [`LlmClient`].
pub struct LlmProvider {
    client: LlmClient,
    prompts: PromptTemplates,
    /// Extra attempts when a stance reply cannot be parsed.
    pub parse_retries: u32,
}

impl LlmProvider {
    pub fn new(client: LlmClient, prompts: PromptTemplates) -> Self {
        LlmProvider {
            client,
            prompts,
            parse_retries: 2,
        }
    }

    fn ask(&self, prompt: String) -> std::result::Result<String, ProviderError> {
        self.client
            .complete(&CompletionRequest {
                prompt,
                temperature: Some(0.0),
                max_tokens: None,
            })
            .map_err(|e| ProviderError(e.to_string()))
    }
}

impl Summarizer for LlmProvider {
    fn summarize(&self, query: &str, documents: &[&Document]) -> std::result::Result<String, ProviderError> {
        let sources = documents
            .iter()
            .enumerate()
            .map(|(n, d)| format!("[{}] {}", n + 1, d.text))
            .collect::<Vec<_>>()
            .join("\n\n");
        self.ask(self.prompts.summarize.replace("{query}", query).replace("{sources}", &sources))
    }
}

impl Decomposer for LlmProvider {
    fn decompose(&self, draft: &str) -> std::result::Result<Vec<String>, ProviderError> {
        let reply = self.ask(self.prompts.decompose.replace("{draft}", draft))?;
        parse_claims(&reply).ok_or_else(|| ProviderError(format!("unparseable claim list: {}", truncate(&reply, 200))))
    }
}

impl StanceExtractor for LlmProvider {
    fn extract(&self, document: &Document, claim: &str) -> std::result::Result<Stance, ProviderError> {
        let prompt = self.prompts.extract.replace("{document}", &document.text).replace("{claim}", claim);
        for _ in 0..=self.parse_retries {
            let reply = self.ask(prompt.clone())?;
            if let Some(stance) = parse_stance(&reply) {
                return Ok(stance);
            }
        }
        log::warn!(
            "no parseable stance for source {} on claim {claim:?}; recording abstain",
            document.source_id
        );
        Ok(Stance::Abstain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    Mock,
    Http,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PromptPaths {
    pub summarize: Option<String>,
    pub decompose: Option<String>,
    pub extract: Option<String>,
}

/// Provider configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub provider: ProviderKind,
    #[serde(default)]
    pub base_url: Option<String>,
    #[serde(default)]
    pub model: Option<String>,
    /// Environment variable holding the API key.
    #[serde(default = "default_credential_env")]
    pub credential_env: String,
    #[serde(default)]
    pub prompts: Option<PromptPaths>,
    #[serde(default)]
    pub max_retries: Option<u32>,
    #[serde(default)]
    pub timeout_secs: Option<u64>,
}

fn default_credential_env() -> String {
    DEFAULT_CREDENTIAL_ENV.into()
}

impl ProviderConfig {
    pub fn mock() -> Self {
        ProviderConfig {
            provider: ProviderKind::Mock,
            base_url: None,
            model: None,
            credential_env: default_credential_env(),
            prompts: None,
            max_retries: None,
            timeout_secs: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Build providers; prompt override paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<Providers> {
        self.build_with_transport(base_dir, Arc::new(UreqTransport))
    }

    pub fn build_with_transport(&self, base_dir: &Path, transport: Arc<dyn HttpTransport>) -> Result<Providers> {
        match self.provider {
            ProviderKind::Mock => Ok(Providers::mock()),
            ProviderKind::Http => {
                let api_key = std::env::var(&self.credential_env)
                    .map_err(|_| Error::MissingCredential(self.credential_env.clone()))?;
                let base_url = self.base_url.clone().ok_or_else(|| Error::shape("http provider needs base_url"))?;
                let model = self.model.clone().ok_or_else(|| Error::shape("http provider needs model"))?;
                let mut endpoint = LlmEndpoint::new(base_url, model);
                endpoint.api_key = Some(api_key);
                if let Some(r) = self.max_retries {
                    endpoint.max_retries = r;
                }
                if let Some(t) = self.timeout_secs {
                    endpoint.timeout = Duration::from_secs(t);
                }
                let mut prompts = PromptTemplates::default();
                if let Some(paths) = &self.prompts {
                    let read = |p: &str| {
                        let path = base_dir.join(p);
                        std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
                    };
                    if let Some(p) = &paths.summarize {
                        prompts.summarize = read(p)?;
                    }
                    if let Some(p) = &paths.decompose {
                        prompts.decompose = read(p)?;
                    }
                    if let Some(p) = &paths.extract {
                        prompts.extract = read(p)?;
                    }
                }
                let provider = Arc::new(LlmProvider::new(LlmClient::new(endpoint, transport), prompts));
                Ok(Providers {
                    summarizer: provider.clone(),
                    decomposer: provider.clone(),
                    extractor: provider,
                })
            }
        }
    }
}
