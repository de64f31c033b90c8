// The HTTP-backed providers, driven through an in-process transport so the
// example needs neither a network nor a key.
//
// ```bash
// cargo run --example llm_client
// ```

use std::sync::Arc;
use std::time::Duration;

use serde_json::json;
use tts_core::pipeline::llm::{HttpResponse, HttpTransport, LlmClient, LlmEndpoint, LlmProvider, PromptTemplates, TransportError};
use tts_core::pipeline::{Decomposer, Document, StanceExtractor};

/// Answers every prompt from a fixed script keyed on the prompt's opening words.
struct Canned;

impl HttpTransport for Canned {
    fn post_json(
        &self,
        _url: &str,
        _headers: &[(String, String)],
        body: &str,
        _timeout: Duration,
    ) -> Result<HttpResponse, TransportError> {
        let request: serde_json::Value = serde_json::from_str(body).map_err(|e| TransportError::Network(e.to_string()))?;
        let prompt = request["messages"][0]["content"].as_str().unwrap_or_default();
        let content = if prompt.starts_with("Break the passage") {
            r#"{"claims": ["The bridge opened in 1932.", "The bridge is 1149 metres long."]}"#.to_string()
        } else if prompt.contains("1932") && prompt.contains("CLAIM:\nThe bridge opened in 1932.") {
            "The document gives the same year. <stance>SUPPORT</stance>".to_string()
        } else {
            "Nothing about this. <stance>NO_STANCE</stance>".to_string()
        };
        Ok(HttpResponse {
            status: 200,
            body: json!({"choices": [{"message": {"content": content}}]}).to_string(),
        })
    }
}

pub fn run_example() -> tts_core::Result<()> {
    let endpoint = LlmEndpoint::new("http://localhost:0/v1", "demo-model");
    let provider = LlmProvider::new(LlmClient::new(endpoint, Arc::new(Canned)), PromptTemplates::default());

    let claims = provider.decompose("The bridge opened in 1932 and spans 1149 metres.").map_err(|e| tts_core::Error::Llm(e.0))?;
    let doc = Document::new("harbour-news", "Opened in 1932, the bridge carries eight lanes.");
    for claim in &claims {
        let stance = provider.extract(&doc, claim).map_err(|e| tts_core::Error::Llm(e.0))?;
        println!("{:<10} {claim}", stance.as_str());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
