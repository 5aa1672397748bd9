//! CSV and JSON writers for vectors and debug captures.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::doc::{Document, Language};
use crate::engine::{MetricResult, StyloVector};
use crate::error::OutputError;

/// Fixed six-decimal rendering shared by every writer.
pub fn format_value(value: f64) -> String {
    format!("{value:.6}")
}

fn check_schema(vectors: &[StyloVector], columns: &[&str]) -> Result<(), OutputError> {
    let Some(first) = vectors.first() else { return Ok(()) };
    for v in vectors {
        if v.schema_hash != first.schema_hash {
            return Err(OutputError::MixedSchemas(first.schema_hash.clone(), v.schema_hash.clone()));
        }
        let same = v.values.len() == columns.len() && v.values.iter().zip(columns).all(|(r, c)| r.metric_id == *c);
        if !same {
            return Err(OutputError::MixedSchemas(first.schema_hash.clone(), format!("{} (columns of {})", v.schema_hash, v.doc_id)));
        }
    }
    Ok(())
}

/// One row per vector under a `doc_id` + `columns` header. Failed metrics
/// leave an empty cell. Returns the number of data rows.
pub fn write_vectors_csv<W: Write>(columns: &[&str], vectors: &[StyloVector], sink: W) -> Result<usize, OutputError> {
    check_schema(vectors, columns)?;
    let mut out = csv::Writer::from_writer(sink);
    out.write_record(std::iter::once("doc_id").chain(columns.iter().copied()))?;
    for v in vectors {
        let cells = v.values.iter().map(|r| match r.error {
            Some(_) => String::new(),
            None => format_value(r.value),
        });
        out.write_record(std::iter::once(v.doc_id.clone()).chain(cells))?;
    }
    out.flush()?;
    Ok(vectors.len())
}

pub const DEBUG_HEADER: [&str; 8] =
    ["doc_id", "metric_id", "sentence_index", "token_index", "form", "lemma", "upos", "deprel"];

/// One row per captured token, ordered by metric, sentence and token.
/// Indices are zero-based positions in the document.
pub fn write_debug_csv<W: Write>(doc: &Document, results: &[MetricResult], sink: W) -> Result<usize, OutputError> {
    let mut out = csv::Writer::from_writer(sink);
    out.write_record(DEBUG_HEADER)?;
    let mut rows = 0;
    for result in results {
        let mut captured = result.captured.clone();
        captured.sort_unstable();
        for at in captured {
            let token = doc.token(at).ok_or_else(|| OutputError::DanglingCapture {
                doc_id: doc.doc_id.clone(),
                metric: result.metric_id.clone(),
                sentence: at.sentence,
                token: at.token,
            })?;
            out.write_record([
                doc.doc_id.as_str(),
                result.metric_id.as_str(),
                &at.sentence.to_string(),
                &at.token.to_string(),
                &token.form,
                &token.lemma,
                token.upos.as_str(),
                &token.deprel,
            ])?;
            rows += 1;
        }
    }
    out.flush()?;
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct JsonDocument<'a> {
    doc_id: &'a str,
    /// Aligned with the top-level `metrics`; `null` where the metric failed.
    values: Vec<Option<f64>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    errors: BTreeMap<&'a str, &'a str>,
}

#[derive(Debug, Serialize)]
struct JsonVectors<'a> {
    language: Language,
    schema_hash: &'a str,
    metrics: &'a [&'a str],
    documents: Vec<JsonDocument<'a>>,
}

/// The JSON counterpart of [`write_vectors_csv`].
pub fn write_vectors_json<W: Write>(
    language: Language,
    schema_hash: &str,
    columns: &[&str],
    vectors: &[StyloVector],
    mut sink: W,
) -> Result<usize, OutputError> {
    check_schema(vectors, columns)?;
    let documents = vectors
        .iter()
        .map(|v| JsonDocument {
            doc_id: &v.doc_id,
            values: v.values.iter().map(|r| r.error.is_none().then_some(r.value)).collect(),
            errors: v
                .values
                .iter()
                .filter_map(|r| r.error.as_deref().map(|e| (r.metric_id.as_str(), e)))
                .collect(),
        })
        .collect();
    let body = JsonVectors { language, schema_hash, metrics: columns, documents };
    serde_json::to_writer_pretty(&mut sink, &body)?;
    sink.write_all(b"\n")?;
    Ok(vectors.len())
}
