//! Affective norms: six scores per lemma and a declared mean per
//! dimension.
//!
//! Tab separated. The header row is `lemma` followed by one
//! `dimension+=mean` or `dimension-=mean` cell per column, e.g.
//! `valence+=2.1`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::doc::{Document, TokenRef};
use crate::engine::{Count, CountingRule};
use crate::error::{MetricError, NormsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
pub enum Dimension {
    #[serde(rename = "valence+")]
    ValencePositive,
    #[serde(rename = "valence-")]
    ValenceNegative,
    #[serde(rename = "origin+")]
    OriginPositive,
    #[serde(rename = "origin-")]
    OriginNegative,
    #[serde(rename = "activation+")]
    ActivationPositive,
    #[serde(rename = "activation-")]
    ActivationNegative,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::ValencePositive,
        Dimension::ValenceNegative,
        Dimension::OriginPositive,
        Dimension::OriginNegative,
        Dimension::ActivationPositive,
        Dimension::ActivationNegative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::ValencePositive => "valence+",
            Dimension::ValenceNegative => "valence-",
            Dimension::OriginPositive => "origin+",
            Dimension::OriginNegative => "origin-",
            Dimension::ActivationPositive => "activation+",
            Dimension::ActivationNegative => "activation-",
        }
    }

    fn position(self) -> usize {
        Dimension::ALL.iter().position(|d| *d == self).unwrap_or(0)
    }

    fn parse(name: &str) -> Option<Dimension> {
        let name = name.trim().replace('\u{2212}', "-");
        Dimension::ALL.into_iter().find(|d| d.as_str() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Score strictly above the mean.
    AboveMean,
    /// Score at or below the mean.
    BelowMean,
}

#[derive(Debug, Clone, Default)]
pub struct AffectiveNorms {
    means: [f64; 6],
    scores: HashMap<String, [f64; 6]>,
}

impl AffectiveNorms {
    pub fn parse(text: &str) -> Result<AffectiveNorms, NormsError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or(NormsError::Empty)?;
        let mut columns = Vec::new();
        let mut means = [f64::NAN; 6];
        for col in header.trim_end_matches('\r').split('\t').skip(1) {
            let (name, mean) = col.split_once('=').ok_or_else(|| NormsError::BadHeader(col.to_string()))?;
            let dim = Dimension::parse(name).ok_or_else(|| NormsError::BadHeader(col.to_string()))?;
            let mean: f64 = mean.trim().parse().map_err(|_| NormsError::BadHeader(col.to_string()))?;
            means[dim.position()] = mean;
            columns.push(dim);
        }
        if let Some(missing) = Dimension::ALL.into_iter().find(|d| !columns.contains(d)) {
            return Err(NormsError::MissingDimension(missing.as_str().to_string()));
        }

        let mut scores = HashMap::new();
        for (i, line) in lines {
            let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
            let line_err = |message: String| NormsError::Line { line: i + 1, message };
            if fields.len() != columns.len() + 1 {
                return Err(line_err(format!("expected {} columns, found {}", columns.len() + 1, fields.len())));
            }
            let mut row = [0.0; 6];
            for (dim, raw) in columns.iter().zip(&fields[1..]) {
                row[dim.position()] = raw.trim().parse().map_err(|_| line_err(format!("bad score `{raw}`")))?;
            }
            scores.insert(fields[0].trim().to_lowercase(), row);
        }
        Ok(AffectiveNorms { means, scores })
    }

    pub fn mean(&self, dim: Dimension) -> f64 {
        self.means[dim.position()]
    }

    pub fn score(&self, lemma: &str, dim: Dimension) -> Option<f64> {
        self.scores.get(&lemma.to_lowercase()).map(|row| row[dim.position()])
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Tokens whose lemma is covered by `norms` and falls on `side` of the
/// dimension mean.
pub fn psycholinguistic_incidence(doc: &Document, dim: Dimension, side: Side, norms: &AffectiveNorms) -> Count {
    let mean = norms.mean(dim);
    let captured: Vec<TokenRef> = doc
        .iter_refs()
        .filter(|(_, t)| {
            norms.scores.get(t.folded_lemma()).is_some_and(|row| {
                let score = row[dim.position()];
                match side {
                    Side::AboveMean => score > mean,
                    Side::BelowMean => score <= mean,
                }
            })
        })
        .map(|(r, _)| r)
        .collect();
    Count::tokens(captured)
}

#[derive(Debug, Clone)]
pub struct NormsRule {
    pub norms: Arc<AffectiveNorms>,
    pub dimension: Dimension,
    pub side: Side,
}

impl CountingRule for NormsRule {
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        Ok(psycholinguistic_incidence(doc, self.dimension, self.side, &self.norms))
    }
}
