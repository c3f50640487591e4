//! Terminology similarity: Wu–Palmer on a concept hierarchy or cosine on
//! term vectors, plus greedy alignment for sets of terms.

mod lsa;
mod vectors;

use std::sync::Arc;

use thiserror::Error;

use crate::ontology::{NodeIx, OntologyGraph};
use crate::te_model::Terminology;

pub use lsa::{
    build_lsa_space, term_document_matrix, truncated_svd, LsaSpace, TruncatedSvd, Weighting,
    DEFAULT_LSA_RANK,
};
pub use vectors::{cosine, cosine_score, TermVector, VectorBackend, VectorSpace};

#[derive(Debug, Error, PartialEq)]
pub enum TermSimError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: usize, max: usize },
    #[error("no documents")]
    EmptyCorpus,
    #[error("empty vocabulary")]
    EmptyVocabulary,
    #[error("vector file line {line}: {message}")]
    VectorFile { line: usize, message: String },
    #[error("SVD did not converge")]
    NoConvergence,
}

/// What a backend anchored a terminology to.
#[derive(Debug, Clone, PartialEq)]
pub enum Anchor {
    Concept(NodeIx),
    Vector(Vec<f64>),
    Unknown,
}

/// A terminology prepared for repeated comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedTerm {
    pub canonical: String,
    pub anchor: Anchor,
}

/// Scores pairs of terminologies in `[0, 1]`, symmetrically, with 1 for a
/// term against itself.
pub trait TermSimBackend: Send + Sync {
    fn name(&self) -> &'static str;

    fn resolve(&self, term: &Terminology) -> ResolvedTerm;

    fn compare(&self, a: &ResolvedTerm, b: &ResolvedTerm) -> f64;

    fn score(&self, a: &Terminology, b: &Terminology) -> f64 {
        self.compare(&self.resolve(a), &self.resolve(b))
    }
}

/// Wu–Palmer similarity of the linked concepts. Terms that do not link
/// confidently only match an identical canonical form.
#[derive(Debug, Clone)]
pub struct OntologyBackend {
    graph: Arc<OntologyGraph>,
}

impl OntologyBackend {
    pub fn new(graph: Arc<OntologyGraph>) -> Self {
        Self { graph }
    }

    pub fn graph(&self) -> &OntologyGraph {
        &self.graph
    }
}

impl TermSimBackend for OntologyBackend {
    fn name(&self) -> &'static str {
        "onto"
    }

    fn resolve(&self, term: &Terminology) -> ResolvedTerm {
        let known = term
            .concept_id
            .as_deref()
            .and_then(|id| self.graph.lookup(id));
        let anchor = match known {
            Some(ix) => Anchor::Concept(ix),
            None => {
                let link = self.graph.link(&term.canonical);
                if link.is_confident() {
                    Anchor::Concept(link.node)
                } else {
                    Anchor::Unknown
                }
            }
        };
        ResolvedTerm {
            canonical: term.canonical.clone(),
            anchor,
        }
    }

    fn compare(&self, a: &ResolvedTerm, b: &ResolvedTerm) -> f64 {
        if a.canonical == b.canonical {
            return 1.0;
        }
        match (&a.anchor, &b.anchor) {
            (Anchor::Concept(x), Anchor::Concept(y)) => self.graph.wu_palmer_ix(*x, *y),
            _ => 0.0,
        }
    }
}

/// Symmetric greedy alignment: every term is matched to its best partner
/// on the other side and the best scores are averaged over both sides.
/// Two empty sets agree fully; one empty set against a non-empty one
/// scores 0.
pub fn set_similarity(a: &[Terminology], b: &[Terminology], backend: &dyn TermSimBackend) -> f64 {
    let ra: Vec<ResolvedTerm> = a.iter().map(|t| backend.resolve(t)).collect();
    let rb: Vec<ResolvedTerm> = b.iter().map(|t| backend.resolve(t)).collect();
    set_similarity_resolved(&ra, &rb, backend)
}

pub fn set_similarity_resolved(
    a: &[ResolvedTerm],
    b: &[ResolvedTerm],
    backend: &dyn TermSimBackend,
) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let scores: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| backend.compare(x, y)).collect())
        .collect();
    let rows: f64 = scores
        .iter()
        .map(|r| r.iter().copied().fold(0.0, f64::max))
        .sum();
    let cols: f64 = (0..b.len())
        .map(|j| scores.iter().map(|r| r[j]).fold(0.0, f64::max))
        .sum();
    (rows + cols) / (a.len() + b.len()) as f64
}
