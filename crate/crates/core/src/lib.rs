//! Topic event extraction and document-level semantic similarity for
//! academic articles.
//!
//! An article is summarised as a [`TopicEvent`]: its research target,
//! methodology, domain, research style, keywords and publication date.
//! Two articles are compared through a weighted sum of per-element
//! similarities, where terminologies are scored either on a concept
//! hierarchy (Wu–Palmer over the least common subsumer) or on term vectors
//! from a latent semantic analysis space.
//!
//! Module map:
//!
//! - [`te_model`]: the topic event record, validation and the JSON record format
//! - [`ontology`]: concept hierarchies, LCS / Wu–Palmer, edit-distance linking
//! - [`extraction`]: rule-based pipeline from article text to topic event
//! - [`termsim`]: terminology similarity backends and set alignment
//! - [`similarity`]: element weighting, style and date similarity
//! - [`evaluation`]: Pearson correlation, accuracy / F-score and threshold sweeps
//! - [`resources`]: the embedded default resource set

pub mod evaluation;
pub mod extraction;
pub mod ontology;
pub mod resources;
pub mod similarity;
pub mod te_model;
pub mod termsim;
pub mod text;

pub use evaluation::{AnnotatedPair, ConfusionCounts, EvalError};
pub use extraction::{ArticleText, ExtractionError, Resources};
pub use ontology::{NodeIx, OntologyError, OntologyGraph, StyleOntology};
pub use similarity::{Element, SimilarityBreakdown, SimilarityConfig, TeScorer};
pub use te_model::{PubDate, RecordError, ResearchStyle, Terminology, TopicEvent};
pub use termsim::{TermSimBackend, TermSimError};
