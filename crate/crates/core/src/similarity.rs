//! Document-level similarity as a weighted sum over the six scored topic
//! event elements.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::ontology::{OntologyGraph, StyleOntology};
use crate::te_model::{PubDate, ResearchStyle, TopicEvent, ValidationReport};
use crate::termsim::{
    set_similarity_resolved, OntologyBackend, ResolvedTerm, TermSimBackend, Weighting,
    DEFAULT_LSA_RANK,
};

const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Target,
    Domain,
    Style,
    Methodology,
    Keywords,
    Date,
}

impl Element {
    pub const ALL: [Element; 6] = [
        Element::Target,
        Element::Domain,
        Element::Style,
        Element::Methodology,
        Element::Keywords,
        Element::Date,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Element::Target => "target",
            Element::Domain => "domain",
            Element::Style => "style",
            Element::Methodology => "methodology",
            Element::Keywords => "keywords",
            Element::Date => "date",
        }
    }

    /// Elements that may be empty and then drop out of the sum.
    pub fn is_optional(self) -> bool {
        matches!(self, Element::Methodology | Element::Keywords)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Element {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Element::ALL
            .into_iter()
            .find(|e| e.name() == s.trim().to_lowercase())
            .ok_or_else(|| format!("unknown element {s:?}"))
    }
}

/// Per-element weights, indexed in [`Element::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights(pub [f64; 6]);

impl Default for Weights {
    fn default() -> Self {
        Weights([0.3, 0.25, 0.25, 0.1, 0.05, 0.05])
    }
}

impl Weights {
    pub fn get(&self, e: Element) -> f64 {
        self.0[e as usize]
    }

    pub fn set(&mut self, e: Element, w: f64) {
        self.0[e as usize] = w;
    }

    pub fn validate(&self) -> Result<(), SimilarityError> {
        if let Some(e) = Element::ALL
            .into_iter()
            .find(|&e| !(self.get(e) >= 0.0 && self.get(e).is_finite()))
        {
            return Err(SimilarityError::Weights(format!(
                "weight.{e} must be a finite non-negative number"
            )));
        }
        let sum: f64 = self.0.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(SimilarityError::Weights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackendKind {
    #[default]
    Onto,
    Lsa,
    Vectors,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Onto => "onto",
            BackendKind::Lsa => "lsa",
            BackendKind::Vectors => "vectors",
        }
    }
}

impl FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "onto" | "ontology" => Ok(BackendKind::Onto),
            "lsa" => Ok(BackendKind::Lsa),
            "vectors" => Ok(BackendKind::Vectors),
            other => Err(format!(
                "unknown backend {other:?}, expected onto, lsa or vectors"
            )),
        }
    }
}

/// Which backend scores the domain element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DomainBackend {
    /// Always the concept hierarchy, whatever the term backend is.
    #[default]
    Ontology,
    /// Same backend as the other terminology elements.
    Backend,
}

#[derive(Debug, Error, PartialEq)]
pub enum SimilarityError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error("invalid topic event {eid}: {report}")]
    InvalidTopicEvent {
        eid: String,
        report: ValidationReport,
    },
}

/// Weights and backend choice, stored as flat `key=value` text.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityConfig {
    pub weights: Weights,
    pub backend: BackendKind,
    pub domain_backend: DomainBackend,
    pub lsa_rank: usize,
    pub lsa_weighting: Weighting,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            weights: Weights::default(),
            backend: BackendKind::Onto,
            domain_backend: DomainBackend::Ontology,
            lsa_rank: DEFAULT_LSA_RANK,
            lsa_weighting: Weighting::LogTfIdf,
        }
    }
}

impl SimilarityConfig {
    /// Keys left out keep their defaults. The result is validated.
    pub fn parse(text: &str) -> Result<Self, SimilarityError> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let err = |message: String| SimilarityError::Config {
                line: n + 1,
                message,
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(elem) = key.strip_prefix("weight.") {
                let e = elem.parse::<Element>().map_err(err)?;
                let w = value
                    .parse::<f64>()
                    .map_err(|_| err(format!("bad weight {value:?}")))?;
                cfg.weights.set(e, w);
                continue;
            }
            match key {
                "backend" => cfg.backend = value.parse().map_err(err)?,
                "domain_backend" => {
                    cfg.domain_backend = match value {
                        "ontology" | "onto" => DomainBackend::Ontology,
                        "backend" => DomainBackend::Backend,
                        other => {
                            return Err(err(format!(
                                "domain_backend must be ontology or backend, found {other:?}"
                            )))
                        }
                    }
                }
                "lsa_rank" => {
                    cfg.lsa_rank =
                        value
                            .parse::<usize>()
                            .ok()
                            .filter(|&k| k > 0)
                            .ok_or_else(|| {
                                err(format!(
                                    "lsa_rank must be a positive integer, found {value:?}"
                                ))
                            })?
                }
                "lsa_weighting" => {
                    cfg.lsa_weighting = match value {
                        "logtfidf" => Weighting::LogTfIdf,
                        "raw" => Weighting::RawCounts,
                        other => {
                            return Err(err(format!(
                                "lsa_weighting must be logtfidf or raw, found {other:?}"
                            )))
                        }
                    }
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SimilarityError> {
        self.weights.validate()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in Element::ALL {
            let _ = writeln!(out, "weight.{e}={}", self.weights.get(e));
        }
        let _ = writeln!(out, "backend={}", self.backend.name());
        let domain = match self.domain_backend {
            DomainBackend::Ontology => "ontology",
            DomainBackend::Backend => "backend",
        };
        let _ = writeln!(out, "domain_backend={domain}");
        let _ = writeln!(out, "lsa_rank={}", self.lsa_rank);
        let weighting = match self.lsa_weighting {
            Weighting::LogTfIdf => "logtfidf",
            Weighting::RawCounts => "raw",
        };
        let _ = writeln!(out, "lsa_weighting={weighting}");
        out
    }
}

/// Per-element scores, the weights actually applied, and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityBreakdown {
    /// `None` for an optional element that dropped out.
    pub scores: [Option<f64>; 6],
    pub weights: [f64; 6],
    pub total: f64,
}

impl SimilarityBreakdown {
    pub fn score(&self, e: Element) -> Option<f64> {
        self.scores[e as usize]
    }

    pub fn weight(&self, e: Element) -> f64 {
        self.weights[e as usize]
    }

    /// Whether `total` equals the weighted sum of the scores.
    pub fn is_consistent(&self) -> bool {
        let sum: f64 = self
            .scores
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| s.unwrap_or(0.0) * w)
            .sum();
        (sum - self.total).abs() <= WEIGHT_TOLERANCE
    }
}

pub fn style_similarity(styles: &StyleOntology, a: ResearchStyle, b: ResearchStyle) -> f64 {
    styles.similarity(a, b)
}

/// `1 / (1 + |Δ|)` with `Δ` the distance in years, computed from whole
/// months so equal intervals give identical scores.
pub fn date_similarity(a: PubDate, b: PubDate) -> f64 {
    let months = (a.month_index() - b.month_index()).unsigned_abs() as f64;
    1.0 / (1.0 + months / 12.0)
}

/// Scores topic event pairs under fixed weights and backends.
#[derive(Clone)]
pub struct TeScorer {
    weights: Weights,
    terms: Arc<dyn TermSimBackend>,
    domain: Arc<dyn TermSimBackend>,
    styles: Arc<StyleOntology>,
}

impl fmt::Debug for TeScorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TeScorer")
            .field("weights", &self.weights)
            .field("terms", &self.terms.name())
            .field("domain", &self.domain.name())
            .finish()
    }
}

impl TeScorer {
    pub fn new(
        weights: Weights,
        terms: Arc<dyn TermSimBackend>,
        domain: Arc<dyn TermSimBackend>,
        styles: Arc<StyleOntology>,
    ) -> Result<Self, SimilarityError> {
        weights.validate()?;
        Ok(Self {
            weights,
            terms,
            domain,
            styles,
        })
    }

    /// Default weights with the ontology backend for every element.
    pub fn with_ontology(graph: Arc<OntologyGraph>, styles: Arc<StyleOntology>) -> Self {
        let backend: Arc<dyn TermSimBackend> = Arc::new(OntologyBackend::new(graph));
        Self {
            weights: Weights::default(),
            terms: backend.clone(),
            domain: backend,
            styles,
        }
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn score(
        &self,
        a: &TopicEvent,
        b: &TopicEvent,
    ) -> Result<SimilarityBreakdown, SimilarityError> {
        for te in [a, b] {
            let report = te.validate();
            if !report.is_valid() {
                return Err(SimilarityError::InvalidTopicEvent {
                    eid: te.eid.clone(),
                    report,
                });
            }
        }
        Ok(self.score_valid(a, b))
    }

    /// Like [`TeScorer::score`] without validating the inputs.
    pub fn score_valid(&self, a: &TopicEvent, b: &TopicEvent) -> SimilarityBreakdown {
        let resolve = |ts: &[crate::te_model::Terminology]| -> Vec<ResolvedTerm> {
            ts.iter().map(|t| self.terms.resolve(t)).collect()
        };
        let set = |x: &[crate::te_model::Terminology], y: &[crate::te_model::Terminology]| {
            set_similarity_resolved(&resolve(x), &resolve(y), &*self.terms)
        };

        let dropped = |e: Element| match e {
            Element::Methodology => a.methodology.is_empty() || b.methodology.is_empty(),
            Element::Keywords => a.keywords.is_empty() || b.keywords.is_empty(),
            _ => false,
        };
        let kept_weight: f64 = Element::ALL
            .into_iter()
            .filter(|&e| !dropped(e))
            .map(|e| self.weights.get(e))
            .sum();
        // if only optional elements carry weight, nothing is dropped
        let redistribute = kept_weight > 0.0;

        let mut scores = [None; 6];
        let mut weights = [0.0; 6];
        for e in Element::ALL {
            if redistribute && dropped(e) {
                continue;
            }
            let s = match e {
                Element::Target => set(&a.target, &b.target),
                Element::Domain => self.domain.score(&a.domain, &b.domain),
                Element::Style => self.styles.similarity(a.style, b.style),
                Element::Methodology => set(&a.methodology, &b.methodology),
                Element::Keywords => set(&a.keywords, &b.keywords),
                Element::Date => date_similarity(a.date, b.date),
            };
            scores[e as usize] = Some(s);
            weights[e as usize] = if redistribute {
                self.weights.get(e) / kept_weight
            } else {
                self.weights.get(e)
            };
        }
        let total: f64 = scores
            .iter()
            .zip(&weights)
            .map(|(s, w)| s.unwrap_or(0.0) * w)
            .sum();
        let breakdown = SimilarityBreakdown {
            scores,
            weights,
            total: total.clamp(0.0, 1.0),
        };
        assert!(
            breakdown.is_consistent(),
            "breakdown total drifted from weighted sum"
        );
        breakdown
    }
}

pub fn te_similarity(
    a: &TopicEvent,
    b: &TopicEvent,
    scorer: &TeScorer,
) -> Result<SimilarityBreakdown, SimilarityError> {
    scorer.score(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::tests::FIXTURE;
    use crate::resources::STYLE_ONTOLOGY;
    use crate::te_model::Terminology;

    fn styles() -> Arc<StyleOntology> {
        Arc::new(StyleOntology::load(STYLE_ONTOLOGY).unwrap())
    }

    fn scorer() -> TeScorer {
        TeScorer::with_ontology(Arc::new(OntologyGraph::load(FIXTURE).unwrap()), styles())
    }

    fn te(target: &str, date: PubDate) -> TopicEvent {
        TopicEvent {
            eid: format!("te-{target}"),
            did: target.into(),
            target: vec![Terminology::new(target)],
            methodology: vec![],
            domain: Terminology::linked("information extraction", "InformationExtraction"),
            style: ResearchStyle::IssueSolution,
            keywords: vec![],
            date,
            extras: Default::default(),
        }
    }

    #[test]
    fn style_examples() {
        use ResearchStyle::*;
        let s = styles();
        assert_eq!(style_similarity(&s, Survey, Survey), 1.0);
        assert!((style_similarity(&s, Survey, Analysis) - 2.0 / 3.0).abs() < 1e-15);
        assert!((style_similarity(&s, Survey, IssueSolution) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn date_examples() {
        assert_eq!(
            date_similarity(PubDate::new(2009, 6), PubDate::new(2009, 6)),
            1.0
        );
        assert_eq!(
            date_similarity(PubDate::new(2008, 1), PubDate::new(2009, 1)),
            0.5
        );
        assert_eq!(
            date_similarity(PubDate::new(2005, 6), PubDate::new(2009, 6)),
            0.2
        );
    }

    #[test]
    fn renormalized_fixture_pair() {
        let a = te("relation extraction", PubDate::new(2009, 6));
        let b = te("event extraction", PubDate::new(2009, 6));
        let bd = scorer().score(&a, &b).unwrap();
        let want = (0.3 * 0.75 + 0.25 + 0.25 + 0.05) / 0.85;
        assert!((bd.total - want).abs() < 1e-12);
        assert_eq!(bd.score(Element::Methodology), None);
        assert_eq!(bd.weight(Element::Keywords), 0.0);
        assert!((bd.weight(Element::Target) - 0.3 / 0.85).abs() < 1e-15);
        assert!(bd.is_consistent());
    }

    #[test]
    fn one_year_apart() {
        let mut a = te("relation extraction", PubDate::new(2008, 1));
        a.methodology = vec![Terminology::new("machine learning")];
        a.keywords = vec![Terminology::new("event extraction")];
        let mut b = a.clone();
        b.date = PubDate::new(2009, 1);
        let total = scorer().score(&a, &b).unwrap().total;
        assert!((total - 0.975).abs() < 1e-9, "{total}");
        assert!((scorer().score(&a, &a).unwrap().total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_te_is_rejected() {
        let mut a = te("relation extraction", PubDate::new(2008, 1));
        a.target.clear();
        let err = scorer().score(&a, &a).unwrap_err();
        assert!(
            matches!(err, SimilarityError::InvalidTopicEvent { ref report, .. } if report.fields() == ["target"])
        );
    }

    #[test]
    fn config_round_trip_and_errors() {
        let cfg = SimilarityConfig::default();
        assert_eq!(SimilarityConfig::parse(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(SimilarityConfig::parse("").unwrap(), cfg);
        let custom = SimilarityConfig::parse(
            "weight.target=0.35\nweight.domain=0.2\nbackend=lsa\nlsa_rank=5\n",
        )
        .unwrap();
        assert_eq!(custom.backend, BackendKind::Lsa);
        assert_eq!(custom.lsa_rank, 5);
        assert!(matches!(
            SimilarityConfig::parse("weight.target=0.5"),
            Err(SimilarityError::Weights(_))
        ));
        assert!(matches!(
            SimilarityConfig::parse("# c\nfoo=1"),
            Err(SimilarityError::Config { line: 2, .. })
        ));
        assert!(matches!(
            SimilarityConfig::parse("backend=bert"),
            Err(SimilarityError::Config { line: 1, .. })
        ));
        assert!(matches!(
            SimilarityConfig::parse("lsa_rank=0"),
            Err(SimilarityError::Config { .. })
        ));
        let neg = "weight.target=-0.1\nweight.domain=0.65";
        assert!(matches!(
            SimilarityConfig::parse(neg),
            Err(SimilarityError::Weights(_))
        ));
    }

    #[test]
    fn all_weight_on_optional_elements() {
        let mut w = Weights([0.0; 6]);
        w.set(Element::Methodology, 1.0);
        let g = Arc::new(OntologyGraph::load(FIXTURE).unwrap());
        let b: Arc<dyn TermSimBackend> = Arc::new(OntologyBackend::new(g));
        let s = TeScorer::new(w, b.clone(), b, styles()).unwrap();
        let a = te("relation extraction", PubDate::new(2008, 1));
        let bd = s.score(&a, &a).unwrap();
        assert_eq!(bd.total, 1.0);
        assert!(bd.is_consistent());
    }
}
