//! Command-line workflows over the topic event toolkit: extraction,
//! linking, pairwise similarity, evaluation, LSA space building and
//! ontology checks.
//!
//! Every command is deterministic given the same inputs and resources.
//! Worker pools only change how fast results arrive; outputs are sorted
//! before they are written.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use tesim_core::ontology::{OntologyGraph, StyleOntology};
use tesim_core::similarity::{BackendKind, DomainBackend, SimilarityConfig};
use tesim_core::termsim::{
    build_lsa_space, OntologyBackend, TermSimBackend, VectorBackend, VectorSpace,
};
use tesim_core::{resources, ArticleText, Resources, TeScorer};

mod commands;
pub mod manifest;

pub use commands::{
    cmd_config, cmd_eval, cmd_extract, cmd_link, cmd_lsa_build, cmd_ontology_check, cmd_sim,
    corpus_documents,
};
pub use manifest::{peak_memory_kb, RunManifest};

/// Bad invocation, configuration or resource file. Maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

/// How a command that did not error finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Some work items failed; the rest were written.
    Partial,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Partial => 1,
        }
    }
}

/// 2 for invocation and configuration problems, 1 for everything else.
pub fn error_exit_code(err: &anyhow::Error) -> i32 {
    if err.chain().any(|e| e.is::<UsageError>()) {
        2
    } else {
        1
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tesim",
    version,
    about = "Topic event extraction and document similarity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract topic event records from an article file or directory.
    Extract(ExtractArgs),
    /// Link terms to ontology nodes.
    Link(LinkArgs),
    /// Score two topic event records.
    Sim(SimArgs),
    /// Score annotated pairs and report correlation, accuracy and F1.
    Eval(EvalArgs),
    /// Build an LSA term vector file from an article corpus.
    LsaBuild(LsaBuildArgs),
    /// Load an ontology and print its statistics.
    OntologyCheck(OntologyCheckArgs),
    /// Print the resolved similarity configuration.
    Config(ConfigArgs),
}

/// Resource files; each one left out falls back to the embedded default.
#[derive(Debug, Clone, Default, Args)]
pub struct ResourceArgs {
    /// Domain ontology (tab-separated id, parent, label, synonyms).
    #[arg(long, value_name = "FILE")]
    pub ontology: Option<PathBuf>,
    /// Research style hierarchy.
    #[arg(long, value_name = "FILE")]
    pub style_ontology: Option<PathBuf>,
    /// Target and methodology patterns.
    #[arg(long, value_name = "FILE")]
    pub patterns: Option<PathBuf>,
    /// Title rules for research style recognition.
    #[arg(long, value_name = "FILE")]
    pub style_rules: Option<PathBuf>,
    /// Trigger words, one per line.
    #[arg(long, value_name = "FILE")]
    pub triggers: Option<PathBuf>,
}

/// Similarity settings shared by `sim` and `eval`.
#[derive(Debug, Clone, Default, Args)]
pub struct ScoringArgs {
    /// Weights and backend as key=value lines; defaults when absent.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Terminology backend, overriding the config file.
    #[arg(long, value_parser = ["onto", "lsa", "vectors"])]
    pub backend: Option<String>,
    /// LSA rank, overriding the config file.
    #[arg(long, value_name = "K")]
    pub lsa_rank: Option<usize>,
    /// Term vector file (from `lsa-build` or any `term c1 .. ck` file).
    #[arg(long, value_name = "FILE")]
    pub vectors: Option<PathBuf>,
    /// Article directory used to build an LSA space on the fly.
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    /// Article file or directory of `.txt` articles.
    pub input: PathBuf,
    /// Output directory for `<did>.json`, `errors.tsv` and `manifest.txt`.
    /// Records go to stdout as JSON lines when absent.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Restrict domain induction to these node ids (comma-separated).
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    pub domain_candidates: Vec<String>,
    #[command(flatten)]
    pub resources: ResourceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LinkArgs {
    #[arg(required = true)]
    pub terms: Vec<String>,
    #[arg(long, value_name = "FILE")]
    pub ontology: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    pub te_a: PathBuf,
    pub te_b: PathBuf,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub resources: ResourceArgs,
    /// Write a run manifest here.
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Directory of `.json` / `.jsonl` topic event records.
    pub te_dir: PathBuf,
    /// Tab-separated pairs: did_a, did_b, 2-level label, 5-level label.
    pub pairs: PathBuf,
    /// CSV report path; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Per-pair scores as tab-separated lines.
    #[arg(long, value_name = "FILE")]
    pub scores: Option<PathBuf>,
    /// Threshold list `a,b,c` or range `start:stop:step`.
    #[arg(long)]
    pub thresholds: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub resources: ResourceArgs,
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LsaBuildArgs {
    /// Article file or directory.
    pub corpus: PathBuf,
    /// Vector file to write.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[arg(long, value_name = "K")]
    pub lsa_rank: Option<usize>,
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OntologyCheckArgs {
    /// Ontology file; the embedded domain ontology when absent.
    pub path: Option<PathBuf>,
    /// Also check the seven research styles are present as leaves.
    #[arg(long)]
    pub style: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

/// Dispatches a parsed command line, writing primary output to `out`.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Extract(a) => cmd_extract(&a, out),
        Command::Link(a) => cmd_link(&a, out),
        Command::Sim(a) => cmd_sim(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::LsaBuild(a) => cmd_lsa_build(&a, out),
        Command::OntologyCheck(a) => cmd_ontology_check(&a, out),
        Command::Config(a) => cmd_config(&a, out),
    }
}

/// Reads a resource file, or returns the embedded text.
pub(crate) fn read_resource(
    manifest: &mut RunManifest,
    name: &str,
    path: Option<&Path>,
    embedded: &'static str,
) -> anyhow::Result<String> {
    manifest.resource(name, path);
    match path {
        None => Ok(embedded.to_string()),
        Some(p) => fs::read_to_string(p)
            .map_err(|e| usage(format!("cannot read {name} file {}: {e}", p.display()))),
    }
}

pub(crate) fn load_ontology(
    manifest: &mut RunManifest,
    path: Option<&Path>,
) -> anyhow::Result<Arc<OntologyGraph>> {
    let text = read_resource(manifest, "ontology", path, resources::CL_ONTOLOGY)?;
    let g = OntologyGraph::load(&text).map_err(|e| usage(format!("ontology: {e}")))?;
    Ok(Arc::new(g))
}

pub(crate) fn load_styles(
    manifest: &mut RunManifest,
    path: Option<&Path>,
) -> anyhow::Result<Arc<StyleOntology>> {
    let text = read_resource(manifest, "style_ontology", path, resources::STYLE_ONTOLOGY)?;
    let s = StyleOntology::load(&text).map_err(|e| usage(format!("style ontology: {e}")))?;
    Ok(Arc::new(s))
}

pub(crate) fn load_resources(
    manifest: &mut RunManifest,
    args: &ResourceArgs,
) -> anyhow::Result<Resources> {
    let onto = load_ontology(manifest, args.ontology.as_deref())?;
    let patterns = read_resource(
        manifest,
        "patterns",
        args.patterns.as_deref(),
        resources::PATTERNS,
    )?;
    let rules = read_resource(
        manifest,
        "style_rules",
        args.style_rules.as_deref(),
        resources::STYLE_RULES,
    )?;
    let triggers = read_resource(
        manifest,
        "triggers",
        args.triggers.as_deref(),
        resources::TRIGGERS,
    )?;
    Resources::with_ontology(onto, &patterns, &rules, &triggers)
        .map_err(|e| usage(format!("resources: {e}")))
}

/// The config file, or the defaults; the flag for the output header.
pub(crate) fn load_config(
    manifest: &mut RunManifest,
    path: Option<&Path>,
) -> anyhow::Result<(SimilarityConfig, bool)> {
    manifest.resource("config", path);
    match path {
        None => Ok((SimilarityConfig::default(), true)),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read config file {}: {e}", p.display())))?;
            let cfg = SimilarityConfig::parse(&text)
                .map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Ok((cfg, false))
        }
    }
}

/// Article files under `input`: the file itself, or the directory's `.txt`
/// files in name order.
pub(crate) fn article_files(input: &Path) -> anyhow::Result<Vec<PathBuf>> {
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    if !input.is_dir() {
        return Err(usage(format!("input {} does not exist", input.display())));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(input)
        .with_context(|| format!("listing {}", input.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

pub(crate) fn load_articles(dir: &Path) -> anyhow::Result<Vec<ArticleText>> {
    article_files(dir)?
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ArticleText::parse(&text).with_context(|| format!("parsing {}", p.display()))
        })
        .collect()
}

/// LSA rank clamped to what the corpus supports, with a warning.
pub(crate) fn clamp_rank(k: usize, vocabulary: usize, docs: usize) -> usize {
    let max = vocabulary.min(docs);
    if k > max {
        log::warn!("LSA rank {k} exceeds min(vocabulary, documents) = {max}; using {max}");
        max
    } else {
        k
    }
}

/// Builds the scorer selected by the config and flags.
pub(crate) fn build_scorer(
    manifest: &mut RunManifest,
    cfg: &SimilarityConfig,
    args: &ScoringArgs,
    onto: Arc<OntologyGraph>,
    styles: Arc<StyleOntology>,
) -> anyhow::Result<(TeScorer, BackendKind)> {
    let kind = match &args.backend {
        Some(b) => b.parse::<BackendKind>().map_err(usage)?,
        None => cfg.backend,
    };
    let onto_backend: Arc<dyn TermSimBackend> = Arc::new(OntologyBackend::new(onto));
    let terms: Arc<dyn TermSimBackend> = match kind {
        BackendKind::Onto => onto_backend.clone(),
        BackendKind::Vectors | BackendKind::Lsa if args.vectors.is_some() => {
            let p = args.vectors.as_deref().expect("checked above");
            manifest.resource("vectors", Some(p));
            let text = fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read vector file {}: {e}", p.display())))?;
            let space =
                VectorSpace::parse(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Arc::new(VectorBackend::new(space))
        }
        BackendKind::Vectors => return Err(usage("--backend vectors needs --vectors FILE")),
        BackendKind::Lsa => {
            let dir = args
                .corpus
                .as_deref()
                .ok_or_else(|| usage("--backend lsa needs --corpus DIR or --vectors FILE"))?;
            manifest.input(dir);
            let k = args.lsa_rank.unwrap_or(cfg.lsa_rank);
            let space = manifest.stage("lsa_build", || -> anyhow::Result<VectorSpace> {
                let docs = corpus_documents(&load_articles(dir)?);
                let vocab = docs
                    .iter()
                    .flatten()
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
                let k = clamp_rank(k, vocab, docs.len());
                Ok(build_lsa_space(&docs, k, cfg.lsa_weighting)?.to_vector_space())
            })?;
            Arc::new(VectorBackend::new(space))
        }
    };
    let domain = match cfg.domain_backend {
        DomainBackend::Ontology => onto_backend,
        DomainBackend::Backend => terms.clone(),
    };
    let scorer =
        TeScorer::new(cfg.weights, terms, domain, styles).map_err(|e| usage(e.to_string()))?;
    Ok((scorer, kind))
}

/// A bounded rayon pool; `None` means the available parallelism.
pub(crate) fn worker_pool(workers: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    if workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    let n = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .context("starting worker pool")
}
