use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use rayon::prelude::*;
use tesim_core::evaluation::{default_grid, load_pair_file, parse_thresholds, EvalReport};
use tesim_core::extraction::extract_topic_event;
use tesim_core::ontology::{OntologyGraph, StyleOntology};
use tesim_core::te_model::parse_records;
use tesim_core::termsim::build_lsa_space;
use tesim_core::text::tokenize;
use tesim_core::{resources, ArticleText, Element, Resources, TopicEvent};

use crate::{
    article_files, build_scorer, clamp_rank, load_articles, load_config, load_ontology,
    load_resources, load_styles, read_resource, usage, worker_pool, ConfigArgs, EvalArgs,
    ExtractArgs, LinkArgs, LsaBuildArgs, OntologyCheckArgs, Outcome, RunManifest, SimArgs,
};

/// Lowercased word tokens of each article, for building LSA spaces.
/// Pure numbers are dropped.
pub fn corpus_documents(articles: &[ArticleText]) -> Vec<Vec<String>> {
    articles
        .iter()
        .map(|a| {
            let text = a.full_text();
            tokenize(&text)
                .into_iter()
                .filter(|t| t.is_word() && t.text.chars().any(char::is_alphabetic))
                .map(|t| t.text.to_lowercase())
                .collect()
        })
        .collect()
}

/// Tabs and newlines would break the error table.
fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(
        || p.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

/// Keeps record file names inside the output directory.
fn safe_file_stem(did: &str) -> String {
    did.chars()
        .map(|c| {
            if c.is_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct Extracted {
    /// did when the front matter was readable, else the file stem.
    key: String,
    source: String,
    result: Result<TopicEvent, String>,
}

fn extract_one(path: &Path, res: &Resources) -> Extracted {
    let source = file_name(path);
    let stem = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return Extracted {
                key: stem,
                source,
                result: Err(format!("cannot read file: {e}")),
            }
        }
    };
    let article = match ArticleText::parse(&text) {
        Ok(a) => a,
        Err(e) => {
            return Extracted {
                key: stem,
                source,
                result: Err(e.to_string()),
            }
        }
    };
    let key = article.did.clone();
    let result = extract_topic_event(&article, res).map_err(|e| e.to_string());
    Extracted {
        key,
        source,
        result,
    }
}

pub fn cmd_extract(args: &ExtractArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let mut manifest = RunManifest::new("extract");
    let start = Instant::now();
    let mut res = load_resources(&mut manifest, &args.resources)?;
    manifest
        .stages
        .push(("load_resources".to_string(), start.elapsed()));
    if !args.domain_candidates.is_empty() {
        res.set_domain_candidates(&args.domain_candidates)
            .map_err(|e| usage(e.to_string()))?;
    }
    manifest.input(&args.input);
    let files = article_files(&args.input)?;
    if files.is_empty() {
        bail!("no .txt articles found in {}", args.input.display());
    }
    let pool = worker_pool(args.workers)?;
    let mut results: Vec<Extracted> = manifest.stage("extract", || {
        pool.install(|| files.par_iter().map(|p| extract_one(p, &res)).collect())
    });
    results.sort_by(|a, b| (&a.key, &a.source).cmp(&(&b.key, &b.source)));

    let mut records: Vec<TopicEvent> = Vec::new();
    let mut errors: Vec<(String, String, String)> = Vec::new();
    for item in results {
        match item.result {
            Ok(te) if records.last().is_some_and(|r| r.did == te.did) => errors.push((
                item.source,
                te.did.clone(),
                format!("duplicate did {}", te.did),
            )),
            Ok(te) => records.push(te),
            Err(e) => errors.push((item.source, item.key, one_line(&e))),
        }
    }
    manifest.counter("articles", files.len());
    manifest.counter("records", records.len());
    manifest.counter("errors", errors.len());

    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for te in &records {
                let path = dir.join(format!("{}.json", safe_file_stem(&te.did)));
                fs::write(&path, format!("{}\n", te.to_record()))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let mut table = String::from("source\tdid\terror\n");
            for (source, did, e) in &errors {
                let _ = writeln!(table, "{source}\t{did}\t{e}");
            }
            fs::write(dir.join("errors.tsv"), table).context("writing errors.tsv")?;
            manifest.output(dir);
            fs::write(dir.join("manifest.txt"), manifest.to_text())
                .context("writing manifest.txt")?;
        }
        None => {
            for te in &records {
                writeln!(out, "{}", te.to_record())?;
            }
            log::info!("run manifest:\n{}", manifest.to_text());
        }
    }
    for (source, did, e) in &errors {
        eprintln!("{source} ({did}): {e}");
    }
    if records.is_empty() {
        bail!("all {} articles failed", files.len());
    }
    Ok(Outcome::Success)
}

pub fn cmd_link(args: &LinkArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let g = load_ontology(&mut RunManifest::new("link"), args.ontology.as_deref())?;
    writeln!(
        out,
        "term\tnode\tlabel\tmatched\tdistance\tratio\tconfidence"
    )?;
    for term in &args.terms {
        let link = g.link(term);
        let confidence = if link.is_confident() {
            "confident"
        } else {
            "low"
        };
        writeln!(
            out,
            "{term}\t{}\t{}\t{}\t{}\t{:.4}\t{confidence}",
            g.id(link.node),
            g.label(link.node),
            link.matched,
            link.distance,
            link.ratio
        )?;
    }
    Ok(Outcome::Success)
}

fn read_record(path: &Path) -> anyhow::Result<TopicEvent> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    TopicEvent::from_record(&text)
        .with_context(|| format!("invalid topic event record {}", path.display()))
}

pub fn cmd_sim(args: &SimArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let mut manifest = RunManifest::new("sim");
    let (cfg, defaults) = load_config(&mut manifest, args.scoring.config.as_deref())?;
    let onto = load_ontology(&mut manifest, args.resources.ontology.as_deref())?;
    let styles = load_styles(&mut manifest, args.resources.style_ontology.as_deref())?;
    let (scorer, kind) = build_scorer(&mut manifest, &cfg, &args.scoring, onto, styles)?;
    manifest.input(&args.te_a);
    manifest.input(&args.te_b);
    let a = read_record(&args.te_a)?;
    let b = read_record(&args.te_b)?;
    let bd = manifest.stage("score", || scorer.score(&a, &b))?;

    match &args.scoring.config {
        None if defaults => writeln!(out, "# config=defaults")?,
        _ => writeln!(
            out,
            "# config={}",
            args.scoring
                .config
                .as_deref()
                .unwrap_or(Path::new(""))
                .display()
        )?,
    }
    writeln!(out, "# backend={}", kind.name())?;
    for e in Element::ALL {
        match bd.score(e) {
            Some(s) => writeln!(out, "{e}.score={s:.4}")?,
            None => writeln!(out, "{e}.score=absent")?,
        }
        writeln!(out, "{e}.weight={:.4}", bd.weight(e))?;
    }
    writeln!(out, "total={:.4}", bd.total)?;
    write_manifest(&manifest, args.manifest.as_deref())?;
    Ok(Outcome::Success)
}

fn write_manifest(m: &RunManifest, path: Option<&Path>) -> anyhow::Result<()> {
    if let Some(p) = path {
        fs::write(p, m.to_text()).with_context(|| format!("writing manifest {}", p.display()))?;
    }
    Ok(())
}

/// Every record under `dir`, keyed by did.
fn load_record_dir(dir: &Path) -> anyhow::Result<BTreeMap<String, TopicEvent>> {
    if !dir.is_dir() {
        return Err(usage(format!(
            "record directory {} does not exist",
            dir.display()
        )));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json" || x == "jsonl"))
        .collect();
    files.sort();
    let mut map = BTreeMap::new();
    for p in files {
        let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
        for te in
            parse_records(&text).with_context(|| format!("invalid records in {}", p.display()))?
        {
            if map.contains_key(&te.did) {
                bail!(
                    "did {} appears more than once (again in {})",
                    te.did,
                    p.display()
                );
            }
            map.insert(te.did.clone(), te);
        }
    }
    Ok(map)
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let mut manifest = RunManifest::new("eval");
    let (cfg, _) = load_config(&mut manifest, args.scoring.config.as_deref())?;
    let onto = load_ontology(&mut manifest, args.resources.ontology.as_deref())?;
    let styles = load_styles(&mut manifest, args.resources.style_ontology.as_deref())?;
    let (scorer, _) = build_scorer(&mut manifest, &cfg, &args.scoring, onto, styles)?;
    let thresholds = match &args.thresholds {
        Some(s) => parse_thresholds(s).map_err(|e| usage(format!("--thresholds: {e}")))?,
        None => default_grid(),
    };
    manifest.input(&args.te_dir);
    manifest.input(&args.pairs);
    let records = manifest.stage("load_records", || load_record_dir(&args.te_dir))?;
    let pair_text = fs::read_to_string(&args.pairs)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.pairs.display())))?;
    let pair_file = load_pair_file(&pair_text)
        .with_context(|| format!("invalid pairs file {}", args.pairs.display()))?;
    if pair_file.pairs.is_empty() {
        bail!("no pairs in {}", args.pairs.display());
    }

    let (mut kept, mut skipped) = (Vec::new(), Vec::new());
    for p in &pair_file.pairs {
        let missing: Vec<&str> = [&p.did_a, &p.did_b]
            .into_iter()
            .filter(|d| !records.contains_key(*d))
            .map(String::as_str)
            .collect();
        if missing.is_empty() {
            kept.push(p.clone());
        } else {
            skipped.push((p, missing.join(",")));
        }
    }
    for (p, missing) in &skipped {
        eprintln!("skip\t{}\t{}\tmissing={missing}", p.did_a, p.did_b);
    }
    let total = pair_file.pairs.len();
    eprintln!(
        "pairs={total} scored={} skipped={}",
        kept.len(),
        skipped.len()
    );
    manifest.counter("pairs", total);
    manifest.counter("pairs_skipped", skipped.len());
    if skipped.len() * 2 > total {
        bail!("{} of {total} pairs skipped (more than half); check that {} holds a record for every did", skipped.len(), args.te_dir.display());
    }

    let pool = worker_pool(args.workers)?;
    let scored: Vec<(f64, Duration)> = manifest.stage("score", || {
        pool.install(|| {
            kept.par_iter()
                .map(|p| {
                    let start = Instant::now();
                    let s = scorer.score(&records[&p.did_a], &records[&p.did_b]);
                    s.map(|bd| (bd.total, start.elapsed()))
                })
                .collect::<Result<Vec<_>, _>>()
        })
    })?;
    let scores: Vec<f64> = scored.iter().map(|s| s.0).collect();
    let mean_ms =
        scored.iter().map(|s| s.1.as_secs_f64()).sum::<f64>() * 1e3 / scored.len().max(1) as f64;
    eprintln!("mean_pair_ms={mean_ms:.4}");
    manifest.counter("mean_pair_ms", format!("{mean_ms:.4}"));

    let report = EvalReport::compute(&scores, &kept, &thresholds)?;
    let csv = report.to_csv();
    match &args.out {
        Some(p) => {
            fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
            manifest.output(p);
        }
        None => out.write_all(csv.as_bytes())?,
    }
    if let Some(p) = &args.scores {
        let mut table = String::from("did_a\tdid_b\tlabel2\tlabel5\tscore\n");
        for (pair, s) in kept.iter().zip(&scores) {
            let _ = writeln!(
                table,
                "{}\t{}\t{}\t{}\t{s}",
                pair.did_a, pair.did_b, pair.label2, pair.label5
            );
        }
        fs::write(p, table).with_context(|| format!("writing {}", p.display()))?;
        manifest.output(p);
    }
    write_manifest(&manifest, args.manifest.as_deref())?;
    Ok(if skipped.is_empty() {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}

pub fn cmd_lsa_build(args: &LsaBuildArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let mut manifest = RunManifest::new("lsa-build");
    let (cfg, _) = load_config(&mut manifest, args.config.as_deref())?;
    let articles = load_articles(&args.corpus)?;
    if articles.is_empty() {
        bail!("no articles in {}", args.corpus.display());
    }
    let docs = corpus_documents(&articles);
    let vocab = docs
        .iter()
        .flatten()
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let k = clamp_rank(args.lsa_rank.unwrap_or(cfg.lsa_rank), vocab, docs.len());
    if k == 0 {
        return Err(usage("--lsa-rank must be at least 1"));
    }
    let space = build_lsa_space(&docs, k, cfg.lsa_weighting)?;
    fs::write(&args.out, space.to_vector_space().to_text())
        .with_context(|| format!("writing {}", args.out.display()))?;
    writeln!(
        out,
        "terms={} docs={} k={}",
        space.terms.len(),
        docs.len(),
        space.k
    )?;
    Ok(Outcome::Success)
}

pub fn cmd_ontology_check(
    args: &OntologyCheckArgs,
    out: &mut dyn Write,
) -> anyhow::Result<Outcome> {
    let embedded = if args.style {
        resources::STYLE_ONTOLOGY
    } else {
        resources::CL_ONTOLOGY
    };
    let text = read_resource(
        &mut RunManifest::new("ontology-check"),
        "ontology",
        args.path.as_deref(),
        embedded,
    )?;
    let g = OntologyGraph::load(&text).context("invalid ontology")?;
    writeln!(out, "nodes={} max_depth={}", g.len(), g.max_depth())?;
    for (i, n) in g.depth_histogram().iter().enumerate() {
        writeln!(out, "depth.{}={n}", i + 1)?;
    }
    writeln!(out, "root={}", g.label(g.root()))?;
    if args.style {
        StyleOntology::new(g).context("invalid style ontology")?;
        writeln!(out, "styles=ok")?;
    }
    Ok(Outcome::Success)
}

pub fn cmd_config(args: &ConfigArgs, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let (cfg, defaults) = load_config(&mut RunManifest::new("config"), args.config.as_deref())?;
    match &args.config {
        Some(p) if !defaults => writeln!(out, "# config={}", p.display())?,
        _ => writeln!(out, "# config=defaults")?,
    }
    out.write_all(cfg.to_text().as_bytes())?;
    Ok(Outcome::Success)
}
