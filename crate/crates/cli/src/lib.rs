//! Command-line front end: `analyze` a CoNLL-U folder into vectors, or
//! `list-metrics` of a language pack.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use stylovec::conllu::{assemble, discover, RawCorpusEntry, DEFAULT_PATTERN};
use stylovec::engine::evaluate_with_hash;
use stylovec::output::{write_debug_csv, write_vectors_csv, write_vectors_json};
use stylovec::{registry_for, Category, Document, Language, Registry, StyloVector};

#[derive(Debug, Parser)]
#[command(name = "stylovec", version, about = "Stylometric vectors from CoNLL-U corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one vector per document of a corpus folder.
    Analyze(AnalyzeArgs),
    /// Print the metrics registered for a language.
    ListMetrics(ListArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ListFormat {
    #[default]
    Text,
    Json,
}

fn parse_language(s: &str) -> Result<Language, String> {
    s.parse()
}

fn parse_category(s: &str) -> Result<Category, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Folder of CoNLL-U files, one document per file.
    #[arg(long)]
    pub input: PathBuf,
    /// Pack to apply; defaults to the `# language = ..` comment of each file.
    #[arg(long, value_parser = parse_language)]
    pub lang: Option<Language>,
    /// Vectors file; standard output when omitted. A corpus mixing
    /// languages writes one `<stem>.<lang>.<ext>` file per language.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Folder that receives one `<doc_id>.debug.csv` per document.
    #[arg(long)]
    pub debug_out: Option<PathBuf>,
    /// Keep only these metric categories (comma separated)
    #[arg(long, value_delimiter = ',', value_parser = parse_category)]
    pub categories: Vec<Category>,
    /// Keep only these metric ids (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub metrics: Vec<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    /// Abort without writing output when any file fails.
    #[arg(long)]
    pub strict: bool,
    /// Also write the run report as JSON to this path.
    #[arg(long)]
    pub report_json: Option<PathBuf>,
    /// File name glob inside the input folder
    #[arg(long, default_value = DEFAULT_PATTERN)]
    pub pattern: String,
}

#[derive(Debug, Clone, Args)]
pub struct ListArgs {
    #[arg(long, value_parser = parse_language)]
    pub lang: Language,
    #[arg(long, value_delimiter = ',', value_parser = parse_category)]
    pub categories: Vec<Category>,
    #[arg(long, value_enum, default_value_t)]
    pub format: ListFormat,
}

#[derive(Debug, Clone, Serialize)]
pub struct FileError {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LanguageRun {
    pub language: Language,
    pub schema_hash: String,
    pub metrics: usize,
    pub documents: usize,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub corpus_dir: String,
    pub languages: Vec<LanguageRun>,
    pub discovered: usize,
    pub processed: usize,
    pub failed: usize,
    pub errors: Vec<FileError>,
    /// Metric evaluations that failed inside otherwise processed documents.
    pub metric_errors: usize,
    /// Set when `--strict` stopped the run before any output was written.
    pub aborted: bool,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 || self.metric_errors > 0 || self.aborted {
            1
        } else {
            0
        }
    }
}

impl std::fmt::Display for RunReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "corpus: {}", self.corpus_dir)?;
        for l in &self.languages {
            writeln!(
                f,
                "language {}: {} documents, {} metrics, schema {}",
                l.language,
                l.documents,
                l.metrics,
                &l.schema_hash[..12.min(l.schema_hash.len())]
            )?;
        }
        writeln!(f, "files: {} discovered, {} processed, {} failed", self.discovered, self.processed, self.failed)?;
        for e in &self.errors {
            writeln!(f, "  {}: {}", e.path, e.message)?;
        }
        if self.metric_errors > 0 {
            writeln!(f, "metric errors: {}", self.metric_errors)?;
        }
        if self.aborted {
            writeln!(f, "aborted (--strict): no output written")?;
        }
        write!(f, "wall time: {} ms", self.wall_time_ms)
    }
}

/// Per-language registry after applying the category and id filters.
/// A filter entry must apply to at least one of `languages`.
fn registries(languages: &[Language], categories: &[Category], ids: &[String]) -> Result<BTreeMap<Language, Registry>> {
    if let Some(c) = categories.iter().find(|c| !languages.iter().any(|l| l.categories().contains(c))) {
        let codes: Vec<&str> = languages.iter().map(|l| l.code()).collect();
        bail!("unknown category `{c}` for language {}", codes.join(", "));
    }
    let mut out = BTreeMap::new();
    for &lang in languages {
        let own: Vec<Category> = categories.iter().copied().filter(|c| lang.categories().contains(c)).collect();
        let mut registry = registry_for(lang, (!categories.is_empty()).then_some(own.as_slice()))?;
        if !ids.is_empty() {
            let own: Vec<String> = ids.iter().filter(|id| registry.get(id).is_some()).cloned().collect();
            registry = registry.filtered(|d| own.contains(&d.id));
        }
        out.insert(lang, registry);
    }
    if let Some(id) = ids.iter().find(|id| !out.values().any(|r| r.get(id).is_some())) {
        bail!("unknown metric id {id}");
    }
    Ok(out)
}

fn language_output(out: &Path, lang: Language) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{}.{}", lang.code(), ext.to_string_lossy()),
        None => format!("{stem}.{}", lang.code()),
    };
    out.with_file_name(name)
}

fn write_vectors(
    format: Format,
    lang: Language,
    registry: &Registry,
    vectors: &[StyloVector],
    sink: impl Write,
) -> Result<()> {
    let ids = registry.ids();
    match format {
        Format::Csv => write_vectors_csv(&ids, vectors, sink)?,
        Format::Json => write_vectors_json(lang, &registry.schema_hash(), &ids, vectors, sink)?,
    };
    Ok(())
}

fn write_debug(dir: &Path, docs: &[&Document], vectors: &[StyloVector]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (doc, vector) in docs.iter().zip(vectors) {
        let path = dir.join(format!("{}.debug.csv", doc.doc_id));
        let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
        write_debug_csv(doc, &vector.values, BufWriter::new(file))?;
    }
    Ok(())
}

/// Run `analyze`. `Err` means a usage or contract error; file-level
/// failures are reported in the returned [`RunReport`].
pub fn analyze(args: &AnalyzeArgs) -> Result<RunReport> {
    let started = Instant::now();
    let jobs = args.jobs.map_or_else(|| std::thread::available_parallelism().map_or(1, usize::from), usize::from);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;

    let paths = discover(&args.input, &args.pattern)?;
    let outcomes = pool.install(|| paths.par_iter().map(|p| RawCorpusEntry::read(p).and_then(|e| e.parse())).collect());
    let corpus = assemble(outcomes, &paths);
    let errors: Vec<FileError> = corpus
        .errors
        .iter()
        .map(|e| FileError {
            path: e.path().map_or_else(|| args.input.display().to_string(), |p| p.display().to_string()),
            message: e.to_string(),
        })
        .collect();
    let mut report = RunReport {
        corpus_dir: args.input.display().to_string(),
        languages: Vec::new(),
        discovered: corpus.discovered,
        processed: corpus.documents.len(),
        failed: corpus.errors.len(),
        errors,
        metric_errors: 0,
        aborted: false,
        wall_time_ms: 0,
    };

    let mut by_language: BTreeMap<Language, Vec<&Document>> = BTreeMap::new();
    for doc in &corpus.documents {
        let lang = match (args.lang, doc.language) {
            (Some(forced), declared) => {
                if declared.is_some_and(|d| d != forced) {
                    log::warn!("{}: declares language {}, analysed as {forced}", doc.doc_id, declared.unwrap_or(forced));
                }
                forced
            }
            (None, Some(declared)) => declared,
            (None, None) => bail!("--lang is required: document `{}` has no `# language = ..` comment", doc.doc_id),
        };
        by_language.entry(lang).or_default().push(doc);
    }
    if by_language.len() > 1 && args.out.is_none() {
        bail!("corpus mixes languages; --out is required to name the per-language files");
    }
    let languages: Vec<Language> = by_language.keys().copied().collect();
    let registries = registries(&languages, &args.categories, &args.metrics)?;

    if args.strict && report.failed > 0 {
        report.aborted = true;
        report.wall_time_ms = started.elapsed().as_millis();
        return Ok(report);
    }

    for (lang, docs) in &by_language {
        let registry = &registries[lang];
        let hash = registry.schema_hash();
        let vectors: Vec<StyloVector> =
            pool.install(|| docs.par_iter().map(|d| evaluate_with_hash(registry, &hash, d)).collect());
        for v in &vectors {
            for r in v.values.iter().filter(|r| r.error.is_some()) {
                log::warn!("{}: metric {} failed: {}", v.doc_id, r.metric_id, r.error.as_deref().unwrap_or_default());
                report.metric_errors += 1;
            }
        }

        let target = match &args.out {
            Some(out) if by_language.len() > 1 => Some(language_output(out, *lang)),
            other => other.clone(),
        };
        match &target {
            Some(path) => {
                let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
                let mut sink = BufWriter::new(file);
                write_vectors(args.format, *lang, registry, &vectors, &mut sink)?;
                sink.flush()?;
            }
            None => write_vectors(args.format, *lang, registry, &vectors, io::stdout().lock())?,
        }
        if let Some(dir) = &args.debug_out {
            write_debug(dir, docs, &vectors)?;
        }
        report.languages.push(LanguageRun {
            language: *lang,
            schema_hash: hash,
            metrics: registry.len(),
            documents: docs.len(),
            output: target.map(|p| p.display().to_string()),
        });
    }

    report.wall_time_ms = started.elapsed().as_millis();
    if let Some(path) = &args.report_json {
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &report)?;
    }
    Ok(report)
}

#[derive(Debug, Serialize)]
struct Listing<'a> {
    language: Language,
    schema_hash: String,
    metrics: Vec<&'a stylovec::MetricDescriptor>,
}

/// Run `list-metrics`, printing to `sink` in registry order.
pub fn list_metrics(args: &ListArgs, mut sink: impl Write) -> Result<()> {
    let cats = (!args.categories.is_empty()).then_some(args.categories.as_slice());
    let registry = registry_for(args.lang, cats)?;
    match args.format {
        ListFormat::Text => {
            for d in registry.descriptors() {
                writeln!(sink, "{}\t{}\t{}", d.id, d.category, d.description)?;
            }
        }
        ListFormat::Json => {
            let listing = Listing {
                language: args.lang,
                schema_hash: registry.schema_hash(),
                metrics: registry.descriptors().collect(),
            };
            serde_json::to_writer_pretty(&mut sink, &listing)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Analyze(args) => analyze(args).map(|report| {
            eprintln!("{report}");
            report.exit_code()
        }),
        Command::ListMetrics(args) => list_metrics(args, io::stdout().lock()).map(|()| 0),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        2
    })
}
