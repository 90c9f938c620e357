use std::collections::BTreeSet;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use lexmeta_core::onoma::{accidental_polysemy, equivalents, synonyms, validate_termbase};
use lexmeta_core::sema::{
    lemma_of, sense_stats, usage_index, validate_lexicon, walk_forms, walk_senses, LemmaSource,
    UsageType,
};
use lexmeta_core::{
    lexicon_conformance, load, onoma_projection, sema_projection, write_tbx, write_tei,
    CrosswalkError, DefinitionPlacement, Finding, Format, LangCode, Loaded, ModelDocument,
    OnomaProfile, ParseOptions, ProjectionOptions, SemaProfile, Severity, TeiDocument, TeiLayout,
    ValidationReport,
};

use crate::args::{
    ConvertArgs, InputArgs, Placement, QueryArgs, QueryKind, StatsArgs, ValidateArgs,
};
use crate::inputs::expand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Findings = 1,
    Fatal = 2,
}

/// Buffered command output, written once at the end so that a failing
/// command never leaves a half-written file behind.
struct Sink {
    target: Option<PathBuf>,
    buffer: Vec<u8>,
}

impl Sink {
    fn new(input: &InputArgs) -> Self {
        Sink {
            target: input.output.clone(),
            buffer: Vec::new(),
        }
    }

    fn line(&mut self, text: &str) {
        self.buffer.extend_from_slice(text.as_bytes());
        self.buffer.push(b'\n');
    }

    fn record(&mut self, value: &impl Serialize) {
        let text = serde_json::to_string(value).expect("records serialize");
        self.line(&text);
    }

    fn finish(self) -> Result<()> {
        match self.target {
            Some(path) => fs::write(&path, &self.buffer)
                .with_context(|| format!("cannot write {}", path.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&self.buffer)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

fn options(input: &InputArgs, lang: Option<&LangCode>) -> ParseOptions {
    ParseOptions {
        mode: input.mode,
        lang: lang.cloned(),
        ..ParseOptions::default()
    }
}

/// Reads and parses one file. The error side carries the status and has
/// already been reported on standard error.
fn load_file(
    path: &Path,
    format: Option<Format>,
    opts: &ParseOptions,
) -> Result<(Format, Loaded), (Status, ValidationReport)> {
    let bytes = match fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) => {
            eprintln!("lexmeta: {}: {e}", path.display());
            return Err((Status::Fatal, ValidationReport::new()));
        }
    };
    let format = format
        .or_else(|| Format::from_path(path))
        .or_else(|| Format::sniff(&bytes));
    let Some(format) = format else {
        eprintln!(
            "lexmeta: {}: cannot tell whether the input is TBX, TEI or JSON",
            path.display()
        );
        return Err((Status::Fatal, ValidationReport::new()));
    };
    match load(&bytes, Some(format), opts) {
        Ok(loaded) => Ok((format, loaded)),
        Err(e) => {
            eprintln!("lexmeta: {}: {e}", path.display());
            Err((Status::Fatal, e.to_report()))
        }
    }
}

fn report_status(report: &ValidationReport) -> Status {
    if report.has_errors() {
        Status::Findings
    } else {
        Status::Ok
    }
}

fn usage_error(message: impl std::fmt::Display) -> Result<Status> {
    eprintln!("lexmeta: {message}");
    Ok(Status::Fatal)
}

fn print_findings_to_stderr(file: &Path, report: &ValidationReport) {
    for finding in report.findings() {
        eprintln!("{}\t{}", file.display(), finding.to_line());
    }
}

#[derive(Serialize)]
struct FindingRecord<'a> {
    file: String,
    #[serde(flatten)]
    finding: &'a Finding,
}

fn profile_report(
    document: &ModelDocument,
    profile: Option<&str>,
) -> Result<ValidationReport, String> {
    match document {
        ModelDocument::TermBase(base) => {
            let profile = match profile.unwrap_or("minimal") {
                "minimal" => OnomaProfile::Minimal,
                "recommended" => OnomaProfile::Recommended,
                other => {
                    return Err(format!(
                        "profile {other:?} does not apply to TBX (minimal, recommended)"
                    ))
                }
            };
            Ok(validate_termbase(base, profile))
        }
        ModelDocument::TeiDocument(doc) => match profile.unwrap_or("lenient") {
            "lmf" => Ok(lexicon_conformance(&doc.lexicon)),
            name => match name.parse::<SemaProfile>() {
                Ok(profile) => Ok(validate_lexicon(&doc.lexicon, profile)),
                Err(_) => Err(format!(
                    "profile {name:?} does not apply to TEI (lenient, lmf-core, lmf-mrd, lmf)"
                )),
            },
        },
    }
}

/// Findings of `extra` not already in `base`.
fn merged(base: &ValidationReport, extra: ValidationReport) -> ValidationReport {
    let mut findings = base.findings().to_vec();
    for finding in extra.into_findings() {
        if !findings.contains(&finding) {
            findings.push(finding);
        }
    }
    ValidationReport::from_findings(findings)
}

pub fn validate(args: &ValidateArgs) -> Result<Status> {
    let files = expand(&args.input.inputs)?;
    let opts = options(&args.input, args.lang.as_ref());
    let mut sink = Sink::new(&args.input);
    let mut status = Status::Ok;
    for file in &files {
        let report = match load_file(file, args.format, &opts) {
            Ok((_, loaded)) => match profile_report(&loaded.document, args.profile.as_deref()) {
                Ok(extra) => {
                    let report = merged(&loaded.report, extra);
                    status = status.max(report_status(&report));
                    report
                }
                Err(message) => return usage_error(format!("{}: {message}", file.display())),
            },
            Err((fatal, report)) => {
                status = status.max(fatal);
                report
            }
        };
        for finding in report.findings() {
            if args.json {
                sink.record(&FindingRecord {
                    file: file.display().to_string(),
                    finding,
                });
            } else {
                sink.line(&format!("{}\t{}", file.display(), finding.to_line()));
            }
        }
    }
    sink.finish()?;
    Ok(status)
}

fn projection_options(args: &ConvertArgs) -> ProjectionOptions {
    ProjectionOptions {
        concat_synonyms_as_variants: args.concat_synonyms,
        definition_placement: match args.definition_placement {
            Placement::Concept => DefinitionPlacement::ConceptLevel,
            Placement::Language => DefinitionPlacement::LanguageLevel,
        },
        id_scheme: args.id_scheme.clone(),
        split_homographs_by_pos: args.split_by_pos,
    }
}

fn crosswalk_failure(error: CrosswalkError) -> Result<Status> {
    match error {
        CrosswalkError::InvalidSource(report) => {
            eprintln!("lexmeta: source model fails the minimal profile");
            for finding in report.findings() {
                eprintln!("{}", finding.to_line());
            }
        }
        other => eprintln!("lexmeta: {other}"),
    }
    Ok(Status::Findings)
}

pub fn convert(args: &ConvertArgs) -> Result<Status> {
    let files = expand(&args.input.inputs)?;
    if files.is_empty() {
        return usage_error("convert needs at least one input");
    }
    let opts = options(&args.input, args.lang.as_ref());
    let mut status = Status::Ok;
    let mut from = None;
    let mut documents = Vec::new();
    for file in &files {
        let (format, loaded) = match load_file(file, args.from, &opts) {
            Ok(ok) => ok,
            Err((fatal, report)) => {
                print_findings_to_stderr(file, &report);
                return Ok(fatal);
            }
        };
        if from.is_some_and(|f| f != format) {
            return usage_error("all inputs of one conversion must share a format");
        }
        from = Some(format);
        print_findings_to_stderr(file, &loaded.report);
        status = status.max(report_status(&loaded.report));
        documents.push(loaded.document);
    }
    let from = from.expect("at least one input");
    if from == args.to {
        return usage_error(format!("unsupported conversion {from} -> {}", args.to));
    }
    if documents.len() > 1 && !(args.to == Format::Tbx && from == Format::Tei) {
        return usage_error("only TEI to TBX conversion accepts several inputs");
    }
    let projection = projection_options(args);

    let bytes = match args.to {
        Format::Json => documents.remove(0).to_json().into_bytes(),
        Format::Tbx => {
            let base = match documents.as_slice() {
                [ModelDocument::TermBase(base)] => base.clone(),
                docs => {
                    let mut lexica = Vec::new();
                    for doc in docs {
                        match doc {
                            ModelDocument::TeiDocument(tei) => lexica.push(tei.lexicon.clone()),
                            ModelDocument::TermBase(_) => {
                                return usage_error("cannot mix term bases and lexica")
                            }
                        }
                    }
                    match onoma_projection(&lexica, &projection) {
                        Ok((base, loss)) => {
                            for finding in loss.findings() {
                                eprintln!("{}", finding.to_line());
                            }
                            base
                        }
                        Err(e) => return crosswalk_failure(e),
                    }
                }
            };
            match write_tbx(&base) {
                Ok(bytes) => bytes,
                Err(e) => {
                    eprintln!("lexmeta: {e}");
                    return Ok(Status::Findings);
                }
            }
        }
        Format::Tei => {
            let doc = match documents.remove(0) {
                ModelDocument::TeiDocument(doc) => doc,
                ModelDocument::TermBase(base) => {
                    let Some(lang) = &args.lang else {
                        return usage_error("converting a term base to TEI needs --lang");
                    };
                    match sema_projection(&base, lang, &projection) {
                        Ok((lexicon, loss)) => {
                            for finding in loss.findings() {
                                eprintln!("{}", finding.to_line());
                            }
                            TeiDocument::new(lexicon)
                        }
                        Err(e) => return crosswalk_failure(e),
                    }
                }
            };
            let layout = if args.bare {
                TeiLayout::Bare
            } else {
                TeiLayout::Wrapped
            };
            match write_tei(&doc, layout) {
                Ok(bytes) => bytes,
                Err(e) => {
                    eprintln!("lexmeta: {e}");
                    return Ok(Status::Findings);
                }
            }
        }
    };
    let mut sink = Sink::new(&args.input);
    sink.buffer = bytes;
    sink.finish()?;
    Ok(status)
}

#[derive(Serialize)]
struct LemmaRecord<'a> {
    file: String,
    entry: &'a str,
    lemma: Option<&'a str>,
    source: Option<&'static str>,
}

#[derive(Serialize)]
struct TermRecord<'a> {
    file: String,
    entry: &'a str,
    lang: &'a LangCode,
    term: &'a str,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PairRecord<'a> {
    file: String,
    entry: &'a str,
    lang: &'a LangCode,
    term: &'a str,
    lang_b: &'a LangCode,
    term_b: &'a str,
}

#[derive(Serialize)]
struct PolysemyRecord<'a> {
    file: String,
    lang: &'a LangCode,
    term: &'a str,
    entries: &'a [String],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct UsageRecord<'a> {
    file: String,
    usage_type: &'a str,
    value: &'a str,
    entries: &'a [String],
}

pub fn query(args: &QueryArgs) -> Result<Status> {
    let mut inputs = args.input.inputs.clone();
    let kind = match args.query {
        Some(kind) => kind,
        None if inputs.is_empty() => {
            return usage_error(
                "query needs a kind: lemma, synonyms, equivalents, polysemy or usage",
            )
        }
        None => {
            let name = inputs.remove(0);
            match QueryKind::from_str(&name, true) {
                Ok(kind) => kind,
                Err(_) => return usage_error(format!("unknown query kind {name:?}")),
            }
        }
    };
    match kind {
        QueryKind::Synonyms if args.lang.is_none() => {
            return usage_error("synonyms query needs --lang")
        }
        QueryKind::Equivalents => match (&args.lang, &args.lang_b) {
            (Some(a), Some(b)) if a == b => {
                return usage_error(format!(
                    "equivalents need two different languages, got {a} twice"
                ))
            }
            (Some(_), Some(_)) => {}
            _ => return usage_error("equivalents query needs --lang and --langB"),
        },
        _ => {}
    }
    let files = expand(&inputs)?;
    // the TEI object language is not overridden by the query language
    let opts = options(&args.input, None);
    let mut sink = Sink::new(&args.input);
    let mut status = Status::Ok;
    for file in &files {
        let loaded = match load_file(file, args.format, &opts) {
            Ok((_, loaded)) => loaded,
            Err((fatal, _)) => {
                status = status.max(fatal);
                continue;
            }
        };
        status = status.max(report_status(&loaded.report));
        let name = file.display().to_string();
        match (&loaded.document, kind) {
            (ModelDocument::TeiDocument(doc), QueryKind::Lemma) => {
                let ids = doc.lexicon.entry_ids();
                for (entry, id) in doc.lexicon.entries.iter().zip(&ids) {
                    let lemma = lemma_of(entry);
                    sink.record(&LemmaRecord {
                        file: name.clone(),
                        entry: id,
                        lemma: lemma.as_ref().map(|l| l.text),
                        source: lemma.map(|l| match l.source {
                            LemmaSource::Explicit => "explicit",
                            LemmaSource::Fallback => "fallback",
                        }),
                    });
                }
            }
            (ModelDocument::TermBase(base), QueryKind::Synonyms) => {
                let lang = args.lang.as_ref().expect("checked above");
                for (entry, id) in base.entries.iter().zip(&base.entry_ids()) {
                    for term in synonyms(entry, lang) {
                        sink.record(&TermRecord {
                            file: name.clone(),
                            entry: id,
                            lang,
                            term,
                        });
                    }
                }
            }
            (ModelDocument::TeiDocument(doc), QueryKind::Synonyms) => {
                let lang = args.lang.as_ref().expect("checked above");
                if &doc.lexicon.lang != lang {
                    continue;
                }
                for (entry, id) in doc.lexicon.entries.iter().zip(&doc.lexicon.entry_ids()) {
                    let mut seen = BTreeSet::new();
                    let mut surfaces = Vec::new();
                    walk_forms(&entry.forms, &mut |form| {
                        for o in form.orthographies() {
                            if seen.insert(o) {
                                surfaces.push(o);
                            }
                        }
                    });
                    for term in surfaces {
                        sink.record(&TermRecord {
                            file: name.clone(),
                            entry: id,
                            lang,
                            term,
                        });
                    }
                }
            }
            (ModelDocument::TermBase(base), QueryKind::Equivalents) => {
                let (a, b) = (args.lang.as_ref().unwrap(), args.lang_b.as_ref().unwrap());
                for (entry, id) in base.entries.iter().zip(&base.entry_ids()) {
                    for (term, term_b) in equivalents(entry, a, b)? {
                        sink.record(&PairRecord {
                            file: name.clone(),
                            entry: id,
                            lang: a,
                            term,
                            lang_b: b,
                            term_b,
                        });
                    }
                }
            }
            (ModelDocument::TeiDocument(doc), QueryKind::Equivalents) => {
                let (a, b) = (args.lang.as_ref().unwrap(), args.lang_b.as_ref().unwrap());
                if &doc.lexicon.lang != a {
                    continue;
                }
                for (entry, id) in doc.lexicon.entries.iter().zip(&doc.lexicon.entry_ids()) {
                    let Some(lemma) = lemma_of(entry) else {
                        continue;
                    };
                    let mut pairs = Vec::new();
                    walk_senses(&entry.senses, &mut |sense, _| {
                        pairs.extend(
                            sense
                                .equivalents
                                .iter()
                                .filter(|e| &e.lang == b)
                                .map(|e| e.text.as_str()),
                        );
                    });
                    for term_b in pairs {
                        sink.record(&PairRecord {
                            file: name.clone(),
                            entry: id,
                            lang: a,
                            term: lemma.text,
                            lang_b: b,
                            term_b,
                        });
                    }
                }
            }
            (ModelDocument::TermBase(base), QueryKind::Polysemy) => {
                for ((lang, term), entries) in accidental_polysemy(base) {
                    if args.lang.as_ref().is_some_and(|l| l != &lang) {
                        continue;
                    }
                    sink.record(&PolysemyRecord {
                        file: name.clone(),
                        lang: &lang,
                        term: &term,
                        entries: &entries,
                    });
                }
            }
            (ModelDocument::TeiDocument(doc), QueryKind::Usage) => {
                let usage_type = UsageType::from_raw(&args.usage_type);
                for (value, entries) in usage_index(&doc.lexicon, &usage_type) {
                    sink.record(&UsageRecord {
                        file: name.clone(),
                        usage_type: usage_type.as_raw(),
                        value: &value,
                        entries: &entries,
                    });
                }
            }
            (document, kind) => {
                let model = match document {
                    ModelDocument::TermBase(_) => "a term base",
                    ModelDocument::TeiDocument(_) => "a TEI lexicon",
                };
                return usage_error(format!(
                    "{name}: the {} query does not apply to {model}",
                    format!("{kind:?}").to_lowercase()
                ));
            }
        }
    }
    sink.finish()?;
    Ok(status)
}

#[derive(Debug, Default, Serialize, Clone, Copy)]
struct FindingCounts {
    error: usize,
    warning: usize,
    info: usize,
}

#[derive(Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
struct Counts {
    entries: usize,
    languages: usize,
    terms: usize,
    senses: usize,
    max_depth: usize,
    findings: FindingCounts,
}

#[derive(Serialize)]
struct FileStats {
    file: String,
    format: String,
    #[serde(flatten)]
    counts: Counts,
}

#[derive(Serialize)]
struct StatsDocument {
    files: Vec<FileStats>,
    total: Counts,
}

fn document_stats(document: &ModelDocument) -> (Counts, BTreeSet<LangCode>) {
    let mut counts = Counts::default();
    let mut langs = BTreeSet::new();
    match document {
        ModelDocument::TermBase(base) => {
            counts.entries = base.entries.len();
            langs.extend(base.languages());
            counts.terms = base.entries.iter().map(|e| e.term_count()).sum();
        }
        ModelDocument::TeiDocument(doc) => {
            let lexicon = &doc.lexicon;
            counts.entries = lexicon.entries.len();
            if !lexicon.entries.is_empty() {
                langs.insert(lexicon.lang.clone());
            }
            for entry in &lexicon.entries {
                let stats = sense_stats(entry);
                counts.senses += stats.total;
                counts.max_depth = counts.max_depth.max(stats.max_depth);
                walk_forms(&entry.forms, &mut |form| {
                    counts.terms += form.orthographies().count()
                });
                walk_senses(&entry.senses, &mut |sense, _| {
                    langs.extend(sense.equivalents.iter().map(|e| e.lang.clone()));
                });
            }
        }
    }
    counts.languages = langs.len();
    (counts, langs)
}

fn count_findings(report: &ValidationReport) -> FindingCounts {
    FindingCounts {
        error: report.count(Severity::Error),
        warning: report.count(Severity::Warning),
        info: report.count(Severity::Info),
    }
}

pub fn stats(args: &StatsArgs) -> Result<Status> {
    let files = expand(&args.input.inputs)?;
    let opts = options(&args.input, args.lang.as_ref());
    let mut status = Status::Ok;
    let mut per_file = Vec::new();
    let mut total = Counts::default();
    let mut all_langs = BTreeSet::new();
    for file in &files {
        let (format, loaded) = match load_file(file, args.format, &opts) {
            Ok(ok) => ok,
            Err((fatal, _)) => {
                status = status.max(fatal);
                continue;
            }
        };
        status = status.max(report_status(&loaded.report));
        let (mut counts, langs) = document_stats(&loaded.document);
        counts.findings = count_findings(&loaded.report);
        total.entries += counts.entries;
        total.terms += counts.terms;
        total.senses += counts.senses;
        total.max_depth = total.max_depth.max(counts.max_depth);
        total.findings.error += counts.findings.error;
        total.findings.warning += counts.findings.warning;
        total.findings.info += counts.findings.info;
        all_langs.extend(langs);
        per_file.push(FileStats {
            file: file.display().to_string(),
            format: format.to_string(),
            counts,
        });
    }
    total.languages = all_langs.len();
    let mut sink = Sink::new(&args.input);
    let text = serde_json::to_string_pretty(&StatsDocument {
        files: per_file,
        total,
    })?;
    sink.line(&text);
    sink.finish()?;
    Ok(status)
}
