use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexmeta_core::{Format, IdScheme, LangCode, ParseMode};

#[derive(Debug, Parser)]
#[command(
    name = "lexmeta",
    version,
    about = "Validate, convert and query TBX term bases and TEI dictionaries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse inputs and report findings under a validation profile.
    Validate(ValidateArgs),
    /// Convert between TBX, TEI and the JSON model dump.
    Convert(ConvertArgs),
    /// Run a lexical query; prints one JSON record per line.
    Query(QueryArgs),
    /// Print entry, language, term and sense counts as JSON.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Files, directories or glob patterns.
    pub inputs: Vec<String>,
    /// Parse mode.
    #[arg(long, default_value = "strict", value_parser = parse_mode)]
    pub mode: ParseMode,
    /// Write output here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Input format; inferred from extension or content when absent.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    /// minimal or recommended for TBX; lenient, lmf-core, lmf-mrd or lmf
    /// for TEI.
    #[arg(long)]
    pub profile: Option<String>,
    /// Object language for TEI input.
    #[arg(long, value_parser = parse_lang)]
    pub lang: Option<LangCode>,
    /// Print findings as JSON lines.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Source format; inferred when absent.
    #[arg(long, alias = "format", value_parser = parse_format)]
    pub from: Option<Format>,
    /// Target format.
    #[arg(long, value_parser = parse_format)]
    pub to: Format,
    /// Object language of the TEI side.
    #[arg(long, value_parser = parse_lang)]
    pub lang: Option<LangCode>,
    /// Emit TEI entries without the TEI/text/body wrapper.
    #[arg(long)]
    pub bare: bool,
    /// Add the other terms of a language section as variant forms.
    #[arg(long)]
    pub concat_synonyms: bool,
    /// Put definitions on the language section instead of the concept.
    #[arg(long, value_enum, default_value = "concept")]
    pub definition_placement: Placement,
    /// Pattern for generated ids, with one %d counter.
    #[arg(long, value_parser = parse_id_scheme)]
    pub id_scheme: Option<IdScheme>,
    /// Keep homographs with different parts of speech apart.
    #[arg(long)]
    pub split_by_pos: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Placement {
    Concept,
    Language,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QueryKind {
    Lemma,
    Synonyms,
    Equivalents,
    Polysemy,
    Usage,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Query kind. Without it the first positional argument names the kind:
    /// lemma, synonyms, equivalents, polysemy or usage.
    #[arg(long = "query", value_enum)]
    pub query: Option<QueryKind>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    #[arg(long, value_parser = parse_lang)]
    pub lang: Option<LangCode>,
    /// Target language of the equivalents query.
    #[arg(long = "langB", alias = "lang-b", value_parser = parse_lang)]
    pub lang_b: Option<LangCode>,
    /// Usage type for the usage query.
    #[arg(long, default_value = "dom")]
    pub usage_type: String,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    #[arg(long, value_parser = parse_lang)]
    pub lang: Option<LangCode>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<ParseMode, String> {
    s.parse()
}

fn parse_lang(s: &str) -> Result<LangCode, String> {
    LangCode::new(s).map_err(|e| e.to_string())
}

fn parse_id_scheme(s: &str) -> Result<IdScheme, String> {
    IdScheme::new(s).map_err(|e| e.to_string())
}
