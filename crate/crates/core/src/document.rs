//! Format detection, the JSON model dump and a loader over all formats.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LoadError, ParseError};
use crate::onoma::{validate_termbase, OnomaProfile, TermBase};
use crate::report::ValidationReport;
use crate::sema::{validate_lexicon, SemaProfile};
use crate::tbx::parse_tbx;
use crate::tei::{parse_tei, TeiDocument};
use crate::xml::{ParseMode, ParseOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Tbx,
    Tei,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Tbx => "tbx",
            Format::Tei => "tei",
            Format::Json => "json",
        }
    }

    /// Format implied by the file extension; `.xml` is ambiguous.
    pub fn from_path(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "tbx" => Some(Format::Tbx),
            "tei" => Some(Format::Tei),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    /// Guesses the format from the first significant bytes. Works on
    /// truncated documents, so the reader can report the real problem.
    pub fn sniff(bytes: &[u8]) -> Option<Format> {
        let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
        let text = String::from_utf8_lossy(&bytes[..bytes.len().min(64 * 1024)]);
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return Some(Format::Json);
        }
        let mut rest = trimmed;
        while let Some(i) = rest.find('<') {
            rest = &rest[i + 1..];
            if rest.starts_with('?') || rest.starts_with('!') {
                continue;
            }
            let name: String = rest
                .chars()
                .take_while(|c| !c.is_whitespace() && !matches!(c, '>' | '/'))
                .collect();
            let local = name.rsplit(':').next().unwrap_or("");
            return match local {
                "martif" | "tbx" | "termEntry" | "conceptEntry" => Some(Format::Tbx),
                "TEI" | "teiCorpus" | "entry" | "entryFree" | "superEntry" => Some(Format::Tei),
                _ => None,
            };
        }
        None
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tbx" => Ok(Format::Tbx),
            "tei" => Ok(Format::Tei),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format {other:?} (expected tbx, tei or json)"
            )),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Structural JSON dump of an in-memory model. The `kind` field tells the
/// two models apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ModelDocument {
    TermBase(TermBase),
    TeiDocument(TeiDocument),
}

impl ModelDocument {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("model serializes");
        out.push('\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        serde_json::from_slice(bytes)
    }

    /// Structural validation: minimal for term bases, lenient for lexica.
    pub fn validate(&self) -> ValidationReport {
        match self {
            ModelDocument::TermBase(base) => validate_termbase(base, OnomaProfile::Minimal),
            ModelDocument::TeiDocument(doc) => validate_lexicon(&doc.lexicon, SemaProfile::Lenient),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub document: ModelDocument,
    pub report: ValidationReport,
}

/// Reads `bytes` as `format`, or as the sniffed format when `None`.
/// JSON input follows the same strictness rules as XML: structural errors
/// are fatal in strict mode and reported in lenient mode.
pub fn load(
    bytes: &[u8],
    format: Option<Format>,
    opts: &ParseOptions,
) -> Result<Loaded, LoadError> {
    let format = format
        .or_else(|| Format::sniff(bytes))
        .ok_or(LoadError::UnknownFormat)?;
    match format {
        Format::Tbx => {
            let outcome = parse_tbx(bytes, opts)?;
            Ok(Loaded {
                document: ModelDocument::TermBase(outcome.base),
                report: outcome.report,
            })
        }
        Format::Tei => {
            let (doc, report) = parse_tei(bytes, opts)?;
            Ok(Loaded {
                document: ModelDocument::TeiDocument(doc),
                report,
            })
        }
        Format::Json => {
            let document = ModelDocument::from_json(bytes)?;
            let report = document.validate();
            if opts.mode == ParseMode::Strict && report.has_errors() {
                return Err(ParseError::InvalidModel(report).into());
            }
            Ok(Loaded { document, report })
        }
    }
}
