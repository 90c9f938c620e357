use thiserror::Error;

use crate::lang::LangCode;
use crate::report::{Code, DocPath, Finding, Severity, ValidationReport};

/// Violations caught when constructing model values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid language tag {0:?}")]
    InvalidLang(String),
    #[error("data category key must not be empty")]
    EmptyCategoryKey,
    #[error("data category {0:?} has an empty value")]
    EmptyCategoryValue(String),
    #[error("{0:?} is structural and cannot be stored as a data category")]
    StructuralCategory(String),
    #[error(
        "administrativeStatus must be preferredTerm, deprecatedTerm or admittedTerm, got {0:?}"
    )]
    InvalidAdministrativeStatus(String),
    #[error("id scheme {0:?} must contain exactly one %d placeholder")]
    InvalidIdScheme(String),
}

/// Failure to read a TBX or TEI document.
///
/// Apart from [`ParseError::MalformedXml`], every variant is fatal only in
/// strict mode; lenient parsing records it as a finding with the same code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed XML at {line}:{column}: {message}")]
    MalformedXml {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("{path}: missing xml:lang")]
    MissingLang { path: DocPath },
    #[error("{path}: invalid language tag {tag:?}")]
    InvalidLang { path: DocPath, tag: String },
    #[error("{path}: empty term")]
    EmptyTerm { path: DocPath },
    #[error("{path}: more than one term in a term section")]
    MultipleTerms { path: DocPath },
    #[error("{path}: unknown element <{name}>")]
    UnknownElement { path: DocPath, name: String },
    #[error("{path}: unexpected text content")]
    UnexpectedText { path: DocPath },
    #[error("{path}: second language section for {lang}")]
    DuplicateLang { path: DocPath, lang: LangCode },
    #[error("{path}: expected namespace {expected:?}, found {found:?}")]
    NamespaceMismatch {
        path: DocPath,
        expected: String,
        found: String,
    },
    #[error("{path}: invalid data category: {reason}")]
    InvalidCategory { path: DocPath, reason: String },
    #[error("{path}: <cit> without <quote>")]
    CitWithoutQuote { path: DocPath },
    #[error("{path}: inline markup inside text content")]
    InlineMarkup { path: DocPath },
    #[error("{path}: unknown form type {value:?}")]
    UnknownFormType { path: DocPath, value: String },
    #[error("{path}: attribute {name:?} from a foreign namespace")]
    ForeignAttribute { path: DocPath, name: String },
    #[error("{path}: nesting deeper than {limit} levels")]
    NestingTooDeep { path: DocPath, limit: usize },
    #[error("document violates the structural profile:\n{}", .0.to_text())]
    InvalidModel(ValidationReport),
}

impl ParseError {
    pub fn code(&self) -> Code {
        match self {
            ParseError::MalformedXml { .. } => Code::MalformedXml,
            ParseError::MissingLang { .. } => Code::MissingLang,
            ParseError::InvalidLang { .. } => Code::InvalidLang,
            ParseError::EmptyTerm { .. } => Code::EmptyTerm,
            ParseError::MultipleTerms { .. } => Code::MultipleTerms,
            ParseError::UnknownElement { .. } => Code::UnknownElement,
            ParseError::UnexpectedText { .. } => Code::UnexpectedText,
            ParseError::DuplicateLang { .. } => Code::DuplicateLang,
            ParseError::NamespaceMismatch { .. } => Code::NamespaceMismatch,
            ParseError::InvalidCategory { .. } => Code::InvalidCategory,
            ParseError::CitWithoutQuote { .. } => Code::CitWithoutQuote,
            ParseError::InlineMarkup { .. } => Code::LossyInline,
            ParseError::UnknownFormType { .. } => Code::UnknownFormType,
            ParseError::ForeignAttribute { .. } => Code::ForeignAttribute,
            ParseError::NestingTooDeep { .. } => Code::NestingTooDeep,
            ParseError::InvalidModel(report) => report
                .findings()
                .iter()
                .find(|f| f.severity == Severity::Error)
                .map(|f| f.code)
                .unwrap_or(Code::MissingTermSection),
        }
    }

    pub fn path(&self) -> DocPath {
        match self {
            ParseError::MalformedXml { .. } => DocPath::root("document", 1, 0),
            ParseError::MissingLang { path }
            | ParseError::InvalidLang { path, .. }
            | ParseError::EmptyTerm { path }
            | ParseError::MultipleTerms { path }
            | ParseError::UnknownElement { path, .. }
            | ParseError::UnexpectedText { path }
            | ParseError::DuplicateLang { path, .. }
            | ParseError::NamespaceMismatch { path, .. }
            | ParseError::InvalidCategory { path, .. }
            | ParseError::CitWithoutQuote { path }
            | ParseError::InlineMarkup { path }
            | ParseError::UnknownFormType { path, .. }
            | ParseError::ForeignAttribute { path, .. }
            | ParseError::NestingTooDeep { path, .. } => path.clone(),
            ParseError::InvalidModel(report) => report
                .findings()
                .first()
                .map(|f| f.path.clone())
                .unwrap_or_default(),
        }
    }

    /// The error as a report, for callers that print diagnostics uniformly.
    pub fn to_report(&self) -> ValidationReport {
        match self {
            ParseError::InvalidModel(report) => report.clone(),
            other => {
                let mut path = other.path();
                if path.is_empty() {
                    path = DocPath::root("document", 1, 0);
                }
                ValidationReport::from_findings(vec![Finding::error(
                    other.code(),
                    path,
                    other.to_string(),
                )])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WriteError {
    #[error("model fails structural validation:\n{}", .0.to_text())]
    InvalidModel(ValidationReport),
    #[error("{context}: character U+{code:04X} cannot be represented in XML 1.0")]
    InvalidCharacter { context: String, code: u32 },
    #[error("{0:?} is not a usable XML attribute or element name")]
    InvalidName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrosswalkError {
    #[error("two lexica share the object language {0}")]
    DuplicateObjectLanguage(LangCode),
    #[error("source model fails the required profile:\n{}", .0.to_text())]
    InvalidSource(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("equivalents need two different languages, got {0} twice")]
    SameLanguage(LangCode),
}

/// Failure to load a model document of any supported format.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid JSON model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot tell whether the input is TBX, TEI or JSON")]
    UnknownFormat,
}

impl LoadError {
    pub fn to_report(&self) -> ValidationReport {
        match self {
            LoadError::Parse(e) => e.to_report(),
            LoadError::Json(e) => ValidationReport::from_findings(vec![Finding::error(
                Code::MalformedJson,
                DocPath::root("document", 1, 0),
                e.to_string(),
            )]),
            LoadError::UnknownFormat => ValidationReport::from_findings(vec![Finding::error(
                Code::UnknownFormat,
                DocPath::root("document", 1, 0),
                self.to_string(),
            )]),
        }
    }
}
