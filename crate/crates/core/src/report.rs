//! Diagnostics shared by every validator, parser and projection.
//!
//! A [`ValidationReport`] is an ordered list of [`Finding`]s. Findings are
//! sorted by the document order of the location they flag (see [`DocPath`]),
//! ties broken by [`Code`]. Reports are plain data: nothing in this module
//! decides whether a finding is fatal.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! codes {
    ($($variant:ident => $text:literal,)*) => {
        /// Registry of finding codes.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Code {
            $($variant,)*
        }

        // codes order by name, so ties sort the same way in every language
        impl Ord for Code {
            fn cmp(&self, other: &Self) -> Ordering {
                self.as_str().cmp(other.as_str())
            }
        }

        impl PartialOrd for Code {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl Code {
            pub const ALL: &'static [Code] = &[$(Code::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Code::$variant => $text,)*
                }
            }

            pub fn from_name(name: &str) -> Option<Code> {
                match name {
                    $($text => Some(Code::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

codes! {
    // parsing
    MalformedXml => "MALFORMED_XML",
    MalformedJson => "MALFORMED_JSON",
    UnknownFormat => "UNKNOWN_FORMAT",
    MissingLang => "MISSING_LANG",
    InvalidLang => "INVALID_LANG",
    EmptyTerm => "EMPTY_TERM",
    MultipleTerms => "MULTIPLE_TERMS",
    UnknownElement => "UNKNOWN_ELEMENT",
    UnexpectedText => "UNEXPECTED_TEXT",
    NamespaceMismatch => "NAMESPACE_MISMATCH",
    InvalidCategory => "INVALID_CATEGORY",
    LangSecAlias => "LANGSEC_ALIAS",
    CitWithoutQuote => "CIT_WITHOUT_QUOTE",
    TeiHeaderSkipped => "TEI_HEADER_SKIPPED",
    DefaultLang => "DEFAULT_LANG",
    MixedLang => "MIXED_LANG",
    UnknownFormType => "UNKNOWN_FORM_TYPE",
    ForeignAttribute => "FOREIGN_ATTRIBUTE",
    NestingTooDeep => "NESTING_TOO_DEEP",
    // onomasiological model
    MissingLangSection => "MISSING_LANG_SECTION",
    MissingTermSection => "MISSING_TERM_SECTION",
    DuplicateLang => "DUPLICATE_LANG",
    DuplicateEntryId => "DUPLICATE_ENTRY_ID",
    MissingSubjectField => "MISSING_SUBJECT_FIELD",
    MissingDefinition => "MISSING_DEFINITION",
    MissingPartOfSpeech => "MISSING_PART_OF_SPEECH",
    // semasiological model
    MissingForm => "MISSING_FORM",
    MissingRepresentation => "MISSING_REPRESENTATION",
    EmptyRepresentation => "EMPTY_REPRESENTATION",
    EmptyGrammar => "EMPTY_GRAMMAR",
    EmptySense => "EMPTY_SENSE",
    EmptyDefinition => "EMPTY_DEFINITION",
    EmptyUsage => "EMPTY_USAGE",
    EmptyQuote => "EMPTY_QUOTE",
    EmptyEquivalent => "EMPTY_EQUIVALENT",
    InvalidAttribute => "INVALID_ATTRIBUTE",
    DepthExceeded => "DEPTH_EXCEEDED",
    NoExplicitLemma => "NO_EXPLICIT_LEMMA",
    MultipleLemmas => "MULTIPLE_LEMMAS",
    UnsupportedContextType => "UNSUPPORTED_CONTEXT_TYPE",
    // crosswalk
    LossyUsage => "LOSSY_USAGE",
    LossyFlatten => "LOSSY_FLATTEN",
    LossyInline => "LOSSY_INLINE",
    LossyCategory => "LOSSY_CATEGORY",
    LossyLabel => "LOSSY_LABEL",
    LossyContext => "LOSSY_CONTEXT",
    LossyAttribute => "LOSSY_ATTRIBUTE",
    InfoGramPlacement => "INFO_GRAM_PLACEMENT",
    NoDefinition => "NO_DEFINITION",
    NoLemma => "NO_LEMMA",
    PosConflict => "POS_CONFLICT",
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One step of a [`DocPath`]: an element name with its 1-based index among
/// same-named siblings, plus its 0-based position among all element
/// siblings. Only `name[index]` is rendered; `position` orders findings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathStep {
    name: String,
    index: usize,
    position: usize,
}

impl PathStep {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

impl Ord for PathStep {
    fn cmp(&self, other: &Self) -> Ordering {
        self.position
            .cmp(&other.position)
            .then_with(|| self.name.cmp(&other.name))
            .then_with(|| self.index.cmp(&other.index))
    }
}

impl PartialOrd for PathStep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Location of a finding, rendered as `termEntry[1]/langSet[2]/tig[1]`.
///
/// Paths compare in document order: an ancestor sorts before its
/// descendants, siblings by position.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocPath {
    steps: Vec<PathStep>,
}

impl DocPath {
    /// A single-step path. `index` is 1-based, `position` 0-based.
    pub fn root(name: &str, index: usize, position: usize) -> Self {
        DocPath::default().child(name, index, position)
    }

    pub fn child(&self, name: &str, index: usize, position: usize) -> Self {
        assert!(!name.is_empty(), "path step needs a name");
        assert!(index >= 1, "path indices are 1-based");
        let mut steps = self.steps.clone();
        steps.push(PathStep {
            name: name.to_string(),
            index,
            position,
        });
        DocPath { steps }
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for DocPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{}[{}]", step.name, step.index)?;
        }
        Ok(())
    }
}

impl Serialize for DocPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Hands out child paths of one parent in sibling order, keeping the
/// per-name index and the overall position.
#[derive(Debug, Clone)]
pub(crate) struct ChildPaths {
    parent: DocPath,
    counts: std::collections::HashMap<String, usize>,
    position: usize,
}

impl ChildPaths {
    pub(crate) fn new(parent: &DocPath) -> Self {
        ChildPaths {
            parent: parent.clone(),
            counts: Default::default(),
            position: 0,
        }
    }

    pub(crate) fn next(&mut self, name: &str) -> DocPath {
        let count = self.counts.entry(name.to_string()).or_insert(0);
        *count += 1;
        let path = if self.parent.is_empty() {
            DocPath::root(name, *count, self.position)
        } else {
            self.parent.child(name, *count, self.position)
        };
        self.position += 1;
        path
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: Code,
    pub path: DocPath,
    pub message: String,
}

impl Finding {
    pub fn new(severity: Severity, code: Code, path: DocPath, message: impl Into<String>) -> Self {
        Finding {
            severity,
            code,
            path,
            message: message.into(),
        }
    }

    pub fn error(code: Code, path: DocPath, message: impl Into<String>) -> Self {
        Finding::new(Severity::Error, code, path, message)
    }

    pub fn warning(code: Code, path: DocPath, message: impl Into<String>) -> Self {
        Finding::new(Severity::Warning, code, path, message)
    }

    pub fn info(code: Code, path: DocPath, message: impl Into<String>) -> Self {
        Finding::new(Severity::Info, code, path, message)
    }

    /// Tab-separated `severity code path message`. Tabs and newlines in the
    /// message are replaced by spaces so one finding stays on one line.
    pub fn to_line(&self) -> String {
        let message: String = self
            .message
            .chars()
            .map(|c| {
                if c == '\t' || c == '\n' || c == '\r' {
                    ' '
                } else {
                    c
                }
            })
            .collect();
        format!(
            "{}\t{}\t{}\t{}",
            self.severity, self.code, self.path, message
        )
    }

    fn sort_key(&self) -> (&DocPath, Code) {
        (&self.path, self.code)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport::default()
    }

    pub fn from_findings(findings: Vec<Finding>) -> Self {
        let mut report = ValidationReport { findings };
        report.sort();
        report
    }

    /// Inserts a finding at its ordered position (after equal keys).
    pub fn push(&mut self, finding: Finding) {
        let at = self
            .findings
            .partition_point(|f| f.sort_key() <= finding.sort_key());
        self.findings.insert(at, finding);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
        self.sort();
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn into_findings(self) -> Vec<Finding> {
        self.findings
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn has_errors(&self) -> bool {
        self.worst_severity() == Some(Severity::Error)
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == severity)
            .count()
    }

    pub fn codes(&self) -> Vec<Code> {
        self.findings.iter().map(|f| f.code).collect()
    }

    pub fn contains(&self, code: Code) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    pub fn worst_severity(&self) -> Option<Severity> {
        worst_severity(self)
    }

    /// The line-oriented text form, one finding per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for finding in &self.findings {
            out.push_str(&finding.to_line());
            out.push('\n');
        }
        out
    }

    fn sort(&mut self) {
        self.findings
            .sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    }
}

impl FromIterator<Finding> for ValidationReport {
    fn from_iter<T: IntoIterator<Item = Finding>>(iter: T) -> Self {
        ValidationReport::from_findings(iter.into_iter().collect())
    }
}

/// Concatenates reports and restores the ordering invariant. The sort is
/// stable, so equal-keyed findings keep their input order.
pub fn merge<I>(reports: I) -> ValidationReport
where
    I: IntoIterator<Item = ValidationReport>,
{
    let findings = reports.into_iter().flat_map(|r| r.findings).collect();
    ValidationReport::from_findings(findings)
}

pub fn worst_severity(report: &ValidationReport) -> Option<Severity> {
    report.findings.iter().map(|f| f.severity).max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn finding(severity: Severity, code: Code, path: &str) -> Finding {
        // path syntax for tests: "a.1.0/b.2.3" = name.index.position
        let mut doc = DocPath::default();
        for step in path.split('/') {
            let mut parts = step.split('.');
            let name = parts.next().unwrap();
            let index = parts.next().unwrap().parse().unwrap();
            let position = parts.next().unwrap().parse().unwrap();
            doc = doc.child(name, index, position);
        }
        Finding::new(severity, code, doc, "m")
    }

    #[test]
    fn path_renders_name_and_index() {
        let p = DocPath::root("termEntry", 1, 0)
            .child("langSet", 2, 5)
            .child("tig", 1, 0);
        assert_eq!(p.to_string(), "termEntry[1]/langSet[2]/tig[1]");
    }

    #[test]
    fn paths_sort_in_document_order() {
        let entry = DocPath::root("entry", 1, 0);
        let form = entry.child("form", 1, 0);
        let gram = entry.child("gramGrp", 1, 1);
        let sense = entry.child("sense", 1, 2);
        let orth = form.child("orth", 1, 0);
        let mut paths = vec![
            sense.clone(),
            orth.clone(),
            gram.clone(),
            entry.clone(),
            form.clone(),
        ];
        paths.sort();
        assert_eq!(paths, vec![entry, form, orth, gram, sense]);
    }

    #[test]
    fn ties_broken_by_code() {
        let report = ValidationReport::from_findings(vec![
            finding(
                Severity::Warning,
                Code::MissingPartOfSpeech,
                "termEntry.1.0",
            ),
            finding(Severity::Warning, Code::MissingDefinition, "termEntry.1.0"),
        ]);
        assert_eq!(
            report.codes(),
            vec![Code::MissingDefinition, Code::MissingPartOfSpeech]
        );
    }

    #[test]
    fn merge_examples() {
        assert!(merge(Vec::new()).is_empty());
        let r = ValidationReport::from_findings(vec![
            finding(
                Severity::Error,
                Code::EmptyTerm,
                "termEntry.1.0/langSet.1.0",
            ),
            finding(Severity::Info, Code::LangSecAlias, "termEntry.2.1"),
        ]);
        assert_eq!(merge([r.clone(), ValidationReport::new()]), r);
        assert_eq!(merge([ValidationReport::new(), r.clone()]), r);
    }

    #[test]
    fn worst_severity_examples() {
        assert_eq!(worst_severity(&ValidationReport::new()), None);
        let r = ValidationReport::from_findings(vec![
            finding(Severity::Info, Code::DefaultLang, "a.1.0"),
            finding(Severity::Error, Code::EmptyTerm, "a.1.0/b.1.0"),
        ]);
        assert_eq!(worst_severity(&r), Some(Severity::Error));
        let r = ValidationReport::from_findings(vec![
            finding(Severity::Warning, Code::MissingDefinition, "a.1.0"),
            finding(Severity::Warning, Code::MissingSubjectField, "a.2.1"),
        ]);
        assert_eq!(worst_severity(&r), Some(Severity::Warning));
    }

    #[test]
    fn text_form_is_tab_separated() {
        let f = Finding::warning(
            Code::NoExplicitLemma,
            DocPath::root("entry", 1, 0),
            "no\ttyped\nlemma",
        );
        assert_eq!(
            f.to_line(),
            "warning\tNO_EXPLICIT_LEMMA\tentry[1]\tno typed lemma"
        );
    }

    #[test]
    fn code_names_round_trip() {
        for code in Code::ALL {
            assert_eq!(Code::from_name(code.as_str()), Some(*code));
        }
    }

    fn arb_finding() -> impl Strategy<Value = Finding> {
        let severity = prop_oneof![
            Just(Severity::Info),
            Just(Severity::Warning),
            Just(Severity::Error)
        ];
        let code = (0..Code::ALL.len()).prop_map(|i| Code::ALL[i]);
        let steps = prop::collection::vec((0..3usize, 1..4usize, 0..4usize), 1..4);
        (severity, code, steps, "[a-z]{0,4}").prop_map(|(severity, code, steps, msg)| {
            let names = ["entry", "sense", "form"];
            let mut path = DocPath::default();
            for (n, index, position) in steps {
                path = path.child(names[n], index, position);
            }
            Finding::new(severity, code, path, msg)
        })
    }

    fn arb_report() -> impl Strategy<Value = ValidationReport> {
        prop::collection::vec(arb_finding(), 0..8).prop_map(ValidationReport::from_findings)
    }

    proptest! {
        #[test]
        fn merge_is_associative(a in arb_report(), b in arb_report(), c in arb_report()) {
            let left = merge([merge([a.clone(), b.clone()]), c.clone()]);
            let right = merge([a.clone(), merge([b.clone(), c.clone()])]);
            let flat = merge([a, b, c]);
            prop_assert_eq!(&left, &flat);
            prop_assert_eq!(&right, &flat);
        }

        #[test]
        fn empty_report_is_identity(a in arb_report()) {
            prop_assert_eq!(merge([a.clone(), ValidationReport::new()]), a.clone());
            prop_assert_eq!(merge([ValidationReport::new(), a.clone()]), a);
        }

        #[test]
        fn worst_severity_of_merge_is_max(a in arb_report(), b in arb_report()) {
            let merged = merge([a.clone(), b.clone()]);
            prop_assert_eq!(worst_severity(&merged), worst_severity(&a).max(worst_severity(&b)));
        }

        #[test]
        fn push_keeps_order(findings in prop::collection::vec(arb_finding(), 0..10)) {
            let mut pushed = ValidationReport::new();
            for f in findings.clone() {
                pushed.push(f);
            }
            prop_assert_eq!(pushed, ValidationReport::from_findings(findings));
        }
    }
}
