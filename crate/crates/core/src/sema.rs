//! Word-oriented dictionary model: lexical entries with recursive forms and
//! senses, covering the LMF core plus the machine-readable-dictionary
//! components (definition, context, subject field, equivalent).
//!
//! Text values are stored exactly as read; only lookups compare under NFC.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lang::LangCode;
use crate::onoma::nfc;
use crate::report::{ChildPaths, Code, DocPath, Finding, ValidationReport};
use crate::xml::is_xml_name;

pub const DEFAULT_MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RepresentationKind {
    Orthography,
    Pronunciation,
    Hyphenation,
    Stress,
    Syllabification,
    Transliteration,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormRepresentation {
    pub kind: RepresentationKind,
    pub value: String,
}

impl FormRepresentation {
    pub fn new(kind: RepresentationKind, value: impl Into<String>) -> Self {
        FormRepresentation {
            kind,
            value: value.into(),
        }
    }

    pub fn orthography(value: impl Into<String>) -> Self {
        FormRepresentation::new(RepresentationKind::Orthography, value)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrammaticalInfo {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pos: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gender: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub other: Vec<(String, String)>,
}

impl GrammaticalInfo {
    pub fn is_empty(&self) -> bool {
        self.pos.is_none() && self.gender.is_none() && self.other.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FormType {
    Lemma,
    Inflected,
    Variant,
    #[default]
    Unspecified,
}

impl FormType {
    pub fn as_attr(self) -> Option<&'static str> {
        match self {
            FormType::Lemma => Some("lemma"),
            FormType::Inflected => Some("inflected"),
            FormType::Variant => Some("variant"),
            FormType::Unspecified => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Form {
    #[serde(default)]
    pub form_type: FormType,
    pub representations: Vec<FormRepresentation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gram: Option<GrammaticalInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub subforms: Vec<Form>,
}

impl Form {
    pub fn new(form_type: FormType) -> Self {
        Form {
            form_type,
            ..Form::default()
        }
    }

    pub fn with(mut self, representation: FormRepresentation) -> Self {
        self.representations.push(representation);
        self
    }

    pub fn orthographies(&self) -> impl Iterator<Item = &str> {
        self.representations
            .iter()
            .filter(|r| r.kind == RepresentationKind::Orthography)
            .map(|r| r.value.as_str())
    }

    pub fn depth(&self) -> usize {
        1 + self.subforms.iter().map(Form::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum UsageType {
    Dom,
    Time,
    Geo,
    Register,
    Style,
    Other(String),
}

impl UsageType {
    /// Maps a TEI `usg/@type` value; unknown values are kept verbatim.
    pub fn from_raw(raw: &str) -> Self {
        match raw {
            "dom" => UsageType::Dom,
            "time" => UsageType::Time,
            "geo" => UsageType::Geo,
            "register" => UsageType::Register,
            "style" => UsageType::Style,
            other => UsageType::Other(other.to_string()),
        }
    }

    pub fn as_raw(&self) -> &str {
        match self {
            UsageType::Dom => "dom",
            UsageType::Time => "time",
            UsageType::Geo => "geo",
            UsageType::Register => "register",
            UsageType::Style => "style",
            UsageType::Other(raw) => raw,
        }
    }
}

impl fmt::Display for UsageType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_raw())
    }
}

impl FromStr for UsageType {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(UsageType::from_raw(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UsageMarker {
    pub usage_type: UsageType,
    pub value: String,
}

impl UsageMarker {
    pub fn new(usage_type: UsageType, value: impl Into<String>) -> Self {
        UsageMarker {
            usage_type,
            value: value.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ContextType {
    Example,
    Translation,
    Other(String),
}

impl ContextType {
    pub fn from_raw(raw: Option<&str>) -> Self {
        match raw {
            Some("example") => ContextType::Example,
            Some("translation") => ContextType::Translation,
            Some(other) => ContextType::Other(other.to_string()),
            None => ContextType::Other(String::new()),
        }
    }

    pub fn as_raw(&self) -> Option<&str> {
        match self {
            ContextType::Example => Some("example"),
            ContextType::Translation => Some("translation"),
            ContextType::Other(raw) if raw.is_empty() => None,
            ContextType::Other(raw) => Some(raw),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Context {
    pub quote: String,
    pub context_type: ContextType,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lang: Option<LangCode>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<String>,
}

impl Context {
    pub fn example(quote: impl Into<String>) -> Self {
        Context {
            quote: quote.into(),
            context_type: ContextType::Example,
            lang: None,
            source: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Definition {
    pub text: String,
    /// Attributes of the source element, round-tripped uninterpreted.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub attributes: Vec<(String, String)>,
    /// Set when inline markup was flattened into `text` on reading.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub flattened: bool,
}

impl Definition {
    pub fn new(text: impl Into<String>) -> Self {
        Definition {
            text: text.into(),
            ..Definition::default()
        }
    }

    pub fn attribute(&self, name: &str) -> Option<&str> {
        lookup_attr(&self.attributes, name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Equivalent {
    pub lang: LangCode,
    pub text: String,
}

impl Equivalent {
    pub fn new(lang: LangCode, text: impl Into<String>) -> Self {
        Equivalent {
            lang,
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Sense {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub definitions: Vec<Definition>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub usages: Vec<UsageMarker>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub contexts: Vec<Context>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub equivalents: Vec<Equivalent>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub subsenses: Vec<Sense>,
    /// Attribute bag; holds `provenance` for projected senses.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub attributes: Vec<(String, String)>,
}

impl Sense {
    pub fn new() -> Self {
        Sense::default()
    }

    pub fn labelled(label: impl Into<String>) -> Self {
        Sense {
            label: Some(label.into()),
            ..Sense::default()
        }
    }

    pub fn attribute(&self, name: &str) -> Option<&str> {
        lookup_attr(&self.attributes, name)
    }

    pub fn provenance(&self) -> Option<&str> {
        self.attribute("provenance")
    }

    fn is_empty(&self) -> bool {
        self.definitions.is_empty()
            && self.subsenses.is_empty()
            && self.usages.is_empty()
            && self.contexts.is_empty()
            && self.equivalents.is_empty()
    }
}

fn lookup_attr<'a>(attrs: &'a [(String, String)], name: &str) -> Option<&'a str> {
    attrs
        .iter()
        .find(|(k, _)| k == name)
        .map(|(_, v)| v.as_str())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexicalEntry {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub id: Option<String>,
    pub forms: Vec<Form>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gram: Option<GrammaticalInfo>,
    #[serde(default)]
    pub senses: Vec<Sense>,
}

impl LexicalEntry {
    pub fn new() -> Self {
        LexicalEntry::default()
    }

    pub fn with_form(mut self, form: Form) -> Self {
        self.forms.push(form);
        self
    }

    pub fn with_sense(mut self, sense: Sense) -> Self {
        self.senses.push(sense);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub lang: LangCode,
    pub entries: Vec<LexicalEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub metadata: Vec<(String, String)>,
}

impl Lexicon {
    pub fn new(lang: LangCode) -> Self {
        Lexicon {
            lang,
            entries: Vec::new(),
            metadata: Vec::new(),
        }
    }

    /// Effective ids: explicit where present, otherwise `entry-N`.
    pub fn entry_ids(&self) -> Vec<String> {
        let explicit: HashSet<&str> = self
            .entries
            .iter()
            .filter_map(|e| e.id.as_deref())
            .collect();
        self.entries
            .iter()
            .enumerate()
            .map(|(i, entry)| match &entry.id {
                Some(id) => id.clone(),
                None => {
                    let mut candidate = format!("entry-{}", i + 1);
                    let mut n = 1;
                    while explicit.contains(candidate.as_str()) {
                        candidate = format!("entry-{}.{}", i + 1, n);
                        n += 1;
                    }
                    candidate
                }
            })
            .collect()
    }
}

/// Calls `visit(sense, depth)` in pre-order; top-level senses have depth 1.
pub fn walk_senses<'a>(senses: &'a [Sense], visit: &mut impl FnMut(&'a Sense, usize)) {
    fn go<'a>(senses: &'a [Sense], depth: usize, visit: &mut impl FnMut(&'a Sense, usize)) {
        for sense in senses {
            visit(sense, depth);
            go(&sense.subsenses, depth + 1, visit);
        }
    }
    go(senses, 1, visit)
}

/// Calls `visit(form)` for every form and subform in pre-order.
pub fn walk_forms<'a>(forms: &'a [Form], visit: &mut impl FnMut(&'a Form)) {
    for form in forms {
        visit(form);
        walk_forms(&form.subforms, visit);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaSource {
    /// A form typed `lemma`.
    Explicit,
    /// No form is typed; the first orthography of the first form is used.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma<'a> {
    pub text: &'a str,
    pub source: LemmaSource,
}

pub fn lemma_of(entry: &LexicalEntry) -> Option<Lemma<'_>> {
    let mut typed = entry
        .forms
        .iter()
        .filter(|f| f.form_type == FormType::Lemma)
        .peekable();
    if typed.peek().is_some() {
        return typed
            .find_map(|f| f.orthographies().next())
            .map(|text| Lemma {
                text,
                source: LemmaSource::Explicit,
            });
    }
    entry
        .forms
        .first()
        .and_then(|f| f.orthographies().next())
        .map(|text| Lemma {
            text,
            source: LemmaSource::Fallback,
        })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SenseStats {
    pub total: usize,
    pub max_depth: usize,
    pub top_level: usize,
}

pub fn sense_stats(entry: &LexicalEntry) -> SenseStats {
    let mut stats = SenseStats {
        top_level: entry.senses.len(),
        ..SenseStats::default()
    };
    walk_senses(&entry.senses, &mut |_, depth| {
        stats.total += 1;
        stats.max_depth = stats.max_depth.max(depth);
    });
    stats
}

/// Usage values of `usage_type` to the ids of the entries carrying them.
pub fn usage_index(lexicon: &Lexicon, usage_type: &UsageType) -> BTreeMap<String, Vec<String>> {
    let ids = lexicon.entry_ids();
    let mut index: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (entry, id) in lexicon.entries.iter().zip(&ids) {
        walk_senses(&entry.senses, &mut |sense, _| {
            for usage in sense.usages.iter().filter(|u| &u.usage_type == usage_type) {
                let slot = index.entry(usage.value.clone()).or_default();
                if slot.last() != Some(id) {
                    slot.push(id.clone());
                }
            }
        });
    }
    index
}

/// Ids of entries with an orthography equal to `surface` under NFC, in any
/// form or subform.
pub fn lookup(lexicon: &Lexicon, surface: &str) -> Vec<String> {
    let wanted = nfc(surface);
    let ids = lexicon.entry_ids();
    lexicon
        .entries
        .iter()
        .zip(ids)
        .filter(|(entry, _)| {
            let mut hit = false;
            walk_forms(&entry.forms, &mut |form| {
                hit |= form.orthographies().any(|o| nfc(o) == wanted);
            });
            hit
        })
        .map(|(_, id)| id)
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemaProfile {
    /// Structural invariants only.
    #[default]
    Lenient,
    /// Plus exactly one form typed lemma.
    LmfCore,
    /// Plus context types and usage types representable in the MRD extension.
    LmfMrd,
}

impl FromStr for SemaProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lenient" => Ok(SemaProfile::Lenient),
            "lmf-core" => Ok(SemaProfile::LmfCore),
            "lmf-mrd" => Ok(SemaProfile::LmfMrd),
            other => Err(format!(
                "unknown dictionary profile {other:?} (expected lenient, lmf-core or lmf-mrd)"
            )),
        }
    }
}

impl fmt::Display for SemaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemaProfile::Lenient => "lenient",
            SemaProfile::LmfCore => "lmf-core",
            SemaProfile::LmfMrd => "lmf-mrd",
        })
    }
}

pub(crate) fn representation_element(kind: RepresentationKind) -> &'static str {
    match kind {
        RepresentationKind::Orthography | RepresentationKind::Transliteration => "orth",
        RepresentationKind::Pronunciation => "pron",
        RepresentationKind::Hyphenation => "hyph",
        RepresentationKind::Stress => "stress",
        RepresentationKind::Syllabification => "syll",
    }
}

/// Visits the entry in canonical TEI layout, handing out element paths.
/// Used by validation and the crosswalk so both report the same locations.
pub(crate) struct EntryPaths;

impl EntryPaths {
    pub(crate) fn entry(index: usize) -> DocPath {
        DocPath::root("entry", index + 1, index)
    }

    /// Paths of the entry's forms, its gramGrp and its senses.
    pub(crate) fn children(
        entry: &LexicalEntry,
        path: &DocPath,
    ) -> (Vec<DocPath>, Option<DocPath>, Vec<DocPath>) {
        let mut kids = ChildPaths::new(path);
        let forms = entry.forms.iter().map(|_| kids.next("form")).collect();
        let gram = entry.gram.as_ref().map(|_| kids.next("gramGrp"));
        let senses = entry.senses.iter().map(|_| kids.next("sense")).collect();
        (forms, gram, senses)
    }

    pub(crate) fn form_children(
        form: &Form,
        path: &DocPath,
    ) -> (Vec<DocPath>, Option<DocPath>, Vec<DocPath>) {
        let mut kids = ChildPaths::new(path);
        let reps = form
            .representations
            .iter()
            .map(|r| kids.next(representation_element(r.kind)))
            .collect();
        let gram = form.gram.as_ref().map(|_| kids.next("gramGrp"));
        let subforms = form.subforms.iter().map(|_| kids.next("form")).collect();
        (reps, gram, subforms)
    }
}

/// Paths of a sense's children in canonical order: usg, def, cit
/// (contexts then equivalents), sense.
pub(crate) struct SensePaths {
    pub usages: Vec<DocPath>,
    pub definitions: Vec<DocPath>,
    pub contexts: Vec<DocPath>,
    pub equivalents: Vec<DocPath>,
    pub subsenses: Vec<DocPath>,
}

impl SensePaths {
    pub(crate) fn of(sense: &Sense, path: &DocPath) -> Self {
        let mut kids = ChildPaths::new(path);
        SensePaths {
            usages: sense.usages.iter().map(|_| kids.next("usg")).collect(),
            definitions: sense.definitions.iter().map(|_| kids.next("def")).collect(),
            contexts: sense.contexts.iter().map(|_| kids.next("cit")).collect(),
            equivalents: sense.equivalents.iter().map(|_| kids.next("cit")).collect(),
            subsenses: sense.subsenses.iter().map(|_| kids.next("sense")).collect(),
        }
    }
}

pub fn validate_sema(entry: &LexicalEntry, profile: SemaProfile) -> ValidationReport {
    validate_sema_with(entry, profile, DEFAULT_MAX_DEPTH)
}

pub fn validate_sema_with(
    entry: &LexicalEntry,
    profile: SemaProfile,
    max_depth: usize,
) -> ValidationReport {
    validate_entry_at(entry, profile, max_depth, EntryPaths::entry(0))
}

/// Validates every entry plus lexicon-level id uniqueness.
pub fn validate_lexicon(lexicon: &Lexicon, profile: SemaProfile) -> ValidationReport {
    let mut findings = Vec::new();
    let mut seen = HashSet::new();
    for (i, entry) in lexicon.entries.iter().enumerate() {
        let path = EntryPaths::entry(i);
        findings.extend(
            validate_entry_at(entry, profile, DEFAULT_MAX_DEPTH, path.clone()).into_findings(),
        );
        if let Some(id) = &entry.id {
            if !seen.insert(id.as_str()) {
                findings.push(Finding::error(
                    Code::DuplicateEntryId,
                    path,
                    format!("entry id {id:?} already used"),
                ));
            }
        }
    }
    ValidationReport::from_findings(findings)
}

pub(crate) fn validate_entry_at(
    entry: &LexicalEntry,
    profile: SemaProfile,
    max_depth: usize,
    path: DocPath,
) -> ValidationReport {
    let mut v = Validator {
        profile,
        max_depth,
        findings: Vec::new(),
    };
    let (form_paths, gram_path, sense_paths) = EntryPaths::children(entry, &path);
    if entry.forms.is_empty() {
        v.error(Code::MissingForm, &path, "lexical entry has no form");
    }
    for (form, fpath) in entry.forms.iter().zip(&form_paths) {
        v.form(form, fpath, 1);
    }
    if let (Some(gram), Some(gpath)) = (&entry.gram, &gram_path) {
        v.gram(gram, gpath);
    }
    for (sense, spath) in entry.senses.iter().zip(&sense_paths) {
        v.sense(sense, spath, 1);
    }

    if profile >= SemaProfile::LmfCore {
        let lemmas: Vec<&DocPath> = entry
            .forms
            .iter()
            .zip(&form_paths)
            .filter(|(f, _)| f.form_type == FormType::Lemma)
            .map(|(_, p)| p)
            .collect();
        match lemmas.len() {
            0 => v.findings.push(Finding::warning(
                Code::NoExplicitLemma,
                path.clone(),
                "no form is typed lemma",
            )),
            1 => {}
            n => v.findings.push(Finding::error(
                Code::MultipleLemmas,
                lemmas[1].clone(),
                format!("{n} forms are typed lemma"),
            )),
        }
    }
    ValidationReport::from_findings(v.findings)
}

struct Validator {
    profile: SemaProfile,
    max_depth: usize,
    findings: Vec<Finding>,
}

impl Validator {
    fn error(&mut self, code: Code, path: &DocPath, message: impl Into<String>) {
        self.findings
            .push(Finding::error(code, path.clone(), message));
    }

    fn form(&mut self, form: &Form, path: &DocPath, depth: usize) {
        if depth > self.max_depth {
            self.error(
                Code::DepthExceeded,
                path,
                format!("form nesting exceeds {} levels", self.max_depth),
            );
            return;
        }
        let (rep_paths, gram_path, sub_paths) = EntryPaths::form_children(form, path);
        if form.representations.is_empty() {
            self.error(
                Code::MissingRepresentation,
                path,
                "form has no representation",
            );
        }
        for (rep, rpath) in form.representations.iter().zip(&rep_paths) {
            if rep.value.trim().is_empty() {
                self.error(
                    Code::EmptyRepresentation,
                    rpath,
                    "empty form representation",
                );
            }
        }
        if let (Some(gram), Some(gpath)) = (&form.gram, &gram_path) {
            self.gram(gram, gpath);
        }
        for (sub, spath) in form.subforms.iter().zip(&sub_paths) {
            self.form(sub, spath, depth + 1);
        }
    }

    fn gram(&mut self, gram: &GrammaticalInfo, path: &DocPath) {
        if gram.is_empty() {
            self.error(
                Code::EmptyGrammar,
                path,
                "grammatical block without content",
            );
        }
        for (key, value) in &gram.other {
            if !is_xml_name(key) || value.trim().is_empty() {
                self.error(
                    Code::EmptyGrammar,
                    path,
                    format!("grammatical feature {key:?} needs a name and a value"),
                );
            }
        }
    }

    fn attributes(&mut self, attrs: &[(String, String)], reserved: &[&str], path: &DocPath) {
        let mut seen = HashSet::new();
        for (key, _) in attrs {
            if !is_xml_name(key) || reserved.contains(&key.as_str()) || !seen.insert(key.as_str()) {
                self.error(
                    Code::InvalidAttribute,
                    path,
                    format!("attribute {key:?} is invalid, reserved or repeated"),
                );
            }
        }
    }

    fn sense(&mut self, sense: &Sense, path: &DocPath, depth: usize) {
        if depth > self.max_depth {
            self.error(
                Code::DepthExceeded,
                path,
                format!("sense nesting exceeds {} levels", self.max_depth),
            );
            return;
        }
        if sense.is_empty() {
            self.error(
                Code::EmptySense,
                path,
                "sense without definition, usage, context, equivalent or subsense",
            );
        }
        self.attributes(&sense.attributes, &["n"], path);
        let paths = SensePaths::of(sense, path);
        for (usage, upath) in sense.usages.iter().zip(&paths.usages) {
            if usage.value.trim().is_empty() {
                self.error(Code::EmptyUsage, upath, "empty usage marker");
            }
            if self.profile >= SemaProfile::LmfMrd {
                if let UsageType::Other(raw) = &usage.usage_type {
                    self.findings.push(Finding::warning(
                        Code::LossyUsage,
                        upath.clone(),
                        format!("usage type {raw:?} has no subject-field counterpart"),
                    ));
                }
            }
        }
        for (def, dpath) in sense.definitions.iter().zip(&paths.definitions) {
            if def.text.trim().is_empty() {
                self.error(Code::EmptyDefinition, dpath, "empty definition");
            }
            self.attributes(&def.attributes, &[], dpath);
        }
        for (context, cpath) in sense.contexts.iter().zip(&paths.contexts) {
            if context.quote.trim().is_empty() {
                self.error(Code::EmptyQuote, cpath, "context without quote text");
            }
            if self.profile >= SemaProfile::LmfMrd
                && matches!(context.context_type, ContextType::Other(_))
            {
                self.findings.push(Finding::warning(
                    Code::UnsupportedContextType,
                    cpath.clone(),
                    format!(
                        "context type {:?} is neither example nor translation",
                        context.context_type.as_raw().unwrap_or("")
                    ),
                ));
            }
        }
        for (equivalent, epath) in sense.equivalents.iter().zip(&paths.equivalents) {
            if equivalent.text.trim().is_empty() {
                self.error(Code::EmptyEquivalent, epath, "equivalent without text");
            }
        }
        for (sub, spath) in sense.subsenses.iter().zip(&paths.subsenses) {
            self.sense(sub, spath, depth + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{self, arb_lexical_entry, arb_sense_forest, EntryShape};
    use proptest::prelude::*;

    fn lang(tag: &str) -> LangCode {
        LangCode::new(tag).unwrap()
    }

    fn poussin_lexicon() -> Lexicon {
        Lexicon {
            lang: lang("fr"),
            entries: vec![testing::poussin_entry()],
            metadata: Vec::new(),
        }
    }

    #[test]
    fn poussin_lemma_is_a_fallback() {
        let entry = testing::poussin_entry();
        let lemma = lemma_of(&entry).unwrap();
        assert_eq!(lemma.text, "poussin");
        assert_eq!(lemma.source, LemmaSource::Fallback);
    }

    #[test]
    fn explicit_lemma_wins_over_position() {
        let entry = LexicalEntry::new()
            .with_form(
                Form::new(FormType::Inflected).with(FormRepresentation::orthography("chats")),
            )
            .with_form(Form::new(FormType::Lemma).with(FormRepresentation::orthography("chat")));
        let lemma = lemma_of(&entry).unwrap();
        assert_eq!(lemma.text, "chat");
        assert_eq!(lemma.source, LemmaSource::Explicit);
    }

    #[test]
    fn no_orthography_means_no_lemma() {
        let entry = LexicalEntry::new().with_form(Form::new(FormType::Unspecified).with(
            FormRepresentation::new(RepresentationKind::Pronunciation, "ʃa"),
        ));
        assert_eq!(lemma_of(&entry), None);
    }

    #[test]
    fn sense_stats_examples() {
        assert_eq!(
            sense_stats(&testing::poussin_entry()),
            SenseStats {
                total: 6,
                max_depth: 2,
                top_level: 3
            }
        );
        assert_eq!(sense_stats(&LexicalEntry::new()), SenseStats::default());
        let mut chain = Sense::new();
        chain.definitions.push(Definition::new("d4"));
        for d in ["d3", "d2", "d1"] {
            let mut parent = Sense::new();
            parent.definitions.push(Definition::new(d));
            parent.subsenses.push(chain);
            chain = parent;
        }
        let entry = LexicalEntry::new().with_sense(chain);
        assert_eq!(
            sense_stats(&entry),
            SenseStats {
                total: 4,
                max_depth: 4,
                top_level: 1
            }
        );
    }

    #[test]
    fn usage_index_examples() {
        let lexicon = poussin_lexicon();
        let dom = usage_index(&lexicon, &UsageType::Dom);
        let keys: Vec<&str> = dom.keys().map(String::as_str).collect();
        assert_eq!(keys, vec!["Sports", "Zool.", "êtres humains"]);
        assert!(dom.values().all(|ids| ids == &vec!["entry-1".to_string()]));
        let register = usage_index(&lexicon, &UsageType::Register);
        assert_eq!(register.len(), 1);
        assert_eq!(register["Fam."], vec!["entry-1".to_string()]);
        assert!(usage_index(&lexicon, &UsageType::Geo).is_empty());
    }

    #[test]
    fn lookup_examples() {
        let lexicon = poussin_lexicon();
        assert_eq!(lookup(&lexicon, "poussin"), vec!["entry-1"]);
        assert!(lookup(&lexicon, "poussins").is_empty());

        let mut lemma = Form::new(FormType::Lemma).with(FormRepresentation::orthography("cheick"));
        lemma
            .subforms
            .push(Form::new(FormType::Variant).with(FormRepresentation::orthography("cheik")));
        let entry = LexicalEntry {
            id: Some("cheick".into()),
            ..LexicalEntry::new().with_form(lemma)
        };
        let lexicon = Lexicon {
            lang: lang("fr"),
            entries: vec![entry],
            metadata: Vec::new(),
        };
        assert_eq!(lookup(&lexicon, "cheick"), vec!["cheick"]);
        assert_eq!(lookup(&lexicon, "cheik"), vec!["cheick"]);
    }

    #[test]
    fn lookup_normalizes_both_sides() {
        let entry = LexicalEntry::new().with_form(
            Form::new(FormType::Lemma).with(FormRepresentation::orthography("e\u{301}lève")),
        );
        let lexicon = Lexicon {
            lang: lang("fr"),
            entries: vec![entry],
            metadata: Vec::new(),
        };
        assert_eq!(lookup(&lexicon, "\u{e9}lève"), vec!["entry-1"]);
    }

    #[test]
    fn validate_poussin() {
        let entry = testing::poussin_entry();
        assert!(validate_sema(&entry, SemaProfile::Lenient).is_empty());
        let core = validate_sema(&entry, SemaProfile::LmfCore);
        assert_eq!(core.codes(), vec![Code::NoExplicitLemma]);
        assert_eq!(
            core.worst_severity(),
            Some(crate::report::Severity::Warning)
        );
        assert_eq!(
            validate_sema(&entry, SemaProfile::LmfMrd).codes(),
            vec![Code::NoExplicitLemma]
        );
    }

    #[test]
    fn zero_forms_is_an_error() {
        let report = validate_sema(&LexicalEntry::new(), SemaProfile::Lenient);
        assert_eq!(report.codes(), vec![Code::MissingForm]);
        assert!(report.has_errors());
    }

    #[test]
    fn two_lemmas_fail_lmf_core() {
        let entry = LexicalEntry::new()
            .with_form(Form::new(FormType::Lemma).with(FormRepresentation::orthography("a")))
            .with_form(Form::new(FormType::Lemma).with(FormRepresentation::orthography("b")));
        let report = validate_sema(&entry, SemaProfile::LmfCore);
        assert_eq!(report.codes(), vec![Code::MultipleLemmas]);
        assert_eq!(report.findings()[0].path.to_string(), "entry[1]/form[2]");
    }

    #[test]
    fn mrd_flags_other_types() {
        let mut sense = Sense::new();
        sense
            .usages
            .push(UsageMarker::new(UsageType::from_raw("hint"), "rare"));
        sense.contexts.push(Context {
            context_type: ContextType::Other("collocation".into()),
            ..Context::example("poussin de l'Air")
        });
        let entry = LexicalEntry::new()
            .with_form(Form::new(FormType::Lemma).with(FormRepresentation::orthography("poussin")))
            .with_sense(sense);
        assert!(validate_sema(&entry, SemaProfile::LmfCore).is_empty());
        assert_eq!(
            validate_sema(&entry, SemaProfile::LmfMrd).codes(),
            vec![Code::LossyUsage, Code::UnsupportedContextType]
        );
    }

    #[test]
    fn depth_limit_applies_to_senses_and_forms() {
        let mut sense = Sense::new();
        sense.definitions.push(Definition::new("leaf"));
        for _ in 0..3 {
            let mut parent = Sense::new();
            parent.subsenses.push(sense);
            sense = parent;
        }
        let entry = LexicalEntry::new()
            .with_form(Form::new(FormType::Lemma).with(FormRepresentation::orthography("x")))
            .with_sense(sense);
        assert!(validate_sema_with(&entry, SemaProfile::Lenient, 4).is_empty());
        assert_eq!(
            validate_sema_with(&entry, SemaProfile::Lenient, 3).codes(),
            vec![Code::DepthExceeded]
        );
    }

    #[test]
    fn reserved_and_repeated_attributes() {
        let mut sense = Sense::new();
        sense.definitions.push(Definition {
            attributes: vec![("n".into(), "2".into()), ("n".into(), "3".into())],
            ..Definition::new("d")
        });
        sense.attributes.push(("n".into(), "1".into()));
        let entry = LexicalEntry::new()
            .with_form(Form::new(FormType::Lemma).with(FormRepresentation::orthography("x")))
            .with_sense(sense);
        let report = validate_sema(&entry, SemaProfile::Lenient);
        assert_eq!(
            report.codes(),
            vec![Code::InvalidAttribute, Code::InvalidAttribute]
        );
    }

    fn dfs_count(senses: &[Sense]) -> (usize, usize) {
        // explicit stack, independent of walk_senses
        let mut stack: Vec<(&Sense, usize)> = senses.iter().map(|s| (s, 1)).collect();
        let (mut total, mut depth) = (0, 0);
        while let Some((sense, d)) = stack.pop() {
            total += 1;
            depth = depth.max(d);
            stack.extend(sense.subsenses.iter().map(|s| (s, d + 1)));
        }
        (total, depth)
    }

    fn brute_usage_ids(lexicon: &Lexicon, usage_type: &UsageType) -> Vec<String> {
        let ids = lexicon.entry_ids();
        let mut out = Vec::new();
        for (entry, id) in lexicon.entries.iter().zip(ids) {
            let mut stack: Vec<&Sense> = entry.senses.iter().collect();
            let mut found = false;
            while let Some(s) = stack.pop() {
                found |= s.usages.iter().any(|u| &u.usage_type == usage_type);
                stack.extend(&s.subsenses);
            }
            if found {
                out.push(id);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn sense_stats_match_dfs_oracle(senses in arb_sense_forest(8, 5, 40)) {
            let entry = LexicalEntry { senses, ..LexicalEntry::new() };
            let stats = sense_stats(&entry);
            let (total, depth) = dfs_count(&entry.senses);
            prop_assert_eq!(stats.total, total);
            prop_assert_eq!(stats.max_depth, depth);
            prop_assert_eq!(stats.top_level, entry.senses.len());
        }

        #[test]
        fn lemma_invariant_under_permutation(entry in arb_lexical_entry(EntryShape::default()), seed in any::<u64>()) {
            prop_assume!(entry.forms.iter().any(|f| f.form_type == FormType::Lemma));
            let before = lemma_of(&entry).map(|l| l.text.to_string());
            // permute the non-lemma forms among their own slots
            let slots: Vec<usize> = (0..entry.forms.len()).filter(|&i| entry.forms[i].form_type != FormType::Lemma).collect();
            let mut others: Vec<Form> = slots.iter().map(|&i| entry.forms[i].clone()).collect();
            if !others.is_empty() {
                let n = others.len();
                others.rotate_left((seed as usize) % n);
                if seed % 2 == 1 {
                    others.reverse();
                }
            }
            let mut shuffled = entry.clone();
            for (slot, form) in slots.iter().zip(others) {
                shuffled.forms[*slot] = form;
            }
            prop_assert_eq!(lemma_of(&shuffled).map(|l| l.text.to_string()), before);
        }

        #[test]
        fn usage_index_partitions_by_type(entries in prop::collection::vec(arb_lexical_entry(EntryShape::default()), 0..4)) {
            let lexicon = Lexicon { lang: lang("fr"), entries, metadata: Vec::new() };
            for usage_type in [UsageType::Dom, UsageType::Time, UsageType::Geo, UsageType::Register, UsageType::Style] {
                let mut indexed: Vec<String> = usage_index(&lexicon, &usage_type).into_values().flatten().collect();
                indexed.sort();
                indexed.dedup();
                let mut expected = brute_usage_ids(&lexicon, &usage_type);
                expected.sort();
                prop_assert_eq!(indexed, expected);
            }
        }

        #[test]
        fn profiles_are_monotone(entry in testing::arb_any_lexical_entry()) {
            let lenient = validate_sema(&entry, SemaProfile::Lenient);
            let core = validate_sema(&entry, SemaProfile::LmfCore);
            let mrd = validate_sema(&entry, SemaProfile::LmfMrd);
            for f in lenient.findings() {
                prop_assert!(core.findings().contains(f));
            }
            for f in core.findings() {
                prop_assert!(mrd.findings().contains(f));
            }
        }
    }
}
