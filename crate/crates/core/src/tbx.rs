//! TBX-style reader and canonical writer for term bases.

use roxmltree::Node;

use crate::error::{ParseError, WriteError};
use crate::lang::LangCode;
use crate::onoma::{
    entry_path, nfc, validate_termbase, DataCategory, LanguageSection, OnomaProfile, TermBase,
    TermSection, TerminologicalEntry,
};
use crate::report::{ChildPaths, Code, DocPath, Finding, Severity, ValidationReport};
use crate::xml::{
    has_stray_text, parse_document, text_content, xml_id, xml_lang, Issues, NamespaceCheck,
    ParseOptions, XmlWriter, MAX_NESTING,
};

/// Keys written as `<admin>`; everything else is `<descrip>` or, inside a
/// term section, `<termNote>`.
pub const ADMIN_KEYS: &[&str] = &[
    "conceptIdentifier",
    "conceptOrigin",
    "termIdentifier",
    "source",
    "responsibility",
    "creationDate",
    "modificationDate",
];

pub const TERM_NOTE_KEYS: &[&str] = &[
    "administrativeStatus",
    "partOfSpeech",
    "gender",
    "register",
    "termType",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Level {
    Base,
    Entry,
    Language,
    Term,
}

pub(crate) fn category_element(key: &str, level: Level) -> &'static str {
    if ADMIN_KEYS.contains(&key) {
        "admin"
    } else if level == Level::Term && TERM_NOTE_KEYS.contains(&key) {
        "termNote"
    } else {
        "descrip"
    }
}

/// Canonical paths of `categories`, the leading children of `parent`.
pub(crate) fn category_paths(
    categories: &[DataCategory],
    parent: &DocPath,
    level: Level,
) -> Vec<DocPath> {
    let mut kids = ChildPaths::new(parent);
    categories
        .iter()
        .map(|c| kids.next(category_element(c.key(), level)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    pub base: TermBase,
    /// Recoverable findings; never contains errors after a strict parse.
    pub report: ValidationReport,
}

pub fn parse_tbx(document: &[u8], opts: &ParseOptions) -> Result<ParseOutcome, ParseError> {
    let doc = parse_document(document)?;
    let mut reader = Reader {
        issues: Issues::new(opts.mode),
        namespace: match &opts.namespace_check {
            NamespaceCheck::Ignore => None,
            NamespaceCheck::Require(uri) => Some(uri.clone()),
        },
        base: TermBase::default(),
        entry_count: 0,
    };
    let root = doc.root_element();
    let root_path = DocPath::root(root.tag_name().name(), 1, 0);
    reader.check_namespace(root, &root_path)?;
    if root.tag_name().name() == "termEntry" {
        reader.entry(root)?;
    } else {
        reader.scan(root, &root_path, 1)?;
    }

    let Reader { issues, base, .. } = reader;
    let structural = validate_termbase(&base, OnomaProfile::Minimal);
    if !issues.is_lenient() && structural.has_errors() {
        return Err(ParseError::InvalidModel(structural));
    }
    let mut report = issues.into_report();
    report.extend(structural);
    Ok(ParseOutcome { base, report })
}

struct Reader {
    issues: Issues,
    namespace: Option<String>,
    base: TermBase,
    entry_count: usize,
}

fn local<'a>(node: Node<'a, '_>) -> &'a str {
    node.tag_name().name()
}

impl Reader {
    fn check_namespace(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<(), ParseError> {
        if let Some(expected) = &self.namespace {
            let found = node.tag_name().namespace().unwrap_or("");
            if found != expected {
                let error = ParseError::NamespaceMismatch {
                    path: path.clone(),
                    expected: expected.clone(),
                    found: found.to_string(),
                };
                self.issues.raise(error, Severity::Error)?;
            }
        }
        Ok(())
    }

    fn too_deep(&mut self, depth: usize, path: &DocPath) -> Result<bool, ParseError> {
        if depth <= MAX_NESTING {
            return Ok(false);
        }
        let error = ParseError::NestingTooDeep {
            path: path.clone(),
            limit: MAX_NESTING,
        };
        self.issues.raise(error, Severity::Error)?;
        Ok(true)
    }

    /// Walks containers outside entries: termEntry elements become entries,
    /// loose admin/descrip become base metadata, the rest is descended.
    fn scan(&mut self, node: Node<'_, '_>, path: &DocPath, depth: usize) -> Result<(), ParseError> {
        if self.too_deep(depth, path)? {
            return Ok(());
        }
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            match local(child) {
                "termEntry" => self.entry(child)?,
                "admin" | "descrip" => {
                    if let Some(cat) = self.category(child, &cpath)? {
                        self.base.metadata.push(cat);
                    }
                }
                _ => self.scan(child, &cpath, depth + 1)?,
            }
        }
        Ok(())
    }

    fn stray_text(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<(), ParseError> {
        if has_stray_text(node) {
            self.issues.raise(
                ParseError::UnexpectedText { path: path.clone() },
                Severity::Warning,
            )?;
        }
        Ok(())
    }

    fn unknown(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        into: &mut Vec<DataCategory>,
    ) -> Result<(), ParseError> {
        let name = local(node).to_string();
        self.issues.raise(
            ParseError::UnknownElement {
                path: path.clone(),
                name: name.clone(),
            },
            Severity::Warning,
        )?;
        let (text, _) = text_content(node);
        if let Ok(cat) = DataCategory::new(format!("ext:{name}"), nfc(&text)) {
            into.push(cat);
        }
        Ok(())
    }

    fn lang_of(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
    ) -> Result<Option<LangCode>, ParseError> {
        let Some(tag) = xml_lang(node) else {
            return Ok(None);
        };
        match LangCode::new(tag) {
            Ok(lang) => Ok(Some(lang)),
            Err(_) => {
                let error = ParseError::InvalidLang {
                    path: path.clone(),
                    tag: tag.to_string(),
                };
                self.issues.raise(error, Severity::Error)?;
                Ok(None)
            }
        }
    }

    /// Text of a leaf element; inline markup is an error in strict mode and
    /// flattened with a finding in lenient mode.
    fn leaf_text(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<String, ParseError> {
        let (text, nested) = text_content(node);
        if nested {
            self.issues.raise(
                ParseError::InlineMarkup { path: path.clone() },
                Severity::Warning,
            )?;
        }
        Ok(nfc(&text))
    }

    fn category(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
    ) -> Result<Option<DataCategory>, ParseError> {
        let Some(key) = node.attribute("type") else {
            let error = ParseError::InvalidCategory {
                path: path.clone(),
                reason: format!("<{}> without type attribute", local(node)),
            };
            self.issues.raise(error, Severity::Error)?;
            return Ok(None);
        };
        let value = self.leaf_text(node, path)?;
        let lang = self.lang_of(node, path)?;
        match DataCategory::new(key, value) {
            Ok(cat) => Ok(Some(match lang {
                Some(lang) => cat.with_lang(lang),
                None => cat,
            })),
            Err(e) => {
                let error = ParseError::InvalidCategory {
                    path: path.clone(),
                    reason: e.to_string(),
                };
                self.issues.raise(error, Severity::Error)?;
                Ok(None)
            }
        }
    }

    fn entry(&mut self, node: Node<'_, '_>) -> Result<(), ParseError> {
        let index = self.entry_count;
        self.entry_count += 1;
        let path = entry_path(index);
        if index > 0 || node.parent_element().is_some() {
            self.check_namespace(node, &path)?;
        }
        let mut entry = TerminologicalEntry {
            id: xml_id(node)
                .or_else(|| node.attribute("id"))
                .map(str::to_string),
            ..TerminologicalEntry::default()
        };
        self.entry_children(node, &path, &mut entry, 1)?;
        self.base.entries.push(entry);
        Ok(())
    }

    fn entry_children(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        entry: &mut TerminologicalEntry,
        depth: usize,
    ) -> Result<(), ParseError> {
        if self.too_deep(depth, path)? {
            return Ok(());
        }
        self.stray_text(node, path)?;
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            match local(child) {
                "descripGrp" | "adminGrp" => {
                    self.entry_children(child, &cpath, entry, depth + 1)?
                }
                "descrip" | "admin" => {
                    if let Some(cat) = self.category(child, &cpath)? {
                        entry.categories.push(cat);
                    }
                }
                "langSet" => self.section(child, &cpath, entry)?,
                "langSec" => {
                    self.issues.note_if_lenient(Finding::info(
                        Code::LangSecAlias,
                        cpath.clone(),
                        "<langSec> read as <langSet>",
                    ));
                    self.section(child, &cpath, entry)?
                }
                _ => self.unknown(child, &cpath, &mut entry.categories)?,
            }
        }
        Ok(())
    }

    fn section(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        entry: &mut TerminologicalEntry,
    ) -> Result<(), ParseError> {
        let lang = match self.lang_of(node, path)? {
            Some(lang) => lang,
            None => {
                if xml_lang(node).is_none() {
                    self.issues.raise(
                        ParseError::MissingLang { path: path.clone() },
                        Severity::Error,
                    )?;
                }
                return Ok(());
            }
        };
        let mut section = LanguageSection::new(lang.clone());
        self.section_children(node, path, &mut section, 1)?;

        if let Some(existing) = entry.languages.iter_mut().find(|s| s.lang == lang) {
            self.issues.raise(
                ParseError::DuplicateLang {
                    path: path.clone(),
                    lang,
                },
                Severity::Warning,
            )?;
            existing.categories.extend(section.categories);
            existing.terms.extend(section.terms);
        } else {
            entry.languages.push(section);
        }
        Ok(())
    }

    fn section_children(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        section: &mut LanguageSection,
        depth: usize,
    ) -> Result<(), ParseError> {
        if self.too_deep(depth, path)? {
            return Ok(());
        }
        self.stray_text(node, path)?;
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            match local(child) {
                "descripGrp" | "adminGrp" => {
                    self.section_children(child, &cpath, section, depth + 1)?
                }
                "descrip" | "admin" => {
                    if let Some(cat) = self.category(child, &cpath)? {
                        section.categories.push(cat);
                    }
                }
                "tig" => {
                    if let Some(term) = self.tig(child, &cpath)? {
                        section.terms.push(term);
                    }
                }
                _ => self.unknown(child, &cpath, &mut section.categories)?,
            }
        }
        Ok(())
    }

    fn tig(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
    ) -> Result<Option<TermSection>, ParseError> {
        let mut term: Option<String> = None;
        let mut categories = Vec::new();
        self.tig_children(node, path, &mut term, &mut categories, 1)?;
        match term {
            Some(text) if !text.trim().is_empty() => Ok(Some(TermSection {
                term: text,
                categories,
            })),
            _ => {
                let tpath = path.child("term", 1, 0);
                self.issues
                    .raise(ParseError::EmptyTerm { path: tpath }, Severity::Error)?;
                Ok(None)
            }
        }
    }

    fn tig_children(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        term: &mut Option<String>,
        categories: &mut Vec<DataCategory>,
        depth: usize,
    ) -> Result<(), ParseError> {
        if self.too_deep(depth, path)? {
            return Ok(());
        }
        self.stray_text(node, path)?;
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            match local(child) {
                "term" => {
                    let text = self.leaf_text(child, &cpath)?;
                    if term.is_some() {
                        self.issues
                            .raise(ParseError::MultipleTerms { path: cpath }, Severity::Warning)?;
                    } else {
                        *term = Some(text);
                    }
                }
                "termNoteGrp" | "descripGrp" | "adminGrp" => {
                    self.tig_children(child, &cpath, term, categories, depth + 1)?
                }
                "termNote" | "descrip" | "admin" => {
                    if let Some(cat) = self.category(child, &cpath)? {
                        categories.push(cat);
                    }
                }
                _ => self.unknown(child, &cpath, categories)?,
            }
        }
        Ok(())
    }
}

impl Issues {
    fn note_if_lenient(&mut self, finding: Finding) {
        if self.is_lenient() {
            self.note(finding);
        }
    }
}

fn write_categories(
    w: &mut XmlWriter,
    categories: &[DataCategory],
    level: Level,
) -> Result<(), WriteError> {
    for cat in categories {
        let mut attrs: Vec<(&str, &str)> = Vec::with_capacity(2);
        if let Some(lang) = cat.lang() {
            attrs.push(("xml:lang", lang.as_str()));
        }
        attrs.push(("type", cat.key()));
        w.text_element(category_element(cat.key(), level), &attrs, cat.value())?;
    }
    Ok(())
}

/// Canonical TBX serialization: `martif/text/body/termEntry*`, base
/// metadata in `martifHeader`, two-space indentation.
pub fn write_tbx(base: &TermBase) -> Result<Vec<u8>, WriteError> {
    let report = validate_termbase(base, OnomaProfile::Minimal);
    if report.has_errors() {
        return Err(WriteError::InvalidModel(report));
    }
    let mut w = XmlWriter::new();
    w.start("martif", &[])?;
    if !base.metadata.is_empty() {
        w.start("martifHeader", &[])?;
        write_categories(&mut w, &base.metadata, Level::Base)?;
        w.end("martifHeader");
    }
    w.start("text", &[])?;
    w.start("body", &[])?;
    for entry in &base.entries {
        let id_attr: Vec<(&str, &str)> = entry
            .id
            .as_deref()
            .map(|id| ("xml:id", id))
            .into_iter()
            .collect();
        w.start("termEntry", &id_attr)?;
        write_categories(&mut w, &entry.categories, Level::Entry)?;
        for section in &entry.languages {
            w.start("langSet", &[("xml:lang", section.lang.as_str())])?;
            write_categories(&mut w, &section.categories, Level::Language)?;
            for term in &section.terms {
                w.start("tig", &[])?;
                w.text_element("term", &[], &term.term)?;
                write_categories(&mut w, &term.categories, Level::Term)?;
                w.end("tig");
            }
            w.end("langSet");
        }
        w.end("termEntry");
    }
    w.end("body");
    w.end("text");
    w.end("martif");
    Ok(w.finish())
}
