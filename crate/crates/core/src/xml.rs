//! XML plumbing shared by the TBX and TEI readers and writers.

use std::fmt::Write as _;
use std::str::FromStr;

use roxmltree::{Document, Node, ParsingOptions, NS_XML_URI};

use crate::error::{ParseError, WriteError};
use crate::lang::LangCode;
use crate::report::{Finding, Severity, ValidationReport};

/// Hard cap on element nesting followed by the readers.
pub const MAX_NESTING: usize = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

impl FromStr for ParseMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ParseMode::Strict),
            "lenient" => Ok(ParseMode::Lenient),
            other => Err(format!(
                "unknown parse mode {other:?} (expected strict or lenient)"
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub enum NamespaceCheck {
    #[default]
    Ignore,
    Require(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub mode: ParseMode,
    pub namespace_check: NamespaceCheck,
    /// Object language for TEI lexica; overrides any `xml:lang` found in
    /// the document. Ignored by the TBX reader.
    pub lang: Option<LangCode>,
}

impl ParseOptions {
    pub fn strict() -> Self {
        ParseOptions::default()
    }

    pub fn lenient() -> Self {
        ParseOptions {
            mode: ParseMode::Lenient,
            ..ParseOptions::default()
        }
    }
}

pub(crate) fn parse_document(bytes: &[u8]) -> Result<Document<'_>, ParseError> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::MalformedXml {
        line: 1,
        column: 1,
        message: format!("input is not UTF-8: {e}"),
    })?;
    let options = ParsingOptions {
        allow_dtd: false,
        nodes_limit: 1_000_000,
        ..ParsingOptions::default()
    };
    Document::parse_with_options(text, options).map_err(|e| {
        let pos = e.pos();
        ParseError::MalformedXml {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })
}

/// Collects recoverable problems. Strict mode turns the first one into an
/// error; lenient mode records it and carries on.
pub(crate) struct Issues {
    mode: ParseMode,
    findings: Vec<Finding>,
}

impl Issues {
    pub(crate) fn new(mode: ParseMode) -> Self {
        Issues {
            mode,
            findings: Vec::new(),
        }
    }

    pub(crate) fn raise(
        &mut self,
        error: ParseError,
        severity: Severity,
    ) -> Result<(), ParseError> {
        match self.mode {
            ParseMode::Strict => Err(error),
            ParseMode::Lenient => {
                self.findings.push(Finding::new(
                    severity,
                    error.code(),
                    error.path(),
                    error.to_string(),
                ));
                Ok(())
            }
        }
    }

    /// Records a finding in both modes.
    pub(crate) fn note(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    pub(crate) fn is_lenient(&self) -> bool {
        self.mode == ParseMode::Lenient
    }

    pub(crate) fn into_report(self) -> ValidationReport {
        ValidationReport::from_findings(self.findings)
    }
}

pub(crate) fn xml_lang<'a>(node: Node<'a, '_>) -> Option<&'a str> {
    node.attribute((NS_XML_URI, "lang"))
}

pub(crate) fn xml_id<'a>(node: Node<'a, '_>) -> Option<&'a str> {
    node.attribute((NS_XML_URI, "id"))
}

/// Concatenated descendant text of `node`, and whether child elements were
/// crossed to collect it.
pub(crate) fn text_content(node: Node<'_, '_>) -> (String, bool) {
    let mut text = String::new();
    let mut nested = false;
    for d in node.descendants().skip(1) {
        if d.is_element() {
            nested = true;
        } else if d.is_text() {
            text.push_str(d.text().unwrap_or(""));
        }
    }
    (text, nested)
}

/// Non-whitespace text directly under `node` (structural elements hold
/// only elements).
pub(crate) fn has_stray_text(node: Node<'_, '_>) -> bool {
    node.children()
        .any(|c| c.is_text() && c.text().is_some_and(|t| !t.trim().is_empty()))
}

/// Accepts NCNames and `xml:`-prefixed NCNames.
pub fn is_xml_name(name: &str) -> bool {
    let local = name.strip_prefix("xml:").unwrap_or(name);
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '-' | '.' | '_'))
}

fn check_char(c: char, context: &str) -> Result<(), WriteError> {
    let ok = matches!(c, '\t' | '\n' | '\r')
        || ('\u{20}'..='\u{D7FF}').contains(&c)
        || ('\u{E000}'..='\u{FFFD}').contains(&c)
        || c >= '\u{10000}';
    if ok {
        Ok(())
    } else {
        Err(WriteError::InvalidCharacter {
            context: context.to_string(),
            code: c as u32,
        })
    }
}

pub(crate) fn escape_text(text: &str) -> Result<String, WriteError> {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        check_char(c, text)?;
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    Ok(out)
}

pub(crate) fn escape_attr(text: &str) -> Result<String, WriteError> {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        check_char(c, text)?;
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    Ok(out)
}

/// Indenting writer emitting one element per line.
pub(crate) struct XmlWriter {
    out: String,
    depth: usize,
}

impl XmlWriter {
    pub(crate) fn new() -> Self {
        XmlWriter {
            out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"),
            depth: 0,
        }
    }

    pub(crate) fn fragment() -> Self {
        XmlWriter {
            out: String::new(),
            depth: 0,
        }
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn open_tag(&mut self, name: &str, attrs: &[(&str, &str)]) -> Result<(), WriteError> {
        self.indent();
        self.out.push('<');
        self.out.push_str(name);
        for (key, value) in attrs {
            if !is_xml_name(key) {
                return Err(WriteError::InvalidName(key.to_string()));
            }
            let _ = write!(self.out, " {}=\"{}\"", key, escape_attr(value)?);
        }
        Ok(())
    }

    pub(crate) fn start(&mut self, name: &str, attrs: &[(&str, &str)]) -> Result<(), WriteError> {
        self.open_tag(name, attrs)?;
        self.out.push_str(">\n");
        self.depth += 1;
        Ok(())
    }

    pub(crate) fn end(&mut self, name: &str) {
        self.depth -= 1;
        self.indent();
        let _ = writeln!(self.out, "</{name}>");
    }

    pub(crate) fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) -> Result<(), WriteError> {
        self.open_tag(name, attrs)?;
        self.out.push_str("/>\n");
        Ok(())
    }

    pub(crate) fn text_element(
        &mut self,
        name: &str,
        attrs: &[(&str, &str)],
        text: &str,
    ) -> Result<(), WriteError> {
        self.open_tag(name, attrs)?;
        let _ = writeln!(self.out, ">{}</{}>", escape_text(text)?, name);
        Ok(())
    }

    /// Emits pre-serialized markup unchanged, starting at the current
    /// indentation.
    pub(crate) fn raw(&mut self, markup: &str) {
        self.indent();
        self.out.push_str(markup);
        self.out.push('\n');
    }

    pub(crate) fn finish(self) -> Vec<u8> {
        self.out.into_bytes()
    }
}

/// Qualified attribute name as stored in attribute bags: the local name for
/// un-namespaced attributes, `xml:local` for the XML namespace, `None` for
/// anything else.
pub(crate) fn bag_name(attr: &roxmltree::Attribute<'_, '_>) -> Option<String> {
    match attr.namespace() {
        None => Some(attr.name().to_string()),
        Some(ns) if ns == NS_XML_URI => Some(format!("xml:{}", attr.name())),
        Some(_) => None,
    }
}
