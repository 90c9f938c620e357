//! TEI dictionary reader and canonical writer.

use roxmltree::Node;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, WriteError};
use crate::lang::LangCode;
use crate::report::{ChildPaths, Code, DocPath, Finding, Severity, ValidationReport};
use crate::sema::{
    representation_element, validate_lexicon, Context, ContextType, Definition, Equivalent, Form,
    FormRepresentation, FormType, GrammaticalInfo, LexicalEntry, Lexicon, RepresentationKind,
    SemaProfile, Sense, UsageMarker, UsageType,
};
use crate::xml::{
    bag_name, has_stray_text, parse_document, text_content, xml_id, xml_lang, Issues, ParseOptions,
    XmlWriter, MAX_NESTING,
};

pub const TEI_NS: &str = "http://www.tei-c.org/ns/1.0";

/// An `entryFree` block kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpaqueEntry {
    /// Index in the sequence of entry and entryFree elements.
    pub position: usize,
    pub xml: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TeiDocument {
    pub lexicon: Lexicon,
    #[serde(default)]
    pub opaque_entries: Vec<OpaqueEntry>,
}

impl TeiDocument {
    pub fn new(lexicon: Lexicon) -> Self {
        TeiDocument {
            lexicon,
            opaque_entries: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TeiLayout {
    /// A `TEI/teiHeader + text/body` skeleton around the entries.
    #[default]
    Wrapped,
    /// Entries only, as a fragment without XML declaration.
    Bare,
}

pub fn parse_tei(
    document: &[u8],
    opts: &ParseOptions,
) -> Result<(TeiDocument, ValidationReport), ParseError> {
    let doc = parse_document(document)?;
    let source = doc.input_text();
    let mut reader = Reader {
        issues: Issues::new(opts.mode),
        source,
        entries: Vec::new(),
        opaque: Vec::new(),
        items: 0,
        langs: Vec::new(),
        container_langs: Vec::new(),
    };
    let root = doc.root_element();
    reader.item_or_scan(root, &DocPath::root(root.tag_name().name(), 1, 0), 1)?;

    let Reader {
        mut issues,
        entries,
        opaque,
        langs,
        container_langs,
        ..
    } = reader;
    let lang = match (&opts.lang, langs.first()) {
        (None, None) if !container_langs.is_empty() => container_langs[0].clone(),
        (Some(lang), _) => lang.clone(),
        (None, Some((lang, _))) => {
            if let Some((other, path)) = langs.iter().find(|(l, _)| l != lang) {
                issues.note(Finding::warning(
                    Code::MixedLang,
                    path.clone(),
                    format!("entries declare both {lang} and {other}; using {lang}"),
                ));
            }
            lang.clone()
        }
        (None, None) => {
            issues.note(Finding::info(
                Code::DefaultLang,
                DocPath::root("document", 1, 0),
                "no object language given or declared; using und",
            ));
            LangCode::undetermined()
        }
    };
    let lexicon = Lexicon {
        lang,
        entries,
        metadata: Vec::new(),
    };
    let structural = validate_lexicon(&lexicon, SemaProfile::Lenient);
    if !issues.is_lenient() && structural.has_errors() {
        return Err(ParseError::InvalidModel(structural));
    }
    let mut report = issues.into_report();
    report.extend(structural);
    Ok((
        TeiDocument {
            lexicon,
            opaque_entries: opaque,
        },
        report,
    ))
}

struct Reader<'input> {
    issues: Issues,
    source: &'input str,
    entries: Vec<LexicalEntry>,
    opaque: Vec<OpaqueEntry>,
    items: usize,
    /// Declared language of each entry that has one in scope.
    langs: Vec<(LangCode, DocPath)>,
    /// Languages declared on containers, used when no entry is in scope.
    container_langs: Vec<LangCode>,
}

fn local<'a>(node: Node<'a, '_>) -> &'a str {
    node.tag_name().name()
}

fn attr_bag(node: Node<'_, '_>, skip: &[&str]) -> (Vec<(String, String)>, Vec<String>) {
    let mut bag = Vec::new();
    let mut foreign = Vec::new();
    for attr in node.attributes() {
        match bag_name(&attr) {
            Some(name) if skip.contains(&name.as_str()) => {}
            Some(name) => bag.push((name, attr.value().to_string())),
            None => foreign.push(format!(
                "{{{}}}{}",
                attr.namespace().unwrap_or(""),
                attr.name()
            )),
        }
    }
    (bag, foreign)
}

impl Reader<'_> {
    fn raise(&mut self, error: ParseError) -> Result<(), ParseError> {
        self.issues.raise(error, Severity::Warning)
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

    fn item_or_scan(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        depth: usize,
    ) -> Result<(), ParseError> {
        match local(node) {
            "entry" => self.entry(node),
            "entryFree" => {
                self.opaque.push(OpaqueEntry {
                    position: self.items,
                    xml: self.source[node.range()].to_string(),
                });
                self.items += 1;
                Ok(())
            }
            "teiHeader" => {
                self.issues.note(Finding::info(
                    Code::TeiHeaderSkipped,
                    path.clone(),
                    "teiHeader is not modelled and was skipped",
                ));
                Ok(())
            }
            _ => {
                if self.too_deep(depth, path)? {
                    return Ok(());
                }
                if let Some(lang) = xml_lang(node).and_then(|l| LangCode::new(l).ok()) {
                    self.container_langs.push(lang);
                }
                let mut kids = ChildPaths::new(path);
                for child in node.children().filter(Node::is_element) {
                    let cpath = kids.next(local(child));
                    self.item_or_scan(child, &cpath, depth + 1)?;
                }
                Ok(())
            }
        }
    }

    fn unknown(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<(), ParseError> {
        self.raise(ParseError::UnknownElement {
            path: path.clone(),
            name: local(node).to_string(),
        })
    }

    fn stray_text(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<(), ParseError> {
        if has_stray_text(node) {
            self.raise(ParseError::UnexpectedText { path: path.clone() })?;
        }
        Ok(())
    }

    fn foreign(&mut self, names: Vec<String>, path: &DocPath) -> Result<(), ParseError> {
        for name in names {
            self.raise(ParseError::ForeignAttribute {
                path: path.clone(),
                name,
            })?;
        }
        Ok(())
    }

    /// Text content; inline markup fails in strict mode and is flattened
    /// in lenient mode. Returns the text and whether it was flattened.
    fn text(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<(String, bool), ParseError> {
        let (text, nested) = text_content(node);
        if nested {
            self.raise(ParseError::InlineMarkup { path: path.clone() })?;
        }
        Ok((text, nested))
    }

    fn lang(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<Option<LangCode>, ParseError> {
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

    fn entry(&mut self, node: Node<'_, '_>) -> Result<(), ParseError> {
        let index = self.entries.len();
        let path = DocPath::root("entry", index + 1, self.items);
        self.items += 1;

        if let Some(scope) = node.ancestors().find_map(xml_lang) {
            if let Ok(lang) = LangCode::new(scope) {
                self.langs.push((lang, path.clone()));
            }
        }
        let mut entry = LexicalEntry {
            id: xml_id(node).map(str::to_string),
            ..LexicalEntry::default()
        };
        self.stray_text(node, &path)?;
        let mut kids = ChildPaths::new(&path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            match local(child) {
                "form" => {
                    if let Some(form) = self.form(child, &cpath, 2)? {
                        entry.forms.push(form);
                    }
                }
                "gramGrp" => {
                    let gram = self.gram(child, &cpath)?;
                    merge_gram(&mut entry.gram, gram);
                }
                "sense" => {
                    if let Some(sense) = self.sense(child, &cpath, 2)? {
                        entry.senses.push(sense);
                    }
                }
                _ => self.unknown(child, &cpath)?,
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    fn form(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        depth: usize,
    ) -> Result<Option<Form>, ParseError> {
        if self.too_deep(depth, path)? {
            return Ok(None);
        }
        let form_type = match node.attribute("type") {
            None => FormType::Unspecified,
            Some("lemma") => FormType::Lemma,
            Some("inflected") => FormType::Inflected,
            Some("variant") => FormType::Variant,
            Some(other) => {
                self.raise(ParseError::UnknownFormType {
                    path: path.clone(),
                    value: other.to_string(),
                })?;
                FormType::Unspecified
            }
        };
        let mut form = Form::new(form_type);
        self.stray_text(node, path)?;
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            let kind = match local(child) {
                "orth" if child.attribute("type") == Some("transliteration") => {
                    Some(RepresentationKind::Transliteration)
                }
                "orth" => Some(RepresentationKind::Orthography),
                "pron" | "phon" => Some(RepresentationKind::Pronunciation),
                "hyph" => Some(RepresentationKind::Hyphenation),
                "stress" => Some(RepresentationKind::Stress),
                "syll" => Some(RepresentationKind::Syllabification),
                _ => None,
            };
            if let Some(kind) = kind {
                let (value, _) = self.text(child, &cpath)?;
                form.representations
                    .push(FormRepresentation { kind, value });
                continue;
            }
            match local(child) {
                "gramGrp" => {
                    let gram = self.gram(child, &cpath)?;
                    merge_gram(&mut form.gram, gram);
                }
                "form" => {
                    if let Some(sub) = self.form(child, &cpath, depth + 1)? {
                        form.subforms.push(sub);
                    }
                }
                _ => self.unknown(child, &cpath)?,
            }
        }
        Ok(Some(form))
    }

    fn gram(&mut self, node: Node<'_, '_>, path: &DocPath) -> Result<GrammaticalInfo, ParseError> {
        let mut gram = GrammaticalInfo::default();
        self.stray_text(node, path)?;
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            let (value, _) = self.text(child, &cpath)?;
            match local(child) {
                "pos" if gram.pos.is_none() => gram.pos = Some(value),
                "gen" if gram.gender.is_none() => gram.gender = Some(value),
                "gram" => {
                    let key = child.attribute("type").unwrap_or("gram").to_string();
                    gram.other.push((key, value));
                }
                name => gram.other.push((name.to_string(), value)),
            }
        }
        Ok(gram)
    }

    fn sense(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        depth: usize,
    ) -> Result<Option<Sense>, ParseError> {
        if self.too_deep(depth, path)? {
            return Ok(None);
        }
        let (attributes, foreign) = attr_bag(node, &["n"]);
        self.foreign(foreign, path)?;
        let mut sense = Sense {
            label: node.attribute("n").map(str::to_string),
            attributes,
            ..Sense::default()
        };
        self.stray_text(node, path)?;
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            match local(child) {
                "usg" => {
                    let (value, _) = self.text(child, &cpath)?;
                    let usage_type = UsageType::from_raw(child.attribute("type").unwrap_or(""));
                    sense.usages.push(UsageMarker { usage_type, value });
                }
                "def" => {
                    let (attributes, foreign) = attr_bag(child, &[]);
                    self.foreign(foreign, &cpath)?;
                    let (text, flattened) = self.text(child, &cpath)?;
                    sense.definitions.push(Definition {
                        text,
                        attributes,
                        flattened,
                    });
                }
                "cit" => self.cit(child, &cpath, &mut sense)?,
                "sense" => {
                    if let Some(sub) = self.sense(child, &cpath, depth + 1)? {
                        sense.subsenses.push(sub);
                    }
                }
                _ => self.unknown(child, &cpath)?,
            }
        }
        Ok(Some(sense))
    }

    fn cit(
        &mut self,
        node: Node<'_, '_>,
        path: &DocPath,
        sense: &mut Sense,
    ) -> Result<(), ParseError> {
        let mut quote = None;
        let mut source = None;
        self.stray_text(node, path)?;
        let mut kids = ChildPaths::new(path);
        for child in node.children().filter(Node::is_element) {
            let cpath = kids.next(local(child));
            match local(child) {
                "quote" if quote.is_none() => {
                    let lang = self.lang(child, &cpath)?;
                    let (text, _) = self.text(child, &cpath)?;
                    quote = Some((text, lang));
                }
                "bibl" if source.is_none() => source = Some(self.text(child, &cpath)?.0),
                _ => self.unknown(child, &cpath)?,
            }
        }
        let Some((quote, quote_lang)) = quote else {
            return self.raise(ParseError::CitWithoutQuote { path: path.clone() });
        };
        let cit_type = node.attribute("type");
        let cit_lang = self.lang(node, path)?;
        match (cit_type, cit_lang) {
            (Some("translation"), Some(lang)) => {
                sense.equivalents.push(Equivalent { lang, text: quote })
            }
            _ => sense.contexts.push(Context {
                quote,
                context_type: ContextType::from_raw(cit_type),
                lang: quote_lang,
                source,
            }),
        }
        Ok(())
    }
}

fn merge_gram(slot: &mut Option<GrammaticalInfo>, gram: GrammaticalInfo) {
    match slot {
        None => *slot = Some(gram),
        Some(existing) => {
            for (key, value) in [("pos", gram.pos), ("gen", gram.gender)] {
                if let Some(value) = value {
                    let field = if key == "pos" {
                        &mut existing.pos
                    } else {
                        &mut existing.gender
                    };
                    if field.is_none() {
                        *field = Some(value);
                    } else {
                        existing.other.push((key.to_string(), value));
                    }
                }
            }
            existing.other.extend(gram.other);
        }
    }
}

fn attrs(pairs: &[(String, String)]) -> Vec<(&str, &str)> {
    pairs
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect()
}

fn write_gram(w: &mut XmlWriter, gram: &GrammaticalInfo) -> Result<(), WriteError> {
    w.start("gramGrp", &[])?;
    if let Some(pos) = &gram.pos {
        w.text_element("pos", &[], pos)?;
    }
    if let Some(gender) = &gram.gender {
        w.text_element("gen", &[], gender)?;
    }
    for (key, value) in &gram.other {
        w.text_element("gram", &[("type", key)], value)?;
    }
    w.end("gramGrp");
    Ok(())
}

fn write_form(w: &mut XmlWriter, form: &Form) -> Result<(), WriteError> {
    let type_attr: Vec<(&str, &str)> = form
        .form_type
        .as_attr()
        .map(|t| ("type", t))
        .into_iter()
        .collect();
    w.start("form", &type_attr)?;
    for rep in &form.representations {
        let rep_attrs: &[(&str, &str)] = if rep.kind == RepresentationKind::Transliteration {
            &[("type", "transliteration")]
        } else {
            &[]
        };
        w.text_element(representation_element(rep.kind), rep_attrs, &rep.value)?;
    }
    if let Some(gram) = &form.gram {
        write_gram(w, gram)?;
    }
    for sub in &form.subforms {
        write_form(w, sub)?;
    }
    w.end("form");
    Ok(())
}

fn write_sense(w: &mut XmlWriter, sense: &Sense) -> Result<(), WriteError> {
    let mut sense_attrs: Vec<(&str, &str)> = sense
        .label
        .as_deref()
        .map(|n| ("n", n))
        .into_iter()
        .collect();
    sense_attrs.extend(attrs(&sense.attributes));
    w.start("sense", &sense_attrs)?;
    for usage in &sense.usages {
        w.text_element("usg", &[("type", usage.usage_type.as_raw())], &usage.value)?;
    }
    for def in &sense.definitions {
        w.text_element("def", &attrs(&def.attributes), &def.text)?;
    }
    for context in &sense.contexts {
        let cit_attrs: Vec<(&str, &str)> = context
            .context_type
            .as_raw()
            .map(|t| ("type", t))
            .into_iter()
            .collect();
        w.start("cit", &cit_attrs)?;
        let quote_attrs: Vec<(&str, &str)> = context
            .lang
            .as_ref()
            .map(|l| ("xml:lang", l.as_str()))
            .into_iter()
            .collect();
        w.text_element("quote", &quote_attrs, &context.quote)?;
        if let Some(source) = &context.source {
            w.text_element("bibl", &[], source)?;
        }
        w.end("cit");
    }
    for equivalent in &sense.equivalents {
        w.start(
            "cit",
            &[
                ("type", "translation"),
                ("xml:lang", equivalent.lang.as_str()),
            ],
        )?;
        w.text_element("quote", &[], &equivalent.text)?;
        w.end("cit");
    }
    for sub in &sense.subsenses {
        write_sense(w, sub)?;
    }
    w.end("sense");
    Ok(())
}

fn write_entry(w: &mut XmlWriter, entry: &LexicalEntry) -> Result<(), WriteError> {
    let id_attr: Vec<(&str, &str)> = entry
        .id
        .as_deref()
        .map(|id| ("xml:id", id))
        .into_iter()
        .collect();
    w.start("entry", &id_attr)?;
    for form in &entry.forms {
        write_form(w, form)?;
    }
    if let Some(gram) = &entry.gram {
        write_gram(w, gram)?;
    }
    for sense in &entry.senses {
        write_sense(w, sense)?;
    }
    w.end("entry");
    Ok(())
}

/// Canonical TEI serialization. Opaque entries are re-emitted verbatim at
/// their recorded positions.
pub fn write_tei(doc: &TeiDocument, layout: TeiLayout) -> Result<Vec<u8>, WriteError> {
    let report = validate_lexicon(&doc.lexicon, SemaProfile::Lenient);
    if report.has_errors() {
        return Err(WriteError::InvalidModel(report));
    }
    let mut w = match layout {
        TeiLayout::Wrapped => XmlWriter::new(),
        TeiLayout::Bare => XmlWriter::fragment(),
    };
    if layout == TeiLayout::Wrapped {
        w.start("TEI", &[("xmlns", TEI_NS)])?;
        w.start("teiHeader", &[])?;
        w.start("fileDesc", &[])?;
        w.start("titleStmt", &[])?;
        w.text_element("title", &[], "Lexicon")?;
        w.end("titleStmt");
        w.start("publicationStmt", &[])?;
        w.empty("p", &[])?;
        w.end("publicationStmt");
        w.start("sourceDesc", &[])?;
        w.empty("p", &[])?;
        w.end("sourceDesc");
        w.end("fileDesc");
        w.end("teiHeader");
        w.start("text", &[])?;
        w.start("body", &[("xml:lang", doc.lexicon.lang.as_str())])?;
    }

    let mut entries = doc.lexicon.entries.iter();
    let mut opaque = doc.opaque_entries.iter().peekable();
    let total = doc.lexicon.entries.len() + doc.opaque_entries.len();
    for position in 0..total {
        match opaque.next_if(|o| o.position <= position) {
            Some(block) => w.raw(&block.xml),
            None => match entries.next() {
                Some(entry) => write_entry(&mut w, entry)?,
                None => {
                    for block in opaque.by_ref() {
                        w.raw(&block.xml);
                    }
                }
            },
        }
    }

    if layout == TeiLayout::Wrapped {
        w.end("body");
        w.end("text");
        w.end("TEI");
    }
    Ok(w.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sema::{lemma_of, sense_stats, usage_index, walk_senses, SenseStats};
    use crate::testing::{self, arb_lexicon};
    use proptest::prelude::*;

    pub(crate) const POUSSIN: &str = r#"<entry>
<form>
<orth>poussin</orth>
<pron>pusë</pron>
</form>
<gramGrp>
<pos>n.</pos>
<gen>m.</gen>
</gramGrp>
<sense n="1">
<def>Jeune poulet, nouvellement sorti de l'oeuf, encore couvert de duvet.</def>
<cit type="example">
<quote>La poule et ses poussins.</quote>
</cit>
</sense>
<sense n="2">
<usg type="dom">Zool.</usg>
<def>Jeune oiseau (par rapport aux adultes, aux parents)</def>
</sense>
<sense n="3">
<usg type="dom">êtres humains</usg>
<sense n="3.1">
<usg type="register">Fam.</usg>
<def>Terme d'affection (enfant)</def>
</sense>
<sense n="3.2">
<usg type="dom">Sports</usg>
<def n="2">Catégorie d'âge (9 ans) qui précède celle des benjamins</def>
</sense>
<sense>
<def n="3">Elève de première année dans certaines écoles (Air, Aéronautique)</def>
</sense>
</sense>
</entry>"#;

    fn fr() -> ParseOptions {
        ParseOptions {
            lang: Some(LangCode::new("fr").unwrap()),
            ..ParseOptions::strict()
        }
    }

    fn lenient() -> ParseOptions {
        ParseOptions::lenient()
    }

    #[test]
    fn reads_poussin() {
        let (doc, report) = parse_tei(POUSSIN.as_bytes(), &fr()).unwrap();
        assert!(report.is_empty());
        assert_eq!(doc.lexicon.entries, vec![testing::poussin_entry()]);
        let entry = &doc.lexicon.entries[0];
        assert_eq!(lemma_of(entry).unwrap().text, "poussin");
        assert_eq!(
            sense_stats(entry),
            SenseStats {
                total: 6,
                max_depth: 2,
                top_level: 3
            }
        );
        let dom = usage_index(&doc.lexicon, &UsageType::Dom);
        assert_eq!(dom.len(), 3);
    }

    #[test]
    fn language_defaults_to_und_with_finding() {
        let (doc, report) = parse_tei(POUSSIN.as_bytes(), &ParseOptions::strict()).unwrap();
        assert_eq!(doc.lexicon.lang, LangCode::undetermined());
        assert_eq!(report.codes(), vec![Code::DefaultLang]);
        let wrapped = format!("<body xml:lang=\"fr\">{POUSSIN}</body>");
        let (doc, report) = parse_tei(wrapped.as_bytes(), &ParseOptions::strict()).unwrap();
        assert_eq!(doc.lexicon.lang.as_str(), "fr");
        assert!(report.is_empty());
    }

    #[test]
    fn entry_free_is_opaque() {
        let raw = "<entryFree>poussin, <hi>n. m.</hi> petit de la poule</entryFree>";
        let (doc, _) = parse_tei(
            format!("<body xml:lang=\"fr\">{raw}</body>").as_bytes(),
            &fr(),
        )
        .unwrap();
        assert!(doc.lexicon.entries.is_empty());
        assert_eq!(
            doc.opaque_entries,
            vec![OpaqueEntry {
                position: 0,
                xml: raw.to_string()
            }]
        );
        let written = String::from_utf8(write_tei(&doc, TeiLayout::Wrapped).unwrap()).unwrap();
        assert!(written.contains(raw));
        assert_eq!(parse_tei(written.as_bytes(), &fr()).unwrap().0, doc);
    }

    #[test]
    fn opaque_positions_interleave_with_entries() {
        let doc = format!("<body><entryFree>a</entryFree>{POUSSIN}<entryFree>b</entryFree></body>");
        let (parsed, _) = parse_tei(doc.as_bytes(), &fr()).unwrap();
        let positions: Vec<usize> = parsed.opaque_entries.iter().map(|o| o.position).collect();
        assert_eq!(positions, vec![0, 2]);
        let written = String::from_utf8(write_tei(&parsed, TeiLayout::Bare).unwrap()).unwrap();
        let a = written.find("<entryFree>a").unwrap();
        let e = written.find("<entry>").unwrap();
        let b = written.find("<entryFree>b").unwrap();
        assert!(a < e && e < b);
    }

    #[test]
    fn nested_forms() {
        let doc = r#"<entry><form type="lemma"><orth>pomme de terre</orth><form><orth>pomme</orth></form><form><orth>terre</orth></form></form></entry>"#;
        let (parsed, _) = parse_tei(doc.as_bytes(), &fr()).unwrap();
        let form = &parsed.lexicon.entries[0].forms[0];
        assert_eq!(form.form_type, FormType::Lemma);
        let subs: Vec<&str> = form
            .subforms
            .iter()
            .flat_map(|f| f.orthographies())
            .collect();
        assert_eq!(subs, vec!["pomme", "terre"]);
        assert_eq!(form.depth(), 2);
    }

    #[test]
    fn translation_equivalent_is_written_as_cit() {
        let mut sense = Sense::new();
        sense
            .equivalents
            .push(Equivalent::new(LangCode::new("en").unwrap(), "chick"));
        let entry = LexicalEntry::new()
            .with_form(Form::new(FormType::Lemma).with(FormRepresentation::orthography("poussin")))
            .with_sense(sense);
        let doc = TeiDocument::new(Lexicon {
            lang: LangCode::new("fr").unwrap(),
            entries: vec![entry],
            metadata: Vec::new(),
        });
        let written = String::from_utf8(write_tei(&doc, TeiLayout::Bare).unwrap()).unwrap();
        assert!(written.contains("<cit type=\"translation\" xml:lang=\"en\">"));
        assert!(written.contains("<quote>chick</quote>"));
        let (reread, _) = parse_tei(written.as_bytes(), &fr()).unwrap();
        assert_eq!(reread, doc);
    }

    #[test]
    fn empty_lexicon_has_no_entries() {
        let doc = TeiDocument::new(Lexicon::new(LangCode::new("fr").unwrap()));
        let written = String::from_utf8(write_tei(&doc, TeiLayout::Wrapped).unwrap()).unwrap();
        assert!(!written.contains("<entry"));
        let (reread, report) = parse_tei(written.as_bytes(), &ParseOptions::strict()).unwrap();
        assert_eq!(reread, doc);
        assert_eq!(report.codes(), vec![Code::TeiHeaderSkipped]);
    }

    #[test]
    fn cit_without_quote() {
        let doc = r#"<entry><form><orth>a</orth></form><sense><def>d</def><cit type="example"><bibl>x</bibl></cit></sense></entry>"#;
        assert_eq!(
            parse_tei(doc.as_bytes(), &fr()).unwrap_err().code(),
            Code::CitWithoutQuote
        );
        let (parsed, report) = parse_tei(
            doc.as_bytes(),
            &ParseOptions {
                lang: fr().lang,
                ..lenient()
            },
        )
        .unwrap();
        assert_eq!(report.codes(), vec![Code::CitWithoutQuote]);
        assert!(parsed.lexicon.entries[0].senses[0].contexts.is_empty());
    }

    #[test]
    fn unknown_elements() {
        let doc = r#"<entry><form><orth>a</orth></form><etym>lat.</etym><sense><def>d</def></sense></entry>"#;
        assert_eq!(
            parse_tei(doc.as_bytes(), &fr()).unwrap_err().code(),
            Code::UnknownElement
        );
        let (parsed, report) = parse_tei(
            doc.as_bytes(),
            &ParseOptions {
                lang: fr().lang,
                ..lenient()
            },
        )
        .unwrap();
        assert_eq!(report.codes(), vec![Code::UnknownElement]);
        assert_eq!(parsed.lexicon.entries[0].senses.len(), 1);
    }

    #[test]
    fn inline_definition_markup() {
        let doc = r#"<entry><form><orth>a</orth></form><sense><def>petit <hi>de la</hi> poule</def></sense></entry>"#;
        assert_eq!(
            parse_tei(doc.as_bytes(), &fr()).unwrap_err().code(),
            Code::LossyInline
        );
        let (parsed, report) = parse_tei(
            doc.as_bytes(),
            &ParseOptions {
                lang: fr().lang,
                ..lenient()
            },
        )
        .unwrap();
        assert_eq!(report.codes(), vec![Code::LossyInline]);
        let def = &parsed.lexicon.entries[0].senses[0].definitions[0];
        assert_eq!(def.text, "petit de la poule");
        assert!(def.flattened);
    }

    #[test]
    fn other_usage_types_are_kept() {
        let doc = r#"<entry><form><orth>a</orth></form><sense><usg type="hint">rare</usg><usg type="geo">Québec</usg></sense></entry>"#;
        let (parsed, _) = parse_tei(doc.as_bytes(), &fr()).unwrap();
        let usages = &parsed.lexicon.entries[0].senses[0].usages;
        assert_eq!(usages[0].usage_type, UsageType::Other("hint".into()));
        assert_eq!(usages[1].usage_type, UsageType::Geo);
    }

    #[test]
    fn canonical_layout_of_poussin() {
        let doc = TeiDocument::new(testing::poussin_lexicon());
        let written = String::from_utf8(write_tei(&doc, TeiLayout::Bare).unwrap()).unwrap();
        assert!(written.starts_with("<entry>\n  <form>\n    <orth>poussin</orth>\n    <pron>pusë</pron>\n  </form>\n  <gramGrp>\n"));
        assert!(written.contains(
            "    <def n=\"2\">Catégorie d'âge (9 ans) qui précède celle des benjamins</def>\n"
        ));
        assert!(written.contains(
            "  <sense n=\"3\">\n    <usg type=\"dom\">êtres humains</usg>\n    <sense n=\"3.1\">"
        ));
    }

    fn count_elements(xml: &str, name: &str) -> usize {
        let doc = roxmltree::Document::parse(xml).unwrap();
        doc.descendants()
            .filter(|n| n.is_element() && n.tag_name().name() == name)
            .count()
    }

    proptest! {
        #[test]
        fn round_trip(lexicon in arb_lexicon("fr")) {
            let doc = TeiDocument::new(lexicon);
            let written = write_tei(&doc, TeiLayout::Wrapped).unwrap();
            let (reread, _) = parse_tei(&written, &ParseOptions::strict()).unwrap();
            prop_assert_eq!(&reread, &doc);
            prop_assert_eq!(write_tei(&reread, TeiLayout::Wrapped).unwrap(), written);
        }

        #[test]
        fn every_usg_becomes_one_marker(lexicon in arb_lexicon("de")) {
            let written = String::from_utf8(write_tei(&TeiDocument::new(lexicon), TeiLayout::Wrapped).unwrap()).unwrap();
            let (reread, _) = parse_tei(written.as_bytes(), &ParseOptions::strict()).unwrap();
            let mut markers = 0;
            for entry in &reread.lexicon.entries {
                walk_senses(&entry.senses, &mut |s, _| markers += s.usages.len());
            }
            prop_assert_eq!(markers, count_elements(&written, "usg"));
        }

        #[test]
        fn flattening_keeps_every_character(
            runs in prop::collection::vec(("[a-zé ]{0,6}", any::<bool>()), 1..6),
        ) {
            let mut inner = String::new();
            let mut expected = String::new();
            for (text, marked) in &runs {
                expected.push_str(text);
                if *marked {
                    inner.push_str(&format!("<hi rend=\"i\">{text}</hi>"));
                } else {
                    inner.push_str(text);
                }
            }
            let doc = format!("<entry><form><orth>x</orth></form><sense><def>{inner}</def></sense></entry>");
            let (parsed, _) = parse_tei(doc.as_bytes(), &ParseOptions { lang: fr().lang, ..lenient() }).unwrap();
            let def = &parsed.lexicon.entries[0].senses[0].definitions[0];
            prop_assert_eq!(def.text.chars().count(), expected.chars().count());
            prop_assert_eq!(&def.text, &expected);
        }

        #[test]
        fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
            match parse_tei(&bytes, &ParseOptions::lenient()) {
                Ok(_) | Err(ParseError::MalformedXml { .. }) => {}
                Err(other) => prop_assert!(false, "unexpected {other:?}"),
            }
        }
    }
}
