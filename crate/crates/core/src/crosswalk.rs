//! Bridges between the concept-oriented and the form-oriented models, and
//! the LMF conformance check for TEI-read entries.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{CrosswalkError, ModelError};
use crate::lang::LangCode;
use crate::onoma::{
    entry_path, nfc, section_path, tig_path, validate_termbase, DataCategory, LanguageSection,
    OnomaProfile, TermBase, TermSection, TerminologicalEntry,
};
use crate::report::{ChildPaths, Code, DocPath, Finding, ValidationReport};
use crate::sema::{
    lemma_of, validate_entry_at, ContextType, Definition, EntryPaths, Equivalent, Form,
    FormRepresentation, FormType, GrammaticalInfo, LexicalEntry, Lexicon, SemaProfile, Sense,
    SensePaths, UsageMarker, UsageType, DEFAULT_MAX_DEPTH,
};
use crate::tbx::{category_element, category_paths, Level};

/// Information that does not survive a projection.
pub type LossReport = ValidationReport;

/// Pattern for generated ids, with exactly one `%d` counter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdScheme(String);

impl IdScheme {
    pub fn new(pattern: impl Into<String>) -> Result<Self, ModelError> {
        let pattern = pattern.into();
        if pattern.matches("%d").count() == 1 {
            Ok(IdScheme(pattern))
        } else {
            Err(ModelError::InvalidIdScheme(pattern))
        }
    }

    /// Id for the `n`-th generated object (1-based).
    pub fn format(&self, n: usize) -> String {
        self.0.replacen("%d", &n.to_string(), 1)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for IdScheme {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdScheme::new(s)
    }
}

impl fmt::Display for IdScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DefinitionPlacement {
    #[default]
    ConceptLevel,
    LanguageLevel,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectionOptions {
    /// Sema: add the other terms of a section as variant forms.
    pub concat_synonyms_as_variants: bool,
    /// Onoma: where sense definitions land.
    pub definition_placement: DefinitionPlacement,
    /// Overrides `E%d` (lexical entries) and `C%d` (concepts).
    pub id_scheme: Option<IdScheme>,
    /// Sema: split homographs by part of speech.
    pub split_homographs_by_pos: bool,
}

impl ProjectionOptions {
    fn ids(&self, default: &str) -> IdScheme {
        self.id_scheme
            .clone()
            .unwrap_or_else(|| IdScheme(default.to_string()))
    }
}

/// Name of the sense attribute recording the source concept.
pub const PROVENANCE: &str = "provenance";

const DEPRECATED: &str = "deprecated";

/// Term-level keys consumed by the sema projection.
const CONSUMED_TERM_KEYS: &[&str] = &["partOfSpeech", "gender", "register", "example"];

fn term_category_paths(term: &TermSection, tig: &DocPath) -> Vec<DocPath> {
    let mut kids = ChildPaths::new(tig);
    kids.next("term");
    term.categories
        .iter()
        .map(|c| kids.next(category_element(c.key(), Level::Term)))
        .collect()
}

fn lossy_category(
    findings: &mut Vec<Finding>,
    category: &DataCategory,
    path: DocPath,
    lang: &LangCode,
) {
    findings.push(Finding::info(
        Code::LossyCategory,
        path,
        format!(
            "{}={:?} has no counterpart in the {lang} lexicon",
            category.key(),
            category.value()
        ),
    ));
}

/// One lexical entry per distinct surface form in `lang`, one sense per
/// concept the form belongs to.
pub fn sema_projection(
    base: &TermBase,
    lang: &LangCode,
    opts: &ProjectionOptions,
) -> Result<(Lexicon, LossReport), CrosswalkError> {
    let precondition = validate_termbase(base, OnomaProfile::Minimal);
    if precondition.has_errors() {
        return Err(CrosswalkError::InvalidSource(precondition));
    }
    let ids = base.entry_ids();
    let mut entries: Vec<LexicalEntry> = Vec::new();
    let mut by_key: HashMap<(String, Option<String>), usize> = HashMap::new();
    let mut findings = Vec::new();

    for (ei, (concept, concept_id)) in base.entries.iter().zip(&ids).enumerate() {
        let epath = entry_path(ei);
        let Some(si) = concept.languages.iter().position(|s| &s.lang == lang) else {
            continue;
        };
        let section = &concept.languages[si];
        let spath = section_path(&epath, concept, si);
        let provenance = concept
            .category("conceptIdentifier")
            .map_or(concept_id.as_str(), |c| c.value())
            .to_string();

        // shared by every term of the section
        let mut template = Sense::new();
        template
            .attributes
            .push((PROVENANCE.to_string(), provenance));
        let concept_paths = category_paths(&concept.categories, &epath, Level::Entry);
        for (category, path) in concept.categories.iter().zip(concept_paths) {
            match category.key() {
                "definition" => {
                    let mut def = Definition::new(category.value());
                    if let Some(l) = category.lang() {
                        def.attributes.push(("xml:lang".to_string(), l.to_string()));
                    }
                    template.definitions.push(def);
                }
                "subjectField" => {
                    template
                        .usages
                        .push(UsageMarker::new(UsageType::Dom, category.value()));
                    if let Some(l) = category.lang() {
                        findings.push(Finding::info(
                            Code::LossyCategory,
                            path,
                            format!(
                                "language {l} of subjectField {:?} is dropped",
                                category.value()
                            ),
                        ));
                    }
                }
                "conceptIdentifier" => {}
                _ => lossy_category(&mut findings, category, path, lang),
            }
        }
        let section_paths = category_paths(&section.categories, &spath, Level::Language);
        for (category, path) in section.categories.iter().zip(section_paths) {
            if category.key() == "definition" {
                template.definitions.push(Definition::new(category.value()));
            } else {
                lossy_category(&mut findings, category, path, lang);
            }
        }
        for other in concept.languages.iter().filter(|s| &s.lang != lang) {
            for term in &other.terms {
                template
                    .equivalents
                    .push(Equivalent::new(other.lang.clone(), term.term.clone()));
            }
        }

        for (ti, term) in section.terms.iter().enumerate() {
            let tpath = tig_path(&spath, section, ti);
            let surface = nfc(&term.term);
            let pos = term.category("partOfSpeech").map(|c| c.value().to_string());
            let key = (
                surface.clone(),
                pos.clone().filter(|_| opts.split_homographs_by_pos),
            );
            let index = *by_key.entry(key).or_insert_with(|| {
                entries.push(LexicalEntry::new().with_form(
                    Form::new(FormType::Lemma).with(FormRepresentation::orthography(&surface)),
                ));
                entries.len() - 1
            });
            let entry = &mut entries[index];

            let mut sense = template.clone();
            let term_paths = term_category_paths(term, &tpath);
            for (category, path) in term.categories.iter().zip(term_paths) {
                match category.key() {
                    "administrativeStatus" if category.value() == "deprecatedTerm" => {
                        sense
                            .usages
                            .push(UsageMarker::new(UsageType::Register, DEPRECATED));
                    }
                    "register" => sense
                        .usages
                        .push(UsageMarker::new(UsageType::Register, category.value())),
                    "example" => sense
                        .contexts
                        .push(crate::sema::Context::example(category.value())),
                    "partOfSpeech" | "gender" => {
                        let gram = entry.gram.get_or_insert_with(GrammaticalInfo::default);
                        let slot = if category.key() == "partOfSpeech" {
                            &mut gram.pos
                        } else {
                            &mut gram.gender
                        };
                        match slot {
                            None => *slot = Some(category.value().to_string()),
                            Some(existing) if existing == category.value() => {}
                            Some(existing) => findings.push(Finding::warning(
                                Code::PosConflict,
                                path,
                                format!(
                                    "{surface:?} is {existing} elsewhere but {}={} here; keeping {existing}",
                                    category.key(),
                                    category.value()
                                ),
                            )),
                        }
                    }
                    key if CONSUMED_TERM_KEYS.contains(&key) => {}
                    _ => lossy_category(&mut findings, category, path, lang),
                }
            }
            if opts.concat_synonyms_as_variants {
                for (oi, other) in section.terms.iter().enumerate() {
                    let variant = nfc(&other.term);
                    if oi == ti
                        || variant == surface
                        || entry
                            .forms
                            .iter()
                            .any(|f| f.orthographies().any(|o| o == variant))
                    {
                        continue;
                    }
                    let mut form =
                        Form::new(FormType::Variant).with(FormRepresentation::orthography(variant));
                    if let Some(term_type) = other.category("termType") {
                        form.gram = Some(GrammaticalInfo {
                            other: vec![("termType".to_string(), term_type.value().to_string())],
                            ..GrammaticalInfo::default()
                        });
                    }
                    entry.forms.push(form);
                }
            }
            entry.senses.push(sense);
        }
    }

    let scheme = opts.ids("E%d");
    for (i, entry) in entries.iter_mut().enumerate() {
        entry.id = Some(scheme.format(i + 1));
    }
    let lexicon = Lexicon {
        lang: lang.clone(),
        entries,
        metadata: Vec::new(),
    };
    Ok((lexicon, ValidationReport::from_findings(findings)))
}

struct ConceptBuilder {
    categories: Vec<DataCategory>,
    sections: Vec<LanguageSection>,
}

impl ConceptBuilder {
    fn section(&mut self, lang: &LangCode) -> &mut LanguageSection {
        let i = match self.sections.iter().position(|s| &s.lang == lang) {
            Some(i) => i,
            None => {
                self.sections.push(LanguageSection::new(lang.clone()));
                self.sections.len() - 1
            }
        };
        &mut self.sections[i]
    }

    fn add_term(&mut self, lang: &LangCode, text: &str, categories: Vec<DataCategory>) {
        let section = self.section(lang);
        match section.terms.iter_mut().find(|t| t.term == text) {
            Some(term) => push_unique(&mut term.categories, categories),
            None => {
                let mut term = TermSection::new(text);
                push_unique(&mut term.categories, categories);
                section.terms.push(term);
            }
        }
    }
}

fn push_unique(target: &mut Vec<DataCategory>, categories: Vec<DataCategory>) {
    for category in categories {
        if !target.contains(&category) {
            target.push(category);
        }
    }
}

/// Category built from model text; values that the category rules reject
/// are reported instead.
fn category(
    key: &str,
    value: &str,
    findings: &mut Vec<Finding>,
    path: &DocPath,
) -> Option<DataCategory> {
    match DataCategory::new(key, value) {
        Ok(c) => Some(c),
        Err(e) => {
            findings.push(Finding::warning(
                Code::LossyCategory,
                path.clone(),
                e.to_string(),
            ));
            None
        }
    }
}

/// Grammatical categories of the lemma: form-level information wins over
/// entry-level.
fn lemma_gram(entry: &LexicalEntry, lemma: &str) -> Vec<(&'static str, String)> {
    let form_gram = entry
        .forms
        .iter()
        .find(|f| f.orthographies().any(|o| o == lemma))
        .and_then(|f| f.gram.as_ref());
    let mut out = Vec::new();
    for (key, pick) in [
        (
            "partOfSpeech",
            (|g: &GrammaticalInfo| g.pos.clone()) as fn(&GrammaticalInfo) -> Option<String>,
        ),
        ("gender", |g: &GrammaticalInfo| g.gender.clone()),
    ] {
        let value = form_gram
            .and_then(pick)
            .or_else(|| entry.gram.as_ref().and_then(pick));
        if let Some(value) = value {
            out.push((key, value));
        }
    }
    out
}

/// One concept per sense carrying a definition or an equivalent. Senses
/// sharing a provenance value merge into one concept.
pub fn onoma_projection(
    lexica: &[Lexicon],
    opts: &ProjectionOptions,
) -> Result<(TermBase, LossReport), CrosswalkError> {
    for (i, lexicon) in lexica.iter().enumerate() {
        if lexica[..i].iter().any(|l| l.lang == lexicon.lang) {
            return Err(CrosswalkError::DuplicateObjectLanguage(
                lexicon.lang.clone(),
            ));
        }
    }
    let mut concepts: Vec<ConceptBuilder> = Vec::new();
    let mut by_provenance: HashMap<String, usize> = HashMap::new();
    let mut findings = Vec::new();

    for lexicon in lexica {
        let lang = &lexicon.lang;
        for (ei, entry) in lexicon.entries.iter().enumerate() {
            let epath = EntryPaths::entry(ei);
            let (_, _, sense_paths) = EntryPaths::children(entry, &epath);
            let lemma = lemma_of(entry)
                .map(|l| l.text.to_string())
                .filter(|t| !t.trim().is_empty());
            if lemma.is_none() {
                findings.push(Finding::warning(
                    Code::NoLemma,
                    epath.clone(),
                    format!("{lang} entry has no lemma"),
                ));
            }
            let mut stack: Vec<(&Sense, DocPath)> =
                entry.senses.iter().zip(sense_paths).rev().collect();
            while let Some((sense, path)) = stack.pop() {
                let paths = SensePaths::of(sense, &path);
                stack.extend(
                    sense
                        .subsenses
                        .iter()
                        .zip(paths.subsenses.iter().cloned())
                        .rev(),
                );
                project_sense(
                    entry,
                    lang,
                    lemma.as_deref(),
                    sense,
                    &path,
                    &paths,
                    opts,
                    &mut concepts,
                    &mut by_provenance,
                    &mut findings,
                );
            }
        }
    }

    let scheme = opts.ids("C%d");
    let entries = concepts
        .into_iter()
        .filter(|c| !c.sections.is_empty())
        .enumerate()
        .map(|(i, c)| TerminologicalEntry {
            id: Some(scheme.format(i + 1)),
            categories: c.categories,
            languages: c.sections,
        })
        .collect();
    Ok((
        TermBase::new(entries),
        ValidationReport::from_findings(findings),
    ))
}

#[allow(clippy::too_many_arguments)]
fn project_sense(
    entry: &LexicalEntry,
    lang: &LangCode,
    lemma: Option<&str>,
    sense: &Sense,
    path: &DocPath,
    paths: &SensePaths,
    opts: &ProjectionOptions,
    concepts: &mut Vec<ConceptBuilder>,
    by_provenance: &mut HashMap<String, usize>,
    findings: &mut Vec<Finding>,
) {
    if sense.definitions.is_empty() && sense.equivalents.is_empty() {
        findings.push(Finding::info(
            Code::NoDefinition,
            path.clone(),
            format!("{lang} sense has neither definition nor equivalent and yields no concept"),
        ));
        return;
    }
    let provenance = sense.provenance();
    let index = match provenance.and_then(|p| by_provenance.get(p)) {
        Some(&i) => i,
        None => {
            concepts.push(ConceptBuilder {
                categories: Vec::new(),
                sections: Vec::new(),
            });
            if let Some(p) = provenance {
                by_provenance.insert(p.to_string(), concepts.len() - 1);
            }
            concepts.len() - 1
        }
    };
    let concept = &mut concepts[index];

    if let Some(label) = &sense.label {
        findings.push(Finding::info(
            Code::LossyLabel,
            path.clone(),
            format!("sense label {label:?} is dropped"),
        ));
    }
    for (key, _) in sense.attributes.iter().filter(|(k, _)| k != PROVENANCE) {
        findings.push(Finding::info(
            Code::LossyAttribute,
            path.clone(),
            format!("sense attribute {key} is dropped"),
        ));
    }

    // term-level information for the lemma
    let mut term_categories = Vec::new();
    if let Some(lemma) = lemma {
        for (key, value) in lemma_gram(entry, lemma) {
            term_categories.extend(category(key, &value, findings, path));
        }
    }
    for (usage, upath) in sense.usages.iter().zip(&paths.usages) {
        match &usage.usage_type {
            UsageType::Dom => {
                if let Some(c) = category("subjectField", &usage.value, findings, upath) {
                    push_unique(&mut concept.categories, vec![c]);
                }
            }
            UsageType::Register if usage.value == DEPRECATED => {
                term_categories.extend(category(
                    "administrativeStatus",
                    "deprecatedTerm",
                    findings,
                    upath,
                ));
            }
            UsageType::Register | UsageType::Style => {
                term_categories.extend(category("register", &usage.value, findings, upath));
                findings.push(Finding::warning(
                    Code::LossyUsage,
                    upath.clone(),
                    format!(
                        "{lang} usage {}:{:?} kept only as a term-level register",
                        usage.usage_type, usage.value
                    ),
                ));
            }
            other => findings.push(Finding::warning(
                Code::LossyUsage,
                upath.clone(),
                format!(
                    "{lang} usage {other}:{:?} has no terminological counterpart",
                    usage.value
                ),
            )),
        }
    }
    for (context, cpath) in sense.contexts.iter().zip(&paths.contexts) {
        if context.context_type == ContextType::Example {
            term_categories.extend(category("example", &context.quote, findings, cpath));
            if context.source.is_some() || context.lang.is_some() {
                findings.push(Finding::info(
                    Code::LossyContext,
                    cpath.clone(),
                    "source and language of the example are dropped",
                ));
            }
        } else {
            findings.push(Finding::warning(
                Code::LossyContext,
                cpath.clone(),
                format!(
                    "{lang} context of type {:?} is dropped",
                    context.context_type.as_raw().unwrap_or("")
                ),
            ));
        }
    }

    if let Some(lemma) = lemma {
        concept.add_term(lang, lemma, term_categories);
        for form in entry
            .forms
            .iter()
            .filter(|f| f.form_type == FormType::Variant)
        {
            let term_type = form
                .gram
                .iter()
                .flat_map(|g| &g.other)
                .find(|(k, _)| k == "termType")
                .and_then(|(_, v)| category("termType", v, findings, path));
            for variant in form
                .orthographies()
                .filter(|o| !o.trim().is_empty() && *o != lemma)
            {
                concept.add_term(lang, variant, term_type.iter().cloned().collect());
            }
        }
    }
    for equivalent in sense
        .equivalents
        .iter()
        .filter(|e| !e.text.trim().is_empty())
    {
        concept.add_term(&equivalent.lang, &equivalent.text, Vec::new());
    }

    let mut definitions = Vec::new();
    for (def, dpath) in sense.definitions.iter().zip(&paths.definitions) {
        let def_lang = def
            .attribute("xml:lang")
            .and_then(|l| LangCode::new(l).ok());
        if let Some(c) = category("definition", &def.text, findings, dpath) {
            definitions.push(match def_lang {
                Some(l) => c.with_lang(l),
                None => c,
            });
        }
        for (key, _) in def.attributes.iter().filter(|(k, _)| k != "xml:lang") {
            findings.push(Finding::info(
                Code::LossyAttribute,
                dpath.clone(),
                format!("definition attribute {key} is dropped"),
            ));
        }
    }
    match opts.definition_placement {
        DefinitionPlacement::ConceptLevel => {
            // definitions precede subject fields
            let rest = std::mem::take(&mut concept.categories);
            let (old_defs, others): (Vec<_>, Vec<_>) =
                rest.into_iter().partition(|c| c.key() == "definition");
            concept.categories = old_defs;
            push_unique(&mut concept.categories, definitions);
            push_unique(&mut concept.categories, others);
        }
        DefinitionPlacement::LanguageLevel => {
            let section = concept.section(lang);
            push_unique(&mut section.categories, definitions);
        }
    }
}

/// `validate_sema` under the MRD profile plus every TEI feature the LMF
/// meta-model cannot hold.
pub fn lmf_conformance(entry: &LexicalEntry) -> ValidationReport {
    conformance_at(entry, EntryPaths::entry(0))
}

/// [`lmf_conformance`] over every entry, with lexicon-wide paths.
pub fn lexicon_conformance(lexicon: &Lexicon) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (i, entry) in lexicon.entries.iter().enumerate() {
        report.extend(conformance_at(entry, EntryPaths::entry(i)));
    }
    report
}

fn conformance_at(entry: &LexicalEntry, epath: DocPath) -> ValidationReport {
    let mut report =
        validate_entry_at(entry, SemaProfile::LmfMrd, DEFAULT_MAX_DEPTH, epath.clone());
    let mut findings = Vec::new();
    let (form_paths, gram_path, sense_paths) = EntryPaths::children(entry, &epath);

    let mut forms: Vec<(&Form, DocPath)> = entry.forms.iter().zip(form_paths).collect();
    while let Some((form, path)) = forms.pop() {
        let (_, _, sub_paths) = EntryPaths::form_children(form, &path);
        if !form.subforms.is_empty() {
            findings.push(Finding::warning(
                Code::LossyFlatten,
                path.clone(),
                format!(
                    "{} nested form(s) become sibling variants",
                    form.subforms.len()
                ),
            ));
        }
        forms.extend(form.subforms.iter().zip(sub_paths));
    }
    if let Some(path) = gram_path {
        findings.push(Finding::info(
            Code::InfoGramPlacement,
            path,
            "grammatical information sits on the entry, not on a form",
        ));
    }
    let mut senses: Vec<(&Sense, DocPath)> = entry.senses.iter().zip(sense_paths).collect();
    while let Some((sense, path)) = senses.pop() {
        let paths = SensePaths::of(sense, &path);
        for (usage, upath) in sense.usages.iter().zip(&paths.usages) {
            // Other types are already flagged by the MRD profile
            if matches!(
                usage.usage_type,
                UsageType::Time | UsageType::Geo | UsageType::Register | UsageType::Style
            ) {
                findings.push(Finding::warning(
                    Code::LossyUsage,
                    upath.clone(),
                    format!(
                        "usage {}:{:?} has no subject-field counterpart",
                        usage.usage_type, usage.value
                    ),
                ));
            }
        }
        for (def, dpath) in sense.definitions.iter().zip(&paths.definitions) {
            if def.flattened {
                findings.push(Finding::warning(
                    Code::LossyInline,
                    dpath.clone(),
                    "inline markup in the definition was flattened",
                ));
            }
        }
        senses.extend(sense.subsenses.iter().zip(paths.subsenses));
    }
    report.extend(ValidationReport::from_findings(findings));
    report
}

/// Flattens nested forms into sibling variant forms placed right after
/// their top-level ancestor.
pub fn to_lmf_core_view(entry: &LexicalEntry) -> (LexicalEntry, LossReport) {
    let mut view = entry.clone();
    let mut findings = Vec::new();
    let (form_paths, _, _) = EntryPaths::children(entry, &EntryPaths::entry(0));
    view.forms.clear();
    for (form, path) in entry.forms.iter().zip(form_paths) {
        let mut top = form.clone();
        let nested = std::mem::take(&mut top.subforms);
        view.forms.push(top);
        if nested.is_empty() {
            continue;
        }
        findings.push(Finding::warning(
            Code::LossyFlatten,
            path,
            format!("{} nested form(s) flattened into variants", nested.len()),
        ));
        let mut stack: Vec<Form> = nested.into_iter().rev().collect();
        while let Some(mut sub) = stack.pop() {
            stack.extend(std::mem::take(&mut sub.subforms).into_iter().rev());
            sub.form_type = FormType::Variant;
            view.forms.push(sub);
        }
    }
    (view, ValidationReport::from_findings(findings))
}
