//! Concept-oriented terminology model: terminological entry, language
//! section, term section, each carrying open data categories.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{ModelError, QueryError};
use crate::lang::LangCode;
use crate::report::{Code, DocPath, Finding, ValidationReport};

/// Keys of the default data-category registry. The registry is open:
/// other keys are accepted and preserved verbatim.
pub const DEFAULT_REGISTRY: &[&str] = &[
    "term",
    "language",
    "subjectField",
    "definition",
    "partOfSpeech",
    "gender",
    "administrativeStatus",
    "register",
    "source",
    "responsibility",
    "creationDate",
    "modificationDate",
    "termIdentifier",
    "conceptIdentifier",
    "conceptOrigin",
    "originatingDatabaseName",
    "example",
];

/// Registry keys that create model components instead of being stored.
pub const STRUCTURAL_KEYS: &[&str] = &["term", "language"];

pub const ADMINISTRATIVE_STATUS_VALUES: &[&str] =
    &["preferredTerm", "deprecatedTerm", "admittedTerm"];

pub fn is_registered(key: &str) -> bool {
    DEFAULT_REGISTRY.contains(&key)
}

/// A named descriptor attached to a base, entry, language or term section.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDataCategory")]
pub struct DataCategory {
    key: String,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lang: Option<LangCode>,
}

#[derive(Deserialize)]
struct RawDataCategory {
    key: String,
    value: String,
    #[serde(default)]
    lang: Option<LangCode>,
}

impl TryFrom<RawDataCategory> for DataCategory {
    type Error = ModelError;

    fn try_from(raw: RawDataCategory) -> Result<Self, Self::Error> {
        let cat = DataCategory::new(raw.key, raw.value)?;
        Ok(match raw.lang {
            Some(lang) => cat.with_lang(lang),
            None => cat,
        })
    }
}

impl DataCategory {
    pub fn new(key: impl Into<String>, value: impl Into<String>) -> Result<Self, ModelError> {
        let key = key.into();
        let value = value.into();
        if key.is_empty() {
            return Err(ModelError::EmptyCategoryKey);
        }
        if STRUCTURAL_KEYS.contains(&key.as_str()) {
            return Err(ModelError::StructuralCategory(key));
        }
        if value.trim().is_empty() {
            return Err(ModelError::EmptyCategoryValue(key));
        }
        if key == "administrativeStatus" && !ADMINISTRATIVE_STATUS_VALUES.contains(&value.as_str())
        {
            return Err(ModelError::InvalidAdministrativeStatus(value));
        }
        Ok(DataCategory {
            key,
            value,
            lang: None,
        })
    }

    pub fn with_lang(mut self, lang: LangCode) -> Self {
        self.lang = Some(lang);
        self
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn lang(&self) -> Option<&LangCode> {
        self.lang.as_ref()
    }

    pub fn is_registered(&self) -> bool {
        is_registered(&self.key)
    }
}

/// Finds the first category with `key`.
pub fn find_category<'a>(categories: &'a [DataCategory], key: &str) -> Option<&'a DataCategory> {
    categories.iter().find(|c| c.key == key)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSection {
    pub term: String,
    #[serde(default)]
    pub categories: Vec<DataCategory>,
}

impl TermSection {
    pub fn new(term: impl Into<String>) -> Self {
        TermSection {
            term: term.into(),
            categories: Vec::new(),
        }
    }

    pub fn with(mut self, category: DataCategory) -> Self {
        self.categories.push(category);
        self
    }

    pub fn category(&self, key: &str) -> Option<&DataCategory> {
        find_category(&self.categories, key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageSection {
    pub lang: LangCode,
    pub terms: Vec<TermSection>,
    #[serde(default)]
    pub categories: Vec<DataCategory>,
}

impl LanguageSection {
    pub fn new(lang: LangCode) -> Self {
        LanguageSection {
            lang,
            terms: Vec::new(),
            categories: Vec::new(),
        }
    }

    pub fn with_term(mut self, term: TermSection) -> Self {
        self.terms.push(term);
        self
    }

    pub fn with(mut self, category: DataCategory) -> Self {
        self.categories.push(category);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminologicalEntry {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub id: Option<String>,
    #[serde(default)]
    pub categories: Vec<DataCategory>,
    pub languages: Vec<LanguageSection>,
}

impl TerminologicalEntry {
    pub fn new() -> Self {
        TerminologicalEntry::default()
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn with(mut self, category: DataCategory) -> Self {
        self.categories.push(category);
        self
    }

    pub fn with_section(mut self, section: LanguageSection) -> Self {
        self.languages.push(section);
        self
    }

    pub fn section(&self, lang: &LangCode) -> Option<&LanguageSection> {
        self.languages.iter().find(|s| &s.lang == lang)
    }

    pub fn category(&self, key: &str) -> Option<&DataCategory> {
        find_category(&self.categories, key)
    }

    pub fn term_count(&self) -> usize {
        self.languages.iter().map(|s| s.terms.len()).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermBase {
    pub entries: Vec<TerminologicalEntry>,
    #[serde(default)]
    pub metadata: Vec<DataCategory>,
}

impl TermBase {
    pub fn new(entries: Vec<TerminologicalEntry>) -> Self {
        TermBase {
            entries,
            metadata: Vec::new(),
        }
    }

    /// Effective entry ids: the explicit id, else the concept-level
    /// conceptIdentifier if no other entry claims it, else positional
    /// `entry-N` (1-based), skipping names already taken.
    pub fn entry_ids(&self) -> Vec<String> {
        let mut taken: HashSet<String> = self.entries.iter().filter_map(|e| e.id.clone()).collect();
        let mut ids: Vec<Option<String>> = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            let id = match &entry.id {
                Some(id) => Some(id.clone()),
                None => entry
                    .category("conceptIdentifier")
                    .map(|c| c.value().to_string())
                    .filter(|v| taken.insert(v.clone())),
            };
            ids.push(id);
        }
        ids.into_iter()
            .enumerate()
            .map(|(i, id)| {
                id.unwrap_or_else(|| {
                    let mut candidate = format!("entry-{}", i + 1);
                    let mut n = 1;
                    while taken.contains(&candidate) {
                        candidate = format!("entry-{}.{}", i + 1, n);
                        n += 1;
                    }
                    taken.insert(candidate.clone());
                    candidate
                })
            })
            .collect()
    }

    /// Distinct languages in order of first appearance.
    pub fn languages(&self) -> Vec<LangCode> {
        let mut seen = Vec::new();
        for section in self.entries.iter().flat_map(|e| &e.languages) {
            if !seen.contains(&section.lang) {
                seen.push(section.lang.clone());
            }
        }
        seen
    }
}

/// How term text is compared across entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TermMatch {
    pub case_insensitive: bool,
}

impl TermMatch {
    pub fn key(&self, term: &str) -> String {
        let nfc: String = term.nfc().collect();
        if self.case_insensitive {
            nfc.to_lowercase().nfc().collect()
        } else {
            nfc
        }
    }
}

pub fn nfc(text: &str) -> String {
    text.nfc().collect()
}

/// Terms of `entry` in `lang`, in document order.
pub fn synonyms<'a>(entry: &'a TerminologicalEntry, lang: &LangCode) -> Vec<&'a str> {
    entry
        .section(lang)
        .map(|s| s.terms.iter().map(|t| t.term.as_str()).collect())
        .unwrap_or_default()
}

/// Cartesian product of the terms in `a` with the terms in `b`.
pub fn equivalents<'a>(
    entry: &'a TerminologicalEntry,
    a: &LangCode,
    b: &LangCode,
) -> Result<Vec<(&'a str, &'a str)>, QueryError> {
    if a == b {
        return Err(QueryError::SameLanguage(a.clone()));
    }
    let left = synonyms(entry, a);
    let right = synonyms(entry, b);
    Ok(left
        .iter()
        .flat_map(|l| right.iter().map(move |r| (*l, *r)))
        .collect())
}

pub type PolysemyMap = BTreeMap<(LangCode, String), Vec<String>>;

/// Surface forms attached to two or more entries of the base.
pub fn accidental_polysemy(base: &TermBase) -> PolysemyMap {
    accidental_polysemy_with(base, TermMatch::default())
}

pub fn accidental_polysemy_with(base: &TermBase, matching: TermMatch) -> PolysemyMap {
    let ids = base.entry_ids();
    let mut incidences: BTreeMap<(LangCode, String), (String, Vec<String>)> = BTreeMap::new();
    for (entry, id) in base.entries.iter().zip(&ids) {
        for section in &entry.languages {
            for term in &section.terms {
                let key = (section.lang.clone(), matching.key(&term.term));
                let slot = incidences
                    .entry(key)
                    .or_insert_with(|| (nfc(&term.term), Vec::new()));
                if slot.1.last() != Some(id) {
                    slot.1.push(id.clone());
                }
            }
        }
    }
    incidences
        .into_iter()
        .filter(|(_, (_, ids))| ids.len() >= 2)
        .map(|((lang, _), (surface, ids))| ((lang, surface), ids))
        .collect()
}

/// Term text (NFC) in `lang` to the ids of the entries it appears in.
pub fn index_by_term(base: &TermBase, lang: &LangCode) -> BTreeMap<String, Vec<String>> {
    let ids = base.entry_ids();
    let mut index: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (entry, id) in base.entries.iter().zip(&ids) {
        let sections = entry.languages.iter().filter(|s| &s.lang == lang);
        for term in sections.flat_map(|s| &s.terms) {
            let slot = index.entry(nfc(&term.term)).or_default();
            if slot.last() != Some(id) {
                slot.push(id.clone());
            }
        }
    }
    index
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum OnomaProfile {
    /// Mandatory categories only: language and term.
    #[default]
    Minimal,
    /// Minimal plus subjectField, definition and partOfSpeech.
    Recommended,
}

impl FromStr for OnomaProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimal" => Ok(OnomaProfile::Minimal),
            "recommended" => Ok(OnomaProfile::Recommended),
            other => Err(format!(
                "unknown terminology profile {other:?} (expected minimal or recommended)"
            )),
        }
    }
}

impl fmt::Display for OnomaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OnomaProfile::Minimal => "minimal",
            OnomaProfile::Recommended => "recommended",
        })
    }
}

/// Path of entry `index` (0-based) in canonical TBX layout.
pub(crate) fn entry_path(index: usize) -> DocPath {
    DocPath::root("termEntry", index + 1, index)
}

pub(crate) fn section_path(
    entry_path: &DocPath,
    entry: &TerminologicalEntry,
    index: usize,
) -> DocPath {
    entry_path.child("langSet", index + 1, entry.categories.len() + index)
}

pub(crate) fn tig_path(section_path: &DocPath, section: &LanguageSection, index: usize) -> DocPath {
    section_path.child("tig", index + 1, section.categories.len() + index)
}

pub fn validate_onoma(entry: &TerminologicalEntry, profile: OnomaProfile) -> ValidationReport {
    validate_entry_at(entry, profile, entry_path(0))
}

/// Validates every entry of the base plus base-level id uniqueness.
pub fn validate_termbase(base: &TermBase, profile: OnomaProfile) -> ValidationReport {
    let mut findings = Vec::new();
    let mut seen = HashSet::new();
    for (i, entry) in base.entries.iter().enumerate() {
        let path = entry_path(i);
        findings.extend(validate_entry_at(entry, profile, path.clone()).into_findings());
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
    entry: &TerminologicalEntry,
    profile: OnomaProfile,
    path: DocPath,
) -> ValidationReport {
    let mut findings = Vec::new();
    if entry.languages.is_empty() {
        findings.push(Finding::error(
            Code::MissingLangSection,
            path.clone(),
            "terminological entry has no language section",
        ));
    }
    let mut langs = HashSet::new();
    for (si, section) in entry.languages.iter().enumerate() {
        let spath = section_path(&path, entry, si);
        if !langs.insert(&section.lang) {
            findings.push(Finding::error(
                Code::DuplicateLang,
                spath.clone(),
                format!("second language section for {}", section.lang),
            ));
        }
        if section.terms.is_empty() {
            findings.push(Finding::error(
                Code::MissingTermSection,
                spath.clone(),
                format!("language section {} has no term section", section.lang),
            ));
        }
        for (ti, term) in section.terms.iter().enumerate() {
            if term.term.trim().is_empty() {
                findings.push(Finding::error(
                    Code::EmptyTerm,
                    tig_path(&spath, section, ti).child("term", 1, 0),
                    "term section without term text",
                ));
            }
        }
    }

    if profile == OnomaProfile::Recommended {
        if entry.category("subjectField").is_none() {
            findings.push(Finding::warning(
                Code::MissingSubjectField,
                path.clone(),
                "no concept-level subjectField",
            ));
        }
        let language_level_definition = entry
            .languages
            .iter()
            .any(|s| find_category(&s.categories, "definition").is_some());
        if entry.category("definition").is_none() && !language_level_definition {
            findings.push(Finding::warning(
                Code::MissingDefinition,
                path.clone(),
                "no definition at concept or language level",
            ));
        }
        let mut lacking = Vec::new();
        let mut first = None;
        for (si, section) in entry.languages.iter().enumerate() {
            for (ti, term) in section.terms.iter().enumerate() {
                if term.category("partOfSpeech").is_none() {
                    first.get_or_insert_with(|| {
                        tig_path(&section_path(&path, entry, si), section, ti)
                    });
                    lacking.push(format!("{}:{}", section.lang, term.term));
                }
            }
        }
        if let Some(first) = first {
            findings.push(Finding::warning(
                Code::MissingPartOfSpeech,
                first,
                format!(
                    "{} term section(s) without partOfSpeech: {}",
                    lacking.len(),
                    lacking.join(", ")
                ),
            ));
        }
    }
    ValidationReport::from_findings(findings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{self, arb_termbase, TermBaseShape};
    use proptest::prelude::*;

    fn lang(tag: &str) -> LangCode {
        LangCode::new(tag).unwrap()
    }

    #[test]
    fn data_category_rejects_structural_and_bad_values() {
        assert_eq!(
            DataCategory::new("term", "x"),
            Err(ModelError::StructuralCategory("term".into()))
        );
        assert_eq!(
            DataCategory::new("language", "fr"),
            Err(ModelError::StructuralCategory("language".into()))
        );
        assert_eq!(
            DataCategory::new("", "x"),
            Err(ModelError::EmptyCategoryKey)
        );
        assert!(DataCategory::new("definition", " ").is_err());
        assert!(DataCategory::new("administrativeStatus", "bestTerm").is_err());
        assert!(DataCategory::new("administrativeStatus", "admittedTerm").is_ok());
        let custom = DataCategory::new("x-projectCode", "A17").unwrap();
        assert!(!custom.is_registered());
        assert_eq!(custom.key(), "x-projectCode");
    }

    #[test]
    fn data_category_json_is_validated() {
        let ok: DataCategory =
            serde_json::from_str(r#"{"key":"subjectField","value":"Biomédical","lang":"FR"}"#)
                .unwrap();
        assert_eq!(ok.lang(), Some(&lang("fr")));
        assert!(serde_json::from_str::<DataCategory>(r#"{"key":"term","value":"x"}"#).is_err());
    }

    #[test]
    fn email_synonyms_and_equivalents() {
        let entry = testing::email_entry();
        assert_eq!(synonyms(&entry, &lang("en")), vec!["e-mail"]);
        assert_eq!(
            equivalents(&entry, &lang("en"), &lang("fr")).unwrap(),
            vec![("e-mail", "courriel")]
        );
        assert_eq!(
            equivalents(&entry, &lang("en"), &lang("en")),
            Err(QueryError::SameLanguage(lang("en")))
        );
    }

    #[test]
    fn pascal_synonyms() {
        let entry = testing::pascal_entry();
        assert_eq!(
            synonyms(&entry, &lang("fr")),
            vec![
                "Acide 1,2-dithiolane-3-valérique",
                "«1,2»-Dithiolane-«3»-valérique acide",
                "Acide α-lipoïque",
                "Acide thiocétique",
            ]
        );
        assert!(synonyms(&entry, &lang("de")).is_empty());
        let pairs = equivalents(&entry, &lang("fr"), &lang("en")).unwrap();
        assert_eq!(pairs.len(), 4);
        assert!(pairs.iter().all(|(_, en)| *en == "Thioctic acid"));
    }

    #[test]
    fn validate_minimal_and_recommended() {
        let entry = testing::email_entry();
        assert!(validate_onoma(&entry, OnomaProfile::Minimal).is_empty());
        let report = validate_onoma(&entry, OnomaProfile::Recommended);
        assert_eq!(
            report.codes(),
            vec![
                Code::MissingDefinition,
                Code::MissingSubjectField,
                Code::MissingPartOfSpeech
            ]
        );
        assert_eq!(report.count(crate::report::Severity::Warning), 3);
        assert_eq!(
            report.findings()[2].path.to_string(),
            "termEntry[1]/langSet[1]/tig[1]"
        );
    }

    #[test]
    fn missing_term_section_is_an_error() {
        let entry = TerminologicalEntry::new().with_section(LanguageSection::new(lang("de")));
        let report = validate_onoma(&entry, OnomaProfile::Minimal);
        assert_eq!(report.codes(), vec![Code::MissingTermSection]);
        assert!(report.has_errors());
        assert_eq!(
            report.findings()[0].path.to_string(),
            "termEntry[1]/langSet[1]"
        );
    }

    #[test]
    fn duplicate_language_and_empty_entry() {
        let entry = TerminologicalEntry::new()
            .with_section(LanguageSection::new(lang("fr")).with_term(TermSection::new("a")))
            .with_section(LanguageSection::new(lang("FR")).with_term(TermSection::new("")));
        let report = validate_onoma(&entry, OnomaProfile::Minimal);
        assert_eq!(report.codes(), vec![Code::DuplicateLang, Code::EmptyTerm]);
        let report = validate_onoma(&TerminologicalEntry::new(), OnomaProfile::Minimal);
        assert_eq!(report.codes(), vec![Code::MissingLangSection]);
    }

    #[test]
    fn recommended_accepts_language_level_definition() {
        let entry = TerminologicalEntry::new()
            .with(DataCategory::new("subjectField", "Informatique").unwrap())
            .with_section(
                LanguageSection::new(lang("fr"))
                    .with(DataCategory::new("definition", "message électronique").unwrap())
                    .with_term(
                        TermSection::new("courriel")
                            .with(DataCategory::new("partOfSpeech", "noun").unwrap()),
                    ),
            );
        assert!(validate_onoma(&entry, OnomaProfile::Recommended).is_empty());
    }

    #[test]
    fn absatz_polysemy() {
        let base = testing::absatz_base();
        let poly = accidental_polysemy(&base);
        assert_eq!(poly.len(), 1);
        assert_eq!(
            poly.get(&(lang("de"), "Absatz".to_string())).unwrap(),
            &vec!["e1".to_string(), "e2".into(), "e3".into(), "e4".into()]
        );
        let index = index_by_term(&base, &lang("de"));
        assert_eq!(index.len(), 1);
        assert_eq!(index["Absatz"].len(), 4);
    }

    #[test]
    fn polysemy_needs_two_entries() {
        let single = TermBase::new(vec![testing::absatz_base().entries[0].clone()]);
        assert!(accidental_polysemy(&single).is_empty());
        let distinct = TermBase::new(vec![testing::email_entry(), testing::pascal_entry()]);
        assert!(accidental_polysemy(&distinct).is_empty());
    }

    #[test]
    fn polysemy_is_case_sensitive_by_default() {
        let entry = |t: &str| {
            TerminologicalEntry::new()
                .with_section(LanguageSection::new(lang("en")).with_term(TermSection::new(t)))
        };
        let base = TermBase::new(vec![entry("pH"), entry("PH")]);
        assert!(accidental_polysemy(&base).is_empty());
        let folded = accidental_polysemy_with(
            &base,
            TermMatch {
                case_insensitive: true,
            },
        );
        assert_eq!(
            folded.get(&(lang("en"), "pH".to_string())).unwrap(),
            &vec!["entry-1", "entry-2"]
        );
    }

    #[test]
    fn polysemy_compares_under_nfc() {
        let entry = |t: &str| {
            TerminologicalEntry::new()
                .with_section(LanguageSection::new(lang("fr")).with_term(TermSection::new(t)))
        };
        let base = TermBase::new(vec![entry("caf\u{e9}"), entry("cafe\u{301}")]);
        assert_eq!(accidental_polysemy(&base).len(), 1);
    }

    #[test]
    fn index_examples() {
        let base = TermBase::new(vec![testing::pascal_entry()]);
        let index = index_by_term(&base, &lang("en"));
        assert_eq!(index.len(), 1);
        assert_eq!(index["Thioctic acid"], vec!["BV.122497".to_string()]);
        assert!(index_by_term(&TermBase::default(), &lang("en")).is_empty());
    }

    #[test]
    fn positional_ids_avoid_explicit_ones() {
        let e = |id: Option<&str>| TerminologicalEntry {
            id: id.map(str::to_string),
            ..testing::email_entry()
        };
        let base = TermBase::new(vec![e(None), e(Some("entry-1"))]);
        assert_eq!(base.entry_ids(), vec!["entry-1.1", "entry-1"]);
    }

    fn brute_force_polysemy(base: &TermBase) -> PolysemyMap {
        let ids = base.entry_ids();
        let mut out = PolysemyMap::new();
        for (i, a) in base.entries.iter().enumerate() {
            for sa in &a.languages {
                for ta in &sa.terms {
                    let mut holders = Vec::new();
                    for (j, b) in base.entries.iter().enumerate() {
                        let found = b
                            .languages
                            .iter()
                            .filter(|sb| sb.lang == sa.lang)
                            .flat_map(|sb| &sb.terms)
                            .any(|tb| nfc(&tb.term) == nfc(&ta.term));
                        if found {
                            holders.push(ids[j].clone());
                        }
                    }
                    if holders.len() >= 2 && holders[0] == ids[i] {
                        out.insert((sa.lang.clone(), nfc(&ta.term)), holders);
                    }
                }
            }
        }
        out
    }

    fn structural_oracle(entry: &TerminologicalEntry) -> bool {
        fn sections_ok(sections: &[LanguageSection], seen: &mut Vec<LangCode>) -> bool {
            match sections.split_first() {
                None => true,
                Some((first, rest)) => {
                    let ok = !first.terms.is_empty()
                        && first.terms.iter().all(|t| !t.term.trim().is_empty())
                        && !seen.contains(&first.lang);
                    seen.push(first.lang.clone());
                    ok && sections_ok(rest, seen)
                }
            }
        }
        !entry.languages.is_empty() && sections_ok(&entry.languages, &mut Vec::new())
    }

    proptest! {
        #[test]
        fn cartesian_product_law(base in arb_termbase(TermBaseShape::default())) {
            for entry in &base.entries {
                for a in &entry.languages {
                    for b in &entry.languages {
                        if a.lang == b.lang { continue; }
                        let pairs = equivalents(entry, &a.lang, &b.lang).unwrap();
                        prop_assert_eq!(pairs.len(), synonyms(entry, &a.lang).len() * synonyms(entry, &b.lang).len());
                    }
                }
            }
        }

        #[test]
        fn polysemy_matches_brute_force(base in arb_termbase(TermBaseShape { small_vocabulary: true, ..TermBaseShape::default() })) {
            prop_assert_eq!(accidental_polysemy(&base), brute_force_polysemy(&base));
        }

        #[test]
        fn polysemy_keys_are_index_keys_with_two_ids(base in arb_termbase(TermBaseShape { small_vocabulary: true, ..TermBaseShape::default() })) {
            let poly = accidental_polysemy(&base);
            let mut expected = PolysemyMap::new();
            for lang in base.languages() {
                for (term, ids) in index_by_term(&base, &lang) {
                    if ids.len() >= 2 {
                        expected.insert((lang.clone(), term), ids);
                    }
                }
            }
            prop_assert_eq!(poly, expected);
        }

        #[test]
        fn minimal_profile_matches_structural_oracle(entry in testing::arb_any_entry()) {
            let accepted = validate_onoma(&entry, OnomaProfile::Minimal).is_empty();
            prop_assert_eq!(accepted, structural_oracle(&entry));
        }

        #[test]
        fn no_term_category_survives_construction(
            key in prop_oneof![Just("term".to_string()), Just("language".to_string()), "[a-zA-Z]{1,10}"],
            value in "[a-z]{1,5}",
        ) {
            match DataCategory::new(key.clone(), value) {
                Ok(cat) => prop_assert!(!STRUCTURAL_KEYS.contains(&cat.key())),
                Err(e) => prop_assert_eq!(e, ModelError::StructuralCategory(key)),
            }
        }
    }
}
