use std::path::PathBuf;

use lexmeta_core::onoma::{accidental_polysemy, equivalents, synonyms, validate_termbase};
use lexmeta_core::sema::{lemma_of, sense_stats, LemmaSource, SenseStats};
use lexmeta_core::testing;
use lexmeta_core::{
    lmf_conformance, load, onoma_projection, parse_tbx, parse_tei, sema_projection, write_tbx,
    write_tei, Code, Format, LangCode, ModelDocument, OnomaProfile, ParseOptions,
    ProjectionOptions, TeiLayout, TermBase,
};

fn fixture(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn lang(tag: &str) -> LangCode {
    LangCode::new(tag).unwrap()
}

#[test]
fn email_fixture() {
    let outcome = parse_tbx(&fixture("email.tbx"), &ParseOptions::strict()).unwrap();
    assert!(outcome.report.is_empty());
    assert_eq!(outcome.base, TermBase::new(vec![testing::email_entry()]));
    let pairs = equivalents(&outcome.base.entries[0], &lang("fr"), &lang("en")).unwrap();
    assert_eq!(pairs, vec![("courriel", "e-mail")]);
}

#[test]
fn pascal_fixture() {
    let outcome = parse_tbx(&fixture("pascal.tbx"), &ParseOptions::strict()).unwrap();
    assert!(outcome.report.is_empty());
    assert_eq!(outcome.base, TermBase::new(vec![testing::pascal_entry()]));
    let entry = &outcome.base.entries[0];
    assert_eq!(synonyms(entry, &lang("fr")).len(), 4);
    assert_eq!(outcome.base.entry_ids(), vec!["BV.122497"]);
    let recommended = validate_termbase(&outcome.base, OnomaProfile::Recommended);
    assert_eq!(
        recommended.codes(),
        vec![Code::MissingDefinition, Code::MissingPartOfSpeech]
    );
}

#[test]
fn absatz_fixture() {
    let outcome = parse_tbx(&fixture("absatz.tbx"), &ParseOptions::strict()).unwrap();
    assert_eq!(outcome.base, testing::absatz_base());
    let polysemy = accidental_polysemy(&outcome.base);
    assert_eq!(polysemy.len(), 1);
    let ((l, surface), ids) = polysemy.into_iter().next().unwrap();
    assert_eq!((l.as_str(), surface.as_str()), ("de", "Absatz"));
    assert_eq!(ids, vec!["e1", "e2", "e3", "e4"]);
}

#[test]
fn poussin_fixture() {
    let opts = ParseOptions {
        lang: Some(lang("fr")),
        ..ParseOptions::strict()
    };
    let (doc, report) = parse_tei(&fixture("poussin.xml"), &opts).unwrap();
    assert!(report.is_empty());
    assert_eq!(doc.lexicon, testing::poussin_lexicon());
    let entry = &doc.lexicon.entries[0];
    let lemma = lemma_of(entry).unwrap();
    assert_eq!(
        (lemma.text, lemma.source),
        ("poussin", LemmaSource::Fallback)
    );
    assert_eq!(
        sense_stats(entry),
        SenseStats {
            total: 6,
            max_depth: 2,
            top_level: 3
        }
    );
    let mut codes = lmf_conformance(entry).codes();
    codes.sort();
    assert_eq!(
        codes,
        vec![
            Code::InfoGramPlacement,
            Code::LossyUsage,
            Code::NoExplicitLemma
        ]
    );
}

#[test]
fn fixtures_are_detected_by_content() {
    assert_eq!(Format::sniff(&fixture("email.tbx")), Some(Format::Tbx));
    assert_eq!(Format::sniff(&fixture("absatz.tbx")), Some(Format::Tbx));
    assert_eq!(Format::sniff(&fixture("poussin.xml")), Some(Format::Tei));
}

#[test]
fn tbx_fixtures_survive_write_and_reread() {
    for name in ["email.tbx", "pascal.tbx", "absatz.tbx"] {
        let base = parse_tbx(&fixture(name), &ParseOptions::strict())
            .unwrap()
            .base;
        let written = write_tbx(&base).unwrap();
        let reread = parse_tbx(&written, &ParseOptions::strict()).unwrap();
        assert!(reread.report.is_empty(), "{name}");
        assert_eq!(reread.base, base, "{name}");
    }
}

#[test]
fn poussin_survives_write_and_reread() {
    let loaded = load(&fixture("poussin.xml"), None, &ParseOptions::strict()).unwrap();
    let ModelDocument::TeiDocument(doc) = loaded.document else {
        panic!("expected a TEI document");
    };
    for layout in [TeiLayout::Wrapped, TeiLayout::Bare] {
        let written = write_tei(&doc, layout).unwrap();
        let (reread, _) = parse_tei(&written, &ParseOptions::strict()).unwrap();
        assert_eq!(reread, doc);
    }
}

#[test]
fn pascal_projects_to_four_french_entries() {
    let base = parse_tbx(&fixture("pascal.tbx"), &ParseOptions::strict())
        .unwrap()
        .base;
    let (lexicon, _) = sema_projection(&base, &lang("fr"), &ProjectionOptions::default()).unwrap();
    assert_eq!(lexicon.entries.len(), 4);
    let (back, _) = onoma_projection(&[lexicon], &ProjectionOptions::default()).unwrap();
    assert_eq!(back.entries.len(), 1);
    assert_eq!(
        synonyms(&back.entries[0], &lang("fr")),
        synonyms(&base.entries[0], &lang("fr"))
    );
    assert_eq!(
        synonyms(&back.entries[0], &lang("en")),
        vec!["Thioctic acid"]
    );
}

#[test]
fn json_dump_round_trips_every_fixture() {
    for name in ["email.tbx", "pascal.tbx", "absatz.tbx", "poussin.xml"] {
        let loaded = load(&fixture(name), None, &ParseOptions::strict()).unwrap();
        let json = loaded.document.to_json();
        let again = load(json.as_bytes(), Some(Format::Json), &ParseOptions::strict()).unwrap();
        assert_eq!(again.document, loaded.document, "{name}");
        assert_eq!(again.document.to_json(), json, "{name}");
    }
}
