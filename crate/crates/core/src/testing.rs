//! Fixture builders and proptest strategies shared by unit tests, the
//! integration suites and downstream crates (feature `test-dependencies`).

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::subsequence;

use crate::lang::LangCode;
use crate::onoma::{DataCategory, LanguageSection, TermBase, TermSection, TerminologicalEntry};
use crate::sema::{
    Context, ContextType, Definition, Equivalent, Form, FormRepresentation, FormType,
    GrammaticalInfo, LexicalEntry, Lexicon, RepresentationKind, Sense, UsageMarker, UsageType,
};

fn lang(tag: &str) -> LangCode {
    LangCode::new(tag).expect("fixture language tag")
}

fn cat(key: &str, value: &str) -> DataCategory {
    DataCategory::new(key, value).expect("fixture category")
}

/// The minimal e-mail/courriel entry.
pub fn email_entry() -> TerminologicalEntry {
    TerminologicalEntry::new()
        .with_id("c5")
        .with_section(LanguageSection::new(lang("en")).with_term(TermSection::new("e-mail")))
        .with_section(LanguageSection::new(lang("fr")).with_term(TermSection::new("courriel")))
}

/// The PASCAL lipoic-acid entry, as read from `fixtures/pascal.tbx`.
pub fn pascal_entry() -> TerminologicalEntry {
    let tig = |term: &str, id: &str, status: Option<&str>| {
        let section = TermSection::new(term).with(cat("termIdentifier", id));
        match status {
            Some(s) => section.with(cat("administrativeStatus", s)),
            None => section,
        }
    };
    TerminologicalEntry::new()
        .with(cat(
            "originatingDatabaseName",
            "Vocabulaire multidisciplinaire PASCAL",
        ))
        .with(cat("subjectField", "Biomédical").with_lang(lang("fr")))
        .with(cat("conceptIdentifier", "BV.122497"))
        .with(cat("conceptOrigin", "INIST"))
        .with_section(
            LanguageSection::new(lang("fr"))
                .with_term(tig(
                    "Acide 1,2-dithiolane-3-valérique",
                    "BV.122497.1",
                    Some("preferredTerm"),
                ))
                .with_term(tig(
                    "«1,2»-Dithiolane-«3»-valérique acide",
                    "BV.122497.2",
                    Some("deprecatedTerm"),
                ))
                .with_term(tig("Acide α-lipoïque", "BV.122497.3", None))
                .with_term(tig("Acide thiocétique", "BV.122497.4", None)),
        )
        .with_section(LanguageSection::new(lang("en")).with_term(tig(
            "Thioctic acid",
            "BV.122497.5",
            Some("preferredTerm"),
        )))
}

/// Four concepts sharing the German term "Absatz", as in `fixtures/absatz.tbx`.
pub fn absatz_base() -> TermBase {
    let concepts = [
        ("e1", "Typografie", "paragraph"),
        ("e2", "Handel", "sales"),
        ("e3", "Chemie", "deposit"),
        ("e4", "Schuhmacherei", "heel"),
    ];
    TermBase::new(
        concepts
            .iter()
            .map(|(id, field, en)| {
                TerminologicalEntry::new()
                    .with_id(*id)
                    .with(cat("subjectField", field))
                    .with_section(
                        LanguageSection::new(lang("de")).with_term(TermSection::new("Absatz")),
                    )
                    .with_section(LanguageSection::new(lang("en")).with_term(TermSection::new(*en)))
            })
            .collect(),
    )
}

/// The poussin entry, as read from `fixtures/poussin.xml`.
pub fn poussin_entry() -> LexicalEntry {
    let def = |text: &str| Definition::new(text);
    let def_n = |text: &str, n: &str| Definition {
        attributes: vec![("n".into(), n.into())],
        ..Definition::new(text)
    };

    let mut s1 = Sense::labelled("1");
    s1.definitions.push(def(
        "Jeune poulet, nouvellement sorti de l'oeuf, encore couvert de duvet.",
    ));
    s1.contexts
        .push(Context::example("La poule et ses poussins."));

    let mut s2 = Sense::labelled("2");
    s2.usages.push(UsageMarker::new(UsageType::Dom, "Zool."));
    s2.definitions
        .push(def("Jeune oiseau (par rapport aux adultes, aux parents)"));

    let mut s31 = Sense::labelled("3.1");
    s31.usages
        .push(UsageMarker::new(UsageType::Register, "Fam."));
    s31.definitions.push(def("Terme d'affection (enfant)"));

    let mut s32 = Sense::labelled("3.2");
    s32.usages.push(UsageMarker::new(UsageType::Dom, "Sports"));
    s32.definitions.push(def_n(
        "Catégorie d'âge (9 ans) qui précède celle des benjamins",
        "2",
    ));

    let mut s33 = Sense::new();
    s33.definitions.push(def_n(
        "Elève de première année dans certaines écoles (Air, Aéronautique)",
        "3",
    ));

    let mut s3 = Sense::labelled("3");
    s3.usages
        .push(UsageMarker::new(UsageType::Dom, "êtres humains"));
    s3.subsenses = vec![s31, s32, s33];

    LexicalEntry {
        id: None,
        forms: vec![Form::new(FormType::Unspecified)
            .with(FormRepresentation::orthography("poussin"))
            .with(FormRepresentation::new(
                RepresentationKind::Pronunciation,
                "pusë",
            ))],
        gram: Some(GrammaticalInfo {
            pos: Some("n.".into()),
            gender: Some("m.".into()),
            other: Vec::new(),
        }),
        senses: vec![s1, s2, s3],
    }
}

pub fn poussin_lexicon() -> Lexicon {
    Lexicon {
        lang: lang("fr"),
        entries: vec![poussin_entry()],
        metadata: Vec::new(),
    }
}

const LANGS: &[&str] = &["en", "fr", "de", "es", "fr-CA"];

/// Text that survives XML round trips and is NFC-stable.
pub fn arb_text() -> impl Strategy<Value = String> {
    "[A-Za-zéàöüßα«»0-9][A-Za-zéàöüßα«»0-9 ,.'()-]{0,14}"
}

fn arb_name() -> impl Strategy<Value = String> {
    "[a-z][a-zA-Z]{0,8}"
}

#[derive(Debug, Clone, Copy)]
pub struct TermBaseShape {
    pub max_entries: usize,
    pub max_languages: usize,
    pub max_terms: usize,
    /// Draw terms from a handful of words so that collisions are common.
    pub small_vocabulary: bool,
}

impl Default for TermBaseShape {
    fn default() -> Self {
        TermBaseShape {
            max_entries: 5,
            max_languages: 3,
            max_terms: 4,
            small_vocabulary: false,
        }
    }
}

fn arb_term(small: bool) -> BoxedStrategy<String> {
    if small {
        prop::sample::select(vec!["Absatz", "pH", "PH", "bank", "Bank", "café"])
            .prop_map(str::to_string)
            .boxed()
    } else {
        arb_text().boxed()
    }
}

fn arb_concept_category() -> impl Strategy<Value = DataCategory> {
    prop_oneof![
        (arb_text(), prop::option::of(prop::sample::select(LANGS))).prop_map(|(v, l)| {
            let c = cat("definition", &v);
            match l {
                Some(l) => c.with_lang(lang(l)),
                None => c,
            }
        }),
        arb_text().prop_map(|v| cat("subjectField", &v)),
        arb_text().prop_map(|v| cat("conceptOrigin", &v)),
        (arb_name(), arb_text()).prop_map(|(k, v)| cat(&format!("x{k}"), &v)),
    ]
}

fn arb_term_category() -> impl Strategy<Value = DataCategory> {
    prop_oneof![
        prop::sample::select(crate::onoma::ADMINISTRATIVE_STATUS_VALUES)
            .prop_map(|v| cat("administrativeStatus", v)),
        prop::sample::select(vec!["noun", "verb", "adjective"])
            .prop_map(|v| cat("partOfSpeech", v)),
        arb_text().prop_map(|v| cat("termIdentifier", &v)),
        arb_text().prop_map(|v| cat("example", &v)),
    ]
}

fn arb_term_section(small: bool) -> impl Strategy<Value = TermSection> {
    (arb_term(small), vec(arb_term_category(), 0..3))
        .prop_map(|(term, categories)| TermSection { term, categories })
}

fn arb_entry(shape: TermBaseShape) -> impl Strategy<Value = TerminologicalEntry> {
    let langs = subsequence(LANGS.to_vec(), 1..=shape.max_languages.min(LANGS.len()));
    (
        vec(arb_concept_category(), 0..3),
        langs,
        vec(
            vec(
                arb_term_section(shape.small_vocabulary),
                1..=shape.max_terms,
            ),
            shape.max_languages,
        ),
        vec(arb_text().prop_map(|v| cat("definition", &v)), 0..2),
    )
        .prop_map(
            |(categories, langs, terms, section_cats)| TerminologicalEntry {
                id: None,
                categories,
                languages: langs
                    .iter()
                    .zip(terms)
                    .enumerate()
                    .map(|(i, (l, terms))| LanguageSection {
                        lang: lang(l),
                        terms,
                        categories: if i == 0 {
                            section_cats.clone()
                        } else {
                            Vec::new()
                        },
                    })
                    .collect(),
            },
        )
}

/// Valid bases: unique ids where present, unique languages per entry.
pub fn arb_termbase(shape: TermBaseShape) -> impl Strategy<Value = TermBase> {
    (
        vec((arb_entry(shape), any::<bool>()), 0..=shape.max_entries),
        vec(
            arb_text().prop_map(|v| cat("originatingDatabaseName", &v)),
            0..2,
        ),
    )
        .prop_map(|(entries, metadata)| TermBase {
            entries: entries
                .into_iter()
                .enumerate()
                .map(|(i, (mut entry, with_id))| {
                    if with_id {
                        entry.id = Some(format!("c{}", i + 1));
                    }
                    entry
                })
                .collect(),
            metadata,
        })
}

/// Entries that may break any structural rule.
pub fn arb_any_entry() -> impl Strategy<Value = TerminologicalEntry> {
    let term = prop::sample::select(vec!["", " ", "a", "b"]).prop_map(TermSection::new);
    let section = (
        prop::sample::select(vec!["en", "fr", "EN"]),
        vec(term, 0..3),
    )
        .prop_map(|(l, terms)| LanguageSection {
            lang: lang(l),
            terms,
            categories: Vec::new(),
        });
    vec(section, 0..4).prop_map(|languages| TerminologicalEntry {
        id: None,
        categories: Vec::new(),
        languages,
    })
}

/// Bases for the duality law: every (language, term) occurs in a single
/// entry, every entry carries concept-level definitions and only
/// definitions and subject fields are used.
pub fn arb_restricted_termbase() -> impl Strategy<Value = TermBase> {
    let entry = (
        vec(arb_text(), 1..3),
        prop::option::of(arb_text()),
        subsequence(LANGS[..3].to_vec(), 1..=3),
        vec(1usize..=4, 3),
    );
    vec(entry, 0..=5).prop_map(|entries| {
        let mut counter = 0;
        let entries = entries
            .into_iter()
            .map(|(mut defs, field, langs, sizes)| {
                let mut seen = std::collections::HashSet::new();
                defs.retain(|d| seen.insert(d.clone()));
                let mut entry = TerminologicalEntry::new();
                for d in defs {
                    entry = entry.with(cat("definition", &d));
                }
                if let Some(f) = field {
                    entry = entry.with(cat("subjectField", &f));
                }
                for (l, n) in langs.iter().zip(sizes) {
                    let mut section = LanguageSection::new(lang(l));
                    for _ in 0..n {
                        counter += 1;
                        section = section.with_term(TermSection::new(format!("t{counter}")));
                    }
                    entry = entry.with_section(section);
                }
                entry
            })
            .collect();
        TermBase::new(entries)
    })
}

#[derive(Debug, Clone, Copy)]
pub struct EntryShape {
    pub max_sense_depth: usize,
    pub max_form_depth: usize,
}

impl Default for EntryShape {
    fn default() -> Self {
        EntryShape {
            max_sense_depth: 4,
            max_form_depth: 2,
        }
    }
}

fn arb_gram() -> impl Strategy<Value = GrammaticalInfo> {
    (
        prop::option::of(prop::sample::select(vec!["n.", "v.", "adj."]).prop_map(str::to_string)),
        prop::option::of(prop::sample::select(vec!["m.", "f."]).prop_map(str::to_string)),
        vec((arb_name(), arb_text()), 0..2),
    )
        .prop_filter_map("empty grammar", |(pos, gender, other)| {
            let gram = GrammaticalInfo { pos, gender, other };
            (!gram.is_empty()).then_some(gram)
        })
}

fn arb_representation() -> impl Strategy<Value = FormRepresentation> {
    (
        prop::sample::select(vec![
            RepresentationKind::Orthography,
            RepresentationKind::Orthography,
            RepresentationKind::Pronunciation,
            RepresentationKind::Hyphenation,
            RepresentationKind::Stress,
            RepresentationKind::Syllabification,
            RepresentationKind::Transliteration,
        ]),
        arb_text(),
    )
        .prop_map(|(kind, value)| FormRepresentation { kind, value })
}

fn arb_form_type() -> impl Strategy<Value = FormType> {
    prop::sample::select(vec![
        FormType::Lemma,
        FormType::Inflected,
        FormType::Variant,
        FormType::Unspecified,
    ])
}

fn arb_form(depth: usize) -> BoxedStrategy<Form> {
    let leaf = (
        arb_form_type(),
        vec(arb_representation(), 1..3),
        prop::option::of(arb_gram()),
    )
        .prop_map(|(form_type, representations, gram)| Form {
            form_type,
            representations,
            gram,
            subforms: Vec::new(),
        });
    if depth <= 1 {
        return leaf.boxed();
    }
    (leaf, vec(arb_form(depth - 1), 0..2))
        .prop_map(|(mut form, subforms)| {
            form.subforms = subforms;
            form
        })
        .boxed()
}

fn arb_usage() -> impl Strategy<Value = UsageMarker> {
    let usage_type = prop_oneof![
        Just(UsageType::Dom),
        Just(UsageType::Time),
        Just(UsageType::Geo),
        Just(UsageType::Register),
        Just(UsageType::Style),
        "hint|colloc|freq".prop_map(UsageType::Other),
    ];
    (usage_type, arb_text()).prop_map(|(usage_type, value)| UsageMarker { usage_type, value })
}

fn arb_context() -> impl Strategy<Value = Context> {
    let context_type = prop_oneof![
        3 => Just(ContextType::Example),
        1 => Just(ContextType::Translation),
        1 => Just(ContextType::Other(String::new())),
        1 => Just(ContextType::Other("collocation".into())),
    ];
    (
        arb_text(),
        context_type,
        prop::option::of(prop::sample::select(LANGS).prop_map(lang)),
        prop::option::of(arb_text()),
    )
        .prop_map(|(quote, context_type, lang, source)| Context {
            quote,
            context_type,
            lang,
            source,
        })
}

fn arb_definition() -> impl Strategy<Value = Definition> {
    let attrs = subsequence(vec!["n", "xml:lang", "source", "resp"], 0..=2)
        .prop_flat_map(|keys| {
            let n = keys.len();
            (Just(keys), vec("[a-z0-9.]{1,4}", n))
        })
        .prop_map(|(keys, values)| {
            keys.into_iter()
                .map(str::to_string)
                .zip(values)
                .collect::<Vec<_>>()
        });
    (arb_text(), attrs).prop_map(|(text, attributes)| Definition {
        text,
        attributes,
        flattened: false,
    })
}

fn arb_sense_node() -> impl Strategy<Value = Sense> {
    (
        prop::option::of("[0-9]{1,2}(\\.[0-9])?"),
        vec(arb_definition(), 0..3),
        vec(arb_usage(), 0..3),
        vec(arb_context(), 0..2),
        vec(
            (prop::sample::select(LANGS).prop_map(lang), arb_text())
                .prop_map(|(l, t)| Equivalent::new(l, t)),
            0..2,
        ),
        prop::option::of(arb_text()),
    )
        .prop_map(
            |(label, definitions, usages, contexts, equivalents, provenance)| Sense {
                label,
                definitions,
                usages,
                contexts,
                equivalents,
                subsenses: Vec::new(),
                attributes: provenance
                    .map(|p| vec![("provenance".to_string(), p)])
                    .unwrap_or_default(),
            },
        )
}

/// Forests of up to `max_nodes` senses with nesting depth at most
/// `max_depth` and at most `fanout` subsenses per node. Nodes may be empty.
pub fn arb_sense_forest(
    max_depth: usize,
    fanout: usize,
    max_nodes: usize,
) -> impl Strategy<Value = Vec<Sense>> {
    vec(
        (arb_sense_node(), any::<prop::sample::Index>()),
        0..=max_nodes,
    )
    .prop_map(move |nodes| {
        // each node picks an earlier node as parent, or the top level when
        // the pick is full or already at the depth limit
        let mut depth: Vec<usize> = Vec::with_capacity(nodes.len());
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        let mut roots = Vec::new();
        for (i, (_, pick)) in nodes.iter().enumerate() {
            let parent = (i > 0).then(|| pick.index(i + 1)).filter(|&p| p < i);
            match parent {
                Some(p) if depth[p] < max_depth && children[p].len() < fanout => {
                    depth.push(depth[p] + 1);
                    children[p].push(i);
                }
                _ => {
                    depth.push(1);
                    roots.push(i);
                }
            }
        }
        let mut slots: Vec<Option<Sense>> = nodes.into_iter().map(|(s, _)| Some(s)).collect();
        fn build(i: usize, slots: &mut [Option<Sense>], children: &[Vec<usize>]) -> Sense {
            let mut sense = slots[i].take().expect("each node is placed once");
            sense.subsenses = children[i]
                .iter()
                .map(|&c| build(c, slots, children))
                .collect();
            sense
        }
        roots
            .iter()
            .map(|&r| build(r, &mut slots, &children))
            .collect()
    })
}

fn fill_empty_senses(senses: &mut [Sense]) {
    for sense in senses {
        fill_empty_senses(&mut sense.subsenses);
        if sense.definitions.is_empty()
            && sense.subsenses.is_empty()
            && sense.usages.is_empty()
            && sense.contexts.is_empty()
            && sense.equivalents.is_empty()
        {
            sense.definitions.push(Definition::new("définition"));
        }
    }
}

/// Entries valid under the lenient profile.
pub fn arb_lexical_entry(shape: EntryShape) -> impl Strategy<Value = LexicalEntry> {
    (
        prop::option::of("[a-z][a-z0-9]{0,6}"),
        vec(arb_form(shape.max_form_depth), 1..3),
        prop::option::of(arb_gram()),
        arb_sense_forest(shape.max_sense_depth, 3, 12),
    )
        .prop_map(|(id, forms, gram, mut senses)| {
            fill_empty_senses(&mut senses);
            LexicalEntry {
                id,
                forms,
                gram,
                senses,
            }
        })
}

/// Entries that may violate any rule of any profile.
pub fn arb_any_lexical_entry() -> impl Strategy<Value = LexicalEntry> {
    let rep = (arb_representation(), any::<bool>()).prop_map(|(mut r, blank)| {
        if blank {
            r.value = " ".into();
        }
        r
    });
    let form = (arb_form_type(), vec(rep, 0..2)).prop_map(|(form_type, representations)| Form {
        form_type,
        representations,
        gram: None,
        subforms: Vec::new(),
    });
    (vec(form, 0..3), arb_sense_forest(3, 2, 8)).prop_map(|(forms, senses)| LexicalEntry {
        id: None,
        forms,
        gram: None,
        senses,
    })
}

/// Lexica with unique entry ids.
pub fn arb_lexicon(lang_tag: &'static str) -> impl Strategy<Value = Lexicon> {
    vec(arb_lexical_entry(EntryShape::default()), 0..4).prop_map(move |entries| Lexicon {
        lang: lang(lang_tag),
        entries: entries
            .into_iter()
            .enumerate()
            .map(|(i, mut e)| {
                if e.id.is_some() {
                    e.id = Some(format!("x{}", i + 1));
                }
                e
            })
            .collect(),
        metadata: Vec::new(),
    })
}
