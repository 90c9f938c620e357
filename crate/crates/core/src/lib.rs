//! Onomasiological (TMF, serialized as TBX) and semasiological (LMF,
//! serialized as TEI) lexical models, their readers and writers, and the
//! crosswalks between them.

pub mod crosswalk;
pub mod document;
pub mod error;
pub mod lang;
pub mod onoma;
pub mod report;
pub mod sema;
pub mod tbx;
pub mod tei;
pub mod xml;

#[cfg(any(test, feature = "test-dependencies"))]
pub mod testing;

pub use crosswalk::{
    lexicon_conformance, lmf_conformance, onoma_projection, sema_projection, to_lmf_core_view,
    DefinitionPlacement, IdScheme, LossReport, ProjectionOptions,
};
pub use document::{load, Format, Loaded, ModelDocument};
pub use error::{CrosswalkError, LoadError, ModelError, ParseError, QueryError, WriteError};
pub use lang::LangCode;
pub use onoma::{
    DataCategory, LanguageSection, OnomaProfile, TermBase, TermSection, TerminologicalEntry,
};
pub use report::{Code, DocPath, Finding, Severity, ValidationReport};
pub use sema::{LexicalEntry, Lexicon, SemaProfile};
pub use tbx::{parse_tbx, write_tbx};
pub use tei::{parse_tei, write_tei, TeiDocument, TeiLayout};
pub use xml::{ParseMode, ParseOptions};
