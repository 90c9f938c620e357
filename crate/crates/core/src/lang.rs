use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// A case-normalized language tag such as `en`, `fr` or `fr-CA`.
///
/// The primary subtag is lowercased, two-letter alphabetic subtags are
/// treated as regions and uppercased, four-letter alphabetic subtags as
/// scripts and titlecased. `_` is accepted as a separator on input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LangCode(String);

impl LangCode {
    /// The undetermined language (`und`).
    pub fn undetermined() -> Self {
        LangCode("und".to_string())
    }

    pub fn new(tag: &str) -> Result<Self, ModelError> {
        let invalid = || ModelError::InvalidLang(tag.to_string());
        let mut parts = tag.split(['-', '_']);
        let primary = parts.next().ok_or_else(invalid)?;
        if !(2..=3).contains(&primary.len()) || !primary.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(invalid());
        }
        let mut normalized = primary.to_ascii_lowercase();
        for sub in parts {
            if !(2..=8).contains(&sub.len()) || !sub.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(invalid());
            }
            normalized.push('-');
            let alphabetic = sub.chars().all(|c| c.is_ascii_alphabetic());
            match sub.len() {
                2 if alphabetic => normalized.push_str(&sub.to_ascii_uppercase()),
                4 if alphabetic => {
                    normalized.push_str(&sub[..1].to_ascii_uppercase());
                    normalized.push_str(&sub[1..].to_ascii_lowercase());
                }
                _ => normalized.push_str(&sub.to_ascii_lowercase()),
            }
        }
        Ok(LangCode(normalized))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The primary subtag, e.g. `fr` for `fr-CA`.
    pub fn primary(&self) -> &str {
        self.0.split('-').next().unwrap_or(&self.0)
    }
}

impl fmt::Display for LangCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for LangCode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LangCode::new(s)
    }
}

impl TryFrom<String> for LangCode {
    type Error = ModelError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        LangCode::new(&value)
    }
}

impl From<LangCode> for String {
    fn from(value: LangCode) -> Self {
        value.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_case() {
        assert_eq!(LangCode::new("FR").unwrap().as_str(), "fr");
        assert_eq!(LangCode::new("fr_ca").unwrap().as_str(), "fr-CA");
        assert_eq!(LangCode::new("zh-hant-tw").unwrap().as_str(), "zh-Hant-TW");
        assert_eq!(LangCode::new("de-1996").unwrap().as_str(), "de-1996");
        assert_eq!(LangCode::new("EN"), LangCode::new("en"));
    }

    #[test]
    fn regional_variants_are_distinct() {
        assert_ne!(
            LangCode::new("fr").unwrap(),
            LangCode::new("fr-CA").unwrap()
        );
        assert_eq!(LangCode::new("fr-CA").unwrap().primary(), "fr");
    }

    #[test]
    fn rejects_malformed_tags() {
        for bad in ["", "f", "français", "en-", "en-x", "12", "en-toolongsubtag"] {
            assert!(LangCode::new(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn serde_goes_through_validation() {
        let lang: LangCode = serde_json::from_str("\"EN-gb\"").unwrap();
        assert_eq!(lang.as_str(), "en-GB");
        assert!(serde_json::from_str::<LangCode>("\"\"").is_err());
    }
}
