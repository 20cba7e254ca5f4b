//! Phoneme inventory: parsing and validation of phoneme set files.
//!
//! File format, one phoneme per line:
//!
//! ```text
//! # comment
//! _  silence
//! a  vowel      length=short height=low frontness=central rounding=unrounded
//! t  consonant  manner=stop place=alveolar voicing=voiceless
//! ```
//!
//! An optional `ipa=<string>` pair may appear on any line; it defaults to the
//! symbol itself. Vowels must define all four vowel features, consonants all
//! three consonant features, and silence none.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhonemeKind {
    Vowel,
    Consonant,
    Silence,
}

impl PhonemeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhonemeKind::Vowel => "vowel",
            PhonemeKind::Consonant => "consonant",
            PhonemeKind::Silence => "silence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phoneme {
    pub symbol: String,
    pub ipa: String,
    pub kind: PhonemeKind,
    /// Phonological feature bundle, keyed by feature name.
    pub features: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeSet {
    pub language: String,
    pub phonemes: Vec<Phoneme>,
    pub silence_symbol: String,
}

pub const VOWEL_FEATURES: [&str; 4] = ["length", "height", "frontness", "rounding"];
pub const CONSONANT_FEATURES: [&str; 3] = ["manner", "place", "voicing"];

fn allowed_values(feature: &str) -> Option<&'static [&'static str]> {
    match feature {
        "length" => Some(&["short", "long", "schwa", "diphthong"]),
        "height" => Some(&["high", "mid", "low"]),
        "frontness" => Some(&["front", "central", "back"]),
        "rounding" => Some(&["rounded", "unrounded"]),
        "manner" => Some(&[
            "stop",
            "fricative",
            "affricate",
            "nasal",
            "liquid",
            "glide",
        ]),
        "place" => Some(&[
            "bilabial",
            "labiodental",
            "dental",
            "alveolar",
            "postalveolar",
            "retroflex",
            "palatal",
            "velar",
            "uvular",
            "glottal",
        ]),
        "voicing" => Some(&["voiced", "voiceless"]),
        _ => None,
    }
}

/// Every feature name that can occur in any phoneme, in schema order.
pub fn all_feature_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = VOWEL_FEATURES
        .iter()
        .chain(CONSONANT_FEATURES.iter())
        .copied()
        .collect();
    names.sort_unstable();
    names
}

impl PhonemeSet {
    pub fn get(&self, symbol: &str) -> Option<&Phoneme> {
        self.phonemes.iter().find(|p| p.symbol == symbol)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.get(symbol).is_some()
    }

    pub fn is_vowel(&self, symbol: &str) -> bool {
        self.get(symbol)
            .map(|p| p.kind == PhonemeKind::Vowel)
            .unwrap_or(false)
    }

    pub fn is_silence(&self, symbol: &str) -> bool {
        self.get(symbol)
            .map(|p| p.kind == PhonemeKind::Silence)
            .unwrap_or(false)
    }

    pub fn vowels(&self) -> impl Iterator<Item = &Phoneme> {
        self.phonemes
            .iter()
            .filter(|p| p.kind == PhonemeKind::Vowel)
    }
}

/// Parse a phoneme set file. `language` is carried through verbatim.
pub fn parse_phoneme_set(text: &str, language: &str) -> Result<PhonemeSet> {
    let mut phonemes: Vec<Phoneme> = Vec::new();
    let mut silence_symbol: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let symbol = tokens.next().unwrap().to_string();
        if phonemes.iter().any(|p| p.symbol == symbol) {
            return Err(Error::DuplicateSymbol {
                line: line_no,
                symbol,
            });
        }
        let kind_str = tokens.next().ok_or_else(|| Error::MalformedPhonemeLine {
            line: line_no,
            reason: "missing kind".into(),
        })?;
        let kind = match kind_str {
            "vowel" => PhonemeKind::Vowel,
            "consonant" => PhonemeKind::Consonant,
            "silence" => PhonemeKind::Silence,
            other => {
                return Err(Error::MalformedPhonemeLine {
                    line: line_no,
                    reason: format!("unknown kind `{other}`"),
                })
            }
        };

        let mut ipa = symbol.clone();
        let mut features = BTreeMap::new();
        for pair in tokens {
            let (key, value) = pair.split_once('=').ok_or_else(|| Error::MalformedPhonemeLine {
                line: line_no,
                reason: format!("expected key=value, found `{pair}`"),
            })?;
            if key == "ipa" {
                ipa = value.to_string();
                continue;
            }
            let allowed_for_kind: &[&str] = match kind {
                PhonemeKind::Vowel => &VOWEL_FEATURES,
                PhonemeKind::Consonant => &CONSONANT_FEATURES,
                PhonemeKind::Silence => &[],
            };
            if !allowed_for_kind.contains(&key) {
                return Err(Error::UnknownFeature {
                    line: line_no,
                    kind: kind.as_str(),
                    symbol,
                    feature: key.to_string(),
                });
            }
            let allowed = allowed_values(key).expect("feature has a vocabulary");
            if !allowed.contains(&value) {
                return Err(Error::UnknownFeatureValue {
                    line: line_no,
                    feature: key.to_string(),
                    value: value.to_string(),
                });
            }
            features.insert(key.to_string(), value.to_string());
        }

        let required: &[&str] = match kind {
            PhonemeKind::Vowel => &VOWEL_FEATURES,
            PhonemeKind::Consonant => &CONSONANT_FEATURES,
            PhonemeKind::Silence => &[],
        };
        for feature in required {
            if !features.contains_key(*feature) {
                return Err(Error::MissingFeature {
                    line: line_no,
                    kind: kind.as_str(),
                    symbol,
                    feature,
                });
            }
        }

        if kind == PhonemeKind::Silence && silence_symbol.is_none() {
            silence_symbol = Some(symbol.clone());
        }
        phonemes.push(Phoneme {
            symbol,
            ipa,
            kind,
            features,
        });
    }

    let silence_symbol = silence_symbol.ok_or(Error::NoSilencePhoneme)?;
    let has_vowel = phonemes.iter().any(|p| p.kind == PhonemeKind::Vowel);
    let has_consonant = phonemes.iter().any(|p| p.kind == PhonemeKind::Consonant);
    if !has_vowel || !has_consonant {
        return Err(Error::IncompleteInventory);
    }

    Ok(PhonemeSet {
        language: language.to_string(),
        phonemes,
        silence_symbol,
    })
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "\
_ silence
a vowel length=long height=low frontness=front rounding=unrounded
t consonant manner=stop place=alveolar voicing=voiceless
";

    #[test]
    fn parses_three_line_set() {
        let ps = parse_phoneme_set(TINY, "xx").unwrap();
        assert_eq!(ps.phonemes.len(), 3);
        assert_eq!(ps.silence_symbol, "_");
        assert_eq!(ps.get("a").unwrap().kind, PhonemeKind::Vowel);
        assert_eq!(ps.get("a").unwrap().features["height"], "low");
        assert!(ps.is_silence("_"));
    }

    #[test]
    fn duplicate_symbol_names_line() {
        let text = format!("{TINY}a vowel length=short height=mid frontness=front rounding=unrounded\n");
        let err = parse_phoneme_set(&text, "xx").unwrap_err();
        match err {
            Error::DuplicateSymbol { line, symbol } => {
                assert_eq!(line, 4);
                assert_eq!(symbol, "a");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn vowel_missing_rounding_is_rejected() {
        let text = "\
_ silence
a vowel length=long height=low frontness=front
t consonant manner=stop place=alveolar voicing=voiceless
";
        let err = parse_phoneme_set(text, "xx").unwrap_err();
        match err {
            Error::MissingFeature { line, feature, .. } => {
                assert_eq!(line, 2);
                assert_eq!(feature, "rounding");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_feature_value_is_rejected() {
        let text = "\
_ silence
a vowel length=long height=tall frontness=front rounding=unrounded
t consonant manner=stop place=alveolar voicing=voiceless
";
        assert!(matches!(
            parse_phoneme_set(text, "xx").unwrap_err(),
            Error::UnknownFeatureValue { line: 2, .. }
        ));
    }

    #[test]
    fn missing_silence_is_rejected() {
        let text = "\
a vowel length=long height=low frontness=front rounding=unrounded
t consonant manner=stop place=alveolar voicing=voiceless
";
        assert!(matches!(
            parse_phoneme_set(text, "xx").unwrap_err(),
            Error::NoSilencePhoneme
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header\n\n{TINY}\n# trailing\n");
        let ps = parse_phoneme_set(&text, "xx").unwrap();
        assert_eq!(ps.phonemes.len(), 3);
    }

    #[test]
    fn ipa_defaults_to_symbol() {
        let ps = parse_phoneme_set(TINY, "xx").unwrap();
        assert_eq!(ps.get("t").unwrap().ipa, "t");
        let text = TINY.replace("t consonant", "t consonant ipa=\u{0288}");
        let ps = parse_phoneme_set(&text, "xx").unwrap();
        assert_eq!(ps.get("t").unwrap().ipa, "\u{0288}");
    }
}
