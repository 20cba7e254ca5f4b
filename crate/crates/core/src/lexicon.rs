//! Pronunciation lexicon: TSV parsing, validation against a phoneme set,
//! and the TSV writer used for round-trips and alignment dictionaries.
//!
//! Format: `grapheme<TAB>phone phone ...` with `#` comments. A trailing `1`
//! on a vowel symbol marks the stressed syllable nucleus.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::phoneset::PhonemeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub grapheme: String,
    pub phones: Vec<String>,
    /// One flag per phone; 1 marks the nucleus of a stressed syllable.
    pub stress: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    pub phoneme_set: PhonemeSet,
    entries: BTreeMap<String, LexiconEntry>,
}

impl Lexicon {
    pub fn new(phoneme_set: PhonemeSet) -> Self {
        Lexicon {
            phoneme_set,
            entries: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, grapheme: &str) -> Option<&LexiconEntry> {
        self.entries.get(grapheme)
    }

    pub fn contains(&self, grapheme: &str) -> bool {
        self.entries.contains_key(grapheme)
    }

    /// Entries in lexicographic grapheme order.
    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    /// Insert an entry; the first pronunciation of a grapheme wins.
    pub fn insert(&mut self, entry: LexiconEntry) {
        self.entries.entry(entry.grapheme.clone()).or_insert(entry);
    }
}

/// Split a raw phone token into (symbol, stress flag), stripping a trailing `1`.
fn split_stress(token: &str) -> (&str, u8) {
    match token.strip_suffix('1') {
        Some(base) if !base.is_empty() => (base, 1),
        _ => (token, 0),
    }
}

/// Parse and validate one pronunciation; shared by the lexicon parser and the
/// G2P-facing helpers.
pub fn parse_pronunciation(word: &str, tokens: &[&str], ps: &PhonemeSet) -> Result<LexiconEntry> {
    if tokens.is_empty() {
        return Err(Error::EmptyPronunciation { word: word.into() });
    }
    let mut phones = Vec::with_capacity(tokens.len());
    let mut stress = Vec::with_capacity(tokens.len());
    for token in tokens {
        let (symbol, flag) = split_stress(token);
        if !ps.contains(symbol) {
            return Err(Error::UnknownPhone {
                word: word.into(),
                phone: (*token).into(),
            });
        }
        if flag == 1 && !ps.is_vowel(symbol) {
            return Err(Error::StressOnNonVowel {
                word: word.into(),
                phone: symbol.into(),
            });
        }
        phones.push(symbol.to_string());
        stress.push(flag);
    }
    Ok(LexiconEntry {
        grapheme: word.to_lowercase(),
        phones,
        stress,
    })
}

pub fn parse_lexicon(text: &str, ps: &PhonemeSet) -> Result<Lexicon> {
    let mut lex = Lexicon::new(ps.clone());
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = crate::phoneset::strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let (grapheme, pron) = line.split_once('\t').ok_or_else(|| Error::MalformedLexiconLine {
            line: line_no,
            reason: "expected `grapheme<TAB>phones`".into(),
        })?;
        let grapheme = grapheme.trim();
        if grapheme.is_empty() {
            return Err(Error::MalformedLexiconLine {
                line: line_no,
                reason: "empty grapheme".into(),
            });
        }
        let tokens: Vec<&str> = pron.split_whitespace().collect();
        let entry = parse_pronunciation(grapheme, &tokens, ps)?;
        lex.insert(entry);
    }
    Ok(lex)
}

/// Render one pronunciation back to its TSV token form.
pub fn format_pronunciation(phones: &[String], stress: &[u8]) -> String {
    phones
        .iter()
        .zip(stress.iter())
        .map(|(p, s)| {
            if *s == 1 {
                format!("{p}1")
            } else {
                p.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// TSV writer; `parse_lexicon(serialize_lexicon(lex)) == lex`.
pub fn serialize_lexicon(lex: &Lexicon) -> String {
    let mut out = String::new();
    for entry in lex.entries() {
        out.push_str(&entry.grapheme);
        out.push('\t');
        out.push_str(&format_pronunciation(&entry.phones, &entry.stress));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phoneset::parse_phoneme_set;

    fn test_set() -> PhonemeSet {
        parse_phoneme_set(
            "\
_ silence
@ vowel length=schwa height=mid frontness=central rounding=unrounded
ou vowel length=diphthong height=mid frontness=back rounding=rounded
ae vowel length=short height=low frontness=front rounding=unrounded
h consonant manner=fricative place=glottal voicing=voiceless
l consonant manner=liquid place=alveolar voicing=voiced
k consonant manner=stop place=velar voicing=voiceless
t consonant manner=stop place=alveolar voicing=voiceless
",
            "xx",
        )
        .unwrap()
    }

    #[test]
    fn parses_stress_digits_into_flags() {
        let lex = parse_lexicon("hello\th @ l ou1\n", &test_set()).unwrap();
        let entry = lex.get("hello").unwrap();
        assert_eq!(entry.phones, vec!["h", "@", "l", "ou"]);
        assert_eq!(entry.stress, vec![0, 0, 0, 1]);
    }

    #[test]
    fn unknown_phone_names_word_and_symbol() {
        let err = parse_lexicon("cat\tk ae1 zz\n", &test_set()).unwrap_err();
        match err {
            Error::UnknownPhone { word, phone } => {
                assert_eq!(word, "cat");
                assert_eq!(phone, "zz");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_lines_collapse_to_one_entry() {
        let lex = parse_lexicon("hello\th @ l ou1\nhello\th @ l ou1\n", &test_set()).unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn homograph_first_entry_wins() {
        let lex = parse_lexicon("hello\th @ l ou1\nhello\th ae1 l ou\n", &test_set()).unwrap();
        assert_eq!(lex.get("hello").unwrap().stress, vec![0, 0, 0, 1]);
    }

    #[test]
    fn graphemes_are_lowercased() {
        let lex = parse_lexicon("Hello\th @ l ou1\n", &test_set()).unwrap();
        assert!(lex.contains("hello"));
    }

    #[test]
    fn empty_pronunciation_is_rejected() {
        assert!(matches!(
            parse_lexicon("cat\t \n", &test_set()).unwrap_err(),
            Error::EmptyPronunciation { .. }
        ));
    }

    #[test]
    fn round_trips_through_tsv() {
        let text = "cat\tk ae1 t\nhello\th @ l ou1\n";
        let ps = test_set();
        let lex = parse_lexicon(text, &ps).unwrap();
        let written = serialize_lexicon(&lex);
        let reparsed = parse_lexicon(&written, &ps).unwrap();
        assert_eq!(
            lex.entries().collect::<Vec<_>>(),
            reparsed.entries().collect::<Vec<_>>()
        );
        assert_eq!(written, serialize_lexicon(&reparsed));
    }
}
