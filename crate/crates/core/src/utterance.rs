//! Utterance structure: tokens, words, syllables, and the flat segment list
//! that the voice-building and synthesis stages consume.

use crate::error::Result;
use crate::lang::{LanguageComponent, PronunciationSource};
use crate::syllable::syllabify;
use crate::textproc::{normalize_token, tokenize, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub token_index: usize,
    pub text: String,
    pub phones: Vec<String>,
    pub stress: Vec<u8>,
    pub source: PronunciationSource,
    /// Half-open syllable index range within `Utterance::syllables`.
    pub syllables: (usize, usize),
    /// Half-open segment index range within `Utterance::segments`.
    pub segments: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyllableSpan {
    /// Half-open segment index range.
    pub start: usize,
    pub end: usize,
    pub nucleus: usize,
    pub stressed: bool,
    pub word: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub phone: String,
    pub syllable: usize,
    pub word: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub text: String,
    pub tokens: Vec<Token>,
    pub words: Vec<Word>,
    pub syllables: Vec<SyllableSpan>,
    pub segments: Vec<Segment>,
    /// Segment indices after which a phrase boundary falls (from `, ; :`);
    /// the sentence end is an implicit final boundary.
    pub phrase_boundaries: Vec<usize>,
}

impl Utterance {
    pub fn phones(&self) -> Vec<String> {
        self.segments.iter().map(|s| s.phone.clone()).collect()
    }
}

/// Full text analysis: tokenize, normalize, phonemise, syllabify.
pub fn analyze(text: &str, lang: &LanguageComponent) -> Result<Utterance> {
    let tokens = tokenize(text);
    let in_lexicon = |w: &str| lang.in_lexicon(w);

    let mut words: Vec<Word> = Vec::new();
    let mut syllables: Vec<SyllableSpan> = Vec::new();
    let mut segments: Vec<Segment> = Vec::new();
    let mut phrase_boundaries: Vec<usize> = Vec::new();
    let mut normalized_tokens = tokens.clone();

    for (token_index, token) in tokens.iter().enumerate() {
        if token.kind == TokenKind::Punctuation {
            let is_phrase_break = token.surface.chars().any(|c| matches!(c, ',' | ';' | ':'));
            if is_phrase_break && !segments.is_empty() {
                let boundary = segments.len() - 1;
                if phrase_boundaries.last() != Some(&boundary) {
                    phrase_boundaries.push(boundary);
                }
            }
            normalized_tokens[token_index].normalized.clear();
            continue;
        }
        let expansion = normalize_token(token, &in_lexicon)?;
        normalized_tokens[token_index].normalized = expansion.clone();
        for word_text in expansion {
            let (phones, stress, source) = lang.phonemise(&word_text)?;
            let word_sylls = syllabify(&phones, &stress, &lang.phoneme_set, &lang.onsets)?;
            let word_index = words.len();
            let seg_base = segments.len();
            let syll_base = syllables.len();
            for (si, syll) in word_sylls.iter().enumerate() {
                syllables.push(SyllableSpan {
                    start: seg_base + syll.start,
                    end: seg_base + syll.end,
                    nucleus: seg_base + syll.nucleus,
                    stressed: syll.stressed,
                    word: word_index,
                });
                for pi in syll.start..syll.end {
                    segments.push(Segment {
                        phone: phones[pi].clone(),
                        syllable: syll_base + si,
                        word: word_index,
                    });
                }
            }
            words.push(Word {
                token_index,
                text: word_text,
                phones,
                stress,
                source,
                syllables: (syll_base, syllables.len()),
                segments: (seg_base, segments.len()),
            });
        }
    }

    Ok(Utterance {
        text: text.to_string(),
        tokens: normalized_tokens,
        words,
        syllables,
        segments,
        phrase_boundaries,
    })
}
