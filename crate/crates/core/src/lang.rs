//! A loaded language component: phoneme set, compiled lexicon, G2P fallback,
//! and the onset inventory used by syllabification.

use crate::error::{Error, Result};
use crate::fst::{fst_lookup, PronunciationFst};
use crate::g2p::G2pModel;
use crate::phoneset::PhonemeSet;
use crate::syllable::OnsetInventory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PronunciationSource {
    Lexicon,
    G2p,
}

#[derive(Debug, Clone)]
pub struct LanguageComponent {
    pub phoneme_set: PhonemeSet,
    pub fst: PronunciationFst,
    pub g2p: G2pModel,
    pub onsets: OnsetInventory,
}

impl LanguageComponent {
    pub fn in_lexicon(&self, word: &str) -> bool {
        fst_lookup(&self.fst, word).is_some()
    }

    /// Lexicon lookup with G2P fallback. G2P output carries stress on its
    /// first vowel.
    pub fn phonemise(&self, word: &str) -> Result<(Vec<String>, Vec<u8>, PronunciationSource)> {
        phonemise(word, &self.fst, &self.g2p, &self.phoneme_set)
    }
}

pub fn phonemise(
    word: &str,
    fst: &PronunciationFst,
    g2p: &G2pModel,
    ps: &PhonemeSet,
) -> Result<(Vec<String>, Vec<u8>, PronunciationSource)> {
    let word = word.trim();
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some((phones, stress)) = fst_lookup(fst, word) {
        return Ok((phones, stress, PronunciationSource::Lexicon));
    }
    let phones = g2p.predict(word);
    if phones.is_empty() {
        return Err(Error::Unpronounceable { word: word.into() });
    }
    let mut stress = vec![0u8; phones.len()];
    if let Some(first_vowel) = phones.iter().position(|p| ps.is_vowel(p)) {
        stress[first_vowel] = 1;
    }
    Ok((phones, stress, PronunciationSource::G2p))
}
