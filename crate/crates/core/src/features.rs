//! Per-segment linguistic feature vectors.
//!
//! The schema is fixed for a corpus: phone identity, every phonological
//! feature defined by the phoneme set (features that do not apply to a
//! phone's kind carry `0`), syllable and word position counters, distances
//! to phrase and sentence boundaries, a POS stub, and the reserved `accent`
//! slot (always `0`; syllable stress is the only prominence feature).

use sha2::{Digest, Sha256};

use crate::phoneset::{all_feature_names, PhonemeSet};
use crate::utterance::Utterance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSchema {
    pub names: Vec<String>,
}

impl FeatureSchema {
    pub fn for_phoneme_set(_ps: &PhonemeSet) -> FeatureSchema {
        let mut names = vec!["phone".to_string()];
        names.extend(all_feature_names().iter().map(|n| format!("ph_{n}")));
        names.extend(
            [
                "position_in_syllable",
                "syllable_stress",
                "position_of_syllable_in_word",
                "segments_to_word_end",
                "words_to_sentence_end",
                "words_to_phrase_boundary",
                "pos_tag",
                "accent",
            ]
            .iter()
            .map(|n| n.to_string()),
        );
        FeatureSchema { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Content hash of the schema, recorded in voice manifests and verified
    /// on load.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for (i, name) in self.names.iter().enumerate() {
            if i > 0 {
                hasher.update([0x1f]);
            }
            hasher.update(name.as_bytes());
        }
        hex_string(&hasher.finalize())
    }
}

pub fn hex_string(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Values aligned to a `FeatureSchema`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVector {
    pub values: Vec<String>,
}

impl FeatureVector {
    pub fn get<'a>(&'a self, schema: &FeatureSchema, name: &str) -> Option<&'a str> {
        schema.index_of(name).map(|i| self.values[i].as_str())
    }

    /// Fraction of positions whose values differ; both vectors must share a
    /// schema.
    pub fn mismatch_fraction(&self, other: &FeatureVector) -> f64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        if self.values.is_empty() {
            return 0.0;
        }
        let mismatches = self
            .values
            .iter()
            .zip(other.values.iter())
            .filter(|(a, b)| a != b)
            .count();
        mismatches as f64 / self.values.len() as f64
    }
}

/// One vector per segment.
pub fn extract_linguistic_features(utt: &Utterance, ps: &PhonemeSet) -> Vec<FeatureVector> {
    let schema = FeatureSchema::for_phoneme_set(ps);
    let feature_names = all_feature_names();

    // Per word: distance in words to the end of its phrase. A word is
    // phrase-final if a boundary sits on its last segment, or it ends the
    // sentence.
    let mut phrase_distance = vec![0usize; utt.words.len()];
    let mut distance = 0usize;
    for (w, word) in utt.words.iter().enumerate().rev() {
        let last_segment = word.segments.1.wrapping_sub(1);
        let is_final =
            w + 1 == utt.words.len() || utt.phrase_boundaries.contains(&last_segment);
        if is_final {
            distance = 0;
        }
        phrase_distance[w] = distance;
        distance += 1;
    }

    let mut vectors = Vec::with_capacity(utt.segments.len());
    for (i, seg) in utt.segments.iter().enumerate() {
        let mut values = Vec::with_capacity(schema.len());
        values.push(seg.phone.clone());

        let phoneme = ps.get(&seg.phone);
        for name in &feature_names {
            let value = phoneme
                .and_then(|p| p.features.get(*name))
                .cloned()
                .unwrap_or_else(|| "0".to_string());
            values.push(value);
        }

        let syll = &utt.syllables[seg.syllable];
        let position_in_syllable = if i < syll.nucleus {
            "onset"
        } else if i == syll.nucleus {
            "nucleus"
        } else {
            "coda"
        };
        values.push(position_in_syllable.to_string());
        values.push(if syll.stressed { "1" } else { "0" }.to_string());

        let word = &utt.words[seg.word];
        values.push((seg.syllable - word.syllables.0).to_string());
        values.push((word.segments.1 - 1 - i).to_string());
        values.push((utt.words.len() - 1 - seg.word).to_string());
        values.push(phrase_distance[seg.word].to_string());
        values.push("x".to_string());
        values.push("0".to_string());

        debug_assert_eq!(values.len(), schema.len());
        vectors.push(FeatureVector { values });
    }
    vectors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::tests::demo_lang;
    use crate::utterance::analyze;

    #[test]
    fn single_vowel_word_boundary_case() {
        let lang = demo_lang();
        let utt = analyze("a", &lang).unwrap();
        let schema = FeatureSchema::for_phoneme_set(&lang.phoneme_set);
        let vectors = extract_linguistic_features(&utt, &lang.phoneme_set);
        assert_eq!(vectors.len(), 1);
        let v = &vectors[0];
        assert_eq!(v.get(&schema, "position_in_syllable"), Some("nucleus"));
        assert_eq!(v.get(&schema, "segments_to_word_end"), Some("0"));
        assert_eq!(v.get(&schema, "words_to_sentence_end"), Some("0"));
        assert_eq!(v.get(&schema, "pos_tag"), Some("x"));
    }

    #[test]
    fn counting_features() {
        let lang = demo_lang();
        let utt = analyze("hello world", &lang).unwrap();
        let schema = FeatureSchema::for_phoneme_set(&lang.phoneme_set);
        let vectors = extract_linguistic_features(&utt, &lang.phoneme_set);
        assert_eq!(
            vectors[0].get(&schema, "words_to_sentence_end"),
            Some("1")
        );
        assert_eq!(
            vectors.last().unwrap().get(&schema, "words_to_sentence_end"),
            Some("0")
        );
        assert_eq!(
            vectors.last().unwrap().get(&schema, "segments_to_word_end"),
            Some("0")
        );
    }

    #[test]
    fn distances_decrease_along_word() {
        let lang = demo_lang();
        let utt = analyze("hello world", &lang).unwrap();
        let schema = FeatureSchema::for_phoneme_set(&lang.phoneme_set);
        let idx = schema.index_of("segments_to_word_end").unwrap();
        let vectors = extract_linguistic_features(&utt, &lang.phoneme_set);
        for word in &utt.words {
            let mut prev: Option<i64> = None;
            for i in word.segments.0..word.segments.1 {
                let d: i64 = vectors[i].values[idx].parse().unwrap();
                if let Some(p) = prev {
                    assert_eq!(d, p - 1);
                }
                prev = Some(d);
            }
            assert_eq!(prev, Some(0));
        }
    }

    #[test]
    fn phrase_distance_counts_to_boundary() {
        let lang = demo_lang();
        let utt = analyze("hello world, stop", &lang).unwrap();
        let schema = FeatureSchema::for_phoneme_set(&lang.phoneme_set);
        let idx = schema.index_of("words_to_phrase_boundary").unwrap();
        let vectors = extract_linguistic_features(&utt, &lang.phoneme_set);
        let word_of = |w: usize| utt.words[w].segments.0;
        // "hello" is one word from the boundary, "world" ends the phrase,
        // "stop" ends the sentence.
        assert_eq!(vectors[word_of(0)].values[idx], "1");
        assert_eq!(vectors[word_of(1)].values[idx], "0");
        assert_eq!(vectors[word_of(2)].values[idx], "0");
    }

    #[test]
    fn schema_is_identical_across_utterances() {
        let lang = demo_lang();
        let schema = FeatureSchema::for_phoneme_set(&lang.phoneme_set);
        for text in ["hello", "world, hello", "2 cats"] {
            let utt = analyze(text, &lang).unwrap();
            let vectors = extract_linguistic_features(&utt, &lang.phoneme_set);
            for v in vectors {
                assert_eq!(v.values.len(), schema.len());
            }
        }
    }

    #[test]
    fn extraction_is_deterministic() {
        let lang = demo_lang();
        let utt = analyze("hello world", &lang).unwrap();
        let a = extract_linguistic_features(&utt, &lang.phoneme_set);
        let b = extract_linguistic_features(&utt, &lang.phoneme_set);
        assert_eq!(a, b);
    }
}
