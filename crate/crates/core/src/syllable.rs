//! Syllabification by maximal onset.
//!
//! One syllable per vowel nucleus. An intervocalic consonant cluster is split
//! so that the longest suffix attested as a word-initial cluster in the
//! training lexicon becomes the next syllable's onset; the rest closes the
//! preceding syllable.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::phoneset::PhonemeSet;

/// Word-initial consonant clusters observed in a lexicon.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OnsetInventory {
    clusters: BTreeSet<Vec<String>>,
}

impl OnsetInventory {
    pub fn from_lexicon(lex: &Lexicon) -> Self {
        let ps = &lex.phoneme_set;
        let mut clusters = BTreeSet::new();
        for entry in lex.entries() {
            let onset: Vec<String> = entry
                .phones
                .iter()
                .take_while(|p| !ps.is_vowel(p))
                .cloned()
                .collect();
            if !onset.is_empty() && onset.len() < entry.phones.len() {
                clusters.insert(onset);
            }
        }
        OnsetInventory { clusters }
    }

    pub fn contains(&self, cluster: &[String]) -> bool {
        self.clusters.contains(cluster)
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<String>> {
        self.clusters.iter()
    }

    pub fn insert(&mut self, cluster: Vec<String>) {
        self.clusters.insert(cluster);
    }
}

/// A syllable as phone index span `start..end` with its nucleus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syllable {
    pub start: usize,
    /// Exclusive end index.
    pub end: usize,
    pub nucleus: usize,
    pub stressed: bool,
}

pub fn syllabify(
    phones: &[String],
    stress: &[u8],
    ps: &PhonemeSet,
    onsets: &OnsetInventory,
) -> Result<Vec<Syllable>> {
    debug_assert_eq!(phones.len(), stress.len());
    let nuclei: Vec<usize> = (0..phones.len())
        .filter(|&i| ps.is_vowel(&phones[i]))
        .collect();
    if nuclei.is_empty() {
        return Err(Error::NoNucleus);
    }

    let mut syllables = Vec::with_capacity(nuclei.len());
    let mut start = 0usize;
    for (k, &nucleus) in nuclei.iter().enumerate() {
        let end = if k + 1 == nuclei.len() {
            phones.len()
        } else {
            let next_nucleus = nuclei[k + 1];
            let cluster = &phones[nucleus + 1..next_nucleus];
            // Longest attested suffix of the cluster becomes the next onset.
            let mut split = cluster.len();
            for j in 0..cluster.len() {
                if onsets.contains(&cluster[j..]) {
                    split = j;
                    break;
                }
            }
            nucleus + 1 + split
        };
        syllables.push(Syllable {
            start,
            end,
            nucleus,
            stressed: stress[nucleus] == 1,
        });
        start = end;
    }
    Ok(syllables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_lexicon;
    use crate::phoneset::parse_phoneme_set;

    fn setup() -> (PhonemeSet, OnsetInventory) {
        let ps = parse_phoneme_set(
            "\
_ silence
a vowel length=short height=low frontness=central rounding=unrounded
@ vowel length=schwa height=mid frontness=central rounding=unrounded
ou vowel length=diphthong height=mid frontness=back rounding=rounded
h consonant manner=fricative place=glottal voicing=voiceless
l consonant manner=liquid place=alveolar voicing=voiced
s consonant manner=fricative place=alveolar voicing=voiceless
t consonant manner=stop place=alveolar voicing=voiceless
",
            "xx",
        )
        .unwrap();
        let lex = parse_lexicon(
            "low\tl ou1\nhat\th a1 t\nstop\ts t a1\ntale\tt a1 l\n",
            &ps,
        )
        .unwrap();
        let onsets = OnsetInventory::from_lexicon(&lex);
        (ps, onsets)
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn hello_splits_before_l() {
        let (ps, onsets) = setup();
        let sylls = syllabify(&s(&["h", "@", "l", "ou"]), &[0, 0, 0, 1], &ps, &onsets).unwrap();
        assert_eq!(sylls.len(), 2);
        assert_eq!((sylls[0].start, sylls[0].end), (0, 2));
        assert_eq!((sylls[1].start, sylls[1].end), (2, 4));
        assert!(!sylls[0].stressed);
        assert!(sylls[1].stressed);
    }

    #[test]
    fn single_vowel_is_its_own_syllable() {
        let (ps, onsets) = setup();
        let sylls = syllabify(&s(&["a"]), &[0], &ps, &onsets).unwrap();
        assert_eq!(sylls.len(), 1);
        assert_eq!((sylls[0].start, sylls[0].end, sylls[0].nucleus), (0, 1, 0));
    }

    #[test]
    fn no_vowel_is_an_error() {
        let (ps, onsets) = setup();
        assert!(matches!(
            syllabify(&s(&["t", "s", "t"]), &[0, 0, 0], &ps, &onsets),
            Err(Error::NoNucleus)
        ));
    }

    #[test]
    fn maximal_onset_prefers_longest_attested_cluster() {
        let (ps, onsets) = setup();
        // "st" is attested word-initially, so a-st-a splits as a.sta.
        let sylls = syllabify(&s(&["a", "s", "t", "a"]), &[0, 0, 0, 0], &ps, &onsets).unwrap();
        assert_eq!((sylls[0].start, sylls[0].end), (0, 1));
        assert_eq!((sylls[1].start, sylls[1].end), (1, 4));
    }

    #[test]
    fn unattested_cluster_goes_to_coda() {
        let (ps, onsets) = setup();
        // "lh" is not an onset; "h" is. a-lh-a splits as al.ha.
        let sylls = syllabify(&s(&["a", "l", "h", "a"]), &[0, 0, 0, 0], &ps, &onsets).unwrap();
        assert_eq!((sylls[0].start, sylls[0].end), (0, 2));
        assert_eq!((sylls[1].start, sylls[1].end), (2, 4));
    }

    #[test]
    fn every_phone_in_exactly_one_syllable() {
        let (ps, onsets) = setup();
        let phones = s(&["s", "t", "a", "l", "a", "t", "s"]);
        let sylls = syllabify(&phones, &[0, 0, 1, 0, 0, 0, 0], &ps, &onsets).unwrap();
        assert_eq!(sylls[0].start, 0);
        assert_eq!(sylls.last().unwrap().end, phones.len());
        for pair in sylls.windows(2) {
            assert_eq!(pair[0].end, pair[1].start);
        }
        let vowel_count = phones.iter().filter(|p| ps.is_vowel(p)).count();
        assert_eq!(sylls.len(), vowel_count);
    }
}
