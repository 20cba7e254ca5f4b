//! Compiled pronunciation lexicon: a minimal, deterministic, acyclic
//! byte-to-phone transducer.
//!
//! Construction is incremental over entries sorted by grapheme bytes
//! (Daciuk/Mihov style): a register of frozen states guarantees minimality
//! without a post-hoc pass, and outputs are pushed toward the root so that
//! shared prefixes carry the longest common output prefix.
//!
//! Every grapheme is stored with a trailing terminator byte (0x00), which
//! lets pronunciations that diverge only at word end live on ordinary arcs;
//! the single final state is the terminator sink.

use std::collections::HashMap;

use crate::bytes::{Reader, Writer};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

const TERMINATOR: u8 = 0x00;
const MAGIC: &[u8; 4] = b"MFST";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FstArc {
    pub input: u8,
    pub output: Vec<String>,
    pub target: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FstState {
    pub is_final: bool,
    /// Outgoing arcs, sorted by input byte; at most one arc per byte.
    pub arcs: Vec<FstArc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronunciationFst {
    states: Vec<FstState>,
    root: u32,
    entry_count: u32,
}

impl PronunciationFst {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn arc_count(&self) -> usize {
        self.states.iter().map(|s| s.arcs.len()).sum()
    }

    pub fn entry_count(&self) -> u32 {
        self.entry_count
    }

    pub fn states(&self) -> &[FstState] {
        &self.states
    }

    fn arc_from(&self, state: u32, input: u8) -> Option<&FstArc> {
        let arcs = &self.states[state as usize].arcs;
        arcs.binary_search_by_key(&input, |a| a.input)
            .ok()
            .map(|i| &arcs[i])
    }
}

/// Compile a lexicon into its minimal transducer.
pub fn compile_fst(lex: &Lexicon) -> Result<PronunciationFst> {
    if lex.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let mut builder = Builder::new();
    // Lexicon iteration is already sorted by grapheme bytes.
    for entry in lex.entries() {
        let output: Vec<String> = entry
            .phones
            .iter()
            .zip(entry.stress.iter())
            .map(|(p, s)| if *s == 1 { format!("{p}1") } else { p.clone() })
            .collect();
        builder.insert(entry.grapheme.as_bytes(), output);
    }
    Ok(builder.finish(lex.len() as u32))
}

/// Look up a word (case-folded). Present iff the word was a lexicon entry.
pub fn fst_lookup(fst: &PronunciationFst, word: &str) -> Option<(Vec<String>, Vec<u8>)> {
    let word = word.to_lowercase();
    let mut state = fst.root;
    let mut tokens: Vec<&str> = Vec::new();
    for &byte in word.as_bytes() {
        let arc = fst.arc_from(state, byte)?;
        tokens.extend(arc.output.iter().map(String::as_str));
        state = arc.target;
    }
    let arc = fst.arc_from(state, TERMINATOR)?;
    tokens.extend(arc.output.iter().map(String::as_str));
    debug_assert!(fst.states[arc.target as usize].is_final);

    let mut phones = Vec::with_capacity(tokens.len());
    let mut stress = Vec::with_capacity(tokens.len());
    for token in tokens {
        match token.strip_suffix('1') {
            Some(base) if !base.is_empty() => {
                phones.push(base.to_string());
                stress.push(1);
            }
            _ => {
                phones.push(token.to_string());
                stress.push(0);
            }
        }
    }
    Some((phones, stress))
}

// ---------------------------------------------------------------------------
// incremental construction

enum Target {
    Frozen(u32),
    /// Points at the next node of the uncommitted path.
    Chain,
}

struct TempArc {
    input: u8,
    output: Vec<String>,
    target: Target,
}

struct TempState {
    arcs: Vec<TempArc>,
}

struct Builder {
    frozen: Vec<FstState>,
    register: HashMap<(bool, Vec<(u8, Vec<String>, u32)>), u32>,
    sink: u32,
    /// path[i] is the uncommitted state after i bytes of the previous word.
    path: Vec<TempState>,
    prev: Vec<u8>,
}

impl Builder {
    fn new() -> Self {
        let mut b = Builder {
            frozen: Vec::new(),
            register: HashMap::new(),
            sink: 0,
            path: vec![TempState { arcs: Vec::new() }],
            prev: Vec::new(),
        };
        b.sink = b.intern(true, Vec::new());
        b
    }

    fn intern(&mut self, is_final: bool, arcs: Vec<(u8, Vec<String>, u32)>) -> u32 {
        let key = (is_final, arcs);
        if let Some(&id) = self.register.get(&key) {
            return id;
        }
        let id = self.frozen.len() as u32;
        self.frozen.push(FstState {
            is_final,
            arcs: key
                .1
                .iter()
                .map(|(input, output, target)| FstArc {
                    input: *input,
                    output: output.clone(),
                    target: *target,
                })
                .collect(),
        });
        self.register.insert(key, id);
        id
    }

    /// Freeze path nodes deeper than `depth`, bottom-up, resolving chain arcs.
    fn freeze_tail(&mut self, depth: usize) {
        while self.path.len() > depth {
            let node = self.path.pop().expect("path never empty");
            let arcs: Vec<(u8, Vec<String>, u32)> = node
                .arcs
                .into_iter()
                .map(|arc| {
                    let target = match arc.target {
                        Target::Frozen(id) => id,
                        Target::Chain => unreachable!("chain target below frozen tail"),
                    };
                    (arc.input, arc.output, target)
                })
                .collect();
            let id = self.intern(false, arcs);
            if let Some(parent) = self.path.last_mut() {
                let chain = parent.arcs.last_mut().expect("parent has chain arc");
                chain.target = Target::Frozen(id);
            } else {
                // Root frozen: record as a one-past sentinel via prev trick.
                self.path.push(TempState { arcs: Vec::new() });
                self.path.last_mut().unwrap().arcs.push(TempArc {
                    input: 0,
                    output: Vec::new(),
                    target: Target::Frozen(id),
                });
                return;
            }
        }
    }

    fn insert(&mut self, word: &[u8], output: Vec<String>) {
        debug_assert!(!word.contains(&TERMINATOR));
        let mut terminated = word.to_vec();
        terminated.push(TERMINATOR);
        debug_assert!(terminated > self.prev, "input must be sorted and unique");

        let prefix = terminated
            .iter()
            .zip(self.prev.iter())
            .take_while(|(a, b)| a == b)
            .count();
        self.freeze_tail(prefix + 1);

        // Push outputs: walk the retained prefix, keeping on each arc only the
        // common prefix of its output and what this word still has to emit.
        let mut remaining = output;
        for i in 0..prefix {
            let node_arc_output = {
                let arc = self.path[i].arcs.last_mut().expect("prefix chain arc");
                debug_assert_eq!(arc.input, terminated[i]);
                let common = lcp_len(&arc.output, &remaining);
                let surplus: Vec<String> = arc.output.split_off(common);
                remaining.drain(..common);
                surplus
            };
            if !node_arc_output.is_empty() {
                for arc in &mut self.path[i + 1].arcs {
                    let mut pushed = node_arc_output.clone();
                    pushed.extend(arc.output.drain(..));
                    arc.output = pushed;
                }
            }
        }

        // Extend with the new suffix; all of the remaining output rides on the
        // first new arc.
        for (step, i) in (prefix..terminated.len()).enumerate() {
            let out = if step == 0 {
                std::mem::take(&mut remaining)
            } else {
                Vec::new()
            };
            let byte = terminated[i];
            if byte == TERMINATOR {
                self.path[i].arcs.push(TempArc {
                    input: TERMINATOR,
                    output: out,
                    target: Target::Frozen(self.sink),
                });
            } else {
                self.path[i].arcs.push(TempArc {
                    input: byte,
                    output: out,
                    target: Target::Chain,
                });
                self.path.push(TempState { arcs: Vec::new() });
            }
        }

        self.prev = terminated;
    }

    fn finish(mut self, entry_count: u32) -> PronunciationFst {
        self.freeze_tail(0);
        // After freezing to depth 0 the sentinel node holds the root id.
        let root = match self.path.last().and_then(|n| n.arcs.last()) {
            Some(TempArc {
                target: Target::Frozen(id),
                ..
            }) => *id,
            _ => unreachable!("root sentinel missing"),
        };
        PronunciationFst {
            states: self.frozen,
            root,
            entry_count,
        }
    }
}

fn lcp_len(a: &[String], b: &[String]) -> usize {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count()
}

// ---------------------------------------------------------------------------
// binary artifact

/// Serialize to the `MFST` artifact layout (see docs/formats.md).
pub fn write_fst(fst: &PronunciationFst) -> Vec<u8> {
    let mut blob = Writer::new();
    let mut arc_records: Vec<(u8, u32, u32, u16)> = Vec::new();
    let mut state_records: Vec<(u8, u32, u16)> = Vec::new();
    for state in &fst.states {
        let first_arc = arc_records.len() as u32;
        for arc in &state.arcs {
            let joined = arc.output.join(" ");
            let off = blob.len() as u32;
            blob.bytes(joined.as_bytes());
            arc_records.push((arc.input, arc.target, off, joined.len() as u16));
        }
        state_records.push((
            u8::from(state.is_final),
            first_arc,
            state.arcs.len() as u16,
        ));
    }

    let mut w = Writer::new();
    w.bytes(MAGIC);
    w.u32(VERSION);
    w.u32(fst.entry_count);
    w.u32(state_records.len() as u32);
    w.u32(arc_records.len() as u32);
    w.u32(blob.len() as u32);
    w.u32(fst.root);
    for (is_final, first_arc, n_arcs) in state_records {
        w.u8(is_final);
        w.u32(first_arc);
        w.u16(n_arcs);
    }
    for (input, target, off, len) in arc_records {
        w.u8(input);
        w.u32(target);
        w.u32(off);
        w.u16(len);
    }
    w.bytes(blob.as_slice());
    w.into_vec()
}

pub fn read_fst(bytes: &[u8]) -> Result<PronunciationFst> {
    let mut r = Reader::new(bytes);
    let magic = r.take(4)?;
    if magic != MAGIC {
        return Err(Error::BadArtifact("MFST magic mismatch".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::BadArtifact(format!(
            "MFST version {version} unsupported"
        )));
    }
    let entry_count = r.u32()?;
    let state_count = r.u32()? as usize;
    let arc_count = r.u32()? as usize;
    let blob_len = r.u32()? as usize;
    let root = r.u32()?;

    let mut state_records = Vec::with_capacity(state_count);
    for _ in 0..state_count {
        let is_final = r.u8()? != 0;
        let first_arc = r.u32()? as usize;
        let n_arcs = r.u16()? as usize;
        state_records.push((is_final, first_arc, n_arcs));
    }
    let mut arc_records = Vec::with_capacity(arc_count);
    for _ in 0..arc_count {
        let input = r.u8()?;
        let target = r.u32()?;
        let off = r.u32()? as usize;
        let len = r.u16()? as usize;
        arc_records.push((input, target, off, len));
    }
    let blob = r.take(blob_len)?;
    r.expect_end()?;

    let mut states = Vec::with_capacity(state_count);
    for (is_final, first_arc, n_arcs) in state_records {
        let mut arcs = Vec::with_capacity(n_arcs);
        for (input, target, off, len) in arc_records
            .get(first_arc..first_arc + n_arcs)
            .ok_or_else(|| Error::BadArtifact("MFST arc range out of bounds".into()))?
        {
            if *target as usize >= state_count {
                return Err(Error::BadArtifact("MFST arc target out of bounds".into()));
            }
            let slice = blob
                .get(*off..*off + *len)
                .ok_or_else(|| Error::BadArtifact("MFST blob range out of bounds".into()))?;
            let joined = std::str::from_utf8(slice)
                .map_err(|_| Error::BadArtifact("MFST blob is not UTF-8".into()))?;
            let output = if joined.is_empty() {
                Vec::new()
            } else {
                joined.split(' ').map(str::to_string).collect()
            };
            arcs.push(FstArc {
                input: *input,
                output,
                target: *target,
            });
        }
        states.push(FstState { is_final, arcs });
    }
    if root as usize >= states.len() {
        return Err(Error::BadArtifact("MFST root out of bounds".into()));
    }
    Ok(PronunciationFst {
        states,
        root,
        entry_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_lexicon;
    use crate::phoneset::{parse_phoneme_set, PhonemeSet};
    use std::collections::BTreeMap;

    fn test_set() -> PhonemeSet {
        parse_phoneme_set(
            "\
_ silence
a vowel length=short height=low frontness=central rounding=unrounded
e vowel length=short height=mid frontness=front rounding=unrounded
o vowel length=long height=mid frontness=back rounding=rounded
k consonant manner=stop place=velar voicing=voiceless
t consonant manner=stop place=alveolar voicing=voiceless
s consonant manner=fricative place=alveolar voicing=voiceless
d consonant manner=stop place=alveolar voicing=voiced
g consonant manner=stop place=velar voicing=voiced
b consonant manner=stop place=bilabial voicing=voiced
",
            "xx",
        )
        .unwrap()
    }

    fn lex_from(lines: &[&str]) -> Lexicon {
        parse_lexicon(&lines.join("\n"), &test_set()).unwrap()
    }

    /// Plain-map oracle over the same entries.
    fn map_oracle(lex: &Lexicon) -> BTreeMap<String, (Vec<String>, Vec<u8>)> {
        lex.entries()
            .map(|e| (e.grapheme.clone(), (e.phones.clone(), e.stress.clone())))
            .collect()
    }

    #[test]
    fn shares_prefix_states() {
        let lex = lex_from(&["cat\tk a1 t", "cats\tk a1 t s", "dog\td o1 g"]);
        let fst = compile_fst(&lex).unwrap();
        let oracle = map_oracle(&lex);
        for (word, expected) in &oracle {
            assert_eq!(fst_lookup(&fst, word).as_ref(), Some(expected));
        }
        // Prefix sharing: far fewer states than the trie-of-words bound.
        assert!(
            fst.state_count() < 3 + 4 + 3 + 3,
            "state count {} not minimal-ish",
            fst.state_count()
        );
    }

    #[test]
    fn single_entry_lookup() {
        let lex = lex_from(&["a\ta"]);
        let fst = compile_fst(&lex).unwrap();
        assert_eq!(
            fst_lookup(&fst, "a"),
            Some((vec!["a".to_string()], vec![0]))
        );
        assert_eq!(fst_lookup(&fst, "b"), None);
        assert_eq!(fst_lookup(&fst, ""), None);
    }

    #[test]
    fn lookup_case_folds() {
        let lex = lex_from(&["dog\td o1 g"]);
        let fst = compile_fst(&lex).unwrap();
        assert_eq!(fst_lookup(&fst, "DOG"), fst_lookup(&fst, "dog"));
        assert!(fst_lookup(&fst, "DOG").is_some());
    }

    #[test]
    fn disjoint_words_match_oracle() {
        let lex = lex_from(&["go\tg o1", "stab\ts t a1 b"]);
        let fst = compile_fst(&lex).unwrap();
        let oracle = map_oracle(&lex);
        for (word, expected) in &oracle {
            assert_eq!(fst_lookup(&fst, word).as_ref(), Some(expected));
        }
        for word in ["gos", "sta", "stabb", "x", "og"] {
            assert_eq!(fst_lookup(&fst, word), None);
        }
    }

    #[test]
    fn diverging_outputs_after_shared_prefix() {
        // "a" and "ab" share a prefix but have unrelated outputs, which forces
        // output pushing through the terminator arc.
        let lex = lex_from(&["a\ta", "ab\te b", "abs\te b s", "b\tb e"]);
        let fst = compile_fst(&lex).unwrap();
        for (word, expected) in map_oracle(&lex) {
            assert_eq!(fst_lookup(&fst, &word), Some(expected), "word {word}");
        }
    }

    #[test]
    fn deterministic_and_minimal() {
        let lex = lex_from(&["cat\tk a1 t", "cats\tk a1 t s", "bat\tb a1 t", "bats\tb a1 t s"]);
        let fst = compile_fst(&lex).unwrap();
        // Determinism: one arc per input byte per state.
        for state in fst.states() {
            let mut inputs: Vec<u8> = state.arcs.iter().map(|a| a.input).collect();
            let before = inputs.len();
            inputs.dedup();
            assert_eq!(before, inputs.len());
        }
        // Minimality: no two states have identical signatures.
        let mut seen = std::collections::HashSet::new();
        for state in fst.states() {
            let key = format!("{:?}", (state.is_final, &state.arcs));
            assert!(seen.insert(key), "equivalent states present");
        }
        // Suffix sharing should merge the "at(s)" tails.
        assert!(fst.state_count() <= 8, "states: {}", fst.state_count());
    }

    #[test]
    fn entry_count_counts_distinct_graphemes() {
        let lex = lex_from(&["cat\tk a1 t", "cat\tk a1 t", "dog\td o1 g"]);
        let fst = compile_fst(&lex).unwrap();
        assert_eq!(fst.entry_count(), 2);
    }

    #[test]
    fn empty_lexicon_is_an_error() {
        let lex = Lexicon::new(test_set());
        assert!(matches!(compile_fst(&lex), Err(Error::EmptyLexicon)));
    }

    #[test]
    fn artifact_round_trip() {
        let lex = lex_from(&["cat\tk a1 t", "cats\tk a1 t s", "dog\td o1 g"]);
        let fst = compile_fst(&lex).unwrap();
        let bytes = write_fst(&fst);
        let back = read_fst(&bytes).unwrap();
        assert_eq!(fst, back);
        // Serialization is deterministic.
        assert_eq!(bytes, write_fst(&back));
    }

    #[test]
    fn artifact_rejects_corruption() {
        let lex = lex_from(&["cat\tk a1 t"]);
        let bytes = write_fst(&compile_fst(&lex).unwrap());
        assert!(read_fst(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(read_fst(&bad).is_err());
    }
}
