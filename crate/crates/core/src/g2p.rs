//! Grapheme-to-phoneme fallback: EM-aligned training data and per-grapheme
//! decision trees.
//!
//! Training runs in two stages. Stage one aligns each entry's graphemes to
//! phone chunks of size 0, 1, or 2 with Viterbi-EM: chunk probabilities start
//! uniform over each grapheme's feasible chunks, each iteration re-aligns
//! every word with the current table and re-estimates smoothed counts. Ties
//! are broken left to right preferring a 1-phone chunk, then the empty chunk,
//! then a 2-phone chunk, which keeps alignments deterministic and biases
//! digraphs toward emitting on their first letter. Stage two grows one CART
//! per grapheme over context questions "letter at offset d equals c"
//! (d in -3..=3, `#` pads word boundaries), split by information gain.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::bytes::{Reader, Writer};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

const MAGIC: &[u8; 4] = b"MG2P";
const VERSION: u32 = 1;
/// Word-boundary padding symbol for context questions.
pub const PAD: char = '#';

#[derive(Debug, Clone)]
pub struct G2pTrainConfig {
    pub em_iterations: usize,
    pub smoothing: f64,
    pub context_window: i32,
    pub max_depth: usize,
    pub min_node_size: usize,
}

impl Default for G2pTrainConfig {
    fn default() -> Self {
        G2pTrainConfig {
            em_iterations: 10,
            smoothing: 0.1,
            context_window: 3,
            max_depth: 12,
            min_node_size: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        /// Zero, one, or two phone symbols.
        emission: Vec<String>,
    },
    Split {
        offset: i32,
        letter: char,
        yes: Box<TreeNode>,
        no: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { yes, no, .. } => 1 + yes.depth().max(no.depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct G2pModel {
    pub trees: BTreeMap<char, TreeNode>,
    /// P(chunk | grapheme) from the final EM iteration.
    pub alignment_stats: BTreeMap<(char, Vec<String>), f64>,
    pub context_window: i32,
}

impl G2pModel {
    /// Predict the phone sequence for a word; unseen graphemes emit nothing.
    pub fn predict(&self, word: &str) -> Vec<String> {
        let letters: Vec<char> = word.to_lowercase().chars().collect();
        let mut phones = Vec::new();
        for (i, letter) in letters.iter().enumerate() {
            let Some(tree) = self.trees.get(letter) else {
                continue;
            };
            let mut node = tree;
            loop {
                match node {
                    TreeNode::Leaf { emission } => {
                        phones.extend(emission.iter().cloned());
                        break;
                    }
                    TreeNode::Split {
                        offset,
                        letter: q,
                        yes,
                        no,
                    } => {
                        let ctx = context_at(&letters, i as i32 + offset);
                        node = if ctx == *q { yes } else { no };
                    }
                }
            }
        }
        phones
    }
}

fn context_at(letters: &[char], pos: i32) -> char {
    if pos < 0 || pos as usize >= letters.len() {
        PAD
    } else {
        letters[pos as usize]
    }
}

// ---------------------------------------------------------------------------
// stage 1: EM chunk alignment

type Chunk = Vec<String>;

struct AlignedWord {
    letters: Vec<char>,
    /// Emission chunk per letter.
    chunks: Vec<Chunk>,
}

struct AlignmentProblem {
    letters: Vec<char>,
    phones: Vec<String>,
}

/// Log-prob table P(chunk | grapheme).
type ProbTable = HashMap<(char, Chunk), f64>;

fn feasible(i: usize, j: usize, n: usize, m: usize) -> bool {
    // Cell (i letters, j phones) lies on some alignment path with chunks <= 2.
    j <= 2 * i && m - j <= 2 * (n - i)
}

fn chunk_support(problems: &[AlignmentProblem]) -> BTreeMap<char, BTreeSet<Chunk>> {
    let mut support: BTreeMap<char, BTreeSet<Chunk>> = BTreeMap::new();
    for p in problems {
        let (n, m) = (p.letters.len(), p.phones.len());
        for i in 0..n {
            let entry = support.entry(p.letters[i]).or_default();
            for j in 0..=m {
                if !feasible(i, j, n, m) {
                    continue;
                }
                for s in 0..=2usize.min(m - j) {
                    if feasible(i + 1, j + s, n, m) {
                        entry.insert(p.phones[j..j + s].to_vec());
                    }
                }
            }
        }
    }
    support
}

/// Viterbi alignment of one word under the current table. Suffix DP plus a
/// left-to-right reconstruction in tie order (1, 0, 2).
fn viterbi_align(p: &AlignmentProblem, table: &ProbTable) -> (Vec<Chunk>, f64) {
    let (n, m) = (p.letters.len(), p.phones.len());
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    let mut suffix = vec![f64::NEG_INFINITY; (n + 1) * (m + 1)];
    suffix[idx(n, m)] = 0.0;
    for i in (0..n).rev() {
        for j in 0..=m {
            if !feasible(i, j, n, m) {
                continue;
            }
            let mut best = f64::NEG_INFINITY;
            for s in 0..=2usize.min(m - j) {
                let tail = suffix[idx(i + 1, j + s)];
                if tail == f64::NEG_INFINITY {
                    continue;
                }
                let lp = table
                    .get(&(p.letters[i], p.phones[j..j + s].to_vec()))
                    .copied()
                    .unwrap_or(f64::NEG_INFINITY);
                if lp + tail > best {
                    best = lp + tail;
                }
            }
            suffix[idx(i, j)] = best;
        }
    }

    let total = suffix[idx(0, 0)];
    let mut chunks = Vec::with_capacity(n);
    let mut j = 0usize;
    for i in 0..n {
        let mut taken = None;
        for s in [1usize, 0, 2] {
            if j + s > m {
                continue;
            }
            let tail = suffix[idx(i + 1, j + s)];
            if tail == f64::NEG_INFINITY {
                continue;
            }
            let lp = table
                .get(&(p.letters[i], p.phones[j..j + s].to_vec()))
                .copied()
                .unwrap_or(f64::NEG_INFINITY);
            if lp + tail == suffix[idx(i, j)] {
                taken = Some(s);
                break;
            }
        }
        let s = taken.expect("alignment reconstruction followed the DP");
        chunks.push(p.phones[j..j + s].to_vec());
        j += s;
    }
    (chunks, total)
}

fn align_corpus(lex: &Lexicon, config: &G2pTrainConfig) -> Result<(Vec<AlignedWord>, ProbTable)> {
    let mut problems = Vec::new();
    for entry in lex.entries() {
        let letters: Vec<char> = entry.grapheme.chars().collect();
        if entry.phones.len() > 2 * letters.len() {
            return Err(Error::AlignmentImpossible {
                word: entry.grapheme.clone(),
                phones: entry.phones.len(),
                graphemes: letters.len(),
            });
        }
        problems.push(AlignmentProblem {
            letters,
            phones: entry.phones.clone(),
        });
    }

    let support = chunk_support(&problems);
    // Uniform initialization over each grapheme's feasible chunks.
    let mut table: ProbTable = HashMap::new();
    for (g, chunks) in &support {
        let lp = -((chunks.len() as f64).ln());
        for c in chunks {
            table.insert((*g, c.clone()), lp);
        }
    }

    for _ in 0..config.em_iterations {
        let mut counts: HashMap<(char, Chunk), f64> = HashMap::new();
        for p in &problems {
            let (chunks, _) = viterbi_align(p, &table);
            for (g, c) in p.letters.iter().zip(chunks.into_iter()) {
                *counts.entry((*g, c)).or_insert(0.0) += 1.0;
            }
        }
        // Smoothed re-estimation over each grapheme's support.
        let mut next = HashMap::new();
        for (g, chunks) in &support {
            let total: f64 = chunks
                .iter()
                .map(|c| counts.get(&(*g, c.clone())).copied().unwrap_or(0.0))
                .sum();
            let denom = total + config.smoothing * chunks.len() as f64;
            for c in chunks {
                let count = counts.get(&(*g, c.clone())).copied().unwrap_or(0.0);
                next.insert((*g, c.clone()), ((count + config.smoothing) / denom).ln());
            }
        }
        table = next;
    }

    let aligned = problems
        .iter()
        .map(|p| {
            let (chunks, _) = viterbi_align(p, &table);
            AlignedWord {
                letters: p.letters.clone(),
                chunks,
            }
        })
        .collect();
    Ok((aligned, table))
}

// ---------------------------------------------------------------------------
// stage 2: per-grapheme CART

struct Instance {
    /// Context letters at offsets -w..=w.
    context: Vec<char>,
    label: usize,
}

fn entropy(counts: &BTreeMap<usize, usize>, total: usize) -> f64 {
    let mut h = 0.0;
    for &c in counts.values() {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * p.log2();
        }
    }
    h
}

fn label_counts(instances: &[&Instance]) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for inst in instances {
        *counts.entry(inst.label).or_insert(0) += 1;
    }
    counts
}

fn majority_label(instances: &[&Instance]) -> usize {
    let counts = label_counts(instances);
    counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(l, _)| *l)
        .expect("non-empty node")
}

fn grow_tree(
    instances: &[&Instance],
    labels: &[Chunk],
    window: i32,
    depth: usize,
    config: &G2pTrainConfig,
) -> TreeNode {
    let counts = label_counts(instances);
    let pure = counts.len() <= 1;
    if pure || depth >= config.max_depth || instances.len() < config.min_node_size {
        return TreeNode::Leaf {
            emission: labels[majority_label(instances)].clone(),
        };
    }

    let parent_entropy = entropy(&counts, instances.len());
    let mut best: Option<(f64, i32, char)> = None;
    for offset in -window..=window {
        let col = (offset + window) as usize;
        let mut seen: BTreeSet<char> = BTreeSet::new();
        for inst in instances {
            seen.insert(inst.context[col]);
        }
        for letter in seen {
            let mut yes_counts: BTreeMap<usize, usize> = BTreeMap::new();
            let mut yes_total = 0usize;
            for inst in instances {
                if inst.context[col] == letter {
                    *yes_counts.entry(inst.label).or_insert(0) += 1;
                    yes_total += 1;
                }
            }
            let no_total = instances.len() - yes_total;
            if yes_total == 0 || no_total == 0 {
                continue;
            }
            let mut no_counts = counts.clone();
            for (l, c) in &yes_counts {
                let entry = no_counts.get_mut(l).expect("superset");
                *entry -= c;
            }
            let gain = parent_entropy
                - (yes_total as f64 / instances.len() as f64) * entropy(&yes_counts, yes_total)
                - (no_total as f64 / instances.len() as f64) * entropy(&no_counts, no_total);
            // Lowest (offset, letter) wins among equal gains; iteration order
            // is already ascending, so only strictly better gains replace.
            if best.map(|(g, _, _)| gain > g + 1e-12).unwrap_or(gain > 1e-12) {
                best = Some((gain, offset, letter));
            }
        }
    }

    let Some((_, offset, letter)) = best else {
        return TreeNode::Leaf {
            emission: labels[majority_label(instances)].clone(),
        };
    };
    let col = (offset + window) as usize;
    let yes: Vec<&Instance> = instances
        .iter()
        .copied()
        .filter(|i| i.context[col] == letter)
        .collect();
    let no: Vec<&Instance> = instances
        .iter()
        .copied()
        .filter(|i| i.context[col] != letter)
        .collect();
    TreeNode::Split {
        offset,
        letter,
        yes: Box::new(grow_tree(&yes, labels, window, depth + 1, config)),
        no: Box::new(grow_tree(&no, labels, window, depth + 1, config)),
    }
}

pub fn train_g2p(lex: &Lexicon, config: &G2pTrainConfig) -> Result<G2pModel> {
    if lex.len() < 2 {
        return Err(Error::G2pTooSmall);
    }
    let (aligned, table) = align_corpus(lex, config)?;

    // Group training instances per grapheme.
    let mut label_index: BTreeMap<Chunk, usize> = BTreeMap::new();
    let mut labels: Vec<Chunk> = Vec::new();
    let mut per_grapheme: BTreeMap<char, Vec<Instance>> = BTreeMap::new();
    let window = config.context_window;
    for word in &aligned {
        for (i, (g, chunk)) in word.letters.iter().zip(word.chunks.iter()).enumerate() {
            let label = *label_index.entry(chunk.clone()).or_insert_with(|| {
                labels.push(chunk.clone());
                labels.len() - 1
            });
            let context: Vec<char> = (-window..=window)
                .map(|d| context_at(&word.letters, i as i32 + d))
                .collect();
            per_grapheme
                .entry(*g)
                .or_default()
                .push(Instance { context, label });
        }
    }

    let mut trees = BTreeMap::new();
    for (g, instances) in &per_grapheme {
        let refs: Vec<&Instance> = instances.iter().collect();
        trees.insert(*g, grow_tree(&refs, &labels, window, 0, config));
    }

    let alignment_stats = table
        .into_iter()
        .map(|((g, c), lp)| ((g, c), lp.exp()))
        .collect();

    Ok(G2pModel {
        trees,
        alignment_stats,
        context_window: window,
    })
}

// ---------------------------------------------------------------------------
// binary artifact

fn write_node(w: &mut Writer, node: &TreeNode) {
    match node {
        TreeNode::Leaf { emission } => {
            w.u8(0);
            w.u8(emission.len() as u8);
            for p in emission {
                w.string(p);
            }
        }
        TreeNode::Split {
            offset,
            letter,
            yes,
            no,
        } => {
            w.u8(1);
            w.u8((*offset + 16) as u8);
            w.u32(*letter as u32);
            write_node(w, yes);
            write_node(w, no);
        }
    }
}

fn read_node(r: &mut Reader) -> Result<TreeNode> {
    match r.u8()? {
        0 => {
            let n = r.u8()? as usize;
            let mut emission = Vec::with_capacity(n);
            for _ in 0..n {
                emission.push(r.string()?);
            }
            Ok(TreeNode::Leaf { emission })
        }
        1 => {
            let offset = r.u8()? as i32 - 16;
            let letter = char::from_u32(r.u32()?)
                .ok_or_else(|| Error::BadArtifact("MG2P invalid letter".into()))?;
            let yes = Box::new(read_node(r)?);
            let no = Box::new(read_node(r)?);
            Ok(TreeNode::Split {
                offset,
                letter,
                yes,
                no,
            })
        }
        other => Err(Error::BadArtifact(format!("MG2P bad node tag {other}"))),
    }
}

pub fn write_g2p(model: &G2pModel) -> Vec<u8> {
    let mut w = Writer::new();
    w.bytes(MAGIC);
    w.u32(VERSION);
    w.u32(model.context_window as u32);
    w.u32(model.trees.len() as u32);
    for (g, tree) in &model.trees {
        w.u32(*g as u32);
        write_node(&mut w, tree);
    }
    w.u32(model.alignment_stats.len() as u32);
    for ((g, chunk), p) in &model.alignment_stats {
        w.u32(*g as u32);
        w.u8(chunk.len() as u8);
        for phone in chunk {
            w.string(phone);
        }
        w.f64(*p);
    }
    w.into_vec()
}

pub fn read_g2p(bytes: &[u8]) -> Result<G2pModel> {
    let mut r = Reader::new(bytes);
    if r.take(4)? != MAGIC {
        return Err(Error::BadArtifact("MG2P magic mismatch".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::BadArtifact(format!(
            "MG2P version {version} unsupported"
        )));
    }
    let context_window = r.u32()? as i32;
    let tree_count = r.u32()? as usize;
    let mut trees = BTreeMap::new();
    for _ in 0..tree_count {
        let g = char::from_u32(r.u32()?)
            .ok_or_else(|| Error::BadArtifact("MG2P invalid grapheme".into()))?;
        trees.insert(g, read_node(&mut r)?);
    }
    let stat_count = r.u32()? as usize;
    let mut alignment_stats = BTreeMap::new();
    for _ in 0..stat_count {
        let g = char::from_u32(r.u32()?)
            .ok_or_else(|| Error::BadArtifact("MG2P invalid grapheme".into()))?;
        let len = r.u8()? as usize;
        let mut chunk = Vec::with_capacity(len);
        for _ in 0..len {
            chunk.push(r.string()?);
        }
        alignment_stats.insert((g, chunk), r.f64()?);
    }
    r.expect_end()?;
    Ok(G2pModel {
        trees,
        alignment_stats,
        context_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_lexicon;
    use crate::phoneset::{parse_phoneme_set, PhonemeSet};

    fn toy_set() -> PhonemeSet {
        parse_phoneme_set(
            "\
_ silence
a vowel length=short height=low frontness=central rounding=unrounded
e vowel length=short height=mid frontness=front rounding=unrounded
o vowel length=long height=mid frontness=back rounding=rounded
b consonant manner=stop place=bilabial voicing=voiced
d consonant manner=stop place=alveolar voicing=voiced
f consonant manner=fricative place=labiodental voicing=voiceless
p consonant manner=stop place=bilabial voicing=voiceless
t consonant manner=stop place=alveolar voicing=voiceless
",
            "xx",
        )
        .unwrap()
    }

    fn train(lines: &[&str]) -> G2pModel {
        let lex = parse_lexicon(&lines.join("\n"), &toy_set()).unwrap();
        train_g2p(&lex, &G2pTrainConfig::default()).unwrap()
    }

    #[test]
    fn memorizes_training_words() {
        let model = train(&["ab\ta b", "ad\ta d"]);
        assert_eq!(model.predict("ab"), vec!["a", "b"]);
        assert_eq!(model.predict("ad"), vec!["a", "d"]);
    }

    #[test]
    fn generalizes_deterministic_letters() {
        let model = train(&["ab\ta b", "ad\ta d"]);
        // Each letter maps deterministically in training, so the unseen word
        // "bd" must come out as the letter-wise composition.
        assert_eq!(model.predict("bd"), vec!["b", "d"]);
    }

    #[test]
    fn recovers_planted_digraph() {
        // "ph" always aligns to [f]; h never appears alone, ph is always
        // followed by a vowel plus coda, and every other letter has broad
        // one-to-one coverage.
        let model = train(&[
            "pat\tp a t",
            "pot\tp o t",
            "pet\tp e t",
            "pad\tp a d",
            "pod\tp o d",
            "tap\tt a p",
            "top\tt o p",
            "tab\tt a b",
            "bat\tb a t",
            "bad\tb a d",
            "bed\tb e d",
            "dot\td o t",
            "dab\td a b",
            "fab\tf a b",
            "fad\tf a d",
            "fat\tf a t",
            "phat\tf a t",
            "phob\tf o b",
            "phed\tf e d",
        ]);
        // Prediction emits [f] on p with an empty emission on h.
        assert_eq!(model.predict("phod"), vec!["f", "o", "d"]);
        // The alignment table itself carries the planted mapping.
        let p_f = model
            .alignment_stats
            .get(&('p', vec!["f".to_string()]))
            .copied()
            .unwrap_or(0.0);
        let h_eps = model
            .alignment_stats
            .get(&('h', vec![]))
            .copied()
            .unwrap_or(0.0);
        assert!(p_f > 0.2, "P(f|p) = {p_f}");
        assert!(h_eps > 0.5, "P(eps|h) = {h_eps}");
        // The empty chunk is h's modal emission.
        let h_max = model
            .alignment_stats
            .iter()
            .filter(|((g, _), _)| *g == 'h')
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|((_, c), _)| c.clone())
            .unwrap();
        assert!(h_max.is_empty(), "modal h emission is {h_max:?}");
    }

    #[test]
    fn impossible_alignment_names_the_word() {
        let lex = parse_lexicon("ab\ta b a b a\n x\ta", &toy_set()).unwrap();
        let err = train_g2p(&lex, &G2pTrainConfig::default()).unwrap_err();
        match err {
            Error::AlignmentImpossible { word, .. } => assert_eq!(word, "ab"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn needs_two_entries() {
        let lex = parse_lexicon("ab\ta b\n", &toy_set()).unwrap();
        assert!(matches!(
            train_g2p(&lex, &G2pTrainConfig::default()),
            Err(Error::G2pTooSmall)
        ));
    }

    #[test]
    fn unseen_letters_emit_nothing() {
        let model = train(&["ab\ta b", "ad\ta d"]);
        assert_eq!(model.predict("zz"), Vec::<String>::new());
    }

    #[test]
    fn model_round_trips_through_artifact() {
        let model = train(&["ab\ta b", "ad\ta d", "phab\tf a b", "pat\tp a t"]);
        let bytes = write_g2p(&model);
        let back = read_g2p(&bytes).unwrap();
        assert_eq!(model, back);
        assert_eq!(bytes, write_g2p(&back));
    }

    #[test]
    fn tree_depth_is_capped() {
        let model = train(&["ab\ta b", "ad\ta d", "ba\tb a", "da\td a"]);
        for tree in model.trees.values() {
            assert!(tree.depth() <= 12);
        }
    }
}
