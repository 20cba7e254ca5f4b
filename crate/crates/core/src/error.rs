use std::path::PathBuf;

/// Unified error type for every pipeline stage.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    // ---- phoneme set / lexicon parsing ----
    #[error("line {line}: duplicate symbol `{symbol}`")]
    DuplicateSymbol { line: usize, symbol: String },
    #[error("line {line}: {kind} `{symbol}` is missing required feature `{feature}`")]
    MissingFeature {
        line: usize,
        kind: &'static str,
        symbol: String,
        feature: &'static str,
    },
    #[error("line {line}: unknown value `{value}` for feature `{feature}`")]
    UnknownFeatureValue {
        line: usize,
        feature: String,
        value: String,
    },
    #[error("line {line}: unknown feature `{feature}` for {kind} `{symbol}`")]
    UnknownFeature {
        line: usize,
        kind: &'static str,
        symbol: String,
        feature: String,
    },
    #[error("line {line}: malformed phoneme line: {reason}")]
    MalformedPhonemeLine { line: usize, reason: String },
    #[error("phoneme set has no silence phoneme")]
    NoSilencePhoneme,
    #[error("phoneme set needs at least one vowel and one consonant")]
    IncompleteInventory,
    #[error("line {line}: malformed lexicon line: {reason}")]
    MalformedLexiconLine { line: usize, reason: String },
    #[error("word `{word}`: phone `{phone}` is not in the phoneme set")]
    UnknownPhone { word: String, phone: String },
    #[error("word `{word}`: empty pronunciation")]
    EmptyPronunciation { word: String },
    #[error("word `{word}`: stress digit on non-vowel `{phone}`")]
    StressOnNonVowel { word: String, phone: String },

    // ---- FST ----
    #[error("cannot compile an empty lexicon")]
    EmptyLexicon,
    #[error("bad artifact: {0}")]
    BadArtifact(String),

    // ---- G2P ----
    #[error("word `{word}`: alignment impossible ({phones} phones for {graphemes} graphemes)")]
    AlignmentImpossible {
        word: String,
        phones: usize,
        graphemes: usize,
    },
    #[error("G2P training needs at least 2 entries")]
    G2pTooSmall,
    #[error("word `{word}` is unpronounceable")]
    Unpronounceable { word: String },
    #[error("empty word")]
    EmptyWord,

    // ---- text processing ----
    #[error("number `{0}` out of supported range (0..=999999)")]
    NumberOutOfRange(String),
    #[error("cannot normalize punctuation token `{0}`")]
    PunctuationNormalize(String),
    #[error("no nucleus: phone sequence contains no vowel")]
    NoNucleus,
    #[error("text contains no words")]
    NoWords,

    // ---- audio / DSP ----
    #[error("not a RIFF/WAVE file")]
    NotWav,
    #[error("unsupported WAV: {0}")]
    UnsupportedWav(String),
    #[error("mono required (file has {0} channels)")]
    MonoRequired(u16),
    #[error("truncated data chunk: expected {expected} bytes, found {actual}")]
    TruncatedWav { expected: usize, actual: usize },
    #[error("clip shorter than one analysis window ({samples} < {window})")]
    ClipTooShort { samples: usize, window: usize },
    #[error("invalid F0 search band: need fmin < fmax < sample_rate/2")]
    InvalidF0Band,

    // ---- TextGrid ----
    #[error("unsupported tier type `{0}` (interval tiers only)")]
    UnsupportedTierType(String),
    #[error("tier `{tier}` interval {index}: intervals are not contiguous")]
    NonContiguousIntervals { tier: String, index: usize },
    #[error("TextGrid parse error at line {line}: {reason}")]
    TextGridParse { line: usize, reason: String },

    // ---- alignment ----
    #[error("unpronounceable corpus words: {}", words.join(", "))]
    UnpronounceableWords { words: Vec<String> },
    #[error("phone `{0}` received no frames during flat start")]
    NoFramesForPhone(String),
    #[error("no valid alignment path: {frames} frames cannot cover {states} states")]
    NoAlignmentPath { frames: usize, states: usize },
    #[error("utterance `{0}`: phone sequence must start and end with silence")]
    MissingEdgeSilence(String),
    #[error("alignment training needs at least one utterance")]
    EmptyCorpus,

    // ---- voice database / package ----
    #[error("{utterance} pos {position}: expected {expected}, found {found}")]
    LabelMismatch {
        utterance: String,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("prosody training needs at least 2 segments")]
    ProsodyTooSmall,
    #[error("voice package: {0}")]
    BadPackage(String),
    #[error("voice package section `{section}` failed its checksum")]
    ChecksumMismatch { section: String },

    // ---- config ----
    #[error("unknown config key `{key}` in {layer} layer")]
    UnknownConfigKey { key: String, layer: String },
    #[error("config key `{key}`: {reason}")]
    BadConfigValue { key: String, reason: String },

    // ---- synthesis ----
    #[error("target/candidate contract violation: {0}")]
    CostContract(String),
    #[error("no units for phone {0}")]
    NoUnitsForPhone(String),
    #[error("invalid unit id {0}")]
    InvalidUnitId(u32),
    #[error("cannot concatenate an empty unit sequence")]
    EmptyUnitSequence,

    // ---- task graph / artifacts ----
    #[error("duplicate task name `{0}`")]
    DuplicateTask(String),
    #[error("output `{path}` claimed by both `{first}` and `{second}`")]
    OutputConflict {
        path: PathBuf,
        first: String,
        second: String,
    },
    #[error("task `{task}` depends on unknown task `{dep}`")]
    UnknownDependency { task: String, dep: String },
    #[error("dependency cycle: {}", names.join(" -> "))]
    TaskCycle { names: Vec<String> },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("task `{task}` failed: {message}")]
    TaskFailed { task: String, message: String },
    #[error("build definition line {line}: {reason}")]
    BadBuildFile { line: usize, reason: String },
    #[error("immutable coordinate: {0} is already published")]
    AlreadyPublished(String),
    #[error("artifact {coordinate} failed integrity check (expected {expected}, got {actual})")]
    IntegrityError {
        coordinate: String,
        expected: String,
        actual: String,
    },
    #[error("manifest error: {0}")]
    BadManifest(String),
    #[error("{}", format_missing_chain(chain, missing))]
    UnresolvedCoordinate {
        chain: Vec<String>,
        missing: String,
    },
    #[error("dependency cycle through {0}")]
    ManifestCycle(String),
    #[error("repository is read-only: {0}")]
    ReadOnlyRepository(String),
    #[error("http error for {url}: {reason}")]
    Http { url: String, reason: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

fn format_missing_chain(chain: &[String], missing: &str) -> String {
    let mut parts: Vec<String> = chain.to_vec();
    parts.push(format!("(missing) {missing}"));
    format!("unresolved dependency: {}", parts.join(" -> "))
}

pub type Result<T> = std::result::Result<T, Error>;
