//! Voice building and unit-selection synthesis toolchain.
//!
//! The crate covers the full path from raw text and recordings to a runnable
//! synthetic voice: phoneme inventories and lexicons compiled into a minimal
//! transducer with decision-tree G2P fallback, text analysis into utterance
//! structure and linguistic features, acoustic feature extraction (MFCC, F0,
//! deltas), forced alignment with flat-start monophone models, halfphone unit
//! databases with prosody trees packaged into a single voice artifact, a
//! deterministic unit-selection runtime, and an incremental task-graph
//! executor with versioned artifact publishing and dependency resolution.

pub mod audio;
pub mod bytes;
pub mod dsp;
pub mod error;
pub mod features;
pub mod fst;
pub mod g2p;
pub mod lang;
pub mod lexicon;
pub mod phoneset;
pub mod syllable;
pub mod textproc;
pub mod utterance;

pub use error::{Error, Result};
