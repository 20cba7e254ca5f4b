//! Tokenization and token normalization.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Number,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    /// Pronounceable word expansion; empty for punctuation.
    pub normalized: Vec<String>,
}

/// Split text into word, number, and punctuation tokens. Concatenating the
/// surfaces reproduces the input minus whitespace.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() {
                let c = chars[i];
                if c.is_ascii_digit() {
                    i += 1;
                } else if (c == '.' || c == ',')
                    && chars.get(i + 1).map(|n| n.is_ascii_digit()).unwrap_or(false)
                {
                    // Separator only counts between digits.
                    i += 1;
                } else {
                    break;
                }
            }
            let surface: String = chars[start..i].iter().collect();
            tokens.push(Token {
                surface,
                kind: TokenKind::Number,
                normalized: Vec::new(),
            });
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphabetic() {
                i += 1;
            }
            let surface: String = chars[start..i].iter().collect();
            let normalized = vec![surface.to_lowercase()];
            tokens.push(Token {
                surface,
                kind: TokenKind::Word,
                normalized,
            });
        } else {
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && !chars[i].is_alphabetic()
                && !chars[i].is_ascii_digit()
            {
                i += 1;
            }
            let surface: String = chars[start..i].iter().collect();
            tokens.push(Token {
                surface,
                kind: TokenKind::Punctuation,
                normalized: Vec::new(),
            });
        }
    }
    tokens
}

/// Expand a token into pronounceable lowercase words. `in_lexicon` reports
/// whether a word has a lexicon entry; all-caps words of length <= 5 that do
/// not are spelled out letter by letter.
pub fn normalize_token(
    tok: &Token,
    in_lexicon: &dyn Fn(&str) -> bool,
) -> Result<Vec<String>> {
    match tok.kind {
        TokenKind::Punctuation => Err(Error::PunctuationNormalize(tok.surface.clone())),
        TokenKind::Number => {
            let digits: String = tok
                .surface
                .chars()
                .filter(|c| c.is_ascii_digit())
                .collect();
            let value: u64 = digits
                .parse()
                .map_err(|_| Error::NumberOutOfRange(tok.surface.clone()))?;
            if value > 999_999 {
                return Err(Error::NumberOutOfRange(tok.surface.clone()));
            }
            Ok(number_words(value))
        }
        TokenKind::Word => {
            let lower = tok.surface.to_lowercase();
            let chars: Vec<char> = tok.surface.chars().collect();
            let all_caps = chars.iter().all(|c| c.is_uppercase());
            if all_caps && chars.len() <= 5 && !in_lexicon(&lower) {
                Ok(lower.chars().map(|c| c.to_string()).collect())
            } else {
                Ok(vec![lower])
            }
        }
    }
}

const ONES: [&str; 20] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen",
    "nineteen",
];
const TENS: [&str; 10] = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

/// English number names for 0..=999999, one word per element.
pub fn number_words(n: u64) -> Vec<String> {
    assert!(n <= 999_999);
    if n == 0 {
        return vec!["zero".to_string()];
    }
    let mut words = Vec::new();
    push_number(n, &mut words);
    words
}

fn push_number(n: u64, out: &mut Vec<String>) {
    if n >= 1000 {
        push_under_thousand(n / 1000, out);
        out.push("thousand".to_string());
        if n % 1000 != 0 {
            push_under_thousand(n % 1000, out);
        }
    } else {
        push_under_thousand(n, out);
    }
}

fn push_under_thousand(n: u64, out: &mut Vec<String>) {
    debug_assert!(n > 0 && n < 1000);
    if n >= 100 {
        out.push(ONES[(n / 100) as usize].to_string());
        out.push("hundred".to_string());
        if n % 100 != 0 {
            push_under_hundred(n % 100, out);
        }
    } else {
        push_under_hundred(n, out);
    }
}

fn push_under_hundred(n: u64, out: &mut Vec<String>) {
    debug_assert!(n > 0 && n < 100);
    if n < 20 {
        out.push(ONES[n as usize].to_string());
    } else {
        out.push(TENS[(n / 10) as usize].to_string());
        if n % 10 != 0 {
            out.push(ONES[(n % 10) as usize].to_string());
        }
    }
}
