//! Deterministic phrase sets for trials.
//!
//! Digit trials are ten-digit numbers; text trials are 9 to 20 characters
//! built from a bundled word list.

use std::ops::RangeInclusive;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::layout::{KeyAction, Layout, Method};

pub const DIGIT_PHRASE_LEN: usize = 10;
pub const TEXT_PHRASE_LEN: RangeInclusive<usize> = 9..=20;

const WORDS: &str = include_str!("../data/words.txt");

fn words() -> Vec<&'static str> {
    WORDS.lines().map(str::trim).filter(|w| !w.is_empty()).collect()
}

pub fn digit_phrases(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..DIGIT_PHRASE_LEN)
                .map(|_| char::from(b'0' + rng.random_range(0..10u8)))
                .collect()
        })
        .collect()
}

/// Lowercase word phrases, 9 to 20 characters long.
pub fn text_phrases(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = words();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let target = rng.random_range(TEXT_PHRASE_LEN);
        let mut phrase = String::new();
        loop {
            let w = words.choose(&mut rng).expect("word list is not empty");
            let extra = if phrase.is_empty() { w.len() } else { w.len() + 1 };
            if phrase.len() + extra > *TEXT_PHRASE_LEN.end() {
                break;
            }
            if !phrase.is_empty() {
                phrase.push(' ');
            }
            phrase.push_str(w);
            if phrase.len() >= target {
                break;
            }
        }
        if TEXT_PHRASE_LEN.contains(&phrase.len()) {
            out.push(phrase);
        }
    }
    out
}

/// The trial phrase set for a method.
pub fn phrases_for(method: Method, count: usize, seed: u64) -> Vec<String> {
    match method {
        Method::SingleDigitFdi | Method::DoubleDigitFdi => digit_phrases(count, seed),
        Method::Fti => text_phrases(count, seed),
    }
}

/// Every symbol `layout` can commit, in slot order. Letters appear in both
/// cases for text layouts.
pub fn producible_symbols(layout: &Layout) -> Vec<char> {
    let mut out = Vec::new();
    for (_, action) in layout.slots() {
        if let Some(cycle) = action.cycle() {
            for c in cycle {
                if !out.contains(&c) {
                    out.push(c);
                }
                let lower = c.to_ascii_lowercase();
                if matches!(action, KeyAction::LetterGroup { .. }) && !out.contains(&lower) {
                    out.push(lower);
                }
            }
        }
    }
    out
}

/// Uniformly random strings over the layout's producible symbols.
pub fn random_phrases(layout: &Layout, count: usize, seed: u64, len: RangeInclusive<usize>) -> Vec<String> {
    let symbols = producible_symbols(layout);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(len.clone());
            (0..n)
                .map(|_| *symbols.choose(&mut rng).expect("layout has symbols"))
                .collect()
        })
        .collect()
}

/// One phrase per line; blank lines and `#` comments are skipped. Leading
/// and trailing spaces are kept.
pub fn parse_phrase_file(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}
