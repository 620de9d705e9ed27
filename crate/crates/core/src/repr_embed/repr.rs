use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A token's shape: letters collapsed to `w`, digits to `x`, and every run of
/// identical characters reduced to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Representation(String);

impl Representation {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Wraps an already-computed representation string.
    pub fn from_repr_string(s: impl Into<String>) -> Self {
        Representation(s.into())
    }

    pub fn chars(&self) -> Vec<char> {
        self.0.chars().collect()
    }

    /// Whether the representation came from a token containing a digit.
    pub fn has_digit(&self) -> bool {
        self.0.contains('x')
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Maps a word to its representation.
///
/// Any Unicode letter becomes `w` and any Unicode numeric character becomes
/// `x`; everything else is kept. Runs of an identical character are then
/// collapsed, so `"Precision-Recall"` gives `"w-w"` and `"12.5"` gives `"x.x"`.
pub fn word2repr(word: &str) -> Result<Representation> {
    if word.is_empty() {
        return Err(Error::invalid("word2repr needs a non-empty word"));
    }
    let mut out = String::with_capacity(word.len());
    let mut last = None;
    for c in word.chars() {
        let mapped = if c.is_alphabetic() {
            'w'
        } else if c.is_numeric() {
            'x'
        } else {
            c
        };
        if last != Some(mapped) {
            out.push(mapped);
            last = Some(mapped);
        }
    }
    Ok(Representation(out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedRepr {
    pub repr: Representation,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRank {
    pub entries: Vec<RankedRepr>,
    /// Set when fewer than the requested number of distinct representations
    /// were found.
    pub fewer_than_l: bool,
}

/// Counts cell representations and keeps the `l` most frequent ones.
///
/// Ordering is by descending count, ties broken lexicographically. Empty
/// cells are skipped.
pub fn rank_representations<'a, I>(cells: I, l: usize) -> Result<FrequencyRank>
where
    I: IntoIterator<Item = &'a str>,
{
    if l == 0 {
        return Err(Error::invalid("l must be at least 1"));
    }
    let mut counts: HashMap<Representation, u64> = HashMap::new();
    for cell in cells {
        if cell.is_empty() {
            continue;
        }
        *counts.entry(word2repr(cell)?).or_default() += 1;
    }
    if counts.is_empty() {
        return Err(Error::invalid("no cells"));
    }
    let mut entries: Vec<RankedRepr> = counts
        .into_iter()
        .map(|(repr, count)| RankedRepr { repr, count })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.repr.cmp(&b.repr)));
    let fewer_than_l = entries.len() < l;
    if fewer_than_l {
        log::warn!(
            "only {} distinct representations, fewer than the requested {l}",
            entries.len()
        );
    }
    entries.truncate(l);
    Ok(FrequencyRank {
        entries,
        fewer_than_l,
    })
}
