//! Lempel-Ziv factorization in four variants: self-referencing or not,
//! novel or not.
//!
//! A non-novel phrase is the longest prefix of the remaining text with an
//! earlier occurrence (a fresh symbol otherwise). A novel phrase extends that
//! by one symbol, so it is the shortest prefix without an earlier occurrence.
//! "Earlier" means starting before the phrase when self-referencing, and
//! lying entirely inside the already parsed prefix otherwise.
//!
//! All four parsers drive the same online suffix automaton, so a factorization
//! costs linear time.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{Cursor, SuffixAutomaton, ROOT};
use crate::error::{Error, Result};
use crate::text::Text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VariantFlags {
    pub self_referencing: bool,
    pub novel: bool,
}

impl VariantFlags {
    /// The variant as originally defined: self-referencing and novel.
    pub const CLASSIC: VariantFlags = VariantFlags { self_referencing: true, novel: true };

    pub const fn new(self_referencing: bool, novel: bool) -> Self {
        VariantFlags { self_referencing, novel }
    }

    pub fn all() -> [VariantFlags; 4] {
        [
            VariantFlags::new(true, true),
            VariantFlags::new(true, false),
            VariantFlags::new(false, true),
            VariantFlags::new(false, false),
        ]
    }
}

/// One phrase. `source` is the 1-based start of the leftmost earlier
/// occurrence of the referenced part: the whole phrase for non-novel
/// variants, all but the last symbol for novel ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phrase {
    pub start: usize,
    pub length: usize,
    pub source: Option<usize>,
}

impl Phrase {
    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub text: Text,
    pub phrases: Vec<Phrase>,
    pub flags: VariantFlags,
    /// The last phrase ran into the end of the text while its whole content
    /// still had an earlier occurrence.
    pub truncated_tail: bool,
}

impl Factorization {
    pub fn phrase_count(&self) -> usize {
        self.phrases.len()
    }

    /// The factorization size `z`: phrases terminated by the parsing rule.
    /// A last phrase that merely ran into the end of the text is not counted.
    pub fn size(&self) -> usize {
        self.phrases.len() - usize::from(self.truncated_tail)
    }

    pub fn phrase_content(&self, i: usize) -> &[u8] {
        let p = &self.phrases[i];
        self.text.factor(p.start, p.end())
    }

    /// End positions of the phrases that are first occurrences of their content.
    pub fn novel_phrase_ends(&self) -> Vec<usize> {
        let mut ends: Vec<usize> = self.phrases.iter().map(Phrase::end).collect();
        if self.flags.novel && self.truncated_tail {
            ends.pop();
        }
        ends
    }

    pub fn records(&self) -> Vec<PhraseRecord> {
        self.phrases
            .iter()
            .enumerate()
            .map(|(i, p)| PhraseRecord {
                index: i + 1,
                start: p.start,
                length: p.length,
                source: p.source,
                content: String::from_utf8_lossy(self.phrase_content(i)).into_owned(),
            })
            .collect()
    }

    /// `a|aab|ba` style rendering.
    pub fn bars(&self) -> String {
        (0..self.phrases.len())
            .map(|i| String::from_utf8_lossy(self.phrase_content(i)).into_owned())
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Renders `content(start←source)|...`, with `content(start)` for phrases
/// without a source.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.phrases.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let content = String::from_utf8_lossy(self.phrase_content(i));
            match p.source {
                Some(s) => write!(f, "{content}({}←{s})", p.start)?,
                None => write!(f, "{content}({})", p.start)?,
            }
        }
        Ok(())
    }
}

/// Machine-readable phrase row for csv/json output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhraseRecord {
    pub index: usize,
    pub start: usize,
    pub length: usize,
    pub source: Option<usize>,
    pub content: String,
}

impl Factorization {
    /// Length of the part of phrase `i` copied from its source.
    pub fn referenced_len(&self, i: usize) -> usize {
        let p = &self.phrases[i];
        let tail = self.truncated_tail && i + 1 == self.phrases.len();
        match p.source {
            None => 0,
            Some(_) if self.flags.novel && !tail => p.length - 1,
            Some(_) => p.length,
        }
    }
}

pub fn lz_factorize(text: &Text, flags: VariantFlags) -> Factorization {
    let (phrases, truncated_tail) = if flags.self_referencing {
        parse_self_referencing(text, flags.novel)
    } else {
        parse_contained(text, flags.novel)
    };
    Factorization { text: text.clone(), phrases, flags, truncated_tail }
}

// Self-referencing sources may overlap the phrase: an extension by symbol c
// is allowed iff the current phrase plus c occurs in t[1..i-1].
fn parse_self_referencing(t: &[u8], novel: bool) -> (Vec<Phrase>, bool) {
    let mut sam = SuffixAutomaton::with_capacity(t.len());
    let mut phrases = Vec::new();
    let mut cur = Cursor::EMPTY;
    let mut start = 1;
    let mut source = None;
    let mut i = 1;
    while i <= t.len() {
        let c = t[i - 1];
        if let Some(next) = sam.transition(cur.state, c) {
            cur = Cursor { state: next, len: cur.len + 1 };
            source = Some(cur.first_start(&sam));
            let split = sam.extend(c);
            cur.rehome(&sam, split);
            i += 1;
            continue;
        }
        if novel || cur.len == 0 {
            // Novel phrase ends here, or a fresh symbol forms its own phrase.
            phrases.push(Phrase { start, length: i - start + 1, source: source.take() });
            sam.extend(c);
            cur = Cursor::EMPTY;
            start = i + 1;
            i += 1;
        } else {
            // Longest repeat ends before i; re-read t[i] from a fresh phrase.
            phrases.push(Phrase { start, length: i - start, source: source.take() });
            cur = Cursor::EMPTY;
            start = i;
        }
    }
    // Anything left was accepted symbol by symbol: it all occurs earlier.
    let truncated = start <= t.len();
    if truncated {
        phrases.push(Phrase { start, length: t.len() - start + 1, source });
    }
    (phrases, truncated)
}

// Sources must lie inside the parsed prefix: walk the automaton of t[1..start-1]
// without growing it, then absorb the whole phrase.
fn parse_contained(t: &[u8], novel: bool) -> (Vec<Phrase>, bool) {
    let mut sam = SuffixAutomaton::with_capacity(t.len());
    let mut phrases = Vec::new();
    let mut start = 1;
    let mut truncated = false;
    while start <= t.len() {
        let mut state = ROOT;
        let mut len = 0;
        while start + len <= t.len() {
            match sam.transition(state, t[start + len - 1]) {
                Some(next) => {
                    state = next;
                    len += 1;
                }
                None => break,
            }
        }
        let source = (len > 0).then(|| sam.first_end(state) + 1 - len);
        let at_end = start + len > t.len();
        truncated = at_end;
        let length = if at_end {
            len
        } else if novel || len == 0 {
            len + 1
        } else {
            len
        };
        phrases.push(Phrase { start, length, source });
        for &c in &t[start - 1..start - 1 + length] {
            sam.extend(c);
        }
        start += length;
    }
    (phrases, truncated)
}

/// Concatenates phrase contents, checking tiling and sources.
pub fn reconstruct(f: &Factorization) -> Result<Text> {
    let mut out: Vec<u8> = Vec::with_capacity(f.text.len());
    for (i, p) in f.phrases.iter().enumerate() {
        if p.length == 0 {
            return Err(Error::Integrity(format!("phrase {} is empty", i + 1)));
        }
        if p.start != out.len() + 1 {
            return Err(Error::Integrity(format!(
                "phrase {} starts at {}, expected {}",
                i + 1,
                p.start,
                out.len() + 1
            )));
        }
        let end = p.end();
        if end > f.text.len() {
            return Err(Error::Integrity(format!("phrase {} runs past the text", i + 1)));
        }
        let referenced = f.referenced_len(i);
        if let Some(src) = p.source {
            let limit = if f.flags.self_referencing { p.start - 1 } else { p.start - referenced };
            if src == 0 || src > limit {
                return Err(Error::Integrity(format!(
                    "phrase {} has source {src} outside 1..={limit}",
                    i + 1
                )));
            }
            // Copy symbol by symbol so overlapping sources replay correctly.
            for off in 0..referenced {
                let c = out[src - 1 + off];
                out.push(c);
            }
        }
        out.extend_from_slice(&f.text[p.start - 1 + referenced..end]);
    }
    if out.len() != f.text.len() {
        return Err(Error::Integrity(format!(
            "phrases cover {} of {} symbols",
            out.len(),
            f.text.len()
        )));
    }
    if out != f.text.as_bytes() {
        return Err(Error::Integrity("phrase sources do not reproduce the text".into()));
    }
    Ok(Text::new(out))
}
