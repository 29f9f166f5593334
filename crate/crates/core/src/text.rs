//! Texts, alphabets and substring statistics.
//!
//! Positions in every public contract are 1-based: a text of length `n`
//! has positions `1..=n`.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::automaton::SuffixAutomaton;
use crate::error::{Error, Result};

/// Ordered set of distinct byte symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(symbols: impl Into<Vec<u8>>) -> Result<Self> {
        let symbols = symbols.into();
        if symbols.is_empty() {
            return Err(Error::Domain("alphabet must not be empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Domain(format!(
                    "duplicate symbol {:?} in alphabet",
                    *s as char
                )));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The first `sigma` lowercase letters.
    pub fn lowercase(sigma: usize) -> Result<Self> {
        if !(1..=26).contains(&sigma) {
            return Err(Error::Domain(format!("alphabet size {sigma} not in 1..=26")));
        }
        Ok(Alphabet { symbols: (b'a'..).take(sigma).collect() })
    }

    /// Symbols occurring in `text`, in byte order.
    pub fn of(text: &[u8]) -> Self {
        let mut seen = [false; 256];
        for &c in text {
            seen[c as usize] = true;
        }
        let symbols = (0..=255u8).filter(|&c| seen[c as usize]).collect();
        Alphabet { symbols }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.symbols.contains(&symbol)
    }

    /// Rank of `symbol` in the alphabet order.
    pub fn rank(&self, symbol: u8) -> Option<usize> {
        self.symbols.iter().position(|&s| s == symbol)
    }

    pub fn symbol(&self, rank: usize) -> u8 {
        self.symbols[rank]
    }
}

/// An immutable finite word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Text(Vec<u8>);

impl Text {
    pub fn new(content: impl Into<Vec<u8>>) -> Self {
        Text(content.into())
    }

    /// Builds a text, rejecting symbols outside `alphabet`.
    pub fn over(alphabet: &Alphabet, content: impl Into<Vec<u8>>) -> Result<Self> {
        let content = content.into();
        if let Some(&bad) = content.iter().find(|&&c| !alphabet.contains(c)) {
            return Err(Error::UnknownSymbol { symbol: bad as char });
        }
        Ok(Text(content))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    /// Symbol at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> u8 {
        self.0[pos - 1]
    }

    /// The factor `t[start..=end]`, 1-based and inclusive.
    pub fn factor(&self, start: usize, end: usize) -> &[u8] {
        &self.0[start - 1..end]
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::of(&self.0)
    }

    pub fn reversed(&self) -> Text {
        Text(self.0.iter().rev().copied().collect())
    }
}

impl Deref for Text {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl AsRef<[u8]> for Text {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl From<&str> for Text {
    fn from(s: &str) -> Self {
        Text(s.as_bytes().to_vec())
    }
}

impl From<String> for Text {
    fn from(s: String) -> Self {
        Text(s.into_bytes())
    }
}

impl From<Vec<u8>> for Text {
    fn from(v: Vec<u8>) -> Self {
        Text(v)
    }
}

impl From<&[u8]> for Text {
    fn from(v: &[u8]) -> Self {
        Text(v.to_vec())
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Text({:?})", String::from_utf8_lossy(&self.0))
    }
}

/// All 1-based start positions of `pattern` in `text`, overlaps included.
pub fn occurrences(text: &[u8], pattern: &[u8]) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.len() > text.len() {
        return Ok(Vec::new());
    }
    // Z-function over pattern ++ text, comparing through index arithmetic.
    let m = pattern.len();
    let total = m + text.len();
    let at = |i: usize| if i < m { pattern[i] } else { text[i - m] };
    let mut z = vec![0usize; total];
    let (mut l, mut r) = (0, 0);
    let mut out = Vec::new();
    for i in 1..total {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        // A match never runs past the pattern, so the virtual separator is implicit.
        while i + k < total && k < m && at(k) == at(i + k) {
            k += 1;
        }
        z[i] = k;
        if i + k > r {
            l = i;
            r = i + k;
        }
        if i >= m && k >= m {
            out.push(i - m + 1);
        }
    }
    Ok(out)
}

/// End position of the leftmost occurrence of `pattern`, if any.
pub fn first_occurrence_end(text: &[u8], pattern: &[u8]) -> Result<Option<usize>> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(text
        .windows(pattern.len())
        .position(|w| w == pattern)
        .map(|p| p + pattern.len()))
}

pub fn is_palindrome(text: &[u8]) -> bool {
    text.iter().eq(text.iter().rev())
}

/// Distinct-substring counts per length and the derived `delta` measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    /// `counts[l - 1]` is the number of distinct substrings of length `l`.
    pub counts: Vec<usize>,
    /// `delta` as the reduced fraction `(numerator, denominator)`.
    pub delta: (usize, usize),
}

impl ComplexityProfile {
    pub fn count(&self, l: usize) -> usize {
        self.counts.get(l.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn delta_f64(&self) -> f64 {
        if self.delta.1 == 0 {
            0.0
        } else {
            self.delta.0 as f64 / self.delta.1 as f64
        }
    }
}

/// Counts distinct substrings of every length `1..=max_len`.
///
/// `delta` is the maximum of `d_l / l` over those lengths.
pub fn complexity_profile(text: &[u8], max_len: usize) -> Result<ComplexityProfile> {
    if text.is_empty() {
        return Ok(ComplexityProfile { counts: Vec::new(), delta: (0, 1) });
    }
    if max_len == 0 || max_len > text.len() {
        return Err(Error::Domain(format!(
            "length bound {max_len} not in 1..={}",
            text.len()
        )));
    }
    let counts = substring_counts(text, max_len);
    let mut best = (0usize, 1usize);
    for (i, &d) in counts.iter().enumerate() {
        let l = i + 1;
        // d / l > best.0 / best.1
        if d * best.1 > best.0 * l {
            best = (d, l);
        }
    }
    let g = gcd(best.0, best.1);
    Ok(ComplexityProfile { counts, delta: (best.0 / g, best.1 / g) })
}

/// `d_l` for `l` in `1..=max_len` via the length intervals of automaton states.
pub(crate) fn substring_counts(text: &[u8], max_len: usize) -> Vec<usize> {
    let sam = SuffixAutomaton::build(text);
    let mut diff = vec![0isize; max_len + 2];
    for s in 1..sam.state_count() {
        let lo = sam.link_len(s) + 1;
        let hi = sam.len(s).min(max_len);
        if lo <= hi {
            diff[lo] += 1;
            diff[hi + 1] -= 1;
        }
    }
    let mut acc = 0isize;
    (1..=max_len)
        .map(|l| {
            acc += diff[l];
            acc as usize
        })
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn naive_occurrences(t: &[u8], w: &[u8]) -> Vec<usize> {
        (0..t.len())
            .filter(|&i| t[i..].starts_with(w))
            .map(|i| i + 1)
            .collect()
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(b"abaab", b"ab").unwrap(), vec![1, 4]);
        assert_eq!(occurrences(b"aaaa", b"aa").unwrap(), vec![1, 2, 3]);
        assert_eq!(occurrences(b"abaab", b"aba").unwrap(), vec![1]);
        assert_eq!(occurrences(b"ab", b"abc").unwrap(), Vec::<usize>::new());
        assert_eq!(occurrences(b"abaab", b""), Err(Error::EmptyPattern));
    }

    #[test]
    fn first_occurrence_examples() {
        assert_eq!(first_occurrence_end(b"abaab", b"aab").unwrap(), Some(5));
        assert_eq!(first_occurrence_end(b"abaab", b"bb").unwrap(), None);
        assert_eq!(first_occurrence_end(b"aaaa", b"aaa").unwrap(), Some(3));
        assert!(first_occurrence_end(b"aaaa", b"").is_err());
    }

    #[test]
    fn profile_examples() {
        let p = complexity_profile(b"abaab", 5).unwrap();
        assert_eq!(p.counts, vec![2, 3, 3, 2, 1]);
        assert_eq!(p.delta, (2, 1));

        let p = complexity_profile(b"aaaa", 4).unwrap();
        assert_eq!(p.counts, vec![1, 1, 1, 1]);
        assert_eq!(p.delta, (1, 1));

        let p = complexity_profile(b"", 3).unwrap();
        assert!(p.counts.is_empty());
        assert_eq!(p.delta_f64(), 0.0);

        assert!(complexity_profile(b"ab", 3).is_err());
        assert!(complexity_profile(b"ab", 0).is_err());
    }

    #[test]
    fn delta_matches_direct_maximum() {
        let p = complexity_profile(b"abcacbba", 8).unwrap();
        let best = p
            .counts
            .iter()
            .enumerate()
            .map(|(i, &d)| d as f64 / (i + 1) as f64)
            .fold(0.0, f64::max);
        assert!((p.delta_f64() - best).abs() < 1e-12);
    }

    #[test]
    fn palindromes() {
        assert!(is_palindrome(b"aba"));
        assert!(!is_palindrome(b"abaa"));
        assert!(is_palindrome(b"abaaba"));
        assert!(is_palindrome(b""));
    }

    #[test]
    fn alphabet_rules() {
        assert!(Alphabet::new(*b"aba").is_err());
        assert!(Alphabet::new(Vec::new()).is_err());
        let sigma = Alphabet::lowercase(3).unwrap();
        assert_eq!(sigma.symbols(), b"abc");
        assert_eq!(sigma.rank(b'c'), Some(2));
        assert!(Text::over(&sigma, *b"abd").is_err());
        assert_eq!(Alphabet::of(b"cabca").symbols(), b"abc");
    }

    proptest! {
        #[test]
        fn occurrences_match_naive_scan(
            t in proptest::collection::vec(0u8..3, 0..200),
            w in proptest::collection::vec(0u8..3, 1..6),
        ) {
            prop_assert_eq!(occurrences(&t, &w).unwrap(), naive_occurrences(&t, &w));
        }

        #[test]
        fn profile_matches_hashing(t in proptest::collection::vec(0u8..4, 1..500)) {
            let max_len = t.len().min(40);
            let p = complexity_profile(&t, max_len).unwrap();
            for l in 1..=max_len {
                let set: HashSet<&[u8]> = t.windows(l).collect();
                prop_assert_eq!(p.count(l), set.len());
                prop_assert!(p.count(l) <= t.len() - l + 1);
            }
            prop_assert_eq!(p.count(1), Alphabet::of(&t).size());
            prop_assert!(p.delta_f64() >= 1.0);
        }

        #[test]
        fn profile_invariant_under_renaming(t in proptest::collection::vec(0u8..3, 1..80)) {
            let renamed: Vec<u8> = t.iter().map(|&c| b"xqa"[c as usize]).collect();
            let n = t.len();
            prop_assert_eq!(complexity_profile(&t, n).unwrap(), complexity_profile(&renamed, n).unwrap());
        }
    }
}
