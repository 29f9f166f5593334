//! Attractor sets, verification with witnesses, and the offline tools built
//! on them: substring-complexity lower bounds, minimal-under-removal
//! reduction, leftward/rightward extension assignment, and equidistant
//! markings of de Bruijn words.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automaton::SuffixAutomaton;
use crate::error::{Error, Result};
use crate::lazy::{MarkingTrace, Scope};
use crate::text::{occurrences, substring_counts};

/// A set of 1-based positions with the scope it is meant to attract.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttractorSet {
    positions: Vec<usize>,
    pub scope: Scope,
    pub sharp: bool,
}

impl AttractorSet {
    /// Sorts and deduplicates `positions`. Position `0` is rejected.
    pub fn new(positions: impl IntoIterator<Item = usize>, scope: Scope, sharp: bool) -> Result<Self> {
        let mut positions: Vec<usize> = positions.into_iter().collect();
        positions.sort_unstable();
        positions.dedup();
        if positions.first() == Some(&0) {
            return Err(Error::Domain("attractor positions are 1-based".into()));
        }
        Ok(AttractorSet { positions, scope, sharp })
    }

    /// A full string attractor (unbounded, non-sharp).
    pub fn full(positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(positions, Scope::Unbounded, false)
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn with_scope(mut self, scope: Scope, sharp: bool) -> Self {
        self.scope = scope;
        self.sharp = sharp;
        self
    }

    fn without(&self, pos: usize) -> Self {
        AttractorSet {
            positions: self.positions.iter().copied().filter(|&p| p != pos).collect(),
            scope: self.scope,
            sharp: self.sharp,
        }
    }

    /// Parses comma-separated positions, e.g. `2,4`.
    pub fn parse_positions(s: &str) -> Result<Vec<usize>> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::Domain(format!("bad position {p:?}")))
            })
            .collect()
    }
}

/// Comma-separated positions.
impl fmt::Display for AttractorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.positions.iter().map(usize::to_string).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for AttractorSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttractorSet::full(AttractorSet::parse_positions(s)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub content: String,
    pub occurrences: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    /// On failure: the shortest, then lexicographically least, uncovered substring.
    pub witness: Option<Witness>,
}

/// The lengths a verifier must check on a text of length `n`.
fn length_range(n: usize, scope: Scope, sharp: bool) -> (usize, usize) {
    let k = scope.limit(n).min(n);
    if sharp && matches!(scope, Scope::Bounded(_)) {
        (scope.limit(n), scope.limit(n))
    } else {
        (1, k)
    }
}

/// Checks that every distinct substring in scope has an occurrence
/// containing a position of `set`.
///
/// A substring of length `l` ending at `e` is covered iff the last marked
/// position at or before `e` lies within `l - 1` of `e`. Within one automaton
/// state all strings share their end positions, so the smallest such gap over
/// the state decides a whole interval of lengths at once.
pub fn verify(text: &[u8], set: &AttractorSet) -> Result<VerificationReport> {
    let n = text.len();
    if let Some(&bad) = set.positions.iter().find(|&&p| p > n) {
        return Err(Error::Precondition(format!("position {bad} outside 1..={n}")));
    }
    if n == 0 {
        return Ok(VerificationReport { valid: true, witness: None });
    }
    let (lo, hi) = length_range(n, set.scope, set.sharp);
    if lo > n {
        // Sharp scope longer than the text: nothing to cover.
        return Ok(VerificationReport { valid: true, witness: None });
    }

    // gap[e] = e - (last marking <= e), or infinity.
    let mut gap = vec![usize::MAX; n + 1];
    let mut marks = set.positions.iter().peekable();
    let mut prev = None;
    for (e, g) in gap.iter_mut().enumerate().skip(1) {
        while marks.peek().is_some_and(|&&p| p <= e) {
            prev = marks.next().copied();
        }
        if let Some(p) = prev {
            *g = e - p;
        }
    }

    let sam = SuffixAutomaton::build(text);
    let mut min_gap = vec![usize::MAX; sam.state_count()];
    for s in 1..sam.state_count() {
        if !sam.is_clone(s) {
            min_gap[s] = gap[sam.first_end(s)];
        }
    }
    for s in sam.states_by_len_desc() {
        if let Some(link) = sam.link(s) {
            min_gap[link] = min_gap[link].min(min_gap[s]);
        }
    }

    // Uncovered lengths of state s: (link_len, min(len, min_gap)] within [lo, hi].
    let mut shortest = usize::MAX;
    let uncovered = |s: usize| -> Option<(usize, usize)> {
        let from = (sam.link_len(s) + 1).max(lo);
        let to = sam.len(s).min(min_gap[s]).min(hi);
        (from <= to).then_some((from, to))
    };
    for s in 1..sam.state_count() {
        if let Some((from, _)) = uncovered(s) {
            shortest = shortest.min(from);
        }
    }
    if shortest == usize::MAX {
        return Ok(VerificationReport { valid: true, witness: None });
    }
    let content = (1..sam.state_count())
        .filter(|&s| uncovered(s).is_some_and(|(from, to)| from <= shortest && shortest <= to))
        .map(|s| {
            let end = sam.first_end(s);
            &text[end - shortest..end]
        })
        .min()
        .expect("some state attains the shortest length");
    let occ = occurrences(text, content)?;
    Ok(VerificationReport {
        valid: false,
        witness: Some(Witness { content: String::from_utf8_lossy(content).into_owned(), occurrences: occ }),
    })
}

pub fn is_valid(text: &[u8], set: &AttractorSet) -> bool {
    verify(text, set).is_ok_and(|r| r.valid)
}

/// `⌈d_l / l⌉`, a lower bound on any `l'`-attractor with `l' >= l`.
pub fn complexity_lower_bound(text: &[u8], l: usize) -> Result<usize> {
    if l == 0 || l > text.len() {
        return Err(Error::Domain(format!("length {l} not in 1..={}", text.len())));
    }
    let d = substring_counts(text, l)[l - 1];
    Ok(d.div_ceil(l))
}

/// Removes positions while the set stays valid, scanning ascending and
/// restarting after each removal.
pub fn minimal_reduce(text: &[u8], set: &AttractorSet) -> Result<AttractorSet> {
    if !verify(text, set)?.valid {
        return Err(Error::Precondition("input set is not a valid attractor".into()));
    }
    let mut cur = set.clone();
    'scan: loop {
        for &p in &cur.positions {
            let candidate = cur.without(p);
            if verify(text, &candidate)?.valid {
                cur = candidate;
                continue 'scan;
            }
        }
        return Ok(cur);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Leftward,
    Rightward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub marking: usize,
    pub trigger: String,
    pub direction: Direction,
    /// 1-based start of the length-`k` extension.
    pub start: usize,
    pub extension: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionAssignment {
    pub k: usize,
    /// First position of the first run of `k - 1` unmarked positions.
    pub gap_start: usize,
    pub extensions: Vec<Extension>,
}

impl ExtensionAssignment {
    /// The collected set `S` of distinct extensions.
    pub fn set(&self) -> HashSet<&str> {
        self.extensions.iter().map(|e| e.extension.as_str()).collect()
    }
}

/// First run of `len` unmarked positions, between markings or after the
/// last one. Returns its first position.
fn first_unmarked_run(markings: &[usize], n: usize, len: usize) -> Option<usize> {
    let mut prev = 0;
    for &m in markings.iter().chain(std::iter::once(&(n + 1))) {
        // Unmarked positions prev+1 ..= m-1; runs before the first marking
        // do not count.
        if prev > 0 && m - prev > len {
            return Some(prev + 1);
        }
        prev = m;
    }
    None
}

/// Maps every marking of a non-sharp k-trace to a distinct length-`k`
/// substring: rightward extensions before the first run of `k - 1`
/// unmarked positions, leftward extensions after it.
pub fn assign_extensions(text: &[u8], trace: &MarkingTrace, k: usize) -> Result<ExtensionAssignment> {
    if trace.sharp || trace.scope != Scope::Bounded(k) {
        return Err(Error::Precondition(format!("trace must come from a non-sharp {k}-attractor run")));
    }
    let n = text.len();
    let gap_start = if k == 1 {
        // Every trigger is a single symbol and is its own extension.
        1
    } else {
        first_unmarked_run(&trace.markings, n, k - 1).ok_or(Error::GapLemmaApplies { needed: k - 1 })?
    };
    let mut extensions = Vec::with_capacity(trace.cost());
    for (&marking, trig) in trace.markings.iter().zip(&trace.triggers) {
        let x = trig.start;
        let ki = trig.length();
        let (direction, start) = if marking < gap_start && k > 1 {
            (Direction::Rightward, x)
        } else {
            let start = (x + ki)
                .checked_sub(k)
                .filter(|&s| s >= 1)
                .ok_or_else(|| Error::Integrity(format!("leftward extension of marking {marking} leaves the text")))?;
            (Direction::Leftward, start)
        };
        let end = start + k - 1;
        if end > n {
            return Err(Error::Integrity(format!("rightward extension of marking {marking} leaves the text")));
        }
        extensions.push(Extension {
            marking,
            trigger: String::from_utf8_lossy(&text[x - 1..trig.end]).into_owned(),
            direction,
            start,
            extension: String::from_utf8_lossy(&text[start - 1..end]).into_owned(),
        });
    }
    let assignment = ExtensionAssignment { k, gap_start, extensions };
    if assignment.set().len() != trace.cost() {
        return Err(Error::Integrity("extensions are not pairwise distinct".into()));
    }
    Ok(assignment)
}

/// Positions `phase, phase + k, phase + 2k, …` up to `len`.
pub fn equidistant_attractor(len: usize, k: usize, phase: usize) -> Result<AttractorSet> {
    if k == 0 || !(1..=k).contains(&phase) {
        return Err(Error::Domain(format!("phase {phase} not in 1..={k}")));
    }
    AttractorSet::new((phase..=len).step_by(k), Scope::Bounded(k), false)
}
