//! The Lazy online algorithm for (sharp) k-attractors and string attractors.
//!
//! Lazy reads the text left to right and marks position `i` exactly when the
//! window ending at `i` is a first occurrence. With `j` the last marking:
//!
//! * non-sharp: the window is `t[max(j+1, i-k+1) ..= i]`;
//! * sharp: the window is `t[i-k+1 ..= i]`, and a marking is only placed
//!   when that window starts after `j`.
//!
//! Every decision at step `i` reads only `t[1..=i]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{Cursor, SuffixAutomaton};
use crate::error::{Error, Result};
use crate::lz::{lz_factorize, VariantFlags};
use crate::text::Text;
use crate::words::{fibonacci_word, periodic_directive, sturmian_word, thue_morse_word};

/// How far a k-attractor looks: substrings up to length `k`, or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Bounded(usize),
    Unbounded,
}

impl Scope {
    /// `0` denotes the unbounded scope.
    pub fn from_k(k: usize) -> Scope {
        if k == 0 {
            Scope::Unbounded
        } else {
            Scope::Bounded(k)
        }
    }

    /// The window bound on a text of length `n`.
    pub fn limit(self, n: usize) -> usize {
        match self {
            Scope::Bounded(k) => k,
            Scope::Unbounded => n.max(1),
        }
    }

    /// The CLI encoding, `0` for unbounded.
    pub fn as_k(self) -> usize {
        match self {
            Scope::Bounded(k) => k,
            Scope::Unbounded => 0,
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Bounded(k) => write!(f, "{k}"),
            Scope::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// The novel substring `t[start..=end]` that forced a marking at `end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trigger {
    pub start: usize,
    pub end: usize,
}

impl Trigger {
    pub fn length(&self) -> usize {
        self.end + 1 - self.start
    }
}

/// One row per input step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub marked: bool,
    pub window_start: usize,
    pub window_end: usize,
    pub novel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingTrace {
    pub scope: Scope,
    pub sharp: bool,
    pub markings: Vec<usize>,
    pub triggers: Vec<Trigger>,
    pub steps: Vec<StepRecord>,
}

impl MarkingTrace {
    pub fn cost(&self) -> usize {
        self.markings.len()
    }

    pub fn summary(&self) -> TraceSummary {
        TraceSummary {
            k: self.scope.as_k(),
            sharp: self.sharp,
            cost: self.cost(),
            markings: self.markings.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
        }
    }

    /// Markings placed at or before step `i`.
    pub fn markings_upto(&self, i: usize) -> &[usize] {
        let end = self.markings.partition_point(|&m| m <= i);
        &self.markings[..end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub k: usize,
    pub sharp: bool,
    pub cost: usize,
    pub markings: String,
}

/// Sharp scopes only make sense for a fixed `k`; unbounded sharp runs are
/// treated as the plain string attractor problem.
fn normalize(scope: Scope, sharp: bool) -> bool {
    sharp && matches!(scope, Scope::Bounded(_))
}

/// Runs Lazy over `text` with one suffix-automaton step per symbol.
pub fn lazy_run(text: &[u8], scope: Scope, sharp: bool) -> MarkingTrace {
    let sharp = normalize(scope, sharp);
    let n = text.len();
    let k = scope.limit(n);
    let mut sam = SuffixAutomaton::with_capacity(n);
    // Non-sharp: the window minus its last symbol, t[ws..i-1].
    // Sharp: the last min(i-1, k-1) symbols of t[1..i-1].
    let mut cur = Cursor::EMPTY;
    let mut last_mark = 0;
    let mut markings = Vec::new();
    let mut triggers = Vec::new();
    let mut steps = Vec::with_capacity(n);

    for i in 1..=n {
        let c = text[i - 1];
        cur.truncate(&sam, k - 1);
        let window_start = i - cur.len;
        let next = sam.transition(cur.state, c);
        let full = !sharp || cur.len + 1 == k;
        let novel = full && next.is_none();
        let marked = novel && window_start > last_mark;
        steps.push(StepRecord { step: i, marked, window_start, window_end: i, novel });
        if marked {
            markings.push(i);
            triggers.push(Trigger { start: window_start, end: i });
            last_mark = i;
        }

        match next {
            Some(state) => {
                cur = Cursor { state, len: cur.len + 1 };
                let split = sam.extend(c);
                cur.rehome(&sam, split);
            }
            None => {
                sam.extend(c);
                cur = if sharp {
                    // The window is new, so it lives in the state of the whole prefix.
                    Cursor { state: sam.last(), len: cur.len + 1 }
                } else {
                    Cursor::EMPTY
                };
            }
        }
        if !sharp && marked {
            cur = Cursor::EMPTY;
        }
    }
    MarkingTrace { scope, sharp, markings, triggers, steps }
}

/// Quadratic rescanning version of [`lazy_run`], kept as a reference.
pub fn lazy_run_reference(text: &[u8], scope: Scope, sharp: bool) -> MarkingTrace {
    let sharp = normalize(scope, sharp);
    let n = text.len();
    let k = scope.limit(n);
    let mut last_mark = 0;
    let mut markings = Vec::new();
    let mut triggers = Vec::new();
    let mut steps = Vec::with_capacity(n);
    for i in 1..=n {
        let window_start = if sharp {
            (i + 1).saturating_sub(k).max(1)
        } else {
            (last_mark + 1).max((i + 1).saturating_sub(k))
        };
        let window = &text[window_start - 1..i];
        let full = !sharp || window.len() == k;
        // Novel iff no occurrence inside t[1..i-1].
        let novel = full && !text[..i - 1].windows(window.len()).any(|w| w == window);
        let marked = novel && window_start > last_mark;
        steps.push(StepRecord { step: i, marked, window_start, window_end: i, novel });
        if marked {
            markings.push(i);
            triggers.push(Trigger { start: window_start, end: i });
            last_mark = i;
        }
    }
    MarkingTrace { scope, sharp, markings, triggers, steps }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equivalence {
    pub equal: bool,
    pub lazy_markings: Vec<usize>,
    pub phrase_ends: Vec<usize>,
    /// First position where the two lists differ.
    pub first_mismatch: Option<usize>,
}

/// Compares unbounded Lazy markings with the novel phrase ends of the
/// self-referencing novel LZ factorization.
pub fn lazy_lz_equivalence(text: &Text) -> Equivalence {
    let trace = lazy_run(text, Scope::Unbounded, false);
    let lz = lz_factorize(text, VariantFlags::CLASSIC);
    let phrase_ends = lz.novel_phrase_ends();
    let first_mismatch = trace
        .markings
        .iter()
        .zip(&phrase_ends)
        .position(|(a, b)| a != b)
        .or_else(|| {
            (trace.markings.len() != phrase_ends.len())
                .then(|| trace.markings.len().min(phrase_ends.len()))
        });
    Equivalence {
        equal: first_mismatch.is_none(),
        lazy_markings: trace.markings,
        phrase_ends,
        first_mismatch,
    }
}

/// Families with a known Lazy cost curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Fibonacci,
    ThueMorse,
    Sturmian(Vec<u64>),
}

impl Family {
    pub fn word(&self, m: i64) -> Result<Text> {
        match self {
            Family::Fibonacci => fibonacci_word(m),
            Family::ThueMorse => {
                let m = u32::try_from(m).map_err(|_| Error::Domain(format!("thue-morse index {m} < 0")))?;
                thue_morse_word(m)
            }
            Family::Sturmian(q) => sturmian_word(&periodic_directive(q, m), m),
        }
    }

    pub fn label(&self, m: i64) -> String {
        match self {
            Family::Fibonacci => format!("fib:{m}"),
            Family::ThueMorse => format!("tm:{m}"),
            Family::Sturmian(q) => {
                let q: Vec<String> = q.iter().map(u64::to_string).collect();
                format!("sturmian:{}:{m}", q.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostPoint {
    pub m: i64,
    pub n: usize,
    pub cost: usize,
    pub markings: Vec<usize>,
}

/// Unbounded Lazy cost on each member of a family.
pub fn online_cost_curve(
    family: &Family,
    ms: impl IntoIterator<Item = i64>,
) -> Result<Vec<CostPoint>> {
    ms.into_iter()
        .map(|m| {
            let w = family.word(m)?;
            let trace = lazy_run(&w, Scope::Unbounded, false);
            Ok(CostPoint { m, n: w.len(), cost: trace.cost(), markings: trace.markings })
        })
        .collect()
}
