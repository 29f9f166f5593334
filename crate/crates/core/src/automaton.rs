//! Online suffix automaton over byte symbols.
//!
//! Every substring index in the crate goes through this structure: Lazy and
//! the Lempel-Ziv parsers extend it one symbol at a time, the verifier and
//! the complexity profile walk the finished automaton.
//!
//! Each state stands for a set of substrings sharing one end-position set;
//! its lengths form the interval `(len(link), len]`. `first_end` is the
//! 1-based end of the leftmost occurrence of those substrings.

pub const ROOT: usize = 0;

#[derive(Debug, Clone)]
struct State {
    len: usize,
    link: Option<usize>,
    first_end: usize,
    cloned: bool,
    // Alphabets are tiny, a linear scan beats hashing.
    next: Vec<(u8, usize)>,
}

impl State {
    fn new(len: usize, link: Option<usize>, first_end: usize, cloned: bool) -> Self {
        State { len, link, first_end, cloned, next: Vec::new() }
    }

    fn get(&self, symbol: u8) -> Option<usize> {
        self.next.iter().find(|&&(c, _)| c == symbol).map(|&(_, s)| s)
    }

    fn set(&mut self, symbol: u8, target: usize) {
        match self.next.iter_mut().find(|(c, _)| *c == symbol) {
            Some(slot) => slot.1 = target,
            None => self.next.push((symbol, target)),
        }
    }
}

/// A clone split off during [`SuffixAutomaton::extend`]: the strings of
/// `original` with length at most `len(clone)` now live in `clone`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub original: usize,
    pub clone: usize,
}

#[derive(Debug, Clone)]
pub struct SuffixAutomaton {
    states: Vec<State>,
    last: usize,
    consumed: usize,
}

impl Default for SuffixAutomaton {
    fn default() -> Self {
        Self::new()
    }
}

impl SuffixAutomaton {
    pub fn new() -> Self {
        Self::with_capacity(0)
    }

    pub fn with_capacity(n: usize) -> Self {
        let mut states = Vec::with_capacity(2 * n + 1);
        states.push(State::new(0, None, 0, false));
        SuffixAutomaton { states, last: ROOT, consumed: 0 }
    }

    pub fn build(text: &[u8]) -> Self {
        let mut sam = Self::with_capacity(text.len());
        for &c in text {
            sam.extend(c);
        }
        sam
    }

    /// Number of symbols consumed so far.
    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// State of the whole consumed prefix.
    pub fn last(&self) -> usize {
        self.last
    }

    pub fn len(&self, state: usize) -> usize {
        self.states[state].len
    }

    pub fn is_empty(&self) -> bool {
        self.consumed == 0
    }

    pub fn link(&self, state: usize) -> Option<usize> {
        self.states[state].link
    }

    /// Length of the shortest string in `state` minus one.
    pub fn link_len(&self, state: usize) -> usize {
        self.states[state].link.map_or(0, |l| self.states[l].len)
    }

    pub fn first_end(&self, state: usize) -> usize {
        self.states[state].first_end
    }

    pub fn is_clone(&self, state: usize) -> bool {
        self.states[state].cloned
    }

    pub fn transition(&self, state: usize, symbol: u8) -> Option<usize> {
        self.states[state].get(symbol)
    }

    /// Appends one symbol. Returns the clone created, if any, so callers
    /// tracking a state can re-home it.
    pub fn extend(&mut self, symbol: u8) -> Option<Split> {
        self.consumed += 1;
        let end = self.consumed;
        let cur = self.states.len();
        self.states.push(State::new(self.states[self.last].len + 1, None, end, false));

        let mut p = Some(self.last);
        while let Some(ps) = p {
            if self.states[ps].get(symbol).is_some() {
                break;
            }
            self.states[ps].set(symbol, cur);
            p = self.states[ps].link;
        }

        let mut split = None;
        match p {
            None => self.states[cur].link = Some(ROOT),
            Some(ps) => {
                let q = self.states[ps].get(symbol).expect("transition checked above");
                if self.states[ps].len + 1 == self.states[q].len {
                    self.states[cur].link = Some(q);
                } else {
                    let clone = self.states.len();
                    let mut st = self.states[q].clone();
                    st.len = self.states[ps].len + 1;
                    st.cloned = true;
                    self.states.push(st);

                    let mut r = Some(ps);
                    while let Some(rs) = r {
                        if self.states[rs].get(symbol) != Some(q) {
                            break;
                        }
                        self.states[rs].set(symbol, clone);
                        r = self.states[rs].link;
                    }
                    self.states[q].link = Some(clone);
                    self.states[cur].link = Some(clone);
                    split = Some(Split { original: q, clone });
                }
            }
        }
        self.last = cur;
        split
    }

    /// Follows the path spelled by `pattern` from the root.
    pub fn walk(&self, pattern: &[u8]) -> Option<usize> {
        pattern.iter().try_fold(ROOT, |s, &c| self.transition(s, c))
    }

    pub fn contains(&self, pattern: &[u8]) -> bool {
        self.walk(pattern).is_some()
    }

    /// States sorted by decreasing `len`, i.e. children before their link.
    pub fn states_by_len_desc(&self) -> Vec<usize> {
        let max = self.states[self.last].len;
        let mut count = vec![0usize; max + 2];
        for s in &self.states {
            count[s.len] += 1;
        }
        for l in 1..count.len() {
            count[l] += count[l - 1];
        }
        let mut order = vec![0usize; self.states.len()];
        for (i, s) in self.states.iter().enumerate().rev() {
            count[s.len] -= 1;
            order[count[s.len]] = i;
        }
        order.reverse();
        order
    }
}

/// A suffix of the consumed text tracked as `(state, length)`.
///
/// Supports the two moves the streaming algorithms need: drop leading
/// symbols, and append a symbol while the automaton grows underneath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cursor {
    pub state: usize,
    pub len: usize,
}

impl Cursor {
    pub const EMPTY: Cursor = Cursor { state: ROOT, len: 0 };

    /// Drops leading symbols until at most `max_len` remain.
    pub fn truncate(&mut self, sam: &SuffixAutomaton, max_len: usize) {
        if self.len <= max_len {
            return;
        }
        self.len = max_len;
        while self.state != ROOT && self.len <= sam.link_len(self.state) {
            self.state = sam.link(self.state).unwrap_or(ROOT);
        }
    }

    /// Re-homes the cursor after an extension that split its state.
    pub fn rehome(&mut self, sam: &SuffixAutomaton, split: Option<Split>) {
        if let Some(Split { original, clone }) = split {
            if self.state == original && self.len <= sam.len(clone) {
                self.state = clone;
            }
        }
    }

    /// 1-based start of the leftmost occurrence of the tracked string.
    pub fn first_start(&self, sam: &SuffixAutomaton) -> usize {
        sam.first_end(self.state) + 1 - self.len
    }
}
