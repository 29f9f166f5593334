//! Word families: Fibonacci and kernel words, Thue-Morse, standard Sturmian
//! words, Lyndon words, de Bruijn sequences and spoon-feeding strings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::text::{is_palindrome, Alphabet, Text};

/// `f_m` with `f_{-2} = 0`, `f_{-1} = 1`; equals `|fibonacci_word(m)|`.
pub fn fibonacci_number(m: i64) -> Result<u64> {
    if m < -2 {
        return Err(domain(format!("fibonacci index {m} < -2")));
    }
    let (mut prev, mut cur) = (0u64, 1u64); // f_{-2}, f_{-1}
    if m == -2 {
        return Ok(0);
    }
    for _ in -1..m {
        let next = prev
            .checked_add(cur)
            .ok_or_else(|| domain(format!("fibonacci number f_{m} overflows u64")))?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `F_{-2} = ε, F_{-1} = b, F_0 = a, F_m = F_{m-1} F_{m-2}`.
pub fn fibonacci_word(m: i64) -> Result<Text> {
    if m < -2 {
        return Err(domain(format!("fibonacci index {m} < -2")));
    }
    if m == -2 {
        return Ok(Text::default());
    }
    let mut older = b"b".to_vec(); // F_{-1}
    let mut newer = b"a".to_vec(); // F_0
    if m == -1 {
        return Ok(Text::new(older));
    }
    for _ in 0..m {
        let mut next = Vec::with_capacity(newer.len() + older.len());
        next.extend_from_slice(&newer);
        next.extend_from_slice(&older);
        older = std::mem::replace(&mut newer, next);
    }
    Ok(Text::new(newer))
}

/// `δ_m`: `a` for even `m`, `b` for odd `m`.
fn delta_symbol(m: i64) -> u8 {
    if m.rem_euclid(2) == 0 {
        b'a'
    } else {
        b'b'
    }
}

/// Kernel word `K_m = δ_{m+1} F_m δ_m^{-1}`, with `K_{-2}` empty.
pub fn kernel_word(m: i64) -> Result<Text> {
    if m < -2 {
        return Err(domain(format!("kernel index {m} < -2")));
    }
    if m == -2 {
        return Ok(Text::default());
    }
    let f = fibonacci_word(m)?;
    let mut w = Vec::with_capacity(f.len());
    w.push(delta_symbol(m + 1));
    w.extend_from_slice(&f[..f.len() - 1]);
    Ok(Text::new(w))
}

/// `G_0 = a`, `G_m = G_{m-1} complement(G_{m-1})`.
pub fn thue_morse_word(m: u32) -> Result<Text> {
    if m > 40 {
        return Err(domain(format!("thue-morse index {m} too large")));
    }
    let n = 1usize << m;
    let w = (0..n)
        .map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' })
        .collect::<Vec<_>>();
    Ok(Text::new(w))
}

/// Standard Sturmian word `S_m` for directive `q`:
/// `S_{-1} = b`, `S_0 = a`, `S_m = S_{m-1}^{q_{m-1}} S_{m-2}`.
pub fn sturmian_word(directive: &[u64], m: i64) -> Result<Text> {
    validate_directive(directive)?;
    if m < -1 {
        return Err(domain(format!("sturmian index {m} < -1")));
    }
    if m > 0 && directive.len() < m as usize {
        return Err(domain(format!(
            "sturmian index {m} needs {m} directive entries, got {}",
            directive.len()
        )));
    }
    let mut older = b"b".to_vec();
    let mut newer = b"a".to_vec();
    if m == -1 {
        return Ok(Text::new(older));
    }
    for &q in directive.iter().take(m.max(0) as usize) {
        let mut next = Vec::with_capacity(newer.len() * q as usize + older.len());
        for _ in 0..q {
            next.extend_from_slice(&newer);
        }
        next.extend_from_slice(&older);
        older = std::mem::replace(&mut newer, next);
    }
    Ok(Text::new(newer))
}

/// Repeats `directive` until it has `m` entries; `[1]` gives the Fibonacci directive.
pub fn periodic_directive(directive: &[u64], m: i64) -> Vec<u64> {
    let len = m.max(0) as usize;
    if directive.is_empty() || directive.len() >= len {
        return directive.to_vec();
    }
    directive.iter().copied().cycle().take(len).collect()
}

fn validate_directive(directive: &[u64]) -> Result<()> {
    if let Some(i) = directive.iter().skip(1).position(|&q| q == 0) {
        return Err(domain(format!("directive entry q_{} must be positive", i + 1)));
    }
    Ok(())
}

/// A substitution rule per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    rules: BTreeMap<u8, Vec<u8>>,
}

impl Morphism {
    pub fn new(rules: impl IntoIterator<Item = (u8, Vec<u8>)>) -> Result<Self> {
        let rules: BTreeMap<u8, Vec<u8>> = rules.into_iter().collect();
        if let Some((&s, _)) = rules.iter().find(|(_, r)| r.is_empty()) {
            return Err(domain(format!("rule for {:?} is empty", s as char)));
        }
        Ok(Morphism { rules })
    }

    /// `a -> ab, b -> a`.
    pub fn fibonacci() -> Self {
        Morphism::new([(b'a', b"ab".to_vec()), (b'b', b"a".to_vec())]).expect("non-empty rules")
    }

    /// `a -> ab, b -> ba`.
    pub fn thue_morse() -> Self {
        Morphism::new([(b'a', b"ab".to_vec()), (b'b', b"ba".to_vec())]).expect("non-empty rules")
    }

    pub fn image(&self, symbol: u8) -> Option<&[u8]> {
        self.rules.get(&symbol).map(Vec::as_slice)
    }

    pub fn apply(&self, text: &[u8]) -> Result<Text> {
        let mut out = Vec::with_capacity(text.len() * 2);
        for &c in text {
            let img = self.image(c).ok_or(Error::UnknownSymbol { symbol: c as char })?;
            out.extend_from_slice(img);
        }
        Ok(Text::new(out))
    }
}

pub fn apply_morphism(mu: &Morphism, text: &[u8], iterations: usize) -> Result<Text> {
    let mut cur = Text::from(text);
    for _ in 0..iterations {
        cur = mu.apply(&cur)?;
    }
    Ok(cur)
}

/// All Lyndon words of length `<= max_len` in lexicographic order
/// (Fredricksen-Kessler-Maiorana / Duval enumeration).
pub fn lyndon_words(max_len: usize, alphabet: &Alphabet) -> Result<Vec<Text>> {
    if max_len == 0 {
        return Err(domain("lyndon word length bound must be positive"));
    }
    let mut out = Vec::new();
    for_each_lyndon(max_len, alphabet.size(), |ranks| {
        out.push(Text::new(ranks.iter().map(|&r| alphabet.symbol(r)).collect::<Vec<_>>()));
    });
    Ok(out)
}

fn for_each_lyndon(max_len: usize, sigma: usize, mut visit: impl FnMut(&[usize])) {
    if sigma == 0 {
        return;
    }
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        visit(&w);
        // Extend periodically to max_len, then strip maximal symbols and bump.
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(sigma - 1)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unfolding {
    /// First `k-1` symbols repeated at the end.
    Back,
    /// Last `k-1` symbols repeated in front.
    Front,
}

impl FromStr for Unfolding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "back" => Ok(Unfolding::Back),
            "front" => Ok(Unfolding::Front),
            other => Err(domain(format!("unknown unfolding {other:?}"))),
        }
    }
}

impl fmt::Display for Unfolding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unfolding::Back => "back",
            Unfolding::Front => "front",
        })
    }
}

/// The circular de Bruijn sequence of order `k` built from the Lyndon words
/// whose length divides `k`, in lexicographic order. Length `σ^k`.
pub fn de_bruijn_cycle(k: usize, alphabet: &Alphabet) -> Result<Vec<u8>> {
    if k == 0 {
        return Err(domain("de Bruijn order must be positive"));
    }
    if alphabet.size() < 2 {
        return Err(domain("de Bruijn sequences need at least two symbols"));
    }
    checked_pow(alphabet.size(), k)?;
    let mut out = Vec::new();
    for_each_lyndon(k, alphabet.size(), |ranks| {
        if k.is_multiple_of(ranks.len()) {
            out.extend(ranks.iter().map(|&r| alphabet.symbol(r)));
        }
    });
    Ok(out)
}

/// Linear de Bruijn word of length `σ^k + k - 1`.
pub fn de_bruijn(k: usize, alphabet: &Alphabet, unfolding: Unfolding) -> Result<Text> {
    let cycle = de_bruijn_cycle(k, alphabet)?;
    let wrap = k - 1;
    let mut out = Vec::with_capacity(cycle.len() + wrap);
    match unfolding {
        Unfolding::Back => {
            out.extend_from_slice(&cycle);
            out.extend_from_slice(&cycle[..wrap]);
        }
        Unfolding::Front => {
            out.extend_from_slice(&cycle[cycle.len() - wrap..]);
            out.extend_from_slice(&cycle);
        }
    }
    Ok(Text::new(out))
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v <= 1 << 32)
            .ok_or_else(|| domain(format!("{base}^{exp} is too large")))?;
    }
    Ok(acc)
}

/// `W(l)`: words of length `l` with `w[1] != w[2]` and `w[l-1] != w[l]`
/// (only the first condition for `l = 2`), in lexicographic order.
pub fn spoon_feeding_set(l: usize, alphabet: &Alphabet) -> Result<Vec<Text>> {
    if l < 2 {
        return Err(domain(format!("spoon-feeding length {l} < 2")));
    }
    if alphabet.size() < 2 {
        return Err(domain("spoon-feeding needs at least two symbols"));
    }
    let sigma = alphabet.size();
    let total = checked_pow(sigma, l)?;
    let mut out = Vec::new();
    let mut ranks = vec![0usize; l];
    for _ in 0..total {
        if ranks[0] != ranks[1] && ranks[l - 2] != ranks[l - 1] {
            out.push(Text::new(ranks.iter().map(|&r| alphabet.symbol(r)).collect::<Vec<_>>()));
        }
        // Odometer increment, last position fastest.
        for r in ranks.iter_mut().rev() {
            *r += 1;
            if *r < sigma {
                break;
            }
            *r = 0;
        }
    }
    Ok(out)
}

/// `sff(l, k)`: each `w ∈ W(l)` written as `w_1^k w_2 … w_{l-1} w_l^k`.
pub fn sff(l: usize, k: usize, alphabet: &Alphabet) -> Result<Text> {
    if !(2..=k).contains(&l) {
        return Err(domain(format!("sff needs 2 <= l <= k, got l={l}, k={k}")));
    }
    let set = spoon_feeding_set(l, alphabet)?;
    let mut out = Vec::with_capacity((2 * k + l - 2) * set.len());
    for w in &set {
        out.extend(std::iter::repeat_n(w[0], k));
        out.extend_from_slice(&w[1..l - 1]);
        out.extend(std::iter::repeat_n(w[l - 1], k));
    }
    Ok(Text::new(out))
}

/// `SF(k) = sff(2, k) sff(3, k) … sff(k, k)`.
pub fn spoon_feed(k: usize, alphabet: &Alphabet) -> Result<Text> {
    if k < 2 {
        return Err(domain(format!("spoon-feeding scope {k} < 2")));
    }
    let mut out = Vec::new();
    for l in 2..=k {
        out.extend_from_slice(&sff(l, k, alphabet)?);
    }
    Ok(Text::new(out))
}

/// `|W(l)|`: `σ^{l-2}(σ-1)^2` for `l >= 3`, `σ(σ-1)` for `l = 2`.
pub fn spoon_feeding_count(l: usize, sigma: usize) -> u64 {
    let s = sigma as u64;
    match l {
        0 | 1 => 0,
        2 => s * (s - 1),
        _ => s.pow(l as u32 - 2) * (s - 1) * (s - 1),
    }
}

/// `|sff(l, k)|` by the block-length formula.
pub fn sff_length(l: usize, k: usize, sigma: usize) -> u64 {
    match l {
        2 => 2 * k as u64 * spoon_feeding_count(2, sigma),
        _ => (2 * k + l - 2) as u64 * spoon_feeding_count(l, sigma),
    }
}

/// The published closed form `(3k-2)σ^k - (3k-1)σ^{k-1} - kσ^2 + (2k+1)σ`.
///
/// It counts the `l = 2` block as `kσ^2` and so undercounts the generated
/// string by `kσ(σ-2)`; the two agree only for `σ = 2`.
pub fn spoon_feed_length_closed_form(k: usize, sigma: usize) -> i64 {
    let (k, s) = (k as i64, sigma as i64);
    (3 * k - 2) * s.pow(k as u32) - (3 * k - 1) * s.pow(k as u32 - 1) - k * s * s + (2 * k + 1) * s
}

/// Lengths `p >= 1` such that `t[1..=p]` is a palindrome.
pub fn palindromic_prefix_positions(text: &[u8]) -> Vec<usize> {
    (1..=text.len()).filter(|&p| is_palindrome(&text[..p])).collect()
}

/// Declarative description of a generated word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WordSpec {
    Fibonacci { m: i64 },
    Kernel { m: i64 },
    ThueMorse { m: u32 },
    Sturmian { directive: Vec<u64>, m: i64 },
    DeBruijn { k: usize, sigma: usize, unfolding: Unfolding },
    Sff { l: usize, k: usize, sigma: usize },
    SpoonFeed { k: usize, sigma: usize },
    Literal { text: String },
    Random { n: usize, sigma: usize, seed: u64 },
}

pub const SPEC_GRAMMAR: &str = "\
fib:<m> | kernel:<m> | tm:<m> | sturmian:<q0,q1,...>:<m> | \
debruijn:<k>:<sigma>[:back|front] | sff:<l>:<k>:<sigma> | sf:<k>:<sigma> | \
lit:<string> | rand:<n>:<sigma>[:<seed>]";

impl WordSpec {
    pub fn generate(&self) -> Result<Text> {
        match self {
            WordSpec::Fibonacci { m } => fibonacci_word(*m),
            WordSpec::Kernel { m } => kernel_word(*m),
            WordSpec::ThueMorse { m } => thue_morse_word(*m),
            WordSpec::Sturmian { directive, m } => sturmian_word(directive, *m),
            WordSpec::DeBruijn { k, sigma, unfolding } => {
                de_bruijn(*k, &Alphabet::lowercase(*sigma)?, *unfolding)
            }
            WordSpec::Sff { l, k, sigma } => sff(*l, *k, &Alphabet::lowercase(*sigma)?),
            WordSpec::SpoonFeed { k, sigma } => spoon_feed(*k, &Alphabet::lowercase(*sigma)?),
            WordSpec::Literal { text } => Ok(Text::from(text.as_str())),
            WordSpec::Random { n, sigma, seed } => {
                let alphabet = Alphabet::lowercase(*sigma)?;
                Ok(random_text(*n, &alphabet, &mut StdRng::seed_from_u64(*seed)))
            }
        }
    }
}

pub fn random_text(n: usize, alphabet: &Alphabet, rng: &mut impl Rng) -> Text {
    let sigma = alphabet.size();
    Text::new((0..n).map(|_| alphabet.symbol(rng.gen_range(0..sigma))).collect::<Vec<_>>())
}

impl FromStr for WordSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidSpec { spec: s.to_string(), reason: reason.to_string() };
        let (head, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        if head == "lit" {
            return Ok(WordSpec::Literal { text: rest.to_string() });
        }
        let fields: Vec<&str> = rest.split(':').collect();
        let int = |i: usize| -> Result<i64> {
            fields
                .get(i)
                .ok_or_else(|| bad("missing field"))?
                .parse::<i64>()
                .map_err(|_| bad("expected an integer"))
        };
        let nat = |i: usize| -> Result<usize> {
            usize::try_from(int(i)?).map_err(|_| bad("expected a non-negative integer"))
        };
        let arity = |lo: usize, hi: usize| -> Result<()> {
            if (lo..=hi).contains(&fields.len()) {
                Ok(())
            } else {
                Err(bad("wrong number of fields"))
            }
        };
        let spec = match head {
            "fib" => {
                arity(1, 1)?;
                WordSpec::Fibonacci { m: int(0)? }
            }
            "kernel" => {
                arity(1, 1)?;
                WordSpec::Kernel { m: int(0)? }
            }
            "tm" => {
                arity(1, 1)?;
                WordSpec::ThueMorse { m: u32::try_from(int(0)?).map_err(|_| bad("m must be >= 0"))? }
            }
            "sturmian" => {
                arity(2, 2)?;
                let directive = if fields[0].is_empty() {
                    Vec::new()
                } else {
                    fields[0]
                        .split(',')
                        .map(|q| q.trim().parse::<u64>().map_err(|_| bad("bad directive entry")))
                        .collect::<Result<Vec<_>>>()?
                };
                WordSpec::Sturmian { directive, m: int(1)? }
            }
            "debruijn" => {
                arity(2, 3)?;
                let unfolding = match fields.get(2) {
                    Some(u) => u.parse().map_err(|_| bad("unfolding must be back or front"))?,
                    None => Unfolding::Back,
                };
                WordSpec::DeBruijn { k: nat(0)?, sigma: nat(1)?, unfolding }
            }
            "sff" => {
                arity(3, 3)?;
                WordSpec::Sff { l: nat(0)?, k: nat(1)?, sigma: nat(2)? }
            }
            "sf" => {
                arity(2, 2)?;
                WordSpec::SpoonFeed { k: nat(0)?, sigma: nat(1)? }
            }
            "rand" => {
                arity(2, 3)?;
                let seed = if fields.len() == 3 { nat(2)? as u64 } else { 0 };
                WordSpec::Random { n: nat(0)?, sigma: nat(1)?, seed }
            }
            _ => return Err(bad("unknown family")),
        };
        Ok(spec)
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSpec::Fibonacci { m } => write!(f, "fib:{m}"),
            WordSpec::Kernel { m } => write!(f, "kernel:{m}"),
            WordSpec::ThueMorse { m } => write!(f, "tm:{m}"),
            WordSpec::Sturmian { directive, m } => {
                let q: Vec<String> = directive.iter().map(u64::to_string).collect();
                write!(f, "sturmian:{}:{m}", q.join(","))
            }
            WordSpec::DeBruijn { k, sigma, unfolding } => write!(f, "debruijn:{k}:{sigma}:{unfolding}"),
            WordSpec::Sff { l, k, sigma } => write!(f, "sff:{l}:{k}:{sigma}"),
            WordSpec::SpoonFeed { k, sigma } => write!(f, "sf:{k}:{sigma}"),
            WordSpec::Literal { text } => write!(f, "lit:{text}"),
            WordSpec::Random { n, sigma, seed } => write!(f, "rand:{n}:{sigma}:{seed}"),
        }
    }
}
