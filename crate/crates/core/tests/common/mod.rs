//! Brute-force oracles and deterministic property checks shared by the
//! integration suites. Nothing here calls the structures under test for the
//! values it checks against.

#![allow(dead_code)]

use std::collections::BTreeMap;

use attractor_core::attractor::{verify, AttractorSet};
use attractor_core::lazy::{lazy_run, Scope};
use attractor_core::lz::{lz_factorize, VariantFlags};
use attractor_core::solver::{min_attractor_exact, Budget};
use attractor_core::text::{Alphabet, Text};
use attractor_core::words::{
    fibonacci_number, fibonacci_word, kernel_word, random_text, thue_morse_word, Morphism,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;

pub fn lengths(n: usize, k: Option<usize>, sharp: bool) -> Vec<usize> {
    match k {
        Some(k) if sharp => {
            if k <= n {
                vec![k]
            } else {
                vec![]
            }
        }
        Some(k) => (1..=k.min(n)).collect(),
        None => (1..=n).collect(),
    }
}

/// Distinct substrings of the given lengths with all 1-based start positions,
/// ordered by length then content.
pub fn substrings(t: &[u8], lens: &[usize]) -> Vec<(Vec<u8>, Vec<usize>)> {
    let mut out = Vec::new();
    for &l in lens {
        let mut m: BTreeMap<&[u8], Vec<usize>> = BTreeMap::new();
        for s in 0..=t.len() - l {
            m.entry(&t[s..s + l]).or_default().push(s + 1);
        }
        out.extend(m.into_iter().map(|(w, occ)| (w.to_vec(), occ)));
    }
    out
}

/// Definition-level check: every substring in scope needs one occurrence
/// containing a marked position. Returns the first uncovered substring.
pub fn brute_verify(t: &[u8], marks: &[usize], k: Option<usize>, sharp: bool) -> Option<(Vec<u8>, Vec<usize>)> {
    for (w, occ) in substrings(t, &lengths(t.len(), k, sharp)) {
        let l = w.len();
        let covered = occ.iter().any(|&s| marks.iter().any(|&p| s <= p && p < s + l));
        if !covered {
            return Some((w, occ));
        }
    }
    None
}

pub fn scope_of(k: Option<usize>) -> Scope {
    k.map_or(Scope::Unbounded, Scope::Bounded)
}

/// Smallest attractor size by enumerating position subsets in order of size.
pub fn brute_min_attractor(t: &[u8], k: Option<usize>, sharp: bool) -> usize {
    let n = t.len();
    assert!(n < 64);
    let masks: Vec<u64> = substrings(t, &lengths(n, k, sharp))
        .into_iter()
        .map(|(w, occ)| occ.iter().fold(0u64, |m, &s| m | (((1u64 << w.len()) - 1) << (s - 1))))
        .collect();
    if masks.is_empty() {
        return 0;
    }
    for size in 1..=n {
        // Gosper's hack over all n-bit subsets with `size` bits set.
        let mut set: u64 = (1u64 << size) - 1;
        while set < 1u64 << n {
            if masks.iter().all(|m| m & set != 0) {
                return size;
            }
            let c = set & set.wrapping_neg();
            let r = set + c;
            set = (((r ^ set) >> 2) / c) | r;
        }
    }
    unreachable!("the full position set is always an attractor")
}

/// Classic parse by direct search: a phrase is the longest prefix with an
/// earlier (possibly overlapping) start, plus one symbol. Returns the end
/// positions of phrases that stop on a novel symbol.
pub fn naive_lz_novel_ends(t: &[u8]) -> Vec<usize> {
    let n = t.len();
    let mut ends = Vec::new();
    let mut i = 0;
    while i < n {
        let mut best = 0;
        for j in 0..i {
            let mut l = 0;
            while i + l < n && t[j + l] == t[i + l] {
                l += 1;
            }
            best = best.max(l);
        }
        if i + best == n {
            break;
        }
        ends.push(i + best + 1);
        i += best + 1;
    }
    ends
}

pub fn naive_count(t: &[u8], w: &[u8]) -> usize {
    t.windows(w.len()).filter(|x| *x == w).count()
}

pub fn naive_first(t: &[u8], w: &[u8]) -> Option<usize> {
    t.windows(w.len()).position(|x| x == w).map(|i| i + 1)
}

pub fn palindrome(t: &[u8]) -> bool {
    t.iter().eq(t.iter().rev())
}

pub fn random_word(rng: &mut StdRng, n_max: usize, sigmas: std::ops::RangeInclusive<usize>) -> Text {
    let sigma = rng.gen_range(sigmas);
    let n = rng.gen_range(1..=n_max);
    random_text(n, &Alphabet::lowercase(sigma).unwrap(), rng)
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Property checks; each returns the first counterexample as an error.

pub fn kernel_palindromes(max_m: i64) -> Check {
    for m in 1..=max_m {
        let k = kernel_word(m).map_err(|e| e.to_string())?;
        ensure(palindrome(&k), || format!("kernel word {m} is not a palindrome"))?;
    }
    Ok(())
}

pub fn kernel_unique_in_fibonacci() -> Check {
    for m in 2..=15 {
        let f = fibonacci_word(m).unwrap();
        let k = kernel_word(m - 2).unwrap();
        let c = naive_count(&f, &k);
        ensure(c == 1, || format!("kernel word {} occurs {c} times in F_{m}", m - 2))?;
    }
    Ok(())
}

/// `F_m` minus its last two symbols is a palindrome, and Lazy marks the
/// position right after that prefix.
pub fn fibonacci_palindromic_prefixes() -> Check {
    for m in 1..=20 {
        let f = fibonacci_word(m).unwrap();
        ensure(palindrome(&f[..f.len() - 2]), || format!("F_{m} minus two is not a palindrome"))?;
    }
    for m in 3..=20 {
        let f = fibonacci_word(m).unwrap();
        let target = fibonacci_number(m).unwrap() as usize - 1;
        let marks = lazy_run(&f, Scope::Unbounded, false).markings;
        ensure(marks.contains(&target), || format!("Lazy on F_{m} does not mark {target}"))?;
    }
    Ok(())
}

/// For `w` in `G_10` with `2 <= |w| <= 8`, not a power of one symbol, the
/// image `ψ(w)` first starts at `2x - 1` where `w` first starts at `x`.
pub fn thue_morse_shift() -> Check {
    let g = thue_morse_word(10).unwrap();
    let image = thue_morse_word(11).unwrap();
    let psi = Morphism::thue_morse();
    for (w, occ) in substrings(&g, &(2..=8).collect::<Vec<_>>()) {
        if w.iter().all(|&c| c == w[0]) {
            continue;
        }
        let x = occ[0];
        let pw = psi.apply(&w).unwrap();
        let y = naive_first(&image, &pw);
        ensure(y == Some(2 * x - 1), || {
            format!("{} first at {x}, image first at {y:?}", String::from_utf8_lossy(&w))
        })?;
    }
    Ok(())
}

fn unmarked_runs(marks: &[usize], n: usize) -> Vec<usize> {
    let mut runs: Vec<usize> = marks.windows(2).map(|w| w[1] - w[0] - 1).collect();
    if let Some(&last) = marks.last() {
        runs.push(n - last);
    }
    runs
}

/// Without a run of `k - 1` unmarked positions, the `k` and `k - 1` traces coincide.
pub fn gap_lemma(seed: u64, cases: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut applied = 0;
    for _ in 0..cases {
        let t = random_word(&mut rng, 40, 2..=4);
        for k in 2..=6 {
            let hi = lazy_run(&t, Scope::Bounded(k), false).markings;
            if unmarked_runs(&hi, t.len()).iter().all(|&r| r < k - 1) {
                applied += 1;
                let lo = lazy_run(&t, Scope::Bounded(k - 1), false).markings;
                ensure(hi == lo, || format!("{t} k={k}: {hi:?} vs {lo:?}"))?;
            }
        }
    }
    ensure(applied > 0, || "gap lemma never applied".into())
}

/// The optimum never exceeds any factorization size.
pub fn gamma_at_most_z(seed: u64, cases: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..cases {
        let t = random_word(&mut rng, 16, 2..=4);
        let g = min_attractor_exact(&t, Scope::Unbounded, false, Budget::default()).unwrap().size;
        for flags in VariantFlags::all() {
            let z = lz_factorize(&t, flags).size();
            ensure(g <= z, || format!("{t}: gamma {g} > z {z} for {flags:?}"))?;
        }
    }
    Ok(())
}

/// `γ*_k <= lazy_k <= k γ*_k`, and `γ* <= lazy` for the unbounded scope.
pub fn lazy_competitive(seed: u64, cases: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..cases {
        let t = random_word(&mut rng, 24, 2..=4);
        for k in (1..=5).map(Some).chain([None]) {
            let scope = scope_of(k);
            let opt = min_attractor_exact(&t, scope, false, Budget::default()).unwrap().size;
            let lazy = lazy_run(&t, scope, false).cost();
            ensure(opt <= lazy, || format!("{t} k={k:?}: opt {opt} > lazy {lazy}"))?;
            if let Some(k) = k {
                ensure(lazy <= k * opt, || format!("{t} k={k}: lazy {lazy} > {k} * {opt}"))?;
            }
        }
    }
    Ok(())
}

/// Compares `verify` with the brute-force check on random cases.
pub fn verifier_agrees(seed: u64, cases: usize, n_max: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..cases {
        let t = random_word(&mut rng, n_max, 2..=4);
        let n = t.len();
        let k = if rng.gen_bool(0.2) { None } else { Some(rng.gen_range(1..=n)) };
        let sharp = rng.gen_bool(0.5);
        let density = rng.gen_range(0.0..1.0);
        let marks: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(density)).collect();
        let set = AttractorSet::new(marks.clone(), scope_of(k), sharp).unwrap();
        let got = verify(&t, &set).unwrap();
        let want = brute_verify(&t, &marks, k, sharp && k.is_some());
        let agree = match (&got.witness, &want) {
            (None, None) => got.valid,
            (Some(w), Some((content, occ))) => {
                !got.valid && w.content.as_bytes() == content.as_slice() && &w.occurrences == occ
            }
            _ => false,
        };
        ensure(agree, || format!("{t} marks={marks:?} k={k:?} sharp={sharp}: {got:?} vs {want:?}"))?;
    }
    Ok(())
}

/// Exact solver against subset enumeration on every binary text up to `n_max`.
pub fn solver_agrees_exhaustively(n_max: usize, k: Option<usize>, sharp: bool) -> Check {
    for n in 1..=n_max {
        for bits in 0u32..1 << n {
            let t: Vec<u8> = (0..n).map(|i| if bits >> i & 1 == 1 { b'b' } else { b'a' }).collect();
            let s = min_attractor_exact(&t, scope_of(k), sharp, Budget::default()).unwrap();
            let want = brute_min_attractor(&t, k, sharp && k.is_some());
            ensure(s.size == want, || {
                format!("{} k={k:?} sharp={sharp}: solver {} vs {want}", String::from_utf8_lossy(&t), s.size)
            })?;
            ensure(brute_verify(&t, s.witness.positions(), k, sharp && k.is_some()).is_none(), || {
                format!("{}: solver witness is not an attractor", String::from_utf8_lossy(&t))
            })?;
        }
    }
    Ok(())
}

/// Marking sets of prefixes stay valid after every Lazy step.
pub fn lazy_prefix_validity(seed: u64, cases: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..cases {
        let t = random_word(&mut rng, 60, 2..=4);
        for k in (1..=6).map(Some).chain([None]) {
            for sharp in [false, true] {
                let trace = lazy_run(&t, scope_of(k), sharp);
                for i in 1..=t.len() {
                    let marks = trace.markings_upto(i);
                    let bad = brute_verify(&t[..i], marks, k, sharp && k.is_some());
                    ensure(bad.is_none(), || format!("{t} k={k:?} sharp={sharp} prefix {i}: {bad:?}"))?;
                }
            }
        }
    }
    Ok(())
}
