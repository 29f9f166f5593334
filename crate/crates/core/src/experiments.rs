//! Experiment drivers behind the lab CLI. Each returns typed rows in the
//! order of its parameter grid; rendering lives in the CLI crate.

use serde::{Deserialize, Serialize};

use crate::attractor::{equidistant_attractor, verify, AttractorSet};
use crate::error::{Error, Result};
use crate::lazy::{lazy_run, Family, Scope};
use crate::solver::{min_attractor_exact, Budget};
use crate::text::{Alphabet, Text};
use crate::words::{
    de_bruijn, palindromic_prefix_positions, periodic_directive, sff, sff_length, spoon_feed, sturmian_word, Unfolding,
};

/// Upper limit on generated text length for the lower-bound grid.
pub const DEFAULT_MAX_TEXT: u64 = 1 << 26;

/// Where an optimum (or its stand-in) came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptSource {
    /// Solved exactly.
    Exact,
    /// Known value from the literature, not recomputed.
    Cited,
    /// A verified attractor; an upper bound on the optimum.
    Constructive,
}

impl OptSource {
    pub fn as_str(self) -> &'static str {
        match self {
            OptSource::Exact => "exact",
            OptSource::Cited => "cited",
            OptSource::Constructive => "constructive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub instance: String,
    pub m: i64,
    pub n: usize,
    pub lazy_cost: usize,
    pub opt: usize,
    pub opt_source: OptSource,
    pub ratio: f64,
    /// `m / 2`, Fibonacci only.
    pub half_m: Option<f64>,
}

fn cited_optimum(family: &Family) -> usize {
    match family {
        Family::Fibonacci | Family::Sturmian(_) => 2,
        Family::ThueMorse => 4,
    }
}

/// Lazy cost against the optimum for each index in `ms`. The optimum is
/// solved when the text fits the budget and cited otherwise.
pub fn families(family: &Family, ms: impl IntoIterator<Item = i64>, budget: Budget) -> Result<Vec<FamilyRow>> {
    ms.into_iter()
        .map(|m| {
            let w = family.word(m)?;
            let lazy_cost = lazy_run(&w, Scope::Unbounded, false).cost();
            let (opt, opt_source) = if w.len() <= budget.max_n {
                match min_attractor_exact(&w, Scope::Unbounded, false, budget) {
                    Ok(s) => (s.size, OptSource::Exact),
                    Err(Error::Budget(_)) => (cited_optimum(family), OptSource::Cited),
                    Err(e) => return Err(e),
                }
            } else {
                (cited_optimum(family), OptSource::Cited)
            };
            Ok(FamilyRow {
                instance: family.label(m),
                m,
                n: w.len(),
                lazy_cost,
                opt,
                opt_source,
                ratio: lazy_cost as f64 / opt.max(1) as f64,
                half_m: matches!(family, Family::Fibonacci).then_some(m as f64 / 2.0),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundRow {
    pub k: usize,
    pub sigma: usize,
    pub sharp: bool,
    pub n: usize,
    pub t1_len: usize,
    pub lazy_cost: usize,
    pub lazy_cost_in_t2: usize,
    /// The guaranteed Lazy cost on `T1`.
    pub lazy_bound: u64,
    pub constructive_cost: usize,
    pub constructive_valid: bool,
    pub ratio: f64,
}

fn pow(sigma: usize, e: usize) -> u64 {
    (sigma as u64).pow(e as u32)
}

/// Text length of the lower-bound instance, computed without building it.
pub fn lower_bound_len(k: usize, sigma: usize, sharp: bool) -> u64 {
    let db = |i: usize| pow(sigma, i) + i as u64 - 1;
    if sharp {
        sff_length(k, k, sigma) + db(k)
    } else {
        (2..=k).map(|l| sff_length(l, k, sigma)).sum::<u64>() + (1..=k).map(db).sum::<u64>()
    }
}

/// Guaranteed Lazy cost on the spoon-feeding prefix.
pub fn lazy_lower_bound(k: usize, sigma: usize, sharp: bool) -> u64 {
    if sharp {
        pow(sigma, k) - 2 * pow(sigma, k - 1) + pow(sigma, k - 2)
    } else {
        pow(sigma, k) - pow(sigma, k - 1)
    }
}

/// Size of the chained equidistant marking: one phase-`i` marking per `dB(i)` block.
pub fn constructive_cost(k: usize, sigma: usize, sharp: bool) -> u64 {
    let block = |i: usize| pow(sigma, i).div_ceil(i as u64);
    if sharp {
        block(k)
    } else {
        (1..=k).map(block).sum()
    }
}

/// Builds `T1 T2`, runs Lazy with scope `k`, and compares against the
/// verified constructive attractor on the de Bruijn blocks.
pub fn lower_bound(k: usize, sigmas: &[usize], sharp: bool, max_len: u64) -> Result<Vec<LowerBoundRow>> {
    if k < 2 {
        return Err(Error::Domain(format!("lower-bound scope {k} < 2")));
    }
    let mut rows = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        if sigma < 2 {
            return Err(Error::Domain(format!("alphabet size {sigma} < 2")));
        }
        let need = lower_bound_len(k, sigma, sharp);
        if need > max_len {
            return Err(Error::Budget(format!(
                "instance k={k}, sigma={sigma} needs {need} symbols, limit {max_len}"
            )));
        }
        let alphabet = Alphabet::lowercase(sigma)?;
        let t1 = if sharp { sff(k, k, &alphabet)? } else { spoon_feed(k, &alphabet)? };
        let mut text = t1.clone().into_bytes();
        let mut marks = Vec::new();
        let blocks: Vec<usize> = if sharp { vec![k] } else { (1..=k).collect() };
        for i in blocks {
            let db = de_bruijn(i, &alphabet, Unfolding::Back)?;
            let offset = text.len();
            let local = equidistant_attractor(db.len(), i, i)?;
            marks.extend(local.positions().iter().map(|p| p + offset));
            text.extend_from_slice(&db);
        }
        let scope = Scope::Bounded(k);
        let constructive = AttractorSet::new(marks, scope, sharp)?;
        let constructive_valid = verify(&text, &constructive)?.valid;
        let trace = lazy_run(&text, scope, sharp);
        let lazy_cost_in_t2 = trace.markings.iter().filter(|&&p| p > t1.len()).count();
        rows.push(LowerBoundRow {
            k,
            sigma,
            sharp,
            n: text.len(),
            t1_len: t1.len(),
            lazy_cost: trace.cost(),
            lazy_cost_in_t2,
            lazy_bound: lazy_lower_bound(k, sigma, sharp),
            constructive_cost: constructive.len(),
            constructive_valid,
            ratio: trace.cost() as f64 / constructive.len() as f64,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeBruijnRow {
    pub k: usize,
    pub sigma: usize,
    pub unfolding: Unfolding,
    pub phase: usize,
    pub n: usize,
    pub size: usize,
    pub sharp_valid: bool,
    pub full_valid: bool,
    /// Shortest uncovered substring when the full check fails.
    pub witness: Option<String>,
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Every equidistant marking of both unfoldings. With `prime_check` and a
/// prime `k`, fails unless the front phase-`k` marking is a full attractor
/// of size `⌈σ^k / k⌉`.
pub fn de_bruijn_markings(k: usize, sigma: usize, prime_check: bool) -> Result<Vec<DeBruijnRow>> {
    let alphabet = Alphabet::lowercase(sigma)?;
    if sigma < 2 {
        return Err(Error::Domain(format!("alphabet size {sigma} < 2")));
    }
    let mut rows = Vec::new();
    for unfolding in [Unfolding::Back, Unfolding::Front] {
        let db = de_bruijn(k, &alphabet, unfolding)?;
        for phase in 1..=k {
            let marks = equidistant_attractor(db.len(), k, phase)?;
            let sharp = verify(&db, &marks.clone().with_scope(Scope::Bounded(k), true))?;
            let full = verify(&db, &marks)?;
            rows.push(DeBruijnRow {
                k,
                sigma,
                unfolding,
                phase,
                n: db.len(),
                size: marks.len(),
                sharp_valid: sharp.valid,
                full_valid: full.valid,
                witness: full.witness.map(|w| w.content),
            });
        }
    }
    if prime_check && is_prime(k) {
        let expected = pow(sigma, k).div_ceil(k as u64) as usize;
        let row = rows
            .iter()
            .find(|r| r.unfolding == Unfolding::Front && r.phase == k)
            .expect("front phase-k row exists");
        if !row.full_valid || row.size != expected {
            return Err(Error::Integrity(format!(
                "front unfolding of order {k} over {sigma} symbols: phase-{k} marking of size {} is {}",
                row.size,
                if row.full_valid { "valid" } else { "not a full attractor" }
            )));
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalindromeRow {
    pub index: usize,
    pub marking: usize,
    /// Length of the palindromic prefix ending right before the marking.
    pub palindrome_before: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PalindromeProbe {
    pub instance: String,
    pub n: usize,
    pub rows: Vec<PalindromeRow>,
    pub matched: usize,
    pub match_rate: f64,
}

/// Lazy markings on a Sturmian word next to its palindromic prefixes.
pub fn palindrome_probe(directive: &[u64], m: i64) -> Result<PalindromeProbe> {
    let w: Text = sturmian_word(&periodic_directive(directive, m), m)?;
    let trace = lazy_run(&w, Scope::Unbounded, false);
    let pal = palindromic_prefix_positions(&w);
    let rows: Vec<PalindromeRow> = trace
        .markings
        .iter()
        .enumerate()
        .map(|(i, &p)| PalindromeRow {
            index: i + 1,
            marking: p,
            palindrome_before: pal.binary_search(&(p - 1)).ok().map(|_| p - 1),
        })
        .collect();
    let matched = rows.iter().filter(|r| r.palindrome_before.is_some()).count();
    let q: Vec<String> = directive.iter().map(u64::to_string).collect();
    Ok(PalindromeProbe {
        instance: format!("sturmian:{}:{m}", q.join(",")),
        n: w.len(),
        match_rate: if rows.is_empty() { 0.0 } else { matched as f64 / rows.len() as f64 },
        rows,
        matched,
    })
}
