//! Exact minimum (k-)attractors for short texts.
//!
//! The problem is a hitting set: every distinct substring in scope is an
//! element, and the positions covering any of its occurrences form its
//! option mask. Texts are limited to 64 symbols so a mask is one `u64`.
//!
//! Before branching, supersets of other masks are dropped (hitting the
//! smaller one suffices) and dominated positions are removed. Branch and
//! bound then branches on the element with the fewest options, pruning
//! with a disjoint-packing lower bound and seeding the incumbent greedily.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::attractor::AttractorSet;
use crate::error::{Error, Result};
use crate::lazy::Scope;
use crate::text::substring_counts;

pub const MAX_SUPPORTED_N: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_n: usize,
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_n: MAX_SUPPORTED_N, max_nodes: 20_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub size: usize,
    pub witness: AttractorSet,
    pub lower_bound: usize,
    pub nodes: u64,
}

/// Option masks of every distinct substring in scope, bit `p - 1` for position `p`.
pub fn coverage_masks(text: &[u8], scope: Scope, sharp: bool) -> Vec<u64> {
    let n = text.len();
    assert!(n <= MAX_SUPPORTED_N, "coverage masks need n <= 64");
    let k = scope.limit(n).min(n);
    let sharp = sharp && matches!(scope, Scope::Bounded(_));
    let lengths = if sharp { k..=k } else { 1..=k };
    let mut masks: HashMap<&[u8], u64> = HashMap::new();
    for l in lengths {
        if l > n {
            continue;
        }
        let span = if l == 64 { u64::MAX } else { (1u64 << l) - 1 };
        for start in 0..=n - l {
            *masks.entry(&text[start..start + l]).or_insert(0) |= span << start;
        }
    }
    let mut out: Vec<u64> = masks.into_values().collect();
    out.sort_unstable();
    out
}

/// Drops masks that contain another mask, then duplicates.
fn drop_supersets(masks: &mut Vec<u64>) {
    masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(masks.len());
    for &m in masks.iter() {
        if !kept.iter().any(|&s| s & !m == 0) {
            kept.push(m);
        }
    }
    *masks = kept;
}

/// Removes position `p` when every element it hits is also hit by some
/// other live position `q` (ties keep the smaller position).
fn drop_dominated(masks: &mut Vec<u64>, n: usize) -> u64 {
    let mut live: u64 = masks.iter().fold(0, |a, &m| a | m);
    loop {
        let mut changed = false;
        for p in 0..n {
            if live >> p & 1 == 0 {
                continue;
            }
            let hits_p = |m: &&u64| **m >> p & 1 == 1;
            for q in 0..n {
                if q == p || live >> q & 1 == 0 {
                    continue;
                }
                let dominated = masks.iter().filter(hits_p).all(|m| m >> q & 1 == 1);
                if !dominated {
                    continue;
                }
                // Equal element sets: keep the smaller index.
                let equal = masks.iter().filter(|m| *m >> q & 1 == 1).all(|m| m >> p & 1 == 1);
                if equal && p < q {
                    continue;
                }
                live &= !(1u64 << p);
                for m in masks.iter_mut() {
                    *m &= !(1u64 << p);
                }
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
        drop_supersets(masks);
    }
    live
}

/// Greedy disjoint packing: elements with pairwise disjoint masks need
/// pairwise distinct positions.
fn packing_bound(masks: &[u64], chosen: u64, allowed: u64) -> usize {
    let mut used = 0u64;
    let mut count = 0;
    for &m in masks {
        if m & chosen != 0 {
            continue;
        }
        let m = m & allowed;
        if m & used == 0 {
            used |= m;
            count += 1;
        }
    }
    count
}

fn greedy(masks: &[u64], n: usize) -> u64 {
    let mut chosen = 0u64;
    loop {
        let open: Vec<u64> = masks.iter().copied().filter(|m| m & chosen == 0).collect();
        if open.is_empty() {
            return chosen;
        }
        let best = (0..n)
            .max_by_key(|&p| (open.iter().filter(|&&m| m >> p & 1 == 1).count(), std::cmp::Reverse(p)))
            .expect("n >= 1 when elements remain");
        chosen |= 1u64 << best;
    }
}

struct Search<'a> {
    masks: &'a [u64],
    best: u64,
    best_size: usize,
    nodes: u64,
    max_nodes: u64,
    floor: usize,
}

impl Search<'_> {
    fn run(&mut self, chosen: u64, size: usize, allowed: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget(format!(
                "exact solver exceeded {} search nodes",
                self.max_nodes
            )));
        }
        // Most constrained open element.
        let mut pick: Option<u64> = None;
        for &m in self.masks {
            if m & chosen != 0 {
                continue;
            }
            let options = m & allowed;
            if options == 0 {
                return Ok(());
            }
            if pick.is_none_or(|p| options.count_ones() < p.count_ones()) {
                pick = Some(options);
            }
        }
        let Some(options) = pick else {
            if size < self.best_size {
                self.best = chosen;
                self.best_size = size;
            }
            return Ok(());
        };
        if size + packing_bound(self.masks, chosen, allowed).max(1) >= self.best_size {
            return Ok(());
        }
        let mut allowed = allowed;
        let mut rest = options;
        while rest != 0 {
            let p = rest.trailing_zeros();
            rest &= rest - 1;
            self.run(chosen | 1u64 << p, size + 1, allowed)?;
            if self.best_size <= self.floor {
                return Ok(());
            }
            // Later branches never reuse an earlier option.
            allowed &= !(1u64 << p);
        }
        Ok(())
    }
}

/// Minimum attractor of `text` for the given scope, with one optimal witness.
pub fn min_attractor_exact(text: &[u8], scope: Scope, sharp: bool, budget: Budget) -> Result<Solution> {
    let n = text.len();
    let max_n = budget.max_n.min(MAX_SUPPORTED_N);
    if n > max_n {
        return Err(Error::Budget(format!("text length {n} exceeds solver limit {max_n}")));
    }
    let sharp = sharp && matches!(scope, Scope::Bounded(_));
    let k = scope.limit(n);
    if n == 0 || (sharp && k > n) {
        return Ok(Solution {
            size: 0,
            witness: AttractorSet::new([], scope, sharp)?,
            lower_bound: 0,
            nodes: 0,
        });
    }

    let mut masks = coverage_masks(text, scope, sharp);
    drop_supersets(&mut masks);
    let live = drop_dominated(&mut masks, n);

    let counts = substring_counts(text, k.min(n));
    let lengths = if sharp { k..=k } else { 1..=k.min(n) };
    let complexity = lengths.map(|l| counts[l - 1].div_ceil(l)).max().unwrap_or(0);
    let floor = complexity.max(packing_bound(&masks, 0, live));

    let incumbent = greedy(&masks, n);
    let mut search = Search {
        masks: &masks,
        best: incumbent,
        best_size: incumbent.count_ones() as usize,
        nodes: 0,
        max_nodes: budget.max_nodes,
        floor,
    };
    if search.best_size > floor {
        search.run(0, 0, live)?;
    }
    let positions = (0..n).filter(|&p| search.best >> p & 1 == 1).map(|p| p + 1);
    Ok(Solution {
        size: search.best_size,
        witness: AttractorSet::new(positions, scope, sharp)?,
        lower_bound: floor,
        nodes: search.nodes,
    })
}
