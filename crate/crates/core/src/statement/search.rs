//! Exhaustive witness search over a bounded universe of generators.
//!
//! Generators are `y_0..y_{B-1}`; a cell is a bitmask over the `2^B` atoms.
//! Slots `(w, L)` are filled level by level. Generator tuples are chosen up to
//! renaming of unused generators, candidates with identical cells are merged,
//! and C4 and C5 are checked as soon as every slot they mention is placed.

use std::collections::HashMap;

use rayon::prelude::*;

use super::conditions::realizing_colorings;
use super::{Pair, StatementError, StatementParams, Witness, WitnessEntry};
use crate::combinatorics::{pairs, subsets};
use crate::measure::GeneratorId;

/// Parameter box in which exhaustive search is attempted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchGuard {
    pub max_kappa: usize,
    pub max_lambda: usize,
    pub max_arity: usize,
    pub max_colors: usize,
    pub max_budget: usize,
}

pub const SEARCH_GUARD: SearchGuard = SearchGuard {
    max_kappa: 3,
    max_lambda: 3,
    max_arity: 2,
    max_colors: 2,
    max_budget: 4,
};

impl SearchGuard {
    pub fn check(&self, params: &StatementParams, budget: usize) -> Result<(), StatementError> {
        let mut out = Vec::new();
        if params.kappa() > self.max_kappa {
            out.push(format!("kappa {} > {}", params.kappa(), self.max_kappa));
        }
        if params.lambda() > self.max_lambda {
            out.push(format!("lambda {} > {}", params.lambda(), self.max_lambda));
        }
        if let Some(&f) = params.f_values().iter().max().filter(|&&f| f > self.max_arity) {
            out.push(format!("f {f} > {}", self.max_arity));
        }
        if let Some(&g) = params.g_values().iter().max().filter(|&&g| g > self.max_colors) {
            out.push(format!("g {g} > {}", self.max_colors));
        }
        if budget > self.max_budget {
            out.push(format!("budget {budget} > {}", self.max_budget));
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(StatementError::OutsideGuard(out.join(", ")))
        }
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    gens: Vec<u32>,
    terms: Vec<usize>,
    masks: Vec<u64>,
    used_after: u32,
}

struct Plan {
    slots: Vec<(Pair, usize)>,
    budget: usize,
    /// Per slot: `(slot of level N, N, colors compared)` for every `N < L`.
    c4: Vec<Vec<(usize, usize, usize)>>,
    /// Per slot: slot indices of the pairs of each `P` completed by it.
    c5: Vec<Vec<Vec<usize>>>,
    /// Realizing colorings per level (index `L - 1`).
    realizing: Vec<Vec<Vec<usize>>>,
    /// Candidates per `(level - 1, generators used so far)`.
    candidates: Vec<Vec<Vec<Candidate>>>,
}

/// Searches for a witness using at most `budget` distinct generators. Returns
/// the first witness in search order, or `None` when none exists within the
/// budget.
pub fn search_witness(params: &StatementParams, budget: usize) -> Result<Option<Witness>, StatementError> {
    SEARCH_GUARD.check(params, budget)?;
    let plan = Plan::new(params, budget);
    if plan.slots.is_empty() {
        return Ok(Some(Witness::new()));
    }
    let first = &plan.candidates[plan.slots[0].1 - 1][0];
    let found = first.par_iter().find_map_first(|cand| {
        let mut stack = vec![cand];
        // with r = 2 the first slot already completes C5 instances
        if plan.consistent(0, &stack) && plan.dfs(1, cand.used_after, &mut stack) {
            Some(plan.assemble(&stack))
        } else {
            None
        }
    });
    Ok(found)
}

impl Plan {
    fn new(params: &StatementParams, budget: usize) -> Self {
        let mut slots = Vec::new();
        let mut index = HashMap::new();
        for level in params.levels() {
            for w in params.pairs() {
                index.insert((w, level), slots.len());
                slots.push((w, level));
            }
        }
        let mut c4 = vec![Vec::new(); slots.len()];
        let mut c5 = vec![Vec::new(); slots.len()];
        for (k, &(w, level)) in slots.iter().enumerate() {
            for lower in 1..level {
                let colors = params.g(lower).min(params.g(level));
                c4[k].push((index[&(w, lower)], lower, colors));
            }
        }
        let r = params.r();
        if r >= 2 {
            for subset in subsets(params.kappa(), r) {
                for level in params.levels() {
                    let ids: Vec<usize> = pairs(r)
                        .into_iter()
                        .map(|(a, b)| index[&((subset[a], subset[b]), level)])
                        .collect();
                    let last = *ids.iter().max().expect("r >= 2");
                    c5[last].push(ids);
                }
            }
        }
        let realizing = params
            .levels()
            .map(|level| realizing_colorings(params.identity(), params.g(level)))
            .collect();
        let candidates = params
            .levels()
            .map(|level| {
                (0..=budget as u32)
                    .map(|used| slot_candidates(params, level, budget, used))
                    .collect()
            })
            .collect();
        Plan {
            slots,
            budget,
            c4,
            c5,
            realizing,
            candidates,
        }
    }

    fn dfs<'a>(&'a self, k: usize, used: u32, stack: &mut Vec<&'a Candidate>) -> bool {
        if k == self.slots.len() {
            return true;
        }
        let level = self.slots[k].1;
        for cand in &self.candidates[level - 1][used as usize] {
            stack.push(cand);
            if self.consistent(k, stack) && self.dfs(k + 1, cand.used_after, stack) {
                return true;
            }
            stack.pop();
        }
        false
    }

    /// C4 and C5 instances completed by slot `k`, which is on top of `stack`.
    fn consistent(&self, k: usize, stack: &[&Candidate]) -> bool {
        let b = self.budget as u32;
        let top = stack[k];
        for &(lower, n, colors) in &self.c4[k] {
            let overlap = (0..colors).fold(0u64, |acc, m| acc | (stack[lower].masks[m] & top.masks[m]));
            let count = overlap.count_ones() as u128;
            if count << n < ((1u128 << n) - 1) << b {
                return false;
            }
        }
        let level = self.slots[k].1;
        for ids in &self.c5[k] {
            let mut union = 0u64;
            for coloring in &self.realizing[level - 1] {
                let cell = ids
                    .iter()
                    .zip(coloring)
                    .fold(u64::MAX, |acc, (&s, &m)| acc & stack[s].masks[m]);
                union |= cell;
            }
            if union.count_ones() as u128 * level as u128 >= 1u128 << b {
                return false;
            }
        }
        true
    }

    fn assemble(&self, stack: &[&Candidate]) -> Witness {
        let mut w = Witness::new();
        for (&(pair, level), cand) in self.slots.iter().zip(stack) {
            w.insert(
                pair,
                level,
                WitnessEntry {
                    gens: cand.gens.iter().map(|&g| GeneratorId(g)).collect(),
                    terms: cand.terms.clone(),
                },
            );
        }
        w
    }
}

/// Distinct C3-valid choices for a slot at `level` when generators
/// `0..used` are already in play.
fn slot_candidates(params: &StatementParams, level: usize, budget: usize, used: u32) -> Vec<Candidate> {
    let arity = params.f(level);
    let colors = params.g(level);
    let set = params.term_set(level);
    let atoms = 1usize << budget;
    let full = if atoms == 64 { u64::MAX } else { (1u64 << atoms) - 1 };

    let mut tuples = Vec::new();
    gen_tuples(arity, budget as u32, used, &mut Vec::new(), &mut tuples);

    let mut best: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut out: Vec<Candidate> = Vec::new();
    for (gens, used_after) in tuples {
        // mask of each term over the universe
        let term_masks: Vec<u64> = (0..set.len())
            .map(|t| {
                let table = set.table(t);
                (0..atoms).fold(0u64, |acc, a| {
                    let assignment = gens
                        .iter()
                        .enumerate()
                        .fold(0usize, |x, (i, &g)| x | ((a >> g & 1) << i));
                    if table.get(assignment) {
                        acc | 1 << a
                    } else {
                        acc
                    }
                })
            })
            .collect();
        let mut terms = vec![0usize; colors];
        loop {
            let masks: Vec<u64> = terms.iter().map(|&t| term_masks[t]).collect();
            if is_partition_mask(&masks, full) {
                match best.get(&masks) {
                    Some(&i) if out[i].used_after <= used_after => {}
                    Some(&i) => {
                        out[i] = Candidate {
                            gens: gens.clone(),
                            terms: terms.clone(),
                            masks,
                            used_after,
                        };
                    }
                    None => {
                        best.insert(masks.clone(), out.len());
                        out.push(Candidate {
                            gens: gens.clone(),
                            terms: terms.clone(),
                            masks,
                            used_after,
                        });
                    }
                }
            }
            if !next_tuple(&mut terms, set.len()) {
                break;
            }
        }
    }
    out
}

fn is_partition_mask(masks: &[u64], full: u64) -> bool {
    let mut acc = 0u64;
    for &m in masks {
        if acc & m != 0 {
            return false;
        }
        acc |= m;
    }
    acc == full
}

/// Generator tuples whose new entries appear in increasing order starting at
/// `used`, never exceeding `limit`.
fn gen_tuples(arity: usize, limit: u32, used: u32, prefix: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, u32)>) {
    if prefix.len() == arity {
        out.push((prefix.clone(), used));
        return;
    }
    for g in 0..=used.min(limit.saturating_sub(1)) {
        if g >= limit {
            break;
        }
        prefix.push(g);
        gen_tuples(arity, limit, used.max(g + 1), prefix, out);
        prefix.pop();
    }
}

fn next_tuple(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}
