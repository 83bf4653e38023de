//! Building the CNF.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{CnfInstance, Layout, SatError};
use crate::combinatorics::{bell, normalize_labels, pairs, subsets, SetPartitions};
use crate::identity::Identity;
use crate::measure::{AlgebraElement, GeneratorId};
use crate::statement::{
    c3_holds, c4_measure, c4_threshold, c5_bound_holds, c5_union, StatementParams, SEARCH_GUARD,
};

/// Size limits beyond which [`encode`] refuses to build an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceLimits {
    /// Largest pool `|X'|`; transitivity alone needs `3·C(|X'|, 3)` clauses.
    pub max_pool: usize,
    /// Largest total number of (term tuple choice, partition) pairs examined.
    pub max_combinations: u128,
}

pub const RESOURCE_LIMITS: ResourceLimits = ResourceLimits {
    max_pool: 160,
    max_combinations: 5_000_000,
};

#[derive(Debug, Clone)]
enum Constraint {
    C3 { slot: usize },
    /// C4 for `N < L`; `N = L` follows from C3.
    C4 { lower: usize, upper: usize, n: usize, colors: usize },
    /// Slots of the pairs of `P` in lexicographic order.
    C5 { slots: Vec<usize>, level: usize },
}

impl Constraint {
    fn slots(&self) -> Vec<usize> {
        match self {
            Constraint::C3 { slot } => vec![*slot],
            Constraint::C4 { lower, upper, .. } => vec![*lower, *upper],
            Constraint::C5 { slots, .. } => slots.clone(),
        }
    }
}

/// Encodes the statement for `params`. `budget` is checked against the
/// search guard only: the theory itself places no bound on the number of
/// generators.
pub fn encode(params: &StatementParams, budget: usize) -> Result<CnfInstance, SatError> {
    SEARCH_GUARD.check(params, budget)?;
    let layout = Layout::new(params)?;
    if layout.pool_len > RESOURCE_LIMITS.max_pool {
        return Err(SatError::TooLarge(format!(
            "pool has {} variables, limit {}",
            layout.pool_len, RESOURCE_LIMITS.max_pool
        )));
    }
    let constraints = constraints(params, &layout);
    let work: u128 = constraints
        .iter()
        .map(|c| {
            let slots = c.slots();
            let tuples: u128 = slots.iter().map(|&s| layout.slots[s].tuples as u128).product();
            let vars: usize = slots.iter().map(|&s| layout.slots[s].arity).sum();
            tuples.saturating_mul(bell(vars))
        })
        .fold(0u128, u128::saturating_add);
    if work > RESOURCE_LIMITS.max_combinations {
        return Err(SatError::TooLarge(format!(
            "{work} tuple/partition combinations, limit {}",
            RESOURCE_LIMITS.max_combinations
        )));
    }

    let mut clauses = transitivity(&layout);
    for (slot, s) in layout.slots.iter().enumerate() {
        for m in 1..=s.colors {
            let group: Vec<i32> = (0..s.term_set.len()).map(|i| layout.q_var(slot, m, i)).collect();
            clauses.push(group.clone());
            for (a, &x) in group.iter().enumerate() {
                for &y in &group[a + 1..] {
                    clauses.push(vec![-x, -y]);
                }
            }
        }
    }
    let chi: Vec<Vec<Vec<i32>>> = constraints
        .par_iter()
        .map(|c| constraint_clauses(&layout, params.identity(), c))
        .collect();
    clauses.extend(chi.into_iter().flatten());
    Ok(CnfInstance::from_parts(params.clone(), layout, clauses))
}

fn constraints(params: &StatementParams, layout: &Layout) -> Vec<Constraint> {
    let slot = |w, level| layout.slot_index(w, level).expect("slot exists");
    let mut out: Vec<Constraint> = (0..layout.slots.len()).map(|slot| Constraint::C3 { slot }).collect();
    for w in params.pairs() {
        for n in params.levels() {
            for level in n + 1..=params.lambda() {
                out.push(Constraint::C4 {
                    lower: slot(w, n),
                    upper: slot(w, level),
                    n,
                    colors: params.g(n).min(params.g(level)),
                });
            }
        }
    }
    let r = params.r();
    for subset in subsets(params.kappa(), r) {
        for level in params.levels() {
            let slots = pairs(r)
                .into_iter()
                .map(|(a, b)| slot((subset[a], subset[b]), level))
                .collect();
            out.push(Constraint::C5 { slots, level });
        }
    }
    out
}

/// `¬p_ab ∨ ¬p_bc ∨ p_ac` and its rotations for every triple of the pool.
fn transitivity(layout: &Layout) -> Vec<Vec<i32>> {
    let n = layout.pool_len;
    let mut out = Vec::with_capacity(3 * n * n.saturating_sub(1) * n.saturating_sub(2) / 6);
    for a in 0..n {
        for b in a + 1..n {
            let ab = layout.p_var(a, b);
            for c in b + 1..n {
                let bc = layout.p_var(b, c);
                let ac = layout.p_var(a, c);
                out.push(vec![-ab, -bc, ac]);
                out.push(vec![-ab, -ac, bc]);
                out.push(vec![-ac, -bc, ab]);
            }
        }
    }
    out
}

/// Clauses `¬η_s ∨ ¬π` for every choice `s` of term tuples and every
/// partition `π` of the variables of `s` violating the constraint. When every
/// partition violates it the clause shrinks to `¬η_s`.
fn constraint_clauses(layout: &Layout, identity: &Identity, c: &Constraint) -> Vec<Vec<i32>> {
    let slots = c.slots();
    let radices: Vec<usize> = slots.iter().map(|&s| layout.slots[s].tuples).collect();
    let mut c3_cache: HashMap<(usize, usize, Vec<u8>), bool> = HashMap::new();
    let mut out = Vec::new();
    let mut digits = vec![0usize; slots.len()];
    loop {
        let terms: Vec<Vec<usize>> = slots
            .iter()
            .zip(&digits)
            .map(|(&s, &t)| layout.slots[s].tuple_terms(t))
            .collect();
        let vars: Vec<usize> = slots
            .iter()
            .zip(&digits)
            .flat_map(|(&s, &t)| layout.slots[s].tuple_vars(t))
            .collect();
        let mut failing = Vec::new();
        let mut any_ok = false;
        for rgs in SetPartitions::new(vars.len()) {
            let mut offset = 0;
            let mut cells = Vec::with_capacity(slots.len());
            let mut pruned = false;
            for (k, &s) in slots.iter().enumerate() {
                let sl = &layout.slots[s];
                let part = &rgs[offset..offset + sl.arity];
                offset += sl.arity;
                let gens: Vec<GeneratorId> = part.iter().map(|&b| GeneratorId(b as u32)).collect();
                let row: Vec<AlgebraElement> = terms[k]
                    .iter()
                    .map(|&i| sl.term_set.eval(i, &gens).expect("arity matches"))
                    .collect();
                if !matches!(c, Constraint::C3 { .. }) {
                    let key = (k, digits[k], normalize_labels(part));
                    let valid = *c3_cache.entry(key).or_insert_with(|| c3_holds(&row));
                    if !valid {
                        pruned = true;
                        break;
                    }
                }
                cells.push(row);
            }
            if pruned {
                continue;
            }
            if holds(c, identity, &cells) {
                any_ok = true;
            } else {
                failing.push(rgs);
            }
        }
        let eta: Vec<i32> = slots
            .iter()
            .zip(&terms)
            .flat_map(|(&s, ts)| {
                ts.iter()
                    .enumerate()
                    .map(move |(m, &i)| -layout.q_var(s, m + 1, i))
            })
            .collect();
        if !any_ok {
            out.push(eta);
        } else {
            for rgs in failing {
                let mut clause = eta.clone();
                for a in 0..vars.len() {
                    for b in a + 1..vars.len() {
                        let p = layout.p_var(vars[a], vars[b]);
                        clause.push(if rgs[a] == rgs[b] { -p } else { p });
                    }
                }
                out.push(clause);
            }
        }
        if !advance(&mut digits, &radices) {
            break;
        }
    }
    out
}

fn holds(c: &Constraint, identity: &Identity, cells: &[Vec<AlgebraElement>]) -> bool {
    match c {
        Constraint::C3 { .. } => c3_holds(&cells[0]),
        Constraint::C4 { n, colors, .. } => {
            c4_measure(&cells[0][..*colors], &cells[1][..*colors]) >= c4_threshold(*n)
        }
        Constraint::C5 { level, .. } => {
            let rows: Vec<&[AlgebraElement]> = cells.iter().map(Vec::as_slice).collect();
            c5_bound_holds(&c5_union(identity, &rows).measure(), *level)
        }
    }
}

fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}
