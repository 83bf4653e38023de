//! The free boolean algebra over generators `y_0, y_1, ...` with the product
//! measure in which every generator has measure one half and distinct
//! generators are independent.
//!
//! Every element is generated by finitely many generators, so it is modeled
//! exactly as a set of atoms over its support. In this model an element has
//! measure zero exactly when it is empty and measure one exactly when it is
//! everything; the partition checks below rely on that.

mod bitset;
mod dyadic;
mod element;
mod term;

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bitset::AtomSet;
pub use dyadic::{DyadicError, DyadicMeasure};
pub use element::{eval, measure, union_support, AlgebraElement};
pub use term::{parse_term, Expr, Term, TermError, MAX_TABLE_ARITY};

/// Largest generator support an element may carry.
pub const MAX_SUPPORT: usize = 24;

/// Largest arity accepted by [`complete_term_set`].
pub const MAX_COMPLETE_ARITY: usize = 4;

/// Index of a generator `y_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorId(pub u32);

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("term of arity {expected} applied to {got} generators")]
    ArityMismatch { expected: usize, got: usize },
    #[error("{0} generators exceed the supported maximum")]
    SupportTooLarge(usize),
    #[error("support must be strictly increasing")]
    UnsortedSupport,
    #[error("expected {expected} atoms, got {got}")]
    AtomCount { expected: usize, got: usize },
    #[error("malformed element {0:?}")]
    ElementSyntax(String),
    #[error("complete term set of arity {arity} is too large (maximum {max})")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("{terms} terms but {tuples} generator tuples")]
    LengthMismatch { terms: usize, tuples: usize },
    #[error("an empty sequence cannot be disjointified")]
    EmptySequence,
}

/// One term per boolean function of the given arity.
///
/// Term `i` is the full disjunctive normal form of the truth table whose
/// assignment `a` is satisfying exactly when bit `a` of `i` is set, so the
/// index is the truth table read as a number. Indices run over
/// `0..=h` with `h = 2^(2^arity) - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteTermSet {
    arity: usize,
}

impl CompleteTermSet {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of terms, `2^(2^arity)`.
    pub fn len(&self) -> usize {
        1usize << (1usize << self.arity)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest index `h`.
    pub fn max_index(&self) -> usize {
        self.len() - 1
    }

    pub fn table(&self, index: usize) -> AtomSet {
        assert!(index < self.len(), "term index {index} out of range");
        AtomSet::from_u64(1usize << self.arity, index as u64)
    }

    pub fn term(&self, index: usize) -> Term {
        Term::from_truth_table(self.arity, &self.table(index))
    }

    /// Index of the term equivalent to `t`.
    pub fn index_of(&self, t: &Term) -> Option<usize> {
        if t.arity() > self.arity {
            return None;
        }
        t.widen(self.arity)
            .truth_table()
            .as_u64()
            .map(|v| v as usize)
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        (0..self.len()).map(|i| self.term(i))
    }

    /// Evaluates term `index` at `gens`.
    pub fn eval(&self, index: usize, gens: &[GeneratorId]) -> Result<AlgebraElement, MeasureError> {
        AlgebraElement::from_table(&self.table(index), gens)
    }
}

pub fn complete_term_set(arity: usize) -> Result<CompleteTermSet, MeasureError> {
    if arity > MAX_COMPLETE_ARITY {
        return Err(MeasureError::ArityTooLarge {
            arity,
            max: MAX_COMPLETE_ARITY,
        });
    }
    Ok(CompleteTermSet { arity })
}

/// Pairwise meets null and join of full measure.
pub fn is_partition(cells: &[AlgebraElement]) -> bool {
    let support = union_support(cells.iter().map(AlgebraElement::support));
    let extended: Vec<AtomSet> = cells
        .iter()
        .map(|c| c.extend_to(&support).atoms().clone())
        .collect();
    let mut seen = AtomSet::empty(1usize << support.len());
    for cell in &extended {
        if !cell.and(&seen).is_empty() {
            return false;
        }
        seen = seen.or(cell);
    }
    seen.is_full()
}

/// Whether `⟨terms[n](gens[n])⟩` is a partition sequence.
pub fn is_partition_sequence(
    terms: &[Term],
    gens: &[Vec<GeneratorId>],
) -> Result<bool, MeasureError> {
    if terms.len() != gens.len() {
        return Err(MeasureError::LengthMismatch {
            terms: terms.len(),
            tuples: gens.len(),
        });
    }
    let cells = terms
        .iter()
        .zip(gens)
        .map(|(t, u)| eval(t, u))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(is_partition(&cells))
}

/// Result of [`approximate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximation {
    pub term: Term,
    pub gens: Vec<GeneratorId>,
    /// Measure of the symmetric difference with the target.
    pub error: DyadicMeasure,
}

/// Best approximation of `target` by a term over at most `budget` generators.
///
/// Only generators of the target's support are considered: a term that also
/// reads an outside generator is, on average over that generator, no better
/// than its best restriction. For a fixed generator set the optimum puts each
/// fiber in or out by majority. Ties are broken by arity, then truth-table
/// index, then the generator list.
pub fn approximate(target: &AlgebraElement, budget: usize) -> Approximation {
    let support = target.support();
    let k = support.len();
    let mut best: Option<(DyadicMeasure, usize, AtomSet, Vec<GeneratorId>)> = None;
    for size in 0..=budget.min(k) {
        for positions in (0..k).combinations(size) {
            let (error, table) = best_table_on(target, &positions);
            let gens: Vec<GeneratorId> = positions.iter().map(|&p| support[p]).collect();
            let better = match &best {
                None => true,
                Some((e, a, t, g)) => (&error, size)
                    .cmp(&(e, *a))
                    .then_with(|| table.cmp_numeric(t))
                    .then_with(|| gens.cmp(g))
                    .is_lt(),
            };
            if better {
                best = Some((error, size, table, gens));
            }
        }
    }
    let (error, arity, table, gens) = best.expect("the empty generator set is always a candidate");
    Approximation {
        term: Term::from_truth_table(arity, &table),
        gens,
        error,
    }
}

/// Optimal truth table over the support positions `positions` and its error.
fn best_table_on(target: &AlgebraElement, positions: &[usize]) -> (DyadicMeasure, AtomSet) {
    let k = target.support().len();
    let fibers = 1usize << positions.len();
    let mut inside = vec![0u64; fibers];
    for atom in target.atoms().ones() {
        let fiber = positions
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &p)| acc | (atom >> p & 1) << i);
        inside[fiber] += 1;
    }
    let fiber_size = 1u64 << (k - positions.len());
    let mut table = AtomSet::empty(fibers);
    let mut wrong = 0u64;
    for (fiber, &count) in inside.iter().enumerate() {
        let outside = fiber_size - count;
        if count > outside {
            table.set(fiber, true);
            wrong += outside;
        } else {
            wrong += count;
        }
    }
    (DyadicMeasure::from_atoms(wrong, k as u32), table)
}

/// Turns a sequence `σ_0..σ_{n-1}` into the partition sequence
/// `ρ_m = σ_m \ (σ_0 ∪ .. ∪ σ_{m-1})` followed by the complement of
/// `σ_0 ∪ .. ∪ σ_{n-1}`.
///
/// All outputs share one generator tuple, the concatenation of the input
/// tuples, with each input's variables shifted into its own range.
pub fn disjointify(
    sigma: &[(Term, Vec<GeneratorId>)],
) -> Result<Vec<(Term, Vec<GeneratorId>)>, MeasureError> {
    if sigma.is_empty() {
        return Err(MeasureError::EmptySequence);
    }
    for (t, u) in sigma {
        if t.arity() != u.len() {
            return Err(MeasureError::ArityMismatch {
                expected: t.arity(),
                got: u.len(),
            });
        }
    }
    let gens: Vec<GeneratorId> = sigma.iter().flat_map(|(_, u)| u.iter().copied()).collect();
    let total = gens.len();
    let mut offset = 0;
    let shifted: Vec<Term> = sigma
        .iter()
        .map(|(t, u)| {
            let s = t.shift(offset).widen(total);
            offset += u.len();
            s
        })
        .collect();
    let mut out = Vec::with_capacity(sigma.len() + 1);
    let mut earlier: Option<Term> = None;
    for s in &shifted {
        let rho = match &earlier {
            None => s.clone(),
            Some(prev) => s.and(&prev.not()),
        };
        out.push((rho, gens.clone()));
        earlier = Some(match earlier {
            None => s.clone(),
            Some(prev) => prev.or(s),
        });
    }
    let rest = earlier.expect("non-empty").not();
    out.push((rest, gens));
    Ok(out)
}
