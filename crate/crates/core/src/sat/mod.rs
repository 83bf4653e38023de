//! Propositional encoding of the finite statement.
//!
//! For every slot `(w, L)` and every term tuple `t` there is a private tuple of
//! variables `x^{w,t}_{L,1..f(L)}`; their union is the pool `X'`. A valuation
//! picks a partition of `X'` through the variables `p_{a,b}` (`a ~ b`) and a
//! term for every color through `q^w_{L,m,i}` (color `m` uses term `i`). The
//! generator tuple of a slot is the tuple of blocks of `x^{w,t}_L` for the
//! chosen `t`.
//!
//! The theory consists of
//!
//! - equivalence axioms: transitivity clauses over `X'` (symmetry and
//!   reflexivity hold by representing each unordered pair once);
//! - exactly one term per color;
//! - per C3/C4/C5 instance and per choice `s` of term tuples for the slots it
//!   mentions, clauses `η_s ⇒ χ_s` ruling out the partitions of the relevant
//!   variables whose cells violate the condition. Cell measures are computed
//!   exactly at encode time.

mod decode;
mod dimacs;
mod encode;
mod solver;

use std::fmt;

use thiserror::Error;

use crate::combinatorics::{pair_count, pair_index};
use crate::measure::CompleteTermSet;
use crate::statement::{Pair, StatementError, StatementParams};

pub use decode::{check_model, decode, model_from_literals, parse_model, valuation_for_witness};
pub use dimacs::{export_dimacs, parse_dimacs, read_cnf, write_cnf, RawCnf};
pub use encode::{encode, ResourceLimits, RESOURCE_LIMITS};
pub use solver::{solve, SolveOutcome, Solver};

#[derive(Debug, Error)]
pub enum SatError {
    #[error(transparent)]
    Statement(#[from] StatementError),
    #[error("instance too large to encode: {0}")]
    TooLarge(String),
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("malformed model: {0}")]
    Model(String),
    #[error("model violates clause {index}: {clause:?}")]
    UnsatisfiedClause { index: usize, clause: Vec<i32> },
    #[error("witness does not fit the encoding: {0}")]
    Witness(String),
}

/// A variable of the pool `X'`: position `j` (1-based) of the tuple
/// `x^{w,t}_L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PoolVar {
    pub w: Pair,
    pub level: usize,
    /// Mixed-radix index of the term tuple, first color most significant.
    pub tuple: usize,
    pub j: usize,
}

/// A propositional variable of the theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropVar {
    /// `p_{a,b}` for pool ids `a < b`.
    P { a: usize, b: usize },
    /// `q^w_{L,m,i}`, `m` 1-based.
    Q { w: Pair, level: usize, m: usize, i: usize },
}

impl fmt::Display for PropVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropVar::P { a, b } => write!(f, "p w={a},{b}"),
            PropVar::Q { w, level, m, i } => write!(f, "q w={},{} L={level} m={m} i={i}", w.0, w.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SlotLayout {
    pub w: Pair,
    pub level: usize,
    pub arity: usize,
    pub colors: usize,
    pub term_set: CompleteTermSet,
    /// `|𝕋_L|`.
    pub tuples: usize,
    /// First pool id of this slot.
    pub x_offset: usize,
    /// First `q` variable (0-based among the `q`s).
    pub q_offset: usize,
}

impl SlotLayout {
    /// Term indices of tuple `t`.
    pub fn tuple_terms(&self, mut t: usize) -> Vec<usize> {
        let base = self.term_set.len();
        let mut out = vec![0; self.colors];
        for d in out.iter_mut().rev() {
            *d = t % base;
            t /= base;
        }
        out
    }

    pub fn tuple_index(&self, terms: &[usize]) -> usize {
        let base = self.term_set.len();
        terms.iter().fold(0, |acc, &d| acc * base + d)
    }

    /// Pool ids of `x^{w,t}_L`.
    pub fn tuple_vars(&self, t: usize) -> std::ops::Range<usize> {
        let start = self.x_offset + t * self.arity;
        start..start + self.arity
    }
}

/// Variable numbering shared by the encoder, the DIMACS reader and the
/// decoder. Slots are ordered by pair, then level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Layout {
    pub slots: Vec<SlotLayout>,
    pub pool_len: usize,
    pub q_count: usize,
}

impl Layout {
    pub fn new(params: &StatementParams) -> Result<Self, SatError> {
        let mut slots = Vec::new();
        let mut x = 0usize;
        let mut q = 0usize;
        for w in params.pairs() {
            for level in params.levels() {
                let term_set = params.term_set(level);
                let colors = params.g(level);
                let tuples = term_set
                    .len()
                    .checked_pow(colors as u32)
                    .ok_or_else(|| SatError::TooLarge(format!("|T_{level}| overflows")))?;
                let arity = params.f(level);
                slots.push(SlotLayout {
                    w,
                    level,
                    arity,
                    colors,
                    term_set,
                    tuples,
                    x_offset: x,
                    q_offset: q,
                });
                x = tuples
                    .checked_mul(arity)
                    .and_then(|n| n.checked_add(x))
                    .ok_or_else(|| SatError::TooLarge("pool size overflows".into()))?;
                q += colors * term_set.len();
            }
        }
        Ok(Layout {
            slots,
            pool_len: x,
            q_count: q,
        })
    }

    pub fn p_count(&self) -> usize {
        pair_count(self.pool_len)
    }

    pub fn num_vars(&self) -> usize {
        self.p_count() + self.q_count
    }

    pub fn slot_index(&self, w: Pair, level: usize) -> Option<usize> {
        self.slots.iter().position(|s| s.w == w && s.level == level)
    }

    /// DIMACS index of `p_{a,b}`.
    pub fn p_var(&self, a: usize, b: usize) -> i32 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        (1 + pair_index(self.pool_len, a, b)) as i32
    }

    /// DIMACS index of `q^w_{L,m,i}` for the slot at `slot`.
    pub fn q_var(&self, slot: usize, m: usize, i: usize) -> i32 {
        let s = &self.slots[slot];
        (1 + self.p_count() + s.q_offset + (m - 1) * s.term_set.len() + i) as i32
    }

    pub fn pool_var(&self, id: usize) -> PoolVar {
        let s = self
            .slots
            .iter()
            .find(|s| s.x_offset <= id && id < s.x_offset + s.tuples * s.arity)
            .expect("pool id in range");
        let rel = id - s.x_offset;
        PoolVar {
            w: s.w,
            level: s.level,
            tuple: rel / s.arity,
            j: rel % s.arity + 1,
        }
    }

    pub fn describe(&self, var: i32) -> Option<PropVar> {
        let v = usize::try_from(var).ok()?.checked_sub(1)?;
        if v < self.p_count() {
            // invert the lexicographic pair index
            let n = self.pool_len;
            let mut a = 0;
            let mut start = 0;
            while start + (n - a - 1) <= v {
                start += n - a - 1;
                a += 1;
            }
            return Some(PropVar::P { a, b: a + 1 + (v - start) });
        }
        let mut rel = v - self.p_count();
        if rel >= self.q_count {
            return None;
        }
        for s in &self.slots {
            let block = s.colors * s.term_set.len();
            if rel < block {
                return Some(PropVar::Q {
                    w: s.w,
                    level: s.level,
                    m: rel / s.term_set.len() + 1,
                    i: rel % s.term_set.len(),
                });
            }
            rel -= block;
        }
        None
    }

    pub fn var(&self, pv: &PropVar) -> Option<i32> {
        match *pv {
            PropVar::P { a, b } => (a < b && b < self.pool_len).then(|| self.p_var(a, b)),
            PropVar::Q { w, level, m, i } => {
                let slot = self.slot_index(w, level)?;
                let s = &self.slots[slot];
                (m >= 1 && m <= s.colors && i < s.term_set.len()).then(|| self.q_var(slot, m, i))
            }
        }
    }
}

/// CNF for one parameter set, with its variable table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    params: StatementParams,
    layout: Layout,
    clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub(crate) fn from_parts(params: StatementParams, layout: Layout, clauses: Vec<Vec<i32>>) -> Self {
        Self { params, layout, clauses }
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn params(&self) -> &StatementParams {
        &self.params
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn num_vars(&self) -> usize {
        self.layout.num_vars()
    }

    /// `|X'|`.
    pub fn pool_len(&self) -> usize {
        self.layout.pool_len
    }

    pub fn pool_var(&self, id: usize) -> PoolVar {
        self.layout.pool_var(id)
    }

    /// DIMACS index of a structured variable.
    pub fn var(&self, pv: &PropVar) -> Option<i32> {
        self.layout.var(pv)
    }

    /// Structured variable of a DIMACS index.
    pub fn describe(&self, var: i32) -> Option<PropVar> {
        self.layout.describe(var)
    }

    /// Runs the internal solver.
    pub fn solve(&self) -> SolveOutcome {
        solve(self.num_vars(), &self.clauses)
    }
}
