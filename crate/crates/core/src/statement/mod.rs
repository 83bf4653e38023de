//! The finite statement `[I, m, m, g, f]`.
//!
//! For every pair `w` of `{0..kappa}` and every level `L` in `1..=lambda` a
//! witness supplies a generator tuple `u_{w,L}` of length `f(L)` and terms
//! `τ^w_{L,1..g(L)}` of that arity. It satisfies the statement when
//!
//! - C1/C2: tuples and terms have the right shape;
//! - C3: the cells `τ^w_{L,m}(u_{w,L})` partition the space;
//! - C4: for `N <= L` the cells with equal color at levels `N` and `L`
//!   overlap in measure at least `1 - 1/2^N`;
//! - C5: for every `r`-set `P` and level `L`, the set of points whose level-`L`
//!   coloring of `P` realizes `I` has measure below `1/L`.
//!
//! Levels start at 1 since `1/L` is undefined at 0.

mod conditions;
mod search;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::pairs;
use crate::identity::Identity;
use crate::measure::{complete_term_set, AlgebraElement, CompleteTermSet, GeneratorId, MeasureError};

pub use conditions::{c3_holds, c4_measure, c4_threshold, c5_bound_holds, c5_union, realizing_colorings};
pub use search::{search_witness, SearchGuard, SEARCH_GUARD};
pub use verify::{
    c5_union_measure, verify_cells, verify_witness, C3Instance, C4Instance, C5Instance, CheckStatus,
    VerificationReport,
};

/// A pair `{i, j}` with `i < j`.
pub type Pair = (usize, usize);

#[derive(Debug, Error)]
pub enum StatementError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("witness has no entry for w={{{},{}}} L={level}", .pair.0, .pair.1)]
    MissingEntry { pair: Pair, level: usize },
    #[error("malformed witness entry w={{{},{}}} L={level}: {reason}", .pair.0, .pair.1)]
    BadEntry { pair: Pair, level: usize, reason: String },
    #[error("{0} is not an r-subset of the vertices")]
    BadSubset(String),
    #[error("parameters outside the search guard: {0}")]
    OutsideGuard(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("malformed witness file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Parameters `(I, kappa, lambda, g, f)`; levels are `1..=lambda` and
/// `g[L-1]`, `f[L-1]` give the color count and arity at level `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ParamsFile", into = "ParamsFile")]
pub struct StatementParams {
    identity: Identity,
    kappa: usize,
    lambda: usize,
    g: Vec<usize>,
    f: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ParamsFile {
    identity: Identity,
    kappa: usize,
    lambda: usize,
    g: Vec<usize>,
    f: Vec<usize>,
}

impl TryFrom<ParamsFile> for StatementParams {
    type Error = StatementError;

    fn try_from(p: ParamsFile) -> Result<Self, Self::Error> {
        StatementParams::new(p.identity, p.kappa, p.lambda, p.g, p.f)
    }
}

impl From<StatementParams> for ParamsFile {
    fn from(p: StatementParams) -> Self {
        ParamsFile {
            identity: p.identity,
            kappa: p.kappa,
            lambda: p.lambda,
            g: p.g,
            f: p.f,
        }
    }
}

impl StatementParams {
    pub fn new(
        identity: Identity,
        kappa: usize,
        lambda: usize,
        g: Vec<usize>,
        f: Vec<usize>,
    ) -> Result<Self, StatementError> {
        if g.len() != lambda || f.len() != lambda {
            return Err(StatementError::Params(format!(
                "g and f need one entry per level 1..={lambda}, got {} and {}",
                g.len(),
                f.len()
            )));
        }
        if let Some(level) = g.iter().position(|&x| x == 0) {
            return Err(StatementError::Params(format!("g({}) must be at least 1", level + 1)));
        }
        if let Some(level) = f.iter().position(|&x| x > crate::measure::MAX_COMPLETE_ARITY) {
            return Err(StatementError::Params(format!(
                "f({}) = {} exceeds the complete-term-set bound {}",
                level + 1,
                f[level],
                crate::measure::MAX_COMPLETE_ARITY
            )));
        }
        Ok(Self {
            identity,
            kappa,
            lambda,
            g,
            f,
        })
    }

    /// Same `g` and `f` at every level.
    pub fn uniform(identity: Identity, kappa: usize, lambda: usize, g: usize, f: usize) -> Result<Self, StatementError> {
        Self::new(identity, kappa, lambda, vec![g; lambda], vec![f; lambda])
    }

    pub fn identity(&self) -> &Identity {
        &self.identity
    }

    /// Size of the identity.
    pub fn r(&self) -> usize {
        self.identity.size()
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn g_values(&self) -> &[usize] {
        &self.g
    }

    pub fn f_values(&self) -> &[usize] {
        &self.f
    }

    /// Number of colors at level `level` (1-based).
    pub fn g(&self, level: usize) -> usize {
        self.g[level - 1]
    }

    /// Arity at level `level` (1-based).
    pub fn f(&self, level: usize) -> usize {
        self.f[level - 1]
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.lambda
    }

    pub fn pairs(&self) -> Vec<Pair> {
        pairs(self.kappa)
    }

    pub fn term_set(&self, level: usize) -> CompleteTermSet {
        complete_term_set(self.f(level)).expect("arity validated at construction")
    }

    /// `|𝕋_L| = |𝒯_L|^g(L)`: the number of term tuples at a level.
    pub fn tuple_count(&self, level: usize) -> usize {
        self.term_set(level).len().pow(self.g(level) as u32)
    }
}

/// Generators and term indices of one `(w, L)` slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub gens: Vec<GeneratorId>,
    /// Indices into the complete term set of arity `f(L)`, one per color.
    pub terms: Vec<usize>,
}

/// A family `{u_{w,L}, τ^w_{L,m}}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    entries: BTreeMap<(Pair, usize), WitnessEntry>,
}

/// Evaluated cells `τ^w_{L,m}(u_{w,L})` of a witness, keyed by `(w, L)`.
pub type CellFamily = BTreeMap<(Pair, usize), Vec<AlgebraElement>>;

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pair: Pair, level: usize, entry: WitnessEntry) {
        self.entries.insert((pair, level), entry);
    }

    pub fn get(&self, pair: Pair, level: usize) -> Option<&WitnessEntry> {
        self.entries.get(&(pair, level))
    }

    pub fn entries(&self) -> impl Iterator<Item = (Pair, usize, &WitnessEntry)> {
        self.entries.iter().map(|(&(w, l), e)| (w, l, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct generators mentioned anywhere.
    pub fn generators(&self) -> Vec<GeneratorId> {
        let mut out: Vec<GeneratorId> = self
            .entries
            .values()
            .flat_map(|e| e.gens.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The same witness at every level: `entry_for(w)` is used for all `L`.
    pub fn level_independent(
        params: &StatementParams,
        mut entry_for: impl FnMut(Pair) -> WitnessEntry,
    ) -> Self {
        let mut w = Self::new();
        for pair in params.pairs() {
            let e = entry_for(pair);
            for level in params.levels() {
                w.insert(pair, level, e.clone());
            }
        }
        w
    }

    /// Checks C1 and C2 for a single slot.
    pub fn check_entry(&self, params: &StatementParams, pair: Pair, level: usize) -> Result<&WitnessEntry, StatementError> {
        let e = self
            .get(pair, level)
            .ok_or(StatementError::MissingEntry { pair, level })?;
        let bad = |reason: String| StatementError::BadEntry { pair, level, reason };
        if e.gens.len() != params.f(level) {
            return Err(bad(format!(
                "C1: generator tuple has length {}, f(L) = {}",
                e.gens.len(),
                params.f(level)
            )));
        }
        if e.terms.len() != params.g(level) {
            return Err(bad(format!(
                "C2: {} terms given, g(L) = {}",
                e.terms.len(),
                params.g(level)
            )));
        }
        let set = params.term_set(level);
        if let Some(&i) = e.terms.iter().find(|&&i| i >= set.len()) {
            return Err(bad(format!(
                "C2: term index {i} outside 0..={}",
                set.max_index()
            )));
        }
        Ok(e)
    }

    /// Evaluates every slot; fails on the first C1/C2 violation.
    pub fn cells(&self, params: &StatementParams) -> Result<CellFamily, StatementError> {
        let mut out = CellFamily::new();
        for pair in params.pairs() {
            for level in params.levels() {
                let e = self.check_entry(params, pair, level)?;
                let set = params.term_set(level);
                let cells = e
                    .terms
                    .iter()
                    .map(|&i| set.eval(i, &e.gens))
                    .collect::<Result<Vec<_>, _>>()?;
                out.insert((pair, level), cells);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, params: &StatementParams) -> String {
        let file = WitnessFile {
            identity: params.identity.clone(),
            kappa: params.kappa,
            lambda: params.lambda,
            g: params.g.clone(),
            f: params.f.clone(),
            entries: self
                .entries
                .iter()
                .map(|(&((i, j), level), e)| EntryRecord {
                    w: [i, j],
                    level,
                    gens: e.gens.clone(),
                    terms: e.terms.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("witness serializes")
    }

    /// Parses a witness file into its parameters and witness.
    pub fn from_json(text: &str) -> Result<(StatementParams, Witness), StatementError> {
        let file: WitnessFile = serde_json::from_str(text)?;
        let params = StatementParams::new(file.identity, file.kappa, file.lambda, file.g, file.f)?;
        let mut w = Witness::new();
        for rec in file.entries {
            let [i, j] = rec.w;
            if i >= j || j >= params.kappa || rec.level == 0 || rec.level > params.lambda {
                return Err(StatementError::BadEntry {
                    pair: (i, j),
                    level: rec.level,
                    reason: "pair or level out of range".into(),
                });
            }
            if w.get((i, j), rec.level).is_some() {
                return Err(StatementError::BadEntry {
                    pair: (i, j),
                    level: rec.level,
                    reason: "duplicate entry".into(),
                });
            }
            w.insert(
                (i, j),
                rec.level,
                WitnessEntry {
                    gens: rec.gens,
                    terms: rec.terms,
                },
            );
        }
        Ok((params, w))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct WitnessFile {
    identity: Identity,
    kappa: usize,
    lambda: usize,
    g: Vec<usize>,
    f: Vec<usize>,
    entries: Vec<EntryRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryRecord {
    w: [usize; 2],
    #[serde(rename = "L")]
    level: usize,
    gens: Vec<GeneratorId>,
    terms: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> StatementParams {
        StatementParams::uniform(Identity::monochromatic(3), 3, 2, 2, 1).unwrap()
    }

    #[test]
    fn params_validation() {
        let id = Identity::monochromatic(3);
        assert!(StatementParams::new(id.clone(), 3, 2, vec![1], vec![1, 1]).is_err());
        assert!(StatementParams::new(id.clone(), 3, 1, vec![0], vec![1]).is_err());
        assert!(StatementParams::new(id.clone(), 3, 1, vec![1], vec![5]).is_err());
        let p = StatementParams::new(id, 3, 2, vec![2, 1], vec![1, 2]).unwrap();
        assert_eq!(p.g(2), 1);
        assert_eq!(p.f(2), 2);
        assert_eq!(p.tuple_count(1), 16);
        assert_eq!(p.tuple_count(2), 16);
    }

    #[test]
    fn params_json_round_trip() {
        let p = params();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"identity\":\"3; 0-1,0-2,1-2\""));
        let back: StatementParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let bad = text.replace("\"g\":[2,2]", "\"g\":[2]");
        assert!(serde_json::from_str::<StatementParams>(&bad).is_err());
    }

    #[test]
    fn witness_json_round_trip() {
        let p = params();
        let w = Witness::level_independent(&p, |(i, _)| WitnessEntry {
            gens: vec![GeneratorId(i as u32)],
            terms: vec![2, 1],
        });
        let text = w.to_json(&p);
        assert!(text.contains("\"L\": 1"));
        let (p2, w2) = Witness::from_json(&text).unwrap();
        assert_eq!(p2, p);
        assert_eq!(w2, w);
    }

    #[test]
    fn structural_errors() {
        let p = params();
        let mut w = Witness::level_independent(&p, |_| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: vec![2, 1],
        });
        assert!(w.cells(&p).is_ok());
        w.insert((0, 1), 2, WitnessEntry { gens: vec![], terms: vec![2, 1] });
        assert!(matches!(w.cells(&p), Err(StatementError::BadEntry { .. })));
        w.insert((0, 1), 2, WitnessEntry { gens: vec![GeneratorId(0)], terms: vec![2, 9] });
        assert!(matches!(w.cells(&p), Err(StatementError::BadEntry { .. })));
        let empty = Witness::new();
        assert!(matches!(empty.cells(&p), Err(StatementError::MissingEntry { .. })));
    }
}
