//! Sampled points of the product space and the level colorings they induce.
//!
//! A point assigns a fair bit to each generator a witness touches. At level
//! `L` it colors the pair `w` by the unique `m` whose cell `τ^w_{L,m}(u_{w,L})`
//! contains it. Random points stand in for a generic filter: in the exact
//! finite model every point avoids the null sets, since those are empty.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::pairs;
use crate::identity::{realizes_identity, Coloring};
use crate::measure::{AlgebraElement, DyadicMeasure, GeneratorId};
use crate::statement::{c5_union_measure, CellFamily, Pair, StatementError, StatementParams, Witness};

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error(transparent)]
    Statement(#[from] StatementError),
    #[error("point lies in no cell of w={{{},{}}} at L={level}", .pair.0, .pair.1)]
    CellMissing { pair: Pair, level: usize },
    #[error("point lies in cells {first} and {second} of w={{{},{}}} at L={level}", .pair.0, .pair.1)]
    CellOverlap {
        pair: Pair,
        level: usize,
        first: usize,
        second: usize,
    },
    #[error("level {0} is outside 1..=lambda")]
    BadLevel(usize),
    #[error("at least one trial is required")]
    NoTrials,
}

/// A truth assignment to finitely many generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SamplePoint {
    pub assignment: BTreeMap<GeneratorId, bool>,
    pub seed: u64,
    /// Stream of the generator; trial `t` of a batch uses stream `t`.
    pub stream: u64,
}

impl SamplePoint {
    pub fn value(&self, g: GeneratorId) -> Option<bool> {
        self.assignment.get(&g).copied()
    }

    pub fn contains(&self, e: &AlgebraElement) -> bool {
        e.contains(|g| self.assignment.get(&g).copied().unwrap_or(false))
    }
}

/// Fair independent bits for `gens`, drawn in order from `rng`.
pub fn sample_with(rng: &mut impl Rng, gens: &[GeneratorId]) -> BTreeMap<GeneratorId, bool> {
    gens.iter().map(|&g| (g, rng.gen::<bool>())).collect()
}

/// Reproducible point from a seed.
pub fn sample_point(seed: u64, gens: &[GeneratorId]) -> SamplePoint {
    sample_trial_point(seed, 0, gens)
}

/// Point for trial `trial` of a batch; independent of how trials are scheduled.
pub fn sample_trial_point(seed: u64, trial: u64, gens: &[GeneratorId]) -> SamplePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    SamplePoint {
        assignment: sample_with(&mut rng, gens),
        seed,
        stream: trial,
    }
}

/// Cells of a witness, evaluated once and queried per point.
#[derive(Debug, Clone)]
pub struct Colorer<'a> {
    params: &'a StatementParams,
    cells: CellFamily,
    gens: Vec<GeneratorId>,
}

impl<'a> Colorer<'a> {
    pub fn new(params: &'a StatementParams, witness: &Witness) -> Result<Self, SamplerError> {
        Ok(Self {
            params,
            cells: witness.cells(params)?,
            gens: witness.generators(),
        })
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.gens
    }

    /// The 1-based color of `pair` at `level`.
    pub fn color(&self, pt: &SamplePoint, pair: Pair, level: usize) -> Result<usize, SamplerError> {
        let cells = self
            .cells
            .get(&(pair, level))
            .ok_or(SamplerError::BadLevel(level))?;
        let mut found = None;
        for (m, cell) in cells.iter().enumerate() {
            if pt.contains(cell) {
                if let Some(first) = found {
                    return Err(SamplerError::CellOverlap {
                        pair,
                        level,
                        first,
                        second: m + 1,
                    });
                }
                found = Some(m + 1);
            }
        }
        found.ok_or(SamplerError::CellMissing { pair, level })
    }

    /// `c_L` on all of `{0..kappa}`.
    pub fn coloring(&self, pt: &SamplePoint, level: usize) -> Result<Coloring, SamplerError> {
        if level == 0 || level > self.params.lambda() {
            return Err(SamplerError::BadLevel(level));
        }
        let colors = pairs(self.params.kappa())
            .into_iter()
            .map(|w| self.color(pt, w, level).map(|m| m as u64))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Coloring::new(self.params.kappa(), colors).expect("one color per pair"))
    }

    pub fn trajectory(&self, pt: &SamplePoint) -> Result<TrajectoryReport, SamplerError> {
        let mut out = Vec::new();
        for w in self.params.pairs() {
            let colors = self
                .params
                .levels()
                .map(|level| self.color(pt, w, level))
                .collect::<Result<Vec<_>, _>>()?;
            out.push(PairTrajectory {
                w: [w.0, w.1],
                stabilized_at: stabilization_level(&colors),
                colors,
            });
        }
        Ok(TrajectoryReport { pairs: out })
    }
}

/// The level-`L` coloring of `{0..kappa}` at a point.
pub fn coloring_at(
    pt: &SamplePoint,
    params: &StatementParams,
    witness: &Witness,
    level: usize,
) -> Result<Coloring, SamplerError> {
    Colorer::new(params, witness)?.coloring(pt, level)
}

/// Colors `c_1(w), ..., c_lambda(w)` of one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairTrajectory {
    pub w: [usize; 2],
    pub colors: Vec<usize>,
    #[serde(rename = "stabilizedAt")]
    pub stabilized_at: Option<usize>,
}

impl PairTrajectory {
    /// `c_L` is the same for every `L > n`.
    pub fn stable_after(&self, n: usize) -> bool {
        let tail = &self.colors[n.min(self.colors.len())..];
        tail.windows(2).all(|x| x[0] == x[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrajectoryReport {
    pub pairs: Vec<PairTrajectory>,
}

impl TrajectoryReport {
    /// The limit coloring, for pairs whose colors settle within the levels.
    pub fn limit(&self) -> Vec<Option<usize>> {
        self.pairs
            .iter()
            .map(|p| p.stabilized_at.map(|_| *p.colors.last().expect("lambda >= 1")))
            .collect()
    }
}

/// Least `N` in `1..=max(1, lambda - 1)` with `c_N = c_{N+1} = ... = c_lambda`.
pub fn stabilization_level(colors: &[usize]) -> Option<usize> {
    let lambda = colors.len();
    if lambda == 0 {
        return None;
    }
    let last = colors[lambda - 1];
    let mut start = lambda;
    while start > 1 && colors[start - 2] == last {
        start -= 1;
    }
    let limit = lambda.saturating_sub(1).max(1);
    (start <= limit).then_some(start)
}

/// Trajectories of every pair at a single point.
pub fn limit_coloring(
    pt: &SamplePoint,
    params: &StatementParams,
    witness: &Witness,
) -> Result<TrajectoryReport, SamplerError> {
    Colorer::new(params, witness)?.trajectory(pt)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationEstimate {
    #[serde(rename = "P")]
    pub subset: Vec<usize>,
    #[serde(rename = "L")]
    pub level: usize,
    pub hits: u64,
    pub freq: f64,
    pub exact: DyadicMeasure,
    pub trials: u64,
    pub seed: u64,
}

impl RealizationEstimate {
    /// `|freq - exact|` in units of the binomial standard deviation; zero when
    /// both are exactly equal, infinite when the exact value is degenerate but
    /// the frequency is not.
    pub fn deviation(&self) -> f64 {
        binomial_deviation(self.hits, self.trials, self.exact.to_f64())
    }
}

/// `|hits/trials - q|` divided by `sqrt(q(1-q)/trials)`.
pub fn binomial_deviation(hits: u64, trials: u64, q: f64) -> f64 {
    let freq = hits as f64 / trials as f64;
    let sigma = (q * (1.0 - q) / trials as f64).sqrt();
    let diff = (freq - q).abs();
    if sigma == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / sigma
    }
}

/// Runs `f` on the points of trials `0..trials` in parallel and sums the
/// results.
fn par_trials<T: Send>(
    trials: u64,
    seed: u64,
    gens: &[GeneratorId],
    f: impl Fn(&SamplePoint) -> Result<T, SamplerError> + Sync,
) -> Result<Vec<T>, SamplerError> {
    if trials == 0 {
        return Err(SamplerError::NoTrials);
    }
    (0..trials)
        .into_par_iter()
        .map(|t| f(&sample_trial_point(seed, t, gens)))
        .collect()
}

/// Fraction of sampled points whose level-`L` coloring of `P` realizes the
/// identity, next to the exact measure of that event.
pub fn estimate_realization_probability(
    params: &StatementParams,
    witness: &Witness,
    subset: &[usize],
    level: usize,
    trials: u64,
    seed: u64,
) -> Result<RealizationEstimate, SamplerError> {
    let exact = c5_union_measure(params, witness, subset, level)?;
    let colorer = Colorer::new(params, witness)?;
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let hits = par_trials(trials, seed, colorer.generators(), |pt| {
        let c = colorer.coloring(pt, level)?.restrict(&sorted);
        Ok(u64::from(realizes_identity(&c, params.identity())))
    })?
    .into_iter()
    .sum::<u64>();
    Ok(RealizationEstimate {
        subset: sorted,
        level,
        hits,
        freq: hits as f64 / trials as f64,
        exact,
        trials,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellEstimate {
    pub w: [usize; 2],
    #[serde(rename = "L")]
    pub level: usize,
    /// Hits per color `1..=g(L)`.
    pub counts: Vec<u64>,
    pub exact: Vec<DyadicMeasure>,
    pub trials: u64,
}

impl CellEstimate {
    /// Largest deviation over the colors, in binomial standard deviations.
    pub fn max_deviation(&self) -> f64 {
        self.counts
            .iter()
            .zip(&self.exact)
            .map(|(&c, e)| binomial_deviation(c, self.trials, e.to_f64()))
            .fold(0.0, f64::max)
    }
}

/// Empirical frequency of each color of `pair` at `level`.
pub fn estimate_cell_frequencies(
    params: &StatementParams,
    witness: &Witness,
    pair: Pair,
    level: usize,
    trials: u64,
    seed: u64,
) -> Result<CellEstimate, SamplerError> {
    let colorer = Colorer::new(params, witness)?;
    let cells = colorer
        .cells
        .get(&(pair, level))
        .ok_or(SamplerError::BadLevel(level))?;
    let colors = par_trials(trials, seed, colorer.generators(), |pt| colorer.color(pt, pair, level))?;
    let mut counts = vec![0u64; cells.len()];
    for m in colors {
        counts[m - 1] += 1;
    }
    Ok(CellEstimate {
        w: [pair.0, pair.1],
        level,
        counts,
        exact: cells.iter().map(AlgebraElement::measure).collect(),
        trials,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationStats {
    pub trials: u64,
    /// `stabilized[N - 1]`: points at which every pair has stabilized by `N`.
    pub stabilized: Vec<u64>,
    /// `stable_after[N - 1]`: points at which every pair is constant above `N`.
    pub stable_after: Vec<u64>,
}

/// Counts over sampled points of how early all pairs settle.
pub fn estimate_stabilization(
    params: &StatementParams,
    witness: &Witness,
    trials: u64,
    seed: u64,
) -> Result<StabilizationStats, SamplerError> {
    let colorer = Colorer::new(params, witness)?;
    let lambda = params.lambda();
    let rows = par_trials(trials, seed, colorer.generators(), |pt| {
        let t = colorer.trajectory(pt)?;
        let by = (1..=lambda)
            .map(|n| t.pairs.iter().all(|p| p.stabilized_at.is_some_and(|s| s <= n)))
            .collect::<Vec<_>>();
        let after = (1..=lambda)
            .map(|n| t.pairs.iter().all(|p| p.stable_after(n)))
            .collect::<Vec<_>>();
        Ok((by, after))
    })?;
    let mut stabilized = vec![0u64; lambda];
    let mut stable_after = vec![0u64; lambda];
    for (by, after) in rows {
        for n in 0..lambda {
            stabilized[n] += u64::from(by[n]);
            stable_after[n] += u64::from(after[n]);
        }
    }
    Ok(StabilizationStats {
        trials,
        stabilized,
        stable_after,
    })
}

/// `1 - Σ_{N<L<lambda} 1/2^L`, the union bound on a single pair staying
/// constant above `N` when C4 holds.
pub fn stability_bound(n: usize, lambda: usize) -> f64 {
    1.0 - ((n + 1)..lambda).map(|l| 0.5f64.powi(l as i32)).sum::<f64>()
}

/// Report printed by the sampling command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub pairs: Vec<PairTrajectory>,
    pub realization: Option<RealizationEstimate>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Identity;
    use crate::statement::WitnessEntry;

    const NOT_X: usize = 1;
    const X: usize = 2;
    const ONE: usize = 3;

    fn flip_params() -> StatementParams {
        StatementParams::uniform(Identity::monochromatic(3), 3, 2, 2, 1).unwrap()
    }

    #[test]
    fn points_are_reproducible() {
        let gens: Vec<GeneratorId> = (0..20).map(GeneratorId).collect();
        assert_eq!(sample_point(7, &gens), sample_point(7, &gens));
        assert_ne!(sample_point(7, &gens).assignment, sample_point(8, &gens).assignment);
        assert!(sample_point(1, &[]).assignment.is_empty());
    }

    #[test]
    fn bit_means_are_fair() {
        let gens = [GeneratorId(0), GeneratorId(5)];
        let n = 10_000;
        for g in gens {
            let ones = (0..n).filter(|&t| sample_trial_point(3, t, &gens).value(g) == Some(true)).count();
            let mean = ones as f64 / n as f64;
            assert!((0.47..=0.53).contains(&mean), "{mean}");
        }
    }

    #[test]
    fn single_color_gives_constant_coloring() {
        let p = StatementParams::uniform(Identity::monochromatic(3), 4, 1, 1, 1).unwrap();
        let w = Witness::level_independent(&p, |_| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: vec![ONE],
        });
        let pt = sample_point(1, &w.generators());
        assert_eq!(coloring_at(&pt, &p, &w, 1).unwrap(), Coloring::constant(4, 1));
    }

    #[test]
    fn color_follows_generator() {
        let p = flip_params();
        let w = Witness::level_independent(&p, |_| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: vec![X, NOT_X],
        });
        let pt = SamplePoint {
            assignment: [(GeneratorId(0), true)].into(),
            seed: 0,
            stream: 0,
        };
        assert_eq!(coloring_at(&pt, &p, &w, 1).unwrap(), Coloring::constant(3, 1));
        let report = limit_coloring(&pt, &p, &w).unwrap();
        assert!(report.pairs.iter().all(|t| t.stabilized_at == Some(1)));
        assert_eq!(report.limit(), vec![Some(1); 3]);
    }

    #[test]
    fn flipping_point_never_stabilizes() {
        let p = flip_params();
        let mut w = Witness::level_independent(&p, |_| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: vec![X, NOT_X],
        });
        for pair in p.pairs() {
            w.insert(pair, 2, WitnessEntry { gens: vec![GeneratorId(0)], terms: vec![NOT_X, X] });
        }
        let pt = SamplePoint {
            assignment: [(GeneratorId(0), false)].into(),
            seed: 0,
            stream: 0,
        };
        let report = limit_coloring(&pt, &p, &w).unwrap();
        assert_eq!(report.pairs[0].colors, vec![2, 1]);
        assert_eq!(report.pairs[0].stabilized_at, None);
        assert!(report.pairs[0].stable_after(1));
    }

    #[test]
    fn overlapping_cells_are_an_error() {
        let p = flip_params();
        let w = Witness::level_independent(&p, |_| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: vec![X, ONE],
        });
        let pt = SamplePoint {
            assignment: [(GeneratorId(0), true)].into(),
            seed: 0,
            stream: 0,
        };
        assert!(matches!(coloring_at(&pt, &p, &w, 1), Err(SamplerError::CellOverlap { .. })));
        let pt = SamplePoint {
            assignment: [(GeneratorId(0), false)].into(),
            seed: 0,
            stream: 0,
        };
        let w = Witness::level_independent(&p, |_| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: vec![X, 0],
        });
        assert!(matches!(coloring_at(&pt, &p, &w, 1), Err(SamplerError::CellMissing { .. })));
    }

    #[test]
    fn stabilization_levels() {
        assert_eq!(stabilization_level(&[1]), Some(1));
        assert_eq!(stabilization_level(&[1, 1, 1]), Some(1));
        assert_eq!(stabilization_level(&[2, 1, 1]), Some(2));
        assert_eq!(stabilization_level(&[1, 1, 2]), None);
        assert_eq!(stabilization_level(&[1, 2]), None);
    }

    #[test]
    fn realization_frequency_extremes() {
        let p = StatementParams::uniform(Identity::all_distinct(3), 3, 1, 1, 1).unwrap();
        let w = Witness::level_independent(&p, |_| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: vec![ONE],
        });
        let est = estimate_realization_probability(&p, &w, &[0, 1, 2], 1, 200, 5).unwrap();
        assert_eq!(est.freq, 1.0);
        assert!(est.exact.is_one());
        // a triangle coloring that is never constant cannot realize the
        // monochromatic identity
        let p = StatementParams::uniform(Identity::monochromatic(3), 3, 1, 2, 1).unwrap();
        let w = Witness::level_independent(&p, |(i, j)| WitnessEntry {
            gens: vec![GeneratorId(0)],
            terms: if (i, j) == (0, 1) { vec![X, NOT_X] } else { vec![NOT_X, X] },
        });
        let est = estimate_realization_probability(&p, &w, &[0, 1, 2], 1, 200, 5).unwrap();
        // pairs 02 and 12 always agree, 01 always differs from them
        assert_eq!(est.hits, 0);
        assert!(est.exact.is_zero());
        assert!(estimate_realization_probability(&p, &w, &[0, 1, 2], 1, 0, 5).is_err());
    }
}
