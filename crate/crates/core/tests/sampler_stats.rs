use id_forge::sampler::{
    binomial_deviation, coloring_at, estimate_realization_probability, estimate_stabilization, limit_coloring,
    sample_trial_point, stability_bound,
};
use id_forge::statement::search_witness;
use id_forge::{Identity, StatementParams};

const TRIALS: u64 = 10_000;

fn witness(lambda: usize) -> (StatementParams, id_forge::Witness) {
    let p = StatementParams::uniform(Identity::monochromatic(3), 3, lambda, 2, 1).unwrap();
    let w = search_witness(&p, 3).unwrap().expect("witness exists");
    (p, w)
}

#[test]
fn realization_frequency_stays_below_the_bound() {
    let (p, w) = witness(2);
    for level in p.levels() {
        let est = estimate_realization_probability(&p, &w, &[0, 1, 2], level, TRIALS, 7).unwrap();
        assert!(est.deviation() <= 3.0, "{est:?}");
        // C5 holds exactly, so the frequency is below 1/L up to noise
        let sigma = (1.0 / level as f64 * (1.0 - 1.0 / level as f64) / TRIALS as f64).sqrt();
        assert!(est.freq < 1.0 / level as f64 + 3.0 * sigma, "{est:?}");
    }
}

#[test]
fn pairs_stabilize_as_often_as_c4_promises() {
    let (p, w) = witness(3);
    let stats = estimate_stabilization(&p, &w, TRIALS, 21).unwrap();
    let cols = limit_coloring(&sample_trial_point(21, 0, &w.generators()), &p, &w).unwrap();
    let pairs = cols.pairs.len() as f64;
    for n in 1..p.lambda() {
        // union bound over pairs
        let bound = 1.0 - pairs * (1.0 - stability_bound(n, p.lambda()));
        let hits = stats.stable_after[n - 1];
        let freq = hits as f64 / TRIALS as f64;
        let q = bound.clamp(0.0, 1.0);
        assert!(freq >= q || binomial_deviation(hits, TRIALS, q) <= 3.0, "N={n}: {freq} < {q}");
    }
    assert_eq!(stats.stable_after[p.lambda() - 1], TRIALS);
}

#[test]
fn trajectories_match_level_colorings() {
    let (p, w) = witness(3);
    let gens = w.generators();
    for t in 0..50 {
        let pt = sample_trial_point(5, t, &gens);
        let traj = limit_coloring(&pt, &p, &w).unwrap();
        for level in p.levels() {
            let c = coloring_at(&pt, &p, &w, level).unwrap();
            for pair in &traj.pairs {
                assert_eq!(c.color(pair.w[0], pair.w[1]) as usize, pair.colors[level - 1]);
            }
        }
        for (pair, limit) in traj.pairs.iter().zip(traj.limit()) {
            match pair.stabilized_at {
                Some(_) => assert_eq!(limit, pair.colors.last().copied()),
                None => assert_eq!(limit, None),
            }
        }
    }
}
