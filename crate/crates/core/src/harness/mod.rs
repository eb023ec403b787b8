//! Seeded random graphs, per-trial seed derivation and the single-trial
//! runner used by threshold scans.

pub mod pipeline;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::lower_bound_graph;
use crate::error::{invalid, Result};
use crate::graph::{union, Graph, GraphBuilder};
use crate::tiling::{greedy_tiling, perfect_tiling, Deadline, TileOutcome};

pub use pipeline::{perturbed_pipeline, PipelineParams, PipelineReport, PipelineStatus, Stage};

/// One step of SplitMix64.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed from `(master, cell, trial)`.
pub fn mix_seed(master: u64, cell: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ trial.rotate_left(32))
}

/// Sub-stream `tag` of `seed`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag.wrapping_add(0x5EED)))
}

/// `G(n, p)` drawn from ChaCha8 seeded with `seed`: pairs `(u, v)`, `u < v`,
/// in lexicographic order, each kept when a uniform `f64` in `[0, 1)` is
/// below `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid!("edge probability {p} outside [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gb = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                gb.add_edge(u, v)?;
            }
        }
    }
    Ok(gb.build())
}

/// Per-layer probability so that `layers` independent copies union to `p`.
pub fn layer_probability(p: f64, layers: usize) -> f64 {
    1.0 - libm::pow(1.0 - p, 1.0 / layers as f64)
}

/// `G(n, alpha)` with every vertex topped up to degree `ceil(alpha n)` by
/// uniformly chosen extra neighbours.
pub fn random_min_degree(n: usize, alpha: f64, seed: u64) -> Result<Graph> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(invalid!("alpha {alpha} outside [0, 1)"));
    }
    let target = (libm::ceil(alpha * n as f64) as usize).min(n.saturating_sub(1));
    let base = gnp(n, alpha, seed)?;
    let mut gb = GraphBuilder::from_graph(&base);
    let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, 1));
    for v in 0..n {
        if gb.degree(v) >= target {
            continue;
        }
        let mut others: Vec<usize> = (0..n).filter(|&u| u != v && !gb.has_edge(u, v)).collect();
        others.shuffle(&mut rng);
        for u in others {
            if gb.degree(v) >= target {
                break;
            }
            gb.add_edge(u, v)?;
        }
    }
    Ok(gb.build())
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let ph = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (ph + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub const WILSON_Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Base {
    /// [`lower_bound_graph`] with this `gamma`.
    LowerBound { gamma: f64 },
    /// [`random_min_degree`] with this `alpha`.
    Random { alpha: f64 },
}

impl Base {
    pub fn name(&self) -> &'static str {
        match self {
            Base::LowerBound { .. } => "lower-bound",
            Base::Random { .. } => "random",
        }
    }

    /// Minimum-degree fraction of the base graph.
    pub fn alpha(&self, r: usize, k: usize) -> f64 {
        match *self {
            Base::LowerBound { gamma } => (1.0 - gamma) * (1.0 - (k as f64 - 1.0) / r as f64),
            Base::Random { alpha } => alpha,
        }
    }

    pub fn build(&self, n: usize, r: usize, k: usize, seed: u64) -> Result<Graph> {
        match *self {
            Base::LowerBound { gamma } => Ok(lower_bound_graph(n, r, k, gamma)?.graph),
            Base::Random { alpha } => random_min_degree(n, alpha, seed),
        }
    }
}

/// Checks `1 - k/r < alpha < 1 - (k-1)/r`; returns a warning when alpha is
/// within 5% of the interval width from an endpoint.
pub fn check_alpha_interval(r: usize, k: usize, alpha: f64) -> Result<Option<String>> {
    crate::constructions::case_tag(r, k)?;
    let lo = 1.0 - k as f64 / r as f64;
    let hi = 1.0 - (k as f64 - 1.0) / r as f64;
    if !(alpha > lo && alpha < hi) {
        return Err(invalid!(
            "alpha = {alpha} lies outside the open interval (1 - k/r, 1 - (k-1)/r) = ({lo:.6}, {hi:.6}) for r={r}, k={k}"
        ));
    }
    let band = 0.05 * (hi - lo);
    Ok((alpha - lo < band || hi - alpha < band)
        .then(|| format!("alpha = {alpha} is near an endpoint of ({lo:.6}, {hi:.6})")))
}

/// `c n^{-2/k}`, capped at 1.
pub fn edge_probability(c: f64, n: usize, k: usize) -> f64 {
    (c * libm::pow(n as f64, -2.0 / k as f64)).min(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialSpec {
    pub r: usize,
    pub k: usize,
    pub base: Base,
    pub n: usize,
    pub c: f64,
    pub seed: u64,
    pub pipeline: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Tiled,
    Untiled,
    Timeout,
    StageFailure(Stage),
}

impl Outcome {
    pub fn label(&self) -> String {
        match self {
            Outcome::Tiled => "tiled".into(),
            Outcome::Untiled => "untiled".into(),
            Outcome::Timeout => "timeout".into(),
            Outcome::StageFailure(s) => format!("stage-failure:{}", s.name()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialResult {
    pub p: f64,
    pub outcome: Outcome,
    /// Uncovered vertices: 0 when tiled, a greedy estimate otherwise.
    pub leftover: usize,
    pub pipeline: Option<PipelineReport>,
}

/// Inputs of one trial: the edge probability, the base graph and, for the
/// exact solver, `base ∪ G(n, p)`.
#[derive(Clone, Debug)]
pub struct TrialInstance {
    pub p: f64,
    pub base: Graph,
    pub host: Option<Graph>,
}

pub fn prepare_trial(spec: &TrialSpec) -> Result<TrialInstance> {
    let p = edge_probability(spec.c, spec.n, spec.k);
    let base = spec.base.build(spec.n, spec.r, spec.k, derive(spec.seed, 1))?;
    let host = if spec.pipeline {
        None
    } else {
        Some(union(&base, &gnp(spec.n, p, derive(spec.seed, 2))?)?)
    };
    Ok(TrialInstance { p, base, host })
}

/// Decides whether the prepared instance has a perfect `K_r`-tiling, with the
/// exact solver or the perturbed pipeline.
pub fn decide_trial(spec: &TrialSpec, inst: &TrialInstance, deadline: &dyn Deadline) -> Result<TrialResult> {
    let p = inst.p;
    let Some(g) = &inst.host else {
        let params = PipelineParams::default();
        let rep = perturbed_pipeline(&inst.base, p, spec.r, spec.k, derive(spec.seed, 2), &params)?;
        let (outcome, leftover) = match &rep.status {
            PipelineStatus::Success(_) => (Outcome::Tiled, 0),
            PipelineStatus::Failed(s) => (Outcome::StageFailure(*s), rep.leftover),
        };
        return Ok(TrialResult {
            p,
            outcome,
            leftover,
            pipeline: Some(rep),
        });
    };
    let (outcome, leftover) = match perfect_tiling(g, spec.r, deadline)? {
        TileOutcome::Found(t) => {
            t.validate_perfect(g)?;
            (Outcome::Tiled, 0)
        }
        TileOutcome::None(_) => (Outcome::Untiled, spec.n - spec.r * greedy_tiling(g, spec.r).len()),
        TileOutcome::Timeout => (Outcome::Timeout, spec.n - spec.r * greedy_tiling(g, spec.r).len()),
    };
    Ok(TrialResult {
        p,
        outcome,
        leftover,
        pipeline: None,
    })
}

pub fn run_trial(spec: &TrialSpec, deadline: &dyn Deadline) -> Result<TrialResult> {
    decide_trial(spec, &prepare_trial(spec)?, deadline)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gnp(20, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gnp(20, 1.0, 1).unwrap(), Graph::complete(20));
        assert_eq!(gnp(30, 0.3, 9).unwrap(), gnp(30, 0.3, 9).unwrap());
        assert_ne!(gnp(30, 0.3, 9).unwrap(), gnp(30, 0.3, 10).unwrap());
        assert!(gnp(3, 1.5, 0).is_err());
    }

    #[test]
    fn layers_compose() {
        let q = layer_probability(0.3, 4);
        assert!((1.0 - libm::pow(1.0 - q, 4.0) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn min_degree_is_forced() {
        let g = random_min_degree(90, 0.4, 3).unwrap();
        assert!(g.min_degree() >= 36);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson(7, 10, WILSON_Z95);
        assert!(lo < 0.7 && 0.7 < hi);
        assert_eq!(wilson(0, 0, WILSON_Z95), (0.0, 1.0));
        let (lo, hi) = wilson(0, 20, WILSON_Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.2);
    }

    #[test]
    fn alpha_interval() {
        assert!(check_alpha_interval(3, 3, 0.0).is_err());
        assert!(check_alpha_interval(3, 2, 0.5).unwrap().is_none());
        assert!(check_alpha_interval(3, 2, 0.34).unwrap().is_some());
        let a = Base::LowerBound { gamma: 0.1 }.alpha(3, 2);
        assert!((a - 0.6).abs() < 1e-12);
    }

    #[test]
    fn seeds_differ_per_cell_and_trial() {
        let a = mix_seed(1, 0, 0);
        assert_ne!(a, mix_seed(1, 0, 1));
        assert_ne!(a, mix_seed(1, 1, 0));
        assert_eq!(a, mix_seed(1, 0, 0));
    }
}
