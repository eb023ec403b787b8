//! Reachability: counting path embeddings between two vertices, and the
//! two-stage partition into mutually reachable parts.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::constructions::{case_tag, h0, Case, HVector};
use crate::embed::{count_labelled_embeddings, estimate_labelled_embeddings, EmbeddingCount};
use crate::error::{invalid, Result};
use crate::graph::{Graph, GraphBuilder};

use super::path::build_h_path;

/// Exact counting is refused above this many free path vertices.
pub const EXACT_FREE_CAP: usize = 12;
pub const PARTITION_N_CAP: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    Exact { budget: Option<u64> },
    Sample { trials: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReachCount {
    /// Count (exact mode) or unbiased estimate, both orientations summed.
    pub value: f64,
    pub std_err: f64,
    /// `n^(t r - 1)`.
    pub normalizer: f64,
    /// Set in exact mode.
    pub exact: Option<EmbeddingCount>,
}

/// Labelled embeddings of the path of `v` with its endpoints on `{x, y}`,
/// summed over both orientations.
pub fn reachability_count(g: &Graph, x: usize, y: usize, v: &HVector, mode: CountMode) -> Result<ReachCount> {
    if x == y {
        return Err(invalid!("endpoints must differ"));
    }
    if x >= g.n() || y >= g.n() {
        return Err(invalid!("endpoint out of range"));
    }
    let path = build_h_path(v)?;
    let free = path.graph.n() - 2;
    let normalizer = libm::pow(g.n() as f64, free as f64);
    let orientations = [[(path.a, x), (path.b, y)], [(path.a, y), (path.b, x)]];
    match mode {
        CountMode::Exact { budget } => {
            if free > EXACT_FREE_CAP {
                return Err(invalid!(
                    "exact counting refused for {free} free vertices (cap {EXACT_FREE_CAP}); use sampling"
                ));
            }
            let mut total = EmbeddingCount {
                count: 0,
                truncated: false,
            };
            for o in &orientations {
                let left = budget.map(|b| b - total.count);
                let c = count_labelled_embeddings(&path.graph, g, o, left)?;
                total.count += c.count;
                if c.truncated {
                    total.truncated = true;
                    break;
                }
            }
            Ok(ReachCount {
                value: total.count as f64,
                std_err: 0.0,
                normalizer,
                exact: Some(total),
            })
        }
        CountMode::Sample { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut value = 0.0;
            let mut var = 0.0;
            for o in &orientations {
                let (m, se) = estimate_labelled_embeddings(&path.graph, g, o, trials, &mut rng)?;
                value += m;
                var += se * se;
            }
            Ok(ReachCount {
                value,
                std_err: libm::sqrt(var),
                normalizer,
                exact: None,
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionParams {
    /// A pair is directly reachable when its count reaches this fraction of
    /// the normalizer.
    pub count_floor: f64,
    /// Pairs with at least `epsilon n` common reachable vertices become
    /// reachable at the next level.
    pub epsilon: f64,
    /// Crossing-edge density (`mu n^2`) that merges two parts.
    pub mu: f64,
    /// Trials per sampled pair count.
    pub trials: usize,
    /// Total sampled trials before the remaining pairs are declared
    /// unreachable and the result flagged heuristic.
    pub sample_budget: u64,
    pub n_cap: usize,
}

impl Default for PartitionParams {
    fn default() -> Self {
        PartitionParams {
            count_floor: 1e-3,
            epsilon: 0.05,
            mu: 0.01,
            trials: 64,
            sample_budget: 20_000_000,
            n_cap: PARTITION_N_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachPartition {
    pub parts: Vec<Vec<usize>>,
    /// Low internal degree vertices, to be assigned by the caller.
    pub exceptional: Vec<usize>,
    /// Budget ran out or more than `c - 1` parts survived stage one.
    pub heuristic: bool,
    /// Closure levels computed.
    pub levels: usize,
    /// Parts after stage one, before merging.
    pub stage_one_parts: usize,
}

/// Relation of pairs joined by many single-entry `H_0` paths.
fn direct_relation(g: &Graph, r: usize, k: usize, params: &PartitionParams, seed: u64) -> Result<(Graph, bool)> {
    let n = g.n();
    let v = HVector::repeat(&h0(r, k)?, 1)?;
    let free = r - 1;
    let threshold = params.count_floor * libm::pow(n as f64, free as f64);
    let exact = free <= 2;
    let mut gb = GraphBuilder::new(n);
    let mut spent = 0u64;
    let mut heuristic = false;
    for x in 0..n {
        for y in x + 1..n {
            let reach = if exact {
                let budget = libm::ceil(threshold).max(1.0) as u64;
                let c = reachability_count(g, x, y, &v, CountMode::Exact { budget: Some(budget) })?;
                c.value >= threshold
            } else {
                if spent + 2 * params.trials as u64 > params.sample_budget {
                    heuristic = true;
                    continue;
                }
                spent += 2 * params.trials as u64;
                let s = seed ^ ((x as u64) << 32 | y as u64);
                let c = reachability_count(
                    g,
                    x,
                    y,
                    &v,
                    CountMode::Sample {
                        trials: params.trials,
                        seed: s,
                    },
                )?;
                c.value >= threshold
            };
            if reach {
                gb.add_edge(x, y)?;
            }
        }
    }
    Ok((gb.build(), heuristic))
}

/// Case-3 partition: stage one picks a maximal family of pairwise
/// unreachable representatives and groups every vertex with the first one it
/// reaches; stage two merges parts with at least `mu n^2` crossing edges and
/// moves vertices of low internal degree to the exceptional set.
pub fn reachability_partition(
    g: &Graph,
    r: usize,
    k: usize,
    params: &PartitionParams,
    seed: u64,
) -> Result<ReachPartition> {
    let tag = case_tag(r, k)?;
    if tag.case != Case::Three {
        return Err(invalid!("reachability partition is for 2 <= r - k < r/2 (case three)"));
    }
    let n = g.n();
    if n > params.n_cap {
        return Err(invalid!("n = {n} exceeds the partition cap {}", params.n_cap));
    }
    if n == 0 {
        return Ok(ReachPartition {
            parts: Vec::new(),
            exceptional: Vec::new(),
            heuristic: false,
            levels: 0,
            stage_one_parts: 0,
        });
    }
    let c = tag.c.expect("case three");
    let (mut rel, mut heuristic) = direct_relation(g, r, k, params, seed)?;

    // concatenation closure
    let need = libm::ceil(params.epsilon * n as f64) as usize;
    let mut levels = 1;
    while levels < c.max(2) * 4 {
        let mut gb = GraphBuilder::from_graph(&rel);
        let mut changed = false;
        for x in 0..n {
            for y in x + 1..n {
                if !rel.has_edge(x, y) {
                    let common = VertexSet::from_words(n, rel.row(x)).count_and(rel.row(y));
                    if common >= need.max(1) {
                        gb.add_edge(x, y)?;
                        changed = true;
                    }
                }
            }
        }
        levels += 1;
        rel = gb.build();
        if !changed {
            break;
        }
    }

    // stage one
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut reps: Vec<usize> = Vec::new();
    for &v in &order {
        if reps.iter().all(|&u| !rel.has_edge(u, v)) {
            reps.push(v);
        }
    }
    let stage_one_parts = reps.len();
    if reps.len() > c - 1 {
        heuristic = true;
    }
    let label: Vec<usize> = (0..n)
        .map(|v| {
            reps.iter()
                .position(|&u| u == v || rel.has_edge(u, v))
                .expect("family is maximal")
        })
        .collect();

    // stage two: components of the part graph
    let l = reps.len();
    let mut crossing = vec![vec![0usize; l]; l];
    for (u, v) in g.edges() {
        let (a, b) = (label[u], label[v]);
        if a != b {
            crossing[a][b] += 1;
            crossing[b][a] += 1;
        }
    }
    let merge = params.mu * (n * n) as f64;
    let mut jb = GraphBuilder::new(l);
    for (a, row) in crossing.iter().enumerate() {
        for (b, &count) in row.iter().enumerate().skip(a + 1) {
            if count as f64 >= merge {
                jb.add_edge(a, b)?;
            }
        }
    }
    let comps = jb.build().components();
    let mut comp_of = vec![0usize; l];
    for (i, comp) in comps.iter().enumerate() {
        comp.iter().for_each(|&a| comp_of[a] = i);
    }
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for v in 0..n {
        parts[comp_of[label[v]]].push(v);
    }

    // cleanup
    let slack = g.min_degree() as f64 / n as f64 - (1.0 - k as f64 / r as f64);
    let ratio = 1.0 - k as f64 / r as f64 + slack / 2.0;
    let mut exceptional = Vec::new();
    for part in parts.iter_mut() {
        let set = VertexSet::from_iter(n, part.iter().copied());
        let bound = ratio * part.len() as f64;
        let (keep, drop): (Vec<usize>, Vec<usize>) =
            part.iter().partition(|&&v| set.count_and(g.row(v)) as f64 >= bound);
        *part = keep;
        exceptional.extend(drop);
    }
    parts.retain(|p| !p.is_empty());
    parts.sort();
    exceptional.sort_unstable();
    Ok(ReachPartition {
        parts,
        exceptional,
        heuristic,
        levels,
        stage_one_parts,
    })
}
