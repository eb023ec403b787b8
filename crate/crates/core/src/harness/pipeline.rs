//! End-to-end tiling of `G_det ∪ G(n, p)`: absorbing structure, greedy
//! almost-tiling, completion through the flexible set, and absorption.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::absorption::reach::{reachability_partition, PartitionParams};
use crate::absorption::structure::{absorb, assemble_absorbing_structure, AbsorbingStructure, StructureParams};
use crate::absorption::template::{generate_shaped, TemplateShape, VerifyMode};
use crate::bits::VertexSet;
use crate::constructions::{case_tag, Case};
use crate::error::{invalid, Error, Result};
use crate::graph::{union, Graph};
use crate::tiling::{crossing_clique_completion, crossing_cliques, greedy_almost_tiling, GreedyParams, Tiling};

use super::{derive, gnp, layer_probability};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Split = 1,
    Flexible = 2,
    Structure = 3,
    AlmostTiling = 4,
    Completion = 5,
    Residue = 6,
    Absorb = 7,
}

impl Stage {
    pub fn id(&self) -> u8 {
        *self as u8
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Split => "split",
            Stage::Flexible => "flexible",
            Stage::Structure => "structure",
            Stage::AlmostTiling => "almost-tiling",
            Stage::Completion => "completion",
            Stage::Residue => "residue",
            Stage::Absorb => "absorb",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineParams {
    /// Flexible-set fraction; `None` uses `min(gamma / (2000 r^2), 0.02)`.
    pub eta: Option<f64>,
    /// Flexibility of each absorbing structure; `None` picks `r`.
    pub m: Option<usize>,
    pub template: TemplateShape,
    pub structure: StructureParams,
    pub greedy: GreedyParams,
    pub partition: PartitionParams,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            eta: None,
            m: None,
            template: TemplateShape::Sparse,
            structure: StructureParams::default(),
            greedy: GreedyParams::default(),
            partition: PartitionParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub stage: Stage,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub enum PipelineStatus {
    Success(Tiling),
    Failed(Stage),
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub status: PipelineStatus,
    pub stages: Vec<StageReport>,
    pub layers: usize,
    pub parts: usize,
    /// Total `|V(A)|` over all structures built.
    pub structure_size: usize,
    /// Vertices left uncovered by the almost-tiling (last part attempted).
    pub leftover: usize,
}

impl PipelineReport {
    pub fn failed_stage(&self) -> Option<Stage> {
        match self.status {
            PipelineStatus::Failed(s) => Some(s),
            PipelineStatus::Success(_) => None,
        }
    }
}

struct Run {
    stages: Vec<StageReport>,
    structure_size: usize,
    leftover: usize,
}

impl Run {
    fn ok(&mut self, stage: Stage, detail: String) {
        self.stages.push(StageReport {
            stage,
            ok: true,
            detail,
        });
    }

    fn fail(&mut self, stage: Stage, detail: String) -> Stage {
        self.stages.push(StageReport {
            stage,
            ok: false,
            detail,
        });
        stage
    }
}

/// Smallest `m >= 1` with `r | m`, so the almost-tiling may end with no
/// leftover at all.
fn default_m(r: usize) -> usize {
    r
}

/// Runs every stage; stage failures come back as [`PipelineStatus::Failed`].
pub fn perturbed_pipeline(
    g_det: &Graph,
    p: f64,
    r: usize,
    k: usize,
    seed: u64,
    params: &PipelineParams,
) -> Result<PipelineReport> {
    let n = g_det.n();
    if n == 0 || !n.is_multiple_of(r) {
        return Err(invalid!("r={r} must divide n={n}"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid!("edge probability {p} outside [0, 1]"));
    }
    let tag = case_tag(r, k)?;
    let layer_count = match tag.case {
        Case::Three => 4 + 2 * tag.c.expect("case three"),
        _ => 4,
    };
    let pl = layer_probability(p, layer_count);
    let layers: Vec<Graph> = (0..layer_count)
        .map(|l| gnp(n, pl, derive(seed, 100 + l as u64)))
        .collect::<Result<_>>()?;
    let mut run = Run {
        stages: Vec::new(),
        structure_size: 0,
        leftover: 0,
    };
    run.ok(Stage::Split, format!("{layer_count} layers at p'={pl:.6}"));

    let mut tiling = Tiling::new(r);
    let parts: Vec<Vec<usize>> = if tag.case == Case::Three {
        match case_three_parts(g_det, &layers[0], r, k, seed, params, &mut tiling) {
            Ok(parts) => parts,
            Err(detail) => {
                let s = run.fail(Stage::Structure, detail);
                return Ok(report(run, PipelineStatus::Failed(s), layer_count, 0));
            }
        }
    } else {
        vec![(0..n).collect()]
    };
    let part_count = parts.len();

    for (i, part) in parts.iter().enumerate() {
        let struct_layer = if tag.case == Case::Three {
            &layers[4 + 2 * i]
        } else {
            &layers[0]
        };
        let ctx = PartCtx {
            g_det,
            struct_layer,
            almost_layer: &layers[1],
            completion_layer: &layers[2],
            residue_layer: &layers[3],
            r,
            k,
            seed: derive(seed, 1000 + i as u64),
            params,
        };
        match tile_part(&ctx, part, &mut run)? {
            Ok(t) => tiling.extend(t),
            Err(stage) => return Ok(report(run, PipelineStatus::Failed(stage), layer_count, part_count)),
        }
    }

    let mut host = g_det.clone();
    for l in &layers {
        host = union(&host, l)?;
    }
    tiling
        .validate_perfect(&host)
        .map_err(|e| Error::Inconsistency(format!("pipeline produced an invalid tiling: {e}")))?;
    Ok(report(run, PipelineStatus::Success(tiling), layer_count, part_count))
}

fn report(run: Run, status: PipelineStatus, layers: usize, parts: usize) -> PipelineReport {
    PipelineReport {
        status,
        stages: run.stages,
        layers,
        parts,
        structure_size: run.structure_size,
        leftover: run.leftover,
    }
}

/// Partition, attach exceptional vertices to their best part, and fix each
/// part's size modulo `r` with crossing cliques (one vertex in part `i`,
/// `r - 1` in part `i + 1`), which go straight into `tiling`.
fn case_three_parts(
    g_det: &Graph,
    crossing_layer: &Graph,
    r: usize,
    k: usize,
    seed: u64,
    params: &PipelineParams,
    tiling: &mut Tiling,
) -> core::result::Result<Vec<Vec<usize>>, String> {
    let n = g_det.n();
    let part = reachability_partition(g_det, r, k, &params.partition, derive(seed, 7))
        .map_err(|e| format!("partition: {e}"))?;
    let mut parts = part.parts;
    if parts.is_empty() {
        parts.push(Vec::new());
    }
    for v in part.exceptional {
        let best = (0..parts.len())
            .max_by_key(|&i| {
                (
                    parts[i].iter().filter(|&&u| g_det.has_edge(u, v)).count(),
                    usize::MAX - i,
                )
            })
            .expect("at least one part");
        parts[best].push(v);
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    for i in 0..parts.len().saturating_sub(1) {
        let need = parts[i].len() % r;
        if need == 0 {
            continue;
        }
        let found = crossing_cliques(
            g_det,
            crossing_layer,
            &parts[i],
            &parts[i + 1],
            need,
            r,
            derive(seed, 8 + i as u64),
            params.greedy,
        )
        .map_err(|e| format!("crossing cliques: {e}"))?;
        if found.len() < need {
            return Err(format!(
                "only {} of {need} crossing cliques between parts {i} and {}",
                found.len(),
                i + 1
            ));
        }
        let used = VertexSet::from_iter(n, found.covered());
        for p in parts.iter_mut() {
            p.retain(|&v| !used.contains(v));
        }
        tiling.extend(found);
    }
    Ok(parts)
}

struct PartCtx<'a> {
    g_det: &'a Graph,
    struct_layer: &'a Graph,
    almost_layer: &'a Graph,
    completion_layer: &'a Graph,
    residue_layer: &'a Graph,
    r: usize,
    k: usize,
    seed: u64,
    params: &'a PipelineParams,
}

/// Stages two to seven on one part; the outer error is a genuine
/// inconsistency, the inner one a stage failure.
fn tile_part(ctx: &PartCtx<'_>, part: &[usize], run: &mut Run) -> Result<core::result::Result<Tiling, Stage>> {
    let (r, k) = (ctx.r, ctx.k);
    let n = ctx.g_det.n();
    let size = part.len();
    let m = ctx.params.m.unwrap_or_else(|| default_m(r));
    if m == 0 {
        return Err(invalid!("flexibility must be at least 1"));
    }

    // (2) flexible set
    if size < 4 * m {
        return Ok(Err(run.fail(
            Stage::Flexible,
            format!("part of {size} vertices cannot hold Z (4m = {})", 4 * m),
        )));
    }
    let pset = VertexSet::from_iter(n, part.iter().copied());
    let min_deg = part
        .iter()
        .map(|&v| pset.count_and(ctx.g_det.row(v)))
        .min()
        .unwrap_or(0);
    let gamma = min_deg as f64 / size as f64 - (1.0 - k as f64 / r as f64);
    let eta = ctx
        .params
        .eta
        .unwrap_or_else(|| (gamma / (2000.0 * (r * r) as f64)).clamp(0.0, 0.02));
    let eta = eta.max(2.0 * m as f64 / (1.9 * size as f64));
    let mut rng = ChaCha8Rng::seed_from_u64(derive(ctx.seed, 2));
    let mut sampled: Vec<usize> = part
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < 1.9 * eta)
        .collect();
    let drawn = sampled.len();
    sampled.shuffle(&mut rng);
    sampled.truncate(2 * m);
    if sampled.len() < 2 * m {
        let mut rest: Vec<usize> = part.iter().copied().filter(|v| !sampled.contains(v)).collect();
        rest.shuffle(&mut rng);
        sampled.extend(rest.into_iter().take(2 * m - sampled.len()));
    }
    let mut x = sampled;
    x.sort_unstable();
    let xset = VertexSet::from_iter(n, x.iter().copied());
    let z2: Vec<usize> = part
        .iter()
        .copied()
        .filter(|&v| !xset.contains(v))
        .take(2 * m)
        .collect();
    run.ok(
        Stage::Flexible,
        format!("eta={eta:.5}, |X'|={drawn}, |X|={}, m={m}", x.len()),
    );

    // (3) absorbing structure
    let template = match generate_shaped(m, derive(ctx.seed, 3), ctx.params.template, VerifyMode::Auto) {
        Ok(t) => t,
        Err(e) => return Ok(Err(run.fail(Stage::Structure, format!("template: {e}")))),
    };
    let mut sp = ctx.params.structure.clone();
    sp.allowed = Some(part.to_vec());
    let structure: AbsorbingStructure = match assemble_absorbing_structure(
        ctx.g_det,
        ctx.struct_layer,
        &template,
        &x,
        &z2,
        r,
        k,
        derive(ctx.seed, 4),
        &sp,
    ) {
        Ok(a) => a,
        Err(e) => return Ok(Err(run.fail(Stage::Structure, format!("{e}")))),
    };
    run.structure_size += structure.vertices().len();
    run.ok(
        Stage::Structure,
        format!(
            "|V(A)|={} with {} gadgets",
            structure.vertices().len(),
            structure.embeddings().len()
        ),
    );

    // (4) almost-tiling of the rest
    let aset = VertexSet::from_iter(n, structure.vertices().iter().copied());
    let rest: Vec<usize> = part.iter().copied().filter(|&v| !aset.contains(v)).collect();
    let almost = greedy_almost_tiling(
        ctx.g_det,
        ctx.almost_layer,
        &rest,
        r,
        k,
        0.0,
        derive(ctx.seed, 5),
        ctx.params.greedy,
    )?;
    let y = almost.leftover;
    run.leftover = y.len();
    if (r - 1) * y.len() > m {
        return Ok(Err(run.fail(
            Stage::AlmostTiling,
            format!(
                "{} of {} vertices uncovered; at most {} fit into X",
                y.len(),
                rest.len(),
                m / (r - 1)
            ),
        )));
    }
    run.ok(
        Stage::AlmostTiling,
        format!("{} cliques, {} uncovered", almost.tiling.len(), y.len()),
    );

    // (5) cover the leftover through X
    let completion = if y.is_empty() {
        Tiling::new(r)
    } else {
        match crossing_clique_completion(
            ctx.g_det,
            ctx.completion_layer,
            &y,
            &x,
            r,
            k,
            derive(ctx.seed, 6),
            ctx.params.greedy,
        ) {
            Ok(c) if c.unserved.is_empty() => c.tiling,
            Ok(c) => {
                return Ok(Err(run.fail(
                    Stage::Completion,
                    format!("{} leftover vertices unserved", c.unserved.len()),
                )))
            }
            Err(e) => return Ok(Err(run.fail(Stage::Completion, format!("{e}")))),
        }
    };
    run.ok(Stage::Completion, format!("{} cliques", completion.len()));

    // (6) tile part of the residue so that exactly m flexible vertices remain
    let used = VertexSet::from_iter(n, completion.covered());
    let residue: Vec<usize> = x.iter().copied().filter(|&v| !used.contains(v)).collect();
    let consumed = (r - 1) * y.len();
    if !(m - consumed).is_multiple_of(r) {
        return Err(Error::Inconsistency(format!(
            "flexible budget {} not divisible by r",
            m - consumed
        )));
    }
    let want = (m - consumed) / r;
    let mut peeled = Tiling::new(r);
    if want > 0 {
        let res = greedy_almost_tiling(
            ctx.g_det,
            ctx.residue_layer,
            &residue,
            r,
            k,
            0.0,
            derive(ctx.seed, 7),
            ctx.params.greedy,
        )?;
        if res.tiling.len() < want {
            return Ok(Err(run.fail(
                Stage::Residue,
                format!("{} cliques inside the residue, {want} needed", res.tiling.len()),
            )));
        }
        for part in res.tiling.parts.into_iter().take(want) {
            peeled.push(part);
        }
    }
    run.ok(Stage::Residue, format!("{} cliques kept", peeled.len()));

    // (7) absorb the covered flexible vertices
    let covered = VertexSet::from_iter(n, completion.covered().into_iter().chain(peeled.covered()));
    let zbar: Vec<usize> = x.iter().copied().filter(|&v| covered.contains(v)).collect();
    let absorbed = absorb(&structure, &zbar)?;
    run.ok(Stage::Absorb, format!("{} cliques", absorbed.len()));

    let mut out = almost.tiling;
    out.extend(completion);
    out.extend(peeled);
    out.extend(absorbed);
    Ok(Ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::lower_bound_graph;

    #[test]
    fn complete_base_succeeds() {
        let n = 240;
        let rep = perturbed_pipeline(&Graph::complete(n), 0.1, 3, 3, 5, &PipelineParams::default()).unwrap();
        match &rep.status {
            PipelineStatus::Success(t) => assert_eq!(t.len(), n / 3),
            PipelineStatus::Failed(s) => panic!("failed at {s:?}: {:?}", rep.stages),
        }
    }

    #[test]
    fn no_random_edges_fails_with_a_stage() {
        let lb = lower_bound_graph(240, 3, 3, 0.1).unwrap();
        let rep = perturbed_pipeline(&lb.graph, 0.0, 3, 3, 5, &PipelineParams::default()).unwrap();
        assert!(rep.failed_stage().is_some());
    }

    #[test]
    fn divisibility_is_checked() {
        assert!(perturbed_pipeline(&Graph::complete(10), 0.1, 3, 3, 1, &PipelineParams::default()).is_err());
    }
}
