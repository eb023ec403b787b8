//! `K_r`-tilings: an exact cover solver, a branch-and-bound maximiser, the
//! two-layer greedy almost-tiling, Hajnal–Szemerédi as an oracle, and
//! completion of leftover vertices by cliques reaching into a reservoir.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::constructions::{case_tag, h_det, h_det_complement};
use crate::embed::{enumerate_cliques, find_embedding, Layer, Search};
use crate::error::{invalid, Error, Result};
use crate::graph::{union, Graph, GraphBuilder};

/// Disjoint `r`-sets, each sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tiling {
    pub r: usize,
    pub parts: Vec<Vec<usize>>,
}

impl Tiling {
    pub fn new(r: usize) -> Self {
        Tiling { r, parts: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn push(&mut self, mut part: Vec<usize>) {
        part.sort_unstable();
        self.parts.push(part);
    }

    pub fn extend(&mut self, other: Tiling) {
        self.parts.extend(other.parts);
    }

    pub fn covered(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.parts.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Parts are disjoint `r`-cliques of `host`; if `cover` is given the parts
    /// cover exactly that set.
    pub fn validate(&self, host: &Graph, cover: Option<&[usize]>) -> Result<()> {
        let mut seen = VertexSet::new(host.n());
        for part in &self.parts {
            if part.len() != self.r {
                return Err(Error::Inconsistency(format!(
                    "part {part:?} does not have {} vertices",
                    self.r
                )));
            }
            for &v in part {
                if v >= host.n() || seen.contains(v) {
                    return Err(Error::Inconsistency(format!("vertex {v} repeated or out of range")));
                }
                seen.insert(v);
            }
            if !host.is_clique(part) {
                return Err(Error::Inconsistency(format!("part {part:?} is not a clique")));
            }
        }
        if let Some(cover) = cover {
            let want = VertexSet::from_iter(host.n(), cover.iter().copied());
            if want.len() != cover.len() || want != seen {
                return Err(Error::Inconsistency(String::from(
                    "parts do not cover the requested set",
                )));
            }
        }
        Ok(())
    }

    pub fn validate_perfect(&self, host: &Graph) -> Result<()> {
        let all: Vec<usize> = (0..host.n()).collect();
        self.validate(host, Some(&all))
    }
}

/// Cooperative timeout, polled by the search loops.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// Never expires.
pub struct NoDeadline;

impl Deadline for NoDeadline {
    fn expired(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Deadline for F {
    fn expired(&self) -> bool {
        self()
    }
}

/// Why no perfect tiling exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoTiling {
    Divisibility,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TileOutcome {
    Found(Tiling),
    None(NoTiling),
    Timeout,
}

const POLL: u64 = 256;

/// Incremental clique-cover bookkeeping shared by both searches.
struct Cover<'a> {
    g: &'a Graph,
    r: usize,
    cliques: Vec<Vec<usize>>,
    by_vertex: Vec<Vec<usize>>,
    blocked: Vec<u32>,
    options: Vec<usize>,
    taken: VertexSet,
    nodes: u64,
}

impl<'a> Cover<'a> {
    fn new(g: &'a Graph, r: usize) -> Self {
        let cliques = enumerate_cliques(g, r);
        let mut by_vertex = vec![Vec::new(); g.n()];
        for (i, c) in cliques.iter().enumerate() {
            for &v in c {
                by_vertex[v].push(i);
            }
        }
        let options = by_vertex.iter().map(Vec::len).collect();
        Cover {
            g,
            r,
            blocked: vec![0; cliques.len()],
            cliques,
            by_vertex,
            options,
            taken: VertexSet::new(g.n()),
            nodes: 0,
        }
    }

    fn take(&mut self, verts: &[usize]) {
        for &v in verts {
            self.taken.insert(v);
            for &d in &self.by_vertex[v] {
                if self.blocked[d] == 0 {
                    for &u in &self.cliques[d] {
                        self.options[u] -= 1;
                    }
                }
                self.blocked[d] += 1;
            }
        }
    }

    fn release(&mut self, verts: &[usize]) {
        for &v in verts.iter().rev() {
            self.taken.remove(v);
            for &d in &self.by_vertex[v] {
                self.blocked[d] -= 1;
                if self.blocked[d] == 0 {
                    for &u in &self.cliques[d] {
                        self.options[u] += 1;
                    }
                }
            }
        }
    }

    fn free(&self) -> VertexSet {
        let mut f = VertexSet::full(self.g.n());
        f.difference_with(self.taken.words());
        f
    }

    /// Greedy independent set of `G[set]`, minimum degree first.
    fn independent_in(&self, set: &VertexSet) -> usize {
        let mut rest = set.clone();
        let mut size = 0;
        while !rest.is_empty() {
            let v = rest
                .iter()
                .min_by_key(|&v| rest.count_and(self.g.row(v)))
                .expect("nonempty");
            size += 1;
            rest.remove(v);
            rest.difference_with(self.g.row(v));
        }
        size
    }

    /// Alive cliques through `v`, most constrained first.
    fn branches(&self, v: usize) -> Vec<usize> {
        let mut b: Vec<(usize, usize)> = self.by_vertex[v]
            .iter()
            .filter(|&&d| self.blocked[d] == 0)
            .map(|&d| (self.cliques[d].iter().map(|&u| self.options[u]).sum(), d))
            .collect();
        b.sort_unstable();
        b.into_iter().map(|x| x.1).collect()
    }
}

/// Exact decision: a perfect `K_r`-tiling, a proof of absence, or a timeout.
pub fn perfect_tiling(g: &Graph, r: usize, deadline: &dyn Deadline) -> Result<TileOutcome> {
    if r < 2 {
        return Err(invalid!("tiling needs r >= 2"));
    }
    if !g.n().is_multiple_of(r) {
        return Ok(TileOutcome::None(NoTiling::Divisibility));
    }
    let mut cov = Cover::new(g, r);
    let mut chosen = Vec::new();
    match exact_cover(&mut cov, &mut chosen, deadline) {
        Some(true) => {
            let mut t = Tiling::new(r);
            for c in chosen {
                t.push(cov.cliques[c].clone());
            }
            Ok(TileOutcome::Found(t))
        }
        Some(false) => Ok(TileOutcome::None(NoTiling::Exhausted)),
        None => Ok(TileOutcome::Timeout),
    }
}

fn exact_cover(cov: &mut Cover<'_>, chosen: &mut Vec<usize>, deadline: &dyn Deadline) -> Option<bool> {
    cov.nodes += 1;
    if cov.nodes.is_multiple_of(POLL) && deadline.expired() {
        return None;
    }
    let free = cov.free();
    let left = free.len();
    if left == 0 {
        return Some(true);
    }
    let v = free.iter().min_by_key(|&v| cov.options[v]).expect("nonempty");
    if cov.options[v] == 0 {
        return Some(false);
    }
    // every clique holds at most one vertex of an independent set
    if cov.independent_in(&free) > left / cov.r {
        return Some(false);
    }
    for d in cov.branches(v) {
        let verts = cov.cliques[d].clone();
        cov.take(&verts);
        chosen.push(d);
        let res = exact_cover(cov, chosen, deadline);
        if res != Some(false) {
            if res.is_none() {
                chosen.pop();
                cov.release(&verts);
            }
            return res;
        }
        chosen.pop();
        cov.release(&verts);
    }
    Some(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxTiling {
    pub tiling: Tiling,
    /// The search finished, so no larger tiling exists.
    pub optimal: bool,
}

/// First-fit tiling over the lexicographic clique list.
pub fn greedy_tiling(g: &Graph, r: usize) -> Tiling {
    let mut used = VertexSet::new(g.n());
    let mut t = Tiling::new(r);
    for c in enumerate_cliques(g, r) {
        if c.iter().all(|&v| !used.contains(v)) {
            c.iter().for_each(|&v| used.insert(v));
            t.push(c);
        }
    }
    t
}

/// Largest `K_r`-tiling by branch and bound: branch on the free vertex with
/// fewest live cliques, either covering it or discarding it. Bounded by the
/// number of free vertices and by an independent-set argument.
pub fn max_tiling(g: &Graph, r: usize, deadline: &dyn Deadline) -> Result<MaxTiling> {
    if r < 2 {
        return Err(invalid!("tiling needs r >= 2"));
    }
    let mut cov = Cover::new(g, r);
    let greedy = greedy_tiling(g, r);
    let mut best: Vec<Vec<usize>> = greedy.parts.clone();
    let mut chosen = Vec::new();
    let done = branch_and_bound(&mut cov, &mut chosen, &mut best, deadline);
    let mut t = Tiling::new(r);
    for p in best {
        t.push(p);
    }
    Ok(MaxTiling {
        tiling: t,
        optimal: done,
    })
}

fn branch_and_bound(
    cov: &mut Cover<'_>,
    chosen: &mut Vec<Vec<usize>>,
    best: &mut Vec<Vec<usize>>,
    deadline: &dyn Deadline,
) -> bool {
    cov.nodes += 1;
    if cov.nodes.is_multiple_of(POLL) && deadline.expired() {
        return false;
    }
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    let mut live = cov.free();
    for v in live.clone().iter() {
        if cov.options[v] == 0 {
            live.remove(v);
        }
    }
    let r = cov.r;
    let by_count = live.len() / r;
    let indep = cov.independent_in(&live);
    let by_indep = (live.len() - indep) / (r - 1);
    if chosen.len() + by_count.min(by_indep) <= best.len() {
        return true;
    }
    let v = match live.iter().min_by_key(|&v| cov.options[v]) {
        Some(v) => v,
        None => return true,
    };
    for d in cov.branches(v) {
        let verts = cov.cliques[d].clone();
        cov.take(&verts);
        chosen.push(verts.clone());
        let ok = branch_and_bound(cov, chosen, best, deadline);
        chosen.pop();
        cov.release(&verts);
        if !ok {
            return false;
        }
    }
    cov.take(&[v]);
    let ok = branch_and_bound(cov, chosen, best, deadline);
    cov.release(&[v]);
    ok
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HsReport {
    Skipped(String),
    Tiled(Tiling),
    Undecided,
}

/// Runs the solver on graphs with `r | n` and `delta >= (1 - 1/r) n`, where a
/// perfect tiling must exist. A negative answer is returned as an error.
pub fn hajnal_szemeredi_check(g: &Graph, r: usize, deadline: &dyn Deadline) -> Result<HsReport> {
    let n = g.n();
    if r < 2 || !n.is_multiple_of(r) {
        return Ok(HsReport::Skipped(format!("r={r} does not divide n={n}")));
    }
    let need = n - n / r;
    if g.min_degree() < need {
        return Ok(HsReport::Skipped(format!("min degree {} below {need}", g.min_degree())));
    }
    match perfect_tiling(g, r, deadline)? {
        TileOutcome::Found(t) => Ok(HsReport::Tiled(t)),
        TileOutcome::Timeout => Ok(HsReport::Undecided),
        TileOutcome::None(_) => Err(Error::Inconsistency(format!(
            "no perfect K_{r}-tiling although min degree is at least {need}"
        ))),
    }
}

/// Limits for the layered greedy searches.
#[derive(Clone, Copy, Debug)]
pub struct GreedyParams {
    /// Search nodes per attempted clique.
    pub node_budget: u64,
    /// Passes over the free vertices that may end without progress.
    pub stale_passes: usize,
    /// Hole moves in the repair walk after the greedy stalls, per pool
    /// vertex.
    pub repair_moves: usize,
}

impl Default for GreedyParams {
    fn default() -> Self {
        GreedyParams {
            node_budget: 20_000,
            stale_passes: 2,
            repair_moves: 40,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlmostTiling {
    pub tiling: Tiling,
    pub leftover: Vec<usize>,
    /// `delta(G_det) >= (1 - k/r) n` held (recorded, not required).
    pub det_degree_ok: bool,
}

/// Colour classes of one clique: `H_det` edges from the deterministic host,
/// the remaining `K_r` edges from the union of both hosts.
struct Split {
    det: Graph,
    rest: Graph,
    /// A pattern vertex of each part of `H_det`, last part first.
    part_reps: Vec<usize>,
}

fn clique_split(r: usize, k: usize) -> Result<Split> {
    let t = case_tag(r, k)?;
    let mut reps = Vec::new();
    let mut start = 0;
    for size in t.det_parts() {
        reps.push(start);
        start += size;
    }
    reps.reverse();
    Ok(Split {
        det: h_det(r, k)?,
        rest: h_det_complement(r, k)?,
        part_reps: reps,
    })
}

fn ranked(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Greedy `K_r`-tiling of the vertices in `pool` where each clique carries
/// `H_det` in `g_det` and the complementary edges in `g_det ∪ g_rand`. Free
/// vertices are visited hardest first (lowest deterministic degree) and
/// anchored at each part of `H_det` in turn. Stops when the leftover is at
/// most `leftover_cap * |pool|` or a number of passes make no progress.
///
/// A repair walk follows: an uncovered vertex takes the place of a vertex
/// of some clique it fits into, which becomes uncovered instead, and after
/// every move the uncovered vertices are searched for a new clique.
#[allow(clippy::too_many_arguments)]
pub fn greedy_almost_tiling(
    g_det: &Graph,
    g_rand: &Graph,
    pool: &[usize],
    r: usize,
    k: usize,
    leftover_cap: f64,
    seed: u64,
    params: GreedyParams,
) -> Result<AlmostTiling> {
    let n = g_det.n();
    let host = union(g_det, g_rand)?;
    let split = clique_split(r, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut free = VertexSet::from_iter(n, pool.iter().copied());
    let target = (leftover_cap * pool.len() as f64) as usize;
    let layers = [
        Layer {
            pattern: &split.det,
            host: g_det,
        },
        Layer {
            pattern: &split.rest,
            host: &host,
        },
    ];
    // images by pattern position, so single vertices can be swapped later
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let try_at = |v: usize, free: &VertexSet, rank: &[usize]| -> Result<Option<Vec<usize>>> {
        let mut forbidden = VertexSet::full(n);
        forbidden.difference_with(free.words());
        for &pos in &split.part_reps {
            if let Search::Found(img) = find_embedding(&layers, &[(pos, v)], &forbidden, rank, params.node_budget)? {
                return Ok(Some(img));
            }
        }
        Ok(None)
    };
    let mut stale = 0;
    while free.len() > target && free.len() >= r && stale < params.stale_passes {
        let rank = ranked(n, &mut rng);
        let mut order: Vec<usize> = free.iter().collect();
        order.sort_by_key(|&v| (free.count_and(g_det.row(v)), rank[v]));
        let mut progress = false;
        for v in order {
            if !free.contains(v) || free.len() <= target || free.len() < r {
                continue;
            }
            if let Some(img) = try_at(v, &free, &rank)? {
                img.iter().for_each(|&u| free.remove(u));
                cliques.push(img);
                progress = true;
            }
        }
        stale = if progress { 0 } else { stale + 1 };
    }

    let fits = |v: usize, img: &[usize], pos: usize| {
        let ok = |pat: &Graph, h: &Graph| pat.neighbors(pos).all(|q| h.has_edge(v, img[q]));
        ok(&split.det, g_det) && ok(&split.rest, &host)
    };
    let mut moves = params.repair_moves * pool.len();
    let rank = ranked(n, &mut rng);
    while moves > 0 && free.len() > target && free.len() >= r && !cliques.is_empty() {
        let holes = free.to_vec();
        let h = holes[rng.random_range(0..holes.len())];
        let options: Vec<(usize, usize)> = cliques
            .iter()
            .enumerate()
            .flat_map(|(c, img)| (0..r).filter(move |&pos| fits(h, img, pos)).map(move |pos| (c, pos)))
            .collect();
        moves -= 1;
        if options.is_empty() {
            continue;
        }
        let (c, pos) = options[rng.random_range(0..options.len())];
        let out = cliques[c][pos];
        cliques[c][pos] = h;
        free.remove(h);
        free.insert(out);
        if let Some(img) = try_at(out, &free, &rank)? {
            img.iter().for_each(|&u| free.remove(u));
            cliques.push(img);
        }
    }

    let mut tiling = Tiling::new(r);
    cliques.into_iter().for_each(|c| tiling.push(c));
    let needed = n - n * k / r;
    let det_degree_ok = pool.iter().all(|&v| g_det.degree(v) >= needed);
    Ok(AlmostTiling {
        tiling,
        leftover: free.to_vec(),
        det_degree_ok,
    })
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub tiling: Tiling,
    pub unserved: Vec<usize>,
}

/// For each `u` in `small`, a clique made of `u` (in the short part of
/// `H_det`) and `r - 1` unused vertices of `large`; `H_det` edges from
/// `g_det`, the rest from `g_det ∪ g_rand`.
#[allow(clippy::too_many_arguments)]
pub fn crossing_clique_completion(
    g_det: &Graph,
    g_rand: &Graph,
    small: &[usize],
    large: &[usize],
    r: usize,
    k: usize,
    seed: u64,
    params: GreedyParams,
) -> Result<Completion> {
    if small.len() * 2 * r > large.len() {
        return Err(invalid!(
            "completion needs |U| <= |W|/(2r): |U|={}, |W|={}",
            small.len(),
            large.len()
        ));
    }
    let split = clique_split(r, k)?;
    let host = union(g_det, g_rand)?;
    let layers = [
        Layer {
            pattern: &split.det,
            host: g_det,
        },
        Layer {
            pattern: &split.rest,
            host: &host,
        },
    ];
    complete_into(g_det.n(), &layers, split.part_reps[0], small, large, r, seed, params)
}

#[allow(clippy::too_many_arguments)]
fn complete_into(
    n: usize,
    layers: &[Layer<'_>],
    anchor_pos: usize,
    small: &[usize],
    large: &[usize],
    r: usize,
    seed: u64,
    params: GreedyParams,
) -> Result<Completion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = ranked(n, &mut rng);
    let mut avail = VertexSet::from_iter(n, large.iter().copied());
    let mut tiling = Tiling::new(r);
    let mut unserved = Vec::new();
    for &u in small {
        let mut forbidden = VertexSet::full(n);
        forbidden.difference_with(avail.words());
        match find_embedding(layers, &[(anchor_pos, u)], &forbidden, &rank, params.node_budget)? {
            Search::Found(img) => {
                img.iter().for_each(|&x| avail.remove(x));
                tiling.push(img);
            }
            _ => unserved.push(u),
        }
    }
    Ok(Completion { tiling, unserved })
}

/// The split `K_r = F ∪ F̄` used to repair divisibility across parts: vertex
/// `0` is the crossing vertex `x`; `F` is the complete bipartite graph between
/// `1..=a` and `a+1..r` with `a = ceil((r-1)/2)`; `F̄` is two cliques,
/// `{x} ∪ {1..=a}` and `{x} ∪ {a+1..r}`, sharing `x`.
pub fn crossing_pattern(r: usize) -> Result<(Graph, Graph)> {
    if r < 3 {
        return Err(invalid!("crossing cliques need r >= 3"));
    }
    let a = (r - 1).div_ceil(2);
    let mut f = GraphBuilder::new(r);
    let mut fbar = GraphBuilder::new(r);
    for u in 1..r {
        fbar.add_edge(0, u)?;
        for v in u + 1..r {
            if (u <= a) == (v <= a) {
                fbar.add_edge(u, v)?;
            } else {
                f.add_edge(u, v)?;
            }
        }
    }
    Ok((f.build(), fbar.build()))
}

/// Up to `count` disjoint crossing cliques with `x` in `from` and the other
/// `r - 1` vertices in `to`: `F` edges in `g_det`, `F̄` edges in
/// `g_det ∪ g_rand`.
#[allow(clippy::too_many_arguments)]
pub fn crossing_cliques(
    g_det: &Graph,
    g_rand: &Graph,
    from: &[usize],
    to: &[usize],
    count: usize,
    r: usize,
    seed: u64,
    params: GreedyParams,
) -> Result<Tiling> {
    let (f, fbar) = crossing_pattern(r)?;
    let host = union(g_det, g_rand)?;
    let layers = [
        Layer {
            pattern: &f,
            host: g_det,
        },
        Layer {
            pattern: &fbar,
            host: &host,
        },
    ];
    let n = g_det.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = ranked(n, &mut rng);
    let mut avail = VertexSet::from_iter(n, to.iter().copied());
    let mut tiling = Tiling::new(r);
    for &x in from {
        if tiling.len() == count {
            break;
        }
        let mut forbidden = VertexSet::full(n);
        forbidden.difference_with(avail.words());
        if let Search::Found(img) = find_embedding(&layers, &[(0, x)], &forbidden, &rank, params.node_budget)? {
            img.iter().for_each(|&v| avail.remove(v));
            tiling.push(img);
        }
    }
    Ok(tiling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::lower_bound_graph;
    use crate::graph::complete_multipartite;

    #[test]
    fn small_perfect_cases() {
        match perfect_tiling(&Graph::complete(6), 3, &NoDeadline).unwrap() {
            TileOutcome::Found(t) => {
                assert_eq!(t.len(), 2);
                t.validate_perfect(&Graph::complete(6)).unwrap();
            }
            o => panic!("{o:?}"),
        }
        let k33 = complete_multipartite(&[3, 3]).unwrap();
        assert_eq!(
            perfect_tiling(&k33, 3, &NoDeadline).unwrap(),
            TileOutcome::None(NoTiling::Exhausted)
        );
        assert_eq!(
            perfect_tiling(&Graph::complete(7), 3, &NoDeadline).unwrap(),
            TileOutcome::None(NoTiling::Divisibility)
        );
    }

    #[test]
    fn lower_bound_instance_has_no_factor() {
        let lb = lower_bound_graph(30, 3, 2, 0.1).unwrap();
        assert_eq!(
            perfect_tiling(&lb.graph, 3, &NoDeadline).unwrap(),
            TileOutcome::None(NoTiling::Exhausted)
        );
        let m = max_tiling(&lb.graph, 3, &NoDeadline).unwrap();
        assert_eq!((m.tiling.len(), m.optimal), (9, true));
    }

    #[test]
    fn max_tiling_small() {
        let m = max_tiling(&Graph::complete(7), 3, &NoDeadline).unwrap();
        assert_eq!((m.tiling.len(), m.optimal), (2, true));
        let e = max_tiling(&Graph::empty(5), 3, &NoDeadline).unwrap();
        assert_eq!((e.tiling.len(), e.optimal), (0, true));
    }

    #[test]
    fn deadline_is_honoured() {
        let lb = lower_bound_graph(30, 3, 2, 0.1).unwrap();
        let r = max_tiling(&lb.graph, 3, &|| true).unwrap();
        assert!(r.tiling.len() <= 9);
    }

    #[test]
    fn hs_examples() {
        let oct = complete_multipartite(&[2, 2, 2]).unwrap();
        assert!(matches!(
            hajnal_szemeredi_check(&oct, 3, &NoDeadline).unwrap(),
            HsReport::Tiled(_)
        ));
        let k33 = complete_multipartite(&[3, 3]).unwrap();
        assert!(matches!(
            hajnal_szemeredi_check(&k33, 3, &NoDeadline).unwrap(),
            HsReport::Skipped(_)
        ));
    }

    #[test]
    fn greedy_on_complete_hosts() {
        let n = 20;
        let pool: Vec<usize> = (0..n).collect();
        let t = greedy_almost_tiling(
            &Graph::complete(n),
            &Graph::complete(n),
            &pool,
            3,
            3,
            0.0,
            1,
            GreedyParams::default(),
        )
        .unwrap();
        assert_eq!(t.leftover.len(), n % 3);
        t.tiling.validate(&Graph::complete(n), None).unwrap();
        let none = greedy_almost_tiling(
            &Graph::empty(n),
            &Graph::empty(n),
            &pool,
            3,
            2,
            0.0,
            1,
            GreedyParams::default(),
        )
        .unwrap();
        assert!(none.tiling.is_empty());
    }

    #[test]
    fn crossing_pattern_unions_to_clique() {
        for r in 3..9 {
            let (f, fb) = crossing_pattern(r).unwrap();
            assert!(!f.shares_edge_with(&fb));
            assert_eq!(union(&f, &fb).unwrap(), Graph::complete(r));
            let comps = Graph::complete(r).minus(&f).unwrap();
            assert_eq!(comps, fb);
        }
        let (f, fb) = crossing_pattern(3).unwrap();
        assert_eq!(f.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(fb.edge_count(), 2);
    }

    #[test]
    fn completion_on_complete_hosts() {
        let g = Graph::complete(40);
        let c = crossing_clique_completion(
            &g,
            &g,
            &[0, 1],
            &(10..40).collect::<Vec<_>>(),
            3,
            2,
            5,
            GreedyParams::default(),
        )
        .unwrap();
        assert!(c.unserved.is_empty());
        assert_eq!(c.tiling.len(), 2);
        c.tiling.validate(&g, None).unwrap();
    }
}
