//! Labelled embeddings: exact counting, unbiased sampling estimates, clique
//! enumeration and a seeded first-fit search over several edge layers.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::bits::{self, VertexSet};
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Result of [`count_labelled_embeddings`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingCount {
    pub count: u64,
    /// The budget was reached; `count` equals the budget.
    pub truncated: bool,
}

pub const DEFAULT_BUDGET: u64 = i64::MAX as u64;

/// Static search order: anchored pattern vertices first (in the given order),
/// then repeatedly the vertex with most already-placed neighbours, lowest
/// index on ties.
pub fn search_order(pattern: &Graph, anchored: &[usize]) -> Vec<usize> {
    let n = pattern.n();
    let mut placed = VertexSet::new(n);
    let mut order = Vec::with_capacity(n);
    for &a in anchored {
        if !placed.contains(a) {
            placed.insert(a);
            order.push(a);
        }
    }
    while order.len() < n {
        let mut best = usize::MAX;
        let mut best_back = 0;
        for v in 0..n {
            if placed.contains(v) {
                continue;
            }
            let back = placed.count_and(pattern.row(v));
            if best == usize::MAX || back > best_back {
                best = v;
                best_back = back;
            }
        }
        placed.insert(best);
        order.push(best);
    }
    order
}

/// Pattern neighbours of `order[i]` among `order[..i]`, as positions.
fn back_neighbours(pattern: &Graph, order: &[usize]) -> Vec<Vec<usize>> {
    (0..order.len())
        .map(|i| (0..i).filter(|&j| pattern.has_edge(order[i], order[j])).collect())
        .collect()
}

fn check_anchors(pattern: &Graph, host: &Graph, anchors: &[(usize, usize)]) -> Result<bool> {
    let mut seen_p = VertexSet::new(pattern.n());
    let mut seen_h = VertexSet::new(host.n());
    for &(p, h) in anchors {
        if p >= pattern.n() || h >= host.n() {
            return Err(invalid!("anchor ({p} -> {h}) out of range"));
        }
        if seen_p.contains(p) || seen_h.contains(h) {
            return Err(invalid!("anchors must be injective"));
        }
        seen_p.insert(p);
        seen_h.insert(h);
    }
    for (i, &(p, h)) in anchors.iter().enumerate() {
        for &(q, g) in &anchors[i + 1..] {
            if pattern.has_edge(p, q) && !host.has_edge(h, g) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of injective maps `V(pattern) -> V(host)` extending `anchors` that
/// send every pattern edge to a host edge. Stops at `budget` (default
/// `2^63 - 1`) and flags truncation.
pub fn count_labelled_embeddings(
    pattern: &Graph,
    host: &Graph,
    anchors: &[(usize, usize)],
    budget: Option<u64>,
) -> Result<EmbeddingCount> {
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    if !check_anchors(pattern, host, anchors)? {
        return Ok(EmbeddingCount {
            count: 0,
            truncated: false,
        });
    }
    let k = pattern.n();
    if k == 0 {
        return Ok(EmbeddingCount {
            count: 1.min(budget),
            truncated: budget == 0,
        });
    }
    if k > host.n() {
        return Ok(EmbeddingCount {
            count: 0,
            truncated: false,
        });
    }
    let anchored: Vec<usize> = anchors.iter().map(|a| a.0).collect();
    let order = search_order(pattern, &anchored);
    let back = back_neighbours(pattern, &order);
    let mut image = vec![usize::MAX; k];
    let mut used = VertexSet::new(host.n());
    for (i, &(_, h)) in anchors.iter().enumerate() {
        image[i] = h;
        used.insert(h);
    }
    let mut st = CountState {
        host,
        back: &back,
        image,
        used,
        count: 0,
        budget,
        truncated: false,
    };
    if anchors.len() == k {
        st.count = 1.min(budget);
        st.truncated = budget == 0;
    } else {
        st.descend(anchors.len());
    }
    Ok(EmbeddingCount {
        count: st.count,
        truncated: st.truncated,
    })
}

struct CountState<'a> {
    host: &'a Graph,
    back: &'a [Vec<usize>],
    image: Vec<usize>,
    used: VertexSet,
    count: u64,
    budget: u64,
    truncated: bool,
}

impl CountState<'_> {
    fn candidates(&self, pos: usize) -> VertexSet {
        let n = self.host.n();
        let mut c = VertexSet::full(n);
        for &j in &self.back[pos] {
            c.intersect_with(self.host.row(self.image[j]));
        }
        c.difference_with(self.used.words());
        c
    }

    fn descend(&mut self, pos: usize) {
        let c = self.candidates(pos);
        if pos + 1 == self.back.len() {
            let total = self.count.saturating_add(c.len() as u64);
            if total >= self.budget {
                self.truncated = true;
                self.count = self.budget;
            } else {
                self.count = total;
            }
            return;
        }
        for h in c.iter() {
            self.image[pos] = h;
            self.used.insert(h);
            self.descend(pos + 1);
            self.used.remove(h);
            if self.truncated {
                return;
            }
        }
    }
}

/// Unbiased estimate of the number of labelled embeddings extending
/// `anchors` (sequential uniform choice along the search order, weighted by
/// the product of candidate counts). Returns `(mean, standard error)`.
pub fn estimate_labelled_embeddings<R: Rng + ?Sized>(
    pattern: &Graph,
    host: &Graph,
    anchors: &[(usize, usize)],
    trials: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(invalid!("sampling needs at least one trial"));
    }
    if !check_anchors(pattern, host, anchors)? || pattern.n() > host.n() {
        return Ok((0.0, 0.0));
    }
    let anchored: Vec<usize> = anchors.iter().map(|a| a.0).collect();
    let order = search_order(pattern, &anchored);
    let back = back_neighbours(pattern, &order);
    let k = pattern.n();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut image = vec![0usize; k];
    for _ in 0..trials {
        let mut used = VertexSet::new(host.n());
        for (i, &(_, h)) in anchors.iter().enumerate() {
            image[i] = h;
            used.insert(h);
        }
        let mut weight = 1.0f64;
        for pos in anchors.len()..k {
            let mut c = VertexSet::full(host.n());
            for &j in &back[pos] {
                c.intersect_with(host.row(image[j]));
            }
            c.difference_with(used.words());
            let size = c.len();
            if size == 0 {
                weight = 0.0;
                break;
            }
            weight *= size as f64;
            let pick = rng.random_range(0..size);
            let h = c.iter().nth(pick).expect("pick < size");
            image[pos] = h;
            used.insert(h);
        }
        sum += weight;
        sumsq += weight * weight;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = if trials > 1 {
        ((sumsq - t * mean * mean) / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok((mean, libm::sqrt(var / t)))
}

/// All `r`-cliques of `g` as sorted vertex lists, in lexicographic order.
pub fn enumerate_cliques(g: &Graph, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r == 0 || r > g.n() {
        return out;
    }
    let mut cur = Vec::with_capacity(r);
    let all = VertexSet::full(g.n());
    extend_cliques(g, r, &mut cur, &all, &mut out);
    out
}

fn extend_cliques(g: &Graph, r: usize, cur: &mut Vec<usize>, cand: &VertexSet, out: &mut Vec<Vec<usize>>) {
    if cur.len() == r {
        out.push(cur.clone());
        return;
    }
    let need = r - cur.len();
    if cand.len() < need {
        return;
    }
    for v in cand.iter() {
        let mut next = cand.clone();
        next.intersect_with(g.row(v));
        clear_upto(next.words_mut(), v);
        cur.push(v);
        extend_cliques(g, r, cur, &next, out);
        cur.pop();
    }
}

/// Clears bits `0..=v`.
fn clear_upto(words: &mut [u64], v: usize) {
    let w = v >> 6;
    for x in words.iter_mut().take(w) {
        *x = 0;
    }
    let b = v & 63;
    words[w] &= if b == 63 { 0 } else { !0u64 << (b + 1) };
}

/// Outcome of [`find_embedding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    /// `image[p]` is the host vertex of pattern vertex `p`.
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

/// One edge layer: every edge of `pattern` must land on an edge of `host`.
#[derive(Clone, Copy, Debug)]
pub struct Layer<'a> {
    pub pattern: &'a Graph,
    pub host: &'a Graph,
}

/// First-fit backtracking search for one embedding satisfying every layer.
///
/// Free pattern vertices avoid `forbidden` and each other; candidates are tried
/// in increasing `rank` (a seeded permutation of host vertices, lowest rank
/// first). At most `node_budget` partial assignments are explored.
pub fn find_embedding(
    layers: &[Layer<'_>],
    anchors: &[(usize, usize)],
    forbidden: &VertexSet,
    rank_order: &[usize],
    node_budget: u64,
) -> Result<Search> {
    let first = layers.first().ok_or_else(|| invalid!("no layers"))?;
    let k = first.pattern.n();
    let n = first.host.n();
    if layers.iter().any(|l| l.pattern.n() != k || l.host.n() != n) {
        return Err(invalid!("layers disagree on vertex counts"));
    }
    if rank_order.len() != n {
        return Err(invalid!("rank order must list every host vertex"));
    }
    for l in layers {
        if !check_anchors(l.pattern, l.host, anchors)? {
            return Ok(Search::Exhausted);
        }
    }
    let mut shape = crate::graph::GraphBuilder::new(k);
    for l in layers {
        for (u, v) in l.pattern.edges() {
            shape.add_edge(u, v)?;
        }
    }
    let shape = shape.build();
    let anchored: Vec<usize> = anchors.iter().map(|a| a.0).collect();
    let order = search_order(&shape, &anchored);
    let backs: Vec<Vec<Vec<usize>>> = layers.iter().map(|l| back_neighbours(l.pattern, &order)).collect();
    let mut image = vec![usize::MAX; k];
    let mut used = forbidden.clone();
    for (i, &(_, h)) in anchors.iter().enumerate() {
        image[i] = h;
        used.insert(h);
    }
    let mut st = FindState {
        layers,
        backs: &backs,
        order: &order,
        rank_order,
        image,
        used,
        nodes: 0,
        budget: node_budget,
    };
    let res = st.descend(anchors.len());
    Ok(match res {
        Some(true) => {
            let mut out = vec![0; k];
            for (pos, &p) in order.iter().enumerate() {
                out[p] = st.image[pos];
            }
            Search::Found(out)
        }
        Some(false) => Search::Exhausted,
        None => Search::OutOfBudget,
    })
}

struct FindState<'a> {
    layers: &'a [Layer<'a>],
    backs: &'a [Vec<Vec<usize>>],
    order: &'a [usize],
    rank_order: &'a [usize],
    image: Vec<usize>,
    used: VertexSet,
    nodes: u64,
    budget: u64,
}

impl FindState<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn descend(&mut self, pos: usize) -> Option<bool> {
        if pos == self.order.len() {
            return Some(true);
        }
        let n = self.layers[0].host.n();
        let mut c = VertexSet::full(n);
        c.difference_with(self.used.words());
        for (l, back) in self.layers.iter().zip(self.backs) {
            for &j in &back[pos] {
                c.intersect_with(l.host.row(self.image[j]));
            }
        }
        if c.is_empty() {
            return Some(false);
        }
        for &h in self.rank_order {
            if !bits::test(c.words(), h) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.image[pos] = h;
            self.used.insert(h);
            let r = self.descend(pos + 1);
            self.used.remove(h);
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }
}
