//! Absorbing gadgets: an `r x s` array of paths joined by `r - 1` hubs and `s`
//! clique layers, with one exit tiling per base vertex.

use alloc::vec;
use alloc::vec::Vec;

use crate::constructions::{h_det, h_det_complement, HVector};
use crate::error::{invalid, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::tiling::Tiling;

use super::path::{build_h_path, complement_vector, HPath};

/// One path of the array and its placement in the gadget.
#[derive(Clone, Debug)]
pub struct PathSlot {
    pub vector: HVector,
    pub path: HPath,
    /// `map[x]` is the gadget vertex of path vertex `x`.
    pub map: Vec<usize>,
}

/// Vertex layout: base `w_j = j` for `j < s`, then the hubs, then for each
/// column `j` and row `i` the remaining vertices of path `(i, j)` in path
/// order. Path `(i, j)` runs from `w_j` (row 0) or hub `i` (rows 1..r) to
/// the layer vertex `v_{i,j}`.
#[derive(Clone, Debug)]
pub struct GadgetBlueprint {
    r: usize,
    s: usize,
    k: Option<usize>,
    h_top: Graph,
    /// `slots[i][j]`.
    slots: Vec<Vec<PathSlot>>,
    assembled: Graph,
    base: Vec<usize>,
    hubs: Vec<usize>,
    /// `layers[j][i] = v_{i,j}`.
    layers: Vec<Vec<usize>>,
}

/// Edge-disjoint halves of the `K_r`-side gadget.
#[derive(Clone, Debug)]
pub struct SplitGadget {
    pub det: Graph,
    pub rand: Graph,
}

pub fn build_gadget(r: usize, s: usize, paths: &[Vec<HVector>], h_top: &Graph) -> Result<GadgetBlueprint> {
    if r < 2 || s == 0 {
        return Err(invalid!("gadget needs r >= 2 and s >= 1"));
    }
    if h_top.n() != r {
        return Err(invalid!("top graph has {} vertices, expected {r}", h_top.n()));
    }
    if paths.len() != r || paths.iter().any(|row| row.len() != s) {
        return Err(invalid!("path matrix must be {r} x {s}"));
    }
    if paths.iter().flatten().any(|v| v.r() != r) {
        return Err(invalid!("every entry must have {} vertices", r + 1));
    }
    let hubs: Vec<usize> = (s..s + r - 1).collect();
    let mut next = s + r - 1;
    let mut slots: Vec<Vec<Option<PathSlot>>> = vec![vec![None; s]; r];
    let mut layers = vec![vec![0; r]; s];
    for j in 0..s {
        for i in 0..r {
            let vector = paths[i][j].clone();
            let path = build_h_path(&vector)?;
            let start = if i == 0 { j } else { hubs[i - 1] };
            let mut map = vec![usize::MAX; path.graph.n()];
            for (x, m) in map.iter_mut().enumerate() {
                if x == path.a {
                    *m = start;
                } else {
                    *m = next;
                    next += 1;
                }
            }
            layers[j][i] = map[path.b];
            slots[i][j] = Some(PathSlot { vector, path, map });
        }
    }
    let slots: Vec<Vec<PathSlot>> = slots
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.expect("filled")).collect())
        .collect();
    let expected: usize = slots.iter().flatten().map(|p| p.path.graph.n()).sum::<usize>() - (r - 1) * (s - 1);
    if expected != next {
        return Err(crate::error::Error::Inconsistency(alloc::format!(
            "gadget vertex count {next} differs from the identification count {expected}"
        )));
    }
    let mut g = GadgetBlueprint {
        r,
        s,
        k: None,
        h_top: h_top.clone(),
        slots,
        assembled: Graph::empty(0),
        base: (0..s).collect(),
        hubs,
        layers,
    };
    g.assembled = g.assemble(|slot| slot.path.graph.clone(), h_top)?;
    Ok(g)
}

/// The gadget with every path equal to `vector`, `K_r` on top, remembering
/// `k` so it can be split into its deterministic and random halves.
pub fn gadget_for(r: usize, k: usize, s: usize, vector: &HVector) -> Result<GadgetBlueprint> {
    crate::constructions::case_tag(r, k)?;
    let paths = vec![vec![vector.clone(); s]; r];
    let mut g = build_gadget(r, s, &paths, &Graph::complete(r))?;
    g.k = Some(k);
    Ok(g)
}

impl GadgetBlueprint {
    fn assemble(&self, mut path_graph: impl FnMut(&PathSlot) -> Graph, top: &Graph) -> Result<Graph> {
        let mut gb = GraphBuilder::new(self.n());
        for slot in self.slots.iter().flatten() {
            path_graph(slot).place_into(&mut gb, &slot.map)?;
        }
        for layer in &self.layers {
            top.place_into(&mut gb, layer)?;
        }
        Ok(gb.build())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn n(&self) -> usize {
        self.s + self.r - 1 + self.slots.iter().flatten().map(|p| p.path.graph.n() - 1).sum::<usize>()
    }

    pub fn h_top(&self) -> &Graph {
        &self.h_top
    }

    pub fn slot(&self, i: usize, j: usize) -> &PathSlot {
        &self.slots[i][j]
    }

    /// The graph as given: path entries plus `H_top` on every layer.
    pub fn assembled(&self) -> &Graph {
        &self.assembled
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn hubs(&self) -> &[usize] {
        &self.hubs
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Longest path in the array.
    pub fn t_max(&self) -> usize {
        self.slots.iter().flatten().map(|p| p.vector.len()).max().unwrap_or(0)
    }

    /// Same layout with every segment replaced by `K^-_{r+1}` and `K_r` on
    /// every layer.
    pub fn kr_side(&self) -> Result<Graph> {
        self.assemble(
            |slot| {
                build_h_path(&super::path::kminus_closure(&slot.vector))
                    .expect("same shape")
                    .graph
            },
            &Graph::complete(self.r),
        )
    }

    /// Deterministic half (entries plus `H_det` layers) and random half
    /// (complemented entries plus the complementary cliques on the layers).
    pub fn split(&self) -> Result<SplitGadget> {
        let k = self
            .k
            .ok_or_else(|| invalid!("blueprint has no k; build it with gadget_for"))?;
        let det_top = h_det(self.r, k)?;
        let rand_top = h_det_complement(self.r, k)?;
        let det = self.assemble(|slot| slot.path.graph.clone(), &det_top)?;
        let mut comp = Vec::new();
        for slot in self.slots.iter().flatten() {
            comp.push(build_h_path(&complement_vector(&slot.vector)?)?.graph);
        }
        let mut it = comp.into_iter();
        let rand = self.assemble(|_| it.next().expect("one per slot"), &rand_top)?;
        Ok(SplitGadget { det, rand })
    }

    /// Vertices outside the base.
    pub fn interior(&self) -> Vec<usize> {
        (self.s..self.n()).collect()
    }
}

/// Tiling of `(V \ W) ∪ {w_j}` in the `K_r`-side gadget (`j` is 0-based).
pub fn gadget_exit_tiling(g: &GadgetBlueprint, j: usize) -> Result<Tiling> {
    if j >= g.s {
        return Err(invalid!("base index {j} out of range 0..{}", g.s));
    }
    if g.slots
        .iter()
        .flatten()
        .flat_map(|s| s.vector.entries())
        .any(|e| !e.is_kminus_carrier())
    {
        return Err(invalid!("every entry must be a K^- carrier"));
    }
    let mut t = Tiling::new(g.r);
    for (i, row) in g.slots.iter().enumerate() {
        for (jj, slot) in row.iter().enumerate() {
            // column j keeps its start (w_j or the hub) and drops v_{i,j}
            let skip_first = jj != j;
            for set in slot.path.segment_sets(skip_first) {
                t.push(set.iter().map(|&x| slot.map[x]).collect());
            }
            let _ = i;
        }
    }
    t.push(g.layers[j].clone());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{h_vectors, HVector};
    use crate::graph::{union, DecoratedGraph};

    fn kminus_gadget(r: usize, s: usize, t: usize) -> GadgetBlueprint {
        let v = HVector::repeat(&DecoratedGraph::kminus(r), t).unwrap();
        build_gadget(r, s, &vec![vec![v; s]; r], &Graph::complete(r)).unwrap()
    }

    #[test]
    fn example_sizes_and_tilings() {
        let g = kminus_gadget(3, 4, 3);
        assert_eq!(g.n(), 114);
        assert_eq!(g.assembled().n(), 114);
        let host = g.kr_side().unwrap();
        assert_eq!(&host, g.assembled());
        for j in 0..4 {
            let t = gadget_exit_tiling(&g, j).unwrap();
            assert_eq!(t.len(), 37);
            let mut cover = g.interior();
            cover.push(j);
            t.validate(&host, Some(&cover)).unwrap();
        }
        assert!(gadget_exit_tiling(&g, 4).is_err());
    }

    #[test]
    fn minimal_gadget() {
        let g = kminus_gadget(3, 1, 1);
        assert!(g.hubs().iter().all(|&h| h >= 1));
        let t = gadget_exit_tiling(&g, 0).unwrap();
        let mut cover = g.interior();
        cover.push(0);
        t.validate(g.assembled(), Some(&cover)).unwrap();
    }

    #[test]
    fn split_partitions_edges() {
        for (r, k, s) in [(3, 2, 2), (4, 2, 2), (6, 4, 1), (11, 3, 1)] {
            let v = h_vectors(r, k).unwrap().shortest();
            let g = gadget_for(r, k, s, &v).unwrap();
            let sp = g.split().unwrap();
            assert!(!sp.det.shares_edge_with(&sp.rand));
            assert_eq!(union(&sp.det, &sp.rand).unwrap(), g.kr_side().unwrap());
        }
    }

    #[test]
    fn q_one_base_is_isolated_on_random_side() {
        let v = h_vectors(3, 2).unwrap().shortest();
        let g = gadget_for(3, 2, 3, &v).unwrap();
        let sp = g.split().unwrap();
        assert!(g.base().iter().all(|&w| sp.rand.degree(w) == 0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let v = HVector::repeat(&DecoratedGraph::kminus(3), 1).unwrap();
        assert!(build_gadget(3, 2, &vec![vec![v.clone(); 2]; 2], &Graph::complete(3)).is_err());
        assert!(build_gadget(3, 1, &vec![vec![v]; 3], &Graph::complete(4)).is_err());
    }
}
