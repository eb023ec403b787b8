//! Paths of decorated graphs glued end to end.

use alloc::vec;
use alloc::vec::Vec;

use crate::constructions::HVector;
use crate::error::{invalid, Result};
use crate::graph::{complement_within_kminus, DecoratedGraph, Graph, GraphBuilder};
use crate::tiling::Tiling;

/// One entry of a path and where its vertices landed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub entry: DecoratedGraph,
    /// `map[x]` is the path vertex of entry vertex `x`.
    pub map: Vec<usize>,
}

/// `t` entries on `r + 1` vertices each, the second distinguished vertex of
/// entry `i` identified with the first of entry `i + 1`.
///
/// Layout: the first endpoint is vertex `0`; each segment then numbers its
/// vertices other than its first distinguished vertex in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPath {
    pub graph: Graph,
    pub a: usize,
    pub b: usize,
    pub segments: Vec<Segment>,
}

pub fn build_h_path(v: &HVector) -> Result<HPath> {
    let r = v.r();
    let t = v.len();
    let n = t * r + 1;
    let mut gb = GraphBuilder::new(n);
    let mut segments = Vec::with_capacity(t);
    let mut start = 0;
    let mut next = 1;
    for e in v.entries() {
        if e.w1 == e.w2 {
            return Err(invalid!("entry with coinciding distinguished vertices"));
        }
        let mut map = vec![usize::MAX; r + 1];
        map[e.w1] = start;
        for (x, m) in map.iter_mut().enumerate() {
            if x != e.w1 {
                *m = next;
                next += 1;
            }
        }
        e.graph.place_into(&mut gb, &map)?;
        start = map[e.w2];
        segments.push(Segment { entry: e.clone(), map });
    }
    debug_assert_eq!(next, n);
    Ok(HPath {
        graph: gb.build(),
        a: 0,
        b: start,
        segments,
    })
}

/// Entrywise complement inside `K^-_{r+1}`.
pub fn complement_vector(v: &HVector) -> Result<HVector> {
    let e: Result<Vec<DecoratedGraph>> = v.entries().iter().map(complement_within_kminus).collect();
    HVector::new(e?)
}

/// Every entry replaced by `K^-_{r+1}` with the same distinguished pair.
pub fn kminus_closure(v: &HVector) -> HVector {
    HVector::new(v.entries().iter().map(DecoratedGraph::kminus_closure).collect()).expect("same shape")
}

impl HPath {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Segment-wise `r`-sets: each segment minus its first (`skip_first`) or
    /// second distinguished vertex. Purely structural.
    pub fn segment_sets(&self, skip_first: bool) -> Vec<Vec<usize>> {
        self.segments
            .iter()
            .map(|s| {
                let skip = if skip_first { s.entry.w1 } else { s.entry.w2 };
                let mut v: Vec<usize> = (0..s.map.len()).filter(|&x| x != skip).map(|x| s.map[x]).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }
}

/// The two tilings of a `K^-` path: one covering everything except `a`, one
/// covering everything except `b`.
pub fn path_exit_tilings(p: &HPath) -> Result<(Tiling, Tiling)> {
    for s in &p.segments {
        if s.entry.graph != s.entry.kminus_closure().graph {
            return Err(invalid!("segment is not K^-_{{r+1}} with its distinguished non-edge"));
        }
    }
    let r = p.segments.first().map(|s| s.map.len() - 1).unwrap_or(0);
    let build = |skip_first: bool| {
        let mut t = Tiling::new(r);
        for set in p.segment_sets(skip_first) {
            t.push(set);
        }
        t
    };
    Ok((build(true), build(false)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{h1, h1_prime, h_vectors};

    #[test]
    fn kminus_paths() {
        let km = DecoratedGraph::kminus(3);
        let p = build_h_path(&HVector::repeat(&km, 3).unwrap()).unwrap();
        assert_eq!(p.graph.n(), 10);
        assert_ne!(p.a, p.b);
        let (ta, tb) = path_exit_tilings(&p).unwrap();
        let all: Vec<usize> = (0..10).collect();
        let without = |x: usize| all.iter().copied().filter(|&v| v != x).collect::<Vec<_>>();
        ta.validate(&p.graph, Some(&without(p.a))).unwrap();
        tb.validate(&p.graph, Some(&without(p.b))).unwrap();
        assert_eq!(ta.len(), 3);
    }

    #[test]
    fn single_entry_path_is_the_entry() {
        let km = DecoratedGraph::kminus(4);
        let p = build_h_path(&HVector::repeat(&km, 1).unwrap()).unwrap();
        assert_eq!(p.graph, km.graph);
        assert_eq!((p.a, p.b), (km.w1, km.w2));
    }

    #[test]
    fn case_two_path_size() {
        let v = h_vectors(11, 3).unwrap().shortest();
        assert_eq!(build_h_path(&v).unwrap().graph.n(), 45);
    }

    #[test]
    fn overlay_gives_kminus_path() {
        let v = HVector::new(vec![h1(6, 3).unwrap(), h1_prime(6, 3).unwrap()]).unwrap();
        let c = complement_vector(&v).unwrap();
        let (p, q) = (build_h_path(&v).unwrap(), build_h_path(&c).unwrap());
        let k = build_h_path(&kminus_closure(&v)).unwrap();
        assert!(!p.graph.shares_edge_with(&q.graph));
        assert_eq!(crate::graph::union(&p.graph, &q.graph).unwrap(), k.graph);
        assert_eq!(q.graph.degree(q.a), 0);
        assert_eq!(q.graph.degree(q.b), 0);
        assert_eq!(complement_vector(&c).unwrap(), v);
    }

    #[test]
    fn non_kminus_segments_are_rejected() {
        let p = build_h_path(&HVector::repeat(&h1(6, 3).unwrap(), 1).unwrap()).unwrap();
        assert!(path_exit_tilings(&p).is_err());
    }
}
