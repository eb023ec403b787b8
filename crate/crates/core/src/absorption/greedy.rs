//! Multi-round greedy placement of many anchored patterns on disjoint vertex
//! sets.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::embed::{find_embedding, Layer, Search};
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Pattern `pattern` with `anchors` as `(pattern vertex, host vertex)`; the
/// free vertices must land in `candidates`.
#[derive(Clone, Debug)]
pub struct EmbeddingTask {
    pub pattern: Graph,
    pub anchors: Vec<(usize, usize)>,
    pub candidates: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyEmbeddings {
    /// `images[i]` maps pattern vertices of task `i`, if served.
    pub images: Vec<Option<Vec<usize>>>,
    pub unserved: Vec<usize>,
}

impl GreedyEmbeddings {
    pub fn served(&self) -> usize {
        self.images.iter().flatten().count()
    }
}

/// In round `ρ` every still unserved task (visited in a fresh shuffled order)
/// may only use its candidates at positions `≡ ρ (mod rounds)`, so each round
/// sees its own slice of the candidate pool. Free vertices of served tasks
/// are never reused.
pub fn greedy_disjoint_embeddings(
    host: &Graph,
    tasks: &[EmbeddingTask],
    rounds: usize,
    seed: u64,
    node_budget: u64,
) -> Result<GreedyEmbeddings> {
    if rounds == 0 {
        return Err(invalid!("at least one round is needed"));
    }
    let n = host.n();
    for t in tasks {
        if t.candidates.is_empty() {
            return Err(invalid!("candidate family must be nonempty"));
        }
        if t.candidates
            .iter()
            .chain(t.anchors.iter().map(|a| &a.1))
            .any(|&v| v >= n)
        {
            return Err(invalid!("task vertex outside the host"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = VertexSet::new(n);
    let mut images: Vec<Option<Vec<usize>>> = vec![None; tasks.len()];
    for round in 0..rounds {
        let mut order: Vec<usize> = (0..tasks.len()).filter(|&i| images[i].is_none()).collect();
        order.shuffle(&mut rng);
        let mut rank: Vec<usize> = (0..n).collect();
        rank.shuffle(&mut rng);
        for i in order {
            let t = &tasks[i];
            let mut allowed = VertexSet::from_iter(
                n,
                t.candidates
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| pos % rounds == round)
                    .map(|(_, &v)| v),
            );
            allowed.difference_with(used.words());
            let mut forbidden = VertexSet::full(n);
            forbidden.difference_with(allowed.words());
            let layer = [Layer {
                pattern: &t.pattern,
                host,
            }];
            if let Search::Found(img) = find_embedding(&layer, &t.anchors, &forbidden, &rank, node_budget)? {
                let anchored: Vec<usize> = t.anchors.iter().map(|a| a.0).collect();
                for (p, &v) in img.iter().enumerate() {
                    if !anchored.contains(&p) {
                        used.insert(v);
                    }
                }
                images[i] = Some(img);
            }
        }
    }
    let unserved = (0..tasks.len()).filter(|&i| images[i].is_none()).collect();
    Ok(GreedyEmbeddings { images, unserved })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_tasks(count: usize, n: usize) -> Vec<EmbeddingTask> {
        (0..count)
            .map(|i| EmbeddingTask {
                pattern: Graph::complete(3),
                anchors: vec![(0, i)],
                candidates: (count..n).collect(),
            })
            .collect()
    }

    #[test]
    fn complete_host_serves_everything() {
        let r = greedy_disjoint_embeddings(&Graph::complete(40), &triangle_tasks(10, 40), 2, 3, 10_000).unwrap();
        assert!(r.unserved.is_empty());
        let mut seen = Vec::new();
        for img in r.images.iter().flatten() {
            seen.extend_from_slice(&img[1..]);
        }
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 20);
    }

    #[test]
    fn edgeless_host_serves_nothing() {
        let r = greedy_disjoint_embeddings(&Graph::empty(40), &triangle_tasks(10, 40), 3, 3, 10_000).unwrap();
        assert_eq!(r.served(), 0);
        assert_eq!(r.unserved.len(), 10);
    }

    #[test]
    fn deterministic_under_seed() {
        let tasks = triangle_tasks(5, 30);
        let a = greedy_disjoint_embeddings(&Graph::complete(30), &tasks, 2, 11, 1000).unwrap();
        let b = greedy_disjoint_embeddings(&Graph::complete(30), &tasks, 2, 11, 1000).unwrap();
        assert_eq!(a, b);
    }
}
