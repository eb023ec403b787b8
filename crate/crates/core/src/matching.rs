//! Hopcroft–Karp maximum matching on bipartite graphs given as left
//! adjacency lists.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

const NIL: usize = usize::MAX;

/// Maximum matching; `result[i]` is the right partner of left vertex `i`.
/// Right vertices with `blocked[j]` set are treated as deleted.
pub fn max_matching(adj: &[Vec<usize>], n_right: usize, blocked: &[bool]) -> Vec<Option<usize>> {
    let n_left = adj.len();
    let mut pair_l = vec![NIL; n_left];
    let mut pair_r = vec![NIL; n_right];
    let mut dist = vec![0usize; n_left];
    let usable = |j: usize| !blocked.get(j).copied().unwrap_or(false);
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for i in 0..n_left {
            if pair_l[i] == NIL {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !usable(j) {
                    continue;
                }
                let k = pair_r[j];
                if k == NIL {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..n_left {
            if pair_l[i] == NIL {
                augment(i, adj, &usable, &mut pair_l, &mut pair_r, &mut dist);
            }
        }
    }
    pair_l.into_iter().map(|j| (j != NIL).then_some(j)).collect()
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    usable: &dyn Fn(usize) -> bool,
    pair_l: &mut [usize],
    pair_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &j in &adj[i] {
        if !usable(j) {
            continue;
        }
        let k = pair_r[j];
        let ok = k == NIL || (dist[k] == dist[i].wrapping_add(1) && augment(k, adj, usable, pair_l, pair_r, dist));
        if ok {
            pair_l[i] = j;
            pair_r[j] = i;
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}

/// A matching saturating every left vertex and every unblocked right vertex,
/// if one exists.
pub fn perfect_matching(adj: &[Vec<usize>], n_right: usize, blocked: &[bool]) -> Option<Vec<usize>> {
    let alive = (0..n_right)
        .filter(|&j| !blocked.get(j).copied().unwrap_or(false))
        .count();
    if alive != adj.len() {
        return None;
    }
    max_matching(adj, n_right, blocked).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_augmenting_paths() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = perfect_matching(&adj, 3, &[]).unwrap();
        assert_eq!(m, vec![1, 0, 2]);
    }

    #[test]
    fn blocked_vertices_are_skipped() {
        let adj = vec![vec![0, 1], vec![1, 2]];
        assert!(perfect_matching(&adj, 3, &[false, true, false]).is_some());
        assert!(perfect_matching(&adj, 3, &[true, false, true]).is_none());
        let m = max_matching(&adj, 3, &[true, false, true]);
        assert_eq!(m.iter().flatten().count(), 1);
    }
}
