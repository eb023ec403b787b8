//! Bipartite templates of flexibility `m`: left side `I` (`3m` vertices),
//! right side `J1 ⊔ J2` with `J1 = 0..2m` (flexible) and `J2 = 2m..4m`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::matching::{max_matching, perfect_matching};

pub const MAX_TEMPLATE_DEGREE: usize = 40;
pub const LEFT_DEGREE: usize = 20;
pub const RETRY_CAP: usize = 1000;
pub const EXHAUSTIVE_UP_TO: usize = 8;
pub const SAMPLED_TRIALS_CAP: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verification {
    Exhaustive,
    Sampled { trials: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemplateShape {
    /// Each left vertex draws `min(20, 4m)` distinct uniform right neighbours.
    Random,
    /// Left vertex `i < 2m` joins only `J2` vertex `2m + i`; left vertex
    /// `2m + c` joins the window `c..=c + m` of `J1`. Flexible by
    /// construction and with `2m + m(m + 1)` edges.
    Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    m: usize,
    /// Sorted right neighbours of each left vertex.
    adj: Vec<Vec<usize>>,
    verification: Verification,
}

/// How to check flexibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Exhaustive up to `m = 8`, sampled above.
    Auto,
    Exhaustive,
    /// Sampled with this many trials (`None`: `min(10 C(2m, m), 10^5)`).
    Sampled(Option<u64>),
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub fn default_sampled_trials(m: usize) -> u64 {
    binomial(2 * m as u64, m as u64)
        .saturating_mul(10)
        .min(SAMPLED_TRIALS_CAP)
}

impl Template {
    /// Wraps an explicit adjacency, checking shape and degree but not
    /// flexibility.
    pub fn from_adjacency(m: usize, mut adj: Vec<Vec<usize>>, verification: Verification) -> Result<Self> {
        if m == 0 {
            return Err(invalid!("flexibility must be at least 1"));
        }
        if adj.len() != 3 * m {
            return Err(invalid!("template needs {} left vertices, got {}", 3 * m, adj.len()));
        }
        let mut right_deg = vec![0usize; 4 * m];
        for row in adj.iter_mut() {
            row.sort_unstable();
            row.dedup();
            if row.is_empty() {
                return Err(invalid!("left vertex with no neighbours"));
            }
            for &j in row.iter() {
                if j >= 4 * m {
                    return Err(invalid!("right vertex {j} out of range 0..{}", 4 * m));
                }
                right_deg[j] += 1;
            }
        }
        let t = Template { m, adj, verification };
        if t.max_degree() > MAX_TEMPLATE_DEGREE {
            return Err(invalid!(
                "template degree {} exceeds {MAX_TEMPLATE_DEGREE}",
                t.max_degree()
            ));
        }
        Ok(t)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn left(&self) -> usize {
        3 * self.m
    }

    pub fn right(&self) -> usize {
        4 * self.m
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn verification(&self) -> Verification {
        self.verification
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.right()];
        self.adj.iter().flatten().for_each(|&j| d[j] += 1);
        d
    }

    pub fn max_degree(&self) -> usize {
        let l = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        l.max(self.right_degrees().into_iter().max().unwrap_or(0))
    }

    /// Perfect matching of the template minus the flexible vertices in
    /// `removed` (indices into `J1`); `result[i]` is the partner of left `i`.
    pub fn matching_without(&self, removed: &[usize]) -> Result<Option<Vec<usize>>> {
        if removed.len() != self.m {
            return Err(invalid!("exactly {} flexible vertices must be removed", self.m));
        }
        let mut blocked = vec![false; self.right()];
        for &j in removed {
            if j >= 2 * self.m || blocked[j] {
                return Err(invalid!(
                    "removed set must be {} distinct vertices of 0..{}",
                    self.m,
                    2 * self.m
                ));
            }
            blocked[j] = true;
        }
        Ok(perfect_matching(&self.adj, self.right(), &blocked))
    }

    /// Checks flexibility over every `m`-subset of `J1`, returning the first
    /// failing subset.
    pub fn verify_exhaustive(&self) -> Option<Vec<usize>> {
        let m = self.m;
        let mut subset: Vec<usize> = (0..m).collect();
        loop {
            if self.matching_without(&subset).ok().flatten().is_none() {
                return Some(subset);
            }
            // next combination in lexicographic order
            let mut i = m;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if subset[i] < 2 * m - (m - i) {
                    break;
                }
                if i == 0 {
                    return None;
                }
            }
            subset[i] += 1;
            for j in i + 1..m {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }

    /// Checks flexibility on `trials` uniform `m`-subsets of `J1`.
    pub fn verify_sampled(&self, trials: u64, rng: &mut impl Rng) -> Option<Vec<usize>> {
        for _ in 0..trials {
            let s = sample(rng, 2 * self.m, self.m).into_vec();
            if self.matching_without(&s).ok().flatten().is_none() {
                return Some(s);
            }
        }
        None
    }

    /// Size of a maximum matching with nothing removed (diagnostics).
    pub fn max_matching_size(&self) -> usize {
        max_matching(&self.adj, self.right(), &[]).iter().flatten().count()
    }
}

fn random_adjacency(m: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let d = LEFT_DEGREE.min(4 * m);
    (0..3 * m).map(|_| sample(rng, 4 * m, d).into_vec()).collect()
}

/// The sparse shape; see [`TemplateShape::Sparse`].
pub fn sparse_template(m: usize) -> Result<Template> {
    if m == 0 {
        return Err(invalid!("flexibility must be at least 1"));
    }
    let mut adj = Vec::with_capacity(3 * m);
    for i in 0..2 * m {
        adj.push(vec![2 * m + i]);
    }
    for c in 0..m {
        adj.push((c..=c + m).collect());
    }
    let v = if m <= EXHAUSTIVE_UP_TO {
        Verification::Exhaustive
    } else {
        Verification::Sampled {
            trials: default_sampled_trials(m),
        }
    };
    let t = Template::from_adjacency(m, adj, v)?;
    if let Some(bad) = verify(&t, v, &mut ChaCha8Rng::seed_from_u64(0)) {
        return Err(Error::Inconsistency(format!("sparse template not flexible at {bad:?}")));
    }
    Ok(t)
}

fn verify(t: &Template, v: Verification, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    match v {
        Verification::Exhaustive => t.verify_exhaustive(),
        Verification::Sampled { trials } => t.verify_sampled(trials, rng),
    }
}

/// Generate-and-verify loop for the random shape (retry cap 1000).
pub fn generate_template(m: usize, seed: u64, mode: VerifyMode) -> Result<Template> {
    if m == 0 {
        return Err(invalid!("flexibility must be at least 1"));
    }
    let v = match mode {
        VerifyMode::Exhaustive => Verification::Exhaustive,
        VerifyMode::Auto if m <= EXHAUSTIVE_UP_TO => Verification::Exhaustive,
        VerifyMode::Auto => Verification::Sampled {
            trials: default_sampled_trials(m),
        },
        VerifyMode::Sampled(t) => Verification::Sampled {
            trials: t.unwrap_or_else(|| default_sampled_trials(m)),
        },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut degree_rejects, mut flex_rejects) = (0usize, 0usize);
    for _ in 0..RETRY_CAP {
        let adj = random_adjacency(m, &mut rng);
        let t = match Template::from_adjacency(m, adj, v) {
            Ok(t) => t,
            Err(_) => {
                degree_rejects += 1;
                continue;
            }
        };
        if verify(&t, v, &mut rng).is_none() {
            return Ok(t);
        }
        flex_rejects += 1;
    }
    Err(Error::GenerationFailure(format!(
        "no template for m={m} after {RETRY_CAP} attempts ({degree_rejects} degree rejections, {flex_rejects} flexibility failures)"
    )))
}

pub fn generate_shaped(m: usize, seed: u64, shape: TemplateShape, mode: VerifyMode) -> Result<Template> {
    match shape {
        TemplateShape::Random => generate_template(m, seed, mode),
        TemplateShape::Sparse => sparse_template(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_flexible(t: &Template) -> bool {
        // Hall's condition on every removal, checked by subset enumeration
        let m = t.m();
        (0u32..1 << (2 * m)).filter(|s| s.count_ones() as usize == m).all(|s| {
            let alive: Vec<usize> = (0..4 * m).filter(|&j| j >= 2 * m || s >> j & 1 == 0).collect();
            (1u32..1 << (3 * m)).all(|left| {
                let mut nb = 0u64;
                for i in 0..3 * m {
                    if left >> i & 1 == 1 {
                        for &j in t.neighbours(i) {
                            if alive.contains(&j) {
                                nb |= 1 << j;
                            }
                        }
                    }
                }
                nb.count_ones() >= left.count_ones()
            })
        })
    }

    #[test]
    fn small_templates_match_hall() {
        for m in 1..=2 {
            let t = generate_template(m, 7, VerifyMode::Exhaustive).unwrap();
            assert!(brute_flexible(&t));
            assert!(brute_flexible(&sparse_template(m).unwrap()));
        }
    }

    #[test]
    fn sparse_counts() {
        for m in 1..=8 {
            let t = sparse_template(m).unwrap();
            assert_eq!(t.edge_count(), 2 * m + m * (m + 1));
            assert!(t.max_degree() <= MAX_TEMPLATE_DEGREE);
        }
    }

    #[test]
    fn non_flexible_is_detected() {
        // three left vertices all tied to J2 vertex 2 would need a matching of size 3
        let adj = vec![vec![0], vec![1], vec![2, 3]];
        let t = Template::from_adjacency(1, adj, Verification::Exhaustive).unwrap();
        assert!(t.verify_exhaustive().is_some());
        assert!(!brute_flexible(&t));
    }

    #[test]
    fn removal_must_have_size_m() {
        let t = sparse_template(2).unwrap();
        assert!(t.matching_without(&[0]).is_err());
        assert!(t.matching_without(&[0, 0]).is_err());
        assert!(t.matching_without(&[0, 5]).is_err());
        assert!(t.matching_without(&[0, 3]).unwrap().is_some());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(default_sampled_trials(4), 700);
        assert_eq!(default_sampled_trials(20), SAMPLED_TRIALS_CAP);
    }
}
