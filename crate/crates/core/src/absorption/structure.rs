//! Absorbing structures: one gadget per template left vertex, its base glued
//! onto the template neighbourhood inside a 4m-vertex set `Z`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::constructions::{h_vectors, HVector};
use crate::embed::{find_embedding, Layer, Search};
use crate::error::{invalid, Error, Result};
use crate::graph::{union, Graph};
use crate::tiling::Tiling;

use super::gadget::{gadget_exit_tiling, gadget_for, GadgetBlueprint};
use super::template::{Template, Verification};

#[derive(Clone, Debug)]
pub struct StructureParams {
    /// Search nodes per embedding attempt.
    pub node_budget: u64,
    /// Attempts (each with a fresh candidate order) per gadget.
    pub restarts: usize,
    /// Path vector used in every gadget; `None` takes the shortest of the
    /// family for `(r, k)`.
    pub vector: Option<HVector>,
    /// Host vertices the gadget interiors may use; `None` allows all.
    pub allowed: Option<Vec<usize>>,
}

impl Default for StructureParams {
    fn default() -> Self {
        StructureParams {
            node_budget: 200_000,
            restarts: 4,
            vector: None,
            allowed: None,
        }
    }
}

/// Why assembly stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssemblyError {
    Invalid(String),
    /// The deterministic half of gadget `gadget` could not be embedded.
    DetFailure {
        gadget: usize,
    },
    /// The deterministic half embeds but never together with the random half.
    RandFailure {
        gadget: usize,
    },
    /// Fewer free vertices than the gadgets need.
    HostTooSmall {
        needed: usize,
        available: usize,
    },
}

impl From<Error> for AssemblyError {
    fn from(e: Error) -> Self {
        AssemblyError::Invalid(format!("{e}"))
    }
}

impl core::fmt::Display for AssemblyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AssemblyError::Invalid(s) => write!(f, "invalid input: {s}"),
            AssemblyError::DetFailure { gadget } => write!(f, "deterministic embedding failed for gadget {gadget}"),
            AssemblyError::RandFailure { gadget } => write!(f, "random edges missing for gadget {gadget}"),
            AssemblyError::HostTooSmall { needed, available } => {
                write!(f, "structure needs {needed} vertices, only {available} available")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct GadgetEmbedding {
    /// Index into [`AbsorbingStructure::blueprints`].
    pub blueprint: usize,
    /// Host vertex of each gadget vertex.
    pub image: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AbsorbingStructure {
    template: Template,
    r: usize,
    z1: Vec<usize>,
    z2: Vec<usize>,
    blueprints: Vec<GadgetBlueprint>,
    embeddings: Vec<GadgetEmbedding>,
    host: Graph,
    vertices: Vec<usize>,
}

impl AbsorbingStructure {
    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn m(&self) -> usize {
        self.template.m()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn flexible(&self) -> &[usize] {
        &self.z1
    }

    pub fn z2(&self) -> &[usize] {
        &self.z2
    }

    pub fn blueprints(&self) -> &[GadgetBlueprint] {
        &self.blueprints
    }

    pub fn embeddings(&self) -> &[GadgetEmbedding] {
        &self.embeddings
    }

    /// `G_det ∪ G_rand`.
    pub fn host(&self) -> &Graph {
        &self.host
    }

    /// Sorted `V(A)`.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Flexibility was only sampled, not exhaustively verified.
    pub fn sampled_verification(&self) -> bool {
        matches!(self.template.verification(), Verification::Sampled { .. })
    }

    pub fn t_star(&self) -> usize {
        self.blueprints.iter().map(GadgetBlueprint::t_max).max().unwrap_or(0)
    }

    /// `125 t* r^2 m`.
    pub fn size_bound(&self) -> usize {
        125 * self.t_star() * self.r * self.r * self.m()
    }

    /// Host vertex of right template vertex `j`.
    pub fn z(&self, j: usize) -> usize {
        let two_m = 2 * self.m();
        if j < two_m {
            self.z1[j]
        } else {
            self.z2[j - two_m]
        }
    }
}

/// Greedily embeds one gadget per left template vertex into
/// `G_det ∪ G_rand`: the deterministic half into `g_det`, the random half
/// into the union, bases onto the template neighbourhoods in `Z1 ∪ Z2`, all
/// other vertices disjoint from each other and from `Z`.
#[allow(clippy::too_many_arguments)]
pub fn assemble_absorbing_structure(
    g_det: &Graph,
    g_rand: &Graph,
    template: &Template,
    z1: &[usize],
    z2: &[usize],
    r: usize,
    k: usize,
    seed: u64,
    params: &StructureParams,
) -> core::result::Result<AbsorbingStructure, AssemblyError> {
    let m = template.m();
    let n = g_det.n();
    if z1.len() != 2 * m || z2.len() != 2 * m {
        return Err(AssemblyError::Invalid(format!(
            "Z1 and Z2 must have {} vertices each",
            2 * m
        )));
    }
    let host = union(g_det, g_rand)?;
    let z: Vec<usize> = z1.iter().chain(z2).copied().collect();
    let zset = VertexSet::from_iter(n, z.iter().copied());
    if z.iter().any(|&v| v >= n) || zset.len() != 4 * m {
        return Err(AssemblyError::Invalid("Z must be 4m distinct host vertices".into()));
    }
    let vector = match &params.vector {
        Some(v) => v.clone(),
        None => h_vectors(r, k)?.shortest(),
    };
    if vector.r() != r {
        return Err(AssemblyError::Invalid("path vector has the wrong r".into()));
    }

    let mut blueprints: Vec<GadgetBlueprint> = Vec::new();
    let mut which = Vec::with_capacity(template.left());
    for i in 0..template.left() {
        let s = template.neighbours(i).len();
        let idx = match blueprints.iter().position(|b| b.s() == s) {
            Some(idx) => idx,
            None => {
                blueprints.push(gadget_for(r, k, s, &vector)?);
                blueprints.len() - 1
            }
        };
        which.push(idx);
    }

    let mut free = match &params.allowed {
        Some(a) => VertexSet::from_iter(n, a.iter().copied().filter(|&v| v < n)),
        None => VertexSet::full(n),
    };
    free.difference_with(zset.words());
    let needed: usize = which.iter().map(|&b| blueprints[b].n() - blueprints[b].s()).sum();
    if needed > free.len() {
        return Err(AssemblyError::HostTooSmall {
            needed: needed + 4 * m,
            available: free.len() + 4 * m,
        });
    }

    let splits: Vec<_> = blueprints.iter().map(GadgetBlueprint::split).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rank: Vec<usize> = (0..n).collect();
    let mut embeddings = Vec::with_capacity(template.left());
    for (i, &b) in which.iter().enumerate() {
        let anchors: Vec<(usize, usize)> = template
            .neighbours(i)
            .iter()
            .enumerate()
            .map(|(pos, &j)| (pos, if j < 2 * m { z1[j] } else { z2[j - 2 * m] }))
            .collect();
        let mut forbidden = VertexSet::full(n);
        forbidden.difference_with(free.words());
        let layers = [
            Layer {
                pattern: &splits[b].det,
                host: g_det,
            },
            Layer {
                pattern: &splits[b].rand,
                host: &host,
            },
        ];
        let mut found = None;
        for _ in 0..params.restarts.max(1) {
            rank.shuffle(&mut rng);
            if let Search::Found(img) = find_embedding(&layers, &anchors, &forbidden, &rank, params.node_budget)? {
                found = Some(img);
                break;
            }
        }
        let image = match found {
            Some(img) => img,
            None => {
                let det_only = find_embedding(&layers[..1], &anchors, &forbidden, &rank, params.node_budget)?;
                return Err(match det_only {
                    Search::Found(_) => AssemblyError::RandFailure { gadget: i },
                    _ => AssemblyError::DetFailure { gadget: i },
                });
            }
        };
        for &v in &image[blueprints[b].s()..] {
            free.remove(v);
        }
        embeddings.push(GadgetEmbedding { blueprint: b, image });
    }

    let mut all = zset;
    for e in &embeddings {
        e.image.iter().for_each(|&v| all.insert(v));
    }
    let vertices = all.to_vec();
    let st = AbsorbingStructure {
        template: template.clone(),
        r,
        z1: z1.to_vec(),
        z2: z2.to_vec(),
        blueprints,
        embeddings,
        host,
        vertices,
    };
    check_structure(&st)?;
    Ok(st)
}

/// Re-checks the structural invariants from scratch.
pub fn check_structure(a: &AbsorbingStructure) -> Result<()> {
    let n = a.host.n();
    let mut seen = VertexSet::new(n);
    for &z in a.z1.iter().chain(&a.z2) {
        seen.insert(z);
    }
    for (i, e) in a.embeddings.iter().enumerate() {
        let bp = &a.blueprints[e.blueprint];
        for (pos, &j) in a.template.neighbours(i).iter().enumerate() {
            if e.image[pos] != a.z(j) {
                return Err(Error::Inconsistency(format!(
                    "gadget {i} base {pos} not on its template vertex"
                )));
            }
        }
        for &v in &e.image[bp.s()..] {
            if seen.contains(v) {
                return Err(Error::Inconsistency(format!("gadget {i} reuses vertex {v}")));
            }
            seen.insert(v);
        }
        let kr = bp.kr_side()?;
        for (u, v) in kr.edges() {
            if !a.host.has_edge(e.image[u], e.image[v]) {
                return Err(Error::Inconsistency(format!("gadget {i} edge missing from host")));
            }
        }
    }
    Ok(())
}

/// Tiling covering exactly `V(A) \ zbar` for an `m`-subset `zbar` of the
/// flexible set.
pub fn absorb(a: &AbsorbingStructure, zbar: &[usize]) -> Result<Tiling> {
    let m = a.m();
    if zbar.len() != m {
        return Err(invalid!(
            "absorb needs exactly {m} flexible vertices, got {}",
            zbar.len()
        ));
    }
    let mut removed = Vec::with_capacity(m);
    for &v in zbar {
        let j =
            a.z1.iter()
                .position(|&z| z == v)
                .ok_or_else(|| invalid!("vertex {v} is not in the flexible set"))?;
        if removed.contains(&j) {
            return Err(invalid!("vertex {v} listed twice"));
        }
        removed.push(j);
    }
    let matching = a.template.matching_without(&removed)?.ok_or_else(|| {
        Error::Inconsistency(format!(
            "template has no perfect matching without {removed:?}; flexibility violated"
        ))
    })?;
    let mut tiling = Tiling::new(a.r);
    for (i, &j) in matching.iter().enumerate() {
        let e = &a.embeddings[i];
        let pos = a
            .template
            .neighbours(i)
            .iter()
            .position(|&x| x == j)
            .expect("matched along an edge");
        let local = gadget_exit_tiling(&a.blueprints[e.blueprint], pos)?;
        for part in local.parts {
            tiling.push(part.into_iter().map(|x| e.image[x]).collect());
        }
    }
    let cover: Vec<usize> = a.vertices.iter().copied().filter(|v| !zbar.contains(v)).collect();
    tiling.validate(&a.host, Some(&cover))?;
    Ok(tiling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorption::template::{generate_template, sparse_template, VerifyMode};
    use rand::seq::index::sample;

    #[test]
    fn complete_hosts_always_succeed() {
        let n = 400;
        let g = Graph::complete(n);
        let t = generate_template(1, 3, VerifyMode::Exhaustive).unwrap();
        let z1 = vec![0, 1];
        let z2 = vec![2, 3];
        let a = assemble_absorbing_structure(&g, &g, &t, &z1, &z2, 3, 2, 9, &StructureParams::default()).unwrap();
        assert!(a.vertices().len() < a.size_bound());
        for zbar in [[0], [1]] {
            let tl = absorb(&a, &zbar).unwrap();
            assert_eq!(tl.len() * 3, a.vertices().len() - 1);
        }
        assert!(absorb(&a, &[0, 1]).is_err());
        assert!(absorb(&a, &[2]).is_err());
    }

    #[test]
    fn sparse_structure_absorbs_every_choice() {
        let n = 200;
        let g = Graph::complete(n);
        let t = sparse_template(3).unwrap();
        let z1: Vec<usize> = (0..6).collect();
        let z2: Vec<usize> = (6..12).collect();
        let a = assemble_absorbing_structure(&g, &g, &t, &z1, &z2, 3, 3, 1, &StructureParams::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let zbar: Vec<usize> = sample(&mut rng, 6, 3).into_iter().map(|i| z1[i]).collect();
            let tl = absorb(&a, &zbar).unwrap();
            assert_eq!((a.vertices().len() - 3) % 3, 0);
            assert_eq!(tl.len() * 3, a.vertices().len() - 3);
        }
    }

    #[test]
    fn small_hosts_are_reported() {
        let g = Graph::complete(30);
        let t = sparse_template(2).unwrap();
        let e = assemble_absorbing_structure(
            &g,
            &g,
            &t,
            &[0, 1, 2, 3],
            &[4, 5, 6, 7],
            3,
            3,
            1,
            &StructureParams::default(),
        )
        .unwrap_err();
        assert!(matches!(e, AssemblyError::HostTooSmall { .. }));
    }

    #[test]
    fn failures_are_classified() {
        let n = 120;
        let t = sparse_template(1).unwrap();
        let (z1, z2) = ([0, 1], [2, 3]);
        let p = StructureParams {
            restarts: 1,
            ..StructureParams::default()
        };
        let e =
            assemble_absorbing_structure(&Graph::empty(n), &Graph::complete(n), &t, &z1, &z2, 3, 2, 1, &p).unwrap_err();
        assert_eq!(e, AssemblyError::DetFailure { gadget: 0 });
        let e = assemble_absorbing_structure(&Graph::complete(n), &Graph::empty(n), &t, &z1, &z2, 3, 2, 1, &p);
        // the deterministic half alone still fits; complete det host makes the union complete
        assert!(e.is_ok());
    }
}
