//! Named graphs: the deterministic clique part `H_det`, the decorated pieces
//! used to build reachability paths, the extremal lower-bound graph and the
//! critical chromatic number.
//!
//! Vertex layout is always parts-then-index: parts of a complete multipartite
//! graph occupy consecutive id ranges in the listed order, and a distinguished
//! vertex is the first (or second) vertex of its part.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{invalid, Result};
use crate::graph::{complete_multipartite, DecoratedGraph, Graph, GraphBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// `k` divides `r`.
    One,
    /// At least three parts and a short last part.
    Two,
    /// Two parts, the second one short.
    Three,
}

/// Decomposition `r = k (r_star - 1) + q` with `0 < q <= k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CaseTag {
    pub r: usize,
    pub k: usize,
    pub q: usize,
    pub r_star: usize,
    pub case: Case,
    /// `ceil(r / q)`, only in case three.
    pub c: Option<usize>,
}

pub fn case_tag(r: usize, k: usize) -> Result<CaseTag> {
    if k < 2 || k > r {
        return Err(invalid!("need 2 <= k <= r, got r={r}, k={k}"));
    }
    let r_star = r.div_ceil(k);
    let q = r - k * (r_star - 1);
    let case = if q == k {
        Case::One
    } else if r_star >= 3 {
        Case::Two
    } else {
        Case::Three
    };
    let c = (case == Case::Three).then(|| r.div_ceil(q));
    Ok(CaseTag {
        r,
        k,
        q,
        r_star,
        case,
        c,
    })
}

impl CaseTag {
    /// Part sizes of `H_det`: `r_star - 1` parts of size `k`, then one of size `q`.
    pub fn det_parts(&self) -> Vec<usize> {
        let mut p = vec![self.k; self.r_star - 1];
        p.push(self.q);
        p
    }
}

pub fn h_det(r: usize, k: usize) -> Result<Graph> {
    complete_multipartite(&case_tag(r, k)?.det_parts())
}

/// `K_r` minus the edges of `H_det`: disjoint cliques on the parts.
pub fn h_det_complement(r: usize, k: usize) -> Result<Graph> {
    Graph::complete(r).minus(&h_det(r, k)?)
}

/// `H_0`: the last part grows by one and holds both distinguished vertices.
pub fn h0(r: usize, k: usize) -> Result<DecoratedGraph> {
    let t = case_tag(r, k)?;
    let mut parts = t.det_parts();
    *parts.last_mut().expect("at least one part") += 1;
    let start = t.k * (t.r_star - 1);
    DecoratedGraph::new(complete_multipartite(&parts)?, start, start + 1)
}

/// `H_0'`: the `H_0` graph with distinguished vertices in the first two parts.
///
/// Those vertices are adjacent in the multipartite graph; the edge between them
/// is dropped so the result lies inside `K^-_{r+1}` and can be complemented
/// there.
pub fn h0_prime(r: usize, k: usize) -> Result<DecoratedGraph> {
    let t = case_tag(r, k)?;
    if t.case == Case::One {
        return Err(invalid!("H0' is undefined when k divides r (r={r}, k={k})"));
    }
    let base = h0(r, k)?;
    Ok(DecoratedGraph::new(base.graph, 0, t.k)?.restrict_to_kminus())
}

/// `H_1`: `K_{k,...,k,1}` with `r/k` parts of size `k`, minus the edge between
/// the singleton part (first distinguished vertex) and the first vertex of part
/// one (second distinguished vertex).
pub fn h1(r: usize, k: usize) -> Result<DecoratedGraph> {
    let t = case_tag(r, k)?;
    if t.case != Case::One {
        return Err(invalid!("H1 needs k | r (r={r}, k={k})"));
    }
    let mut parts = vec![k; t.r_star];
    parts.push(1);
    let g = complete_multipartite(&parts)?;
    Ok(DecoratedGraph::new(g, r, 0)?.restrict_to_kminus())
}

pub fn h1_prime(r: usize, k: usize) -> Result<DecoratedGraph> {
    Ok(h1(r, k)?.swapped())
}

/// A nonempty sequence of decorated graphs on a common `r + 1` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HVector {
    entries: Vec<DecoratedGraph>,
}

impl HVector {
    pub fn new(entries: Vec<DecoratedGraph>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| invalid!("an H-vector needs an entry"))?;
        let size = first.graph.n();
        if size < 2 || entries.iter().any(|e| e.graph.n() != size) {
            return Err(invalid!("H-vector entries must share a vertex count of at least 2"));
        }
        Ok(HVector { entries })
    }

    /// `(F, F, ..., F)` with `t` entries.
    pub fn repeat(f: &DecoratedGraph, t: usize) -> Result<Self> {
        HVector::new(vec![f.clone(); t])
    }

    pub fn entries(&self) -> &[DecoratedGraph] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn r(&self) -> usize {
        self.entries[0].r()
    }
}

/// Default length cap of the `K^-` family used when `k = r`.
pub const KMINUS_DEFAULT_T_MAX: usize = 3;

/// The reachability vectors available for `(r, k)`.
#[derive(Clone, Debug)]
pub enum HFamily {
    /// Case one (`k < r`) and case two: a single vector.
    Single(HVector),
    /// Case three: all admissible words over `{H_0, H_0'}`.
    Words(Case3Vectors),
    /// `k = r`: `(K^-_{r+1}, t)` for `t = 1..=t_max`.
    KMinus { r: usize, t_max: usize },
}

impl HFamily {
    pub fn iter(&self) -> Box<dyn Iterator<Item = HVector> + '_> {
        match self {
            HFamily::Single(v) => Box::new(core::iter::once(v.clone())),
            HFamily::Words(w) => Box::new(w.clone()),
            HFamily::KMinus { r, t_max } => {
                let km = DecoratedGraph::kminus(*r);
                Box::new((1..=*t_max).map(move |t| HVector::repeat(&km, t).expect("t >= 1")))
            }
        }
    }

    /// The first (shortest) vector of the family.
    pub fn shortest(&self) -> HVector {
        self.iter().next().expect("families are nonempty")
    }
}

pub fn h_vectors(r: usize, k: usize) -> Result<HFamily> {
    h_vectors_with(r, k, KMINUS_DEFAULT_T_MAX)
}

pub fn h_vectors_with(r: usize, k: usize, kminus_t_max: usize) -> Result<HFamily> {
    let t = case_tag(r, k)?;
    if k == r {
        if kminus_t_max == 0 {
            return Err(invalid!("t_max must be positive"));
        }
        return Ok(HFamily::KMinus { r, t_max: kminus_t_max });
    }
    Ok(match t.case {
        Case::One => HFamily::Single(HVector::new(vec![h1(r, k)?, h1_prime(r, k)?])?),
        Case::Two => {
            let (a, b) = (h0(r, k)?, h0_prime(r, k)?);
            HFamily::Single(HVector::new(vec![a.clone(), b.clone(), b, a])?)
        }
        Case::Three => HFamily::Words(Case3Vectors::new(r, k)?),
    })
}

/// Lazy enumeration of words over `{H_0, H_0'}` of length `3..=c(2^{c+1}+1)`
/// that start and end with `H_0` and contain `H_0'`, shortest first and, within
/// a length, by the binary counter of interior positions (`H_0'` = 1).
#[derive(Clone, Debug)]
pub struct Case3Vectors {
    h0: DecoratedGraph,
    h0p: DecoratedGraph,
    max_len: usize,
    interior: Vec<bool>,
    done: bool,
}

impl Case3Vectors {
    pub fn new(r: usize, k: usize) -> Result<Self> {
        let t = case_tag(r, k)?;
        let c = t.c.ok_or_else(|| invalid!("(r={r}, k={k}) is not in case three"))?;
        Ok(Case3Vectors {
            h0: h0(r, k)?,
            h0p: h0_prime(r, k)?,
            max_len: Self::length_cap(c),
            interior: vec![false],
            done: false,
        })
    }

    /// `c (2^{c+1} + 1)`, saturating.
    pub fn length_cap(c: usize) -> usize {
        let pow = 1usize
            .checked_shl(c as u32 + 1)
            .filter(|&p| p != 0)
            .unwrap_or(usize::MAX);
        c.saturating_mul(pow.saturating_add(1))
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Advances the interior counter; false once it wraps to all zeros.
    fn bump(bits: &mut [bool]) -> bool {
        for b in bits.iter_mut() {
            if *b {
                *b = false;
            } else {
                *b = true;
                return true;
            }
        }
        false
    }
}

impl Iterator for Case3Vectors {
    type Item = HVector;

    fn next(&mut self) -> Option<HVector> {
        if self.done {
            return None;
        }
        if !Self::bump(&mut self.interior) {
            let len = self.interior.len() + 2 + 1;
            if len > self.max_len {
                self.done = true;
                return None;
            }
            self.interior = vec![false; len - 2];
            self.interior[0] = true;
        }
        let mut e = Vec::with_capacity(self.interior.len() + 2);
        e.push(self.h0.clone());
        for &b in &self.interior {
            e.push(if b { self.h0p.clone() } else { self.h0.clone() });
        }
        e.push(self.h0.clone());
        Some(HVector::new(e).expect("nonempty"))
    }
}

/// The extremal graph with an independent set `A` and a set `B` complete to
/// everything.
#[derive(Clone, Debug)]
pub struct LowerBoundGraph {
    pub graph: Graph,
    /// Vertices `0..|B|`.
    pub b: Vec<usize>,
    /// Vertices `|B|..n`.
    pub a: Vec<usize>,
    /// `(1 - gamma)(1 - (k-1)/r) n` before rounding to the nearest integer.
    pub b_unrounded: f64,
}

pub fn lower_bound_graph(n: usize, r: usize, k: usize, gamma: f64) -> Result<LowerBoundGraph> {
    case_tag(r, k)?;
    if n == 0 || !n.is_multiple_of(r) {
        return Err(invalid!("r={r} must divide n={n}"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid!("gamma must lie in (0, 1), got {gamma}"));
    }
    let exact = (1.0 - gamma) * (1.0 - (k as f64 - 1.0) / r as f64) * n as f64;
    let b = libm::round(exact) as usize;
    if b == 0 || b > n {
        return Err(invalid!("|B| rounds to {b}, outside 1..={n}"));
    }
    let mut gb = GraphBuilder::new(n);
    for u in 0..b {
        for v in u + 1..n {
            gb.add_edge(u, v)?;
        }
    }
    Ok(LowerBoundGraph {
        graph: gb.build(),
        b: (0..b).collect(),
        a: (b..n).collect(),
        b_unrounded: exact,
    })
}

const COLOR_CAP: usize = 16;

fn masks(h: &Graph) -> Vec<u32> {
    (0..h.n())
        .map(|v| h.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect()
}

/// Can the vertices in `set` be properly coloured with `k` colours?
fn colourable(adj: &[u32], set: u32, k: usize) -> bool {
    let verts: Vec<usize> = (0..adj.len()).filter(|&v| set >> v & 1 == 1).collect();
    let mut classes = vec![0u32; k];
    fn go(adj: &[u32], verts: &[usize], i: usize, classes: &mut [u32], used: usize) -> bool {
        if i == verts.len() {
            return true;
        }
        let v = verts[i];
        let limit = (used + 1).min(classes.len());
        for c in 0..limit {
            if classes[c] & adj[v] == 0 {
                classes[c] |= 1 << v;
                let ok = go(adj, verts, i + 1, classes, used.max(c + 1));
                classes[c] &= !(1 << v);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    go(adj, &verts, 0, &mut classes, 0)
}

pub fn chromatic_number(h: &Graph) -> Result<usize> {
    if h.n() > COLOR_CAP {
        return Err(invalid!("colouring search capped at {COLOR_CAP} vertices"));
    }
    let adj = masks(h);
    let all = if h.n() == 32 { u32::MAX } else { (1u32 << h.n()) - 1 };
    Ok((0..=h.n()).find(|&k| colourable(&adj, all, k)).unwrap_or(h.n()))
}

/// Smallest colour class over proper colourings with `chi(h)` colours.
pub fn min_colour_class(h: &Graph) -> Result<usize> {
    let chi = chromatic_number(h)?;
    let n = h.n();
    if n == 0 {
        return Ok(0);
    }
    let adj = masks(h);
    let all = (1u32 << n) - 1;
    let mut subsets: Vec<u32> = (1..=all).collect();
    subsets.sort_by_key(|s| s.count_ones());
    for s in subsets {
        let independent = (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0);
        if independent && colourable(&adj, all & !s, chi - 1) {
            return Ok(s.count_ones() as usize);
        }
    }
    Err(crate::error::Error::Inconsistency("no colour class found".into()))
}

/// `(chi - 1) |H| / (|H| - sigma)` as an exact fraction.
///
/// For an edgeless nonempty graph the formula degenerates to `0/0`; we return
/// `chi = 1`, the common value for balanced colourings (`|H| = chi * sigma`),
/// which is what the `k = r` member of the `H_det` family needs.
pub fn chi_cr(h: &Graph) -> Result<Ratio<u64>> {
    if h.n() == 0 {
        return Err(invalid!("chi_cr of the empty graph is undefined"));
    }
    if h.edge_count() == 0 {
        return Ok(Ratio::from_integer(1));
    }
    let chi = chromatic_number(h)? as u64;
    let sigma = min_colour_class(h)? as u64;
    let n = h.n() as u64;
    Ok(Ratio::new((chi - 1) * n, n - sigma))
}
