//! Simple graphs on `[n] = {1, ..., n}`, G(n, p) sampling, exhaustive
//! enumeration and clique / link counting.
//!
//! Vertex labels are 1-based in the public API. Internally each adjacency row
//! is a multiword `u64` bitset so that clique enumeration reduces to mask
//! intersections.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by [`all_graphs`] (2^15 graphs).
pub const ENUMERATION_CAP: usize = 6;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Iterate the set bits of a multiword mask in increasing order.
pub(crate) fn bits(mask: &[u64]) -> impl Iterator<Item = usize> + '_ {
    mask.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            }
        })
    })
}

#[inline]
pub(crate) fn popcount(mask: &[u64]) -> u64 {
    mask.iter().map(|w| w.count_ones() as u64).sum()
}

#[inline]
pub(crate) fn is_empty(mask: &[u64]) -> bool {
    mask.iter().all(|&w| w == 0)
}

/// Write into `out` the mask of internal vertices strictly below `v`.
pub(crate) fn below_mask(v: usize, out: &mut [u64]) {
    for (w, word) in out.iter_mut().enumerate() {
        let lo = w * 64;
        *word = if v >= lo + 64 {
            u64::MAX
        } else if v <= lo {
            0
        } else {
            (1u64 << (v - lo)) - 1
        };
    }
}

/// An undirected simple graph on `n` labelled vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..=n {
            for j in i + 1..=n {
                g.insert(i - 1, j - 1);
            }
        }
        g
    }

    /// Build from 1-based edge pairs. Loops and out-of-range labels are errors;
    /// repeated edges are accepted once.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(invalid(format!("edge ({i}, {j}) outside 1..={n}")));
            }
            if i == j {
                return Err(invalid(format!("loop at vertex {i}")));
            }
            g.insert(i - 1, j - 1);
        }
        Ok(g)
    }

    /// Graph number `mask` in edge-bitmask order: bit `b` is the `b`-th pair
    /// of `(1,2), (1,3), ..., (1,n), (2,3), ...`.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        let mut b = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> b & 1 == 1 {
                    g.insert(i, j);
                }
                b += 1;
            }
        }
        g
    }

    #[inline]
    fn insert(&mut self, i: usize, j: usize) {
        let w = self.words;
        self.rows[i * w + j / 64] |= 1 << (j % 64);
        self.rows[j * w + i / 64] |= 1 << (i % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge test on 1-based labels. Out-of-range labels and loops are `false`.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == 0 || j == 0 || i > self.n || j > self.n || i == j {
            return false;
        }
        self.has_edge0(i - 1, j - 1)
    }

    #[inline]
    pub(crate) fn has_edge0(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    /// Adjacency row of internal (0-based) vertex `v`.
    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn edge_count(&self) -> usize {
        (popcount(&self.rows) / 2) as usize
    }

    /// Edges as 1-based pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in bits(self.row(i)).filter(|&j| j > i) {
                out.push((i + 1, j + 1));
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        popcount(self.row(v - 1)) as usize
    }

    /// Text form: first line `n`, then one `i j` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (i, j) in self.edges() {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }

    /// Inverse of [`Graph::to_text`]. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n: usize = first.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected vertex count, got `{first}`"),
        })?;
        let mut edges = Vec::new();
        for (line, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad vertex `{s}`"),
                })
            };
            match parts.as_slice() {
                [a, b] => edges.push((parse(a)?, parse(b)?)),
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected `i j`, got `{l}`"),
                    })
                }
            }
        }
        Graph::from_edges(n, &edges).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A nonempty, strictly increasing set of 1-based vertex labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts and deduplicates; rejects empty input and label 0.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(invalid("simplex must be nonempty"));
        }
        if vertices[0] == 0 {
            return Err(invalid("vertex labels start at 1"));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted_internal(v: &[usize]) -> Self {
        Simplex(v.iter().map(|&x| x + 1).collect())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_vertex(&self) -> usize {
        self.0[0]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Union with a vertex not already present.
    pub fn with(&self, v: usize) -> Simplex {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Simplex(out)
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect(),
                )
            })
            .collect()
    }

    pub fn is_clique_in(&self, g: &Graph) -> bool {
        self.0.iter().all(|&v| v >= 1 && v <= g.n())
            && self
                .0
                .iter()
                .enumerate()
                .all(|(a, &u)| self.0[a + 1..].iter().all(|&v| g.has_edge(u, v)))
    }
}

impl TryFrom<Vec<usize>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<usize> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Parameters of one G(n, p) draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnpParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        check_probability(p)?;
        Ok(GnpParams { n, p, seed })
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Integer threshold so that `next_u64() < threshold` has probability `p`.
/// `None` means every edge is present.
fn edge_threshold(p: f64) -> Option<u64> {
    if p >= 1.0 {
        None
    } else {
        // p * 2^64 < 2^64 for p < 1; the cast floors.
        Some((p * 18_446_744_073_709_551_616.0) as u64)
    }
}

/// Draw from G(n, p) with a caller-provided generator. Edges are decided in
/// lexicographic pair order, one `next_u64` per pair.
pub fn sample_gnp_with<R: RngCore + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    let Some(t) = edge_threshold(p) else {
        for i in 0..n {
            for j in i + 1..n {
                g.insert(i, j);
            }
        }
        return g;
    };
    let w = g.words;
    // Branch-free: a coin flip at p = 1/2 defeats the branch predictor.
    for i in 0..n {
        for j in i + 1..n {
            let bit = (rng.next_u64() < t) as u64;
            g.rows[i * w + j / 64] |= bit << (j % 64);
            g.rows[j * w + i / 64] |= bit << (i % 64);
        }
    }
    g
}

/// Draw from G(n, p) with a ChaCha8 generator seeded from `params.seed`.
pub fn sample_gnp(params: &GnpParams) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    sample_gnp_with(&mut rng, params.n, params.p)
}

/// All 2^C(n,2) graphs on `n <= 6` vertices in edge-bitmask order.
pub fn all_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let pairs = n * n.saturating_sub(1) / 2;
    Ok((0u64..1 << pairs).map(move |m| Graph::from_edge_mask(n, m)))
}

/// Number of vertex pairs `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// P(G(n, p) = g) = p^e (1-p)^(C(n,2)-e), with 0^0 = 1.
pub fn graph_probability(g: &Graph, p: f64) -> f64 {
    let e = g.edge_count();
    let non = pair_count(g.n()) - e;
    pow_count(p, e) * pow_count(1.0 - p, non)
}

fn pow_count(base: f64, e: usize) -> f64 {
    if e == 0 {
        1.0
    } else if e > 1000 {
        (e as f64 * base.ln()).exp()
    } else {
        base.powi(e as i32)
    }
}

/// Depth-first walk over the cliques of one size inside a candidate mask.
/// The callback receives the clique as sorted internal vertices.
pub(crate) struct CliqueWalker<'g> {
    g: &'g Graph,
    size: usize,
    bufs: Vec<Vec<u64>>,
    chosen: Vec<usize>,
}

impl<'g> CliqueWalker<'g> {
    pub(crate) fn new(g: &'g Graph, size: usize) -> Self {
        CliqueWalker {
            g,
            size,
            bufs: vec![vec![0; g.words()]; size + 1],
            chosen: Vec::with_capacity(size),
        }
    }

    pub(crate) fn for_each(&mut self, candidates: &[u64], f: &mut dyn FnMut(&[usize])) {
        if self.size == 0 {
            return;
        }
        self.bufs[0].copy_from_slice(candidates);
        self.walk(0, f);
    }

    fn walk(&mut self, depth: usize, f: &mut dyn FnMut(&[usize])) {
        let remaining = self.size - depth;
        if popcount(&self.bufs[depth]) < remaining as u64 {
            return;
        }
        let cand = std::mem::take(&mut self.bufs[depth]);
        for v in bits(&cand) {
            self.chosen.push(v);
            if remaining == 1 {
                f(&self.chosen);
            } else {
                let row = self.g.row(v);
                let next = &mut self.bufs[depth + 1];
                for (w, slot) in next.iter_mut().enumerate() {
                    let above = if (w + 1) * 64 <= v + 1 {
                        0
                    } else if w * 64 > v {
                        u64::MAX
                    } else {
                        !((2u64 << (v - w * 64)) - 1)
                    };
                    *slot = cand[w] & row[w] & above;
                }
                self.walk(depth + 1, f);
            }
            self.chosen.pop();
        }
        self.bufs[depth] = cand;
    }

    /// Count cliques without materialising the last level.
    pub(crate) fn count(&mut self, candidates: &[u64]) -> u64 {
        match self.size {
            0 => 0,
            1 => popcount(candidates),
            _ => {
                self.bufs[0].copy_from_slice(candidates);
                self.count_at(0)
            }
        }
    }

    fn count_at(&mut self, depth: usize) -> u64 {
        let remaining = self.size - depth;
        if popcount(&self.bufs[depth]) < remaining as u64 {
            return 0;
        }
        let cand = std::mem::take(&mut self.bufs[depth]);
        let mut total = 0;
        for v in bits(&cand) {
            let row = self.g.row(v);
            let next = &mut self.bufs[depth + 1];
            for (w, slot) in next.iter_mut().enumerate() {
                let above = if (w + 1) * 64 <= v + 1 {
                    0
                } else if w * 64 > v {
                    u64::MAX
                } else {
                    !((2u64 << (v - w * 64)) - 1)
                };
                *slot = cand[w] & row[w] & above;
            }
            total += if remaining == 2 {
                popcount(&self.bufs[depth + 1])
            } else {
                self.count_at(depth + 1)
            };
        }
        self.bufs[depth] = cand;
        total
    }
}

pub(crate) fn all_vertices_mask(g: &Graph) -> Vec<u64> {
    let mut m = vec![0u64; g.words()];
    below_mask(g.n(), &mut m);
    m
}

/// All cliques with exactly `k` vertices, in lexicographic order.
pub fn cliques(g: &Graph, k: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    CliqueWalker::new(g, k).for_each(&all_vertices_mask(g), &mut |c| {
        out.push(Simplex::from_sorted_internal(c))
    });
    out
}

/// Number of cliques with exactly `k` vertices.
pub fn clique_count(g: &Graph, k: usize) -> u64 {
    CliqueWalker::new(g, k).count(&all_vertices_mask(g))
}

/// Number of `k`-vertex sets `s`, disjoint from `t`, that are cliques and are
/// completely joined to every vertex of `t`. When `t` is a clique these are
/// exactly the `(k-1)`-simplices of the link of `t`; `t` itself need not be a
/// clique.
pub fn link_count(g: &Graph, t: &Simplex, k: usize) -> Result<u64> {
    if t.vertices().iter().any(|&v| v > g.n()) {
        return Err(invalid(format!(
            "link base {t:?} has a vertex outside 1..={}",
            g.n()
        )));
    }
    if k == 0 {
        return Err(invalid("link simplex size must be at least 1"));
    }
    let mut common = all_vertices_mask(g);
    for &v in t.vertices() {
        for (c, r) in common.iter_mut().zip(g.row(v - 1)) {
            *c &= r;
        }
    }
    // A vertex of t is never adjacent to itself, so it drops out of `common`.
    Ok(CliqueWalker::new(g, k).count(&common))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_vertex() -> Graph {
        Graph::from_edges(5, &[(1, 2), (1, 4), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    #[test]
    fn edge_mask_order_matches_pair_order() {
        let g = Graph::from_edge_mask(4, 0b100001);
        assert_eq!(g.edges(), vec![(1, 2), (3, 4)]);
        assert_eq!(all_graphs(4).unwrap().count(), 64);
        assert!(matches!(
            all_graphs(7),
            Err(Error::CapExceeded { n: 7, cap: 6 })
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = five_vertex();
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(Graph::parse("3\n1 1\n").is_err());
        assert!(Graph::parse("3\n1 4\n").is_err());
        assert!(Graph::parse("").is_err());
    }

    #[test]
    fn clique_counts_on_small_graphs() {
        let k4 = Graph::complete(4);
        assert_eq!(clique_count(&k4, 2), 6);
        assert_eq!(clique_count(&k4, 3), 4);
        assert_eq!(clique_count(&k4, 4), 1);
        let g = five_vertex();
        assert_eq!(cliques(&g, 3), vec![Simplex::new(vec![3, 4, 5]).unwrap()]);
        assert_eq!(clique_count(&g, 2), 6);
    }

    #[test]
    fn cliques_past_one_word() {
        let g = Graph::complete(130);
        assert_eq!(clique_count(&g, 2), 130 * 129 / 2);
        assert_eq!(clique_count(&g, 3), 130 * 129 * 128 / 6);
        assert_eq!(cliques(&g, 1).len(), 130);
    }

    #[test]
    fn link_counts() {
        let k4 = Graph::complete(4);
        let t = Simplex::new(vec![1]).unwrap();
        assert_eq!(link_count(&k4, &t, 1).unwrap(), 3);
        assert_eq!(link_count(&k4, &t, 2).unwrap(), 3);
        assert_eq!(link_count(&k4, &t, 3).unwrap(), 1);
        assert!(link_count(&k4, &Simplex::new(vec![5]).unwrap(), 1).is_err());
        // t = {1,3} is not an edge in the path 1-2-3; vertex 2 still counts.
        let path = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(
            link_count(&path, &Simplex::new(vec![1, 3]).unwrap(), 1).unwrap(),
            1
        );
    }

    #[test]
    fn sampling_extremes_and_determinism() {
        let full = sample_gnp(&GnpParams::new(10, 1.0, 3).unwrap());
        assert_eq!(full.edge_count(), 45);
        let none = sample_gnp(&GnpParams::new(10, 0.0, 3).unwrap());
        assert_eq!(none.edge_count(), 0);
        let a = sample_gnp(&GnpParams::new(30, 0.4, 11).unwrap());
        let b = sample_gnp(&GnpParams::new(30, 0.4, 11).unwrap());
        assert_eq!(a, b);
        assert!(GnpParams::new(3, 1.5, 0).is_err());
    }

    #[test]
    fn probabilities_sum_to_one() {
        for p in [0.0, 0.3, 1.0] {
            let total: f64 = all_graphs(4)
                .unwrap()
                .map(|g| graph_probability(&g, p))
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "p={p} total={total}");
        }
    }

    #[test]
    fn simplex_normalises() {
        let s = Simplex::new(vec![3, 1, 3]).unwrap();
        assert_eq!(s.vertices(), &[1, 3]);
        assert_eq!(s.with(2).vertices(), &[1, 2, 3]);
        assert_eq!(s.facets().len(), 2);
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![0, 2]).is_err());
    }
}
