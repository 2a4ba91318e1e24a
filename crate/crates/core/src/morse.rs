//! The lexicographical discrete Morse matching on a clique complex and the
//! resulting critical simplex counts.
//!
//! A clique `s` is paired with `s ∪ {min I(s)}`, where `I(s)` is the set of
//! vertices `j < min(s)` adjacent to every vertex of `s`. A clique is critical
//! when it is neither such a base nor such a coface. For `|s| >= 2` this is
//! `T = Σ_s Z_s (Y⁺_s − Y⁻_s)`, with `Z_s` the clique indicator, `Y⁺_s` the
//! indicator that `s` has no lower common neighbour and `Y⁻_s` the same for
//! `s` minus its least vertex.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{all_vertices_mask, below_mask, is_empty, CliqueWalker, Graph, Simplex};

/// A partial matching of simplices with their codimension-one cofaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(Simplex, Simplex)>,
}

impl Matching {
    /// Validates that every pair is (facet, coface) and that no simplex is
    /// used twice.
    pub fn new(pairs: Vec<(Simplex, Simplex)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (s, t) in &pairs {
            if t.len() != s.len() + 1 || !s.vertices().iter().all(|&v| t.contains(v)) {
                return Err(Error::InvalidMatching(format!(
                    "{s:?} is not a facet of {t:?}"
                )));
            }
            for x in [s, t] {
                if !seen.insert(x.clone()) {
                    return Err(Error::InvalidMatching(format!(
                        "{x:?} appears in two pairs"
                    )));
                }
            }
        }
        Ok(Matching { pairs })
    }

    pub fn pairs(&self) -> &[(Simplex, Simplex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Every simplex that belongs to some pair.
    pub fn matched(&self) -> HashSet<Simplex> {
        self.pairs
            .iter()
            .flat_map(|(s, t)| [s.clone(), t.clone()])
            .collect()
    }

    /// One `{a,b} -> {a,b,c}` line per pair.
    pub fn to_text(&self) -> String {
        self.pairs
            .iter()
            .map(|(s, t)| format!("{s:?} -> {t:?}\n"))
            .collect()
    }
}

/// Lowest internal vertex below `min(s)` adjacent to every vertex of `s`.
fn lowest_common_lower(g: &Graph, s: &[usize], scratch: &mut [u64]) -> Option<usize> {
    below_mask(s[0], scratch);
    for &v in s {
        for (c, r) in scratch.iter_mut().zip(g.row(v)) {
            *c &= r;
        }
    }
    crate::graph::bits(scratch).next()
}

/// Pairs `(s, s ∪ {min I(s)})` for every clique `s` with `|s| <= max_size`
/// and `I(s)` nonempty.
pub fn lex_matching(g: &Graph, max_size: usize) -> Result<Matching> {
    if max_size == 0 || max_size > g.n() {
        return Err(invalid(format!(
            "max_size {max_size} outside 1..={}",
            g.n()
        )));
    }
    let all = all_vertices_mask(g);
    let mut scratch = vec![0u64; g.words()];
    let mut pairs = Vec::new();
    for size in 1..=max_size {
        CliqueWalker::new(g, size).for_each(&all, &mut |s| {
            if let Some(j) = lowest_common_lower(g, s, &mut scratch) {
                let base = Simplex::from_sorted_internal(s);
                let coface = base.with(j + 1);
                pairs.push((base, coface));
            }
        });
    }
    debug_assert!(Matching::new(pairs.clone()).is_ok());
    Ok(Matching { pairs })
}

/// Critical simplex counts for sizes `2..=d+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalVector {
    counts: Vec<u64>,
}

impl CriticalVector {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count for simplices with `size` vertices.
    pub fn get(&self, size: usize) -> Option<u64> {
        size.checked_sub(2)
            .and_then(|i| self.counts.get(i))
            .copied()
    }
}

fn check_dimension(g: &Graph, d: usize) -> Result<()> {
    if d == 0 || d + 1 > g.n() {
        return Err(invalid(format!(
            "dimension {d} outside 1..={}",
            g.n().saturating_sub(1)
        )));
    }
    Ok(())
}

/// Critical counts read off the explicit matching: cliques of size
/// `2..=d+1` that appear in no pair.
pub fn critical_counts_direct(g: &Graph, d: usize) -> Result<CriticalVector> {
    check_dimension(g, d)?;
    let matching = lex_matching(g, (d + 2).min(g.n()))?;
    let matched = matching.matched();
    let counts = (2..=d + 1)
        .map(|size| {
            crate::graph::cliques(g, size)
                .into_iter()
                .filter(|s| !matched.contains(s))
                .count() as u64
        })
        .collect();
    Ok(CriticalVector { counts })
}

/// Critical counts from the indicator sum `Σ_s Z_s (Y⁺_s − Y⁻_s)`.
pub fn critical_counts_formula(g: &Graph, d: usize) -> Result<CriticalVector> {
    check_dimension(g, d)?;
    let all = all_vertices_mask(g);
    let counts = (2..=d + 1)
        .map(|size| indicator_sum(g, size, &all, usize::MAX))
        .collect();
    Ok(CriticalVector { counts })
}

/// Evaluate the indicator sum over cliques of one size with `min(s) < bound`
/// (internal labels), all inside `candidates`.
fn indicator_sum(g: &Graph, size: usize, candidates: &[u64], bound: usize) -> u64 {
    let mut scratch = vec![0u64; g.words()];
    let mut total: i64 = 0;
    CliqueWalker::new(g, size).for_each(candidates, &mut |s| {
        if s[0] >= bound {
            return;
        }
        // Y⁻: common lower neighbours of s minus its minimum, below min(s).
        below_mask(s[0], &mut scratch);
        for &v in &s[1..] {
            for (c, r) in scratch.iter_mut().zip(g.row(v)) {
                *c &= r;
            }
        }
        let y_minus = is_empty(&scratch) as i64;
        for (c, r) in scratch.iter_mut().zip(g.row(s[0])) {
            *c &= r;
        }
        let y_plus = is_empty(&scratch) as i64;
        total += y_plus - y_minus;
    });
    debug_assert!(total >= 0);
    total as u64
}

/// Critical count for simplices of `size` vertices restricted to those with
/// least vertex at most `threshold`.
pub fn truncated_critical_count(g: &Graph, size: usize, threshold: usize) -> Result<u64> {
    if size < 2 || size > g.n() {
        return Err(invalid(format!("size {size} outside 2..={}", g.n())));
    }
    if threshold == 0 || threshold > g.n() - size + 1 {
        return Err(invalid(format!(
            "threshold {threshold} outside 1..={}",
            g.n() - size + 1
        )));
    }
    Ok(indicator_sum(g, size, &all_vertices_mask(g), threshold))
}

/// Every unmatched clique with at most `max_size` vertices, by size then
/// lexicographically. The matching is built one size further so that
/// upward pairs at the top size are seen.
pub fn critical_simplices(g: &Graph, max_size: usize) -> Result<Vec<Simplex>> {
    if max_size == 0 || max_size > g.n() {
        return Err(invalid(format!(
            "max_size {max_size} outside 1..={}",
            g.n()
        )));
    }
    let matched = lex_matching(g, (max_size + 1).min(g.n()))?.matched();
    Ok((1..=max_size)
        .flat_map(|size| crate::graph::cliques(g, size))
        .filter(|s| !matched.contains(s))
        .collect())
}

/// Vertices that are critical: exactly those with no lower neighbour.
pub fn critical_vertices(g: &Graph) -> Vec<usize> {
    let mut scratch = vec![0u64; g.words()];
    (0..g.n())
        .filter(|&v| lowest_common_lower(g, &[v], &mut scratch).is_none())
        .map(|v| v + 1)
        .collect()
}

/// True when no closed gradient path exists.
///
/// Builds a digraph on pairs: `(s, t) -> (s', t')` when `s' != s` is a facet
/// of `t`. A closed path through the matching is exactly a directed cycle
/// here, since every simplex lies in at most one pair.
pub fn verify_acyclic(m: &Matching, g: &Graph) -> bool {
    debug_assert!(m.pairs().iter().all(|(_, t)| t.is_clique_in(g)));
    let index: HashMap<&Simplex, usize> = m
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (s, i))
        .collect();
    let succ: Vec<Vec<usize>> = m
        .pairs()
        .iter()
        .map(|(s, t)| {
            t.facets()
                .iter()
                .filter(|f| *f != s)
                .filter_map(|f| index.get(f).copied())
                .collect()
        })
        .collect();

    // Iterative three-colour depth-first search.
    let mut colour = vec![0u8; succ.len()];
    for root in 0..succ.len() {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&child) = succ[node].get(*next) {
                *next += 1;
                match colour[child] {
                    0 => {
                        colour[child] = 1;
                        stack.push((child, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                colour[node] = 2;
                stack.pop();
            }
        }
    }
    true
}
