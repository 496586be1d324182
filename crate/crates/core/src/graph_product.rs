//! Graph products of finite groups with canonical syllable normal forms.
//!
//! A word is reduced when no two syllables on the same vertex can be
//! shuffled next to each other. Reduced words for the same element differ
//! only by swapping adjacent commuting syllables, so the lexicographically
//! least linearization of the dependency order is a canonical form.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{FiniteGroup, GroupHom, MixedRadix};

/// Default cap on the number of elements enumerated in a ball.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("element {elem} out of range for vertex {vertex}")]
    ElementOutOfRange { vertex: usize, elem: usize },
    #[error("ball exceeds cap of {0} elements")]
    BallTooLarge(usize),
    #[error("invalid presentation: {0}")]
    Invalid(String),
}

/// A simplicial graph with a finite group at each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductPresentation {
    names: Vec<String>,
    adj: Vec<u64>,
    groups: Vec<FiniteGroup>,
}

impl ProductPresentation {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)], groups: Vec<FiniteGroup>) -> Result<Self, ProductError> {
        let n = names.len();
        if n > 64 {
            return Err(ProductError::Invalid("at most 64 vertices supported".into()));
        }
        if groups.len() != n {
            return Err(ProductError::Invalid("one group per vertex required".into()));
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(ProductError::UnknownVertex(format!("{}", a.max(b))));
            }
            if a == b {
                return Err(ProductError::Invalid(format!("loop at vertex {}", names[a])));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(ProductPresentation { names, adj, groups })
    }

    /// Vertices named `0..n`, each carrying the same group.
    pub fn uniform(n: usize, edges: &[(usize, usize)], group: FiniteGroup) -> Self {
        Self::new(
            (0..n).map(|i| i.to_string()).collect(),
            edges,
            vec![group; n],
        )
        .expect("valid uniform presentation")
    }

    /// The `n`-cycle graph with the same group at every vertex.
    pub fn cycle(n: usize, group: FiniteGroup) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::uniform(n, &edges, group)
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn group(&self, v: usize) -> &FiniteGroup {
        &self.groups[v]
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.num_vertices();
        (0..n)
            .flat_map(|a| ((a + 1)..n).filter(move |&b| self.adj[a] >> b & 1 == 1).map(move |b| (a, b)))
            .collect()
    }

    pub fn all_mask(&self) -> u64 {
        if self.num_vertices() == 64 {
            u64::MAX
        } else {
            (1u64 << self.num_vertices()) - 1
        }
    }

    /// `i⊥`: the neighbours of `i`.
    pub fn perp(&self, i: usize) -> u64 {
        self.adj[i]
    }

    /// `i⊥=`: `i` together with its neighbours.
    pub fn perp_eq(&self, i: usize) -> u64 {
        self.adj[i] | 1 << i
    }

    /// True when every pair of vertices in `mask` is adjacent.
    pub fn is_clique(&self, mask: u64) -> bool {
        mask_iter(mask).all(|v| mask & !(1 << v) & !self.adj[v] == 0)
    }

    /// All cliques of the graph (including the empty set), sorted by size then mask.
    pub fn cliques(&self) -> Vec<u64> {
        let mut out = vec![0u64];
        let mut frontier = vec![0u64];
        while !frontier.is_empty() {
            let mut next = BTreeSet::new();
            for &c in &frontier {
                let low = if c == 0 { 0 } else { 64 - c.leading_zeros() as usize };
                for v in low..self.num_vertices() {
                    if c & !self.adj[v] == 0 {
                        next.insert(c | 1 << v);
                    }
                }
            }
            frontier = next.into_iter().collect();
            out.extend(frontier.iter().copied());
        }
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }

    /// Builds the canonical form of a raw syllable list.
    pub fn normalize(&self, raw: &[(usize, usize)]) -> Result<NormalForm, ProductError> {
        for &(v, g) in raw {
            if v >= self.num_vertices() {
                return Err(ProductError::UnknownVertex(v.to_string()));
            }
            if g >= self.groups[v].order() {
                return Err(ProductError::ElementOutOfRange { vertex: v, elem: g });
            }
        }
        let mut w = Vec::with_capacity(raw.len());
        for &(v, g) in raw {
            self.push_reduced(&mut w, v, g);
        }
        Ok(self.canonical(w))
    }

    /// Appends a syllable to a reduced word, merging when possible.
    fn push_reduced(&self, w: &mut Vec<(usize, usize)>, v: usize, g: usize) {
        let grp = &self.groups[v];
        if g == grp.identity() {
            return;
        }
        for k in (0..w.len()).rev() {
            let u = w[k].0;
            if u == v {
                let merged = grp.mul(w[k].1, g);
                if merged == grp.identity() {
                    w.remove(k);
                } else {
                    w[k].1 = merged;
                }
                return;
            }
            if !self.adjacent(u, v) {
                break;
            }
        }
        w.push((v, g));
    }

    /// Lexicographically least linearization of a reduced word.
    fn canonical(&self, w: Vec<(usize, usize)>) -> NormalForm {
        let n = w.len();
        let mut taken = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<usize> = None;
            for j in 0..n {
                if taken[j] {
                    continue;
                }
                let free = (0..j).all(|i| taken[i] || self.adjacent(w[i].0, w[j].0));
                if free && best.is_none_or(|b| w[j] < w[b]) {
                    best = Some(j);
                }
            }
            let b = best.expect("some syllable is always free");
            taken[b] = true;
            out.push(w[b]);
        }
        NormalForm { syllables: out }
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm::default()
    }

    pub fn syllable(&self, v: usize, g: usize) -> NormalForm {
        self.normalize(&[(v, g)]).expect("syllable in range")
    }

    pub fn multiply(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut w = a.syllables.clone();
        for &(v, g) in &b.syllables {
            self.push_reduced(&mut w, v, g);
        }
        self.canonical(w)
    }

    pub fn multiply_syllable(&self, a: &NormalForm, v: usize, g: usize) -> NormalForm {
        let mut w = a.syllables.clone();
        self.push_reduced(&mut w, v, g);
        self.canonical(w)
    }

    pub fn inverse(&self, a: &NormalForm) -> NormalForm {
        let w: Vec<(usize, usize)> = a
            .syllables
            .iter()
            .rev()
            .map(|&(v, g)| (v, self.groups[v].inv(g)))
            .collect();
        self.canonical(w)
    }

    /// `a⁻¹ b`.
    pub fn quotient(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        self.multiply(&self.inverse(a), b)
    }

    /// The retraction onto the special subgroup on `mask`.
    pub fn retract(&self, mask: u64, a: &NormalForm) -> NormalForm {
        let mut w = Vec::new();
        for &(v, g) in &a.syllables {
            if mask >> v & 1 == 1 {
                self.push_reduced(&mut w, v, g);
            }
        }
        self.canonical(w)
    }

    /// Element of `G_i` obtained by retracting onto `{i}`.
    pub fn retract_vertex(&self, i: usize, a: &NormalForm) -> usize {
        let r = self.retract(1 << i, a);
        r.syllables.first().map_or(self.groups[i].identity(), |s| s.1)
    }

    /// Elements of syllable length at most `r`, sorted.
    pub fn enumerate_ball(&self, r: usize, cap: usize) -> Result<Vec<NormalForm>, ProductError> {
        self.enumerate_ball_in(self.all_mask(), r, cap)
    }

    /// Elements of the special subgroup on `mask` with length at most `r`.
    pub fn enumerate_ball_in(&self, mask: u64, r: usize, cap: usize) -> Result<Vec<NormalForm>, ProductError> {
        let mut seen: HashSet<NormalForm> = HashSet::from([NormalForm::default()]);
        let mut frontier = vec![NormalForm::default()];
        for len in 0..r {
            let mut next = Vec::new();
            for a in &frontier {
                for v in mask_iter(mask) {
                    let grp = &self.groups[v];
                    for g in 0..grp.order() {
                        if g == grp.identity() {
                            continue;
                        }
                        let b = self.multiply_syllable(a, v, g);
                        if b.len() == len + 1 && seen.insert(b.clone()) {
                            if seen.len() > cap {
                                return Err(ProductError::BallTooLarge(cap));
                            }
                            next.push(b);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let mut out: Vec<NormalForm> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// The map onto the direct product of the vertex groups.
    pub fn gamma0_hom(&self) -> GroupHom {
        let factors: Vec<&FiniteGroup> = self.groups.iter().collect();
        let target = FiniteGroup::direct_product(&factors);
        let radix = MixedRadix::new(self.groups.iter().map(|g| g.order()).collect());
        let base: Vec<usize> = self.groups.iter().map(|g| g.identity()).collect();
        let images = (0..self.num_vertices())
            .map(|v| {
                (0..self.groups[v].order())
                    .map(|g| {
                        let mut c = base.clone();
                        c[v] = g;
                        radix.encode(&c)
                    })
                    .collect()
            })
            .collect();
        GroupHom::from_graph_product(self, target, images).expect("direct product map is a homomorphism")
    }

    pub fn format_word(&self, w: &NormalForm) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.syllables
            .iter()
            .map(|&(v, g)| format!("{}:{}", self.names[v], self.groups[v].label(g)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Iterates the set bits of a mask in increasing order.
pub fn mask_iter(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Canonical syllable word. Ordered by length, then lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalForm {
    syllables: Vec<(usize, usize)>,
}

impl NormalForm {
    pub fn syllables(&self) -> &[(usize, usize)] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Bitmask of the vertices that occur.
    pub fn support(&self) -> u64 {
        self.syllables.iter().fold(0, |m, &(v, _)| m | 1 << v)
    }
}

impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.syllables.cmp(&other.syllables))
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of syllables of the canonical form.
pub fn syllable_length(a: &NormalForm) -> usize {
    a.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_z2() -> ProductPresentation {
        ProductPresentation::uniform(2, &[(0, 1)], FiniteGroup::cyclic(2))
    }

    fn free_z2_z3() -> ProductPresentation {
        ProductPresentation::new(
            vec!["s".into(), "t".into()],
            &[],
            vec![FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)],
        )
        .unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p = edge_z2();
        assert_eq!(p.normalize(&[(1, 1), (0, 1)]).unwrap().syllables(), &[(0, 1), (1, 1)]);
        assert_eq!(p.normalize(&[(0, 1), (1, 1), (0, 1)]).unwrap().syllables(), &[(1, 1)]);
        let q = ProductPresentation::uniform(2, &[], FiniteGroup::cyclic(2));
        assert!(q.normalize(&[(0, 1), (0, 1)]).unwrap().is_empty());
        assert_eq!(
            p.normalize(&[(2, 1)]),
            Err(ProductError::UnknownVertex("2".into()))
        );
        assert_eq!(
            p.normalize(&[(0, 2)]),
            Err(ProductError::ElementOutOfRange { vertex: 0, elem: 2 })
        );
    }

    #[test]
    fn multiply_examples() {
        let p = free_z2_z3();
        let s = p.syllable(0, 1);
        let t = p.syllable(1, 1);
        assert_eq!(p.multiply(&s, &t).len(), 2);
        let st = p.normalize(&[(0, 1), (1, 1)]).unwrap();
        let t2s = p.normalize(&[(1, 2), (0, 1)]).unwrap();
        assert!(p.multiply(&st, &t2s).is_empty());
        assert!(p.multiply(&st, &p.inverse(&st)).is_empty());
    }

    #[test]
    fn retract_examples() {
        let p = ProductPresentation::uniform(2, &[], FiniteGroup::cyclic(2));
        let w = p.normalize(&[(0, 1), (1, 1), (0, 1)]).unwrap();
        assert!(p.retract(0b01, &w).is_empty());
        assert_eq!(p.retract(0b10, &w).syllables(), &[(1, 1)]);
        assert_eq!(p.retract(0b11, &w), w);
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(free_z2_z3().enumerate_ball(2, DEFAULT_BALL_CAP).unwrap().len(), 8);
        assert_eq!(edge_z2().enumerate_ball(2, DEFAULT_BALL_CAP).unwrap().len(), 4);
        assert_eq!(edge_z2().enumerate_ball(0, DEFAULT_BALL_CAP).unwrap().len(), 1);
        assert_eq!(
            free_z2_z3().enumerate_ball(6, 10),
            Err(ProductError::BallTooLarge(10))
        );
    }

    #[test]
    fn gamma0_examples() {
        let p = ProductPresentation::cycle(6, FiniteGroup::cyclic(2));
        assert_eq!(p.gamma0_hom().target().order(), 64);
        let q = ProductPresentation::uniform(2, &[], FiniteGroup::cyclic(2));
        let h = q.gamma0_hom();
        let w = q.normalize(&[(0, 1), (1, 1), (0, 1)]).unwrap();
        let radix = MixedRadix::new(vec![2, 2]);
        assert_eq!(radix.decode(h.eval_word(&w)), vec![0, 1]);
    }

    #[test]
    fn cliques_of_cycle() {
        let p = ProductPresentation::cycle(6, FiniteGroup::cyclic(2));
        let c = p.cliques();
        assert_eq!(c.len(), 13);
        assert!(p.is_clique(0b11));
        assert!(!p.is_clique(0b101));
    }
}
