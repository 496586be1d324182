//! Coxeter systems from a weighted graph, the word problem, and balls or
//! finite quotients of the associated two-dimensional Davis complex.
//!
//! A block is identified with the group element that carries the base block
//! to it. Rank-1 vertices are edges `{w, w s_i}` and rank-2 vertices are
//! cosets `w W_ij`, which become the polygons of the extracted complex.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, RwLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupHom;
use crate::polygonal::{Polygon, PolygonalComplex};

/// Default cap on canonical word length.
pub const DEFAULT_WORD_CAP: usize = 20;
/// Default cap on the number of blocks in a ball.
pub const DEFAULT_BLOCK_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DavisError {
    #[error("weight {0} on edge ({1}, {2}) is below 2")]
    InvalidWeight(u32, usize, usize),
    #[error("unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("reduced word exceeds length cap {0}")]
    WordTooLong(usize),
    #[error("not two-dimensional: the triple {0:?} generates a finite group")]
    NotTwoDimensional([usize; 3]),
    #[error("ball exceeds cap of {0} blocks")]
    BallTooLarge(usize),
    #[error("element is not a reflection")]
    NotAReflection,
    #[error("quotient invalid: {0}")]
    BadQuotient(String),
}

type ClassMemo = HashMap<Vec<usize>, Arc<BraidClass>>;

#[derive(Debug)]
struct BraidClass {
    canonical: Vec<usize>,
    members: Vec<Vec<usize>>,
}

/// A graph with integer weights >= 2 on its edges; non-edges carry infinity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoxeterData {
    names: Vec<String>,
    m: Vec<Vec<Option<u32>>>,
    #[serde(skip)]
    memo: Arc<RwLock<ClassMemo>>,
    #[serde(skip, default = "default_cap")]
    word_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_WORD_CAP
}

impl PartialEq for CoxeterData {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.m == other.m
    }
}

/// Canonical Coxeter element: shortlex-least reduced word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoxWord(pub Vec<usize>);

impl CoxWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }
}

impl Ord for CoxWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for CoxWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CoxeterData {
    pub fn new(names: Vec<String>, weights: &[(usize, usize, u32)]) -> Result<Self, DavisError> {
        let n = names.len();
        let mut m = vec![vec![None; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Some(1);
        }
        for &(a, b, w) in weights {
            if a >= n || b >= n || a == b {
                return Err(DavisError::UnknownGenerator(a.max(b)));
            }
            if w < 2 {
                return Err(DavisError::InvalidWeight(w, a, b));
            }
            m[a][b] = Some(w);
            m[b][a] = Some(w);
        }
        Ok(CoxeterData {
            names,
            m,
            memo: Arc::default(),
            word_cap: DEFAULT_WORD_CAP,
        })
    }

    /// The `n`-cycle with constant weight.
    pub fn cycle(n: usize, weight: u32) -> Self {
        let w: Vec<(usize, usize, u32)> = (0..n).map(|i| (i, (i + 1) % n, weight)).collect();
        Self::new((0..n).map(|i| i.to_string()).collect(), &w).expect("valid cycle")
    }

    pub fn with_word_cap(mut self, cap: usize) -> Self {
        self.word_cap = cap;
        self.memo = Arc::default();
        self
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `m_ij`, with `None` for infinity.
    pub fn m(&self, i: usize, j: usize) -> Option<u32> {
        self.m[i][j]
    }

    /// Edges of `L` with their weights, `a < b`.
    pub fn finite_edges(&self) -> Vec<(usize, usize, u32)> {
        let n = self.num_generators();
        let mut out = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if let Some(w) = self.m[a][b] {
                    out.push((a, b, w));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.num_generators())
            .filter(|&j| j != i && self.m[i][j].is_some())
            .collect()
    }

    /// Length of the shortest cycle in `L`, if any.
    pub fn girth(&self) -> Option<usize> {
        let n = self.num_generators();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for v in self.neighbors(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        q.push_back(v);
                    } else if parent[u] != v {
                        let c = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(c, |b| b.min(c)));
                    }
                }
            }
        }
        best
    }

    /// Every triple generates an infinite group; otherwise returns a finite triple.
    pub fn is_two_dimensional(&self) -> (bool, Option<[usize; 3]>) {
        let n = self.num_generators();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let (Some(x), Some(y), Some(z)) = (self.m[a][b], self.m[b][c], self.m[a][c]) else {
                        continue;
                    };
                    let sum = Ratio::new(1, x as i64) + Ratio::new(1, y as i64) + Ratio::new(1, z as i64);
                    if sum > Ratio::from_integer(1) {
                        return (false, Some([a, b, c]));
                    }
                }
            }
        }
        (true, None)
    }

    /// All words reachable from a reduced word by braid moves.
    fn braid_class(&self, w: &[usize]) -> Arc<BraidClass> {
        if let Some(c) = self.memo.read().expect("memo lock").get(w) {
            return Arc::clone(c);
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([w.to_vec()]);
        let mut queue = VecDeque::from([w.to_vec()]);
        while let Some(u) = queue.pop_front() {
            for k in 0..u.len() {
                if k + 1 >= u.len() {
                    break;
                }
                let (s, t) = (u[k], u[k + 1]);
                if s == t {
                    continue;
                }
                let Some(m) = self.m[s][t] else { continue };
                let m = m as usize;
                if k + m > u.len() {
                    continue;
                }
                let alternating = (0..m).all(|j| u[k + j] == if j % 2 == 0 { s } else { t });
                if !alternating {
                    continue;
                }
                let mut v = u.clone();
                for j in 0..m {
                    v[k + j] = if j % 2 == 0 { t } else { s };
                }
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
        let members: Vec<Vec<usize>> = seen.into_iter().collect();
        let canonical = members
            .iter()
            .min()
            .cloned()
            .unwrap_or_default();
        let class = Arc::new(BraidClass { canonical, members });
        let mut memo = self.memo.write().expect("memo lock");
        for mbr in &class.members {
            memo.insert(mbr.clone(), Arc::clone(&class));
        }
        class
    }

    /// Canonical form of a word.
    pub fn cox_normalize(&self, letters: &[usize]) -> Result<CoxWord, DavisError> {
        let mut w: Vec<usize> = Vec::new();
        for &s in letters {
            w = self.right_multiply(&w, s)?;
        }
        Ok(CoxWord(w))
    }

    /// `w s` for a canonical `w`.
    fn right_multiply(&self, w: &[usize], s: usize) -> Result<Vec<usize>, DavisError> {
        if s >= self.num_generators() {
            return Err(DavisError::UnknownGenerator(s));
        }
        let class = self.braid_class(w);
        if let Some(mbr) = class.members.iter().find(|m| m.last() == Some(&s)) {
            let shorter = &mbr[..mbr.len() - 1];
            return Ok(self.braid_class(shorter).canonical.clone());
        }
        if w.len() + 1 > self.word_cap {
            return Err(DavisError::WordTooLong(self.word_cap));
        }
        let mut v = w.to_vec();
        v.push(s);
        Ok(self.braid_class(&v).canonical.clone())
    }

    /// True when `s` is a right descent of `w` (some reduced word ends in `s`).
    pub fn is_right_descent(&self, w: &CoxWord, s: usize) -> bool {
        self.braid_class(&w.0).members.iter().any(|m| m.last() == Some(&s))
    }

    pub fn multiply(&self, a: &CoxWord, b: &CoxWord) -> Result<CoxWord, DavisError> {
        let mut w = a.0.clone();
        for &s in &b.0 {
            w = self.right_multiply(&w, s)?;
        }
        Ok(CoxWord(w))
    }

    pub fn generator(&self, s: usize) -> CoxWord {
        CoxWord(vec![s])
    }

    pub fn inverse(&self, a: &CoxWord) -> CoxWord {
        let rev: Vec<usize> = a.0.iter().rev().copied().collect();
        CoxWord(self.braid_class(&rev).canonical.clone())
    }

    /// `u s u⁻¹`.
    pub fn conjugate_generator(&self, u: &CoxWord, s: usize) -> Result<CoxWord, DavisError> {
        let us = self.multiply(u, &self.generator(s))?;
        self.multiply(&us, &self.inverse(u))
    }

    /// Elements of length at most `r`, shortlex sorted.
    pub fn enumerate_ball(&self, r: usize, cap: usize) -> Result<Vec<CoxWord>, DavisError> {
        let mut seen: BTreeSet<CoxWord> = BTreeSet::from([CoxWord::default()]);
        let mut frontier = vec![CoxWord::default()];
        for len in 0..r {
            let mut next = Vec::new();
            for w in &frontier {
                for s in 0..self.num_generators() {
                    if self.is_right_descent(w, s) {
                        continue;
                    }
                    let v = CoxWord(self.right_multiply(&w.0, s)?);
                    debug_assert_eq!(v.len(), len + 1);
                    if seen.insert(v.clone()) {
                        if seen.len() > cap {
                            return Err(DavisError::BallTooLarge(cap));
                        }
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        Ok(seen.into_iter().collect())
    }
}

/// Blocks of a Davis complex region with their facet neighbours. Either a
/// ball of group elements or the blocks of a finite quotient.
#[derive(Debug, Clone)]
pub struct BlockComplex {
    data: CoxeterData,
    /// `neighbor[b][i]` is the block across facet `i` of `b`.
    neighbor: Vec<Vec<Option<usize>>>,
    kind: BlockKind,
}

#[derive(Debug, Clone)]
enum BlockKind {
    Ball { words: Vec<CoxWord>, index: HashMap<CoxWord, usize>, radius: usize },
    Quotient { hom: Box<GroupHom>, elements: Vec<usize> },
}

/// A complete polygon of the block complex: the `2m` blocks of a coset
/// `b W_ij` in cyclic order, starting at the least block and stepping first
/// along the smaller type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPolygon {
    pub types: (usize, usize),
    pub blocks: Vec<usize>,
}

impl BlockPolygon {
    /// Type of the `k`-th boundary edge (from `blocks[k]` to `blocks[k+1]`).
    pub fn edge_type(&self, k: usize) -> usize {
        if k % 2 == 0 {
            self.types.0
        } else {
            self.types.1
        }
    }

    pub fn sides(&self) -> usize {
        self.blocks.len()
    }
}

/// Edge of the extracted complex: blocks `{a, b}` across facet `ty`, oriented `a -> b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockEdge {
    pub from: usize,
    pub to: usize,
    pub ty: usize,
}

/// The extracted polygonal complex with its block bookkeeping.
#[derive(Debug, Clone)]
pub struct ExtractedX {
    pub complex: PolygonalComplex,
    pub edges: Vec<BlockEdge>,
    /// `edge_of[b][i]` is the edge index across facet `i` of block `b`.
    pub edge_of: Vec<Vec<Option<usize>>>,
    pub polygons: Vec<BlockPolygon>,
}

impl BlockComplex {
    /// Ball of blocks `w B` with `ℓ(w) <= r`.
    pub fn ball(data: &CoxeterData, r: usize, cap: usize) -> Result<Self, DavisError> {
        if let (false, Some(t)) = data.is_two_dimensional() {
            return Err(DavisError::NotTwoDimensional(t));
        }
        let words = data.enumerate_ball(r, cap)?;
        let index: HashMap<CoxWord, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut neighbor = Vec::with_capacity(words.len());
        for w in &words {
            let row = (0..data.num_generators())
                .map(|s| {
                    let v = CoxWord(data.right_multiply(&w.0, s).ok()?);
                    index.get(&v).copied()
                })
                .collect();
            neighbor.push(row);
        }
        Ok(BlockComplex {
            data: data.clone(),
            neighbor,
            kind: BlockKind::Ball { words, index, radius: r },
        })
    }

    /// Blocks of the quotient by the kernel of `hom`, one per element of its image.
    pub fn quotient(data: &CoxeterData, hom: &GroupHom) -> Result<Self, DavisError> {
        if let (false, Some(t)) = data.is_two_dimensional() {
            return Err(DavisError::NotTwoDimensional(t));
        }
        let q = hom.target();
        let gens: Vec<usize> = (0..data.num_generators()).map(|s| hom.eval_letters(&[s])).collect();
        if gens.iter().any(|&g| g == q.identity()) {
            return Err(DavisError::BadQuotient("a generator maps to the identity".into()));
        }
        let elements: Vec<usize> = hom.image().into_iter().collect();
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let neighbor = elements
            .iter()
            .map(|&e| gens.iter().map(|&g| Some(pos[&q.mul(e, g)])).collect())
            .collect();
        Ok(BlockComplex {
            data: data.clone(),
            neighbor,
            kind: BlockKind::Quotient {
                hom: Box::new(hom.clone()),
                elements,
            },
        })
    }

    pub fn data(&self) -> &CoxeterData {
        &self.data
    }

    pub fn num_blocks(&self) -> usize {
        self.neighbor.len()
    }

    pub fn neighbor(&self, b: usize, i: usize) -> Option<usize> {
        self.neighbor[b][i]
    }

    pub fn is_quotient(&self) -> bool {
        matches!(self.kind, BlockKind::Quotient { .. })
    }

    pub fn radius(&self) -> Option<usize> {
        match &self.kind {
            BlockKind::Ball { radius, .. } => Some(*radius),
            BlockKind::Quotient { .. } => None,
        }
    }

    /// Group element of a ball block.
    pub fn word(&self, b: usize) -> Option<&CoxWord> {
        match &self.kind {
            BlockKind::Ball { words, .. } => words.get(b),
            BlockKind::Quotient { .. } => None,
        }
    }

    pub fn block_of_word(&self, w: &CoxWord) -> Option<usize> {
        match &self.kind {
            BlockKind::Ball { index, .. } => index.get(w).copied(),
            BlockKind::Quotient { hom, elements } => {
                let e = hom.eval_letters(w.letters());
                elements.iter().position(|&x| x == e)
            }
        }
    }

    /// Quotient element of a quotient block.
    pub fn element(&self, b: usize) -> Option<usize> {
        match &self.kind {
            BlockKind::Quotient { elements, .. } => elements.get(b).copied(),
            BlockKind::Ball { .. } => None,
        }
    }

    pub fn quotient_hom(&self) -> Option<&GroupHom> {
        match &self.kind {
            BlockKind::Quotient { hom, .. } => Some(hom),
            BlockKind::Ball { .. } => None,
        }
    }

    /// Walks `b, b s_i, b s_i s_j, ...` for `steps` steps; `None` when it leaves the region.
    pub fn alternating_walk(&self, b: usize, i: usize, j: usize, steps: usize) -> Option<Vec<usize>> {
        let mut out = vec![b];
        let mut cur = b;
        for k in 0..steps {
            let t = if k % 2 == 0 { i } else { j };
            cur = self.neighbor[cur][t]?;
            out.push(cur);
        }
        Some(out)
    }

    /// Complete polygons (rank-2 cosets fully inside the region).
    pub fn polygons(&self) -> Vec<BlockPolygon> {
        let mut out = Vec::new();
        for (i, j, m) in self.data.finite_edges() {
            let steps = 2 * m as usize;
            for b in 0..self.num_blocks() {
                let Some(walk) = self.alternating_walk(b, i, j, steps) else { continue };
                if walk[steps] != b {
                    continue;
                }
                let cyc = &walk[..steps];
                let distinct: BTreeSet<usize> = cyc.iter().copied().collect();
                if distinct.len() != steps {
                    continue;
                }
                if cyc.iter().any(|&x| x < b) {
                    continue;
                }
                out.push(BlockPolygon {
                    types: (i, j),
                    blocks: cyc.to_vec(),
                });
            }
        }
        out.sort_by(|a, b| (a.blocks[0], a.types).cmp(&(b.blocks[0], b.types)));
        out
    }

    /// Extracts the polygonal complex: vertices are blocks, edges are
    /// facet crossings, polygons are complete rank-2 cosets. Edges are
    /// oriented from the lower block index.
    pub fn extract_x(&self) -> ExtractedX {
        let n = self.num_blocks();
        let k = self.data.num_generators();
        let mut edges = Vec::new();
        let mut edge_of = vec![vec![None; k]; n];
        for b in 0..n {
            for i in 0..k {
                let Some(c) = self.neighbor[b][i] else { continue };
                if edge_of[b][i].is_some() {
                    continue;
                }
                let (from, to) = if b <= c { (b, c) } else { (c, b) };
                let id = edges.len();
                edges.push(BlockEdge { from, to, ty: i });
                edge_of[b][i] = Some(id);
                edge_of[c][i] = Some(id);
            }
        }
        let polygons = self.polygons();
        let mut complex = PolygonalComplex::new(n);
        for e in &edges {
            complex.add_edge(e.from, e.to).expect("block edge");
        }
        for p in &polygons {
            let s = p.sides();
            let cycle = (0..s)
                .map(|q| {
                    let a = p.blocks[q];
                    let e = edge_of[a][p.edge_type(q)].expect("polygon edge present");
                    let sign = if edges[e].from == a && edges[e].to == p.blocks[(q + 1) % s] { 1 } else { -1 };
                    (e, sign)
                })
                .collect();
            complex
                .add_polygon(Polygon::new(cycle))
                .expect("polygon boundary is a cycle");
        }
        ExtractedX {
            complex,
            edges,
            edge_of,
            polygons,
        }
    }

    /// Counts in the link of a rank-2 vertex: (`{i}` vertices, `{j}` vertices,
    /// `∅` vertices, link is a single cycle).
    pub fn rank2_link(&self, p: &BlockPolygon) -> (usize, usize, usize, bool) {
        let s = p.sides();
        let ni = (0..s).filter(|&q| p.edge_type(q) == p.types.0).count();
        let nj = s - ni;
        // Link: block q -- edge q -- block q+1, cyclically: 2s vertices, 2s edges.
        let mut adjacency: BTreeMap<(u8, usize), Vec<(u8, usize)>> = BTreeMap::new();
        for q in 0..s {
            let a = (0u8, p.blocks[q]);
            let e = (1u8, q);
            let b = (0u8, p.blocks[(q + 1) % s]);
            adjacency.entry(a).or_default().push(e);
            adjacency.entry(e).or_default().push(a);
            adjacency.entry(e).or_default().push(b);
            adjacency.entry(b).or_default().push(e);
        }
        let is_cycle = adjacency.values().all(|v| v.len() == 2) && {
            let start = *adjacency.keys().next().expect("nonempty");
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for y in &adjacency[&x] {
                    if seen.insert(*y) {
                        stack.push(*y);
                    }
                }
            }
            seen.len() == adjacency.len()
        };
        (ni, nj, s, is_cycle)
    }
}

/// Fixed set of a reflection within a ball, compared with walls of `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionWallReport {
    pub conjugator: CoxWord,
    pub generator: usize,
    /// Edges of the extracted complex swapped by the reflection.
    pub fixed_edges: Vec<usize>,
    /// Polygons mapped to themselves.
    pub fixed_polygons: Vec<usize>,
    /// Wall classes (by index into the supplied wall list) meeting the fixed edges.
    pub wall_classes: Vec<usize>,
    /// Every edge of every meeting wall class is fixed.
    pub consistent: bool,
}

/// Decomposes `refl` as `u s u⁻¹` and computes its fixed cells in `ball`.
/// `edge_wall[e]` gives the wall class of each edge of the extracted complex.
pub fn reflection_wall(
    data: &CoxeterData,
    ball: &BlockComplex,
    x: &ExtractedX,
    edge_wall: &[usize],
    refl: &CoxWord,
) -> Result<ReflectionWallReport, DavisError> {
    if refl.is_empty() || !data.multiply(refl, refl)?.is_empty() {
        return Err(DavisError::NotAReflection);
    }
    let radius = (refl.len() - 1) / 2;
    let candidates = data.enumerate_ball(radius, DEFAULT_BLOCK_CAP)?;
    let mut found = None;
    'outer: for u in &candidates {
        for s in 0..data.num_generators() {
            if &data.conjugate_generator(u, s)? == refl {
                found = Some((u.clone(), s));
                break 'outer;
            }
        }
    }
    let (conjugator, generator) = found.ok_or(DavisError::NotAReflection)?;
    let mut fixed_edges = Vec::new();
    for (e, be) in x.edges.iter().enumerate() {
        let (Some(a), Some(b)) = (ball.word(be.from), ball.word(be.to)) else { continue };
        if &data.multiply(refl, a)? == b {
            fixed_edges.push(e);
        }
    }
    let mut fixed_polygons = Vec::new();
    for (pi, p) in x.polygons.iter().enumerate() {
        let mut set = BTreeSet::new();
        for &b in &p.blocks {
            set.insert(ball.word(b).cloned().unwrap_or_default());
        }
        let mut image = BTreeSet::new();
        for w in &set {
            image.insert(data.multiply(refl, w)?);
        }
        if image == set {
            fixed_polygons.push(pi);
        }
    }
    let wall_classes: BTreeSet<usize> = fixed_edges.iter().map(|&e| edge_wall[e]).collect();
    let fixed: BTreeSet<usize> = fixed_edges.iter().copied().collect();
    let consistent = (0..x.edges.len())
        .filter(|e| wall_classes.contains(&edge_wall[*e]))
        .all(|e| fixed.contains(&e));
    Ok(ReflectionWallReport {
        conjugator,
        generator,
        fixed_edges,
        fixed_polygons,
        wall_classes: wall_classes.into_iter().collect(),
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    fn dihedral3() -> CoxeterData {
        CoxeterData::new(vec!["s".into(), "t".into()], &[(0, 1, 3)]).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let d = dihedral3();
        assert!(d.cox_normalize(&[0, 0]).unwrap().is_empty());
        let a = d.cox_normalize(&[0, 1, 0]).unwrap();
        let b = d.cox_normalize(&[1, 0, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.letters(), &[0, 1, 0]);
        let sq = CoxeterData::new(vec!["s".into(), "t".into()], &[(0, 1, 2)]).unwrap();
        assert_eq!(sq.cox_normalize(&[1, 0]).unwrap().letters(), &[0, 1]);
    }

    #[test]
    fn dihedral_group_order() {
        let d = dihedral3();
        assert_eq!(d.enumerate_ball(10, 1000).unwrap().len(), 6);
        let inf = CoxeterData::new(vec!["s".into(), "t".into()], &[]).unwrap();
        assert_eq!(inf.enumerate_ball(3, 1000).unwrap().len(), 7);
    }

    #[test]
    fn word_cap() {
        let inf = CoxeterData::new(vec!["s".into(), "t".into()], &[]).unwrap().with_word_cap(3);
        assert_eq!(inf.cox_normalize(&[0, 1, 0, 1]), Err(DavisError::WordTooLong(3)));
    }

    #[test]
    fn two_dimensionality() {
        let tri2 = CoxeterData::new(
            (0..3).map(|i| i.to_string()).collect(),
            &[(0, 1, 2), (1, 2, 2), (0, 2, 2)],
        )
        .unwrap();
        assert_eq!(tri2.is_two_dimensional(), (false, Some([0, 1, 2])));
        let tri4 = CoxeterData::new(
            (0..3).map(|i| i.to_string()).collect(),
            &[(0, 1, 4), (1, 2, 4), (0, 2, 4)],
        )
        .unwrap();
        assert!(tri4.is_two_dimensional().0);
        let c = CoxeterData::cycle(4, 2);
        assert_eq!(c.girth(), Some(4));
        assert!(c.is_two_dimensional().0);
    }

    #[test]
    fn ball_counts() {
        let d = CoxeterData::cycle(4, 2);
        let ball = BlockComplex::ball(&d, 2, DEFAULT_BLOCK_CAP).unwrap();
        assert_eq!(ball.num_blocks(), 13);
        let x = ball.extract_x();
        for p in &x.polygons {
            assert_eq!(p.sides(), 4);
            let (ni, nj, n0, cyc) = ball.rank2_link(p);
            assert_eq!((ni, nj, n0, cyc), (2, 2, 4, true));
        }
    }

    #[test]
    fn coxeter_hom_check() {
        let (s3, perms) = FiniteGroup::symmetric(3);
        let t01 = perms.iter().position(|p| p == &vec![1, 0, 2]).unwrap();
        let t12 = perms.iter().position(|p| p == &vec![0, 2, 1]).unwrap();
        let d = dihedral3();
        assert!(GroupHom::from_coxeter(&d, s3.clone(), vec![t01, t12]).is_ok());
        let sq = CoxeterData::new(vec!["s".into(), "t".into()], &[(0, 1, 2)]).unwrap();
        assert!(GroupHom::from_coxeter(&sq, s3, vec![t01, t12]).is_err());
    }
}
