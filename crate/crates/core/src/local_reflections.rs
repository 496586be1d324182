//! Systems of local reflections on Davis complexes, their holonomy, rank-1
//! and rank-2 fields, and the e-wall procedure that kills holonomy.
//!
//! Every block `wB` is read through the chart given by `w`, so a germ
//! between blocks is an automorphism of the weighted graph `(L, m)`. A local
//! reflection at the facet of type `i` between blocks `x` and `x s_i` is then
//! an element of `F_i`, the automorphisms fixing `i` and its neighbours. The
//! system `σ^W` is the identity everywhere.
//!
//! Regions are either balls of blocks or finite quotients `W/N`; a system on
//! a quotient is an `N`-invariant system on the whole complex.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::RwLock;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::davis::{BlockComplex, CoxWord, CoxeterData, DavisError, ExtractedX};
use crate::groups::GroupHom;
use crate::polygonal::{PolygonalError, Wall};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalReflectionError {
    #[error(transparent)]
    Davis(#[from] DavisError),
    #[error(transparent)]
    Polygonal(#[from] PolygonalError),
    #[error("polygon of triangle {0:?} leaves the region")]
    PolygonOnBoundary(Triangle),
    #[error("edge {0}: value does not fix the facet")]
    NotInFacetGroup(usize),
    #[error("field is not symmetric at edge {0}")]
    NotSymmetric(usize),
    #[error("holonomy at polygon {0} is not a product F+F-")]
    NotDecomposable(usize),
    #[error("propagation along the e-wall does not close")]
    EWallNotTree,
    #[error("walls are not clean: {0}")]
    NotClean(String),
    #[error("choice {0} is not in F(σ, φ, M)")]
    InvalidChoice(usize),
    #[error("updated field fails to decompose the holonomy at polygon {0}")]
    DecompositionFailure(usize),
    #[error("system has holonomy at triangle {0:?}")]
    HolonomyPresent(Triangle),
    #[error("block {0:?} is outside the region")]
    OutOfRegion(CoxWord),
    #[error("closed gallery fails to close at {block:?} ({kind})")]
    ConsistencyFailure { block: CoxWord, kind: String },
    #[error("system size does not match the region")]
    SizeMismatch,
}

type Result<T> = std::result::Result<T, LocalReflectionError>;

/// The weight-preserving automorphisms of `L`, composed as functions:
/// `mul(a, b) = a ∘ b`. Element 0 is the identity.
#[derive(Debug, Clone)]
pub struct GraphAutomorphisms {
    perms: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl GraphAutomorphisms {
    pub fn new(d: &CoxeterData) -> Self {
        let n = d.num_generators();
        let mut perms = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn extend(d: &CoxeterData, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            let k = cur.len();
            if k == used.len() {
                out.push(cur.clone());
                return;
            }
            for img in 0..used.len() {
                if used[img] || (0..k).any(|a| d.m(a, k) != d.m(cur[a], img)) {
                    continue;
                }
                used[img] = true;
                cur.push(img);
                extend(d, cur, used, out);
                cur.pop();
                used[img] = false;
            }
        }
        extend(d, &mut cur, &mut used, &mut perms);
        perms.sort();
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| perms.iter().map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()]).collect())
            .collect();
        let inverse = (0..perms.len())
            .map(|a| (0..perms.len()).find(|&b| table[a][b] == 0).expect("group"))
            .collect();
        GraphAutomorphisms {
            perms,
            index,
            table,
            inverse,
        }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn compose<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    pub fn conj(&self, by: usize, a: usize) -> usize {
        self.mul(self.mul(by, a), self.inv(by))
    }

    pub fn perm(&self, a: usize) -> &[usize] {
        &self.perms[a]
    }

    pub fn element(&self, perm: &[usize]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    /// Automorphisms fixing every vertex of `set`.
    pub fn fixing(&self, set: &[usize]) -> Vec<usize> {
        (0..self.order())
            .filter(|&a| set.iter().all(|&v| self.perms[a][v] == v))
            .collect()
    }

    /// Applies an automorphism letterwise to a Coxeter word.
    pub fn act_on_word(&self, d: &CoxeterData, a: usize, w: &CoxWord) -> Result<CoxWord> {
        let letters: Vec<usize> = w.letters().iter().map(|&s| self.perms[a][s]).collect();
        Ok(d.cox_normalize(&letters)?)
    }
}

/// A triangle `(x_*, i, {i,j})` of block `block`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub block: usize,
    pub i: usize,
    pub j: usize,
}

impl Triangle {
    /// The other triangle of the block sharing the rank-2 vertex.
    pub fn prime(self) -> Triangle {
        Triangle {
            block: self.block,
            i: self.j,
            j: self.i,
        }
    }
}

/// One step of the edge path winding around a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindingStep {
    pub block: usize,
    pub ty: usize,
    pub edge: usize,
    pub position: usize,
}

/// A region of the Davis complex with its extracted polygonal complex.
#[derive(Debug, Clone)]
pub struct Region {
    pub blocks: BlockComplex,
    pub x: ExtractedX,
    pub aut: GraphAutomorphisms,
    facet: Vec<Vec<usize>>,
    polygon_at: HashMap<(usize, usize, usize), usize>,
}

impl Region {
    pub fn from_blocks(blocks: BlockComplex) -> Self {
        let d = blocks.data();
        let aut = GraphAutomorphisms::new(d);
        let facet = (0..d.num_generators())
            .map(|i| {
                let mut star = d.neighbors(i);
                star.push(i);
                aut.fixing(&star)
            })
            .collect();
        let x = blocks.extract_x();
        let mut polygon_at = HashMap::new();
        for (k, p) in x.polygons.iter().enumerate() {
            for &b in &p.blocks {
                polygon_at.insert((b, p.types.0, p.types.1), k);
            }
        }
        Region {
            blocks,
            x,
            aut,
            facet,
            polygon_at,
        }
    }

    pub fn ball(d: &CoxeterData, radius: usize, cap: usize) -> Result<Self> {
        Ok(Self::from_blocks(BlockComplex::ball(d, radius, cap)?))
    }

    pub fn quotient(d: &CoxeterData, hom: &GroupHom) -> Result<Self> {
        Ok(Self::from_blocks(BlockComplex::quotient(d, hom)?))
    }

    pub fn data(&self) -> &CoxeterData {
        self.blocks.data()
    }

    pub fn num_edges(&self) -> usize {
        self.x.edges.len()
    }

    /// `F_i`: automorphisms fixing the facet of type `i`.
    pub fn facet_group(&self, i: usize) -> &[usize] {
        &self.facet[i]
    }

    pub fn in_facet_group(&self, i: usize, a: usize) -> bool {
        self.facet[i].binary_search(&a).is_ok()
    }

    pub fn polygon_of(&self, t: Triangle) -> Option<usize> {
        let key = (t.block, t.i.min(t.j), t.i.max(t.j));
        self.polygon_at.get(&key).copied()
    }

    /// Edge across facet `ty` of `block` and whether `block` is its tail.
    pub fn semi_edge(&self, block: usize, ty: usize) -> Option<(usize, usize)> {
        let e = self.x.edge_of[block][ty]?;
        Some((e, usize::from(self.x.edges[e].from != block)))
    }

    /// Triangles whose polygon lies in the region.
    pub fn interior_triangles(&self) -> Vec<Triangle> {
        let mut out = Vec::new();
        for p in &self.x.polygons {
            let (i, j) = p.types;
            for &b in &p.blocks {
                out.push(Triangle { block: b, i, j });
                out.push(Triangle { block: b, i: j, j: i });
            }
        }
        out.sort();
        out
    }

    /// The edge path `a_1, …, a_2m` around the polygon of `t`, starting
    /// across facet `t.i` of `t.block`.
    pub fn winding(&self, t: Triangle) -> Result<Vec<WindingStep>> {
        let pi = self.polygon_of(t).ok_or(LocalReflectionError::PolygonOnBoundary(t))?;
        let cycle = &self.x.complex.polygon(pi).cycle;
        let steps = cycle.len();
        let mut out = Vec::with_capacity(steps);
        let mut cur = t.block;
        for k in 0..steps {
            let ty = if k % 2 == 0 { t.i } else { t.j };
            let (edge, _) = self
                .semi_edge(cur, ty)
                .ok_or(LocalReflectionError::PolygonOnBoundary(t))?;
            let position = cycle.iter().position(|&(e, _)| e == edge).expect("edge of its polygon");
            out.push(WindingStep {
                block: cur,
                ty,
                edge,
                position,
            });
            cur = self
                .blocks
                .neighbor(cur, ty)
                .ok_or(LocalReflectionError::PolygonOnBoundary(t))?;
        }
        Ok(out)
    }

    /// Geometric e-walls, one per class up to reversal.
    pub fn ewalls(&self) -> Result<Vec<Wall>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for w in self.x.complex.compute_ewalls()? {
            if seen.insert((w.edges(), w.diameters.clone())) {
                out.push(w);
            }
        }
        Ok(out)
    }
}

/// A system of local reflections: per edge of the region, the chart map
/// from its tail block to its head block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LRSystem {
    pub alpha: Vec<usize>,
}

impl LRSystem {
    /// The system induced by the reflections of `W`.
    pub fn sigma_w(region: &Region) -> Self {
        LRSystem {
            alpha: vec![0; region.num_edges()],
        }
    }

    pub fn new(region: &Region, alpha: Vec<usize>) -> Result<Self> {
        if alpha.len() != region.num_edges() {
            return Err(LocalReflectionError::SizeMismatch);
        }
        for (e, &a) in alpha.iter().enumerate() {
            if !region.in_facet_group(region.x.edges[e].ty, a) {
                return Err(LocalReflectionError::NotInFacetGroup(e));
            }
        }
        Ok(LRSystem { alpha })
    }

    pub fn random<R: Rng>(region: &Region, rng: &mut R) -> Self {
        let alpha = region
            .x
            .edges
            .iter()
            .map(|e| {
                let f = region.facet_group(e.ty);
                f[rng.gen_range(0..f.len())]
            })
            .collect();
        LRSystem { alpha }
    }

    /// Chart map of the local reflection across facet `ty`, from `block`
    /// to its neighbour.
    pub fn chart(&self, region: &Region, block: usize, ty: usize) -> Option<usize> {
        let (e, side) = region.semi_edge(block, ty)?;
        Some(if side == 0 {
            self.alpha[e]
        } else {
            region.aut.inv(self.alpha[e])
        })
    }
}

/// `h_σ(τ) = σ_{v_2m} ∘ … ∘ σ_{v_1}` in the chart of `τ`'s block.
pub fn holonomy(region: &Region, sigma: &LRSystem, t: Triangle) -> Result<usize> {
    let steps = region.winding(t)?;
    Ok(steps.iter().fold(0, |acc, s| {
        let a = sigma.chart(region, s.block, s.ty).expect("edge in region");
        region.aut.mul(a, acc)
    }))
}

/// A rank-1 field: per edge, the values on its tail and head semi-edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank1Field {
    pub values: Vec<[usize; 2]>,
}

impl Rank1Field {
    pub fn identity(region: &Region) -> Self {
        Rank1Field {
            values: vec![[0, 0]; region.num_edges()],
        }
    }

    /// Value on the semi-edge of `block` across facet `ty`.
    pub fn at(&self, region: &Region, block: usize, ty: usize) -> Option<usize> {
        let (e, side) = region.semi_edge(block, ty)?;
        Some(self.values[e][side])
    }

    /// Edges carrying a nontrivial value.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| self.values[e] != [0, 0]).collect()
    }

    /// Pointwise product `self · other`.
    pub fn product(&self, region: &Region, other: &Rank1Field) -> Self {
        Rank1Field {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| [region.aut.mul(a[0], b[0]), region.aut.mul(a[1], b[1])])
                .collect(),
        }
    }

    /// The symmetric field with the given tail values.
    pub fn symmetric_from_tails(region: &Region, sigma: &LRSystem, tails: &[usize]) -> Self {
        let values = tails
            .iter()
            .enumerate()
            .map(|(e, &f)| [f, head_partner(region, sigma.alpha[e], f)])
            .collect();
        Rank1Field { values }
    }

    pub fn random_symmetric<R: Rng>(region: &Region, sigma: &LRSystem, rng: &mut R) -> Self {
        let tails: Vec<usize> = region
            .x
            .edges
            .iter()
            .map(|e| {
                let f = region.facet_group(e.ty);
                f[rng.gen_range(0..f.len())]
            })
            .collect();
        Self::symmetric_from_tails(region, sigma, &tails)
    }

    /// Values lie in the facet groups and satisfy `σ_v f(e) = f(ē)⁻¹ σ_v`.
    pub fn check_symmetric(&self, region: &Region, sigma: &LRSystem) -> Result<()> {
        for (e, v) in self.values.iter().enumerate() {
            let ty = region.x.edges[e].ty;
            if !region.in_facet_group(ty, v[0]) || !region.in_facet_group(ty, v[1]) {
                return Err(LocalReflectionError::NotInFacetGroup(e));
            }
            if v[1] != head_partner(region, sigma.alpha[e], v[0]) {
                return Err(LocalReflectionError::NotSymmetric(e));
            }
        }
        Ok(())
    }
}

/// `f(ē) = α f(e)⁻¹ α⁻¹`.
fn head_partner(region: &Region, alpha: usize, tail: usize) -> usize {
    region.aut.conj(alpha, region.aut.inv(tail))
}

/// Tail value determined by a head value.
fn tail_partner(region: &Region, alpha: usize, head: usize) -> usize {
    region.aut.conj(region.aut.inv(alpha), region.aut.inv(head))
}

/// The modified system `σf`.
pub fn apply_field(region: &Region, sigma: &LRSystem, f: &Rank1Field) -> Result<LRSystem> {
    f.check_symmetric(region, sigma)?;
    let alpha = sigma
        .alpha
        .iter()
        .zip(&f.values)
        .map(|(&a, v)| region.aut.mul(a, v[0]))
        .collect();
    Ok(LRSystem { alpha })
}

/// The unique symmetric field with `σ' = σf`.
pub fn field_between(region: &Region, sigma: &LRSystem, sigma2: &LRSystem) -> Rank1Field {
    let values = sigma
        .alpha
        .iter()
        .zip(&sigma2.alpha)
        .map(|(&a, &b)| [region.aut.mul(region.aut.inv(a), b), region.aut.mul(a, region.aut.inv(b))])
        .collect();
    Rank1Field { values }
}

/// The sequence `g_1, …, g_2m` attached to a triangle, a system and a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSequence {
    pub g: Vec<usize>,
    /// `g_k ∈ F⁺(τ)` for odd `k` and `g_k ∈ F⁻(τ)` for even `k`.
    pub alternates: bool,
    pub first_is_seed: bool,
    /// `h_{σf}(τ) = h_σ(τ) g_2m ⋯ g_1`, with the left side computed from `σf`.
    pub formula_holds: bool,
}

fn g_values(region: &Region, sigma: &LRSystem, f: &Rank1Field, steps: &[WindingStep]) -> Vec<usize> {
    let aut = &region.aut;
    let mut prefix = 0;
    let mut out = Vec::with_capacity(steps.len());
    for s in steps {
        let fe = f.at(region, s.block, s.ty).expect("edge in region");
        out.push(aut.mul(aut.mul(aut.inv(prefix), fe), prefix));
        prefix = aut.mul(sigma.chart(region, s.block, s.ty).expect("edge in region"), prefix);
    }
    out
}

pub fn g_sequence(region: &Region, sigma: &LRSystem, f: &Rank1Field, t: Triangle) -> Result<GSequence> {
    let modified = apply_field(region, sigma, f)?;
    g_sequence_against(region, sigma, &modified, f, t)
}

/// [`g_sequence`] for every interior triangle, applying `f` once.
pub fn g_sequences(region: &Region, sigma: &LRSystem, f: &Rank1Field) -> Result<Vec<(Triangle, GSequence)>> {
    let modified = apply_field(region, sigma, f)?;
    region
        .interior_triangles()
        .into_iter()
        .map(|t| Ok((t, g_sequence_against(region, sigma, &modified, f, t)?)))
        .collect()
}

fn g_sequence_against(region: &Region, sigma: &LRSystem, modified: &LRSystem, f: &Rank1Field, t: Triangle) -> Result<GSequence> {
    let steps = region.winding(t)?;
    let g = g_values(region, sigma, f, &steps);
    let alternates = g.iter().enumerate().all(|(k, &x)| {
        let ty = if k % 2 == 0 { t.i } else { t.j };
        region.in_facet_group(ty, x)
    });
    let first_is_seed = g[0] == f.at(region, t.block, t.i).expect("edge in region");
    let lhs = holonomy(region, modified, t)?;
    let product = g.iter().fold(0, |acc, &x| region.aut.mul(x, acc));
    let rhs = region.aut.mul(holonomy(region, sigma, t)?, product);
    Ok(GSequence {
        g,
        alternates,
        first_is_seed,
        formula_holds: lhs == rhs,
    })
}

/// One `(0,2)`-class per polygon, based at the polygon's first block, with
/// edges labelled `+` at even positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal {
    pub pairs: Vec<(Triangle, Triangle)>,
}

impl Transversal {
    pub fn new(region: &Region) -> Self {
        let pairs = region
            .x
            .polygons
            .iter()
            .map(|p| {
                let t = Triangle {
                    block: p.blocks[0],
                    i: p.types.0,
                    j: p.types.1,
                };
                (t, t.prime())
            })
            .collect();
        Transversal { pairs }
    }

    /// The member whose rank-1 vertex has the label of the edges at
    /// `positions`.
    pub fn select(&self, polygon: usize, positions: (usize, usize)) -> Triangle {
        let (t, tp) = self.pairs[polygon];
        if positions.0 % 2 == 0 {
            t
        } else {
            tp
        }
    }
}

/// A rank-2 field, identity off its stored support.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank2Field {
    pub values: BTreeMap<Triangle, usize>,
}

impl Rank2Field {
    pub fn get(&self, t: Triangle) -> usize {
        self.values.get(&t).copied().unwrap_or(0)
    }

    pub fn set(&mut self, t: Triangle, a: usize) {
        if a == 0 {
            self.values.remove(&t);
        } else {
            self.values.insert(t, a);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.values.is_empty()
    }
}

/// Finds `φ` on the transversal with `h_σ(τ) = φ(τ')⁻¹ φ(τ)`, preferring
/// `φ(τ') = 1`.
pub fn decompose_holonomy(region: &Region, sigma: &LRSystem, tr: &Transversal) -> Result<Rank2Field> {
    let aut = &region.aut;
    let mut phi = Rank2Field::default();
    for (pi, &(t, tp)) in tr.pairs.iter().enumerate() {
        let h = holonomy(region, sigma, t)?;
        let found = region
            .facet_group(t.j)
            .iter()
            .map(|&y| (aut.mul(y, h), y))
            .find(|&(x, _)| region.in_facet_group(t.i, x))
            .ok_or(LocalReflectionError::NotDecomposable(pi))?;
        phi.set(t, found.0);
        phi.set(tp, found.1);
    }
    Ok(phi)
}

/// Whether `φ` decomposes the holonomy of `σ` on every transversal pair.
pub fn is_decomposition(region: &Region, sigma: &LRSystem, phi: &Rank2Field, tr: &Transversal) -> Result<Option<usize>> {
    let aut = &region.aut;
    for (pi, &(t, tp)) in tr.pairs.iter().enumerate() {
        let (x, y) = (phi.get(t), phi.get(tp));
        let ok = region.in_facet_group(t.i, x)
            && region.in_facet_group(t.j, y)
            && holonomy(region, sigma, t)? == aut.mul(aut.inv(y), x);
        if !ok {
            return Ok(Some(pi));
        }
    }
    Ok(None)
}

/// The equation a wall imposes on one polygon it separates.
#[derive(Debug, Clone)]
struct Crossing {
    triangle: Triangle,
    /// `(edge, side, prefix)` for the first and second wall-dual steps.
    first: (usize, usize, usize),
    second: (usize, usize, usize),
}

fn crossings(region: &Region, sigma: &LRSystem, tr: &Transversal, wall: &Wall) -> Result<Vec<Crossing>> {
    let aut = &region.aut;
    let mut out = Vec::new();
    for dm in &wall.diameters {
        let t = tr.select(dm.polygon, dm.positions);
        let steps = region.winding(t)?;
        let mut prefix = 0;
        let mut hits = Vec::new();
        for s in &steps {
            if s.position == dm.positions.0 || s.position == dm.positions.1 {
                let (_, side) = region.semi_edge(s.block, s.ty).expect("edge in region");
                hits.push((s.edge, side, prefix));
            }
            prefix = aut.mul(sigma.chart(region, s.block, s.ty).expect("edge in region"), prefix);
        }
        out.push(Crossing {
            triangle: t,
            first: hits[0],
            second: hits[1],
        });
    }
    Ok(out)
}

fn check_clean_single(wall: &Wall) -> Result<()> {
    let mut seen = BTreeSet::new();
    for dm in &wall.diameters {
        if !seen.insert(dm.polygon) {
            return Err(LocalReflectionError::NotClean(format!("two diameters in polygon {}", dm.polygon)));
        }
    }
    Ok(())
}

/// Semi-edge value from a tail value.
fn side_value(region: &Region, sigma: &LRSystem, edge: usize, side: usize, tail: usize) -> usize {
    if side == 0 {
        tail
    } else {
        head_partner(region, sigma.alpha[edge], tail)
    }
}

fn tail_from_side(region: &Region, sigma: &LRSystem, edge: usize, side: usize, value: usize) -> usize {
    if side == 0 {
        value
    } else {
        tail_partner(region, sigma.alpha[edge], value)
    }
}

/// The member of `F(σ, φ, M)` with the given value on the semi-edge
/// `(seed_edge, seed_side)`. Components of the wall not reached from the
/// seed are seeded with the identity at their least edge.
pub fn solve_ewall_field(
    region: &Region,
    sigma: &LRSystem,
    phi: &Rank2Field,
    tr: &Transversal,
    wall: &Wall,
    seed: (usize, usize, usize),
) -> Result<Rank1Field> {
    check_clean_single(wall)?;
    let aut = &region.aut;
    let cross = crossings(region, sigma, tr, wall)?;
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, c) in cross.iter().enumerate() {
        by_edge.entry(c.first.0).or_default().push(k);
        by_edge.entry(c.second.0).or_default().push(k);
    }
    let (seed_edge, seed_side, seed_value) = seed;
    if !region.in_facet_group(region.x.edges[seed_edge].ty, seed_value) {
        return Err(LocalReflectionError::NotInFacetGroup(seed_edge));
    }
    let mut tails: BTreeMap<usize, usize> = BTreeMap::new();
    let mut starts = vec![(seed_edge, tail_from_side(region, sigma, seed_edge, seed_side, seed_value))];
    starts.extend(wall.edges().into_iter().map(|e| (e, 0)));
    for (start, value) in starts {
        if tails.contains_key(&start) {
            continue;
        }
        tails.insert(start, value);
        let mut queue = VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            for &k in by_edge.get(&e).map(Vec::as_slice).unwrap_or(&[]) {
                let c = &cross[k];
                let target = aut.inv(phi.get(c.triangle));
                let (known, other, solve_second) = if c.first.0 == e { (c.first, c.second, true) } else { (c.second, c.first, false) };
                let gk = aut.conj(aut.inv(known.2), side_value(region, sigma, known.0, known.1, tails[&e]));
                // g_second · g_first = φ(τ)⁻¹.
                let go = if solve_second {
                    aut.mul(target, aut.inv(gk))
                } else {
                    aut.mul(aut.inv(gk), target)
                };
                let fo = aut.conj(other.2, go);
                if !region.in_facet_group(region.x.edges[other.0].ty, fo) {
                    return Err(LocalReflectionError::NotInFacetGroup(other.0));
                }
                let tail = tail_from_side(region, sigma, other.0, other.1, fo);
                match tails.get(&other.0) {
                    Some(&t) if t != tail => return Err(LocalReflectionError::EWallNotTree),
                    Some(_) => {}
                    None => {
                        tails.insert(other.0, tail);
                        queue.push_back(other.0);
                    }
                }
            }
        }
    }
    let mut all = vec![0; region.num_edges()];
    for (e, t) in tails {
        all[e] = t;
    }
    Ok(Rank1Field::symmetric_from_tails(region, sigma, &all))
}

/// Membership in `F(σ, φ, M)`.
pub fn verify_ewall_field(region: &Region, sigma: &LRSystem, phi: &Rank2Field, tr: &Transversal, wall: &Wall, f: &Rank1Field) -> Result<bool> {
    if f.check_symmetric(region, sigma).is_err() {
        return Ok(false);
    }
    let edges = wall.edges();
    if f.support().iter().any(|e| !edges.contains(e)) {
        return Ok(false);
    }
    let aut = &region.aut;
    for c in crossings(region, sigma, tr, wall)? {
        let g1 = aut.conj(aut.inv(c.first.2), f.values[c.first.0][c.first.1]);
        let g2 = aut.conj(aut.inv(c.second.2), f.values[c.second.0][c.second.1]);
        if aut.mul(g2, g1) != aut.inv(phi.get(c.triangle)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All members of `F(σ, φ, M)` obtained by varying the seed over `F(e)`.
pub fn ewall_field_family(
    region: &Region,
    sigma: &LRSystem,
    phi: &Rank2Field,
    tr: &Transversal,
    wall: &Wall,
    seed_edge: usize,
) -> Result<Vec<Rank1Field>> {
    region
        .facet_group(region.x.edges[seed_edge].ty)
        .iter()
        .map(|&v| solve_ewall_field(region, sigma, phi, tr, wall, (seed_edge, 0, v)))
        .collect()
}

/// Applies the chosen fields along pairwise disjoint e-walls and updates
/// the decomposition on the polygons they separate.
pub fn kill_half_holonomy(
    region: &Region,
    sigma: &LRSystem,
    phi: &Rank2Field,
    tr: &Transversal,
    walls: &[&Wall],
    choices: &[Rank1Field],
) -> Result<(LRSystem, Rank2Field)> {
    let mut used_edges = BTreeSet::new();
    let mut used_polygons = BTreeMap::new();
    for (k, w) in walls.iter().enumerate() {
        check_clean_single(w)?;
        for e in w.edges() {
            if !used_edges.insert(e) {
                return Err(LocalReflectionError::NotClean(format!("walls share edge {e}")));
            }
        }
        for dm in &w.diameters {
            if used_polygons.insert(dm.polygon, (k, dm.positions)).is_some() {
                return Err(LocalReflectionError::NotClean(format!("walls share polygon {}", dm.polygon)));
            }
        }
    }
    let mut f = Rank1Field::identity(region);
    for (k, (w, c)) in walls.iter().zip(choices).enumerate() {
        if !verify_ewall_field(region, sigma, phi, tr, w, c)? {
            return Err(LocalReflectionError::InvalidChoice(k));
        }
        f = f.product(region, c);
    }
    let sigma2 = apply_field(region, sigma, &f)?;
    let mut phi2 = phi.clone();
    for (&pi, &(_, positions)) in &used_polygons {
        let t = tr.select(pi, positions);
        phi2.set(t, 0);
    }
    if let Some(pi) = is_decomposition(region, &sigma2, &phi2, tr)? {
        return Err(LocalReflectionError::DecompositionFailure(pi));
    }
    Ok((sigma2, phi2))
}

/// One wall processed by [`kill_all_holonomy`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillStep {
    pub wall: usize,
    pub seed_edge: usize,
    pub seed_value: usize,
    pub polygons: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillIteration {
    pub system: LRSystem,
    pub phi: Rank2Field,
    pub steps: Vec<KillStep>,
    /// Walls for which no seed gave a consistent field.
    pub stuck: Vec<usize>,
    pub holonomy_free: bool,
}

/// Kills the holonomy of `σ` wall by wall. On a quotient region every wall
/// is one orbit; the first seed whose propagation closes is used.
pub fn kill_all_holonomy(region: &Region, sigma: &LRSystem) -> Result<KillIteration> {
    let tr = Transversal::new(region);
    let mut phi = decompose_holonomy(region, sigma, &tr)?;
    let mut system = sigma.clone();
    let mut steps = Vec::new();
    let mut stuck = Vec::new();
    for (k, wall) in region.ewalls()?.iter().enumerate() {
        if wall.diameters.is_empty() {
            continue;
        }
        let seed_edge = *wall.edges().iter().next().expect("nonempty wall");
        let mut done = false;
        for &v in region.facet_group(region.x.edges[seed_edge].ty) {
            let f = match solve_ewall_field(region, &system, &phi, &tr, wall, (seed_edge, 0, v)) {
                Ok(f) => f,
                Err(LocalReflectionError::EWallNotTree) => continue,
                Err(e) => return Err(e),
            };
            let (s2, p2) = kill_half_holonomy(region, &system, &phi, &tr, &[wall], &[f])?;
            system = s2;
            phi = p2;
            steps.push(KillStep {
                wall: k,
                seed_edge,
                seed_value: v,
                polygons: wall.diameters.len(),
            });
            done = true;
            break;
        }
        if !done {
            stuck.push(k);
        }
    }
    let mut holonomy_free = true;
    for t in region.interior_triangles() {
        if holonomy(region, &system, t)? != 0 {
            holonomy_free = false;
            break;
        }
    }
    Ok(KillIteration {
        system,
        phi,
        steps,
        stuck,
        holonomy_free,
    })
}

/// A system on the whole Davis complex.
#[derive(Debug, Clone, Copy)]
pub enum GlobalSystem<'a> {
    /// `σ^W`.
    Coxeter,
    /// Pulled back from a region; blocks outside a ball region are errors.
    Region(&'a Region, &'a LRSystem),
}

impl GlobalSystem<'_> {
    fn chart(&self, d: &CoxeterData, w: &CoxWord, ty: usize) -> Result<usize> {
        match self {
            GlobalSystem::Coxeter => {
                d.multiply(w, &d.generator(ty))?;
                Ok(0)
            }
            GlobalSystem::Region(r, s) => {
                let b = r
                    .blocks
                    .block_of_word(w)
                    .ok_or_else(|| LocalReflectionError::OutOfRegion(w.clone()))?;
                s.chart(r, b, ty)
                    .ok_or_else(|| LocalReflectionError::OutOfRegion(w.clone()))
            }
        }
    }
}

/// A germ `(block, image block, chart)`.
pub type SystemGerm = (CoxWord, CoxWord, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemCertification {
    pub radius: usize,
    pub blocks: usize,
    pub polygons: usize,
}

/// The extension of a germ conjugating one system to another, evaluated
/// block by block along galleries.
#[derive(Debug)]
pub struct SystemAutomorphism<'a> {
    data: &'a CoxeterData,
    aut: &'a GraphAutomorphisms,
    src: GlobalSystem<'a>,
    dst: GlobalSystem<'a>,
    germ: SystemGerm,
    cache: RwLock<HashMap<CoxWord, (CoxWord, usize)>>,
}

impl<'a> SystemAutomorphism<'a> {
    pub fn extend_system_germ(
        data: &'a CoxeterData,
        aut: &'a GraphAutomorphisms,
        src: GlobalSystem<'a>,
        dst: GlobalSystem<'a>,
        germ: SystemGerm,
    ) -> Self {
        let cache = RwLock::new(HashMap::from([(germ.0.clone(), (germ.1.clone(), germ.2))]));
        SystemAutomorphism {
            data,
            aut,
            src,
            dst,
            germ,
            cache,
        }
    }

    /// Carries `(w, w', f)` across facet `ty` of `w`:
    /// `f_next = σ'_{v'} ∘ f ∘ σ_v`.
    fn transport(&self, w: &CoxWord, image: &(CoxWord, usize), ty: usize) -> Result<(CoxWord, CoxWord, usize)> {
        let d = self.data;
        let next = d.multiply(w, &d.generator(ty))?;
        let back = self.src.chart(d, &next, ty)?;
        let ty2 = self.aut.perm(image.1)[ty];
        let next_image = d.multiply(&image.0, &d.generator(ty2))?;
        let fwd = self.dst.chart(d, &image.0, ty2)?;
        let f = self.aut.compose([fwd, image.1, back]);
        Ok((next, next_image, f))
    }

    pub fn evaluate(&self, w: &CoxWord) -> Result<(CoxWord, usize)> {
        if let Some(x) = self.cache.read().expect("cache lock").get(w) {
            return Ok(x.clone());
        }
        let d = self.data;
        let path = d.multiply(&d.inverse(&self.germ.0), w)?;
        let mut cur = self.germ.0.clone();
        let mut img = (self.germ.1.clone(), self.germ.2);
        let mut fresh = Vec::new();
        for &s in path.letters() {
            let cached = self.cache.read().expect("cache lock").get(&d.multiply(&cur, &d.generator(s))?).cloned();
            let (next, next_img) = match cached {
                Some(x) => (d.multiply(&cur, &d.generator(s))?, x),
                None => {
                    let (n, ni, f) = self.transport(&cur, &img, s)?;
                    fresh.push((n.clone(), (ni.clone(), f)));
                    (n, (ni, f))
                }
            };
            cur = next;
            img = next_img;
        }
        self.cache.write().expect("cache lock").extend(fresh);
        Ok(img)
    }

    /// Checks that every single step agrees with `evaluate` and every
    /// gallery winding once around a polygon closes, for blocks within
    /// `radius` of the germ's block.
    pub fn certify(&self, radius: usize) -> Result<SystemCertification> {
        let d = self.data;
        let ball = d.enumerate_ball(radius, crate::davis::DEFAULT_BLOCK_CAP)?;
        let edges = d.finite_edges();
        let mut polygons = 0;
        for u in &ball {
            let w = d.multiply(&self.germ.0, u)?;
            let img = self.evaluate(&w)?;
            for s in 0..d.num_generators() {
                let (n, ni, f) = self.transport(&w, &img, s)?;
                if self.evaluate(&n)? != (ni, f) {
                    return Err(LocalReflectionError::ConsistencyFailure {
                        block: w,
                        kind: "step disagrees with evaluation".into(),
                    });
                }
            }
            for &(i, j, m) in &edges {
                let mut cur = w.clone();
                let mut cur_img = img.clone();
                for k in 0..2 * m as usize {
                    let ty = if k % 2 == 0 { i } else { j };
                    let (n, ni, f) = self.transport(&cur, &cur_img, ty)?;
                    cur = n;
                    cur_img = (ni, f);
                }
                if cur != w || cur_img != img {
                    return Err(LocalReflectionError::ConsistencyFailure {
                        block: w,
                        kind: "polygon gallery does not close".into(),
                    });
                }
                polygons += 1;
            }
        }
        Ok(SystemCertification {
            radius,
            blocks: ball.len(),
            polygons,
        })
    }
}

/// A conjugated kernel element written as `w ∘ β` with `w ∈ W` and `β` a
/// graph automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectForm {
    pub generator: CoxWord,
    pub translation: CoxWord,
    pub graph_automorphism: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemWitness {
    pub radius: usize,
    pub forms: Vec<SemidirectForm>,
}

/// Kernel generators of a quotient's defining map: Schreier generators
/// over the transversal of shortest words.
pub fn kernel_generators(region: &Region) -> Result<Vec<CoxWord>> {
    let d = region.data();
    let n = region.blocks.num_blocks();
    let base = (0..n)
        .find(|&b| region.blocks.block_of_word(&CoxWord::default()) == Some(b))
        .ok_or_else(|| LocalReflectionError::OutOfRegion(CoxWord::default()))?;
    let mut rep: Vec<Option<CoxWord>> = vec![None; n];
    rep[base] = Some(CoxWord::default());
    let mut queue = VecDeque::from([base]);
    while let Some(b) = queue.pop_front() {
        for s in 0..d.num_generators() {
            if let Some(c) = region.blocks.neighbor(b, s) {
                if rep[c].is_none() {
                    rep[c] = Some(d.multiply(rep[b].as_ref().expect("visited"), &d.generator(s))?);
                    queue.push_back(c);
                }
            }
        }
    }
    let mut gens = BTreeSet::new();
    for b in 0..n {
        let Some(t) = &rep[b] else { continue };
        for s in 0..d.num_generators() {
            let Some(c) = region.blocks.neighbor(b, s) else { continue };
            let ts = d.multiply(t, &d.generator(s))?;
            let g = d.multiply(&ts, &d.inverse(rep[c].as_ref().expect("visited")))?;
            if !g.is_empty() {
                gens.insert(g);
            }
        }
    }
    Ok(gens.into_iter().collect())
}

/// For a holonomy-free system on a quotient, conjugates each kernel
/// generator by the extension carrying the pulled-back system to `σ^W`, and
/// checks on the radius ball that the result is `w ∘ β`.
pub fn system_witness(region: &Region, sigma: &LRSystem, radius: usize) -> Result<SystemWitness> {
    if !region.blocks.is_quotient() {
        return Err(LocalReflectionError::SizeMismatch);
    }
    for t in region.interior_triangles() {
        if holonomy(region, sigma, t)? != 0 {
            return Err(LocalReflectionError::HolonomyPresent(t));
        }
    }
    let d = region.data();
    let aut = &region.aut;
    let pulled = GlobalSystem::Region(region, sigma);
    let id: SystemGerm = (CoxWord::default(), CoxWord::default(), 0);
    let f = SystemAutomorphism::extend_system_germ(d, aut, pulled, GlobalSystem::Coxeter, id.clone());
    let finv = SystemAutomorphism::extend_system_germ(d, aut, GlobalSystem::Coxeter, pulled, id);
    let ball = d.enumerate_ball(radius, crate::davis::DEFAULT_BLOCK_CAP)?;
    let mut forms = Vec::new();
    for n in kernel_generators(region)? {
        let image_of = |c: &CoxWord| -> Result<(CoxWord, usize)> {
            let (pre, delta) = finv.evaluate(c)?;
            let moved = d.multiply(&n, &pre)?;
            let (img, eps) = f.evaluate(&moved)?;
            Ok((img, aut.mul(eps, delta)))
        };
        let (w0, beta) = image_of(&CoxWord::default())?;
        for c in &ball {
            let expected = d.multiply(&w0, &aut.act_on_word(d, beta, c)?)?;
            if image_of(c)? != (expected, beta) {
                return Err(LocalReflectionError::ConsistencyFailure {
                    block: c.clone(),
                    kind: format!("conjugate of {:?} is not of the form w∘β", n.letters()),
                });
            }
        }
        forms.push(SemidirectForm {
            generator: n,
            translation: w0,
            graph_automorphism: aut.perm(beta).to_vec(),
        });
    }
    Ok(SystemWitness { radius, forms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davis::DEFAULT_BLOCK_CAP;
    use crate::groups::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `K_{2,3}` with parts `{0,1}` and `{2,3,4}`.
    pub(crate) fn k23(m: u32) -> CoxeterData {
        let names = (0..5).map(|i| format!("s{i}")).collect();
        let w: Vec<(usize, usize, u32)> = [0, 1]
            .iter()
            .flat_map(|&a| [2, 3, 4].map(|b| (a, b, m)))
            .collect();
        CoxeterData::new(names, &w).unwrap()
    }

    /// `D_8 = ⟨x, y⟩` as permutations of the square's corners; part `{0,1}`
    /// maps to `x`, the other part to `y`.
    pub(crate) fn k23_dihedral_quotient(d: &CoxeterData) -> GroupHom {
        let x = vec![1, 0, 3, 2];
        let y = vec![0, 3, 2, 1];
        let (g, elems) = FiniteGroup::generated_by_permutations(&[x.clone(), y.clone()], 4);
        let find = |p: &Vec<usize>| elems.iter().position(|e| e == p).unwrap();
        let images = (0..5).map(|i| if i < 2 { find(&x) } else { find(&y) }).collect();
        GroupHom::from_coxeter(d, g, images).unwrap()
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(GraphAutomorphisms::new(&CoxeterData::cycle(4, 2)).order(), 8);
        let r = Region::ball(&k23(4), 0, DEFAULT_BLOCK_CAP).unwrap();
        assert_eq!(r.aut.order(), 12);
        assert_eq!(r.facet_group(0).len(), 1);
        assert_eq!(r.facet_group(2).len(), 2);
    }

    #[test]
    fn sigma_w_has_no_holonomy() {
        let r = Region::ball(&CoxeterData::cycle(4, 4), 4, DEFAULT_BLOCK_CAP).unwrap();
        let s = LRSystem::sigma_w(&r);
        let tris = r.interior_triangles();
        assert!(!tris.is_empty());
        for t in tris {
            assert_eq!(holonomy(&r, &s, t).unwrap(), 0);
        }
    }

    #[test]
    fn holonomy_prime_is_inverse_and_formula_holds() {
        let r = Region::ball(&k23(4), 4, DEFAULT_BLOCK_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let s = LRSystem::random(&r, &mut rng);
            let f = Rank1Field::random_symmetric(&r, &s, &mut rng);
            for t in r.interior_triangles().into_iter().take(40) {
                let h = holonomy(&r, &s, t).unwrap();
                assert_eq!(holonomy(&r, &s, t.prime()).unwrap(), r.aut.inv(h));
                let g = g_sequence(&r, &s, &f, t).unwrap();
                assert!(g.alternates && g.first_is_seed && g.formula_holds);
            }
        }
    }

    #[test]
    fn field_roundtrip_and_asymmetry() {
        let r = Region::ball(&k23(4), 2, DEFAULT_BLOCK_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = LRSystem::random(&r, &mut rng);
        let f = Rank1Field::random_symmetric(&r, &s, &mut rng);
        let s2 = apply_field(&r, &s, &f).unwrap();
        assert_eq!(field_between(&r, &s, &s2), f);
        assert_eq!(apply_field(&r, &s, &Rank1Field::identity(&r)).unwrap(), s);
        let e = (0..r.num_edges()).find(|&e| r.facet_group(r.x.edges[e].ty).len() > 1).unwrap();
        let mut bad = Rank1Field::identity(&r);
        bad.values[e][0] = r.facet_group(r.x.edges[e].ty)[1];
        assert_eq!(apply_field(&r, &s, &bad), Err(LocalReflectionError::NotSymmetric(e)));
    }

    #[test]
    fn decomposition_exists() {
        let r = Region::ball(&k23(4), 4, DEFAULT_BLOCK_CAP).unwrap();
        let tr = Transversal::new(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let s = LRSystem::random(&r, &mut rng);
            let phi = decompose_holonomy(&r, &s, &tr).unwrap();
            assert_eq!(is_decomposition(&r, &s, &phi, &tr).unwrap(), None);
        }
    }

    #[test]
    fn ewall_family_is_bijective() {
        let r = Region::ball(&k23(4), 4, DEFAULT_BLOCK_CAP).unwrap();
        let tr = Transversal::new(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = LRSystem::random(&r, &mut rng);
        let phi = decompose_holonomy(&r, &s, &tr).unwrap();
        let walls = r.ewalls().unwrap();
        let wall = walls
            .iter()
            .find(|w| !w.diameters.is_empty() && w.edges().iter().any(|&e| r.facet_group(r.x.edges[e].ty).len() > 1))
            .unwrap();
        let seed = *wall.edges().iter().find(|&&e| r.facet_group(r.x.edges[e].ty).len() > 1).unwrap();
        let fam = ewall_field_family(&r, &s, &phi, &tr, wall, seed).unwrap();
        let distinct: BTreeSet<Vec<[usize; 2]>> = fam.iter().map(|f| f.values.clone()).collect();
        assert_eq!(distinct.len(), fam.len());
        for f in &fam {
            assert!(verify_ewall_field(&r, &s, &phi, &tr, wall, f).unwrap());
        }
    }

    #[test]
    fn kill_on_quotient() {
        let d = k23(4);
        let r = Region::quotient(&d, &k23_dihedral_quotient(&d)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = LRSystem::random(&r, &mut rng);
        assert!(r.interior_triangles().iter().any(|&t| holonomy(&r, &s, t).unwrap() != 0));
        let it = kill_all_holonomy(&r, &s).unwrap();
        assert!(it.stuck.is_empty(), "{:?}", it.stuck);
        assert!(!it.steps.is_empty());
        assert!(it.holonomy_free);
        assert!(it.phi.is_identity());
        let w = system_witness(&r, &it.system, 2).unwrap();
        assert!(!w.forms.is_empty());
        assert!(matches!(system_witness(&r, &s, 2), Err(LocalReflectionError::HolonomyPresent(_))));
    }

    #[test]
    fn identity_germ_extension() {
        let d = CoxeterData::cycle(4, 2);
        let aut = GraphAutomorphisms::new(&d);
        let id = (CoxWord::default(), CoxWord::default(), 0);
        let f = SystemAutomorphism::extend_system_germ(&d, &aut, GlobalSystem::Coxeter, GlobalSystem::Coxeter, id);
        for w in d.enumerate_ball(3, DEFAULT_BLOCK_CAP).unwrap() {
            assert_eq!(f.evaluate(&w).unwrap(), (w.clone(), 0));
        }
        f.certify(2).unwrap();
    }

    #[test]
    fn graph_automorphism_germs() {
        let d = CoxeterData::cycle(4, 2);
        let aut = GraphAutomorphisms::new(&d);
        let mut images = BTreeSet::new();
        for b in 0..aut.order() {
            let germ = (CoxWord::default(), CoxWord::default(), b);
            let f = SystemAutomorphism::extend_system_germ(&d, &aut, GlobalSystem::Coxeter, GlobalSystem::Coxeter, germ);
            f.certify(1).unwrap();
            let mut tbl = Vec::new();
            for w in d.enumerate_ball(2, DEFAULT_BLOCK_CAP).unwrap() {
                let (img, c) = f.evaluate(&w).unwrap();
                assert_eq!(c, b);
                assert_eq!(img, aut.act_on_word(&d, b, &w).unwrap());
                tbl.push(img);
            }
            images.insert(tbl);
        }
        assert_eq!(images.len(), 8);
    }
}
