//! Finite balls of the right-angled building of a graph product.
//!
//! Chambers are group elements. The vertex of type `J` of chamber `γ` is the
//! coset `γΓ_J`, keyed by its shortest representative, so gluing chambers is
//! plain key equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{cubical_cone, ComplexError, SimplicialComplex, TypedCubeComplex};
use crate::graph_product::{mask_iter, NormalForm, ProductError, ProductPresentation, DEFAULT_BALL_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("residue of type {0:#b} is infinite; a cap is required")]
    ResidueInfinite(u64),
    #[error("residue has the wrong type for this operation")]
    WrongResidueType,
    #[error("gallery is not closed at the base chamber")]
    NotClosed,
    #[error("consecutive chambers {0} and {1} of the gallery are not adjacent")]
    NotAGallery(usize, usize),
    #[error("vertex {0} is on the boundary of the ball")]
    VertexOnBoundary(usize),
    #[error("isomorphism failure: {0}")]
    IsomorphismFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdjacencyType {
    Equal,
    Type(usize),
    NotAdjacent,
}

/// A vertex of the building: a type and a canonical coset representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BuildingVertex {
    pub ty: u64,
    pub rep: NormalForm,
}

impl BuildingVertex {
    pub fn rank(&self) -> u32 {
        self.ty.count_ones()
    }
}

/// The residue of type `mask` containing `base`, with canonical base chamber.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub mask: u64,
    pub base: NormalForm,
}

/// The building of a graph product, explored through finite pieces.
#[derive(Debug, Clone)]
pub struct Building {
    p: ProductPresentation,
    cone: TypedCubeComplex,
}

impl Building {
    pub fn new(p: ProductPresentation) -> Result<Self, BuildingError> {
        let cone = cubical_cone(&Self::clique_complex(&p))?;
        Ok(Building { p, cone })
    }

    /// The flag complex of the graph: one simplex per nonempty clique.
    pub fn clique_complex(p: &ProductPresentation) -> SimplicialComplex {
        let mut n = SimplicialComplex::empty();
        for c in p.cliques() {
            if c != 0 {
                n.add_simplex(mask_iter(c).collect());
            }
        }
        n
    }

    pub fn presentation(&self) -> &ProductPresentation {
        &self.p
    }

    /// The model chamber: the cubical cone over the clique complex.
    pub fn chamber_model(&self) -> &TypedCubeComplex {
        &self.cone
    }

    /// Shortest representative of `γΓ_J`: strip syllables in `J` that
    /// commute with everything after them until none remain.
    pub fn coset_rep(&self, g: &NormalForm, mask: u64) -> NormalForm {
        let mut syl = g.syllables().to_vec();
        loop {
            let pos = (0..syl.len()).rev().find(|&k| {
                let v = syl[k].0;
                mask >> v & 1 == 1 && syl[k + 1..].iter().all(|&(w, _)| self.p.adjacent(v, w))
            });
            match pos {
                Some(k) => {
                    syl.remove(k);
                }
                None => break,
            }
        }
        self.p.normalize(&syl).expect("subword of a normal form")
    }

    pub fn vertex_of(&self, chamber: &NormalForm, ty: u64) -> BuildingVertex {
        BuildingVertex {
            ty,
            rep: self.coset_rep(chamber, ty),
        }
    }

    pub fn adjacency_type(&self, c1: &NormalForm, c2: &NormalForm) -> AdjacencyType {
        let d = self.p.quotient(c1, c2);
        match d.syllables() {
            [] => AdjacencyType::Equal,
            [(v, _)] => AdjacencyType::Type(*v),
            _ => AdjacencyType::NotAdjacent,
        }
    }

    pub fn residue(&self, mask: u64, chamber: &NormalForm) -> Residue {
        Residue {
            mask,
            base: self.coset_rep(chamber, mask),
        }
    }

    /// Chambers of a residue in canonical order. Infinite residues need a cap.
    pub fn residue_chambers(&self, r: &Residue, cap: Option<usize>) -> Result<Vec<NormalForm>, BuildingError> {
        let elems = if self.p.is_clique(r.mask) {
            self.p.enumerate_ball_in(r.mask, r.mask.count_ones() as usize, DEFAULT_BALL_CAP)?
        } else {
            let cap = cap.ok_or(BuildingError::ResidueInfinite(r.mask))?;
            let mut radius = 0;
            loop {
                let b = self.p.enumerate_ball_in(r.mask, radius, cap.saturating_mul(64).max(1))?;
                if b.len() >= cap {
                    break b.into_iter().take(cap).collect();
                }
                radius += 1;
            }
        };
        let mut out: Vec<NormalForm> = elems.iter().map(|h| self.p.multiply(&r.base, h)).collect();
        out.sort();
        Ok(out)
    }

    /// Component of each chamber in the `i`-boundary of an `i⊥=`-residue:
    /// the `{i}`-coordinate of `base⁻¹ γ`.
    pub fn i_boundary_components(&self, i: usize, r: &Residue, chambers: &[NormalForm]) -> Result<IBoundary, BuildingError> {
        if r.mask != self.p.perp_eq(i) {
            return Err(BuildingError::WrongResidueType);
        }
        let component = chambers
            .iter()
            .map(|c| self.p.retract_vertex(i, &self.p.quotient(&r.base, c)))
            .collect();
        Ok(IBoundary {
            vertex: i,
            count: self.p.group(i).order(),
            component,
        })
    }

    /// Chambers at gallery distance at most `radius` from the base chamber.
    pub fn ball(&self, radius: usize, cap: usize) -> Result<BuildingBall, BuildingError> {
        let chambers = self.p.enumerate_ball(radius, cap)?;
        let mut ball = self.chamber_union(&chambers, self.p.all_mask())?;
        ball.radius = Some(radius);
        Ok(ball)
    }

    /// Union of the given chambers, each restricted to types inside `mask`.
    pub fn chamber_union(&self, chambers: &[NormalForm], mask: u64) -> Result<BuildingBall, BuildingError> {
        let mut complex = TypedCubeComplex::new();
        let mut keys = Vec::new();
        let mut key_index: HashMap<BuildingVertex, usize> = HashMap::new();
        let mut chamber_vertices = Vec::with_capacity(chambers.len());
        let model_vertices: Vec<usize> = (0..self.cone.num_vertices())
            .filter(|&v| self.cone.vertex_type(v) & !mask == 0)
            .collect();
        for c in chambers {
            let mut local = vec![usize::MAX; self.cone.num_vertices()];
            for &mv in &model_vertices {
                let key = self.vertex_of(c, self.cone.vertex_type(mv));
                let id = *key_index.entry(key.clone()).or_insert_with(|| {
                    keys.push(key.clone());
                    complex.add_vertex(key.ty)
                });
                local[mv] = id;
            }
            for cube in self.cone.cubes() {
                if cube.dim() == 0 || cube.corners.iter().any(|&v| local[v] == usize::MAX) {
                    continue;
                }
                complex.add_cube(cube.corners.iter().map(|&v| local[v]).collect())?;
            }
            chamber_vertices.push(model_vertices.iter().map(|&mv| local[mv]).collect());
        }
        if let Some(&c) = key_index.get(&BuildingVertex {
            ty: 0,
            rep: NormalForm::default(),
        }) {
            complex.set_center(c);
        }
        let chamber_index = chambers.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        Ok(BuildingBall {
            mask,
            radius: None,
            chambers: chambers.to_vec(),
            chamber_index,
            complex,
            vertices: keys,
            vertex_index: key_index,
            chamber_vertices,
        })
    }

    /// Whether every chamber of the vertex's coset lies in the ball.
    pub fn is_interior(&self, ball: &BuildingBall, v: usize) -> bool {
        let key = &ball.vertices[v];
        let Ok(elems) = self.p.enumerate_ball_in(key.ty, key.ty.count_ones() as usize, DEFAULT_BALL_CAP) else {
            return false;
        };
        elems.iter().all(|h| ball.chamber_index.contains_key(&self.p.multiply(&key.rep, h)))
    }

    /// Chambers of the ball containing vertex `v`.
    pub fn chambers_at(&self, ball: &BuildingBall, v: usize) -> Vec<usize> {
        (0..ball.chambers.len()).filter(|&c| ball.chamber_vertices[c].contains(&v)).collect()
    }

    /// Lower link at an interior vertex is a thickened octahedron.
    pub fn lower_link_check(&self, ball: &BuildingBall, v: usize) -> Result<bool, BuildingError> {
        if !self.is_interior(ball, v) {
            return Err(BuildingError::VertexOnBoundary(v));
        }
        Ok(ball.complex.lower_link(v)?.is_thickened_octahedron())
    }

    /// Builds `R(i⊥=)` over `base` on the chambers `a h` (`a ∈ G_i`, `|h| ≤ radius`
    /// in `Γ_{i⊥}`) and checks it against `R({i}) × R(i⊥)` cell by cell.
    pub fn residue_product_check(&self, i: usize, base: &NormalForm, radius: usize) -> Result<ProductCheck, BuildingError> {
        let p = &self.p;
        let perp = p.perp(i);
        let gi = p.enumerate_ball_in(1 << i, 1, DEFAULT_BALL_CAP)?;
        let hs = p.enumerate_ball_in(perp, radius, DEFAULT_BALL_CAP)?;
        let left_ch: Vec<NormalForm> = gi.iter().map(|a| p.multiply(base, a)).collect();
        let right_ch: Vec<NormalForm> = hs.iter().map(|h| p.multiply(base, h)).collect();
        let mut whole_ch: Vec<NormalForm> = gi
            .iter()
            .flat_map(|a| hs.iter().map(move |h| (a, h)))
            .map(|(a, h)| p.multiply(base, &p.multiply(a, h)))
            .collect();
        whole_ch.sort();
        let left = self.chamber_union(&left_ch, 1 << i)?;
        let right = self.chamber_union(&right_ch, perp)?;
        let whole = self.chamber_union(&whole_ch, p.perp_eq(i))?;
        let prod = left.complex.product(&right.complex);
        let nr = right.complex.num_vertices();
        let mut map = Vec::with_capacity(prod.num_vertices());
        for a in 0..left.complex.num_vertices() {
            for b in 0..nr {
                let (ka, kb) = (&left.vertices[a], &right.vertices[b]);
                let g = p.multiply(&p.quotient(base, &ka.rep), &p.quotient(base, &kb.rep));
                let key = self.vertex_of(&p.multiply(base, &g), ka.ty | kb.ty);
                let w = whole
                    .vertex_index
                    .get(&key)
                    .ok_or_else(|| BuildingError::IsomorphismFailure(format!("no vertex for {key:?}")))?;
                map.push(*w);
            }
        }
        let iso = prod
            .check_isomorphism(&whole.complex, &map)
            .map_err(|e| BuildingError::IsomorphismFailure(e.to_string()))?;
        Ok(ProductCheck {
            vertex: i,
            left_chambers: left_ch.len(),
            right_chambers: right_ch.len(),
            chambers: whole_ch.len(),
            vertices: iso.vertices,
            cubes: iso.cubes,
            cells_by_dim: whole.complex.count_by_dim(),
        })
    }

    /// Moves of a gallery as syllables; stutters become identity syllables on vertex 0.
    fn gallery_word(&self, g: &[NormalForm]) -> Result<Vec<(usize, usize)>, BuildingError> {
        let mut w = Vec::new();
        for k in 1..g.len() {
            let d = self.p.quotient(&g[k - 1], &g[k]);
            match d.syllables() {
                [] => w.push((0, self.p.group(0).identity())),
                [s] => w.push(*s),
                _ => return Err(BuildingError::NotAGallery(k - 1, k)),
            }
        }
        Ok(w)
    }

    /// Reduces a closed gallery at the base chamber to the empty gallery by
    /// rank-1 moves and commutations; each commutation is one lassoe.
    pub fn reduce_closed_gallery(&self, g: &[NormalForm]) -> Result<LassoeReduction, BuildingError> {
        let p = &self.p;
        let id = NormalForm::default();
        if g.first() != Some(&id) || g.last() != Some(&id) {
            return Err(BuildingError::NotClosed);
        }
        let mut w = self.gallery_word(g)?;
        let mut moves = Vec::new();
        let mut lassoes = Vec::new();
        loop {
            if let Some(k) = w.iter().position(|&(v, x)| x == p.group(v).identity()) {
                moves.push(Move::Drop { pos: k, syllable: w[k] });
                w.remove(k);
                continue;
            }
            // Nearest pair on the same vertex separated only by commuting syllables.
            let mut found = None;
            'outer: for j in 0..w.len() {
                for i in (0..j).rev() {
                    if w[i].0 == w[j].0 {
                        found = Some((i, j));
                        break 'outer;
                    }
                    if !p.adjacent(w[i].0, w[j].0) {
                        break;
                    }
                }
            }
            let Some((i, j)) = found else { break };
            for k in (i + 1..j).rev() {
                let prefix = p.normalize(&w[..k]).expect("valid syllables");
                lassoes.push(Lassoe {
                    prefix,
                    first: w[k],
                    second: w[k + 1],
                });
                moves.push(Move::Swap { pos: k });
                w.swap(k, k + 1);
            }
            let (v, a) = w[i];
            let b = w[i + 1].1;
            moves.push(Move::Merge {
                pos: i,
                vertex: v,
                left: a,
                right: b,
            });
            w[i] = (v, p.group(v).mul(a, b));
            w.remove(i + 1);
        }
        if !w.is_empty() {
            return Err(BuildingError::NotClosed);
        }
        Ok(LassoeReduction { moves, lassoes })
    }

    /// Rebuilds the gallery from a reduction certificate by undoing its moves.
    pub fn replay(&self, cert: &LassoeReduction) -> Vec<NormalForm> {
        let mut w: Vec<(usize, usize)> = Vec::new();
        for m in cert.moves.iter().rev() {
            match *m {
                Move::Drop { pos, syllable } => w.insert(pos, syllable),
                Move::Swap { pos } => w.swap(pos, pos + 1),
                Move::Merge { pos, vertex, left, right } => {
                    w[pos] = (vertex, left);
                    w.insert(pos + 1, (vertex, right));
                }
            }
        }
        let mut out = vec![NormalForm::default()];
        for &(v, x) in &w {
            let next = self.p.multiply_syllable(out.last().expect("nonempty"), v, x);
            out.push(next);
        }
        out
    }

    /// The closed gallery of a lassoe: out along its prefix, round the square, back.
    pub fn lassoe_gallery(&self, l: &Lassoe) -> Vec<NormalForm> {
        let p = &self.p;
        let mut out = vec![NormalForm::default()];
        let mut cur = NormalForm::default();
        for &(v, x) in l.prefix.syllables() {
            cur = p.multiply_syllable(&cur, v, x);
            out.push(cur.clone());
        }
        let (i, a) = l.first;
        let (j, b) = l.second;
        let p1 = p.multiply_syllable(&cur, i, a);
        let p2 = p.multiply_syllable(&p1, j, b);
        let p3 = p.multiply_syllable(&cur, j, b);
        out.extend([p1, p2, p3, cur.clone()]);
        for &(v, x) in l.prefix.syllables().iter().rev() {
            cur = p.multiply_syllable(&cur, v, p.group(v).inv(x));
            out.push(cur.clone());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IBoundary {
    pub vertex: usize,
    pub count: usize,
    /// `G_i` element labelling the component of each chamber.
    pub component: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCheck {
    pub vertex: usize,
    pub left_chambers: usize,
    pub right_chambers: usize,
    pub chambers: usize,
    pub vertices: usize,
    pub cubes: usize,
    pub cells_by_dim: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Drop { pos: usize, syllable: (usize, usize) },
    Swap { pos: usize },
    Merge { pos: usize, vertex: usize, left: usize, right: usize },
}

/// `prefix · (1, a, ab, b, 1) · prefix⁻¹` for commuting syllables `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lassoe {
    pub prefix: NormalForm,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoeReduction {
    pub moves: Vec<Move>,
    pub lassoes: Vec<Lassoe>,
}

/// A finite union of chambers as a typed cube complex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuildingBall {
    pub mask: u64,
    pub radius: Option<usize>,
    pub chambers: Vec<NormalForm>,
    #[serde(skip)]
    pub chamber_index: HashMap<NormalForm, usize>,
    pub complex: TypedCubeComplex,
    pub vertices: Vec<BuildingVertex>,
    #[serde(skip)]
    pub vertex_index: HashMap<BuildingVertex, usize>,
    /// Per chamber, its vertices in model order.
    pub chamber_vertices: Vec<Vec<usize>>,
}

impl BuildingBall {
    pub fn num_chambers(&self) -> usize {
        self.chambers.len()
    }

    pub fn vertex(&self, key: &BuildingVertex) -> Option<usize> {
        self.vertex_index.get(key).copied()
    }

    /// Pairs of chambers differing by one syllable, with its vertex.
    pub fn chamber_adjacency(&self, p: &ProductPresentation) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.chambers.len()];
        for (k, c) in self.chambers.iter().enumerate() {
            for v in 0..p.num_vertices() {
                let g = p.group(v);
                for x in 0..g.order() {
                    if x == g.identity() {
                        continue;
                    }
                    if let Some(&m) = self.chamber_index.get(&p.multiply_syllable(c, v, x)) {
                        out[k].push((m, v));
                    }
                }
            }
        }
        out
    }

    /// Counts of vertices by type.
    pub fn type_counts(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for k in &self.vertices {
            *m.entry(k.ty).or_insert(0) += 1;
        }
        m
    }

    /// DOT rendering of the chamber graph with edge labels naming the vertex group.
    pub fn chamber_dot(&self, p: &ProductPresentation) -> String {
        let mut s = String::from("graph chambers {\n");
        for (k, c) in self.chambers.iter().enumerate() {
            let _ = writeln!(s, "  c{k} [label=\"{}\"];", p.format_word(c));
        }
        for (k, nb) in self.chamber_adjacency(p).iter().enumerate() {
            for &(m, v) in nb {
                if k < m {
                    let _ = writeln!(s, "  c{k} -- c{m} [label=\"{}\"];", p.name(v));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// Rebuilds the skipped lookup tables after deserialization.
    pub fn reindex(&mut self) {
        self.complex.reindex();
        self.chamber_index = self.chambers.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        self.vertex_index = self.vertices.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    fn edge(a: usize, b: usize) -> Building {
        let p = ProductPresentation::new(
            vec!["i".into(), "j".into()],
            &[(0, 1)],
            vec![FiniteGroup::cyclic(a), FiniteGroup::cyclic(b)],
        )
        .unwrap();
        Building::new(p).unwrap()
    }

    #[test]
    fn adjacency() {
        let b = edge(2, 2);
        let p = b.presentation();
        let id = p.identity();
        assert_eq!(b.adjacency_type(&id, &id), AdjacencyType::Equal);
        assert_eq!(b.adjacency_type(&id, &p.syllable(1, 1)), AdjacencyType::Type(1));
        let two = p.multiply(&p.syllable(0, 1), &p.syllable(1, 1));
        assert_eq!(b.adjacency_type(&id, &two), AdjacencyType::NotAdjacent);
    }

    #[test]
    fn residues() {
        let b = edge(2, 3);
        let id = NormalForm::default();
        assert_eq!(b.residue_chambers(&b.residue(0b11, &id), None).unwrap().len(), 6);
        assert_eq!(b.residue_chambers(&b.residue(0, &id), None).unwrap(), vec![id.clone()]);
        assert_eq!(b.residue_chambers(&b.residue(0b01, &id), None).unwrap().len(), 2);
    }

    #[test]
    fn edge_building_is_a_grid() {
        let b = edge(2, 2);
        let ball = b.ball(2, 1000).unwrap();
        assert_eq!(ball.num_chambers(), 4);
        assert_eq!(ball.complex.num_vertices(), 9);
        assert_eq!(ball.complex.count_by_dim(), vec![9, 12, 4]);
        let r0 = b.ball(0, 1000).unwrap();
        assert_eq!(r0.complex.count_by_dim(), b.chamber_model().count_by_dim());
    }

    #[test]
    fn cycle_ball_counts() {
        let b = Building::new(ProductPresentation::cycle(6, FiniteGroup::cyclic(2))).unwrap();
        assert_eq!(b.ball(1, 1000).unwrap().num_chambers(), 7);
    }

    #[test]
    fn lassoes() {
        let b = edge(2, 2);
        let p = b.presentation();
        let id = NormalForm::default();
        let si = p.syllable(0, 1);
        let r = b.reduce_closed_gallery(&[id.clone(), si.clone(), id.clone()]).unwrap();
        assert!(r.lassoes.is_empty());
        let sj = p.syllable(1, 1);
        let sij = p.multiply(&si, &sj);
        let g = vec![id.clone(), si.clone(), sij.clone(), sj.clone(), id.clone()];
        let r = b.reduce_closed_gallery(&g).unwrap();
        assert_eq!(r.lassoes.len(), 1);
        assert_eq!(b.replay(&r), g);
        let mut gg = g.clone();
        gg.extend(g[1..].iter().cloned());
        let r = b.reduce_closed_gallery(&gg).unwrap();
        assert_eq!(r.lassoes.len(), 2);
        assert_eq!(b.replay(&r), gg);
    }

    #[test]
    fn product_checks() {
        let b = edge(2, 2);
        let r = b.residue_product_check(0, &NormalForm::default(), 2).unwrap();
        assert_eq!(r.chambers, 4);
        assert_eq!(r.vertices, 9);
        let iso = Building::new(ProductPresentation::new(vec!["a".into()], &[], vec![FiniteGroup::cyclic(3)]).unwrap()).unwrap();
        let r = iso.residue_product_check(0, &NormalForm::default(), 2).unwrap();
        assert_eq!((r.right_chambers, r.chambers), (1, 3));
    }
}
