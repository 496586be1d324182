//! Abstract simplicial complexes and typed cube complexes.
//!
//! Cube complexes carry a type per vertex, stored as a bitmask over a fixed
//! index set. Cubes keep their corners indexed by a binary mask so that the
//! interval structure (direction pairings) is explicit.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph_product::mask_iter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("cube complex is not simple at vertex {0}")]
    NotSimple(usize),
    #[error("vertex {0} exceeds the 64-vertex type limit")]
    TooManyVertices(usize),
    #[error("isomorphism check failed: {0}")]
    IsomorphismFailure(String),
    #[error("malformed cube: {0}")]
    MalformedCube(String),
}

/// A downward-closed family of nonempty finite vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertices: BTreeSet<usize>,
    simplices: BTreeSet<Vec<usize>>,
}

/// Outcome of the flag test; the witness is a minimal clique without a simplex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagReport {
    pub flag: bool,
    pub witness: Option<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            vertices: BTreeSet::new(),
            simplices: BTreeSet::new(),
        }
    }

    /// Downward closure of the given facets; listed vertices become 0-simplices.
    pub fn from_facets<I, F>(vertices: I, facets: F) -> Self
    where
        I: IntoIterator<Item = usize>,
        F: IntoIterator<Item = Vec<usize>>,
    {
        let mut c = Self::empty();
        for v in vertices {
            c.add_simplex(vec![v]);
        }
        for f in facets {
            c.add_simplex(f);
        }
        c
    }

    /// Adds a simplex together with all of its faces.
    pub fn add_simplex(&mut self, mut s: Vec<usize>) {
        s.sort_unstable();
        s.dedup();
        if s.is_empty() || self.simplices.contains(&s) {
            return;
        }
        let k = s.len();
        for m in 1u64..(1 << k) {
            let face: Vec<usize> = mask_iter(m).map(|b| s[b]).collect();
            self.simplices.insert(face);
        }
        self.vertices.extend(s);
    }

    /// Discrete set of points.
    pub fn discrete(points: &[usize]) -> Self {
        Self::from_facets(points.iter().copied(), std::iter::empty())
    }

    /// Cycle graph on `0..n`.
    pub fn cycle(n: usize) -> Self {
        Self::from_facets(0..n, (0..n).map(|i| vec![i, (i + 1) % n]))
    }

    /// Full simplex on the given vertices.
    pub fn simplex(vs: &[usize]) -> Self {
        Self::from_facets(vs.iter().copied(), [vs.to_vec()])
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn simplices(&self) -> &BTreeSet<Vec<usize>> {
        &self.simplices
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        let e = if a < b { vec![a, b] } else { vec![b, a] };
        a != b && self.simplices.contains(&e)
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in &self.simplices {
            let maximal = !self
                .simplices
                .iter()
                .any(|t| t.len() > s.len() && s.iter().all(|x| t.binary_search(x).is_ok()));
            if maximal {
                out.push(s.clone());
            }
        }
        out
    }

    /// Adds `offset` to every vertex label.
    pub fn shifted(&self, offset: usize) -> Self {
        SimplicialComplex {
            vertices: self.vertices.iter().map(|v| v + offset).collect(),
            simplices: self
                .simplices
                .iter()
                .map(|s| s.iter().map(|v| v + offset).collect())
                .collect(),
        }
    }

    /// Join of complexes on disjoint vertex sets.
    pub fn join(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.simplices {
            out.simplices.insert(t.clone());
        }
        for s in &self.simplices {
            for t in &other.simplices {
                let mut u = s.clone();
                u.extend(t);
                u.sort_unstable();
                out.simplices.insert(u);
            }
        }
        out.vertices.extend(other.vertices.iter().copied());
        out
    }

    /// Flag test. Cliques are extended one vertex at a time starting from
    /// edges, so the first clique found without a simplex is minimal.
    pub fn is_flag(&self) -> FlagReport {
        let mut level: Vec<Vec<usize>> = self.simplices.iter().filter(|s| s.len() == 2).cloned().collect();
        while !level.is_empty() {
            let mut next = Vec::new();
            for s in &level {
                let last = *s.last().expect("nonempty");
                for &v in self.vertices.range(last + 1..) {
                    if s.iter().all(|&u| self.is_adjacent(u, v)) {
                        let mut t = s.clone();
                        t.push(v);
                        if !self.simplices.contains(&t) {
                            return FlagReport {
                                flag: false,
                                witness: Some(t),
                            };
                        }
                        next.push(t);
                    }
                }
            }
            level = next;
        }
        FlagReport {
            flag: true,
            witness: None,
        }
    }

    /// Decides whether the complex is a join of nonempty discrete sets and
    /// returns the factors. The empty complex is the empty join.
    pub fn thickened_octahedron_factors(&self) -> Option<Vec<Vec<usize>>> {
        let vs: Vec<usize> = self.vertices.iter().copied().collect();
        let mut part_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for &v in &vs {
            let found = parts
                .iter()
                .position(|p| p.iter().all(|&u| !self.is_adjacent(u, v)));
            match found {
                Some(k) => {
                    parts[k].push(v);
                    part_of.insert(v, k);
                }
                None => {
                    part_of.insert(v, parts.len());
                    parts.push(vec![v]);
                }
            }
        }
        // Non-adjacency must be an equivalence relation with these classes.
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                let same = part_of[&a] == part_of[&b];
                if same == self.is_adjacent(a, b) {
                    return None;
                }
            }
        }
        let expected: usize = parts.iter().map(|p| p.len() + 1).product::<usize>() - 1;
        if expected != self.simplices.len() {
            return None;
        }
        Some(parts)
    }

    pub fn is_thickened_octahedron(&self) -> bool {
        self.thickened_octahedron_factors().is_some()
    }

    /// Bitmask of a simplex; requires vertices below 64.
    pub fn mask_of(s: &[usize]) -> u64 {
        s.iter().fold(0, |m, &v| m | 1 << v)
    }
}

/// A cube given by its `2^d` corners, indexed by a binary mask over its directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cube {
    pub corners: Vec<usize>,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.corners.len().trailing_zeros() as usize
    }

    pub fn key(&self) -> Vec<usize> {
        let mut k = self.corners.clone();
        k.sort_unstable();
        k
    }

    /// Face obtained by fixing the directions in `fixed` to the bits in `values`.
    fn face(&self, fixed: u64, values: u64) -> Cube {
        let d = self.dim();
        let free: Vec<usize> = (0..d).filter(|&k| fixed >> k & 1 == 0).collect();
        let corners = (0..1usize << free.len())
            .map(|m| {
                let mut idx = values as usize & fixed as usize;
                for (j, &k) in free.iter().enumerate() {
                    if m >> j & 1 == 1 {
                        idx |= 1 << k;
                    }
                }
                self.corners[idx]
            })
            .collect();
        Cube { corners }
    }
}

/// Cube complex with typed vertices; every face of every cube is stored.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TypedCubeComplex {
    vertex_types: Vec<u64>,
    cubes: Vec<Cube>,
    #[serde(skip)]
    cube_index: HashMap<Vec<usize>, usize>,
    #[serde(skip)]
    incident: Vec<Vec<usize>>,
    center: Option<usize>,
}

/// Result of an explicit isomorphism check between two cube complexes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub vertices: usize,
    pub cubes: usize,
    pub vertex_map: Vec<usize>,
}

impl TypedCubeComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, ty: u64) -> usize {
        let v = self.vertex_types.len();
        self.vertex_types.push(ty);
        self.incident.push(Vec::new());
        self.insert_cube(Cube { corners: vec![v] });
        v
    }

    fn insert_cube(&mut self, c: Cube) -> (usize, bool) {
        let key = c.key();
        if let Some(&id) = self.cube_index.get(&key) {
            return (id, false);
        }
        let id = self.cubes.len();
        for &v in &c.corners {
            self.incident[v].push(id);
        }
        self.cube_index.insert(key, id);
        self.cubes.push(c);
        (id, true)
    }

    /// Adds a cube and all of its faces; returns its id.
    pub fn add_cube(&mut self, corners: Vec<usize>) -> Result<usize, ComplexError> {
        if !corners.len().is_power_of_two() {
            return Err(ComplexError::MalformedCube(format!("{} corners", corners.len())));
        }
        if corners.iter().any(|&v| v >= self.vertex_types.len()) {
            return Err(ComplexError::MalformedCube("unknown corner".into()));
        }
        let mut sorted = corners.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != corners.len() {
            return Err(ComplexError::MalformedCube("repeated corner".into()));
        }
        let cube = Cube { corners };
        let d = cube.dim();
        let (id, fresh) = self.insert_cube(cube.clone());
        if fresh && d > 0 {
            for fixed in 1u64..(1 << d) {
                for values in 0u64..(1 << d) {
                    if values & !fixed != 0 {
                        continue;
                    }
                    let f = cube.face(fixed, values);
                    self.insert_cube(f);
                }
            }
        }
        Ok(id)
    }

    pub fn set_center(&mut self, v: usize) {
        self.center = Some(v);
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_types.len()
    }

    /// Number of cubes of every dimension, vertices included.
    pub fn num_cubes(&self) -> usize {
        self.cubes.len()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for c in &self.cubes {
            let d = c.dim();
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += 1;
        }
        out
    }

    pub fn vertex_type(&self, v: usize) -> u64 {
        self.vertex_types[v]
    }

    pub fn vertex_types(&self) -> &[u64] {
        &self.vertex_types
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn cube_id(&self, vertices: &[usize]) -> Option<usize> {
        let mut k = vertices.to_vec();
        k.sort_unstable();
        self.cube_index.get(&k).copied()
    }

    pub fn incident_cubes(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Union of the corner types.
    pub fn cube_type(&self, c: &Cube) -> u64 {
        c.corners.iter().fold(0, |m, &v| m | self.vertex_types[v])
    }

    /// Intersection of the corner types.
    pub fn cube_lower_type(&self, c: &Cube) -> u64 {
        c.corners.iter().fold(u64::MAX, |m, &v| m & self.vertex_types[v])
    }

    /// Checks that every cube's corner types form the interval between its
    /// lower and upper type, bijectively.
    pub fn verify_type_intervals(&self) -> Result<(), ComplexError> {
        for c in &self.cubes {
            let lo = self.cube_lower_type(c);
            let hi = self.cube_type(c);
            let diff = hi & !lo;
            if diff.count_ones() as usize != c.dim() {
                return Err(ComplexError::MalformedCube(format!("cube {:?} spans a wrong interval", c.corners)));
            }
            let types: BTreeSet<u64> = c.corners.iter().map(|&v| self.vertex_types[v]).collect();
            if types.len() != c.corners.len() || types.iter().any(|&t| t & !hi != 0 || t & lo != lo) {
                return Err(ComplexError::MalformedCube(format!("cube {:?} types not an interval", c.corners)));
            }
        }
        Ok(())
    }

    /// Neighbours of `v` inside a cube containing it.
    fn cube_neighbors(c: &Cube, v: usize) -> Vec<usize> {
        let pos = c.corners.iter().position(|&x| x == v).expect("corner");
        let mut out: Vec<usize> = (0..c.dim()).map(|k| c.corners[pos ^ (1 << k)]).collect();
        out.sort_unstable();
        out
    }

    fn link_filtered(&self, v: usize, keep: impl Fn(&Cube) -> bool) -> Result<SimplicialComplex, ComplexError> {
        let mut link = SimplicialComplex::empty();
        let mut seen = BTreeSet::new();
        for &cid in &self.incident[v] {
            let c = &self.cubes[cid];
            if c.dim() == 0 || !keep(c) {
                continue;
            }
            let s = Self::cube_neighbors(c, v);
            if !seen.insert(s.clone()) {
                return Err(ComplexError::NotSimple(v));
            }
            link.simplices.insert(s.clone());
            link.vertices.extend(s);
        }
        Ok(link)
    }

    /// Link of a vertex; link vertices are the neighbouring vertices.
    pub fn link_of_vertex(&self, v: usize) -> Result<SimplicialComplex, ComplexError> {
        self.link_filtered(v, |_| true)
    }

    /// Part of the link spanned by cubes whose type lies inside `t(v)`.
    pub fn lower_link(&self, v: usize) -> Result<SimplicialComplex, ComplexError> {
        let tv = self.vertex_types[v];
        self.link_filtered(v, |c| self.cube_type(c) & !tv == 0)
    }

    /// Every link among `vertices` is flag; on failure returns (vertex, clique).
    pub fn is_locally_cat0_at(&self, vertices: impl IntoIterator<Item = usize>) -> Result<Option<(usize, Vec<usize>)>, ComplexError> {
        for v in vertices {
            let r = self.link_of_vertex(v)?.is_flag();
            if let Some(w) = r.witness {
                return Ok(Some((v, w)));
            }
        }
        Ok(None)
    }

    pub fn is_locally_cat0(&self) -> Result<Option<(usize, Vec<usize>)>, ComplexError> {
        self.is_locally_cat0_at(0..self.num_vertices())
    }

    /// Product complex; vertex `(p, q)` has index `p * |other| + q` and type `t(p) ∪ t(q)`.
    pub fn product(&self, other: &Self) -> Self {
        let nb = other.num_vertices();
        let mut out = TypedCubeComplex::new();
        for &ta in &self.vertex_types {
            for &tb in &other.vertex_types {
                out.add_vertex(ta | tb);
            }
        }
        for a in &self.cubes {
            for b in &other.cubes {
                let da = a.dim();
                let corners = (0..a.corners.len() * b.corners.len())
                    .map(|m| {
                        let ma = m & ((1 << da) - 1);
                        let mb = m >> da;
                        a.corners[ma] * nb + b.corners[mb]
                    })
                    .collect();
                out.add_cube(corners).expect("product cube");
            }
        }
        if let (Some(ca), Some(cb)) = (self.center, other.center) {
            out.center = Some(ca * nb + cb);
        }
        out
    }

    /// Checks that `vertex_map` is a type-preserving isomorphism onto `other`.
    pub fn check_isomorphism(&self, other: &Self, vertex_map: &[usize]) -> Result<IsoReport, ComplexError> {
        if self.num_vertices() != other.num_vertices() || vertex_map.len() != self.num_vertices() {
            return Err(ComplexError::IsomorphismFailure(format!(
                "vertex counts {} vs {}",
                self.num_vertices(),
                other.num_vertices()
            )));
        }
        let image: BTreeSet<usize> = vertex_map.iter().copied().collect();
        if image.len() != vertex_map.len() || image.iter().any(|&v| v >= other.num_vertices()) {
            return Err(ComplexError::IsomorphismFailure("vertex map not bijective".into()));
        }
        for (v, &w) in vertex_map.iter().enumerate() {
            if self.vertex_types[v] != other.vertex_types[w] {
                return Err(ComplexError::IsomorphismFailure(format!("type mismatch at vertex {v}")));
            }
        }
        if self.num_cubes() != other.num_cubes() {
            return Err(ComplexError::IsomorphismFailure(format!(
                "cube counts {} vs {}",
                self.num_cubes(),
                other.num_cubes()
            )));
        }
        for c in &self.cubes {
            let img: Vec<usize> = c.corners.iter().map(|&v| vertex_map[v]).collect();
            let Some(id) = other.cube_id(&img) else {
                return Err(ComplexError::IsomorphismFailure(format!("cube {:?} has no image", c.corners)));
            };
            if other.cubes[id].dim() != c.dim() {
                return Err(ComplexError::IsomorphismFailure("cube dimension mismatch".into()));
            }
        }
        Ok(IsoReport {
            vertices: self.num_vertices(),
            cubes: self.num_cubes(),
            vertex_map: vertex_map.to_vec(),
        })
    }

    /// Rebuilds lookup tables after deserialization.
    pub fn reindex(&mut self) {
        self.cube_index.clear();
        self.incident = vec![Vec::new(); self.vertex_types.len()];
        for (id, c) in self.cubes.iter().enumerate() {
            self.cube_index.insert(c.key(), id);
            for &v in &c.corners {
                self.incident[v].push(id);
            }
        }
    }

    /// DOT rendering of the 1-skeleton with type labels.
    pub fn to_dot(&self, name: &str, type_names: &dyn Fn(u64) -> String) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for (v, &t) in self.vertex_types.iter().enumerate() {
            let _ = writeln!(s, "  v{v} [label=\"{}\", rank={}];", type_names(t), t.count_ones());
        }
        for c in self.cubes.iter().filter(|c| c.dim() == 1) {
            let _ = writeln!(s, "  v{} -- v{};", c.corners[0], c.corners[1]);
        }
        s.push_str("}\n");
        s
    }
}

/// Formats a type mask as `{a,b}` using index names.
pub fn format_type(mask: u64) -> String {
    let items: Vec<String> = mask_iter(mask).map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// The cubical cone over a simplicial complex with vertices below 64.
/// Vertices correspond to simplices and the empty set; cubes are intervals.
pub fn cubical_cone(n: &SimplicialComplex) -> Result<TypedCubeComplex, ComplexError> {
    if let Some(&v) = n.vertices().iter().find(|&&v| v >= 64) {
        return Err(ComplexError::TooManyVertices(v));
    }
    let mut types: Vec<u64> = vec![0];
    types.extend(n.simplices().iter().map(|s| SimplicialComplex::mask_of(s)));
    types.sort_by_key(|&m| (m.count_ones(), m));
    let mut x = TypedCubeComplex::new();
    let mut index = HashMap::new();
    for &t in &types {
        index.insert(t, x.add_vertex(t));
    }
    x.set_center(index[&0]);
    // Maximal intervals [a, b] with b a facet or any simplex suffice; faces are added.
    for &b in &types {
        for &a in &types {
            if a & !b != 0 || a == b {
                continue;
            }
            let dirs: Vec<usize> = mask_iter(b & !a).collect();
            let corners = (0..1usize << dirs.len())
                .map(|m| {
                    let t = dirs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| m >> j & 1 == 1)
                        .fold(a, |acc, (_, &d)| acc | 1 << d);
                    index[&t]
                })
                .collect();
            x.add_cube(corners)?;
        }
    }
    Ok(x)
}

/// 0/1 coordinates of the cone vertices, indexed by the vertices of `n`.
pub fn cone_coordinates(n: &SimplicialComplex, cone: &TypedCubeComplex) -> Vec<Vec<u8>> {
    let vs: Vec<usize> = n.vertices().iter().copied().collect();
    (0..cone.num_vertices())
        .map(|v| vs.iter().map(|&i| (cone.vertex_type(v) >> i & 1) as u8).collect())
        .collect()
}

/// Verified isomorphism `C(N1) × C(N2) → C(N1 * N2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeProductReport {
    pub shift: usize,
    pub iso: IsoReport,
}

/// Builds both sides and checks the type-union map cell by cell. If the
/// vertex sets overlap, `n2` is shifted past the largest vertex of `n1`.
pub fn cone_product_iso(n1: &SimplicialComplex, n2: &SimplicialComplex) -> Result<ConeProductReport, ComplexError> {
    let overlap = n1.vertices().intersection(n2.vertices()).next().is_some();
    let shift = if overlap {
        n1.vertices().iter().next_back().map_or(0, |m| m + 1)
    } else {
        0
    };
    let n2 = n2.shifted(shift);
    let c1 = cubical_cone(n1)?;
    let c2 = cubical_cone(&n2)?;
    let prod = c1.product(&c2);
    let joined = cubical_cone(&n1.join(&n2))?;
    let by_type: HashMap<u64, usize> = (0..joined.num_vertices())
        .map(|v| (joined.vertex_type(v), v))
        .collect();
    let mut map = Vec::with_capacity(prod.num_vertices());
    for v in 0..prod.num_vertices() {
        let t = prod.vertex_type(v);
        let w = by_type
            .get(&t)
            .ok_or_else(|| ComplexError::IsomorphismFailure(format!("no vertex of type {}", format_type(t))))?;
        map.push(*w);
    }
    let iso = prod.check_isomorphism(&joined, &map)?;
    Ok(ConeProductReport { shift, iso })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octahedron() -> SimplicialComplex {
        SimplicialComplex::discrete(&[0, 1])
            .join(&SimplicialComplex::discrete(&[2, 3]))
            .join(&SimplicialComplex::discrete(&[4, 5]))
    }

    #[test]
    fn flag_examples() {
        let tri = SimplicialComplex::cycle(3);
        let r = tri.is_flag();
        assert!(!r.flag);
        assert_eq!(r.witness, Some(vec![0, 1, 2]));
        assert!(SimplicialComplex::cycle(4).is_flag().flag);
        assert!(octahedron().is_flag().flag);
        assert_eq!(octahedron().num_simplices(), 26);
    }

    #[test]
    fn cone_examples() {
        let edge = SimplicialComplex::simplex(&[0, 1]);
        let c = cubical_cone(&edge).unwrap();
        assert_eq!(c.num_vertices(), 4);
        assert_eq!(c.count_by_dim(), vec![4, 4, 1]);
        let p = cubical_cone(&SimplicialComplex::discrete(&[0])).unwrap();
        assert_eq!(p.count_by_dim(), vec![2, 1]);
        let hex = cubical_cone(&SimplicialComplex::cycle(6)).unwrap();
        assert_eq!(hex.count_by_dim(), vec![13, 18, 6]);
        hex.verify_type_intervals().unwrap();
    }

    #[test]
    fn links_in_square() {
        let edge = SimplicialComplex::simplex(&[0, 1]);
        let c = cubical_cone(&edge).unwrap();
        let center = c.center().unwrap();
        let link = c.link_of_vertex(center).unwrap();
        assert_eq!(link.num_simplices(), 3);
        let top = (0..4).find(|&v| c.vertex_type(v) == 0b11).unwrap();
        let l = c.link_of_vertex(top).unwrap();
        assert_eq!(l.vertices().len(), 2);
        assert_eq!(l.num_simplices(), 3);
    }

    #[test]
    fn three_squares_not_cat0() {
        let mut x = TypedCubeComplex::new();
        let v: Vec<usize> = (0..7).map(|_| x.add_vertex(0)).collect();
        // corner 0 with neighbours 1,2,3 and face centres 4,5,6
        x.add_cube(vec![v[0], v[1], v[2], v[4]]).unwrap();
        x.add_cube(vec![v[0], v[2], v[3], v[5]]).unwrap();
        x.add_cube(vec![v[0], v[1], v[3], v[6]]).unwrap();
        let w = x.is_locally_cat0().unwrap();
        assert_eq!(w, Some((0, vec![1, 2, 3])));
        assert!(cubical_cone(&SimplicialComplex::cycle(4))
            .unwrap()
            .is_locally_cat0()
            .unwrap()
            .is_none());
    }

    #[test]
    fn thickened_octahedra() {
        let f = SimplicialComplex::cycle(4).thickened_octahedron_factors().unwrap();
        assert_eq!(f, vec![vec![0, 2], vec![1, 3]]);
        assert!(!SimplicialComplex::cycle(6).is_thickened_octahedron());
        let s = SimplicialComplex::simplex(&[0, 1, 2]).thickened_octahedron_factors().unwrap();
        assert_eq!(s.len(), 3);
        assert!(SimplicialComplex::empty().is_thickened_octahedron());
        assert!(!SimplicialComplex::cycle(3).is_thickened_octahedron());
    }

    #[test]
    fn cone_products() {
        let pt = SimplicialComplex::discrete(&[0]);
        let r = cone_product_iso(&pt, &pt).unwrap();
        assert_eq!(r.iso.vertices, 4);
        let edge = SimplicialComplex::simplex(&[0, 1]);
        let r = cone_product_iso(&edge, &SimplicialComplex::discrete(&[2])).unwrap();
        assert_eq!(r.iso.vertices, 8);
        let two = SimplicialComplex::discrete(&[0, 1]);
        let r = cone_product_iso(&two, &two).unwrap();
        assert_eq!(r.iso.vertices, 9);
    }
}
