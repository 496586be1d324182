//! Polygonal complexes with chosen edge orientations, vertex link graphs,
//! curvature conditions, walls and e-walls, and group actions by cell
//! permutations with orientation signs.
//!
//! An oriented edge is encoded as `2e` (the chosen orientation) or `2e + 1`
//! (its reverse). A polygon stores one based boundary cycle of oriented edges.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::FiniteGroup;

/// Default maximal link-vertex degree for exhaustive cycle enumeration.
pub const DEFAULT_DEGREE_CAP: usize = 16;
/// Default maximal cycle length for exhaustive cycle enumeration.
pub const DEFAULT_LENGTH_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonalError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("polygon {0} boundary is not a closed cycle")]
    NotACycle(String),
    #[error("polygon {0} has fewer than 3 sides")]
    TooFewSides(String),
    #[error("polygon {0} is a triangle; parallelism needs at least 4 sides")]
    TrianglePresent(usize),
    #[error("invalid action: {0}")]
    InvalidAction(String),
}

pub type OEdge = usize;

pub fn oedge(e: usize, sign: i8) -> OEdge {
    2 * e + usize::from(sign < 0)
}

pub fn edge_of(o: OEdge) -> usize {
    o >> 1
}

pub fn sign_of(o: OEdge) -> i8 {
    if o & 1 == 0 {
        1
    } else {
        -1
    }
}

pub fn reverse(o: OEdge) -> OEdge {
    o ^ 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

/// Based boundary cycle of a polygon: `(edge, ±1)` head to tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    pub cycle: Vec<(usize, i8)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Polygon {
    pub fn new(cycle: Vec<(usize, i8)>) -> Self {
        Polygon { cycle, name: None }
    }

    pub fn named(cycle: Vec<(usize, i8)>, name: impl Into<String>) -> Self {
        Polygon {
            cycle,
            name: Some(name.into()),
        }
    }

    pub fn sides(&self) -> usize {
        self.cycle.len()
    }

    /// Oriented edge at position `q` in the based cycle.
    pub fn at(&self, q: usize) -> OEdge {
        let (e, s) = self.cycle[q % self.cycle.len()];
        oedge(e, s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonalComplex {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    edge_names: Vec<String>,
    polygons: Vec<Polygon>,
}

impl PolygonalComplex {
    /// A complex with `n` vertices named `0..n` and no cells.
    pub fn new(n: usize) -> Self {
        PolygonalComplex {
            vertex_names: (0..n).map(|i| i.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn with_vertex_names(names: Vec<String>) -> Self {
        PolygonalComplex {
            vertex_names: names,
            ..Default::default()
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize) -> Result<usize, PolygonalError> {
        let id = self.edges.len();
        self.add_named_edge(from, to, format!("e{id}"))
    }

    pub fn add_named_edge(&mut self, from: usize, to: usize, name: String) -> Result<usize, PolygonalError> {
        let n = self.vertex_names.len();
        if from >= n || to >= n {
            return Err(PolygonalError::UnknownVertex(from.max(to).to_string()));
        }
        self.edges.push(Edge { from, to });
        self.edge_names.push(name);
        Ok(self.edges.len() - 1)
    }

    pub fn add_polygon(&mut self, mut p: Polygon) -> Result<usize, PolygonalError> {
        let id = self.polygons.len();
        let name = p.name.clone().unwrap_or_else(|| format!("p{id}"));
        if p.cycle.len() < 3 {
            return Err(PolygonalError::TooFewSides(name));
        }
        for &(e, _) in &p.cycle {
            if e >= self.edges.len() {
                return Err(PolygonalError::UnknownEdge(e.to_string()));
            }
        }
        let k = p.cycle.len();
        for q in 0..k {
            if self.head(p.at(q)) != self.tail(p.at(q + 1)) {
                return Err(PolygonalError::NotACycle(name));
            }
        }
        p.name = Some(name);
        self.polygons.push(p);
        Ok(id)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_polygons(&self) -> usize {
        self.polygons.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, p: usize) -> &Polygon {
        &self.polygons[p]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn polygon_name(&self, p: usize) -> &str {
        self.polygons[p].name.as_deref().unwrap_or("")
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn polygon_index(&self, name: &str) -> Option<usize> {
        self.polygons.iter().position(|p| p.name.as_deref() == Some(name))
    }

    pub fn tail(&self, o: OEdge) -> usize {
        let e = self.edges[edge_of(o)];
        if sign_of(o) > 0 {
            e.from
        } else {
            e.to
        }
    }

    pub fn head(&self, o: OEdge) -> usize {
        self.tail(reverse(o))
    }

    /// Boundary cycle rotated to start at position `start`.
    pub fn based_cycle(&self, p: usize, start: usize) -> Vec<OEdge> {
        let poly = &self.polygons[p];
        (0..poly.sides()).map(|q| poly.at(start + q)).collect()
    }

    /// Link graph at `v`: nodes are oriented edges leaving `v`, edges are corners.
    pub fn link_graph(&self, v: usize) -> LinkGraph {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        for e in 0..self.edges.len() {
            for s in [1i8, -1] {
                let o = oedge(e, s);
                if self.tail(o) == v {
                    index.insert(o, nodes.len());
                    nodes.push(o);
                }
            }
        }
        let mut corners = Vec::new();
        for (p, poly) in self.polygons.iter().enumerate() {
            let k = poly.sides();
            for q in 0..k {
                if self.head(poly.at(q)) != v {
                    continue;
                }
                let a = index[&reverse(poly.at(q))];
                let b = index[&poly.at(q + 1)];
                corners.push(Corner {
                    a,
                    b,
                    k,
                    polygon: p,
                    position: q,
                });
            }
        }
        LinkGraph {
            vertex: v,
            nodes,
            corners,
        }
    }

    /// Evaluates a curvature condition over all simple cycles of all links.
    pub fn check_condition(&self, which: Condition, strict: bool) -> ConditionReport {
        self.check_condition_with_caps(which, strict, DEFAULT_DEGREE_CAP, DEFAULT_LENGTH_CAP)
    }

    pub fn check_condition_with_caps(&self, which: Condition, strict: bool, degree_cap: usize, length_cap: usize) -> ConditionReport {
        if which == Condition::Q {
            if let Some(p) = self.polygons.iter().position(|p| p.sides() < 4) {
                return ConditionReport {
                    condition: which,
                    strict,
                    verdict: Verdict::Fail(Witness {
                        vertex: None,
                        cycle: Vec::new(),
                        sides: vec![self.polygons[p].sides()],
                        value: None,
                        polygon: Some(p),
                    }),
                    cycles_checked: 0,
                };
            }
        }
        let mut checked = 0;
        let mut unverified = None;
        for v in 0..self.num_vertices() {
            let g = self.link_graph(v);
            let cycles = match g.simple_cycles(degree_cap, length_cap) {
                Ok(c) => c,
                Err(reason) => {
                    unverified.get_or_insert((v, reason));
                    continue;
                }
            };
            for cyc in cycles {
                checked += 1;
                let sides: Vec<usize> = cyc.iter().map(|&c| g.corners[c].k).collect();
                let (ok, value) = which.evaluate(&sides, strict);
                if !ok {
                    return ConditionReport {
                        condition: which,
                        strict,
                        verdict: Verdict::Fail(Witness {
                            vertex: Some(v),
                            cycle: cyc.iter().map(|&c| (g.corners[c].polygon, g.corners[c].position)).collect(),
                            sides,
                            value: value.map(|r| r.to_string()),
                            polygon: None,
                        }),
                        cycles_checked: checked,
                    };
                }
            }
        }
        let verdict = match unverified {
            Some((vertex, reason)) => Verdict::Unverified { vertex, reason },
            None => Verdict::Pass,
        };
        ConditionReport {
            condition: which,
            strict,
            verdict,
            cycles_checked: checked,
        }
    }

    fn require_no_triangles(&self) -> Result<(), PolygonalError> {
        match self.polygons.iter().position(|p| p.sides() < 4) {
            Some(p) => Err(PolygonalError::TrianglePresent(p)),
            None => Ok(()),
        }
    }

    /// Pairs of oriented edges parallel (or even-parallel) inside polygon `p`.
    pub fn parallel_pairs(&self, p: usize, kind: WallKind) -> Vec<ParallelPair> {
        let poly = &self.polygons[p];
        let k = poly.sides();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                let l1 = (b + k - a - 1) % k;
                let l2 = k - 2 - l1;
                if kind.admits(l1, l2) {
                    out.push(ParallelPair {
                        polygon: p,
                        positions: (a, b),
                        edges: (poly.at(a), reverse(poly.at(b))),
                    });
                }
            }
        }
        out
    }

    fn classes(&self, kind: WallKind) -> Result<Vec<Wall>, PolygonalError> {
        self.require_no_triangles()?;
        let n = 2 * self.edges.len();
        let mut uf = UnionFind::new(n);
        let mut pairs = Vec::new();
        for p in 0..self.polygons.len() {
            for pp in self.parallel_pairs(p, kind) {
                uf.union(pp.edges.0, pp.edges.1);
                pairs.push(pp);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<OEdge>> = BTreeMap::new();
        for o in 0..n {
            by_root.entry(uf.find(o)).or_default().push(o);
        }
        let mut walls: Vec<Wall> = by_root
            .into_values()
            .map(|members| Wall {
                kind,
                members,
                diameters: Vec::new(),
            })
            .collect();
        walls.sort_by_key(|w| w.members[0]);
        let mut wall_of = vec![0; n];
        for (i, w) in walls.iter().enumerate() {
            for &o in &w.members {
                wall_of[o] = i;
            }
        }
        for pp in pairs {
            let (a, b) = pp.positions;
            let d = Diameter {
                polygon: pp.polygon,
                positions: (a.min(b), a.max(b)),
            };
            let w = &mut walls[wall_of[pp.edges.0]];
            if !w.diameters.contains(&d) {
                w.diameters.push(d);
            }
        }
        for w in &mut walls {
            w.diameters.sort();
        }
        Ok(walls)
    }

    /// Classes of the parallelism relation generated inside polygons.
    pub fn compute_walls(&self) -> Result<Vec<Wall>, PolygonalError> {
        self.classes(WallKind::Parallel)
    }

    /// Classes of the even-parallelism relation generated inside polygons.
    pub fn compute_ewalls(&self) -> Result<Vec<Wall>, PolygonalError> {
        self.classes(WallKind::EvenParallel)
    }

    /// Vertices on edges dual to the wall.
    pub fn wall_vertices(&self, m: &Wall) -> BTreeSet<usize> {
        m.members.iter().flat_map(|&o| [self.tail(o), self.head(o)]).collect()
    }

    /// Geometric realization of a wall in the barycentric subdivision and its tree report.
    pub fn geometric_wall(&self, m: &Wall) -> GeometricWall {
        let mut half: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut per_polygon: BTreeMap<usize, usize> = BTreeMap::new();
        for d in &m.diameters {
            half.insert((d.polygon, d.positions.0));
            half.insert((d.polygon, d.positions.1));
            *per_polygon.entry(d.polygon).or_default() += 1;
        }
        // Nodes: edge midpoints (edge ids) and polygon centres (offset).
        let ne = self.edges.len();
        let mut uf = UnionFind::new(ne + self.polygons.len());
        let mut acyclic = true;
        let mut segments = Vec::new();
        for &(p, q) in &half {
            let e = self.polygons[p].cycle[q].0;
            if !uf.union(e, ne + p) {
                acyclic = false;
            }
            segments.push(HalfDiameter { polygon: p, position: q, edge: e });
        }
        let max_diameters = per_polygon.values().copied().max().unwrap_or(0);
        let members: BTreeSet<OEdge> = m.members.iter().copied().collect();
        let opposite_free = members.iter().all(|&o| !members.contains(&reverse(o)));
        GeometricWall {
            segments,
            acyclic,
            max_diameters_per_polygon: max_diameters,
            opposite_free,
        }
    }

    /// Oriented-edge to wall-index table for a list of walls.
    pub fn wall_index(&self, walls: &[Wall]) -> Vec<usize> {
        let mut out = vec![usize::MAX; 2 * self.edges.len()];
        for (i, w) in walls.iter().enumerate() {
            for &o in &w.members {
                out[o] = i;
            }
        }
        out
    }

    /// Polygons separated by a wall, with the diameter positions.
    pub fn separated_polygons(&self, m: &Wall) -> Vec<Diameter> {
        m.diameters.clone()
    }

    /// Barycentric subdivision counts and triangles `(vertex, edge, polygon)`.
    pub fn barycentric_subdivision(&self) -> Barycentric {
        let mut triangles = Vec::new();
        let mut e02 = 0;
        let mut e12 = 0;
        for (p, poly) in self.polygons.iter().enumerate() {
            for q in 0..poly.sides() {
                let o = poly.at(q);
                let e = edge_of(o);
                triangles.push((self.tail(o), e, p));
                triangles.push((self.head(o), e, p));
                e02 += 1;
                e12 += 1;
            }
        }
        Barycentric {
            v0: self.num_vertices(),
            v1: self.num_edges(),
            v2: self.num_polygons(),
            e01: 2 * self.num_edges(),
            e02,
            e12,
            triangles,
        }
    }

    /// Graph distances in the 1-skeleton from a set of sources.
    pub fn distances_from(&self, sources: &BTreeSet<usize>) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut dist = vec![usize::MAX; self.num_vertices()];
        let mut q = VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            q.push_back(s);
        }
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// DOT rendering of a vertex link with `k` edge labels.
    pub fn link_dot(&self, v: usize) -> String {
        let g = self.link_graph(v);
        let mut s = format!("graph \"link_{}\" {{\n", self.vertex_names[v]);
        for (i, &o) in g.nodes.iter().enumerate() {
            let dir = if sign_of(o) > 0 { "+" } else { "-" };
            let _ = writeln!(s, "  n{i} [label=\"{}{}\"];", self.edge_names[edge_of(o)], dir);
        }
        for c in &g.corners {
            let _ = writeln!(s, "  n{} -- n{} [label=\"{}\"];", c.a, c.b, c.k);
        }
        s.push_str("}\n");
        s
    }

    /// DOT rendering of a geometric wall: midpoints and centres joined by half-diameters.
    pub fn wall_dot(&self, gw: &GeometricWall) -> String {
        let mut s = String::from("graph \"wall\" {\n");
        let mut nodes = BTreeSet::new();
        for h in &gw.segments {
            nodes.insert(format!("  m{} [label=\"{}\", rank=1];", h.edge, self.edge_names[h.edge]));
            nodes.insert(format!("  c{} [label=\"{}\", rank=2];", h.polygon, self.polygon_name(h.polygon)));
        }
        for n in nodes {
            s.push_str(&n);
            s.push('\n');
        }
        for h in &gw.segments {
            let _ = writeln!(s, "  m{} -- c{};", h.edge, h.polygon);
        }
        s.push_str("}\n");
        s
    }
}

/// Which curvature condition to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Q,
    C,
    C2,
    C4,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::Q, Condition::C4, Condition::C2, Condition::C];

    /// Per-corner term; `None` when the term is undefined (the cycle fails).
    pub fn term(self, k: usize) -> Option<Ratio<i64>> {
        let half = Ratio::new(1, 2);
        let k = k as i64;
        match self {
            Condition::Q => None,
            Condition::C => (k > 0).then(|| half - Ratio::new(1, k)),
            Condition::C2 => {
                let t = k / 2;
                (t > 0).then(|| half - Ratio::new(1, 2 * t))
            }
            Condition::C4 => {
                let f = k / 4;
                (f > 0).then(|| half - Ratio::new(1, 4 * f))
            }
        }
    }

    /// Whether a link cycle with corner side counts `sides` satisfies the condition.
    pub fn evaluate(self, sides: &[usize], strict: bool) -> (bool, Option<Ratio<i64>>) {
        if self == Condition::Q {
            let n = sides.len();
            let ok = sides.iter().all(|&k| k >= 4) && if strict { n > 4 } else { n >= 4 };
            return (ok, None);
        }
        let mut sum = Ratio::from_integer(0);
        for &k in sides {
            match self.term(k) {
                Some(t) => sum += t,
                None => return (false, None),
            }
        }
        let one = Ratio::from_integer(1);
        let ok = if strict { sum > one } else { sum >= one };
        (ok, Some(sum))
    }

    pub fn name(self) -> &'static str {
        match self {
            Condition::Q => "Q",
            Condition::C => "C",
            Condition::C2 => "C2",
            Condition::C4 => "C4",
        }
    }
}

impl std::str::FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "Q" => Ok(Condition::Q),
            "C" => Ok(Condition::C),
            "C2" => Ok(Condition::C2),
            "C4" => Ok(Condition::C4),
            _ => Err(format!("unknown condition {s}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub vertex: Option<usize>,
    /// Corners `(polygon, position)` of the failing link cycle.
    pub cycle: Vec<(usize, usize)>,
    pub sides: Vec<usize>,
    pub value: Option<String>,
    pub polygon: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail(Witness),
    Unverified { vertex: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub strict: bool,
    pub verdict: Verdict,
    pub cycles_checked: usize,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub polygon: usize,
    pub position: usize,
}

/// Link of a vertex as a multigraph on outgoing oriented edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkGraph {
    pub vertex: usize,
    pub nodes: Vec<OEdge>,
    pub corners: Vec<Corner>,
}

impl LinkGraph {
    /// Every simple cycle as a list of corner indices, each found once.
    /// Fails when a node exceeds `degree_cap` or a cycle may exceed `length_cap`.
    pub fn simple_cycles(&self, degree_cap: usize, length_cap: usize) -> Result<Vec<Vec<usize>>, String> {
        let n = self.nodes.len();
        let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut out = Vec::new();
        for (ci, c) in self.corners.iter().enumerate() {
            if c.a == c.b {
                out.push(vec![ci]);
                continue;
            }
            inc[c.a].push((ci, c.b));
            inc[c.b].push((ci, c.a));
        }
        if let Some(v) = (0..n).find(|&v| inc[v].len() > degree_cap) {
            return Err(format!("link node {v} has degree {} above cap {degree_cap}", inc[v].len()));
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in 0..n {
            let mut on_path = vec![false; n];
            on_path[s] = true;
            let mut path: Vec<usize> = Vec::new();
            let mut truncated = false;
            dfs(s, s, &inc, &mut on_path, &mut path, length_cap, &mut |cyc: &[usize]| {
                let mut key = cyc.to_vec();
                key.sort_unstable();
                if seen.insert(key) {
                    out.push(cyc.to_vec());
                }
            }, &mut truncated);
            if truncated {
                return Err(format!("cycle length may exceed cap {length_cap}"));
            }
        }
        Ok(out)
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    start: usize,
    u: usize,
    inc: &[Vec<(usize, usize)>],
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    cap: usize,
    emit: &mut dyn FnMut(&[usize]),
    truncated: &mut bool,
) {
    for &(ci, w) in &inc[u] {
        if path.last() == Some(&ci) {
            continue;
        }
        if w == start {
            if !path.is_empty() {
                path.push(ci);
                emit(path);
                path.pop();
            }
            continue;
        }
        if w < start || on_path[w] {
            continue;
        }
        if path.len() + 1 >= cap {
            *truncated = true;
            continue;
        }
        on_path[w] = true;
        path.push(ci);
        dfs(start, w, inc, on_path, path, cap, emit, truncated);
        path.pop();
        on_path[w] = false;
    }
}

/// Which relation generates the classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WallKind {
    Parallel,
    EvenParallel,
}

impl WallKind {
    /// Given arc lengths `l` (the side holding the forward pair) and `l'`.
    fn admits(self, l: usize, lp: usize) -> bool {
        match self {
            WallKind::Parallel => l <= lp && lp < l + 2,
            WallKind::EvenParallel => l % 2 == 1 && l <= lp && lp < l + 4,
        }
    }
}

/// Positions `(a, b)` in polygon; `edges` are `(c_a, reverse(c_b))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub polygon: usize,
    pub positions: (usize, usize),
    pub edges: (OEdge, OEdge),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diameter {
    pub polygon: usize,
    pub positions: (usize, usize),
}

/// A (e-)wall: a class of oriented edges with the diameters it crosses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub kind: WallKind,
    pub members: Vec<OEdge>,
    pub diameters: Vec<Diameter>,
}

impl Wall {
    pub fn contains(&self, o: OEdge) -> bool {
        self.members.binary_search(&o).is_ok()
    }

    /// Unoriented edges the wall passes through.
    pub fn edges(&self) -> BTreeSet<usize> {
        self.members.iter().map(|&o| edge_of(o)).collect()
    }

    /// The wall through the reversed oriented edges.
    pub fn reversed(&self) -> Vec<OEdge> {
        let mut v: Vec<OEdge> = self.members.iter().map(|&o| reverse(o)).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfDiameter {
    pub polygon: usize,
    pub position: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricWall {
    pub segments: Vec<HalfDiameter>,
    pub acyclic: bool,
    pub max_diameters_per_polygon: usize,
    pub opposite_free: bool,
}

impl GeometricWall {
    /// Acyclic, at most one diameter per polygon, no opposite pair.
    pub fn is_tree_like(&self) -> bool {
        self.acyclic && self.max_diameters_per_polygon <= 1 && self.opposite_free
    }

    pub fn polygons(&self) -> BTreeSet<usize> {
        self.segments.iter().map(|h| h.polygon).collect()
    }

    pub fn midpoints(&self) -> BTreeSet<usize> {
        self.segments.iter().map(|h| h.edge).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Barycentric {
    pub v0: usize,
    pub v1: usize,
    pub v2: usize,
    pub e01: usize,
    pub e02: usize,
    pub e12: usize,
    pub triangles: Vec<(usize, usize, usize)>,
}

impl Barycentric {
    /// Rank of a subdivision vertex given as `(rank, index)`; identity on rank.
    pub fn rank(vertex: (u8, usize)) -> u8 {
        vertex.0
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// A finite group acting on a polygonal complex by cell permutations.
/// `edge_map[g][e] = (e', s)` means `g` sends the chosen orientation of `e`
/// to `e'` with orientation sign `s`; polygon signs are derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckAction {
    pub group: FiniteGroup,
    pub vertex_map: Vec<Vec<usize>>,
    pub edge_map: Vec<Vec<(usize, i8)>>,
    pub polygon_map: Vec<Vec<(usize, i8)>>,
}

fn rotation_key(seq: &[OEdge]) -> Vec<OEdge> {
    (0..seq.len())
        .map(|r| seq[r..].iter().chain(&seq[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

impl DeckAction {
    pub fn new(x: &PolygonalComplex, group: FiniteGroup, vertex_map: Vec<Vec<usize>>, edge_map: Vec<Vec<(usize, i8)>>) -> Result<Self, PolygonalError> {
        let n = group.order();
        if vertex_map.len() != n || edge_map.len() != n {
            return Err(PolygonalError::InvalidAction("one map per group element required".into()));
        }
        let keyed: HashMap<Vec<OEdge>, usize> = (0..x.num_polygons())
            .map(|p| (rotation_key(&x.based_cycle(p, 0)), p))
            .collect();
        let mut polygon_map = Vec::with_capacity(n);
        for g in 0..n {
            if vertex_map[g].len() != x.num_vertices() || edge_map[g].len() != x.num_edges() {
                return Err(PolygonalError::InvalidAction(format!("element {g}: wrong map size")));
            }
            for (e, edge) in x.edges().iter().enumerate() {
                let img = oedge(edge_map[g][e].0, edge_map[g][e].1);
                if x.tail(img) != vertex_map[g][edge.from] || x.head(img) != vertex_map[g][edge.to] {
                    return Err(PolygonalError::InvalidAction(format!("element {g} breaks incidence at edge {e}")));
                }
            }
            let mut row = Vec::with_capacity(x.num_polygons());
            for p in 0..x.num_polygons() {
                let img: Vec<OEdge> = x
                    .based_cycle(p, 0)
                    .into_iter()
                    .map(|o| {
                        let (e2, s2) = edge_map[g][edge_of(o)];
                        oedge(e2, s2 * sign_of(o))
                    })
                    .collect();
                let fwd = rotation_key(&img);
                let rev_seq: Vec<OEdge> = img.iter().rev().map(|&o| reverse(o)).collect();
                let bwd = rotation_key(&rev_seq);
                if let Some(&q) = keyed.get(&fwd) {
                    row.push((q, 1));
                } else if let Some(&q) = keyed.get(&bwd) {
                    row.push((q, -1));
                } else {
                    return Err(PolygonalError::InvalidAction(format!("element {g} does not map polygon {p} to a polygon")));
                }
            }
            polygon_map.push(row);
        }
        let act = DeckAction {
            group,
            vertex_map,
            edge_map,
            polygon_map,
        };
        act.check_action_law()?;
        Ok(act)
    }

    /// The trivial action of the trivial group.
    pub fn trivial(x: &PolygonalComplex) -> Self {
        DeckAction::new(
            x,
            FiniteGroup::trivial(),
            vec![(0..x.num_vertices()).collect()],
            vec![(0..x.num_edges()).map(|e| (e, 1)).collect()],
        )
        .expect("identity action")
    }

    fn check_action_law(&self) -> Result<(), PolygonalError> {
        let g = &self.group;
        let id = g.identity();
        let is_id = self.vertex_map[id].iter().enumerate().all(|(i, &v)| i == v)
            && self.edge_map[id].iter().enumerate().all(|(i, &(e, s))| i == e && s == 1);
        if !is_id {
            return Err(PolygonalError::InvalidAction("identity acts nontrivially".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.mul(a, b);
                for v in 0..self.vertex_map[0].len() {
                    if self.vertex_map[a][self.vertex_map[b][v]] != self.vertex_map[ab][v] {
                        return Err(PolygonalError::InvalidAction(format!("vertex law fails for ({a},{b})")));
                    }
                }
                for e in 0..self.edge_map[0].len() {
                    let (e1, s1) = self.edge_map[b][e];
                    let (e2, s2) = self.edge_map[a][e1];
                    if (e2, s1 * s2) != self.edge_map[ab][e] {
                        return Err(PolygonalError::InvalidAction(format!("edge law fails for ({a},{b})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn act_oedge(&self, g: usize, o: OEdge) -> OEdge {
        let (e, s) = self.edge_map[g][edge_of(o)];
        oedge(e, s * sign_of(o))
    }

    pub fn act_wall(&self, g: usize, m: &Wall) -> Vec<OEdge> {
        let mut v: Vec<OEdge> = m.members.iter().map(|&o| self.act_oedge(g, o)).collect();
        v.sort_unstable();
        v
    }
}

/// Elements moving a wall off itself while its image meets it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfIntersection {
    /// `gM ≠ M` and the geometric walls share a polygon centre or edge midpoint.
    pub bad: Vec<usize>,
    /// `gM ≠ M` and some vertex of `V(M)` lies within `distance` of `g V(M)`.
    pub superset: Vec<usize>,
    pub distance: usize,
    pub wall_vertices: Vec<usize>,
}

/// Self-intersection of a wall under a group action.
pub fn self_intersection(x: &PolygonalComplex, a: &DeckAction, walls: &[Wall], m: usize, distance: usize) -> SelfIntersection {
    let wall = &walls[m];
    let gw = x.geometric_wall(wall);
    let (polys, mids) = (gw.polygons(), gw.midpoints());
    let vm = x.wall_vertices(wall);
    let dist = x.distances_from(&vm);
    let mut bad = Vec::new();
    let mut superset = Vec::new();
    for g in 0..a.group.order() {
        let img = a.act_wall(g, wall);
        if img == wall.members {
            continue;
        }
        let g_polys: BTreeSet<usize> = polys.iter().map(|&p| a.polygon_map[g][p].0).collect();
        let g_mids: BTreeSet<usize> = mids.iter().map(|&e| a.edge_map[g][e].0).collect();
        if g_polys.intersection(&polys).next().is_some() || g_mids.intersection(&mids).next().is_some() {
            bad.push(g);
        }
        if vm.iter().any(|&v| dist[a.vertex_map[g][v]] <= distance) {
            superset.push(g);
        }
    }
    SelfIntersection {
        bad,
        superset,
        distance,
        wall_vertices: vm.into_iter().collect(),
    }
}

/// Standard small complexes used in examples and tests.
pub mod samples {
    use super::*;

    /// One square with opposite sides identified: edges `a`, `b`, cycle `a b a⁻¹ b⁻¹`.
    pub fn square_torus() -> PolygonalComplex {
        torus_grid(1, 1)
    }

    /// The `p × q` square grid on the torus. Vertex `(i, j)` is `i + p j`;
    /// horizontal edge `h(i,j)` runs `(i,j) -> (i+1,j)`, vertical `v(i,j)`
    /// runs `(i,j) -> (i,j+1)`; square `(i,j)` has cycle `h v h⁻¹ v⁻¹`.
    pub fn torus_grid(p: usize, q: usize) -> PolygonalComplex {
        let vid = |i: usize, j: usize| (i % p) + p * (j % q);
        let mut x = PolygonalComplex::with_vertex_names(
            (0..p * q).map(|k| format!("v{}_{}", k % p, k / p)).collect(),
        );
        let mut h = vec![0; p * q];
        let mut v = vec![0; p * q];
        for j in 0..q {
            for i in 0..p {
                h[vid(i, j)] = x.add_named_edge(vid(i, j), vid(i + 1, j), format!("h{i}_{j}")).unwrap();
            }
        }
        for j in 0..q {
            for i in 0..p {
                v[vid(i, j)] = x.add_named_edge(vid(i, j), vid(i, j + 1), format!("v{i}_{j}")).unwrap();
            }
        }
        for j in 0..q {
            for i in 0..p {
                let cycle = vec![
                    (h[vid(i, j)], 1),
                    (v[vid(i + 1, j)], 1),
                    (h[vid(i, j + 1)], -1),
                    (v[vid(i, j)], -1),
                ];
                x.add_polygon(Polygon::named(cycle, format!("s{i}_{j}"))).unwrap();
            }
        }
        x
    }

    /// Translation action of `Z/p × Z/q` on `torus_grid(p, q)`.
    pub fn torus_translations(p: usize, q: usize) -> DeckAction {
        let x = torus_grid(p, q);
        let group = FiniteGroup::direct_product(&[&FiniteGroup::cyclic(p), &FiniteGroup::cyclic(q)]);
        let vid = |i: usize, j: usize| (i % p) + p * (j % q);
        let mut vmaps = Vec::new();
        let mut emaps = Vec::new();
        for g in 0..p * q {
            let (a, b) = (g % p, g / p);
            let mut vm = vec![0; p * q];
            let mut em = vec![(0, 1); 2 * p * q];
            for j in 0..q {
                for i in 0..p {
                    vm[vid(i, j)] = vid(i + a, j + b);
                    em[vid(i, j)] = (vid(i + a, j + b), 1);
                    em[p * q + vid(i, j)] = (p * q + vid(i + a, j + b), 1);
                }
            }
            vmaps.push(vm);
            emaps.push(em);
        }
        DeckAction::new(&x, group, vmaps, emaps).expect("translations act")
    }

    /// A single `k`-gon on vertices `0..k` with edges `i -> i+1`.
    pub fn single_polygon(k: usize) -> PolygonalComplex {
        let mut x = PolygonalComplex::new(k);
        for i in 0..k {
            x.add_edge(i, (i + 1) % k).unwrap();
        }
        x.add_polygon(Polygon::new((0..k).map(|i| (i, 1)).collect())).unwrap();
        x
    }

    /// `n` squares in a row sharing rungs; every square traverses its left
    /// and right rungs with sign +1. Rung `i` joins `b_i = 2i` to `t_i = 2i+1`.
    pub fn ladder(n: usize) -> PolygonalComplex {
        let mut x = PolygonalComplex::new(2 * (n + 1));
        let rungs: Vec<usize> = (0..=n)
            .map(|i| if i % 2 == 0 { x.add_edge(2 * i, 2 * i + 1).unwrap() } else { x.add_edge(2 * i + 1, 2 * i).unwrap() })
            .collect();
        for i in 0..n {
            let bottom = x.add_edge(2 * i, 2 * i + 2).unwrap();
            let top = x.add_edge(2 * i + 1, 2 * i + 3).unwrap();
            let cycle = if i % 2 == 0 {
                vec![(rungs[i], 1), (top, 1), (rungs[i + 1], 1), (bottom, -1)]
            } else {
                vec![(rungs[i], 1), (bottom, 1), (rungs[i + 1], 1), (top, -1)]
            };
            x.add_polygon(Polygon::new(cycle)).unwrap();
        }
        x
    }

    /// A disc of polygons with the given side counts around vertex 0,
    /// consecutive polygons sharing a spoke.
    pub fn fan(sides: &[usize]) -> PolygonalComplex {
        let n = sides.len();
        let mut x = PolygonalComplex::new(1 + n);
        let spokes: Vec<usize> = (0..n).map(|i| x.add_edge(0, 1 + i).unwrap()).collect();
        for (i, &k) in sides.iter().enumerate() {
            let mut cycle = vec![(spokes[i], 1)];
            let mut prev = 1 + i;
            for _ in 0..k - 3 {
                let v = x.num_vertices();
                x.vertex_names.push(v.to_string());
                cycle.push((x.add_edge(prev, v).unwrap(), 1));
                prev = v;
            }
            cycle.push((x.add_edge(prev, 1 + (i + 1) % n).unwrap(), 1));
            cycle.push((spokes[(i + 1) % n], -1));
            x.add_polygon(Polygon::new(cycle)).unwrap();
        }
        x
    }

    /// Ten small complexes exercising the curvature conditions.
    pub fn curvature_corpus() -> Vec<(String, PolygonalComplex)> {
        vec![
            ("square".into(), single_polygon(4)),
            ("hexagon".into(), single_polygon(6)),
            ("square_torus".into(), square_torus()),
            ("torus_2x3".into(), torus_grid(2, 3)),
            ("ladder_3".into(), ladder(3)),
            ("fan_4_4_4".into(), fan(&[4, 4, 4])),
            ("fan_4x5".into(), fan(&[4, 4, 4, 4, 4])),
            ("fan_6_6_6".into(), fan(&[6, 6, 6])),
            ("fan_8_8_8".into(), fan(&[8, 8, 8])),
            ("fan_5x4".into(), fan(&[5, 5, 5, 5])),
        ]
    }
}
