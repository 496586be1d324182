//! Cochains and 2-cocycles over a finite abelian group, the wall field
//! solver, killing a cocycle along walls, and killing a lifted cocycle in a
//! finite cover presented by a free group action.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{AbElem, FiniteAbelian, FiniteGroup};
use crate::polygonal::{DeckAction, Polygon, PolygonalComplex, PolygonalError, Wall};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("wall {0} is not a tree with one diameter per polygon")]
    WallNotTree(usize),
    #[error("walls {0} and {1} of the orbit meet")]
    SelfIntersecting(usize, usize),
    #[error("polygon {polygon} meets wall {wall} in more than one diameter")]
    NotClean { wall: usize, polygon: usize },
    #[error("seed edge {0} is not dual to the wall")]
    SeedNotDual(usize),
    #[error("coefficient groups differ")]
    CoefficientMismatch,
    #[error("invalid cover: {0}")]
    BadCover(String),
    #[error(transparent)]
    Polygonal(#[from] PolygonalError),
}

/// Edge-indexed values in a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain1 {
    pub coeffs: FiniteAbelian,
    pub values: Vec<AbElem>,
}

/// Polygon-indexed values in a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle2 {
    pub coeffs: FiniteAbelian,
    pub values: Vec<AbElem>,
}

macro_rules! cell_values {
    ($t:ident) => {
        impl $t {
            pub fn zero(coeffs: &FiniteAbelian, n: usize) -> Self {
                $t {
                    coeffs: coeffs.clone(),
                    values: vec![coeffs.zero(); n],
                }
            }

            pub fn from_values(coeffs: &FiniteAbelian, values: Vec<AbElem>) -> Self {
                $t {
                    coeffs: coeffs.clone(),
                    values: values.iter().map(|v| coeffs.reduce(&v.iter().map(|&x| x as i64).collect::<Vec<_>>())).collect(),
                }
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            pub fn get(&self, i: usize) -> &AbElem {
                &self.values[i]
            }

            pub fn set(&mut self, i: usize, v: AbElem) {
                self.values[i] = v;
            }

            pub fn is_zero(&self) -> bool {
                self.values.iter().all(|v| self.coeffs.is_zero(v))
            }

            pub fn add(&self, other: &Self) -> Self {
                $t {
                    coeffs: self.coeffs.clone(),
                    values: self.values.iter().zip(&other.values).map(|(a, b)| self.coeffs.add(a, b)).collect(),
                }
            }

            pub fn neg(&self) -> Self {
                $t {
                    coeffs: self.coeffs.clone(),
                    values: self.values.iter().map(|a| self.coeffs.neg(a)).collect(),
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.neg())
            }

            /// Indices with nonzero value.
            pub fn support(&self) -> BTreeSet<usize> {
                (0..self.values.len()).filter(|&i| !self.coeffs.is_zero(&self.values[i])).collect()
            }
        }
    };
}

cell_values!(Cochain1);
cell_values!(Cocycle2);

/// `δu(π) = Σ η(e) u(e)` over the boundary cycle of `π`.
pub fn coboundary(x: &PolygonalComplex, u: &Cochain1) -> Cocycle2 {
    let a = &u.coeffs;
    let values = x
        .polygons()
        .iter()
        .map(|p| {
            p.cycle
                .iter()
                .fold(a.zero(), |acc, &(e, s)| a.add(&acc, &a.signed(s, &u.values[e])))
        })
        .collect();
    Cocycle2 {
        coeffs: a.clone(),
        values,
    }
}

/// `(g u)(g e) = η(g, e) u(e)`.
pub fn act_cochain(action: &DeckAction, g: usize, u: &Cochain1) -> Cochain1 {
    let mut out = Cochain1::zero(&u.coeffs, u.len());
    for e in 0..u.len() {
        let (e2, s) = action.edge_map[g][e];
        out.values[e2] = u.coeffs.signed(s, &u.values[e]);
    }
    out
}

/// `(g c)(g π) = η(g, π) c(π)`.
pub fn act_cocycle(action: &DeckAction, g: usize, c: &Cocycle2) -> Cocycle2 {
    let mut out = Cocycle2::zero(&c.coeffs, c.len());
    for p in 0..c.len() {
        let (p2, s) = action.polygon_map[g][p];
        out.values[p2] = c.coeffs.signed(s, &c.values[p]);
    }
    out
}

/// Whether every listed element fixes `u`.
pub fn stabilizer_fixes(action: &DeckAction, elements: &[usize], u: &Cochain1) -> bool {
    elements.iter().all(|&g| act_cochain(action, g, u) == *u)
}

/// One constraint `c(π) + η_a u(e_a) + η_b u(e_b) = 0` per polygon separated by a wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Crossing {
    polygon: usize,
    ea: usize,
    sa: i8,
    eb: usize,
    sb: i8,
}

fn crossings(x: &PolygonalComplex, wall_id: usize, m: &Wall) -> Result<Vec<Crossing>, CocycleError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in &m.diameters {
        if !seen.insert(d.polygon) {
            return Err(CocycleError::NotClean {
                wall: wall_id,
                polygon: d.polygon,
            });
        }
        let cyc = &x.polygon(d.polygon).cycle;
        let (ea, sa) = cyc[d.positions.0];
        let (eb, sb) = cyc[d.positions.1];
        out.push(Crossing {
            polygon: d.polygon,
            ea,
            sa,
            eb,
            sb,
        });
    }
    Ok(out)
}

/// Propagates a seed along the wall; `None` when the constraints are inconsistent.
pub fn propagate_wall(
    x: &PolygonalComplex,
    c: &Cocycle2,
    wall_id: usize,
    m: &Wall,
    seed_edge: usize,
    seed_value: &AbElem,
) -> Result<Option<Cochain1>, CocycleError> {
    let a = &c.coeffs;
    let dual = m.edges();
    if !dual.contains(&seed_edge) {
        return Err(CocycleError::SeedNotDual(seed_edge));
    }
    let eqs = crossings(x, wall_id, m)?;
    let mut at: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, q) in eqs.iter().enumerate() {
        at.entry(q.ea).or_default().push(i);
        if q.eb != q.ea {
            at.entry(q.eb).or_default().push(i);
        }
    }
    let mut val: HashMap<usize, AbElem> = HashMap::new();
    val.insert(seed_edge, seed_value.clone());
    let mut queue = VecDeque::from([seed_edge]);
    while let Some(e) = queue.pop_front() {
        for &i in at.get(&e).map(Vec::as_slice).unwrap_or(&[]) {
            let q = eqs[i];
            let (other, so, sk) = if q.ea == e { (q.eb, q.sb, q.sa) } else { (q.ea, q.sa, q.sb) };
            // c + sk u(e) + so u(other) = 0
            let partial = a.add(&c.values[q.polygon], &a.signed(sk, &val[&e]));
            let want = a.signed(so, &a.neg(&partial));
            if other == e {
                if !a.is_zero(&a.add(&partial, &a.signed(so, &val[&e]))) {
                    return Ok(None);
                }
                continue;
            }
            match val.get(&other) {
                Some(v) if *v != want => return Ok(None),
                Some(_) => {}
                None => {
                    val.insert(other, want);
                    queue.push_back(other);
                }
            }
        }
    }
    let mut u = Cochain1::zero(a, x.num_edges());
    for (e, v) in val {
        u.values[e] = v;
    }
    Ok(Some(u))
}

/// Conditions defining the wall field set: support on dual edges, and
/// `(c + δu)(π) = 0` on every polygon the wall separates.
pub fn verify_wall_field(x: &PolygonalComplex, c: &Cocycle2, m: &Wall, u: &Cochain1) -> bool {
    let dual = m.edges();
    if u.support().iter().any(|e| !dual.contains(e)) {
        return false;
    }
    let total = c.add(&coboundary(x, u));
    m.diameters.iter().all(|d| c.coeffs.is_zero(&total.values[d.polygon]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallFieldSolution {
    pub wall: usize,
    pub seed_edge: usize,
    pub seed_value: AbElem,
    pub u: Cochain1,
}

/// The unique wall field with `u(seed_edge) = seed_value` on a tree wall.
pub fn solve_wall_field(
    x: &PolygonalComplex,
    c: &Cocycle2,
    walls: &[Wall],
    wall_id: usize,
    seed_edge: usize,
    seed_value: &AbElem,
) -> Result<WallFieldSolution, CocycleError> {
    let m = &walls[wall_id];
    let gw = x.geometric_wall(m);
    if !gw.acyclic || gw.max_diameters_per_polygon > 1 {
        return Err(CocycleError::WallNotTree(wall_id));
    }
    let u = propagate_wall(x, c, wall_id, m, seed_edge, seed_value)?.ok_or(CocycleError::WallNotTree(wall_id))?;
    Ok(WallFieldSolution {
        wall: wall_id,
        seed_edge,
        seed_value: seed_value.clone(),
        u,
    })
}

/// Adds the coboundary of the summed wall fields; requires pairwise disjoint walls.
pub fn kill_along_wall(
    x: &PolygonalComplex,
    c: &Cocycle2,
    walls: &[Wall],
    orbit: &[usize],
    choices: &[Cochain1],
) -> Result<(Cocycle2, Cochain1), CocycleError> {
    for (i, &m1) in orbit.iter().enumerate() {
        for &m2 in &orbit[i + 1..] {
            if walls_meet(&walls[m1], &walls[m2]) {
                return Err(CocycleError::SelfIntersecting(m1, m2));
            }
        }
    }
    let mut u = Cochain1::zero(&c.coeffs, x.num_edges());
    for ch in choices {
        if ch.coeffs != c.coeffs {
            return Err(CocycleError::CoefficientMismatch);
        }
        u = u.add(ch);
    }
    Ok((c.add(&coboundary(x, &u)), u))
}

fn walls_meet(a: &Wall, b: &Wall) -> bool {
    let pa: BTreeSet<usize> = a.diameters.iter().map(|d| d.polygon).collect();
    b.diameters.iter().any(|d| pa.contains(&d.polygon)) || a.edges().intersection(&b.edges()).next().is_some()
}

/// Quotient of a complex by a subgroup acting freely, with the projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub complex: PolygonalComplex,
    pub vertex_of: Vec<usize>,
    pub edge_of: Vec<(usize, i8)>,
    pub polygon_of: Vec<(usize, i8)>,
    /// Representative cell upstairs for each quotient edge and polygon.
    pub edge_rep: Vec<usize>,
    pub polygon_rep: Vec<usize>,
    pub vertex_rep: Vec<usize>,
}

fn orbit_reps(n: usize, sub: &BTreeSet<usize>, image: impl Fn(usize, usize) -> usize) -> (Vec<usize>, Vec<usize>) {
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for c in 0..n {
        if class[c] != usize::MAX {
            continue;
        }
        for &h in sub {
            class[image(h, c)] = reps.len();
        }
        reps.push(c);
    }
    (class, reps)
}

/// `Y / H` for a subgroup `H` acting freely on cells.
pub fn quotient(y: &PolygonalComplex, action: &DeckAction, sub: &BTreeSet<usize>) -> Result<Quotient, CocycleError> {
    let id = action.group.identity();
    for &h in sub {
        if h == id {
            continue;
        }
        let fixes = (0..y.num_vertices()).any(|v| action.vertex_map[h][v] == v)
            || (0..y.num_edges()).any(|e| action.edge_map[h][e].0 == e)
            || (0..y.num_polygons()).any(|p| action.polygon_map[h][p].0 == p);
        if fixes {
            return Err(CocycleError::BadCover(format!("element {h} fixes a cell")));
        }
    }
    let (vclass, vreps) = orbit_reps(y.num_vertices(), sub, |h, v| action.vertex_map[h][v]);
    let (eclass, ereps) = orbit_reps(y.num_edges(), sub, |h, e| action.edge_map[h][e].0);
    let (pclass, preps) = orbit_reps(y.num_polygons(), sub, |h, p| action.polygon_map[h][p].0);
    let mut edge_of = vec![(0, 1); y.num_edges()];
    for (cls, &r) in ereps.iter().enumerate() {
        for &h in sub {
            let (e, s) = action.edge_map[h][r];
            edge_of[e] = (cls, s);
        }
    }
    let mut polygon_of = vec![(0, 1); y.num_polygons()];
    for (cls, &r) in preps.iter().enumerate() {
        for &h in sub {
            let (p, s) = action.polygon_map[h][r];
            polygon_of[p] = (cls, s);
        }
    }
    let mut x = PolygonalComplex::with_vertex_names(vreps.iter().map(|&v| y.vertex_name(v).to_string()).collect());
    for &r in &ereps {
        let e = y.edges()[r];
        x.add_named_edge(vclass[e.from], vclass[e.to], y.edge_name(r).to_string())?;
    }
    for &r in &preps {
        let cycle = y
            .polygon(r)
            .cycle
            .iter()
            .map(|&(e, s)| (eclass[e], s * edge_of[e].1))
            .collect();
        x.add_polygon(Polygon::named(cycle, y.polygon_name(r)))?;
    }
    debug_assert!(pclass.iter().all(|&c| c < preps.len()));
    Ok(Quotient {
        complex: x,
        vertex_of: vclass,
        edge_of,
        polygon_of,
        edge_rep: ereps,
        polygon_rep: preps,
        vertex_rep: vreps,
    })
}

/// A finite complex `Y` with a free action of `D`, and a surjection `D → Q`.
/// The base is `Y / D`; the cover is `Y / ker`, with deck group `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverData {
    pub top: PolygonalComplex,
    pub action: DeckAction,
    pub quotient_group: FiniteGroup,
    pub hom: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuiltCover {
    pub base: Quotient,
    pub cover: Quotient,
    pub deck: DeckAction,
    /// Cover edge to base edge with sign.
    pub edge_proj: Vec<(usize, i8)>,
    /// Cover polygon to base polygon with sign.
    pub polygon_proj: Vec<(usize, i8)>,
}

impl BuiltCover {
    pub fn degree(&self) -> usize {
        self.deck.group.order()
    }

    /// Pullback of a base cocycle to the cover.
    pub fn lift(&self, c: &Cocycle2) -> Cocycle2 {
        Cocycle2 {
            coeffs: c.coeffs.clone(),
            values: self.polygon_proj.iter().map(|&(p, s)| c.coeffs.signed(s, &c.values[p])).collect(),
        }
    }
}

impl CoverData {
    pub fn build(&self) -> Result<BuiltCover, CocycleError> {
        let d = &self.action.group;
        let q = &self.quotient_group;
        if self.hom.len() != d.order() || self.hom.iter().any(|&x| x >= q.order()) {
            return Err(CocycleError::BadCover("hom has wrong shape".into()));
        }
        for a in 0..d.order() {
            for b in 0..d.order() {
                if self.hom[d.mul(a, b)] != q.mul(self.hom[a], self.hom[b]) {
                    return Err(CocycleError::BadCover(format!("hom fails on ({a},{b})")));
                }
            }
        }
        let mut lift = vec![usize::MAX; q.order()];
        for g in (0..d.order()).rev() {
            lift[self.hom[g]] = g;
        }
        if lift.contains(&usize::MAX) {
            return Err(CocycleError::BadCover("hom is not surjective".into()));
        }
        let all: BTreeSet<usize> = (0..d.order()).collect();
        let kernel: BTreeSet<usize> = all.iter().copied().filter(|&g| self.hom[g] == q.identity()).collect();
        let base = quotient(&self.top, &self.action, &all)?;
        let cover = quotient(&self.top, &self.action, &kernel)?;
        let edge_proj = cover.edge_rep.iter().map(|&e| base.edge_of[e]).collect();
        let polygon_proj = cover.polygon_rep.iter().map(|&p| base.polygon_of[p]).collect();
        let mut vmaps = Vec::new();
        let mut emaps = Vec::new();
        for &g in &lift {
            vmaps.push(cover.vertex_rep.iter().map(|&v| cover.vertex_of[self.action.vertex_map[g][v]]).collect());
            emaps.push(
                cover
                    .edge_rep
                    .iter()
                    .map(|&e| {
                        let (e2, s1) = self.action.edge_map[g][e];
                        let (cls, s2) = cover.edge_of[e2];
                        (cls, s1 * s2)
                    })
                    .collect(),
            );
        }
        let deck = DeckAction::new(&cover.complex, q.clone(), vmaps, emaps)?;
        Ok(BuiltCover {
            base,
            cover,
            deck,
            edge_proj,
            polygon_proj,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillStep {
    pub walls: Vec<usize>,
    pub seeds: Vec<AbElem>,
    pub polygons_zeroed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum KillOutcome {
    /// `δu = −p*(c)` on the cover, verified.
    Success { u: Cochain1 },
    Failure {
        surviving: Cocycle2,
        obstructing: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillReport {
    pub degree: usize,
    pub lifted: Cocycle2,
    pub steps: Vec<KillStep>,
    pub outcome: KillOutcome,
    /// Independent linear-algebra verdict on whether the lift is a coboundary.
    pub oracle_coboundary: bool,
}

impl KillReport {
    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, KillOutcome::Success { .. })
    }
}

/// Walls with distinct geometric realizations, grouped into deck orbits.
fn wall_orbits(deck: &DeckAction, walls: &[Wall]) -> Vec<Vec<usize>> {
    let mut key_of: HashMap<(BTreeSet<usize>, Vec<(usize, (usize, usize))>), usize> = HashMap::new();
    let mut canon = vec![0; walls.len()];
    for (i, w) in walls.iter().enumerate() {
        let key = (w.edges(), w.diameters.iter().map(|d| (d.polygon, d.positions)).collect());
        canon[i] = *key_of.entry(key).or_insert(i);
    }
    let by_members: HashMap<&[usize], usize> = walls.iter().enumerate().map(|(i, w)| (w.members.as_slice(), i)).collect();
    let mut done = vec![false; walls.len()];
    let mut orbits = Vec::new();
    for i in 0..walls.len() {
        if canon[i] != i || done[i] || walls[i].diameters.is_empty() {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for g in 0..deck.group.order() {
            let img = deck.act_wall(g, &walls[i]);
            if let Some(&j) = by_members.get(img.as_slice()) {
                let j = canon[j];
                done[j] = true;
                orbit.insert(j);
            }
        }
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

fn solve_any_seed(x: &PolygonalComplex, c: &Cocycle2, walls: &[Wall], m: usize) -> Option<(AbElem, Cochain1)> {
    let seed_edge = *walls[m].edges().iter().next()?;
    c.coeffs
        .elements()
        .into_iter()
        .find_map(|g| match propagate_wall(x, c, m, &walls[m], seed_edge, &g) {
            Ok(Some(u)) => Some((g, u)),
            _ => None,
        })
}

/// Lifts `c` to the cover and kills it wall orbit by wall orbit.
pub fn kill_in_cover(cover: &CoverData, c: &Cocycle2) -> Result<KillReport, CocycleError> {
    let built = cover.build()?;
    if c.len() != built.base.complex.num_polygons() {
        return Err(CocycleError::BadCover("cocycle size does not match the base".into()));
    }
    let x = &built.cover.complex;
    let lifted = built.lift(c);
    let oracle_coboundary = is_coboundary(x, &lifted).is_some();
    let mut current = lifted.clone();
    let mut u_total = Cochain1::zero(&c.coeffs, x.num_edges());
    let mut steps = Vec::new();
    let mut pending: Vec<Vec<usize>> = if lifted.is_zero() {
        Vec::new()
    } else {
        let walls = x.compute_walls()?;
        let orbits = wall_orbits(&built.deck, &walls);
        let mut pending = orbits;
        loop {
            let mut progress = false;
            let mut rest = Vec::new();
            for orbit in pending {
                let disjoint = orbit.iter().enumerate().all(|(i, &a)| orbit[i + 1..].iter().all(|&b| !walls_meet(&walls[a], &walls[b])));
                let groups: Vec<Vec<usize>> = if disjoint { vec![orbit.clone()] } else { orbit.iter().map(|&m| vec![m]).collect() };
                let mut ok = true;
                for grp in groups {
                    let mut seeds = Vec::new();
                    let mut choices = Vec::new();
                    for &m in &grp {
                        match solve_any_seed(x, &current, &walls, m) {
                            Some((s, u)) => {
                                seeds.push(s);
                                choices.push(u);
                            }
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                    let (next, u) = kill_along_wall(x, &current, &walls, &grp, &choices)?;
                    let zeroed = grp.iter().map(|&m| walls[m].diameters.len()).sum();
                    current = next;
                    u_total = u_total.add(&u);
                    steps.push(KillStep {
                        walls: grp,
                        seeds,
                        polygons_zeroed: zeroed,
                    });
                }
                if ok {
                    progress = true;
                } else {
                    rest.push(orbit);
                }
            }
            pending = rest;
            if !progress || pending.is_empty() {
                break;
            }
        }
        pending
    };
    if !current.is_zero() && pending.is_empty() {
        // Polygons untouched by any wall keep their values.
        pending.push(Vec::new());
    }
    let outcome = if pending.is_empty() {
        let check = lifted.add(&coboundary(x, &u_total));
        debug_assert!(check.is_zero());
        if !check.is_zero() {
            return Err(CocycleError::BadCover("certificate failed re-verification".into()));
        }
        KillOutcome::Success { u: u_total }
    } else {
        KillOutcome::Failure {
            surviving: current,
            obstructing: pending,
        }
    };
    Ok(KillReport {
        degree: built.degree(),
        lifted,
        steps,
        outcome,
        oracle_coboundary,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionVerdict {
    /// The central extension splits over the subgroup of this index.
    Splits { index: usize },
    Unresolved {
        surviving_support: Vec<usize>,
        obstructing: Vec<Vec<usize>>,
    },
}

pub fn extension_report(report: &KillReport) -> ExtensionVerdict {
    match &report.outcome {
        KillOutcome::Success { .. } => ExtensionVerdict::Splits { index: report.degree },
        KillOutcome::Failure { surviving, obstructing } => ExtensionVerdict::Unresolved {
            surviving_support: surviving.support().into_iter().collect(),
            obstructing: obstructing.clone(),
        },
    }
}

/// Some `u` with `δu = c`, found by elimination over each cyclic factor.
pub fn is_coboundary(x: &PolygonalComplex, c: &Cocycle2) -> Option<Cochain1> {
    let ne = x.num_edges();
    let mut matrix = vec![vec![0i64; ne]; x.num_polygons()];
    for (p, poly) in x.polygons().iter().enumerate() {
        for &(e, s) in &poly.cycle {
            matrix[p][e] += i64::from(s);
        }
    }
    let a = &c.coeffs;
    let mut u = Cochain1::zero(a, ne);
    for (k, &n) in a.torsion.iter().enumerate() {
        let rhs: Vec<i64> = c.values.iter().map(|v| v[k] as i64).collect();
        let sol = linear::solve_mod(&matrix, &rhs, n)?;
        for e in 0..ne {
            u.values[e][k] = sol[e];
        }
    }
    Some(u)
}

/// Linear systems over `Z/n`.
pub mod linear {
    fn factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                let mut k = 0;
                while n % p == 0 {
                    n /= p;
                    k += 1;
                }
                out.push((p, k));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    fn inv_mod(a: u64, m: u64) -> Option<u64> {
        let (mut r0, mut r1) = (m as i128, (a % m) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
    }

    fn valuation(x: u64, p: u64, k: u32) -> u32 {
        if x == 0 {
            return k;
        }
        let mut v = 0;
        let mut y = x;
        while y % p == 0 {
            y /= p;
            v += 1;
        }
        v
    }

    fn mulmod(a: u64, b: u64, m: u64) -> u64 {
        ((a as u128 * b as u128) % m as u128) as u64
    }

    /// Solves over the local ring `Z/p^k` by diagonalising with
    /// minimal-valuation pivots and tracked column operations.
    fn solve_prime_power(a: &[Vec<i64>], b: &[i64], p: u64, k: u32) -> Option<Vec<u64>> {
        let q = p.pow(k);
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let red = |x: i64| x.rem_euclid(q as i64) as u64;
        let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| red(x)).collect()).collect();
        let mut rhs: Vec<u64> = b.iter().map(|&x| red(x)).collect();
        let mut t: Vec<Vec<u64>> = (0..cols).map(|i| (0..cols).map(|j| u64::from(i == j)).collect()).collect();
        let mut diag = Vec::new();
        let mut r = 0;
        while r < rows.min(cols) {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(r) {
                for (j, &x) in row.iter().enumerate().skip(r) {
                    if x != 0 {
                        let v = valuation(x, p, k);
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((v, i, j)) = best else { break };
            m.swap(r, i);
            rhs.swap(r, i);
            for row in m.iter_mut() {
                row.swap(r, j);
            }
            for row in t.iter_mut() {
                row.swap(r, j);
            }
            let pv = p.pow(v);
            let w = m[r][r] / pv;
            let winv = inv_mod(w, q)?;
            for i2 in r + 1..rows {
                if m[i2][r] != 0 {
                    let f = mulmod(m[i2][r] / pv, winv, q);
                    for j2 in r..cols {
                        let sub = mulmod(f, m[r][j2], q);
                        m[i2][j2] = (m[i2][j2] + q - sub) % q;
                    }
                    rhs[i2] = (rhs[i2] + q - mulmod(f, rhs[r], q)) % q;
                }
            }
            for j2 in r + 1..cols {
                if m[r][j2] != 0 {
                    let f = mulmod(m[r][j2] / pv, winv, q);
                    for row in m.iter_mut() {
                        let sub = mulmod(f, row[r], q);
                        row[j2] = (row[j2] + q - sub) % q;
                    }
                    for row in t.iter_mut() {
                        let sub = mulmod(f, row[r], q);
                        row[j2] = (row[j2] + q - sub) % q;
                    }
                }
            }
            diag.push((pv, winv));
            r += 1;
        }
        if rhs[r..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut y = vec![0u64; cols];
        for (i, &(pv, winv)) in diag.iter().enumerate() {
            if rhs[i] % pv != 0 {
                return None;
            }
            y[i] = mulmod(rhs[i] / pv, winv, q);
        }
        Some(
            (0..cols)
                .map(|i| (0..cols).fold(0u64, |acc, j| (acc + mulmod(t[i][j], y[j], q)) % q))
                .collect(),
        )
    }

    /// Some `x` with `a x = b` over `Z/n`, if one exists.
    pub fn solve_mod(a: &[Vec<i64>], b: &[i64], n: u64) -> Option<Vec<u64>> {
        let cols = a.first().map_or(0, Vec::len);
        if n == 1 {
            return Some(vec![0; cols]);
        }
        let mut x = vec![0u64; cols];
        let mut modulus = 1u64;
        for (p, k) in factor(n) {
            let q = p.pow(k);
            let part = solve_prime_power(a, b, p, k)?;
            // CRT: x ≡ x (mod modulus), x ≡ part (mod q).
            let inv = inv_mod(modulus % q, q).unwrap_or(0);
            for i in 0..cols {
                let diff = (part[i] + q - x[i] % q) % q;
                let step = mulmod(diff, inv, q);
                x[i] += modulus * step;
            }
            modulus *= q;
        }
        Some(x)
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn crt_and_local_solves() {
            // 2x = 4 over Z/12 has solutions; 2x = 1 does not.
            let a = vec![vec![2]];
            let x = solve_mod(&a, &[4], 12).unwrap();
            assert_eq!((2 * x[0]) % 12, 4);
            assert!(solve_mod(&a, &[1], 12).is_none());
            let a = vec![vec![1, -1], vec![-1, 1]];
            assert!(solve_mod(&a, &[1, 1], 2).is_some());
            assert!(solve_mod(&a, &[1, 0], 2).is_none());
            assert!(solve_mod(&[vec![4, 6]], &[2], 8).is_some());
            assert!(solve_mod(&[vec![4, 8]], &[2], 16).is_none());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygonal::samples::{ladder, single_polygon, torus_grid, torus_translations};

    fn z2() -> FiniteAbelian {
        FiniteAbelian::cyclic(2)
    }

    #[test]
    fn coboundary_examples() {
        let x = single_polygon(4);
        let mut u = Cochain1::zero(&z2(), 4);
        assert!(coboundary(&x, &u).is_zero());
        u.set(0, vec![1]);
        assert_eq!(coboundary(&x, &u).values, vec![vec![1]]);
        let t = torus_grid(1, 1);
        let mut u = Cochain1::zero(&FiniteAbelian::cyclic(3), 2);
        u.set(0, vec![2]);
        assert!(coboundary(&t, &u).is_zero());
    }

    #[test]
    fn ladder_propagation() {
        let x = ladder(3);
        let walls = x.compute_walls().unwrap();
        let m = walls.iter().position(|w| w.contains(0) && w.diameters.len() == 3).unwrap();
        let c = Cocycle2::from_values(&z2(), vec![vec![1], vec![0], vec![1]]);
        let sol = solve_wall_field(&x, &c, &walls, m, 0, &vec![0]).unwrap();
        let rungs: Vec<u64> = (0..4).map(|e| sol.u.values[e][0]).collect();
        assert_eq!(rungs, vec![0, 1, 1, 0]);
        assert!(verify_wall_field(&x, &c, &walls[m], &sol.u));
    }

    #[test]
    fn torus_double_cover_kills() {
        let top = torus_grid(2, 2);
        let action = torus_translations(2, 2);
        let cover = CoverData {
            top,
            action,
            quotient_group: FiniteGroup::cyclic(2),
            hom: vec![0, 1, 0, 1],
        };
        let c = Cocycle2::from_values(&z2(), vec![vec![1]]);
        let r = kill_in_cover(&cover, &c).unwrap();
        assert!(r.succeeded(), "{r:?}");
        assert!(r.oracle_coboundary);
        assert_eq!(extension_report(&r), ExtensionVerdict::Splits { index: 2 });
    }

    #[test]
    fn trivial_cover_fails() {
        let top = torus_grid(1, 1);
        let action = DeckAction::trivial(&top);
        let cover = CoverData {
            top,
            action,
            quotient_group: FiniteGroup::trivial(),
            hom: vec![0],
        };
        let c = Cocycle2::from_values(&z2(), vec![vec![1]]);
        let r = kill_in_cover(&cover, &c).unwrap();
        assert!(!r.succeeded());
        assert!(!r.oracle_coboundary);
    }
}
