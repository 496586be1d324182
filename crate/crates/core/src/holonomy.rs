//! Holonomy of finite-index subgroups, atlases, atlas words and germ
//! extension.
//!
//! A finite-index subgroup is always given as the preimage `φ⁻¹(S)` of a
//! subgroup `S` of a finite quotient `Q`. Components of the `i`-boundary of
//! the `i⊥=`-residue with canonical base chamber `b` are labelled by
//! `G_i` through `c ↦ ρ_i(b⁻¹c)`, so every permutation below acts on
//! `0..|G_i|`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::building::{AdjacencyType, Building, BuildingError, Residue};
use crate::graph_product::{mask_iter, NormalForm, ProductError, ProductPresentation, DEFAULT_BALL_CAP};
use crate::groups::{perm, FiniteGroup, GroupError, GroupHom, SubgroupData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HolonomyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("residue is not of type i⊥= for vertex {0}")]
    WrongResidueType(usize),
    #[error("subgroup has nontrivial holonomy at vertex {vertex}, residue based at {base}")]
    NontrivialHolonomy { vertex: usize, base: String },
    #[error("seed for vertex {0} is not a simply transitive action")]
    BadSeed(usize),
    #[error("invalid letter ({0}, {1})")]
    InvalidLetter(usize, usize),
    #[error("subgroup and presentation do not match")]
    PresentationMismatch,
    #[error("atlas is not invariant under {generator} at chamber {chamber}")]
    NotInvariant { generator: String, chamber: String },
    #[error("lassoe at chamber {chamber} does not close ({kind})")]
    ConsistencyFailure { chamber: String, kind: String },
    #[error("conjugated generator {generator} is not a translation at chamber {chamber}")]
    WitnessMismatch { generator: String, chamber: String },
}

/// Holonomy of a subgroup at one `i⊥=`-residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolonomyReport {
    pub vertex: usize,
    pub residue: Residue,
    /// Elements `a ∈ G_i` whose left translation lies in the image.
    pub elements: Vec<usize>,
    /// The image as permutations of the `G_i` labels.
    pub permutations: Vec<Vec<usize>>,
}

impl HolonomyReport {
    pub fn is_trivial(&self) -> bool {
        self.permutations.iter().all(|p| perm::is_identity(p))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn check_source(p: &ProductPresentation, hom: &GroupHom) -> Result<(), HolonomyError> {
    let imgs = hom.images();
    if imgs.len() != p.num_vertices() || (0..p.num_vertices()).any(|v| imgs[v].len() != p.group(v).order()) {
        return Err(HolonomyError::PresentationMismatch);
    }
    Ok(())
}

fn left_translation(g: &FiniteGroup, a: usize) -> Vec<usize> {
    (0..g.order()).map(|x| g.mul(a, x)).collect()
}

fn vertex_set(mask: u64) -> Vec<usize> {
    mask_iter(mask).collect()
}

/// Holonomy of `sub` at the `i⊥=`-residue `r`.
pub fn holonomy_at(b: &Building, sub: &SubgroupData, i: usize, r: &Residue) -> Result<HolonomyReport, HolonomyError> {
    let p = b.presentation();
    check_source(p, &sub.hom)?;
    if r.mask != p.perp_eq(i) {
        return Err(HolonomyError::WrongResidueType(i));
    }
    let q = sub.hom.target();
    let qg = sub.hom.eval_word(&r.base);
    let conj = q.conjugate_set(&sub.image, qg);
    let k = sub.hom.image_of_vertices(&vertex_set(p.perp(i)));
    let allowed: BTreeSet<usize> = conj
        .iter()
        .flat_map(|&s| k.iter().map(move |&kk| q.mul(s, kk)))
        .collect();
    let gi = p.group(i);
    let elements: Vec<usize> = (0..gi.order())
        .filter(|&a| allowed.contains(&sub.hom.eval_syllable(i, a)))
        .collect();
    let permutations = elements.iter().map(|&a| left_translation(gi, a)).collect();
    Ok(HolonomyReport {
        vertex: i,
        residue: r.clone(),
        elements,
        permutations,
    })
}

/// Shortest preimage in the graph product of every element of `φ(Γ)`.
pub fn lift_table(p: &ProductPresentation, hom: &GroupHom) -> BTreeMap<usize, NormalForm> {
    let q = hom.target();
    let mut out = BTreeMap::from([(q.identity(), p.identity())]);
    let mut queue = VecDeque::from([(q.identity(), p.identity())]);
    while let Some((x, w)) = queue.pop_front() {
        for v in 0..p.num_vertices() {
            for g in 1..p.group(v).order() {
                let y = q.mul(x, hom.eval_syllable(v, g));
                if let std::collections::btree_map::Entry::Vacant(e) = out.entry(y) {
                    let w2 = p.multiply_syllable(&w, v, g);
                    e.insert(w2.clone());
                    queue.push_back((y, w2));
                }
            }
        }
    }
    out
}

fn effective_image(sub: &SubgroupData) -> BTreeSet<usize> {
    let img = sub.hom.image();
    sub.image.intersection(&img).copied().collect()
}

/// Canonical residue representatives of `Λ\Γ/Γ_{i⊥=}`: the least element
/// of each double coset in `Q`, lifted and reduced to a coset rep.
pub fn residue_representatives(b: &Building, sub: &SubgroupData, i: usize) -> Result<Vec<(usize, Residue)>, HolonomyError> {
    let p = b.presentation();
    check_source(p, &sub.hom)?;
    let q = sub.hom.target();
    let img = sub.hom.image();
    let s = effective_image(sub);
    let t = sub.hom.image_of_vertices(&vertex_set(p.perp_eq(i)));
    let lifts = lift_table(p, &sub.hom);
    let reps = q.double_coset_reps(&s, &t)?;
    Ok(reps
        .into_iter()
        .filter(|x| img.contains(x))
        .map(|x| (x, b.residue(p.perp_eq(i), &lifts[&x])))
        .collect())
}

/// Holonomy at every representative residue for every vertex.
pub fn holonomy_profile(b: &Building, sub: &SubgroupData) -> Result<Vec<HolonomyReport>, HolonomyError> {
    let mut out = Vec::new();
    for i in 0..b.presentation().num_vertices() {
        for (_, r) in residue_representatives(b, sub, i)? {
            out.push(holonomy_at(b, sub, i, &r)?);
        }
    }
    Ok(out)
}

/// Right cosets `Λγ` with a transversal found by breadth-first search.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub transversal: Vec<NormalForm>,
    keys: BTreeMap<usize, usize>,
    s: BTreeSet<usize>,
}

impl CosetTable {
    pub fn new(p: &ProductPresentation, sub: &SubgroupData) -> Self {
        let q = sub.hom.target();
        let s = effective_image(sub);
        let mut keys = BTreeMap::from([(q.right_coset_rep(&s, q.identity()), 0)]);
        let mut transversal = vec![p.identity()];
        let mut queue = VecDeque::from([(q.identity(), p.identity())]);
        while let Some((x, w)) = queue.pop_front() {
            for v in 0..p.num_vertices() {
                for g in 1..p.group(v).order() {
                    let y = q.mul(x, sub.hom.eval_syllable(v, g));
                    let key = q.right_coset_rep(&s, y);
                    if !keys.contains_key(&key) {
                        let w2 = p.multiply_syllable(&w, v, g);
                        keys.insert(key, transversal.len());
                        transversal.push(w2.clone());
                        queue.push_back((y, w2));
                    }
                }
            }
        }
        CosetTable { transversal, keys, s }
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    pub fn coset_of(&self, sub: &SubgroupData, w: &NormalForm) -> usize {
        let q = sub.hom.target();
        self.keys[&q.right_coset_rep(&self.s, sub.hom.eval_word(w))]
    }

    /// Schreier generators `t·x·rep(tx)⁻¹`, deduplicated, identity dropped.
    pub fn schreier_generators(&self, p: &ProductPresentation, sub: &SubgroupData) -> Vec<NormalForm> {
        let mut gens = BTreeSet::new();
        for t in &self.transversal {
            for v in 0..p.num_vertices() {
                for g in 1..p.group(v).order() {
                    let u = p.multiply_syllable(t, v, g);
                    let rep = &self.transversal[self.coset_of(sub, &u)];
                    let lambda = p.multiply(&u, &p.inverse(rep));
                    if !lambda.is_empty() {
                        gens.insert(lambda);
                    }
                }
            }
        }
        gens.into_iter().collect()
    }
}

/// A seed for one `Λ`-orbit of `i⊥=`-residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub vertex: usize,
    /// Double coset representative in `Q`.
    pub rep: usize,
    /// Canonical base chamber of the representative residue.
    pub base: NormalForm,
    /// `seed[h]` is the permutation of labels assigned to `h ∈ G_i`.
    pub seed: Vec<Vec<usize>>,
}

/// An atlas invariant under its owning subgroup, stored one chart per
/// residue orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atlas {
    owner: SubgroupData,
    charts: Vec<Vec<Chart>>,
    /// Per vertex: `φ(Γ_{i⊥})` and `φ(Γ_{i⊥=})`.
    perp_images: Vec<(BTreeSet<usize>, BTreeSet<usize>)>,
    owner_image: BTreeSet<usize>,
}

/// Right translation action `h ↦ (g ↦ g h⁻¹)`.
pub fn right_translation_seed(g: &FiniteGroup) -> Vec<Vec<usize>> {
    (0..g.order())
        .map(|h| (0..g.order()).map(|x| g.mul(x, g.inv(h))).collect())
        .collect()
}

/// The right translation seed conjugated by a relabelling `π`.
pub fn twisted_seed(g: &FiniteGroup, pi: &[usize]) -> Vec<Vec<usize>> {
    let pinv = perm::inverse(pi);
    right_translation_seed(g)
        .into_iter()
        .map(|r| perm::compose(pi, &perm::compose(&r, &pinv)))
        .collect()
}

fn is_simply_transitive_action(g: &FiniteGroup, seed: &[Vec<usize>]) -> bool {
    let n = g.order();
    if seed.len() != n || seed.iter().any(|s| s.len() != n) {
        return false;
    }
    let valid_perm = |s: &Vec<usize>| {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        set.len() == n && set.iter().all(|&x| x < n)
    };
    if !seed.iter().all(valid_perm) {
        return false;
    }
    for a in 0..n {
        for c in 0..n {
            if seed[g.mul(a, c)] != perm::compose(&seed[a], &seed[c]) {
                return false;
            }
        }
    }
    let orbit: BTreeSet<usize> = seed.iter().map(|s| s[0]).collect();
    orbit.len() == n
}

fn conjugate_by_translation(g: &FiniteGroup, a: usize, s: &[usize]) -> Vec<usize> {
    let ainv = g.inv(a);
    (0..g.order()).map(|x| g.mul(a, s[g.mul(ainv, x)])).collect()
}

impl Atlas {
    fn assemble(b: &Building, owner: SubgroupData, charts: Vec<Vec<Chart>>) -> Self {
        let p = b.presentation();
        let perp_images = (0..p.num_vertices())
            .map(|i| {
                (
                    owner.hom.image_of_vertices(&vertex_set(p.perp(i))),
                    owner.hom.image_of_vertices(&vertex_set(p.perp_eq(i))),
                )
            })
            .collect();
        let owner_image = effective_image(&owner);
        Atlas {
            owner,
            charts,
            perp_images,
            owner_image,
        }
    }

    /// The standard atlas: right translation at the base residue, carried
    /// everywhere by the whole group.
    pub fn standard(b: &Building) -> Self {
        let p = b.presentation();
        let images = (0..p.num_vertices()).map(|v| vec![0; p.group(v).order()]).collect();
        let hom = GroupHom::from_graph_product(p, FiniteGroup::trivial(), images).expect("trivial map");
        let owner = SubgroupData::whole(hom);
        let charts = (0..p.num_vertices())
            .map(|i| {
                vec![Chart {
                    vertex: i,
                    rep: 0,
                    base: p.identity(),
                    seed: right_translation_seed(p.group(i)),
                }]
            })
            .collect();
        Self::assemble(b, owner, charts)
    }

    /// An atlas invariant under a holonomy-free subgroup, with right
    /// translation seeds.
    pub fn from_holonomy_free(b: &Building, sub: &SubgroupData) -> Result<Self, HolonomyError> {
        Self::from_holonomy_free_seeded(b, sub, &BTreeMap::new())
    }

    /// As [`Atlas::from_holonomy_free`], overriding the seed of chart
    /// `(vertex, index)` where given.
    pub fn from_holonomy_free_seeded(
        b: &Building,
        sub: &SubgroupData,
        seeds: &BTreeMap<(usize, usize), Vec<Vec<usize>>>,
    ) -> Result<Self, HolonomyError> {
        let p = b.presentation();
        let mut charts = Vec::new();
        for i in 0..p.num_vertices() {
            let mut row = Vec::new();
            for (idx, (rep, r)) in residue_representatives(b, sub, i)?.into_iter().enumerate() {
                let h = holonomy_at(b, sub, i, &r)?;
                if !h.is_trivial() {
                    return Err(HolonomyError::NontrivialHolonomy {
                        vertex: i,
                        base: p.format_word(&r.base),
                    });
                }
                let seed = match seeds.get(&(i, idx)) {
                    Some(s) => {
                        if !is_simply_transitive_action(p.group(i), s) {
                            return Err(HolonomyError::BadSeed(i));
                        }
                        s.clone()
                    }
                    None => right_translation_seed(p.group(i)),
                };
                row.push(Chart {
                    vertex: i,
                    rep,
                    base: r.base,
                    seed,
                });
            }
            charts.push(row);
        }
        let atlas = Self::assemble(b, sub.clone(), charts);
        atlas.check_invariance(b, 2)?;
        Ok(atlas)
    }

    pub fn owner(&self) -> &SubgroupData {
        &self.owner
    }

    pub fn charts(&self, i: usize) -> &[Chart] {
        &self.charts[i]
    }

    /// Label of chamber `c` in the `i`-boundary of its `i⊥=`-residue.
    pub fn label(&self, b: &Building, i: usize, c: &NormalForm) -> usize {
        let p = b.presentation();
        let base = b.coset_rep(c, p.perp_eq(i));
        p.retract_vertex(i, &p.quotient(&base, c))
    }

    /// The action `𝒜_{i,R}` at `R = R(i⊥=, c)`, one permutation per `h`.
    pub fn action(&self, b: &Building, i: usize, c: &NormalForm) -> Vec<Vec<usize>> {
        let p = b.presentation();
        let gi = p.group(i);
        let base = b.coset_rep(c, p.perp_eq(i));
        let q = self.owner.hom.target();
        let qr = self.owner.hom.eval_word(&base);
        let (k, t) = &self.perp_images[i];
        let rep = q.double_coset_rep_of(&self.owner_image, qr, t);
        let chart = self.charts[i]
            .iter()
            .find(|ch| ch.rep == rep)
            .expect("every residue lies in a represented orbit");
        let q0inv = q.inv(self.owner.hom.eval_word(&chart.base));
        // a = x_i with φ(b_R) φ(x_i) κ φ(b_0)⁻¹ ∈ S for some κ ∈ φ(Γ_{i⊥}).
        let a = (0..gi.order())
            .find(|&x| {
                let left = q.mul(qr, self.owner.hom.eval_syllable(i, x));
                k.iter()
                    .any(|&kk| self.owner_image.contains(&q.mul(q.mul(left, kk), q0inv)))
            })
            .expect("residue is a translate of its representative");
        chart
            .seed
            .iter()
            .map(|s| conjugate_by_translation(gi, a, s))
            .collect()
    }

    /// Letter of the one-step gallery `(c, d)`.
    pub fn letter(&self, b: &Building, c: &NormalForm, d: &NormalForm) -> Result<Letter, HolonomyError> {
        match b.adjacency_type(c, d) {
            AdjacencyType::Equal => Ok(Letter::Empty),
            AdjacencyType::NotAdjacent => Err(BuildingError::NotAGallery(0, 1).into()),
            AdjacencyType::Type(i) => {
                let gi = b.presentation().group(i);
                let from = self.label(b, i, c);
                let to = self.label(b, i, d);
                let act = self.action(b, i, c);
                let g = (0..gi.order())
                    .find(|&g| act[g][from] == to)
                    .expect("simply transitive");
                Ok(Letter::Step { vertex: i, element: g })
            }
        }
    }

    /// The chamber reached from `c` by one letter.
    pub fn step(&self, b: &Building, c: &NormalForm, letter: Letter) -> Result<NormalForm, HolonomyError> {
        let p = b.presentation();
        match letter {
            Letter::Empty => Ok(c.clone()),
            Letter::Step { vertex: i, element: g } => {
                if i >= p.num_vertices() || g == 0 || g >= p.group(i).order() {
                    return Err(HolonomyError::InvalidLetter(i, g));
                }
                let gi = p.group(i);
                let from = self.label(b, i, c);
                let to = self.action(b, i, c)[g][from];
                let s = gi.mul(gi.inv(from), to);
                Ok(p.multiply_syllable(c, i, s))
            }
        }
    }

    /// Checks `𝒜_{λR}(h) = λ_* 𝒜_R(h) λ_*⁻¹` for every Schreier generator
    /// `λ` of the owner and every residue meeting the radius ball.
    pub fn check_invariance(&self, b: &Building, radius: usize) -> Result<usize, HolonomyError> {
        let p = b.presentation();
        let table = CosetTable::new(p, &self.owner);
        let gens = table.schreier_generators(p, &self.owner);
        let chambers = p.enumerate_ball(radius, DEFAULT_BALL_CAP)?;
        let mut checks = 0;
        for i in 0..p.num_vertices() {
            let gi = p.group(i);
            let mut seen = BTreeSet::new();
            for c in &chambers {
                let base = b.coset_rep(c, p.perp_eq(i));
                if !seen.insert(base.clone()) {
                    continue;
                }
                let here = self.action(b, i, &base);
                for lambda in &gens {
                    let moved = p.multiply(lambda, &base);
                    let there_base = b.coset_rep(&moved, p.perp_eq(i));
                    let a = p.retract_vertex(i, &p.quotient(&there_base, &moved));
                    let there = self.action(b, i, &there_base);
                    for h in 0..gi.order() {
                        if there[h] != conjugate_by_translation(gi, a, &here[h]) {
                            return Err(HolonomyError::NotInvariant {
                                generator: p.format_word(lambda),
                                chamber: p.format_word(&base),
                            });
                        }
                    }
                    checks += 1;
                }
            }
        }
        Ok(checks)
    }

    /// Whether the two atlases are equivalent on every residue meeting the
    /// radius ball: `𝒜'(g) = 𝒜(u g u⁻¹)` for some `u ∈ G_i` per residue.
    pub fn equivalent_on(&self, other: &Atlas, b: &Building, radius: usize) -> Result<bool, HolonomyError> {
        let p = b.presentation();
        let chambers = p.enumerate_ball(radius, DEFAULT_BALL_CAP)?;
        for i in 0..p.num_vertices() {
            let gi = p.group(i);
            for c in &chambers {
                let mine = self.action(b, i, c);
                let theirs = other.action(b, i, c);
                let ok = (0..gi.order()).any(|u| {
                    (0..gi.order()).all(|g| theirs[g] == mine[gi.mul(gi.mul(u, g), gi.inv(u))])
                });
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A letter of the atlas alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Empty,
    Step { vertex: usize, element: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GalleryWord(pub Vec<Letter>);

pub fn word_of_gallery(b: &Building, atlas: &Atlas, gallery: &[NormalForm]) -> Result<GalleryWord, HolonomyError> {
    let mut out = Vec::with_capacity(gallery.len().saturating_sub(1));
    for (k, w) in gallery.windows(2).enumerate() {
        let l = atlas.letter(b, &w[0], &w[1]).map_err(|e| match e {
            HolonomyError::Building(BuildingError::NotAGallery(..)) => BuildingError::NotAGallery(k, k + 1).into(),
            e => e,
        })?;
        out.push(l);
    }
    Ok(GalleryWord(out))
}

pub fn gallery_of_word(b: &Building, atlas: &Atlas, base: &NormalForm, word: &GalleryWord) -> Result<Vec<NormalForm>, HolonomyError> {
    let mut out = vec![base.clone()];
    for &l in &word.0 {
        let next = atlas.step(b, out.last().expect("nonempty"), l)?;
        out.push(next);
    }
    Ok(out)
}

/// The gallery following the normal form of `from⁻¹ to`.
pub fn geodesic(p: &ProductPresentation, from: &NormalForm, to: &NormalForm) -> Vec<NormalForm> {
    let mut cur = from.clone();
    let mut out = vec![cur.clone()];
    for &(v, g) in p.quotient(from, to).syllables() {
        cur = p.multiply_syllable(&cur, v, g);
        out.push(cur.clone());
    }
    out
}

/// Summary of a lassoe certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub radius: usize,
    pub chambers: usize,
    pub squares: usize,
    pub triangles: usize,
}

/// The extension of a germ carrying one atlas to another, evaluated on
/// demand. The cache is shared between readers behind a lock.
#[derive(Debug)]
pub struct LazyAutomorphism<'a> {
    building: &'a Building,
    src: &'a Atlas,
    dst: &'a Atlas,
    germ: (NormalForm, NormalForm),
    cache: RwLock<HashMap<NormalForm, NormalForm>>,
}

impl<'a> LazyAutomorphism<'a> {
    pub fn extend_germ(building: &'a Building, germ: (NormalForm, NormalForm), src: &'a Atlas, dst: &'a Atlas) -> Self {
        let cache = RwLock::new(HashMap::from([(germ.0.clone(), germ.1.clone())]));
        LazyAutomorphism {
            building,
            src,
            dst,
            germ,
            cache,
        }
    }

    pub fn germ(&self) -> &(NormalForm, NormalForm) {
        &self.germ
    }

    /// Image of the chamber reached from `d` by the step `c → c_next`.
    fn transport(&self, c: &NormalForm, d: &NormalForm, c_next: &NormalForm) -> Result<NormalForm, HolonomyError> {
        let l = self.src.letter(self.building, c, c_next)?;
        self.dst.step(self.building, d, l)
    }

    pub fn evaluate(&self, c: &NormalForm) -> Result<NormalForm, HolonomyError> {
        if let Some(d) = self.cache.read().expect("cache lock").get(c) {
            return Ok(d.clone());
        }
        let p = self.building.presentation();
        let path = geodesic(p, &self.germ.0, c);
        let mut d = self.germ.1.clone();
        let mut fresh = Vec::new();
        {
            let cache = self.cache.read().expect("cache lock");
            for w in path.windows(2) {
                d = match cache.get(&w[1]) {
                    Some(x) => x.clone(),
                    None => {
                        let x = self.transport(&w[0], &d, &w[1])?;
                        fresh.push((w[1].clone(), x.clone()));
                        x
                    }
                };
            }
        }
        self.cache.write().expect("cache lock").extend(fresh);
        Ok(d)
    }

    fn failure(&self, c: &NormalForm, kind: &str) -> HolonomyError {
        HolonomyError::ConsistencyFailure {
            chamber: self.building.presentation().format_word(c),
            kind: kind.into(),
        }
    }

    /// Replays every rank-2 square and rank-1 triangle based in the radius
    /// ball around the source chamber and checks that each closes and
    /// agrees with `evaluate`.
    pub fn certify(&self, radius: usize) -> Result<Certification, HolonomyError> {
        let p = self.building.presentation();
        let n = p.num_vertices();
        let ball: Vec<NormalForm> = p
            .enumerate_ball(radius, DEFAULT_BALL_CAP)?
            .iter()
            .map(|w| p.multiply(&self.germ.0, w))
            .collect();
        let mut squares = 0;
        let mut triangles = 0;
        for c in &ball {
            let fc = self.evaluate(c)?;
            for i in 0..n {
                let gi = p.group(i);
                for a in 1..gi.order() {
                    let ca = p.multiply_syllable(c, i, a);
                    let fca = self.transport(c, &fc, &ca)?;
                    if self.building.adjacency_type(&fc, &fca) != AdjacencyType::Type(i) {
                        return Err(self.failure(c, "type not preserved"));
                    }
                    if fca != self.evaluate(&ca)? {
                        return Err(self.failure(c, "step disagrees with evaluation"));
                    }
                    for a2 in 1..gi.order() {
                        let caa = p.multiply_syllable(&ca, i, a2);
                        let via = self.transport(&ca, &fca, &caa)?;
                        let direct = self.transport(c, &fc, &caa)?;
                        if via != direct {
                            return Err(self.failure(c, "rank-1 triangle"));
                        }
                        triangles += 1;
                    }
                    for j in (i + 1)..n {
                        if !p.adjacent(i, j) {
                            continue;
                        }
                        for bb in 1..p.group(j).order() {
                            let cb = p.multiply_syllable(c, j, bb);
                            let cab = p.multiply_syllable(&ca, j, bb);
                            let one = self.transport(&ca, &fca, &cab)?;
                            let fcb = self.transport(c, &fc, &cb)?;
                            let two = self.transport(&cb, &fcb, &cab)?;
                            if one != two {
                                return Err(self.failure(c, "rank-2 square"));
                            }
                            squares += 1;
                        }
                    }
                }
            }
        }
        Ok(Certification {
            radius,
            chambers: ball.len(),
            squares,
            triangles,
        })
    }
}

/// Result of cutting a subgroup down by separating quotients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KillHolonomyReport {
    pub subgroup: SubgroupData,
    pub reports: Vec<HolonomyReport>,
}

impl KillHolonomyReport {
    pub fn all_trivial(&self) -> bool {
        self.reports.iter().all(HolonomyReport::is_trivial)
    }

    pub fn surviving(&self) -> Vec<&HolonomyReport> {
        self.reports.iter().filter(|r| !r.is_trivial()).collect()
    }
}

/// Intersects `sub` with the kernels of the separators, realised as the
/// preimage of `S × 1 × … × 1` in the image of the combined map.
pub fn kill_holonomy(b: &Building, sub: &SubgroupData, separators: &[GroupHom]) -> Result<KillHolonomyReport, HolonomyError> {
    let p = b.presentation();
    check_source(p, &sub.hom)?;
    for s in separators {
        check_source(p, s)?;
    }
    let subgroup = if separators.is_empty() {
        sub.clone()
    } else {
        let mut factors = vec![sub.hom.target()];
        factors.extend(separators.iter().map(GroupHom::target));
        let coords = |v: usize, g: usize| -> Vec<usize> {
            let mut c = vec![sub.hom.eval_syllable(v, g)];
            c.extend(separators.iter().map(|s| s.eval_syllable(v, g)));
            c
        };
        let gens: Vec<Vec<usize>> = (0..p.num_vertices())
            .flat_map(|v| (0..p.group(v).order()).map(move |g| (v, g)))
            .map(|(v, g)| coords(v, g))
            .collect();
        // Only the image of the combined map is materialised.
        let (target, elems) = FiniteGroup::generated_in_product(&factors, &gens);
        let index: HashMap<&[usize], usize> = elems.iter().enumerate().map(|(k, e)| (e.as_slice(), k)).collect();
        let images = (0..p.num_vertices())
            .map(|v| (0..p.group(v).order()).map(|g| index[coords(v, g).as_slice()]).collect())
            .collect();
        let hom = GroupHom::from_graph_product(p, target, images)?;
        let image = elems
            .iter()
            .enumerate()
            .filter(|(_, e)| sub.image.contains(&e[0]) && e[1..].iter().zip(&factors[1..]).all(|(&x, g)| x == g.identity()))
            .map(|(k, _)| k)
            .collect();
        SubgroupData::new(hom, image)?
    };
    let reports = holonomy_profile(b, &subgroup)?;
    Ok(KillHolonomyReport { subgroup, reports })
}

/// One generator of the subgroup and the translation its conjugate equals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorWitness {
    pub generator: NormalForm,
    pub translation: NormalForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommensurationWitness {
    pub radius: usize,
    pub index: usize,
    pub chambers_checked: usize,
    pub generators: Vec<GeneratorWitness>,
    /// Coset representatives `t` with the chamber `f̄(t C_*)`.
    pub transversal: Vec<(NormalForm, NormalForm)>,
}

/// Conjugates every Schreier generator of a holonomy-free subgroup into the
/// automorphism group of the standard atlas and checks on the radius ball
/// that each conjugate is a left translation.
pub fn commensuration_witness(b: &Building, sub: &SubgroupData, radius: usize) -> Result<CommensurationWitness, HolonomyError> {
    let p = b.presentation();
    let atlas = Atlas::from_holonomy_free(b, sub)?;
    let standard = Atlas::standard(b);
    let id = (p.identity(), p.identity());
    let f = LazyAutomorphism::extend_germ(b, id.clone(), &atlas, &standard);
    let finv = LazyAutomorphism::extend_germ(b, id, &standard, &atlas);
    let table = CosetTable::new(p, sub);
    let ball = p.enumerate_ball(radius, DEFAULT_BALL_CAP)?;
    let mut generators = Vec::new();
    for lambda in table.schreier_generators(p, sub) {
        let gamma = f.evaluate(&p.multiply(&lambda, &finv.evaluate(&p.identity())?))?;
        for c in &ball {
            let image = f.evaluate(&p.multiply(&lambda, &finv.evaluate(c)?))?;
            if image != p.multiply(&gamma, c) {
                return Err(HolonomyError::WitnessMismatch {
                    generator: p.format_word(&lambda),
                    chamber: p.format_word(c),
                });
            }
        }
        generators.push(GeneratorWitness {
            generator: lambda,
            translation: gamma,
        });
    }
    let transversal = table
        .transversal
        .iter()
        .map(|t| Ok((t.clone(), f.evaluate(t)?)))
        .collect::<Result<Vec<_>, HolonomyError>>()?;
    Ok(CommensurationWitness {
        radius,
        index: table.index(),
        chambers_checked: ball.len(),
        generators,
        transversal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n)
    }

    fn edge(a: usize, c: usize) -> Building {
        let p = ProductPresentation::new(vec!["a".into(), "b".into()], &[(0, 1)], vec![z(a), z(c)]).unwrap();
        Building::new(p).unwrap()
    }

    fn whole(b: &Building) -> SubgroupData {
        SubgroupData::whole(b.presentation().gamma0_hom())
    }

    fn gamma0(b: &Building) -> SubgroupData {
        SubgroupData::kernel(b.presentation().gamma0_hom())
    }

    #[test]
    fn whole_group_has_full_holonomy() {
        let b = edge(2, 3);
        for r in holonomy_profile(&b, &whole(&b)).unwrap() {
            assert_eq!(r.order(), b.presentation().group(r.vertex).order());
        }
    }

    #[test]
    fn gamma0_has_no_holonomy() {
        let b = Building::new(ProductPresentation::cycle(6, z(2))).unwrap();
        let reps = holonomy_profile(&b, &gamma0(&b)).unwrap();
        assert!(!reps.is_empty());
        assert!(reps.iter().all(HolonomyReport::is_trivial));
    }

    #[test]
    fn wrong_residue_type_rejected() {
        let b = edge(2, 2);
        let sub = whole(&b);
        let good = b.residue(0b11, &NormalForm::default());
        let bad = b.residue(0b01, &NormalForm::default());
        assert!(holonomy_at(&b, &sub, 0, &good).is_ok());
        assert_eq!(holonomy_at(&b, &sub, 0, &bad), Err(HolonomyError::WrongResidueType(0)));
    }

    #[test]
    fn standard_letters() {
        let b = edge(2, 3);
        let a = Atlas::standard(&b);
        let p = b.presentation();
        let c0 = p.identity();
        let c1 = p.syllable(1, 1);
        assert_eq!(a.letter(&b, &c0, &c1).unwrap(), Letter::Step { vertex: 1, element: 2 });
        assert_eq!(a.letter(&b, &c0, &c0).unwrap(), Letter::Empty);
        assert_eq!(right_translation_seed(&z(2))[1], vec![1, 0]);
    }

    #[test]
    fn word_roundtrip() {
        let b = Building::new(ProductPresentation::cycle(5, z(3))).unwrap();
        let p = b.presentation();
        let a = Atlas::standard(&b);
        for c in p.enumerate_ball(3, DEFAULT_BALL_CAP).unwrap().iter().take(200) {
            let g = geodesic(p, &p.identity(), c);
            let w = word_of_gallery(&b, &a, &g).unwrap();
            assert_eq!(gallery_of_word(&b, &a, &p.identity(), &w).unwrap(), g);
        }
    }

    #[test]
    fn identity_germ_is_identity() {
        let b = edge(2, 3);
        let a = Atlas::standard(&b);
        let p = b.presentation();
        let f = LazyAutomorphism::extend_germ(&b, (p.identity(), p.identity()), &a, &a);
        for c in p.enumerate_ball(3, DEFAULT_BALL_CAP).unwrap() {
            assert_eq!(f.evaluate(&c).unwrap(), c);
        }
    }

    #[test]
    fn translation_germ_is_translation() {
        let b = Building::new(ProductPresentation::cycle(5, z(2))).unwrap();
        let a = Atlas::standard(&b);
        let p = b.presentation();
        let g = p.normalize(&[(0, 1), (2, 1)]).unwrap();
        let f = LazyAutomorphism::extend_germ(&b, (p.identity(), g.clone()), &a, &a);
        for c in p.enumerate_ball(2, DEFAULT_BALL_CAP).unwrap() {
            assert_eq!(f.evaluate(&c).unwrap(), p.multiply(&g, &c));
        }
        f.certify(2).unwrap();
    }

    #[test]
    fn twisted_atlas_certifies() {
        let b = edge(2, 3);
        let sub = gamma0(&b);
        let twist = BTreeMap::from([((1, 0), twisted_seed(&z(3), &[0, 2, 1]))]);
        let tw = Atlas::from_holonomy_free_seeded(&b, &sub, &twist).unwrap();
        let std = Atlas::standard(&b);
        assert!(!tw.equivalent_on(&std, &b, 0).unwrap());
        let p = b.presentation();
        let f = LazyAutomorphism::extend_germ(&b, (p.identity(), p.identity()), &std, &tw);
        let cert = f.certify(2).unwrap();
        assert!(cert.squares > 0 && cert.triangles > 0);
        // The twist swaps the two nontrivial b-neighbours of the base chamber.
        assert_eq!(f.evaluate(&p.syllable(1, 1)).unwrap(), p.syllable(1, 2));
    }

    #[test]
    fn nontrivial_holonomy_rejected() {
        let b = edge(2, 2);
        assert!(matches!(
            Atlas::from_holonomy_free(&b, &whole(&b)),
            Err(HolonomyError::NontrivialHolonomy { .. })
        ));
    }

    #[test]
    fn kill_with_gamma0() {
        let b = Building::new(ProductPresentation::cycle(6, z(2))).unwrap();
        let p = b.presentation();
        let rep = kill_holonomy(&b, &whole(&b), &[p.gamma0_hom()]).unwrap();
        assert!(rep.all_trivial());
        let none = kill_holonomy(&b, &whole(&b), &[]).unwrap();
        assert_eq!(none.subgroup, whole(&b));
        assert!(!none.all_trivial());
    }

    #[test]
    fn kill_one_factor_only() {
        let b = edge(2, 2);
        let p = b.presentation();
        let sign = GroupHom::from_graph_product(p, z(2), vec![vec![0, 1], vec![0, 0]]).unwrap();
        let rep = kill_holonomy(&b, &whole(&b), &[sign]).unwrap();
        for r in &rep.reports {
            assert_eq!(r.is_trivial(), r.vertex == 0);
        }
    }

    #[test]
    fn witness_finite_building() {
        let b = edge(2, 2);
        let w = commensuration_witness(&b, &gamma0(&b), 2).unwrap();
        assert_eq!(w.index, 4);
        assert!(w.generators.is_empty());
        assert_eq!(w.transversal.len(), 4);
    }

    #[test]
    fn witness_tree() {
        let p = ProductPresentation::new(vec!["a".into(), "b".into()], &[], vec![z(2), z(2)]).unwrap();
        let b = Building::new(p.clone()).unwrap();
        let hom = GroupHom::from_graph_product(&p, z(2), vec![vec![0, 1], vec![0, 1]]).unwrap();
        let sub = SubgroupData::kernel(hom);
        let w = commensuration_witness(&b, &sub, 3).unwrap();
        assert_eq!(w.index, 2);
        assert!(!w.generators.is_empty());
    }
}
