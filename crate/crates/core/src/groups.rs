//! Finite groups given by multiplication tables, finite abelian coefficient
//! groups, homomorphisms into finite quotients and subgroup bookkeeping.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::davis::CoxeterData;
use crate::graph_product::{NormalForm, ProductPresentation};

/// Largest order for which associativity is checked on every triple.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;
const SAMPLED_TRIPLES: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is empty or not square")]
    NotSquare,
    #[error("table is not a Latin square (row or column {0} repeats an entry or leaves range)")]
    NotLatinSquare(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("defining relation violated: {0}")]
    RelationViolated(String),
    #[error("generator images incomplete: {0}")]
    MissingImage(String),
    #[error("element index {0} out of range")]
    OutOfRange(usize),
}

/// A finite group stored as an explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a multiplication table and derives identity and inverses.
    pub fn validate(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(GroupError::NotSquare);
        }
        for (r, row) in table.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return Err(GroupError::NotLatinSquare(r));
                }
                seen[x] = true;
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                let x = row[c];
                if seen[x] {
                    return Err(GroupError::NotLatinSquare(c));
                }
                seen[x] = true;
            }
        }
        let assoc = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(GroupError::NonAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(GroupError::NonAssociative(a, b, c));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        // Latin square with identity: each row contains the identity exactly once.
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).expect("latin row"))
            .collect::<Vec<_>>();
        for a in 0..n {
            if table[inverse[a]][a] != identity {
                return Err(GroupError::NonAssociative(a, inverse[a], a));
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.order() {
            self.labels = Some(labels);
        }
        self
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with element k meaning the residue k.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup {
            table,
            identity: 0,
            inverse: (0..n).map(|a| (n - a) % n).collect(),
            labels: None,
        }
    }

    /// Direct product with mixed-radix indexing, first factor least significant.
    pub fn direct_product(factors: &[&FiniteGroup]) -> Self {
        let radix = MixedRadix::new(factors.iter().map(|g| g.order()).collect());
        let n = radix.size();
        let mut table = vec![vec![0; n]; n];
        for (a, row) in table.iter_mut().enumerate() {
            let ca = radix.decode(a);
            for (b, slot) in row.iter_mut().enumerate() {
                let cb = radix.decode(b);
                let prod: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(k, g)| g.mul(ca[k], cb[k]))
                    .collect();
                *slot = radix.encode(&prod);
            }
        }
        let identity = radix.encode(&factors.iter().map(|g| g.identity()).collect::<Vec<_>>());
        let inverse = (0..n)
            .map(|a| {
                let ca = radix.decode(a);
                radix.encode(
                    &factors
                        .iter()
                        .enumerate()
                        .map(|(k, g)| g.inv(ca[k]))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        FiniteGroup {
            table,
            identity,
            inverse,
            labels: None,
        }
    }

    /// The subgroup of `∏ factors` generated by the given coordinate
    /// tuples, with its elements as tuples in discovery order (identity first).
    pub fn generated_in_product(factors: &[&FiniteGroup], gens: &[Vec<usize>]) -> (Self, Vec<Vec<usize>>) {
        let id: Vec<usize> = factors.iter().map(|g| g.identity()).collect();
        let mul = |a: &[usize], b: &[usize]| -> Vec<usize> {
            factors.iter().enumerate().map(|(k, g)| g.mul(a[k], b[k])).collect()
        };
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id.clone(), 0)]);
        let mut elems = vec![id];
        let mut next = 0;
        while next < elems.len() {
            for g in gens {
                let y = mul(&elems[next], g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            next += 1;
        }
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect();
        let inverse = elems
            .iter()
            .map(|a| {
                let inv: Vec<usize> = factors.iter().enumerate().map(|(k, g)| g.inv(a[k])).collect();
                index[&inv]
            })
            .collect();
        let g = FiniteGroup {
            table,
            identity: 0,
            inverse,
            labels: None,
        };
        (g, elems)
    }

    /// Symmetric group on `n` points, elements in lexicographic order of
    /// their image lists (so the identity is element 0).
    pub fn symmetric(n: usize) -> (Self, Vec<Vec<usize>>) {
        let mut perms = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            perms.push(cur.clone());
            if !next_permutation(&mut cur) {
                break;
            }
        }
        let g = Self::from_permutation_list(&perms);
        (g, perms)
    }

    /// Closes a set of permutations of `0..degree` under composition and
    /// returns the group with its elements sorted lexicographically.
    /// Composition convention: `(p * q)(x) = p(q(x))`.
    pub fn generated_by_permutations(gens: &[Vec<usize>], degree: usize) -> (Self, Vec<Vec<usize>>) {
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = perm::compose(g, &p);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let perms: Vec<Vec<usize>> = seen.into_iter().collect();
        (Self::from_permutation_list(&perms), perms)
    }

    fn from_permutation_list(perms: &[Vec<usize>]) -> Self {
        let index: BTreeMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| perms.iter().map(|q| index[&perm::compose(p, q)]).collect())
            .collect();
        let inverse = perms.iter().map(|p| index[&perm::inverse(p)]).collect();
        let identity = perms
            .iter()
            .position(|p| perm::is_identity(p))
            .expect("identity present");
        FiniteGroup {
            table,
            identity,
            inverse,
            labels: None,
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn product<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Least subset containing `gens` and closed under products and inverses.
    pub fn subgroup_closure(&self, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    pub fn is_subgroup(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.identity)
            && set.iter().all(|&a| a < self.order())
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn double_coset(&self, left: &BTreeSet<usize>, x: usize, right: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &h in left {
            let hx = self.mul(h, x);
            for &k in right {
                out.insert(self.mul(hx, k));
            }
        }
        out
    }

    /// One representative (the least index) per double coset `left x right`.
    pub fn double_coset_reps(&self, left: &BTreeSet<usize>, right: &BTreeSet<usize>) -> Result<Vec<usize>, GroupError> {
        if !self.is_subgroup(left) || !self.is_subgroup(right) {
            return Err(GroupError::NotASubgroup);
        }
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() {
            if covered[x] {
                continue;
            }
            reps.push(x);
            for y in self.double_coset(left, x, right) {
                covered[y] = true;
            }
        }
        Ok(reps)
    }

    /// Least element of the double coset of `x`.
    pub fn double_coset_rep_of(&self, left: &BTreeSet<usize>, x: usize, right: &BTreeSet<usize>) -> usize {
        *self
            .double_coset(left, x, right)
            .iter()
            .next()
            .expect("double cosets are nonempty")
    }

    /// Least element of the right coset `set * x`.
    pub fn right_coset_rep(&self, set: &BTreeSet<usize>, x: usize) -> usize {
        set.iter().map(|&h| self.mul(h, x)).min().expect("nonempty")
    }

    pub fn conjugate_set(&self, set: &BTreeSet<usize>, by: usize) -> BTreeSet<usize> {
        // by^{-1} * s * by
        set.iter()
            .map(|&s| self.mul(self.mul(self.inv(by), s), by))
            .collect()
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Permutations of `0..n` as image lists.
pub mod perm {
    /// `(p * q)(x) = p(q(x))`.
    pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
        q.iter().map(|&x| p[x]).collect()
    }

    pub fn inverse(p: &[usize]) -> Vec<usize> {
        let mut out = vec![0; p.len()];
        for (i, &x) in p.iter().enumerate() {
            out[x] = i;
        }
        out
    }

    pub fn identity(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    pub fn is_identity(p: &[usize]) -> bool {
        p.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Mixed-radix encoding of tuples, first coordinate least significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedRadix {
    radices: Vec<usize>,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        MixedRadix { radices }
    }

    pub fn size(&self) -> usize {
        self.radices.iter().product()
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        let mut idx = 0;
        for (k, &c) in coords.iter().enumerate().rev() {
            idx = idx * self.radices[k] + c;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.radices
            .iter()
            .map(|&r| {
                let c = idx % r;
                idx /= r;
                c
            })
            .collect()
    }
}

/// Direct sum of cyclic groups `Z/n_1 + ... + Z/n_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelian {
    pub torsion: Vec<u64>,
}

pub type AbElem = Vec<u64>;

impl FiniteAbelian {
    pub fn new(torsion: Vec<u64>) -> Self {
        assert!(torsion.iter().all(|&n| n >= 1), "torsion entries must be positive");
        FiniteAbelian { torsion }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n])
    }

    pub fn zero(&self) -> AbElem {
        vec![0; self.torsion.len()]
    }

    pub fn order(&self) -> u64 {
        self.torsion.iter().product()
    }

    pub fn reduce(&self, a: &[i64]) -> AbElem {
        a.iter()
            .zip(&self.torsion)
            .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
            .collect()
    }

    pub fn contains(&self, a: &[u64]) -> bool {
        a.len() == self.torsion.len() && a.iter().zip(&self.torsion).all(|(x, n)| x < n)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> AbElem {
        a.iter()
            .zip(b)
            .zip(&self.torsion)
            .map(|((x, y), n)| (x + y) % n)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> AbElem {
        a.iter().zip(&self.torsion).map(|(x, n)| (n - x) % n).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> AbElem {
        self.add(a, &self.neg(b))
    }

    /// `sign * a` for a sign in {+1, -1}.
    pub fn signed(&self, sign: i8, a: &[u64]) -> AbElem {
        if sign >= 0 {
            a.to_vec()
        } else {
            self.neg(a)
        }
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn elements(&self) -> Vec<AbElem> {
        let radix = MixedRadix::new(self.torsion.iter().map(|&n| n as usize).collect());
        (0..radix.size())
            .map(|i| radix.decode(i).into_iter().map(|x| x as u64).collect())
            .collect()
    }
}

/// Where a homomorphism starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HomSource {
    Finite(FiniteGroup),
    GraphProduct(ProductPresentation),
    Coxeter(CoxeterData),
}

/// A homomorphism into a finite group, checked against the source's
/// defining relations on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupHom {
    source: HomSource,
    target: FiniteGroup,
    /// Finite source: image of every element. Graph product: images of all
    /// vertex group elements, flattened per vertex. Coxeter: one per generator.
    images: Vec<Vec<usize>>,
}

impl GroupHom {
    pub fn from_finite(source: FiniteGroup, target: FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        if images.len() != source.order() {
            return Err(GroupError::MissingImage(format!(
                "expected {} images, got {}",
                source.order(),
                images.len()
            )));
        }
        let h = GroupHom {
            source: HomSource::Finite(source),
            target,
            images: vec![images],
        };
        h.check()?;
        Ok(h)
    }

    /// Images of every element of every vertex group.
    pub fn from_graph_product(p: &ProductPresentation, target: FiniteGroup, images: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        if images.len() != p.num_vertices() {
            return Err(GroupError::MissingImage("one image list per vertex required".into()));
        }
        for (v, imgs) in images.iter().enumerate() {
            if imgs.len() != p.group(v).order() {
                return Err(GroupError::MissingImage(format!("vertex {}", p.name(v))));
            }
        }
        let h = GroupHom {
            source: HomSource::GraphProduct(p.clone()),
            target,
            images,
        };
        h.check()?;
        Ok(h)
    }

    /// Builds a graph-product homomorphism from generator images keyed by
    /// `"v:g"` (vertex name, element index) or `"v"` (image of element 1,
    /// extended by powers; the vertex group must be cyclic on element 1).
    pub fn from_generator_map(p: &ProductPresentation, target: FiniteGroup, map: &BTreeMap<String, usize>) -> Result<Self, GroupError> {
        let mut images: Vec<Vec<Option<usize>>> =
            (0..p.num_vertices()).map(|v| vec![None; p.group(v).order()]).collect();
        for v in 0..p.num_vertices() {
            images[v][p.group(v).identity()] = Some(target.identity());
        }
        for (key, &img) in map {
            if img >= target.order() {
                return Err(GroupError::OutOfRange(img));
            }
            let (vname, elem) = match key.split_once(':') {
                Some((a, b)) => (a, Some(b)),
                None => (key.as_str(), None),
            };
            let v = p
                .vertex_index(vname)
                .ok_or_else(|| GroupError::MissingImage(format!("unknown vertex {vname}")))?;
            let g = p.group(v);
            match elem {
                Some(e) => {
                    let e: usize = e
                        .parse()
                        .map_err(|_| GroupError::MissingImage(format!("bad element in {key}")))?;
                    if e >= g.order() {
                        return Err(GroupError::OutOfRange(e));
                    }
                    images[v][e] = Some(img);
                }
                None => {
                    if g.order() == 1 {
                        continue;
                    }
                    let gen = 1 % g.order();
                    if g.element_order(gen) != g.order() {
                        return Err(GroupError::MissingImage(format!(
                            "vertex {vname}: shorthand needs element 1 to generate"
                        )));
                    }
                    let (mut x, mut y) = (g.identity(), target.identity());
                    for _ in 0..g.order() {
                        x = g.mul(x, gen);
                        y = target.mul(y, img);
                        images[v][x] = Some(y);
                    }
                }
            }
        }
        let mut full = Vec::with_capacity(images.len());
        for (v, imgs) in images.into_iter().enumerate() {
            let row: Option<Vec<usize>> = imgs.into_iter().collect();
            full.push(row.ok_or_else(|| GroupError::MissingImage(format!("vertex {}", p.name(v))))?);
        }
        Self::from_graph_product(p, target, full)
    }

    pub fn from_coxeter(d: &CoxeterData, target: FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        if images.len() != d.num_generators() {
            return Err(GroupError::MissingImage("one image per Coxeter generator required".into()));
        }
        let h = GroupHom {
            source: HomSource::Coxeter(d.clone()),
            target,
            images: vec![images],
        };
        h.check()?;
        Ok(h)
    }

    pub fn source(&self) -> &HomSource {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    /// Verifies every defining relation of the source.
    pub fn check(&self) -> Result<(), GroupError> {
        let t = &self.target;
        if self.images.iter().flatten().any(|&x| x >= t.order()) {
            return Err(GroupError::RelationViolated("image index out of range".into()));
        }
        match &self.source {
            HomSource::Finite(g) => {
                let im = &self.images[0];
                for a in 0..g.order() {
                    for b in 0..g.order() {
                        if im[g.mul(a, b)] != t.mul(im[a], im[b]) {
                            return Err(GroupError::RelationViolated(format!("phi({a}*{b})")));
                        }
                    }
                }
            }
            HomSource::GraphProduct(p) => {
                for v in 0..p.num_vertices() {
                    let g = p.group(v);
                    let im = &self.images[v];
                    for a in 0..g.order() {
                        for b in 0..g.order() {
                            if im[g.mul(a, b)] != t.mul(im[a], im[b]) {
                                return Err(GroupError::RelationViolated(format!(
                                    "{}: phi({a}*{b})",
                                    p.name(v)
                                )));
                            }
                        }
                    }
                }
                for u in 0..p.num_vertices() {
                    for v in (u + 1)..p.num_vertices() {
                        if !p.adjacent(u, v) {
                            continue;
                        }
                        for &x in &self.images[u] {
                            for &y in &self.images[v] {
                                if t.mul(x, y) != t.mul(y, x) {
                                    return Err(GroupError::RelationViolated(format!(
                                        "commutator [{}, {}]",
                                        p.name(u),
                                        p.name(v)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
            HomSource::Coxeter(d) => {
                let im = &self.images[0];
                for s in 0..d.num_generators() {
                    if t.mul(im[s], im[s]) != t.identity() {
                        return Err(GroupError::RelationViolated(format!("s{s}^2")));
                    }
                }
                for (a, b, m) in d.finite_edges() {
                    let st = t.mul(im[a], im[b]);
                    if t.pow(st, m as usize) != t.identity() {
                        return Err(GroupError::RelationViolated(format!("(s{a} s{b})^{m}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Image of an element of a finite source.
    pub fn eval_finite(&self, x: usize) -> usize {
        self.images[0][x]
    }

    /// Image of a single graph-product syllable.
    pub fn eval_syllable(&self, v: usize, g: usize) -> usize {
        self.images[v][g]
    }

    /// Image of a graph-product element.
    pub fn eval_word(&self, w: &NormalForm) -> usize {
        self.target
            .product(w.syllables().iter().map(|&(v, g)| self.images[v][g]))
    }

    /// Image of a Coxeter word.
    pub fn eval_letters(&self, letters: &[usize]) -> usize {
        self.target.product(letters.iter().map(|&s| self.images[0][s]))
    }

    /// Image in the target of the subgroup generated by the given vertex groups.
    pub fn image_of_vertices(&self, vertices: &[usize]) -> BTreeSet<usize> {
        let gens: BTreeSet<usize> = vertices
            .iter()
            .flat_map(|&v| self.images[v].iter().copied())
            .collect();
        self.target.subgroup_closure(&gens)
    }

    /// The full image of the source.
    pub fn image(&self) -> BTreeSet<usize> {
        let gens: BTreeSet<usize> = self.images.iter().flatten().copied().collect();
        self.target.subgroup_closure(&gens)
    }
}

/// A finite-index subgroup cut out as the preimage of a subgroup of a
/// finite quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupData {
    pub hom: GroupHom,
    pub image: BTreeSet<usize>,
}

impl SubgroupData {
    pub fn new(hom: GroupHom, image: BTreeSet<usize>) -> Result<Self, GroupError> {
        if !hom.target().is_subgroup(&image) {
            return Err(GroupError::NotASubgroup);
        }
        Ok(SubgroupData { hom, image })
    }

    /// The kernel of `hom`.
    pub fn kernel(hom: GroupHom) -> Self {
        let id = hom.target().identity();
        SubgroupData {
            hom,
            image: BTreeSet::from([id]),
        }
    }

    /// The whole source group.
    pub fn whole(hom: GroupHom) -> Self {
        let image = (0..hom.target().order()).collect();
        SubgroupData { hom, image }
    }

    pub fn contains_word(&self, w: &NormalForm) -> bool {
        self.image.contains(&self.hom.eval_word(w))
    }

    /// Index of the subgroup: `[phi(source) : image ∩ phi(source)]`.
    pub fn index(&self) -> usize {
        let q = self.hom.image();
        let s: usize = q.intersection(&self.image).count();
        q.len() / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn latin_squares_3() -> Vec<Vec<Vec<usize>>> {
        let rows: Vec<Vec<usize>> = FiniteGroup::symmetric(3).1;
        let mut out = Vec::new();
        for a in &rows {
            for b in &rows {
                for c in &rows {
                    let t = vec![a.clone(), b.clone(), c.clone()];
                    if (0..3).all(|col| {
                        let mut s: Vec<usize> = t.iter().map(|r| r[col]).collect();
                        s.sort();
                        s == vec![0, 1, 2]
                    }) {
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    fn brute_assoc(t: &[Vec<usize>]) -> bool {
        let n = t.len();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])))
    }

    #[test]
    fn cyclic_tables_validate() {
        let z2 = FiniteGroup::validate(FiniteGroup::cyclic(2).table().to_vec()).unwrap();
        assert_eq!(z2.order(), 2);
        let z3 = FiniteGroup::validate(FiniteGroup::cyclic(3).table().to_vec()).unwrap();
        assert_eq!(z3.inv(1), 2);
    }

    #[test]
    fn quasigroup_rejected() {
        let squares = latin_squares_3();
        assert_eq!(squares.len(), 12);
        let bad: Vec<_> = squares.iter().filter(|t| !brute_assoc(t)).collect();
        assert!(!bad.is_empty());
        for t in bad {
            assert!(matches!(FiniteGroup::validate(t.clone()), Err(GroupError::NonAssociative(..))));
        }
        for t in squares.iter().filter(|t| brute_assoc(t)) {
            assert_eq!(FiniteGroup::validate(t.clone()).unwrap().order(), 3);
        }
    }

    #[test]
    fn non_latin_rejected() {
        assert!(matches!(
            FiniteGroup::validate(vec![vec![0, 0], vec![1, 1]]),
            Err(GroupError::NotLatinSquare(_))
        ));
        assert!(matches!(
            FiniteGroup::validate(vec![vec![1, 0], vec![0, 1]]),
            Ok(_)
        ));
        assert!(matches!(
            FiniteGroup::validate(vec![vec![0, 1], vec![1]]),
            Err(GroupError::NotSquare)
        ));
    }

    #[test]
    fn closures() {
        let (s3, perms) = FiniteGroup::symmetric(3);
        let transpositions: Vec<usize> = (0..6)
            .filter(|&i| perms[i].iter().enumerate().filter(|(a, b)| a != *b).count() == 2)
            .collect();
        assert_eq!(transpositions.len(), 3);
        let one = s3.subgroup_closure(&BTreeSet::from([transpositions[0]]));
        assert_eq!(one.len(), 2);
        let two = s3.subgroup_closure(&BTreeSet::from([transpositions[0], transpositions[1]]));
        assert_eq!(two.len(), 6);
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(z6.subgroup_closure(&BTreeSet::from([2])), BTreeSet::from([0, 2, 4]));
    }

    #[test]
    fn double_cosets() {
        let z2 = FiniteGroup::cyclic(2);
        let triv = BTreeSet::from([0]);
        assert_eq!(z2.double_coset_reps(&triv, &triv).unwrap(), vec![0, 1]);
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(
            z6.double_coset_reps(&BTreeSet::from([0, 3]), &BTreeSet::from([0, 2, 4]))
                .unwrap(),
            vec![0]
        );
        let (s3, perms) = FiniteGroup::symmetric(3);
        let t = perms.iter().position(|p| p == &vec![1, 0, 2]).unwrap();
        let h = BTreeSet::from([0, t]);
        assert_eq!(s3.double_coset_reps(&h, &h).unwrap().len(), 2);
        assert_eq!(
            s3.double_coset_reps(&BTreeSet::from([t]), &h),
            Err(GroupError::NotASubgroup)
        );
    }

    #[test]
    fn direct_product_indexing() {
        let g = FiniteGroup::direct_product(&[&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)]);
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity(), 0);
        let r = MixedRadix::new(vec![2, 3]);
        assert_eq!(r.decode(g.mul(r.encode(&[1, 2]), r.encode(&[1, 2]))), vec![0, 1]);
        assert!(g.is_abelian());
    }

    #[test]
    fn abelian_arithmetic() {
        let a = FiniteAbelian::new(vec![2, 3]);
        assert_eq!(a.add(&[1, 2], &[1, 2]), vec![0, 1]);
        assert_eq!(a.neg(&[1, 1]), vec![1, 2]);
        assert_eq!(a.elements().len(), 6);
        assert!(a.is_zero(&a.sub(&[1, 2], &[1, 2])));
    }
}
