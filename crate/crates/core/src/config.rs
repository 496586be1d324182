//! JSON input formats. Every loader reports the JSON path of the field that
//! failed, either from deserialization or from semantic validation.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{CoverData, Cocycle2};
use crate::complex::SimplicialComplex;
use crate::davis::{CoxeterData, CoxWord};
use crate::graph_product::ProductPresentation;
use crate::groups::{FiniteAbelian, FiniteGroup, GroupHom, SubgroupData};
use crate::local_reflections::{LRSystem, Region};
use crate::polygonal::{samples, DeckAction, Polygon, PolygonalComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{file}: field `{field}`: {message}")]
pub struct ConfigError {
    pub file: String,
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl ToString) -> Self {
        ConfigError {
            file: "<input>".into(),
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn in_file(mut self, file: impl Into<String>) -> Self {
        self.file = file.into();
        self
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

/// Parses JSON text, naming the failing field on error.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::new(if path.is_empty() { ".".into() } else { path }, e.into_inner())
    })
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new(".", e).in_file(&name))?;
    parse_json(&text).map_err(|e| e.in_file(name))
}

/// A vertex referenced by position or by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Key {
    Index(usize),
    Name(String),
}

impl Key {
    fn resolve(&self, names: &[String], field: &str) -> Result<usize> {
        match self {
            Key::Index(i) if *i < names.len() => Ok(*i),
            Key::Index(i) => Err(ConfigError::new(field, format!("index {i} out of range"))),
            Key::Name(s) => names
                .iter()
                .position(|n| n == s)
                .or_else(|| s.parse::<usize>().ok().filter(|&i| i < names.len()))
                .ok_or_else(|| ConfigError::new(field, format!("unknown vertex {s:?}"))),
        }
    }

    fn label(&self) -> String {
        match self {
            Key::Index(i) => i.to_string(),
            Key::Name(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupConfig {
    Cyclic {
        n: usize,
    },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Symmetric {
        n: usize,
    },
    /// Generated by permutations of `0..degree`; elements are numbered in
    /// discovery order with the identity first.
    Permutations {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    /// Direct product, elements in mixed radix with the first factor least
    /// significant.
    Product {
        factors: Vec<GroupConfig>,
    },
}

impl GroupConfig {
    pub fn build(&self, field: &str) -> Result<FiniteGroup> {
        match self {
            GroupConfig::Cyclic { n } if *n == 0 => Err(ConfigError::new(format!("{field}.n"), "order must be positive")),
            GroupConfig::Cyclic { n } => Ok(FiniteGroup::cyclic(*n)),
            GroupConfig::Table { table, labels } => {
                let g = FiniteGroup::validate(table.clone()).map_err(|e| ConfigError::new(format!("{field}.table"), e))?;
                match labels {
                    Some(l) if l.len() != g.order() => Err(ConfigError::new(format!("{field}.labels"), "one label per element required")),
                    Some(l) => Ok(g.with_labels(l.clone())),
                    None => Ok(g),
                }
            }
            GroupConfig::Symmetric { n } if *n == 0 || *n > 6 => Err(ConfigError::new(format!("{field}.n"), "degree must be in 1..=6")),
            GroupConfig::Symmetric { n } => Ok(FiniteGroup::symmetric(*n).0),
            GroupConfig::Permutations { degree, generators } => {
                for (k, p) in generators.iter().enumerate() {
                    let set: BTreeSet<usize> = p.iter().copied().collect();
                    if p.len() != *degree || set.len() != *degree || set.iter().any(|&x| x >= *degree) {
                        return Err(ConfigError::new(format!("{field}.generators[{k}]"), "not a permutation of the given degree"));
                    }
                }
                Ok(FiniteGroup::generated_by_permutations(generators, *degree).0)
            }
            GroupConfig::Product { factors } => {
                let built = factors
                    .iter()
                    .enumerate()
                    .map(|(k, f)| f.build(&format!("{field}.factors[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                let size: usize = built.iter().map(FiniteGroup::order).product();
                if size > 4096 {
                    return Err(ConfigError::new(format!("{field}.factors"), format!("product of order {size} exceeds 4096")));
                }
                Ok(FiniteGroup::direct_product(&built.iter().collect::<Vec<_>>()))
            }
        }
    }
}

/// `{"vertices":[...], "edges":[[i,j],...], "groups":{"i": <group>}}`. The
/// key `"*"` in `groups` supplies a default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationConfig {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[Key; 2]>,
    pub groups: BTreeMap<String, GroupConfig>,
}

impl PresentationConfig {
    pub fn build(&self) -> Result<ProductPresentation> {
        let edges = resolve_edges(&self.edges, &self.vertices, "edges")?;
        let mut groups = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let (key, cfg) = [v.clone(), i.to_string(), "*".to_string()]
                .into_iter()
                .find_map(|k| self.groups.get(&k).map(|c| (k, c)))
                .ok_or_else(|| ConfigError::new(format!("groups.{v}"), "missing vertex group"))?;
            groups.push(cfg.build(&format!("groups.{key}"))?);
        }
        for k in self.groups.keys() {
            let known = k == "*" || self.vertices.contains(k) || k.parse::<usize>().is_ok_and(|i| i < self.vertices.len());
            if !known {
                return Err(ConfigError::new(format!("groups.{k}"), "unknown vertex"));
            }
        }
        ProductPresentation::new(self.vertices.clone(), &edges, groups).map_err(|e| ConfigError::new("edges", e))
    }
}

fn resolve_edges(edges: &[[Key; 2]], names: &[String], field: &str) -> Result<Vec<(usize, usize)>> {
    edges
        .iter()
        .enumerate()
        .map(|(k, [a, b])| {
            let f = format!("{field}[{k}]");
            Ok((a.resolve(names, &f)?, b.resolve(names, &f)?))
        })
        .collect()
}

/// `{"target": <group>, "images": {"<generator>": <index>}}`. For graph
/// products generators are `"v"` or `"v:g"`; for Coxeter groups they are
/// generator names and every generator needs an image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomConfig {
    pub target: GroupConfig,
    pub images: BTreeMap<String, usize>,
}

impl HomConfig {
    pub fn build_product(&self, p: &ProductPresentation) -> Result<GroupHom> {
        let target = self.target.build("target")?;
        GroupHom::from_generator_map(p, target, &self.images).map_err(|e| ConfigError::new("images", e))
    }

    pub fn build_coxeter(&self, d: &CoxeterData) -> Result<GroupHom> {
        let target = self.target.build("target")?;
        let names = d.names();
        let mut images = vec![None; names.len()];
        for (k, &v) in &self.images {
            let i = Key::Name(k.clone()).resolve(names, &format!("images.{k}"))?;
            if v >= target.order() {
                return Err(ConfigError::new(format!("images.{k}"), format!("element {v} out of range")));
            }
            images[i] = Some(v);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| ConfigError::new(format!("images.{}", names[i]), "missing image")))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::from_coxeter(d, target, images).map_err(|e| ConfigError::new("images", e))
    }
}

/// A finite-index subgroup given as the preimage of `image` (default: the
/// identity, i.e. the kernel). `{"gamma0": true}` selects the kernel of the
/// map onto the product of the vertex groups.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupConfig {
    #[serde(default)]
    pub gamma0: bool,
    #[serde(default)]
    pub target: Option<GroupConfig>,
    #[serde(default)]
    pub images: Option<BTreeMap<String, usize>>,
    #[serde(default)]
    pub image: Option<Vec<usize>>,
}

impl SubgroupConfig {
    pub fn build(&self, p: &ProductPresentation) -> Result<SubgroupData> {
        let hom = if self.gamma0 {
            if self.target.is_some() || self.images.is_some() {
                return Err(ConfigError::new("gamma0", "cannot be combined with target/images"));
            }
            p.gamma0_hom()
        } else {
            let target = self.target.clone().ok_or_else(|| ConfigError::new("target", "missing"))?;
            let images = self.images.clone().ok_or_else(|| ConfigError::new("images", "missing"))?;
            HomConfig { target, images }.build_product(p)?
        };
        match &self.image {
            None => Ok(SubgroupData::kernel(hom)),
            Some(set) => {
                let set: BTreeSet<usize> = set.iter().copied().collect();
                SubgroupData::new(hom, set).map_err(|e| ConfigError::new("image", e))
            }
        }
    }
}

/// `{"vertices":[...], "facets":[[...],...]}`; downward closure is taken.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialConfig {
    pub vertices: Vec<Key>,
    #[serde(default)]
    pub facets: Vec<Vec<Key>>,
}

impl SimplicialConfig {
    pub fn build(&self) -> Result<SimplicialComplex> {
        let names: Vec<String> = self.vertices.iter().map(Key::label).collect();
        let facets = self
            .facets
            .iter()
            .enumerate()
            .map(|(k, f)| {
                f.iter()
                    .map(|v| v.resolve(&names, &format!("facets[{k}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialComplex::from_facets(0..names.len(), facets))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphConfig {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[Key; 2]>,
}

/// `{"graph":{...}, "weights":{"[i,j]": m}}`; `default_weight` covers
/// edges without an explicit weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterConfig {
    pub graph: GraphConfig,
    #[serde(default)]
    pub weights: BTreeMap<String, u32>,
    #[serde(default)]
    pub default_weight: Option<u32>,
}

impl CoxeterConfig {
    pub fn build(&self) -> Result<CoxeterData> {
        let names = &self.graph.vertices;
        let edges = resolve_edges(&self.graph.edges, names, "graph.edges")?;
        let mut given = BTreeMap::new();
        for (key, &m) in &self.weights {
            let field = format!("weights.{key}");
            let pair: [Key; 2] = parse_json(key).map_err(|_| ConfigError::new(&field, "key must look like [i,j]"))?;
            let (a, b) = (pair[0].resolve(names, &field)?, pair[1].resolve(names, &field)?);
            given.insert((a.min(b), a.max(b)), (m, field));
        }
        let mut weights = Vec::with_capacity(edges.len());
        for (k, &(a, b)) in edges.iter().enumerate() {
            let m = match given.remove(&(a.min(b), a.max(b))) {
                Some((m, _)) => m,
                None => self
                    .default_weight
                    .ok_or_else(|| ConfigError::new(format!("graph.edges[{k}]"), "edge has no weight"))?,
            };
            weights.push((a, b, m));
        }
        if let Some((_, field)) = given.into_values().next() {
            return Err(ConfigError::new(field, "weight on a non-edge"));
        }
        CoxeterData::new(names.clone(), &weights).map_err(|e| ConfigError::new("weights", e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeConfig {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub cycle: Vec<(String, i8)>,
}

/// `{"vertices":[...], "edges":[{"id","from","to"}], "polygons":[{"cycle":[["e3",1],...]}]}`,
/// or `{"builtin": "square_torus" | "torus_grid" | "polygon", "size": [...]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub size: Vec<usize>,
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeConfig>,
    #[serde(default)]
    pub polygons: Vec<PolygonConfig>,
}

impl ComplexConfig {
    pub fn build(&self) -> Result<PolygonalComplex> {
        if let Some(b) = &self.builtin {
            let size = |k: usize| {
                self.size
                    .get(k)
                    .copied()
                    .filter(|&s| s > 0)
                    .ok_or_else(|| ConfigError::new("size", format!("{b} needs {} positive sizes", k + 1)))
            };
            return match b.as_str() {
                "square_torus" => Ok(samples::square_torus()),
                "torus_grid" => Ok(samples::torus_grid(size(0)?, size(1)?)),
                "polygon" => Ok(samples::single_polygon(size(0)?)),
                _ => Err(ConfigError::new("builtin", format!("unknown builtin {b:?}"))),
            };
        }
        let mut x = PolygonalComplex::with_vertex_names(self.vertices.clone());
        for (k, e) in self.edges.iter().enumerate() {
            let f = format!("edges[{k}]");
            let from = x
                .vertex_index(&e.from)
                .ok_or_else(|| ConfigError::new(format!("{f}.from"), format!("unknown vertex {:?}", e.from)))?;
            let to = x
                .vertex_index(&e.to)
                .ok_or_else(|| ConfigError::new(format!("{f}.to"), format!("unknown vertex {:?}", e.to)))?;
            if x.edge_index(&e.id).is_some() {
                return Err(ConfigError::new(format!("{f}.id"), "duplicate edge id"));
            }
            x.add_named_edge(from, to, e.id.clone()).map_err(|err| ConfigError::new(&f, err))?;
        }
        for (k, p) in self.polygons.iter().enumerate() {
            let f = format!("polygons[{k}]");
            let cycle = p
                .cycle
                .iter()
                .enumerate()
                .map(|(q, (id, s))| {
                    let e = x
                        .edge_index(id)
                        .ok_or_else(|| ConfigError::new(format!("{f}.cycle[{q}]"), format!("unknown edge {id:?}")))?;
                    if *s != 1 && *s != -1 {
                        return Err(ConfigError::new(format!("{f}.cycle[{q}]"), "sign must be 1 or -1"));
                    }
                    Ok((e, *s))
                })
                .collect::<Result<Vec<_>>>()?;
            let name = p.id.clone().unwrap_or_else(|| format!("poly{k}"));
            x.add_polygon(Polygon::named(cycle, name)).map_err(|err| ConfigError::new(&f, err))?;
        }
        Ok(x)
    }

    /// The explicit form of a complex, with its cell names.
    pub fn from_complex(x: &PolygonalComplex) -> Self {
        ComplexConfig {
            builtin: None,
            size: Vec::new(),
            vertices: (0..x.num_vertices()).map(|v| x.vertex_name(v).to_string()).collect(),
            edges: x
                .edges()
                .iter()
                .enumerate()
                .map(|(e, ed)| EdgeConfig {
                    id: x.edge_name(e).to_string(),
                    from: x.vertex_name(ed.from).to_string(),
                    to: x.vertex_name(ed.to).to_string(),
                })
                .collect(),
            polygons: (0..x.num_polygons())
                .map(|p| PolygonConfig {
                    id: Some(x.polygon_name(p).to_string()),
                    cycle: x.polygon(p).cycle.iter().map(|&(e, s)| (x.edge_name(e).to_string(), s)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientsConfig {
    pub torsion: Vec<u64>,
}

/// `{"coefficients":{"torsion":[2]}, "values":{"poly3":[1],...}}`; absent
/// polygons carry zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleConfig {
    pub coefficients: CoefficientsConfig,
    #[serde(default)]
    pub values: BTreeMap<String, Vec<i64>>,
}

impl CocycleConfig {
    pub fn build(&self, x: &PolygonalComplex) -> Result<Cocycle2> {
        if self.coefficients.torsion.iter().any(|&n| n < 2) {
            return Err(ConfigError::new("coefficients.torsion", "orders must be at least 2"));
        }
        let coeffs = FiniteAbelian::new(self.coefficients.torsion.clone());
        let mut c = Cocycle2::zero(&coeffs, x.num_polygons());
        for (name, v) in &self.values {
            let f = format!("values.{name}");
            let p = x
                .polygon_index(name)
                .ok_or_else(|| ConfigError::new(&f, "unknown polygon"))?;
            if v.len() != coeffs.torsion.len() {
                return Err(ConfigError::new(&f, "one entry per cyclic factor required"));
            }
            c.values[p] = coeffs.reduce(v);
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionConfig {
    /// Image of each vertex, in vertex order.
    pub vertices: Vec<String>,
    /// Image of each edge with orientation sign, in edge order.
    pub edges: Vec<(String, i8)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverQuotientConfig {
    pub target: GroupConfig,
    /// Image of each deck element, in element order.
    pub images: Vec<usize>,
}

/// A free action on a finite complex plus a map of the deck group onto
/// `Q`. `{"torus": [p, q], "quotient": ...}` uses the `p × q` square grid
/// with its translation group `Z/p × Z/q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverConfig {
    #[serde(default)]
    pub torus: Option<[usize; 2]>,
    #[serde(default)]
    pub top: Option<ComplexConfig>,
    #[serde(default)]
    pub group: Option<GroupConfig>,
    #[serde(default)]
    pub action: Vec<ActionConfig>,
    pub quotient: CoverQuotientConfig,
}

impl CoverConfig {
    pub fn build(&self) -> Result<CoverData> {
        let (top, action) = match self.torus {
            Some([p, q]) if p > 0 && q > 0 => (samples::torus_grid(p, q), samples::torus_translations(p, q)),
            Some(_) => return Err(ConfigError::new("torus", "sizes must be positive")),
            None => {
                let top = self.top.as_ref().ok_or_else(|| ConfigError::new("top", "missing"))?.build()?;
                let group = self.group.as_ref().ok_or_else(|| ConfigError::new("group", "missing"))?.build("group")?;
                let mut vmap = Vec::new();
                let mut emap = Vec::new();
                for (g, a) in self.action.iter().enumerate() {
                    let f = format!("action[{g}]");
                    vmap.push(
                        a.vertices
                            .iter()
                            .map(|v| top.vertex_index(v).ok_or_else(|| ConfigError::new(format!("{f}.vertices"), format!("unknown vertex {v:?}"))))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    emap.push(
                        a.edges
                            .iter()
                            .map(|(e, s)| {
                                top.edge_index(e)
                                    .map(|i| (i, *s))
                                    .ok_or_else(|| ConfigError::new(format!("{f}.edges"), format!("unknown edge {e:?}")))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                let action = DeckAction::new(&top, group, vmap, emap).map_err(|e| ConfigError::new("action", e))?;
                (top, action)
            }
        };
        let quotient_group = self.quotient.target.build("quotient.target")?;
        Ok(CoverData {
            top,
            action,
            quotient_group,
            hom: self.quotient.images.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartConfig {
    /// Block as a word in the generator names.
    pub word: Vec<String>,
    #[serde(rename = "type")]
    pub ty: String,
    /// Image of each generator, in generator order.
    pub perm: Vec<String>,
}

/// Local reflections listed per edge orbit: the chart map from the block of
/// `word` across the facet of `type`. Unlisted edges carry the identity;
/// `random` draws every edge from its facet group instead.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemConfig {
    #[serde(default)]
    pub random: Option<u64>,
    #[serde(default)]
    pub charts: Vec<ChartConfig>,
}

impl SystemConfig {
    pub fn build(&self, region: &Region) -> Result<LRSystem> {
        use rand::SeedableRng;
        let d = region.data();
        let names = d.names();
        let mut sys = match self.random {
            Some(seed) => LRSystem::random(region, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed)),
            None => LRSystem::sigma_w(region),
        };
        let mut seen = BTreeSet::new();
        for (k, c) in self.charts.iter().enumerate() {
            let f = format!("charts[{k}]");
            let letters = c
                .word
                .iter()
                .map(|s| Key::Name(s.clone()).resolve(names, &format!("{f}.word")))
                .collect::<Result<Vec<_>>>()?;
            let w: CoxWord = d.cox_normalize(&letters).map_err(|e| ConfigError::new(format!("{f}.word"), e))?;
            let block = region
                .blocks
                .block_of_word(&w)
                .ok_or_else(|| ConfigError::new(format!("{f}.word"), "block outside the region"))?;
            let ty = Key::Name(c.ty.clone()).resolve(names, &format!("{f}.type"))?;
            let perm = c
                .perm
                .iter()
                .map(|s| Key::Name(s.clone()).resolve(names, &format!("{f}.perm")))
                .collect::<Result<Vec<_>>>()?;
            let a = region
                .aut
                .element(&perm)
                .ok_or_else(|| ConfigError::new(format!("{f}.perm"), "not a weight-preserving graph automorphism"))?;
            if !region.in_facet_group(ty, a) {
                return Err(ConfigError::new(format!("{f}.perm"), "does not fix the facet"));
            }
            let (e, side) = region
                .semi_edge(block, ty)
                .ok_or_else(|| ConfigError::new(format!("{f}.type"), "facet on the region boundary"))?;
            if !seen.insert(e) {
                return Err(ConfigError::new(&f, "edge listed twice"));
            }
            sys.alpha[e] = if side == 0 { a } else { region.aut.inv(a) };
        }
        Ok(sys)
    }
}

/// One quotient hom or `{"quotients": [...]}`.
pub fn parse_quotients(text: &str) -> Result<Vec<HomConfig>> {
    #[derive(Deserialize)]
    struct Many {
        quotients: Vec<HomConfig>,
    }
    let v: serde_json::Value = parse_json(text)?;
    if v.get("quotients").is_some() {
        Ok(parse_json::<Many>(text)?.quotients)
    } else {
        Ok(vec![parse_json(text)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_names_field() {
        let e = parse_json::<PresentationConfig>(r#"{"vertices":["a"],"groups":{"a":{"kind":"cyclic","n":"x"}}}"#).unwrap_err();
        assert!(e.field.starts_with("groups.a"), "{}", e.field);
        let cfg: PresentationConfig = parse_json(r#"{"vertices":["a","b"],"edges":[["a","c"]],"groups":{"*":{"kind":"cyclic","n":2}}}"#).unwrap();
        assert_eq!(cfg.build().unwrap_err().field, "edges[0]");
    }

    #[test]
    fn presentation_and_gamma0() {
        let cfg: PresentationConfig = parse_json(
            r#"{"vertices":["a","b"],"edges":[[0,1]],"groups":{"a":{"kind":"cyclic","n":2},"b":{"kind":"cyclic","n":3}}}"#,
        )
        .unwrap();
        let p = cfg.build().unwrap();
        assert!(p.adjacent(0, 1));
        let s = SubgroupConfig {
            gamma0: true,
            ..Default::default()
        };
        assert_eq!(s.build(&p).unwrap().index(), 6);
    }

    #[test]
    fn coxeter_weights() {
        let cfg: CoxeterConfig = parse_json(
            r#"{"graph":{"vertices":["a","b","c","d"],"edges":[["a","b"],["b","c"],["c","d"],["d","a"]]},"weights":{"[\"a\",\"b\"]":4},"default_weight":2}"#,
        )
        .unwrap();
        let d = cfg.build().unwrap();
        assert_eq!(d.m(0, 1), Some(4));
        assert_eq!(d.m(2, 3), Some(2));
        assert_eq!(d.m(0, 2), None);
        let bad: CoxeterConfig = parse_json(r#"{"graph":{"vertices":["a","b"],"edges":[]},"weights":{"[0,1]":3}}"#).unwrap();
        assert_eq!(bad.build().unwrap_err().field, "weights.[0,1]");
    }

    #[test]
    fn complex_roundtrip_and_cocycle() {
        let cfg: ComplexConfig = parse_json(
            r#"{"vertices":["v"],"edges":[{"id":"a","from":"v","to":"v"},{"id":"b","from":"v","to":"v"}],
                "polygons":[{"id":"sq","cycle":[["a",1],["b",1],["a",-1],["b",-1]]}]}"#,
        )
        .unwrap();
        let x = cfg.build().unwrap();
        assert_eq!(ComplexConfig::from_complex(&x).build().unwrap(), x);
        let c: CocycleConfig = parse_json(r#"{"coefficients":{"torsion":[2]},"values":{"sq":[3]}}"#).unwrap();
        assert_eq!(c.build(&x).unwrap().values, vec![vec![1]]);
        let bad: CocycleConfig = parse_json(r#"{"coefficients":{"torsion":[2]},"values":{"zz":[1]}}"#).unwrap();
        assert_eq!(bad.build(&x).unwrap_err().field, "values.zz");
    }

    #[test]
    fn torus_cover() {
        let c: CoverConfig = parse_json(r#"{"torus":[2,2],"quotient":{"target":{"kind":"cyclic","n":2},"images":[0,1,0,1]}}"#).unwrap();
        assert_eq!(c.build().unwrap().build().unwrap().degree(), 2);
    }

    #[test]
    fn system_charts() {
        let d = CoxeterData::cycle(4, 2);
        let region = Region::ball(&d, 2, crate::davis::DEFAULT_BLOCK_CAP).unwrap();
        let cfg: SystemConfig = parse_json(r#"{"charts":[{"word":["0"],"type":"0","perm":["0","1","2","3"]}]}"#).unwrap();
        assert_eq!(cfg.build(&region).unwrap(), LRSystem::sigma_w(&region));
        let bad: SystemConfig = parse_json(r#"{"charts":[{"word":[],"type":"0","perm":["2","1","0","3"]}]}"#).unwrap();
        assert_eq!(bad.build(&region).unwrap_err().field, "charts[0].perm");
    }
}
