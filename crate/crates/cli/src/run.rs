use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;

use rab_core::building::Building;
use rab_core::cocycle::{extension_report, kill_in_cover};
use rab_core::config::{
    parse_quotients, CocycleConfig, ComplexConfig, ConfigError, CoverConfig, CoxeterConfig, HomConfig, PresentationConfig,
    SubgroupConfig, SystemConfig,
};
use rab_core::davis::{BlockComplex, CoxWord, CoxeterData, DEFAULT_BLOCK_CAP};
use rab_core::graph_product::{mask_iter, ProductPresentation, DEFAULT_BALL_CAP};
use rab_core::groups::SubgroupData;
use rab_core::holonomy::{commensuration_witness, holonomy_profile, kill_holonomy, HolonomyError};
use rab_core::local_reflections::{holonomy, kill_all_holonomy, system_witness, LRSystem, Region};
use rab_core::polygonal::{edge_of, sign_of, Condition, OEdge, PolygonalComplex, Wall};
use serde_json::{json, Value};

use crate::job::{JobArgs, JobKind};
use crate::report::{write_dot, Report, Verdict};

type Result<T> = std::result::Result<T, ConfigError>;

/// Attaches a field name to a computation error.
fn at<E: Display>(field: &'static str) -> impl Fn(E) -> ConfigError {
    move |e| ConfigError::new(field, e)
}

pub fn run(kind: JobKind, args: &JobArgs) -> Result<Report> {
    let (verdict, summary, details) = match kind {
        JobKind::Build => build(args)?,
        JobKind::Check => check(args)?,
        JobKind::Walls => walls(args)?,
        JobKind::Holonomy => holonomy_job(args)?,
        JobKind::Witness => witness(args)?,
        JobKind::KillCocycle => kill_cocycle(args)?,
        JobKind::KillHolonomy => kill_holonomy_job(args)?,
        JobKind::Davis => davis(args)?,
        JobKind::KillLr => kill_lr(args)?,
    };
    Ok(Report {
        job: kind,
        input: args.clone(),
        verdict,
        summary,
        details,
    })
}

type Outcome = Result<(Verdict, String, Value)>;

fn presentation(args: &JobArgs) -> Result<(PathBuf, ProductPresentation)> {
    let (path, cfg): (_, PresentationConfig) = args.load("config", &args.config)?;
    let p = cfg.build().map_err(|e| e.in_file(path.display().to_string()))?;
    Ok((path, p))
}

fn subgroup(args: &JobArgs, p: &ProductPresentation) -> Result<SubgroupData> {
    let (path, cfg): (_, SubgroupConfig) = args.load("subgroup", &args.subgroup)?;
    cfg.build(p).map_err(|e| e.in_file(path.display().to_string()))
}

fn complex(args: &JobArgs) -> Result<PolygonalComplex> {
    let (path, cfg): (_, ComplexConfig) = args.load("config", &args.config)?;
    cfg.build().map_err(|e| e.in_file(path.display().to_string()))
}

fn coxeter(args: &JobArgs) -> Result<CoxeterData> {
    let (path, cfg): (_, CoxeterConfig) = args.load("config", &args.config)?;
    cfg.build().map_err(|e| e.in_file(path.display().to_string()))
}

fn quotient_homs(args: &JobArgs) -> Result<Option<Vec<HomConfig>>> {
    if args.quotients.is_none() {
        return Ok(None);
    }
    let path = args.input("quotients", &args.quotients)?;
    let name = path.display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::new("quotients", e))?;
    parse_quotients(&text).map(Some).map_err(|e| e.in_file(name))
}

/// The Davis region: a ball, or the quotient by the single map in `--quotients`.
fn region_blocks(args: &JobArgs, d: &CoxeterData) -> Result<(BlockComplex, Option<usize>)> {
    let cap = args.cap.unwrap_or(DEFAULT_BLOCK_CAP);
    match quotient_homs(args)? {
        Some(homs) => {
            if homs.len() != 1 {
                return Err(ConfigError::new("quotients", "exactly one quotient map expected"));
            }
            let hom = homs[0].build_coxeter(d)?;
            Ok((BlockComplex::quotient(d, &hom).map_err(at("quotients"))?, None))
        }
        None => {
            let r = args.radius.unwrap_or(2);
            Ok((BlockComplex::ball(d, r, cap).map_err(at("cap"))?, Some(r)))
        }
    }
}

fn type_name(p: &ProductPresentation, mask: u64) -> String {
    let names: Vec<&str> = mask_iter(mask).map(|v| p.name(v)).collect();
    format!("{{{}}}", names.join(","))
}

fn cox_word(d: &CoxeterData, w: &CoxWord) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.letters().iter().map(|&s| d.name(s)).collect::<Vec<_>>().join(" ")
}

fn oedge_name(x: &PolygonalComplex, o: OEdge) -> String {
    format!("{}{}", x.edge_name(edge_of(o)), if sign_of(o) > 0 { "+" } else { "-" })
}

fn build(args: &JobArgs) -> Outcome {
    let (_, p) = presentation(args)?;
    let r = args.radius.unwrap_or(1);
    let b = Building::new(p.clone()).map_err(at("config"))?;
    let ball = b.ball(r, args.cap.unwrap_or(DEFAULT_BALL_CAP)).map_err(at("cap"))?;
    let mut interior = 0;
    let mut bad_links = Vec::new();
    for v in 0..ball.vertices.len() {
        if b.is_interior(&ball, v) {
            interior += 1;
            if !b.lower_link_check(&ball, v).map_err(at("config"))? {
                bad_links.push(v);
            }
        }
    }
    let types: BTreeMap<String, usize> = ball.type_counts().into_iter().map(|(t, n)| (type_name(&p, t), n)).collect();
    if let Some(path) = &args.dot {
        write_dot(path, &ball.chamber_dot(&p))?;
    }
    let summary = format!(
        "{}, {}, {}, {} interior",
        plural(ball.num_chambers(), "chamber"),
        plural(ball.vertices.len(), "vertex"),
        plural(ball.complex.num_cubes(), "cube"),
        interior
    );
    let details = json!({
        "radius": r,
        "chambers": ball.num_chambers(),
        "vertices": ball.vertices.len(),
        "cubes_by_dimension": ball.complex.count_by_dim(),
        "vertices_by_type": types,
        "interior_vertices": interior,
        "lower_link_failures": bad_links,
    });
    Ok((Verdict::from_bool(bad_links.is_empty()), summary, details))
}

fn check(args: &JobArgs) -> Outcome {
    let x = complex(args)?;
    let which: Condition = args
        .condition
        .as_deref()
        .ok_or_else(|| ConfigError::new("condition", "required"))?
        .parse()
        .map_err(at("condition"))?;
    if let Some(path) = &args.dot {
        let v = match &args.vertex {
            Some(name) => x.vertex_index(name).ok_or_else(|| ConfigError::new("vertex", format!("unknown vertex {name:?}")))?,
            None => 0,
        };
        if v >= x.num_vertices() {
            return Err(ConfigError::new("vertex", "complex has no vertices"));
        }
        write_dot(path, &x.link_dot(v))?;
    }
    let rep = x.check_condition(which, args.strict);
    let name = format!("{}{}", which.name(), if args.strict { "'" } else { "" });
    let summary = if rep.passed() {
        format!("{name} holds on {} link cycles", rep.cycles_checked)
    } else {
        format!("{name} fails")
    };
    Ok((Verdict::from_bool(rep.passed()), summary, serde_json::to_value(&rep).expect("serializable")))
}

fn wall_json(x: &PolygonalComplex, w: &Wall) -> Value {
    let g = x.geometric_wall(w);
    json!({
        "members": w.members.iter().map(|&o| oedge_name(x, o)).collect::<Vec<_>>(),
        "polygons": g.polygons().iter().map(|&p| x.polygon_name(p).to_string()).collect::<Vec<_>>(),
        "diameters": w.diameters.len(),
        "acyclic": g.acyclic,
        "max_diameters_per_polygon": g.max_diameters_per_polygon,
        "opposite_free": g.opposite_free,
        "tree": g.is_tree_like(),
    })
}

fn walls(args: &JobArgs) -> Outcome {
    let x = complex(args)?;
    let ws = if args.even { x.compute_ewalls() } else { x.compute_walls() }.map_err(at("config"))?;
    if let Some(path) = &args.dot {
        let k = args.wall.unwrap_or(0);
        let w = ws.get(k).ok_or_else(|| ConfigError::new("wall", format!("only {} walls", ws.len())))?;
        write_dot(path, &x.wall_dot(&x.geometric_wall(w)))?;
    }
    let list: Vec<Value> = ws.iter().map(|w| wall_json(&x, w)).collect();
    let non_trees = list.iter().filter(|w| w["tree"] == false).count();
    let kind = if args.even { "e-walls" } else { "walls" };
    let summary = if non_trees == 0 {
        format!("{} {kind}, all trees", ws.len())
    } else {
        format!("{} {kind}, {non_trees} not trees", ws.len())
    };
    Ok((Verdict::from_bool(non_trees == 0), summary, json!({ "walls": list })))
}

fn holonomy_job(args: &JobArgs) -> Outcome {
    let (_, p) = presentation(args)?;
    let sub = subgroup(args, &p)?;
    let b = Building::new(p.clone()).map_err(at("config"))?;
    let reports = holonomy_profile(&b, &sub).map_err(at("subgroup"))?;
    let orbits: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "vertex": p.name(r.vertex),
                "residue_base": p.format_word(&r.residue.base),
                "order": r.order(),
                "trivial": r.is_trivial(),
            })
        })
        .collect();
    let bad = reports.iter().filter(|r| !r.is_trivial()).count();
    let summary = if bad == 0 {
        format!("trivial at all {} residue orbits ({} residue types)", reports.len(), p.num_vertices())
    } else {
        format!("nontrivial at {bad} of {} residue orbits", reports.len())
    };
    let details = json!({ "index": sub.index(), "orbits": orbits });
    Ok((Verdict::from_bool(bad == 0), summary, details))
}

fn witness(args: &JobArgs) -> Outcome {
    let (_, p) = presentation(args)?;
    let sub = subgroup(args, &p)?;
    let b = Building::new(p.clone()).map_err(at("config"))?;
    let radius = args.radius.unwrap_or(2);
    match commensuration_witness(&b, &sub, radius) {
        Ok(w) => {
            let gens: Vec<Value> = w
                .generators
                .iter()
                .map(|g| json!({ "generator": p.format_word(&g.generator), "translation": p.format_word(&g.translation) }))
                .collect();
            let tr: Vec<Value> = w
                .transversal
                .iter()
                .map(|(t, c)| json!({ "representative": p.format_word(t), "chamber": p.format_word(c) }))
                .collect();
            let summary = format!(
                "index {}: {} generators conjugate to translations on {} chambers",
                w.index,
                w.generators.len(),
                w.chambers_checked
            );
            let details = json!({
                "radius": w.radius,
                "index": w.index,
                "chambers_checked": w.chambers_checked,
                "generators": gens,
                "transversal": tr,
            });
            Ok((Verdict::Pass, summary, details))
        }
        Err(e @ (HolonomyError::NontrivialHolonomy { .. } | HolonomyError::WitnessMismatch { .. })) => {
            Ok((Verdict::Fail, e.to_string(), json!({ "error": e.to_string() })))
        }
        Err(e) => Err(ConfigError::new("subgroup", e)),
    }
}

fn kill_cocycle(args: &JobArgs) -> Outcome {
    let (path, cfg): (_, CoverConfig) = args.load("config", &args.config)?;
    let cover = cfg.build().map_err(|e| e.in_file(path.display().to_string()))?;
    let built = cover.build().map_err(at("config"))?;
    let (cpath, ccfg): (_, CocycleConfig) = args.load("cocycle", &args.cocycle)?;
    let c = ccfg.build(&built.base.complex).map_err(|e| e.in_file(cpath.display().to_string()))?;
    let rep = kill_in_cover(&cover, &c).map_err(at("cocycle"))?;
    let steps: Vec<Value> = rep
        .steps
        .iter()
        .map(|s| json!({ "walls": s.walls, "seeds": s.seeds, "polygons_zeroed": s.polygons_zeroed }))
        .collect();
    let summary = if rep.succeeded() {
        format!("lift to the degree-{} cover is a coboundary", rep.degree)
    } else {
        format!("lift to the degree-{} cover survives", rep.degree)
    };
    let details = json!({
        "degree": rep.degree,
        "steps": steps,
        "extension": extension_report(&rep),
        "oracle_coboundary": rep.oracle_coboundary,
    });
    Ok((Verdict::from_bool(rep.succeeded()), summary, details))
}

fn kill_holonomy_job(args: &JobArgs) -> Outcome {
    let (_, p) = presentation(args)?;
    let sub = subgroup(args, &p)?;
    let homs = quotient_homs(args)?.ok_or_else(|| ConfigError::new("quotients", "required"))?;
    let seps = homs
        .iter()
        .enumerate()
        .map(|(k, h)| h.build_product(&p).map_err(|e| ConfigError::new(format!("quotients[{k}].{}", e.field), e.message)))
        .collect::<Result<Vec<_>>>()?;
    let b = Building::new(p.clone()).map_err(at("config"))?;
    let rep = kill_holonomy(&b, &sub, &seps).map_err(at("quotients"))?;
    let surviving: Vec<Value> = rep
        .surviving()
        .iter()
        .map(|r| json!({ "vertex": p.name(r.vertex), "residue_base": p.format_word(&r.residue.base), "order": r.order() }))
        .collect();
    let summary = if rep.all_trivial() {
        format!("index {} subgroup is holonomy-free at {} residue orbits", rep.subgroup.index(), rep.reports.len())
    } else {
        format!("holonomy survives at {} of {} residue orbits", surviving.len(), rep.reports.len())
    };
    let details = json!({
        "index": rep.subgroup.index(),
        "orbits": rep.reports.len(),
        "surviving": surviving,
    });
    Ok((Verdict::from_bool(rep.all_trivial()), summary, details))
}

fn davis(args: &JobArgs) -> Outcome {
    let d = coxeter(args)?;
    let (blocks, radius) = region_blocks(args, &d)?;
    let x = blocks.extract_x();
    let c2 = x.complex.check_condition(Condition::C2, args.strict);
    let c4 = x.complex.check_condition(Condition::C4, args.strict);
    let mut wall_counts = BTreeMap::new();
    let mut non_trees = 0;
    // Quotients carry closed walls, so the tree test applies to balls only.
    if radius.is_some() {
        for (name, ws) in [("walls", x.complex.compute_walls()), ("e-walls", x.complex.compute_ewalls())] {
            let ws = ws.map_err(at("config"))?;
            let through: Vec<&Wall> = ws.iter().filter(|w| !w.diameters.is_empty()).collect();
            non_trees += through.iter().filter(|w| !x.complex.geometric_wall(w).is_tree_like()).count();
            wall_counts.insert(name, through.len());
        }
    }
    if let Some(path) = &args.dot {
        write_dot(path, &x.complex.link_dot(0))?;
    }
    let ok = c2.passed() && non_trees == 0;
    let summary = format!(
        "{} blocks, {} polygons; C2 {}, C4 {}{}",
        blocks.num_blocks(),
        x.complex.num_polygons(),
        if c2.passed() { "holds" } else { "fails" },
        if c4.passed() { "holds" } else { "fails" },
        if non_trees > 0 { format!("; {non_trees} walls not trees") } else { String::new() }
    );
    let details = json!({
        "radius": radius,
        "blocks": blocks.num_blocks(),
        "edges": x.complex.num_edges(),
        "polygons": x.complex.num_polygons(),
        "c2": c2,
        "c4": c4,
        "walls_through_polygons": wall_counts,
        "walls_not_trees": non_trees,
    });
    Ok((Verdict::from_bool(ok), summary, details))
}

fn kill_lr(args: &JobArgs) -> Outcome {
    let d = coxeter(args)?;
    let (blocks, radius) = region_blocks(args, &d)?;
    let region = Region::from_blocks(blocks);
    let sigma = match &args.system {
        Some(_) => {
            let (path, cfg): (_, SystemConfig) = args.load("system", &args.system)?;
            cfg.build(&region).map_err(|e| e.in_file(path.display().to_string()))?
        }
        None => SystemConfig {
            random: args.seed,
            charts: Vec::new(),
        }
        .build(&region)?,
    };
    let tris = region.interior_triangles();
    let count = |s: &LRSystem| -> Result<usize> {
        let mut n = 0;
        for &t in &tris {
            if holonomy(&region, s, t).map_err(at("system"))? != 0 {
                n += 1;
            }
        }
        Ok(n)
    };
    let before = count(&sigma)?;
    let it = kill_all_holonomy(&region, &sigma).map_err(at("system"))?;
    let after = count(&it.system)?;
    let ok = it.holonomy_free && it.stuck.is_empty();
    let witness = if ok && radius.is_none() {
        let w = system_witness(&region, &it.system, args.radius.unwrap_or(2)).map_err(at("system"))?;
        let forms: Vec<Value> = w
            .forms
            .iter()
            .map(|f| {
                json!({
                    "generator": cox_word(&d, &f.generator),
                    "translation": cox_word(&d, &f.translation),
                    "graph_automorphism": f.graph_automorphism.iter().map(|&s| d.name(s)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "radius": w.radius, "forms": forms })
    } else {
        Value::Null
    };
    let steps: Vec<Value> = it
        .steps
        .iter()
        .map(|s| json!({ "wall": s.wall, "seed_edge": s.seed_edge, "seed_value": s.seed_value, "polygons": s.polygons }))
        .collect();
    let summary = format!(
        "{} interior triangles: holonomy at {before} before, {after} after {} wall steps",
        tris.len(),
        it.steps.len()
    );
    let details = json!({
        "blocks": region.blocks.num_blocks(),
        "triangles": tris.len(),
        "holonomy_before": before,
        "holonomy_after": after,
        "steps": steps,
        "stuck_walls": it.stuck,
        "witness": witness,
    });
    Ok((Verdict::from_bool(ok), summary, details))
}

fn plural(n: usize, word: &str) -> String {
    match (n, word) {
        (1, _) => format!("1 {word}"),
        (_, "vertex") => format!("{n} vertices"),
        _ => format!("{n} {word}s"),
    }
}
