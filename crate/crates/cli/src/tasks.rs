//! The verification tasks of a scenario.

use std::collections::HashSet;
use std::path::Path;

use chaingeom::chains::{Chain, ChainGeometry, DEFAULT_ORBIT_CAP};
use chaingeom::compat::{
    check_class_structure, check_transport, delta_orbits, derive_plane, dual_compat_classes, is_maximal_in_residue,
    validate_partial_affine, verify_coordinate_actions, verify_vergleich, CompatClass,
};
use chaingeom::duality::{
    all_tuples, check_bidual, check_covariance, check_opposite_equivalence, dual_chain_orbit, dual_distant,
    dual_standard_chain, formula_agreement, DualLine, DualPoint, Iota,
};
use chaingeom::isomorph::{
    catalogue, check_eta, check_sigma_compatibility, check_sigma_formulas, check_transpose_law, conjugation, frobenius,
    hat_phi, identity_map, sigma_word, InducedMap, MapKind, MapSpec,
};
use chaingeom::projline::{
    eword_to_point, gl2_generators, make_point, orbit_points, scan_points, DistantGraph, EWord, Point,
};
use chaingeom::ring::{build_subfield, is_normal_subgroup, normality_witness, Elem, Embedding, RingSpec, Subfield};
use chaingeom::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{TaskName, TaskOptions, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::report::Sheet;
use crate::{export_dot, CliError};

/// Rings up to this order get exhaustive loops over tuples; larger rings are
/// sampled with the task's seed.
pub const EXHAUSTIVE_ORDER: usize = 16;

pub struct Scenario<'a> {
    pub geom: &'a ChainGeometry,
    pub dot_dir: Option<&'a Path>,
}

struct Ctx<'a> {
    geom: &'a ChainGeometry,
    cap: usize,
    samples: usize,
    rng: ChaCha8Rng,
    q: Option<u32>,
    dot_dir: Option<&'a Path>,
}

impl Ctx<'_> {
    fn exhaustive(&self) -> bool {
        self.geom.ring().order() <= EXHAUSTIVE_ORDER
    }

    fn elem(&mut self) -> Elem {
        Elem(self.rng.gen_range(0..self.geom.ring().order()) as u8)
    }

    /// All tuples of length at most 3, or seeded samples of random length.
    fn tuples(&mut self) -> Vec<Vec<Elem>> {
        if self.exhaustive() {
            return all_tuples(self.geom.ring(), 3);
        }
        (0..self.samples)
            .map(|_| {
                let n = self.rng.gen_range(0..=3);
                (0..n).map(|_| self.elem()).collect()
            })
            .collect()
    }
}

/// Runs one task; `Ok(true)` means every check passed.
pub fn run_task(name: TaskName, opts: &TaskOptions, sc: &Scenario<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let mut ctx = Ctx {
        geom: sc.geom,
        cap: opts.cap.unwrap_or(DEFAULT_ORBIT_CAP),
        samples: opts.samples.unwrap_or(DEFAULT_SAMPLES),
        rng: ChaCha8Rng::seed_from_u64(opts.seed.unwrap_or(DEFAULT_SEED)),
        q: opts.q,
        dot_dir: sc.dot_dir,
    };
    match name {
        TaskName::EnumeratePoints => enumerate_points(&mut ctx, sheet),
        TaskName::DistantGraph => distant_graph(&mut ctx, sheet),
        TaskName::ChainOrbit => chain_orbit(&mut ctx, sheet),
        TaskName::DualitySuite => duality_suite(&mut ctx, sheet),
        TaskName::Vergleich => vergleich(&mut ctx, sheet),
        TaskName::PartialAffine => partial_affine(&mut ctx, sheet),
        TaskName::DerivePlane => derive(&mut ctx, sheet),
        TaskName::SigmaSuite => sigma_suite(&mut ctx, sheet),
    }
}

fn enumerate_points(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let r = ctx.geom.ring();
    let by_orbit = orbit_points(r);
    let by_scan = scan_points(r);
    sheet.count("ring-order", r.order());
    sheet.count("units", r.units().len());
    sheet.count("subfield-order", ctx.geom.field().len());
    sheet.count("points", ctx.geom.line().len());
    sheet.count("points-by-orbit", by_orbit.len());
    sheet.count("points-by-scan", by_scan.len());
    Ok(by_orbit == by_scan && by_orbit.len() == ctx.geom.line().len())
}

fn distant_graph(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let line = ctx.geom.line();
    let g = DistantGraph::build(line)?;
    sheet.count("vertices", g.vertex_count());
    sheet.count("edges", g.edge_count());
    sheet.count("components", g.component_count());
    sheet.count("connected", g.is_connected());
    sheet.count("diameter", g.diameter());
    sheet.count("component-diameters", g.component_diameters());
    if let Some(dir) = ctx.dot_dir {
        let file = "distant-graph.dot";
        export_dot(&g, line, &dir.join(file))?;
        sheet.witness("dot-file", file);
    }
    Ok(true)
}

fn chain_orbit(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let geom = ctx.geom;
    let line = geom.line();
    let chains = geom.chain_orbit(None, ctx.cap)?;
    let size = geom.field().len() + 1;
    let sizes_ok = chains.iter().all(|c| c.len() == size);

    let agree_at = |p: Point| -> Result<(usize, bool), Error> {
        let a: HashSet<Chain> = geom.chain_orbit(Some(p), ctx.cap)?.into_iter().collect();
        let b: HashSet<Chain> = chains.iter().filter(|c| c.contains(p)).cloned().collect();
        Ok((a.len(), a == b))
    };
    let (through_inf, inf_ok) = agree_at(line.infinity())?;
    let other = *line.points().iter().find(|&&p| p != line.infinity()).unwrap();
    let (_, other_ok) = agree_at(other)?;

    // Three pairwise distant points lie on exactly one chain.
    let three_point = (line.len() <= 40).then(|| {
        let pts = line.points();
        let mut ok = true;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if !line.distant(pts[i], pts[j]) {
                    continue;
                }
                for k in j + 1..pts.len() {
                    if line.distant(pts[i], pts[k]) && line.distant(pts[j], pts[k]) {
                        let n = chains
                            .iter()
                            .filter(|c| c.contains(pts[i]) && c.contains(pts[j]) && c.contains(pts[k]))
                            .count();
                        ok &= n == 1;
                    }
                }
            }
        }
        ok
    });

    sheet.count("chains", chains.len());
    sheet.count("chain-size", size);
    sheet.count("chains-through-infinity", through_inf);
    sheet.count("through-point-methods-agree", inf_ok && other_ok);
    sheet.count("three-point-axiom", three_point);
    Ok(sizes_ok && inf_ok && other_ok && three_point != Some(false))
}

fn duality_suite(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let geom = ctx.geom;
    let r = geom.ring();
    let line = geom.line();
    let iota = Iota::build(line)?;
    let dual = DualLine::enumerate(r.clone())?;

    let bijective =
        iota.is_injective() && iota.images().len() == dual.len() && iota.images().iter().all(|&q| dual.contains(q));

    let chains = geom.chain_orbit(None, ctx.cap)?;
    let dual_chains: HashSet<_> = dual_chain_orbit(geom, false, ctx.cap)?.into_iter().collect();
    let images: HashSet<_> = chains.iter().map(|c| iota.chain_image(line, c)).collect();
    let chains_onto = images == dual_chains && images.len() == chains.len();
    let standard = iota.chain_image(line, &geom.standard_chain()) == dual_standard_chain(geom);

    let mut bidual_failures = 0;
    for &p in line.points() {
        bidual_failures += usize::from(!check_bidual(r, p)?);
    }

    let pts = line.points();
    let mut distant_failures = 0;
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let (a, b) = (iota.image(line, p), iota.image(line, q));
            distant_failures += usize::from(line.distant(p, q) != dual_distant(r, a, b));
        }
    }

    let gens = gl2_generators(r);
    let mut covariance = 0;
    let mut covariance_failures = 0;
    if ctx.exhaustive() {
        for x in r.elements() {
            for y in r.elements() {
                for m in &gens {
                    covariance += 1;
                    covariance_failures += usize::from(!check_covariance(r, &[(x, y)], m));
                }
            }
        }
    } else {
        for _ in 0..(ctx.samples / 50).max(1) {
            let u = (ctx.elem(), ctx.elem());
            let m = &gens[ctx.rng.gen_range(0..gens.len())];
            covariance += 1;
            covariance_failures += usize::from(!check_covariance(r, &[u], m));
        }
    }

    let tuples = ctx.tuples();
    let formulas = formula_agreement(line, &iota, &tuples);

    let opposite = check_opposite_equivalence(geom, ctx.cap)?;

    // On a connected graph of diameter at most 2, words of length at most 2
    // already reach every point.
    let graph = DistantGraph::build(line)?;
    let short_words_cover = (graph.is_connected() && graph.diameter() <= 2).then(|| {
        let reached: HashSet<Point> = all_tuples(r, 2)
            .into_iter()
            .map(|t| eword_to_point(r, &EWord(t)))
            .collect();
        reached.len() == line.len()
    });

    sheet.count("points", line.len());
    sheet.count("dual-points", dual.len());
    sheet.count("iota-bijective", bijective);
    sheet.count("chains", chains.len());
    sheet.count("dual-chains", dual_chains.len());
    sheet.count("chains-onto-dual-chains", chains_onto);
    sheet.count("standard-chain-image", standard);
    sheet.count("bidual-failures", bidual_failures);
    sheet.count("distant-failures", distant_failures);
    sheet.count("covariance-checks", covariance);
    sheet.count("covariance-failures", covariance_failures);
    sheet.count("formula-tuples", formulas.tuples);
    sheet.count("formulas-exhaustive", ctx.exhaustive());
    sheet.count("formula-agreement", formulas);
    sheet.count("opposite-equivalence", &opposite);
    sheet.count("short-words-cover", short_words_cover);
    Ok(bijective
        && chains_onto
        && standard
        && bidual_failures == 0
        && distant_failures == 0
        && covariance_failures == 0
        && formulas.holds()
        && opposite.holds()
        && short_words_cover != Some(false))
}

fn vergleich(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let geom = ctx.geom;
    let r = geom.ring();
    let iota = Iota::build(geom.line())?;
    let rep = verify_vergleich(geom, &iota, ctx.cap)?;
    sheet.count("block-count", rep.block_count);
    sheet.count("compat-classes", rep.compat_classes);
    sheet.count("dual-classes", rep.dual_classes);
    sheet.count("points-fixed", rep.points_fixed);
    sheet.count("residues-coincide", rep.residues_coincide);
    sheet.count("partitions-equal", rep.partitions_equal);
    sheet.count("normal", rep.normal);
    if let Some(u) = rep.non_normal_witness {
        sheet.witness("non-normal-unit", r.label(u));
    }
    if let Some(m) = rep.mixed_block_witness {
        sheet.witness("uk-dually-compatible-not-compatible", m);
    }
    Ok(rep.holds())
}

fn class_summary(r: &chaingeom::ring::Ring, cls: &CompatClass) -> serde_json::Value {
    json!({
        "blocks": cls.blocks.len(),
        "witness-unit": cls.witness_unit.map(|u| r.label(u).to_string()),
    })
}

fn partial_affine(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let geom = ctx.geom;
    let r = geom.ring();
    let line = geom.line();
    let iota = Iota::build(line)?;
    let res = geom.residue_at(line.infinity(), ctx.cap)?;
    let classes = delta_orbits(geom, &res)?;
    let duals = dual_compat_classes(geom, &iota, &res)?;

    let mut ok = verify_coordinate_actions(geom);
    let mut entries = Vec::new();
    for cls in &classes {
        let rep = validate_partial_affine(r, &res, cls);
        let structure = check_class_structure(r, geom.field(), cls);
        let maximal = is_maximal_in_residue(r, &res, &cls.blocks);
        ok &= rep.holds() && structure && maximal;
        let mut v = class_summary(r, cls);
        v["structure"] = json!(structure);
        v["maximal"] = json!(maximal);
        v["report"] = json!(rep);
        entries.push(v);
    }
    let mut dual_entries = Vec::new();
    for cls in &duals {
        let rep = validate_partial_affine(r, &res, cls);
        let structure = check_class_structure(r, geom.field(), cls);
        ok &= rep.holds() && structure;
        let mut v = class_summary(r, cls);
        v["structure"] = json!(structure);
        v["report"] = json!(rep);
        dual_entries.push(v);
    }

    // Two different classes together join some pair of points twice.
    let union_rejected = (classes.len() > 1).then(|| {
        let mut blocks = classes[0].blocks.clone();
        blocks.extend(classes[1].blocks.iter().cloned());
        let union = CompatClass {
            blocks,
            ..classes[0].clone()
        };
        !validate_partial_affine(r, &res, &union).unique_joining
    });
    ok &= union_rejected != Some(false);

    let targets: Vec<Point> = if line.len() <= 35 {
        line.points().to_vec()
    } else {
        (0..3).map(|_| line.point(ctx.rng.gen_range(0..line.len()))).collect()
    };
    let mut transport_failures = 0;
    for &p in &targets {
        transport_failures += usize::from(!check_transport(geom, p, ctx.cap)?);
    }
    ok &= transport_failures == 0;

    sheet.count("blocks", res.blocks().len());
    sheet.count("classes", entries);
    sheet.count("dual-classes", dual_entries);
    sheet.count("union-rejected", union_rejected);
    sheet.count("transport-points", targets.len());
    sheet.count("transport-failures", transport_failures);
    Ok(ok)
}

fn derive(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let q = match (ctx.q, ctx.geom.ring().spec()) {
        (Some(q), _) => q,
        (None, RingSpec::Matrix2 { q }) => q,
        (None, s) => {
            return Err(Error::UnsupportedParameter(format!(
                "derive-plane needs a matrix ring or an explicit q, got {}",
                s.name()
            ))
            .into())
        }
    };
    let rep = derive_plane(q)?;
    sheet.count("analogue", rep.analogue);
    sheet.count("q", q);
    sheet.count("normal", rep.normal);
    sheet.count("spread-size", rep.spread_size);
    sheet.count("unit-directions", rep.unit_directions);
    sheet.count("transversals", rep.transversals);
    sheet.count("transversals-match-formula", rep.transversals_match_formula);
    sheet.count("class-lines-in-field-plane", rep.class_lines_in_field_plane);
    sheet.count("derived-lines-that-are-blocks", rep.derived_lines_that_are_blocks);
    sheet.count("derived-blocks-maximal", rep.derived_blocks_maximal);
    sheet.count("derived", &rep.derived);
    sheet.count("field-plane", &rep.field_plane);
    sheet.witness("regulus", &rep.regulus);
    if let Some(u) = &rep.conjugator {
        sheet.witness("conjugator", u);
    }
    if let Some(f) = &rep.derived.failing_configuration {
        sheet.witness("failing-desargues-configuration", f);
    }
    // Every plane of order 4 is desarguesian; the derived plane of order 9
    // is the Hall plane, which is not.
    let expect_desargues = q == 2;
    Ok(rep.field_plane.desargues
        && rep.derived.desargues == expect_desargues
        && rep.derived.is_consistent()
        && rep.class_lines_in_field_plane
        && rep.transversals_match_formula != Some(false))
}

fn sigma_suite(ctx: &mut Ctx<'_>, sheet: &mut Sheet) -> Result<bool, CliError> {
    let geom = ctx.geom;
    let r = geom.ring();
    let k = geom.field();
    let line = geom.line();
    let iota = Iota::build(line)?;
    let mut ok = check_eta(line);
    sheet.count("eta-matches-matrix", ok);

    let tuples = ctx.tuples();
    let gens = gl2_generators(r);
    let dual_points: Vec<DualPoint> = if ctx.exhaustive() {
        iota.images().to_vec()
    } else {
        (0..50)
            .map(|_| iota.images()[ctx.rng.gen_range(0..line.len())])
            .collect()
    };

    let mut anti = Vec::new();
    for spec in catalogue(r)? {
        let name = spec.name().to_string();
        let spec = spec.with_conjugator(k, k, None)?;
        let map = InducedMap::sigma(&spec, &iota, line)?;
        let bijective = map.is_bijective(line);
        let chains_onto = map.maps_chains_onto(geom, geom, ctx.cap)?;
        let formulas = check_sigma_formulas(&spec, &iota, line, line)?;
        let word_mismatches = tuples
            .iter()
            .filter(|t| {
                let w = EWord((*t).clone());
                sigma_word(&spec, &w) != map.image(line, eword_to_point(r, &w))
            })
            .count();
        let mut law_failures = 0;
        for m in &gens {
            for &q in &dual_points {
                law_failures += usize::from(!check_transpose_law(&spec, m, q)?);
            }
        }
        let origin = hat_phi(&spec, DualPoint::infinity(r))? == make_point(r, r.zero(), r.one())?;
        let compat = check_sigma_compatibility(&spec, geom, geom, &iota, ctx.cap)?;
        ok &= bijective
            && chains_onto
            && formulas.holds()
            && word_mismatches == 0
            && law_failures == 0
            && origin
            && compat.holds();
        anti.push(json!({
            "name": name,
            "conjugator": spec.conjugator().map(|u| r.label(u).to_string()),
            "bijective": bijective,
            "chains-onto": chains_onto,
            "formulas": formulas,
            "word-checks": tuples.len(),
            "word-mismatches": word_mismatches,
            "transpose-law-checks": gens.len() * dual_points.len(),
            "transpose-law-failures": law_failures,
            "dual-infinity-to-origin": origin,
            "compatibility": compat,
        }));
    }

    let mut iso = Vec::new();
    for (spec, target) in isomorphisms(r, k)? {
        let name = spec.name().to_string();
        let spec = spec.with_conjugator(k, &target, None)?;
        let dst = ChainGeometry::new(r.clone(), target)?;
        let map = InducedMap::phi_bar(&spec, line)?;
        let bijective = map.is_bijective(dst.line());
        let chains_onto = map.maps_chains_onto(geom, &dst, ctx.cap)?;
        let restriction = r
            .elements()
            .all(|x| dst.line().coordinate(map.image(line, line.affine_point(x))) == Some(spec.apply(x)));
        let compat = map.transports_compatibility(geom, &dst, ctx.cap)?;
        ok &= bijective && chains_onto && restriction && compat;
        iso.push(json!({
            "name": name,
            "conjugator": spec.conjugator().map(|u| r.label(u).to_string()),
            "bijective": bijective,
            "chains-onto": chains_onto,
            "restriction-is-phi": restriction,
            "compatibility-preserved": compat,
        }));
    }
    sheet.count("normal", is_normal_subgroup(r, k));
    sheet.count("antiisomorphisms", anti);
    sheet.count("isomorphisms", iso);
    Ok(ok)
}

/// Identity, Frobenius (on non-prime fields) and conjugation by a unit that
/// moves `K` if there is one, each with the target subfield `K^phi`.
fn isomorphisms(r: &chaingeom::ring::RingHandle, k: &Subfield) -> Result<Vec<(MapSpec, Subfield)>, Error> {
    let mut maps = vec![identity_map(r, MapKind::Isomorphism)?];
    if let RingSpec::FiniteField { q } = r.spec() {
        if q != r.base_field().characteristic() as u32 {
            maps.push(frobenius(r, MapKind::Isomorphism)?);
        }
    }
    if let Some(u) = normality_witness(r, k) {
        maps.push(conjugation(r, u)?);
    }
    maps.into_iter()
        .map(|m| {
            let target = build_subfield(
                r,
                Embedding::Explicit {
                    elements: m.image_of(k),
                },
            )?;
            Ok((m, target))
        })
        .collect()
}
