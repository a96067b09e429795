//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chaingeom::chains::{Block, ChainGeometry, DEFAULT_ORBIT_CAP as CAP};
use chaingeom::compat::{delta_orbits, derive_plane, validate_partial_affine, verify_vergleich};
use chaingeom::duality::{all_tuples, check_covariance, dual_chain_orbit, formula_agreement, DualLine, Iota};
use chaingeom::isomorph::{check_sigma_compatibility, check_sigma_formulas, sigma_word, transpose, InducedMap};
use chaingeom::projline::{eword_to_point, gl2_generators, DistantGraph, EWord};
use chaingeom::ring::{build_ring, build_subfield, zoo, Elem, Embedding, RingSpec};
use chaingeom::Result;

const SEED: u64 = 0;
const SAMPLES: usize = 10_000;
const EXHAUSTIVE_ORDER: usize = 16;

fn geometry(spec: RingSpec, emb: Embedding) -> Result<ChainGeometry> {
    let r = build_ring(spec)?;
    let k = build_subfield(&r, emb)?;
    ChainGeometry::new(r, k)
}

fn m2f3() -> Result<ChainGeometry> {
    geometry(RingSpec::Matrix2 { q: 3 }, Embedding::Singer)
}

fn samples(g: &ChainGeometry, n: usize) -> Vec<Vec<Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let order = g.ring().order();
    (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=3);
            (0..len).map(|_| Elem(rng.gen_range(0..order) as u8)).collect()
        })
        .collect()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        ok,
        detail: detail.into(),
    })
}

/// `iota` on the four small rings, each within 10 s.
fn criterion1() -> Result<Outcome> {
    let rings = [
        (RingSpec::FiniteField { q: 4 }, Embedding::Prime),
        (RingSpec::DualNumbers { q: 2 }, Embedding::Scalar),
        (RingSpec::Product { q: 2 }, Embedding::Diagonal),
        (RingSpec::Matrix2 { q: 2 }, Embedding::Singer),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (spec, emb) in rings {
        let t = Instant::now();
        let g = geometry(spec, emb)?;
        let line = g.line();
        let iota = Iota::build(line)?;
        let dual = DualLine::enumerate(g.ring().clone())?;
        let bijective =
            iota.is_injective() && iota.images().len() == dual.len() && iota.images().iter().all(|&q| dual.contains(q));
        let chains = g.chain_orbit(None, CAP)?;
        let dual_chains: HashSet<_> = dual_chain_orbit(&g, false, CAP)?.into_iter().collect();
        let images: HashSet<_> = chains.iter().map(|c| iota.chain_image(line, c)).collect();
        let onto = images.len() == chains.len() && images == dual_chains;
        let secs = t.elapsed();
        ok &= bijective && onto && secs < Duration::from_secs(10);
        detail.push(format!("{} {:.2}s", spec.name(), secs.as_secs_f64()));
    }
    outcome(ok, detail.join(", "))
}

/// Word, closed-form and commutative formulas against the annihilator table.
fn criterion2() -> Result<Outcome> {
    let t = Instant::now();
    let mut ok = true;
    let mut tuples = 0;
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb)?;
        if g.ring().order() > EXHAUSTIVE_ORDER {
            continue;
        }
        let iota = Iota::build(g.line())?;
        let f = formula_agreement(g.line(), &iota, &all_tuples(g.ring(), 3));
        ok &= f.holds();
        tuples += f.tuples;
    }
    let g = m2f3()?;
    let iota = Iota::build(g.line())?;
    let f = formula_agreement(g.line(), &iota, &samples(&g, SAMPLES));
    ok &= f.holds() && f.tuples == SAMPLES;
    let secs = t.elapsed();
    outcome(
        ok && secs < Duration::from_secs(120),
        format!(
            "{tuples} exhaustive tuples, {} sampled, {:.2}s",
            f.tuples,
            secs.as_secs_f64()
        ),
    )
}

/// Covariance of annihilators over generators and singleton row sets.
fn criterion3() -> Result<Outcome> {
    let t = Instant::now();
    let (mut checks, mut failures) = (0usize, 0usize);
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb)?;
        let r = g.ring();
        if r.order() > EXHAUSTIVE_ORDER {
            continue;
        }
        for m in &gl2_generators(r) {
            for x in r.elements() {
                for y in r.elements() {
                    checks += 1;
                    failures += usize::from(!check_covariance(r, &[(x, y)], m));
                }
            }
        }
    }
    let secs = t.elapsed();
    outcome(
        failures == 0 && secs < Duration::from_secs(30),
        format!("{checks} checks, {failures} failures, {:.2}s", secs.as_secs_f64()),
    )
}

/// Residue comparison on the zoo; partitions agree exactly for normal `K*`.
fn criterion4() -> Result<Outcome> {
    let mut ok = true;
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb)?;
        let rep = verify_vergleich(&g, &Iota::build(g.line())?, CAP)?;
        ok &= rep.points_fixed && rep.residues_coincide && rep.holds();
    }
    for (spec, emb) in [
        (RingSpec::FiniteField { q: 4 }, Embedding::Prime),
        (RingSpec::DualNumbers { q: 2 }, Embedding::Scalar),
        (RingSpec::Matrix2 { q: 2 }, Embedding::Singer),
    ] {
        let g = geometry(spec, emb)?;
        let rep = verify_vergleich(&g, &Iota::build(g.line())?, CAP)?;
        ok &= rep.normal && rep.partitions_equal;
    }
    let t = Instant::now();
    let g = m2f3()?;
    let rep = verify_vergleich(&g, &Iota::build(g.line())?, CAP)?;
    let secs = t.elapsed();
    ok &= !rep.normal && !rep.partitions_equal && rep.holds() && secs < Duration::from_secs(300);
    let witness = rep.non_normal_witness.map(|u| g.ring().label(u).to_string());
    ok &= witness.is_some();
    outcome(
        ok,
        format!(
            "M2(F3): {} vs {} classes, witness unit {}, {:.2}s",
            rep.compat_classes,
            rep.dual_classes,
            witness.unwrap_or_else(|| "none".into()),
            secs.as_secs_f64()
        ),
    )
}

/// Partial-affine structure of compatibility classes.
fn criterion5() -> Result<Outcome> {
    let class_of_k = |g: &ChainGeometry| -> Result<_> {
        let res = g.residue_at(g.line().infinity(), CAP)?;
        let k = Block::new(g.field().elements().to_vec());
        let cls = delta_orbits(g, &res)?
            .into_iter()
            .find(|c| c.blocks.contains(&k))
            .expect("K is a block at infinity");
        Ok(validate_partial_affine(g.ring(), &res, &cls))
    };
    let dual = class_of_k(&geometry(RingSpec::DualNumbers { q: 2 }, Embedding::Scalar)?)?;
    let partial = dual.holds() && dual.directions_present < dual.directions_total;
    let f4 = class_of_k(&geometry(RingSpec::FiniteField { q: 4 }, Embedding::Prime)?)?;
    let full = f4.is_full_affine_space() && f4.lines == 6;

    let mut joining = true;
    let mut classes = 0;
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb)?;
        let res = g.residue_at(g.line().infinity(), CAP)?;
        for cls in delta_orbits(&g, &res)? {
            classes += 1;
            joining &= validate_partial_affine(g.ring(), &res, &cls).unique_joining;
        }
    }
    outcome(
        partial && full && joining,
        format!(
            "F2[e]: {}/{} directions, F4: {} lines, unique joining on {classes} classes",
            dual.directions_present, dual.directions_total, f4.lines
        ),
    )
}

/// The derived plane of order 9 is a non-desarguesian affine plane.
fn criterion6() -> Result<Outcome> {
    let t = Instant::now();
    let rep = derive_plane(3)?;
    let secs = t.elapsed();
    let d = &rep.derived;
    let shape = d.point_count == 81 && d.line_count == 90 && d.line_size == 9;
    let ok3 = shape && d.two_point_axiom && d.playfair && !d.desargues && d.failing_configuration.is_some();
    let control = derive_plane(2)?;
    let ok2 = control.derived.desargues && control.derived.two_point_axiom && control.derived.playfair;
    outcome(
        ok3 && ok2 && secs < Duration::from_secs(300),
        format!(
            "q=3: {}/{}/{} failing configuration centered at {}, {:.2}s; q=2 desarguesian: {}",
            d.point_count,
            d.line_count,
            d.line_size,
            d.failing_configuration.as_ref().map_or("none", |f| f.center.as_str()),
            secs.as_secs_f64(),
            control.derived.desargues
        ),
    )
}

/// `sigma` for the transpose on the matrix rings.
fn criterion7() -> Result<Outcome> {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for q in [2, 3] {
        let g = geometry(RingSpec::Matrix2 { q }, Embedding::Singer)?;
        let (r, k, line) = (g.ring(), g.field(), g.line());
        let iota = Iota::build(line)?;
        let spec = transpose(r)?.with_conjugator(k, k, None)?;
        let map = InducedMap::sigma(&spec, &iota, line)?;
        let onto = map.is_bijective(line) && map.maps_chains_onto(&g, &g, CAP)?;
        let formulas = check_sigma_formulas(&spec, &iota, line, line)?;
        let words = if q == 2 { all_tuples(r, 3) } else { samples(&g, SAMPLES) };
        let word_mismatches = words
            .iter()
            .filter(|t| {
                let w = EWord((*t).clone());
                sigma_word(&spec, &w) != map.image(line, eword_to_point(r, &w))
            })
            .count();
        let compat = check_sigma_compatibility(&spec, &g, &g, &iota, CAP)?;
        ok &= onto && formulas.holds() && word_mismatches == 0 && compat.holds();
        detail.push(format!(
            "M2(F{q}): {} words, compatibility preserved {} (normal {})",
            words.len(),
            compat.preserved,
            compat.normal
        ));
    }
    let secs = t.elapsed();
    detail.push(format!("{:.2}s", secs.as_secs_f64()));
    outcome(ok && secs < Duration::from_secs(300), detail.join(", "))
}

/// Fixed graph counts and equal component diameters across the zoo.
fn criterion8() -> Result<Outcome> {
    let facts = |spec, emb| -> Result<_> {
        let g = geometry(spec, emb)?;
        let d = DistantGraph::build(g.line())?;
        let chains = g.chain_orbit(None, CAP)?.len();
        Ok((d.vertex_count(), d.edge_count(), d.is_connected(), d.diameter(), chains))
    };
    let (v, _, _, _, chains) = facts(RingSpec::FiniteField { q: 4 }, Embedding::Prime)?;
    let mut ok = v == 5 && chains == 10;
    let (v, e, conn, diam, _) = facts(RingSpec::DualNumbers { q: 2 }, Embedding::Scalar)?;
    ok &= v == 6 && e == 12 && conn && diam == 2;
    let (v, _, conn, diam, _) = facts(RingSpec::Matrix2 { q: 2 }, Embedding::Singer)?;
    ok &= v == 35 && conn && diam == 2;
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb)?;
        let d = DistantGraph::build(g.line())?;
        let ds = d.component_diameters();
        ok &= ds.iter().all(|&x| x == ds[0]);
    }
    outcome(ok, "P(F4) 5/10, P(F2[e]) octahedron, P(M2(F2)) 35 points diameter 2")
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("iota is a bijection onto the dual chain geometry", criterion1),
        ("iota formulas agree with the annihilator oracle", criterion2),
        ("annihilator covariance", criterion3),
        ("compatible vs dually compatible blocks", criterion4),
        ("partial affine compatibility classes", criterion5),
        ("derived plane of order 9", criterion6),
        ("sigma for the transpose", criterion7),
        ("graph counts", criterion8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match run() {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {name} ({detail})",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
