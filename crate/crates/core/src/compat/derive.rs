//! Regulus replacement in the spread of `M2(F_q)` given by a Singer subfield.
//!
//! Points are the ring elements, viewed as the residue at `R(1,0)`. The lines
//! of the field plane are the cosets `Ka + c` for all `a != 0`; only those with
//! a unit `a` are blocks of the chain geometry, the remaining directions are
//! singular. Replacing the cosets of one regulus of the spread by the cosets
//! of its transversals gives the derived plane.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::plane::{AffinePlane, DesarguesScope, DesarguesWitness};
use super::{delta_orbits, is_maximal_in_residue};
use crate::chains::{Block, ChainGeometry, DEFAULT_ORBIT_CAP};
use crate::error::{Error, Result};
use crate::ring::{build_ring, build_subfield, conjugate_subfield, Elem, Embedding, Ring, RingSpec, Subfield};

/// Labels of a failing Desargues configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingConfiguration {
    pub center: String,
    pub triangle: [String; 3],
    pub perspective_triangle: [String; 3],
    pub side_intersections: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PlaneReport {
    pub order: usize,
    pub point_count: usize,
    pub line_count: usize,
    pub line_size: usize,
    pub lines_through_point: usize,
    pub two_point_axiom: bool,
    pub playfair: bool,
    pub translation_invariant: bool,
    pub desargues: bool,
    pub desargues_scope: String,
    pub centers_checked: usize,
    pub configurations_checked: Option<u64>,
    pub failing_configuration: Option<FailingConfiguration>,
}

impl PlaneReport {
    /// `line_count * line_size = point_count * lines_through_point`.
    pub fn is_consistent(&self) -> bool {
        self.line_count * self.line_size == self.point_count * self.lines_through_point
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct DerivationReport {
    /// Always true: this is the finite analogue over `M2(F_q)`.
    pub analogue: bool,
    pub q: u32,
    pub ring: String,
    pub normal: bool,
    /// The unit `u` giving `K'' = u^-1 K u`, if `K*` is not normal.
    pub conjugator: Option<String>,
    pub second_subfield: Option<Vec<String>>,
    pub spread_size: usize,
    pub unit_directions: usize,
    /// For each regulus member, a nonzero element spanning it over `K`.
    pub regulus: Vec<String>,
    pub transversals: usize,
    /// The transversals are exactly `{a K'' : a in K*}`.
    pub transversals_match_formula: Option<bool>,
    /// Every block of the compatibility class of `K` is a field-plane line.
    pub class_lines_in_field_plane: bool,
    pub derived_lines_that_are_blocks: usize,
    /// Whether the derived lines that are blocks form a maximal element of
    /// the at-most-one-block families in the residue.
    pub derived_blocks_maximal: bool,
    pub derived: PlaneReport,
    pub field_plane: PlaneReport,
    /// Lines of the derived plane as point sets of `R`.
    #[serde(skip)]
    pub derived_lines: Vec<Block>,
    #[serde(skip)]
    pub field_lines: Vec<Block>,
}

fn left_line(r: &Ring, k: &Subfield, a: Elem) -> Block {
    Block::new(k.elements().iter().map(|&x| r.mul(x, a)).collect())
}

fn cosets(r: &Ring, s: &Block) -> Vec<Block> {
    let mut out: Vec<Block> = r.elements().map(|c| s.map(|x| r.add(x, c))).collect();
    out.sort();
    out.dedup();
    out
}

/// The `F_q`-span of `v` and `w`.
fn span2(r: &Ring, v: Elem, w: Elem) -> Block {
    let q = r.base_field().order();
    let mut out = Vec::new();
    for l in 0..q {
        for m in 0..q {
            out.push(r.add(r.mul(r.scalar(l), v), r.mul(r.scalar(m), w)));
        }
    }
    Block::new(out)
}

fn meet_size(x: &Block, y: &Block) -> usize {
    x.coords().iter().filter(|&&e| y.contains(e)).count()
}

/// Transversals of `a`, `b`, `c` and the members of `spread` they all meet
/// in a one-dimensional subspace.
fn regulus(r: &Ring, spread: &[Block], a: &Block, b: &Block, c: &Block) -> (Vec<Block>, Vec<Block>) {
    let q = r.base_field().order() as usize;
    let mut trans: BTreeSet<Block> = BTreeSet::new();
    for &v in a.coords().iter().filter(|&&v| v != r.zero()) {
        for &w in b.coords().iter().filter(|&&w| w != r.zero()) {
            let t = span2(r, v, w);
            if t.len() == q * q && meet_size(&t, c) > 1 {
                trans.insert(t);
            }
        }
    }
    let trans: Vec<Block> = trans.into_iter().collect();
    let members = spread
        .iter()
        .filter(|s| trans.iter().all(|t| meet_size(s, t) == q))
        .cloned()
        .collect();
    (members, trans)
}

fn point_label(r: &Ring, plane_points: usize, dirs: &[Block], p: usize) -> String {
    if p < plane_points {
        r.label(Elem(p as u8)).to_string()
    } else {
        let d = &dirs[p - plane_points];
        let x = d.coords().iter().find(|&&x| x != r.zero()).unwrap();
        format!("dir({})", r.label(*x))
    }
}

fn plane_report(r: &Ring, lines: &[Block], exhaustive: bool) -> Result<PlaneReport> {
    let n = r.order();
    let set: HashSet<&Block> = lines.iter().collect();
    let translation_invariant = lines
        .iter()
        .all(|l| r.elements().all(|c| set.contains(&l.map(|x| r.add(x, c)))));
    let plane = AffinePlane::new(
        n,
        lines
            .iter()
            .map(|b| b.coords().iter().map(|e| e.index()).collect())
            .collect(),
    );
    let two_point_axiom = plane.two_point_axiom();
    let playfair = plane.playfair();
    if !(two_point_axiom && playfair) {
        return Err(Error::NotAPlane(format!(
            "two-point axiom {two_point_axiom}, Playfair {playfair}"
        )));
    }
    let line_size = plane
        .line_size()
        .ok_or_else(|| Error::NotAPlane("lines of different sizes".into()))?;
    let classes = plane.parallel_classes();
    let dirs: Vec<Block> = classes
        .iter()
        .map(|cls| {
            let l = cls
                .iter()
                .map(|&i| &plane.lines()[i])
                .find(|l| l.contains(&r.zero().index()))
                .unwrap();
            Block::new(l.iter().map(|&i| Elem(i as u8)).collect())
        })
        .collect();
    let proj = plane.closure()?;

    // Translations are collineations fixing every direction, so every affine
    // center is equivalent to the origin. Without that symmetry, search all.
    let scope = if exhaustive || !translation_invariant {
        DesarguesScope::AllCenters
    } else {
        let mut c = vec![r.zero().index()];
        c.extend(n..n + classes.len());
        DesarguesScope::Centers(c)
    };
    let out = proj.desargues(&scope);
    let label = |p| point_label(r, n, &dirs, p);
    let failing_configuration = out.witness.map(|w: DesarguesWitness| FailingConfiguration {
        center: label(w.center),
        triangle: [label(w.a), label(w.b), label(w.c)],
        perspective_triangle: [label(w.a2), label(w.b2), label(w.c2)],
        side_intersections: [label(w.p), label(w.q), label(w.r)],
    });
    Ok(PlaneReport {
        order: line_size,
        point_count: n,
        line_count: plane.lines().len(),
        line_size,
        lines_through_point: classes.len(),
        two_point_axiom,
        playfair,
        translation_invariant,
        desargues: out.holds(),
        desargues_scope: match scope {
            DesarguesScope::AllCenters => "all-centers".into(),
            DesarguesScope::Centers(_) => "origin-and-line-at-infinity".into(),
        },
        centers_checked: out.centers,
        configurations_checked: out.checked,
        failing_configuration,
    })
}

/// Derives the translation plane of `M2(F_q)` with a Singer subfield along one
/// regulus, and checks both the derived plane and the field plane.
///
/// The regulus is the one through `K`, `K x1` and `K x2`, where `x1 < x2` are
/// the least elements of `K''` spanning distinct members other than `K`. When
/// `K*` is normal there is no `K''` and the next two spread members are used.
pub fn derive_plane(q: u32) -> Result<DerivationReport> {
    if !matches!(q, 2 | 3) {
        return Err(Error::UnsupportedParameter(format!("derive-plane with q = {q}")));
    }
    let r = build_ring(RingSpec::Matrix2 { q })?;
    let k = build_subfield(&r, Embedding::Singer)?;
    let geom = ChainGeometry::new(r.clone(), k.clone())?;
    let res = geom.residue_at(geom.line().infinity(), DEFAULT_ORBIT_CAP)?;
    let kblock = Block::new(k.elements().to_vec());

    let mut spread: Vec<Block> = r
        .elements()
        .filter(|&a| a != r.zero())
        .map(|a| left_line(&r, &k, a))
        .collect();
    spread.sort();
    spread.dedup();
    let qq = (q * q) as usize;
    if spread.len() != qq + 1 {
        return Err(Error::RegulusNotFound(format!("spread has {} members", spread.len())));
    }
    let unit_directions = spread.iter().filter(|s| res.block_index(s).is_some()).count();

    let second = r
        .units()
        .iter()
        .map(|&u| (u, conjugate_subfield(&r, &k, u)))
        .find(|(_, kp)| kp.as_ref().is_ok_and(|kp| kp.elements() != k.elements()));
    let (conjugator, kpp) = match second {
        Some((u, kp)) => (Some(u), Some(kp?)),
        None => (None, None),
    };

    let others: Vec<Block> = match &kpp {
        Some(kp) => {
            let mut out: Vec<Block> = Vec::new();
            for &x in kp.elements().iter().filter(|&&x| x != r.zero()) {
                let m = left_line(&r, &k, x);
                if m != kblock && !out.contains(&m) {
                    out.push(m);
                }
            }
            out
        }
        None => spread.iter().filter(|s| **s != kblock).cloned().collect(),
    };
    if others.len() < 2 {
        return Err(Error::RegulusNotFound("fewer than three spread members".into()));
    }
    let (members, trans) = regulus(&r, &spread, &kblock, &others[0], &others[1]);
    if members.len() != q as usize + 1 || trans.len() != q as usize + 1 {
        return Err(Error::RegulusNotFound(format!(
            "{} members and {} transversals",
            members.len(),
            trans.len()
        )));
    }

    let transversals_match_formula = kpp.as_ref().map(|kp| {
        let formula: BTreeSet<Block> = k
            .elements()
            .iter()
            .filter(|&&a| a != r.zero())
            .map(|&a| Block::new(kp.elements().iter().map(|&x| r.mul(a, x)).collect()))
            .collect();
        formula == trans.iter().cloned().collect()
    });

    let field_lines: Vec<Block> = spread.iter().flat_map(|s| cosets(&r, s)).collect();
    let derived_lines: Vec<Block> = spread
        .iter()
        .filter(|s| !members.contains(s))
        .chain(trans.iter())
        .flat_map(|s| cosets(&r, s))
        .collect();

    let classes = delta_orbits(&geom, &res)?;
    let kclass = classes
        .iter()
        .find(|c| c.blocks.contains(&kblock))
        .expect("K is a block through 0 and 1");
    let field_set: HashSet<&Block> = field_lines.iter().collect();
    let class_lines_in_field_plane = kclass.blocks.iter().all(|b| field_set.contains(b));

    let derived_blocks: Vec<Block> = derived_lines
        .iter()
        .filter(|l| res.block_index(l).is_some())
        .cloned()
        .collect();
    let derived_blocks_maximal = is_maximal_in_residue(&r, &res, &derived_blocks);

    let exhaustive = q == 2;
    let label = |b: &Block| {
        let x = b.coords().iter().find(|&&x| x != r.zero()).unwrap();
        r.label(*x).to_string()
    };
    Ok(DerivationReport {
        analogue: true,
        q,
        ring: r.name(),
        normal: conjugator.is_none(),
        conjugator: conjugator.map(|u| r.label(u).to_string()),
        second_subfield: kpp
            .as_ref()
            .map(|kp| kp.elements().iter().map(|&x| r.label(x).to_string()).collect()),
        spread_size: spread.len(),
        unit_directions,
        regulus: members.iter().map(label).collect(),
        transversals: trans.len(),
        transversals_match_formula,
        class_lines_in_field_plane,
        derived_lines_that_are_blocks: derived_blocks.len(),
        derived_blocks_maximal,
        derived: plane_report(&r, &derived_lines, exhaustive)?,
        field_plane: plane_report(&r, &field_lines, exhaustive)?,
        derived_lines,
        field_lines,
    })
}
