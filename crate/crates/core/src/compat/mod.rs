//! Compatibility and dual compatibility of blocks in the residue at `R(1,0)`.
//!
//! Compatibility classes are the orbits of blocks under
//! `Delta = {[[a,0],[c,1]]}`, which acts on residue coordinates by
//! `x -> x a + c`. Dual compatibility pulls back the orbits of
//! `Delta^ = {[[1,0],[c,d]]}` on the `iota`-images of the blocks; on dual
//! residue coordinates it acts by `x -> d x + c`.

mod derive;
mod plane;

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::chains::{orbit, Block, Chain, ChainGeometry, Residue};
use crate::duality::{dual_chain_orbit, dual_coordinate, dual_residue_blocks, iota_residue_blocks, Iota};
use crate::error::{Error, Result};
use crate::projline::{completion, Matrix2, Point};
use crate::ring::{conjugate_subfield, is_normal_subgroup, normality_witness, Elem, Ring, Subfield};

pub use derive::{derive_plane, DerivationReport, PlaneReport};
pub use plane::{AffinePlane, DesarguesScope, DesarguesWitness, ProjectivePlane};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Compatibility,
    DualCompatibility,
}

/// One class of blocks in the residue at `R(1,0)`.
///
/// For `Side::Compatibility` the witness is `K' = u^-1 K u` and the class is
/// `{K' a + c}`; for the dual side it is `K' = u K u^-1` and the class is
/// `{a K' + c}` (`a` a unit, `c` arbitrary).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatClass {
    pub side: Side,
    pub blocks: Vec<Block>,
    pub witness_unit: Option<Elem>,
    pub witness: Option<Subfield>,
}

/// A partition of a block list, labeled by order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: usize,
}

impl Partition {
    fn normalized(raw: &[usize]) -> Self {
        let mut relabel = HashMap::new();
        let class_of = raw
            .iter()
            .map(|c| {
                let next = relabel.len();
                *relabel.entry(*c).or_insert(next)
            })
            .collect();
        Self {
            class_of,
            classes: relabel.len(),
        }
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

type CoordMap<'a> = Box<dyn Fn(Elem) -> Elem + 'a>;

/// Orbits of `blocks` under the group generated by the coordinate maps.
fn orbit_partition(blocks: &[Block], maps: &[CoordMap<'_>]) -> Result<Partition> {
    let index: HashMap<&Block, usize> = blocks.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut class = vec![usize::MAX; blocks.len()];
    let mut next = 0;
    for s in 0..blocks.len() {
        if class[s] != usize::MAX {
            continue;
        }
        class[s] = next;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for f in maps {
                let img = blocks[i].map(f);
                let j = *index
                    .get(&img)
                    .ok_or_else(|| Error::NotInvariant(format!("image of block {i}")))?;
                if class[j] == usize::MAX {
                    class[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    Ok(Partition::normalized(&class))
}

/// `x -> x a` for units `a` and `x -> x + c`.
fn delta_maps(r: &Ring) -> Vec<CoordMap<'_>> {
    let mut maps: Vec<CoordMap<'_>> = Vec::new();
    for &a in r.units() {
        maps.push(Box::new(move |x| r.mul(x, a)));
    }
    for c in r.elements() {
        maps.push(Box::new(move |x| r.add(x, c)));
    }
    maps
}

/// `x -> d x` for units `d` and `x -> x + c`.
fn dual_delta_maps(r: &Ring) -> Vec<CoordMap<'_>> {
    let mut maps: Vec<CoordMap<'_>> = Vec::new();
    for &d in r.units() {
        maps.push(Box::new(move |x| r.mul(d, x)));
    }
    for c in r.elements() {
        maps.push(Box::new(move |x| r.add(x, c)));
    }
    maps
}

/// Checks once that the coordinate maps agree with the matrix actions of the
/// generators of `Delta` on `P(R)` and of `Delta^` on the dual line.
pub fn verify_coordinate_actions(geom: &ChainGeometry) -> bool {
    use crate::duality::{dual_act, make_dual_point};
    let r = geom.ring();
    let line = geom.line();
    let minus_one = r.neg(r.one());
    r.elements().all(|x| {
        let p = line.affine_point(x);
        let q = make_dual_point(r, minus_one, x).unwrap();
        let units_ok = r.units().iter().all(|&a| {
            let m = Matrix2::diag(r, a, r.one());
            let md = Matrix2::diag(r, r.one(), a);
            line.coordinate(line.act(p, &m)) == Some(r.mul(x, a))
                && dual_coordinate(r, dual_act(r, &md, q)) == Some(r.mul(a, x))
        });
        let shifts_ok = r.elements().all(|c| {
            let m = Matrix2::lower(r, r.one(), c, r.one());
            line.coordinate(line.act(p, &m)) == Some(r.add(x, c))
                && dual_coordinate(r, dual_act(r, &m, q)) == Some(r.sub(x, c))
        });
        units_ok && shifts_ok
    })
}

fn require_infinity(geom: &ChainGeometry, res: &Residue) -> Result<()> {
    if res.at() != geom.line().infinity() {
        return Err(Error::NotAtInfinity);
    }
    Ok(())
}

/// The compatibility partition of the residue blocks.
pub fn compat_partition(geom: &ChainGeometry, res: &Residue) -> Result<Partition> {
    require_infinity(geom, res)?;
    orbit_partition(res.blocks(), &delta_maps(geom.ring()))
}

/// The dual compatibility partition of the residue blocks, pulled back from
/// the `Delta^`-orbits of their `iota`-images.
pub fn dual_compat_partition(geom: &ChainGeometry, iota: &Iota, res: &Residue) -> Result<Partition> {
    let images = iota_residue_blocks(geom, iota, res)?;
    orbit_partition(&images, &dual_delta_maps(geom.ring()))
}

fn classes_of(geom: &ChainGeometry, res: &Residue, part: &Partition, side: Side) -> Vec<CompatClass> {
    part.members()
        .into_iter()
        .map(|idx| {
            let blocks: Vec<Block> = idx.iter().map(|&i| res.blocks()[i].clone()).collect();
            let (witness_unit, witness) = match find_witness(geom.ring(), geom.field(), &blocks, side) {
                Some((u, k)) => (Some(u), Some(k)),
                None => (None, None),
            };
            CompatClass {
                side,
                blocks,
                witness_unit,
                witness,
            }
        })
        .collect()
}

/// Compatibility classes: the `Delta`-orbits on the blocks at `R(1,0)`.
pub fn delta_orbits(geom: &ChainGeometry, res: &Residue) -> Result<Vec<CompatClass>> {
    let part = compat_partition(geom, res)?;
    Ok(classes_of(geom, res, &part, Side::Compatibility))
}

/// Dual compatibility classes of the blocks at `R(1,0)`.
pub fn dual_compat_classes(geom: &ChainGeometry, iota: &Iota, res: &Residue) -> Result<Vec<CompatClass>> {
    let part = dual_compat_partition(geom, iota, res)?;
    Ok(classes_of(geom, res, &part, Side::DualCompatibility))
}

/// Left (`u^-1 K u`) or right (`u K u^-1`) conjugate of `K` for one side.
fn side_conjugate(r: &Ring, k: &Subfield, u: Elem, side: Side) -> Subfield {
    let u = match side {
        Side::Compatibility => u,
        Side::DualCompatibility => r.inverse(u).unwrap(),
    };
    conjugate_subfield(r, k, u).expect("conjugate of a subfield by a unit")
}

/// `K' a + c` (compatibility) or `a K' + c` (dual).
fn coset(r: &Ring, kp: &Subfield, a: Elem, c: Elem, side: Side) -> Block {
    Block::new(
        kp.elements()
            .iter()
            .map(|&k| {
                let s = match side {
                    Side::Compatibility => r.mul(k, a),
                    Side::DualCompatibility => r.mul(a, k),
                };
                r.add(s, c)
            })
            .collect(),
    )
}

/// `{K' a + c : a in R*, c in R}` or its mirror.
pub fn class_formula(r: &Ring, kp: &Subfield, side: Side) -> HashSet<Block> {
    let mut out = HashSet::new();
    for &a in r.units() {
        for c in r.elements() {
            out.insert(coset(r, kp, a, c, side));
        }
    }
    out
}

/// The least unit `u` whose conjugate reproduces `blocks` through the class
/// formula. The conjugate must be the unique block through `0` and `1`.
fn find_witness(r: &Ring, k: &Subfield, blocks: &[Block], side: Side) -> Option<(Elem, Subfield)> {
    let through = blocks.iter().find(|b| b.contains(r.zero()) && b.contains(r.one()))?;
    let target: HashSet<&Block> = blocks.iter().collect();
    r.units().iter().find_map(|&u| {
        let kp = side_conjugate(r, k, u, side);
        if kp.elements() != through.coords() {
            return None;
        }
        let formula = class_formula(r, &kp, side);
        (formula.len() == target.len() && formula.iter().all(|b| target.contains(b))).then_some((u, kp))
    })
}

/// Whether the class is exactly `{(u^-1 K u) a + c}` (or the mirrored dual
/// shape) for some unit `u`. Infers the witness instead of trusting the one
/// stored in the class.
pub fn check_class_structure(r: &Ring, k: &Subfield, cls: &CompatClass) -> bool {
    find_witness(r, k, &cls.blocks, cls.side).is_some()
}

/// Outcome of the residue comparison between `Sigma(K,R)` at `R(1,0)` and
/// its dual at `(0,1)^T R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VergleichReport {
    /// Every residue point keeps its coordinate under `iota`.
    pub points_fixed: bool,
    /// Primal blocks, dual blocks (from the dual chain orbit) and
    /// `{d K a + c}` coincide.
    pub residues_coincide: bool,
    pub partitions_equal: bool,
    pub normal: bool,
    /// A unit `u` with `u^-1 K u != K`, if `K*` is not normal.
    pub non_normal_witness: Option<Elem>,
    /// For a non-normal `K`: some `u` with `uK != Ku` makes `uK` dually
    /// compatible but not compatible with `K`.
    pub mixed_block_witness: Option<bool>,
    pub compat_classes: usize,
    pub dual_classes: usize,
    pub block_count: usize,
}

impl VergleichReport {
    pub fn holds(&self) -> bool {
        self.points_fixed
            && self.residues_coincide
            && (self.partitions_equal == self.normal)
            && self.mixed_block_witness != Some(false)
    }
}

pub fn verify_vergleich(geom: &ChainGeometry, iota: &Iota, cap: usize) -> Result<VergleichReport> {
    let r = geom.ring();
    let k = geom.field();
    let line = geom.line();
    let res = geom.residue_at(line.infinity(), cap)?;

    let points_fixed = r
        .elements()
        .all(|x| dual_coordinate(r, iota.image(line, line.affine_point(x))) == Some(x));

    let dual_blocks = dual_residue_blocks(r, &dual_chain_orbit(geom, true, cap)?)?;
    let mut mixed = HashSet::new();
    for &d in r.units() {
        for &a in r.units() {
            for c in r.elements() {
                mixed.insert(Block::new(
                    k.elements().iter().map(|&x| r.add(r.mul(r.mul(d, x), a), c)).collect(),
                ));
            }
        }
    }
    let primal: HashSet<Block> = res.blocks().iter().cloned().collect();
    let dual_set: HashSet<Block> = dual_blocks.iter().cloned().collect();
    let residues_coincide = primal == dual_set && primal == mixed;

    let compat = compat_partition(geom, &res)?;
    let dual = dual_compat_partition(geom, iota, &res)?;
    let normal = is_normal_subgroup(r, k);

    let mixed_block_witness = if normal {
        None
    } else {
        let ku = |u: Elem, left: bool| {
            Block::new(
                k.elements()
                    .iter()
                    .map(|&x| if left { r.mul(u, x) } else { r.mul(x, u) })
                    .collect(),
            )
        };
        let kb = res.block_index(&Block::new(k.elements().to_vec()));
        Some(r.units().iter().any(|&u| {
            let (uk, ku_) = (ku(u, true), ku(u, false));
            if uk == ku_ {
                return false;
            }
            match (kb, res.block_index(&uk)) {
                (Some(i), Some(j)) => compat.class_of(i) != compat.class_of(j) && dual.class_of(i) == dual.class_of(j),
                _ => false,
            }
        }))
    };

    Ok(VergleichReport {
        points_fixed,
        residues_coincide,
        partitions_equal: compat == dual,
        normal,
        non_normal_witness: normality_witness(r, k),
        mixed_block_witness,
        compat_classes: compat.class_count(),
        dual_classes: dual.class_count(),
        block_count: res.blocks().len(),
    })
}

/// Result of validating one class as a partial affine space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialAffineReport {
    /// Every block is a coset of a one-dimensional subspace over the witness.
    pub cosets_of_subspaces: bool,
    /// Each direction present comes with all its cosets.
    pub whole_parallel_classes: bool,
    /// Points with unit difference lie on exactly one block, other pairs on
    /// at most one.
    pub unique_joining: bool,
    pub directions_present: usize,
    pub directions_total: usize,
    pub lines: usize,
}

impl PartialAffineReport {
    pub fn holds(&self) -> bool {
        self.cosets_of_subspaces && self.whole_parallel_classes && self.unique_joining
    }

    pub fn is_full_affine_space(&self) -> bool {
        self.holds() && self.directions_present == self.directions_total
    }
}

pub fn validate_partial_affine(r: &Ring, res: &Residue, cls: &CompatClass) -> PartialAffineReport {
    let _ = res;
    let n = r.order();
    let blocks: HashSet<&Block> = cls.blocks.iter().collect();
    let subspace = |kp: &Subfield, a: Elem| coset(r, kp, a, r.zero(), cls.side);

    let mut directions_total = 0;
    if let Some(kp) = &cls.witness {
        let all: HashSet<Block> = r
            .elements()
            .filter(|&a| a != r.zero())
            .map(|a| subspace(kp, a))
            .collect();
        directions_total = all.len();
    }

    let mut cosets_of_subspaces = cls.witness.is_some();
    let mut directions: HashSet<Block> = HashSet::new();
    if let Some(kp) = &cls.witness {
        for b in &cls.blocks {
            let b0 = b.coords()[0];
            let shifted = b.map(|x| r.sub(x, b0));
            let a = shifted.coords().iter().copied().find(|&x| x != r.zero());
            match a {
                Some(a) if subspace(kp, a) == shifted => {
                    directions.insert(shifted);
                }
                _ => cosets_of_subspaces = false,
            }
        }
    }

    let whole_parallel_classes = cosets_of_subspaces
        && directions
            .iter()
            .all(|d| r.elements().all(|c| blocks.contains(&d.map(|x| r.add(x, c)))));

    let mut joined = vec![0u32; n * n];
    for b in &cls.blocks {
        for &x in b.coords() {
            for &y in b.coords() {
                if x != y {
                    joined[x.index() * n + y.index()] += 1;
                }
            }
        }
    }
    let unique_joining = r.elements().all(|x| {
        r.elements().filter(|&y| y != x).all(|y| {
            let count = joined[x.index() * n + y.index()];
            if r.is_unit(r.sub(y, x)) {
                count == 1
            } else {
                count <= 1
            }
        })
    });

    PartialAffineReport {
        cosets_of_subspaces,
        whole_parallel_classes,
        unique_joining,
        directions_present: directions.len(),
        directions_total,
        lines: cls.blocks.len(),
    }
}

/// Whether adding any residue block outside `lines` makes some pair of
/// points joined twice.
pub fn is_maximal_in_residue(r: &Ring, res: &Residue, lines: &[Block]) -> bool {
    let n = r.order();
    let mut joined = vec![false; n * n];
    for b in lines {
        for &x in b.coords() {
            for &y in b.coords() {
                joined[x.index() * n + y.index()] = x != y;
            }
        }
    }
    let present: HashSet<&Block> = lines.iter().collect();
    res.blocks().iter().filter(|b| !present.contains(b)).all(|b| {
        b.coords()
            .iter()
            .any(|&x| b.coords().iter().any(|&y| x != y && joined[x.index() * n + y.index()]))
    })
}

/// The compatibility partition at `R(1,0)`, transported to `p` by a matrix
/// moving `R(1,0)` to `p`, agrees with the orbits of the conjugated groups
/// `M^-1 Delta M` on chains through `p`, for two different such matrices.
pub fn check_transport(geom: &ChainGeometry, p: Point, cap: usize) -> Result<bool> {
    let r = geom.ring();
    let line = geom.line();
    let res = geom.residue_at(line.infinity(), cap)?;
    let part = compat_partition(geom, &res)?;
    let (a, b) = p.rep();
    let m1 = completion(r, a, b).ok_or_else(|| Error::NotAdmissible(r.label(a).into(), r.label(b).into()))?;
    let mut movers = vec![m1];
    if let Some(&u) = r.units().iter().find(|&&u| u != r.one()) {
        movers.push(Matrix2::diag(r, r.one(), u).mul(r, &m1));
    }

    let as_set_of_sets = |classes: Vec<Vec<Chain>>| -> HashSet<Vec<Chain>> {
        classes
            .into_iter()
            .map(|mut c| {
                c.sort();
                c
            })
            .collect()
    };
    let transported = as_set_of_sets(
        part.members()
            .iter()
            .map(|idx| {
                idx.iter()
                    .map(|&i| geom.chain_of_block(&res, &res.blocks()[i]).act(line, &m1))
                    .collect()
            })
            .collect(),
    );

    let mut gens = Vec::new();
    for &u in r.units() {
        gens.push(Matrix2::diag(r, u, r.one()));
    }
    for c in r.elements() {
        gens.push(Matrix2::lower(r, r.one(), c, r.one()));
    }
    for m in movers {
        let mi = m.invert(r).unwrap();
        let conj: Vec<Matrix2> = gens.iter().map(|g| mi.mul(r, g).mul(r, &m)).collect();
        let through = geom.chain_orbit(Some(p), cap)?;
        let mut seen: HashSet<Chain> = HashSet::new();
        let mut classes = Vec::new();
        for c in through {
            if seen.contains(&c) {
                continue;
            }
            let cls = orbit(c, &conj, |x, g| x.act(line, g), cap)?;
            seen.extend(cls.iter().cloned());
            classes.push(cls);
        }
        if as_set_of_sets(classes) != transported {
            return Ok(false);
        }
    }
    Ok(true)
}
