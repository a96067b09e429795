//! The dual projective line, annihilators and the canonical isomorphism `iota`.
//!
//! Dual points are cyclic right submodules `(v, w)^T R` of the column module,
//! stored by the least column among all right unit multiples `(vu, wu)`.
//! `iota` sends `R(a, b)` to its annihilator, which is computed by a full
//! kernel scan; every closed-form image is tested against that scan.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{orbit, Block, Chain, ChainGeometry, Residue};
use crate::error::{Error, Result};
use crate::projline::{
    canonical_pair, gl2_generators, infinity_stabilizer_generators, make_point, EWord, Matrix2, Point, ProjectiveLine,
};
use crate::ring::{build_subfield, opposite_ring, Elem, Embedding, Ring, RingHandle};

/// A point `(v, w)^T R` of the dual projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DualPoint {
    v: Elem,
    w: Elem,
}

impl DualPoint {
    pub fn rep(&self) -> (Elem, Elem) {
        (self.v, self.w)
    }

    /// `(0, 1)^T R`, the image of `R(1, 0)` under `iota`.
    pub fn infinity(r: &Ring) -> DualPoint {
        column_point(r, r.zero(), r.one())
    }

    pub fn label(&self, r: &Ring) -> String {
        format!("({},{})^T", r.label(self.v), r.label(self.w))
    }
}

/// Least column in `{(vu, wu) : u in R*}`.
pub fn canonical_column(r: &Ring, v: Elem, w: Elem) -> (Elem, Elem) {
    r.units().iter().map(|&u| (r.mul(v, u), r.mul(w, u))).min().unwrap()
}

fn column_point(r: &Ring, v: Elem, w: Elem) -> DualPoint {
    let (v, w) = canonical_column(r, v, w);
    DualPoint { v, w }
}

/// Whether `(v, w)^T` is a column of some invertible matrix.
pub fn is_admissible_column(r: &Ring, v: Elem, w: Elem) -> bool {
    r.elements()
        .any(|x| r.elements().any(|y| Matrix2::new(v, x, w, y).is_invertible(r)))
}

pub fn make_dual_point(r: &Ring, v: Elem, w: Elem) -> Result<DualPoint> {
    if !is_admissible_column(r, v, w) {
        return Err(Error::NotAdmissible(r.label(v).into(), r.label(w).into()));
    }
    Ok(column_point(r, v, w))
}

/// `M * q`.
pub fn dual_act(r: &Ring, m: &Matrix2, q: DualPoint) -> DualPoint {
    let (v, w) = m.times_column(r, q.rep());
    column_point(r, v, w)
}

/// Whether the two columns form an invertible matrix.
pub fn dual_distant(r: &Ring, q1: DualPoint, q2: DualPoint) -> bool {
    Matrix2::new(q1.v, q2.v, q1.w, q2.w).is_invertible(r)
}

/// `U^perp`: all columns `(x, y)^T` with `a x + b y = 0` for every `(a, b)` in `U`.
pub fn perp_set(r: &Ring, rows: &[(Elem, Elem)]) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for x in r.elements() {
        for y in r.elements() {
            if rows.iter().all(|&(a, b)| r.add(r.mul(a, x), r.mul(b, y)) == r.zero()) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Annihilator in `R^2` of a set of columns: rows `(x, y)` with `x v + y w = 0`.
pub fn row_perp_set(r: &Ring, cols: &[(Elem, Elem)]) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for x in r.elements() {
        for y in r.elements() {
            if cols.iter().all(|&(v, w)| r.add(r.mul(x, v), r.mul(y, w)) == r.zero()) {
                out.push((x, y));
            }
        }
    }
    out
}

/// A generator `g` of `set` as a cyclic module (`span(g) == set`), admissible
/// in the sense of `admissible(g)`, chosen as the least such element.
fn cyclic_generator(
    r: &Ring,
    set: &[(Elem, Elem)],
    span: impl Fn(Elem, Elem, Elem) -> (Elem, Elem),
    admissible: impl Fn(Elem, Elem) -> bool,
) -> Option<(Elem, Elem)> {
    if set.len() != r.order() {
        return None;
    }
    let n = r.order();
    set.iter().copied().find(|&(g0, g1)| {
        let mut hit = vec![false; n * n];
        let mut count = 0;
        for s in r.elements() {
            let (x, y) = span(g0, g1, s);
            let k = x.index() * n + y.index();
            if !hit[k] {
                hit[k] = true;
                count += 1;
            }
        }
        count == set.len() && admissible(g0, g1)
    })
}

/// `iota(p) = p^perp`, by exhaustive kernel scan.
pub fn perp_point(r: &Ring, p: Point) -> Result<DualPoint> {
    let sol = perp_set(r, &[p.rep()]);
    let g = cyclic_generator(
        r,
        &sol,
        |v, w, s| (r.mul(v, s), r.mul(w, s)),
        |v, w| is_admissible_column(r, v, w),
    )
    .ok_or_else(|| Error::PerpNotCyclic(p.label(r)))?;
    Ok(column_point(r, g.0, g.1))
}

/// The annihilator of a dual point, read back as a point of `P(R)`.
pub fn row_perp_point(r: &Ring, q: DualPoint) -> Result<Point> {
    let sol = row_perp_set(r, &[q.rep()]);
    let g = cyclic_generator(
        r,
        &sol,
        |a, b, s| (r.mul(s, a), r.mul(s, b)),
        |a, b| crate::projline::is_admissible(r, a, b),
    )
    .ok_or_else(|| Error::PerpNotCyclic(q.label(r)))?;
    make_point(r, g.0, g.1)
}

/// Whether taking annihilators twice returns `p`.
pub fn check_bidual(r: &Ring, p: Point) -> Result<bool> {
    Ok(row_perp_point(r, perp_point(r, p)?)? == p)
}

/// `(U M)^perp == M^-1 U^perp` as sets of columns.
pub fn check_covariance(r: &Ring, rows: &[(Elem, Elem)], m: &Matrix2) -> bool {
    let Some(mi) = m.invert(r) else {
        return false;
    };
    let moved: Vec<(Elem, Elem)> = rows.iter().map(|&u| m.row_times(r, u)).collect();
    let lhs: HashSet<(Elem, Elem)> = perp_set(r, &moved).into_iter().collect();
    let rhs: HashSet<(Elem, Elem)> = perp_set(r, rows).into_iter().map(|c| mi.times_column(r, c)).collect();
    lhs == rhs
}

/// The column `E(0) E(-t_1) ... E(-t_n) E(0) (0,1)^T`, with the sign factor
/// `(-I)^(n-1)` dropped.
pub fn iota_word_column(r: &Ring, w: &EWord) -> (Elem, Elem) {
    let e0 = Matrix2::elementary(r, r.zero());
    let mut col = e0.times_column(r, (r.zero(), r.one()));
    for &t in w.0.iter().rev() {
        col = Matrix2::elementary(r, r.neg(t)).times_column(r, col);
    }
    e0.times_column(r, col)
}

pub fn iota_word(r: &Ring, w: &EWord) -> DualPoint {
    let (v, w) = iota_word_column(r, w);
    column_point(r, v, w)
}

/// Closed-form pairs `(row, column)` with `R(row)^iota = (column)^T R` for
/// words of length at most 3.
pub fn iota_closed_form(r: &Ring, ts: &[Elem]) -> Option<((Elem, Elem), (Elem, Elem))> {
    let (one, zero) = (r.one(), r.zero());
    let m = |x, y| r.mul(x, y);
    let s = |x, y| r.sub(x, y);
    Some(match *ts {
        [] => ((one, zero), (zero, one)),
        [t1] => ((t1, one), (r.neg(one), t1)),
        [t1, t2] => ((s(m(t2, t1), one), t2), (r.neg(t2), s(m(t1, t2), one))),
        [t1, t2, t3] => (
            (s(s(m(m(t3, t2), t1), t3), t1), s(m(t3, t2), one)),
            (r.add(r.neg(m(t2, t3)), one), s(s(m(m(t1, t2), t3), t1), t3)),
        ),
        _ => return None,
    })
}

/// Image of `R(a, b)` under `iota` for commutative rings: `(-b, a)^T R`.
pub fn iota_commutative(r: &Ring, p: Point) -> DualPoint {
    let (a, b) = p.rep();
    column_point(r, r.neg(b), a)
}

/// Mismatches between the explicit `iota` formulas and the annihilator oracle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FormulaAgreement {
    pub tuples: usize,
    pub word_mismatches: usize,
    pub closed_form_mismatches: usize,
    pub commutative_mismatches: usize,
}

impl FormulaAgreement {
    pub fn holds(&self) -> bool {
        self.word_mismatches == 0 && self.closed_form_mismatches == 0 && self.commutative_mismatches == 0
    }

    fn merge(mut self, o: Self) -> Self {
        self.tuples += o.tuples;
        self.word_mismatches += o.word_mismatches;
        self.closed_form_mismatches += o.closed_form_mismatches;
        self.commutative_mismatches += o.commutative_mismatches;
        self
    }
}

/// For each parameter tuple `(t_1, ..., t_n)`, `n <= 3`, compares the word
/// formula, the closed forms (row and column) and, on commutative rings,
/// `(-b, a)^T R` with the tabulated annihilator.
pub fn formula_agreement(line: &ProjectiveLine, iota: &Iota, tuples: &[Vec<Elem>]) -> FormulaAgreement {
    let r = line.ring();
    tuples
        .par_iter()
        .map(|ts| {
            let w = EWord(ts.clone());
            let p = crate::projline::eword_to_point(r, &w);
            let oracle = iota.image(line, p);
            let mut out = FormulaAgreement {
                tuples: 1,
                ..Default::default()
            };
            if iota_word(r, &w) != oracle {
                out.word_mismatches += 1;
            }
            let closed_ok = iota_closed_form(r, ts)
                .is_none_or(|((a, b), (v, w))| line.point_of(a, b) == Some(p) && column_point(r, v, w) == oracle);
            if !closed_ok {
                out.closed_form_mismatches += 1;
            }
            if r.is_commutative() && iota_commutative(r, p) != oracle {
                out.commutative_mismatches += 1;
            }
            out
        })
        .reduce(FormulaAgreement::default, FormulaAgreement::merge)
}

/// All tuples of length `0..=max_len` over the ring, in lexicographic order.
pub fn all_tuples(r: &Ring, max_len: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|t: &Vec<Elem>| {
                r.elements().map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// A chain of the dual chain geometry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualChain {
    points: Vec<DualPoint>,
}

impl DualChain {
    pub fn new(mut points: Vec<DualPoint>) -> Self {
        points.sort();
        points.dedup();
        Self { points }
    }

    pub fn points(&self) -> &[DualPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, q: DualPoint) -> bool {
        self.points.binary_search(&q).is_ok()
    }

    pub fn act(&self, r: &Ring, m: &Matrix2) -> DualChain {
        DualChain::new(self.points.iter().map(|&q| dual_act(r, m, q)).collect())
    }
}

/// Dual points as the orbit of `(1,0)^T R` under `GL2(R)` acting from the left.
#[derive(Debug, Clone)]
pub struct DualLine {
    ring: RingHandle,
    points: Vec<DualPoint>,
    index: HashMap<DualPoint, usize>,
}

impl DualLine {
    pub fn enumerate(ring: RingHandle) -> Result<Self> {
        let start = column_point(&ring, ring.one(), ring.zero());
        let points = orbit(
            start,
            &gl2_generators(&ring),
            |q, m| dual_act(&ring, m, *q),
            crate::chains::DEFAULT_ORBIT_CAP,
        )?;
        let index = points.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        Ok(Self { ring, points, index })
    }

    pub fn points(&self) -> &[DualPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, q: DualPoint) -> bool {
        self.index.contains_key(&q)
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }
}

/// `iota` tabulated on all points of a projective line.
#[derive(Debug, Clone)]
pub struct Iota {
    images: Vec<DualPoint>,
    preimage: HashMap<DualPoint, usize>,
}

impl Iota {
    pub fn build(line: &ProjectiveLine) -> Result<Self> {
        let r = line.ring();
        let images: Vec<DualPoint> = line
            .points()
            .par_iter()
            .map(|&p| perp_point(r, p))
            .collect::<Result<_>>()?;
        let preimage = images.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        Ok(Self { images, preimage })
    }

    pub fn image(&self, line: &ProjectiveLine, p: Point) -> DualPoint {
        self.images[line.index_of(p).expect("point of this line")]
    }

    pub fn images(&self) -> &[DualPoint] {
        &self.images
    }

    /// Index of the point mapped to `q`.
    pub fn preimage(&self, q: DualPoint) -> Option<usize> {
        self.preimage.get(&q).copied()
    }

    pub fn is_injective(&self) -> bool {
        self.preimage.len() == self.images.len()
    }

    pub fn chain_image(&self, line: &ProjectiveLine, c: &Chain) -> DualChain {
        DualChain::new(c.points().iter().map(|&p| self.image(line, p)).collect())
    }
}

/// `{(-1, k)^T R : k in K} u {(0, 1)^T R}`.
pub fn dual_standard_chain(geom: &ChainGeometry) -> DualChain {
    let r = geom.ring();
    let mut pts: Vec<DualPoint> = geom
        .field()
        .elements()
        .iter()
        .map(|&k| column_point(r, r.neg(r.one()), k))
        .collect();
    pts.push(DualPoint::infinity(r));
    DualChain::new(pts)
}

/// Dual chains: all of them, or those through `(0,1)^T R`.
pub fn dual_chain_orbit(geom: &ChainGeometry, through_infinity: bool, cap: usize) -> Result<Vec<DualChain>> {
    let r = geom.ring();
    let gens = if through_infinity {
        infinity_stabilizer_generators(r)
    } else {
        gl2_generators(r)
    };
    orbit(dual_standard_chain(geom), &gens, |c, m| c.act(r, m), cap)
}

/// Residue coordinate `x` of a dual point `(-1, x)^T R` distant from `(0,1)^T R`.
pub fn dual_coordinate(r: &Ring, q: DualPoint) -> Option<Elem> {
    let (v, w) = q.rep();
    r.inverse(v).map(|vi| r.neg(r.mul(w, vi)))
}

/// Blocks of the dual residue at `(0,1)^T R`, coordinatized by `(-1, x)^T R -> x`.
pub fn dual_residue_blocks(r: &Ring, chains: &[DualChain]) -> Result<Vec<Block>> {
    let inf = DualPoint::infinity(r);
    let mut out: Vec<Block> = chains
        .iter()
        .filter(|c| c.contains(inf))
        .map(|c| {
            c.points()
                .iter()
                .filter(|&&q| q != inf)
                .map(|&q| dual_coordinate(r, q).ok_or(Error::NotAtInfinity))
                .collect::<Result<Vec<Elem>>>()
                .map(Block::new)
        })
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// `iota`-images of the blocks of a residue at `R(1,0)`, coordinatized on the
/// dual side. Index-aligned with `res.blocks()`.
pub fn iota_residue_blocks(geom: &ChainGeometry, iota: &Iota, res: &Residue) -> Result<Vec<Block>> {
    if res.at() != geom.line().infinity() {
        return Err(Error::NotAtInfinity);
    }
    let r = geom.ring();
    let line = geom.line();
    res.blocks()
        .iter()
        .map(|b| {
            b.coords()
                .iter()
                .map(|&x| dual_coordinate(r, iota.image(line, line.affine_point(x))).ok_or(Error::NotAtInfinity))
                .collect::<Result<Vec<Elem>>>()
                .map(Block::new)
        })
        .collect()
}

/// Outcome of the `Sigma^(K,R) = Sigma(K^op, R^op)` comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OppositeEquivalence {
    pub points_match: bool,
    pub chains_match: bool,
}

impl OppositeEquivalence {
    pub fn holds(&self) -> bool {
        self.points_match && self.chains_match
    }
}

/// Reads dual columns over `R` as rows over `R^op` and compares the dual line
/// and dual chains with `P(R^op)` and `C(K^op, R^op)` computed independently.
pub fn check_opposite_equivalence(geom: &ChainGeometry, cap: usize) -> Result<OppositeEquivalence> {
    let r = geom.ring();
    let op = opposite_ring(r);
    let k_op = build_subfield(
        &op,
        Embedding::Explicit {
            elements: geom.field().elements().to_vec(),
        },
    )?;
    let op_geom = ChainGeometry::new(op.clone(), k_op)?;

    let dual = DualLine::enumerate(r.clone())?;
    let as_rows = |q: &DualPoint| {
        let (a, b) = q.rep();
        canonical_pair(&op, a, b)
    };
    let mut dual_rows: Vec<(Elem, Elem)> = dual.points().iter().map(as_rows).collect();
    dual_rows.sort();
    let op_rows: Vec<(Elem, Elem)> = op_geom.line().points().iter().map(|p| p.rep()).collect();
    let points_match = dual_rows == op_rows;

    let mut dual_chains: Vec<Vec<(Elem, Elem)>> = dual_chain_orbit(geom, false, cap)?
        .iter()
        .map(|c| {
            let mut v: Vec<_> = c.points().iter().map(as_rows).collect();
            v.sort();
            v
        })
        .collect();
    dual_chains.sort();
    let mut op_chains: Vec<Vec<(Elem, Elem)>> = op_geom
        .chain_orbit(None, cap)?
        .iter()
        .map(|c| c.points().iter().map(|p| p.rep()).collect())
        .collect();
    op_chains.sort();
    Ok(OppositeEquivalence {
        points_match,
        chains_match: dual_chains == op_chains,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::DEFAULT_ORBIT_CAP;
    use crate::projline::{eword_to_point, DistantGraph, WordTable};
    use crate::ring::{build_ring, RingSpec};

    fn geometry(spec: RingSpec, emb: Embedding) -> ChainGeometry {
        let r = build_ring(spec).unwrap();
        let k = build_subfield(&r, emb).unwrap();
        ChainGeometry::new(r, k).unwrap()
    }

    #[test]
    fn perp_examples() {
        let r = build_ring(RingSpec::Matrix2 { q: 2 }).unwrap();
        let inf = Point::infinity(&r);
        assert_eq!(perp_point(&r, inf).unwrap(), DualPoint::infinity(&r));
        for t in r.elements() {
            let p = make_point(&r, t, r.one()).unwrap();
            assert_eq!(
                perp_point(&r, p).unwrap(),
                make_dual_point(&r, r.neg(r.one()), t).unwrap()
            );
        }
    }

    #[test]
    fn commutative_formula() {
        for spec in [
            RingSpec::DualNumbers { q: 3 },
            RingSpec::Product { q: 2 },
            RingSpec::FiniteField { q: 8 },
        ] {
            let r = build_ring(spec).unwrap();
            let line = ProjectiveLine::enumerate(r.clone()).unwrap();
            for &p in line.points() {
                assert_eq!(perp_point(&r, p).unwrap(), iota_commutative(&r, p));
            }
        }
    }

    #[test]
    fn iota_word_matches_paired_formulas() {
        let r = build_ring(RingSpec::UpperTriangular2 { q: 2 }).unwrap();
        for t1 in r.elements() {
            for t2 in r.elements() {
                for ts in [vec![t1], vec![t1, t2]] {
                    let (_, col) = iota_closed_form(&r, &ts).unwrap();
                    assert_eq!(iota_word(&r, &EWord(ts)), column_point(&r, col.0, col.1));
                }
            }
        }
        assert_eq!(iota_word(&r, &EWord(vec![])), DualPoint::infinity(&r));
    }

    #[test]
    fn covariance_examples() {
        let r = build_ring(RingSpec::DualNumbers { q: 2 }).unwrap();
        let u = [(r.one(), r.zero())];
        assert!(check_covariance(&r, &u, &Matrix2::identity(&r)));
        for t in r.elements() {
            assert!(check_covariance(&r, &u, &Matrix2::elementary(&r, t)));
        }
        let singular = Matrix2::diag(&r, r.one(), r.zero());
        assert!(!check_covariance(&r, &u, &singular));
    }

    #[test]
    fn bidual_is_identity() {
        for spec in [RingSpec::DualNumbers { q: 2 }, RingSpec::Matrix2 { q: 2 }] {
            let r = build_ring(spec).unwrap();
            let line = ProjectiveLine::enumerate(r.clone()).unwrap();
            for &p in line.points() {
                assert!(check_bidual(&r, p).unwrap());
            }
        }
    }

    #[test]
    fn iota_maps_standard_chain_to_dual_standard_chain() {
        let g = geometry(RingSpec::FiniteField { q: 4 }, Embedding::Prime);
        let iota = Iota::build(g.line()).unwrap();
        assert_eq!(iota.chain_image(g.line(), &g.standard_chain()), dual_standard_chain(&g));
    }

    #[test]
    fn iota_is_a_bijection_onto_the_dual_line() {
        let g = geometry(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
        let iota = Iota::build(g.line()).unwrap();
        let dual = DualLine::enumerate(g.ring().clone()).unwrap();
        assert!(iota.is_injective());
        assert_eq!(dual.len(), g.line().len());
        assert!(iota.images().iter().all(|&q| dual.contains(q)));
    }

    #[test]
    fn iota_preserves_distance() {
        let g = geometry(RingSpec::DualNumbers { q: 2 }, Embedding::Scalar);
        let (line, r) = (g.line(), g.ring());
        let iota = Iota::build(line).unwrap();
        for &p in line.points() {
            for &q in line.points() {
                assert_eq!(
                    line.distant(p, q),
                    dual_distant(r, iota.image(line, p), iota.image(line, q))
                );
            }
        }
    }

    #[test]
    fn length_two_words_reach_every_image() {
        let g = geometry(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
        let (line, r) = (g.line(), g.ring());
        let table = WordTable::build(line, &DistantGraph::build(line).unwrap());
        assert!((0..line.len()).all(|i| table.word(i).unwrap().len() <= 2));
        let iota = Iota::build(line).unwrap();
        let mut reached = HashSet::new();
        for t1 in r.elements() {
            for t2 in r.elements() {
                let w = EWord(vec![t1, t2]);
                let p = eword_to_point(r, &w);
                assert_eq!(iota.image(line, p), iota_word(r, &w));
                reached.insert(p);
            }
        }
        assert_eq!(reached.len(), line.len());
    }

    #[test]
    fn opposite_equivalence_examples() {
        for (spec, emb) in [
            (RingSpec::FiniteField { q: 4 }, Embedding::Prime),
            (RingSpec::DualNumbers { q: 2 }, Embedding::Scalar),
            (RingSpec::Matrix2 { q: 2 }, Embedding::Singer),
            (RingSpec::UpperTriangular2 { q: 2 }, Embedding::Scalar),
        ] {
            let g = geometry(spec, emb);
            assert!(check_opposite_equivalence(&g, DEFAULT_ORBIT_CAP).unwrap().holds());
        }
    }

    #[test]
    fn dual_points_require_admissible_columns() {
        let r = build_ring(RingSpec::DualNumbers { q: 2 }).unwrap();
        let eps = r.elements().find(|&x| r.label(x) == "e").unwrap();
        assert!(make_dual_point(&r, eps, eps).is_err());
        assert!(make_dual_point(&r, eps, r.one()).is_ok());
    }
}
