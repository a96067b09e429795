//! Chains, the chain set `C(K, R)` and residues.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::projline::{completion, gl2_generators, infinity_stabilizer_generators, Matrix2, Point, ProjectiveLine};
use crate::ring::{Elem, Ring, RingHandle, Subfield};

/// Default safety cap for orbit enumerations.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// Breadth-first orbit of `start` under `gens`, capped at `cap` elements.
/// The result is sorted, so it does not depend on hashing order.
pub fn orbit<T, G>(start: T, gens: &[G], act: impl Fn(&T, &G) -> T, cap: usize) -> Result<Vec<T>>
where
    T: Clone + Eq + Hash + Ord,
{
    let mut seen: HashSet<T> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = act(&x, g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::OrbitCapExceeded(cap));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<T> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// A chain: a sorted set of points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    points: Vec<Point>,
}

impl Chain {
    pub fn new(mut points: Vec<Point>) -> Self {
        points.sort();
        points.dedup();
        Self { points }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn act(&self, line: &ProjectiveLine, m: &Matrix2) -> Chain {
        Chain::new(self.points.iter().map(|&p| line.act(p, m)).collect())
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Chain {
        Chain::new(self.points.iter().map(|&p| f(p)).collect())
    }
}

/// A block of a residue, in residue coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    coords: Vec<Elem>,
}

impl Block {
    pub fn new(mut coords: Vec<Elem>) -> Self {
        coords.sort();
        coords.dedup();
        Self { coords }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.coords.binary_search(&x).is_ok()
    }

    /// Image under a coordinate map.
    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Block {
        Block::new(self.coords.iter().map(|&x| f(x)).collect())
    }
}

/// The residue at `p`: points distant from `p` and the blocks `D \ {p}` for
/// chains `D` through `p`.
///
/// Points and blocks are coordinatized by `x <-> R(x,1) * chart^-1`, where the
/// chart maps `p` to `R(1,0)`; at `p = R(1,0)` the chart is the identity and
/// the coordinates are the usual `R(x,1) -> x`.
#[derive(Debug, Clone)]
pub struct Residue {
    at: Point,
    chart: Matrix2,
    points: Vec<Point>,
    blocks: Vec<Block>,
    block_index: HashMap<Block, usize>,
}

impl Residue {
    pub fn at(&self) -> Point {
        self.at
    }

    pub fn chart(&self) -> &Matrix2 {
        &self.chart
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_index(&self, b: &Block) -> Option<usize> {
        self.block_index.get(b).copied()
    }

    /// Blocks containing every coordinate in `xs`.
    pub fn blocks_through(&self, xs: &[Elem]) -> Vec<&Block> {
        self.blocks
            .iter()
            .filter(|b| xs.iter().all(|&x| b.contains(x)))
            .collect()
    }
}

/// A chain geometry `Sigma(K, R)`.
#[derive(Debug, Clone)]
pub struct ChainGeometry {
    ring: RingHandle,
    field: Subfield,
    line: ProjectiveLine,
}

impl ChainGeometry {
    pub fn new(ring: RingHandle, field: Subfield) -> Result<Self> {
        let line = ProjectiveLine::enumerate(ring.clone())?;
        Ok(Self { ring, field, line })
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn field(&self) -> &Subfield {
        &self.field
    }

    pub fn line(&self) -> &ProjectiveLine {
        &self.line
    }

    /// `{R(k, 1) : k in K} u {R(1, 0)}`.
    pub fn standard_chain(&self) -> Chain {
        let mut pts: Vec<Point> = self
            .field
            .elements()
            .iter()
            .map(|&k| self.line.affine_point(k))
            .collect();
        pts.push(self.line.infinity());
        Chain::new(pts)
    }

    /// All chains (`through = None`) or all chains through a point.
    ///
    /// Chains through `R(1,0)` are the orbit of the standard chain under the
    /// stabilizer of `R(1,0)`; chains through any other point are transported
    /// from there by a matrix moving `R(1,0)` to that point.
    pub fn chain_orbit(&self, through: Option<Point>, cap: usize) -> Result<Vec<Chain>> {
        let line = &self.line;
        let act = |c: &Chain, m: &Matrix2| c.act(line, m);
        match through {
            None => orbit(self.standard_chain(), &gl2_generators(&self.ring), act, cap),
            Some(p) => {
                let at_inf = orbit(
                    self.standard_chain(),
                    &infinity_stabilizer_generators(&self.ring),
                    act,
                    cap,
                )?;
                if p == line.infinity() {
                    return Ok(at_inf);
                }
                let (a, b) = p.rep();
                let m = completion(&self.ring, a, b)
                    .ok_or_else(|| Error::NotAdmissible(self.ring.label(a).into(), self.ring.label(b).into()))?;
                let mut out: Vec<Chain> = at_inf.iter().map(|c| c.act(line, &m)).collect();
                out.sort();
                Ok(out)
            }
        }
    }

    /// Chains through `p`, by filtering the full orbit.
    pub fn chains_through_by_filter(&self, p: Point, cap: usize) -> Result<Vec<Chain>> {
        Ok(self
            .chain_orbit(None, cap)?
            .into_iter()
            .filter(|c| c.contains(p))
            .collect())
    }

    /// A matrix `N` with `p * N = R(1,0)`.
    pub fn chart_at(&self, p: Point) -> Result<Matrix2> {
        let r = &self.ring;
        if p == self.line.infinity() {
            return Ok(Matrix2::identity(r));
        }
        let (a, b) = p.rep();
        let m = completion(r, a, b).ok_or_else(|| Error::NotAdmissible(r.label(a).into(), r.label(b).into()))?;
        Ok(m.invert(r).unwrap())
    }

    pub fn residue_at(&self, p: Point, cap: usize) -> Result<Residue> {
        let chart = self.chart_at(p)?;
        let line = &self.line;
        let coord = |x: Point| {
            line.coordinate(line.act(x, &chart))
                .expect("points of a residue are distant from its base point")
        };
        let points: Vec<Point> = line.points().iter().copied().filter(|&x| line.distant(p, x)).collect();
        let mut blocks: Vec<Block> = self
            .chain_orbit(Some(p), cap)?
            .iter()
            .map(|c| Block::new(c.points().iter().filter(|&&x| x != p).map(|&x| coord(x)).collect()))
            .collect();
        blocks.sort();
        blocks.dedup();
        let block_index = blocks.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        Ok(Residue {
            at: p,
            chart,
            points,
            blocks,
            block_index,
        })
    }

    /// The chain `{p} u {R(x,1) * chart^-1 : x in block}`.
    pub fn chain_of_block(&self, res: &Residue, b: &Block) -> Chain {
        let back = res.chart.invert(&self.ring).unwrap();
        let mut pts: Vec<Point> = b
            .coords()
            .iter()
            .map(|&x| self.line.act(self.line.affine_point(x), &back))
            .collect();
        pts.push(res.at);
        Chain::new(pts)
    }
}

/// `x -> x a + c`, the action of `[[a, 0], [c, 1]]` on residue coordinates.
pub fn affine_right(r: &Ring, a: Elem, c: Elem) -> impl Fn(Elem) -> Elem + '_ {
    move |x| r.add(r.mul(x, a), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_ring, build_subfield, Embedding, RingSpec};

    fn geometry(spec: RingSpec, emb: Embedding) -> ChainGeometry {
        let r = build_ring(spec).unwrap();
        let k = build_subfield(&r, emb).unwrap();
        ChainGeometry::new(r, k).unwrap()
    }

    #[test]
    fn standard_chain_examples() {
        let g = geometry(RingSpec::FiniteField { q: 4 }, Embedding::Prime);
        let c = g.standard_chain();
        let labels: Vec<String> = c.points().iter().map(|p| p.label(g.ring())).collect();
        assert_eq!(labels, vec!["(0,1)", "(1,0)", "(1,1)"]);

        let g = geometry(RingSpec::DualNumbers { q: 2 }, Embedding::Scalar);
        let c = g.standard_chain();
        assert_eq!(c.len(), 3);
        for &p in c.points() {
            for &q in c.points() {
                assert_eq!(g.line().distant(p, q), p != q);
            }
        }

        let g = geometry(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
        assert_eq!(g.standard_chain().len(), 5);
    }

    #[test]
    fn mobius_plane_of_order_two() {
        let g = geometry(RingSpec::FiniteField { q: 4 }, Embedding::Prime);
        let chains = g.chain_orbit(None, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(chains.len(), 10);
        // Every 3-subset of the 5 points is a chain.
        let mut triples = HashSet::new();
        for c in &chains {
            assert_eq!(c.len(), 3);
            triples.insert(c.clone());
        }
        assert_eq!(triples.len(), 10);
        let through = g.chain_orbit(Some(g.line().infinity()), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(through.len(), 6);
    }

    #[test]
    fn dual_number_chains_cover_distant_triangles_once() {
        let g = geometry(RingSpec::DualNumbers { q: 2 }, Embedding::Scalar);
        let line = g.line();
        let chains = g.chain_orbit(None, DEFAULT_ORBIT_CAP).unwrap();
        let pts = line.points();
        let mut triangles = 0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    let (p, q, s) = (pts[i], pts[j], pts[k]);
                    if line.distant(p, q) && line.distant(q, s) && line.distant(p, s) {
                        triangles += 1;
                        let n = chains
                            .iter()
                            .filter(|c| c.contains(p) && c.contains(q) && c.contains(s))
                            .count();
                        assert_eq!(n, 1);
                    }
                }
            }
        }
        assert_eq!(triangles, chains.len());
    }

    #[test]
    fn through_methods_agree() {
        for (spec, emb) in [
            (RingSpec::DualNumbers { q: 3 }, Embedding::Scalar),
            (RingSpec::Matrix2 { q: 2 }, Embedding::Singer),
            (RingSpec::UpperTriangular2 { q: 2 }, Embedding::Scalar),
        ] {
            let g = geometry(spec, emb);
            for &p in g.line().points().iter().step_by(3) {
                let a = g.chain_orbit(Some(p), DEFAULT_ORBIT_CAP).unwrap();
                let b = g.chains_through_by_filter(p, DEFAULT_ORBIT_CAP).unwrap();
                assert_eq!(a, b, "{} at {}", spec.name(), p.label(g.ring()));
            }
        }
    }

    #[test]
    fn orbit_cap_is_enforced() {
        let g = geometry(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
        assert_eq!(g.chain_orbit(None, 5), Err(Error::OrbitCapExceeded(5)));
    }

    #[test]
    fn residue_examples() {
        let g = geometry(RingSpec::FiniteField { q: 4 }, Embedding::Prime);
        let res = g.residue_at(g.line().infinity(), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(res.points().len(), 4);
        assert_eq!(res.blocks().len(), 6);
        assert!(res.blocks().iter().all(|b| b.len() == 2));
        let (zero, one) = (g.ring().zero(), g.ring().one());
        assert_eq!(res.blocks_through(&[zero, one]).len(), 1);

        let g = geometry(RingSpec::DualNumbers { q: 2 }, Embedding::Scalar);
        let res = g.residue_at(g.line().infinity(), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(res.points().len(), 4);
        let eps = g.ring().elements().find(|&x| g.ring().label(x) == "e").unwrap();
        assert!(res.blocks_through(&[zero, eps]).is_empty());
    }

    #[test]
    fn residue_points_match_the_ring() {
        let g = geometry(RingSpec::Product { q: 3 }, Embedding::Diagonal);
        let line = g.line();
        let res = g.residue_at(line.infinity(), DEFAULT_ORBIT_CAP).unwrap();
        let mut coords: Vec<Elem> = res.points().iter().map(|&p| line.coordinate(p).unwrap()).collect();
        coords.sort();
        assert_eq!(coords, g.ring().elements().collect::<Vec<_>>());
    }

    #[test]
    fn blocks_round_trip_to_chains() {
        let g = geometry(RingSpec::DualNumbers { q: 3 }, Embedding::Scalar);
        let p = g.line().point(4);
        let res = g.residue_at(p, DEFAULT_ORBIT_CAP).unwrap();
        let through = g.chain_orbit(Some(p), DEFAULT_ORBIT_CAP).unwrap();
        let mut back: Vec<Chain> = res.blocks().iter().map(|b| g.chain_of_block(&res, b)).collect();
        back.sort();
        assert_eq!(back, through);
    }
}
