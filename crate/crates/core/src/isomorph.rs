//! Isomorphisms of chain geometries induced by ring (anti)isomorphisms.
//!
//! An isomorphism `phi: R -> R'` acts on points by `R(a,b) -> R'(a^phi, b^phi)`.
//! An antiisomorphism acts on dual points by `(v,w)^T R -> R'(v^phi, w^phi)`,
//! and `sigma` is `iota`, then that map, then `eta: R'(a,b) -> R'(b,-a)`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{Block, Chain, ChainGeometry};
use crate::compat::compat_partition;
use crate::duality::{dual_act, DualPoint, Iota};
use crate::error::{Error, Result};
use crate::projline::{eword_to_point, make_point, EWord, Matrix2, Point, ProjectiveLine};
use crate::ring::{is_normal_subgroup, Elem, Ring, RingHandle, RingSpec, Subfield};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Isomorphism,
    Antiisomorphism,
}

/// A ring isomorphism or antiisomorphism as a verified table.
#[derive(Debug, Clone)]
pub struct MapSpec {
    name: String,
    source: RingHandle,
    target: RingHandle,
    table: Vec<Elem>,
    kind: MapKind,
    conjugator: Option<Elem>,
}

fn hom_error(kind: MapKind, reason: String) -> Error {
    Error::NotAHomomorphism {
        kind: match kind {
            MapKind::Isomorphism => "isomorphism",
            MapKind::Antiisomorphism => "antiisomorphism",
        },
        reason,
    }
}

impl MapSpec {
    /// Builds and verifies a map given by `f` on every element of `source`.
    pub fn new(
        name: impl Into<String>,
        source: RingHandle,
        target: RingHandle,
        kind: MapKind,
        f: impl Fn(Elem) -> Option<Elem>,
    ) -> Result<Self> {
        let table = source
            .elements()
            .map(|x| f(x).ok_or_else(|| hom_error(kind, format!("no image for {}", source.label(x)))))
            .collect::<Result<Vec<_>>>()?;
        let spec = Self {
            name: name.into(),
            source,
            target,
            table,
            kind,
            conjugator: None,
        };
        spec.verify()?;
        Ok(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &RingHandle {
        &self.source
    }

    pub fn target(&self) -> &RingHandle {
        &self.target
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn conjugator(&self) -> Option<Elem> {
        self.conjugator
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x.index()]
    }

    /// Exhaustive check: bijective, additive, `1 -> 1`, and multiplicative or
    /// product-reversing according to the kind.
    pub fn verify(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        let err = |reason: String| hom_error(self.kind, reason);
        if s.order() != t.order() {
            return Err(err("orders differ".into()));
        }
        let distinct: HashSet<Elem> = self.table.iter().copied().collect();
        if distinct.len() != s.order() {
            return Err(err("not injective".into()));
        }
        if self.apply(s.one()) != t.one() {
            return Err(err("1 is not mapped to 1".into()));
        }
        let f = |x| self.apply(x);
        for x in s.elements() {
            for y in s.elements() {
                if f(s.add(x, y)) != t.add(f(x), f(y)) {
                    return Err(err(format!("not additive at ({}, {})", s.label(x), s.label(y))));
                }
                let prod = match self.kind {
                    MapKind::Isomorphism => t.mul(f(x), f(y)),
                    MapKind::Antiisomorphism => t.mul(f(y), f(x)),
                };
                if f(s.mul(x, y)) != prod {
                    return Err(err(format!(
                        "products not respected at ({}, {})",
                        s.label(x),
                        s.label(y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// An antiisomorphism read as an isomorphism from the opposite of the source.
    pub fn as_opposite_isomorphism(&self) -> Result<MapSpec> {
        if self.kind != MapKind::Antiisomorphism {
            return Err(Error::WrongMapKind("antiisomorphism"));
        }
        let op = crate::ring::opposite_ring(&self.source);
        MapSpec::new(
            format!("{} from the opposite ring", self.name),
            op,
            self.target.clone(),
            MapKind::Isomorphism,
            |x| Some(self.apply(x)),
        )
    }

    /// `K^phi` as a sorted element list.
    pub fn image_of(&self, k: &Subfield) -> Vec<Elem> {
        let mut out: Vec<Elem> = k.elements().iter().map(|&x| self.apply(x)).collect();
        out.sort();
        out
    }

    fn satisfies(&self, k: &Subfield, kp: &Subfield, u: Elem) -> bool {
        let t = &self.target;
        let Some(ui) = t.inverse(u) else { return false };
        let mut conj: Vec<Elem> = kp.elements().iter().map(|&x| t.mul(t.mul(ui, x), u)).collect();
        conj.sort();
        conj == self.image_of(k)
    }

    /// Attaches the least unit `u'` with `K^phi = u'^-1 K' u'`, or verifies the
    /// one supplied.
    pub fn with_conjugator(mut self, k: &Subfield, kp: &Subfield, supplied: Option<Elem>) -> Result<Self> {
        let u = match supplied {
            Some(u) if self.satisfies(k, kp, u) => u,
            Some(_) => return Err(Error::SubfieldConditionViolated),
            None => *self
                .target
                .units()
                .iter()
                .find(|&&u| self.satisfies(k, kp, u))
                .ok_or(Error::SubfieldConditionViolated)?,
        };
        self.conjugator = Some(u);
        Ok(self)
    }

    fn require(&self, kind: MapKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongMapKind(match kind {
                MapKind::Isomorphism => "isomorphism",
                MapKind::Antiisomorphism => "antiisomorphism",
            }));
        }
        if self.conjugator.is_none() {
            return Err(Error::SubfieldConditionViolated);
        }
        Ok(())
    }
}

/// The identity of `r`, of either kind (an antiautomorphism only for
/// commutative rings).
pub fn identity_map(r: &RingHandle, kind: MapKind) -> Result<MapSpec> {
    MapSpec::new("identity", r.clone(), r.clone(), kind, Some)
}

/// `x -> x^p` on a finite field of characteristic `p`.
pub fn frobenius(r: &RingHandle, kind: MapKind) -> Result<MapSpec> {
    let p = r.base_field().characteristic();
    MapSpec::new("frobenius", r.clone(), r.clone(), kind, |x| {
        Some((1..p).fold(x, |acc, _| r.mul(acc, x)))
    })
}

/// `x -> u^-1 x u`.
pub fn conjugation(r: &RingHandle, u: Elem) -> Result<MapSpec> {
    let ui = r.inverse(u).ok_or_else(|| Error::NotAUnit(r.label(u).into()))?;
    MapSpec::new(
        format!("conjugation by {}", r.label(u)),
        r.clone(),
        r.clone(),
        MapKind::Isomorphism,
        |x| Some(r.mul(r.mul(ui, x), u)),
    )
}

/// Transposition on `M2(F_q)`.
pub fn transpose(r: &RingHandle) -> Result<MapSpec> {
    MapSpec::new("transpose", r.clone(), r.clone(), MapKind::Antiisomorphism, |x| {
        r.transpose(x)
    })
}

/// `[[a,b],[0,d]] -> [[d,b],[0,a]]`: the transpose onto the lower triangular
/// ring followed by conjugation with the antidiagonal permutation matrix.
pub fn triangular_flip(r: &RingHandle) -> Result<MapSpec> {
    MapSpec::new("triangular flip", r.clone(), r.clone(), MapKind::Antiisomorphism, |x| {
        let [a, b, _, d] = r.rep(x);
        r.elem_of_rep([d, b, 0, a])
    })
}

/// The antiautomorphisms shipped for a ring.
pub fn catalogue(r: &RingHandle) -> Result<Vec<MapSpec>> {
    let mut out = Vec::new();
    match r.spec() {
        RingSpec::Matrix2 { .. } => out.push(transpose(r)?),
        RingSpec::UpperTriangular2 { .. } => out.push(triangular_flip(r)?),
        RingSpec::FiniteField { q } => {
            out.push(identity_map(r, MapKind::Antiisomorphism)?);
            if q != r.base_field().characteristic() as u32 {
                out.push(frobenius(r, MapKind::Antiisomorphism)?);
            }
        }
        _ => out.push(identity_map(r, MapKind::Antiisomorphism)?),
    }
    Ok(out)
}

/// `R(a,b) -> R'(a^phi, b^phi)` for an isomorphism.
pub fn phi_bar(spec: &MapSpec, p: Point) -> Result<Point> {
    spec.require(MapKind::Isomorphism)?;
    let (a, b) = p.rep();
    make_point(spec.target(), spec.apply(a), spec.apply(b))
}

/// `(v,w)^T R -> R'(v^phi, w^phi)` for an antiisomorphism.
pub fn hat_phi(spec: &MapSpec, q: DualPoint) -> Result<Point> {
    spec.require(MapKind::Antiisomorphism)?;
    let (v, w) = q.rep();
    make_point(spec.target(), spec.apply(v), spec.apply(w))
}

/// `R(a,b) -> R(b,-a)`.
pub fn eta(r: &Ring, p: Point) -> Point {
    let (a, b) = p.rep();
    make_point(r, b, r.neg(a)).expect("eta maps points to points")
}

/// `eta` agrees with the action of `E(0)^-1` on every point.
pub fn check_eta(line: &ProjectiveLine) -> bool {
    let r = line.ring();
    let e0i = Matrix2::elementary(r, r.zero()).invert(r).unwrap();
    line.points().iter().all(|&p| eta(r, p) == line.act(p, &e0i))
}

/// `p^sigma` with `sigma = eta o hat_phi o iota`.
pub fn sigma(spec: &MapSpec, iota: &Iota, line: &ProjectiveLine, p: Point) -> Result<Point> {
    Ok(eta(spec.target(), hat_phi(spec, iota.image(line, p))?))
}

/// `R'(1',0') E(t_n^phi) ... E(t_1^phi)`, evaluated without `iota`.
pub fn sigma_word(spec: &MapSpec, w: &EWord) -> Point {
    let mapped = EWord(w.0.iter().map(|&t| spec.apply(t)).collect());
    eword_to_point(spec.target(), &mapped)
}

/// `(M q)^hat_phi = q^hat_phi (M^T)^phi`.
pub fn check_transpose_law(spec: &MapSpec, m: &Matrix2, q: DualPoint) -> Result<bool> {
    let (s, t) = (spec.source(), spec.target());
    let lhs = hat_phi(spec, dual_act(s, m, q))?;
    let mt = m.transpose().map(|x| spec.apply(x));
    let (a, b) = mt.row_times(t, hat_phi(spec, q)?.rep());
    Ok(lhs == make_point(t, a, b)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InducedName {
    PhiBar,
    Sigma,
}

/// A point map `P(R) -> P(R')`, tabulated by source point index.
#[derive(Debug, Clone)]
pub struct InducedMap {
    name: InducedName,
    images: Vec<Point>,
}

impl InducedMap {
    pub fn phi_bar(spec: &MapSpec, line: &ProjectiveLine) -> Result<Self> {
        let images = line.points().iter().map(|&p| phi_bar(spec, p)).collect::<Result<_>>()?;
        Ok(Self {
            name: InducedName::PhiBar,
            images,
        })
    }

    pub fn sigma(spec: &MapSpec, iota: &Iota, line: &ProjectiveLine) -> Result<Self> {
        let images = line
            .points()
            .iter()
            .map(|&p| sigma(spec, iota, line, p))
            .collect::<Result<_>>()?;
        Ok(Self {
            name: InducedName::Sigma,
            images,
        })
    }

    pub fn name(&self) -> InducedName {
        self.name
    }

    pub fn image(&self, line: &ProjectiveLine, p: Point) -> Point {
        self.images[line.index_of(p).expect("point of the source line")]
    }

    pub fn is_bijective(&self, target: &ProjectiveLine) -> bool {
        let set: HashSet<Point> = self.images.iter().copied().collect();
        set.len() == target.len() && set.iter().all(|&p| target.index_of(p).is_some())
    }

    pub fn chain_image(&self, line: &ProjectiveLine, c: &Chain) -> Chain {
        c.map(|p| self.image(line, p))
    }

    /// The image of every chain of `src` is a chain of `dst` and every chain
    /// of `dst` is hit.
    pub fn maps_chains_onto(&self, src: &ChainGeometry, dst: &ChainGeometry, cap: usize) -> Result<bool> {
        let target: HashSet<Chain> = dst.chain_orbit(None, cap)?.into_iter().collect();
        let images: HashSet<Chain> = src
            .chain_orbit(None, cap)?
            .iter()
            .map(|c| self.chain_image(src.line(), c))
            .collect();
        Ok(images == target)
    }

    /// Whether the compatibility partition at `R(1,0)` is carried onto the one
    /// at `R'(1',0')`. Requires the map to fix infinity.
    pub fn transports_compatibility(&self, src: &ChainGeometry, dst: &ChainGeometry, cap: usize) -> Result<bool> {
        let (sl, dl) = (src.line(), dst.line());
        if self.image(sl, sl.infinity()) != dl.infinity() {
            return Err(Error::NotAtInfinity);
        }
        let sres = src.residue_at(sl.infinity(), cap)?;
        let dres = dst.residue_at(dl.infinity(), cap)?;
        let spart = compat_partition(src, &sres)?;
        let dpart = compat_partition(dst, &dres)?;
        let to_block = |c: &Chain| -> Option<Block> {
            let coords: Option<Vec<Elem>> = c
                .points()
                .iter()
                .filter(|&&p| p != dl.infinity())
                .map(|&p| dl.coordinate(p))
                .collect();
            coords.map(Block::new)
        };
        let mut classes: HashMap<usize, usize> = HashMap::new();
        for (i, b) in sres.blocks().iter().enumerate() {
            let img = to_block(&self.chain_image(sl, &src.chain_of_block(&sres, b)));
            let Some(j) = img.and_then(|b| dres.block_index(&b)) else {
                return Ok(false);
            };
            // Same source class must go to the same target class and vice versa.
            match classes.insert(spart.class_of(i), dpart.class_of(j)) {
                Some(prev) if prev != dpart.class_of(j) => return Ok(false),
                _ => {}
            }
        }
        let hit: HashSet<usize> = classes.values().copied().collect();
        Ok(hit.len() == classes.len() && classes.len() == dpart.class_count())
    }
}

/// Coordinate formulas for `sigma` at word lengths `0..=3`, each counted
/// over all tuples of the source ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaFormulaReport {
    pub infinity_fixed: bool,
    pub length_one: usize,
    pub length_two: usize,
    pub length_three: usize,
    pub failures: usize,
}

impl SigmaFormulaReport {
    pub fn holds(&self) -> bool {
        self.infinity_fixed && self.failures == 0
    }
}

pub fn check_sigma_formulas(
    spec: &MapSpec,
    iota: &Iota,
    line: &ProjectiveLine,
    target: &ProjectiveLine,
) -> Result<SigmaFormulaReport> {
    let (s, t) = (spec.source(), spec.target());
    let map = InducedMap::sigma(spec, iota, line)?;
    let f = |x| spec.apply(x);
    let one = t.one();
    let infinity_fixed = map.image(line, line.infinity()) == target.infinity();
    let agrees = |p: (Elem, Elem), img: (Elem, Elem)| -> bool {
        match (line.point_of(p.0, p.1), target.point_of(img.0, img.1)) {
            (Some(p), Some(q)) => map.image(line, p) == q,
            _ => false,
        }
    };
    let els: Vec<Elem> = s.elements().collect();
    let mut failures = els.iter().filter(|&&t1| !agrees((t1, s.one()), (f(t1), one))).count();
    for &t1 in &els {
        for &t2 in &els {
            let p = (s.sub(s.mul(t2, t1), s.one()), t2);
            let img = (t.sub(t.mul(f(t2), f(t1)), one), f(t2));
            failures += usize::from(!agrees(p, img));
        }
    }
    failures += els
        .par_iter()
        .map(|&t1| {
            let mut bad = 0;
            for &t2 in &els {
                for &t3 in &els {
                    let p = (
                        s.sub(s.sub(s.mul(s.mul(t3, t2), t1), t3), t1),
                        s.sub(s.mul(t3, t2), s.one()),
                    );
                    let (a, b, c) = (f(t1), f(t2), f(t3));
                    let img = (t.sub(t.sub(t.mul(t.mul(c, b), a), c), a), t.sub(t.mul(c, b), one));
                    bad += usize::from(!agrees(p, img));
                }
            }
            bad
        })
        .sum::<usize>();
    let n = els.len();
    Ok(SigmaFormulaReport {
        infinity_fixed,
        length_one: n,
        length_two: n * n,
        length_three: n * n * n,
        failures,
    })
}

/// `sigma` preserves compatibility exactly when `K*` is normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaCompatibility {
    pub preserved: bool,
    pub normal: bool,
}

impl SigmaCompatibility {
    pub fn holds(&self) -> bool {
        self.preserved == self.normal
    }
}

pub fn check_sigma_compatibility(
    spec: &MapSpec,
    src: &ChainGeometry,
    dst: &ChainGeometry,
    iota: &Iota,
    cap: usize,
) -> Result<SigmaCompatibility> {
    let map = InducedMap::sigma(spec, iota, src.line())?;
    Ok(SigmaCompatibility {
        preserved: map.transports_compatibility(src, dst, cap)?,
        normal: is_normal_subgroup(src.ring(), src.field()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::DEFAULT_ORBIT_CAP;
    use crate::projline::gl2_generators;
    use crate::ring::{build_ring, build_subfield, Embedding};

    fn geometry(spec: RingSpec, emb: Embedding) -> ChainGeometry {
        let r = build_ring(spec).unwrap();
        let k = build_subfield(&r, emb).unwrap();
        ChainGeometry::new(r, k).unwrap()
    }

    #[test]
    fn catalogue_entries_verify() {
        for spec in [
            RingSpec::FiniteField { q: 4 },
            RingSpec::Matrix2 { q: 2 },
            RingSpec::UpperTriangular2 { q: 3 },
            RingSpec::DualNumbers { q: 2 },
        ] {
            let r = build_ring(spec).unwrap();
            for m in catalogue(&r).unwrap() {
                assert_eq!(m.kind(), MapKind::Antiisomorphism);
                m.as_opposite_isomorphism().unwrap();
            }
        }
    }

    #[test]
    fn transpose_is_not_an_automorphism() {
        let r = build_ring(RingSpec::Matrix2 { q: 2 }).unwrap();
        let err = MapSpec::new("t", r.clone(), r.clone(), MapKind::Isomorphism, |x| r.transpose(x));
        assert!(matches!(err, Err(Error::NotAHomomorphism { .. })));
    }

    #[test]
    fn frobenius_fixes_the_standard_chain() {
        let g = geometry(RingSpec::FiniteField { q: 4 }, Embedding::Prime);
        let phi = frobenius(g.ring(), MapKind::Isomorphism)
            .unwrap()
            .with_conjugator(g.field(), g.field(), None)
            .unwrap();
        let map = InducedMap::phi_bar(&phi, g.line()).unwrap();
        assert!(map.is_bijective(g.line()));
        assert_ne!(map.images, g.line().points());
        let std = g.standard_chain();
        assert_eq!(map.chain_image(g.line(), &std), std);
        assert!(map.maps_chains_onto(&g, &g, DEFAULT_ORBIT_CAP).unwrap());
    }

    #[test]
    fn sigma_law_on_m2f2() {
        let g = geometry(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
        let r = g.ring();
        let iota = Iota::build(g.line()).unwrap();
        let t = transpose(r)
            .unwrap()
            .with_conjugator(g.field(), g.field(), None)
            .unwrap();
        assert!(check_eta(g.line()));
        let dual_inf = DualPoint::infinity(r);
        assert_eq!(
            hat_phi(&t, dual_inf).unwrap(),
            make_point(r, r.zero(), r.one()).unwrap()
        );
        for m in gl2_generators(r) {
            for &p in g.line().points() {
                assert!(check_transpose_law(&t, &m, iota.image(g.line(), p)).unwrap());
            }
        }
        let map = InducedMap::sigma(&t, &iota, g.line()).unwrap();
        assert!(map.is_bijective(g.line()));
        assert!(map.maps_chains_onto(&g, &g, DEFAULT_ORBIT_CAP).unwrap());
        assert!(check_sigma_formulas(&t, &iota, g.line(), g.line()).unwrap().holds());
        let c = check_sigma_compatibility(&t, &g, &g, &iota, DEFAULT_ORBIT_CAP).unwrap();
        assert!(c.preserved && c.normal);
    }

    #[test]
    fn phi_bar_needs_an_isomorphism() {
        let g = geometry(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
        let t = transpose(g.ring())
            .unwrap()
            .with_conjugator(g.field(), g.field(), None)
            .unwrap();
        assert!(matches!(
            phi_bar(&t, g.line().infinity()),
            Err(Error::WrongMapKind("isomorphism"))
        ));
    }

    #[test]
    fn missing_conjugator_is_reported() {
        let g = geometry(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
        let r = g.ring();
        let scalars = build_subfield(r, Embedding::Scalar).unwrap();
        let t = transpose(r).unwrap();
        assert!(matches!(
            t.with_conjugator(g.field(), &scalars, None),
            Err(Error::SubfieldConditionViolated)
        ));
    }
}
