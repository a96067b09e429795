//! The projective line `P(R)`: admissible pairs up to left unit multiples.

mod graph;
mod word;

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingHandle};

pub use graph::DistantGraph;
pub use word::{eword_row, eword_to_point, point_to_eword, EWord, WordTable};

/// A `2 x 2` matrix over a ring, row-major: `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl Matrix2 {
    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity(r: &Ring) -> Self {
        Self::new(r.one(), r.zero(), r.zero(), r.one())
    }

    /// `E(t) = [[t, 1], [-1, 0]]`.
    pub fn elementary(r: &Ring, t: Elem) -> Self {
        Self::new(t, r.one(), r.neg(r.one()), r.zero())
    }

    pub fn diag(r: &Ring, a: Elem, d: Elem) -> Self {
        Self::new(a, r.zero(), r.zero(), d)
    }

    /// `[[a, 0], [c, d]]`.
    pub fn lower(r: &Ring, a: Elem, c: Elem, d: Elem) -> Self {
        Self::new(a, r.zero(), c, d)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Self {
        Self::new(f(self.a), f(self.b), f(self.c), f(self.d))
    }

    pub fn neg(&self, r: &Ring) -> Self {
        self.map(|x| r.neg(x))
    }

    pub fn mul(&self, r: &Ring, o: &Matrix2) -> Matrix2 {
        let dot = |x: Elem, y: Elem, z: Elem, w: Elem| r.add(r.mul(x, y), r.mul(z, w));
        Matrix2::new(
            dot(self.a, o.a, self.b, o.c),
            dot(self.a, o.b, self.b, o.d),
            dot(self.c, o.a, self.d, o.c),
            dot(self.c, o.b, self.d, o.d),
        )
    }

    /// Row vector times matrix: `(x, y) * M`.
    pub fn row_times(&self, r: &Ring, (x, y): (Elem, Elem)) -> (Elem, Elem) {
        (
            r.add(r.mul(x, self.a), r.mul(y, self.c)),
            r.add(r.mul(x, self.b), r.mul(y, self.d)),
        )
    }

    /// Matrix times column vector: `M * (v, w)^T`.
    pub fn times_column(&self, r: &Ring, (v, w): (Elem, Elem)) -> (Elem, Elem) {
        (
            r.add(r.mul(self.a, v), r.mul(self.b, w)),
            r.add(r.mul(self.c, v), r.mul(self.d, w)),
        )
    }

    pub fn invert(&self, r: &Ring) -> Option<Matrix2> {
        mat_invert(r, self)
    }

    pub fn is_invertible(&self, r: &Ring) -> bool {
        mat_invert(r, self).is_some()
    }
}

/// Two-sided inverse in `GL2(R)`.
///
/// The matrix is realized as a `2k x 2k` matrix over the coefficient field
/// and inverted by elimination. The inverse of an element of a finite
/// dimensional unital subalgebra stays inside it, so the blocks of the result
/// are again ring elements.
pub fn mat_invert(r: &Ring, m: &Matrix2) -> Option<Matrix2> {
    let k = r.matrix_dim();
    let n = 2 * k;
    let mut big = [0u8; 16];
    let blocks = [m.a, m.b, m.c, m.d];
    for (bi, &e) in blocks.iter().enumerate() {
        let (br, bc) = (bi / 2, bi % 2);
        let rep = r.rep(e);
        for i in 0..k {
            for j in 0..k {
                big[(br * k + i) * n + bc * k + j] = rep[i * k + j];
            }
        }
    }
    let inv = r.base_field().invert_matrix(n, &big[..n * n])?;
    let block = |bi: usize| {
        let (br, bc) = (bi / 2, bi % 2);
        let mut rep = [0u8; 4];
        for i in 0..k {
            for j in 0..k {
                rep[i * k + j] = inv[(br * k + i) * n + bc * k + j];
            }
        }
        r.elem_of_rep(rep).expect("inverse of a ring matrix leaves the ring")
    };
    Some(Matrix2::new(block(0), block(1), block(2), block(3)))
}

/// A point `R(a, b)` of the projective line, stored by its canonical
/// representative: the least pair among all left unit multiples `(ua, ub)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    a: Elem,
    b: Elem,
}

impl Point {
    pub fn rep(&self) -> (Elem, Elem) {
        (self.a, self.b)
    }

    /// `R(1, 0)`.
    pub fn infinity(r: &Ring) -> Point {
        make_point(r, r.one(), r.zero()).unwrap()
    }

    pub fn label(&self, r: &Ring) -> String {
        format!("({},{})", r.label(self.a), r.label(self.b))
    }
}

/// Least pair in `{(ua, ub) : u in R*}`.
pub fn canonical_pair(r: &Ring, a: Elem, b: Elem) -> (Elem, Elem) {
    r.units()
        .iter()
        .map(|&u| (r.mul(u, a), r.mul(u, b)))
        .min()
        .expect("a ring has at least one unit")
}

/// Whether `(a, b)` is the first row of some invertible matrix.
pub fn is_admissible(r: &Ring, a: Elem, b: Elem) -> bool {
    completion(r, a, b).is_some()
}

/// An invertible matrix with first row `(a, b)`, found by scanning second rows.
pub fn completion(r: &Ring, a: Elem, b: Elem) -> Option<Matrix2> {
    // [[a,b],[0,1]] and [[a,b],[1,0]] are invertible when a, resp. b, is a unit.
    if r.is_unit(a) {
        return Some(Matrix2::new(a, b, r.zero(), r.one()));
    }
    if r.is_unit(b) {
        return Some(Matrix2::new(a, b, r.one(), r.zero()));
    }
    r.elements().find_map(|c| {
        r.elements().find_map(|d| {
            let m = Matrix2::new(a, b, c, d);
            m.is_invertible(r).then_some(m)
        })
    })
}

/// The point spanned by an admissible pair.
pub fn make_point(r: &Ring, a: Elem, b: Elem) -> Result<Point> {
    if !is_admissible(r, a, b) {
        return Err(Error::NotAdmissible(r.label(a).into(), r.label(b).into()));
    }
    let (a, b) = canonical_pair(r, a, b);
    Ok(Point { a, b })
}

/// Generators of `GL2(R)` used for every orbit computation:
/// `E(t)` for all `t`, and `diag(u, 1)`, `diag(1, u)` for all units.
pub fn gl2_generators(r: &Ring) -> Vec<Matrix2> {
    let mut gens: Vec<Matrix2> = r.elements().map(|t| Matrix2::elementary(r, t)).collect();
    for &u in r.units() {
        gens.push(Matrix2::diag(r, u, r.one()));
        gens.push(Matrix2::diag(r, r.one(), u));
    }
    gens
}

/// Generators of the stabilizer of `R(1,0)`: the lower triangular matrices
/// with unit diagonal.
pub fn infinity_stabilizer_generators(r: &Ring) -> Vec<Matrix2> {
    let mut gens: Vec<Matrix2> = r.elements().map(|c| Matrix2::lower(r, r.one(), c, r.one())).collect();
    for &u in r.units() {
        gens.push(Matrix2::diag(r, u, r.one()));
        gens.push(Matrix2::diag(r, r.one(), u));
    }
    gens
}

/// `p * M` for a point given by any representative.
pub fn act(r: &Ring, p: Point, m: &Matrix2) -> Point {
    let (a, b) = m.row_times(r, p.rep());
    let (a, b) = canonical_pair(r, a, b);
    Point { a, b }
}

/// Whether the stacked representatives of `p` and `q` form an invertible matrix.
pub fn distant(r: &Ring, p: Point, q: Point) -> bool {
    Matrix2::new(p.a, p.b, q.a, q.b).is_invertible(r)
}

/// Points reached from `R(1,0)` by the generators acting on the right.
pub fn orbit_points(r: &Ring) -> Vec<Point> {
    let gens = gl2_generators(r);
    let start = Point::infinity(r);
    let mut seen: HashSet<Point> = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let next = act(r, p, g);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut points: Vec<Point> = seen.into_iter().collect();
    points.sort();
    points
}

/// Unit classes of admissible pairs, by exhaustive scan of `R^2`.
pub fn scan_points(r: &Ring) -> Vec<Point> {
    let mut classes: HashSet<(Elem, Elem)> = HashSet::new();
    for a in r.elements() {
        for b in r.elements() {
            classes.insert(canonical_pair(r, a, b));
        }
    }
    let mut points: Vec<Point> = classes
        .into_iter()
        .filter(|&(a, b)| is_admissible(r, a, b))
        .map(|(a, b)| Point { a, b })
        .collect();
    points.sort();
    points
}

/// All points of `P(R)` together with an index.
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    ring: RingHandle,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl ProjectiveLine {
    /// Enumerates `P(R)` both as the orbit of `R(1,0)` and by the admissible
    /// pair scan, failing if the two disagree.
    pub fn enumerate(ring: RingHandle) -> Result<Self> {
        let orbit = orbit_points(&ring);
        let scan = scan_points(&ring);
        if orbit != scan {
            return Err(Error::MethodDisagreement {
                orbit: orbit.len(),
                scan: scan.len(),
            });
        }
        let index = orbit.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        Ok(Self {
            ring,
            points: orbit,
            index,
        })
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
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

    pub fn index_of(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn infinity(&self) -> Point {
        Point::infinity(&self.ring)
    }

    /// Point with a representative known to be admissible (e.g. an image
    /// under `GL2(R)`), canonicalized without a completion search.
    pub fn point_of(&self, a: Elem, b: Elem) -> Option<Point> {
        let (a, b) = canonical_pair(&self.ring, a, b);
        let p = Point { a, b };
        self.index.contains_key(&p).then_some(p)
    }

    pub fn act(&self, p: Point, m: &Matrix2) -> Point {
        act(&self.ring, p, m)
    }

    pub fn distant(&self, p: Point, q: Point) -> bool {
        distant(&self.ring, p, q)
    }

    /// Residue coordinate `x` of a point `R(x, 1)` distant from `R(1,0)`.
    pub fn coordinate(&self, p: Point) -> Option<Elem> {
        let r = &self.ring;
        let (a, b) = p.rep();
        r.inverse(b).map(|bi| r.mul(bi, a))
    }

    /// The point `R(x, 1)`.
    pub fn affine_point(&self, x: Elem) -> Point {
        let (a, b) = canonical_pair(&self.ring, x, self.ring.one());
        Point { a, b }
    }
}
