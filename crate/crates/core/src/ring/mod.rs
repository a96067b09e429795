//! Finite rings with dense element indices and precomputed operation tables.
//!
//! Every ring in the zoo is realized as a subring of `k x k` matrices over a
//! small Galois field (`k` is 1 for fields and 2 otherwise). The matrix
//! realization drives table construction and lets `2 x 2` matrices over the
//! ring be inverted as `2k x 2k` matrices over the coefficient field.

mod gf;
mod subfield;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gf::{prime_power, BaseField};
pub use subfield::{build_subfield, conjugate_subfield, is_normal_subgroup, normality_witness, Embedding, Subfield};

/// Largest ring order accepted by [`build_ring`].
pub const MAX_RING_ORDER: usize = 81;

/// Shared handle to an immutable ring.
pub type RingHandle = Arc<Ring>;

/// The ring families supported by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum RingSpec {
    FiniteField {
        q: u32,
    },
    /// `F_q[e]` with `e^2 = 0`.
    DualNumbers {
        q: u32,
    },
    Matrix2 {
        q: u32,
    },
    UpperTriangular2 {
        q: u32,
    },
    /// `F_q x F_q`.
    Product {
        q: u32,
    },
}

impl RingSpec {
    pub fn q(&self) -> u32 {
        match *self {
            RingSpec::FiniteField { q }
            | RingSpec::DualNumbers { q }
            | RingSpec::Matrix2 { q }
            | RingSpec::UpperTriangular2 { q }
            | RingSpec::Product { q } => q,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            RingSpec::FiniteField { q } => format!("F{q}"),
            RingSpec::DualNumbers { q } => format!("F{q}[e]"),
            RingSpec::Matrix2 { q } => format!("M2(F{q})"),
            RingSpec::UpperTriangular2 { q } => format!("UT2(F{q})"),
            RingSpec::Product { q } => format!("F{q}xF{q}"),
        }
    }
}

/// A ring element: a dense index into its ring's tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Elem(pub u8);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Matrix realization of one element: row-major, only the leading `k*k`
/// entries are meaningful.
type Rep = [u8; 4];

#[derive(Clone)]
pub struct Ring {
    spec: RingSpec,
    opposite: bool,
    field: BaseField,
    dim: usize,
    reps: Vec<Rep>,
    lookup: HashMap<Rep, Elem>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Option<Elem>>,
    units: Vec<Elem>,
    labels: Vec<String>,
    zero: Elem,
    one: Elem,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("name", &self.name())
            .field("order", &self.order())
            .field("units", &self.units.len())
            .finish()
    }
}

/// The shipped ring zoo: every ring with the subfield its checks run over,
/// smallest first.
pub fn zoo() -> Vec<(RingSpec, Embedding)> {
    use Embedding::*;
    use RingSpec::*;
    vec![
        (FiniteField { q: 4 }, Prime),
        (DualNumbers { q: 2 }, Scalar),
        (Product { q: 2 }, Diagonal),
        (UpperTriangular2 { q: 2 }, Scalar),
        (FiniteField { q: 8 }, Prime),
        (FiniteField { q: 9 }, Prime),
        (DualNumbers { q: 3 }, Scalar),
        (Product { q: 3 }, Diagonal),
        (DualNumbers { q: 4 }, Scalar),
        (Product { q: 4 }, Diagonal),
        (Matrix2 { q: 2 }, Singer),
        (Matrix2 { q: 2 }, Scalar),
        (UpperTriangular2 { q: 3 }, Scalar),
        (Matrix2 { q: 3 }, Singer),
    ]
}

/// Builds the ring described by `spec`.
pub fn build_ring(spec: RingSpec) -> Result<RingHandle> {
    Ring::build(spec, false).map(Arc::new)
}

/// The opposite ring: same elements, reversed multiplication.
pub fn opposite_ring(ring: &Ring) -> RingHandle {
    Arc::new(Ring::build(ring.spec, !ring.opposite).expect("spec already validated"))
}

fn element_reps(spec: RingSpec, field: &BaseField) -> Result<(usize, Vec<Rep>)> {
    let q = field.order();
    let size = match spec {
        RingSpec::FiniteField { .. } => q as usize,
        RingSpec::DualNumbers { .. } | RingSpec::Product { .. } => (q as usize).pow(2),
        RingSpec::UpperTriangular2 { .. } => (q as usize).pow(3),
        RingSpec::Matrix2 { .. } => (q as usize).pow(4),
    };
    if size > MAX_RING_ORDER {
        return Err(Error::UnsupportedParameter(format!(
            "{} has {size} elements, more than {MAX_RING_ORDER}",
            spec.name()
        )));
    }
    let base = q as usize;
    let digit = |i: usize, k: u32| (i / base.pow(k) % base) as u8;
    let reps = (0..size)
        .map(|i| match spec {
            RingSpec::FiniteField { .. } => [i as u8, 0, 0, 0],
            RingSpec::DualNumbers { .. } => {
                let (a, b) = (digit(i, 0), digit(i, 1));
                [a, b, 0, a]
            }
            RingSpec::Product { .. } => [digit(i, 0), 0, 0, digit(i, 1)],
            RingSpec::UpperTriangular2 { .. } => [digit(i, 0), digit(i, 1), 0, digit(i, 2)],
            RingSpec::Matrix2 { .. } => [digit(i, 0), digit(i, 1), digit(i, 2), digit(i, 3)],
        })
        .collect();
    let dim = if matches!(spec, RingSpec::FiniteField { .. }) {
        1
    } else {
        2
    };
    Ok((dim, reps))
}

fn transpose_rep(r: Rep) -> Rep {
    [r[0], r[2], r[1], r[3]]
}

fn wrap(label: &str) -> String {
    if label.contains('+') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

impl Ring {
    fn build(spec: RingSpec, opposite: bool) -> Result<Ring> {
        let field = BaseField::new(spec.q())?;
        let (dim, mut reps) = element_reps(spec, &field)?;
        // The opposite ring embeds into matrices via transposition.
        if opposite && dim == 2 {
            reps.iter_mut().for_each(|r| *r = transpose_rep(*r));
        }
        let n = reps.len();
        let lookup: HashMap<Rep, Elem> = reps.iter().enumerate().map(|(i, r)| (*r, Elem(i as u8))).collect();

        let rep_add = |x: &Rep, y: &Rep| -> Rep {
            let mut s = [0u8; 4];
            for i in 0..4 {
                s[i] = field.add(x[i], y[i]);
            }
            s
        };
        let rep_mul = |x: &Rep, y: &Rep| -> Rep {
            let mut s = [0u8; 4];
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = 0;
                    for k in 0..dim {
                        acc = field.add(acc, field.mul(x[i * dim + k], y[k * dim + j]));
                    }
                    s[i * dim + j] = acc;
                }
            }
            s
        };
        let find = |r: &Rep| -> Result<Elem> {
            lookup
                .get(r)
                .copied()
                .ok_or_else(|| Error::UnsupportedParameter(format!("{} not closed", spec.name())))
        };

        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for x in &reps {
            for y in &reps {
                add.push(find(&rep_add(x, y))?);
                mul.push(find(&rep_mul(x, y))?);
            }
        }
        let zero = find(&[0; 4])?;
        let one = find(&if dim == 1 { [1, 0, 0, 0] } else { [1, 0, 0, 1] })?;
        let neg: Vec<Elem> = (0..n)
            .map(|x| Elem((0..n).find(|&y| add[x * n + y] == zero).unwrap() as u8))
            .collect();
        // Brute-force two-sided inverse scan.
        let inv: Vec<Option<Elem>> = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| mul[x * n + y] == one && mul[y * n + x] == one)
                    .map(|y| Elem(y as u8))
            })
            .collect();
        let units = (0..n).filter(|&x| inv[x].is_some()).map(|x| Elem(x as u8)).collect();

        let labels = reps
            .iter()
            .map(|r| {
                let l = |x: u8| field.label(x).to_string();
                match spec {
                    RingSpec::FiniteField { .. } => l(r[0]),
                    RingSpec::DualNumbers { .. } => {
                        let (a, b) = (r[0], if opposite { r[2] } else { r[1] });
                        match (a, b) {
                            (a, 0) => l(a),
                            (0, 1) => "e".to_string(),
                            (0, b) => format!("{}e", wrap(&l(b))),
                            (a, 1) => format!("{}+e", l(a)),
                            (a, b) => format!("{}+{}e", l(a), wrap(&l(b))),
                        }
                    }
                    RingSpec::Product { .. } => format!("({},{})", l(r[0]), l(r[3])),
                    _ => {
                        let r = if opposite { transpose_rep(*r) } else { *r };
                        format!("[{},{};{},{}]", l(r[0]), l(r[1]), l(r[2]), l(r[3]))
                    }
                }
            })
            .collect();

        Ok(Ring {
            spec,
            opposite,
            field,
            dim,
            reps,
            lookup,
            add,
            mul,
            neg,
            inv,
            units,
            labels,
            zero,
            one,
        })
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn is_opposite(&self) -> bool {
        self.opposite
    }

    pub fn name(&self) -> String {
        if self.opposite {
            format!("{}^op", self.spec.name())
        } else {
            self.spec.name()
        }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn base_field(&self) -> &BaseField {
        &self.field
    }

    /// Side length of the matrix realization.
    pub fn matrix_dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order()).map(|i| Elem(i as u8))
    }

    pub fn units(&self) -> &[Elem] {
        &self.units
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.zero
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.one
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.add[x.index() * self.order() + y.index()]
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x.index() * self.order() + y.index()]
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.neg[x.index()]
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    /// Two-sided inverse, if `x` is a unit.
    #[inline]
    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        self.inv[x.index()]
    }

    #[inline]
    pub fn is_unit(&self, x: Elem) -> bool {
        self.inv[x.index()].is_some()
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|x| self.elements().all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x.index()]
    }

    /// The element `lambda * 1` for a coefficient-field element `lambda`.
    pub fn scalar(&self, lambda: u8) -> Elem {
        let rep = if self.dim == 1 {
            [lambda, 0, 0, 0]
        } else {
            [lambda, 0, 0, lambda]
        };
        self.lookup[&rep]
    }

    pub(crate) fn rep(&self, x: Elem) -> [u8; 4] {
        self.reps[x.index()]
    }

    /// Element with the given matrix realization, if it lies in the ring.
    pub(crate) fn elem_of_rep(&self, rep: [u8; 4]) -> Option<Elem> {
        self.lookup.get(&rep).copied()
    }

    /// The element whose matrix realization is the transpose of `x`'s.
    /// Only meaningful for rings closed under transposition (e.g. `M2(F_q)`).
    pub fn transpose(&self, x: Elem) -> Option<Elem> {
        if self.dim == 1 {
            return Some(x);
        }
        self.elem_of_rep(transpose_rep(self.rep(x)))
    }

    /// Exhaustive check of the ring axioms on the operation tables.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let (z, o) = (self.zero, self.one);
        for x in self.elements() {
            if self.add(x, z) != x || self.mul(x, o) != x || self.mul(o, x) != x {
                return Err(format!("identity fails at {}", self.label(x)));
            }
            if self.add(x, self.neg(x)) != z {
                return Err(format!("negation fails at {}", self.label(x)));
            }
            for y in self.elements() {
                if self.add(x, y) != self.add(y, x) {
                    return Err("addition not commutative".into());
                }
                for w in self.elements() {
                    if self.add(self.add(x, y), w) != self.add(x, self.add(y, w)) {
                        return Err("addition not associative".into());
                    }
                    if self.mul(self.mul(x, y), w) != self.mul(x, self.mul(y, w)) {
                        return Err("multiplication not associative".into());
                    }
                    if self.mul(x, self.add(y, w)) != self.add(self.mul(x, y), self.mul(x, w))
                        || self.mul(self.add(x, y), w) != self.add(self.mul(x, w), self.mul(y, w))
                    {
                        return Err("distributivity fails".into());
                    }
                }
            }
        }
        Ok(())
    }
}
