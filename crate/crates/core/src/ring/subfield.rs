use serde::{Deserialize, Serialize};

use super::{Elem, Ring, RingSpec};
use crate::error::{Error, Result};

/// How a subfield sits inside its ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Embedding {
    /// The subfield generated by 1.
    Prime,
    /// `lambda -> lambda * 1` for the coefficient field `F_q`.
    Scalar,
    /// `F_{q^2}` inside `M2(F_q)` spanned by `I` and the companion matrix of
    /// the fixed irreducible quadratic (`x^2+x+1` for q = 2, `x^2+1` for q = 3).
    Singer,
    /// `{(a, a)}` inside `F_q x F_q`.
    Diagonal,
    /// An explicit element list, e.g. a conjugate `u^-1 K u`.
    Explicit { elements: Vec<Elem> },
}

/// A verified proper subfield `K` of a ring `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subfield {
    elements: Vec<Elem>,
    member: Vec<bool>,
    embedding: Embedding,
}

impl Subfield {
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.member[x.index()]
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }
}

fn singer_companion(q: u32) -> Option<[u8; 4]> {
    // Companion matrix [[0,1],[-c0,-c1]] of x^2 + c1 x + c0.
    match q {
        2 => Some([0, 1, 1, 1]),
        3 => Some([0, 1, 2, 0]),
        _ => None,
    }
}

fn candidate_elements(ring: &Ring, embedding: &Embedding) -> Result<Vec<Elem>> {
    let q = ring.base_field().order();
    let spec = ring.spec();
    let unsupported = |what: &str| Error::UnsupportedParameter(format!("{what} embedding into {}", ring.name()));
    Ok(match embedding {
        Embedding::Prime => {
            let mut out = vec![ring.zero()];
            let mut x = ring.one();
            while x != ring.zero() {
                out.push(x);
                x = ring.add(x, ring.one());
            }
            out
        }
        Embedding::Scalar => {
            if matches!(spec, RingSpec::FiniteField { .. }) {
                return Err(unsupported("scalar"));
            }
            (0..q).map(|l| ring.scalar(l)).collect()
        }
        Embedding::Diagonal => {
            if !matches!(spec, RingSpec::Product { .. }) {
                return Err(unsupported("diagonal"));
            }
            (0..q).map(|l| ring.scalar(l)).collect()
        }
        Embedding::Singer => {
            let c = match spec {
                RingSpec::Matrix2 { q } => singer_companion(q).ok_or_else(|| unsupported("Singer"))?,
                _ => return Err(unsupported("Singer")),
            };
            let f = ring.base_field();
            let c = if ring.is_opposite() {
                [c[0], c[2], c[1], c[3]]
            } else {
                c
            };
            let mut out = Vec::new();
            for a in 0..q {
                for b in 0..q {
                    let rep = [
                        f.add(a, f.mul(b, c[0])),
                        f.mul(b, c[1]),
                        f.mul(b, c[2]),
                        f.add(a, f.mul(b, c[3])),
                    ];
                    out.push(ring.elem_of_rep(rep).ok_or_else(|| unsupported("Singer"))?);
                }
            }
            out
        }
        Embedding::Explicit { elements } => {
            if let Some(bad) = elements.iter().find(|e| e.index() >= ring.order()) {
                return Err(Error::NotAField(format!("element index {} out of range", bad.0)));
            }
            elements.clone()
        }
    })
}

/// Builds and verifies, by brute force, the subfield described by `embedding`.
pub fn build_subfield(ring: &Ring, embedding: Embedding) -> Result<Subfield> {
    let mut elements = candidate_elements(ring, &embedding)?;
    elements.sort();
    elements.dedup();
    let mut member = vec![false; ring.order()];
    for &e in &elements {
        member[e.index()] = true;
    }
    verify_field(ring, &elements, &member)?;
    if elements.len() == ring.order() {
        return Err(Error::NotProper);
    }
    Ok(Subfield {
        elements,
        member,
        embedding,
    })
}

fn verify_field(ring: &Ring, elements: &[Elem], member: &[bool]) -> Result<()> {
    let fail = |msg: String| Err(Error::NotAField(msg));
    if !member[ring.zero().index()] || !member[ring.one().index()] {
        return fail("must contain 0 and 1".into());
    }
    for &x in elements {
        if !member[ring.neg(x).index()] {
            return fail(format!("not closed under negation at {}", ring.label(x)));
        }
        if x != ring.zero() {
            match ring.inverse(x) {
                Some(y) if member[y.index()] => {}
                _ => return fail(format!("{} has no inverse in the subset", ring.label(x))),
            }
        }
        for &y in elements {
            if !member[ring.add(x, y).index()] || !member[ring.mul(x, y).index()] {
                return fail(format!("not closed at ({}, {})", ring.label(x), ring.label(y)));
            }
        }
    }
    Ok(())
}

/// `u^-1 K u`, verified as a subfield.
pub fn conjugate_subfield(ring: &Ring, k: &Subfield, u: Elem) -> Result<Subfield> {
    let ui = ring
        .inverse(u)
        .ok_or_else(|| Error::NotAUnit(ring.label(u).to_string()))?;
    let elements = k.elements().iter().map(|&x| ring.mul(ring.mul(ui, x), u)).collect();
    build_subfield(ring, Embedding::Explicit { elements })
}

/// Whether `u^-1 K* u = K*` for every unit `u`.
pub fn is_normal_subgroup(ring: &Ring, k: &Subfield) -> bool {
    normality_witness(ring, k).is_none()
}

/// The least unit `u` with `u^-1 K u != K`, if any.
pub fn normality_witness(ring: &Ring, k: &Subfield) -> Option<Elem> {
    ring.units().iter().copied().find(|&u| {
        let ui = ring.inverse(u).unwrap();
        k.elements().iter().any(|&x| !k.contains(ring.mul(ring.mul(ui, x), u)))
    })
}
