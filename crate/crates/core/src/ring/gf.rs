//! Small Galois fields used as coefficient fields for every ring in the zoo.
//!
//! Elements of `F_q`, `q = p^e`, are polynomials over `F_p` of degree `< e`,
//! indexed by `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. The reduction polynomials
//! are fixed so that indices are reproducible:
//!
//! | q | modulus        |
//! |---|----------------|
//! | 4 | x^2 + x + 1    |
//! | 8 | x^3 + x + 1    |
//! | 9 | x^2 + 1        |

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BaseField {
    p: u8,
    degree: u8,
    q: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    labels: Vec<String>,
}

/// Low-order coefficients `m` of the monic modulus `x^e + sum m_i x^i`.
fn modulus(p: u8, degree: u8) -> Option<&'static [u8]> {
    match (p, degree) {
        (_, 1) => Some(&[]),
        (2, 2) => Some(&[1, 1]),
        (2, 3) => Some(&[1, 1, 0]),
        (3, 2) => Some(&[1, 0]),
        _ => None,
    }
}

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl BaseField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) =
            prime_power(q).ok_or_else(|| Error::UnsupportedParameter(format!("q = {q} is not a prime power")))?;
        if q > 9 {
            return Err(Error::UnsupportedParameter(format!("q = {q} exceeds 9")));
        }
        let (p, e, qq) = (p as u8, e as u8, q as u8);
        let m = modulus(p, e).ok_or_else(|| Error::UnsupportedParameter(format!("no modulus for q = {q}")))?;

        let digits = |x: u8| -> Vec<u8> {
            let mut v = Vec::with_capacity(e as usize);
            let mut x = x;
            for _ in 0..e {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let undigits = |v: &[u8]| -> u8 { v.iter().rev().fold(0u8, |acc, &c| acc * p + c) };

        let n = qq as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for x in 0..qq {
            let dx = digits(x);
            for y in 0..qq {
                let dy = digits(y);
                let s: Vec<u8> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[x as usize * n + y as usize] = undigits(&s);

                let mut prod = vec![0u8; 2 * e as usize];
                for (i, a) in dx.iter().enumerate() {
                    for (j, b) in dy.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                for d in (e as usize..prod.len()).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    prod[d] = 0;
                    for (i, mi) in m.iter().enumerate() {
                        let k = d - e as usize + i;
                        prod[k] = (prod[k] + (p - (c * mi) % p)) % p;
                    }
                }
                mul[x as usize * n + y as usize] = undigits(&prod[..e as usize]);
            }
        }
        let neg: Vec<u8> = (0..qq)
            .map(|x| (0..qq).find(|&y| add[x as usize * n + y as usize] == 0).unwrap())
            .collect();
        let mut inv = vec![0u8; n];
        for x in 1..qq {
            inv[x as usize] = (1..qq)
                .find(|&y| mul[x as usize * n + y as usize] == 1)
                .ok_or_else(|| Error::NotAField(format!("F_{q}: {x} has no inverse")))?;
        }
        let labels = (0..qq).map(|x| poly_label(&digits(x))).collect();

        Ok(Self {
            p,
            degree: e,
            q: qq,
            add,
            mul,
            neg,
            inv,
            labels,
        })
    }

    pub fn order(&self) -> u8 {
        self.q
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    #[inline]
    pub fn add(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize * self.q as usize + y as usize]
    }

    #[inline]
    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * self.q as usize + y as usize]
    }

    #[inline]
    pub fn neg(&self, x: u8) -> u8 {
        self.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: u8, y: u8) -> u8 {
        self.add(x, self.neg(y))
    }

    /// Multiplicative inverse; `x` must be nonzero.
    #[inline]
    pub fn inv(&self, x: u8) -> u8 {
        debug_assert!(x != 0);
        self.inv[x as usize]
    }

    pub fn label(&self, x: u8) -> &str {
        &self.labels[x as usize]
    }

    /// Inverts an `n x n` matrix (row-major) by Gauss-Jordan elimination.
    pub fn invert_matrix(&self, n: usize, m: &[u8]) -> Option<Vec<u8>> {
        let w = 2 * n;
        let mut a = vec![0u8; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(&m[i * n..i * n + n]);
            a[i * w + n + i] = 1;
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * w + col] != 0)?;
            if pivot != col {
                for j in 0..w {
                    a.swap(pivot * w + j, col * w + j);
                }
            }
            let s = self.inv(a[col * w + col]);
            for j in 0..w {
                a[col * w + j] = self.mul(s, a[col * w + j]);
            }
            for r in 0..n {
                let f = a[r * w + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..w {
                    let t = self.mul(f, a[col * w + j]);
                    a[r * w + j] = self.sub(a[r * w + j], t);
                }
            }
        }
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            out[i * n..i * n + n].copy_from_slice(&a[i * w + n..i * w + w]);
        }
        Some(out)
    }
}

fn poly_label(coeffs: &[u8]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}
