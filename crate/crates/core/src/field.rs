//! Finite fields `F_q`, `q = p^k <= 256`, by table lookup.
//!
//! Elements are the integers `0..q`; element `e` stands for the polynomial
//! whose coefficient of `t^i` is the i-th base-p digit of `e`. Extension
//! fields reduce modulo a fixed monic irreducible polynomial:
//! `F_4 = F_2[t]/(t^2+t+1)`, `F_8 = F_2[t]/(t^3+t+1)`,
//! `F_9 = F_3[t]/(t^2+1)`, and otherwise the irreducible polynomial with the
//! smallest encoding (which reproduces those three choices).

use std::fmt;
use std::sync::Arc;

use crate::error::{param, Result};
use crate::words::Color;

pub type Elem = Color;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    inner: Arc<Tables>,
}

#[derive(PartialEq, Eq)]
struct Tables {
    p: usize,
    k: usize,
    q: usize,
    /// Monic modulus, coefficients low to high (length k + 1).
    modulus: Vec<usize>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.k() > 1 {
            write!(f, " mod {:?}", self.inner.modulus)?;
        }
        Ok(())
    }
}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(mut e: usize, p: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for d in out.iter_mut() {
        *d = e % p;
        e /= p;
    }
    out
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues modulo the monic `modulus`.
fn poly_mulmod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let k = modulus.len() - 1;
    let mut prod = vec![0; 2 * k.max(1)];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c != 0 {
            for (i, &m) in modulus.iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + p * p - c * m % p) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

impl FieldSpec {
    /// The field of order `q` with the default modulus.
    pub fn new(q: usize) -> Result<Self> {
        let Some((p, k)) = prime_power(q) else {
            return param(format!("{q} is not a prime power"));
        };
        if q > 256 {
            return param(format!("field order {q} above 256"));
        }
        if k == 1 {
            return FieldSpec::with_modulus(p, &[0, 1]);
        }
        let fixed: Option<&[usize]> = match q {
            4 => Some(&[1, 1, 1]),
            8 => Some(&[1, 1, 0, 1]),
            9 => Some(&[1, 0, 1]),
            _ => None,
        };
        if let Some(m) = fixed {
            return FieldSpec::with_modulus(p, m);
        }
        for low in 0..q {
            let mut m = digits(low, p, k);
            m.push(1);
            if let Ok(f) = FieldSpec::with_modulus(p, &m) {
                return Ok(f);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Builds `F_p[t]/(modulus)`; `modulus` is monic, low to high. Fails
    /// unless `p` is prime and the quotient is a field.
    pub fn with_modulus(p: usize, modulus: &[usize]) -> Result<Self> {
        if prime_power(p) != Some((p, 1)) {
            return param(format!("{p} is not prime"));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return param("modulus must be monic of degree >= 1 with coefficients below p");
        }
        let k = modulus.len() - 1;
        let q = p.pow(k as u32);
        if q > 256 {
            return param(format!("field order {q} above 256"));
        }
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum, p) as Elem;
                mul[a * q + b] = if k == 1 {
                    (a * b % p) as Elem
                } else {
                    undigits(&poly_mulmod(&da, &db, modulus, p), p) as Elem
                };
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                match (1..q).find(|&b| mul[a * q + b] == 1) {
                    Some(b) => inv[a] = b as Elem,
                    None => return param(format!("modulus {modulus:?} is reducible over F_{p}")),
                }
            }
        }
        Ok(FieldSpec {
            inner: Arc::new(Tables {
                p,
                k,
                q,
                modulus: modulus.to_vec(),
                add,
                mul,
                neg,
                inv,
            }),
        })
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.inner.q
    }

    /// Characteristic.
    #[inline]
    pub fn p(&self) -> usize {
        self.inner.p
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.inner.k
    }

    pub fn modulus(&self) -> &[usize] {
        &self.inner.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.inner.add[a as usize * self.inner.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.inner.mul[a as usize * self.inner.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.inner.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.inner.inv[a as usize])
    }

    pub fn dot(&self, a: &[Elem], x: &[Elem]) -> Elem {
        a.iter().zip(x).fold(0, |acc, (&u, &v)| self.add(acc, self.mul(u, v)))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q()).map(|e| e as Elem)
    }
}
