//! Dense univariate polynomials over a small scalar field.
//!
//! Coefficients are stored lowest degree first. These helpers only serve the
//! field constructors (reduction and irreducibility testing), so they favour
//! clarity over speed.

use crate::error::{Error, Result};

/// Arithmetic on field elements encoded as integers in `0..order()`.
pub trait Scalars {
    fn order(&self) -> u64;
    fn add(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
}

/// The prime field GF(p) with elements `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField(pub u32);

impl Scalars for PrimeField {
    fn order(&self) -> u64 {
        self.0 as u64
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        // Fermat: a^(p-2)
        let p = self.0 as u64;
        let mut base = a as u64 % p;
        let mut exp = p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u32
    }
}

pub fn trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

/// Remainder of `f` modulo `g` (g nonzero).
pub fn rem<S: Scalars>(f: &[u32], g: &[u32], s: &S) -> Vec<u32> {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = s.inv(g[dg]);
    let mut r = f.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = s.mul(r[dr], lead_inv);
        let shift = dr - dg;
        for (i, &gi) in g[..=dg].iter().enumerate() {
            r[i + shift] = s.sub(r[i + shift], s.mul(c, gi));
        }
        trim(&mut r);
    }
    r
}

pub fn mul<S: Scalars>(a: &[u32], b: &[u32], s: &S) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = s.add(out[i + j], s.mul(ai, bj));
        }
    }
    trim(&mut out);
    out
}

/// Monic polynomial of degree `deg` whose non-leading coefficients are the
/// base-`q` digits of `index` (lowest degree first).
pub fn monic_from_index(deg: usize, mut index: u64, q: u64) -> Vec<u32> {
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push((index % q) as u32);
        index /= q;
    }
    f.push(1);
    f
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=deg/2`. Errors if that would take more than `cap` divisions.
pub fn is_irreducible<S: Scalars>(f: &[u32], s: &S, cap: u64) -> Result<bool> {
    let deg = degree(f).ok_or(Error::ReducibleModulus)?;
    if deg == 0 {
        return Ok(false);
    }
    if deg == 1 {
        return Ok(true);
    }
    let q = s.order();
    let mut total: u128 = 0;
    for d in 1..=deg / 2 {
        total += (q as u128).pow(d as u32);
    }
    if total > cap as u128 {
        return Err(Error::CapExceeded {
            required: total,
            cap,
        });
    }
    for d in 1..=deg / 2 {
        let count = q.pow(d as u32);
        for index in 0..count {
            let g = monic_from_index(d, index, q);
            if degree(&rem(f, &g, s)).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
