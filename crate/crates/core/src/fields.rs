//! Finite fields GF(p^k) and extension towers GF(q^m) / GF(q).
//!
//! Field elements are encoded as integers whose base-p (resp. base-q) digits
//! are the coefficients in the polynomial basis, lowest degree first. So the
//! element `1 + x^2` of GF(2^3) is `0b101 = 5`. All observable behaviour is
//! defined in terms of those coefficient lists; the packing is only a storage
//! choice.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{self, PrimeField, Scalars};

/// Largest field order for which full operation tables are built.
const TABLE_LIMIT: u64 = 256;
/// Trial divisions allowed when testing a modulus for irreducibility.
pub const IRREDUCIBILITY_CAP: u64 = 1 << 22;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

#[derive(Debug)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// The finite field GF(p^k) = GF(p)[x] / (modulus).
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    order: u32,
    /// Monic, lowest degree first, length k + 1.
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds GF(p^k). `modulus` is given most significant coefficient first;
    /// when omitted the lexicographically least irreducible monic polynomial
    /// of degree `k` is used.
    pub fn new(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: 0,
            });
        }
        let order = (p as u128).pow(k);
        if order > u32::MAX as u128 {
            return Err(Error::TooLarge(format!("GF({p}^{k}) does not fit in 32 bits")));
        }
        let prime = PrimeField(p as u32);
        let modulus = match modulus {
            Some(msb) => {
                let low = parse_modulus(msb, k as usize, p)?;
                if !poly::is_irreducible(&low, &prime, IRREDUCIBILITY_CAP)? {
                    return Err(Error::ReducibleModulus);
                }
                low
            }
            None => least_irreducible(k as usize, &prime)?,
        };
        let mut field = FieldSpec {
            p: p as u32,
            k,
            order: order as u32,
            modulus,
            tables: None,
        };
        if (order as u64) <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// GF(q) with the default modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, k, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, most significant first.
    pub fn modulus(&self) -> Vec<u32> {
        self.modulus.iter().rev().copied().collect()
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.order
    }

    /// Coefficient list (lowest degree first) of an element.
    pub fn coefficients(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn pack_digits(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    fn raw_add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn raw_neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let c: Vec<u32> = self
            .coefficients(a)
            .into_iter()
            .map(|d| (self.p - d) % self.p)
            .collect();
        self.pack_digits(&c)
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if self.p == 2 {
            let k = self.k;
            let red = self.pack_digits(&self.modulus[..k as usize]) as u64 | (1u64 << k);
            let (mut x, mut y, mut acc) = (a as u64, b as u64, 0u64);
            while y != 0 {
                if y & 1 == 1 {
                    acc ^= x;
                }
                y >>= 1;
                x <<= 1;
                if x >> k & 1 == 1 {
                    x ^= red;
                }
            }
            return acc as u32;
        }
        let prime = PrimeField(self.p);
        let prod = poly::mul(&self.coefficients(a), &self.coefficients(b), &prime);
        let mut r = poly::rem(&prod, &self.modulus, &prime);
        r.resize(self.k as usize, 0);
        self.pack_digits(&r)
    }

    fn raw_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let q = self.order as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.raw_add(a as u32, b as u32) as u16;
                mul[a * q + b] = self.raw_mul(a as u32, b as u32) as u16;
            }
        }
        let neg = (0..q).map(|a| self.raw_neg(a as u32) as u16).collect();
        let mut inv = vec![0u16; q];
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("nonzero element without inverse") as u16;
        }
        Tables { add, mul, neg, inv }
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        match &self.tables {
            Some(t) => {
                let q = self.order as usize;
                let mut base = a;
                let mut acc = 1u32;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = t.mul[acc as usize * q + base as usize] as u32;
                    }
                    base = t.mul[base as usize * q + base as usize] as u32;
                    e >>= 1;
                }
                acc
            }
            None => self.raw_pow(a, e),
        }
    }

    /// Absolute trace to the prime field, returned as an integer in `0..p`.
    pub fn trace_to_prime(&self, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.k {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc < self.p, "trace left the prime field");
        acc
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.elements().any(|y| self.mul(y, y) == a)
    }

    /// Square root in characteristic 2 (Frobenius is bijective there).
    pub fn sqrt_char2(&self, a: u32) -> u32 {
        assert_eq!(self.p, 2);
        self.pow(a, self.order as u64 / 2)
    }

    /// The least `b` (in enumeration order) used for the non-split
    /// representatives: a non-square for odd `p`, and an element outside
    /// `{λ² + λ}` for `p = 2`.
    pub fn nonsplit_parameter(&self) -> u32 {
        if self.p == 2 {
            let image: Vec<u32> = self.elements().map(|l| self.add(self.mul(l, l), l)).collect();
            self.elements()
                .find(|b| !image.contains(b))
                .expect("Artin-Schreier image is a proper subgroup")
        } else {
            self.elements()
                .find(|&b| b != 0 && !self.is_square(b))
                .expect("odd-order field has non-squares")
        }
    }
}

impl Scalars for FieldSpec {
    fn order(&self) -> u64 {
        self.order as u64
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.tables {
            Some(t) => t.add[a as usize * self.order as usize + b as usize] as u32,
            None => self.raw_add(a, b),
        }
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[a as usize * self.order as usize + b as usize] as u32,
            None => self.raw_mul(a, b),
        }
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[a as usize] as u32,
            None => self.raw_neg(a),
        }
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => t.inv[a as usize] as u32,
            None => self.raw_pow(a, self.order as u64 - 2),
        }
    }
}

fn parse_modulus(msb: &[u32], k: usize, size: u64) -> Result<Vec<u32>> {
    if let Some(&bad) = msb.iter().find(|&&c| c as u64 >= size) {
        return Err(Error::CoefficientOutOfRange {
            value: bad as u64,
            size,
        });
    }
    let mut low: Vec<u32> = msb.iter().rev().copied().collect();
    poly::trim(&mut low);
    let found = poly::degree(&low).unwrap_or(0);
    if found != k || low.is_empty() {
        return Err(Error::DegreeMismatch { expected: k, found });
    }
    if low[k] != 1 {
        return Err(Error::NotMonic);
    }
    Ok(low)
}

fn least_irreducible<S: Scalars>(k: usize, s: &S) -> Result<Vec<u32>> {
    let q = s.order();
    let count = (q as u128).pow(k as u32);
    for index in 0..count.min(u64::MAX as u128) as u64 {
        let f = poly::monic_from_index(k, index, q);
        if poly::is_irreducible(&f, s, IRREDUCIBILITY_CAP)? {
            return Ok(f);
        }
    }
    Err(Error::ReducibleModulus)
}

fn join(c: &[u32]) -> String {
    c.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))
        })
        .collect()
}

fn parse_power(s: &str) -> Result<(u64, u32)> {
    let (base, exp) = s.trim().split_once('^').unwrap_or((s, "1"));
    let base = base
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad base in {s:?}")))?;
    let exp = exp
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
    Ok((base, exp))
}

/// `p^k/c_k,...,c_0`, or `p^k` for the default modulus.
impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((head, coeffs)) => {
                let (p, k) = parse_power(head)?;
                FieldSpec::new(p, k, Some(&parse_list(coeffs)?))
            }
            None => {
                let (p, k) = parse_power(s)?;
                FieldSpec::new(p, k, None)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}/{}", self.p, self.k, join(&self.modulus()))
    }
}

/// An element of the top field of a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The extension L = GF(q^m) of F = GF(q) given by an irreducible modulus.
pub struct TowerSpec {
    base: FieldSpec,
    m: u32,
    /// Monic over F, lowest degree first, length m + 1.
    modulus: Vec<u32>,
    q: u64,
    order: u64,
    place: Vec<u64>,
    /// Reduction mask for q = 2 (modulus bits including x^m).
    red: u64,
    /// tr(α^j) for j < m.
    trace_basis: Vec<u32>,
    subfields: OnceLock<Vec<(u32, Vec<Elem>)>>,
}

pub type Tower = Arc<TowerSpec>;

impl fmt::Debug for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerSpec({self})")
    }
}

impl PartialEq for TowerSpec {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for TowerSpec {}

impl TowerSpec {
    /// Builds L = F[x]/(modulus) with `modulus` given most significant
    /// coefficient first (entries are F-element codes). Without a modulus the
    /// lexicographically least irreducible one is chosen.
    pub fn new(base: FieldSpec, m: u32, modulus: Option<&[u32]>) -> Result<Tower> {
        if m == 0 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: 0,
            });
        }
        let q = base.size() as u64;
        let order = (q as u128).pow(m);
        if order >= 1u128 << 63 {
            return Err(Error::TooLarge(format!("GF({q}^{m}) does not fit in 63 bits")));
        }
        let modulus = match modulus {
            Some(msb) => {
                let low = parse_modulus(msb, m as usize, q)?;
                if !poly::is_irreducible(&low, &base, IRREDUCIBILITY_CAP)? {
                    return Err(Error::ReducibleModulus);
                }
                low
            }
            None => least_irreducible(m as usize, &base)?,
        };
        let place: Vec<u64> = (0..=m).map(|i| q.pow(i)).collect();
        let red = if q == 2 {
            modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        let mut tower = TowerSpec {
            base,
            m,
            modulus,
            q,
            order: order as u64,
            place,
            red,
            trace_basis: Vec::new(),
            subfields: OnceLock::new(),
        };
        let mut powers = Vec::with_capacity(m as usize);
        let alpha = tower.alpha();
        let mut x = Elem::ONE;
        for _ in 0..m {
            powers.push(tower.trace_by_frobenius(x));
            x = tower.mul(x, alpha);
        }
        tower.trace_basis = powers
            .into_iter()
            .map(|t| {
                debug_assert!(t.0 < q, "trace must land in the base field");
                t.0 as u32
            })
            .collect();
        if tower.gram_rank() != m as usize {
            return Err(Error::Inconsistent("trace form is degenerate".into()));
        }
        Ok(Arc::new(tower))
    }

    /// Tower over the prime field GF(p).
    pub fn over_prime(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Tower> {
        Self::new(FieldSpec::prime(p)?, m, modulus)
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    /// [L : F].
    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn base_size(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Extension modulus, most significant coefficient first.
    pub fn modulus(&self) -> Vec<u32> {
        self.modulus.iter().rev().copied().collect()
    }

    /// Digit index `i` of the packed encoding.
    #[inline]
    pub fn coord(&self, x: Elem, i: usize) -> u32 {
        if self.q == 2 {
            ((x.0 >> i) & 1) as u32
        } else {
            ((x.0 / self.place[i]) % self.q) as u32
        }
    }

    pub fn coords(&self, x: Elem) -> Vec<u32> {
        (0..self.m as usize).map(|i| self.coord(x, i)).collect()
    }

    /// Element from coordinates (lowest degree first, at most m entries).
    pub fn from_coords(&self, c: &[u32]) -> Result<Elem> {
        if c.len() > self.m as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for an extension of degree {}",
                c.len(),
                self.m
            )));
        }
        if let Some(&bad) = c.iter().find(|&&d| d as u64 >= self.q) {
            return Err(Error::CoefficientOutOfRange {
                value: bad as u64,
                size: self.q,
            });
        }
        Ok(self.pack(c))
    }

    pub(crate) fn pack(&self, c: &[u32]) -> Elem {
        Elem(
            c.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &d)| acc + d as u64 * self.place[i]),
        )
    }

    /// Index of the highest nonzero coordinate.
    #[inline]
    pub fn leading(&self, x: Elem) -> Option<usize> {
        if x.0 == 0 {
            return None;
        }
        if self.q == 2 {
            return Some(63 - x.0.leading_zeros() as usize);
        }
        self.place[..self.m as usize]
            .iter()
            .rposition(|&pl| pl <= x.0)
    }

    pub fn alpha(&self) -> Elem {
        if self.m >= 2 {
            Elem(self.q)
        } else {
            Elem(self.base.neg(self.modulus[0]) as u64)
        }
    }

    /// Embeds a base-field scalar.
    pub fn scalar(&self, c: u32) -> Elem {
        Elem(c as u64)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.base.characteristic() == 2 {
            return Elem(a.0 ^ b.0);
        }
        let mut out = 0u64;
        for i in 0..self.m as usize {
            let d = self.base.add(self.coord(a, i), self.coord(b, i));
            out += d as u64 * self.place[i];
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.base.characteristic() == 2 {
            return a;
        }
        let c: Vec<u32> = (0..self.m as usize)
            .map(|i| self.base.neg(self.coord(a, i)))
            .collect();
        self.pack(&c)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `c · x` for a base-field scalar `c`.
    pub fn scale(&self, c: u32, x: Elem) -> Elem {
        if c == 1 {
            return x;
        }
        if c == 0 {
            return Elem::ZERO;
        }
        let d: Vec<u32> = (0..self.m as usize)
            .map(|i| self.base.mul(c, self.coord(x, i)))
            .collect();
        self.pack(&d)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.q == 2 {
            let m = self.m;
            let (mut x, mut y, mut acc) = (a.0, b.0, 0u64);
            while y != 0 {
                if y & 1 == 1 {
                    acc ^= x;
                }
                y >>= 1;
                x <<= 1;
                if (x >> m) & 1 == 1 {
                    x ^= self.red;
                }
            }
            return Elem(acc);
        }
        let m = self.m as usize;
        let ca = self.coords(a);
        let cb = self.coords(b);
        let f = &self.base;
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &ai) in ca.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in cb.iter().enumerate() {
                if bj != 0 {
                    prod[i + j] = f.add(prod[i + j], f.mul(ai, bj));
                }
            }
        }
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                let t = f.mul(c, self.modulus[i]);
                prod[d - m + i] = f.sub(prod[d - m + i], t);
            }
        }
        self.pack(&prod[..m])
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        self.pow(a, self.order - 2)
    }

    /// x ↦ x^q, the generator of Gal(L/F).
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.q)
    }

    /// Σ_{i<m} x^{q^i}, evaluated directly in L.
    pub fn trace_by_frobenius(&self, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.m {
            acc = self.add(acc, y);
            y = self.frobenius(y);
        }
        acc
    }

    /// tr_{L/F}(x) as a base-field element, via the precomputed values on the
    /// power basis.
    pub fn trace(&self, x: Elem) -> u32 {
        let f = &self.base;
        (0..self.m as usize).fold(0u32, |acc, i| {
            f.add(acc, f.mul(self.coord(x, i), self.trace_basis[i]))
        })
    }

    /// The trace form ⟨x, y⟩ = tr(xy).
    pub fn trace_form(&self, x: Elem, y: Elem) -> u32 {
        self.trace(self.mul(x, y))
    }

    fn gram_rank(&self) -> usize {
        let m = self.m as usize;
        let alpha = self.alpha();
        let powers: Vec<Elem> = (0..m as u64).map(|j| self.pow(alpha, j)).collect();
        let mut g = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                g[(i, j)] = self.trace_form(powers[i], powers[j]);
            }
        }
        g.rank(&self.base)
    }

    /// All elements, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    /// One representative per F-line of L: the element of the line whose
    /// leading nonzero coordinate is 1. With `exclude_base`, the line F·1 is
    /// skipped.
    pub fn enumerate_lines(&self, exclude_base: bool) -> impl Iterator<Item = Elem> + '_ {
        let start = usize::from(exclude_base);
        (0..self.m as usize).flat_map(move |t| {
            let lo = self.place[t];
            let skip = if t == 0 { start as u64 } else { 0 };
            (lo + skip..2 * lo).map(Elem)
        })
    }

    /// Number of lines, (q^m − 1)/(q − 1).
    pub fn line_count(&self) -> u64 {
        (self.order - 1) / (self.q - 1)
    }

    /// Bases of the intermediate fields GF(q^d), one per divisor d of m, in
    /// increasing d. Each basis is in canonical echelon form.
    pub fn subfields(&self) -> &[(u32, Vec<Elem>)] {
        self.subfields.get_or_init(|| {
            divisors(self.m)
                .into_iter()
                .map(|d| (d, self.subfield_basis(d)))
                .collect()
        })
    }

    /// Kernel of x ↦ x^{q^d} − x, an F-linear map on L.
    fn subfield_basis(&self, d: u32) -> Vec<Elem> {
        let m = self.m as usize;
        let alpha = self.alpha();
        let e = self.q.pow(d);
        let mut mat = Matrix::zeros(m, m);
        for j in 0..m {
            let x = self.pow(alpha, j as u64);
            let image = self.sub(self.pow(x, e), x);
            for i in 0..m {
                mat[(i, j)] = self.coord(image, i);
            }
        }
        let kernel = mat.nullspace(&self.base);
        crate::subspaces::echelon_of(self, kernel.iter().map(|v| self.pack(v)))
    }

    /// Parses an element: either a polynomial in `a` such as `a^12+a^2+1` or
    /// `2a+1`, or a comma-separated coordinate list (lowest degree first).
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if s.contains('a') || s.contains('+') {
            let alpha = self.alpha();
            let mut acc = Elem::ZERO;
            for term in s.split('+') {
                let term = term.trim();
                let (coef, mono) = match term.find('a') {
                    Some(pos) => (&term[..pos], Some(&term[pos + 1..])),
                    None => (term, None),
                };
                let coef = coef.trim().trim_end_matches('*');
                let c: u32 = if coef.is_empty() {
                    1
                } else {
                    coef.parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
                };
                if c as u64 >= self.q {
                    return Err(Error::CoefficientOutOfRange {
                        value: c as u64,
                        size: self.q,
                    });
                }
                let exp: u64 = match mono {
                    None => 0,
                    Some(rest) => {
                        let rest = rest.trim();
                        if rest.is_empty() {
                            1
                        } else {
                            rest.trim_start_matches('^')
                                .trim()
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
                        }
                    }
                };
                acc = self.add(acc, self.scale(c, self.pow(alpha, exp)));
            }
            Ok(acc)
        } else {
            self.from_coords(&parse_list(s)?)
        }
    }

    /// Polynomial-in-`a` rendering, highest degree first; `0` for zero.
    pub fn format_elem(&self, x: Elem) -> String {
        let mut terms = Vec::new();
        for i in (0..self.m as usize).rev() {
            let c = self.coord(x, i);
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// `q^m over p^k / c_m,...,c_0`; the base may carry its own modulus as
/// `p^k/c_k,...,c_0`. The extension modulus may be omitted.
impl FromStr for TowerSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let tower = parse_tower(s)?;
        Ok(Arc::try_unwrap(tower).unwrap_or_else(|arc| TowerSpec {
            base: arc.base.clone(),
            m: arc.m,
            modulus: arc.modulus.clone(),
            q: arc.q,
            order: arc.order,
            place: arc.place.clone(),
            red: arc.red,
            trace_basis: arc.trace_basis.clone(),
            subfields: OnceLock::new(),
        }))
    }
}

pub fn parse_tower(s: &str) -> Result<Tower> {
    let (top, rest) = s
        .split_once(" over ")
        .ok_or_else(|| Error::Parse(format!("expected 'q^m over p^k / ...', got {s:?}")))?;
    let (q, m) = parse_power(top)?;
    let (base_str, ext) = match rest.split_once(" / ") {
        Some((b, e)) => (b.trim(), Some(e.trim())),
        None => (rest.trim(), None),
    };
    let base: FieldSpec = base_str.parse()?;
    if base.size() as u64 != q {
        return Err(Error::Parse(format!(
            "top field {q}^{m} does not sit over a base of size {}",
            base.size()
        )));
    }
    match ext {
        Some(coeffs) => TowerSpec::new(base, m, Some(&parse_list(coeffs)?)),
        None => TowerSpec::new(base, m, None),
    }
}

impl fmt::Display for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.base.degree() == 1 {
            format!("{}^1", self.base.characteristic())
        } else {
            self.base.to_string()
        };
        write!(
            f,
            "{}^{} over {} / {}",
            self.q,
            self.m,
            base,
            join(&self.modulus())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf2_19() -> Tower {
        // x^19 + x^14 + x^10 + x^7 + x^2 + x + 1
        let mut msb = vec![0u32; 20];
        for e in [19, 14, 10, 7, 2, 1, 0] {
            msb[19 - e] = 1;
        }
        TowerSpec::over_prime(2, 19, Some(&msb)).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let mut msb = vec![0u32; 20];
        for e in [19, 14, 10, 7, 2, 1, 0] {
            msb[19 - e] = 1;
        }
        let f = FieldSpec::new(2, 19, Some(&msb)).unwrap();
        assert_eq!(f.size(), 1 << 19);

        let f2 = FieldSpec::new(2, 1, None).unwrap();
        assert_eq!(f2.size(), 2);
        assert_eq!(f2.modulus(), vec![1, 0]);

        assert_eq!(
            FieldSpec::new(2, 4, Some(&[1, 0, 1, 0, 1])),
            Err(Error::ReducibleModulus)
        );
        assert_eq!(FieldSpec::new(4, 1, None), Err(Error::NotPrime(4)));
        assert!(matches!(
            FieldSpec::new(2, 3, Some(&[1, 0, 1])),
            Err(Error::DegreeMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn x4_x2_1_factors_by_trial_division() {
        // Exhaustive check that x^4+x^2+1 has the factor x^2+x+1 over GF(2).
        let f2 = PrimeField(2);
        let f = [1, 0, 1, 0, 1];
        let divisors: Vec<u64> = (0..4)
            .filter(|&i| {
                let g = poly::monic_from_index(2, i, 2);
                poly::degree(&poly::rem(&f, &g, &f2)).is_none()
            })
            .collect();
        assert_eq!(divisors, vec![3]);
    }

    #[test]
    fn default_moduli_are_lexicographically_least() {
        let f8 = FieldSpec::new(2, 3, None).unwrap();
        assert_eq!(f8.modulus(), vec![1, 0, 1, 1]);
        let f16 = FieldSpec::new(2, 4, None).unwrap();
        assert_eq!(f16.modulus(), vec![1, 0, 0, 1, 1]);
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        // x^2 + 1 is the least irreducible quadratic over GF(3)
        assert_eq!(f9.modulus(), vec![1, 0, 1]);
    }

    #[test]
    fn field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in ["2^1", "3^1", "5^1", "2^2", "2^3", "3^2", "2^8", "2^12", "7^3"] {
            let f: FieldSpec = spec.parse().unwrap();
            let q = f.size();
            for _ in 0..10_000 {
                let (a, b, c) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)), "{spec}");
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)), "{spec}");
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)), "{spec}");
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "{spec}");
                }
            }
        }
    }

    #[test]
    fn tower_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let towers = [
            TowerSpec::over_prime(2, 7, None).unwrap(),
            TowerSpec::over_prime(3, 4, None).unwrap(),
            TowerSpec::new(FieldSpec::of_order(4).unwrap(), 3, None).unwrap(),
            gf2_19(),
        ];
        for t in &towers {
            for _ in 0..10_000 {
                let a = Elem(rng.gen_range(0..t.order()));
                let b = Elem(rng.gen_range(0..t.order()));
                let c = Elem(rng.gen_range(0..t.order()));
                assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
                assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
                assert_eq!(t.mul(a, b), t.mul(b, a));
                if !a.is_zero() {
                    assert_eq!(t.mul(a, t.inv(a)), Elem::ONE);
                }
            }
        }
    }

    #[test]
    fn frobenius_identity_of_trace_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in [
            TowerSpec::over_prime(2, 6, None).unwrap(),
            TowerSpec::over_prime(3, 3, None).unwrap(),
            TowerSpec::new(FieldSpec::of_order(4).unwrap(), 2, None).unwrap(),
        ] {
            for _ in 0..2000 {
                let x = Elem(rng.gen_range(0..t.order()));
                let y = Elem(rng.gen_range(0..t.order()));
                let z = Elem(rng.gen_range(0..t.order()));
                assert_eq!(t.trace_form(t.mul(x, y), z), t.trace_form(x, t.mul(y, z)));
            }
        }
    }

    #[test]
    fn trace_examples() {
        let gf4 = TowerSpec::over_prime(2, 2, None).unwrap();
        // tr(1) = 1 + 1^2 = 0 in characteristic 2
        assert_eq!(gf4.trace(Elem::ONE), 0);
        assert_eq!(gf4.trace(Elem::ZERO), 0);

        let gf8 = TowerSpec::over_prime(2, 3, None).unwrap();
        assert_eq!(gf8.modulus(), vec![1, 0, 1, 1]);
        let a = gf8.alpha();
        let direct = gf8.add(gf8.add(a, gf8.mul(a, a)), gf8.pow(a, 4));
        assert!(direct.0 < 2);
        assert_eq!(gf8.trace(a) as u64, direct.0);
        // α + α² + α⁴ = α + α² + (α² + α) = 0 for α³ = α + 1
        assert_eq!(gf8.trace(a), 0);
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for t in [
            TowerSpec::over_prime(2, 5, None).unwrap(),
            TowerSpec::over_prime(3, 3, None).unwrap(),
            TowerSpec::new(FieldSpec::of_order(4).unwrap(), 2, None).unwrap(),
        ] {
            let f = t.base();
            let mut hit = vec![false; f.size() as usize];
            for x in t.elements() {
                let tx = t.trace(x);
                hit[tx as usize] = true;
                assert_eq!(t.trace_by_frobenius(x), t.scalar(tx));
            }
            assert!(hit.iter().all(|&h| h));
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..500 {
                let x = Elem(rng.gen_range(0..t.order()));
                let y = Elem(rng.gen_range(0..t.order()));
                let c = rng.gen_range(0..f.size());
                assert_eq!(
                    t.trace(t.add(t.scale(c, x), y)),
                    f.add(f.mul(c, t.trace(x)), t.trace(y))
                );
            }
        }
    }

    #[test]
    fn line_enumeration_counts() {
        let gf8 = TowerSpec::over_prime(2, 3, None).unwrap();
        assert_eq!(gf8.enumerate_lines(false).count(), 7);
        assert_eq!(gf8.enumerate_lines(true).count(), 6);
        let gf9 = TowerSpec::over_prime(3, 2, None).unwrap();
        let reps: Vec<Elem> = gf9.enumerate_lines(false).collect();
        assert_eq!(reps.len(), 4);
        for &r in &reps {
            let lead = gf9.leading(r).unwrap();
            assert_eq!(gf9.coord(r, lead), 1);
        }
        // every nonzero element is a scalar multiple of exactly one representative
        for x in gf9.elements().skip(1) {
            let hits = reps
                .iter()
                .filter(|&&r| (1..3).any(|c| gf9.scale(c, r) == x))
                .count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn text_formats_roundtrip() {
        let t = gf2_19();
        let s = t.to_string();
        assert_eq!(s, "2^19 over 2^1 / 1,0,0,0,0,1,0,0,0,1,0,0,1,0,0,0,0,1,1,1");
        let back = parse_tower(&s).unwrap();
        assert_eq!(*back, *t);
        let x = t.parse_elem("a^12+a^2+1").unwrap();
        assert_eq!(t.format_elem(x), "a^12+a^2+1");
        assert_eq!(t.parse_elem("1,1").unwrap(), t.add(Elem::ONE, t.alpha()));

        let f: FieldSpec = "3^2/1,0,1".parse().unwrap();
        assert_eq!(f.to_string(), "3^2/1,0,1");
        let t4 = parse_tower("4^3 over 2^2/1,1,1").unwrap();
        assert_eq!(t4.degree(), 3);
        assert_eq!(t4.base_size(), 4);
    }

    #[test]
    fn subfields_of_gf64() {
        let t = TowerSpec::over_prime(2, 6, None).unwrap();
        let dims: Vec<(u32, usize)> = t.subfields().iter().map(|(d, b)| (*d, b.len())).collect();
        assert_eq!(dims, vec![(1, 1), (2, 2), (3, 3), (6, 6)]);
    }

    #[test]
    fn nonsplit_parameters() {
        assert_eq!(FieldSpec::prime(3).unwrap().nonsplit_parameter(), 2);
        assert_eq!(FieldSpec::prime(5).unwrap().nonsplit_parameter(), 2);
        assert_eq!(FieldSpec::prime(2).unwrap().nonsplit_parameter(), 1);
        let f4 = FieldSpec::of_order(4).unwrap();
        let b = f4.nonsplit_parameter();
        assert!(f4.elements().all(|l| f4.add(f4.mul(l, l), l) != b));
    }
}
