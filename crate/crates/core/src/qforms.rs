//! Quadratic forms 𝒬_n and symmetric bilinear forms 𝒮_n over F_q: types,
//! weights, zero counts and the character pairing.
//!
//! A quadratic form is stored by its coefficients a_ij (i ≤ j) in the order
//! (1,1), (1,2), …, (1,n), (2,2), …, (n,n). Forms are also indexed by the
//! integer whose base-q digits are those coefficients, first pair lowest.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::FieldSpec;
use crate::linalg::Matrix;
use crate::poly::Scalars;

type WeightTables = Mutex<HashMap<(usize, String), Arc<Vec<u8>>>>;

/// Default enumeration budget for brute-force routines.
pub const DEFAULT_CAP: u64 = 1 << 24;

/// Orbit label of a form: `Zero`, or rank r with e ∈ {−1, 0, 1}, e = 0
/// exactly when r is odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormType {
    Zero,
    Nonzero { rank: u32, e: i32 },
}

impl FormType {
    pub fn new(rank: u32, e: i32) -> Result<Self> {
        let t = FormType::Nonzero { rank, e };
        if rank == 0 || !(-1..=1).contains(&e) || (rank % 2 == 1) != (e == 0) {
            return Err(Error::InvalidType(t.to_string()));
        }
        Ok(t)
    }

    pub fn rank(&self) -> u32 {
        match self {
            FormType::Zero => 0,
            FormType::Nonzero { rank, .. } => *rank,
        }
    }

    pub fn e(&self) -> i32 {
        match self {
            FormType::Zero => 0,
            FormType::Nonzero { e, .. } => *e,
        }
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        match *self {
            FormType::Zero => true,
            FormType::Nonzero { rank, e } => {
                rank >= 1 && rank as usize <= n && (rank % 2 == 1) == (e == 0) && e.abs() <= 1
            }
        }
    }

    /// (r − e + 1)/2; zero for the zero form.
    pub fn weight(&self) -> u32 {
        match *self {
            FormType::Zero => 0,
            FormType::Nonzero { rank, e } => ((rank as i32 - e + 1) / 2) as u32,
        }
    }

    fn key(&self) -> (u32, i32) {
        match *self {
            FormType::Zero => (0, 0),
            FormType::Nonzero { rank, e } => (rank, -e),
        }
    }
}

/// By rank, then split before non-split.
impl Ord for FormType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for FormType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormType::Zero => write!(f, "0"),
            FormType::Nonzero { rank, e } => write!(f, "({rank},{e})"),
        }
    }
}

impl FromStr for FormType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(FormType::Zero);
        }
        let inner = s.trim_start_matches('(').trim_end_matches(')');
        let (r, e) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad form type {s:?}")))?;
        let r = r.trim().parse().map_err(|_| Error::Parse(format!("bad rank in {s:?}")))?;
        let e = e.trim().parse().map_err(|_| Error::Parse(format!("bad e in {s:?}")))?;
        FormType::new(r, e)
    }
}

impl Serialize for FormType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FormType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub n: usize,
    pub q: u64,
    pub coeffs: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymBilinearForm {
    pub n: usize,
    pub q: u64,
    /// Row-major n × n.
    pub matrix: Vec<u32>,
}

impl SymBilinearForm {
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.matrix[i * self.n + j]
    }
}

/// The exponent b(Q,B) ∈ F_q and the value u = tr_{F_q/F_p}(b) ∈ F_p; the
/// character value is ζ_p^u.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub b: u32,
    pub u: u32,
}

/// The spaces 𝒬_n and 𝒮_n over a fixed F_q.
#[derive(Debug, Clone)]
pub struct FormSpace {
    field: FieldSpec,
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PartialEq for FormSpace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field
    }
}

impl FormSpace {
    pub fn new(n: usize, q: u64) -> Result<Self> {
        Ok(Self::with_field(n, FieldSpec::of_order(q)?))
    }

    pub fn with_field(n: usize, field: FieldSpec) -> Self {
        assert!(n >= 1, "need at least one variable");
        let pairs = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        FormSpace { field, n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.field.size() as u64
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// n(n+1)/2.
    pub fn num_coeffs(&self) -> usize {
        self.pairs.len()
    }

    /// Coefficient pairs (0-based, i ≤ j) in storage order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    /// q^{n(n+1)/2}.
    pub fn form_count(&self) -> u128 {
        (self.q() as u128).pow(self.num_coeffs() as u32)
    }

    fn check_cap(&self, required: u128, cap: u64) -> Result<()> {
        if required > cap as u128 {
            Err(Error::CapExceeded { required, cap })
        } else {
            Ok(())
        }
    }

    fn digits(&self, mut idx: u64) -> Vec<u32> {
        let q = self.q();
        (0..self.num_coeffs())
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> u64 {
        let q = self.q();
        d.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    pub fn zero_form(&self) -> QuadraticForm {
        self.form_from_coeffs(vec![0; self.num_coeffs()])
    }

    pub fn form_from_coeffs(&self, coeffs: Vec<u32>) -> QuadraticForm {
        assert_eq!(coeffs.len(), self.num_coeffs());
        QuadraticForm {
            n: self.n,
            q: self.q(),
            coeffs,
        }
    }

    pub fn form(&self, idx: u64) -> QuadraticForm {
        self.form_from_coeffs(self.digits(idx))
    }

    pub fn index(&self, f: &QuadraticForm) -> u64 {
        self.undigits(&f.coeffs)
    }

    /// Symmetric form with upper-triangle entries given by the digits of
    /// `idx` (same pair order as quadratic forms).
    pub fn sbform(&self, idx: u64) -> SymBilinearForm {
        self.sbform_from_upper(&self.digits(idx))
    }

    pub fn sbform_from_upper(&self, upper: &[u32]) -> SymBilinearForm {
        let n = self.n;
        let mut matrix = vec![0u32; n * n];
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            matrix[i * n + j] = upper[k];
            matrix[j * n + i] = upper[k];
        }
        SymBilinearForm {
            n,
            q: self.q(),
            matrix,
        }
    }

    pub fn sb_upper(&self, b: &SymBilinearForm) -> Vec<u32> {
        self.pairs.iter().map(|&(i, j)| b.get(i, j)).collect()
    }

    pub fn sb_index(&self, b: &SymBilinearForm) -> u64 {
        self.undigits(&self.sb_upper(b))
    }

    pub fn sbform_from_matrix(&self, matrix: Vec<u32>) -> Result<SymBilinearForm> {
        let n = self.n;
        if matrix.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                matrix.len()
            )));
        }
        if let Some(&bad) = matrix.iter().find(|&&c| c as u64 >= self.q()) {
            return Err(Error::CoefficientOutOfRange {
                value: bad as u64,
                size: self.q(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i * n + j] != matrix[j * n + i] {
                    return Err(Error::Parse("matrix is not symmetric".into()));
                }
            }
        }
        Ok(SymBilinearForm {
            n,
            q: self.q(),
            matrix,
        })
    }

    fn check_q(&self, f: &QuadraticForm) -> Result<()> {
        if f.n != self.n || f.q != self.q() || f.coeffs.len() != self.num_coeffs() {
            return Err(Error::DimensionMismatch(format!(
                "form over F_{}^{} in a space over F_{}^{}",
                f.q,
                f.n,
                self.q(),
                self.n
            )));
        }
        Ok(())
    }

    fn check_b(&self, b: &SymBilinearForm) -> Result<()> {
        if b.n != self.n || b.q != self.q() || b.matrix.len() != self.n * self.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix over F_{}^{} in a space over F_{}^{}",
                b.q,
                b.n,
                self.q(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &QuadraticForm, b: &QuadraticForm) -> QuadraticForm {
        let f = &self.field;
        self.form_from_coeffs(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.add(x, y)).collect())
    }

    pub fn sub(&self, a: &QuadraticForm, b: &QuadraticForm) -> QuadraticForm {
        let f = &self.field;
        self.form_from_coeffs(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.sub(x, y)).collect())
    }

    pub fn scale(&self, c: u32, a: &QuadraticForm) -> QuadraticForm {
        let f = &self.field;
        self.form_from_coeffs(a.coeffs.iter().map(|&x| f.mul(c, x)).collect())
    }

    /// Index of a + b, computed digitwise.
    pub fn add_index(&self, a: u64, b: u64) -> u64 {
        if self.field.characteristic() == 2 {
            return a ^ b;
        }
        let f = &self.field;
        let q = self.q();
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            let d = f.add((a % q) as u32, (b % q) as u32);
            out += d as u64 * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out
    }

    pub fn eval(&self, f: &QuadraticForm, x: &[u32]) -> u32 {
        let k = &self.field;
        self.pairs
            .iter()
            .zip(&f.coeffs)
            .filter(|(_, &c)| c != 0)
            .fold(0, |acc, (&(i, j), &c)| k.add(acc, k.mul(c, k.mul(x[i], x[j]))))
    }

    /// Gram matrix of B_Q(x,y) = Q(x+y) − Q(x) − Q(y).
    pub fn polar(&self, f: &QuadraticForm) -> Matrix {
        let k = &self.field;
        let mut m = Matrix::zeros(self.n, self.n);
        for (&(i, j), &c) in self.pairs.iter().zip(&f.coeffs) {
            if i == j {
                m[(i, i)] = k.add(c, c);
            } else {
                m[(i, j)] = c;
                m[(j, i)] = c;
            }
        }
        m
    }

    /// Basis of Rad_Q = {x : Q(x) = 0 and B_Q(x, ·) = 0}.
    pub fn radical(&self, f: &QuadraticForm) -> Vec<Vec<u32>> {
        let k = &self.field;
        let kernel = self.polar(f).nullspace(k);
        if k.characteristic() != 2 {
            return kernel;
        }
        // On ker B_Q the form is x ↦ (Σ c_i √Q(k_i))², so the radical is the
        // kernel of a linear functional.
        let roots: Vec<u32> = kernel.iter().map(|v| k.sqrt_char2(self.eval(f, v))).collect();
        let Some(j) = roots.iter().position(|&r| r != 0) else {
            return kernel;
        };
        let inv = k.inv(roots[j]);
        (0..kernel.len())
            .filter(|&i| i != j)
            .map(|i| {
                let c = k.mul(roots[i], inv);
                kernel[i]
                    .iter()
                    .zip(&kernel[j])
                    .map(|(&a, &b)| k.sub(a, k.mul(c, b)))
                    .collect()
            })
            .collect()
    }

    pub fn qform_type(&self, f: &QuadraticForm) -> Result<FormType> {
        self.qform_type_with_cap(f, DEFAULT_CAP)
    }

    /// Rank from the radical; for even rank, e from the number of zeros of
    /// Q on a complement of the radical (q^{r−1} + e q^{r/2−1}(q−1)).
    pub fn qform_type_with_cap(&self, f: &QuadraticForm, cap: u64) -> Result<FormType> {
        self.check_q(f)?;
        let k = &self.field;
        let rad = self.radical(f);
        let r = self.n - rad.len();
        if r == 0 {
            return Ok(FormType::Zero);
        }
        if r % 2 == 1 {
            return FormType::new(r as u32, 0);
        }
        let q = self.q();
        self.check_cap((q as u128).pow(r as u32), cap)?;
        let mut rm = Matrix::from_rows(self.n, &rad);
        let pivots = rm.rref_in_place(k);
        let complement: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        debug_assert_eq!(complement.len(), r);
        let mut zeros: u64 = 0;
        let mut x = vec![0u32; self.n];
        for idx in 0..q.pow(r as u32) {
            let mut rest = idx;
            for &c in &complement {
                x[c] = (rest % q) as u32;
                rest /= q;
            }
            if self.eval(f, &x) == 0 {
                zeros += 1;
            }
        }
        let base = q.pow(r as u32 - 1);
        let e = match zeros.cmp(&base) {
            Ordering::Greater => 1,
            Ordering::Less => -1,
            Ordering::Equal => {
                return Err(Error::Inconsistent("even-rank form with odd zero count".into()))
            }
        };
        debug_assert_eq!(
            zeros as i128,
            base as i128 + e as i128 * (q as i128).pow(r as u32 / 2 - 1) * (q as i128 - 1)
        );
        FormType::new(r as u32, e)
    }

    /// Congruence type: for odd p the type of x ↦ xᵀBx; for p = 2 odd rank
    /// gives e = 0, and even rank is split exactly when B is alternating.
    pub fn sbform_type(&self, b: &SymBilinearForm) -> Result<FormType> {
        self.check_b(b)?;
        let k = &self.field;
        let n = self.n;
        if k.characteristic() == 2 {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = b.get(i, j);
                }
            }
            let r = m.rank(k) as u32;
            if r == 0 {
                return Ok(FormType::Zero);
            }
            if r % 2 == 1 {
                return FormType::new(r, 0);
            }
            let alternating = (0..n).all(|i| b.get(i, i) == 0);
            return FormType::new(r, if alternating { 1 } else { -1 });
        }
        let two = k.add(1, 1);
        let coeffs = self
            .pairs
            .iter()
            .map(|&(i, j)| if i == j { b.get(i, i) } else { k.mul(two, b.get(i, j)) })
            .collect();
        self.qform_type(&self.form_from_coeffs(coeffs))
    }

    pub fn weight(&self, f: &QuadraticForm) -> Result<u32> {
        Ok(self.qform_type(f)?.weight())
    }

    /// Least k with Q a sum of k products of linear forms, from a cached
    /// breadth-first search over all of 𝒬_n.
    pub fn weight_brute(&self, f: &QuadraticForm) -> Result<u32> {
        self.check_q(f)?;
        let table = self.weight_table(DEFAULT_CAP)?;
        Ok(table[self.index(f) as usize] as u32)
    }

    /// Product ℓℓ' of two linear forms.
    pub fn product_of_linear(&self, l: &[u32], lp: &[u32]) -> QuadraticForm {
        let k = &self.field;
        let coeffs = self
            .pairs
            .iter()
            .map(|&(i, j)| {
                if i == j {
                    k.mul(l[i], lp[i])
                } else {
                    k.add(k.mul(l[i], lp[j]), k.mul(l[j], lp[i]))
                }
            })
            .collect();
        self.form_from_coeffs(coeffs)
    }

    fn vector(&self, mut idx: u64) -> Vec<u32> {
        let q = self.q();
        (0..self.n)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect()
    }

    fn weight_table(&self, cap: u64) -> Result<Arc<Vec<u8>>> {
        static TABLES: OnceLock<WeightTables> = OnceLock::new();
        let key = (self.n, self.field.to_string());
        let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let total = self.form_count();
        self.check_cap(total, cap)?;
        let q = self.q();
        let vectors = q.pow(self.n as u32);
        let mut is_product = vec![false; total as usize];
        for a in 0..vectors {
            let l = self.vector(a);
            for b in a..vectors {
                let p = self.product_of_linear(&l, &self.vector(b));
                is_product[self.index(&p) as usize] = true;
            }
        }
        is_product[0] = false;
        let products: Vec<u64> = (0..total as u64).filter(|&i| is_product[i as usize]).collect();
        let mut dist = vec![u8::MAX; total as usize];
        dist[0] = 0;
        let mut frontier = vec![0u64];
        let mut level = 0u8;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &x in &frontier {
                for &p in &products {
                    let y = self.add_index(x, p) as usize;
                    if dist[y] == u8::MAX {
                        dist[y] = level;
                        next.push(y as u64);
                    }
                }
            }
            frontier = next;
        }
        let table = Arc::new(dist);
        tables.lock().unwrap().insert(key, table.clone());
        Ok(table)
    }

    /// Z_{n,t} = q^{n−1} + e q^{n−r/2−1}(q − 1), and q^n for the zero type.
    pub fn zero_count(&self, t: FormType) -> Result<u128> {
        zero_count(self.n, self.q(), t)
    }

    pub fn zero_count_brute(&self, f: &QuadraticForm) -> Result<u128> {
        self.check_q(f)?;
        let q = self.q();
        let total = (q as u128).pow(self.n as u32);
        self.check_cap(total, DEFAULT_CAP)?;
        Ok((0..total as u64)
            .filter(|&i| self.eval(f, &self.vector(i)) == 0)
            .count() as u128)
    }

    /// b(Q,B) = Σ_{i≤j} a_ij b_ij.
    pub fn pairing(&self, f: &QuadraticForm, b: &SymBilinearForm) -> Result<Pairing> {
        self.check_q(f)?;
        self.check_b(b)?;
        let k = &self.field;
        let e = self
            .pairs
            .iter()
            .zip(&f.coeffs)
            .fold(0, |acc, (&(i, j), &a)| k.add(acc, k.mul(a, b.get(i, j))));
        Ok(Pairing {
            b: e,
            u: k.trace_to_prime(e),
        })
    }

    /// x ↦ a·Q(ux) for u ∈ GL(n, q) given row-major.
    pub fn act_q(&self, f: &QuadraticForm, a: u32, u: &[u32]) -> QuadraticForm {
        let k = &self.field;
        let n = self.n;
        let mut out = vec![0u32; self.num_coeffs()];
        for (&(i, j), &c) in self.pairs.iter().zip(&f.coeffs) {
            if c == 0 {
                continue;
            }
            let c = k.mul(a, c);
            // c · (Σ_k u_ik x_k)(Σ_l u_jl x_l)
            for kk in 0..n {
                let uik = u[i * n + kk];
                if uik == 0 {
                    continue;
                }
                for l in 0..n {
                    let ujl = u[j * n + l];
                    if ujl == 0 {
                        continue;
                    }
                    let idx = self.pair_index(kk, l);
                    out[idx] = k.add(out[idx], k.mul(c, k.mul(uik, ujl)));
                }
            }
        }
        self.form_from_coeffs(out)
    }

    /// B ↦ a·hᵀBh.
    pub fn act_b(&self, b: &SymBilinearForm, a: u32, h: &[u32]) -> SymBilinearForm {
        let k = &self.field;
        let n = self.n;
        let mut bh = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                bh[i * n + j] = (0..n).fold(0, |acc, l| k.add(acc, k.mul(b.get(i, l), h[l * n + j])));
            }
        }
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).fold(0, |acc, l| k.add(acc, k.mul(h[l * n + i], bh[l * n + j])));
                out[i * n + j] = k.mul(a, v);
            }
        }
        SymBilinearForm {
            n,
            q: self.q(),
            matrix: out,
        }
    }

    pub fn transpose(&self, u: &[u32]) -> Vec<u32> {
        let n = self.n;
        (0..n * n).map(|idx| u[(idx % n) * n + idx / n]).collect()
    }

    /// All of GL(n, q), row-major, in index order.
    pub fn gl(&self, cap: u64) -> Result<Vec<Vec<u32>>> {
        let q = self.q();
        let n = self.n;
        let total = (q as u128).pow((n * n) as u32);
        self.check_cap(total, cap)?;
        let k = &self.field;
        let mut out = Vec::new();
        for idx in 0..total as u64 {
            let mut rest = idx;
            let entries: Vec<u32> = (0..n * n)
                .map(|_| {
                    let d = (rest % q) as u32;
                    rest /= q;
                    d
                })
                .collect();
            let rows: Vec<Vec<u32>> = entries.chunks(n).map(|r| r.to_vec()).collect();
            if Matrix::from_rows(n, &rows).rank(k) == n {
                out.push(entries);
            }
        }
        Ok(out)
    }

    /// |GL(n, q)| = Π (q^n − q^i).
    pub fn gl_order(&self) -> u128 {
        let q = self.q() as u128;
        let n = self.n as u32;
        (0..n).map(|i| q.pow(n) - q.pow(i)).product()
    }

    /// Valid types for this n, in increasing order.
    pub fn all_types(&self) -> Vec<FormType> {
        all_types(self.n)
    }

    /// Canonical quadratic form of a type: hyperbolic pairs x_{2i−1}x_{2i},
    /// then x_r² for odd r or an anisotropic plane for e = −1.
    pub fn q_representative(&self, t: FormType) -> Result<QuadraticForm> {
        if !t.is_valid_for(self.n) {
            return Err(Error::InvalidType(t.to_string()));
        }
        let mut c = vec![0u32; self.num_coeffs()];
        if t == FormType::Zero {
            return Ok(self.form_from_coeffs(c));
        }
        let (r, e) = (t.rank() as usize, t.e());
        let k = &self.field;
        let hyperbolic = match e {
            0 => (r - 1) / 2,
            1 => r / 2,
            _ => r / 2 - 1,
        };
        for i in 0..hyperbolic {
            c[self.pair_index(2 * i, 2 * i + 1)] = 1;
        }
        match e {
            0 => c[self.pair_index(r - 1, r - 1)] = 1,
            -1 => {
                let b = k.nonsplit_parameter();
                c[self.pair_index(r - 2, r - 2)] = 1;
                if k.characteristic() == 2 {
                    c[self.pair_index(r - 2, r - 1)] = 1;
                    c[self.pair_index(r - 1, r - 1)] = b;
                } else {
                    c[self.pair_index(r - 1, r - 1)] = k.neg(b);
                }
            }
            _ => {}
        }
        Ok(self.form_from_coeffs(c))
    }

    /// Canonical symmetric matrix of a type.
    pub fn b_representative(&self, t: FormType) -> Result<SymBilinearForm> {
        if !t.is_valid_for(self.n) {
            return Err(Error::InvalidType(t.to_string()));
        }
        let n = self.n;
        let k = &self.field;
        let mut m = vec![0u32; n * n];
        let r = t.rank() as usize;
        if k.characteristic() == 2 {
            if t.e() == 1 {
                for i in 0..r / 2 {
                    m[2 * i * n + 2 * i + 1] = 1;
                    m[(2 * i + 1) * n + 2 * i] = 1;
                }
            } else {
                for i in 0..r {
                    m[i * n + i] = 1;
                }
            }
        } else {
            // Symmetric matrix of the quadratic representative.
            let qr = self.q_representative(t)?;
            let half = k.inv(k.add(1, 1));
            for (&(i, j), &c) in self.pairs.iter().zip(&qr.coeffs) {
                if i == j {
                    m[i * n + i] = c;
                } else {
                    m[i * n + j] = k.mul(c, half);
                    m[j * n + i] = k.mul(c, half);
                }
            }
        }
        Ok(SymBilinearForm {
            n,
            q: self.q(),
            matrix: m,
        })
    }

    pub fn format_qform(&self, f: &QuadraticForm) -> String {
        let mut s = format!("n={} q={}", self.n, self.q());
        for (&(i, j), &c) in self.pairs.iter().zip(&f.coeffs) {
            if c != 0 {
                s.push_str(&format!("; {},{}:{}", i + 1, j + 1, c));
            }
        }
        s
    }

    pub fn format_sbform(&self, b: &SymBilinearForm) -> String {
        let entries: Vec<String> = b.matrix.iter().map(|c| c.to_string()).collect();
        format!("n={} q={}; {}", self.n, self.q(), entries.join(","))
    }
}

pub fn all_types(n: usize) -> Vec<FormType> {
    let mut out = vec![FormType::Zero];
    for r in 1..=n as u32 {
        if r % 2 == 1 {
            out.push(FormType::Nonzero { rank: r, e: 0 });
        } else {
            out.push(FormType::Nonzero { rank: r, e: 1 });
            out.push(FormType::Nonzero { rank: r, e: -1 });
        }
    }
    out
}

/// Z_{n,t}; `UnsupportedType` if t is not valid for n.
pub fn zero_count(n: usize, q: u64, t: FormType) -> Result<u128> {
    if !t.is_valid_for(n) {
        return Err(Error::InvalidType(t.to_string()));
    }
    let q = q as i128;
    let n = n as u32;
    let z = match t {
        FormType::Zero => q.pow(n),
        FormType::Nonzero { rank, e } => {
            let twist = if rank % 2 == 0 {
                e as i128 * q.pow(n - rank / 2 - 1) * (q - 1)
            } else {
                0
            };
            q.pow(n - 1) + twist
        }
    };
    Ok(z as u128)
}

fn parse_header(s: &str) -> Result<(FormSpace, Vec<String>)> {
    let mut parts = s.split(';').map(|p| p.trim().to_string());
    let head = parts.next().unwrap_or_default();
    let mut n = None;
    let mut q = None;
    for tok in head.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("q=") {
            q = v.parse().ok();
        } else {
            return Err(Error::Parse(format!("unexpected token {tok:?}")));
        }
    }
    let (n, q): (usize, u64) = n
        .zip(q)
        .ok_or_else(|| Error::Parse(format!("expected 'n=.. q=..' header in {s:?}")))?;
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    Ok((FormSpace::new(n, q)?, parts.filter(|p| !p.is_empty()).collect()))
}

/// Parses `n=3 q=2; 1,2:1; 3,3:1` (1-based pairs, absent entries zero).
pub fn parse_qform(s: &str) -> Result<(FormSpace, QuadraticForm)> {
    let (space, terms) = parse_header(s)?;
    let mut c = vec![0u32; space.num_coeffs()];
    for term in terms {
        let (ij, v) = term
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected i,j:c, got {term:?}")))?;
        let (i, j) = ij
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected i,j, got {ij:?}")))?;
        let parse = |x: &str| -> Result<usize> {
            x.trim().parse().map_err(|_| Error::Parse(format!("bad index {x:?}")))
        };
        let (i, j) = (parse(i)?, parse(j)?);
        if i == 0 || j == 0 || i > space.n() || j > space.n() {
            return Err(Error::DimensionMismatch(format!("index ({i},{j}) outside 1..={}", space.n())));
        }
        let v: u32 = v.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {v:?}")))?;
        if v as u64 >= space.q() {
            return Err(Error::CoefficientOutOfRange {
                value: v as u64,
                size: space.q(),
            });
        }
        let idx = space.pair_index(i - 1, j - 1);
        c[idx] = space.field().add(c[idx], v);
    }
    let f = space.form_from_coeffs(c);
    Ok((space, f))
}

/// Parses `n=2 q=3; 0,1,1,0` (row-major entries).
pub fn parse_sbform(s: &str) -> Result<(FormSpace, SymBilinearForm)> {
    let (space, terms) = parse_header(s)?;
    let entries = terms
        .join(",")
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let b = space.sbform_from_matrix(entries)?;
    Ok((space, b))
}
