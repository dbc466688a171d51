//! Codes of quadratic forms under the weight distance, their duals in 𝒮_n,
//! orbit profiles, and exhaustive searches for optimal codes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::Scalars;
use crate::qforms::{FormSpace, FormType, QuadraticForm, SymBilinearForm};
use crate::scheme::{census, character_table_brute, Character};

/// Default node budget for the exhaustive searches.
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 32;

#[derive(Debug, Clone)]
enum Repr {
    /// Canonical (reduced echelon) basis of coefficient vectors.
    Linear(Vec<Vec<u32>>),
    /// Sorted, deduplicated elements, translated so that 0 is present.
    Set(Vec<QuadraticForm>),
}

#[derive(Debug, Clone)]
pub struct QFCode {
    space: FormSpace,
    repr: Repr,
}

fn echelon_rows(space: &FormSpace, rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    if rows.is_empty() {
        return rows;
    }
    let mut m = Matrix::from_rows(space.num_coeffs(), &rows);
    let rank = m.rref_in_place(space.field()).len();
    (0..rank).map(|i| m.row(i).to_vec()).collect()
}

impl QFCode {
    /// The F_q-span of `gens`.
    pub fn linear(space: &FormSpace, gens: &[QuadraticForm]) -> Result<Self> {
        for g in gens {
            if g.coeffs.len() != space.num_coeffs() || g.q != space.q() {
                return Err(Error::DimensionMismatch("generator outside the form space".into()));
            }
        }
        let basis = echelon_rows(space, gens.iter().map(|g| g.coeffs.clone()).collect());
        Ok(QFCode {
            space: space.clone(),
            repr: Repr::Linear(basis),
        })
    }

    /// An arbitrary code; it is translated by its least element when 0 is
    /// missing (distances are translation invariant).
    pub fn from_elements(space: &FormSpace, elems: &[QuadraticForm]) -> Result<Self> {
        for g in elems {
            if g.coeffs.len() != space.num_coeffs() || g.q != space.q() {
                return Err(Error::DimensionMismatch("codeword outside the form space".into()));
            }
        }
        let mut v: Vec<QuadraticForm> = elems.to_vec();
        v.sort();
        v.dedup();
        let zero = space.zero_form();
        if !v.is_empty() && v.binary_search(&zero).is_err() {
            let shift = v[0].clone();
            v = v.iter().map(|x| space.sub(x, &shift)).collect();
            v.sort();
        }
        Ok(QFCode {
            space: space.clone(),
            repr: Repr::Set(v),
        })
    }

    pub fn random_linear<R: Rng + ?Sized>(space: &FormSpace, dim: usize, rng: &mut R) -> Self {
        assert!(dim <= space.num_coeffs());
        let total = space.form_count() as u64;
        let mut rows = Vec::new();
        while rows.len() < dim {
            let mut cand = rows.clone();
            cand.push(space.form(rng.gen_range(0..total)).coeffs);
            let e = echelon_rows(space, cand);
            if e.len() > rows.len() {
                rows = e;
            }
        }
        QFCode {
            space: space.clone(),
            repr: Repr::Linear(rows),
        }
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.repr, Repr::Linear(_))
    }

    pub fn dim(&self) -> Option<usize> {
        match &self.repr {
            Repr::Linear(b) => Some(b.len()),
            Repr::Set(_) => None,
        }
    }

    pub fn basis(&self) -> Option<Vec<QuadraticForm>> {
        match &self.repr {
            Repr::Linear(b) => Some(b.iter().map(|r| self.space.form_from_coeffs(r.clone())).collect()),
            Repr::Set(_) => None,
        }
    }

    pub fn size(&self) -> u128 {
        match &self.repr {
            Repr::Linear(b) => (self.space.q() as u128).pow(b.len() as u32),
            Repr::Set(v) => v.len() as u128,
        }
    }

    /// All codewords (linear codes are expanded).
    pub fn elements(&self, cap: u64) -> Result<Vec<QuadraticForm>> {
        match &self.repr {
            Repr::Set(v) => Ok(v.clone()),
            Repr::Linear(b) => {
                let size = self.size();
                if size > cap as u128 {
                    return Err(Error::CapExceeded { required: size, cap });
                }
                let q = self.space.q();
                let f = self.space.field();
                Ok((0..size as u64)
                    .map(|mut idx| {
                        let mut acc = vec![0u32; self.space.num_coeffs()];
                        for row in b {
                            let c = (idx % q) as u32;
                            idx /= q;
                            if c != 0 {
                                for (a, &r) in acc.iter_mut().zip(row) {
                                    *a = f.add(*a, f.mul(c, r));
                                }
                            }
                        }
                        self.space.form_from_coeffs(acc)
                    })
                    .collect())
            }
        }
    }

    pub fn contains(&self, f: &QuadraticForm) -> bool {
        match &self.repr {
            Repr::Set(v) => v.binary_search(f).is_ok(),
            Repr::Linear(b) => {
                let mut rows = b.clone();
                rows.push(f.coeffs.clone());
                echelon_rows(&self.space, rows).len() == b.len()
            }
        }
    }

    /// Minimum weight; for linear codes over nonzero codewords.
    pub fn min_weight(&self, cap: u64) -> Result<u32> {
        if self.size() < 2 {
            return Err(Error::TooSmall);
        }
        if self.is_linear() {
            let mut best = u32::MAX;
            for c in self.elements(cap)? {
                if c.coeffs.iter().any(|&x| x != 0) {
                    best = best.min(self.space.weight(&c)?);
                }
            }
            Ok(best)
        } else {
            self.min_weight_pairwise(cap)
        }
    }

    /// min wt(Q − Q') over distinct pairs, for any code.
    pub fn min_weight_pairwise(&self, cap: u64) -> Result<u32> {
        if self.size() < 2 {
            return Err(Error::TooSmall);
        }
        let els = self.elements(cap)?;
        let mut best = u32::MAX;
        for (i, a) in els.iter().enumerate() {
            for b in &els[i + 1..] {
                best = best.min(self.space.weight(&self.space.sub(a, b))?);
            }
        }
        Ok(best)
    }

    /// Dual code {B : (Q,B) = 1 for all Q ∈ C}; for a linear code this is
    /// the kernel of B ↦ (b(Q_i, B))_i.
    pub fn dual(&self, cap: u64) -> Result<DualReport> {
        let Repr::Linear(b) = &self.repr else {
            return Err(Error::NotLinear);
        };
        let sp = &self.space;
        let n = sp.num_coeffs();
        let kernel = if b.is_empty() {
            (0..n)
                .map(|i| {
                    let mut v = vec![0u32; n];
                    v[i] = 1;
                    v
                })
                .collect()
        } else {
            Matrix::from_rows(n, b).nullspace(sp.field())
        };
        let basis: Vec<SymBilinearForm> = kernel.iter().map(|v| sp.sbform_from_upper(v)).collect();
        let code = DualCode {
            space: sp.clone(),
            basis: echelon_rows(sp, kernel),
        };
        let min_rank = code.min_rank(cap)?;
        Ok(DualReport {
            dim: code.basis.len(),
            basis,
            min_rank,
            code,
        })
    }
}

/// A linear code in 𝒮_n, stored by the upper triangles of a basis.
#[derive(Debug, Clone)]
pub struct DualCode {
    space: FormSpace,
    basis: Vec<Vec<u32>>,
}

/// The dual of a linear code with its minimum rank.
#[derive(Debug, Clone)]
pub struct DualReport {
    pub dim: usize,
    pub basis: Vec<SymBilinearForm>,
    /// `None` when the dual is {0}.
    pub min_rank: Option<u32>,
    code: DualCode,
}

impl DualReport {
    pub fn elements(&self, cap: u64) -> Result<Vec<SymBilinearForm>> {
        self.code.elements(cap)
    }
}

impl DualCode {
    fn elements(&self, cap: u64) -> Result<Vec<SymBilinearForm>> {
        let q = self.space.q();
        let size = (q as u128).pow(self.basis.len() as u32);
        if size > cap as u128 {
            return Err(Error::CapExceeded { required: size, cap });
        }
        let f = self.space.field();
        Ok((0..size as u64)
            .map(|mut idx| {
                let mut acc = vec![0u32; self.space.num_coeffs()];
                for row in &self.basis {
                    let c = (idx % q) as u32;
                    idx /= q;
                    if c != 0 {
                        for (a, &r) in acc.iter_mut().zip(row) {
                            *a = f.add(*a, f.mul(c, r));
                        }
                    }
                }
                self.space.sbform_from_upper(&acc)
            })
            .collect())
    }

    fn min_rank(&self, cap: u64) -> Result<Option<u32>> {
        let n = self.space.n();
        let mut best: Option<u32> = None;
        for b in self.elements(cap)? {
            if b.matrix.iter().all(|&x| x == 0) {
                continue;
            }
            let rows: Vec<Vec<u32>> = b.matrix.chunks(n).map(|r| r.to_vec()).collect();
            let r = Matrix::from_rows(n, &rows).rank(self.space.field()) as u32;
            best = Some(best.map_or(r, |x| x.min(r)));
        }
        Ok(best)
    }
}

/// q^{(n−1)(n−2)/2}.
pub fn anticode_bound(n: usize, q: u64) -> u128 {
    (q as u128).pow(((n - 1) * (n - 2) / 2) as u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticodeCheck {
    pub size: u128,
    pub bound: u128,
    pub min_weight: u32,
    /// |C| ≤ bound, required whenever the minimum weight is at least 3.
    pub within_bound: bool,
    /// |C| < bound.
    pub strict: bool,
}

pub fn check_anticode(c: &QFCode, cap: u64) -> Result<AnticodeCheck> {
    let size = c.size();
    let bound = anticode_bound(c.space.n(), c.space.q());
    let mw = c.min_weight(cap)?;
    Ok(AnticodeCheck {
        size,
        bound,
        min_weight: mw,
        within_bound: mw < 3 || size <= bound,
        strict: size < bound,
    })
}

/// 𝒜_{ℓ1,ℓ2} = {ℓ1ℓ + ℓ2ℓ'}, a linear code of diameter at most 2.
pub fn anticode_space(space: &FormSpace, l1: &[u32], l2: &[u32]) -> Result<QFCode> {
    let n = space.n();
    let mut gens = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut unit = vec![0u32; n];
        unit[j] = 1;
        gens.push(space.product_of_linear(l1, &unit));
        gens.push(space.product_of_linear(l2, &unit));
    }
    QFCode::linear(space, &gens)
}

#[derive(Debug, Clone)]
pub struct OrbitProfile {
    /// X_t = |C ∩ O_t|.
    pub x: BTreeMap<FormType, u128>,
    /// Y_s = (1/|C|) Σ_t χ_s(t) X_t.
    pub y: BTreeMap<FormType, BigRational>,
    /// |C^⊥ ∩ O_s| for linear codes.
    pub dual_counts: Option<BTreeMap<FormType, u128>>,
    /// Whether Y_s = |C^⊥ ∩ O_s| for every s (linear codes only).
    pub poisson_holds: Option<bool>,
}

pub fn orbit_profile(c: &QFCode, cap: u64) -> Result<OrbitProfile> {
    let sp = &c.space;
    let types = sp.all_types();
    let mut x: BTreeMap<FormType, u128> = types.iter().map(|&t| (t, 0)).collect();
    let els = c.elements(cap)?;
    for q in &els {
        *x.get_mut(&sp.qform_type(q)?).unwrap() += 1;
    }
    let table = character_table_brute(sp, Character::PRINCIPAL, cap)?;
    let size = BigInt::from(els.len());
    let y: BTreeMap<FormType, BigRational> = types
        .iter()
        .map(|&s| {
            let sum: BigInt = types
                .iter()
                .map(|&t| &table[&(s, t)] * BigInt::from(x[&t]))
                .sum();
            (s, BigRational::new(sum, size.clone()))
        })
        .collect();
    let (dual_counts, poisson_holds) = if c.is_linear() {
        let d = c.dual(cap)?;
        let cen = census(sp, cap)?;
        let mut counts: BTreeMap<FormType, u128> = types.iter().map(|&t| (t, 0)).collect();
        for b in d.elements(cap)? {
            *counts.get_mut(&cen.types[sp.sb_index(&b) as usize]).unwrap() += 1;
        }
        let holds = types
            .iter()
            .all(|s| y[s] == BigRational::from_integer(BigInt::from(counts[s])));
        (Some(counts), Some(holds))
    } else {
        (None, None)
    };
    Ok(OrbitProfile {
        x,
        y,
        dual_counts,
        poisson_holds,
    })
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// Lexicographically least greedy basis (form indices) of a code found.
    Witness {
        code: QFCode,
        basis_indices: Vec<u64>,
        nodes: u64,
    },
    NoneExists {
        nodes: u64,
    },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Witness { nodes, .. } | SearchOutcome::NoneExists { nodes } => *nodes,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, SearchOutcome::NoneExists { .. })
    }
}

struct IndexArith<'a> {
    space: &'a FormSpace,
}

impl IndexArith<'_> {
    fn add(&self, a: u64, b: u64) -> u64 {
        self.space.add_index(a, b)
    }

    fn scale(&self, c: u32, a: u64) -> u64 {
        if c == 1 {
            return a;
        }
        let f = self.space.form(a);
        self.space.index(&self.space.scale(c, &f))
    }
}

/// Flags of forms of weight ≥ 3 (type with r − e ≥ 5), by index.
fn heavy_forms(space: &FormSpace, cap: u64) -> Result<Vec<bool>> {
    use rayon::prelude::*;
    let total = space.form_count();
    if total > cap as u128 {
        return Err(Error::CapExceeded { required: total, cap });
    }
    (0..total as u64)
        .into_par_iter()
        .map(|i| Ok(space.qform_type(&space.form(i))?.weight() >= 3))
        .collect()
}

/// Searches for a linear code of dimension (n−1)(n−2)/2 with minimum weight
/// ≥ 3. A witness must have a dual of dimension 2n − 1 and minimum rank
/// n − 1; a witness violating that is reported as an inconsistency.
pub fn search_optimal_linear(n: usize, q: u64, cap: u64) -> Result<SearchOutcome> {
    if n < 3 {
        return Err(Error::DimensionMismatch(format!("need n ≥ 3, got {n}")));
    }
    let out = search_linear(n, q, (n - 1) * (n - 2) / 2, cap)?;
    if let SearchOutcome::Witness { code, .. } = &out {
        let d = code.dual(cap)?;
        if d.dim != 2 * n - 1 || d.min_rank != Some(n as u32 - 1) {
            return Err(Error::Inconsistent(format!(
                "witness dual has dim {} and min rank {:?}",
                d.dim, d.min_rank
            )));
        }
    }
    Ok(out)
}

/// Searches for a linear code of dimension `dim` in 𝒬_n all of whose
/// nonzero codewords have weight ≥ 3.
///
/// Every subspace V has a greedy basis v_1 < v_2 < … where v_i is the least
/// element of V outside span(v_1, …, v_{i−1}); in particular v_i is the
/// least element of its coset-layer span(v_1..v_i) ∖ span(v_1..v_{i−1}). The
/// depth-first search only extends bases satisfying that layer condition
/// with every layer element of weight ≥ 3, so it visits every admissible
/// subspace and proves nonexistence when it finds none.
pub fn search_linear(n: usize, q: u64, dim: usize, cap: u64) -> Result<SearchOutcome> {
    let space = FormSpace::new(n, q)?;
    if dim == 0 {
        return Ok(SearchOutcome::Witness {
            code: QFCode::linear(&space, &[])?,
            basis_indices: Vec::new(),
            nodes: 0,
        });
    }
    let heavy = heavy_forms(&space, crate::qforms::DEFAULT_CAP)?;
    let candidates: Vec<u64> = (0..heavy.len() as u64).filter(|&i| heavy[i as usize]).collect();
    let arith = IndexArith { space: &space };
    let mut nodes: u64 = 0;
    let mut basis: Vec<u64> = Vec::new();
    // Elements of the current span, kept in a flat list.
    let mut span: Vec<u64> = vec![0];

    fn layer(arith: &IndexArith, span: &[u64], v: u64, q: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(span.len() * (q as usize - 1));
        for c in 1..q as u32 {
            let cv = arith.scale(c, v);
            for &u in span {
                out.push(arith.add(cv, u));
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        arith: &IndexArith,
        heavy: &[bool],
        candidates: &[u64],
        q: u64,
        dim: usize,
        basis: &mut Vec<u64>,
        span: &mut Vec<u64>,
        nodes: &mut u64,
        cap: u64,
    ) -> Result<bool> {
        if basis.len() == dim {
            return Ok(true);
        }
        let last = basis.last().copied();
        let start = match last {
            Some(l) => candidates.partition_point(|&c| c <= l),
            None => 0,
        };
        for &v in &candidates[start..] {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::SearchCapExceeded {
                    examined: *nodes - 1,
                    cap,
                    progress: format!("partial basis {basis:?}"),
                });
            }
            if span.contains(&v) {
                continue;
            }
            let l = layer(arith, span, v, q);
            if l.iter().any(|&w| !heavy[w as usize] || w < v) {
                continue;
            }
            let saved = span.len();
            basis.push(v);
            span.extend_from_slice(&l);
            if dfs(arith, heavy, candidates, q, dim, basis, span, nodes, cap)? {
                return Ok(true);
            }
            basis.pop();
            span.truncate(saved);
        }
        Ok(false)
    }

    let found = dfs(&arith, &heavy, &candidates, q, dim, &mut basis, &mut span, &mut nodes, cap)?;
    if found {
        let gens: Vec<QuadraticForm> = basis.iter().map(|&i| space.form(i)).collect();
        Ok(SearchOutcome::Witness {
            code: QFCode::linear(&space, &gens)?,
            basis_indices: basis,
            nodes,
        })
    } else {
        Ok(SearchOutcome::NoneExists { nodes })
    }
}

/// Searches for a code C ∋ 0 of `size` elements with all differences of
/// weight ≥ 3: a clique of size − 1 among weight-≥3 forms in the graph
/// x ~ y ⇔ wt(x − y) ≥ 3. Candidate sets are bitsets, vertices are added
/// in increasing order, and a branch is cut when too few candidates remain.
pub fn search_optimal_nonlinear(n: usize, q: u64, size: usize, cap: u64) -> Result<SearchOutcome> {
    let space = FormSpace::new(n, q)?;
    let heavy = heavy_forms(&space, crate::qforms::DEFAULT_CAP)?;
    let verts: Vec<u64> = (0..heavy.len() as u64).filter(|&i| heavy[i as usize]).collect();
    let nv = verts.len();
    let words = nv.div_ceil(64);
    let arith = IndexArith { space: &space };
    let neg = |x: u64| arith.scale(space.field().neg(1), x);
    let mut adj = vec![vec![0u64; words]; nv];
    for i in 0..nv {
        for j in i + 1..nv {
            if heavy[arith.add(verts[i], neg(verts[j])) as usize] {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let need = size.saturating_sub(1);
    let mut nodes = 0u64;
    let mut clique = Vec::new();

    fn popcount(s: &[u64]) -> usize {
        s.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        adj: &[Vec<u64>],
        cand: Vec<u64>,
        need: usize,
        clique: &mut Vec<usize>,
        nodes: &mut u64,
        cap: u64,
    ) -> Result<bool> {
        if clique.len() == need {
            return Ok(true);
        }
        if clique.len() + popcount(&cand) < need {
            return Ok(false);
        }
        let mut cand = cand;
        for w in 0..cand.len() {
            while cand[w] != 0 {
                let bit = cand[w].trailing_zeros() as usize;
                let v = w * 64 + bit;
                cand[w] &= !(1u64 << bit);
                *nodes += 1;
                if *nodes > cap {
                    return Err(Error::SearchCapExceeded {
                        examined: *nodes - 1,
                        cap,
                        progress: format!("clique of size {}", clique.len()),
                    });
                }
                let next: Vec<u64> = cand.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
                clique.push(v);
                if grow(adj, next, need, clique, nodes, cap)? {
                    return Ok(true);
                }
                clique.pop();
                if clique.len() + popcount(&cand) < need {
                    return Ok(false);
                }
            }
        }
        Ok(false)
    }

    let mut all = vec![0u64; words];
    for i in 0..nv {
        all[i / 64] |= 1 << (i % 64);
    }
    if grow(&adj, all, need, &mut clique, &mut nodes, cap)? {
        let mut elems = vec![space.zero_form()];
        elems.extend(clique.iter().map(|&v| space.form(verts[v])));
        let idx = clique.iter().map(|&v| verts[v]).collect();
        Ok(SearchOutcome::Witness {
            code: QFCode::from_elements(&space, &elems)?,
            basis_indices: idx,
            nodes,
        })
    } else {
        Ok(SearchOutcome::NoneExists { nodes })
    }
}

/// Whether every nonzero element of `c` avoids 𝒜 (differences of a code of
/// minimum weight ≥ 3 never fall in an anticode of diameter 2).
pub fn avoids(c: &QFCode, anticode: &QFCode, cap: u64) -> Result<bool> {
    let els = c.elements(cap)?;
    for (i, a) in els.iter().enumerate() {
        for b in &els[i + 1..] {
            let d = c.space.sub(a, b);
            if anticode.contains(&d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl OrbitProfile {
    pub fn total_x(&self) -> u128 {
        self.x.values().sum()
    }

    pub fn y_total(&self) -> BigRational {
        self.y.values().fold(BigRational::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::{parse_qform, DEFAULT_CAP};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(r: u32, e: i32) -> FormType {
        FormType::new(r, e).unwrap()
    }

    #[test]
    fn min_weight_examples() {
        let (sp, f) = parse_qform("n=3 q=2; 1,2:1").unwrap();
        let c = QFCode::from_elements(&sp, &[sp.zero_form(), f]).unwrap();
        assert_eq!(c.min_weight(DEFAULT_CAP).unwrap(), 1);
        let sp4 = FormSpace::new(4, 2).unwrap();
        let g = sp4.q_representative(t(4, -1)).unwrap();
        let c = QFCode::from_elements(&sp4, &[sp4.zero_form(), g]).unwrap();
        assert_eq!(c.min_weight(DEFAULT_CAP).unwrap(), 3);
        let single = QFCode::from_elements(&sp4, &[sp4.zero_form()]).unwrap();
        assert_eq!(single.min_weight(DEFAULT_CAP), Err(Error::TooSmall));
    }

    #[test]
    fn linear_and_pairwise_minima_agree() {
        let sp = FormSpace::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let c = QFCode::random_linear(&sp, rng.gen_range(1..=4), &mut rng);
            let els = c.elements(DEFAULT_CAP).unwrap();
            let nonlinear = QFCode::from_elements(&sp, &els).unwrap();
            assert_eq!(c.min_weight(DEFAULT_CAP).unwrap(), nonlinear.min_weight(DEFAULT_CAP).unwrap());
        }
    }

    #[test]
    fn anticode_bounds() {
        assert_eq!(anticode_bound(2, 5), 1);
        assert_eq!(anticode_bound(3, 2), 2);
        assert_eq!(anticode_bound(4, 2), 8);
    }

    #[test]
    fn anticode_has_dimension_2n_minus_1_and_diameter_2() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, q) in [(3, 2), (3, 3), (4, 2)] {
            let sp = FormSpace::new(n, q).unwrap();
            for _ in 0..5 {
                let (l1, l2) = loop {
                    let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q as u32)).collect();
                    let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q as u32)).collect();
                    let m = Matrix::from_rows(n, &[a.clone(), b.clone()]);
                    if m.rank(sp.field()) == 2 {
                        break (a, b);
                    }
                };
                let a = anticode_space(&sp, &l1, &l2).unwrap();
                assert_eq!(a.dim(), Some(2 * n - 1));
                for f in a.elements(DEFAULT_CAP).unwrap() {
                    assert!(sp.weight(&f).unwrap() <= 2);
                }
            }
        }
    }

    #[test]
    fn dual_examples() {
        let sp = FormSpace::new(3, 2).unwrap();
        let zero = QFCode::linear(&sp, &[]).unwrap();
        assert_eq!(zero.dual(DEFAULT_CAP).unwrap().dim, 6);
        let all: Vec<QuadraticForm> = (0..6)
            .map(|i| {
                let mut c = vec![0u32; 6];
                c[i] = 1;
                sp.form_from_coeffs(c)
            })
            .collect();
        let full = QFCode::linear(&sp, &all).unwrap();
        let d = full.dual(DEFAULT_CAP).unwrap();
        assert_eq!(d.dim, 0);
        assert_eq!(d.min_rank, None);
        let nl = QFCode::from_elements(&sp, &[sp.zero_form()]).unwrap();
        assert!(matches!(nl.dual(DEFAULT_CAP), Err(Error::NotLinear)));
    }

    #[test]
    fn profile_of_zero_code() {
        let sp = FormSpace::new(3, 3).unwrap();
        let zero = QFCode::linear(&sp, &[]).unwrap();
        let p = orbit_profile(&zero, DEFAULT_CAP).unwrap();
        assert_eq!(p.x[&FormType::Zero], 1);
        assert_eq!(p.total_x(), 1);
        let sizes = &census(&sp, DEFAULT_CAP).unwrap().orbit_sizes;
        for (s, y) in &p.y {
            assert_eq!(*y, BigRational::from_integer(BigInt::from(sizes[s])));
        }
        assert_eq!(p.poisson_holds, Some(true));
    }

    #[test]
    fn poisson_on_random_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sp = FormSpace::new(3, 2).unwrap();
        for _ in 0..10 {
            let c = QFCode::random_linear(&sp, rng.gen_range(0..=6), &mut rng);
            let p = orbit_profile(&c, DEFAULT_CAP).unwrap();
            assert_eq!(p.poisson_holds, Some(true));
            assert_eq!(p.total_x(), c.size());
        }
    }

    #[test]
    fn search_examples() {
        for q in [2, 3] {
            assert!(search_optimal_linear(3, q, DEFAULT_SEARCH_CAP).unwrap().is_none());
        }
        match search_linear(4, 2, 1, DEFAULT_SEARCH_CAP).unwrap() {
            SearchOutcome::Witness { code, .. } => {
                let b = code.basis().unwrap();
                assert_eq!(code.space().qform_type(&b[0]).unwrap(), t(4, -1));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn search_witnesses_are_valid() {
        let out = search_linear(4, 2, 2, DEFAULT_SEARCH_CAP).unwrap();
        if let SearchOutcome::Witness { code, .. } = out {
            assert_eq!(code.dim(), Some(2));
            assert!(code.min_weight(DEFAULT_CAP).unwrap() >= 3);
        }
    }

    // Oracle: brute-force sums of two products of linear forms over F_2 in
    // four variables leave 168 forms of weight ≥ 3, forming 336 planes.
    #[test]
    fn heavy_form_counts_at_n4_q2() {
        let sp = FormSpace::new(4, 2).unwrap();
        let heavy = heavy_forms(&sp, DEFAULT_CAP).unwrap();
        let hs: Vec<u64> = (0..1024).filter(|&i| heavy[i as usize]).collect();
        assert_eq!(hs.len(), 168);
        let planes = hs
            .iter()
            .flat_map(|&a| hs.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a < b && heavy[(a ^ b) as usize] && a < (a ^ b) && b < (a ^ b))
            .count();
        assert_eq!(planes, 336);
    }

    #[test]
    fn no_optimal_linear_code_at_n4_q2() {
        let out = search_optimal_linear(4, 2, DEFAULT_SEARCH_CAP).unwrap();
        assert!(out.is_none(), "{out:?}");
    }

    // Oracle: Bron–Kerbosch on the same graph, computed independently,
    // gives a maximum clique of 3, so codes with minimum weight ≥ 3 at
    // n = 4, q = 2 have at most 4 elements.
    #[test]
    fn nonlinear_search_at_n4_q2() {
        match search_optimal_nonlinear(4, 2, 4, DEFAULT_SEARCH_CAP).unwrap() {
            SearchOutcome::Witness { code, .. } => {
                assert_eq!(code.size(), 4);
                assert!(code.min_weight(DEFAULT_CAP).unwrap() >= 3);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(search_optimal_nonlinear(4, 2, 5, DEFAULT_SEARCH_CAP).unwrap().is_none());
        assert!(search_optimal_nonlinear(4, 2, 8, DEFAULT_SEARCH_CAP).unwrap().is_none());
    }

    #[test]
    fn search_cap_is_reported() {
        assert!(matches!(
            search_optimal_linear(4, 2, 5),
            Err(Error::SearchCapExceeded { cap: 5, .. })
        ));
    }
}
