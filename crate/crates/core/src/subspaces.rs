//! F-linear subspaces of L in canonical reduced echelon form.
//!
//! Convention: each basis row has its *highest* nonzero coordinate (the
//! pivot) equal to 1, every other row is zero at that coordinate, and rows
//! are sorted by decreasing pivot. Equal subspaces therefore have identical
//! bases.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{parse_tower, Elem, Tower, TowerSpec};
use crate::linalg::Matrix;
use crate::poly::Scalars;

/// Incremental echelon basis.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<'a> {
    t: &'a TowerSpec,
    rows: Vec<Elem>,
    pivots: Vec<usize>,
}

impl<'a> Echelon<'a> {
    pub fn new(t: &'a TowerSpec) -> Self {
        Echelon {
            t,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_canonical(t: &'a TowerSpec, rows: &[Elem]) -> Self {
        Echelon {
            t,
            rows: rows.to_vec(),
            pivots: rows.iter().map(|&r| t.leading(r).unwrap()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `x` modulo the current span (zero at every pivot).
    pub fn reduce(&self, mut x: Elem) -> Elem {
        let t = self.t;
        if t.base_size() == 2 {
            for (&r, &p) in self.rows.iter().zip(&self.pivots) {
                if (x.0 >> p) & 1 == 1 {
                    x.0 ^= r.0;
                }
            }
            return x;
        }
        for (&r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = t.coord(x, p);
            if c != 0 {
                x = t.sub(x, t.scale(c, r));
            }
        }
        x
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.reduce(x).is_zero()
    }

    /// Adds `x`; returns whether the dimension grew.
    pub fn insert(&mut self, x: Elem) -> bool {
        let t = self.t;
        let mut x = self.reduce(x);
        let Some(lead) = t.leading(x) else {
            return false;
        };
        let c = t.coord(x, lead);
        if c != 1 {
            x = t.scale(t.base().inv(c), x);
        }
        for r in self.rows.iter_mut() {
            let c = t.coord(*r, lead);
            if c != 0 {
                *r = t.sub(*r, t.scale(c, x));
            }
        }
        let pos = self.pivots.partition_point(|&p| p > lead);
        self.rows.insert(pos, x);
        self.pivots.insert(pos, lead);
        true
    }

    pub fn into_rows(self) -> Vec<Elem> {
        self.rows
    }
}

/// Canonical basis of the span of `gens`.
pub(crate) fn echelon_of(t: &TowerSpec, gens: impl IntoIterator<Item = Elem>) -> Vec<Elem> {
    let mut e = Echelon::new(t);
    let m = t.degree() as usize;
    for g in gens {
        e.insert(g);
        if e.dim() == m {
            break;
        }
    }
    e.into_rows()
}

#[derive(Clone)]
pub struct Subspace {
    tower: Tower,
    basis: Vec<Elem>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
            && (Arc::ptr_eq(&self.tower, &other.tower) || *self.tower == *other.tower)
    }
}
impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by dimension, then lexicographically on the canonical basis.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim(), &self.basis).cmp(&(other.dim(), &other.basis))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<String> = self.basis.iter().map(|&x| self.tower.format_elem(x)).collect();
        write!(f, "span{{{}}}", elems.join(", "))
    }
}

fn same_tower(a: &Tower, b: &Tower) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::MixedFields)
    }
}

impl Subspace {
    pub fn span(tower: &Tower, gens: &[Elem]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.0 >= tower.order()) {
            return Err(Error::CoefficientOutOfRange {
                value: g.0,
                size: tower.order(),
            });
        }
        Ok(Self::span_unchecked(tower, gens.iter().copied()))
    }

    pub(crate) fn span_unchecked(tower: &Tower, gens: impl IntoIterator<Item = Elem>) -> Self {
        Subspace {
            tower: tower.clone(),
            basis: echelon_of(tower, gens),
        }
    }

    /// Wraps a basis already in canonical form.
    pub(crate) fn from_canonical(tower: &Tower, basis: Vec<Elem>) -> Self {
        debug_assert_eq!(echelon_of(tower, basis.iter().copied()), basis);
        Subspace {
            tower: tower.clone(),
            basis,
        }
    }

    pub fn zero(tower: &Tower) -> Self {
        Subspace {
            tower: tower.clone(),
            basis: Vec::new(),
        }
    }

    /// The base field F = F·1.
    pub fn base_line(tower: &Tower) -> Self {
        Self::span_unchecked(tower, [Elem::ONE])
    }

    pub fn full(tower: &Tower) -> Self {
        let m = tower.degree() as usize;
        let mut basis: Vec<Elem> = (0..m)
            .map(|i| {
                let mut c = vec![0u32; m];
                c[i] = 1;
                tower.pack(&c)
            })
            .collect();
        basis.reverse();
        Subspace {
            tower: tower.clone(),
            basis,
        }
    }

    /// The intermediate field GF(q^d); `d` must divide m.
    pub fn subfield(tower: &Tower, d: u32) -> Option<Self> {
        tower
            .subfields()
            .iter()
            .find(|(e, _)| *e == d)
            .map(|(_, b)| Subspace::from_canonical(tower, b.clone()))
    }

    pub fn random<R: Rng + ?Sized>(tower: &Tower, dim: usize, rng: &mut R) -> Self {
        assert!(dim <= tower.degree() as usize);
        let mut e = Echelon::new(tower);
        while e.dim() < dim {
            e.insert(Elem(rng.gen_range(0..tower.order())));
        }
        Subspace {
            tower: tower.clone(),
            basis: e.into_rows(),
        }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub(crate) fn echelon(&self) -> Echelon<'_> {
        Echelon::from_canonical(&self.tower, &self.basis)
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.echelon().contains(x)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        let e = other.echelon();
        self.basis.iter().all(|&x| e.contains(x))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Self> {
        same_tower(&self.tower, &other.tower)?;
        let mut e = self.echelon();
        for &x in &other.basis {
            e.insert(x);
        }
        Ok(Subspace {
            tower: self.tower.clone(),
            basis: e.into_rows(),
        })
    }

    /// Kernel of (c, d) ↦ Σ c_i x_i − Σ d_j y_j, projected to the X part.
    pub fn intersect(&self, other: &Subspace) -> Result<Self> {
        same_tower(&self.tower, &other.tower)?;
        let t = &self.tower;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(t));
        }
        let m = t.degree() as usize;
        let (a, b) = (self.dim(), other.dim());
        let mut mat = Matrix::zeros(m, a + b);
        for (j, &x) in self.basis.iter().chain(&other.basis).enumerate() {
            for i in 0..m {
                mat[(i, j)] = t.coord(x, i);
            }
        }
        let f = t.base();
        let gens = mat.nullspace(f).into_iter().map(|v| {
            self.basis
                .iter()
                .zip(&v[..a])
                .fold(Elem::ZERO, |acc, (&x, &c)| t.add(acc, t.scale(c, x)))
        });
        Ok(Subspace::span_unchecked(t, gens.collect::<Vec<_>>()))
    }

    /// The span of all products st.
    pub fn product(&self, other: &Subspace) -> Result<Self> {
        same_tower(&self.tower, &other.tower)?;
        Ok(self.product_unchecked(other))
    }

    pub(crate) fn product_unchecked(&self, other: &Subspace) -> Self {
        let t = &*self.tower;
        let m = t.degree() as usize;
        let mut e = Echelon::new(t);
        'outer: for &x in &self.basis {
            for &y in &other.basis {
                e.insert(t.mul(x, y));
                if e.dim() == m {
                    break 'outer;
                }
            }
        }
        Subspace {
            tower: self.tower.clone(),
            basis: e.into_rows(),
        }
    }

    /// S^t = S · S^{t−1}, with S^1 = S.
    pub fn power(&self, t: u32) -> Self {
        assert!(t >= 1, "power exponent must be positive");
        let mut acc = self.clone();
        for _ in 1..t {
            acc = self.product_unchecked(&acc);
        }
        acc
    }

    /// x·S.
    pub fn scale(&self, x: Elem) -> Self {
        let t = &self.tower;
        Subspace::span_unchecked(t, self.basis.iter().map(|&s| t.mul(x, s)).collect::<Vec<_>>())
    }

    /// Orthogonal complement for the trace form.
    pub fn perp(&self) -> Self {
        let t = &self.tower;
        let m = t.degree() as usize;
        if self.is_zero() {
            return Subspace::full(t);
        }
        let alpha = t.alpha();
        let powers: Vec<Elem> = (0..m as u64).map(|j| t.pow(alpha, j)).collect();
        let mut mat = Matrix::zeros(self.dim(), m);
        for (i, &x) in self.basis.iter().enumerate() {
            for (j, &a) in powers.iter().enumerate() {
                mat[(i, j)] = t.trace_form(x, a);
            }
        }
        let gens: Vec<Elem> = mat
            .nullspace(t.base())
            .into_iter()
            .map(|v| {
                powers
                    .iter()
                    .zip(&v)
                    .fold(Elem::ZERO, |acc, (&a, &c)| t.add(acc, t.scale(c, a)))
            })
            .collect();
        Subspace::span_unchecked(t, gens)
    }

    /// The largest intermediate field K with K·X = X.
    pub fn stabilizer(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroSpace);
        }
        let t = &self.tower;
        let mut best = Subspace::base_line(t);
        for (_, basis) in t.subfields() {
            let k = Subspace::from_canonical(t, basis.clone());
            if k.product_unchecked(self) == *self {
                best = k;
            }
        }
        Ok(best)
    }

    pub fn to_json(&self) -> SubspaceJson {
        SubspaceJson {
            tower: self.tower.to_string(),
            basis: self.basis.iter().map(|&x| self.tower.coords(x)).collect(),
        }
    }

    pub fn from_json(j: &SubspaceJson) -> Result<Self> {
        let tower = parse_tower(&j.tower)?;
        let gens = j
            .basis
            .iter()
            .map(|c| tower.from_coords(c))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(&tower, &gens)
    }
}

/// Serialized subspace: tower text plus canonical basis coordinates (lowest
/// degree first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub tower: String,
    pub basis: Vec<Vec<u32>>,
}

/// Number of d-dimensional subspaces of GF(q)^m.
pub fn gaussian_binomial(m: u32, d: u32, q: u64) -> u128 {
    if d > m {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..d {
        num *= q.pow(m - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// A pivot pattern of the echelon enumeration: pivot coordinates in
/// decreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotPattern {
    pub pivots: Vec<usize>,
    /// Free coordinates per row.
    free: Vec<Vec<usize>>,
}

impl PivotPattern {
    /// Number of subspaces with this pattern.
    pub fn size(&self, q: u64) -> u128 {
        let n: u32 = self.free.iter().map(|f| f.len() as u32).sum();
        (q as u128).pow(n)
    }
}

/// All pivot patterns of `d`-dimensional subspaces supported on `positions`.
pub fn pivot_patterns(positions: &[usize], d: usize) -> Vec<PivotPattern> {
    let mut pos = positions.to_vec();
    pos.sort_unstable();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(pos: &[usize], start: usize, d: usize, chosen: &mut Vec<usize>, out: &mut Vec<PivotPattern>) {
        if chosen.len() == d {
            let mut pivots = chosen.clone();
            pivots.reverse();
            let free = pivots
                .iter()
                .map(|&p| {
                    pos.iter()
                        .copied()
                        .filter(|&c| c < p && !pivots.contains(&c))
                        .collect()
                })
                .collect();
            out.push(PivotPattern { pivots, free });
            return;
        }
        for i in start..pos.len() {
            chosen.push(pos[i]);
            rec(pos, i + 1, d, chosen, out);
            chosen.pop();
        }
    }
    rec(&pos, 0, d, &mut chosen, &mut out);
    out
}

/// Every canonical basis with the given pattern, visiting free entries as a
/// mixed-radix counter.
pub fn pattern_bases<'a>(t: &'a TowerSpec, pat: &'a PivotPattern) -> impl Iterator<Item = Vec<Elem>> + 'a {
    let q = t.base_size();
    let slots: Vec<(usize, usize)> = pat
        .free
        .iter()
        .enumerate()
        .flat_map(|(r, f)| f.iter().map(move |&c| (r, c)))
        .collect();
    let total = (q as u128).pow(slots.len() as u32);
    let base_rows: Vec<Elem> = pat
        .pivots
        .iter()
        .map(|&p| Elem(t.pack_unit(p)))
        .collect();
    (0..total).map(move |mut idx| {
        let mut rows = base_rows.clone();
        for &(r, c) in &slots {
            let digit = (idx % q as u128) as u32;
            idx /= q as u128;
            if digit != 0 {
                rows[r] = t.add(rows[r], t.scale(digit, Elem(t.pack_unit(c))));
            }
        }
        rows
    })
}

/// All `d`-dimensional subspaces of L, in canonical form.
pub fn grassmannian(t: &Tower, d: usize) -> impl Iterator<Item = Subspace> + '_ {
    let positions: Vec<usize> = (0..t.degree() as usize).collect();
    pivot_patterns(&positions, d).into_iter().flat_map(move |pat| {
        pattern_bases(t, &pat)
            .map(|b| Subspace::from_canonical(t, b))
            .collect::<Vec<_>>()
    })
}

impl TowerSpec {
    /// Packed encoding of the basis element α^i.
    pub(crate) fn pack_unit(&self, i: usize) -> u64 {
        self.base_size().pow(i as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldSpec, TowerSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf2(m: u32) -> Tower {
        TowerSpec::over_prime(2, m, None).unwrap()
    }

    #[test]
    fn span_examples() {
        let t = gf2(3);
        assert_eq!(Subspace::span(&t, &[Elem::ZERO]).unwrap().dim(), 0);
        let a = t.alpha();
        let s = Subspace::span(&t, &[Elem::ONE, a, t.add(Elem::ONE, a)]).unwrap();
        assert_eq!(s.dim(), 2);
        let again = Subspace::span(&t, s.basis()).unwrap();
        assert_eq!(again.basis(), s.basis());
    }

    #[test]
    fn intersection_and_sum_examples() {
        let t = gf2(3);
        let one = Subspace::base_line(&t);
        let a = Subspace::span(&t, &[t.alpha()]).unwrap();
        assert_eq!(one.intersect(&a).unwrap().dim(), 0);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(one.sum(&a).unwrap().dim(), 2);
    }

    #[test]
    fn modular_law_on_random_pairs() {
        let t = gf2(7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = Subspace::random(&t, rng.gen_range(0..=7), &mut rng);
            let y = Subspace::random(&t, rng.gen_range(0..=7), &mut rng);
            let s = x.sum(&y).unwrap();
            let i = x.intersect(&y).unwrap();
            assert_eq!(x.dim() + y.dim(), s.dim() + i.dim());
            assert!(i.is_subspace_of(&x) && i.is_subspace_of(&y));
        }
    }

    #[test]
    fn odd_characteristic_intersection() {
        let t = TowerSpec::over_prime(3, 4, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let x = Subspace::random(&t, rng.gen_range(0..=4), &mut rng);
            let y = Subspace::random(&t, rng.gen_range(0..=4), &mut rng);
            let s = x.sum(&y).unwrap();
            let i = x.intersect(&y).unwrap();
            assert_eq!(x.dim() + y.dim(), s.dim() + i.dim());
            for &b in x.basis() {
                let lead = t.leading(b).unwrap();
                assert_eq!(t.coord(b, lead), 1);
            }
        }
    }

    #[test]
    fn product_examples() {
        let t = gf2(3);
        let a = t.alpha();
        let s = Subspace::span(&t, &[Elem::ONE, a]).unwrap();
        let s2 = s.product(&s).unwrap();
        let expected = Subspace::span(&t, &[Elem::ONE, a, t.mul(a, a)]).unwrap();
        assert_eq!(s2, expected);
        assert_eq!(s.product(&Subspace::base_line(&t)).unwrap(), s);
        assert_eq!(s.power(2), s2);
    }

    #[test]
    fn product_commutes_and_associates() {
        let t = gf2(8);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = Subspace::random(&t, rng.gen_range(1..=3), &mut rng);
            let y = Subspace::random(&t, rng.gen_range(1..=3), &mut rng);
            let z = Subspace::random(&t, rng.gen_range(1..=2), &mut rng);
            assert_eq!(x.product(&y).unwrap(), y.product(&x).unwrap());
            assert_eq!(
                x.product(&y).unwrap().product(&z).unwrap(),
                x.product(&y.product(&z).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn perp_examples() {
        let t4 = gf2(2);
        assert!(Subspace::full(&t4).perp().is_zero());
        // tr(1) = 0 over GF(4)/GF(2), so 1 is self-orthogonal
        assert_eq!(Subspace::base_line(&t4).perp(), Subspace::base_line(&t4));

        let t = gf2(7);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let x = Subspace::random(&t, rng.gen_range(0..=7), &mut rng);
            let p = x.perp();
            assert_eq!(p.dim(), 7 - x.dim());
            assert_eq!(p.perp(), x);
        }
    }

    #[test]
    fn stabilizer_examples() {
        let t16 = gf2(4);
        let gf4 = Subspace::subfield(&t16, 2).unwrap();
        assert_eq!(gf4.stabilizer().unwrap(), gf4);

        let t32 = gf2(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = Subspace::random(&t32, 2, &mut rng);
        assert_eq!(x.stabilizer().unwrap().dim(), 1);
        assert_eq!(Subspace::zero(&t32).stabilizer(), Err(Error::ZeroSpace));
    }

    #[test]
    fn mixed_towers_are_rejected() {
        let a = Subspace::base_line(&gf2(3));
        let b = Subspace::base_line(&gf2(4));
        assert_eq!(a.sum(&b), Err(Error::MixedFields));
        assert_eq!(a.product(&b), Err(Error::MixedFields));
    }

    #[test]
    fn grassmannian_counts_match_gaussian_binomials() {
        for (p, k, m) in [(2u64, 1u32, 5u32), (3, 1, 3), (2, 2, 2)] {
            let base = FieldSpec::new(p, k, None).unwrap();
            let t = TowerSpec::new(base, m, None).unwrap();
            let q = t.base_size();
            for d in 0..=m as usize {
                let all: Vec<Subspace> = grassmannian(&t, d).collect();
                assert_eq!(all.len() as u128, gaussian_binomial(m, d as u32, q));
                for s in &all {
                    assert_eq!(Subspace::span(&t, s.basis()).unwrap().basis(), s.basis());
                }
                let mut sorted = all.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), all.len());
            }
        }
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
    }

    #[test]
    fn json_roundtrip() {
        let t = gf2(6);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = Subspace::random(&t, 3, &mut rng);
        let j = serde_json::to_string(&x.to_json()).unwrap();
        let back: SubspaceJson = serde_json::from_str(&j).unwrap();
        assert_eq!(Subspace::from_json(&back).unwrap(), x);
    }
}
