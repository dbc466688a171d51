//! Boundaries, connectivities and atoms of a subspace S, Sidon spaces, and
//! recovery of geometric-progression bases for critical pairs.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{divisors, Elem, Tower};
use crate::subspaces::{pattern_bases, pivot_patterns, Echelon, Subspace, SubspaceJson};

/// Default number of candidate subspaces an atom search may examine.
pub const DEFAULT_ATOM_CAP: u64 = 50_000_000;

/// ∂_S X = dim(XS) − dim(X).
pub fn boundary(s: &Subspace, x: &Subspace) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroSpace);
    }
    Ok(x.product(s)?.dim() as i64 - x.dim() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kappa {
    NegInfinity,
    Value(i64),
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::NegInfinity => write!(f, "-inf"),
            Kappa::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Kappa {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Kappa::NegInfinity => s.serialize_str("-inf"),
            Kappa::Value(v) => s.serialize_i64(*v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomReport {
    pub k: usize,
    pub kappa: Kappa,
    /// Minimum-dimension fragments found, sorted canonically.
    pub atoms: Vec<Subspace>,
    pub fragments_examined: u64,
    pub search_cap_hit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomReportJson {
    pub k: usize,
    pub kappa: Kappa,
    pub atoms: Vec<SubspaceJson>,
    pub fragments_examined: u64,
    pub search_cap_hit: bool,
}

impl AtomReport {
    pub fn to_json(&self) -> AtomReportJson {
        AtomReportJson {
            k: self.k,
            kappa: self.kappa,
            atoms: self.atoms.iter().map(Subspace::to_json).collect(),
            fragments_examined: self.fragments_examined,
            search_cap_hit: self.search_cap_hit,
        }
    }
}

/// Whether X belongs to 𝒳_k(S): dim X ≥ k and dim(XS) + k ≤ m.
pub fn is_admissible(s: &Subspace, x: &Subspace, k: usize) -> bool {
    let m = s.tower().degree() as usize;
    x.dim() >= k && x.product_unchecked(s).dim() + k <= m
}

/// Whether X is a k-fragment of S given the connectivity κ_k(S).
pub fn is_fragment(s: &Subspace, x: &Subspace, k: usize, kappa: i64) -> bool {
    is_admissible(s, x, k) && x.product_unchecked(s).dim() as i64 - x.dim() as i64 == kappa
}

/// Lower bound on every boundary ∂_S X with XS ≠ L: dim XS ≥ dim X + dim S −
/// dim H(XS), and the stabilizer of a proper product is a proper subfield.
fn boundary_lower_bound(s: &Subspace) -> i64 {
    let m = s.tower().degree();
    let largest_proper = divisors(m)
        .into_iter()
        .filter(|&d| d < m)
        .max()
        .unwrap_or(0);
    (s.dim() as i64 - largest_proper as i64).max(0)
}

/// dim(XS), or `None` once it exceeds `limit`.
fn product_dim_within(t: &Tower, x: &[Elem], s: &[Elem], limit: usize) -> Option<usize> {
    let mut e = Echelon::new(t);
    for &a in x {
        for &b in s {
            e.insert(t.mul(a, b));
            if e.dim() > limit {
                return None;
            }
        }
    }
    Some(e.dim())
}

/// κ_k(S) and the k-atoms by exhaustive search over candidate subspaces of
/// increasing dimension. With `normalize_one`, only subspaces containing 1
/// are visited (every nonzero subspace has such a scalar multiple with the
/// same boundary), so the atoms reported are those through 1.
///
/// Dimensions beyond (m − κ_lb)/2 are never needed: for X ∈ 𝒳_k the space
/// (XS)^⊥ is in 𝒳_k with no larger boundary, and one of the two has
/// dimension at most (m − ∂X)/2.
pub fn connectivity_and_atoms(s: &Subspace, k: usize, cap: u64, normalize_one: bool) -> Result<AtomReport> {
    if s.is_zero() {
        return Err(Error::ZeroSpace);
    }
    assert!(k >= 1, "k must be positive");
    let t = s.tower().clone();
    let m = t.degree() as usize;
    let q = t.base_size();
    let lb = boundary_lower_bound(s);
    let max_dim = ((m as i64 - lb) / 2).max(0) as usize;
    let limit = m.saturating_sub(k);

    let mut examined: u64 = 0;
    let mut best: Option<(i64, usize, Vec<Subspace>)> = None;

    for d in k..=max_dim.min(limit) {
        if let Some((b, _, _)) = &best {
            if *b == lb {
                break;
            }
        }
        let (positions, inner_dim) = if normalize_one {
            ((1..m).collect::<Vec<_>>(), d - 1)
        } else {
            ((0..m).collect::<Vec<_>>(), d)
        };
        let patterns = pivot_patterns(&positions, inner_dim);
        let count: u128 = patterns.iter().map(|p| p.size(q)).sum();
        if examined as u128 + count > cap as u128 {
            let progress = match &best {
                Some((b, bd, _)) => format!(
                    "dimensions {k}..{} complete; best boundary {b} at dimension {bd}",
                    d - 1
                ),
                None => format!("dimensions {k}..{} complete; no admissible subspace yet", d - 1),
            };
            return Err(Error::SearchCapExceeded {
                examined,
                cap,
                progress,
            });
        }
        let sb = s.basis();
        let per_pattern: Vec<Option<(i64, Vec<Vec<Elem>>)>> = patterns
            .par_iter()
            .map(|pat| {
                let mut local: Option<(i64, Vec<Vec<Elem>>)> = None;
                for mut basis in pattern_bases(&t, pat) {
                    if normalize_one {
                        basis.push(Elem::ONE);
                    }
                    let Some(pd) = product_dim_within(&t, &basis, sb, limit) else {
                        continue;
                    };
                    let b = pd as i64 - d as i64;
                    match &mut local {
                        Some((lb, list)) if *lb == b => list.push(basis),
                        Some((lb, _)) if *lb < b => {}
                        _ => local = Some((b, vec![basis])),
                    }
                }
                local
            })
            .collect();
        examined += count as u64;
        let level_min = per_pattern.iter().flatten().map(|(b, _)| *b).min();
        let Some(level_min) = level_min else { continue };
        let improves = match &best {
            None => true,
            Some((b, _, _)) => level_min < *b,
        };
        if improves {
            let mut atoms: Vec<Subspace> = per_pattern
                .into_iter()
                .flatten()
                .filter(|(b, _)| *b == level_min)
                .flat_map(|(_, list)| list)
                .map(|basis| Subspace::from_canonical(&t, basis))
                .collect();
            atoms.sort();
            best = Some((level_min, d, atoms));
        }
    }

    Ok(match best {
        None => AtomReport {
            k,
            kappa: Kappa::NegInfinity,
            atoms: Vec::new(),
            fragments_examined: examined,
            search_cap_hit: false,
        },
        Some((kappa, _, atoms)) => AtomReport {
            k,
            kappa: Kappa::Value(kappa),
            atoms,
            fragments_examined: examined,
            search_cap_hit: false,
        },
    })
}

/// dim(A ∩ xA) ≤ 1 for every x ∉ F, tested on one x per line.
pub fn is_sidon(a: &Subspace) -> bool {
    let t = a.tower();
    let n = a.dim();
    if n == 0 {
        return true;
    }
    let reps: Vec<Elem> = t.enumerate_lines(true).collect();
    !reps.par_chunks(4096).any(|chunk| {
        chunk.iter().any(|&x| {
            let mut e = a.echelon();
            for &b in a.basis() {
                e.insert(t.mul(x, b));
            }
            // dim(A ∩ xA) = 2n − dim(A + xA)
            2 * n - e.dim() > 1
        })
    })
}

/// A geometric-progression description of a critical pair: S is spanned by
/// g, ga, …, ga^{s−1} and T by g', g'a, …, g'a^{t−1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VosperWitness {
    pub g: Elem,
    pub a: Elem,
    pub g_prime: Elem,
}

/// span{g, ga, …, ga^{len−1}}.
pub fn progression(t: &Tower, g: Elem, a: Elem, len: usize) -> Subspace {
    let mut terms = Vec::with_capacity(len);
    let mut x = g;
    for _ in 0..len {
        terms.push(x);
        x = t.mul(x, a);
    }
    Subspace::span_unchecked(t, terms)
}

/// Starting element of a progression with ratio `a` spanning `s`, by the
/// descent S ⊃ S ∩ aS ⊃ …: if S' = S ∩ aS is spanned by g', …, g'a^{s−2},
/// then S is spanned by g'a^{−1}, g', …, g'a^{s−2}.
fn progression_start(s: &Subspace, a: Elem, a_inv: Elem) -> Option<Elem> {
    if s.dim() == 1 {
        return Some(s.basis()[0]);
    }
    let shifted = s.scale(a);
    let inner = s.intersect(&shifted).ok()?;
    if inner.dim() + 1 != s.dim() {
        return None;
    }
    let g_inner = progression_start(&inner, a, a_inv)?;
    Some(s.tower().mul(g_inner, a_inv))
}

fn grows_by_one(s: &Subspace, a: Elem) -> bool {
    let t = s.tower();
    let mut e = s.echelon();
    for &b in s.basis() {
        e.insert(t.mul(a, b));
        if e.dim() > s.dim() + 1 {
            return false;
        }
    }
    e.dim() == s.dim() + 1
}

/// Recovers progression bases with a common ratio for a critical pair
/// (dim ST = dim S + dim T − 1 ≤ m − 2, both of dimension ≥ 2).
pub fn vosper_recover(s: &Subspace, t_space: &Subspace) -> Result<VosperWitness> {
    let st = s.product(t_space)?;
    let tower = s.tower().clone();
    let m = tower.degree() as usize;
    let (ds, dt) = (s.dim(), t_space.dim());
    if ds < 2 || dt < 2 {
        return Err(Error::NotCritical(format!("dimensions {ds} and {dt} must be at least 2")));
    }
    if st.dim() != ds + dt - 1 {
        return Err(Error::NotCritical(format!(
            "dim ST = {} but dim S + dim T - 1 = {}",
            st.dim(),
            ds + dt - 1
        )));
    }
    if st.dim() + 2 > m {
        return Err(Error::NotCritical(format!("dim ST = {} exceeds m - 2 = {}", st.dim(), m as i64 - 2)));
    }
    for a in tower.enumerate_lines(true) {
        if !grows_by_one(s, a) || !grows_by_one(t_space, a) {
            continue;
        }
        let a_inv = tower.inv(a);
        let (Some(g), Some(gp)) = (
            progression_start(s, a, a_inv),
            progression_start(t_space, a, a_inv),
        ) else {
            continue;
        };
        if progression(&tower, g, a, ds) == *s && progression(&tower, gp, a, dt) == *t_space {
            return Ok(VosperWitness { g, a, g_prime: gp });
        }
    }
    Err(Error::NoProgressionFound)
}
