//! The map Φ from quadratic forms in n variables onto A² for a basis
//! a_1..a_n of A, and the kernel-weight criterion for Sidon spaces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::codes::QFCode;
use crate::error::{Error, Result};
use crate::fields::{Elem, Tower};
use crate::linalg::Matrix;
use crate::qforms::{FormSpace, QuadraticForm};
use crate::subspaces::Subspace;

/// Φ: x_i x_j ↦ a_i a_j, extended linearly.
#[derive(Debug, Clone)]
pub struct PhiMap {
    tower: Tower,
    basis: Vec<Elem>,
    space: FormSpace,
    image_products: BTreeMap<(usize, usize), Elem>,
}

impl PhiMap {
    pub fn new(tower: &Tower, basis: &[Elem]) -> Result<Self> {
        let a = Subspace::span(tower, basis)?;
        if a.dim() != basis.len() || basis.is_empty() {
            return Err(Error::DependentBasis);
        }
        let space = FormSpace::with_field(basis.len(), tower.base().clone());
        let image_products = space
            .pairs()
            .iter()
            .map(|&(i, j)| ((i, j), tower.mul(basis[i], basis[j])))
            .collect();
        Ok(PhiMap {
            tower: tower.clone(),
            basis: basis.to_vec(),
            space,
            image_products,
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn image_products(&self) -> &BTreeMap<(usize, usize), Elem> {
        &self.image_products
    }

    /// Φ(Q).
    pub fn apply(&self, f: &QuadraticForm) -> Elem {
        let t = &self.tower;
        self.space
            .pairs()
            .iter()
            .zip(&f.coeffs)
            .fold(Elem::ZERO, |acc, (p, &c)| t.add(acc, t.scale(c, self.image_products[p])))
    }

    /// Φ(ℓ) = Σ l_i a_i for a linear form ℓ.
    pub fn apply_linear(&self, l: &[u32]) -> Elem {
        let t = &self.tower;
        l.iter()
            .zip(&self.basis)
            .fold(Elem::ZERO, |acc, (&c, &a)| t.add(acc, t.scale(c, a)))
    }

    /// A² as a subspace of L.
    pub fn image(&self) -> Subspace {
        Subspace::span_unchecked(&self.tower, self.image_products.values().copied())
    }

    /// ker Φ as a linear code.
    pub fn kernel(&self) -> Result<QFCode> {
        let m = self.tower.degree() as usize;
        let cols: Vec<Vec<u32>> = self.image_products.values().map(|&x| self.tower.coords(x)).collect();
        // m × N coordinate matrix, one column per product.
        let rows: Vec<Vec<u32>> = (0..m).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let kernel = Matrix::from_rows(cols.len(), &rows).nullspace(self.tower.base());
        let gens: Vec<QuadraticForm> = kernel.into_iter().map(|v| self.space.form_from_coeffs(v)).collect();
        QFCode::linear(&self.space, &gens)
    }
}

/// ker Φ for the basis `basis` of A.
pub fn phi_kernel(tower: &Tower, basis: &[Elem]) -> Result<QFCode> {
    PhiMap::new(tower, basis)?.kernel()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SidonReport {
    pub is_sidon: bool,
    pub dim_a: usize,
    #[serde(rename = "dim_A2")]
    pub dim_a2: usize,
    pub kernel_dim: usize,
    /// `None` when the kernel is {0}.
    pub kernel_min_weight: Option<u32>,
}

/// A is Sidon iff every nonzero element of ker Φ has weight ≥ 3.
pub fn sidon_via_kernel(tower: &Tower, basis: &[Elem], cap: u64) -> Result<SidonReport> {
    let phi = PhiMap::new(tower, basis)?;
    let kernel = phi.kernel()?;
    let kernel_dim = kernel.dim().expect("kernel is linear");
    let kernel_min_weight = if kernel_dim == 0 {
        None
    } else {
        Some(kernel.min_weight(cap)?)
    };
    let dim_a2 = phi.image().dim();
    debug_assert_eq!(dim_a2 + kernel_dim, phi.space.num_coeffs());
    Ok(SidonReport {
        is_sidon: kernel_min_weight.is_none_or(|w| w >= 3),
        dim_a: basis.len(),
        dim_a2,
        kernel_dim,
        kernel_min_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_tower, TowerSpec};
    use crate::isoperimetry::is_sidon;
    use crate::qforms::DEFAULT_CAP;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tower_2_19() -> Tower {
        parse_tower("2^19 over 2 / 1,0,0,0,0,1,0,0,0,1,0,0,1,0,0,0,0,1,1,1").unwrap()
    }

    fn basis_of(t: &Tower, gens: &[&str]) -> Vec<Elem> {
        gens.iter().map(|s| t.parse_elem(s).unwrap()).collect()
    }

    // Oracle: an independent shift-and-xor GF(2^19) multiplier gives ten
    // independent products for the first basis (so Φ is injective) and nine
    // for the second, whose kernel form has 6 zeros in F_2^4 (type (4,−1)).
    #[test]
    fn sidon_spaces_in_gf_2_19() {
        let t = tower_2_19();
        let r = sidon_via_kernel(&t, &basis_of(&t, &["1", "a", "a^7", "a^12+a^2+1"]), DEFAULT_CAP).unwrap();
        assert_eq!(
            r,
            SidonReport {
                is_sidon: true,
                dim_a: 4,
                dim_a2: 10,
                kernel_dim: 0,
                kernel_min_weight: None,
            }
        );
        let r = sidon_via_kernel(&t, &basis_of(&t, &["1", "a", "a^7", "a^12+a^3+1"]), DEFAULT_CAP).unwrap();
        assert_eq!(
            r,
            SidonReport {
                is_sidon: true,
                dim_a: 4,
                dim_a2: 9,
                kernel_dim: 1,
                kernel_min_weight: Some(3),
            }
        );
    }

    #[test]
    fn small_examples() {
        let t = TowerSpec::over_prime(2, 7, None).unwrap();
        let a = t.alpha();
        let k = phi_kernel(&t, &[Elem::ONE, a]).unwrap();
        assert_eq!(k.dim(), Some(0));
        let a2 = t.mul(a, a);
        let k = phi_kernel(&t, &[Elem::ONE, a, a2]).unwrap();
        let sp = k.space().clone();
        let rel = sp.form_from_coeffs(
            sp.pairs()
                .iter()
                .map(|&p| u32::from(p == (0, 2) || p == (1, 1)))
                .collect(),
        );
        assert!(k.contains(&rel));
        assert_eq!(sp.weight(&rel).unwrap(), 2);
        assert!(!sidon_via_kernel(&t, &[Elem::ONE, a, a2], DEFAULT_CAP).unwrap().is_sidon);
        assert!(matches!(phi_kernel(&t, &[a, a]), Err(Error::DependentBasis)));
    }

    #[test]
    fn phi_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = TowerSpec::over_prime(3, 5, None).unwrap();
        let a = Subspace::random(&t, 3, &mut rng);
        let phi = PhiMap::new(&t, a.basis()).unwrap();
        for _ in 0..200 {
            let l: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let lp: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let f = phi.space().product_of_linear(&l, &lp);
            assert_eq!(phi.apply(&f), t.mul(phi.apply_linear(&l), phi.apply_linear(&lp)));
        }
    }

    #[test]
    fn kernel_criterion_matches_direct_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = TowerSpec::over_prime(2, 11, None).unwrap();
        let mut seen = [0usize; 2];
        for i in 0..200 {
            let dim = 3 + i % 2;
            // Mix generic subspaces with ones close to progressions.
            let a = if i % 4 == 0 {
                let g = Elem(rng.gen_range(1..t.order()));
                let x = Elem(rng.gen_range(1..t.order()));
                let mut b = vec![g, t.mul(g, x), t.mul(t.mul(g, x), x)];
                if dim == 4 {
                    b.push(Elem(rng.gen_range(1..t.order())));
                }
                Subspace::span(&t, &b).unwrap()
            } else {
                Subspace::random(&t, dim, &mut rng)
            };
            if a.dim() < 3 {
                continue;
            }
            let r = sidon_via_kernel(&t, a.basis(), DEFAULT_CAP).unwrap();
            assert_eq!(r.is_sidon, is_sidon(&a), "{:?}", a.basis());
            assert_eq!(r.dim_a2 + r.kernel_dim, a.dim() * (a.dim() + 1) / 2);
            seen[r.is_sidon as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
    }

    #[test]
    fn sidon_squares_exceed_2n_minus_1() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [11, 13, 17, 19] {
            let t = TowerSpec::over_prime(2, m, None).unwrap();
            for i in 0..40 {
                let a = Subspace::random(&t, 3 + i % 2, &mut rng);
                let r = sidon_via_kernel(&t, a.basis(), DEFAULT_CAP).unwrap();
                if r.is_sidon {
                    assert!(r.dim_a2 > 2 * r.dim_a - 1);
                }
            }
        }
    }
}
