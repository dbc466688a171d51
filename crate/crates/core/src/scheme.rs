//! Orbit census of 𝒮_n, P-numbers χ_s(t)/|O_s|, Fourier coefficients f_B,
//! and the three-unknown dual system for optimal weight-3 codes.
//!
//! Everything here is exact: integers are `BigInt`/`u128`, ratios
//! `BigRational`. Character values are never materialized as complex
//! numbers; sums are accumulated as fiber counts over F_p.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::prime_power;
use crate::linalg::{int, solve_rational};
use crate::poly::Scalars;
use crate::qforms::{all_types, FormSpace, FormType, QuadraticForm, SymBilinearForm, DEFAULT_CAP};

type CensusCache = Mutex<HashMap<(usize, String), Arc<Census>>>;

fn t(r: u32, e: i32) -> FormType {
    FormType::Nonzero { rank: r, e }
}

/// The three types t for which closed forms are available.
pub fn supported_t() -> [FormType; 3] {
    [t(1, 0), t(2, 1), t(2, -1)]
}

fn pow(q: u64, e: u32) -> BigInt {
    BigInt::from(q).pow(e)
}

/// χ_s(t)/|O_s| in closed form, for t ∈ {(1,0), (2,1), (2,−1)}.
pub fn p_number(n: usize, q: u64, s: FormType, tt: FormType) -> Result<BigRational> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrime(q))?;
    if !supported_t().contains(&tt) {
        return Err(Error::UnsupportedType(tt.to_string()));
    }
    if !s.is_valid_for(n) {
        return Err(Error::InvalidType(s.to_string()));
    }
    if !tt.is_valid_for(n) {
        return Err(Error::InvalidType(tt.to_string()));
    }
    let FormType::Nonzero { rank: r, e } = s else {
        return Ok(BigRational::one());
    };
    let n32 = n as u32;
    let one = BigInt::one();
    let qn1 = pow(q, n32) - &one;
    let d2 = || &qn1 * (pow(q, n32 - 1) - &one);
    let e_big = BigInt::from(e);
    // q^{n−r/2−1}, only meaningful (and only used) for even r
    let half = || if r % 2 == 0 { pow(q, n32 - r / 2 - 1) } else { BigInt::zero() };
    let big = || pow(q, 2 * n32 - r - 1);
    let qn = pow(q, n32);
    let qn_1 = pow(q, n32 - 1);
    let (num, den) = match (tt.rank(), tt.e(), p == 2) {
        (1, _, true) => {
            if e == 1 {
                return Ok(BigRational::one());
            }
            (-one.clone(), qn1.clone())
        }
        (1, _, false) => {
            let pw = if r % 2 == 0 { pow(q, n32 - r / 2) } else { BigInt::zero() };
            (&e_big * pw - &one, qn1.clone())
        }
        (2, 1, true) => {
            if e == 1 {
                (big() - &qn - &qn_1 + &one, d2())
            } else {
                (big() - BigInt::from(2) * &qn_1 + &one, d2())
            }
        }
        (2, 1, false) => (
            big() - BigInt::from(2) * &qn_1 + &one - &e_big * half() * BigInt::from(q - 1),
            d2(),
        ),
        (2, _, true) => match e {
            0 => (-big() + &one, d2()),
            1 => (big() - &qn - &qn_1 + &one, d2()),
            _ => (big() + &one, d2()),
        },
        (2, _, false) => match e {
            0 => (-big() + &one, d2()),
            _ => (big() + &one - &e_big * half() * BigInt::from(q + 1), d2()),
        },
        _ => unreachable!("t checked above"),
    };
    Ok(BigRational::new(num, den))
}

/// Types of every element of 𝒮_n, by index, with per-type counts.
#[derive(Debug)]
pub struct Census {
    pub types: Vec<FormType>,
    pub orbit_sizes: BTreeMap<FormType, u128>,
}

/// Classifies all of 𝒮_n (cached per space).
pub fn census(space: &FormSpace, cap: u64) -> Result<Arc<Census>> {
    static CACHE: OnceLock<CensusCache> = OnceLock::new();
    let key = (space.n(), space.field().to_string());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return Ok(c.clone());
    }
    let total = space.form_count();
    if total > cap as u128 {
        return Err(Error::CapExceeded { required: total, cap });
    }
    let types: Vec<FormType> = (0..total as u64)
        .into_par_iter()
        .map(|i| space.sbform_type(&space.sbform(i)))
        .collect::<Result<_>>()?;
    let mut orbit_sizes: BTreeMap<FormType, u128> = all_types(space.n()).into_iter().map(|t| (t, 0)).collect();
    for ty in &types {
        *orbit_sizes.get_mut(ty).expect("census produced an invalid type") += 1;
    }
    let c = Arc::new(Census { types, orbit_sizes });
    cache.lock().unwrap().insert(key, c.clone());
    Ok(c)
}

/// The additive character b ↦ ζ_p^{tr(c·b)} for a nonzero multiplier c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Character(pub u32);

impl Character {
    pub const PRINCIPAL: Character = Character(1);

    /// A second nontrivial character (the largest nonzero multiplier).
    pub fn alternate(space: &FormSpace) -> Character {
        Character(space.field().size() - 1)
    }
}

/// Σ_{B∈O_s} (Q, B) for every s, as exact integers, from fiber counts of
/// tr(c·b(Q,B)) over F_p.
pub fn orbit_character_sums(
    space: &FormSpace,
    f: &QuadraticForm,
    chi: Character,
    cap: u64,
) -> Result<BTreeMap<FormType, BigInt>> {
    let cen = census(space, cap)?;
    let field = space.field();
    let p = field.characteristic() as usize;
    let per_index: Vec<u32> = (0..cen.types.len() as u64)
        .into_par_iter()
        .map(|i| {
            let pr = space.pairing(f, &space.sbform(i))?;
            Ok(field.trace_to_prime(field.mul(chi.0, pr.b)))
        })
        .collect::<Result<_>>()?;
    let mut fibers: BTreeMap<FormType, Vec<u64>> = BTreeMap::new();
    for (ty, &u) in cen.types.iter().zip(&per_index) {
        fibers.entry(*ty).or_insert_with(|| vec![0; p])[u as usize] += 1;
    }
    let mut out = BTreeMap::new();
    for s in all_types(space.n()) {
        let d = fibers.remove(&s).unwrap_or_else(|| vec![0; p]);
        if d[1..].iter().any(|&x| x != d[1]) {
            return Err(Error::NonIntegralCharacterSum(d));
        }
        // 1 + ζ + … + ζ^{p−1} = 0
        out.insert(s, BigInt::from(d[0]) - BigInt::from(d[1]));
    }
    Ok(out)
}

/// Full table χ_s(t) over all s, t ∈ 𝒯_n, by brute force.
pub fn character_table_brute(space: &FormSpace, chi: Character, cap: u64) -> Result<BTreeMap<(FormType, FormType), BigInt>> {
    let mut out = BTreeMap::new();
    for tt in space.all_types() {
        let rep = space.q_representative(tt)?;
        for (s, v) in orbit_character_sums(space, &rep, chi, cap)? {
            out.insert((s, tt), v);
        }
    }
    Ok(out)
}

/// χ_s(t)/|O_s| by enumerating 𝒮_n.
pub fn p_number_brute(n: usize, q: u64, s: FormType, tt: FormType) -> Result<BigRational> {
    p_number_brute_with(&FormSpace::new(n, q)?, s, tt, Character::PRINCIPAL, DEFAULT_CAP)
}

pub fn p_number_brute_with(space: &FormSpace, s: FormType, tt: FormType, chi: Character, cap: u64) -> Result<BigRational> {
    if !s.is_valid_for(space.n()) {
        return Err(Error::InvalidType(s.to_string()));
    }
    let rep = space.q_representative(tt)?;
    let sums = orbit_character_sums(space, &rep, chi, cap)?;
    let size = census(space, cap)?.orbit_sizes[&s];
    Ok(BigRational::new(sums[&s].clone(), BigInt::from(size)))
}

#[derive(Debug, Clone)]
pub struct PNumberTable {
    pub n: usize,
    pub q: u64,
    /// (s, t) → χ_s(t)/|O_s|.
    pub entries: BTreeMap<(FormType, FormType), BigRational>,
    /// Brute-force orbit sizes, when the census fits the budget.
    pub orbit_sizes: Option<BTreeMap<FormType, u128>>,
}

pub fn p_number_table(n: usize, q: u64, brute: bool, cap: u64) -> Result<PNumberTable> {
    let space = FormSpace::new(n, q)?;
    let mut entries = BTreeMap::new();
    for tt in supported_t().into_iter().filter(|x| x.is_valid_for(n)) {
        for s in all_types(n) {
            let v = if brute {
                p_number_brute_with(&space, s, tt, Character::PRINCIPAL, cap)?
            } else {
                p_number(n, q, s, tt)?
            };
            entries.insert((s, tt), v);
        }
    }
    let orbit_sizes = match census(&space, cap) {
        Ok(c) => Some(c.orbit_sizes.clone()),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(PNumberTable {
        n,
        q,
        entries,
        orbit_sizes,
    })
}

/// f_B = (|𝒜|/|𝒬_n|)·|{g ∈ G : B^{g^t} ∈ 𝒜^⊥}| for 𝒜 = x_1·𝓛 + x_2·𝓛, whose
/// annihilator is the set of matrices with vanishing first two rows.
pub fn fourier_f_brute(space: &FormSpace, b: &SymBilinearForm, cap: u64) -> Result<BigRational> {
    let n = space.n();
    if n < 2 {
        return Err(Error::DimensionMismatch("need n >= 2".into()));
    }
    let q = space.q();
    let gl = space.gl(cap)?;
    let mut hits: u64 = 0;
    for u in &gl {
        let h = space.transpose(u);
        for a in 1..q as u32 {
            let img = space.act_b(b, a, &h);
            if (0..2).all(|i| (0..n).all(|j| img.get(i, j) == 0)) {
                hits += 1;
            }
        }
    }
    let anticode = pow(q, 2 * n as u32 - 1);
    let total = pow(q, space.num_coeffs() as u32);
    Ok(BigRational::new(anticode * BigInt::from(hits), total))
}

/// |G| = (q − 1)|GL(n, q)|.
pub fn group_order(space: &FormSpace) -> u128 {
    (space.q() as u128 - 1) * space.gl_order()
}

/// Unknown labels of the reduced dual system.
pub fn dual_labels(n: usize) -> [FormType; 3] {
    let n = n as u32;
    if n.is_multiple_of(2) {
        [t(n - 1, 0), t(n, 1), t(n, -1)]
    } else {
        [t(n - 1, 1), t(n - 1, -1), t(n, 0)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSystem {
    pub n: usize,
    pub q: u64,
    pub labels: [FormType; 3],
    /// 4 × 3: the normalization row, then t = (1,0), (2,1), (2,−1).
    pub matrix: Vec<Vec<BigRational>>,
    pub rhs: Vec<BigRational>,
}

/// Rows: Σ Y = q^{2n−1} − 1, and Σ_s χ_s(t)/|O_s| Y_s = −1 for the three
/// supported t (the zero type contributes Y_0 = 1, lower ranks vanish).
pub fn build_dual_system(n: usize, q: u64) -> Result<DualSystem> {
    if n < 2 {
        return Err(Error::DimensionMismatch("the dual system needs n >= 2".into()));
    }
    let labels = dual_labels(n);
    let mut matrix = vec![vec![BigRational::one(); 3]];
    for tt in supported_t() {
        matrix.push(labels.iter().map(|&s| p_number(n, q, s, tt)).collect::<Result<_>>()?);
    }
    let minus_one = -BigRational::one();
    let rhs = vec![
        BigRational::from_integer(pow(q, 2 * n as u32 - 1) - 1),
        minus_one.clone(),
        minus_one.clone(),
        minus_one,
    ];
    Ok(DualSystem {
        n,
        q,
        labels,
        matrix,
        rhs,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub y_star: Vec<BigRational>,
    pub residual: BigRational,
    pub feasible: bool,
}

/// Solves the first three rows and evaluates the fourth at the solution.
pub fn solve_dual_system(sys: &DualSystem) -> Result<DualSolution> {
    let y = solve_rational(&sys.matrix[..3], &sys.rhs[..3]).ok_or(Error::SingularSubsystem)?;
    let residual: BigRational = sys.matrix[3].iter().zip(&y).map(|(a, b)| a * b).sum();
    let feasible = residual == sys.rhs[3];
    Ok(DualSolution {
        y_star: y,
        residual,
        feasible,
    })
}

/// Type of x ↦ xᵀBx.
pub fn t_prime_brute(space: &FormSpace, b: &SymBilinearForm) -> Result<FormType> {
    let f = &space.field();
    let coeffs = space
        .pairs()
        .iter()
        .map(|&(i, j)| if i == j { b.get(i, i) } else { f.add(b.get(i, j), b.get(j, i)) })
        .collect();
    space.qform_type(&space.form_from_coeffs(coeffs))
}

/// Adds c · w_i w_j to a 2n-variable form.
fn accumulate(big: &FormSpace, coeffs: &mut [u32], i: usize, j: usize, c: u32) {
    if c != 0 {
        let k = big.pair_index(i, j);
        coeffs[k] = big.field().add(coeffs[k], c);
    }
}

/// The 2n-variable forms w = (v_1, v_2) ↦ b(Q_t, B^u) restricted to the
/// first two columns, for t = (2,1) and t = (2,−1).
pub fn pair_form(space: &FormSpace, b: &SymBilinearForm, tt: FormType) -> Result<(FormSpace, QuadraticForm)> {
    let n = space.n();
    let f = space.field();
    let big = FormSpace::with_field(2 * n, f.clone());
    let mut c = vec![0u32; big.num_coeffs()];
    let bp = f.nonsplit_parameter();
    for i in 0..n {
        for j in 0..n {
            let bij = b.get(i, j);
            match tt {
                x if x == t(2, 1) => accumulate(&big, &mut c, i, n + j, bij),
                x if x == t(2, -1) => {
                    accumulate(&big, &mut c, i, j, bij);
                    if f.characteristic() == 2 {
                        accumulate(&big, &mut c, i, n + j, bij);
                        accumulate(&big, &mut c, n + i, n + j, f.mul(bp, bij));
                    } else {
                        accumulate(&big, &mut c, n + i, n + j, f.neg(f.mul(bp, bij)));
                    }
                }
                _ => return Err(Error::UnsupportedType(tt.to_string())),
            }
        }
    }
    let form = big.form_from_coeffs(c);
    Ok((big, form))
}

/// Tabulated type of the pair form for t = (2,−1): (2r, 1) when e = ±1,
/// (2r, −1) when e = 0.
pub fn t_double_prime(s: FormType) -> FormType {
    match s {
        FormType::Zero => FormType::Zero,
        FormType::Nonzero { rank, e } => t(2 * rank, if e == 0 { -1 } else { 1 }),
    }
}

impl DualSystem {
    /// Whether a candidate Y satisfies all four rows.
    pub fn satisfies(&self, y: &[BigRational]) -> bool {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .all(|(row, r)| row.iter().zip(y).map(|(a, b)| a * b).sum::<BigRational>() == *r)
    }
}

/// Sign helper for reports.
pub fn is_positive(x: &BigRational) -> bool {
    x.is_positive()
}

/// q^{2n−1}, the value of Σ Y_s.
pub fn dual_total(n: usize, q: u64) -> BigRational {
    int(pow(q, 2 * n as u32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn orbit_sizes(n: usize, q: u64) -> Vec<u128> {
        let space = FormSpace::new(n, q).unwrap();
        census(&space, DEFAULT_CAP).unwrap().orbit_sizes.values().copied().collect()
    }

    #[test]
    fn orbit_sizes_are_frozen() {
        // Independent enumeration, ordered 0, (1,0), (2,1), (2,−1), (3,0), (4,1), (4,−1).
        assert_eq!(orbit_sizes(2, 2), vec![1, 3, 1, 3]);
        assert_eq!(orbit_sizes(2, 3), vec![1, 8, 12, 6]);
        assert_eq!(orbit_sizes(3, 2), vec![1, 7, 7, 21, 28]);
        assert_eq!(orbit_sizes(3, 3), vec![1, 26, 156, 78, 468]);
        assert_eq!(orbit_sizes(4, 2), vec![1, 15, 35, 105, 420, 28, 420]);
    }

    #[test]
    fn p_number_examples() {
        assert_eq!(p_number(4, 2, t(2, 1), t(1, 0)).unwrap(), BigRational::one());
        assert_eq!(p_number(2, 3, t(2, 1), t(1, 0)).unwrap(), rat(1, 4));
        // p = 2, t = (2,−1), s = (r,0): (−q^{2n−r−1} + 1)/((q^n − 1)(q^{n−1} − 1))
        assert_eq!(p_number(3, 2, t(1, 0), t(2, -1)).unwrap(), rat(-15, 21));
        assert_eq!(p_number(3, 3, FormType::Zero, t(2, 1)).unwrap(), BigRational::one());
        assert!(matches!(p_number(3, 3, t(1, 0), t(3, 0)), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn p_numbers_frozen_at_n3_q3() {
        // Independent brute force: least non-square b = 2, principal character.
        let cases = [
            (t(1, 0), t(1, 0), rat(-1, 26)),
            (t(1, 0), t(2, 1), rat(4, 13)),
            (t(1, 0), t(2, -1), rat(-5, 13)),
            (t(2, 1), t(2, 1), rat(1, 52)),
            (t(2, 1), t(2, -1), rat(1, 13)),
            (t(2, -1), t(2, -1), rat(5, 26)),
            (t(2, -1), t(2, 1), rat(1, 13)),
            (t(3, 0), t(1, 0), rat(-1, 26)),
            (t(3, 0), t(2, 1), rat(-1, 26)),
            (t(3, 0), t(2, -1), rat(-1, 26)),
        ];
        for (s, tt, v) in cases {
            assert_eq!(p_number(3, 3, s, tt).unwrap(), v, "s={s} t={tt}");
            assert_eq!(p_number_brute(3, 3, s, tt).unwrap(), v, "s={s} t={tt}");
        }
    }

    #[test]
    fn closed_form_matches_brute_small() {
        for (n, q) in [(2, 2), (2, 3), (3, 2), (2, 4), (2, 5)] {
            for tt in supported_t() {
                for s in all_types(n) {
                    assert_eq!(
                        p_number(n, q, s, tt).unwrap(),
                        p_number_brute(n, q, s, tt).unwrap(),
                        "n={n} q={q} s={s} t={tt}"
                    );
                }
            }
        }
    }

    #[test]
    fn second_character_gives_same_sums() {
        for (n, q) in [(2, 3), (3, 3), (2, 4), (2, 5)] {
            let space = FormSpace::new(n, q).unwrap();
            let a = character_table_brute(&space, Character::PRINCIPAL, DEFAULT_CAP).unwrap();
            let b = character_table_brute(&space, Character::alternate(&space), DEFAULT_CAP).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn t_prime_and_t_double_prime_tables() {
        for (n, q) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let space = FormSpace::new(n, q).unwrap();
            let p2 = space.field().characteristic() == 2;
            for s in all_types(n).into_iter().skip(1) {
                let b = space.b_representative(s).unwrap();
                let expected_tp = if !p2 {
                    s
                } else if s.e() == 1 {
                    FormType::Zero
                } else {
                    t(1, 0)
                };
                assert_eq!(t_prime_brute(&space, &b).unwrap(), expected_tp, "n={n} q={q} s={s}");
                let (big, f) = pair_form(&space, &b, t(2, 1)).unwrap();
                assert_eq!(big.qform_type(&f).unwrap(), t(2 * s.rank(), 1));
                let (big, f) = pair_form(&space, &b, t(2, -1)).unwrap();
                assert_eq!(big.qform_type(&f).unwrap(), t_double_prime(s), "n={n} q={q} s={s}");
            }
        }
    }

    #[test]
    fn fourier_coefficients() {
        let space = FormSpace::new(3, 2).unwrap();
        let cen = census(&space, DEFAULT_CAP).unwrap();
        let f0 = fourier_f_brute(&space, &space.sbform(0), DEFAULT_CAP).unwrap();
        let expected = BigRational::new(
            BigInt::from(group_order(&space)) * pow(2, 5),
            pow(2, 6),
        );
        assert_eq!(f0, expected);
        for (i, ty) in cen.types.iter().enumerate() {
            let fb = fourier_f_brute(&space, &space.sbform(i as u64), DEFAULT_CAP).unwrap();
            assert!(!fb.is_negative());
            assert_eq!(fb.is_positive(), ty.rank() <= 1, "type {ty}");
        }
    }

    #[test]
    fn dual_system_shape() {
        for n in 2..=8 {
            for q in [2, 3, 4, 5] {
                let sys = build_dual_system(n, q).unwrap();
                assert_eq!(sys.matrix[0], vec![BigRational::one(); 3]);
                assert_eq!(sys.labels, dual_labels(n));
            }
        }
    }

    #[test]
    fn dual_solutions() {
        let frozen = [
            (2, 3, [rat(3, 1), rat(18, 1), rat(10, 1)]),
            (3, 2, [rat(8, 1), rat(12, 1), rat(6, 1)]),
            (3, 3, [rat(64, 1), rat(40, 1), rat(138, 1)]),
            (5, 3, [rat(432, 1), rat(312, 1), rat(2380, 1)]),
        ];
        for (q, n, y) in frozen {
            let sol = solve_dual_system(&build_dual_system(n, q).unwrap()).unwrap();
            assert_eq!(sol.y_star, y.to_vec(), "n={n} q={q}");
        }
        for q in [2, 3, 4, 5] {
            assert!(solve_dual_system(&build_dual_system(2, q).unwrap()).unwrap().feasible);
            for n in 3..=8 {
                let sol = solve_dual_system(&build_dual_system(n, q).unwrap()).unwrap();
                assert!(!sol.feasible, "n={n} q={q}");
                assert!(sol.y_star.iter().all(is_positive), "n={n} q={q}");
            }
        }
    }

    /// Y* closed forms, with the corrections established against the
    /// exact solver (see the acceptance suite for the published variants).
    fn corrected_y_star(n: u32, q: u64) -> Vec<BigRational> {
        let qb = |e: u32| pow(q, e);
        let one = BigInt::one();
        let q1 = BigInt::from(q - 1);
        let total = qb(2 * n - 1) - &one;
        let r = |a: BigInt, b: BigInt| BigRational::new(a, b);
        let p2 = q.is_multiple_of(2);
        let a = (qb(n) - &one) * (qb(n - 1) - &one);
        if n.is_multiple_of(2) && p2 {
            vec![
                r(a.clone(), q1.clone()),
                r(qb(n - 1) - &one, one.clone()),
                r((qb(n) - &one) * (qb(n) - BigInt::from(2) * qb(n - 1) + &one), q1.clone()),
            ]
        } else if n % 2 == 1 && p2 {
            vec![
                r(qb(n - 1) - &one, one.clone()),
                r(BigInt::from(q) * (qb(n - 1) - &one).pow(2), q1.clone()),
                r(total.clone() * &q1 - &a, q1.clone()),
            ]
        } else if n.is_multiple_of(2) {
            let half = qb(n / 2) * (qb(n - 1) - &one);
            let base = r(total.clone(), BigInt::from(2)) - r(a.clone(), BigInt::from(2) * &q1);
            vec![
                r(a.clone(), q1.clone()),
                base.clone() + r(half.clone(), BigInt::from(2)),
                base - r(half, BigInt::from(2)),
            ]
        } else {
            vec![
                r(
                    (qb(n - 1) - &one) * (qb((n - 1) / 2) + &one) * (qb(n.div_ceil(2)) - &one),
                    BigInt::from(2) * &q1,
                ),
                r(
                    (qb(n - 1) - &one) * (qb((n - 1) / 2) - &one) * (qb(n.div_ceil(2)) + &one),
                    BigInt::from(2) * &q1,
                ),
                r(total.clone() * &q1 - &a, q1.clone()),
            ]
        }
    }

    #[test]
    fn corrected_closed_forms_match_solver() {
        for n in 3..=8u32 {
            for q in [2, 3, 4, 5] {
                let sol = solve_dual_system(&build_dual_system(n as usize, q).unwrap()).unwrap();
                assert_eq!(sol.y_star, corrected_y_star(n, q), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn primal_and_dual_consistency_at_n2() {
        // C = {0}: X_0 = 1, every other X_t = 0, Y_s = χ_s(0) = |O_s|.
        for q in [2, 3] {
            let space = FormSpace::new(2, q).unwrap();
            let table = character_table_brute(&space, Character::PRINCIPAL, DEFAULT_CAP).unwrap();
            let sizes = &census(&space, DEFAULT_CAP).unwrap().orbit_sizes;
            let y: BTreeMap<FormType, BigInt> = all_types(2)
                .into_iter()
                .map(|s| (s, table[&(s, FormType::Zero)].clone()))
                .collect();
            assert_eq!(y[&FormType::Zero], BigInt::one());
            for (s, v) in &y {
                assert_eq!(*v, BigInt::from(sizes[s]));
            }
            let sum: BigInt = y.values().sum();
            assert_eq!(int(sum), dual_total(2, q));
            for tt in [t(1, 0), t(2, 1), t(2, -1)] {
                let lhs: BigRational = all_types(2)
                    .into_iter()
                    .map(|s| BigRational::new(table[&(s, tt)].clone(), BigInt::from(sizes[&s])) * int(y[&s].clone()))
                    .sum();
                assert!(lhs.is_zero());
            }
        }
    }
}
