use proptest::prelude::*;

use vosperkit::codes::QFCode;
use vosperkit::qforms::{FormSpace, DEFAULT_CAP};
use vosperkit::sidon_bridge::sidon_via_kernel;
use vosperkit::{Elem, Subspace, TowerSpec};

fn elems(order: u64, max: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..order, 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tower_is_a_field(a in 0u64..243, b in 0u64..243, c in 1u64..243) {
        let t = TowerSpec::over_prime(3, 5, None).unwrap();
        let (a, b, c) = (Elem(a), Elem(b), Elem(c));
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.mul(c, t.inv(c)), Elem::ONE);
        prop_assert_eq!(t.pow(a, 243), a);
    }

    #[test]
    fn modular_law_and_perp(xs in elems(256, 5), ys in elems(256, 5)) {
        let t = TowerSpec::over_prime(2, 8, None).unwrap();
        let x = Subspace::span(&t, &xs.into_iter().map(Elem).collect::<Vec<_>>()).unwrap();
        let y = Subspace::span(&t, &ys.into_iter().map(Elem).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(
            x.sum(&y).unwrap().dim() + x.intersect(&y).unwrap().dim(),
            x.dim() + y.dim()
        );
        prop_assert_eq!(x.perp().dim(), 8 - x.dim());
        prop_assert_eq!(x.perp().perp(), x.clone());
        prop_assert_eq!(x.product(&y).unwrap(), y.product(&x).unwrap());
    }

    #[test]
    fn weight_is_subadditive(i in 0u64..59049, j in 0u64..59049, c in 1u32..3) {
        let sp = FormSpace::new(4, 3).unwrap();
        let (f, g) = (sp.form(i), sp.form(j));
        let wf = sp.weight(&f).unwrap();
        prop_assert_eq!(sp.weight(&sp.scale(c, &f)).unwrap(), wf);
        prop_assert!(sp.weight(&sp.add(&f, &g)).unwrap() <= wf + sp.weight(&g).unwrap());
    }

    #[test]
    fn dual_dimension(gens in prop::collection::vec(0u64..729, 0..6)) {
        let sp = FormSpace::new(3, 3).unwrap();
        let forms: Vec<_> = gens.into_iter().map(|i| sp.form(i)).collect();
        let c = QFCode::linear(&sp, &forms).unwrap();
        let d = c.dual(DEFAULT_CAP).unwrap();
        prop_assert_eq!(d.dim + c.dim().unwrap(), sp.num_coeffs());
    }

    #[test]
    fn square_and_kernel_dimensions(xs in elems(2048, 4)) {
        let t = TowerSpec::over_prime(2, 11, None).unwrap();
        let a = Subspace::span(&t, &xs.into_iter().map(Elem).collect::<Vec<_>>()).unwrap();
        prop_assume!(!a.is_zero());
        let r = sidon_via_kernel(&t, a.basis(), DEFAULT_CAP).unwrap();
        prop_assert_eq!(r.dim_a2, a.power(2).dim());
        prop_assert_eq!(r.dim_a2 + r.kernel_dim, a.dim() * (a.dim() + 1) / 2);
        if r.is_sidon && a.dim() >= 2 {
            prop_assert!(r.dim_a2 >= 2 * a.dim() - 1);
        }
    }
}
