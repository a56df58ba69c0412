//! Randomized invariants over small dihedral settings.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistdecomp::kgroups::{random_gset_over, random_map_into};
use twistdecomp::scalar::root_of_unity;
use twistdecomp::{
    dihedral_alpha, irreducibles, k0_of_gset, naturality_check, pullback_matrix, verify_gset_decomposition,
    DecompositionOptions, Setting, SubgroupHandle, Tolerances, Twist,
};

/// `(n, generator of A)` with `A ⊴ D_2n`.
const SETTINGS: [(usize, usize); 4] = [(4, 1), (4, 2), (6, 1), (6, 3)];

fn setting(case: usize) -> Setting {
    let (n, gen) = SETTINGS[case];
    let alpha = dihedral_alpha(n).unwrap();
    let a = SubgroupHandle::closure(alpha.group(), &[gen]).unwrap();
    Setting::new(alpha, a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_is_additive_and_relabel_invariant(case in 0..SETTINGS.len(), seed in any::<u64>()) {
        let s = setting(case);
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trivial = SubgroupHandle::trivial(s.group());
        let x = random_gset_over(&trivial, 6, &mut rng);
        let y = random_gset_over(&trivial, 6, &mut rng);
        let tw = s.twist_g::<f64>();
        let rx = k0_of_gset(&tw, &x, seed, &tol).unwrap().rank();
        let ry = k0_of_gset(&tw, &y, seed, &tol).unwrap().rank();
        let rxy = k0_of_gset(&tw, &x.disjoint_union(&y).unwrap(), seed, &tol).unwrap().rank();
        prop_assert_eq!(rxy, rx + ry);
        let mut perm: Vec<usize> = (0..x.size()).rev().collect();
        if perm.len() > 1 {
            perm.swap(0, 1);
        }
        let relabeled = x.relabeled(&perm).unwrap();
        prop_assert_eq!(k0_of_gset(&tw, &relabeled, seed, &tol).unwrap().rank(), rx);
    }

    #[test]
    fn gset_decomposition_is_a_natural_bijection(case in 0..SETTINGS.len(), seed in any::<u64>()) {
        let s = setting(case);
        let options = DecompositionOptions { seed, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = random_gset_over(s.normal(), 6, &mut rng);
        let f = random_map_into(&y, s.normal(), 6, &mut rng);
        let dy = verify_gset_decomposition::<f64>(&s, &y, &options).unwrap();
        let dx = verify_gset_decomposition::<f64>(&s, f.source(), &options).unwrap();
        prop_assert_eq!(dy.report.lhs_rank, dy.report.rhs_rank);
        prop_assert!(naturality_check(&dx, &dy, &f, &options.tolerances).is_ok());
    }

    #[test]
    fn pullback_is_contravariantly_functorial(case in 0..SETTINGS.len(), seed in any::<u64>()) {
        let s = setting(case);
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trivial = SubgroupHandle::trivial(s.group());
        let z = random_gset_over(&trivial, 5, &mut rng);
        let g = random_map_into(&z, &trivial, 5, &mut rng);
        let f = random_map_into(g.source(), &trivial, 5, &mut rng);
        let tw = s.twist_g::<f64>();
        let gf = f.then(&g).unwrap();
        let pf = pullback_matrix(&tw, &f, seed, &tol).unwrap();
        let pg = pullback_matrix(&tw, &g, seed, &tol).unwrap();
        let pgf = pullback_matrix(&tw, &gf, seed, &tol).unwrap();
        prop_assert_eq!(pgf, pf.mul(&pg));
    }

    #[test]
    fn coboundary_twist_keeps_dimensions(n in prop::sample::select(vec![2usize, 4, 6]), exps in prop::collection::vec(0i64..12, 12)) {
        let alpha = dihedral_alpha(n).unwrap();
        let g = alpha.group().clone();
        let c: Vec<Complex64> = (0..g.order()).map(|x| if x == 0 { Complex64::new(1.0, 0.0) } else { root_of_unity(exps[x % 12], 12) }).collect();
        let twisted = alpha.to_numeric::<f64>().times_coboundary(&c);
        prop_assert!(twisted.report().passes(1e-10, 1e-10));
        let tol = Tolerances::default();
        let base = irreducibles::<f64>(Twist::Exact(Arc::new(alpha)), 0, &tol).unwrap();
        let moved = irreducibles::<f64>(Twist::Numeric(Arc::new(twisted)), 0, &tol).unwrap();
        prop_assert_eq!(base.dims(), moved.dims());
        prop_assert_eq!(moved.sum_of_squares(), g.order());
    }
}

