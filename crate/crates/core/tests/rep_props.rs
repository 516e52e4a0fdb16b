use std::collections::BTreeSet;

use lpa_core::algebra::{find_separating_path, is_zero_syntactic, multiply, normal_form, Element, Monomial};
use lpa_core::branching::{
    build_interval_system, build_rotation_system, closed_path_images, compose_path_map, validate_system,
    BranchingSystem,
};
use lpa_core::gen::{self, Sinks};
use lpa_core::graph::Graph;
use lpa_core::par::Exec;
use lpa_core::qfield::QNum;
use lpa_core::rep::{apply_element, FinSupp, SemanticOracle, ZeroVerdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn system(rng: &mut ChaCha8Rng, rotation: bool) -> (Graph, BranchingSystem) {
    if rotation {
        let g = gen::random_graph(rng, 4, 7, Sinks::Forbidden);
        let sys = build_rotation_system(&g).unwrap();
        (g, sys)
    } else {
        let g = gen::random_graph(rng, 4, 7, Sinks::Allowed);
        let sys = build_interval_system(&g);
        (g, sys)
    }
}

fn random_vector(rng: &mut ChaCha8Rng, sys: &BranchingSystem) -> FinSupp {
    let mut phi = FinSupp::zero();
    for _ in 0..3 {
        phi.add(gen::random_point(rng, sys), gen::random_rational(rng));
    }
    phi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_is_multiplicative_and_linear(seed in any::<u64>(), rotation in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, sys) = system(&mut rng, rotation);
        let x = gen::random_element(&mut rng, &g, 3, 3);
        let y = gen::random_element(&mut rng, &g, 3, 3);
        let phi = random_vector(&mut rng, &sys);
        let psi = random_vector(&mut rng, &sys);
        prop_assert_eq!(
            apply_element(&sys, &multiply(&x, &y), &phi),
            apply_element(&sys, &x, &apply_element(&sys, &y, &phi))
        );
        prop_assert_eq!(
            apply_element(&sys, &(x.clone() + y.clone()), &phi),
            apply_element(&sys, &x, &phi).plus(&apply_element(&sys, &y, &phi))
        );
        prop_assert_eq!(
            apply_element(&sys, &x, &phi.plus(&psi)),
            apply_element(&sys, &x, &phi).plus(&apply_element(&sys, &x, &psi))
        );
    }

    #[test]
    fn unit_acts_as_identity(seed in any::<u64>(), rotation in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, sys) = system(&mut rng, rotation);
        let phi = random_vector(&mut rng, &sys);
        prop_assert_eq!(apply_element(&sys, &Element::unit(&g), &phi), phi);
    }

    #[test]
    fn constructed_zeros_act_as_zero(seed in any::<u64>(), rotation in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, sys) = system(&mut rng, rotation);
        let z = gen::random_zero_element(&mut rng, &g, 3);
        for p in sys.cell_points() {
            prop_assert!(apply_element(&sys, &z, &FinSupp::delta(p)).is_zero());
        }
    }

    #[test]
    fn nonzero_verdicts_carry_a_witness(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, sys) = system(&mut rng, true);
        let oracle = SemanticOracle::certify(sys.clone(), 4).unwrap();
        let x = gen::random_element(&mut rng, &g, 4, 3);
        let v = oracle.zero_test(&x);
        prop_assert_eq!(v.is_zero(), is_zero_syntactic(&g, &x));
        if let ZeroVerdict::Nonzero { z, w, coeff } = v {
            prop_assert!(z.is_rational());
            prop_assert_eq!(apply_element(&sys, &x, &FinSupp::delta(z)).get(&w), coeff);
        }
    }

    #[test]
    fn separating_path_isolates_a_nonzero_part(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = system(&mut rng, true);
        let x = normal_form(&g, &gen::random_element(&mut rng, &g, 4, 3));
        match find_separating_path(&g, &x, 4) {
            Some(p) => {
                let m = Element::monomial(Monomial::path(p.clone()));
                prop_assert!(!is_zero_syntactic(&g, &multiply(&x, &m)));
            }
            None => prop_assert!(is_zero_syntactic(&g, &x)),
        }
    }

    #[test]
    fn closed_path_images_are_distinct(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, sys) = system(&mut rng, true);
        for v in g.vertices() {
            let z = sys.domain_region(v).some_point().unwrap().clone();
            let z = QNum::from_rational(z.rational_part().clone());
            if !sys.domain_region(v).contains(&z) {
                continue;
            }
            let images = closed_path_images(&sys, v, &z, 4);
            for (p, w) in &images {
                prop_assert_eq!(Some(w.clone()), compose_path_map(&sys, p).unwrap().apply(&z));
                prop_assert!(!w.sqrt2_coeff().eq(&num_traits::Zero::zero()));
            }
            let distinct: BTreeSet<&QNum> = images.iter().map(|(_, w)| w).collect();
            prop_assert_eq!(distinct.len(), images.len());
        }
    }

    #[test]
    fn random_systems_validate(seed in any::<u64>(), rotation in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, sys) = system(&mut rng, rotation);
        prop_assert_eq!(validate_system(&sys).map_err(|v| v.len()), Ok(()));
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (g, sys) = system(&mut rng, true);
        let seq = SemanticOracle::certify_with(sys.clone(), 3, Exec::Sequential).unwrap();
        let par = SemanticOracle::certify_with(sys.clone(), 3, Exec::Parallel).unwrap();
        assert_eq!(seq.certificates(), par.certificates());
        for _ in 0..5 {
            let x = gen::random_element(&mut rng, &g, 4, 3);
            assert_eq!(seq.zero_test(&x), par.zero_test(&x));
        }
        assert_eq!(
            lpa_core::rep::relation_suite(&sys, Exec::Sequential),
            lpa_core::rep::relation_suite(&sys, Exec::Parallel)
        );
    }
}
