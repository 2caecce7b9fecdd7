use std::sync::Arc;

use proptest::prelude::*;

use oclearn::learners::{agnostic_wrap, single_linkage_learn, BaseLearner, Classifier, DirectionSearch};
use oclearn::problems::{draw_sample, generate, GeneratorSpec, LabeledOracle, Layout, ProblemInstance, RegionShape};

fn oracle(inst: &Arc<ProblemInstance>, n: usize, eta: f64, seed: u64) -> LabeledOracle {
    let points = Arc::new(draw_sample(inst, n, seed).unwrap().points);
    LabeledOracle::new(inst.clone(), points, eta, seed ^ 0x5eed).unwrap()
}

fn ecoc(seed: u64, components: usize, margin: f64) -> Arc<ProblemInstance> {
    Arc::new(generate(&GeneratorSpec::Ecoc { d: 2, components, margin, shape: RegionShape::Ball }, seed).unwrap())
}

/// A learner paired with an instance it applies to.
fn learner_case() -> impl Strategy<Value = (BaseLearner, Arc<ProblemInstance>)> {
    (0usize..4, 0u64..500).prop_map(|(which, seed)| match which {
        0 => (BaseLearner::SingleLinkage { r_c: 0.1, epsilon: 0.1 }, ecoc(seed, 3, 0.2)),
        1 => (BaseLearner::Hierarchical { t: 15, seed }, ecoc(seed, 3, 0.2)),
        2 => {
            let inst = Arc::new(generate(&GeneratorSpec::OneVsAll { d: 3, classes: 3, b_min: 0.5 }, seed).unwrap());
            let (c_lb, c_ub) = (inst.certified.c_lb, inst.certified.c_ub);
            (BaseLearner::RobustSphere { r_c: 0.3, epsilon: 0.1, c_lb, c_ub, tau: Some(0.01) }, inst)
        }
        _ => {
            let spec = GeneratorSpec::BoundaryFeatures { d: 2, layout: Layout::Staircase2d, scale: 0.1 };
            let inst = Arc::new(generate(&spec, seed).unwrap());
            let learner = BaseLearner::PlaneDetection {
                r: 0.05,
                tau: 0.002,
                cells: inst.num_classes(),
                domain: inst.domain.clone(),
                search: DirectionSearch { seed, ..DirectionSearch::default() },
            };
            (learner, inst)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn single_linkage_below_margin_is_pure(seed in 0u64..1000, components in 2usize..6) {
        let margin = 0.2;
        let inst = ecoc(seed, components, margin);
        let mut o = oracle(&inst, 600, 0.0, seed);
        let out = single_linkage_learn(&mut o, 0.9 * margin, 0.1).unwrap();
        let Classifier::Clusters(c) = &out.classifier else { panic!("expected clusters") };
        prop_assert!(out.ledger.total() <= c.num_clusters());
        prop_assert!(out.ledger.total() <= inst.certified.component_count);
        for (i, x) in c.points.rows().enumerate() {
            if let Some(y) = c.labels[c.cluster_of[i]] {
                prop_assert_eq!(inst.label(x).unwrap(), y);
            }
        }
    }

    #[test]
    fn ledger_matches_oracle_count(
        (learner, inst) in learner_case(),
        eta in prop_oneof![Just(0.0), 0.0f64..0.2],
        t in prop::option::of(1usize..4),
    ) {
        let mut o = oracle(&inst, 800, eta, 3);
        let before = o.query_count();
        let out = match t {
            None => learner.learn(&mut o),
            Some(t) => agnostic_wrap(&learner, &mut o, t, 9),
        }
        .unwrap();
        prop_assert_eq!(out.ledger.total() as u64, o.query_count() - before);
        prop_assert!(out.ledger.entries.windows(2).all(|w| w[0].step < w[1].step));
    }

    #[test]
    fn learning_is_deterministic((learner, inst) in learner_case()) {
        let run = || {
            let mut o = oracle(&inst, 800, 0.05, 4);
            learner.learn(&mut o).unwrap()
        };
        let (a, b) = (run(), run());
        prop_assert_eq!(&a.classifier, &b.classifier);
        prop_assert_eq!(&a.ledger, &b.ledger);
        let probe = draw_sample(&inst, 200, 77).unwrap().points;
        prop_assert_eq!(a.classifier.predict_all(&probe).unwrap(), b.classifier.predict_all(&probe).unwrap());
    }

    #[test]
    fn accepted_planes_are_sparse(seed in 0u64..1000, tau in 0.001f64..0.01) {
        let spec = GeneratorSpec::BoundaryFeatures { d: 2, layout: Layout::Grid2d, scale: 0.1 };
        let inst = Arc::new(generate(&spec, seed).unwrap());
        let learner = BaseLearner::PlaneDetection {
            r: 0.05,
            tau,
            cells: inst.num_classes(),
            domain: inst.domain.clone(),
            search: DirectionSearch { seed, ..DirectionSearch::default() },
        };
        let mut o = oracle(&inst, 1000, 0.0, seed);
        let out = learner.learn(&mut o).unwrap();
        let Classifier::Cells { planes, .. } = &out.classifier else { panic!("expected cells") };
        for p in &planes.planes {
            prop_assert!((p.count as f64) < tau * planes.n as f64);
        }
    }

    #[test]
    fn noiseless_single_vote_wrap_is_base((learner, inst) in learner_case()) {
        let mut a = oracle(&inst, 800, 0.0, 6);
        let mut b = oracle(&inst, 800, 0.0, 6);
        let base = learner.learn(&mut a).unwrap();
        let wrapped = agnostic_wrap(&learner, &mut b, 1, 0).unwrap();
        let probe = draw_sample(&inst, 300, 78).unwrap().points;
        prop_assert_eq!(base.classifier.predict_all(&probe).unwrap(), wrapped.classifier.predict_all(&probe).unwrap());
        prop_assert_eq!(base.ledger.total(), wrapped.ledger.total());
    }
}
