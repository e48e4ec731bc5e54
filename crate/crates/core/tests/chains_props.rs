mod common;

use coarse_ends::chains::{
    k_chain_components, k_chain_components_with, k_chain_path, NeighborSearch,
};
use coarse_ends::metric::{MetricKind, MetricSpaceSample, PointId};
use common::{canonical, oracle_components};
use proptest::prelude::*;

fn cloud() -> impl Strategy<Value = MetricSpaceSample> {
    (1usize..=4, any::<bool>()).prop_flat_map(|(dim, max)| {
        prop::collection::vec(prop::collection::vec(-6.0f64..6.0, dim), 1..120).prop_map(
            move |mut pts| {
                pts.insert(0, vec![0.0; dim]);
                let metric = if max {
                    MetricKind::Max
                } else {
                    MetricKind::Euclidean
                };
                MetricSpaceSample::from_coords(pts, metric, 0, 30.0, 1.0).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_search_matches_oracle(x in cloud(), k in 0.1f64..3.0) {
        let all: Vec<PointId> = (0..x.len()).collect();
        let grid = k_chain_components_with(&x, &all, k, NeighborSearch::Grid).unwrap();
        let pairs = k_chain_components_with(&x, &all, k, NeighborSearch::AllPairs).unwrap();
        let oracle = oracle_components(&x, &all, k);
        prop_assert_eq!(canonical(&grid), oracle.clone());
        prop_assert_eq!(canonical(&pairs), oracle);
    }

    #[test]
    fn larger_k_coarsens(x in cloud(), k in 0.1f64..2.0, extra in 0.0f64..2.0) {
        let all: Vec<PointId> = (0..x.len()).collect();
        let fine = k_chain_components(&x, &all, k).unwrap();
        let coarse = k_chain_components(&x, &all, k + extra).unwrap();
        prop_assert!(fine.refines(&coarse));
        prop_assert!(coarse.count() <= fine.count());
    }

    #[test]
    fn paths_exist_exactly_within_components(x in cloud(), k in 0.3f64..2.0, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let subset = x.ball_complement(1.0).unwrap();
        prop_assume!(!subset.is_empty());
        let (a, b) = (subset[a.index(subset.len())], subset[b.index(subset.len())]);
        let parts = k_chain_components(&x, &subset, k).unwrap();
        let path = k_chain_path(&x, &subset, k, a, b).unwrap();
        prop_assert_eq!(path.is_some(), parts.component_of(a) == parts.component_of(b));
        if let Some(chain) = path {
            prop_assert!(chain.is_valid(&x));
            prop_assert_eq!(chain.first(), Some(a));
            prop_assert_eq!(chain.last(), Some(b));
            prop_assert!(chain.points.iter().all(|p| subset.binary_search(p).is_ok()));
        }
    }
}

#[test]
fn components_serialize_as_id_lists() {
    let x = MetricSpaceSample::from_coords(
        vec![vec![0.0], vec![1.0], vec![5.0]],
        MetricKind::Euclidean,
        0,
        10.0,
        1.0,
    )
    .unwrap();
    let p = k_chain_components(&x, &[0, 1, 2], 1.0).unwrap();
    let json = serde_json::to_string(&p).unwrap();
    assert_eq!(json, r#"{"K":1.0,"components":[[0,1],[2]]}"#);
}
