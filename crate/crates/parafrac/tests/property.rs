//! Property tests for the counting and formula invariants.

use parafrac::cover::{estimate_dimension_with, occupancy, Gauge, PointCloud};
use parafrac::formulas;
use proptest::prelude::*;

fn cloud_strategy(max_points: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec((-1.0f64..2.0, -1.0f64..2.0), 1..max_points).prop_map(|rows| {
        let mut c = PointCloud::new(2);
        for (t, x) in rows {
            c.push(&[t, x]);
        }
        c
    })
}

proptest! {
    /// Adding points never decreases any occupancy count.
    #[test]
    fn occupancy_monotone_under_refinement(
        base in cloud_strategy(200),
        extra in cloud_strategy(100),
        alpha in 0.3f64..2.0,
    ) {
        let levels: Vec<u32> = (0..8).collect();
        let before = occupancy(&base, alpha, &levels, Gauge::TimeGauge).unwrap();
        let mut bigger = base.clone();
        bigger.extend_from(&extra);
        let after = occupancy(&bigger, alpha, &levels, Gauge::TimeGauge).unwrap();
        for i in 0..levels.len() {
            prop_assert!(after.counts[i] >= before.counts[i]);
        }
    }

    /// Exact count-level subadditivity under union, and domination by
    /// each part.
    #[test]
    fn occupancy_union_subadditive(
        a in cloud_strategy(200),
        b in cloud_strategy(200),
        alpha in 0.3f64..2.0,
    ) {
        let levels: Vec<u32> = (0..8).collect();
        let la = occupancy(&a, alpha, &levels, Gauge::TimeGauge).unwrap();
        let lb = occupancy(&b, alpha, &levels, Gauge::TimeGauge).unwrap();
        let mut u = a.clone();
        u.extend_from(&b);
        let lu = occupancy(&u, alpha, &levels, Gauge::TimeGauge).unwrap();
        for i in 0..levels.len() {
            prop_assert!(lu.counts[i] <= la.counts[i] + lb.counts[i]);
            prop_assert!(lu.counts[i] >= la.counts[i].max(lb.counts[i]));
        }
    }

    /// The two gauge conventions agree bit-for-bit on every ledger.
    #[test]
    fn gauge_identity(cloud in cloud_strategy(300), alpha in 0.3f64..2.0) {
        let levels: Vec<u32> = (0..10).collect();
        let ledger = occupancy(&cloud, alpha, &levels, Gauge::TimeGauge).unwrap();
        let t = estimate_dimension_with(&ledger, Gauge::TimeGauge).unwrap();
        let d = estimate_dimension_with(&ledger, Gauge::DiamGauge).unwrap();
        prop_assert_eq!(t.value.to_bits(), d.value.to_bits());
        prop_assert_eq!(t.stderr.to_bits(), d.stderr.to_bits());
    }

    /// The graph formula value always lies inside the matching a priori
    /// interval (alpha >= 1 feeds phi_alpha; alpha <= 1 feeds phi_1).
    #[test]
    fn apriori_contains_graph_value(
        alpha in 0.05f64..2.0,
        d in 1usize..4,
        phi_frac in 0.0f64..1.0,
    ) {
        let phi = phi_frac * (d as f64 + 1.0);
        let g = formulas::graph_dim_with_drift(alpha, d, phi).unwrap().value.point();
        let bounds = formulas::apriori_dim_bounds(alpha.max(1.0), d, phi).unwrap().value;
        prop_assert!(bounds.contains(g, 1e-12));
    }

    /// Range value never exceeds the graph value or the ambient
    /// dimension.
    #[test]
    fn range_below_graph_and_ambient(
        alpha in 0.05f64..2.0,
        d in 1usize..4,
        phi_frac in 0.0f64..1.0,
    ) {
        let phi = phi_frac * (d as f64 + 1.0);
        let g = formulas::graph_dim_with_drift(alpha, d, phi).unwrap().value.point();
        let r = formulas::range_dim_with_drift(alpha, d, phi).unwrap().value.point();
        prop_assert!(r <= g + 1e-12);
        prop_assert!(r <= d as f64 + 1e-12);
    }
}
