use eprsim::models::{cell_exact_bound, cell_tables, eight_partition_aggregate, Cell, EightPartition};
use proptest::prelude::*;
use std::f64::consts::PI;

fn measures() -> impl Strategy<Value = [f64; 8]> {
    proptest::array::uniform8(0.0f64..1.0).prop_filter_map("nonzero", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-6).then(|| raw.map(|w| w / total))
    })
}

proptest! {
    #[test]
    fn aggregate_bound_is_measure_independent(m in measures(), t_ab in 0.0f64..=PI, t_ac in 0.0f64..=PI) {
        let Ok(partition) = EightPartition::new(m) else { return Ok(()) };
        let agg = eight_partition_aggregate(&partition, t_ab, t_ac).unwrap();
        prop_assert!((agg - (1.0 - t_ab.cos() * t_ac.cos())).abs() <= 1e-12);
    }

    #[test]
    fn every_cell_obeys_its_bound(t_ab in 0.0f64..=PI, t_ac in 0.0f64..=PI) {
        for cell in Cell::ALL {
            let b = cell_exact_bound(cell, t_ab, t_ac).unwrap();
            prop_assert!(b.difference.abs() <= b.bound + 1e-12, "{} {:?}", cell, b);
            let t = cell_tables(cell, t_ab, t_ac).unwrap();
            prop_assert!((t.a1_b1.expectation() + t_ab.cos()).abs() < 1e-12);
            prop_assert!((t.a2_b2.expectation() + t_ac.cos()).abs() < 1e-12);
        }
    }
}
