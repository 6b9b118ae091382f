mod common;

use proptest::prelude::*;

fn assert_ok(seed: u64, name: &str, r: common::Check) -> Result<(), TestCaseError> {
    r.map_err(|e| TestCaseError::fail(format!("seed {seed}, {name}: {e}")))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn jsr_bounds_ordered_and_monotone(seed in any::<u64>()) {
        assert_ok(seed, "jsr", common::jsr_ordering(&common::random_family(seed)))?;
    }

    #[test]
    fn covers_contain_fixed_points(seed in any::<u64>()) {
        let f = common::random_family(seed);
        let (_, cover) = common::cover_of(&f, common::T_CHECK);
        assert_ok(seed, "fixed points", common::fixed_points_contained(&f, &cover))?;
    }

    #[test]
    fn weak_components_partition_cover(seed in any::<u64>()) {
        let (_, cover) = common::cover_of(&common::random_family(seed), common::T_CHECK);
        assert_ok(seed, "weak partition", common::weak_partition(&cover))?;
    }

    #[test]
    fn separation_witnesses_are_equivariant(seed in any::<u64>()) {
        let (_, cover) = common::cover_of(&common::random_family(seed), common::T_CHECK);
        assert_ok(seed, "equivariance", common::witness_equivariance(&cover))?;
    }

    #[test]
    fn outer_cover_survives_extra_sweep(seed in any::<u64>()) {
        let (engine, cover) = common::cover_of(&common::random_family(seed), common::T_CHECK);
        assert_ok(seed, "sweep", common::sweep_soundness(&engine, &cover, seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn family_scan_is_thread_count_independent(seed in any::<u64>()) {
        assert_ok(seed, "scan", common::scan_reproducible(&common::random_family(seed)))?;
    }
}
