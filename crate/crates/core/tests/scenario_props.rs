mod common;

use ctcsim::db_model::SolveMethod;
use ctcsim::heisenberg::TimeDistribution;
use ctcsim::qlinalg::{density_from_bloch, trace_distance, DensityMatrix, GateName};
use ctcsim::scenario::{compare, named_scenario, run_db, run_heisenberg, BlockSpec, CircuitSpec, Convention, GateExpr};
use proptest::prelude::*;

fn single_block(block: BlockSpec) -> CircuitSpec {
    CircuitSpec {
        name: "single".into(),
        prep: named_scenario("cz").unwrap().prep,
        blocks: vec![block],
        locals: vec![GateName::I2; 2],
        overlap: TimeDistribution::OrthogonalLimit,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn conventions_round_trip(p in common::prep(), g in prop::sample::select(vec![GateName::Cz, GateName::Cnot, GateName::Swap])) {
        let with_swap = single_block(BlockSpec::new(GateExpr::of(&[g]), Convention::WithSwap)).with_prep(p);
        let bare = single_block(BlockSpec::new(GateExpr::of(&[g, GateName::Swap]), Convention::Bare)).with_prep(p);
        let (a, b) = (run_db(&with_swap, SolveMethod::Eigen).unwrap(), run_db(&bare, SolveMethod::Eigen).unwrap());
        prop_assert!(a.output.matrix().max_abs_diff(b.output.matrix()) < 1e-14);
        prop_assert_eq!(run_heisenberg(&with_swap), run_heisenberg(&bare));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn single_block_scenarios_never_diverge(p in common::regular_prep(), name in prop::sample::select(vec!["cz", "cnot"])) {
        let r = compare(&named_scenario(name).unwrap(), &p, SolveMethod::Eigen);
        prop_assert!(r.flags.agree && !r.flags.diverge, "{} {:?}: {}", name, p, r.flags);
        prop_assert!(r.max_component_delta.unwrap() < 1e-9);
    }

    #[test]
    fn chained_scenario_splits_by_half_the_prepared_norm(p in common::regular_prep()) {
        let r = compare(&named_scenario("chained_cnot_hadamard").unwrap(), &p, SolveMethod::Eigen);
        let db = r.db.as_ref().unwrap();
        prop_assert!(trace_distance(&db.output, &DensityMatrix::maximally_mixed()) < 1e-10);
        let h = r.bloch_heisenberg().unwrap();
        prop_assert!(h.max_component_delta(&p.bloch()) < 1e-12);
        prop_assert!((r.trace_distance.unwrap() - 0.5 * p.bloch().norm()).abs() < 1e-9);
        let rho_h = density_from_bloch(&h).unwrap();
        prop_assert!((trace_distance(&rho_h, &p.density())).abs() < 1e-12);
    }
}

#[test]
fn every_named_scenario_runs_both_engines() {
    for name in ctcsim::scenario::SCENARIO_NAMES {
        let spec = named_scenario(name).unwrap();
        assert!(run_db(&spec, SolveMethod::Both).is_ok(), "{name}");
        assert!(run_heisenberg(&spec).is_ok(), "{name}");
    }
}
