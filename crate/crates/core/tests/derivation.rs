use eprsim::inequality::{replay_bell_derivation_uniform, Assumption};
use eprsim::models::{bell_constrained_record, eight_partition_record, Cell};
use eprsim::{trial_draws, DomainTag, SeedSpec};

#[test]
fn bell_constrained_sample_passes_every_step() {
    let seed = SeedSpec::new(5, "derivation");
    let records: Vec<_> = trial_draws(&seed, 0..100_000)
        .map(|d| bell_constrained_record(&d.lambda(DomainTag::SHARED).unwrap(), 1.0, 2.0).unwrap())
        .collect();
    let report = replay_bell_derivation_uniform(&records).unwrap();
    assert!(report.all_assumptions_hold());
    assert!(report.consistent());
    assert!(report.steps.iter().all(|s| s.assumption_holds && s.integrand_holds && s.bound_holds));
    assert!(report.conclusion.satisfied);
}

fn first_violation(cell: u32) -> Option<Assumption> {
    let cell = Cell::new(cell).unwrap();
    let seed = SeedSpec::new(5, "derivation-cells");
    let records: Vec<_> = trial_draws(&seed, 0..10_000)
        .map(|d| eight_partition_record(cell, &d.lambda(DomainTag(cell.index())).unwrap(), 0.8, 2.1).unwrap())
        .collect();
    let report = replay_bell_derivation_uniform(&records).unwrap();
    assert!(report.consistent());
    report.violation.map(|v| v.assumption)
}

#[test]
fn partition_cells_flag_their_broken_assumption() {
    assert_eq!(first_violation(1), None);
    assert_eq!(first_violation(2), Some(Assumption::Third));
    assert_eq!(first_violation(3), Some(Assumption::Second));
    assert_eq!(first_violation(5), Some(Assumption::First));
    assert_eq!(first_violation(8), Some(Assumption::First));
}
