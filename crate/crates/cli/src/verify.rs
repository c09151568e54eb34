//! The `verify` subcommands.

use std::f64::consts::PI;
use std::fmt::Write as _;

use eprsim::inequality::{
    bell_like, bell_original, replay_bell_derivation_uniform, verify_appendix_d, verify_appendix_d_random,
    AppendixDSummary, DerivationReport,
};
use eprsim::models::{
    bell_constrained_record, eight_partition_aggregate, qm_joint_table, BellConstrainedModel, Cell, EightPartition,
    EightPartitionModel, FactualModel, QmSinglet, SixFunctionRecord,
};
use eprsim::{
    derive_trial_draws, estimate_correlation, estimate_pair_statistics, trial_draws, DetectorTriple, DomainTag,
    Error, LhvModel, SeedSpec,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ModelKind;
use crate::error::{CliError, CliResult};
use crate::output::format_pi_multiple;

/// Result of one verification command: text for people, JSON for tools.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

fn appendix_d_line(s: &AppendixDSummary) -> String {
    match s.worst {
        Some(w) => format!(
            "{} violations, worst margin {:.6} at ({}, {})",
            s.violations,
            w.report.margin,
            format_pi_multiple(w.theta_ab),
            format_pi_multiple(w.theta_ac)
        ),
        None => format!("{} violations", s.violations),
    }
}

pub fn appendix_d(grid: usize, random: u64, master_seed: u64) -> CliResult<VerifyOutcome> {
    let grid_summary = verify_appendix_d(grid).map_err(|e| CliError::Usage(e.to_string()))?;
    let random_summary = verify_appendix_d_random(random, &SeedSpec::new(master_seed, "verify/appendix-d"));
    let both = grid_summary.merge(random_summary);

    let mut text = appendix_d_line(&both);
    text.push('\n');
    let _ = writeln!(text, "  grid {grid}x{grid}: {}", appendix_d_line(&grid_summary));
    let _ = writeln!(text, "  random {random} pairs: {}", appendix_d_line(&random_summary));
    let sub = both.sub_checks;
    let _ = writeln!(
        text,
        "  sub-checks: x(y+1) <= y+1 failed {}, y(1+x) <= 1+x failed {}, cos ab <= 1 failed {}, cos ac <= 1 failed {}",
        sub.left, sub.right, sub.cos_ab, sub.cos_ac
    );
    Ok(VerifyOutcome {
        text,
        json: json!({ "grid": grid_summary, "random": random_summary, "combined": both }),
        passed: both.passed(),
    })
}

pub struct DerivationOptions {
    pub model: ModelKind,
    pub trials: u64,
    pub cell: Option<u32>,
    pub theta_ab_deg: f64,
    pub theta_ac_deg: f64,
    pub master_seed: u64,
}

fn sample_records(opts: &DerivationOptions) -> CliResult<Vec<SixFunctionRecord>> {
    let triple = DetectorTriple::planar_degrees(0.0, opts.theta_ab_deg, opts.theta_ac_deg);
    let seed = SeedSpec::new(opts.master_seed, &format!("verify/derivation/{}", opts.model.name()));
    let draws = trial_draws(&seed, 0..opts.trials);
    let usage = |e: Error| CliError::Usage(e.to_string());
    match opts.model {
        ModelKind::BellConstrained => {
            if opts.cell.is_some() {
                return Err(CliError::Usage("--cell only applies to the eight-partition model".into()));
            }
            let model = BellConstrainedModel::new(triple);
            draws
                .map(|d| Ok(model.record(&d.lambda(DomainTag::SHARED).map_err(usage)?)))
                .collect()
        }
        ModelKind::EightPartition => {
            let partition = match opts.cell {
                Some(c) => EightPartition::single(Cell::new(c).map_err(usage)?),
                None => EightPartition::uniform(),
            };
            let model = EightPartitionModel::new(triple, partition).map_err(usage)?;
            draws
                .map(|d| model.sample(&d).and_then(|l| model.record(&l)).map_err(usage))
                .collect()
        }
        ModelKind::Qm | ModelKind::Factual => Err(CliError::Usage(format!(
            "model {} has no common set of six outcome functions to replay",
            opts.model.name()
        ))),
    }
}

fn derivation_text(opts: &DerivationOptions, report: &DerivationReport) -> String {
    let mut text = String::new();
    let cell = opts.cell.map(|c| format!(", cell {c}")).unwrap_or_default();
    let _ = writeln!(
        text,
        "replayed derivation on {} records (model {}{cell}, theta_ab = {} deg, theta_ac = {} deg)",
        report.samples,
        opts.model.name(),
        opts.theta_ab_deg,
        opts.theta_ac_deg
    );
    let _ = writeln!(text, "  |∫ [A₁B₁ − A₂B₂] ρ| = {:.6}", report.lhs);
    for step in &report.steps {
        let assumption = match step.assumption {
            Some(a) if step.assumption_holds => format!(", {a} holds"),
            Some(a) => format!(", {a} FAILS"),
            None => String::new(),
        };
        let bound = if step.bound_holds { "bounds" } else { "does not bound" };
        let _ = writeln!(text, "  {} = {:.6} ({bound} the left side{assumption})", step.label, step.value);
    }
    match report.violation {
        None => {
            let _ = writeln!(text, "all three assumptions hold on every sampled record");
        }
        Some(v) => {
            let _ = writeln!(text, "{} flagged, first at record {}", v.assumption, v.record);
        }
    }
    let c = &report.conclusion;
    let _ = writeln!(
        text,
        "conclusion: |E(a,b) − E(a,c)| = {:.6} vs 1 + E(b,c) = {:.6}: {}",
        c.lhs,
        c.rhs,
        if c.satisfied { "holds" } else { "fails" }
    );
    text
}

pub fn derivation(opts: &DerivationOptions) -> CliResult<VerifyOutcome> {
    let records = sample_records(opts)?;
    let report = replay_bell_derivation_uniform(&records).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(VerifyOutcome {
        text: derivation_text(opts, &report),
        json: serde_json::to_value(&report).expect("report serializes"),
        passed: report.all_assumptions_hold() && report.consistent(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Angle pairs uniform on [0, π)², reproducible from the seed.
fn random_angles(seed: u64, label: &str, count: u64) -> Vec<(f64, f64)> {
    let seed = SeedSpec::new(seed, label);
    trial_draws(&seed, 0..count).map(|d| (d.u1() * PI, d.u2() * PI)).collect()
}

fn models_for(triple: DetectorTriple) -> Vec<Box<dyn LhvModel>> {
    vec![
        Box::new(QmSinglet),
        Box::new(BellConstrainedModel::new(triple)),
        Box::new(FactualModel::new(triple.pairs().to_vec()).expect("three distinct scenarios")),
        Box::new(EightPartitionModel::new(triple, EightPartition::uniform()).expect("uniform partition")),
    ]
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String, String>) -> InvariantResult {
    match run() {
        Ok(detail) => InvariantResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => InvariantResult {
            name,
            passed: false,
            detail,
        },
    }
}

pub fn invariant_suite(master_seed: u64) -> Vec<InvariantResult> {
    let mut results = Vec::new();

    results.push(check("joint tables are normalized with -cos expectation", || {
        for i in 0..=1000 {
            let theta = PI * i as f64 / 1000.0;
            let t = qm_joint_table(theta).map_err(|e| e.to_string())?;
            if (t.expectation() + theta.cos()).abs() > 1e-12 {
                return Err(format!("E({theta}) = {}", t.expectation()));
            }
        }
        Ok("1001 angles".into())
    }));

    results.push(check("records under the assumptions satisfy them pointwise", || {
        let seed = SeedSpec::new(master_seed, "invariants/records");
        for (i, d) in trial_draws(&seed, 0..100_000).enumerate() {
            let (t_ab, t_ac) = (d.selector() * PI, (1.0 - d.selector()) * PI);
            let lambda = d.lambda(DomainTag::SHARED).map_err(|e| e.to_string())?;
            let r = bell_constrained_record(&lambda, t_ab, t_ac).map_err(|e| e.to_string())?;
            if !r.relations().satisfies_bell_assumptions() {
                return Err(format!("record {i}: {r:?}"));
            }
        }
        Ok("100000 records".into())
    }));

    results.push(check("factual domains reject other scenarios", || {
        let triple = DetectorTriple::planar_degrees(0.0, 60.0, 120.0);
        let model = FactualModel::new(triple.pairs().to_vec()).map_err(|e| e.to_string())?;
        let seed = SeedSpec::new(master_seed, "invariants/factual");
        let mut count = 0;
        for i in 0..10_000 {
            let d = derive_trial_draws(&seed, i);
            for own in triple.pairs() {
                let lambda = model.sample_lambda(&own, &d).map_err(|e| e.to_string())?;
                for other in triple.pairs().iter().filter(|p| p.scenario != own.scenario) {
                    match model.evaluate(&lambda, other) {
                        Err(Error::SettingMismatch { .. }) => count += 1,
                        other => return Err(format!("cross evaluation gave {other:?}")),
                    }
                }
            }
        }
        Ok(format!("{count} cross evaluations, all rejected"))
    }));

    results.push(check("bell-like inequality holds for every model (exact)", || {
        let angles = random_angles(master_seed, "invariants/bell-like", 10_000);
        for &(t_ab, t_ac) in &angles {
            let triple = DetectorTriple::planar(t_ab, t_ac);
            for model in models_for(triple) {
                let e = |p| model.exact_correlation(&p).ok_or("no exact value".to_string());
                let r = bell_like(e(triple.pair_ab())?, e(triple.pair_ac())?, t_ab, t_ac).map_err(|e| e.to_string())?;
                if !r.satisfied {
                    return Err(format!("{} at ({t_ab}, {t_ac}): {r:?}", model.name()));
                }
            }
        }
        Ok(format!("{} angle pairs x 4 models", angles.len()))
    }));

    results.push(check("bell original inequality holds under the assumptions (exact)", || {
        let angles = random_angles(master_seed, "invariants/original", 10_000);
        for &(t_ab, t_ac) in &angles {
            let e = BellConstrainedModel::new(DetectorTriple::planar(t_ab, t_ac)).exact();
            let r = bell_original(e.e_ab, e.e_ac, e.e_bc).map_err(|e| e.to_string())?;
            if !r.satisfied {
                return Err(format!("({t_ab}, {t_ac}): {r:?}"));
            }
        }
        Ok(format!("{} angle pairs", angles.len()))
    }));

    results.push(check("appendix-d sweep has no violations", || {
        let grid = verify_appendix_d(257).map_err(|e| e.to_string())?;
        let random = verify_appendix_d_random(10_000, &SeedSpec::new(master_seed, "invariants/appendix-d"));
        let both = grid.merge(random);
        if both.passed() {
            Ok(format!("{} nodes", both.nodes))
        } else {
            Err(appendix_d_line(&both))
        }
    }));

    results.push(check("partition aggregate equals 1 - cos(ab) cos(ac)", || {
        let seed = SeedSpec::new(master_seed, "invariants/aggregate");
        for i in 0..1000 {
            let a = derive_trial_draws(&seed, 2 * i);
            let b = derive_trial_draws(&seed, 2 * i + 1);
            let raw = [a.0, b.0].concat();
            let total: f64 = raw.iter().sum();
            let measures: [f64; 8] = std::array::from_fn(|k| raw[k] / total);
            let Ok(partition) = EightPartition::new(measures) else { continue };
            let (t_ab, t_ac) = (a.u1() * PI, b.u2() * PI);
            let agg = eight_partition_aggregate(&partition, t_ab, t_ac).map_err(|e| e.to_string())?;
            if (agg - (1.0 - t_ab.cos() * t_ac.cos())).abs() > 1e-12 {
                return Err(format!("({t_ab}, {t_ac}): {agg}"));
            }
        }
        Ok("1000 measure vectors".into())
    }));

    results.push(check("estimates do not depend on sharding", || {
        let triple = DetectorTriple::planar_degrees(0.0, 40.0, 125.0);
        for model in models_for(triple) {
            for pair in triple.pairs() {
                let seed = SeedSpec::for_scenario(master_seed, model.name(), &pair);
                let one = estimate_pair_statistics(model.as_ref(), &pair, 10_000, &seed, 1).map_err(|e| e.to_string())?;
                let four = estimate_pair_statistics(model.as_ref(), &pair, 10_000, &seed, 4).map_err(|e| e.to_string())?;
                if one != four {
                    return Err(format!("{} scenario {}", model.name(), pair.scenario));
                }
            }
        }
        Ok("4 models x 3 scenarios".into())
    }));

    results.push(check("derivation replay flags exactly the broken assumption", || {
        let seed = SeedSpec::new(master_seed, "invariants/derivation");
        for cell in Cell::ALL {
            let model = EightPartitionModel::new(DetectorTriple::planar(1.0, 2.0), EightPartition::single(cell))
                .map_err(|e| e.to_string())?;
            let records: Vec<_> = trial_draws(&seed, 0..2000)
                .map(|d| model.sample(&d).and_then(|l| model.record(&l)))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let report = replay_bell_derivation_uniform(&records).map_err(|e| e.to_string())?;
            let expected = eprsim::inequality::Assumption::ALL.into_iter().find(|a| !a.holds(&cell.relations()));
            if !report.consistent() || report.violation.map(|v| v.assumption) != expected {
                return Err(format!("{cell}: {:?}", report.violation));
            }
        }
        Ok("8 cells".into())
    }));

    results.push(check("singlet simulation matches -cos", || {
        for deg in [0.0, 30.0, 60.0, 90.0, 120.0, 180.0] {
            let triple = DetectorTriple::planar_degrees(0.0, deg, deg);
            let pair = triple.pair_ab();
            let est = estimate_correlation(&QmSinglet, &pair, 100_000, &SeedSpec::for_scenario(master_seed, "qm", &pair))
                .map_err(|e| e.to_string())?;
            if est.agrees_within(4.0) != Some(true) {
                return Err(format!("{deg} deg: {est:?}"));
            }
        }
        Ok("6 angles".into())
    }));

    results
}

pub fn invariants(master_seed: u64) -> VerifyOutcome {
    let results = invariant_suite(master_seed);
    let mut text = String::new();
    for r in &results {
        let mark = if r.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(text, "{mark} {}: {}", r.name, r.detail);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(text, "{passed}/{} invariants hold", results.len());
    VerifyOutcome {
        text,
        json: serde_json::to_value(&results).expect("results serialize"),
        passed: passed == results.len(),
    }
}
