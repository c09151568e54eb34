//! The experiment report, its text summary and its CSV table.

use std::fmt::Write as _;

use eprsim::inequality::InequalityReport;
use serde::{Deserialize, Serialize};

use crate::output::{format_optional, format_sig12, sig12};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario_id: u32,
    /// Which evolution function or readout time produced this scenario.
    pub label: String,
    pub alice: String,
    pub bob: String,
    /// Angle between the two detectors of this scenario.
    pub theta_ab_deg: f64,
    /// Azimuth of Bob's detector in the x-y plane.
    pub theta_bob_deg: f64,
    pub e_mc: f64,
    pub e_stderr: f64,
    pub e_exact: Option<f64>,
    pub n: u64,
    pub alice_mean: f64,
    pub alice_stderr: f64,
    pub bob_mean: f64,
    pub bob_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityResults {
    pub theta_ab_deg: f64,
    pub theta_ac_deg: f64,
    pub theta_bc_deg: f64,
    pub bell_original_mc: InequalityReport,
    pub bell_original_exact: Option<InequalityReport>,
    pub bell_like_mc: InequalityReport,
    pub bell_like_exact: Option<InequalityReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub model: String,
    pub master_seed: u64,
    pub trials: u64,
    pub scenarios: Vec<ScenarioResult>,
    pub inequalities: Option<InequalityResults>,
    pub checks: Vec<Check>,
}

pub(crate) fn rounded_report(r: InequalityReport) -> InequalityReport {
    InequalityReport {
        lhs: sig12(r.lhs),
        rhs: sig12(r.rhs),
        satisfied: r.satisfied,
        margin: sig12(r.margin),
    }
}

fn verdict(r: &InequalityReport) -> &'static str {
    if r.satisfied {
        "satisfied"
    } else {
        "violated"
    }
}

fn inequality_line(out: &mut String, what: &str, rhs_name: &str, source: &str, r: &InequalityReport) {
    let _ = writeln!(
        out,
        "  {what} ({source}): |E(a,b) - E(a,c)| = {:.6} vs {rhs_name} = {:.6}: {} (margin {:.6})",
        r.lhs,
        r.rhs,
        verdict(r),
        r.margin
    );
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "experiment {} (model {}, {} trials per scenario, seed {})",
            self.name, self.model, self.trials, self.master_seed
        );
        for s in &self.scenarios {
            let exact = s.e_exact.map(|e| format!(" (exact {e:.6})")).unwrap_or_default();
            let _ = writeln!(
                out,
                "  scenario {} {} {}-{} at {:.4} deg: E = {:.6} +/- {:.6}{exact}",
                s.scenario_id, s.label, s.alice, s.bob, s.theta_ab_deg, s.e_mc, s.e_stderr
            );
        }
        if let Some(ineq) = &self.inequalities {
            let _ = writeln!(
                out,
                "inequalities at theta_ab = {:.4} deg, theta_ac = {:.4} deg, theta_bc = {:.4} deg",
                ineq.theta_ab_deg, ineq.theta_ac_deg, ineq.theta_bc_deg
            );
            if let Some(r) = &ineq.bell_original_exact {
                inequality_line(&mut out, "bell original", "1 + E(b,c)", "exact", r);
            }
            inequality_line(&mut out, "bell original", "1 + E(b,c)", "simulated", &ineq.bell_original_mc);
            let rhs = "1 - cos(ab) cos(ac)";
            if let Some(r) = &ineq.bell_like_exact {
                inequality_line(&mut out, "bell-like", rhs, "exact", r);
            }
            inequality_line(&mut out, "bell-like", rhs, "simulated", &ineq.bell_like_mc);
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "checks: {passed}/{} passed", self.checks.len());
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "  {mark} {}: {}", c.name, c.detail);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("scenario_id,theta_ab_deg,theta_bob_deg,e_mc,e_stderr,e_exact,n\n");
        for s in &self.scenarios {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.scenario_id,
                format_sig12(s.theta_ab_deg),
                format_sig12(s.theta_bob_deg),
                format_sig12(s.e_mc),
                format_sig12(s.e_stderr),
                format_optional(s.e_exact),
                s.n
            );
        }
        out
    }
}
