//! Angle sweeps for plotting.

use std::fmt::Write as _;
use std::str::FromStr;

use eprsim::inequality::{bell_like, bell_original};
use eprsim::models::{BellConstrainedModel, EightPartition, EightPartitionModel, FactualModel, QmSinglet};
use eprsim::{check_angle, estimate_correlation_sharded, DetectorTriple, LhvModel, SeedSpec};

use crate::config::ModelKind;
use crate::error::{CliError, CliResult};
use crate::output::format_sig12;

/// `START:STOP:STEP` in degrees, inclusive of STOP; an optional `deg`
/// suffix is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for DegreeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_end_matches("deg");
        let parts: Vec<f64> = body
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("{p:?} is not a number")))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected START:STOP:STEP, got {s:?}"));
        };
        if !(step > 0.0 && step.is_finite()) {
            return Err("STEP must be positive".into());
        }
        if !(start.is_finite() && stop.is_finite()) || stop < start {
            return Err("need finite START <= STOP".into());
        }
        if !(0.0..=180.0).contains(&start) || !(0.0..=180.0).contains(&stop) {
            return Err("angles must lie in [0, 180] degrees".into());
        }
        Ok(DegreeRange { start, stop, step })
    }
}

impl DegreeRange {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| (self.start + k as f64 * self.step).min(self.stop)).collect()
    }
}

pub struct SweepOptions {
    pub model: ModelKind,
    pub theta_ab: DegreeRange,
    pub theta_ac: DegreeRange,
    pub partition: Option<EightPartition>,
    pub trials: u64,
    pub master_seed: u64,
    pub shards: usize,
}

fn model_at(kind: ModelKind, triple: DetectorTriple, partition: EightPartition) -> CliResult<Box<dyn LhvModel>> {
    let cfg = |e: eprsim::Error| CliError::Config(e.to_string());
    Ok(match kind {
        ModelKind::Qm => Box::new(QmSinglet),
        ModelKind::BellConstrained => Box::new(BellConstrainedModel::new(triple)),
        ModelKind::Factual => Box::new(FactualModel::new(triple.pairs().to_vec()).map_err(cfg)?),
        ModelKind::EightPartition => Box::new(EightPartitionModel::new(triple, partition).map_err(cfg)?),
    })
}

pub const SWEEP_HEADER: &str = "theta_ab_deg,theta_ac_deg,e_ab_exact,e_ac_exact,e_bc_exact,e_ab_mc,e_ac_mc,e_bc_mc,\
original_lhs,original_rhs,original_margin,bell_like_rhs,bell_like_margin";

/// One row per (θ_ab, θ_ac) node of a coplanar triple; the inequality
/// columns use the exact correlations.
pub fn sweep(opts: &SweepOptions) -> CliResult<String> {
    if opts.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    if opts.partition.is_some() && opts.model != ModelKind::EightPartition {
        return Err(CliError::Usage("--measures only applies to the eight-partition model".into()));
    }
    let partition = opts.partition.unwrap_or_else(EightPartition::uniform);
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for deg_ab in opts.theta_ab.points() {
        for deg_ac in opts.theta_ac.points() {
            let (t_ab, t_ac) = (deg_ab.to_radians(), deg_ac.to_radians());
            let (t_ab, t_ac) = (
                check_angle(t_ab).map_err(|e| CliError::Usage(e.to_string()))?,
                check_angle(t_ac).map_err(|e| CliError::Usage(e.to_string()))?,
            );
            let triple = DetectorTriple::planar(t_ab, t_ac);
            let model = model_at(opts.model, triple, partition)?;
            let mut exact = [0.0; 3];
            let mut mc = [0.0; 3];
            for (k, pair) in triple.pairs().iter().enumerate() {
                exact[k] = model.exact_correlation(pair).unwrap_or(f64::NAN);
                let seed = SeedSpec::new(
                    opts.master_seed,
                    &format!("sweep/{}/{deg_ab}/{deg_ac}/{}", model.name(), pair.scenario),
                );
                mc[k] = estimate_correlation_sharded(model.as_ref(), pair, opts.trials, &seed, opts.shards)
                    .map_err(CliError::model(format!("sweep at ({deg_ab}, {deg_ac})")))?
                    .mean;
            }
            let original = bell_original(exact[0], exact[1], exact[2]).map_err(CliError::model("sweep"))?;
            let like = bell_like(exact[0], exact[1], t_ab, t_ac).map_err(CliError::model("sweep"))?;
            let cells = [
                deg_ab,
                deg_ac,
                exact[0],
                exact[1],
                exact[2],
                mc[0],
                mc[1],
                mc[2],
                original.lhs,
                original.rhs,
                original.margin,
                like.rhs,
                like.margin,
            ];
            let row: Vec<String> = cells.iter().map(|&v| format_sig12(v)).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: DegreeRange = "0:180:45deg".parse().unwrap();
        assert_eq!(r.points(), vec![0.0, 45.0, 90.0, 135.0, 180.0]);
        let r: DegreeRange = "10:20:3".parse().unwrap();
        assert_eq!(r.points(), vec![10.0, 13.0, 16.0, 19.0]);
        assert_eq!("0:0.3:0.1".parse::<DegreeRange>().unwrap().points().len(), 4);
        for bad in ["0:180", "0:180:0", "20:10:1", "0:200:10", "a:b:c"] {
            assert!(bad.parse::<DegreeRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_rows() {
        let opts = SweepOptions {
            model: ModelKind::BellConstrained,
            theta_ab: "0:180:90".parse().unwrap(),
            theta_ac: "60:60:1".parse().unwrap(),
            partition: None,
            trials: 100,
            master_seed: 1,
            shards: 1,
        };
        let text = sweep(&opts).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], SWEEP_HEADER);
        let cols: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 13);
        // θ_ab = 0: E_bc = −cos 0 · cos 60° = −0.5
        assert!((cols[4] + 0.5).abs() < 1e-11);
        assert!(cols[12] >= 0.0);
    }
}
