//! Constructive growth loop.
//!
//! Start from one hidden unit, train for a fixed epoch budget, evaluate all
//! three splits, and stop once the validation error and the classification
//! efficiency are both acceptable. Otherwise add one hidden unit (keeping
//! every trained weight) and train again, up to a hidden-unit budget.

use crate::data::{SplitDataset, TargetEncoding};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, overall_efficiency, EvalResult};
use crate::network::{Network, NetworkConfig, NewUnitInit};
use crate::rng::XorShift64Star;
use crate::scalar::Scalar;
use crate::training::{train_phase, ErrorHistory, TrainConfig};

pub const DEFAULT_MAX_HIDDEN_UNITS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct StoppingCriteria {
    /// Acceptable validation `xi_av`.
    pub max_validation_error: f64,
    /// Acceptable efficiency, in percent.
    pub min_efficiency: f64,
    pub max_hidden_units: usize,
    /// Check efficiency on the validation split instead of the test split.
    pub strict: bool,
}

impl Default for StoppingCriteria {
    fn default() -> Self {
        Self {
            max_validation_error: 0.02,
            min_efficiency: 96.0,
            max_hidden_units: DEFAULT_MAX_HIDDEN_UNITS,
            strict: false,
        }
    }
}

impl StoppingCriteria {
    pub fn validate(&self) -> Result<()> {
        if self.max_validation_error.is_nan() || self.max_validation_error < 0.0 {
            return Err(Error::Config(format!(
                "max_validation_error must be >= 0, got {}",
                self.max_validation_error
            )));
        }
        if !(0.0..=100.0).contains(&self.min_efficiency) {
            return Err(Error::Config(format!(
                "min_efficiency must lie in [0, 100], got {}",
                self.min_efficiency
            )));
        }
        if self.max_hidden_units == 0 {
            return Err(Error::Config("max_hidden_units must be at least 1".into()));
        }
        Ok(())
    }

    pub fn satisfied_by(&self, record: &PhaseRecord) -> bool {
        let eff = if self.strict { &record.valid } else { &record.test };
        record.valid.ms_error <= self.max_validation_error && eff.efficiency_percent >= self.min_efficiency
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitScore {
    pub classified: usize,
    pub total: usize,
    pub efficiency_percent: f64,
    pub ms_error: f64,
}

impl<T: Scalar> From<&EvalResult<T>> for SplitScore {
    fn from(r: &EvalResult<T>) -> Self {
        Self {
            classified: r.classified,
            total: r.total,
            efficiency_percent: r.efficiency_percent,
            ms_error: r.ms_error.as_f64(),
        }
    }
}

/// One train-evaluate cycle at a fixed hidden-unit count.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecord {
    pub hidden_units: usize,
    pub epochs_this_phase: usize,
    pub cumulative_epochs: usize,
    pub train: SplitScore,
    pub valid: SplitScore,
    pub test: SplitScore,
    pub overall_efficiency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    CriteriaMet,
    BudgetExhausted,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Termination::CriteriaMet => "criteria_met",
            Termination::BudgetExhausted => "budget_exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTrace {
    pub phases: Vec<PhaseRecord>,
    pub termination: Termination,
    pub best_phase_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthConfig {
    pub net: NetworkConfig,
    pub train: TrainConfig,
    pub stop: StoppingCriteria,
    /// Defaults to `RandomInRange(net.init_range)`.
    pub new_unit: Option<NewUnitInit>,
}

impl GrowthConfig {
    pub fn new_unit_init(&self) -> NewUnitInit {
        self.new_unit.unwrap_or(NewUnitInit::RandomInRange(self.net.init_range))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRun<T> {
    /// The network of the selected phase.
    pub best: Network<T>,
    pub trace: GrowthTrace,
    /// Trained network at the end of each phase.
    pub checkpoints: Vec<Network<T>>,
    /// Network each phase started training from.
    pub phase_starts: Vec<Network<T>>,
    pub histories: Vec<ErrorHistory<T>>,
}

/// Index of the phase with the highest overall efficiency; ties go to the
/// phase with fewer hidden units.
pub fn select_best_phase(phases: &[PhaseRecord]) -> Result<usize> {
    if phases.is_empty() {
        return Err(Error::Input("no phases to select from".into()));
    }
    let mut best = 0;
    for (i, p) in phases.iter().enumerate().skip(1) {
        let b = &phases[best];
        if p.overall_efficiency > b.overall_efficiency
            || (p.overall_efficiency == b.overall_efficiency && p.hidden_units < b.hidden_units)
        {
            best = i;
        }
    }
    Ok(best)
}

/// Runs the constructive loop. The initial network always has one hidden
/// unit (`cfg.net.hidden_units` is ignored). New units draw from the same
/// generator stream as the initial weights; phase `p` (0-based) shuffles
/// with seed `cfg.train.seed + p`.
pub fn run_growth<T: Scalar>(
    data: &SplitDataset<T>,
    encoding: TargetEncoding,
    cfg: &GrowthConfig,
) -> Result<GrowthRun<T>> {
    cfg.train.validate()?;
    cfg.stop.validate()?;
    let net_cfg = NetworkConfig {
        hidden_units: 1,
        ..cfg.net.clone()
    };
    net_cfg.validate()?;
    if data.input_dim() != net_cfg.input_dim || data.output_dim() != net_cfg.output_dim {
        return Err(Error::Config(format!(
            "dataset is {}->{}, network configured as {}-?-{}",
            data.input_dim(),
            data.output_dim(),
            net_cfg.input_dim,
            net_cfg.output_dim
        )));
    }

    let mode = cfg.new_unit_init();
    let mut rng = XorShift64Star::new(net_cfg.seed);
    let mut start = Network::init_with_rng(&net_cfg, &mut rng);
    let mut phases = Vec::new();
    let mut checkpoints = Vec::new();
    let mut phase_starts = Vec::new();
    let mut histories = Vec::new();
    let mut cumulative = 0;

    let termination = loop {
        let phase = phases.len();
        let train_cfg = TrainConfig {
            seed: cfg.train.seed.wrapping_add(phase as u64),
            ..cfg.train.clone()
        };
        let (trained, history) = train_phase(&start, &data.train, &data.valid, &train_cfg)?;
        let results = [
            evaluate(&trained, &data.train, encoding, "train")?,
            evaluate(&trained, &data.valid, encoding, "valid")?,
            evaluate(&trained, &data.test, encoding, "test")?,
        ];
        cumulative += train_cfg.epochs_per_phase;
        let record = PhaseRecord {
            hidden_units: trained.hidden_units(),
            epochs_this_phase: train_cfg.epochs_per_phase,
            cumulative_epochs: cumulative,
            train: (&results[0]).into(),
            valid: (&results[1]).into(),
            test: (&results[2]).into(),
            overall_efficiency: overall_efficiency(&results)?,
        };
        log::info!(
            "h={} valid_mse={:.5} test_eff={:.2}% overall={:.5}%",
            record.hidden_units,
            record.valid.ms_error,
            record.test.efficiency_percent,
            record.overall_efficiency
        );
        let met = cfg.stop.satisfied_by(&record);
        phases.push(record);
        phase_starts.push(start);
        histories.push(history);
        if met {
            checkpoints.push(trained);
            break Termination::CriteriaMet;
        }
        if trained.hidden_units() >= cfg.stop.max_hidden_units {
            checkpoints.push(trained);
            break Termination::BudgetExhausted;
        }
        start = trained.add_hidden_unit(mode, &mut rng);
        checkpoints.push(trained);
    };
    let best_phase_index = select_best_phase(&phases)?;
    Ok(GrowthRun {
        best: checkpoints[best_phase_index].clone(),
        trace: GrowthTrace {
            phases,
            termination,
            best_phase_index,
        },
        checkpoints,
        phase_starts,
        histories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::PatternSet;

    fn record(h: usize, overall: f64) -> PhaseRecord {
        let s = SplitScore {
            classified: 0,
            total: 1,
            efficiency_percent: 0.0,
            ms_error: 0.0,
        };
        PhaseRecord {
            hidden_units: h,
            epochs_this_phase: 1,
            cumulative_epochs: h,
            train: s,
            valid: s,
            test: s,
            overall_efficiency: overall,
        }
    }

    /// Noisy 2-d problem: identical inputs with conflicting labels.
    fn noisy_data() -> SplitDataset<f64> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..24 {
            let x = (i % 6) as f64 / 5.0;
            xs.push(vec![x, 1.0 - x]);
            ys.push(vec![((i / 6) % 2) as f64]);
        }
        let p = PatternSet::from_rows(&xs, &ys).unwrap();
        crate::data::split(
            &p,
            crate::data::SplitSpec {
                train: 12,
                valid: 6,
                test: 6,
            },
            crate::data::SplitOrder::FileOrder,
        )
        .unwrap()
    }

    fn cfg(stop: StoppingCriteria) -> GrowthConfig {
        GrowthConfig {
            net: NetworkConfig {
                seed: 3,
                ..NetworkConfig::new(2, 1, 1)
            },
            train: TrainConfig {
                epochs_per_phase: 20,
                seed: 1,
                ..TrainConfig::default()
            },
            stop,
            new_unit: None,
        }
    }

    #[test]
    fn best_phase_selection() {
        let table = [97.13877, 97.13877, 96.99571, 97.71102];
        let phases: Vec<_> = table.iter().enumerate().map(|(i, &o)| record(i + 1, o)).collect();
        assert_eq!(select_best_phase(&phases).unwrap(), 3);
        assert_eq!(select_best_phase(&phases[..1]).unwrap(), 0);
        assert_eq!(select_best_phase(&[record(1, 90.0), record(2, 90.0)]).unwrap(), 0);
        assert!(select_best_phase(&[]).is_err());
    }

    #[test]
    fn vacuous_criteria_stop_after_one_phase() {
        let stop = StoppingCriteria {
            max_validation_error: f64::INFINITY,
            min_efficiency: 0.0,
            max_hidden_units: 8,
            strict: false,
        };
        let run = run_growth(&noisy_data(), TargetEncoding::SingleUnit, &cfg(stop)).unwrap();
        assert_eq!(run.trace.phases.len(), 1);
        assert_eq!(run.trace.termination, Termination::CriteriaMet);
        assert_eq!(run.best.hidden_units(), 1);
    }

    #[test]
    fn unreachable_criteria_exhaust_budget() {
        let stop = StoppingCriteria {
            max_validation_error: 0.0,
            min_efficiency: 100.0,
            max_hidden_units: 4,
            strict: false,
        };
        let run = run_growth(&noisy_data(), TargetEncoding::SingleUnit, &cfg(stop.clone())).unwrap();
        assert_eq!(run.trace.phases.len(), 4);
        assert_eq!(run.trace.termination, Termination::BudgetExhausted);
        let hs: Vec<_> = run.trace.phases.iter().map(|p| p.hidden_units).collect();
        assert_eq!(hs, vec![1, 2, 3, 4]);
        assert!(run.trace.phases.iter().all(|p| !stop.satisfied_by(p)));
        assert_eq!(run.best, run.checkpoints[run.trace.best_phase_index]);
        let cum: Vec<_> = run.trace.phases.iter().map(|p| p.cumulative_epochs).collect();
        assert_eq!(cum, vec![20, 40, 60, 80]);
    }

    #[test]
    fn carry_over_between_phases() {
        let stop = StoppingCriteria {
            max_validation_error: 0.0,
            min_efficiency: 100.0,
            max_hidden_units: 3,
            strict: false,
        };
        let run = run_growth(&noisy_data(), TargetEncoding::SingleUnit, &cfg(stop)).unwrap();
        for h in 1..run.checkpoints.len() {
            let before = &run.checkpoints[h - 1];
            let after = &run.phase_starts[h];
            assert_eq!(after.hidden_units(), before.hidden_units() + 1);
            for j in 0..before.hidden_units() {
                assert_eq!(after.w_in().row(j), before.w_in().row(j));
                assert_eq!(after.b_hidden()[j], before.b_hidden()[j]);
                for k in 0..before.output_dim() {
                    assert_eq!(after.w_out().get(k, j), before.w_out().get(k, j));
                }
            }
            assert_eq!(after.b_out(), before.b_out());
        }
    }

    #[test]
    fn growth_is_deterministic() {
        let stop = StoppingCriteria {
            max_hidden_units: 3,
            ..StoppingCriteria::default()
        };
        let a = run_growth(&noisy_data(), TargetEncoding::SingleUnit, &cfg(stop.clone())).unwrap();
        let b = run_growth(&noisy_data(), TargetEncoding::SingleUnit, &cfg(stop)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dimension_mismatch_is_config_error() {
        let mut c = cfg(StoppingCriteria::default());
        c.net.input_dim = 5;
        assert!(matches!(
            run_growth(&noisy_data(), TargetEncoding::SingleUnit, &c),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn invalid_criteria_rejected() {
        for stop in [
            StoppingCriteria {
                min_efficiency: 101.0,
                ..StoppingCriteria::default()
            },
            StoppingCriteria {
                max_validation_error: -1.0,
                ..StoppingCriteria::default()
            },
            StoppingCriteria {
                max_hidden_units: 0,
                ..StoppingCriteria::default()
            },
        ] {
            assert!(stop.validate().is_err());
        }
    }

    #[test]
    fn strict_mode_checks_validation_efficiency() {
        let mut r = record(1, 50.0);
        r.valid.efficiency_percent = 90.0;
        r.test.efficiency_percent = 10.0;
        let lax = StoppingCriteria {
            max_validation_error: 1.0,
            min_efficiency: 80.0,
            max_hidden_units: 1,
            strict: false,
        };
        assert!(!lax.satisfied_by(&r));
        assert!(StoppingCriteria { strict: true, ..lax }.satisfied_by(&r));
    }
}
