//! Preset sweeps, one per comparison figure family.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use crate::config::{Axis, Overrides, Strategy, SweepConfig};
use crate::sweep::{run_sweep, write_csv, SweepRow, SweepTable};

/// Column a preset is read by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Welfare,
    Fairness,
    EnergyEfficiency,
    Served,
    NoCoordination,
    Robustness,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Self::Welfare => "mean_welfare",
            Self::Fairness => "mean_fairness",
            Self::EnergyEfficiency => "mean_ee",
            Self::Served => "served",
            Self::NoCoordination => "nocoord_prob",
            Self::Robustness => "mean_robustness",
        }
    }

    pub fn of(self, row: &SweepRow) -> Option<f64> {
        match self {
            Self::Welfare => Some(row.mean_welfare),
            Self::Fairness => row.mean_fairness,
            Self::EnergyEfficiency => row.mean_ee,
            Self::Served => Some(row.served),
            Self::NoCoordination => Some(row.nocoord_prob),
            Self::Robustness => row.mean_robustness,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub id: &'static str,
    pub description: &'static str,
    pub metric: Metric,
    pub config: SweepConfig,
}

fn range(start: f64, step: f64, end: f64) -> Vec<f64> {
    let n = ((end - start) / step).round() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

fn preset(
    id: &'static str,
    description: &'static str,
    metric: Metric,
    axis: Axis,
    axis_values: Vec<f64>,
    (n_users, n_carriers, snr_db): (usize, usize, f64),
    strategies: &[Strategy],
) -> Preset {
    Preset {
        id,
        description,
        metric,
        config: SweepConfig {
            axis,
            axis_values,
            n_users,
            n_carriers,
            snr_db,
            strategies: strategies.to_vec(),
            ..SweepConfig::default()
        },
    }
}

pub fn presets() -> Vec<Preset> {
    use Metric::*;
    use Strategy::*;
    let all = &Strategy::ALL[..];
    let realizable = &[Feat, Nash, Pooling][..];
    vec![
        preset(
            "welfare_vs_K_snr-10",
            "mean utility vs K, N=20, SNR=-10 dB",
            Welfare,
            Axis::Carriers,
            range(10.0, 10.0, 100.0),
            (20, 0, -10.0),
            all,
        ),
        preset(
            "welfare_vs_K_snr10",
            "mean utility vs K, N=20, SNR=10 dB",
            Welfare,
            Axis::Carriers,
            range(10.0, 10.0, 100.0),
            (20, 0, 10.0),
            all,
        ),
        preset(
            "welfare_vs_N_K10",
            "mean utility vs N, K=10, SNR=10 dB",
            Welfare,
            Axis::Users,
            range(5.0, 5.0, 40.0),
            (0, 10, 10.0),
            all,
        ),
        preset(
            "welfare_vs_N_K40",
            "mean utility vs N, K=40, SNR=10 dB",
            Welfare,
            Axis::Users,
            range(5.0, 5.0, 40.0),
            (0, 40, 10.0),
            all,
        ),
        preset(
            "welfare_vs_SNR",
            "mean utility vs SNR, K=40, N=20",
            Welfare,
            Axis::Snr,
            range(-10.0, 5.0, 20.0),
            (20, 40, 0.0),
            all,
        ),
        preset(
            "welfare_vs_K_snr0",
            "mean utility vs K, N=20, SNR=0 dB",
            Welfare,
            Axis::Carriers,
            range(10.0, 10.0, 100.0),
            (20, 0, 0.0),
            all,
        ),
        preset(
            "ee_vs_N_K10",
            "mean energy efficiency vs N, K=10, SNR=10 dB",
            EnergyEfficiency,
            Axis::Users,
            range(5.0, 5.0, 40.0),
            (0, 10, 10.0),
            realizable,
        ),
        preset(
            "ee_vs_N_K40",
            "mean energy efficiency vs N, K=40, SNR=10 dB",
            EnergyEfficiency,
            Axis::Users,
            range(5.0, 5.0, 40.0),
            (0, 40, 10.0),
            realizable,
        ),
        preset(
            "fairness_vs_N_K40",
            "worst/best utility vs N, K=40, SNR=10 dB",
            Fairness,
            Axis::Users,
            range(5.0, 5.0, 40.0),
            (0, 40, 10.0),
            all,
        ),
        preset(
            "fairness_vs_K_N10",
            "worst/best utility vs K, N=10, SNR=10 dB",
            Fairness,
            Axis::Carriers,
            range(2.0, 2.0, 40.0),
            (10, 0, 10.0),
            all,
        ),
        preset(
            "served",
            "probability to be served vs N, K=10, SNR=10 dB",
            Served,
            Axis::Users,
            range(5.0, 5.0, 40.0),
            (0, 10, 10.0),
            &[Feat],
        ),
        preset(
            "nocoord",
            "probability of no coordination vs N, K=10, SNR=10 dB",
            NoCoordination,
            Axis::Users,
            range(5.0, 5.0, 40.0),
            (0, 10, 10.0),
            realizable,
        ),
        preset(
            "robustness",
            "stick/deviate utility ratio vs K, N=10, SNR=10 dB",
            Robustness,
            Axis::Carriers,
            range(2.0, 2.0, 40.0),
            (10, 0, 10.0),
            &[Feat],
        ),
    ]
}

pub fn find_preset(id: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.id == id)
}

/// Strategies at one axis value ordered by the preset's metric, best first.
pub fn ordering_at(table: &SweepTable, axis_value: f64, metric: Metric) -> Vec<(Strategy, f64)> {
    let mut v: Vec<(Strategy, f64)> = table
        .rows
        .iter()
        .filter(|r| r.axis_value == axis_value)
        .filter_map(|r| metric.of(r).map(|m| (r.strategy, m)))
        .collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    v
}

fn summary(p: &Preset, table: &SweepTable) -> String {
    let ends = [
        p.config.axis_values[0],
        *p.config.axis_values.last().expect("nonempty axis"),
    ];
    let parts: Vec<String> = ends
        .iter()
        .map(|&x| {
            let order: Vec<String> = ordering_at(table, x, p.metric)
                .iter()
                .map(|(s, m)| format!("{s}({m:.4})"))
                .collect();
            format!("{}={x}: {}", p.config.axis, order.join(" > "))
        })
        .collect();
    format!("{} [{}] {}", p.id, p.metric.name(), parts.join(" | "))
}

/// Runs one preset and writes `<out_dir>/<id>.csv`. Returns the CSV path
/// and a one-line summary.
pub fn run_preset(p: &Preset, out_dir: &Path, overrides: &Overrides) -> anyhow::Result<(PathBuf, String)> {
    let mut cfg = p.config.clone();
    cfg.apply(overrides);
    cfg.validate()?;
    let table = run_sweep(&cfg);
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let path = out_dir.join(format!("{}.csv", p.id));
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(&table, file)?;
    Ok((path, summary(p, &table)))
}

/// Runs the preset `id`, or every preset for `all`.
pub fn run_figures(id: &str, out_dir: &Path, overrides: &Overrides) -> anyhow::Result<Vec<(PathBuf, String)>> {
    let selected: Vec<Preset> = if id == "all" {
        presets()
    } else {
        match find_preset(id) {
            Some(p) => vec![p],
            None => {
                let known: Vec<&str> = presets().iter().map(|p| p.id).collect();
                bail!("unknown preset '{id}' (known: all, {})", known.join(", "));
            }
        }
    };
    selected.iter().map(|p| run_preset(p, out_dir, overrides)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_and_unique() {
        let ps = presets();
        for p in &ps {
            p.config.validate().unwrap_or_else(|e| panic!("{}: {e}", p.id));
        }
        let mut ids: Vec<&str> = ps.iter().map(|p| p.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), ps.len());
        assert!(find_preset("welfare_vs_N_K10").is_some());
    }

    #[test]
    fn unknown_preset_is_an_error() {
        let dir = std::env::temp_dir();
        assert!(run_figures("nope", &dir, &Overrides::default()).is_err());
    }
}
