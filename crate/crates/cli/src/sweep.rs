//! Seeded Monte-Carlo sweeps over one of `(N, K, SNR)`.

use std::io::Write;

use feat_core::{
    generate_instance, nash_iwf, report_feat, report_profile, report_sic, run_feat, spectrum_pooling, Instance64,
    InstanceGenConfig, MetricsReport64,
};
use rayon::prelude::*;

use crate::config::{Axis, Strategy, SweepConfig};

pub const CSV_HEADER: [&str; 11] = [
    "axis",
    "strategy",
    "mean_welfare",
    "se_welfare",
    "mean_fairness",
    "mean_ee",
    "served",
    "nocoord_prob",
    "mean_robustness",
    "mean_omega",
    "mean_rounds",
];

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Instance seed for one `(axis value, draw)` cell. Independent of the
/// order in which cells are evaluated.
pub fn draw_seed(seed: u64, axis_value: f64, draw: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ axis_value.to_bits()) ^ draw as u64)
}

/// Per-draw outcome of one strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub welfare: f64,
    pub fairness: Option<f64>,
    pub mean_ee: Option<f64>,
    pub served: f64,
    pub no_coordination: bool,
    pub robustness: Option<f64>,
    pub omega: Option<f64>,
    pub rounds: Option<f64>,
}

impl Sample {
    fn from_report(r: &MetricsReport64, rounds: Option<usize>) -> Self {
        Self {
            welfare: r.welfare,
            fairness: r.fairness_ratio,
            mean_ee: r.mean_ee(),
            served: r.served_fraction,
            no_coordination: r.no_coordination,
            robustness: r.robustness_ratio,
            omega: r.bounds.and_then(|b| b.omega),
            rounds: rounds.map(|x| x as f64),
        }
    }
}

/// Runs every selected strategy on one instance. Results are in the order
/// of `strategies`.
pub fn evaluate_instance(inst: &Instance64, cfg: &SweepConfig, strategies: &[Strategy]) -> Vec<(Strategy, Sample)> {
    let needs_nash = strategies
        .iter()
        .any(|s| matches!(s, Strategy::Nash | Strategy::Optimal));
    let nash = needs_nash.then(|| nash_iwf(inst, &cfg.nash));
    strategies
        .iter()
        .map(|&s| {
            let sample = match s {
                Strategy::Feat => {
                    let out = run_feat(inst, &cfg.feat);
                    let r = report_feat(inst, &out, &cfg.ee).expect("consistent shapes");
                    Sample::from_report(&r, Some(out.rounds))
                }
                Strategy::Nash => {
                    let ne = nash.as_ref().expect("computed above");
                    let r = report_profile(inst, &ne.alloc, &cfg.ee).expect("consistent shapes");
                    Sample::from_report(&r, Some(ne.rounds))
                }
                Strategy::Optimal => {
                    let ne = nash.as_ref().expect("computed above");
                    let r = report_sic(inst, &ne.alloc, &cfg.ee).expect("consistent shapes");
                    Sample::from_report(&r, None)
                }
                Strategy::Pooling => {
                    let pool = spectrum_pooling(inst);
                    let r = report_profile(inst, &pool.alloc, &cfg.ee).expect("consistent shapes");
                    Sample::from_report(&r, None)
                }
            };
            (s, sample)
        })
        .collect()
}

/// Aggregated statistics of one `(axis value, strategy)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub strategy: Strategy,
    pub mean_welfare: f64,
    pub se_welfare: f64,
    pub mean_fairness: Option<f64>,
    pub mean_ee: Option<f64>,
    pub served: f64,
    pub nocoord_prob: f64,
    pub mean_robustness: Option<f64>,
    pub mean_omega: Option<f64>,
    pub mean_rounds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: Axis,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn get(&self, axis_value: f64, strategy: Strategy) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.axis_value == axis_value && r.strategy == strategy)
    }
}

fn mean_of(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn aggregate(axis_value: f64, strategy: Strategy, samples: &[&Sample]) -> SweepRow {
    let n = samples.len() as f64;
    let mean_welfare = samples.iter().map(|s| s.welfare).sum::<f64>() / n;
    let se_welfare = if samples.len() > 1 {
        let var = samples.iter().map(|s| (s.welfare - mean_welfare).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    SweepRow {
        axis_value,
        strategy,
        mean_welfare,
        se_welfare,
        mean_fairness: mean_of(samples.iter().filter_map(|s| s.fairness)),
        mean_ee: mean_of(samples.iter().filter_map(|s| s.mean_ee)),
        served: samples.iter().map(|s| s.served).sum::<f64>() / n,
        nocoord_prob: samples.iter().filter(|s| s.no_coordination).count() as f64 / n,
        mean_robustness: mean_of(samples.iter().filter_map(|s| s.robustness)),
        mean_omega: mean_of(samples.iter().filter_map(|s| s.omega)),
        mean_rounds: mean_of(samples.iter().filter_map(|s| s.rounds)),
    }
}

/// Per-draw samples for one axis point, indexed `[draw][strategy]`. Every
/// strategy sees the same instances.
pub fn point_samples(cfg: &SweepConfig, axis_value: f64) -> Vec<Vec<(Strategy, Sample)>> {
    let (n_users, n_carriers, snr_db) = cfg.point(axis_value);
    (0..cfg.draws)
        .into_par_iter()
        .map(|draw| {
            let inst = generate_instance::<f64>(&InstanceGenConfig {
                n_users,
                n_carriers,
                snr_db,
                seed: draw_seed(cfg.seed, axis_value, draw),
            })
            .expect("validated sweep point");
            evaluate_instance(&inst, cfg, &cfg.strategies)
        })
        .collect()
}

/// Runs the whole sweep. Draws are evaluated in parallel and reduced in
/// draw order, so the table does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> SweepTable {
    let mut rows = Vec::new();
    for &axis_value in &cfg.axis_values {
        let draws = point_samples(cfg, axis_value);
        for (i, &strategy) in cfg.strategies.iter().enumerate() {
            let samples: Vec<&Sample> = draws.iter().map(|d| &d[i].1).collect();
            rows.push(aggregate(axis_value, strategy, &samples));
        }
    }
    SweepTable { axis: cfg.axis, rows }
}

fn fmt_axis(axis: Axis, v: f64) -> String {
    match axis {
        Axis::Users | Axis::Carriers => format!("{}", v as u64),
        Axis::Snr => format!("{v}"),
    }
}

fn fmt_value(v: f64) -> String {
    format!("{v:.9}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_value).unwrap_or_default()
}

/// Writes the table as CSV with the fixed header.
pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &table.rows {
        w.write_record([
            fmt_axis(table.axis, r.axis_value),
            r.strategy.to_string(),
            fmt_value(r.mean_welfare),
            fmt_value(r.se_welfare),
            fmt_opt(r.mean_fairness),
            fmt_opt(r.mean_ee),
            fmt_value(r.served),
            fmt_value(r.nocoord_prob),
            fmt_opt(r.mean_robustness),
            fmt_opt(r.mean_omega),
            fmt_opt(r.mean_rounds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use feat_core::{run_feat, utilities_noise};

    fn small() -> SweepConfig {
        SweepConfig {
            axis: Axis::Carriers,
            axis_values: vec![3.0],
            n_users: 2,
            n_carriers: 3,
            snr_db: 0.0,
            draws: 1,
            seed: 5,
            strategies: vec![Strategy::Feat],
            ..SweepConfig::default()
        }
    }

    #[test]
    fn degenerate_sweep_matches_direct_run() {
        let cfg = small();
        let table = run_sweep(&cfg);
        assert_eq!(table.rows.len(), 1);
        let inst = generate_instance::<f64>(&InstanceGenConfig {
            n_users: 2,
            n_carriers: 3,
            snr_db: 0.0,
            seed: draw_seed(5, 3.0, 0),
        })
        .unwrap();
        let out = run_feat(&inst, &cfg.feat);
        let welfare: f64 = utilities_noise(&inst, &out.powers).unwrap().iter().sum();
        assert_eq!(table.rows[0].mean_welfare, welfare);
        assert_eq!(table.rows[0].se_welfare, 0.0);
    }

    #[test]
    fn seeds_differ_per_cell() {
        assert_ne!(draw_seed(1, 10.0, 0), draw_seed(1, 10.0, 1));
        assert_ne!(draw_seed(1, 10.0, 0), draw_seed(1, 20.0, 0));
        assert_ne!(draw_seed(1, 10.0, 0), draw_seed(2, 10.0, 0));
    }

    #[test]
    fn csv_is_deterministic_and_well_formed() {
        let cfg = SweepConfig {
            axis: Axis::Users,
            axis_values: vec![2.0, 4.0],
            n_carriers: 4,
            draws: 8,
            strategies: Strategy::ALL.to_vec(),
            ..small()
        };
        let a = to_csv_string(&run_sweep(&cfg));
        let b = to_csv_string(&run_sweep(&cfg));
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines.len(), 1 + 2 * 4);
        assert!(lines[1].starts_with("2,feat,"));
        // optimal has no robustness, omega or rounds
        let opt = lines.iter().find(|l| l.starts_with("2,optimal,")).unwrap();
        assert!(opt.ends_with(",,,"));
    }
}
