//! Evaluation quantities for the strategies and the worst-case FEAT bounds.

use crate::baselines::best_response;
use crate::error::{Error, Result};
use crate::feat::FeatOutput;
use crate::model::{interference, utilities_noise, utility_noise, CarrierAssignment, Instance, PowerAllocation};
use crate::scalar::Real;

/// Worst-case guarantees of a FEAT output, built from the budgets, each
/// user's best gain and the first-round `alpha*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop2Bounds<T> {
    /// `max_i max_k P_i g_i^k`
    pub theta_max: T,
    /// `min_i max_k P_i g_i^k`
    pub theta_min: T,
    /// Approximation factor: the output is an `(omega - 1)`-NE and its
    /// welfare is at most `omega` times below the optimum. `None` when
    /// `alpha*_1 = 0`.
    pub omega: Option<T>,
    /// Upper bound on `max_i u_i / min_i u_i`. `None` when `alpha*_1 = 0`.
    pub fairness_bound: Option<T>,
}

pub fn prop2_bounds<T: Real>(inst: &Instance<T>, alpha_star_1: T) -> Result<Prop2Bounds<T>> {
    if !(alpha_star_1 >= T::zero() && alpha_star_1 <= T::one()) {
        return Err(Error::InvalidConfig(format!(
            "alpha*_1 must lie in [0, 1], got {alpha_star_1}"
        )));
    }
    let best: Vec<T> = (0..inst.n_users())
        .map(|n| {
            let g = inst.gains().row(n).iter().copied().fold(T::zero(), T::max);
            inst.budget(n) * g
        })
        .collect();
    let theta_max = best.iter().copied().fold(T::zero(), T::max);
    let theta_min = best.iter().copied().fold(T::infinity(), T::min);
    let s2 = inst.noise_power();

    let (omega, fairness_bound) = if alpha_star_1 > T::zero() {
        let a = alpha_star_1;
        let omega = theta_max / (s2 * a * (T::one() + theta_max / s2).ln())
            + (T::one() - a) / (a * a * (T::one() + theta_min / s2).ln());
        let fairness = theta_max / (s2 * (T::one() + a * theta_min / s2).log2());
        (Some(omega), Some(fairness))
    } else {
        (None, None)
    };
    Ok(Prop2Bounds {
        theta_max,
        theta_min,
        omega,
        fairness_bound,
    })
}

/// Parameters of the energy-efficiency metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyConfig<T> {
    /// Transmission rate `R_n` in bit/s.
    pub rate_bps: T,
    /// Exponent `M` of the packet success function `(1 - e^-gamma)^M`.
    pub exponent: T,
}

impl<T: Real> Default for EfficiencyConfig<T> {
    fn default() -> Self {
        Self {
            rate_bps: T::lit(1e6),
            exponent: T::lit(80.0),
        }
    }
}

/// S-shaped packet success rate `(1 - e^-gamma)^M`.
pub fn efficiency_function<T: Real>(sinr: T, exponent: T) -> T {
    (T::one() - (-sinr).exp()).powf(exponent)
}

fn ee_from_sinr<T: Real, F>(
    inst: &Instance<T>,
    alloc: &PowerAllocation<T>,
    cfg: &EfficiencyConfig<T>,
    sinr: F,
) -> Vec<Option<T>>
where
    F: Fn(usize, usize) -> T,
{
    (0..inst.n_users())
        .map(|n| {
            let total = alloc.total_power(n);
            if total <= T::zero() {
                return None;
            }
            let success: T = (0..inst.n_carriers())
                .map(|k| efficiency_function(sinr(n, k), cfg.exponent))
                .sum();
            Some(cfg.rate_bps * success / total)
        })
        .collect()
}

/// Bits per joule of every user with interference treated as noise; `None`
/// for users that transmit nothing.
pub fn energy_efficiency<T: Real>(
    inst: &Instance<T>,
    alloc: &PowerAllocation<T>,
    cfg: &EfficiencyConfig<T>,
) -> Result<Vec<Option<T>>> {
    if alloc.n_users() != inst.n_users() || alloc.n_carriers() != inst.n_carriers() {
        return Err(Error::DimensionMismatch {
            expected_users: inst.n_users(),
            expected_carriers: inst.n_carriers(),
            users: alloc.n_users(),
            carriers: alloc.n_carriers(),
        });
    }
    Ok(ee_from_sinr(inst, alloc, cfg, |n, k| {
        inst.gain(n, k) * alloc.power(n, k) / (inst.noise_power() + interference(inst, alloc, n, k))
    }))
}

/// As [`energy_efficiency`] but with SIC SINRs: only lower-indexed users
/// interfere.
pub fn energy_efficiency_sic<T: Real>(
    inst: &Instance<T>,
    alloc: &PowerAllocation<T>,
    cfg: &EfficiencyConfig<T>,
) -> Result<Vec<Option<T>>> {
    energy_efficiency(inst, alloc, cfg)?;
    Ok(ee_from_sinr(inst, alloc, cfg, |n, k| {
        let interf: T = (0..n).map(|m| inst.gain(m, k) * alloc.power(m, k)).sum();
        inst.gain(n, k) * alloc.power(n, k) / (inst.noise_power() + interf)
    }))
}

/// Incentive of each user to leave a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport<T> {
    /// `u_stick / u_deviate` per user; `None` for users with zero utility.
    pub per_user: Vec<Option<T>>,
    /// Mean of the defined ratios.
    pub mean_ratio: Option<T>,
    /// `(user, utility after deviating)` for users with zero utility.
    pub unserved_gains: Vec<(usize, T)>,
}

/// Compares every user's utility in `alloc` with its best unilateral
/// deviation: water-filling over all carriers against the others' powers.
pub fn deviation_ratios<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>) -> Result<RobustnessReport<T>> {
    let mut per_user = Vec::with_capacity(inst.n_users());
    let mut unserved_gains = Vec::new();
    for n in 0..inst.n_users() {
        let stick = utility_noise(inst, alloc, n)?;
        let mut deviated = alloc.clone();
        let row = best_response(inst, alloc, n)?;
        deviated.row_mut(n).copy_from_slice(&row);
        let deviate = utility_noise(inst, &deviated, n)?;
        if stick > T::zero() {
            per_user.push(Some(stick / deviate));
        } else {
            per_user.push(None);
            unserved_gains.push((n, deviate));
        }
    }
    Ok(RobustnessReport {
        mean_ratio: mean(per_user.iter().flatten().copied()),
        per_user,
        unserved_gains,
    })
}

/// Deviation incentive of a FEAT output, averaged over served users.
pub fn robustness_ratio<T: Real>(inst: &Instance<T>, feat_out: &FeatOutput<T>) -> Result<RobustnessReport<T>> {
    deviation_ratios(inst, &feat_out.powers)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coordination {
    /// Fraction of users with a nonempty carrier list.
    pub served_fraction: f64,
    /// Some carrier is used by two or more users.
    pub no_coordination: bool,
}

pub fn served_and_coordination(assignment: &CarrierAssignment) -> Coordination {
    let n = assignment.n_users();
    let served = (0..n).filter(|&u| assignment.is_served(u)).count();
    Coordination {
        served_fraction: if n == 0 { 0.0 } else { served as f64 / n as f64 },
        no_coordination: !assignment.is_disjoint(),
    }
}

/// Worst over best utility among `served` users.
pub fn fairness_ratio<T: Real>(utilities: &[T], served: &[bool]) -> Option<T> {
    let vals: Vec<T> = utilities
        .iter()
        .zip(served)
        .filter(|(_, s)| **s)
        .map(|(u, _)| *u)
        .collect();
    let max = vals.iter().copied().fold(T::neg_infinity(), T::max);
    let min = vals.iter().copied().fold(T::infinity(), T::min);
    (max > T::zero()).then(|| min / max)
}

fn mean<T: Real>(xs: impl Iterator<Item = T>) -> Option<T> {
    let (sum, count) = xs.fold((T::zero(), 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / T::lit(count as f64))
}

/// All evaluation quantities for one strategy on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport<T> {
    pub utilities: Vec<T>,
    pub welfare: T,
    pub fairness_ratio: Option<T>,
    pub ee: Vec<Option<T>>,
    pub served_fraction: f64,
    pub no_coordination: bool,
    /// Mean deviation ratio over served users (not defined under SIC).
    pub robustness_ratio: Option<T>,
    /// FEAT only.
    pub bounds: Option<Prop2Bounds<T>>,
    pub alpha_star_1: Option<T>,
}

impl<T: Real> MetricsReport<T> {
    /// Mean energy efficiency over users that transmit.
    pub fn mean_ee(&self) -> Option<T> {
        mean(self.ee.iter().flatten().copied())
    }
}

fn served_mask<T: Real>(alloc: &PowerAllocation<T>) -> Vec<bool> {
    (0..alloc.n_users()).map(|n| alloc.total_power(n) > T::zero()).collect()
}

/// Metrics of a realizable profile decoded with interference as noise
/// (Nash, pooling).
pub fn report_profile<T: Real>(
    inst: &Instance<T>,
    alloc: &PowerAllocation<T>,
    ee_cfg: &EfficiencyConfig<T>,
) -> Result<MetricsReport<T>> {
    let utilities = utilities_noise(inst, alloc)?;
    let served = served_mask(alloc);
    let coord = served_and_coordination(&CarrierAssignment::from_allocation(alloc));
    Ok(MetricsReport {
        welfare: utilities.iter().copied().sum(),
        fairness_ratio: fairness_ratio(&utilities, &served),
        ee: energy_efficiency(inst, alloc, ee_cfg)?,
        served_fraction: coord.served_fraction,
        no_coordination: coord.no_coordination,
        robustness_ratio: deviation_ratios(inst, alloc)?.mean_ratio,
        bounds: None,
        alpha_star_1: None,
        utilities,
    })
}

/// Metrics of a FEAT run, including the worst-case bounds.
pub fn report_feat<T: Real>(
    inst: &Instance<T>,
    out: &FeatOutput<T>,
    ee_cfg: &EfficiencyConfig<T>,
) -> Result<MetricsReport<T>> {
    let mut report = report_profile(inst, &out.powers, ee_cfg)?;
    let coord = served_and_coordination(&out.assignment);
    report.served_fraction = coord.served_fraction;
    report.no_coordination = coord.no_coordination;
    report.bounds = Some(prop2_bounds(inst, out.alpha_star_1)?);
    report.alpha_star_1 = Some(out.alpha_star_1);
    Ok(report)
}

/// Metrics of the SIC evaluation of a profile (the "optimal" baseline).
pub fn report_sic<T: Real>(
    inst: &Instance<T>,
    alloc: &PowerAllocation<T>,
    ee_cfg: &EfficiencyConfig<T>,
) -> Result<MetricsReport<T>> {
    let utilities = crate::baselines::optimal_utilities(inst, alloc)?;
    let served = served_mask(alloc);
    let coord = served_and_coordination(&CarrierAssignment::from_allocation(alloc));
    Ok(MetricsReport {
        welfare: utilities.iter().copied().sum(),
        fairness_ratio: fairness_ratio(&utilities, &served),
        ee: energy_efficiency_sic(inst, alloc, ee_cfg)?,
        served_fraction: coord.served_fraction,
        no_coordination: coord.no_coordination,
        robustness_ratio: None,
        bounds: None,
        alpha_star_1: None,
        utilities,
    })
}
