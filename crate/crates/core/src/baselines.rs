//! Comparison strategies: the Nash equilibrium of the water-filling game,
//! its evaluation under SIC decoding, and first-come spectrum pooling.

use crate::error::{Error, Result};
use crate::model::{utility_noise, utility_sic, CarrierAssignment, Instance, PowerAllocation};
use crate::scalar::Real;
use crate::waterfill::{waterfill, EffectiveChannel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NashConfig<T> {
    /// Convergence when no power moves by more than `tolerance * budget`.
    pub tolerance: T,
    pub max_rounds: usize,
}

impl<T: Real> NashConfig<T> {
    pub fn new(tolerance: T, max_rounds: usize) -> Result<Self> {
        if !(tolerance > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        if max_rounds == 0 {
            return Err(Error::InvalidConfig("max_rounds must be at least 1".into()));
        }
        Ok(Self { tolerance, max_rounds })
    }
}

impl<T: Real> Default for NashConfig<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-8),
            max_rounds: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashOutcome<T> {
    pub alloc: PowerAllocation<T>,
    pub converged: bool,
    /// Best-response sweeps performed.
    pub rounds: usize,
}

/// One user's update inside [`nash_iwf_observed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponseStep<T> {
    pub round: usize,
    pub user: usize,
    pub utility_before: T,
    pub utility_after: T,
}

/// Water-filling best response of `n` over every carrier against the other
/// users' current powers. Returns the new power row.
pub fn best_response<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>, n: usize) -> Result<Vec<T>> {
    let carriers: Vec<usize> = (0..inst.n_carriers()).collect();
    let ch = EffectiveChannel::for_user(inst, Some(alloc), n, &carriers)?;
    let wf = waterfill(&ch);
    let mut row = vec![T::zero(); inst.n_carriers()];
    for (&k, &p) in ch.carrier_ids().iter().zip(&wf.powers) {
        row[k] = p;
    }
    Ok(row)
}

/// Iterative water-filling (round-robin best responses) towards the unique
/// Nash equilibrium.
pub fn nash_iwf<T: Real>(inst: &Instance<T>, cfg: &NashConfig<T>) -> NashOutcome<T> {
    nash_iwf_observed(inst, cfg, |_| {})
}

/// [`nash_iwf`] reporting every best-response update to `observe`.
///
/// Starts from each user's interference-free water-filling; a sweep updates
/// users `0..N` in turn against the freshest powers.
pub fn nash_iwf_observed<T: Real, F>(inst: &Instance<T>, cfg: &NashConfig<T>, mut observe: F) -> NashOutcome<T>
where
    F: FnMut(BestResponseStep<T>),
{
    let n_users = inst.n_users();
    let all: Vec<usize> = (0..inst.n_carriers()).collect();
    let mut alloc = PowerAllocation::zeros(n_users, inst.n_carriers());
    for n in 0..n_users {
        let ch = EffectiveChannel::for_user(inst, None, n, &all).expect("instance rows have a positive gain");
        waterfill(&ch).write_into(&ch, &mut alloc, n);
    }

    for round in 1..=cfg.max_rounds {
        let mut converged = true;
        for n in 0..n_users {
            let before = utility_noise(inst, &alloc, n).expect("shapes match");
            let row = best_response(inst, &alloc, n).expect("instance rows have a positive gain");
            let limit = cfg.tolerance * inst.budget(n);
            if alloc.row(n).iter().zip(&row).any(|(a, b)| (*a - *b).abs() >= limit) {
                converged = false;
            }
            alloc.row_mut(n).copy_from_slice(&row);
            let after = utility_noise(inst, &alloc, n).expect("shapes match");
            observe(BestResponseStep {
                round,
                user: n,
                utility_before: before,
                utility_after: after,
            });
        }
        if converged {
            return NashOutcome {
                alloc,
                converged: true,
                rounds: round,
            };
        }
    }
    NashOutcome {
        alloc,
        converged: false,
        rounds: cfg.max_rounds,
    }
}

/// Per-user rates of `alloc` under SIC where users earlier in index order
/// are decoded last (user 0 sees no interference). Sums to the sum capacity.
pub fn optimal_utilities<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>) -> Result<Vec<T>> {
    let order: Vec<usize> = (0..inst.n_users()).collect();
    optimal_utilities_with_order(inst, alloc, &order)
}

/// As [`optimal_utilities`] with an explicit interference order.
pub fn optimal_utilities_with_order<T: Real>(
    inst: &Instance<T>,
    alloc: &PowerAllocation<T>,
    order: &[usize],
) -> Result<Vec<T>> {
    (0..inst.n_users())
        .map(|n| utility_sic(inst, alloc, n, order))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolingOutcome<T> {
    pub assignment: CarrierAssignment,
    pub alloc: PowerAllocation<T>,
}

/// Spectrum pooling: users in index order water-fill over the carriers still
/// free and keep exclusively those that receive power.
pub fn spectrum_pooling<T: Real>(inst: &Instance<T>) -> PoolingOutcome<T> {
    let mut free: Vec<usize> = (0..inst.n_carriers()).collect();
    let mut alloc = PowerAllocation::zeros(inst.n_users(), inst.n_carriers());
    let mut lists = vec![Vec::new(); inst.n_users()];
    for (n, list) in lists.iter_mut().enumerate() {
        let Ok(ch) = EffectiveChannel::for_user(inst, None, n, &free) else {
            continue;
        };
        let wf = waterfill(&ch);
        wf.write_into(&ch, &mut alloc, n);
        *list = alloc.active_carriers(n);
        free.retain(|k| !list.contains(k));
    }
    PoolingOutcome {
        assignment: CarrierAssignment::new(lists, inst.n_carriers()),
        alloc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_instance, sum_capacity, utilities_noise, InstanceGenConfig};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(seed: u64, n: usize, k: usize, snr_db: f64) -> Instance<f64> {
        generate_instance(&InstanceGenConfig {
            n_users: n,
            n_carriers: k,
            snr_db,
            seed,
        })
        .unwrap()
    }

    #[test]
    fn single_user_is_plain_waterfilling() {
        let inst = random(1, 1, 6, 3.0);
        let out = nash_iwf(&inst, &NashConfig::default());
        assert!(out.converged);
        assert_eq!(out.rounds, 1);
        let ch = EffectiveChannel::for_user(&inst, None, 0, &[0, 1, 2, 3, 4, 5]).unwrap();
        let wf = waterfill(&ch);
        assert_eq!(out.alloc.row(0), wf.powers.as_slice());
    }

    #[test]
    fn one_carrier_full_power() {
        let inst = Instance::from_rows(&[vec![1.0], vec![2.0]], 1.0, vec![3.0, 4.0]).unwrap();
        let out = nash_iwf(&inst, &NashConfig::default());
        assert!(out.converged);
        assert_eq!(out.rounds, 1);
        assert_eq!(out.alloc.row(0), &[3.0]);
        assert_eq!(out.alloc.row(1), &[4.0]);
    }

    #[test]
    fn two_by_two_fixed_point_beats_grid() {
        for seed in 0..20 {
            let inst = random(seed, 2, 2, 5.0);
            let out = nash_iwf(&inst, &NashConfig::default());
            assert!(out.converged);
            for n in 0..2 {
                let at_ne = utility_noise(&inst, &out.alloc, n).unwrap();
                let mut probe = out.alloc.clone();
                let budget = inst.budget(n);
                for i in 0..=10_000 {
                    let share = i as f64 / 10_000.0;
                    probe.set(n, 0, budget * share);
                    probe.set(n, 1, budget * (1.0 - share));
                    let u = utility_noise(&inst, &probe, n).unwrap();
                    assert!(u <= at_ne + 1e-9, "seed {seed}: grid point beats NE");
                }
            }
        }
    }

    #[test]
    fn responding_player_never_loses() {
        for seed in 0..30 {
            let inst = random(seed, 5, 8, 10.0);
            nash_iwf_observed(&inst, &NashConfig::default(), |s| {
                assert!(s.utility_after >= s.utility_before - 1e-12 * s.utility_before.abs());
            });
        }
    }

    #[test]
    fn fixed_point_is_stable() {
        let inst = random(7, 4, 6, 10.0);
        let cfg = NashConfig::default();
        let out = nash_iwf(&inst, &cfg);
        assert!(out.converged);
        for n in 0..4 {
            let row = best_response(&inst, &out.alloc, n).unwrap();
            for (a, b) in out.alloc.row(n).iter().zip(&row) {
                assert!((a - b).abs() < 1e-6 * inst.budget(n));
            }
        }
    }

    #[test]
    fn reports_non_convergence() {
        let inst = random(3, 6, 6, 20.0);
        let out = nash_iwf(&inst, &NashConfig::new(1e-15, 1).unwrap());
        assert!(!out.converged);
        assert_eq!(out.rounds, 1);
        assert!(NashConfig::<f64>::new(0.0, 1).is_err());
        assert!(NashConfig::<f64>::new(1e-3, 0).is_err());
    }

    #[test]
    fn optimal_utilities_examples() {
        let inst = random(2, 1, 3, 0.0);
        let out = nash_iwf(&inst, &NashConfig::default());
        assert_eq!(
            optimal_utilities(&inst, &out.alloc).unwrap(),
            utilities_noise(&inst, &out.alloc).unwrap()
        );

        let pair = Instance::from_rows(&[vec![1.0], vec![1.0]], 1.0, vec![1.0, 1.0]).unwrap();
        let alloc = PowerAllocation::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let u = optimal_utilities(&pair, &alloc).unwrap();
        assert_eq!(u[0], 1.0);
        assert_relative_eq!(u[1], 1.5f64.log2(), max_relative = 1e-15);
        assert!(optimal_utilities(&pair, &PowerAllocation::zeros(1, 1)).is_err());

        for seed in 0..20 {
            let inst = random(seed, 4, 5, 10.0);
            let ne = nash_iwf(&inst, &NashConfig::default()).alloc;
            let opt: f64 = optimal_utilities(&inst, &ne).unwrap().iter().sum();
            let noise: f64 = utilities_noise(&inst, &ne).unwrap().iter().sum();
            let cap = sum_capacity(&inst, &ne).unwrap();
            assert!(opt >= noise);
            assert!((opt - cap).abs() <= 1e-9 * cap);
            let reversed = optimal_utilities_with_order(&inst, &ne, &[3, 2, 1, 0]).unwrap();
            assert!((reversed.iter().sum::<f64>() - cap).abs() <= 1e-9 * cap);
        }
    }

    #[test]
    fn pooling_single_user() {
        let inst = random(4, 1, 5, 0.0);
        let out = spectrum_pooling(&inst);
        let ch = EffectiveChannel::for_user(&inst, None, 0, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(out.alloc.row(0), waterfill(&ch).powers.as_slice());
    }

    #[test]
    fn pooling_first_user_takes_everything() {
        // high budget activates both carriers for user 0
        let inst = Instance::from_rows(&[vec![1.0, 1.0], vec![5.0, 5.0]], 1.0, vec![10.0, 10.0]).unwrap();
        let out = spectrum_pooling(&inst);
        assert_eq!(out.assignment.lists, vec![vec![0, 1], vec![]]);
        assert_eq!(out.alloc.row(1), &[0.0, 0.0]);
    }

    #[test]
    fn pooling_leftover_goes_to_second_user() {
        // floors 0.25 and 1 with budget 0.5: level 0.75 leaves carrier 1 dark
        let inst = Instance::from_rows(&[vec![4.0, 1.0], vec![1.0, 2.0]], 1.0, vec![0.5, 0.5]).unwrap();
        let out = spectrum_pooling(&inst);
        let ch = EffectiveChannel::for_user(&inst, None, 0, &[0, 1]).unwrap();
        let oracle = waterfill(&ch);
        assert!(oracle.water_level < 1.0);
        assert_eq!(out.assignment.lists, vec![vec![0], vec![1]]);
        assert_eq!(out.alloc.row(1), &[0.0, 0.5]);
    }

    #[test]
    fn pooling_is_disjoint_and_budget_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..100 {
            let n = rng.gen_range(1..10);
            let k = rng.gen_range(1..15);
            let inst = random(seed, n, k, rng.gen_range(-10.0..20.0));
            let out = spectrum_pooling(&inst);
            assert!(out.assignment.is_disjoint());
            for u in 0..n {
                if out.assignment.is_served(u) {
                    let total = out.alloc.total_power(u);
                    assert!((total - inst.budget(u)).abs() <= 1e-9 * inst.budget(u));
                }
            }
        }
    }
}
