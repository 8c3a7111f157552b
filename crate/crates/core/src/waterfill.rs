//! Single-user water-filling over an allowed carrier set with fixed
//! interference, plus the two closed forms the FEAT loop relies on.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{interference, Instance, PowerAllocation};
use crate::scalar::{positive_part, Real};

/// Water-filling floors `(sigma^2 + I_k) / g_k` for the carriers a user may
/// transmit on. Carriers with zero gain have an infinite floor and are
/// never part of a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel<T> {
    effective_noise: Vec<T>,
    carrier_ids: Vec<usize>,
    budget: T,
}

impl<T: Real> EffectiveChannel<T> {
    pub fn new(effective_noise: Vec<T>, carrier_ids: Vec<usize>, budget: T) -> Result<Self> {
        if effective_noise.is_empty() {
            return Err(Error::EmptyCarrierSet);
        }
        if effective_noise.len() != carrier_ids.len() {
            return Err(Error::InvalidConfig(
                "floor and carrier id vectors differ in length".into(),
            ));
        }
        if effective_noise.iter().any(|f| !(f.is_finite() && *f > T::zero())) {
            return Err(Error::InvalidConfig(
                "water-filling floors must be finite and positive".into(),
            ));
        }
        if !(budget.is_finite() && budget > T::zero()) {
            return Err(Error::InvalidConfig("budget must be positive".into()));
        }
        let mut sorted = carrier_ids.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig("duplicate carrier id".into()));
        }
        Ok(Self {
            effective_noise,
            carrier_ids,
            budget,
        })
    }

    /// Floors for user `n` over `carriers`, with interference taken from
    /// `others` (every user but `n`). `None` interference means an
    /// interference-free channel. Zero-gain carriers are dropped.
    pub fn for_user(
        inst: &Instance<T>,
        others: Option<&PowerAllocation<T>>,
        n: usize,
        carriers: &[usize],
    ) -> Result<Self> {
        inst.check_user(n)?;
        let mut floors = Vec::with_capacity(carriers.len());
        let mut ids = Vec::with_capacity(carriers.len());
        for &k in carriers {
            let g = inst.gain(n, k);
            if g <= T::zero() {
                continue;
            }
            let interf = others.map_or(T::zero(), |a| interference(inst, a, n, k));
            floors.push((inst.noise_power() + interf) / g);
            ids.push(k);
        }
        Self::new(floors, ids, inst.budget(n))
    }

    pub fn effective_noise(&self) -> &[T] {
        &self.effective_noise
    }

    pub fn carrier_ids(&self) -> &[usize] {
        &self.carrier_ids
    }

    pub fn budget(&self) -> T {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.carrier_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier_ids.is_empty()
    }
}

/// Solution of a water-filling problem; `powers` is aligned with the
/// channel's `carrier_ids`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFilling<T> {
    pub powers: Vec<T>,
    pub water_level: T,
}

impl<T: Real> WaterFilling<T> {
    /// Writes the powers into row `n` of `alloc`, zeroing every other
    /// carrier of that row.
    pub fn write_into(&self, ch: &EffectiveChannel<T>, alloc: &mut PowerAllocation<T>, n: usize) {
        let row = alloc.row_mut(n);
        row.fill(T::zero());
        for (&k, &p) in ch.carrier_ids().iter().zip(&self.powers) {
            row[k] = p;
        }
    }
}

/// Exact water-filling: `p_k = (level - floor_k)^+` with `sum p_k = budget`.
///
/// Floors are sorted ascending (ties by carrier id) and the active set is the
/// longest prefix whose common level still exceeds its last floor.
pub fn waterfill<T: Real>(ch: &EffectiveChannel<T>) -> WaterFilling<T> {
    let floors = ch.effective_noise();
    let mut idx: Vec<usize> = (0..floors.len()).collect();
    idx.sort_by(|&a, &b| {
        floors[a]
            .partial_cmp(&floors[b])
            .unwrap_or(Ordering::Equal)
            .then(ch.carrier_ids()[a].cmp(&ch.carrier_ids()[b]))
    });

    let mut prefix = T::zero();
    let mut level = ch.budget() + floors[idx[0]];
    for (j, &i) in idx.iter().enumerate() {
        let candidate = (ch.budget() + prefix + floors[i]) / T::lit((j + 1) as f64);
        if j > 0 && candidate <= floors[i] {
            break;
        }
        prefix = prefix + floors[i];
        level = candidate;
    }

    let powers = floors.iter().map(|&f| positive_part(level - f)).collect();
    WaterFilling {
        powers,
        water_level: level,
    }
}

fn check_gain<T: Real>(g: T) -> Result<()> {
    if g.is_finite() && g > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveGain(g.as_f64()))
    }
}

/// Admission rule of the ordered greedy phase: carrier `g_new` joins list
/// `gains_in_list` iff `sum 1/g_l > |L|/g_new - budget/noise`.
///
/// When every carrier of the list is active this is exactly the condition
/// that the list's water level lies above the new carrier's floor.
pub fn admission_test<T: Real>(gains_in_list: &[T], g_new: T, budget: T, noise: T) -> Result<bool> {
    check_gain(g_new)?;
    let mut inv_sum = T::zero();
    for &g in gains_in_list {
        check_gain(g)?;
        inv_sum = inv_sum + g.recip();
    }
    let size = T::lit(gains_in_list.len() as f64);
    Ok(inv_sum > size / g_new - budget / noise)
}

/// Interference-free water-filling utility of a list assuming every carrier
/// in it is active: `sum_k log2[(g_k/|L|)(budget/noise + sum_l 1/g_l)]`.
///
/// No activity check is made; the value is wrong (possibly negative) when
/// true water-filling would switch a carrier of the list off.
pub fn closed_form_q<T: Real>(gains_in_list: &[T], budget: T, noise: T) -> Result<T> {
    if gains_in_list.is_empty() {
        return Err(Error::EmptyCarrierSet);
    }
    let mut inv_sum = T::zero();
    for &g in gains_in_list {
        check_gain(g)?;
        inv_sum = inv_sum + g.recip();
    }
    let size = T::lit(gains_in_list.len() as f64);
    let level = budget / noise + inv_sum;
    Ok(gains_in_list.iter().map(|&g| (g / size * level).log2()).sum())
}

/// Interference-free utility actually achieved by water-filling over `gains`.
pub fn waterfill_utility<T: Real>(gains: &[T], budget: T, noise: T) -> Result<T> {
    for &g in gains {
        check_gain(g)?;
    }
    let floors: Vec<T> = gains.iter().map(|&g| noise / g).collect();
    let ch = EffectiveChannel::new(floors, (0..gains.len()).collect(), budget)?;
    let wf = waterfill(&ch);
    Ok(gains
        .iter()
        .zip(&wf.powers)
        .map(|(&g, &p)| (T::one() + g * p / noise).log2())
        .sum())
}
