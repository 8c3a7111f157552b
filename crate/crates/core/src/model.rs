//! Channel instances, power profiles and the rate formulas evaluated on them.
//!
//! All user and carrier indices are zero-based. Rates are spectral
//! efficiencies in bits/s/Hz (base-2 logarithms).

use std::ops::{Index, IndexMut};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major matrix indexed by `(user, carrier)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInstance("ragged gain rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Applies `f` to every entry, keeping the shape.
    pub fn map<F: Fn(T) -> T>(&self, f: F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(c < self.cols, "column {c} out of range");
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(c < self.cols, "column {c} out of range");
        &mut self.data[r * self.cols + c]
    }
}

/// One channel realization: `N` users, `K` carriers, linear power gains
/// `g[n][k] = |h|^2`, receiver noise power and per-user power budgets.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    gains: Matrix<T>,
    noise_power: T,
    budgets: Vec<T>,
}

impl<T: Real> Instance<T> {
    pub fn new(gains: Matrix<T>, noise_power: T, budgets: Vec<T>) -> Result<Self> {
        if gains.rows() == 0 || gains.cols() == 0 {
            return Err(Error::InvalidInstance("need at least one user and one carrier".into()));
        }
        if budgets.len() != gains.rows() {
            return Err(Error::InvalidInstance(format!(
                "{} budgets for {} users",
                budgets.len(),
                gains.rows()
            )));
        }
        if !(noise_power.is_finite() && noise_power > T::zero()) {
            return Err(Error::InvalidInstance(format!(
                "noise power must be positive, got {noise_power}"
            )));
        }
        if let Some(b) = budgets.iter().find(|b| !(b.is_finite() && **b > T::zero())) {
            return Err(Error::InvalidInstance(format!(
                "power budgets must be positive, got {b}"
            )));
        }
        for n in 0..gains.rows() {
            let row = gains.row(n);
            if row.iter().any(|g| !g.is_finite() || *g < T::zero()) {
                return Err(Error::InvalidInstance(format!(
                    "user {n} has a negative or non-finite gain"
                )));
            }
            if !row.iter().any(|g| *g > T::zero()) {
                return Err(Error::InvalidInstance(format!("user {n} has no positive gain")));
            }
        }
        Ok(Self {
            gains,
            noise_power,
            budgets,
        })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(gains: &[Vec<T>], noise_power: T, budgets: Vec<T>) -> Result<Self> {
        Self::new(Matrix::from_rows(gains)?, noise_power, budgets)
    }

    pub fn n_users(&self) -> usize {
        self.gains.rows()
    }

    pub fn n_carriers(&self) -> usize {
        self.gains.cols()
    }

    pub fn gains(&self) -> &Matrix<T> {
        &self.gains
    }

    pub fn gain(&self, user: usize, carrier: usize) -> T {
        self.gains[(user, carrier)]
    }

    pub fn noise_power(&self) -> T {
        self.noise_power
    }

    pub fn budgets(&self) -> &[T] {
        &self.budgets
    }

    pub fn budget(&self, user: usize) -> T {
        self.budgets[user]
    }

    /// Returns a copy with user `n`'s gain row multiplied by `factor`.
    pub fn with_scaled_user(&self, n: usize, factor: T) -> Result<Self> {
        let mut gains = self.gains.clone();
        for g in gains.row_mut(n) {
            *g = *g * factor;
        }
        Self::new(gains, self.noise_power, self.budgets.clone())
    }

    pub(crate) fn check_user(&self, n: usize) -> Result<()> {
        if n < self.n_users() {
            Ok(())
        } else {
            Err(Error::UserOutOfRange {
                index: n,
                n_users: self.n_users(),
            })
        }
    }
}

/// `N x K` transmit powers `p[n][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation<T> {
    powers: Matrix<T>,
}

impl<T: Real> PowerAllocation<T> {
    pub fn zeros(n_users: usize, n_carriers: usize) -> Self {
        Self {
            powers: Matrix::zeros(n_users, n_carriers),
        }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let powers = Matrix::from_rows(rows)?;
        if powers.iter().any(|p| !(p.is_finite() && *p >= T::zero())) {
            return Err(Error::InvalidInstance("powers must be finite and >= 0".into()));
        }
        Ok(Self { powers })
    }

    pub fn n_users(&self) -> usize {
        self.powers.rows()
    }

    pub fn n_carriers(&self) -> usize {
        self.powers.cols()
    }

    pub fn power(&self, user: usize, carrier: usize) -> T {
        self.powers[(user, carrier)]
    }

    pub fn row(&self, user: usize) -> &[T] {
        self.powers.row(user)
    }

    pub fn row_mut(&mut self, user: usize) -> &mut [T] {
        self.powers.row_mut(user)
    }

    pub fn set(&mut self, user: usize, carrier: usize, p: T) {
        self.powers[(user, carrier)] = p;
    }

    pub fn total_power(&self, user: usize) -> T {
        self.row(user).iter().copied().sum()
    }

    /// Carriers on which `user` transmits with strictly positive power.
    pub fn active_carriers(&self, user: usize) -> Vec<usize> {
        self.row(user)
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > T::zero())
            .map(|(k, _)| k)
            .collect()
    }

    pub(crate) fn check_shape(&self, inst: &Instance<T>) -> Result<()> {
        if self.n_users() == inst.n_users() && self.n_carriers() == inst.n_carriers() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected_users: inst.n_users(),
                expected_carriers: inst.n_carriers(),
                users: self.n_users(),
                carriers: self.n_carriers(),
            })
        }
    }
}

/// Per-user carrier lists plus the set of carriers nobody transmits on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierAssignment {
    pub lists: Vec<Vec<usize>>,
    pub unassigned: Vec<usize>,
}

impl CarrierAssignment {
    pub fn new(lists: Vec<Vec<usize>>, n_carriers: usize) -> Self {
        let mut used = vec![false; n_carriers];
        for &k in lists.iter().flatten() {
            used[k] = true;
        }
        let unassigned = (0..n_carriers).filter(|&k| !used[k]).collect();
        Self { lists, unassigned }
    }

    /// The carriers each user actually transmits on under `alloc`.
    pub fn from_allocation<T: Real>(alloc: &PowerAllocation<T>) -> Self {
        let lists = (0..alloc.n_users()).map(|n| alloc.active_carriers(n)).collect();
        Self::new(lists, alloc.n_carriers())
    }

    pub fn n_users(&self) -> usize {
        self.lists.len()
    }

    pub fn is_served(&self, user: usize) -> bool {
        !self.lists[user].is_empty()
    }

    /// True when no carrier appears in two users' lists.
    pub fn is_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.lists.iter().flatten().all(|k| seen.insert(*k))
    }
}

/// Parameters of a random Rayleigh-fading instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceGenConfig {
    pub n_users: usize,
    pub n_carriers: usize,
    pub snr_db: f64,
    pub seed: u64,
}

/// Draws i.i.d. unit-mean exponential gains (Rayleigh `|h|^2`), unit noise
/// and equal budgets `10^(snr_db/10)`. Same config, same instance.
pub fn generate_instance<T: Real>(cfg: &InstanceGenConfig) -> Result<Instance<T>> {
    if cfg.n_users == 0 || cfg.n_carriers == 0 {
        return Err(Error::InvalidConfig("n_users and n_carriers must be at least 1".into()));
    }
    if !cfg.snr_db.is_finite() {
        return Err(Error::InvalidConfig("snr_db must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut gains = Matrix::zeros(cfg.n_users, cfg.n_carriers);
    for n in 0..cfg.n_users {
        for g in gains.row_mut(n) {
            let draw: f64 = Exp1.sample(&mut rng);
            *g = T::lit(draw);
        }
    }
    let budget = T::lit(10f64.powf(cfg.snr_db / 10.0));
    Instance::new(gains, T::one(), vec![budget; cfg.n_users])
}

/// Received power from every user except `n` on `carrier`.
pub fn interference<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>, n: usize, carrier: usize) -> T {
    (0..inst.n_users())
        .filter(|&m| m != n)
        .map(|m| inst.gain(m, carrier) * alloc.power(m, carrier))
        .sum()
}

fn link_rate<T: Real>(gain: T, power: T, noise_plus_interference: T) -> T {
    (T::one() + gain * power / noise_plus_interference).log2()
}

/// Spectral efficiency of user `n` when the receiver treats every other
/// user as noise.
pub fn utility_noise<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>, n: usize) -> Result<T> {
    alloc.check_shape(inst)?;
    inst.check_user(n)?;
    Ok((0..inst.n_carriers())
        .map(|k| {
            let denom = inst.noise_power() + interference(inst, alloc, n, k);
            link_rate(inst.gain(n, k), alloc.power(n, k), denom)
        })
        .sum())
}

/// Utilities of all users with interference treated as noise.
pub fn utilities_noise<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>) -> Result<Vec<T>> {
    (0..inst.n_users()).map(|n| utility_noise(inst, alloc, n)).collect()
}

fn check_order(order: &[usize], n_users: usize) -> Result<()> {
    let mut seen = vec![false; n_users];
    if order.len() != n_users {
        return Err(Error::InvalidOrder(n_users));
    }
    for &m in order {
        if m >= n_users || std::mem::replace(&mut seen[m], true) {
            return Err(Error::InvalidOrder(n_users));
        }
    }
    Ok(())
}

/// Spectral efficiency of user `n` under successive interference
/// cancellation: only users that precede `n` in `order` interfere.
pub fn utility_sic<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>, n: usize, order: &[usize]) -> Result<T> {
    alloc.check_shape(inst)?;
    inst.check_user(n)?;
    check_order(order, inst.n_users())?;
    let predecessors: Vec<usize> = order.iter().copied().take_while(|&m| m != n).collect();
    Ok((0..inst.n_carriers())
        .map(|k| {
            let interf: T = predecessors.iter().map(|&m| inst.gain(m, k) * alloc.power(m, k)).sum();
            link_rate(inst.gain(n, k), alloc.power(n, k), inst.noise_power() + interf)
        })
        .sum())
}

/// Sum capacity `sum_k log2(1 + sum_n g p / sigma^2)` of the profile.
pub fn sum_capacity<T: Real>(inst: &Instance<T>, alloc: &PowerAllocation<T>) -> Result<T> {
    alloc.check_shape(inst)?;
    Ok((0..inst.n_carriers())
        .map(|k| {
            let received: T = (0..inst.n_users()).map(|n| inst.gain(n, k) * alloc.power(n, k)).sum();
            (T::one() + received / inst.noise_power()).log2()
        })
        .sum())
}
