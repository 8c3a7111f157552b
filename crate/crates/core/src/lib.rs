//! Fair coordinated iterative water-filling (FEAT) for the `K`-carrier,
//! `N`-user Gaussian multiple access channel.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`, which is what the
//! simulator uses.
//!
//! ```
//! use feat_core::{run_feat, utility_noise, FeatParams, Instance64};
//!
//! let inst = Instance64::from_rows(&[vec![4.0, 1.0]], 1.0, vec![1.0]).unwrap();
//! let out = run_feat(&inst, &FeatParams::default());
//! assert_eq!(out.assignment.lists, vec![vec![0, 1]]);
//! let u = utility_noise(&inst, &out.powers, 0).unwrap();
//! assert!((u - 5.0625f64.log2()).abs() < 1e-12);
//! ```

pub mod baselines;
pub mod error;
pub mod feat;
pub mod metrics;
pub mod model;
pub mod scalar;
pub mod waterfill;

pub use baselines::{
    best_response, nash_iwf, nash_iwf_observed, optimal_utilities, optimal_utilities_with_order, spectrum_pooling,
    BestResponseStep, NashConfig, NashOutcome, PoolingOutcome,
};
pub use error::{Error, Result};
pub use feat::{format_trace, phase_a, phase_b, phase_c, run_feat, FeatOutput, FeatParams, FeatState, RoundTrace};
pub use metrics::{
    deviation_ratios, energy_efficiency, prop2_bounds, report_feat, report_profile, report_sic, robustness_ratio,
    served_and_coordination, Coordination, EfficiencyConfig, MetricsReport, Prop2Bounds, RobustnessReport,
};
pub use model::{
    generate_instance, sum_capacity, utilities_noise, utility_noise, utility_sic, CarrierAssignment, Instance,
    InstanceGenConfig, Matrix, PowerAllocation,
};
pub use scalar::Real;
pub use waterfill::{admission_test, closed_form_q, waterfill, EffectiveChannel, WaterFilling};

pub type Instance64 = Instance<f64>;
pub type Instance32 = Instance<f32>;
pub type PowerAllocation64 = PowerAllocation<f64>;
pub type PowerAllocation32 = PowerAllocation<f32>;
pub type FeatParams64 = FeatParams<f64>;
pub type FeatOutput64 = FeatOutput<f64>;
pub type NashConfig64 = NashConfig<f64>;
pub type MetricsReport64 = MetricsReport<f64>;
pub type EfficiencyConfig64 = EfficiencyConfig<f64>;
