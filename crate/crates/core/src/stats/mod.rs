//! Goodness of fit against exact laws, and power of the count-based tests.

mod audit;
mod ks;
mod normal;
mod power;

pub use audit::{rng_audit, AuditConfig, AuditReport, AuditRow};
pub use ks::{ks_pvalue, ks_statistic, ks_test, EmpiricalCdf, KsResult};
pub use normal::normal_cdf;
pub use power::{
    blockwise_power, power_curve, sliding_power, PowerCurve, PowerPoint, PowerSpec, DEFAULT_SIGMA,
};
