//! Independent ground truth: exhaustive enumeration, automaton dynamic
//! programming and Monte Carlo. None of these rely on the nonoverlapping
//! hypothesis.

mod automaton;
mod brute;
mod dp;
mod monte_carlo;

pub use automaton::{CountAutomaton, DEFAULT_STATE_BUDGET};
pub use brute::{brute_force_joint_pmf, brute_force_law, DEFAULT_BRUTE_BUDGET};
pub use dp::{automaton_dp_pmf, DpOptions};
pub use monte_carlo::{
    monte_carlo_from_source, monte_carlo_pmf, sample_exact, EmpiricalPmf, MonteCarloConfig,
    RunMetadata, StreamMode,
};
