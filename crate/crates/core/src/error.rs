use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("ensemble must contain at least one member")]
    EmptyEnsemble,

    #[error("waiting time {0} fs is negative")]
    NegativeWaitingTime(f64),

    #[error(
        "waiting time {waiting_time} fs is shorter than 3σ = {minimum} fs; \
         the initial states are not yet prepared"
    )]
    PreparationIncomplete { waiting_time: f64, minimum: f64 },

    #[error(
        "design matrix is rank deficient (rank {rank} of {expected}, {} unidentifiable \
         direction(s)); {hint}",
        null_space.len()
    )]
    RankDeficient {
        rank: usize,
        expected: usize,
        /// Unit vectors in parameter space spanning the unidentifiable directions.
        null_space: Vec<Vec<f64>>,
        hint: GeometryHint,
    },

    #[error("reconstruction did not converge after {iterations} iterations (final gap {gap:e})")]
    NotConverged { iterations: usize, gap: f64 },

    #[error("reference process matrix has zero norm")]
    ZeroReference,
}

/// Structural parameters reported alongside conditioning failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryHint {
    pub theta: f64,
    pub dipole_ratio: f64,
}

impl GeometryHint {
    pub fn is_homodimer(&self) -> bool {
        (self.dipole_ratio - 1.0).abs() < 1e-6
            && ((2.0 * self.theta).sin().abs() - 1.0).abs() < 1e-6
    }

    pub fn is_uncoupled(&self) -> bool {
        (2.0 * self.theta).sin().abs() < 1e-6
    }
}

impl fmt::Display for GeometryHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ = {:.4} rad, d_B/d_A = {:.4}", self.theta, self.dipole_ratio)?;
        if self.is_homodimer() {
            write!(f, " (homodimer: equal dipoles at maximal mixing)")
        } else if self.is_uncoupled() {
            write!(f, " (vanishing coupling: mixing angle at 0 or π/2)")
        } else {
            Ok(())
        }
    }
}
