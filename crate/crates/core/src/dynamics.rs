//! Ground-truth dynamics: a secular Redfield model written directly in terms
//! of phenomenological rates, and the optical-coherence propagator.

use alloc::format;

use crate::process::{Pair, ProcessMatrix};
use crate::units::{cm_to_rad_per_fs, BOLTZMANN_CM_PER_K};
use crate::{Error, ExcitonBasis, Result, C64};

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Rates in fs⁻¹, temperature in K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Downhill population transfer α → β.
    pub k_down: f64,
    pub temperature: f64,
    /// Pure dephasing of the αβ coherence.
    pub gamma_pd: f64,
    /// Decay of each single-exciton population into the ground state.
    pub k_leak: f64,
    /// Dephasing rate of the optical coherences.
    pub gamma_opt: f64,
}

impl Default for BathParams {
    fn default() -> Self {
        BathParams {
            k_down: 1.0 / 500.0,
            temperature: 273.0,
            gamma_pd: 1.0 / 400.0,
            k_leak: 0.0,
            gamma_opt: 1.0 / 150.0,
        }
    }
}

impl BathParams {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("k_down", self.k_down),
            ("gamma_pd", self.gamma_pd),
            ("k_leak", self.k_leak),
            ("gamma_opt", self.gamma_opt),
        ];
        for (name, value) in rates {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("rate must be finite and non-negative, got {value}"),
                });
            }
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: format!("must be positive, got {}", self.temperature),
            });
        }
        Ok(())
    }

    /// Uphill rate β → α for the given splitting (cm⁻¹).
    pub fn k_up(&self, omega_ab: f64) -> f64 {
        redfield_uphill_rate(self.k_down, omega_ab, self.temperature)
    }

    /// Total decay rate of the αβ coherence for the given splitting.
    pub fn coherence_decay(&self, omega_ab: f64) -> f64 {
        0.5 * (self.k_down + self.k_up(omega_ab) + 2.0 * self.k_leak) + self.gamma_pd
    }
}

/// k_up = k_down·exp(−ω_αβ / k_B T).
pub fn redfield_uphill_rate(k_down: f64, omega_ab: f64, temperature: f64) -> f64 {
    k_down * (-omega_ab / (BOLTZMANN_CM_PER_K * temperature)).exp()
}

/// Θ(τ)·exp((−iω_ij − Γ_ij)τ) with Θ(0) = 1.
pub fn coherence_propagator(omega_ij: f64, gamma_ij: f64, tau: f64) -> C64 {
    if tau < 0.0 {
        return C64::new(0.0, 0.0);
    }
    (C64::new(-gamma_ij, -cm_to_rad_per_fs(omega_ij)) * tau).exp()
}

/// sinh(x)/x, accurate near 0.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// exp(K·t) for K = [[−k_d − k_l, k_u], [k_d, −k_u − k_l]] in closed form.
fn population_propagator(k_down: f64, k_up: f64, k_leak: f64, t: f64) -> [[f64; 2]; 2] {
    let m = -0.5 * (k_down + k_up) - k_leak;
    let a = 0.5 * (k_up - k_down);
    let s = (a * a + k_up * k_down).sqrt();
    let envelope = (m * t).exp();
    let c = (s * t).cosh();
    let sh = t * sinhc(s * t);
    [
        [envelope * (c + sh * a), envelope * sh * k_up],
        [envelope * sh * k_down, envelope * (c - sh * a)],
    ]
}

/// χ(T) of the secular model: a population block on {gg, αα, ββ}, decoupled
/// αβ and βα coherences, and the ground state held fixed.
pub fn true_process_matrix(basis: &ExcitonBasis, bath: &BathParams, t: f64) -> Result<ProcessMatrix> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeWaitingTime(t));
    }
    bath.validate()?;
    let omega_ab = basis.splitting();
    let k_up = bath.k_up(omega_ab);
    let pop = population_propagator(bath.k_down, k_up, bath.k_leak, t);
    let coherence = coherence_propagator(omega_ab, bath.coherence_decay(omega_ab), t);

    let mut chi = ProcessMatrix::zero(t);
    let real = |x: f64| C64::new(x, 0.0);
    let populations = [Pair::AA, Pair::BB];
    for (i, row) in populations.iter().enumerate() {
        for (j, col) in populations.iter().enumerate() {
            chi.set(*row, *col, real(pop[i][j]));
        }
    }
    for (j, col) in populations.iter().enumerate() {
        chi.set(Pair::GG, *col, real(1.0 - pop[0][j] - pop[1][j]));
    }
    chi.set(Pair::AB, Pair::AB, coherence);
    chi.set(Pair::BA, Pair::BA, coherence.conj());
    Ok(chi)
}
