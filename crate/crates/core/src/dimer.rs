//! Coupled heterodimer: site Hamiltonian, exciton basis and diagonal
//! disorder.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, GeometryHint, Result, Vec3};

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Single-exciton eigenstate label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exciton {
    /// Upper exciton (ω_α = ω + Δ sec 2θ).
    Alpha,
    /// Lower exciton.
    Beta,
}

impl Exciton {
    pub const ALL: [Exciton; 2] = [Exciton::Alpha, Exciton::Beta];

    pub fn other(self) -> Exciton {
        match self {
            Exciton::Alpha => Exciton::Beta,
            Exciton::Beta => Exciton::Alpha,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Lab-frame description of the dimer. Energies in cm⁻¹, dipoles in
/// arbitrary (shared) units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub coupling: f64,
    pub mu_a: Vec3,
    pub mu_b: Vec3,
}

/// Site dipoles parameterized by |μ_A|, the ratio d_B/d_A and the angle φ
/// between them. μ_A lies along z and μ_B in the xz-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleGeometry {
    pub d_a: f64,
    pub ratio: f64,
    pub angle: f64,
}

impl Default for DipoleGeometry {
    fn default() -> Self {
        DipoleGeometry { d_a: 1.0, ratio: 2.0, angle: 0.3 }
    }
}

impl DipoleGeometry {
    pub fn vectors(&self) -> (Vec3, Vec3) {
        let mu_a = Vec3::new(0.0, 0.0, self.d_a);
        let d_b = self.d_a * self.ratio;
        let mu_b = Vec3::new(d_b * self.angle.sin(), 0.0, d_b * self.angle.cos());
        (mu_a, mu_b)
    }
}

/// Conditions under which the tomography is ill-posed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryWarning {
    EqualSiteEnergies,
    ZeroCoupling,
    Homodimer,
}

impl DimerParams {
    pub fn new(omega_a: f64, omega_b: f64, coupling: f64, mu_a: Vec3, mu_b: Vec3) -> Result<Self> {
        let params = DimerParams { omega_a, omega_b, coupling, mu_a, mu_b };
        params.validate()?;
        Ok(params)
    }

    pub fn from_geometry(
        omega_a: f64,
        omega_b: f64,
        coupling: f64,
        geometry: DipoleGeometry,
    ) -> Result<Self> {
        let (mu_a, mu_b) = geometry.vectors();
        Self::new(omega_a, omega_b, coupling, mu_a, mu_b)
    }

    /// Reference dimer: ω_A = 12881, ω_B = 12719,
    /// J = 120 cm⁻¹, d_B/d_A = 2, φ = 0.3.
    pub fn reference() -> Self {
        Self::from_geometry(12881.0, 12719.0, 120.0, DipoleGeometry::default())
            .expect("reference dimer is valid")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("coupling", self.coupling),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("{value} is not finite") });
            }
        }
        for (name, mu) in [("mu_a", &self.mu_a), ("mu_b", &self.mu_b)] {
            let norm = mu.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("transition dipole must be nonzero and finite (|μ| = {norm})"),
                });
            }
        }
        Ok(())
    }

    pub fn dipole_ratio(&self) -> f64 {
        self.mu_b.norm() / self.mu_a.norm()
    }

    /// Same mean energy, exciton splitting and dipoles, but site energies and
    /// coupling re-chosen so that the mixing angle equals `theta`.
    pub fn with_mixing_angle(&self, theta: f64) -> DimerParams {
        let mean = 0.5 * (self.omega_a + self.omega_b);
        let half_gap = (0.5 * (self.omega_a - self.omega_b)).hypot(self.coupling);
        let delta = half_gap * (2.0 * theta).cos();
        DimerParams {
            omega_a: mean + delta,
            omega_b: mean - delta,
            coupling: half_gap * (2.0 * theta).sin(),
            ..*self
        }
    }

    pub fn geometry_warnings(&self) -> Vec<GeometryWarning> {
        let mut warnings = Vec::new();
        let scale = self.omega_a.abs().max(self.omega_b.abs()).max(1.0);
        if (self.omega_a - self.omega_b).abs() <= 1e-12 * scale {
            warnings.push(GeometryWarning::EqualSiteEnergies);
        }
        if self.coupling == 0.0 {
            warnings.push(GeometryWarning::ZeroCoupling);
        }
        let hint = exciton_transform(self).geometry_hint();
        if hint.is_homodimer() {
            warnings.push(GeometryWarning::Homodimer);
        }
        warnings
    }
}

/// Exciton-basis quantities derived from [`DimerParams`]. The ground state
/// sits at zero energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitonBasis {
    pub omega_avg: f64,
    pub delta: f64,
    pub theta: f64,
    pub omega_alpha: f64,
    pub omega_beta: f64,
    pub omega_f: f64,
    pub mu_ag: Vec3,
    pub mu_bg: Vec3,
    pub mu_fa: Vec3,
    pub mu_fb: Vec3,
    /// Site dipoles the basis was built from (kept for diagnostics).
    pub site_dipoles: (Vec3, Vec3),
}

impl ExcitonBasis {
    /// ω_x − ω_g.
    pub fn energy(&self, x: Exciton) -> f64 {
        match x {
            Exciton::Alpha => self.omega_alpha,
            Exciton::Beta => self.omega_beta,
        }
    }

    /// ω_f − ω_x.
    pub fn biexciton_gap(&self, x: Exciton) -> f64 {
        self.omega_f - self.energy(x)
    }

    /// ω_αβ.
    pub fn splitting(&self) -> f64 {
        self.omega_alpha - self.omega_beta
    }

    /// μ_xg.
    pub fn ground_dipole(&self, x: Exciton) -> Vec3 {
        match x {
            Exciton::Alpha => self.mu_ag,
            Exciton::Beta => self.mu_bg,
        }
    }

    /// μ_fx.
    pub fn biexciton_dipole(&self, x: Exciton) -> Vec3 {
        match x {
            Exciton::Alpha => self.mu_fa,
            Exciton::Beta => self.mu_fb,
        }
    }

    pub fn geometry_hint(&self) -> GeometryHint {
        let (mu_a, mu_b) = self.site_dipoles;
        GeometryHint { theta: self.theta, dipole_ratio: mu_b.norm() / mu_a.norm() }
    }
}

/// Diagonalizes the single-exciton block and rotates the transition dipoles.
///
/// θ = ½·atan2(J, Δ); the exciton energies are ω ± √(Δ² + J²), which equals
/// ω ± Δ·sec 2θ and stays finite at Δ = 0.
pub fn exciton_transform(params: &DimerParams) -> ExcitonBasis {
    let omega_avg = 0.5 * (params.omega_a + params.omega_b);
    let delta = 0.5 * (params.omega_a - params.omega_b);
    let theta = 0.5 * params.coupling.atan2(delta);
    let half_gap = delta.hypot(params.coupling);
    let (s, c) = theta.sin_cos();
    let (mu_a, mu_b) = (params.mu_a, params.mu_b);
    ExcitonBasis {
        omega_avg,
        delta,
        theta,
        omega_alpha: omega_avg + half_gap,
        omega_beta: omega_avg - half_gap,
        omega_f: params.omega_a + params.omega_b,
        mu_ag: mu_a * c + mu_b * s,
        mu_bg: mu_b * c - mu_a * s,
        mu_fa: mu_a * s + mu_b * c,
        mu_fb: mu_a * c - mu_b * s,
        site_dipoles: (mu_a, mu_b),
    }
}

/// Draws `n` members with independent Gaussian site-energy disorder. Coupling
/// and dipoles are shared by all members. Deterministic in `seed`.
pub fn sample_disordered_ensemble(
    params: &DimerParams,
    sigma_inh: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<DimerParams>> {
    if n == 0 {
        return Err(Error::EmptyEnsemble);
    }
    if !(sigma_inh >= 0.0 && sigma_inh.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma_inh",
            reason: format!("must be finite and non-negative, got {sigma_inh}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..n)
        .map(|_| {
            let za: f64 = StandardNormal.sample(&mut rng);
            let zb: f64 = StandardNormal.sample(&mut rng);
            DimerParams {
                omega_a: params.omega_a + sigma_inh * za,
                omega_b: params.omega_b + sigma_inh * zb,
                ..*params
            }
        })
        .collect();
    Ok(members)
}
