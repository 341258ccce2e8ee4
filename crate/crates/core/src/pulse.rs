//! Gaussian pulses, frequency-selectivity coefficients and the two-waveform
//! toolbox.

use alloc::format;

use crate::special::erf;
use crate::units::cm_to_rad_per_fs;
use crate::{Error, Exciton, ExcitonBasis, Result, Vec3, C64};

#[cfg(not(feature = "std"))]
use num_traits::Float;

const SQRT_2PI: f64 = 2.506_628_274_631_000_2;

/// Above this |Im| the overlap-factor argument is treated as the
/// well-separated limit.
pub const OVERLAP_IMAG_LIMIT: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Carrier frequency (cm⁻¹).
    pub carrier: f64,
    /// Envelope amplitude width σ (fs), E(t) = exp(-t²/2σ²).
    pub sigma: f64,
    /// Field-strength scale λ.
    pub lambda: f64,
    pub polarization: Vec3,
}

impl PulseSpec {
    pub fn new(carrier: f64, sigma: f64, lambda: f64, polarization: Vec3) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("pulse width must be positive, got {sigma}"),
            });
        }
        if (polarization.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "polarization",
                reason: format!("must be a unit vector (|e| = {})", polarization.norm()),
            });
        }
        Ok(PulseSpec { carrier, sigma, lambda, polarization })
    }
}

/// C = −(λ/i)·√(2πσ²)·exp(−σ²(ω_pg − ω)²/2), purely imaginary.
pub fn coefficient(pulse: &PulseSpec, omega_pg: f64) -> C64 {
    let detuning = cm_to_rad_per_fs(omega_pg - pulse.carrier);
    let sigma = pulse.sigma;
    let magnitude =
        pulse.lambda * SQRT_2PI * sigma * (-0.5 * sigma * sigma * detuning * detuning).exp();
    C64::new(0.0, magnitude)
}

/// Carrier of the two-waveform toolbox.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Carrier {
    Plus,
    Minus,
}

impl Carrier {
    pub const ALL: [Carrier; 2] = [Carrier::Plus, Carrier::Minus];

    pub fn symbol(self) -> char {
        match self {
            Carrier::Plus => '+',
            Carrier::Minus => '-',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Two waveforms centred at ω₊ > ω₋ sharing the width σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseToolbox {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub sigma: f64,
    /// (C′, C″) in units of iλσ√(2π): C_{ω₊}^α = C_{ω₋}^β = C′ and
    /// C_{ω₊}^β = C_{ω₋}^α = C″. When set, the carriers are taken to be
    /// resonant for the overlap factor.
    pub mdc_override: Option<(f64, f64)>,
}

impl PulseToolbox {
    pub fn new(
        omega_plus: f64,
        omega_minus: f64,
        sigma: f64,
        mdc_override: Option<(f64, f64)>,
    ) -> Result<Self> {
        let toolbox = PulseToolbox { omega_plus, omega_minus, sigma, mdc_override };
        toolbox.validate()?;
        Ok(toolbox)
    }

    /// The reference toolbox: ω₊ = 13480, ω₋ = 12130 cm⁻¹, σ = 17 fs, C′/C″ = 20.
    pub fn reference() -> Self {
        PulseToolbox {
            omega_plus: 13480.0,
            omega_minus: 12130.0,
            sigma: 17.0,
            mdc_override: Some((20.0, 1.0)),
        }
    }

    /// Reference carriers with perfect selectivity (C″ = 0).
    pub fn strict_mdc() -> Self {
        PulseToolbox { mdc_override: Some((1.0, 0.0)), ..Self::reference() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_plus > self.omega_minus) {
            return Err(Error::InvalidParameter {
                name: "omega_plus",
                reason: format!(
                    "ω₊ ({}) must exceed ω₋ ({})",
                    self.omega_plus, self.omega_minus
                ),
            });
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("pulse width must be positive, got {}", self.sigma),
            });
        }
        if let Some((main, cross)) = self.mdc_override {
            if !(main.abs() > cross.abs()) {
                return Err(Error::InvalidParameter {
                    name: "mdc_override",
                    reason: format!("need |C′| > |C″| ≥ 0, got ({main}, {cross})"),
                });
            }
        }
        Ok(())
    }

    pub fn carrier(&self, c: Carrier) -> f64 {
        match c {
            Carrier::Plus => self.omega_plus,
            Carrier::Minus => self.omega_minus,
        }
    }

    pub fn pulse(&self, c: Carrier) -> PulseSpec {
        PulseSpec {
            carrier: self.carrier(c),
            sigma: self.sigma,
            lambda: 1.0,
            polarization: Vec3::z(),
        }
    }
}

/// C_{ω}^{x} for ω ∈ {ω₊, ω₋}, x ∈ {α, β}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientTable(pub [[C64; 2]; 2]);

impl CoefficientTable {
    pub fn get(&self, carrier: Carrier, exciton: Exciton) -> C64 {
        self.0[carrier.index()][exciton.index()]
    }
}

pub fn toolbox_coefficients(toolbox: &PulseToolbox, basis: &ExcitonBasis) -> CoefficientTable {
    match toolbox.mdc_override {
        Some((main, cross)) => {
            let unit = SQRT_2PI * toolbox.sigma;
            let c_main = C64::new(0.0, main * unit);
            let c_cross = C64::new(0.0, cross * unit);
            CoefficientTable([[c_main, c_cross], [c_cross, c_main]])
        }
        None => {
            let mut table = [[C64::new(0.0, 0.0); 2]; 2];
            for carrier in Carrier::ALL {
                let pulse = toolbox.pulse(carrier);
                for x in Exciton::ALL {
                    table[carrier.index()][x.index()] = coefficient(&pulse, basis.energy(x));
                }
            }
            CoefficientTable(table)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapFactor {
    pub value: C64,
    /// The argument left the range where the factor is evaluated; the
    /// well-separated limit (1) was returned instead.
    pub saturated: bool,
}

/// ½·[1 + erf(t/2σ + i(ω₃ − ω_rg + ω₄ − ω_sg)σ/2)]: the correction to
/// C_{ω₃}^r C_{ω₄}^s when the third pulse and the local oscillator overlap.
pub fn overlap_factor(
    t: f64,
    sigma: f64,
    omega3: f64,
    omega4: f64,
    omega_rg: f64,
    omega_sg: f64,
) -> OverlapFactor {
    let detuning = cm_to_rad_per_fs(omega3 - omega_rg + omega4 - omega_sg);
    let z = C64::new(t / (2.0 * sigma), detuning * sigma / 2.0);
    if z.im.abs() > OVERLAP_IMAG_LIMIT {
        return OverlapFactor { value: C64::new(1.0, 0.0), saturated: true };
    }
    OverlapFactor { value: (C64::new(1.0, 0.0) + erf(z)) * 0.5, saturated: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{exciton_transform, DimerParams};

    fn pulse(carrier: f64, sigma: f64) -> PulseSpec {
        PulseSpec::new(carrier, sigma, 1.0, Vec3::z()).unwrap()
    }

    #[test]
    fn resonant_coefficient_is_maximal() {
        let p = pulse(12900.0, 40.0);
        let c = coefficient(&p, 12900.0);
        assert_eq!(c.re, 0.0);
        assert!((c.im - 40.0 * (2.0 * core::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn detuned_coefficient_ratio() {
        // exp(-(40 · 100 · 1.88365e-4)² / 2) evaluated independently: 0.752893...
        let p = pulse(12900.0, 40.0);
        let ratio = coefficient(&p, 13000.0).im / coefficient(&p, 12900.0).im;
        assert!((ratio - 0.7529).abs() < 1e-4, "ratio = {ratio}");
        assert_eq!(coefficient(&p, 13000.0), coefficient(&p, 12800.0));
        assert!(coefficient(&p, 30000.0).norm() < 1e-300);
    }

    #[test]
    fn invalid_pulses_rejected() {
        assert!(PulseSpec::new(1.0, 0.0, 1.0, Vec3::z()).is_err());
        assert!(PulseSpec::new(1.0, 10.0, 1.0, Vec3::new(1.0, 1.0, 0.0)).is_err());
        assert!(PulseToolbox::new(12000.0, 13000.0, 17.0, None).is_err());
        assert!(PulseToolbox::new(13000.0, 12000.0, 17.0, Some((1.0, 1.0))).is_err());
        assert!(PulseToolbox::new(13000.0, 12000.0, 17.0, Some((1.0, 0.0))).is_ok());
    }

    #[test]
    fn override_tables() {
        let basis = exciton_transform(&DimerParams::reference());
        let tb = PulseToolbox { mdc_override: Some((20.0, 1.0)), ..PulseToolbox::reference() };
        let unit = SQRT_2PI * tb.sigma;
        let t = toolbox_coefficients(&tb, &basis);
        assert_eq!(t.get(Carrier::Plus, Exciton::Alpha), C64::new(0.0, 20.0 * unit));
        assert_eq!(t.get(Carrier::Minus, Exciton::Beta), C64::new(0.0, 20.0 * unit));
        assert_eq!(t.get(Carrier::Plus, Exciton::Beta), C64::new(0.0, unit));
        assert_eq!(t.get(Carrier::Minus, Exciton::Alpha), C64::new(0.0, unit));

        let strict = toolbox_coefficients(&PulseToolbox::strict_mdc(), &basis);
        assert_eq!(strict.get(Carrier::Plus, Exciton::Beta), C64::new(0.0, 0.0));
        assert_eq!(strict.get(Carrier::Plus, Exciton::Alpha), C64::new(0.0, unit));
    }

    #[test]
    fn symmetric_detuning_gives_equal_main_coefficients() {
        let basis = exciton_transform(&DimerParams::reference());
        let offset = 150.0;
        let tb = PulseToolbox {
            omega_plus: basis.omega_alpha + offset,
            omega_minus: basis.omega_beta - offset,
            sigma: 17.0,
            mdc_override: None,
        };
        let t = toolbox_coefficients(&tb, &basis);
        assert_eq!(t.get(Carrier::Plus, Exciton::Alpha), t.get(Carrier::Minus, Exciton::Beta));
    }

    #[test]
    fn overlap_limits() {
        let sigma = 17.0;
        let half = overlap_factor(0.0, sigma, 13000.0, 12800.0, 13000.0, 12800.0);
        assert!((half.value - C64::new(0.5, 0.0)).norm() < 1e-15);
        let separated = overlap_factor(10.0 * sigma, sigma, 13000.0, 12800.0, 13000.0, 12800.0);
        assert!((separated.value - C64::new(1.0, 0.0)).norm() < 1e-12);
        let before = overlap_factor(-10.0 * sigma, sigma, 13000.0, 12800.0, 13000.0, 12800.0);
        assert!(before.value.norm() < 1e-12);
    }

    #[test]
    fn overlap_monotone_when_resonant() {
        let sigma = 17.0;
        let mut last = -1.0;
        for k in 0..=100 {
            let t = -5.0 * sigma + 0.1 * sigma * k as f64;
            let f = overlap_factor(t, sigma, 13000.0, 12800.0, 13000.0, 12800.0).value;
            assert!(f.im.abs() < 1e-15);
            assert!(f.re >= last);
            last = f.re;
        }
    }

    #[test]
    fn far_detuned_overlap_saturates() {
        let f = overlap_factor(0.0, 40.0, 20000.0, 20000.0, 12000.0, 12000.0);
        assert!(f.saturated);
        assert_eq!(f.value, C64::new(1.0, 0.0));
    }
}
