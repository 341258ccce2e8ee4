//! Unit conversions. User-facing quantities are in cm⁻¹, fs and K; the
//! propagators work in angular frequency (rad/fs).

/// 2πc expressed in rad·fs⁻¹ per cm⁻¹.
pub const CM_TO_RAD_PER_FS: f64 = 2.0 * core::f64::consts::PI * 2.997_924_58e10 * 1e-15;

/// Boltzmann constant in cm⁻¹/K.
pub const BOLTZMANN_CM_PER_K: f64 = 0.69504;

/// Converts a wavenumber (cm⁻¹) to angular frequency (rad/fs).
#[inline]
pub fn cm_to_rad_per_fs(wavenumber: f64) -> f64 {
    wavenumber * CM_TO_RAD_PER_FS
}
